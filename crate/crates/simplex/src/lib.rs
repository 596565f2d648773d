//! Dense-tableau primal simplex for problems of the form
//!
//! ```text
//! maximize  c·x   subject to  A x <= b,  b >= 0
//! ```
//!
//! where each variable is either non-negative or free. The slack basis is
//! feasible because `b >= 0`, so no phase one is needed. Entering and leaving
//! variables follow Bland's smallest-index rule, which rules out cycling on
//! degenerate vertices. The arithmetic is generic: `f64` with a pivot
//! tolerance, or `BigRational` for exact answers on small instances.

mod scalar;

pub use num_rational::BigRational;
pub use scalar::{Scalar, F64_TOL};

use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum LpError {
    #[error("row {row} has {got} coefficients, expected {expected}")]
    DimensionMismatch { row: usize, got: usize, expected: usize },
    #[error("right-hand side of row {0} is negative; the slack basis would be infeasible")]
    NegativeRhs(usize),
    #[error("objective is unbounded along column {0}")]
    Unbounded(usize),
    #[error("iteration limit {0} reached")]
    IterationLimit(usize),
    #[error("coefficient {0} is not finite")]
    NonFinite(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum VarKind {
    NonNegative,
    Free,
}

/// `maximize objective·x  s.t.  rows·x <= rhs`.
#[derive(Debug, Clone)]
pub struct Problem<S> {
    pub objective: Vec<S>,
    pub rows: Vec<Vec<S>>,
    pub rhs: Vec<S>,
    pub kinds: Vec<VarKind>,
}

#[derive(Debug, Clone)]
pub struct Solution<S> {
    pub value: S,
    pub x: Vec<S>,
    pub iterations: usize,
    /// Number of structural (non-slack) columns in the final basis.
    pub basis_size: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct Options {
    pub max_iterations: usize,
}

impl Default for Options {
    fn default() -> Self {
        Options { max_iterations: 200_000 }
    }
}

impl<S: Scalar> Problem<S> {
    pub fn new(objective: Vec<S>, kinds: Vec<VarKind>) -> Self {
        assert_eq!(objective.len(), kinds.len());
        Problem { objective, rows: Vec::new(), rhs: Vec::new(), kinds }
    }

    pub fn push_row(&mut self, coeffs: Vec<S>, rhs: S) {
        self.rows.push(coeffs);
        self.rhs.push(rhs);
    }

    pub fn n_vars(&self) -> usize {
        self.objective.len()
    }

    fn validate(&self) -> Result<(), LpError> {
        let n = self.n_vars();
        for (i, row) in self.rows.iter().enumerate() {
            if row.len() != n {
                return Err(LpError::DimensionMismatch { row: i, got: row.len(), expected: n });
            }
        }
        for (i, b) in self.rhs.iter().enumerate() {
            if b.is_negative_tol() {
                return Err(LpError::NegativeRhs(i));
            }
        }
        Ok(())
    }
}

/// Column layout after splitting every free variable into `x⁺ − x⁻`.
struct Layout {
    /// For original variable j: (positive column, optional negative column).
    cols: Vec<(usize, Option<usize>)>,
    n_struct: usize,
}

impl Layout {
    fn new(kinds: &[VarKind]) -> Self {
        let mut cols = Vec::with_capacity(kinds.len());
        let mut next = 0;
        for k in kinds {
            match k {
                VarKind::NonNegative => {
                    cols.push((next, None));
                    next += 1;
                }
                VarKind::Free => {
                    cols.push((next, Some(next + 1)));
                    next += 2;
                }
            }
        }
        Layout { cols, n_struct: next }
    }
}

struct Tableau<S> {
    m: usize,
    width: usize, // structural + slack columns + rhs
    data: Vec<S>, // (m + 1) rows, last row is the objective row
    basis: Vec<usize>,
}

impl<S: Scalar> Tableau<S> {
    fn at(&self, r: usize, c: usize) -> &S {
        &self.data[r * self.width + c]
    }

    fn pivot(&mut self, pr: usize, pc: usize) {
        let w = self.width;
        let inv = S::one().div(self.at(pr, pc));
        for c in 0..w {
            let v = self.data[pr * w + c].mul(&inv);
            self.data[pr * w + c] = v;
        }
        let prow: Vec<S> = self.data[pr * w..(pr + 1) * w].to_vec();
        for r in 0..=self.m {
            if r == pr {
                continue;
            }
            let k = self.data[r * w + pc].clone();
            if k.is_zero_tol() && S::EXACT {
                continue;
            }
            if !S::EXACT && k.to_f64() == 0.0 {
                continue;
            }
            let row = &mut self.data[r * w..(r + 1) * w];
            for (dst, src) in row.iter_mut().zip(prow.iter()) {
                dst.sub_scaled(&k, src);
            }
            // Keep the pivot column exactly clean in floating mode.
            row[pc] = S::zero();
        }
        self.basis[pr] = pc;
    }
}

/// Solve with Bland's rule. Returns the optimum or the reason none exists.
pub fn maximize<S: Scalar>(problem: &Problem<S>, opts: Options) -> Result<Solution<S>, LpError> {
    problem.validate()?;
    let layout = Layout::new(&problem.kinds);
    let m = problem.rows.len();
    let ns = layout.n_struct;
    let width = ns + m + 1;
    let mut data = vec![S::zero(); (m + 1) * width];

    for (i, row) in problem.rows.iter().enumerate() {
        for (j, a) in row.iter().enumerate() {
            let (p, neg) = layout.cols[j];
            data[i * width + p] = a.clone();
            if let Some(q) = neg {
                data[i * width + q] = a.neg();
            }
        }
        data[i * width + ns + i] = S::one();
        data[i * width + width - 1] = problem.rhs[i].clone();
    }
    for (j, c) in problem.objective.iter().enumerate() {
        let (p, neg) = layout.cols[j];
        data[m * width + p] = c.neg();
        if let Some(q) = neg {
            data[m * width + q] = c.clone();
        }
    }

    let mut t = Tableau { m, width, data, basis: (ns..ns + m).collect() };
    let mut iterations = 0;
    loop {
        // Bland: lowest-index column with a negative reduced cost enters.
        let entering = (0..ns + m).find(|&c| t.at(m, c).is_negative_tol());
        let Some(pc) = entering else { break };
        if iterations >= opts.max_iterations {
            return Err(LpError::IterationLimit(iterations));
        }
        let mut best: Option<(usize, S)> = None;
        for r in 0..m {
            let a = t.at(r, pc);
            if !a.is_positive_tol() {
                continue;
            }
            let ratio = t.at(r, width - 1).div(a);
            best = match best {
                None => Some((r, ratio)),
                Some((br, bratio)) => {
                    if ratio.less_than(&bratio)
                        || (!bratio.less_than(&ratio) && t.basis[r] < t.basis[br])
                    {
                        Some((r, ratio))
                    } else {
                        Some((br, bratio))
                    }
                }
            };
        }
        let Some((pr, _)) = best else {
            return Err(LpError::Unbounded(pc));
        };
        t.pivot(pr, pc);
        iterations += 1;
    }

    let mut col_val = vec![S::zero(); ns];
    for (r, &b) in t.basis.iter().enumerate() {
        if b < ns {
            col_val[b] = t.at(r, width - 1).clone();
        }
    }
    let x: Vec<S> = layout
        .cols
        .iter()
        .map(|&(p, neg)| match neg {
            Some(q) => col_val[p].sub(&col_val[q]),
            None => col_val[p].clone(),
        })
        .collect();
    let value = t.at(m, width - 1).clone();
    let basis_size = t.basis.iter().filter(|&&b| b < ns).count();
    Ok(Solution { value, x, iterations, basis_size })
}

/// Largest violation of `A x <= b` for a candidate point, in floating point.
pub fn max_violation<S: Scalar>(problem: &Problem<S>, x: &[S]) -> f64 {
    problem
        .rows
        .iter()
        .zip(&problem.rhs)
        .map(|(row, b)| {
            let lhs: f64 = row.iter().zip(x).map(|(a, v)| a.to_f64() * v.to_f64()).sum();
            lhs - b.to_f64()
        })
        .fold(0.0, f64::max)
}
