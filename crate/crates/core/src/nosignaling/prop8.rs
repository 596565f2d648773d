use serde::Serialize;

use super::{NSBox, NsError};
use crate::inequalities::{chain, local_bound, CorrelationExpression, TupleIter};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Prop8Route {
    /// One copy per input: every shifted expression has a local model.
    Shift,
    /// Chain expression with two copies of Bob, summed over its CHSH blocks.
    ChshBlocks,
}

/// One term of a shifted expression: Alice's input and the copy of each
/// other party that answers it.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftedTerm {
    pub coeff: f64,
    pub x1: usize,
    pub copies: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ShiftedExpression {
    pub k: Vec<usize>,
    /// Input measured by each copy of each non-Alice party.
    pub copy_inputs: Vec<Vec<usize>>,
    pub terms: Vec<ShiftedTerm>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prop8Bound {
    pub beta_c: f64,
    pub multiplicities: Vec<usize>,
    pub bound: f64,
    pub route: Prop8Route,
    pub shifted: Vec<ShiftedExpression>,
}

/// Copy l of party i measures input (l - k_i) mod m_i.
pub fn prop8_inputs(copies: &[usize], k: &[usize]) -> Vec<Vec<usize>> {
    copies
        .iter()
        .zip(k)
        .map(|(&m, &ki)| (0..m).map(|l| (l + m - ki % m) % m).collect())
        .collect()
}

fn is_chain(base: &CorrelationExpression) -> Option<usize> {
    let m = base.inputs()[0];
    if base.n_parties() != 2 || base.inputs()[1] != m {
        return None;
    }
    let c = chain(m).ok()?;
    (c.coeffs() == base.coeffs()).then_some(m)
}

/// β_c · Π m_i for `multiplicities[i]` copies of party i+1.
pub fn prop8_bound(base: &CorrelationExpression, multiplicities: &[usize]) -> Result<Prop8Bound, NsError> {
    let n = base.n_parties();
    if n < 2 || multiplicities.len() != n - 1 {
        return Err(NsError::DimensionMismatch { expected: n.saturating_sub(1), got: multiplicities.len() });
    }
    let beta_c = local_bound(base)?;
    let bound = beta_c * multiplicities.iter().product::<usize>() as f64;
    if multiplicities == &base.inputs()[1..] {
        let shifted = TupleIter::new(multiplicities)
            .map(|k| {
                let copy_inputs = prop8_inputs(multiplicities, &k);
                let terms = base
                    .terms()
                    .filter(|(_, c)| *c != 0.0)
                    .map(|(x, coeff)| ShiftedTerm {
                        coeff,
                        x1: x[0],
                        copies: (1..n).map(|i| (x[i] + k[i - 1]) % multiplicities[i - 1]).collect(),
                    })
                    .collect();
                ShiftedExpression { k, copy_inputs, terms }
            })
            .collect();
        return Ok(Prop8Bound { beta_c, multiplicities: multiplicities.to_vec(), bound, route: Prop8Route::Shift, shifted });
    }
    if let (Some(m), [2]) = (is_chain(base), multiplicities) {
        // m²/4 CHSH blocks, each bounded by 2 per copy.
        let blocks = (m * m / 4) as f64;
        return Ok(Prop8Bound {
            beta_c,
            multiplicities: multiplicities.to_vec(),
            bound: blocks * 2.0 * 2.0,
            route: Prop8Route::ChshBlocks,
            shifted: Vec::new(),
        });
    }
    Err(NsError::NotCovered(format!(
        "{} with multiplicities {multiplicities:?} (inputs {:?})",
        base.name(),
        &base.inputs()[1..]
    )))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Prop8Model {
    pub fixed_inputs: Vec<Vec<usize>>,
    /// Joint distribution indexed by (Alice's outputs for every input, others' outputs), Alice's bits first.
    pub joint: Vec<f64>,
    pub min_probability: f64,
    pub normalization_error: f64,
    /// Largest gap between a single-input marginal of the model and the box.
    pub max_marginal_error: f64,
}

impl Prop8Model {
    pub fn pass(&self, tol: f64) -> bool {
        self.min_probability >= -tol && self.normalization_error <= tol && self.max_marginal_error <= tol
    }
}

/// Joint model Π_{x1} P(o1^{(x1)}, rest | x1, fixed) / P(rest | fixed)^{m1-1}
/// for a box on Alice followed by `copies[i]` copies of each other party.
pub fn prop8_local_model(b: &NSBox, copies: &[usize], k: &[usize]) -> Result<Prop8Model, NsError> {
    let s = b.scenario();
    let n = s.n_parties();
    let expected = 1 + copies.iter().sum::<usize>();
    if n != expected || k.len() != copies.len() {
        return Err(NsError::DimensionMismatch { expected, got: n });
    }
    let fixed_inputs = prop8_inputs(copies, k);
    let flat: Vec<usize> = fixed_inputs.iter().flatten().copied().collect();
    for (party, &x) in flat.iter().enumerate() {
        if x >= s.inputs[party + 1] {
            return Err(NsError::DimensionMismatch { expected: s.inputs[party + 1], got: x + 1 });
        }
    }
    let m1 = s.inputs[0];
    if m1 > 16 {
        return Err(NsError::InvalidScenario(format!("{m1} inputs for the first party")));
    }
    let rest = n - 1;
    let n_rest = 1usize << rest;
    let d = s.n_output_tuples();
    // p[x1][o1][r] = P(o1, r | x1, fixed).
    let p: Vec<[Vec<f64>; 2]> = (0..m1)
        .map(|x1| {
            let mut x = vec![x1];
            x.extend(&flat);
            let row: Vec<f64> = (0..d).map(|o| b.probs()[s.x_index(&x) * d + o]).collect();
            [row[..n_rest].to_vec(), row[n_rest..].to_vec()]
        })
        .collect();
    let q: Vec<f64> = (0..n_rest).map(|r| p[0][0][r] + p[0][1][r]).collect();
    let mut joint = vec![0.0; (1usize << m1) * n_rest];
    for r in 0..n_rest {
        if q[r] <= 1e-14 {
            return Err(NsError::ZeroMarginal((0..rest).map(|i| ((r >> (rest - 1 - i)) & 1) as u8).collect()));
        }
        let denom = q[r].powi(m1 as i32 - 1);
        for a in 0..1usize << m1 {
            let num: f64 = (0..m1).map(|x1| p[x1][(a >> (m1 - 1 - x1)) & 1][r]).product();
            joint[a * n_rest + r] = num / denom;
        }
    }
    let total: f64 = joint.iter().sum();
    let mut max_err: f64 = 0.0;
    for x1 in 0..m1 {
        for o1 in 0..2 {
            for r in 0..n_rest {
                let marg: f64 = (0..1usize << m1).filter(|a| (a >> (m1 - 1 - x1)) & 1 == o1).map(|a| joint[a * n_rest + r]).sum();
                max_err = max_err.max((marg - p[x1][o1][r]).abs());
            }
        }
    }
    Ok(Prop8Model {
        fixed_inputs,
        min_probability: joint.iter().copied().fold(f64::INFINITY, f64::min),
        normalization_error: (total - 1.0).abs(),
        max_marginal_error: max_err,
        joint,
    })
}

#[cfg(test)]
mod tests {
    use super::super::Scenario;
    use super::*;
    use crate::inequalities::{chsh, mermin3, mermin_klyshko};
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn bounds() {
        assert_eq!(prop8_bound(&chsh(), &[2]).unwrap().bound, 4.0);
        let m = prop8_bound(&mermin3(), &[2, 2]).unwrap();
        assert_eq!((m.bound, m.shifted.len()), (8.0, 4));
        for n in 2..=3 {
            let b = prop8_bound(&mermin_klyshko(n).unwrap(), &vec![2; n - 1]).unwrap();
            assert!((b.bound - (1u32 << (n - 1)) as f64).abs() < 1e-12);
        }
        for m in [2, 4, 6] {
            let b = prop8_bound(&chain(m).unwrap(), &[2]).unwrap();
            assert_eq!(b.bound, (m * m) as f64);
        }
        assert!(matches!(prop8_bound(&mermin3(), &[3, 2]), Err(NsError::NotCovered(_))));
    }

    #[test]
    fn each_copy_measures_one_input() {
        let b = prop8_bound(&mermin3(), &[2, 2]).unwrap();
        for sh in &b.shifted {
            for t in &sh.terms {
                for (i, &c) in t.copies.iter().enumerate() {
                    // The term's input for party i+1 must be the copy's fixed input.
                    let x: usize = (c + 2 - sh.k[i]) % 2;
                    assert_eq!(sh.copy_inputs[i][c], x);
                }
            }
        }
    }

    #[test]
    fn product_box_model() {
        let one = |p: &[f64]| NSBox::new(Scenario::binary(vec![p.len()]).unwrap(), p.iter().flat_map(|&q| [q, 1.0 - q]).collect()).unwrap();
        let (a, b1, b2) = (one(&[0.3, 0.8]), one(&[0.6, 0.1]), one(&[0.25, 0.5]));
        let b = a.product(&b1).product(&b2);
        let m = prop8_local_model(&b, &[2], &[1]).unwrap();
        assert!(m.pass(1e-12));
        // k = 1: copy 0 measures input 1, copy 1 measures input 0.
        assert_eq!(m.fixed_inputs, vec![vec![1, 0]]);
        for (idx, &v) in m.joint.iter().enumerate() {
            let bit = |j: usize| (idx >> j) & 1;
            let pa = a.prob(&[bit(3) as u8], &[0]) * a.prob(&[bit(2) as u8], &[1]);
            let pr = b1.prob(&[bit(1) as u8], &[1]) * b2.prob(&[bit(0) as u8], &[0]);
            assert!((v - pa * pr).abs() < 1e-12);
        }
    }

    #[test]
    fn interior_boxes_reproduced() {
        let s = Scenario::binary(vec![3, 2, 2]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for _ in 0..20 {
            let b = NSBox::random_interior(&s, &mut rng);
            for k in 0..2 {
                let m = prop8_local_model(&b, &[2], &[k]).unwrap();
                assert!(m.pass(1e-10), "{m:?}");
            }
        }
    }

    #[test]
    fn zero_marginal_detected() {
        let s = Scenario::binary(vec![2, 2, 2]).unwrap();
        let det = NSBox::deterministic(&s, &[vec![0, 0], vec![0, 0], vec![0, 0]]).unwrap();
        let b = det;
        assert!(matches!(prop8_local_model(&b, &[2], &[0]), Err(NsError::ZeroMarginal(_))));
    }
}
