use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::Serialize;

use super::{CorrelationExpression, ExprError, TupleIter};

/// Largest number of ±1 variables enumerated exhaustively.
pub const LOCAL_ENUMERATION_CAP: usize = 24;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundsRecord {
    pub classical: f64,
    /// Value and the parties of one block.
    pub bilocal: Option<(f64, Vec<usize>)>,
    pub quantum_upper: Option<f64>,
    pub quantum_attained: Option<f64>,
}

impl BoundsRecord {
    pub fn is_consistent(&self, algebraic_max: f64) -> bool {
        let tol = 1e-9;
        let mut ok = self.classical <= algebraic_max + tol;
        if let Some((b, _)) = &self.bilocal {
            ok &= self.classical <= b + tol && *b <= algebraic_max + tol;
        }
        if let (Some(a), Some(u)) = (self.quantum_attained, self.quantum_upper) {
            ok &= a <= u + tol;
        }
        ok
    }
}

/// max over an arbitrary sign function α(x_A) of Σ_{x_B} |Σ_{x_A} C(x_A, x_B) α(x_A)|,
/// with the A coordinates given by `rows` (each row is one x_A) and the B
/// coordinates by its columns.
fn max_sign_rows(rows: &[Vec<f64>]) -> f64 {
    let k = rows.len();
    let cols = rows.first().map_or(0, Vec::len);
    // α and -α give the same value, so fix α(0) = +1.
    let half = 1u64 << k.saturating_sub(1);
    let eval = |mask: u64| -> f64 {
        let mut v = vec![0.0; cols];
        for (r, row) in rows.iter().enumerate() {
            let s = if mask >> r & 1 == 1 { -1.0 } else { 1.0 };
            for (acc, c) in v.iter_mut().zip(row) {
                *acc += s * c;
            }
        }
        v.iter().map(|x| x.abs()).sum()
    };
    if k >= 14 {
        (0..half).into_par_iter().map(|m| eval(m << 1)).reduce(|| f64::NEG_INFINITY, f64::max)
    } else {
        (0..half).map(|m| eval(m << 1)).fold(f64::NEG_INFINITY, f64::max)
    }
}

/// Exact maximum over deterministic local strategies a_i(x_i) = ±1.
///
/// All parties but the last are enumerated; the last one answers each of its
/// inputs with the sign of its conditional coefficient.
pub fn local_bound(expr: &CorrelationExpression) -> Result<f64, ExprError> {
    let inputs = expr.inputs();
    let total: usize = inputs.iter().sum();
    if total > LOCAL_ENUMERATION_CAP {
        return Err(ExprError::TooLargeForEnumeration(total));
    }
    let n = inputs.len();
    if n == 1 {
        return Ok(expr.algebraic_max());
    }
    let head = &inputs[..n - 1];
    let last = inputs[n - 1];
    let mut offsets = Vec::with_capacity(n - 1);
    let mut k = 0;
    for &m in head {
        offsets.push(k);
        k += m;
    }
    // For each head tuple: which variable bits enter its sign, and its coefficient row.
    let heads: Vec<(u32, Vec<f64>)> = TupleIter::new(head)
        .map(|x| {
            let mask = x.iter().zip(&offsets).fold(0u32, |m, (&xi, &o)| m | 1 << (o + xi));
            let row = (0..last)
                .map(|y| {
                    let mut full = x.clone();
                    full.push(y);
                    expr.coeff(&full)
                })
                .collect();
            (mask, row)
        })
        .collect();
    let eval = |assign: u32| -> f64 {
        let mut v = vec![0.0; last];
        for (mask, row) in &heads {
            let s = if (assign & mask).count_ones() % 2 == 1 { -1.0 } else { 1.0 };
            for (acc, c) in v.iter_mut().zip(row) {
                *acc += s * c;
            }
        }
        v.iter().map(|x| x.abs()).sum()
    };
    let space = 1u32 << k;
    let best = if k >= 14 {
        (0..space).into_par_iter().map(eval).reduce(|| f64::NEG_INFINITY, f64::max)
    } else {
        (0..space).map(eval).fold(f64::NEG_INFINITY, f64::max)
    };
    Ok(best)
}

/// Maximum over models where each block answers with an arbitrary function of
/// all inputs inside the block. `block` lists the parties of one block; the
/// other block is its complement.
pub fn bilocal_bound(expr: &CorrelationExpression, block: &[usize]) -> Result<f64, ExprError> {
    let n = expr.n_parties();
    let in_a: Vec<bool> = (0..n).map(|i| block.contains(&i)).collect();
    if block.is_empty() || block.len() >= n || block.iter().any(|&i| i >= n) {
        return Err(ExprError::BadPartition);
    }
    let inputs = expr.inputs();
    let a: Vec<usize> = (0..n).filter(|&i| in_a[i]).collect();
    let b: Vec<usize> = (0..n).filter(|&i| !in_a[i]).collect();
    let size = |p: &[usize]| p.iter().map(|&i| inputs[i]).product::<usize>();
    // Enumerate sign functions on the smaller block.
    let (enum_block, other) = if size(&a) <= size(&b) { (a, b) } else { (b, a) };
    let k = size(&enum_block);
    if k > LOCAL_ENUMERATION_CAP {
        return Err(ExprError::TooLargeForEnumeration(k));
    }
    let shape_e: Vec<usize> = enum_block.iter().map(|&i| inputs[i]).collect();
    let shape_o: Vec<usize> = other.iter().map(|&i| inputs[i]).collect();
    let rows: Vec<Vec<f64>> = TupleIter::new(&shape_e)
        .map(|xe| {
            TupleIter::new(&shape_o)
                .map(|xo| {
                    let mut x = vec![0; n];
                    for (j, &p) in enum_block.iter().enumerate() {
                        x[p] = xe[j];
                    }
                    for (j, &p) in other.iter().enumerate() {
                        x[p] = xo[j];
                    }
                    expr.coeff(&x)
                })
                .collect()
        })
        .collect();
    Ok(max_sign_rows(&rows))
}

/// Largest bilocal value over all bipartitions, with the block attaining it.
pub fn hybrid_bilocal_bound(expr: &CorrelationExpression) -> Result<(f64, Vec<usize>), ExprError> {
    let n = expr.n_parties();
    let mut best: Option<(f64, Vec<usize>)> = None;
    // Blocks containing party 0 enumerate every split once.
    for mask in 0u32..(1 << (n - 1)) {
        let block: Vec<usize> = std::iter::once(0).chain((1..n).filter(|&i| mask >> (i - 1) & 1 == 1)).collect();
        if block.len() == n {
            continue;
        }
        let v = bilocal_bound(expr, &block)?;
        if best.as_ref().map_or(true, |(b, _)| v > *b + 1e-12) {
            best = Some((v, block));
        }
    }
    best.ok_or(ExprError::BadPartition)
}

/// √(m_1 m_2) Σ_{x_3..x_n} ‖C(·,·,x_3..x_n)‖ with the spectral norm of each slice.
pub fn quantum_upper_bound_spectral(expr: &CorrelationExpression) -> Result<f64, ExprError> {
    let inputs = expr.inputs();
    if inputs.len() < 2 {
        return Err(ExprError::NOutOfRange(inputs.len()));
    }
    let (m1, m2) = (inputs[0], inputs[1]);
    let total: f64 = TupleIter::new(&inputs[2..])
        .map(|rest| {
            let s = expr.slice2(&rest);
            let mat = DMatrix::from_fn(m1, m2, |r, c| s[r][c]);
            mat.singular_values().max()
        })
        .sum();
    Ok(((m1 * m2) as f64).sqrt() * total)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequalities::*;

    #[test]
    fn classic_bounds() {
        assert_eq!(local_bound(&chsh()).unwrap(), 2.0);
        assert_eq!(local_bound(&mermin3()).unwrap(), 2.0);
        assert_eq!(mermin3().algebraic_max(), 4.0);
        assert_eq!(local_bound(&chain(4).unwrap()).unwrap(), 8.0);
        assert_eq!(local_bound(&ww_zb_facet(&[1, 1, 1, -1]).unwrap()).unwrap(), 1.0);
    }

    #[test]
    fn enumeration_cap() {
        let big = CorrelationExpression::from_fn("big", vec![13, 13], |_| 1.0);
        assert!(matches!(local_bound(&big), Err(ExprError::TooLargeForEnumeration(26))));
    }

    #[test]
    fn bilocal_examples() {
        let g = gen_svetlichny(3, 2).unwrap();
        assert_eq!(bilocal_bound(&g, &[0]).unwrap(), 4.0);
        let g24 = gen_svetlichny(2, 4).unwrap();
        assert_eq!(bilocal_bound(&g24, &[0]).unwrap(), local_bound(&g24).unwrap());
        assert!(matches!(bilocal_bound(&g, &[0, 1, 2]), Err(ExprError::BadPartition)));
    }

    #[test]
    fn spectral_examples() {
        let s = quantum_upper_bound_spectral(&chain(2).unwrap()).unwrap();
        assert!((s - 2.0 * 2f64.sqrt()).abs() < 1e-12);
        let s4 = quantum_upper_bound_spectral(&chain(4).unwrap()).unwrap();
        assert!((s4 - 4.0 / (std::f64::consts::PI / 8.0).sin()).abs() < 1e-9);
        let g = quantum_upper_bound_spectral(&gen_svetlichny(3, 2).unwrap()).unwrap();
        assert!((g - 4.0 * 2f64.sqrt()).abs() < 1e-9);
    }

    #[test]
    fn record_consistency() {
        let r = BoundsRecord { classical: 2.0, bilocal: Some((4.0, vec![0])), quantum_upper: Some(2.9), quantum_attained: Some(2.8) };
        assert!(r.is_consistent(4.0));
        let bad = BoundsRecord { quantum_attained: Some(3.0), ..r };
        assert!(!bad.is_consistent(4.0));
    }
}
