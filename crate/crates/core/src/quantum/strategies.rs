use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

use serde::Serialize;

use super::{bell_value, QuantumError, QuantumStrategy, StateVector};
use crate::inequalities::{CorrelationExpression, TupleIter};

const X: [f64; 3] = [1.0, 0.0, 0.0];
const MX: [f64; 3] = [-1.0, 0.0, 0.0];
const Z: [f64; 3] = [0.0, 0.0, 1.0];
const DOMAIN_TOL: f64 = 1e-12;

fn xz(phi: f64) -> [f64; 3] {
    [phi.cos(), 0.0, phi.sin()]
}

fn xy(phi: f64) -> [f64; 3] {
    [phi.cos(), phi.sin(), 0.0]
}

fn check_domain(theta: f64, lo: f64, hi: f64) -> Result<(), QuantumError> {
    if theta.is_finite() && theta >= lo - DOMAIN_TOL && theta <= hi + DOMAIN_TOL {
        Ok(())
    } else {
        Err(QuantumError::ThetaOutOfDomain(theta))
    }
}

/// A_1 B_1 + A_1 B_2 - A_2 B_1 + A_2 B_2, the form used with the flat-region boxes.
pub fn flat_chsh() -> CorrelationExpression {
    CorrelationExpression::new("chsh-flat", vec![2, 2], vec![1.0, 1.0, -1.0, 1.0]).expect("fixed shape")
}

/// Box 1 on |ψ_1>, θ in [0, π/4].
pub fn flat1(theta: f64) -> Result<QuantumStrategy, QuantumError> {
    check_domain(theta, 0.0, FRAC_PI_4)?;
    let s = SQRT_2 * theta.sin();
    let (a, b) = (((1.0 - s).max(0.0)).sqrt() / 2.0, (1.0 + s).sqrt() / 2.0);
    let mut amps = [0.0; 8];
    amps[0b010] = a;
    amps[0b011] = a;
    amps[0b100] = b;
    amps[0b101] = b;
    let phi = ((1.0 / theta.cos()) / SQRT_2).min(1.0).asin();
    QuantumStrategy::new(StateVector::from_real(3, &amps)?, vec![vec![X, Z], vec![xz(phi), xz(-phi)], vec![X, MX]])
}

/// Box 1 mirrored onto Charlie for θ in [π/4, π/2], with φ = arcsin(csc θ/√2).
pub fn flat1b(theta: f64) -> Result<QuantumStrategy, QuantumError> {
    check_domain(theta, FRAC_PI_4, FRAC_PI_2)?;
    let c = SQRT_2 * theta.cos();
    let (a, b) = (((1.0 - c).max(0.0)).sqrt() / 2.0, (1.0 + c).sqrt() / 2.0);
    let mut amps = [0.0; 8];
    amps[0b001] = a;
    amps[0b011] = a;
    amps[0b100] = b;
    amps[0b110] = b;
    let phi = ((1.0 / theta.sin()) / SQRT_2).min(1.0).asin();
    QuantumStrategy::new(StateVector::from_real(3, &amps)?, vec![vec![X, Z], vec![X, MX], vec![xz(phi), xz(-phi)]])
}

/// Box 2 on |χ> with x-y plane observables, θ in [0, π/2].
pub fn flat2(theta: f64) -> Result<QuantumStrategy, QuantumError> {
    check_domain(theta, 0.0, FRAC_PI_2)?;
    let mut amps = [0.0; 8];
    amps[0b001] = FRAC_1_SQRT_2 * theta.cos();
    amps[0b010] = FRAC_1_SQRT_2 * theta.sin();
    amps[0b111] = FRAC_1_SQRT_2;
    let diag = [xy(FRAC_PI_4), xy(-FRAC_PI_4)];
    QuantumStrategy::new(StateVector::from_real(3, &amps)?, vec![vec![X, xy(FRAC_PI_2)], diag.to_vec(), diag.to_vec()])
}

/// Box 1 below π/4 and its mirror above.
pub fn flat_box1(theta: f64) -> Result<QuantumStrategy, QuantumError> {
    if theta <= FRAC_PI_4 {
        flat1(theta)
    } else {
        flat1b(theta)
    }
}

/// Angles for the GHZ strategy of the generalized Svetlichny expression,
/// indexed [party][input] with 0-based inputs.
pub fn ghz_angles(n: usize, m: usize) -> Vec<Vec<f64>> {
    let mf = m as f64;
    (1..=n)
        .map(|i| {
            (1..=m)
                .map(|x| {
                    let x = x as f64;
                    if i < n {
                        let s = if (n - i) % 2 == 0 { 1.0 } else { -1.0 };
                        s * (x - 1.0) * PI / mf
                    } else {
                        (2.0 * x + 2.0 * mf - 3.0) * PI / (2.0 * mf)
                    }
                })
                .collect()
        })
        .collect()
}

/// The three-case table exactly as printed; kept to document that it misses
/// the optimum.
pub fn ghz_angles_as_printed(n: usize, m: usize) -> Vec<Vec<f64>> {
    let mf = m as f64;
    let sn = if n % 2 == 0 { 1.0 } else { -1.0 };
    (1..=n)
        .map(|i| {
            (1..=m)
                .map(|x| {
                    let x = x as f64;
                    if i == n {
                        (2.0 * mf - sn - 2.0 * x) * PI / (2.0 * mf)
                    } else if i % 2 == 1 {
                        sn * (x - 1.0) * PI / mf
                    } else {
                        -sn * (x - 1.0) * PI / mf
                    }
                })
                .collect()
        })
        .collect()
}

/// GHZ state with x-y plane observables at the given angles.
pub fn ghz_strategy(angles: &[Vec<f64>]) -> Result<QuantumStrategy, QuantumError> {
    let n = angles.len();
    if n == 0 || n > super::MAX_STATE_QUBITS {
        return Err(QuantumError::TooLarge(n));
    }
    let obs = angles.iter().map(|row| row.iter().map(|&t| xy(t)).collect()).collect();
    QuantumStrategy::new(StateVector::ghz(n), obs)
}

pub fn ghz_svetlichny(n: usize, m: usize) -> Result<QuantumStrategy, QuantumError> {
    if !(2..=12).contains(&n) || m < 2 || m % 2 == 1 {
        return Err(QuantumError::TooLarge(n));
    }
    ghz_strategy(&ghz_angles(n, m))
}

/// chain(m) is minus the two-party generalized Svetlichny expression, so the
/// first party's angles shift by π.
pub fn ghz_chain(m: usize) -> Result<QuantumStrategy, QuantumError> {
    let mut a = ghz_angles(2, m);
    a[0].iter_mut().for_each(|t| *t += PI);
    if m < 2 || m % 2 == 1 {
        return Err(QuantumError::TooLarge(m));
    }
    ghz_strategy(&a)
}

fn parse_args(s: &str, prefix: &str) -> Option<Vec<usize>> {
    let rest = s.strip_prefix(prefix)?.strip_prefix('(')?.strip_suffix(')')?;
    rest.split(',').map(|t| t.trim().parse().ok()).collect()
}

/// flat1, flat1b, flat2, ghz_chain(m) or ghz_svetlichny(n,m); θ is ignored by
/// the GHZ strategies.
pub fn named_strategy(name: &str, theta: f64) -> Result<QuantumStrategy, QuantumError> {
    let key = name.trim().to_ascii_lowercase().replace('-', "_");
    match key.as_str() {
        "flat1" => flat1(theta),
        "flat1b" => flat1b(theta),
        "flat2" => flat2(theta),
        _ => {
            if let Some(a) = parse_args(&key, "ghz_chain").filter(|a| a.len() == 1) {
                ghz_chain(a[0])
            } else if let Some(a) = parse_args(&key, "ghz_svetlichny").filter(|a| a.len() == 2) {
                ghz_svetlichny(a[0], a[1])
            } else {
                Err(QuantumError::UnknownStrategy(name.to_string()))
            }
        }
    }
}

/// Every full or partial correlator of a three-party, two-input box, keyed
/// by the input (0 = absent, k = input k-1) of each party.
pub fn all_correlators(s: &QuantumStrategy) -> Vec<(Vec<usize>, f64)> {
    let shape: Vec<usize> = s.observables.iter().map(|o| o.len() + 1).collect();
    TupleIter::new(&shape)
        .filter(|k| k.iter().any(|&v| v > 0))
        .map(|k| {
            let ops: Vec<(usize, [f64; 3])> =
                k.iter().enumerate().filter(|(_, &v)| v > 0).map(|(p, &v)| (p, s.observables[p][v - 1])).collect();
            let val = s.state.expectation_product(&ops);
            (k, val)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct FlatRegionPoint {
    pub theta: f64,
    pub box1: &'static str,
    /// (CHSH_AB, CHSH_AC, combined) for box 1 and box 2.
    pub values1: (f64, f64, f64),
    pub values2: (f64, f64, f64),
    pub a1b1: (f64, f64),
    pub max_correlator_gap: f64,
    pub optimal: bool,
    /// None where the check is waived (θ at 0 or π/2).
    pub distinct: Option<bool>,
}

impl FlatRegionPoint {
    pub fn pass(&self) -> bool {
        self.optimal && self.distinct.unwrap_or(true)
    }
}

/// Evaluates both boxes at each θ: the combined value must be 2√2 within
/// 1e-9 and, away from the boundary, some correlator must differ by > 0.1.
pub fn verify_flat_region(thetas: &[f64]) -> Result<Vec<FlatRegionPoint>, QuantumError> {
    let e = flat_chsh();
    thetas
        .iter()
        .map(|&theta| {
            let b1 = flat_box1(theta)?;
            let b2 = flat2(theta)?;
            let eval = |s: &QuantumStrategy| -> Result<(f64, f64, f64), QuantumError> {
                let ab = bell_value(&e, s, &[0, 1])?;
                let ac = bell_value(&e, s, &[0, 2])?;
                Ok((ab, ac, theta.cos() * ab + theta.sin() * ac))
            };
            let (v1, v2) = (eval(&b1)?, eval(&b2)?);
            let gap = all_correlators(&b1)
                .iter()
                .zip(all_correlators(&b2))
                .map(|((_, a), (_, b))| (a - b).abs())
                .fold(0.0, f64::max);
            let target = 2.0 * SQRT_2;
            let interior = theta > 1e-9 && theta < FRAC_PI_2 - 1e-9;
            Ok(FlatRegionPoint {
                theta,
                box1: if theta <= FRAC_PI_4 { "flat1" } else { "flat1b" },
                values1: v1,
                values2: v2,
                a1b1: (b1.correlator(&[0, 1], &[0, 0]), b2.correlator(&[0, 1], &[0, 0])),
                max_correlator_gap: gap,
                optimal: (v1.2 - target).abs() <= 1e-9 && (v2.2 - target).abs() <= 1e-9,
                distinct: interior.then_some(gap > 0.1),
            })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequalities::{chain, gen_svetlichny};

    #[test]
    fn flat_box_values() {
        let e = flat_chsh();
        for k in 0..=16 {
            let t = k as f64 * FRAC_PI_2 / 16.0;
            for s in [flat_box1(t).unwrap(), flat2(t).unwrap()] {
                assert!((bell_value(&e, &s, &[0, 1]).unwrap() - 2.0 * SQRT_2 * t.cos()).abs() < 1e-12);
                assert!((bell_value(&e, &s, &[0, 2]).unwrap() - 2.0 * SQRT_2 * t.sin()).abs() < 1e-12);
            }
        }
        let s = flat1(0.0).unwrap();
        assert!(bell_value(&e, &s, &[0, 2]).unwrap().abs() < 1e-12);
        assert!(matches!(flat1(1.0), Err(QuantumError::ThetaOutOfDomain(_))));
        assert!(matches!(flat1b(0.2), Err(QuantumError::ThetaOutOfDomain(_))));
    }

    #[test]
    fn box1_printed_correlators() {
        let t = PI / 6.0;
        let s = flat1(t).unwrap();
        let sec = 1.0 / t.cos();
        assert!((s.correlator(&[0, 1], &[0, 0]) - (2.0 * t).cos() * sec / SQRT_2).abs() < 1e-12);
        assert!((s.correlator(&[0, 1], &[1, 0]) + sec / SQRT_2).abs() < 1e-12);
        assert!((s.correlator(&[0, 2], &[1, 0]) + SQRT_2 * t.sin()).abs() < 1e-12);
        let s2 = flat2(t).unwrap();
        assert!((s2.correlator(&[0, 2], &[1, 1]) - t.sin() / SQRT_2).abs() < 1e-12);
    }

    #[test]
    fn ghz_values() {
        for (n, m) in [(2, 2), (2, 4), (3, 2), (3, 4), (4, 2)] {
            let g = gen_svetlichny(n, m).unwrap();
            let parties: Vec<usize> = (0..n).collect();
            let v = bell_value(&g, &ghz_svetlichny(n, m).unwrap(), &parties).unwrap();
            let want = (m as f64).powi(n as i32 - 1) / (PI / (2.0 * m as f64)).sin();
            assert!((v - want).abs() < 1e-8, "({n},{m}): {v} vs {want}");
        }
        for m in [2, 4, 6] {
            let v = bell_value(&chain(m).unwrap(), &ghz_chain(m).unwrap(), &[0, 1]).unwrap();
            assert!((v - m as f64 / (PI / (2.0 * m as f64)).sin()).abs() < 1e-8);
        }
    }

    #[test]
    fn printed_table_falls_short() {
        let g = gen_svetlichny(3, 2).unwrap();
        let v = bell_value(&g, &ghz_strategy(&ghz_angles_as_printed(3, 2)).unwrap(), &[0, 1, 2]).unwrap();
        assert!(v < 4.0 * SQRT_2 - 1.0);
    }

    #[test]
    fn names() {
        assert!(named_strategy("ghz_svetlichny(3,4)", 0.0).is_ok());
        assert!(named_strategy("ghz-chain(4)", 0.0).is_ok());
        assert!(matches!(named_strategy("box9", 0.0), Err(QuantumError::UnknownStrategy(_))));
    }

    #[test]
    fn flat_region_report() {
        let r = verify_flat_region(&[0.0, PI / 6.0, FRAC_PI_4, PI / 3.0]).unwrap();
        assert!(r.iter().all(FlatRegionPoint::pass));
        assert_eq!(r[0].distinct, None);
    }
}
