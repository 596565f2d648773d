//! Closed-form bounds on an adversary's guessing probability for the first
//! party's outcome, given observed Mermin-type and CHSH values.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::inequalities::{mermin_klyshko, CorrelationExpression, ExprError};

/// Radicands down to -RADICAND_TOL are clamped to zero.
pub const RADICAND_TOL: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RandomnessError {
    #[error("observed values lie outside the quantum set (radicand {0})")]
    InfeasibleObservation(f64),
    #[error("invalid observation: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GuessBound {
    pub raw: f64,
    pub capped: f64,
    pub feasible: bool,
    pub radicand: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize, Default)]
pub struct ObservedValues {
    /// (number of parties j, ⟨Mermin^{(j)}⟩ on parties 1..j).
    #[serde(default)]
    pub mermin_values: Vec<(usize, f64)>,
    #[serde(default)]
    pub chsh_value: Option<f64>,
}

/// j-party Mermin expression scaled so its local bound is 2^{⌊j/2⌋}.
/// Mermin^{(2)} is CHSH and Mermin^{(3)} the usual three-party Mermin.
pub fn mermin_j(j: usize) -> Result<CorrelationExpression, ExprError> {
    let scale = (1u64 << (j / 2)) as f64;
    Ok(mermin_klyshko(j)?.scaled(scale).with_name(format!("mermin{j}")))
}

fn check_range(name: &str, v: f64, max: f64) -> Result<(), RandomnessError> {
    if !v.is_finite() || v.abs() > max + RADICAND_TOL {
        return Err(RandomnessError::InvalidInput(format!("{name} = {v} exceeds the algebraic maximum {max}")));
    }
    Ok(())
}

fn finish(radicand: f64) -> Result<GuessBound, RandomnessError> {
    if radicand < -RADICAND_TOL {
        return Err(RandomnessError::InfeasibleObservation(radicand));
    }
    let raw = 0.5 * (1.0 + radicand.max(0.0).sqrt());
    Ok(GuessBound { raw, capped: raw.min(1.0), feasible: true, radicand })
}

/// ½[1 + √(2 - Mermin²/8 - CHSH²/8)].
pub fn pguess_hybrid(mermin: f64, chsh: f64) -> Result<GuessBound, RandomnessError> {
    check_range("mermin", mermin, 8.0)?;
    check_range("chsh", chsh, 4.0)?;
    finish(2.0 - mermin * mermin / 8.0 - chsh * chsh / 8.0)
}

/// ½[1 + √(2^{n-2} - M_n²/2^n - Σ_{j=2}^{n-1} M_j²/2^{j+1})]; `values[j]`
/// pairs absent from the list count as 0.
pub fn pguess_chain_n(values: &[(usize, f64)], n: usize) -> Result<GuessBound, RandomnessError> {
    if !(3..=30).contains(&n) {
        return Err(RandomnessError::InvalidInput(format!("n = {n} must be in 3..=30")));
    }
    let mut m = vec![0.0; n + 1];
    let mut seen = vec![false; n + 1];
    for &(j, v) in values {
        if !(2..=n).contains(&j) || seen[j] {
            return Err(RandomnessError::InvalidInput(format!("party count {j}")));
        }
        seen[j] = true;
        check_range(&format!("mermin{j}"), v, mermin_j(j)?.algebraic_max())?;
        m[j] = v;
    }
    let mut radicand = 2f64.powi(n as i32 - 2) - m[n] * m[n] / 2f64.powi(n as i32);
    for (j, v) in m.iter().enumerate().take(n).skip(2) {
        radicand -= v * v / 2f64.powi(j as i32 + 1);
    }
    finish(radicand)
}

/// Dispatches on the observation: a CHSH value selects the hybrid form,
/// otherwise the largest listed party count is n.
pub fn pguess(obs: &ObservedValues) -> Result<GuessBound, RandomnessError> {
    if let Some(c) = obs.chsh_value {
        let mermin = match obs.mermin_values.as_slice() {
            [] => 0.0,
            [(3, v)] => *v,
            _ => return Err(RandomnessError::InvalidInput("the hybrid form takes one three-party Mermin value".into())),
        };
        return pguess_hybrid(mermin, c);
    }
    let n = obs.mermin_values.iter().map(|p| p.0).max().ok_or_else(|| RandomnessError::InvalidInput("no values".into()))?;
    pguess_chain_n(&obs.mermin_values, n)
}

/// P_guess implied by Eve's correlator ⟨A_1 Z⟩.
pub fn pguess_from_correlator(c: f64) -> f64 {
    0.5 * (1.0 + c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::SQRT_2;

    #[test]
    fn hybrid_examples() {
        assert!((pguess_hybrid(4.0, 0.0).unwrap().capped - 0.5).abs() < 1e-12);
        assert!((pguess_hybrid(2.0, 2.0).unwrap().capped - 1.0).abs() < 1e-12);
        assert!((pguess_hybrid(0.0, 2.0 * SQRT_2).unwrap().capped - 1.0).abs() < 1e-12);
        assert!(matches!(pguess_hybrid(4.0, 2.0), Err(RandomnessError::InfeasibleObservation(_))));
        assert!(pguess_hybrid(9.0, 0.0).is_err());
    }

    #[test]
    fn chain_examples() {
        assert_eq!(pguess_chain_n(&[(3, 4.0)], 3).unwrap().capped, 0.5);
        assert_eq!(pguess_chain_n(&[(4, 8.0)], 4).unwrap().capped, 0.5);
        let zero = pguess_chain_n(&[], 3).unwrap();
        assert!((zero.raw - 0.5 * (1.0 + SQRT_2)).abs() < 1e-12);
        assert_eq!(zero.capped, 1.0);
        // n = 3 coincides with the hybrid form.
        let a = pguess_chain_n(&[(3, 3.0), (2, 1.5)], 3).unwrap();
        let b = pguess_hybrid(3.0, 1.5).unwrap();
        assert!((a.raw - b.raw).abs() < 1e-15);
    }

    #[test]
    fn mermin_j_shapes() {
        use crate::inequalities::{chsh, equivalent_up_to_relabeling, local_bound, mermin3};
        assert!(equivalent_up_to_relabeling(&mermin_j(2).unwrap(), &chsh()));
        assert!(equivalent_up_to_relabeling(&mermin_j(3).unwrap(), &mermin3()));
        assert!((local_bound(&mermin_j(4).unwrap()).unwrap() - 4.0).abs() < 1e-12);
    }

    #[test]
    fn dispatch() {
        let obs: ObservedValues = serde_json::from_str(r#"{"mermin_values": [[3, 4.0]], "chsh_value": 0.0}"#).unwrap();
        assert_eq!(pguess(&obs).unwrap().capped, 0.5);
        let obs = ObservedValues { mermin_values: vec![(4, 8.0), (3, 0.0)], chsh_value: None };
        assert_eq!(pguess(&obs).unwrap().capped, 0.5);
    }
}
