//! Dense statevector evaluation of correlators, Bell values and explicit strategies.

mod ladder;
mod scan;
mod seesaw;
mod sos;
mod state;
mod strategies;

pub use ladder::{
    bilinear_max_complex, bilinear_max_real, four_vector_max, ladder_bilinear_max, ladder_s_set, LadderBilinear, MAX_LADDER_N,
};
pub use scan::{boundary_scan, quarter_circle_grid, relation_objective, seesaw_maximize, SeesawOutcome};
pub use seesaw::{
    hyperspherical_weights, random_observables, random_strategy, restart_seeds, seesaw, top_eigenvector, write_scan_csv,
    LinearObjective, ScanPoint, SeesawOptions, SeesawRun, MAX_SEESAW_QUBITS,
};
pub use sos::{verify_sos_chain, SosReport};
pub use state::{apply_bloch_in_place, StateVector, MAX_STATE_QUBITS, NORM_TOL};
pub use strategies::{
    all_correlators, flat1, flat1b, flat2, flat_box1, flat_chsh, ghz_angles, ghz_angles_as_printed, ghz_chain,
    ghz_strategy, ghz_svetlichny, named_strategy, verify_flat_region, FlatRegionPoint,
};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::inequalities::CorrelationExpression;
use crate::pauli::Pauli;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QuantumError {
    #[error("size mismatch: expected {expected}, got {got}")]
    SizeMismatch { expected: usize, got: usize },
    #[error("state norm is {0}, not 1")]
    NotNormalized(f64),
    #[error("operator {0} is not Hermitian")]
    NonHermitian(String),
    #[error("Bloch vector {0:?} is not a unit vector")]
    NotUnit([f64; 3]),
    #[error("expression shape does not match the strategy: {0}")]
    ShapeMismatch(String),
    #[error("theta = {0} is outside the domain of this strategy")]
    ThetaOutOfDomain(f64),
    #[error("{0} qubits exceeds the limit of {1}")]
    TooManyQubits(usize, usize),
    #[error("unknown strategy {0}")]
    UnknownStrategy(String),
    #[error("n = {0} is outside the supported range")]
    TooLarge(usize),
    #[error("numerical failure: {0}")]
    NumericalFailure(String),
}

/// Pair of Pauli axes spanning the measurement plane of every site.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "lowercase")]
pub enum Plane {
    #[default]
    XZ,
    XY,
}

impl Plane {
    pub fn axes(self) -> [Pauli; 2] {
        match self {
            Plane::XZ => [Pauli::X, Pauli::Z],
            Plane::XY => [Pauli::X, Pauli::Y],
        }
    }

    /// Unit Bloch vector at angle `phi` from the first axis towards the second.
    pub fn bloch(self, phi: f64) -> [f64; 3] {
        match self {
            Plane::XZ => [phi.cos(), 0.0, phi.sin()],
            Plane::XY => [phi.cos(), phi.sin(), 0.0],
        }
    }
}

/// One qubit per party; party i holds qubit i of the state.
#[derive(Debug, Clone, PartialEq)]
pub struct QuantumStrategy {
    pub state: StateVector,
    pub observables: Vec<Vec<[f64; 3]>>,
}

impl QuantumStrategy {
    pub fn new(state: StateVector, observables: Vec<Vec<[f64; 3]>>) -> Result<Self, QuantumError> {
        if observables.len() != state.n_qubits() {
            return Err(QuantumError::SizeMismatch { expected: state.n_qubits(), got: observables.len() });
        }
        for v in observables.iter().flatten() {
            let norm = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
            if (norm - 1.0).abs() > NORM_TOL {
                return Err(QuantumError::NotUnit(*v));
            }
        }
        Ok(QuantumStrategy { state, observables })
    }

    pub fn n_parties(&self) -> usize {
        self.observables.len()
    }

    /// ⟨⊗_i A^{(parties[i])}_{x_i}⟩.
    pub fn correlator(&self, parties: &[usize], x: &[usize]) -> f64 {
        let ops: Vec<(usize, [f64; 3])> = parties.iter().zip(x).map(|(&p, &xi)| (p, self.observables[p][xi])).collect();
        self.state.expectation_product(&ops)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({ "state": self.state.to_json(), "observables": self.observables })
    }
}

/// Σ_x C(x) ⟨⊗_i A^{(parties[i])}_{x_i}⟩.
pub fn bell_value(
    expr: &CorrelationExpression,
    strategy: &QuantumStrategy,
    parties: &[usize],
) -> Result<f64, QuantumError> {
    if parties.len() != expr.n_parties() {
        return Err(QuantumError::ShapeMismatch(format!(
            "{} parties for a {}-party expression",
            parties.len(),
            expr.n_parties()
        )));
    }
    for (i, &p) in parties.iter().enumerate() {
        let have = strategy.observables.get(p).map_or(0, Vec::len);
        if have != expr.inputs()[i] {
            return Err(QuantumError::ShapeMismatch(format!(
                "party {p} has {have} observables, expression needs {}",
                expr.inputs()[i]
            )));
        }
    }
    Ok(expr
        .terms()
        .filter(|(_, c)| *c != 0.0)
        .map(|(x, c)| c * strategy.correlator(parties, &x))
        .sum())
}

/// Sum of the squared correlation tensor entries of an edge in the given plane.
pub fn edge_value_squared(state: &StateVector, edge: &[usize], plane: Plane) -> f64 {
    state.correlation_tensor(edge, plane.axes()).iter().map(|t| t * t).sum()
}

/// ⟨A^{(alice)}_1 A^{(eve)}_1⟩. Eve's observables are taken equal, so her
/// first one is her guess; P_guess = (1 + value) / 2.
pub fn guessing_correlator(strategy: &QuantumStrategy, alice: usize, eve: usize) -> Result<f64, QuantumError> {
    let n = strategy.n_parties();
    if alice >= n || eve >= n || alice == eve {
        return Err(QuantumError::ShapeMismatch(format!("parties {alice} and {eve} of {n}")));
    }
    if strategy.observables[alice].is_empty() || strategy.observables[eve].is_empty() {
        return Err(QuantumError::ShapeMismatch("party without observables".into()));
    }
    Ok(strategy.correlator(&[alice, eve], &[0, 0]))
}
