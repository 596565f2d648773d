//! Monogamy relations for correlation Bell inequalities on qubit networks.
//!
//! The crate is split along the objects it manipulates: Pauli strings and
//! their anti-commutation graphs, correlation Bell expressions and their
//! classical/quantum bounds, network presets, a dense statevector engine,
//! no-signaling linear programs and guessing-probability bounds.

pub mod pauli;
pub mod anticommutation;
pub mod inequalities;
pub mod quantum;
pub mod networks;
pub mod nosignaling;
pub mod randomness;
