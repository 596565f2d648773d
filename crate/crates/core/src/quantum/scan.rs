use super::{hyperspherical_weights, seesaw, LinearObjective, QuantumError, QuantumStrategy, ScanPoint, SeesawOptions};
use crate::networks::{NetworkError, TradeOffRelation};

pub fn relation_objective(relation: &TradeOffRelation, weights: &[f64]) -> Result<LinearObjective, NetworkError> {
    let edges = relation.hypergraph.edges();
    if weights.len() != edges.len() || weights.iter().any(|w| !w.is_finite()) {
        return Err(QuantumError::SizeMismatch { expected: edges.len(), got: weights.len() }.into());
    }
    let mut obj = LinearObjective::new(relation.inputs_per_vertex()?);
    for ((e, x), &w) in edges.iter().zip(&relation.expressions).zip(weights) {
        obj.add_expression(w, x, e)?;
    }
    Ok(obj)
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeesawOutcome {
    pub strategy: QuantumStrategy,
    pub edge_values: Vec<f64>,
    pub objective: f64,
    pub seed: u64,
}

/// Maximizes Σ_e w_e ⟨I_e⟩ over qubit strategies on the relation's network.
pub fn seesaw_maximize(relation: &TradeOffRelation, weights: &[f64], opts: &SeesawOptions) -> Result<SeesawOutcome, NetworkError> {
    let obj = relation_objective(relation, weights)?;
    let run = seesaw(&obj, opts)?;
    let edge_values = relation.edge_values(&run.strategy)?;
    Ok(SeesawOutcome { strategy: run.strategy, edge_values, objective: run.value, seed: run.seed })
}

/// One seesaw per angle tuple, weights from hyperspherical coordinates.
pub fn boundary_scan(relation: &TradeOffRelation, grid: &[Vec<f64>], opts: &SeesawOptions) -> Result<Vec<ScanPoint>, NetworkError> {
    if relation.exponent != 2 {
        return Err(NetworkError::WrongExponent);
    }
    grid.iter()
        .map(|angles| {
            let weights = hyperspherical_weights(angles);
            let out = seesaw_maximize(relation, &weights, opts)?;
            let sum_sq = out.edge_values.iter().zip(&relation.multiplicity).map(|(v, &m)| m as f64 * v * v).sum();
            Ok(ScanPoint { angles: angles.clone(), weights, values: out.edge_values, sum_sq, seed: out.seed })
        })
        .collect()
}

/// `count` evenly spaced angles covering [0, π/2], endpoints included.
pub fn quarter_circle_grid(count: usize) -> Vec<Vec<f64>> {
    let h = std::f64::consts::FRAC_PI_2;
    match count {
        0 => Vec::new(),
        1 => vec![vec![0.0]],
        _ => (0..count).map(|k| vec![h * k as f64 / (count - 1) as f64]).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::networks::preset;

    #[test]
    fn triangle_diagonal() {
        let r = preset("triangle").unwrap();
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let out = seesaw_maximize(&r, &[h, h], &SeesawOptions { restarts: 4, ..Default::default() }).unwrap();
        let s: f64 = out.edge_values.iter().map(|v| v * v).sum();
        assert!((s - 2.0).abs() < 1e-6, "{s}");
    }

    #[test]
    fn wrong_weight_count() {
        let r = preset("triangle").unwrap();
        assert!(seesaw_maximize(&r, &[1.0], &SeesawOptions::default()).is_err());
    }
}
