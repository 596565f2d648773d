//! Qubit-network hypergraphs, the trade-off relations they carry, and their
//! certification by anti-commuting groupings.

mod groupings;
mod presets;

pub use groupings::{nine_grouping, square_grouping, star_grouping, tree15_grouping, tree7_grouping, triangle_grouping};
pub use presets::{gen_ladder, ladder, preset, star, PRESET_NAMES};

use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::anticommutation::{
    build_graph_with_copies, exact_cover, greedy_cover, verify_certificate, ACGraph, CliqueCoverCertificate, CoverOutcome,
    GraphError, Grouping, SearchStats,
};
use crate::inequalities::{mermin_klyshko, CorrelationExpression, ExprError};
use crate::pauli::PauliString;
use crate::quantum::{bell_value, Plane, QuantumError, QuantumStrategy, StateVector};

/// Default node budget for the exact cover search during certification.
pub const DEFAULT_CERTIFY_BUDGET: u64 = 200_000_000;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum NetworkError {
    #[error("unknown preset {0:?}")]
    UnknownPreset(String),
    #[error("operation needs a relation on squared values")]
    WrongExponent,
    #[error("invalid hypergraph: {0}")]
    InvalidHypergraph(String),
    #[error("invalid relation: {0}")]
    InvalidRelation(String),
    #[error("edge size {0} is even")]
    EvenK(usize),
    #[error("weights have squared norm {0}, not 1")]
    BadNormalization(f64),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Graph(#[from] GraphError),
    #[error(transparent)]
    Quantum(#[from] QuantumError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Hypergraph {
    n_vertices: usize,
    edges: Vec<Vec<usize>>,
}

impl Hypergraph {
    /// Edges are sorted on input.
    pub fn new(n_vertices: usize, edges: Vec<Vec<usize>>) -> Result<Self, NetworkError> {
        let mut sorted: Vec<Vec<usize>> = Vec::with_capacity(edges.len());
        for mut e in edges {
            e.sort_unstable();
            if e.is_empty() {
                return Err(NetworkError::InvalidHypergraph("empty edge".into()));
            }
            if e.windows(2).any(|w| w[0] == w[1]) {
                return Err(NetworkError::InvalidHypergraph(format!("repeated vertex in {e:?}")));
            }
            if let Some(&v) = e.iter().find(|&&v| v >= n_vertices) {
                return Err(NetworkError::InvalidHypergraph(format!("vertex {v} out of range")));
            }
            if sorted.contains(&e) {
                return Err(NetworkError::InvalidHypergraph(format!("duplicate edge {e:?}")));
            }
            sorted.push(e);
        }
        if sorted.is_empty() {
            return Err(NetworkError::InvalidHypergraph("no edges".into()));
        }
        Ok(Hypergraph { n_vertices, edges: sorted })
    }

    pub fn n_vertices(&self) -> usize {
        self.n_vertices
    }
    pub fn edges(&self) -> &[Vec<usize>] {
        &self.edges
    }
    pub fn n_edges(&self) -> usize {
        self.edges.len()
    }

    /// Common edge size, if all edges have the same size.
    pub fn uniform_rank(&self) -> Option<usize> {
        let k = self.edges[0].len();
        self.edges.iter().all(|e| e.len() == k).then_some(k)
    }

    /// Edges as printed with 1-based vertex labels, e.g. "123".
    pub fn edge_labels(&self) -> Vec<String> {
        self.edges
            .iter()
            .map(|e| e.iter().map(|v| (v + 1).to_string()).collect::<Vec<_>>().join(if self.n_vertices > 9 { "," } else { "" }))
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Regime {
    Quantum,
    #[serde(rename = "nosignaling")]
    NoSignaling,
    Classical,
}

impl Regime {
    pub fn as_str(self) -> &'static str {
        match self {
            Regime::Quantum => "quantum",
            Regime::NoSignaling => "nosignaling",
            Regime::Classical => "classical",
        }
    }
}

/// Σ_e w_e ⟨I_e⟩^p ≤ bound, with each I_e normalized to local bound 1.
#[derive(Debug, Clone, PartialEq)]
pub struct TradeOffRelation {
    pub name: String,
    pub hypergraph: Hypergraph,
    pub expressions: Vec<CorrelationExpression>,
    /// How many times each edge is counted (w_e).
    pub multiplicity: Vec<usize>,
    pub exponent: u8,
    pub bound: f64,
    /// Local bound of the unnormalized per-edge expression, when all edges share one.
    pub scale: Option<f64>,
    pub regime: Regime,
    pub plane: Plane,
    /// Known grouping of the operators, used before any search.
    pub construction: Option<Grouping>,
}

impl TradeOffRelation {
    /// Relation with unit multiplicities, no known grouping and the x-z plane.
    pub fn new(
        name: impl Into<String>,
        hypergraph: Hypergraph,
        expressions: Vec<CorrelationExpression>,
        exponent: u8,
        bound: f64,
        regime: Regime,
    ) -> Result<Self, NetworkError> {
        let rel = TradeOffRelation {
            name: name.into(),
            multiplicity: vec![1; hypergraph.n_edges()],
            hypergraph,
            expressions,
            exponent,
            bound,
            scale: None,
            regime,
            plane: Plane::XZ,
            construction: None,
        };
        rel.validate()?;
        Ok(rel)
    }

    pub fn validate(&self) -> Result<(), NetworkError> {
        let bad = |s: String| Err(NetworkError::InvalidRelation(s));
        if !(self.bound > 0.0 && self.bound.is_finite()) {
            return bad(format!("bound {} must be positive", self.bound));
        }
        match (self.exponent, self.regime) {
            (1, _) | (2, Regime::Quantum) => {}
            (e, r) => return bad(format!("exponent {e} with regime {}", r.as_str())),
        }
        let m = self.hypergraph.n_edges();
        if self.expressions.len() != m || self.multiplicity.len() != m {
            return bad(format!("{m} edges but {} expressions", self.expressions.len()));
        }
        if self.multiplicity.contains(&0) {
            return bad("zero multiplicity".into());
        }
        for (e, x) in self.hypergraph.edges().iter().zip(&self.expressions) {
            if x.n_parties() != e.len() {
                return bad(format!("edge {e:?} has {} parties, expression {}", e.len(), x.n_parties()));
            }
        }
        Ok(())
    }

    pub fn with_multiplicity(mut self, multiplicity: Vec<usize>) -> Result<Self, NetworkError> {
        self.multiplicity = multiplicity;
        self.validate()?;
        Ok(self)
    }

    pub fn with_construction(mut self, g: Grouping) -> Self {
        self.construction = Some(g);
        self
    }

    /// Right-hand side in units of the unnormalized expressions.
    pub fn unnormalized_bound(&self) -> Option<f64> {
        self.scale.map(|s| self.bound * s.powi(self.exponent as i32))
    }

    /// Number of inputs per vertex, taken from the expressions.
    pub fn inputs_per_vertex(&self) -> Result<Vec<usize>, NetworkError> {
        let mut m = vec![0usize; self.hypergraph.n_vertices()];
        for (e, x) in self.hypergraph.edges().iter().zip(&self.expressions) {
            for (j, &v) in e.iter().enumerate() {
                let k = x.inputs()[j];
                if m[v] != 0 && m[v] != k {
                    return Err(NetworkError::InvalidRelation(format!("vertex {v} has {} and {k} inputs", m[v])));
                }
                m[v] = k;
            }
        }
        Ok(m.into_iter().map(|k| k.max(1)).collect())
    }

    /// Normalized Bell value of every edge under a one-qubit-per-vertex strategy.
    pub fn edge_values(&self, strategy: &QuantumStrategy) -> Result<Vec<f64>, NetworkError> {
        self.hypergraph
            .edges()
            .iter()
            .zip(&self.expressions)
            .map(|(e, x)| Ok(bell_value(x, strategy, e)?))
            .collect()
    }

    /// Σ_e w_e ⟨I_e⟩^p.
    pub fn lhs(&self, values: &[f64]) -> f64 {
        values.iter().zip(&self.multiplicity).map(|(v, &w)| w as f64 * v.powi(self.exponent as i32)).sum()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "vertices": self.hypergraph.n_vertices(),
            "edges": self.hypergraph.edges(),
            "multiplicity": self.multiplicity,
            "exponent": self.exponent,
            "bound": self.bound,
            "unnormalized_bound": self.unnormalized_bound(),
            "regime": self.regime,
            "plane": self.plane,
            "expressions": self.expressions.iter().map(CorrelationExpression::to_json).collect::<Vec<_>>(),
        })
    }

    /// Reads the network JSON. Missing expressions default to the normalized
    /// Mermin-Klyshko expression of each edge size.
    pub fn from_json(v: &Value) -> Result<Self, NetworkError> {
        let bad = |s: &str| NetworkError::InvalidRelation(s.to_string());
        let n = v["vertices"].as_u64().ok_or_else(|| bad("missing \"vertices\""))? as usize;
        let edges: Vec<Vec<usize>> =
            serde_json::from_value(v["edges"].clone()).map_err(|_| bad("\"edges\" must be a list of vertex lists"))?;
        let hg = Hypergraph::new(n, edges)?;
        let exponent = v.get("exponent").and_then(Value::as_u64).unwrap_or(2) as u8;
        let bound = v["bound"].as_f64().ok_or_else(|| bad("missing \"bound\""))?;
        let regime: Regime = match v.get("regime") {
            Some(r) => serde_json::from_value(r.clone()).map_err(|_| bad("unknown regime"))?,
            None => Regime::Quantum,
        };
        let expressions = match v.get("expressions").and_then(Value::as_array) {
            Some(list) => list.iter().map(CorrelationExpression::from_json).collect::<Result<Vec<_>, _>>()?,
            None => hg.edges().iter().map(|e| mermin_klyshko(e.len())).collect::<Result<Vec<_>, _>>()?,
        };
        let name = v.get("name").and_then(Value::as_str).unwrap_or("custom");
        let mut rel = TradeOffRelation::new(name, hg, expressions, exponent, bound, regime)?;
        if let Some(m) = v.get("multiplicity") {
            let m: Vec<usize> = serde_json::from_value(m.clone()).map_err(|_| bad("bad \"multiplicity\""))?;
            rel = rel.with_multiplicity(m)?;
        }
        if let Some(p) = v.get("plane") {
            rel.plane = serde_json::from_value(p.clone()).map_err(|_| bad("plane must be \"xz\" or \"xy\""))?;
        }
        Ok(rel)
    }
}

/// One vertex of the anti-commutation graph of a relation.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NetworkOperator {
    pub op: PauliString,
    /// Distinguishes the repeated strings of an edge counted more than once.
    pub copy: usize,
    pub edge: usize,
}

/// One string per correlation tensor entry of every edge: the plane axes on
/// the edge, identity elsewhere. Entry bit (k-1-j) selects the axis of the
/// j-th edge vertex.
pub fn operators_of(relation: &TradeOffRelation) -> Result<Vec<NetworkOperator>, NetworkError> {
    if relation.exponent != 2 {
        return Err(NetworkError::WrongExponent);
    }
    let n = relation.hypergraph.n_vertices();
    let axes = relation.plane.axes();
    let mut out: Vec<NetworkOperator> = Vec::new();
    for (ei, e) in relation.hypergraph.edges().iter().enumerate() {
        let k = e.len();
        for copy in 0..relation.multiplicity[ei] {
            for a in 0..1usize << k {
                let placements: Vec<_> = e.iter().enumerate().map(|(j, &q)| (q, axes[a >> (k - 1 - j) & 1])).collect();
                let op = PauliString::single(n, &placements);
                if !out.iter().any(|o| o.op == op && o.copy == copy) {
                    out.push(NetworkOperator { op, copy, edge: ei });
                }
            }
        }
    }
    Ok(out)
}

pub fn graph_of(relation: &TradeOffRelation) -> Result<ACGraph, NetworkError> {
    let ops = operators_of(relation)?;
    let tagged: Vec<(PauliString, usize)> = ops.iter().map(|o| (o.op, o.copy)).collect();
    Ok(build_graph_with_copies(&tagged)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoverMethod {
    Construction,
    Greedy,
    Exact,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Certification {
    Certified { certificate: CliqueCoverCertificate, method: CoverMethod, stats: SearchStats },
    /// The exact search exhausted every partition into `bound` groups.
    NotCertifiable { stats: SearchStats },
    Inconclusive { stats: SearchStats, reason: String },
}

impl Certification {
    pub fn certificate(&self) -> Option<&CliqueCoverCertificate> {
        match self {
            Certification::Certified { certificate, .. } => Some(certificate),
            _ => None,
        }
    }
    pub fn status(&self) -> &'static str {
        match self {
            Certification::Certified { .. } => "certified",
            Certification::NotCertifiable { .. } => "not_certifiable",
            Certification::Inconclusive { .. } => "inconclusive",
        }
    }
}

/// Tries the known grouping, then a greedy cover, then the exhaustive search
/// for a partition into `bound` anti-commuting groups.
pub fn certify_by_complementarity(
    relation: &TradeOffRelation,
    node_budget: Option<u64>,
) -> Result<(ACGraph, Certification), NetworkError> {
    let graph = graph_of(relation)?;
    let verified = |c: &CliqueCoverCertificate| -> Result<bool, NetworkError> {
        Ok(c.n_groups() as f64 <= relation.bound + 1e-9 && verify_certificate(&graph, c)?.valid)
    };
    if let Some(g) = &relation.construction {
        if let Ok(cert) = CliqueCoverCertificate::from_labels(&graph, &g.groups) {
            if verified(&cert)? {
                let c = Certification::Certified { certificate: cert, method: CoverMethod::Construction, stats: SearchStats::default() };
                return Ok((graph, c));
            }
        }
    }
    let k = relation.bound.round();
    if (relation.bound - k).abs() > 1e-9 || k < 1.0 {
        let reason = format!("bound {} is not a positive integer", relation.bound);
        return Ok((graph, Certification::Inconclusive { stats: SearchStats::default(), reason }));
    }
    let k = k as usize;
    if graph.len() % k != 0 {
        let reason = format!("{} operators do not split into {k} equal groups", graph.len());
        return Ok((graph, Certification::Inconclusive { stats: SearchStats::default(), reason }));
    }
    let size = graph.len() / k;
    if let Some(cert) = greedy_cover(&graph, size)? {
        if cert.n_groups() == k && verified(&cert)? {
            return Ok((graph, Certification::Certified { certificate: cert, method: CoverMethod::Greedy, stats: SearchStats::default() }));
        }
    }
    let outcome = exact_cover(&graph, k, size, Some(node_budget.unwrap_or(DEFAULT_CERTIFY_BUDGET)))?;
    let c = match outcome {
        CoverOutcome::Found(cert, stats) => {
            if !verified(&cert)? {
                return Err(GraphError::Verification("exact cover returned an invalid partition".into()).into());
            }
            Certification::Certified { certificate: cert, method: CoverMethod::Exact, stats }
        }
        CoverOutcome::ProvenImpossible(stats) => Certification::NotCertifiable { stats },
        CoverOutcome::Inconclusive(stats) => Certification::Inconclusive { stats, reason: "node budget exhausted".into() },
    };
    Ok((graph, c))
}

/// (1/√2) Σ_e α_e |e⟩ + (1/√2) |1..1⟩, where |e⟩ has zeros on e and ones elsewhere.
pub fn spherical_tightness_state(hypergraph: &Hypergraph, alpha: &[f64]) -> Result<StateVector, NetworkError> {
    let k = hypergraph
        .uniform_rank()
        .ok_or_else(|| NetworkError::InvalidHypergraph("edges of different sizes".into()))?;
    if k % 2 == 0 {
        return Err(NetworkError::EvenK(k));
    }
    if alpha.len() != hypergraph.n_edges() {
        return Err(QuantumError::SizeMismatch { expected: hypergraph.n_edges(), got: alpha.len() }.into());
    }
    let s: f64 = alpha.iter().map(|a| a * a).sum();
    if (s - 1.0).abs() > 1e-12 || alpha.iter().any(|a| *a < 0.0) {
        return Err(NetworkError::BadNormalization(s));
    }
    let n = hypergraph.n_vertices();
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let mut amps = vec![0.0; 1 << n];
    amps[(1 << n) - 1] = h;
    for (e, a) in hypergraph.edges().iter().zip(alpha) {
        let bits: Vec<u8> = (0..n).map(|q| u8::from(!e.contains(&q))).collect();
        amps[StateVector::index_of_bits(&bits)] = h * a;
    }
    Ok(StateVector::from_real(n, &amps)?)
}
