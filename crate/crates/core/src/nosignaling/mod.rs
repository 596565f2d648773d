//! No-signaling boxes in correlator coordinates and linear programs over them.
//!
//! Only binary outputs are handled. A box is parametrized by the full set of
//! subset correlators E_S(x_S), one per subset S of parties and input choice
//! for S, with E_∅ = 1. This is the Collins-Gisin parametrization rewritten in
//! the ±1 basis, so any coordinate vector maps to a signaling-free table.

mod prop8;

pub use prop8::{prop8_bound, prop8_inputs, prop8_local_model, Prop8Bound, Prop8Model, Prop8Route, ShiftedExpression, ShiftedTerm};

use bml_simplex::{maximize, max_violation, BigRational, LpError, Options, Problem, Scalar, VarKind};
use rand::Rng;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use thiserror::Error;

use crate::inequalities::{chain, chsh, mermin3, CorrelationExpression, ExprError, TupleIter};
use crate::networks::{NetworkError, TradeOffRelation};

pub const MAX_LP_VARS: usize = 3000;
pub const MAX_LP_ROWS: usize = 200_000;
/// Largest positivity-row count accepted by the rational solver.
pub const MAX_EXACT_ROWS: usize = 1024;
pub const BOX_TOL: f64 = 1e-9;
/// Primal feasibility slack tolerated before a float solve is rejected.
pub const LP_FEAS_TOL: f64 = 1e-7;

#[derive(Debug, Error, PartialEq)]
pub enum NsError {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("invalid scenario: {0}")]
    InvalidScenario(String),
    #[error("only binary outputs are supported, got {0}")]
    UnsupportedOutputs(usize),
    #[error("invalid box: {0}")]
    InvalidBox(String),
    #[error("invalid objective: {0}")]
    InvalidObjective(String),
    #[error("LP with {vars} variables and {rows} rows exceeds the size guard")]
    TooLarge { vars: usize, rows: usize },
    #[error("LP numerical failure: {0}")]
    LpNumericalFailure(String),
    #[error(transparent)]
    Lp(#[from] LpError),
    #[error("conditioning marginal vanishes at outputs {0:?}")]
    ZeroMarginal(Vec<u8>),
    #[error("not covered by the shift argument: {0}")]
    NotCovered(String),
    #[error("unknown preset {0}")]
    UnknownPreset(String),
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Network(#[from] NetworkError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Scenario {
    pub inputs: Vec<usize>,
    pub outputs: Vec<usize>,
}

impl Scenario {
    pub fn new(inputs: Vec<usize>, outputs: Vec<usize>) -> Result<Self, NsError> {
        if inputs.is_empty() || inputs.len() != outputs.len() {
            return Err(NsError::InvalidScenario(format!("{} input counts, {} output counts", inputs.len(), outputs.len())));
        }
        if inputs.contains(&0) {
            return Err(NsError::InvalidScenario("every party needs an input".into()));
        }
        if let Some(&d) = outputs.iter().find(|&&d| d != 2) {
            return Err(if d < 2 {
                NsError::InvalidScenario(format!("{d} outputs"))
            } else {
                NsError::UnsupportedOutputs(d)
            });
        }
        if inputs.len() > 16 {
            return Err(NsError::InvalidScenario(format!("{} parties", inputs.len())));
        }
        Ok(Scenario { inputs, outputs })
    }

    pub fn binary(inputs: Vec<usize>) -> Result<Self, NsError> {
        let n = inputs.len();
        Scenario::new(inputs, vec![2; n])
    }

    pub fn n_parties(&self) -> usize {
        self.inputs.len()
    }

    pub fn n_input_tuples(&self) -> usize {
        self.inputs.iter().product()
    }

    pub fn n_output_tuples(&self) -> usize {
        1 << self.n_parties()
    }

    pub fn table_len(&self) -> usize {
        self.n_input_tuples() * self.n_output_tuples()
    }

    /// Π_i (m_i(d_i - 1) + 1).
    pub fn cg_len(&self) -> usize {
        self.inputs.iter().map(|m| m + 1).product()
    }

    pub(crate) fn x_index(&self, x: &[usize]) -> usize {
        x.iter().zip(&self.inputs).fold(0, |acc, (&xi, &m)| acc * m + xi)
    }

    /// Digit vector (0 = party absent, x+1 = input x) to flat cg index.
    fn cg_index(&self, digits: &[usize]) -> usize {
        digits.iter().zip(&self.inputs).fold(0, |acc, (&d, &m)| acc * (m + 1) + d)
    }

    /// Bit of party i inside an output index; party 0 is the most significant.
    fn out_bit(&self, o: usize, i: usize) -> usize {
        (o >> (self.n_parties() - 1 - i)) & 1
    }
}

/// Full table P(o|x), stored at `x_index * 2^n + o`.
#[derive(Debug, Clone, PartialEq)]
pub struct NSBox {
    scenario: Scenario,
    probs: Vec<f64>,
}

impl NSBox {
    pub fn new(scenario: Scenario, probs: Vec<f64>) -> Result<Self, NsError> {
        if probs.len() != scenario.table_len() {
            return Err(NsError::DimensionMismatch { expected: scenario.table_len(), got: probs.len() });
        }
        let b = NSBox { scenario, probs };
        b.validate()?;
        Ok(b)
    }

    fn validate(&self) -> Result<(), NsError> {
        let s = &self.scenario;
        let d = s.n_output_tuples();
        if let Some(p) = self.probs.iter().find(|p| !p.is_finite() || **p < -BOX_TOL) {
            return Err(NsError::InvalidBox(format!("probability {p}")));
        }
        for (xi, row) in self.probs.chunks(d).enumerate() {
            let total: f64 = row.iter().sum();
            if (total - 1.0).abs() > BOX_TOL {
                return Err(NsError::InvalidBox(format!("input tuple {xi} sums to {total}")));
            }
        }
        for i in 0..s.n_parties() {
            for x in TupleIter::new(&s.inputs).filter(|x| x[i] == 0) {
                let base = self.drop_party(i, &x);
                for xi in 1..s.inputs[i] {
                    let mut y = x.clone();
                    y[i] = xi;
                    let other = self.drop_party(i, &y);
                    if base.iter().zip(&other).any(|(a, b)| (a - b).abs() > BOX_TOL) {
                        return Err(NsError::InvalidBox(format!("marginal without party {i} depends on its input")));
                    }
                }
            }
        }
        Ok(())
    }

    /// P(o|x) summed over party i's output, indexed by the full output with bit i cleared.
    fn drop_party(&self, i: usize, x: &[usize]) -> Vec<f64> {
        let s = &self.scenario;
        let d = s.n_output_tuples();
        let row = &self.probs[s.x_index(x) * d..(s.x_index(x) + 1) * d];
        let bit = 1 << (s.n_parties() - 1 - i);
        (0..d).filter(|o| o & bit == 0).map(|o| row[o] + row[o | bit]).collect()
    }

    pub fn scenario(&self) -> &Scenario {
        &self.scenario
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn prob(&self, o: &[u8], x: &[usize]) -> f64 {
        let s = &self.scenario;
        let oi = o.iter().fold(0, |acc, &b| (acc << 1) | b as usize);
        self.probs[s.x_index(x) * s.n_output_tuples() + oi]
    }

    pub fn white_noise(scenario: &Scenario) -> Self {
        let p = 1.0 / scenario.n_output_tuples() as f64;
        NSBox { scenario: scenario.clone(), probs: vec![p; scenario.table_len()] }
    }

    /// Local deterministic box; `outcomes[i][x]` is party i's bit on input x.
    pub fn deterministic(scenario: &Scenario, outcomes: &[Vec<u8>]) -> Result<Self, NsError> {
        let n = scenario.n_parties();
        if outcomes.len() != n || outcomes.iter().zip(&scenario.inputs).any(|(o, &m)| o.len() != m) {
            return Err(NsError::DimensionMismatch { expected: n, got: outcomes.len() });
        }
        let d = scenario.n_output_tuples();
        let mut probs = vec![0.0; scenario.table_len()];
        for x in TupleIter::new(&scenario.inputs) {
            let o = (0..n).fold(0, |acc, i| (acc << 1) | (outcomes[i][x[i]] & 1) as usize);
            probs[scenario.x_index(&x) * d + o] = 1.0;
        }
        Ok(NSBox { scenario: scenario.clone(), probs })
    }

    /// P(a,b|x,y) = 1/2 when a ⊕ b = xy.
    pub fn pr_box() -> Self {
        let scenario = Scenario::binary(vec![2, 2]).expect("valid");
        let mut probs = vec![0.0; 16];
        for x in 0..2 {
            for y in 0..2 {
                for a in 0..2 {
                    let b = a ^ (x & y);
                    probs[(x * 2 + y) * 4 + a * 2 + b] = 0.5;
                }
            }
        }
        NSBox { scenario, probs }
    }

    /// Box on the parties of `self` followed by those of `other`.
    pub fn product(&self, other: &NSBox) -> NSBox {
        let mut inputs = self.scenario.inputs.clone();
        inputs.extend(&other.scenario.inputs);
        let scenario = Scenario::binary(inputs).expect("parties of valid boxes");
        let (da, db) = (self.scenario.n_output_tuples(), other.scenario.n_output_tuples());
        let mut probs = Vec::with_capacity(scenario.table_len());
        for xa in 0..self.scenario.n_input_tuples() {
            for xb in 0..other.scenario.n_input_tuples() {
                for oa in 0..da {
                    for ob in 0..db {
                        probs.push(self.probs[xa * da + oa] * other.probs[xb * db + ob]);
                    }
                }
            }
        }
        NSBox { scenario, probs }
    }

    pub fn mix(parts: &[(f64, &NSBox)]) -> Result<NSBox, NsError> {
        let first = parts.first().ok_or(NsError::DimensionMismatch { expected: 1, got: 0 })?.1;
        let mut probs = vec![0.0; first.probs.len()];
        for (w, b) in parts {
            if b.scenario != first.scenario {
                return Err(NsError::InvalidBox("mixing boxes of different scenarios".into()));
            }
            for (p, q) in probs.iter_mut().zip(&b.probs) {
                *p += w * q;
            }
        }
        NSBox::new(first.scenario.clone(), probs)
    }

    pub fn random_deterministic<R: Rng>(scenario: &Scenario, rng: &mut R) -> NSBox {
        let outcomes: Vec<Vec<u8>> = scenario.inputs.iter().map(|&m| (0..m).map(|_| rng.random_range(0..2)).collect()).collect();
        NSBox::deterministic(scenario, &outcomes).expect("shape from scenario")
    }

    /// Strictly positive box: white noise, a few deterministic boxes and, when
    /// the first two parties have two inputs each, a PR box on them.
    pub fn random_interior<R: Rng>(scenario: &Scenario, rng: &mut R) -> NSBox {
        let mut boxes = vec![NSBox::white_noise(scenario)];
        for _ in 0..4 {
            boxes.push(NSBox::random_deterministic(scenario, rng));
        }
        if scenario.n_parties() >= 2 && scenario.inputs[0] == 2 && scenario.inputs[1] == 2 {
            let pr = if scenario.n_parties() == 2 {
                NSBox::pr_box()
            } else {
                let rest = Scenario::binary(scenario.inputs[2..].to_vec()).expect("valid");
                NSBox::pr_box().product(&NSBox::random_deterministic(&rest, rng))
            };
            boxes.push(pr);
        }
        let mut w: Vec<f64> = boxes.iter().map(|_| rng.random_range(0.05..1.0)).collect();
        w[0] += 0.2;
        let total: f64 = w.iter().sum();
        let parts: Vec<(f64, &NSBox)> = w.iter().map(|v| v / total).zip(boxes.iter()).collect();
        NSBox::mix(&parts).expect("same scenario")
    }

    /// ⟨Π_{i∈parties} (-1)^{o_i}⟩ at the given inputs of those parties.
    pub fn correlator(&self, parties: &[usize], x: &[usize]) -> f64 {
        let s = &self.scenario;
        let mut full = vec![0usize; s.n_parties()];
        for (&p, &xi) in parties.iter().zip(x) {
            full[p] = xi;
        }
        let d = s.n_output_tuples();
        let row = &self.probs[s.x_index(&full) * d..(s.x_index(&full) + 1) * d];
        row.iter()
            .enumerate()
            .map(|(o, p)| {
                let parity = parties.iter().map(|&i| s.out_bit(o, i)).sum::<usize>() % 2;
                if parity == 0 {
                    *p
                } else {
                    -*p
                }
            })
            .sum()
    }
}

fn subset_digits(s: &Scenario, mask: usize, x: &[usize]) -> Vec<usize> {
    (0..s.n_parties()).map(|i| if mask >> i & 1 == 1 { x[i] + 1 } else { 0 }).collect()
}

fn subset_sign(s: &Scenario, mask: usize, o: usize) -> f64 {
    let parity = (0..s.n_parties()).filter(|&i| mask >> i & 1 == 1).map(|i| s.out_bit(o, i)).sum::<usize>() % 2;
    if parity == 0 {
        1.0
    } else {
        -1.0
    }
}

/// Subset correlators of a box, cg[0] = 1.
pub fn cg_parametrize(b: &NSBox) -> Vec<f64> {
    let s = &b.scenario;
    let mut cg = vec![0.0; s.cg_len()];
    for digits in TupleIter::new(&s.inputs.iter().map(|m| m + 1).collect::<Vec<_>>()) {
        let parties: Vec<usize> = (0..s.n_parties()).filter(|&i| digits[i] > 0).collect();
        let x: Vec<usize> = parties.iter().map(|&i| digits[i] - 1).collect();
        cg[s.cg_index(&digits)] = if parties.is_empty() { 1.0 } else { b.correlator(&parties, &x) };
    }
    cg
}

/// P(o|x) = 2^{-n} Σ_S Π_{i∈S} (-1)^{o_i} E_S(x_S). The table need not be
/// positive; use `NSBox::new` to validate it.
pub fn cg_to_full(cg: &[f64], scenario: &Scenario) -> Result<Vec<f64>, NsError> {
    if cg.len() != scenario.cg_len() {
        return Err(NsError::DimensionMismatch { expected: scenario.cg_len(), got: cg.len() });
    }
    let n = scenario.n_parties();
    let d = scenario.n_output_tuples();
    let scale = 1.0 / d as f64;
    let mut probs = vec![0.0; scenario.table_len()];
    for x in TupleIter::new(&scenario.inputs) {
        let xi = scenario.x_index(&x);
        let entries: Vec<f64> = (0..1usize << n).map(|mask| cg[scenario.cg_index(&subset_digits(scenario, mask, &x))]).collect();
        for o in 0..d {
            probs[xi * d + o] = scale * (0..1usize << n).map(|mask| subset_sign(scenario, mask, o) * entries[mask]).sum::<f64>();
        }
    }
    Ok(probs)
}

#[derive(Debug, Clone, PartialEq)]
pub struct NsTerm {
    pub weight: f64,
    pub expression: CorrelationExpression,
    /// Scenario party of each expression party.
    pub parties: Vec<usize>,
}

/// Σ_t w_t ⟨I_t⟩ with each expression embedded into a scenario.
#[derive(Debug, Clone, PartialEq)]
pub struct NsObjective {
    pub name: String,
    pub scenario: Scenario,
    pub terms: Vec<NsTerm>,
}

impl NsObjective {
    pub fn new(name: impl Into<String>, scenario: Scenario, terms: Vec<NsTerm>) -> Result<Self, NsError> {
        for t in &terms {
            if t.parties.len() != t.expression.n_parties() {
                return Err(NsError::InvalidObjective(format!("{} needs {} parties", t.expression.name(), t.expression.n_parties())));
            }
            let mut seen = vec![false; scenario.n_parties()];
            for (j, &p) in t.parties.iter().enumerate() {
                if p >= scenario.n_parties() || seen[p] {
                    return Err(NsError::InvalidObjective(format!("bad party {p} in {}", t.expression.name())));
                }
                seen[p] = true;
                if scenario.inputs[p] != t.expression.inputs()[j] {
                    return Err(NsError::InvalidObjective(format!(
                        "party {p} has {} inputs, {} uses {}",
                        scenario.inputs[p],
                        t.expression.name(),
                        t.expression.inputs()[j]
                    )));
                }
            }
            if !t.weight.is_finite() {
                return Err(NsError::InvalidObjective(format!("weight {}", t.weight)));
            }
        }
        Ok(NsObjective { name: name.into(), scenario, terms })
    }

    /// Coefficients on the cg coordinates (entry 0 multiplies the constant 1).
    pub fn cg_vector(&self) -> Vec<f64> {
        let s = &self.scenario;
        let mut c = vec![0.0; s.cg_len()];
        for t in &self.terms {
            for (x, coef) in t.expression.terms() {
                if coef == 0.0 {
                    continue;
                }
                let mut digits = vec![0usize; s.n_parties()];
                for (&p, &xi) in t.parties.iter().zip(&x) {
                    digits[p] = xi + 1;
                }
                c[s.cg_index(&digits)] += t.weight * coef;
            }
        }
        c
    }

    pub fn value_on(&self, b: &NSBox) -> Result<f64, NsError> {
        if b.scenario != self.scenario {
            return Err(NsError::InvalidObjective("box scenario differs".into()));
        }
        Ok(self.cg_vector().iter().zip(cg_parametrize(b)).map(|(c, e)| c * e).sum())
    }

    pub fn to_json(&self) -> Value {
        json!({
            "name": self.name,
            "inputs": self.scenario.inputs,
            "terms": self.terms.iter().map(|t| json!({
                "weight": t.weight,
                "parties": t.parties,
                "expression": t.expression.to_json(),
            })).collect::<Vec<_>>(),
        })
    }

    /// Expressions may be given inline or by name (chsh, mermin3, chain(m)).
    pub fn from_json(v: &Value) -> Result<Self, NsError> {
        let bad = |m: &str| NsError::InvalidObjective(m.to_string());
        let inputs: Vec<usize> = serde_json::from_value(v["inputs"].clone()).map_err(|_| bad("missing inputs"))?;
        let terms = v["terms"].as_array().ok_or_else(|| bad("missing terms"))?;
        let mut out = Vec::with_capacity(terms.len());
        for t in terms {
            let parties: Vec<usize> = serde_json::from_value(t["parties"].clone()).map_err(|_| bad("term without parties"))?;
            let expression = match &t["expression"] {
                Value::String(name) => named_expression(name)?,
                e => CorrelationExpression::from_json(e)?,
            };
            let weight = t.get("weight").and_then(Value::as_f64).unwrap_or(1.0);
            out.push(NsTerm { weight, expression, parties });
        }
        let name = v["name"].as_str().unwrap_or("custom");
        NsObjective::new(name, Scenario::binary(inputs)?, out)
    }
}

fn named_expression(name: &str) -> Result<CorrelationExpression, NsError> {
    let lower = name.to_ascii_lowercase();
    match lower.as_str() {
        "chsh" => return Ok(chsh()),
        "mermin" | "mermin3" => return Ok(mermin3()),
        _ => {}
    }
    if let Some(rest) = lower.strip_prefix("chain") {
        let m: usize = rest.trim_matches(|c| c == '(' || c == ')').parse().map_err(|_| NsError::UnknownPreset(name.into()))?;
        return Ok(chain(m)?);
    }
    Err(NsError::UnknownPreset(name.into()))
}

/// Linear objective Σ_e mult_e · scale · I_e over the relation's vertices.
pub fn ns_objective_from_relation(rel: &TradeOffRelation) -> Result<NsObjective, NsError> {
    let scenario = Scenario::binary(rel.inputs_per_vertex()?)?;
    let scale = rel.scale.unwrap_or(1.0);
    let terms = rel
        .hypergraph
        .edges()
        .iter()
        .zip(&rel.expressions)
        .zip(&rel.multiplicity)
        .map(|((e, x), &m)| NsTerm { weight: m as f64 * scale, expression: x.clone(), parties: e.clone() })
        .collect();
    NsObjective::new(rel.name.clone(), scenario, terms)
}

pub const NS_PRESET_NAMES: &[&str] = &["chsh-pair", "chsh-mermin-hybrid", "chain(m)-pair"];

/// Objectives with a dedicated name; anything else is looked up as a network preset.
pub fn ns_preset(name: &str) -> Result<NsObjective, NsError> {
    let lower = name.to_ascii_lowercase();
    let term = |weight, expression, parties: Vec<usize>| NsTerm { weight, expression, parties };
    match lower.as_str() {
        "chsh-pair" => {
            return NsObjective::new(name, Scenario::binary(vec![2; 3])?, vec![term(1.0, chsh(), vec![0, 1]), term(1.0, chsh(), vec![0, 2])])
        }
        // A, B1, B2, C1, C2.
        "chsh-mermin-hybrid" | "hybrid" => {
            return NsObjective::new(
                name,
                Scenario::binary(vec![2; 5])?,
                vec![
                    term(1.0, chsh(), vec![0, 1]),
                    term(1.0, chsh(), vec![0, 2]),
                    term(1.0, mermin3(), vec![0, 1, 3]),
                    term(1.0, mermin3(), vec![0, 2, 4]),
                ],
            )
        }
        _ => {}
    }
    if let Some(arg) = lower.strip_suffix("-pair") {
        let expr = named_expression(arg)?;
        if expr.n_parties() != 2 || expr.inputs()[0] != expr.inputs()[1] {
            return Err(NsError::UnknownPreset(name.into()));
        }
        let m = expr.inputs()[0];
        return NsObjective::new(name, Scenario::binary(vec![m; 3])?, vec![term(1.0, expr.clone(), vec![0, 1]), term(1.0, expr, vec![0, 2])]);
    }
    match crate::networks::preset(name) {
        Ok(rel) => ns_objective_from_relation(&rel),
        Err(NetworkError::UnknownPreset(_)) => Err(NsError::UnknownPreset(name.into())),
        Err(e) => Err(e.into()),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpMode {
    Float,
    Exact,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LpReport {
    pub value: f64,
    pub basis_size: usize,
    pub iterations: usize,
    pub mode: LpMode,
    pub n_vars: usize,
    pub n_rows: usize,
    /// Exact optimum as a fraction, in exact mode.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_value: Option<String>,
    /// Optimal cg vector.
    #[serde(skip)]
    pub cg: Vec<f64>,
}

fn build_problem<S: Scalar>(obj: &NsObjective) -> Result<(Problem<S>, S), NsError> {
    let s = &obj.scenario;
    let n = s.n_parties();
    let vars = s.cg_len() - 1;
    let rows = s.table_len();
    if vars > MAX_LP_VARS || rows > MAX_LP_ROWS {
        return Err(NsError::TooLarge { vars, rows });
    }
    let conv = |v: f64| S::from_f64(v).ok_or(NsError::InvalidObjective(format!("coefficient {v}")));
    let c = obj.cg_vector();
    let objective = c[1..].iter().map(|&v| conv(v)).collect::<Result<Vec<S>, _>>()?;
    let mut p = Problem::new(objective, vec![VarKind::Free; vars]);
    let d = s.n_output_tuples();
    for x in TupleIter::new(&s.inputs) {
        let cols: Vec<usize> = (1..1usize << n).map(|mask| s.cg_index(&subset_digits(s, mask, &x)) - 1).collect();
        for o in 0..d {
            // 2^n P(o|x) = 1 + Σ_{S≠∅} sign · E_S ≥ 0.
            let mut row = vec![S::zero(); vars];
            for (k, &col) in cols.iter().enumerate() {
                row[col] = if subset_sign(s, k + 1, o) > 0.0 { S::one().neg() } else { S::one() };
            }
            p.push_row(row, S::one());
        }
    }
    Ok((p, conv(c[0])?))
}

/// max of the objective over the no-signaling polytope.
pub fn ns_max(obj: &NsObjective, mode: LpMode) -> Result<LpReport, NsError> {
    let s = &obj.scenario;
    let n_rows = s.table_len();
    match mode {
        LpMode::Float => {
            let (p, c0) = build_problem::<f64>(obj)?;
            let sol = maximize(&p, Options::default())?;
            let viol = max_violation(&p, &sol.x);
            if viol > LP_FEAS_TOL || !sol.value.is_finite() {
                return Err(NsError::LpNumericalFailure(format!("primal violation {viol:e}")));
            }
            let mut cg = vec![1.0];
            cg.extend(&sol.x);
            Ok(LpReport {
                value: sol.value + c0,
                basis_size: sol.basis_size,
                iterations: sol.iterations,
                mode,
                n_vars: p.n_vars(),
                n_rows,
                exact_value: None,
                cg,
            })
        }
        LpMode::Exact => {
            if n_rows > MAX_EXACT_ROWS {
                return Err(NsError::TooLarge { vars: s.cg_len() - 1, rows: n_rows });
            }
            let (p, c0) = build_problem::<BigRational>(obj)?;
            let sol = maximize(&p, Options::default())?;
            let value = Scalar::add(&sol.value, &c0);
            let mut cg = vec![1.0];
            cg.extend(sol.x.iter().map(Scalar::to_f64));
            Ok(LpReport {
                value: value.to_f64(),
                basis_size: sol.basis_size,
                iterations: sol.iterations,
                mode,
                n_vars: p.n_vars(),
                n_rows,
                exact_value: Some(value.to_string()),
                cg,
            })
        }
    }
}
