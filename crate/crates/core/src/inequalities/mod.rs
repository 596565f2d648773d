//! Full-correlation Bell expressions Σ_x C(x) E(x_1, .., x_n) and their bounds.
//!
//! Inputs are 0-based throughout; coefficient tensors are stored row-major
//! with party 0 varying slowest.

mod bounds;
mod families;

pub use bounds::{
    bilocal_bound, hybrid_bilocal_bound, local_bound, quantum_upper_bound_spectral, BoundsRecord,
    LOCAL_ENUMERATION_CAP,
};
pub use families::{
    chain, chsh, decompose_chain_to_chsh, gen_svetlichny, mermin3, mermin_klyshko,
    mermin_klyshko_exact, slofstra_game, svetlichny, svetlichny_exact, ww_zb_facet,
};

use serde_json::{json, Value};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("coefficient tensor has {got} entries, shape {shape:?} needs {expected}")]
    ShapeMismatch { shape: Vec<usize>, got: usize, expected: usize },
    #[error("coefficient {0} is not finite")]
    NonFinite(f64),
    #[error("sign table has {got} entries, expected {expected} values of +1/-1")]
    IncompleteSignTable { got: usize, expected: usize },
    #[error("n = {0} is outside the supported range")]
    NOutOfRange(usize),
    #[error("m = {0} must be even and at least 2")]
    OddM(usize),
    #[error("tensor of {0} entries exceeds the size guard")]
    SizeGuard(usize),
    #[error("enumeration over 2^{0} strategies exceeds the cap")]
    TooLargeForEnumeration(usize),
    #[error("graph has no edges")]
    EmptyGraph,
    #[error("partition is not a split of the parties into two nonempty blocks")]
    BadPartition,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationExpression {
    name: String,
    inputs: Vec<usize>,
    coeffs: Vec<f64>,
}

impl CorrelationExpression {
    pub fn new(name: impl Into<String>, inputs: Vec<usize>, coeffs: Vec<f64>) -> Result<Self, ExprError> {
        let expected: usize = inputs.iter().product();
        if coeffs.len() != expected || inputs.is_empty() || inputs.contains(&0) {
            return Err(ExprError::ShapeMismatch { shape: inputs, got: coeffs.len(), expected });
        }
        if let Some(&bad) = coeffs.iter().find(|c| !c.is_finite()) {
            return Err(ExprError::NonFinite(bad));
        }
        Ok(CorrelationExpression { name: name.into(), inputs, coeffs })
    }

    pub fn from_fn(name: impl Into<String>, inputs: Vec<usize>, f: impl Fn(&[usize]) -> f64) -> Self {
        let coeffs = TupleIter::new(&inputs).map(|x| f(&x)).collect();
        CorrelationExpression::new(name, inputs, coeffs).expect("shape follows inputs")
    }

    pub fn name(&self) -> &str {
        &self.name
    }
    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }
    pub fn n_parties(&self) -> usize {
        self.inputs.len()
    }
    pub fn inputs(&self) -> &[usize] {
        &self.inputs
    }
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn flat_index(&self, x: &[usize]) -> usize {
        x.iter().zip(&self.inputs).fold(0, |acc, (&xi, &m)| acc * m + xi)
    }

    pub fn coeff(&self, x: &[usize]) -> f64 {
        self.coeffs[self.flat_index(x)]
    }

    /// (input tuple, coefficient) pairs in storage order.
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, f64)> + '_ {
        TupleIter::new(&self.inputs).zip(self.coeffs.iter().copied())
    }

    pub fn algebraic_max(&self) -> f64 {
        self.coeffs.iter().map(|c| c.abs()).sum()
    }

    pub fn scaled(&self, k: f64) -> Self {
        CorrelationExpression {
            name: self.name.clone(),
            inputs: self.inputs.clone(),
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self, ExprError> {
        if self.inputs != other.inputs {
            return Err(ExprError::ShapeMismatch {
                shape: self.inputs.clone(),
                got: other.coeffs.len(),
                expected: self.coeffs.len(),
            });
        }
        Ok(CorrelationExpression {
            name: format!("{}+{}", self.name, other.name),
            inputs: self.inputs.clone(),
            coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect(),
        })
    }

    /// Same expression divided by its local bound.
    pub fn normalized(&self) -> Result<Self, ExprError> {
        let b = local_bound(self)?;
        Ok(self.scaled(1.0 / b).with_name(format!("{}/{}", self.name, b)))
    }

    /// Relabel inputs (`perm[i][x]` is the old input shown as new input x)
    /// and flip outputs (`signs[i][x]`).
    pub fn relabeled(&self, perm: &[Vec<usize>], signs: &[Vec<f64>]) -> Self {
        CorrelationExpression::from_fn(self.name.clone(), self.inputs.clone(), |x| {
            let old: Vec<usize> = x.iter().enumerate().map(|(i, &xi)| perm[i][xi]).collect();
            let s: f64 = x.iter().enumerate().map(|(i, &xi)| signs[i][xi]).product();
            s * self.coeff(&old)
        })
    }

    /// Matrix slice over parties 0 and 1 with the remaining inputs fixed.
    pub fn slice2(&self, rest: &[usize]) -> Vec<Vec<f64>> {
        assert_eq!(rest.len() + 2, self.n_parties());
        (0..self.inputs[0])
            .map(|a| {
                (0..self.inputs[1])
                    .map(|b| {
                        let mut x = vec![a, b];
                        x.extend_from_slice(rest);
                        self.coeff(&x)
                    })
                    .collect()
            })
            .collect()
    }

    pub fn to_json(&self) -> Value {
        json!({
            "parties": self.n_parties(),
            "inputs": self.inputs,
            "coeffs": nest(&self.inputs, &self.coeffs),
            "name": self.name,
        })
    }

    pub fn from_json(v: &Value) -> Result<Self, ExprError> {
        let bad = || ExprError::ShapeMismatch { shape: vec![], got: 0, expected: 0 };
        let inputs: Vec<usize> = v["inputs"]
            .as_array()
            .ok_or_else(bad)?
            .iter()
            .map(|x| x.as_u64().map(|u| u as usize).ok_or_else(bad))
            .collect::<Result<_, _>>()?;
        let mut coeffs = Vec::new();
        flatten(&v["coeffs"], &mut coeffs).ok_or_else(bad)?;
        let name = v["name"].as_str().unwrap_or("custom");
        CorrelationExpression::new(name, inputs, coeffs)
    }
}

fn nest(shape: &[usize], data: &[f64]) -> Value {
    if shape.len() == 1 {
        return json!(data);
    }
    let stride = data.len() / shape[0];
    Value::Array(data.chunks(stride).map(|c| nest(&shape[1..], c)).collect())
}

fn flatten(v: &Value, out: &mut Vec<f64>) -> Option<()> {
    match v {
        Value::Array(items) => items.iter().try_for_each(|i| flatten(i, out)),
        Value::Number(n) => {
            out.push(n.as_f64()?);
            Some(())
        }
        _ => None,
    }
}

/// Odometer over input tuples, last party fastest.
pub struct TupleIter {
    shape: Vec<usize>,
    next: Option<Vec<usize>>,
}

impl TupleIter {
    pub fn new(shape: &[usize]) -> Self {
        let start = (!shape.contains(&0)).then(|| vec![0; shape.len()]);
        TupleIter { shape: shape.to_vec(), next: start }
    }
}

impl Iterator for TupleIter {
    type Item = Vec<usize>;
    fn next(&mut self) -> Option<Vec<usize>> {
        let cur = self.next.take()?;
        let mut n = cur.clone();
        for i in (0..n.len()).rev() {
            n[i] += 1;
            if n[i] < self.shape[i] {
                self.next = Some(n);
                return Some(cur);
            }
            n[i] = 0;
        }
        Some(cur)
    }
}

fn permutations(m: usize) -> Vec<Vec<usize>> {
    if m == 0 {
        return vec![vec![]];
    }
    let mut out = Vec::new();
    for p in permutations(m - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, m - 1);
            out.push(q);
        }
    }
    out
}

/// Whether `b` arises from `a` by permuting each party's inputs and flipping
/// outcome signs per party and input. Brute force; intended for small shapes.
pub fn equivalent_up_to_relabeling(a: &CorrelationExpression, b: &CorrelationExpression) -> bool {
    if a.inputs != b.inputs {
        return false;
    }
    let n = a.n_parties();
    let perms: Vec<Vec<Vec<usize>>> = a.inputs.iter().map(|&m| permutations(m)).collect();
    let total_inputs: usize = a.inputs.iter().sum();
    assert!(total_inputs <= 16, "relabeling search is brute force");
    let mut choice = vec![0usize; n];
    loop {
        let perm: Vec<Vec<usize>> = (0..n).map(|i| perms[i][choice[i]].clone()).collect();
        for mask in 0u32..1 << total_inputs {
            let mut bit = 0;
            let signs: Vec<Vec<f64>> = a
                .inputs
                .iter()
                .map(|&m| {
                    (0..m)
                        .map(|_| {
                            let s = if mask >> bit & 1 == 1 { -1.0 } else { 1.0 };
                            bit += 1;
                            s
                        })
                        .collect()
                })
                .collect();
            let r = a.relabeled(&perm, &signs);
            if r.coeffs.iter().zip(&b.coeffs).all(|(x, y)| (x - y).abs() < 1e-12) {
                return true;
            }
        }
        let mut i = 0;
        loop {
            if i == n {
                return false;
            }
            choice[i] += 1;
            if choice[i] < perms[i].len() {
                break;
            }
            choice[i] = 0;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tuple_order_is_row_major() {
        let t: Vec<Vec<usize>> = TupleIter::new(&[2, 3]).collect();
        assert_eq!(t.len(), 6);
        assert_eq!(t[1], vec![0, 1]);
        assert_eq!(t[3], vec![1, 0]);
    }

    #[test]
    fn json_roundtrip() {
        let e = chsh();
        let j = e.to_json();
        assert_eq!(j["coeffs"], json!([[1.0, 1.0], [1.0, -1.0]]));
        assert_eq!(CorrelationExpression::from_json(&j).unwrap(), e);
    }

    #[test]
    fn shape_checked() {
        assert!(matches!(
            CorrelationExpression::new("x", vec![2, 2], vec![1.0; 3]),
            Err(ExprError::ShapeMismatch { .. })
        ));
        assert!(matches!(
            CorrelationExpression::new("x", vec![1], vec![f64::NAN]),
            Err(ExprError::NonFinite(_))
        ));
    }

    #[test]
    fn relabeling_detects_chsh_orbit() {
        let c = chsh();
        let flipped = c.relabeled(&[vec![1, 0], vec![0, 1]], &[vec![1.0, -1.0], vec![1.0, 1.0]]);
        assert!(equivalent_up_to_relabeling(&c, &flipped));
        let not = CorrelationExpression::new("x", vec![2, 2], vec![1.0, 1.0, 1.0, 1.0]).unwrap();
        assert!(!equivalent_up_to_relabeling(&c, &not));
    }
}
