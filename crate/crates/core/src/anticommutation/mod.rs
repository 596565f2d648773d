//! Anti-commutation graphs over Pauli strings and clique-cover certificates.
//!
//! A cover of the operators of a relation into k groups of pairwise
//! anti-commuting strings bounds the sum of their squared expectations by k.

mod construct;
mod search;

pub use construct::{complete_graph_representation, iterative_grouping, Grouping};
pub use search::{
    check_prop1, exact_cover, greedy_cover, max_clique, CoverOutcome, Prop1Item, Prop1Report,
    SearchStats,
};

use std::collections::HashSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::pauli::PauliString;

/// Searches use `u128` vertex masks.
pub const MAX_SEARCH_VERTICES: usize = 128;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GraphError {
    #[error("operator {0} appears twice")]
    DuplicateOperator(String),
    #[error("operators act on {0} and {1} qubits")]
    LengthMismatch(usize, usize),
    #[error("vertex index {0} out of range ({1} vertices)")]
    IndexOutOfRange(usize, usize),
    #[error("{groups} groups of {size} cannot partition {vertices} vertices")]
    SizeMismatch { groups: usize, size: usize, vertices: usize },
    #[error("{0} vertices exceeds the search limit of {1}")]
    TooLarge(usize, usize),
    #[error("m = {0} must be even and positive")]
    OddM(usize),
    #[error("inner groupings disagree on the group count ({0} vs {1})")]
    MismatchedGroupCounts(usize, usize),
    #[error("outer groups have {outer} operators but {inner} inner registers were given")]
    NonTransitivePermutations { outer: usize, inner: usize },
    #[error("constructed grouping failed verification: {0}")]
    Verification(String),
}

/// Vertices are Pauli strings; an edge joins two anti-commuting strings.
///
/// `copies` tags repeated strings so a relation that counts an edge twice can
/// still be represented. Copies of one string commute, hence are never adjacent.
#[derive(Debug, Clone)]
pub struct ACGraph {
    vertices: Vec<PauliString>,
    copies: Vec<usize>,
    adj: Vec<Vec<bool>>,
}

impl ACGraph {
    pub fn len(&self) -> usize {
        self.vertices.len()
    }
    pub fn is_empty(&self) -> bool {
        self.vertices.is_empty()
    }
    pub fn vertices(&self) -> &[PauliString] {
        &self.vertices
    }
    pub fn vertex(&self, i: usize) -> &PauliString {
        &self.vertices[i]
    }
    pub fn copy_index(&self, i: usize) -> usize {
        self.copies[i]
    }
    pub fn adjacent(&self, i: usize, j: usize) -> bool {
        self.adj[i][j]
    }
    pub fn degree(&self, i: usize) -> usize {
        self.adj[i].iter().filter(|&&b| b).count()
    }
    pub fn degrees(&self) -> Vec<usize> {
        (0..self.len()).map(|i| self.degree(i)).collect()
    }
    pub fn n_edges(&self) -> usize {
        self.degrees().iter().sum::<usize>() / 2
    }

    /// Index of the first vertex equal to `p` (ignoring phase), copy 0.
    pub fn index_of(&self, p: &PauliString) -> Option<usize> {
        let key = p.unsigned();
        self.vertices.iter().position(|v| v.unsigned() == key)
    }

    pub fn neighbor_masks(&self) -> Result<Vec<u128>, GraphError> {
        if self.len() > MAX_SEARCH_VERTICES {
            return Err(GraphError::TooLarge(self.len(), MAX_SEARCH_VERTICES));
        }
        Ok(self
            .adj
            .iter()
            .map(|row| row.iter().enumerate().filter(|(_, &b)| b).fold(0u128, |m, (j, _)| m | 1 << j))
            .collect())
    }

    /// `i j` per line with the operator labels as a header comment.
    pub fn to_edge_list(&self) -> String {
        let mut out = String::new();
        for (i, v) in self.vertices.iter().enumerate() {
            out.push_str(&format!("# {i} {}\n", v.label()));
        }
        for i in 0..self.len() {
            for j in i + 1..self.len() {
                if self.adj[i][j] {
                    out.push_str(&format!("{i} {j}\n"));
                }
            }
        }
        out
    }

    /// Drop the listed vertices (used for negative controls).
    pub fn without(&self, remove: &[usize]) -> ACGraph {
        let keep: Vec<usize> = (0..self.len()).filter(|i| !remove.contains(i)).collect();
        ACGraph {
            vertices: keep.iter().map(|&i| self.vertices[i]).collect(),
            copies: keep.iter().map(|&i| self.copies[i]).collect(),
            adj: keep.iter().map(|&i| keep.iter().map(|&j| self.adj[i][j]).collect()).collect(),
        }
    }
}

pub fn build_graph(ops: &[PauliString]) -> Result<ACGraph, GraphError> {
    let tagged: Vec<(PauliString, usize)> = ops.iter().map(|p| (*p, 0)).collect();
    build_graph_with_copies(&tagged)
}

/// Like [`build_graph`] but a string may repeat as long as its copy tags differ.
pub fn build_graph_with_copies(ops: &[(PauliString, usize)]) -> Result<ACGraph, GraphError> {
    if let Some(first) = ops.first() {
        let n = first.0.n_qubits();
        if let Some(bad) = ops.iter().find(|(p, _)| p.n_qubits() != n) {
            return Err(GraphError::LengthMismatch(n, bad.0.n_qubits()));
        }
    }
    let mut seen = HashSet::new();
    for (p, c) in ops {
        if !seen.insert((p.x_bits(), p.z_bits(), *c)) {
            return Err(GraphError::DuplicateOperator(p.label()));
        }
    }
    let vertices: Vec<PauliString> = ops.iter().map(|(p, _)| *p).collect();
    let adj = vertices
        .iter()
        .map(|a| vertices.iter().map(|b| a.anticommutes(b)).collect())
        .collect();
    Ok(ACGraph { vertices, copies: ops.iter().map(|(_, c)| *c).collect(), adj })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CliqueCoverCertificate {
    pub groups: Vec<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub valid: bool,
    pub uncovered: Vec<usize>,
    pub repeated: Vec<usize>,
    /// Pairs inside one group that commute, as (group, i, j).
    pub commuting_pairs: Vec<(usize, usize, usize)>,
}

#[derive(Serialize, Deserialize)]
struct CertificateJson {
    groups: Vec<Vec<String>>,
}

impl CliqueCoverCertificate {
    pub fn n_groups(&self) -> usize {
        self.groups.len()
    }

    pub fn group_sizes(&self) -> Vec<usize> {
        self.groups.iter().map(Vec::len).collect()
    }

    pub fn labels(&self, graph: &ACGraph) -> Vec<Vec<String>> {
        self.groups.iter().map(|g| g.iter().map(|&i| graph.vertex(i).label()).collect()).collect()
    }

    pub fn to_json(&self, graph: &ACGraph) -> serde_json::Value {
        serde_json::to_value(CertificateJson { groups: self.labels(graph) }).expect("plain strings")
    }

    /// Map labelled groups back onto vertex indices. Repeated labels take
    /// successive copies.
    pub fn from_labels(graph: &ACGraph, groups: &[Vec<PauliString>]) -> Result<Self, GraphError> {
        let mut used = vec![false; graph.len()];
        let mut out = Vec::with_capacity(groups.len());
        for g in groups {
            let mut idx = Vec::with_capacity(g.len());
            for p in g {
                let key = p.unsigned();
                let pos = (0..graph.len())
                    .find(|&i| !used[i] && graph.vertex(i).unsigned() == key)
                    .ok_or_else(|| GraphError::DuplicateOperator(p.label()))?;
                used[pos] = true;
                idx.push(pos);
            }
            out.push(idx);
        }
        Ok(CliqueCoverCertificate { groups: out })
    }
}

pub fn verify_certificate(
    graph: &ACGraph,
    cert: &CliqueCoverCertificate,
) -> Result<VerifyReport, GraphError> {
    let n = graph.len();
    let mut count = vec![0usize; n];
    for g in &cert.groups {
        for &i in g {
            if i >= n {
                return Err(GraphError::IndexOutOfRange(i, n));
            }
            count[i] += 1;
        }
    }
    let uncovered: Vec<usize> = (0..n).filter(|&i| count[i] == 0).collect();
    let repeated: Vec<usize> = (0..n).filter(|&i| count[i] > 1).collect();
    let mut commuting_pairs = Vec::new();
    for (gi, g) in cert.groups.iter().enumerate() {
        for a in 0..g.len() {
            for b in a + 1..g.len() {
                if !graph.adjacent(g[a], g[b]) {
                    commuting_pairs.push((gi, g[a], g[b]));
                }
            }
        }
    }
    let valid = uncovered.is_empty() && repeated.is_empty() && commuting_pairs.is_empty();
    Ok(VerifyReport { valid, uncovered, repeated, commuting_pairs })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::parse_list;

    fn triangle() -> ACGraph {
        build_graph(&parse_list("XXI XZI ZIX ZIZ XIX XIZ ZXI ZZI").unwrap()).unwrap()
    }

    #[test]
    fn single_edge() {
        let g = build_graph(&parse_list("X Z").unwrap()).unwrap();
        assert!(g.adjacent(0, 1));
        assert_eq!(g.n_edges(), 1);
    }

    #[test]
    fn commuting_pair_is_isolated() {
        let g = build_graph(&parse_list("XX ZZ").unwrap()).unwrap();
        assert_eq!(g.n_edges(), 0);
    }

    #[test]
    fn duplicates_and_lengths_rejected() {
        assert!(matches!(
            build_graph(&parse_list("XZ XZ").unwrap()),
            Err(GraphError::DuplicateOperator(_))
        ));
        assert!(matches!(build_graph(&parse_list("XZ X").unwrap()), Err(GraphError::LengthMismatch(2, 1))));
    }

    #[test]
    fn triangle_cover_is_valid() {
        let g = triangle();
        let cert = CliqueCoverCertificate { groups: vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]] };
        assert!(verify_certificate(&g, &cert).unwrap().valid);
    }

    #[test]
    fn swapped_element_reports_commuting_pair() {
        let g = triangle();
        // XXI <-> XIX
        let cert = CliqueCoverCertificate { groups: vec![vec![4, 1, 2, 3], vec![0, 5, 6, 7]] };
        let r = verify_certificate(&g, &cert).unwrap();
        assert!(!r.valid);
        assert!(!r.commuting_pairs.is_empty());
        for &(_, i, j) in &r.commuting_pairs {
            assert!(!g.vertex(i).anticommutes(g.vertex(j)));
        }
    }

    #[test]
    fn out_of_range_index() {
        let cert = CliqueCoverCertificate { groups: vec![vec![0, 9]] };
        assert_eq!(verify_certificate(&triangle(), &cert), Err(GraphError::IndexOutOfRange(9, 8)));
    }

    #[test]
    fn copies_are_separate_vertices() {
        let x = PauliString::parse("XZ").unwrap();
        let g = build_graph_with_copies(&[(x, 0), (x, 1)]).unwrap();
        assert_eq!(g.len(), 2);
        assert!(!g.adjacent(0, 1));
    }

    #[test]
    fn certificate_json_roundtrip() {
        let g = triangle();
        let cert = CliqueCoverCertificate { groups: vec![vec![0, 1, 2, 3], vec![4, 5, 6, 7]] };
        let j = cert.to_json(&g);
        assert_eq!(j["groups"][1][0], "XIX");
        let back: Vec<Vec<PauliString>> = cert
            .labels(&g)
            .iter()
            .map(|gr| gr.iter().map(|l| PauliString::parse(l).unwrap()).collect())
            .collect();
        assert_eq!(CliqueCoverCertificate::from_labels(&g, &back).unwrap(), cert);
    }

    #[test]
    fn edge_list_format() {
        let g = build_graph(&parse_list("X Z").unwrap()).unwrap();
        assert_eq!(g.to_edge_list(), "# 0 X\n# 1 Z\n0 1\n");
    }
}
