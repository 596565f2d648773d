use std::collections::HashSet;

use serde::Serialize;

use super::GraphError;
use crate::pauli::{Pauli, PauliString};

/// A partition of operators on one register into anti-commuting groups.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Grouping {
    pub n_qubits: usize,
    pub groups: Vec<Vec<PauliString>>,
}

impl Grouping {
    pub fn new(n_qubits: usize, groups: Vec<Vec<PauliString>>) -> Self {
        Grouping { n_qubits, groups }
    }

    pub fn n_groups(&self) -> usize {
        self.groups.len()
    }

    pub fn operators(&self) -> Vec<PauliString> {
        self.groups.iter().flatten().copied().collect()
    }

    /// First problem found: a commuting pair inside a group or a repeated operator.
    pub fn check(&self) -> Result<(), String> {
        let mut seen = HashSet::new();
        for (gi, g) in self.groups.iter().enumerate() {
            for (a, p) in g.iter().enumerate() {
                if p.n_qubits() != self.n_qubits {
                    return Err(format!("{p} does not act on {} qubits", self.n_qubits));
                }
                if !seen.insert((p.x_bits(), p.z_bits())) {
                    return Err(format!("{p} appears twice"));
                }
                for q in &g[a + 1..] {
                    if !p.anticommutes(q) {
                        return Err(format!("{p} and {q} commute in group {gi}"));
                    }
                }
            }
        }
        Ok(())
    }
}

/// m pairwise anti-commuting Hermitian strings on m/2 qubits:
/// X I.., Z I.., Y X I.., Y Z I.., Y Y X I.., ...
pub fn complete_graph_representation(m: usize) -> Result<Vec<PauliString>, GraphError> {
    if m == 0 || m % 2 == 1 {
        return Err(GraphError::OddM(m));
    }
    let n = m / 2;
    let mut out = Vec::with_capacity(m);
    for k in 0..n {
        for last in [Pauli::X, Pauli::Z] {
            let mut placements: Vec<(usize, Pauli)> = (0..k).map(|q| (q, Pauli::Y)).collect();
            placements.push((k, last));
            out.push(PauliString::single(n, &placements));
        }
    }
    Ok(out)
}

/// Compose an outer grouping with one inner grouping per slot of an outer group.
///
/// Inner register l sits after the outer qubits, in the order given. Group
/// (i, j, k) takes, for every register l, the operators of inner group k on
/// register l tensored with the ((l + i) mod s)-th operator of outer group j,
/// where s is the outer group size. The cyclic shifts i = 0..s form a sharply
/// transitive family on each outer group.
pub fn iterative_grouping(outer: &Grouping, inner: &[Grouping]) -> Result<Grouping, GraphError> {
    let s = inner.len();
    if let Some(g) = outer.groups.iter().find(|g| g.len() != s) {
        return Err(GraphError::NonTransitivePermutations { outer: g.len(), inner: s });
    }
    let n_inner = inner.first().map(|g| g.n_groups()).unwrap_or(0);
    if let Some(g) = inner.iter().find(|g| g.n_groups() != n_inner) {
        return Err(GraphError::MismatchedGroupCounts(n_inner, g.n_groups()));
    }
    let mut offsets = Vec::with_capacity(s);
    let mut total = outer.n_qubits;
    for g in inner {
        offsets.push(total);
        total += g.n_qubits;
    }
    let outer_qubits: Vec<usize> = (0..outer.n_qubits).collect();

    let mut groups = Vec::with_capacity(s * outer.n_groups() * n_inner);
    for i in 0..s {
        for outer_group in &outer.groups {
            for k in 0..n_inner {
                let mut group = Vec::new();
                for (l, g) in inner.iter().enumerate() {
                    let head = outer_group[(l + i) % s].embed(total, &outer_qubits);
                    let slots: Vec<usize> = (offsets[l]..offsets[l] + g.n_qubits).collect();
                    for sigma in &g.groups[k] {
                        let tail = sigma.embed(total, &slots);
                        group.push(head.multiply(&tail).expect("same register size"));
                    }
                }
                groups.push(group);
            }
        }
    }
    let result = Grouping::new(total, groups);
    result.check().map_err(GraphError::Verification)?;
    Ok(result)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::parse_list;

    fn triangle() -> Grouping {
        Grouping::new(
            3,
            vec![parse_list("XXI XZI ZIX ZIZ").unwrap(), parse_list("XIX XIZ ZXI ZZI").unwrap()],
        )
    }

    #[test]
    fn complete_graph_small_cases() {
        assert_eq!(complete_graph_representation(2).unwrap(), parse_list("X Z").unwrap());
        assert_eq!(complete_graph_representation(4).unwrap(), parse_list("XI ZI YX YZ").unwrap());
        let ops = complete_graph_representation(8).unwrap();
        assert_eq!(ops[0].n_qubits(), 4);
        assert!(matches!(complete_graph_representation(5), Err(GraphError::OddM(5))));
    }

    #[test]
    fn tree_of_two_triangles() {
        let outer = Grouping::new(1, vec![parse_list("X Z").unwrap()]);
        let g = iterative_grouping(&outer, &[triangle(), triangle()]).unwrap();
        assert_eq!(g.n_qubits, 7);
        assert_eq!(g.n_groups(), 4);
        assert!(g.groups.iter().all(|gr| gr.len() == 8));
        assert!(g.groups[0].contains(&PauliString::parse("XXXIIII").unwrap()));
        assert!(g.groups[0].contains(&PauliString::parse("ZIIIXXI").unwrap()));
    }

    #[test]
    fn single_slot_keeps_inner_structure() {
        let outer = Grouping::new(1, vec![parse_list("I").unwrap()]);
        let g = iterative_grouping(&outer, &[triangle()]).unwrap();
        let expect: Vec<Vec<PauliString>> = triangle()
            .groups
            .iter()
            .map(|gr| gr.iter().map(|p| PauliString::parse(&format!("I{}", p.label())).unwrap()).collect())
            .collect();
        assert_eq!(g.groups, expect);
    }

    #[test]
    fn mismatched_inner_counts() {
        let outer = Grouping::new(1, vec![parse_list("X Z").unwrap()]);
        let one = Grouping::new(1, vec![parse_list("X Z").unwrap()]);
        assert!(matches!(
            iterative_grouping(&outer, &[triangle(), one]),
            Err(GraphError::MismatchedGroupCounts(2, 1))
        ));
    }
}
