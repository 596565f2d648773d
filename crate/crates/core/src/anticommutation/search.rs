use serde::Serialize;

use super::{verify_certificate, ACGraph, CliqueCoverCertificate, GraphError};

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize)]
pub struct SearchStats {
    pub nodes: u64,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CoverOutcome {
    Found(CliqueCoverCertificate, SearchStats),
    /// The symmetry-broken search tree was exhausted.
    ProvenImpossible(SearchStats),
    /// The node budget ran out first.
    Inconclusive(SearchStats),
}

impl CoverOutcome {
    pub fn certificate(&self) -> Option<&CliqueCoverCertificate> {
        match self {
            CoverOutcome::Found(c, _) => Some(c),
            _ => None,
        }
    }
    pub fn stats(&self) -> SearchStats {
        match self {
            CoverOutcome::Found(_, s) | CoverOutcome::ProvenImpossible(s) | CoverOutcome::Inconclusive(s) => *s,
        }
    }
}

fn bits(mut m: u128) -> impl Iterator<Item = usize> {
    std::iter::from_fn(move || {
        if m == 0 {
            None
        } else {
            let i = m.trailing_zeros() as usize;
            m &= m - 1;
            Some(i)
        }
    })
}

fn full_mask(n: usize) -> u128 {
    if n == 128 {
        u128::MAX
    } else {
        (1u128 << n) - 1
    }
}

/// Lexicographically first clique of `need` more vertices drawn from `cand`,
/// added to `clique`.
fn first_clique(nbr: &[u128], clique: u128, cand: u128, need: usize) -> Option<u128> {
    if need == 0 {
        return Some(clique);
    }
    let mut cand = cand;
    while cand.count_ones() as usize >= need {
        let u = cand.trailing_zeros() as usize;
        cand &= cand - 1;
        if let Some(c) = first_clique(nbr, clique | 1 << u, cand & nbr[u], need - 1) {
            return Some(c);
        }
    }
    None
}

/// Each group is the lexicographically first clique of the target size
/// through the lowest uncovered vertex. No backtracking across groups.
pub fn greedy_cover(graph: &ACGraph, target_group_size: usize) -> Result<Option<CliqueCoverCertificate>, GraphError> {
    assert!(target_group_size >= 1);
    let nbr = graph.neighbor_masks()?;
    let mut uncovered = full_mask(graph.len());
    let mut groups = Vec::new();
    while uncovered != 0 {
        let v = uncovered.trailing_zeros() as usize;
        let cand = nbr[v] & uncovered;
        let Some(c) = first_clique(&nbr, 1 << v, cand, target_group_size - 1) else {
            return Ok(None);
        };
        uncovered &= !c;
        groups.push(bits(c).collect());
    }
    let cert = CliqueCoverCertificate { groups };
    debug_assert!(verify_certificate(graph, &cert).map(|r| r.valid).unwrap_or(false));
    Ok(Some(cert))
}

struct CoverSearch<'a> {
    nbr: &'a [u128],
    size: usize,
    nodes: u64,
    budget: Option<u64>,
    groups: Vec<u128>,
    exhausted_budget: bool,
}

impl CoverSearch<'_> {
    fn cover(&mut self, uncovered: u128) -> bool {
        if uncovered == 0 {
            return true;
        }
        let v = uncovered.trailing_zeros() as usize;
        let cand = self.nbr[v] & uncovered;
        self.grow(uncovered, 1 << v, cand, self.size - 1)
    }

    fn grow(&mut self, uncovered: u128, clique: u128, cand: u128, need: usize) -> bool {
        self.nodes += 1;
        if let Some(b) = self.budget {
            if self.nodes > b {
                self.exhausted_budget = true;
                return false;
            }
        }
        if need == 0 {
            self.groups.push(clique);
            if self.cover(uncovered & !clique) {
                return true;
            }
            self.groups.pop();
            return false;
        }
        let mut cand = cand;
        while cand.count_ones() as usize >= need && !self.exhausted_budget {
            let u = cand.trailing_zeros() as usize;
            cand &= cand - 1;
            if self.grow(uncovered, clique | 1 << u, cand & self.nbr[u], need - 1) {
                return true;
            }
        }
        false
    }
}

/// Partition into `k_groups` cliques of exactly `group_size`, or prove that
/// none exists. The lowest uncovered vertex always opens the next group and
/// members are added in increasing index order, so each partition is visited
/// once.
pub fn exact_cover(
    graph: &ACGraph,
    k_groups: usize,
    group_size: usize,
    node_budget: Option<u64>,
) -> Result<CoverOutcome, GraphError> {
    if k_groups * group_size != graph.len() || group_size == 0 {
        return Err(GraphError::SizeMismatch { groups: k_groups, size: group_size, vertices: graph.len() });
    }
    let nbr = graph.neighbor_masks()?;
    let mut s = CoverSearch { nbr: &nbr, size: group_size, nodes: 0, budget: node_budget, groups: Vec::new(), exhausted_budget: false };
    let found = s.cover(full_mask(graph.len()));
    let stats = SearchStats { nodes: s.nodes };
    if found {
        let cert = CliqueCoverCertificate { groups: s.groups.iter().map(|&g| bits(g).collect()).collect() };
        debug_assert!(verify_certificate(graph, &cert).unwrap().valid);
        Ok(CoverOutcome::Found(cert, stats))
    } else if s.exhausted_budget {
        Ok(CoverOutcome::Inconclusive(stats))
    } else {
        Ok(CoverOutcome::ProvenImpossible(stats))
    }
}

struct CliqueSearch<'a> {
    nbr: &'a [u128],
    best: u128,
}

impl CliqueSearch<'_> {
    /// Greedy sequential colouring of `p`; returns vertices with their colour
    /// number in non-decreasing colour order.
    fn colour(&self, p: u128) -> Vec<(usize, usize)> {
        let mut out = Vec::new();
        let mut left = p;
        let mut colour = 0;
        while left != 0 {
            colour += 1;
            let mut q = left;
            while q != 0 {
                let v = q.trailing_zeros() as usize;
                q &= !(1 << v);
                q &= !self.nbr[v];
                left &= !(1 << v);
                out.push((v, colour));
            }
        }
        out
    }

    fn expand(&mut self, r: u128, mut p: u128) {
        let order = self.colour(p);
        for &(v, c) in order.iter().rev() {
            if r.count_ones() as usize + c <= self.best.count_ones() as usize {
                return;
            }
            let nr = r | 1 << v;
            let np = p & self.nbr[v];
            if np == 0 {
                if nr.count_ones() > self.best.count_ones() {
                    self.best = nr;
                }
            } else {
                self.expand(nr, np);
            }
            p &= !(1 << v);
        }
    }
}

/// Maximum clique by branch and bound with a greedy-colouring bound.
pub fn max_clique(graph: &ACGraph) -> Result<Vec<usize>, GraphError> {
    let nbr = graph.neighbor_masks()?;
    if graph.is_empty() {
        return Ok(Vec::new());
    }
    let mut s = CliqueSearch { nbr: &nbr, best: 1 };
    s.expand(0, full_mask(graph.len()));
    Ok(bits(s.best).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prop1Item {
    pub name: &'static str,
    pub measured: Option<usize>,
    pub predicted: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Prop1Report {
    pub items: Vec<Prop1Item>,
    pub min_degree: usize,
    pub max_degree: usize,
    pub cover: Option<Vec<Vec<usize>>>,
}

impl Prop1Report {
    pub fn all_pass(&self) -> bool {
        self.items.iter().all(|i| i.pass)
    }
    pub fn item(&self, name: &str) -> Option<&Prop1Item> {
        self.items.iter().find(|i| i.name == name)
    }
}

/// Structural predictions for the graph of a uniform relation with
/// `n_edges` Bell expressions over `n_parties` parties.
///
/// The clique cover number is reported only when a uniform cover by maximum
/// cliques exists, which pins it to |V|/ω.
pub fn check_prop1(graph: &ACGraph, n_parties: usize, n_edges: usize) -> Result<Prop1Report, GraphError> {
    let v = graph.len();
    let omega = max_clique(graph)?.len();
    let degrees = graph.degrees();
    let (min_degree, max_degree) = (
        degrees.iter().copied().min().unwrap_or(0),
        degrees.iter().copied().max().unwrap_or(0),
    );
    let mut cover = None;
    let mut cp = None;
    if omega > 0 && v % omega == 0 {
        if let CoverOutcome::Found(c, _) = exact_cover(graph, v / omega, omega, Some(50_000_000))? {
            cp = Some(v / omega);
            cover = Some(c.groups);
        }
    }
    let regular = (min_degree == max_degree).then_some(min_degree);
    let item = |name, measured: Option<usize>, predicted| Prop1Item {
        name,
        measured,
        predicted,
        pass: measured == Some(predicted),
    };
    let items = vec![
        item("vertices", Some(v), 2 * n_edges * n_edges),
        item("clique_number", Some(omega), 2 * n_edges),
        item("cover_number", cp, n_edges),
        item("degree", regular, (1usize << (2 * (n_parties - 1))) - 1),
    ];
    Ok(Prop1Report { items, min_degree, max_degree, cover })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::anticommutation::build_graph;
    use crate::pauli::parse_list;

    fn triangle() -> ACGraph {
        build_graph(&parse_list("XXI XZI ZIX ZIZ XIX XIZ ZXI ZZI").unwrap()).unwrap()
    }

    #[test]
    fn greedy_triangle() {
        let c = greedy_cover(&triangle(), 4).unwrap().unwrap();
        assert_eq!(c.group_sizes(), vec![4, 4]);
    }

    #[test]
    fn greedy_not_found_without_edges() {
        let g = build_graph(&parse_list("XX ZZ").unwrap()).unwrap();
        assert_eq!(greedy_cover(&g, 2).unwrap(), None);
    }

    #[test]
    fn exact_cover_cases() {
        let g = triangle();
        assert!(matches!(exact_cover(&g, 2, 4, None).unwrap(), CoverOutcome::Found(..)));
        let iso = build_graph(&parse_list("XX ZZ").unwrap()).unwrap();
        assert!(matches!(exact_cover(&iso, 1, 2, None).unwrap(), CoverOutcome::ProvenImpossible(_)));
        assert!(matches!(exact_cover(&g, 3, 3, None), Err(GraphError::SizeMismatch { .. })));
    }

    #[test]
    fn budget_gives_inconclusive() {
        let g = triangle();
        assert!(matches!(exact_cover(&g, 2, 4, Some(1)).unwrap(), CoverOutcome::Inconclusive(_)));
    }

    #[test]
    fn triangle_clique_number() {
        assert_eq!(max_clique(&triangle()).unwrap().len(), 4);
    }

    #[test]
    fn triangle_prop1_measurements() {
        let r = check_prop1(&triangle(), 2, 2).unwrap();
        assert!(r.item("vertices").unwrap().pass);
        assert!(r.item("clique_number").unwrap().pass);
        assert!(r.item("cover_number").unwrap().pass);
        assert_eq!(r.item("degree").unwrap().measured, Some(4));
    }

    #[test]
    fn pruned_triangle_fails_vertex_count() {
        let r = check_prop1(&triangle().without(&[7]), 2, 2).unwrap();
        assert!(!r.item("vertices").unwrap().pass);
    }
}
