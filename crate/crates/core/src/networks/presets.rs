use super::groupings::{nine_grouping, square_grouping, star_grouping, tree15_grouping, tree7_grouping, triangle_grouping};
use super::{Hypergraph, NetworkError, Regime, TradeOffRelation};
use crate::anticommutation::Grouping;
use crate::inequalities::{chain, chsh, local_bound, mermin3, mermin_klyshko, svetlichny, CorrelationExpression, TupleIter};
use crate::pauli::parse_list;
use crate::quantum::Plane;

pub const PRESET_NAMES: &[&str] = &[
    "triangle",
    "square4",
    "sixqubit",
    "tree7",
    "ladder(n)",
    "tree15",
    "nine",
    "star(n)",
    "chsh-mermin",
    "chsh-mermin-eve",
    "gen-ladder(base)",
];

/// Largest ladder or star size accepted by name.
const MAX_FAMILY_N: usize = 10;

fn mk_relation(
    name: &str,
    n: usize,
    edges: Vec<Vec<usize>>,
    bound: f64,
    scale: Option<f64>,
    construction: Option<Grouping>,
) -> Result<TradeOffRelation, NetworkError> {
    let hg = Hypergraph::new(n, edges)?;
    let expressions = hg.edges().iter().map(|e| mermin_klyshko(e.len())).collect::<Result<Vec<_>, _>>()?;
    let mut r = TradeOffRelation::new(name, hg, expressions, 2, bound, Regime::Quantum)?;
    r.scale = scale;
    r.construction = construction;
    Ok(r)
}

fn shifted(edges: &[Vec<usize>], by: usize) -> impl Iterator<Item = Vec<usize>> + '_ {
    edges.iter().map(move |e| std::iter::once(0).chain(e.iter().map(|v| v + by)).collect())
}

const SQUARE_EDGES: [[usize; 3]; 4] = [[0, 1, 2], [1, 2, 3], [0, 2, 3], [0, 1, 3]];
const TREE7_EDGES: [[usize; 3]; 4] = [[0, 1, 2], [0, 1, 3], [0, 4, 5], [0, 4, 6]];

/// Qubit 0 is shared; party p = 2..n holds copies on qubits 2p-3 and 2p-2.
/// Every choice of one copy per party is an edge.
pub fn ladder(n: usize) -> Result<TradeOffRelation, NetworkError> {
    if !(2..=MAX_FAMILY_N).contains(&n) {
        return Err(NetworkError::UnknownPreset(format!("ladder({n})")));
    }
    let edges = (0..1usize << (n - 1))
        .map(|c| {
            std::iter::once(0)
                .chain((0..n - 1).map(|p| 2 * p + 1 + (c >> (n - 2 - p) & 1)))
                .collect()
        })
        .collect();
    let construction = (n == 2).then(triangle_grouping);
    mk_relation(&format!("ladder({n})"), 2 * n - 1, edges, (1u64 << (n - 1)) as f64, (n <= 3).then_some(2.0), construction)
}

/// Centre 0 with two leaves 1, 3, 5, .. and 2, 4, 6, ..; each leaf carries
/// the edges {0, first k-1 leaf nodes} for k = 2..n.
pub fn star(n: usize) -> Result<TradeOffRelation, NetworkError> {
    if !(2..=MAX_FAMILY_N).contains(&n) {
        return Err(NetworkError::UnknownPreset(format!("star({n})")));
    }
    let mut edges = Vec::new();
    for first in [1, 2] {
        for k in 2..=n {
            edges.push(std::iter::once(0).chain((0..k - 1).map(|j| first + 2 * j)).collect());
        }
    }
    mk_relation(&format!("star({n})"), 2 * n - 1, edges, (1u64 << (n - 1)) as f64, (n <= 3).then_some(2.0), Some(star_grouping(n)))
}

/// Party 0 once and m_i copies of every other party i; one edge per choice of
/// copies, all carrying the normalized base expression, summed linearly.
pub fn gen_ladder(base: &CorrelationExpression) -> Result<TradeOffRelation, NetworkError> {
    let inputs = base.inputs().to_vec();
    let n = inputs.len();
    if n < 2 {
        return Err(NetworkError::InvalidRelation("base expression needs two parties".into()));
    }
    let mut offsets = vec![0usize; n];
    let mut next = 1;
    for i in 1..n {
        offsets[i] = next;
        next += inputs[i];
    }
    let edges: Vec<Vec<usize>> = TupleIter::new(&inputs[1..])
        .map(|c| std::iter::once(0).chain(c.iter().enumerate().map(|(j, &l)| offsets[j + 1] + l)).collect())
        .collect();
    let beta = local_bound(base)?;
    let normalized = base.scaled(1.0 / beta);
    let hg = Hypergraph::new(next, edges)?;
    let bound = inputs[1..].iter().product::<usize>() as f64;
    let exprs = vec![normalized; hg.n_edges()];
    let mut r = TradeOffRelation::new(format!("gen-ladder({})", base.name()), hg, exprs, 1, bound, Regime::NoSignaling)?;
    r.scale = Some(beta);
    Ok(r)
}

fn base_expression(name: &str) -> Result<CorrelationExpression, NetworkError> {
    let num = |prefix: &str| name.strip_prefix(prefix).and_then(|s| s.parse::<usize>().ok());
    let unknown = || NetworkError::UnknownPreset(format!("gen-ladder({name})"));
    match name {
        "chsh" => Ok(chsh()),
        "mermin3" | "mermin" => Ok(mermin3()),
        _ => {
            if let Some(m) = num("chain") {
                chain(m).map_err(|_| unknown())
            } else if let Some(k) = num("mk") {
                mermin_klyshko(k).map_err(|_| unknown())
            } else if let Some(k) = num("svetlichny") {
                svetlichny(k).map_err(|_| unknown())
            } else {
                Err(unknown())
            }
        }
    }
}

/// `family(n)`, `familyn` or `family-n`.
fn family_arg<'a>(name: &'a str, family: &str) -> Option<&'a str> {
    let rest = name.strip_prefix(family)?;
    let rest = rest.strip_prefix('-').unwrap_or(rest);
    match rest.strip_prefix('(') {
        Some(inner) => inner.strip_suffix(')'),
        None => Some(rest),
    }
    .filter(|s| !s.is_empty())
}

pub fn preset(name: &str) -> Result<TradeOffRelation, NetworkError> {
    let key: String = name.trim().to_ascii_lowercase().chars().filter(|c| !c.is_whitespace()).collect();
    let unknown = || NetworkError::UnknownPreset(name.to_string());
    let groups = |rows: &[&str]| -> Grouping {
        let g: Vec<_> = rows.iter().map(|r| parse_list(r).expect("static labels")).collect();
        Grouping::new(g[0][0].n_qubits(), g)
    };
    match key.as_str() {
        "triangle" => {
            let mut r = ladder(2)?;
            r.name = "triangle".into();
            Ok(r)
        }
        "square4" => mk_relation("square4", 4, SQUARE_EDGES.iter().map(|e| e.to_vec()).collect(), 4.0, Some(2.0), Some(square_grouping(Plane::XZ))),
        "sixqubit" => mk_relation("sixqubit", 6, vec![vec![0, 1, 2], vec![2, 3, 4], vec![0, 4, 5], vec![0, 2, 4]], 4.0, Some(2.0), None),
        "tree7" => mk_relation("tree7", 7, TREE7_EDGES.iter().map(|e| e.to_vec()).collect(), 4.0, Some(2.0), Some(tree7_grouping())),
        "tree15" => {
            let inner: Vec<Vec<usize>> = TREE7_EDGES.iter().map(|e| e.to_vec()).collect();
            let edges = shifted(&inner, 1).chain(shifted(&inner, 8)).collect();
            mk_relation("tree15", 15, edges, 8.0, None, Some(tree15_grouping()))
        }
        "nine" => {
            let inner: Vec<Vec<usize>> = SQUARE_EDGES.iter().map(|e| e.to_vec()).collect();
            let edges = shifted(&inner, 1).chain(shifted(&inner, 5)).collect();
            let mut r = mk_relation("nine", 9, edges, 8.0, None, Some(nine_grouping()))?;
            r.plane = Plane::XY;
            Ok(r)
        }
        "chsh-mermin" => {
            let mut r = star(3)?;
            r.name = "chsh-mermin".into();
            Ok(r)
        }
        "chsh-mermin-eve" => {
            let construction = groups(&[
                "XXXI XXZI XZII ZIIX ZIIZ",
                "XZXI XZZI XXII ZIIX ZIIZ",
                "ZXXI ZXZI ZZII XIIX XIIZ",
                "ZZXI ZZZI ZXII XIIX XIIZ",
            ]);
            mk_relation("chsh-mermin-eve", 4, vec![vec![0, 1, 2], vec![0, 1], vec![0, 3]], 4.0, Some(2.0), Some(construction))?
                .with_multiplicity(vec![1, 1, 2])
        }
        _ => {
            if let Some(arg) = family_arg(&key, "gen-ladder") {
                return gen_ladder(&base_expression(arg)?);
            }
            for (family, build) in [("ladder", ladder as fn(usize) -> _), ("star", star)] {
                if let Some(arg) = family_arg(&key, family) {
                    return build(arg.parse().map_err(|_| unknown())?);
                }
            }
            Err(unknown())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn printed_edges() {
        assert_eq!(preset("square4").unwrap().hypergraph.edge_labels(), ["123", "234", "134", "124"]);
        assert_eq!(preset("tree7").unwrap().hypergraph.edge_labels(), ["123", "124", "156", "157"]);
        assert_eq!(preset("ladder(3)").unwrap().hypergraph.edge_labels(), ["124", "125", "134", "135"]);
        assert_eq!(preset("nine").unwrap().hypergraph.edge_labels(), ["1234", "1345", "1245", "1235", "1678", "1789", "1689", "1679"]);
    }

    #[test]
    fn bounds() {
        for (name, b, u) in [
            ("triangle", 2.0, Some(8.0)),
            ("square4", 4.0, Some(16.0)),
            ("sixqubit", 4.0, Some(16.0)),
            ("ladder3", 4.0, Some(16.0)),
            ("star(4)", 8.0, None),
            ("chsh-mermin", 4.0, Some(16.0)),
            ("tree15", 8.0, None),
        ] {
            let r = preset(name).unwrap();
            assert_eq!((r.bound, r.unnormalized_bound()), (b, u), "{name}");
        }
        assert!(matches!(preset("pentagon"), Err(NetworkError::UnknownPreset(_))));
        assert!(matches!(preset("ladder(99)"), Err(NetworkError::UnknownPreset(_))));
    }

    #[test]
    fn gen_ladder_shapes() {
        let r = preset("gen-ladder(chsh)").unwrap();
        assert_eq!((r.hypergraph.n_vertices(), r.hypergraph.n_edges(), r.bound, r.scale), (3, 2, 2.0, Some(2.0)));
        let r = preset("gen-ladder(mermin3)").unwrap();
        assert_eq!((r.hypergraph.n_vertices(), r.hypergraph.n_edges(), r.bound), (5, 4, 4.0));
    }
}
