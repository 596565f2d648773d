use crate::anticommutation::{iterative_grouping, Grouping};
use crate::pauli::{Pauli, PauliString};
use crate::quantum::Plane;

/// Swap X and Z (or X and Y) on every qubit in `mask`.
fn toggle(p: &PauliString, mask: u64, plane: Plane) -> PauliString {
    let [a, b] = plane.axes();
    let mut out = *p;
    for q in 0..p.n_qubits() {
        if mask >> q & 1 == 1 {
            let s = p.get(q);
            if s == a {
                out.set(q, b);
            } else if s == b {
                out.set(q, a);
            }
        }
    }
    out
}

fn with_plane(labels: &[&str], plane: Plane) -> Vec<PauliString> {
    labels
        .iter()
        .map(|l| {
            let l = match plane {
                Plane::XZ => l.replace('Y', "Z"),
                Plane::XY => l.to_string(),
            };
            PauliString::parse(&l).expect("static label")
        })
        .collect()
}

/// Groups of the star network with `n` levels on 2n-1 qubits: centre 0,
/// upper leaf 1, 3, 5, .. and lower leaf 2, 4, 6, ...
///
/// The first group takes, for each edge of size k < n, X on the centre (Z for
/// the lower leaf) and on the first k-2 leaf nodes and Z on the last one; the
/// size-n edges contribute both X and Z on their last node. The other groups
/// swap X and Z on the centre and on the first n-2 levels of both leaves.
/// Operators already placed in an earlier group are dropped.
pub fn star_grouping(n: usize) -> Grouping {
    assert!(n >= 2);
    let nq = 2 * n - 1;
    let mut base = Vec::new();
    for (centre, first) in [(Pauli::X, 1usize), (Pauli::Z, 2usize)] {
        // Edges from the largest down, matching the usual display.
        for k in (2..=n).rev() {
            let leaf: Vec<usize> = (0..k - 1).map(|j| first + 2 * j).collect();
            let mut placements = vec![(0, centre)];
            placements.extend(leaf[..k - 2].iter().map(|&q| (q, Pauli::X)));
            let last = leaf[k - 2];
            if k == n {
                for p in [Pauli::X, Pauli::Z] {
                    let mut pl = placements.clone();
                    pl.push((last, p));
                    base.push(PauliString::single(nq, &pl));
                }
            } else {
                placements.push((last, Pauli::Z));
                base.push(PauliString::single(nq, &placements));
            }
        }
    }
    let mut seen = std::collections::HashSet::new();
    let mut groups = Vec::new();
    for levels in 0u64..1 << (n - 1) {
        // Level 0 is the centre; level j >= 1 is qubits 2j-1 and 2j.
        let mut mask = 0u64;
        for lvl in 0..n - 1 {
            if levels >> (n - 2 - lvl) & 1 == 1 {
                mask |= if lvl == 0 { 1 } else { 0b11 << (2 * lvl - 1) };
            }
        }
        let group: Vec<PauliString> = base
            .iter()
            .map(|p| toggle(p, mask, Plane::XZ))
            .filter(|p| seen.insert((p.x_bits(), p.z_bits())))
            .collect();
        groups.push(group);
    }
    Grouping::new(nq, groups)
}

/// Two groups of four for the CHSH pair sharing qubit 0.
pub fn triangle_grouping() -> Grouping {
    star_grouping(2)
}

/// Four groups of eight for the 4-qubit ring with edges 012, 123, 023, 013.
pub fn square_grouping(plane: Plane) -> Grouping {
    let base = with_plane(&["XXXI", "YYYI", "XYIX", "YXIY", "XIYY", "YIXX", "IXYX", "IYXY"], plane);
    let groups = [0b0000u64, 0b0011, 0b0101, 0b1001]
        .iter()
        .map(|&mask| base.iter().map(|p| toggle(p, mask, plane)).collect())
        .collect();
    Grouping::new(4, groups)
}

fn pair(plane: Plane) -> Grouping {
    let [a, b] = plane.axes();
    Grouping::new(1, vec![vec![PauliString::single(1, &[(0, a)]), PauliString::single(1, &[(0, b)])]])
}

pub fn tree7_grouping() -> Grouping {
    iterative_grouping(&pair(Plane::XZ), &[triangle_grouping(), triangle_grouping()]).expect("valid by construction")
}

pub fn tree15_grouping() -> Grouping {
    iterative_grouping(&pair(Plane::XZ), &[tree7_grouping(), tree7_grouping()]).expect("valid by construction")
}

pub fn nine_grouping() -> Grouping {
    let sq = square_grouping(Plane::XY);
    iterative_grouping(&pair(Plane::XY), &[sq.clone(), sq]).expect("valid by construction")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::parse_list;

    fn same_groups(a: &[Vec<PauliString>], b: &[Vec<PauliString>]) -> bool {
        let norm = |g: &[Vec<PauliString>]| {
            let mut v: Vec<Vec<String>> = g
                .iter()
                .map(|gr| {
                    let mut s: Vec<String> = gr.iter().map(|p| p.label()).collect();
                    s.sort();
                    s
                })
                .collect();
            v.sort();
            v
        };
        norm(a) == norm(b)
    }

    #[test]
    fn star3_matches_listed_groups() {
        let expect: Vec<Vec<PauliString>> = [
            "XXIXI XXIZI ZIXIX ZIXIZ XZIII ZIZII",
            "XZIXI XZIZI ZIZIX ZIZIZ XXIII ZIXII",
            "ZXIXI ZXIZI XIXIX XIXIZ ZZIII XIZII",
            "ZZIXI ZZIZI XIZIX XIZIZ ZXIII XIXII",
        ]
        .iter()
        .map(|s| parse_list(s).unwrap())
        .collect();
        let g = star_grouping(3);
        assert!(g.check().is_ok());
        assert!(same_groups(&g.groups, &expect));
    }

    #[test]
    fn star4_contains_figure_set() {
        let fig = parse_list("XXIXIXI XXIXIZI XXIZIII XZIIIII ZIXIXIX ZIXIXIZ ZIXIZII ZIZIIII").unwrap();
        let g = star_grouping(4);
        assert_eq!(g.n_groups(), 8);
        assert!(g.check().is_ok());
        assert!(same_groups(&g.groups[..1], &[fig]));
        assert_eq!(g.operators().len(), 56);
    }

    #[test]
    fn square_groupings_verify() {
        for plane in [Plane::XZ, Plane::XY] {
            let g = square_grouping(plane);
            assert!(g.check().is_ok());
            assert_eq!(g.operators().len(), 32);
        }
    }

    #[test]
    fn composite_groupings() {
        let t7 = tree7_grouping();
        assert_eq!((t7.n_groups(), t7.groups[0].len()), (4, 8));
        let t15 = tree15_grouping();
        assert_eq!((t15.n_qubits, t15.n_groups(), t15.groups[0].len()), (15, 8, 16));
        let nine = nine_grouping();
        assert_eq!((nine.n_qubits, nine.n_groups(), nine.groups[0].len()), (9, 8, 16));
    }
}
