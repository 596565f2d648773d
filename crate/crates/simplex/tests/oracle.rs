use bml_simplex::{maximize, max_violation, BigRational, LpError, Options, Problem, VarKind};
use proptest::prelude::*;

// Beale's example cycles under the largest-coefficient rule.
#[test]
fn beale_terminates_under_bland() {
    let mut p = Problem::new(vec![0.75, -20.0, 0.5, -6.0], vec![VarKind::NonNegative; 4]);
    p.push_row(vec![0.25, -8.0, -1.0, 9.0], 0.0);
    p.push_row(vec![0.5, -12.0, -0.5, 3.0], 0.0);
    p.push_row(vec![0.0, 0.0, 1.0, 0.0], 1.0);
    let s = maximize(&p, Options::default()).unwrap();
    assert!((s.value - 1.25).abs() < 1e-12, "{}", s.value);
}

/// Brute force for two non-negative variables: the optimum of a bounded
/// feasible LP sits at an intersection of two tight constraints.
fn vertex_oracle(c: [f64; 2], rows: &[([f64; 2], f64)]) -> Option<f64> {
    let mut lines: Vec<([f64; 2], f64)> = rows.to_vec();
    lines.push(([-1.0, 0.0], 0.0));
    lines.push(([0.0, -1.0], 0.0));
    let mut best: Option<f64> = None;
    for i in 0..lines.len() {
        for j in i + 1..lines.len() {
            let (a, b) = (lines[i], lines[j]);
            let det = a.0[0] * b.0[1] - a.0[1] * b.0[0];
            if det.abs() < 1e-12 {
                continue;
            }
            let x = (a.1 * b.0[1] - a.0[1] * b.1) / det;
            let y = (a.0[0] * b.1 - a.1 * b.0[0]) / det;
            if lines.iter().all(|(r, h)| r[0] * x + r[1] * y <= h + 1e-9) {
                let v = c[0] * x + c[1] * y;
                best = Some(best.map_or(v, |b: f64| b.max(v)));
            }
        }
    }
    best
}

proptest! {
    #[test]
    fn two_variable_lps_match_vertex_enumeration(
        c in prop::array::uniform2(-5i32..6),
        raw in prop::collection::vec((prop::array::uniform2(-4i32..5), 1i32..10), 2..6),
    ) {
        // Box constraints keep every instance bounded.
        let mut rows: Vec<([f64; 2], f64)> =
            raw.iter().map(|(a, b)| ([a[0] as f64, a[1] as f64], *b as f64)).collect();
        rows.push(([1.0, 0.0], 10.0));
        rows.push(([0.0, 1.0], 10.0));
        let cf = [c[0] as f64, c[1] as f64];
        let mut p = Problem::new(cf.to_vec(), vec![VarKind::NonNegative; 2]);
        for (a, b) in &rows {
            p.push_row(a.to_vec(), *b);
        }
        let s = maximize(&p, Options::default()).unwrap();
        let oracle = vertex_oracle(cf, &rows).unwrap();
        prop_assert!((s.value - oracle).abs() < 1e-7, "simplex {} oracle {}", s.value, oracle);
        prop_assert!(max_violation(&p, &s.x) < 1e-9);
    }

    #[test]
    fn exact_and_float_agree(
        c in prop::collection::vec(-3i32..4, 3),
        raw in prop::collection::vec((prop::collection::vec(-3i32..4, 3), 0i32..6), 1..5),
    ) {
        let mut pf = Problem::new(c.iter().map(|&v| v as f64).collect(), vec![VarKind::Free; 3]);
        let mut pq: Problem<BigRational> = Problem::new(
            c.iter().map(|&v| BigRational::from_integer(v.into())).collect(),
            vec![VarKind::Free; 3],
        );
        for k in 0..3 {
            // |x_k| <= 5 keeps the free variables bounded.
            for s in [1, -1] {
                let mut r = vec![0i32; 3];
                r[k] = s;
                pf.push_row(r.iter().map(|&v| v as f64).collect(), 5.0);
                pq.push_row(r.iter().map(|&v| BigRational::from_integer(v.into())).collect(), BigRational::from_integer(5.into()));
            }
        }
        for (a, b) in &raw {
            pf.push_row(a.iter().map(|&v| v as f64).collect(), *b as f64);
            pq.push_row(a.iter().map(|&v| BigRational::from_integer(v.into())).collect(), BigRational::from_integer((*b).into()));
        }
        let sf = maximize(&pf, Options::default());
        let sq = maximize(&pq, Options::default());
        match (sf, sq) {
            (Ok(a), Ok(b)) => {
                let bq = bml_simplex::Scalar::to_f64(&b.value);
                prop_assert!((a.value - bq).abs() < 1e-7);
            }
            (Err(LpError::Unbounded(_)), Err(LpError::Unbounded(_))) => {}
            (a, b) => prop_assert!(false, "modes disagree: {:?} vs {:?}", a.map(|s| s.value), b.map(|s| s.value)),
        }
    }
}
