use bml::inequalities::{local_bound, quantum_upper_bound_spectral, CorrelationExpression};
use bml::nosignaling::{cg_parametrize, cg_to_full, prop8_inputs, NSBox, Scenario};
use bml::pauli::PauliString;
use bml::quantum::{edge_value_squared, hyperspherical_weights, Plane, StateVector};
use bml::randomness::{pguess_chain_n, pguess_hybrid};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn pauli(n: usize) -> impl Strategy<Value = PauliString> {
    let mask = (1u64 << n) - 1;
    (any::<u64>(), any::<u64>(), 0u8..4).prop_map(move |(x, z, ph)| PauliString::from_bits(n, x & mask, z & mask, ph).unwrap())
}

fn expression() -> impl Strategy<Value = CorrelationExpression> {
    prop::collection::vec(2usize..=3, 2..=3).prop_flat_map(|shape| {
        let len: usize = shape.iter().product();
        prop::collection::vec(-4i32..=4, len).prop_map(move |c| {
            CorrelationExpression::new("p", shape.clone(), c.into_iter().map(f64::from).collect()).unwrap()
        })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn anticommutation_is_symmetric(a in pauli(5), b in pauli(5)) {
        prop_assert_eq!(a.anticommutes(&b), b.anticommutes(&a));
        prop_assert!(!a.anticommutes(&a));
    }

    #[test]
    fn multiplication_is_associative(a in pauli(4), b in pauli(4), c in pauli(4)) {
        let l = a.multiply(&b).unwrap().multiply(&c).unwrap();
        let r = a.multiply(&b.multiply(&c).unwrap()).unwrap();
        prop_assert_eq!(l, r);
    }

    #[test]
    fn label_round_trip(a in pauli(6)) {
        let u = a.clone().unsigned();
        prop_assert_eq!(PauliString::parse(&u.label()).unwrap(), u);
    }

    #[test]
    fn bounds_are_ordered(e in expression()) {
        let lb = local_bound(&e).unwrap();
        let sb = quantum_upper_bound_spectral(&e).unwrap();
        prop_assert!(lb <= sb + 1e-9);
    }

    #[test]
    fn local_bound_is_homogeneous(e in expression(), k in -3.0f64..3.0) {
        let lb = local_bound(&e).unwrap();
        prop_assert!((local_bound(&e.scaled(k)).unwrap() - k.abs() * lb).abs() < 1e-9 * (1.0 + lb));
    }

    #[test]
    fn cg_round_trip(seed in any::<u64>(), m0 in 2usize..=3) {
        let s = Scenario::binary(vec![m0, 2, 2]).unwrap();
        let b = NSBox::random_interior(&s, &mut ChaCha8Rng::seed_from_u64(seed));
        let back = cg_to_full(&cg_parametrize(&b), &s).unwrap();
        prop_assert!(back.iter().zip(b.probs()).all(|(x, y)| (x - y).abs() < 1e-12));
    }

    #[test]
    fn shifted_inputs_are_permutations(m in 1usize..6, k in 0usize..6) {
        let inputs = &prop8_inputs(&[m], &[k])[0];
        let mut sorted = inputs.clone();
        sorted.sort_unstable();
        prop_assert_eq!(sorted, (0..m).collect::<Vec<_>>());
    }

    #[test]
    fn hybrid_guess_is_monotone(m in 0.0f64..4.0, c in 0.0f64..2.8, dm in 0.0f64..0.5, dc in 0.0f64..0.3) {
        if let (Ok(a), Ok(b)) = (pguess_hybrid(m, c), pguess_hybrid(m + dm, c + dc)) {
            prop_assert!(b.capped <= a.capped + 1e-12);
            prop_assert!((0.5..=1.0).contains(&a.capped));
        }
    }

    #[test]
    fn chain_guess_is_monotone(v in prop::collection::vec(0.0f64..2.0, 3), bump in 0usize..3, d in 0.0f64..0.5) {
        let vals: Vec<(usize, f64)> = v.iter().enumerate().map(|(i, &x)| (i + 2, x)).collect();
        let mut more = vals.clone();
        more[bump].1 += d;
        if let (Ok(a), Ok(b)) = (pguess_chain_n(&vals, 4), pguess_chain_n(&more, 4)) {
            prop_assert!(b.raw <= a.raw + 1e-12);
            prop_assert!((0.5..=1.0).contains(&b.capped));
        }
    }

    #[test]
    fn edge_value_in_range(seed in any::<u64>(), k in 2usize..=4) {
        let psi = StateVector::random(4, &mut ChaCha8Rng::seed_from_u64(seed));
        let e: Vec<usize> = (0..k).collect();
        for plane in [Plane::XZ, Plane::XY] {
            let v = edge_value_squared(&psi, &e, plane);
            prop_assert!(v >= -1e-12 && v <= (1u64 << (k - 1)) as f64 + 1e-9);
        }
    }

    #[test]
    fn weights_are_unit(angles in prop::collection::vec(0.0f64..std::f64::consts::FRAC_PI_2, 1..5)) {
        let w = hyperspherical_weights(&angles);
        prop_assert_eq!(w.len(), angles.len() + 1);
        prop_assert!((w.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-12);
    }
}
