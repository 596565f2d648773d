//! Independent oracles checked against the library on random inputs.

use bml::inequalities::{chain, gen_svetlichny, local_bound, quantum_upper_bound_spectral, CorrelationExpression, TupleIter};
use bml::networks::{certify_by_complementarity, preset};
use bml::nosignaling::{cg_parametrize, ns_max, LpMode, NSBox, NsObjective, NsTerm, Scenario};
use bml::quantum::{bell_value, bilinear_max_complex, four_vector_max, random_strategy, StateVector};
use bml_simplex::{maximize, Options, Problem, VarKind};
use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

mod common;
use common::{local_oracle, random_pauli};

#[test]
fn expectation_matches_dense_matrix() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    for n in 1..=6 {
        for _ in 0..100 {
            let psi = StateVector::random(n, &mut rng);
            let p = random_pauli(n, &mut rng, true);
            let m = p.to_matrix().unwrap();
            let v = DMatrix::from_column_slice(1 << n, 1, psi.amplitudes());
            let dense = (v.adjoint() * m * &v)[(0, 0)];
            let fast = psi.expectation_pauli(&p).unwrap();
            assert!((dense.re - fast).abs() < 1e-12 && dense.im.abs() < 1e-12, "{p}");
        }
    }
}

#[test]
fn symplectic_matches_matrix_commutation() {
    let mut rng = ChaCha8Rng::seed_from_u64(12);
    for k in 0..1000 {
        let n = 1 + k % 4;
        let (a, b) = (random_pauli(n, &mut rng, false), random_pauli(n, &mut rng, false));
        let (ma, mb) = (a.to_matrix().unwrap(), b.to_matrix().unwrap());
        let commute = (&ma * &mb - &mb * &ma).iter().all(|z| z.norm() < 1e-12);
        assert_eq!(commute, !a.anticommutes(&b), "{a} {b}");
        // The product's matrix is the matrix product.
        let ab = a.multiply(&b).unwrap().to_matrix().unwrap();
        assert!((ab - &ma * &mb).iter().all(|z| z.norm() < 1e-12));
    }
}

#[test]
fn local_bound_matches_elimination_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    for _ in 0..50 {
        let n = rng.random_range(2..=4);
        let shape: Vec<usize> = (0..n).map(|_| rng.random_range(2..=3)).collect();
        let len: usize = shape.iter().product();
        let coeffs: Vec<f64> = (0..len).map(|_| rng.random_range(-3..=3) as f64).collect();
        let e = CorrelationExpression::new("random", shape.clone(), coeffs.clone()).unwrap();
        let lb = local_bound(&e).unwrap();
        assert!((lb - local_oracle(&shape, &coeffs)).abs() < 1e-9, "{shape:?}");
    }
}

#[test]
fn sampled_values_below_spectral_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(14);
    let mut exprs: Vec<CorrelationExpression> = [2, 4, 6].iter().map(|&m| chain(m).unwrap()).collect();
    for (n, m) in [(2, 2), (2, 4), (3, 2), (3, 4)] {
        exprs.push(gen_svetlichny(n, m).unwrap());
    }
    for e in &exprs {
        let bound = quantum_upper_bound_spectral(e).unwrap();
        let parties: Vec<usize> = (0..e.n_parties()).collect();
        for _ in 0..200 {
            let s = random_strategy(e.inputs(), &mut rng);
            assert!(bell_value(e, &s, &parties).unwrap() <= bound + 1e-7, "{}", e.name());
        }
    }
}

#[test]
fn random_strategies_respect_certified_relations() {
    let mut rng = ChaCha8Rng::seed_from_u64(15);
    for name in ["triangle", "square4", "sixqubit", "tree7", "chsh-mermin", "chsh-mermin-eve", "star(4)", "nine"] {
        let rel = preset(name).unwrap();
        let (_, cert) = certify_by_complementarity(&rel, None).unwrap();
        assert!(cert.certificate().is_some(), "{name} not certified");
        let inputs = rel.inputs_per_vertex().unwrap();
        let mut worst = f64::NEG_INFINITY;
        for _ in 0..500 {
            let s = random_strategy(&inputs, &mut rng);
            worst = worst.max(rel.lhs(&rel.edge_values(&s).unwrap()) - rel.bound);
        }
        assert!(worst <= 1e-9, "{name}: excess {worst}");
    }
}

fn random_hermitian<R: Rng>(dim: usize, rng: &mut R) -> DMatrix<Complex64> {
    let a = DMatrix::from_fn(dim, dim, |_, _| Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0)));
    (&a + a.adjoint()) * Complex64::new(0.5, 0.0)
}

#[test]
fn four_vector_maximum_equals_two_vector_maximum() {
    let mut rng = ChaCha8Rng::seed_from_u64(16);
    for dim in [2, 4, 8] {
        for trial in 0..4 {
            let ms: Vec<DMatrix<Complex64>> = (0..3).map(|_| random_hermitian(dim, &mut rng)).collect();
            let four = four_vector_max(&ms, 40, trial);
            let two = bilinear_max_complex(&ms, 40, trial);
            assert!((four - two).abs() < 1e-6 * two.max(1.0), "dim {dim}: {four} vs {two}");
        }
    }
}

/// Full-table LP: P(o|x) >= 0, Σ_o P(o|x) <= 1 and the no-signaling
/// equalities. Equal totals are forced by no-signaling, and the objectives
/// used here have a nonnegative optimum, so the bound is attained at total 1.
fn full_table_oracle(obj: &NsObjective) -> f64 {
    let s = &obj.scenario;
    let n = s.n_parties();
    let d = 1usize << n;
    let nx = s.n_input_tuples();
    let xs: Vec<Vec<usize>> = TupleIter::new(&s.inputs).collect();
    let xi = |x: &[usize]| xs.iter().position(|y| y == x).unwrap();
    let sign = |o: usize, parties: &[usize]| if parties.iter().map(|&p| (o >> (n - 1 - p)) & 1).sum::<usize>() % 2 == 0 { 1.0 } else { -1.0 };
    let mut c = vec![0.0; nx * d];
    for t in &obj.terms {
        for (x, coef) in t.expression.terms() {
            let mut full = vec![0; n];
            for (&p, &v) in t.parties.iter().zip(&x) {
                full[p] = v;
            }
            // The correlator of t.parties does not depend on the other inputs.
            let base = xi(&full);
            for o in 0..d {
                c[base * d + o] += t.weight * coef * sign(o, &t.parties);
            }
        }
    }
    let mut p = Problem::new(c, vec![VarKind::NonNegative; nx * d]);
    for k in 0..nx {
        let mut row = vec![0.0; nx * d];
        row[k * d..(k + 1) * d].iter_mut().for_each(|v| *v = 1.0);
        p.push_row(row, 1.0);
    }
    for i in 0..n {
        let bit = 1 << (n - 1 - i);
        for x in xs.iter().filter(|x| x[i] == 0) {
            for xi_new in 1..s.inputs[i] {
                let mut y = x.clone();
                y[i] = xi_new;
                for o in (0..d).filter(|o| o & bit == 0) {
                    let mut row = vec![0.0; nx * d];
                    for oo in [o, o | bit] {
                        row[xi(x) * d + oo] += 1.0;
                        row[xi(&y) * d + oo] -= 1.0;
                    }
                    p.push_row(row.clone(), 0.0);
                    p.push_row(row.iter().map(|v| -v).collect(), 0.0);
                }
            }
        }
    }
    maximize(&p, Options::default()).unwrap().value
}

fn random_objective<R: Rng>(inputs: Vec<usize>, rng: &mut R) -> NsObjective {
    let s = Scenario::binary(inputs.clone()).unwrap();
    let subsets = [vec![0, 1], vec![0, 2], vec![1, 2], vec![0, 1, 2]];
    let chosen: Vec<&Vec<usize>> = subsets.iter().filter(|_| rng.random_bool(0.7)).collect();
    let terms = chosen
        .into_iter()
        .map(|parties| {
            let shape: Vec<usize> = parties.iter().map(|&p| inputs[p]).collect();
            let len = shape.iter().product();
            let coeffs = (0..len).map(|_| rng.random_range(-2..=2) as f64).collect();
            NsTerm { weight: 1.0, expression: CorrelationExpression::new("r", shape, coeffs).unwrap(), parties: parties.clone() }
        })
        .collect();
    NsObjective::new("random", s, terms).unwrap()
}

#[test]
fn ns_lp_matches_full_table_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    for inputs in [vec![2, 2, 2], vec![3, 2, 2]] {
        for _ in 0..10 {
            let obj = random_objective(inputs.clone(), &mut rng);
            let float = ns_max(&obj, LpMode::Float).unwrap();
            let exact = ns_max(&obj, LpMode::Exact).unwrap();
            let oracle = full_table_oracle(&obj);
            assert!((float.value - exact.value).abs() < 1e-7, "{} vs {}", float.value, exact.value);
            assert!((float.value - oracle).abs() < 1e-7, "{} vs oracle {oracle}", float.value);
            // Any explicit box is feasible and cannot beat the optimum.
            let s = &obj.scenario;
            for b in [NSBox::white_noise(s), NSBox::random_deterministic(s, &mut rng), NSBox::random_interior(s, &mut rng)] {
                assert!(obj.value_on(&b).unwrap() <= float.value + 1e-9);
            }
            // The optimal cg vector maps back to a valid box with the same value.
            let b = NSBox::new(s.clone(), bml::nosignaling::cg_to_full(&float.cg, s).unwrap()).unwrap();
            assert!((obj.value_on(&b).unwrap() - float.value).abs() < 1e-7);
            assert!((cg_parametrize(&b)[0] - 1.0).abs() < 1e-12);
        }
    }
}
