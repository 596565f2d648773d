use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use serde::Serialize;

use super::{restart_seeds, top_eigenvector, QuantumError};
use crate::pauli::{Pauli, PauliString};

/// Largest n for the bilinear maximum (registers of 2n-1 qubits).
pub const MAX_LADDER_N: usize = 3;

/// S_1 = {X, Z}; S_{2k+1} appends one of IX, IZ, XI, ZI to every element of S_{2k-1}.
pub fn ladder_s_set(n: usize) -> Result<Vec<PauliString>, QuantumError> {
    if n == 0 || n > 16 {
        return Err(QuantumError::TooLarge(n));
    }
    let mut set: Vec<Vec<Pauli>> = vec![vec![Pauli::X], vec![Pauli::Z]];
    let tails = [[Pauli::I, Pauli::X], [Pauli::I, Pauli::Z], [Pauli::X, Pauli::I], [Pauli::Z, Pauli::I]];
    for _ in 1..n {
        set = set
            .iter()
            .flat_map(|s| tails.iter().map(move |t| s.iter().chain(t).copied().collect()))
            .collect();
    }
    Ok(set.iter().map(|s| PauliString::from_paulis(s).expect("at most 31 qubits")).collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LadderBilinear {
    pub n: usize,
    /// Maximum over real registers.
    pub real: f64,
    /// Maximum over complex registers.
    pub complex: f64,
}

fn real_matrices(ops: &[PauliString]) -> Result<Vec<DMatrix<f64>>, QuantumError> {
    ops.iter()
        .map(|p| {
            let m = p.to_matrix().map_err(|_| QuantumError::TooLarge(p.n_qubits()))?;
            if m.iter().any(|c| c.im != 0.0) {
                return Err(QuantumError::ShapeMismatch(format!("{p} is not real")));
            }
            Ok(m.map(|c| c.re))
        })
        .collect()
}

fn complex_matrices(ops: &[PauliString]) -> Result<Vec<DMatrix<Complex64>>, QuantumError> {
    ops.iter().map(|p| p.to_matrix().map_err(|_| QuantumError::TooLarge(p.n_qubits()))).collect()
}

fn unit_real<R: Rng>(dim: usize, rng: &mut R) -> DVector<f64> {
    DVector::from_fn(dim, |_, _| rng.sample::<f64, _>(StandardNormal)).normalize()
}

fn unit_complex<R: Rng>(dim: usize, rng: &mut R) -> DVector<Complex64> {
    DVector::from_fn(dim, |_, _| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).normalize()
}

const MAX_SWEEPS: usize = 2000;
const SWEEP_TOL: f64 = 1e-13;

/// max over real unit a, b of Σ_k (aᵀ M_k b)², by alternating top eigenvectors
/// of Σ_k (M_k b)(M_k b)ᵀ.
pub fn bilinear_max_real(ms: &[DMatrix<f64>], restarts: usize, seed: u64) -> f64 {
    let dim = ms[0].nrows();
    let step = |b: &DVector<f64>| -> (f64, DVector<f64>) {
        let mut eff = DMatrix::<f64>::zeros(dim, dim);
        for m in ms {
            let v = m * b;
            eff += &v * v.transpose();
        }
        let eig = eff.symmetric_eigen();
        let k = eig.eigenvalues.imax();
        (eig.eigenvalues[k], eig.eigenvectors.column(k).into_owned())
    };
    restart_seeds(seed, restarts.max(1))
        .into_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let mut b = unit_real(dim, &mut rng);
            let mut last = f64::NEG_INFINITY;
            for _ in 0..MAX_SWEEPS {
                let (_, a) = step(&b);
                let (v, nb) = step(&a);
                b = nb;
                if v - last <= SWEEP_TOL {
                    last = last.max(v);
                    break;
                }
                last = v;
            }
            last
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// Complex counterpart: max Σ_k |⟨a|M_k|b⟩|².
pub fn bilinear_max_complex(ms: &[DMatrix<Complex64>], restarts: usize, seed: u64) -> f64 {
    let dim = ms[0].nrows();
    let step = |b: &DVector<Complex64>| -> (f64, DVector<Complex64>) {
        let mut eff = DMatrix::<Complex64>::zeros(dim, dim);
        for m in ms {
            let v = m * b;
            eff += &v * v.adjoint();
        }
        let (val, vec) = top_eigenvector(eff);
        (val, DVector::from_vec(vec))
    };
    restart_seeds(seed, restarts.max(1))
        .into_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let mut b = unit_complex(dim, &mut rng);
            let mut last = f64::NEG_INFINITY;
            for _ in 0..MAX_SWEEPS {
                let (_, a) = step(&b);
                let (v, nb) = step(&a);
                b = nb;
                if v - last <= SWEEP_TOL {
                    last = last.max(v);
                    break;
                }
                last = v;
            }
            last
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// max over four unit vectors of Re Σ_k ⟨φ1|M_k|φ2⟩⟨φ3|M_k|φ4⟩, by cycling
/// through the four vectors (each update is a normalized linear response).
pub fn four_vector_max(ms: &[DMatrix<Complex64>], restarts: usize, seed: u64) -> f64 {
    let dim = ms[0].nrows();
    let value = |p: &[DVector<Complex64>; 4]| -> f64 {
        ms.iter()
            .map(|m| (p[0].dotc(&(m * &p[1])) * p[2].dotc(&(m * &p[3]))).re)
            .sum()
    };
    let coef = |x: &DVector<Complex64>, y: &DVector<Complex64>| -> Vec<Complex64> {
        ms.iter().map(|m| x.dotc(&(m * y))).collect()
    };
    let combine = |c: &[Complex64], v: &DVector<Complex64>, conj: bool| -> DVector<Complex64> {
        let mut w = DVector::<Complex64>::zeros(dim);
        for (m, &ck) in ms.iter().zip(c) {
            w += (m * v) * if conj { ck.conj() } else { ck };
        }
        w
    };
    let set = |w: DVector<Complex64>, old: &DVector<Complex64>| if w.norm() > 1e-14 { w.normalize() } else { old.clone() };
    restart_seeds(seed, restarts.max(1))
        .into_iter()
        .map(|s| {
            let mut rng = ChaCha8Rng::seed_from_u64(s);
            let mut p: [DVector<Complex64>; 4] = std::array::from_fn(|_| unit_complex(dim, &mut rng));
            let mut last = value(&p);
            for _ in 0..MAX_SWEEPS {
                // φ1 ∝ Σ c_k M_k φ2 with c_k = ⟨φ3|M_k|φ4⟩.
                p[0] = set(combine(&coef(&p[2], &p[3]), &p[1], false), &p[0]);
                // φ2 ∝ Σ conj(c_k) M_k φ1.
                p[1] = set(combine(&coef(&p[2], &p[3]), &p[0], true), &p[1]);
                // φ3 ∝ Σ a_k M_k φ4 with a_k = ⟨φ1|M_k|φ2⟩.
                p[2] = set(combine(&coef(&p[0], &p[1]), &p[3], false), &p[2]);
                p[3] = set(combine(&coef(&p[0], &p[1]), &p[2], true), &p[3]);
                let v = value(&p);
                if v - last <= SWEEP_TOL {
                    last = last.max(v);
                    break;
                }
                last = v;
            }
            last
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

/// max ⟨ψ1 ψ2| Σ_{l ∈ S} σ_l ⊗ σ_l |ψ2 ψ1⟩ for the ladder S-set of size n.
pub fn ladder_bilinear_max(n: usize, restarts: usize, seed: u64) -> Result<LadderBilinear, QuantumError> {
    if n == 0 || n > MAX_LADDER_N {
        return Err(QuantumError::TooLarge(n));
    }
    let ops = ladder_s_set(n)?;
    let real = bilinear_max_real(&real_matrices(&ops)?, restarts, seed);
    let complex = bilinear_max_complex(&complex_matrices(&ops)?, restarts, seed);
    Ok(LadderBilinear { n, real, complex })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::parse_list;

    #[test]
    fn s_sets() {
        let s1: Vec<String> = ladder_s_set(1).unwrap().iter().map(|p| p.label()).collect();
        assert_eq!(s1, ["X", "Z"]);
        let s3 = ladder_s_set(2).unwrap();
        assert_eq!(s3, parse_list("XIX XIZ XXI XZI ZIX ZIZ ZXI ZZI").unwrap());
        let s5 = ladder_s_set(3).unwrap();
        assert_eq!((s5.len(), s5[0].n_qubits()), (32, 5));
        assert!(s5.iter().all(|p| (p.x_bits() & p.z_bits()) == 0));
    }

    #[test]
    fn small_maxima() {
        let r = ladder_bilinear_max(1, 8, 1).unwrap();
        assert!((r.real - 1.0).abs() < 1e-9);
        assert!((r.complex - 2.0).abs() < 1e-9);
        let r = ladder_bilinear_max(2, 20, 1).unwrap();
        assert!((r.real - 2.0).abs() < 1e-6, "{}", r.real);
    }

    #[test]
    fn four_equals_two_on_paulis() {
        let ms = complex_matrices(&ladder_s_set(1).unwrap()).unwrap();
        let four = four_vector_max(&ms, 8, 2);
        let two = bilinear_max_complex(&ms, 8, 2);
        assert!((four - two).abs() < 1e-6, "{four} {two}");
    }
}
