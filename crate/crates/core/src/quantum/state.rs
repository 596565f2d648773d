use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;
use serde::{Deserialize, Serialize};

use super::QuantumError;
use crate::pauli::{phase_factor, Pauli, PauliString};

pub const NORM_TOL: f64 = 1e-10;
pub const MAX_STATE_QUBITS: usize = 20;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const I: Complex64 = Complex64::new(0.0, 1.0);

/// Pure state on n qubits. Qubit q is bit (n-1-q) of the amplitude index, so
/// qubit 0 is the most significant bit and `|q0 q1 ..>` reads left to right.
#[derive(Debug, Clone, PartialEq)]
pub struct StateVector {
    n: usize,
    amps: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
struct StateJson {
    n_qubits: usize,
    amplitudes: Vec<(f64, f64)>,
}

impl StateVector {
    pub fn new(n: usize, amps: Vec<Complex64>) -> Result<Self, QuantumError> {
        if n > MAX_STATE_QUBITS || amps.len() != 1 << n {
            return Err(QuantumError::SizeMismatch { expected: 1 << n.min(MAX_STATE_QUBITS), got: amps.len() });
        }
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(QuantumError::NotNormalized(norm));
        }
        Ok(StateVector { n, amps })
    }

    /// Normalizes first; fails only on a zero vector.
    pub fn from_unnormalized(n: usize, mut amps: Vec<Complex64>) -> Result<Self, QuantumError> {
        let norm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(QuantumError::NotNormalized(norm));
        }
        amps.iter_mut().for_each(|a| *a /= norm);
        StateVector::new(n, amps)
    }

    pub fn from_real(n: usize, amps: &[f64]) -> Result<Self, QuantumError> {
        StateVector::from_unnormalized(n, amps.iter().map(|&a| Complex64::new(a, 0.0)).collect())
    }

    pub fn basis(n: usize, index: usize) -> Self {
        let mut amps = vec![ZERO; 1 << n];
        amps[index] = Complex64::new(1.0, 0.0);
        StateVector { n, amps }
    }

    /// Index of the basis state with the given qubit values (qubit 0 first).
    pub fn index_of_bits(bits: &[u8]) -> usize {
        bits.iter().fold(0, |acc, &b| acc << 1 | (b & 1) as usize)
    }

    /// (|0..0> + |1..1>)/√2.
    pub fn ghz(n: usize) -> Self {
        let mut amps = vec![ZERO; 1 << n];
        let h = Complex64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
        amps[0] = h;
        amps[(1 << n) - 1] = h;
        StateVector { n, amps }
    }

    /// (|01> - |10>)/√2.
    pub fn singlet() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        StateVector::from_real(2, &[0.0, h, -h, 0.0]).unwrap()
    }

    /// Haar-random via normalized complex Gaussian amplitudes.
    pub fn random<R: Rng + ?Sized>(n: usize, rng: &mut R) -> Self {
        let amps = (0..1 << n)
            .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
            .collect();
        StateVector::from_unnormalized(n, amps).expect("nonzero with probability one")
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }
    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn inner(&self, other: &[Complex64]) -> Complex64 {
        self.amps.iter().zip(other).map(|(a, b)| a.conj() * b).sum()
    }

    fn masks(&self, p: &PauliString) -> (usize, usize) {
        let mut xm = 0;
        let mut zm = 0;
        for q in 0..self.n {
            let bit = 1 << (self.n - 1 - q);
            if p.x_bits() >> q & 1 == 1 {
                xm |= bit;
            }
            if p.z_bits() >> q & 1 == 1 {
                zm |= bit;
            }
        }
        (xm, zm)
    }

    /// P|ψ>, using P|i> = i^(phase + #Y) (-1)^(i·z) |i ⊕ x>.
    pub fn apply_pauli(&self, p: &PauliString) -> Result<Vec<Complex64>, QuantumError> {
        if p.n_qubits() != self.n {
            return Err(QuantumError::SizeMismatch { expected: self.n, got: p.n_qubits() });
        }
        let (xm, zm) = self.masks(p);
        let k = (p.phase() as u32 + (p.x_bits() & p.z_bits()).count_ones()) % 4;
        let global = phase_factor(k as u8);
        let mut out = vec![ZERO; self.dim()];
        for (i, a) in self.amps.iter().enumerate() {
            let s = if (i & zm).count_ones() % 2 == 1 { -global } else { global };
            out[i ^ xm] = s * a;
        }
        Ok(out)
    }

    pub fn expectation_pauli(&self, p: &PauliString) -> Result<f64, QuantumError> {
        if !p.is_hermitian() {
            return Err(QuantumError::NonHermitian(p.to_string()));
        }
        let v = self.apply_pauli(p)?;
        let e = self.inner(&v);
        debug_assert!(e.im.abs() < 1e-9, "imaginary residue {}", e.im);
        Ok(e.re)
    }

    /// Expectation of a product of Bloch-vector observables on distinct qubits.
    pub fn expectation_product(&self, ops: &[(usize, [f64; 3])]) -> f64 {
        let mut v = self.amps.clone();
        for &(q, n) in ops {
            apply_bloch_in_place(&mut v, self.n, q, n);
        }
        self.inner(&v).re
    }

    /// Correlation tensor entries on `qubits` with axis pair `axes` per site,
    /// identity elsewhere. Entry index bit (k-1-j) selects the axis of site j.
    pub fn correlation_tensor(&self, qubits: &[usize], axes: [Pauli; 2]) -> Vec<f64> {
        let k = qubits.len();
        (0..1usize << k)
            .map(|a| {
                let placements: Vec<(usize, Pauli)> =
                    qubits.iter().enumerate().map(|(j, &q)| (q, axes[a >> (k - 1 - j) & 1])).collect();
                self.expectation_pauli(&PauliString::single(self.n, &placements)).expect("hermitian by construction")
            })
            .collect()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(StateJson {
            n_qubits: self.n,
            amplitudes: self.amps.iter().map(|a| (a.re, a.im)).collect(),
        })
        .expect("plain numbers")
    }
}

/// v <- (n·σ)_q v.
pub fn apply_bloch_in_place(v: &mut [Complex64], n_qubits: usize, q: usize, n: [f64; 3]) {
    let bit = 1 << (n_qubits - 1 - q);
    let a00 = Complex64::new(n[2], 0.0);
    let a01 = Complex64::new(n[0], 0.0) - I * n[1];
    let a10 = Complex64::new(n[0], 0.0) + I * n[1];
    for i in 0..v.len() {
        if i & bit == 0 {
            let j = i | bit;
            let (x0, x1) = (v[i], v[j]);
            v[i] = a00 * x0 + a01 * x1;
            v[j] = a10 * x0 - a00 * x1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        PauliString::parse(s).unwrap()
    }

    #[test]
    fn zero_state_z() {
        assert_eq!(StateVector::basis(1, 0).expectation_pauli(&p("Z")).unwrap(), 1.0);
    }

    #[test]
    fn ghz_correlators() {
        let g = StateVector::ghz(3);
        assert!((g.expectation_pauli(&p("XXX")).unwrap() - 1.0).abs() < 1e-12);
        assert!((g.expectation_pauli(&p("ZZI")).unwrap() - 1.0).abs() < 1e-12);
        assert!(g.expectation_pauli(&p("ZII")).unwrap().abs() < 1e-12);
        assert!((g.expectation_pauli(&p("XYY")).unwrap() + 1.0).abs() < 1e-12);
    }

    #[test]
    fn leftmost_qubit_is_msb() {
        let s = StateVector::basis(2, StateVector::index_of_bits(&[1, 0]));
        assert_eq!(s.expectation_pauli(&p("ZI")).unwrap(), -1.0);
        assert_eq!(s.expectation_pauli(&p("IZ")).unwrap(), 1.0);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(StateVector::from_real(1, &[1.0, 1.0]).map(|s| s.norm()), Ok(_)));
        assert!(matches!(
            StateVector::new(1, vec![Complex64::new(1.0, 0.0); 2]),
            Err(QuantumError::NotNormalized(_))
        ));
        let s = StateVector::basis(1, 0);
        assert!(matches!(s.expectation_pauli(&p("Z").with_phase(1)), Err(QuantumError::NonHermitian(_))));
        assert!(s.expectation_pauli(&p("ZZ")).is_err());
    }

    #[test]
    fn bloch_product_matches_pauli() {
        let g = StateVector::ghz(2);
        let v = g.expectation_product(&[(0, [1.0, 0.0, 0.0]), (1, [0.0, 1.0, 0.0])]);
        assert!((v - g.expectation_pauli(&p("XY")).unwrap()).abs() < 1e-12);
    }

    #[test]
    fn singlet_tensor() {
        let t = StateVector::singlet().correlation_tensor(&[0, 1], [Pauli::X, Pauli::Z]);
        for (got, want) in t.iter().zip([-1.0, 0.0, 0.0, -1.0]) {
            assert!((got - want).abs() < 1e-12);
        }
    }
}
