use nalgebra::DMatrix;
use num_complex::Complex64;
use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use super::{apply_bloch_in_place, QuantumError, QuantumStrategy, StateVector};
use crate::inequalities::CorrelationExpression;

/// Seesaw runs are capped at this many qubits (dense 1024 x 1024 operator).
pub const MAX_SEESAW_QUBITS: usize = 10;

const AXES: [[f64; 3]; 3] = [[1.0, 0.0, 0.0], [0.0, 1.0, 0.0], [0.0, 0.0, 1.0]];

/// Σ_t w_t ⟨⊗_{(p, x) ∈ t} A^{(p)}_x⟩ with one qubit per party.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearObjective {
    pub inputs: Vec<usize>,
    pub terms: Vec<(f64, Vec<(usize, usize)>)>,
}

impl LinearObjective {
    pub fn new(inputs: Vec<usize>) -> Self {
        LinearObjective { inputs, terms: Vec::new() }
    }

    pub fn n_parties(&self) -> usize {
        self.inputs.len()
    }

    /// Adds weight · expr evaluated on `parties`.
    pub fn add_expression(&mut self, weight: f64, expr: &CorrelationExpression, parties: &[usize]) -> Result<(), QuantumError> {
        if parties.len() != expr.n_parties() {
            return Err(QuantumError::ShapeMismatch(format!("{} parties for {}", parties.len(), expr.name())));
        }
        for (j, &p) in parties.iter().enumerate() {
            if self.inputs.get(p) != Some(&expr.inputs()[j]) {
                return Err(QuantumError::ShapeMismatch(format!("party {p} input count")));
            }
        }
        for (x, c) in expr.terms() {
            if c != 0.0 && weight != 0.0 {
                self.terms.push((weight * c, parties.iter().copied().zip(x).collect()));
            }
        }
        Ok(())
    }

    pub fn value(&self, s: &QuantumStrategy) -> f64 {
        self.terms
            .iter()
            .map(|(w, t)| {
                let ops: Vec<(usize, [f64; 3])> = t.iter().map(|&(p, x)| (p, s.observables[p][x])).collect();
                w * s.state.expectation_product(&ops)
            })
            .sum()
    }

    /// Dense Bell operator for the given observables.
    pub fn operator(&self, observables: &[Vec<[f64; 3]>]) -> DMatrix<Complex64> {
        let n = self.n_parties();
        let dim = 1usize << n;
        let mut m = DMatrix::<Complex64>::zeros(dim, dim);
        let mut col = vec![Complex64::new(0.0, 0.0); dim];
        for j in 0..dim {
            for (w, t) in &self.terms {
                col.iter_mut().for_each(|c| *c = Complex64::new(0.0, 0.0));
                col[j] = Complex64::new(*w, 0.0);
                for &(p, x) in t {
                    apply_bloch_in_place(&mut col, n, p, observables[p][x]);
                }
                for (i, c) in col.iter().enumerate() {
                    m[(i, j)] += c;
                }
            }
        }
        m
    }

    /// ∂ value / ∂ n^{(p)}_x for every input x of party p.
    fn gradients(&self, s: &QuantumStrategy, p: usize) -> Vec<[f64; 3]> {
        let n = self.n_parties();
        let psi = s.state.amplitudes();
        let mut g = vec![[0.0; 3]; self.inputs[p]];
        let mut phi = vec![Complex64::new(0.0, 0.0); psi.len()];
        for (w, t) in &self.terms {
            let Some(&(_, xp)) = t.iter().find(|(q, _)| *q == p) else { continue };
            phi.copy_from_slice(psi);
            for &(q, x) in t.iter().filter(|(q, _)| *q != p) {
                apply_bloch_in_place(&mut phi, n, q, s.observables[q][x]);
            }
            for (k, axis) in AXES.iter().enumerate() {
                let mut v = phi.clone();
                apply_bloch_in_place(&mut v, n, p, *axis);
                g[xp][k] += w * s.state.inner(&v).re;
            }
        }
        g
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeesawOptions {
    pub restarts: usize,
    pub max_iters: usize,
    pub tol: f64,
    pub seed: u64,
}

impl Default for SeesawOptions {
    fn default() -> Self {
        SeesawOptions { restarts: 32, max_iters: 500, tol: 1e-10, seed: 0 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SeesawRun {
    pub strategy: QuantumStrategy,
    pub value: f64,
    /// Seed of the restart that produced this run.
    pub seed: u64,
    pub iterations: usize,
}

fn random_unit<R: Rng>(rng: &mut R) -> [f64; 3] {
    loop {
        let v: [f64; 3] = [rng.sample(StandardNormal), rng.sample(StandardNormal), rng.sample(StandardNormal)];
        let n = (v[0] * v[0] + v[1] * v[1] + v[2] * v[2]).sqrt();
        if n > 1e-6 {
            return [v[0] / n, v[1] / n, v[2] / n];
        }
    }
}

/// Independent random Bloch vectors for the given input counts.
pub fn random_observables<R: Rng>(inputs: &[usize], rng: &mut R) -> Vec<Vec<[f64; 3]>> {
    inputs.iter().map(|&m| (0..m).map(|_| random_unit(rng)).collect()).collect()
}

/// Haar-random state with random observables.
pub fn random_strategy<R: Rng>(inputs: &[usize], rng: &mut R) -> QuantumStrategy {
    let state = StateVector::random(inputs.len(), rng);
    let obs = random_observables(inputs, rng);
    QuantumStrategy::new(state, obs).expect("unit vectors by construction")
}

/// Eigenvector of the largest eigenvalue of a Hermitian matrix.
pub fn top_eigenvector(m: DMatrix<Complex64>) -> (f64, Vec<Complex64>) {
    let eig = m.symmetric_eigen();
    let (k, &val) = eig
        .eigenvalues
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .expect("nonempty matrix");
    (val, eig.eigenvectors.column(k).iter().copied().collect())
}

fn run_once(obj: &LinearObjective, opts: &SeesawOptions, seed: u64) -> Result<SeesawRun, QuantumError> {
    let n = obj.n_parties();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut obs = random_observables(&obj.inputs, &mut rng);
    let mut last = f64::NEG_INFINITY;
    let mut strategy = None;
    let mut iterations = 0;
    let guard = |before: f64, after: f64, step: &str| -> Result<(), QuantumError> {
        if after < before - 1e-9 * before.abs().max(1.0) {
            Err(QuantumError::NumericalFailure(format!("seesaw {step} step decreased {before} to {after}")))
        } else {
            Ok(())
        }
    };
    for it in 0..opts.max_iters {
        iterations = it + 1;
        let (_, v) = top_eigenvector(obj.operator(&obs));
        let mut s = QuantumStrategy { state: StateVector::from_unnormalized(n, v)?, observables: obs.clone() };
        let mut value = obj.value(&s);
        guard(last, value, "state")?;
        for p in 0..n {
            let g = obj.gradients(&s, p);
            for (x, gx) in g.iter().enumerate() {
                let norm = (gx[0] * gx[0] + gx[1] * gx[1] + gx[2] * gx[2]).sqrt();
                if norm > 1e-14 {
                    s.observables[p][x] = [gx[0] / norm, gx[1] / norm, gx[2] / norm];
                }
            }
            let v = obj.value(&s);
            guard(value, v, "observable")?;
            value = v;
        }
        obs = s.observables.clone();
        strategy = Some(s);
        let done = value - last <= opts.tol * value.abs().max(1.0);
        last = value;
        if done {
            break;
        }
    }
    let strategy = strategy.ok_or_else(|| QuantumError::NumericalFailure("no iterations".into()))?;
    Ok(SeesawRun { strategy, value: last, seed, iterations })
}

/// Per-restart seeds drawn from the master seed.
pub fn restart_seeds(master: u64, restarts: usize) -> Vec<u64> {
    let mut rng = ChaCha8Rng::seed_from_u64(master);
    (0..restarts).map(|_| rng.next_u64()).collect()
}

/// Alternates the state (top eigenvector of the Bell operator) and each
/// party's Bloch vectors (normalized gradient). Returns the best run by
/// (value, seed), independent of the thread schedule.
pub fn seesaw(obj: &LinearObjective, opts: &SeesawOptions) -> Result<SeesawRun, QuantumError> {
    if obj.n_parties() > MAX_SEESAW_QUBITS {
        return Err(QuantumError::TooManyQubits(obj.n_parties(), MAX_SEESAW_QUBITS));
    }
    let runs: Vec<SeesawRun> = restart_seeds(opts.seed, opts.restarts.max(1))
        .into_par_iter()
        .map(|seed| run_once(obj, opts, seed))
        .collect::<Result<_, _>>()?;
    Ok(runs
        .into_iter()
        .max_by(|a, b| a.value.total_cmp(&b.value).then(a.seed.cmp(&b.seed)))
        .expect("at least one restart"))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScanPoint {
    pub angles: Vec<f64>,
    pub weights: Vec<f64>,
    pub values: Vec<f64>,
    pub sum_sq: f64,
    pub seed: u64,
}

/// w_1 = cos φ_1, w_2 = sin φ_1 cos φ_2, ..., w_m = Π sin φ_j.
pub fn hyperspherical_weights(angles: &[f64]) -> Vec<f64> {
    let mut w = Vec::with_capacity(angles.len() + 1);
    let mut s = 1.0;
    for a in angles {
        w.push(s * a.cos());
        s *= a.sin();
    }
    w.push(s);
    w
}

pub fn write_scan_csv<W: std::io::Write>(points: &[ScanPoint], out: W) -> Result<(), csv::Error> {
    let mut w = csv::Writer::from_writer(out);
    let (na, nv) = points.first().map_or((0, 0), |p| (p.angles.len(), p.values.len()));
    let mut header: Vec<String> = (1..=na).map(|i| format!("angle{i}")).collect();
    header.extend((1..=nv).map(|i| format!("value{i}")));
    header.extend(["sum_sq".to_string(), "seed".to_string()]);
    w.write_record(&header)?;
    for p in points {
        let mut rec: Vec<String> = p.angles.iter().chain(&p.values).map(|v| format!("{v:.12}")).collect();
        rec.push(format!("{:.12}", p.sum_sq));
        rec.push(p.seed.to_string());
        w.write_record(&rec)?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::inequalities::{chain, chsh, mermin3, quantum_upper_bound_spectral};

    fn single(expr: &CorrelationExpression) -> LinearObjective {
        let mut o = LinearObjective::new(expr.inputs().to_vec());
        let parties: Vec<usize> = (0..expr.n_parties()).collect();
        o.add_expression(1.0, expr, &parties).unwrap();
        o
    }

    #[test]
    fn single_edge_reaches_tsirelson() {
        let opts = SeesawOptions { restarts: 4, ..Default::default() };
        let r = seesaw(&single(&chsh()), &opts).unwrap();
        assert!((r.value - 2.0 * 2f64.sqrt()).abs() < 1e-6, "{}", r.value);
        let r = seesaw(&single(&mermin3()), &opts).unwrap();
        assert!((r.value - 4.0).abs() < 1e-6);
        let c = chain(4).unwrap();
        let r = seesaw(&single(&c), &opts).unwrap();
        assert!((r.value - quantum_upper_bound_spectral(&c).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn deterministic_for_seed() {
        let opts = SeesawOptions { restarts: 3, seed: 7, ..Default::default() };
        let a = seesaw(&single(&chsh()), &opts).unwrap();
        let b = seesaw(&single(&chsh()), &opts).unwrap();
        assert_eq!((a.seed, a.value), (b.seed, b.value));
    }

    #[test]
    fn operator_matches_value() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let obj = single(&mermin3());
        let s = random_strategy(&obj.inputs, &mut rng);
        let m = obj.operator(&s.observables);
        let psi = nalgebra::DVector::from_column_slice(s.state.amplitudes());
        let e = (psi.adjoint() * &m * &psi)[(0, 0)];
        assert!((e.re - obj.value(&s)).abs() < 1e-12);
    }

    #[test]
    fn weights_on_sphere() {
        let w = hyperspherical_weights(&[0.3, 1.1]);
        assert!((w.iter().map(|x| x * x).sum::<f64>() - 1.0).abs() < 1e-15);
    }
}
