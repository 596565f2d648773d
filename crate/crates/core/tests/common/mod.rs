#![allow(dead_code)]

use bml::pauli::PauliString;
use rand::Rng;

pub fn random_pauli<R: Rng>(n: usize, rng: &mut R, hermitian: bool) -> PauliString {
    let mask = (1u64 << n) - 1;
    let phase = if hermitian { 2 * rng.random_range(0..2u8) } else { rng.random_range(0..4u8) };
    PauliString::from_bits(n, rng.random::<u64>() & mask, rng.random::<u64>() & mask, phase).unwrap()
}

/// max over deterministic ±1 assignments, eliminating the first party by enumeration.
pub fn local_oracle(shape: &[usize], coeffs: &[f64]) -> f64 {
    if shape.len() == 1 {
        return coeffs.iter().map(|c| c.abs()).sum();
    }
    let m0 = shape[0];
    let stride = coeffs.len() / m0;
    (0..1usize << m0)
        .map(|signs| {
            let reduced: Vec<f64> = (0..stride)
                .map(|r| (0..m0).map(|x| if signs >> x & 1 == 1 { -coeffs[x * stride + r] } else { coeffs[x * stride + r] }).sum())
                .collect();
            local_oracle(&shape[1..], &reduced)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}
