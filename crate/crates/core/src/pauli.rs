//! n-qubit Pauli strings in binary symplectic form.
//!
//! Qubit 0 is the leftmost label character and the lowest bit of `x`/`z`.
//! The stored phase multiplies the tensor product of *Hermitian* single-qubit
//! Paulis, so every label parses to phase 0 and a string is Hermitian exactly
//! when the phase is 0 or 2. The X^a Z^b convention is available through
//! [`PauliString::symplectic_phase`].

use std::fmt;
use std::str::FromStr;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

pub const MAX_QUBITS: usize = 64;
pub const MATRIX_QUBIT_LIMIT: usize = 12;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PauliError {
    #[error("invalid character {ch:?} at position {pos}")]
    InvalidCharacter { ch: char, pos: usize },
    #[error("empty label")]
    EmptyLabel,
    #[error("length mismatch: {0} vs {1} qubits")]
    LengthMismatch(usize, usize),
    #[error("{0} qubits exceeds the limit of {1}")]
    TooLarge(usize, usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    pub fn from_bits(x: bool, z: bool) -> Pauli {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    pub fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    pub fn symbol(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }

    /// 2×2 matrix of the Hermitian Pauli.
    pub fn matrix(self) -> [[Complex64; 2]; 2] {
        let o = Complex64::new(0.0, 0.0);
        let l = Complex64::new(1.0, 0.0);
        let i = Complex64::new(0.0, 1.0);
        match self {
            Pauli::I => [[l, o], [o, l]],
            Pauli::X => [[o, l], [l, o]],
            Pauli::Y => [[o, -i], [i, o]],
            Pauli::Z => [[l, o], [o, -l]],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS);
        PauliString { n, x: 0, z: 0, phase: 0 }
    }

    pub fn from_bits(n: usize, x: u64, z: u64, phase: u8) -> Result<Self, PauliError> {
        if n == 0 {
            return Err(PauliError::EmptyLabel);
        }
        if n > MAX_QUBITS {
            return Err(PauliError::TooLarge(n, MAX_QUBITS));
        }
        let mask = mask(n);
        Ok(PauliString { n, x: x & mask, z: z & mask, phase: phase % 4 })
    }

    pub fn from_paulis(ps: &[Pauli]) -> Result<Self, PauliError> {
        if ps.is_empty() {
            return Err(PauliError::EmptyLabel);
        }
        if ps.len() > MAX_QUBITS {
            return Err(PauliError::TooLarge(ps.len(), MAX_QUBITS));
        }
        let mut s = PauliString::identity(ps.len());
        for (q, p) in ps.iter().enumerate() {
            s.set(q, *p);
        }
        Ok(s)
    }

    /// A single Pauli `p` placed on each of `qubits` of an `n`-qubit register.
    pub fn single(n: usize, placements: &[(usize, Pauli)]) -> Self {
        let mut s = PauliString::identity(n);
        for &(q, p) in placements {
            s.set(q, p);
        }
        s
    }

    pub fn parse(label: &str) -> Result<Self, PauliError> {
        let chars: Vec<char> = label.chars().collect();
        if chars.is_empty() {
            return Err(PauliError::EmptyLabel);
        }
        let ps = chars
            .iter()
            .enumerate()
            .map(|(pos, &ch)| match ch {
                'I' => Ok(Pauli::I),
                'X' => Ok(Pauli::X),
                'Y' => Ok(Pauli::Y),
                'Z' => Ok(Pauli::Z),
                _ => Err(PauliError::InvalidCharacter { ch, pos }),
            })
            .collect::<Result<Vec<_>, _>>()?;
        PauliString::from_paulis(&ps)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }
    pub fn x_bits(&self) -> u64 {
        self.x
    }
    pub fn z_bits(&self) -> u64 {
        self.z
    }
    /// Exponent k of the global factor i^k in front of the Hermitian tensor product.
    pub fn phase(&self) -> u8 {
        self.phase
    }

    /// Phase exponent in the X^a Z^b convention (σ_y = i·XZ per site).
    pub fn symplectic_phase(&self) -> u8 {
        ((self.phase as u32 + (self.x & self.z).count_ones()) % 4) as u8
    }

    pub fn is_hermitian(&self) -> bool {
        self.phase % 2 == 0
    }

    pub fn get(&self, q: usize) -> Pauli {
        Pauli::from_bits(self.x >> q & 1 == 1, self.z >> q & 1 == 1)
    }

    pub fn set(&mut self, q: usize, p: Pauli) {
        assert!(q < self.n, "qubit {q} out of range for {} qubits", self.n);
        let (xb, zb) = p.bits();
        self.x = (self.x & !(1 << q)) | ((xb as u64) << q);
        self.z = (self.z & !(1 << q)) | ((zb as u64) << q);
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase % 4;
        self
    }

    /// Same operator with the phase dropped (the Hermitian tensor of σ's).
    pub fn unsigned(self) -> Self {
        self.with_phase(0)
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn support(&self) -> u64 {
        self.x | self.z
    }

    /// Label without the phase prefix.
    pub fn label(&self) -> String {
        (0..self.n).map(|q| self.get(q).symbol()).collect()
    }

    fn check_len(&self, other: &Self) -> Result<(), PauliError> {
        if self.n != other.n {
            Err(PauliError::LengthMismatch(self.n, other.n))
        } else {
            Ok(())
        }
    }

    /// a·b' + a'·b mod 2: 0 when the strings commute, 1 when they anti-commute.
    pub fn symplectic_inner(&self, other: &Self) -> Result<u8, PauliError> {
        self.check_len(other)?;
        Ok(self.symplectic_inner_unchecked(other))
    }

    #[inline]
    pub fn symplectic_inner_unchecked(&self, other: &Self) -> u8 {
        (((self.x & other.z).count_ones() + (other.x & self.z).count_ones()) & 1) as u8
    }

    pub fn anticommutes(&self, other: &Self) -> bool {
        self.symplectic_inner_unchecked(other) == 1
    }

    pub fn multiply(&self, other: &Self) -> Result<Self, PauliError> {
        self.check_len(other)?;
        // σ = i^{ab} X^a Z^b per site; (X^a1 Z^b1)(X^a2 Z^b2) = (-1)^{b1 a2} X^{a1^a2} Z^{b1^b2}.
        let x = self.x ^ other.x;
        let z = self.z ^ other.z;
        let k = self.phase as u32
            + other.phase as u32
            + (self.x & self.z).count_ones()
            + (other.x & other.z).count_ones()
            + 2 * (self.z & other.x).count_ones()
            + 3 * (x & z).count_ones();
        Ok(PauliString { n: self.n, x, z, phase: (k % 4) as u8 })
    }

    /// Kronecker product with `other` placed to the right (higher qubit indices).
    pub fn tensor(&self, other: &Self) -> Result<Self, PauliError> {
        let n = self.n + other.n;
        if n > MAX_QUBITS {
            return Err(PauliError::TooLarge(n, MAX_QUBITS));
        }
        Ok(PauliString {
            n,
            x: self.x | (other.x << self.n),
            z: self.z | (other.z << self.n),
            phase: (self.phase + other.phase) % 4,
        })
    }

    /// Embed into a larger register, sending local qubit j to `qubits[j]`.
    pub fn embed(&self, n: usize, qubits: &[usize]) -> Self {
        assert_eq!(qubits.len(), self.n);
        let mut out = PauliString::identity(n).with_phase(self.phase);
        for (j, &q) in qubits.iter().enumerate() {
            out.set(q, self.get(j));
        }
        out
    }

    pub fn to_matrix(&self) -> Result<DMatrix<Complex64>, PauliError> {
        if self.n > MATRIX_QUBIT_LIMIT {
            return Err(PauliError::TooLarge(self.n, MATRIX_QUBIT_LIMIT));
        }
        let mut m = DMatrix::from_element(1, 1, Complex64::new(1.0, 0.0));
        for q in 0..self.n {
            let p = self.get(q).matrix();
            let pm = DMatrix::from_fn(2, 2, |r, c| p[r][c]);
            m = m.kronecker(&pm);
        }
        Ok(m * phase_factor(self.phase))
    }
}

pub fn phase_factor(k: u8) -> Complex64 {
    match k % 4 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

fn mask(n: usize) -> u64 {
    if n == 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["", "i", "-", "-i"][self.phase as usize];
        write!(f, "{prefix}{}", self.label())
    }
}

impl FromStr for PauliString {
    type Err = PauliError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        PauliString::parse(s)
    }
}

#[derive(Serialize, Deserialize)]
struct PauliJson {
    n: usize,
    label: String,
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        PauliJson { n: self.n, label: self.to_string() }.serialize(s)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let raw = PauliJson::deserialize(d)?;
        let (phase, body) = strip_phase(&raw.label);
        let p = PauliString::parse(body).map_err(D::Error::custom)?;
        if p.n != raw.n {
            return Err(D::Error::custom(format!("label has {} qubits, n = {}", p.n, raw.n)));
        }
        Ok(p.with_phase(phase))
    }
}

fn strip_phase(label: &str) -> (u8, &str) {
    for (prefix, k) in [("-i", 3), ("i", 1), ("-", 2), ("+", 0)] {
        if let Some(rest) = label.strip_prefix(prefix) {
            return (k, rest);
        }
    }
    (0, label)
}

/// Parse a whitespace- or comma-separated list of labels.
pub fn parse_list(text: &str) -> Result<Vec<PauliString>, PauliError> {
    text.split(|c: char| c.is_whitespace() || c == ',')
        .filter(|s| !s.is_empty())
        .map(PauliString::parse)
        .collect()
}
