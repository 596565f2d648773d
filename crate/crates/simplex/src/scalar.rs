use std::fmt::Debug;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Arithmetic the tableau needs. Floating implementations decide signs with a
/// tolerance; exact implementations decide them exactly.
pub trait Scalar: Clone + Debug + Send + Sync {
    fn zero() -> Self;
    fn one() -> Self;
    /// Exact conversion where the type allows it (dyadic rationals for `BigRational`).
    fn from_f64(v: f64) -> Option<Self>;
    fn to_f64(&self) -> f64;

    fn is_zero_tol(&self) -> bool;
    fn is_positive_tol(&self) -> bool;
    fn is_negative_tol(&self) -> bool {
        !self.is_zero_tol() && !self.is_positive_tol()
    }

    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn div(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;

    /// `self -= k * row_entry`, the hot loop of every pivot.
    fn sub_scaled(&mut self, k: &Self, row_entry: &Self) {
        *self = self.sub(&k.mul(row_entry));
    }

    /// Strict comparison used by the ratio test. Floating types treat values
    /// within tolerance as equal so ties fall through to Bland's index rule.
    fn less_than(&self, rhs: &Self) -> bool;

    const EXACT: bool;
    const NAME: &'static str;
}

/// Pivot tolerance for the floating tableau.
pub const F64_TOL: f64 = 1e-9;

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_f64(v: f64) -> Option<Self> {
        v.is_finite().then_some(v)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_zero_tol(&self) -> bool {
        self.abs() <= F64_TOL
    }
    fn is_positive_tol(&self) -> bool {
        *self > F64_TOL
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    #[inline]
    fn sub_scaled(&mut self, k: &Self, row_entry: &Self) {
        *self -= k * row_entry;
    }
    fn less_than(&self, rhs: &Self) -> bool {
        *self < rhs - F64_TOL
    }
    const EXACT: bool = false;
    const NAME: &'static str = "f64";
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_f64(v: f64) -> Option<Self> {
        BigRational::from_float(v)
    }
    fn to_f64(&self) -> f64 {
        match (self.numer().to_f64(), self.denom().to_f64()) {
            (Some(n), Some(d)) if n.is_finite() && d.is_finite() => n / d,
            _ => rational_to_f64_slow(self),
        }
    }
    fn is_zero_tol(&self) -> bool {
        self.is_zero()
    }
    fn is_positive_tol(&self) -> bool {
        self.is_positive()
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn div(&self, rhs: &Self) -> Self {
        self / rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn less_than(&self, rhs: &Self) -> bool {
        self < rhs
    }
    const EXACT: bool = true;
    const NAME: &'static str = "exact";
}

// Huge numerators overflow f64 even when the ratio is modest; shift both down first.
fn rational_to_f64_slow(r: &BigRational) -> f64 {
    let shift = r.numer().bits().max(r.denom().bits()).saturating_sub(1000);
    let n: BigInt = r.numer() >> shift;
    let d: BigInt = r.denom() >> shift;
    n.to_f64().unwrap_or(f64::NAN) / d.to_f64().unwrap_or(f64::NAN)
}
