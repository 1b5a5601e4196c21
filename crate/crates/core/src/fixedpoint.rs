//! Signed Q2.30 fixed-point scalars and complex numbers.
//!
//! A [`FixedQ2_30`] is a 32-bit two's complement word whose value is
//! `raw / 2^30`, covering `[-2, 2 - 2^-30]`. Every operation saturates at the
//! range boundary instead of wrapping, and every conversion from a wider
//! intermediate rounds to nearest with ties to even.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Number of fractional bits.
pub const FRAC_BITS: u32 = 30;

const ONE_RAW: i32 = 1 << FRAC_BITS;
const SCALE: f64 = (1u64 << FRAC_BITS) as f64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FixedError {
    #[error("cannot convert non-finite value {0} to fixed point")]
    NonFinite(f64),
    #[error("invalid fixed-point hex word {0:?}")]
    BadHex(String),
}

/// Signed Q2.30 fixed-point number.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct FixedQ2_30(i32);

impl FixedQ2_30 {
    pub const ZERO: Self = Self(0);
    pub const ONE: Self = Self(ONE_RAW);
    pub const MAX: Self = Self(i32::MAX);
    pub const MIN: Self = Self(i32::MIN);
    /// Smallest positive increment, `2^-30`.
    pub const EPSILON: Self = Self(1);

    #[inline]
    pub const fn from_raw(raw: i32) -> Self {
        Self(raw)
    }

    #[inline]
    pub const fn raw(self) -> i32 {
        self.0
    }

    /// Nearest representable value to `x` (ties to even), saturated to the
    /// Q2.30 range. Non-finite input is rejected.
    pub fn from_f64(x: f64) -> Result<Self, FixedError> {
        if !x.is_finite() {
            return Err(FixedError::NonFinite(x));
        }
        Ok(Self::from_f64_saturating(x))
    }

    /// Like [`from_f64`](Self::from_f64) but maps NaN to zero and infinities
    /// to the range limits.
    pub fn from_f64_saturating(x: f64) -> Self {
        if x.is_nan() {
            return Self::ZERO;
        }
        // Scaling by a power of two is exact, so the only rounding is here.
        let scaled = (x * SCALE).round_ties_even();
        if scaled >= i32::MAX as f64 {
            Self::MAX
        } else if scaled <= i32::MIN as f64 {
            Self::MIN
        } else {
            Self(scaled as i32)
        }
    }

    /// Exact value `raw / 2^30`.
    #[inline]
    pub fn to_f64(self) -> f64 {
        self.0 as f64 / SCALE
    }

    #[inline]
    pub fn saturating_add(self, rhs: Self) -> Self {
        Self(self.0.saturating_add(rhs.0))
    }

    #[inline]
    pub fn saturating_sub(self, rhs: Self) -> Self {
        Self(self.0.saturating_sub(rhs.0))
    }

    #[inline]
    pub fn saturating_neg(self) -> Self {
        Self(self.0.saturating_neg())
    }

    #[inline]
    pub fn saturating_mul(self, rhs: Self) -> Self {
        Self(narrow(self.0 as i128 * rhs.0 as i128))
    }

    /// Eight lowercase hex digits of the two's complement word.
    pub fn to_hex(self) -> String {
        format!("{:08x}", self.0 as u32)
    }

    pub fn from_hex(s: &str) -> Result<Self, FixedError> {
        let digits = s.strip_prefix("0x").unwrap_or(s);
        if digits.len() != 8 {
            return Err(FixedError::BadHex(s.to_string()));
        }
        u32::from_str_radix(digits, 16).map(|w| Self(w as i32)).map_err(|_| FixedError::BadHex(s.to_string()))
    }
}

/// Shift a product carrying 60 fractional bits back to 30 with round half to
/// even, then clamp into `i32`.
#[inline]
fn narrow(wide: i128) -> i32 {
    let floor = wide >> FRAC_BITS;
    let rem = wide & ((1i128 << FRAC_BITS) - 1);
    let half = 1i128 << (FRAC_BITS - 1);
    let rounded = if rem > half || (rem == half && floor & 1 == 1) { floor + 1 } else { floor };
    rounded.clamp(i32::MIN as i128, i32::MAX as i128) as i32
}

impl fmt::Debug for FixedQ2_30 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} (0x{})", self.to_f64(), self.to_hex())
    }
}

impl fmt::Display for FixedQ2_30 {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.to_f64(), f)
    }
}

impl Add for FixedQ2_30 {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.saturating_add(rhs)
    }
}

impl Sub for FixedQ2_30 {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.saturating_sub(rhs)
    }
}

impl Neg for FixedQ2_30 {
    type Output = Self;
    fn neg(self) -> Self {
        self.saturating_neg()
    }
}

impl Mul for FixedQ2_30 {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.saturating_mul(rhs)
    }
}

/// Complex amplitude stored as two Q2.30 words and nothing else.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[repr(C)]
pub struct FixedComplex {
    pub re: FixedQ2_30,
    pub im: FixedQ2_30,
}

impl FixedComplex {
    pub const ZERO: Self = Self::new(FixedQ2_30::ZERO, FixedQ2_30::ZERO);
    pub const ONE: Self = Self::new(FixedQ2_30::ONE, FixedQ2_30::ZERO);
    pub const I: Self = Self::new(FixedQ2_30::ZERO, FixedQ2_30::ONE);

    #[inline]
    pub const fn new(re: FixedQ2_30, im: FixedQ2_30) -> Self {
        Self { re, im }
    }

    #[inline]
    pub const fn from_raw(re: i32, im: i32) -> Self {
        Self::new(FixedQ2_30::from_raw(re), FixedQ2_30::from_raw(im))
    }

    pub fn from_c64(z: Complex64) -> Result<Self, FixedError> {
        Ok(Self::new(FixedQ2_30::from_f64(z.re)?, FixedQ2_30::from_f64(z.im)?))
    }

    pub fn from_c64_saturating(z: Complex64) -> Self {
        Self::new(FixedQ2_30::from_f64_saturating(z.re), FixedQ2_30::from_f64_saturating(z.im))
    }

    #[inline]
    pub fn to_c64(self) -> Complex64 {
        Complex64::new(self.re.to_f64(), self.im.to_f64())
    }

    /// Component-wise saturating addition.
    #[inline]
    pub fn cadd(self, rhs: Self) -> Self {
        Self::new(self.re + rhs.re, self.im + rhs.im)
    }

    /// Complex product. Cross terms are exact 64-bit products, each component
    /// is summed exactly and rounded once back to Q2.30.
    #[inline]
    pub fn cmul(self, rhs: Self) -> Self {
        let (ar, ai) = (self.re.0 as i64, self.im.0 as i64);
        let (br, bi) = (rhs.re.0 as i64, rhs.im.0 as i64);
        // Two 2^62-sized products can sum past i64, so widen for the sum.
        let re = (ar * br) as i128 - (ai * bi) as i128;
        let im = (ar * bi) as i128 + (ai * br) as i128;
        Self::from_raw(narrow(re), narrow(im))
    }
}

impl fmt::Debug for FixedComplex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({:?}, {:?})", self.re, self.im)
    }
}

impl Add for FixedComplex {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.cadd(rhs)
    }
}

impl Mul for FixedComplex {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.cmul(rhs)
    }
}

#[cfg(test)]
#[allow(clippy::approx_constant)] // literal inputs are the point
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn fx(x: f64) -> FixedQ2_30 {
        FixedQ2_30::from_f64(x).unwrap()
    }

    fn cx(re: f64, im: f64) -> FixedComplex {
        FixedComplex::new(fx(re), fx(im))
    }

    #[test]
    fn conversion_examples() {
        assert_eq!(fx(0.0).raw(), 0);
        assert_eq!(fx(1.0).raw(), 0x4000_0000);
        assert_eq!(fx(0.7071067811865476).raw(), 759_250_125);
        assert_eq!(fx(0.7071067811865476).to_hex(), "2d413ccd");
        assert_eq!(fx(3.5).raw(), 0x7FFF_FFFF);
        assert_eq!(fx(-3.5).raw(), i32::MIN);
        assert_eq!(fx(-2.0).raw(), i32::MIN);
        assert_eq!(fx(2.0).raw(), i32::MAX);
    }

    #[test]
    fn ties_round_to_even() {
        let half_ulp = 0.5 / SCALE;
        assert_eq!(fx(half_ulp).raw(), 0);
        assert_eq!(fx(3.0 * half_ulp).raw(), 2);
        assert_eq!(fx(-half_ulp).raw(), 0);
        assert_eq!(fx(-3.0 * half_ulp).raw(), -2);
    }

    #[test]
    fn non_finite_is_rejected() {
        assert!(matches!(FixedQ2_30::from_f64(f64::NAN), Err(FixedError::NonFinite(_))));
        assert!(FixedQ2_30::from_f64(f64::INFINITY).is_err());
        assert_eq!(FixedQ2_30::from_f64_saturating(f64::NEG_INFINITY), FixedQ2_30::MIN);
    }

    #[test]
    fn to_f64_examples() {
        assert_eq!(FixedQ2_30::from_raw(0x4000_0000).to_f64(), 1.0);
        assert_eq!(FixedQ2_30::from_raw(0).to_f64(), 0.0);
        assert_eq!(FixedQ2_30::from_raw(759_250_125).to_f64(), 759_250_125.0 / 1073741824.0);
    }

    #[test]
    fn cadd_examples() {
        assert_eq!(cx(1.0, 0.0).cadd(FixedComplex::ZERO), cx(1.0, 0.0));
        assert_eq!(cx(1.5, 0.0).cadd(cx(1.5, 0.0)), FixedComplex::new(FixedQ2_30::MAX, FixedQ2_30::ZERO));
        assert_eq!(cx(0.25, 0.5).cadd(cx(-0.25, -0.5)), FixedComplex::ZERO);
    }

    #[test]
    fn cmul_examples() {
        let z = cx(0.3, -0.7);
        assert_eq!(FixedComplex::ONE.cmul(z), z);
        assert_eq!(FixedComplex::I.cmul(FixedComplex::I), cx(-1.0, 0.0));
        let h = cx(0.7071067811865476, 0.7071067811865476);
        // Exact rational evaluation of the rounded inputs gives re = 0 and
        // im = 2·759250125²/2^60, which rounds to exactly 2^30.
        assert_eq!(h.cmul(h), FixedComplex::from_raw(0, 0x4000_0000));
    }

    #[test]
    fn cmul_extremes_saturate() {
        let m = FixedComplex::new(FixedQ2_30::MIN, FixedQ2_30::MIN);
        let p = m.cmul(FixedComplex::new(FixedQ2_30::MIN, FixedQ2_30::MAX));
        // re = 4 + 4·(1-2^-31) and im = -4·(1-2^-31) + 4, both past the range.
        assert_eq!(p.re, FixedQ2_30::MAX);
        assert_eq!(m.cmul(m).im, FixedQ2_30::MAX);
        assert_eq!(m.cmul(m).re, FixedQ2_30::ZERO);
    }

    #[test]
    fn hex_round_trip() {
        for raw in [0, 1, -1, i32::MIN, i32::MAX, 759_250_125] {
            let v = FixedQ2_30::from_raw(raw);
            assert_eq!(FixedQ2_30::from_hex(&v.to_hex()).unwrap(), v);
        }
        assert!(FixedQ2_30::from_hex("123").is_err());
        assert!(FixedQ2_30::from_hex("zzzzzzzz").is_err());
    }

    fn any_fixed() -> impl Strategy<Value = FixedComplex> {
        (any::<i32>(), any::<i32>()).prop_map(|(r, i)| FixedComplex::from_raw(r, i))
    }

    proptest! {
        #[test]
        fn round_trip(raw in any::<i32>()) {
            let v = FixedQ2_30::from_raw(raw);
            prop_assert_eq!(FixedQ2_30::from_f64(v.to_f64()).unwrap(), v);
        }

        #[test]
        fn cmul_identity_exact(a in any_fixed()) {
            prop_assert_eq!(a.cmul(FixedComplex::ONE), a);
        }

        #[test]
        fn cmul_commutes(a in any_fixed(), b in any_fixed()) {
            prop_assert_eq!(a.cmul(b), b.cmul(a));
        }

        #[test]
        fn cmul_magnitude_bound(a in any_fixed(), b in any_fixed()) {
            let p = a.cmul(b).to_c64().norm();
            prop_assert!(p <= a.to_c64().norm() * b.to_c64().norm() + 2f64.powi(-28));
        }

        #[test]
        fn cmul_matches_exact_product_within_half_ulp(a in any_fixed(), b in any_fixed()) {
            // In-range products are within half an ulp per component (plus f64 noise).
            let exact = a.to_c64() * b.to_c64();
            if exact.re.abs() < 1.9 && exact.im.abs() < 1.9 {
                let got = a.cmul(b).to_c64();
                let tol = 2f64.powi(-31) + 1e-15;
                prop_assert!((got.re - exact.re).abs() <= tol);
                prop_assert!((got.im - exact.im).abs() <= tol);
            }
        }
    }
}
