//! Overflow-safe reals stored as `mantissa * e^exponent`.
//!
//! Terms such as `A^(2m)` with `m = 500` leave the double range long before
//! the ratios built from them do. `ScaledReal` carries the magnitude in an
//! integer exponent of `e` so the rational expressions for the period can be
//! formed first and converted to `f64` only at the end.

use std::cmp::Ordering;
use std::f64::consts::E;
use std::ops::{Add, Div, Mul, Neg, Sub};

use crate::error::{Error, Result};

/// `mantissa * e^exponent` with `|mantissa|` in `[1, e)`, or exactly zero.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ScaledReal {
    mantissa: f64,
    exponent: i64,
}

/// Multiplies by `e^k` in two halves so that the intermediate factor stays
/// finite for every `k` that can arise from a normalized double.
fn scale_by_exp(x: f64, k: i64) -> f64 {
    let half = k / 2;
    x * (half as f64).exp() * ((k - half) as f64).exp()
}

impl ScaledReal {
    pub const ZERO: ScaledReal = ScaledReal {
        mantissa: 0.0,
        exponent: 0,
    };
    pub const ONE: ScaledReal = ScaledReal {
        mantissa: 1.0,
        exponent: 0,
    };

    /// Converts a finite double. Non-finite input is kept as-is in the
    /// mantissa so that it propagates like an ordinary NaN/inf would.
    pub fn new(x: f64) -> Self {
        Self::from_parts(x, 0)
    }

    pub fn from_parts(mantissa: f64, exponent: i64) -> Self {
        if mantissa == 0.0 || !mantissa.is_finite() {
            return ScaledReal {
                mantissa,
                exponent: if mantissa == 0.0 { 0 } else { exponent },
            };
        }
        let shift = mantissa.abs().ln().floor() as i64;
        let mut m = scale_by_exp(mantissa, -shift);
        let mut k = exponent + shift;
        while m.abs() >= E {
            m /= E;
            k += 1;
        }
        while m.abs() < 1.0 {
            m *= E;
            k -= 1;
        }
        ScaledReal {
            mantissa: m,
            exponent: k,
        }
    }

    /// `e^x` for any finite `x`, without overflow.
    pub fn exp(x: f64) -> Self {
        let k = x.floor();
        Self::from_parts((x - k).exp(), k as i64)
    }

    pub fn mantissa(&self) -> f64 {
        self.mantissa
    }

    pub fn exponent(&self) -> i64 {
        self.exponent
    }

    pub fn is_zero(&self) -> bool {
        self.mantissa == 0.0
    }

    pub fn is_sign_negative(&self) -> bool {
        self.mantissa < 0.0
    }

    pub fn abs(self) -> Self {
        ScaledReal {
            mantissa: self.mantissa.abs(),
            ..self
        }
    }

    /// Natural logarithm of a positive value.
    pub fn ln(self) -> f64 {
        if self.mantissa <= 0.0 {
            return f64::NAN;
        }
        self.mantissa.ln() + self.exponent as f64
    }

    pub fn recip(self) -> Self {
        Self::from_parts(1.0 / self.mantissa, -self.exponent)
    }

    /// Square root; NaN mantissa for negative input.
    pub fn sqrt(self) -> Self {
        if self.mantissa < 0.0 {
            return Self::new(f64::NAN);
        }
        let odd = self.exponent.rem_euclid(2);
        let m = (self.mantissa * if odd == 1 { E } else { 1.0 }).sqrt();
        Self::from_parts(m, (self.exponent - odd) / 2)
    }

    /// Integer power by repeated squaring.
    pub fn powi(self, mut n: u32) -> Self {
        let mut base = self;
        let mut acc = Self::ONE;
        while n > 0 {
            if n & 1 == 1 {
                acc = acc * base;
            }
            base = base * base;
            n >>= 1;
        }
        acc
    }

    /// Converts back to a double, failing if the magnitude exceeds the double
    /// range. Values below the smallest subnormal flush to zero.
    pub fn to_f64(self) -> Result<f64> {
        let v = self.to_f64_saturating();
        if v.is_infinite() && self.mantissa.is_finite() {
            return Err(Error::OverflowRisk("scaled value exceeds f64 range"));
        }
        Ok(v)
    }

    /// Like [`ScaledReal::to_f64`] but overflows to infinity.
    pub fn to_f64_saturating(self) -> f64 {
        if self.mantissa == 0.0 || !self.mantissa.is_finite() {
            return self.mantissa;
        }
        if self.exponent > 710 {
            return f64::INFINITY.copysign(self.mantissa);
        }
        if self.exponent < -746 {
            return 0.0_f64.copysign(self.mantissa);
        }
        scale_by_exp(self.mantissa, self.exponent)
    }
}

impl From<f64> for ScaledReal {
    fn from(x: f64) -> Self {
        ScaledReal::new(x)
    }
}

impl Neg for ScaledReal {
    type Output = ScaledReal;
    fn neg(self) -> Self {
        ScaledReal {
            mantissa: -self.mantissa,
            ..self
        }
    }
}

impl Mul for ScaledReal {
    type Output = ScaledReal;
    fn mul(self, rhs: Self) -> Self {
        ScaledReal::from_parts(self.mantissa * rhs.mantissa, self.exponent + rhs.exponent)
    }
}

impl Div for ScaledReal {
    type Output = ScaledReal;
    fn div(self, rhs: Self) -> Self {
        ScaledReal::from_parts(self.mantissa / rhs.mantissa, self.exponent - rhs.exponent)
    }
}

impl Add for ScaledReal {
    type Output = ScaledReal;
    fn add(self, rhs: Self) -> Self {
        if self.is_zero() {
            return rhs;
        }
        if rhs.is_zero() {
            return self;
        }
        let (big, small) = if self.exponent >= rhs.exponent {
            (self, rhs)
        } else {
            (rhs, self)
        };
        let gap = small.exponent - big.exponent;
        // e^-40 is below half an ulp of any mantissa in [1, e)
        if gap < -40 {
            return big;
        }
        ScaledReal::from_parts(big.mantissa + small.mantissa * (gap as f64).exp(), big.exponent)
    }
}

impl Sub for ScaledReal {
    type Output = ScaledReal;
    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul<f64> for ScaledReal {
    type Output = ScaledReal;
    fn mul(self, rhs: f64) -> Self {
        self * ScaledReal::new(rhs)
    }
}

impl Div<f64> for ScaledReal {
    type Output = ScaledReal;
    fn div(self, rhs: f64) -> Self {
        self / ScaledReal::new(rhs)
    }
}

impl Add<f64> for ScaledReal {
    type Output = ScaledReal;
    fn add(self, rhs: f64) -> Self {
        self + ScaledReal::new(rhs)
    }
}

impl PartialOrd for ScaledReal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        let diff = *self - *other;
        if diff.mantissa.is_nan() {
            None
        } else {
            diff.mantissa.partial_cmp(&0.0)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rel(a: f64, b: f64) -> f64 {
        ((a - b) / b).abs()
    }

    #[test]
    fn normalizes_mantissa() {
        for x in [1.0, 2.0, 2.72, 1e-300, 5e-324, 1e300, -7.5, f64::MAX] {
            let s = ScaledReal::new(x);
            assert!((1.0..E).contains(&s.mantissa().abs()), "{x}: {s:?}");
            assert!(rel(s.to_f64().unwrap(), x) < 1e-15, "{x}");
        }
        assert!(ScaledReal::new(0.0).is_zero());
    }

    #[test]
    fn powers_beyond_double_range() {
        // 2^1000 fits, 10^1000 does not
        let p = ScaledReal::new(2.0).powi(1000);
        assert!(rel(p.to_f64().unwrap(), 2f64.powi(1000)) < 1e-13);
        let big = ScaledReal::new(10.0).powi(1000);
        assert!(rel(big.ln(), 1000.0 * 10f64.ln()) < 1e-14);
        assert!(matches!(big.to_f64(), Err(Error::OverflowRisk(_))));
        assert_eq!(big.to_f64_saturating(), f64::INFINITY);
        let ratio = big / ScaledReal::new(10.0).powi(998);
        assert!(rel(ratio.to_f64().unwrap(), 100.0) < 1e-13);
        assert_eq!(big.recip().to_f64().unwrap(), 0.0);
    }

    #[test]
    fn tiny_addend_is_absorbed() {
        let big = ScaledReal::exp(1000.0);
        assert_eq!(big + 1.0, big);
        assert!(rel((big - big + 1.0).to_f64().unwrap(), 1.0) < 1e-15);
    }

    #[test]
    fn ordering() {
        let a = ScaledReal::exp(800.0);
        let b = ScaledReal::exp(799.0);
        assert!(a > b);
        assert!(-a < b);
        assert!(ScaledReal::new(1.0) > ScaledReal::ZERO);
    }

    proptest! {
        #[test]
        fn arithmetic_matches_f64(x in 1e-100f64..1e100, y in 1e-100f64..1e100, sx in any::<bool>()) {
            let x = if sx { -x } else { x };
            let (a, b) = (ScaledReal::new(x), ScaledReal::new(y));
            prop_assert!(rel((a * b).to_f64().unwrap(), x * y) < 1e-14);
            prop_assert!(rel((a / b).to_f64().unwrap(), x / y) < 1e-14);
            let sum = (a + b).to_f64().unwrap();
            // sums are only well conditioned without cancellation
            if !sx {
                prop_assert!(rel(sum, x + y) < 1e-14);
            }
            prop_assert!(rel(b.sqrt().to_f64().unwrap(), y.sqrt()) < 1e-14);
        }

        #[test]
        fn exp_and_ln_round_trip(x in -5000.0f64..5000.0) {
            let s = ScaledReal::exp(x);
            prop_assert!((s.ln() - x).abs() <= 1e-12 * x.abs().max(1.0));
        }
    }
}
