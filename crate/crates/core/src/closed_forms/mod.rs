//! Closed-form periods for the harmonic potential and the three families
//! `x^2/2 + x^{2m}/2m`, `sum_{n<=m} x^{2n}/2n` and `x^{2m}/2m`, plus the
//! exact harmonic period through complete elliptic integrals.
//!
//! The family formulas are evaluated in [`ScaledReal`] so that `A^{2m}` can
//! exceed the double range (`m = 500` at `A = 10` is about `e^2300`).

pub mod elliptic;

use std::f64::consts::PI;

pub use elliptic::{agm_complementary, agm_e, agm_k};

use crate::error::{Error, Result};
use crate::lambdas::{lambda_closed, lambda_partial_sum};
use crate::potential::{check_amplitude, check_positive, Family, Potential};
use crate::scaled::ScaledReal;

fn check_m(m: u32) -> Result<()> {
    if m < 2 {
        return Err(Error::BadM { family: "closed form", m });
    }
    Ok(())
}

/// `4 sqrt(A^4 + (2 + A^2) pi^2) / sqrt(8 + A^2)`.
pub fn period_harmonic_closed(amplitude: f64) -> Result<f64> {
    check_amplitude(amplitude)?;
    let pi2 = PI * PI;
    let u = amplitude * amplitude;
    if amplitude <= 1.0 {
        return Ok(4.0 * (u * u + (2.0 + u) * pi2).sqrt() / (8.0 + u).sqrt());
    }
    // divide through by A^2 so that A^4 never forms
    let inv = 1.0 / u;
    Ok(4.0 * amplitude * (1.0 + (2.0 * inv + 1.0) * pi2 * inv).sqrt() / (1.0 + 8.0 * inv).sqrt())
}

/// Exact period of the relativistic harmonic oscillator,
/// `[4 (4 + A^2) E(k) - 8 K(k)] / sqrt(4 + A^2)` with `k = A^2/(4 + A^2)`.
pub fn period_harmonic_exact(amplitude: f64) -> Result<f64> {
    check_amplitude(amplitude)?;
    // sqrt(4 + A^2) and 1 - k without forming A^2 at large amplitude
    let (root, kc) = if amplitude <= 1.0 {
        let w = 4.0 + amplitude * amplitude;
        (w.sqrt(), 4.0 / w)
    } else {
        let inv = (2.0 / amplitude).powi(2);
        (amplitude * (1.0 + inv).sqrt(), inv / (1.0 + inv))
    };
    if kc == 0.0 {
        return Ok(4.0 * root);
    }
    let (k, e) = agm_complementary(kc)?;
    Ok(4.0 * root * e - 8.0 * k / root)
}

/// `Z_1` and `Z_2`: `Q` after substitution, up to the family's normalization.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZTerms {
    /// `m A^2 (1 - lambda_2) + A^{2m} (1 - lambda_{2m})`
    pub z1: ScaledReal,
    /// `sum_{n=1}^{m} A^{2n}/(2n) (1 - lambda_{2n})`
    pub z2: ScaledReal,
}

impl ZTerms {
    pub fn new(m: u32, amplitude: f64) -> Result<Self> {
        check_m(m)?;
        check_amplitude(amplitude)?;
        let a2 = ScaledReal::new(amplitude).powi(2);
        let z1 = a2 * (m as f64 * (1.0 - lambda_closed(1)))
            + a2.powi(m) * (1.0 - lambda_closed(m));
        let mut z2 = ScaledReal::ZERO;
        let mut power = ScaledReal::ONE;
        for n in 1..=m {
            power = power * a2;
            z2 = z2 + power * ((1.0 - lambda_closed(n)) / (2 * n) as f64);
        }
        Ok(ZTerms { z1, z2 })
    }
}

/// Period for `x^2/2 + x^{2m}/2m`:
/// `2 pi (2m + Z_1) / sqrt((4m + Z_1)(m + A^{2m-2} P_m))`.
pub fn period_family_a(m: u32, amplitude: f64) -> Result<f64> {
    let z = ZTerms::new(m, amplitude)?;
    let mf = m as f64;
    let a2 = ScaledReal::new(amplitude).powi(2);
    let bracket = a2.powi(m - 1) * lambda_partial_sum(m) + mf;
    let t = (z.z1 + 2.0 * mf) / ((z.z1 + 4.0 * mf) * bracket).sqrt() * (2.0 * PI);
    t.to_f64()
}

/// Period for `sum_{n=1}^{m} x^{2n}/2n`:
/// `2 pi (1 + Z_2) / sqrt((2 + Z_2) sum_n A^{2n-2}/(2n) P_n)`.
pub fn period_family_b(m: u32, amplitude: f64) -> Result<f64> {
    let z = ZTerms::new(m, amplitude)?;
    let a2 = ScaledReal::new(amplitude).powi(2);
    let mut bracket = ScaledReal::ZERO;
    let mut power = ScaledReal::ONE;
    for n in 1..=m {
        bracket = bracket + power * (lambda_partial_sum(n) / (2 * n) as f64);
        power = power * a2;
    }
    let t = (z.z2 + 1.0) / ((z.z2 + 2.0) * bracket).sqrt() * (2.0 * PI);
    t.to_f64()
}

/// Period for `x^{2m}/2m`; diverges like `A^{1-m}` as `A -> 0`.
pub fn period_family_c(m: u32, amplitude: f64) -> Result<f64> {
    check_m(m)?;
    check_positive(amplitude)?;
    let mf = m as f64;
    let a = ScaledReal::new(amplitude);
    let w = a.powi(2 * m) * (1.0 - lambda_closed(m));
    let t = (w + 2.0 * mf)
        / (a.powi(m - 1) * ((w + 4.0 * mf) * lambda_partial_sum(m)).sqrt())
        * (2.0 * PI);
    t.to_f64()
}

/// Relativistic quartic oscillator `x^2/2 + x^4/4`, written out.
pub fn period_quartic(amplitude: f64) -> f64 {
    let (a2, pi2) = (amplitude * amplitude, PI * PI);
    let a4 = a2 * a2;
    2.0 * 2f64.sqrt() * (6.0 * a4 + (4.0 + a2) * pi2)
        / ((4.0 + 3.0 * a2) * (6.0 * a4 + (8.0 + a2) * pi2)).sqrt()
}

/// `x^2/2 + x^6/6`, written out.
pub fn period_sextic(amplitude: f64) -> f64 {
    let (a2, pi2) = (amplitude * amplitude, PI * PI);
    let (a4, a6, pi4) = (a2 * a2, a2 * a2 * a2, pi2 * pi2);
    (24.0 * pi4 + 6.0 * a2 * pi4 + a6 * (40.0 * pi2 - 96.0))
        / ((6.0 * pi2 + a4 * (5.0 * pi2 - 12.0))
            * (24.0 * pi4 + 3.0 * a2 * pi4 + a6 * (20.0 * pi2 - 48.0)))
            .sqrt()
}

/// `x^2/2 + x^4/4 + x^6/6`, written out.
pub fn period_sum_246(amplitude: f64) -> f64 {
    let (a2, pi2) = (amplitude * amplitude, PI * PI);
    let (a4, a6, pi4) = (a2 * a2, a2 * a2 * a2, pi2 * pi2);
    let common = -48.0 * a6 + 2.0 * a4 * (9.0 + 10.0 * a2) * pi2;
    2.0 * 2f64.sqrt() * (common + 3.0 * (4.0 + a2) * pi4)
        / ((-24.0 * a4 + (12.0 + 9.0 * a2 + 10.0 * a4) * pi2) * (common + 3.0 * (8.0 + a2) * pi4))
            .sqrt()
}

/// `x^4/4`, written out.
pub fn period_pure_quartic(amplitude: f64) -> f64 {
    let (a2, pi2) = (amplitude * amplitude, PI * PI);
    let a4 = a2 * a2;
    (12.0 * a4 * PI + 8.0 * PI * pi2) / (9.0 * a4 * a2 * pi2 + 12.0 * a2 * pi2 * pi2).sqrt()
}

/// Closed-form period chosen from the potential's structure. `c x^2` reduces
/// to the harmonic formula through `x -> x sqrt(2c)`.
pub fn period_closed(potential: &Potential, amplitude: f64) -> Result<f64> {
    if let Some(c) = potential.quadratic_only() {
        let k = (2.0 * c).sqrt();
        return Ok(period_harmonic_closed(amplitude * k)? / k);
    }
    match potential.structure() {
        Family::Augmented(m) => period_family_a(m, amplitude),
        Family::Sum(m) => period_family_b(m, amplitude),
        Family::Pure(m) => period_family_c(m, amplitude),
        Family::Harmonic | Family::Generic => Err(Error::NoClosedForm(
            "potential is not harmonic or one of the aug/sum/pure families; use the pms method",
        )),
    }
}

/// Exact period through elliptic integrals, for `c x^2` only.
pub fn period_elliptic(potential: &Potential, amplitude: f64) -> Result<f64> {
    let c = potential
        .quadratic_only()
        .ok_or(Error::NoClosedForm("the elliptic route only covers c x^2 potentials"))?;
    let k = (2.0 * c).sqrt();
    Ok(period_harmonic_exact(amplitude * k)? / k)
}
