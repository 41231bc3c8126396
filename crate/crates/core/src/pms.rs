//! Zeroth-order PMS period with boundary-condition free parameters.
//!
//! The period kernel `R(x) = S (Q + 2) / (Q + 1)^2` is made independent of
//! `theta` by replacing each harmonic `cos^{2k}(theta)` with `lambda_{2k}`,
//! and the period is `T = 2 pi / sqrt(R)`.
//!
//! How the substitution is staged matters:
//!
//! * `Factored` substitutes into `S` and `Q` separately and then forms the
//!   rational expression. Products of substituted quantities stand in for
//!   the higher harmonics, which is what makes the ultrarelativistic limit
//!   depend only on `lambda_{2m}` and the partial sum below it.
//! * `Expanded` multiplies out `S (Q + 2)` and `(Q + 1)^2` first, so that
//!   `lambda_4` enters on its own. Only used for `c x^2`, together with
//!   the harmonic value `lambda_4 = 2/pi^2`.

use std::f64::consts::{FRAC_PI_2, PI};

use crate::error::{Error, Result};
use crate::evenpoly::EvenPoly;
use crate::lambdas::{LambdaMode, LambdaTable};
use crate::potential::{check_amplitude, check_positive, Potential};
use crate::quadrature::{integrate_panels, turning_point_panels};
use crate::scaled::ScaledReal;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Substitution {
    Factored,
    Expanded,
}

/// Whether magnitudes are carried in [`ScaledReal`] or plain doubles.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Evaluation {
    #[default]
    Scaled,
    /// Direct double arithmetic; fails with `OverflowRisk` when a term leaves
    /// the double range.
    Naive,
}

/// `R` after the free-parameter substitution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum RLambda {
    Factored {
        s_val: ScaledReal,
        q_val: ScaledReal,
        amplitude: f64,
    },
    Expanded {
        numerator: ScaledReal,
        denominator: ScaledReal,
        amplitude: f64,
    },
}

impl RLambda {
    pub fn mode(&self) -> Substitution {
        match self {
            RLambda::Factored { .. } => Substitution::Factored,
            RLambda::Expanded { .. } => Substitution::Expanded,
        }
    }

    pub fn amplitude(&self) -> f64 {
        match *self {
            RLambda::Factored { amplitude, .. } | RLambda::Expanded { amplitude, .. } => amplitude,
        }
    }

    pub fn value(&self) -> ScaledReal {
        match *self {
            RLambda::Factored { s_val, q_val, .. } => {
                let q1 = q_val + 1.0;
                s_val * (q_val + 2.0) / (q1 * q1)
            }
            RLambda::Expanded {
                numerator,
                denominator,
                ..
            } => numerator / denominator,
        }
    }

    /// `2 pi / sqrt(R)`.
    pub fn period(&self) -> Result<f64> {
        let t = match *self {
            RLambda::Factored { s_val, q_val, .. } => {
                (q_val + 1.0) / (s_val * (q_val + 2.0)).sqrt() * (2.0 * PI)
            }
            RLambda::Expanded {
                numerator,
                denominator,
                ..
            } => (denominator / numerator).sqrt() * (2.0 * PI),
        };
        let t = t.to_f64()?;
        if !(t > 0.0) {
            return Err(Error::NonPositiveKernel { theta: f64::NAN });
        }
        Ok(t)
    }
}

/// Substitution staging used for a potential: `Expanded` for `c x^2`.
pub fn substitution_for(potential: &Potential) -> Substitution {
    if potential.quadratic_only().is_some() {
        Substitution::Expanded
    } else {
        Substitution::Factored
    }
}

/// Free-parameter table matching [`substitution_for`].
pub fn table_for(potential: &Potential) -> LambdaTable {
    match substitution_for(potential) {
        Substitution::Expanded => LambdaTable::harmonic_special(),
        Substitution::Factored => LambdaTable::general(),
    }
}

pub fn build_r(potential: &Potential, amplitude: f64, table: &LambdaTable) -> Result<RLambda> {
    build_r_with(potential, amplitude, table, Evaluation::Scaled)
}

pub fn build_r_with(
    potential: &Potential,
    amplitude: f64,
    table: &LambdaTable,
    evaluation: Evaluation,
) -> Result<RLambda> {
    check_positive(amplitude)?;
    let mode = substitution_for(potential);
    match (mode, table.mode()) {
        (Substitution::Expanded, LambdaMode::General) => {
            return Err(Error::ModeMismatch("quadratic potential needs the harmonic lambda table"))
        }
        (Substitution::Factored, LambdaMode::HarmonicSpecial) => {
            return Err(Error::ModeMismatch("harmonic lambda table only applies to c x^2"))
        }
        _ => {}
    }
    match evaluation {
        Evaluation::Scaled => build_scaled(potential, amplitude, table, mode),
        Evaluation::Naive => build_naive(potential, amplitude, table, mode),
    }
}

fn build_scaled(
    potential: &Potential,
    amplitude: f64,
    table: &LambdaTable,
    mode: Substitution,
) -> Result<RLambda> {
    let qs = potential.scaled_qs(amplitude)?;
    match mode {
        Substitution::Factored => Ok(RLambda::Factored {
            s_val: qs.s_lambda(table)?,
            q_val: qs.q_lambda(table)?,
            amplitude,
        }),
        Substitution::Expanded => {
            // with Q = M q(y), S = (M/A^2) s(y):
            //   S (Q + 2)  = (M/A^2) (M [s q] + 2 [s])
            //   (Q + 1)^2  = M^2 [q^2] + 2 M [q] + 1
            let (q, s) = (qs.q_normalized(), qs.s_normalized());
            let sub = |p: &EvenPoly| p.lambda_substitute(1.0, table);
            let m = qs.scale();
            let numerator = m / ScaledReal::new(amplitude).powi(2) * (m * sub(&(s * q))? + 2.0 * sub(s)?);
            let denominator = m * m * sub(&(q * q))? + m * (2.0 * sub(q)?) + 1.0;
            Ok(RLambda::Expanded {
                numerator,
                denominator,
                amplitude,
            })
        }
    }
}

fn finite(x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::OverflowRisk("naive evaluation left the double range"))
    }
}

fn build_naive(
    potential: &Potential,
    amplitude: f64,
    table: &LambdaTable,
    mode: Substitution,
) -> Result<RLambda> {
    let phi_a = finite(potential.eval(amplitude))?;
    for (e, c) in potential.poly().terms() {
        finite(c * amplitude.powi(e as i32))?;
    }
    let qs = potential.qs_pair(amplitude)?;
    match mode {
        Substitution::Factored => {
            let s_val = finite(qs.s.lambda_substitute(amplitude, table)?)?;
            let q_val = finite(phi_a - potential.poly().lambda_substitute(amplitude, table)?)?;
            Ok(RLambda::Factored {
                s_val: s_val.into(),
                q_val: q_val.into(),
                amplitude,
            })
        }
        Substitution::Expanded => {
            let q1 = &qs.q + &EvenPoly::constant(1.0);
            let q2 = &qs.q + &EvenPoly::constant(2.0);
            let numerator = finite((&qs.s * &q2).lambda_substitute(amplitude, table)?)?;
            let denominator = finite((&q1 * &q1).lambda_substitute(amplitude, table)?)?;
            Ok(RLambda::Expanded {
                numerator: numerator.into(),
                denominator: denominator.into(),
                amplitude,
            })
        }
    }
}

/// Approximate period `2 pi / sqrt(R(lambda_2, ..., lambda_{2m}))`.
pub fn period_pms(potential: &Potential, amplitude: f64) -> Result<f64> {
    period_pms_with(potential, amplitude, Evaluation::Scaled)
}

pub fn period_pms_with(potential: &Potential, amplitude: f64, evaluation: Evaluation) -> Result<f64> {
    check_amplitude(amplitude)?;
    if amplitude == 0.0 {
        // Q -> 0 and S -> c_2, so R -> 2 c_2
        let c2 = potential.poly().coeff(2);
        if c2 > 0.0 {
            return Ok(2.0 * PI / (2.0 * c2).sqrt());
        }
        return Err(Error::ZeroAmplitude);
    }
    let table = table_for(potential);
    build_r_with(potential, amplitude, &table, evaluation)?.period()
}

/// First-order PMS frequency `sqrt(<R(theta)>)`, the mean taken over
/// `theta in [0, pi]` with the exact kernel at `x = A cos(theta)`.
///
/// Not used by [`period_pms`]; at large amplitude this criterion no longer
/// moves `omega` away from one, which is why the boundary-condition route
/// exists.
pub fn omega_first_order_pms(potential: &Potential, amplitude: f64, nodes: usize) -> Result<f64> {
    if nodes < 32 {
        return Err(Error::Domain {
            function: "omega_first_order_pms (nodes)",
            value: nodes as f64,
        });
    }
    let qs = potential.scaled_qs(amplitude)?;
    let panels = turning_point_panels(&qs, potential.m());
    let mean = |n: usize| {
        let integral = integrate_panels(&panels, n, |t| qs.kernel_at_theta(t).to_f64_saturating());
        integral / FRAC_PI_2
    };
    let coarse = mean(nodes);
    let fine = mean(2 * nodes);
    if !fine.is_finite() {
        return Err(Error::OverflowRisk("kernel mean exceeds f64 range"));
    }
    if (fine - coarse).abs() > 1e-8 * fine.abs() {
        return Err(Error::QuadratureNonConvergence { coarse, fine });
    }
    Ok(fine.sqrt())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn harmonic_kernel_matches_expanded_formula() {
        let r = build_r(&Potential::harmonic(), 1.0, &LambdaTable::harmonic_special()).unwrap();
        assert_eq!(r.mode(), Substitution::Expanded);
        let pi2 = PI * PI;
        assert_relative_eq!(r.value().to_f64().unwrap(), 9.0 / (12.0 + 4.0 / pi2), max_relative = 1e-14);
        assert_relative_eq!(r.value().to_f64().unwrap(), 0.725_497_253_192_426_2, max_relative = 1e-14);
        for a in [0.01, 0.7, 3.0, 40.0] {
            let (l2, l4) = (0.5, 2.0 / pi2);
            let a2 = a * a;
            let want = (4.0 + a2 * (1.0 - l2)) / (4.0 + 4.0 * a2 * (1.0 - l2) + a2 * a2 * (1.0 - 2.0 * l2 + l4));
            let got = build_r(&Potential::harmonic(), a, &LambdaTable::harmonic_special()).unwrap();
            assert_relative_eq!(got.value().to_f64().unwrap(), want, max_relative = 1e-13);
        }
    }

    #[test]
    fn mode_mismatch() {
        assert!(matches!(
            build_r(&Potential::harmonic(), 1.0, &LambdaTable::general()),
            Err(Error::ModeMismatch(_))
        ));
        assert!(matches!(
            build_r(&Potential::pure(2).unwrap(), 1.0, &LambdaTable::harmonic_special()),
            Err(Error::ModeMismatch(_))
        ));
    }

    #[test]
    fn examples() {
        assert_relative_eq!(period_pms(&Potential::harmonic(), 1.0).unwrap(), 7.376_697_629_489_84, max_relative = 1e-13);
        assert_relative_eq!(period_pms(&Potential::harmonic(), 0.0).unwrap(), 2.0 * PI);
        assert_relative_eq!(period_pms(&Potential::harmonic(), 1e-8).unwrap(), 2.0 * PI, max_relative = 1e-14);
        assert_relative_eq!(period_pms(&Potential::pure(2).unwrap(), 1.0).unwrap(), 8.057_318_818_189_11, max_relative = 1e-13);
        assert_relative_eq!(
            period_pms(&Potential::augmented(2).unwrap(), 1.0).unwrap(),
            6.076_218_128_441_54,
            max_relative = 1e-13
        );
        assert_eq!(period_pms(&Potential::pure(2).unwrap(), 0.0), Err(Error::ZeroAmplitude));
        assert!(matches!(period_pms(&Potential::harmonic(), -1.0), Err(Error::NegativeAmplitude(_))));
    }

    #[test]
    fn scaled_and_naive_agree_in_range() {
        let pots = [
            Potential::harmonic(),
            Potential::augmented(3).unwrap(),
            Potential::sum(5).unwrap(),
            Potential::pure(4).unwrap(),
            "2:0.3,6:3".parse().unwrap(),
        ];
        for p in &pots {
            for a in [0.05, 0.9, 2.0, 30.0] {
                let s = period_pms_with(p, a, Evaluation::Scaled).unwrap();
                let n = period_pms_with(p, a, Evaluation::Naive).unwrap();
                assert_relative_eq!(s, n, max_relative = 1e-12);
            }
        }
    }

    #[test]
    fn naive_overflows_where_scaled_does_not() {
        let p = Potential::augmented(500).unwrap();
        assert!(matches!(period_pms_with(&p, 10.0, Evaluation::Naive), Err(Error::OverflowRisk(_))));
        let t = period_pms(&p, 10.0).unwrap();
        assert!((t / 40.0 - 1.0).abs() < 1e-3);
    }

    #[test]
    fn quadratic_scaling_reduction() {
        // c x^2 maps onto the harmonic case by x' = x sqrt(2c)
        for c in [0.1, 0.5, 2.0, 7.0] {
            let p = Potential::from_terms([(2, c)]).unwrap();
            for a in [0.01, 0.5, 3.0, 200.0] {
                let k = (2.0 * c).sqrt();
                let want = period_pms(&Potential::harmonic(), a * k).unwrap() / k;
                assert_relative_eq!(period_pms(&p, a).unwrap(), want, max_relative = 1e-13);
            }
        }
    }

    #[test]
    fn first_order_pms_small_amplitude() {
        let w = omega_first_order_pms(&Potential::harmonic(), 1e-4, 64).unwrap();
        assert_relative_eq!(w, 1.0, max_relative = 1e-7);
        assert!(matches!(
            omega_first_order_pms(&Potential::harmonic(), 1.0, 16),
            Err(Error::Domain { .. })
        ));
    }

    #[test]
    fn first_order_pms_large_amplitude() {
        // mpmath: omega(100) = 1.02990931550296806
        let p = Potential::augmented(2).unwrap();
        let w = omega_first_order_pms(&p, 100.0, 64).unwrap();
        assert_relative_eq!(w, 1.029_909_315_502_968, max_relative = 1e-10);
    }

    #[test]
    fn ultrarelativistic_limit_ignores_coefficients() {
        for m in [2, 4] {
            for a in [0.3, 1.0, 3.0] {
                for b in [0.3, 1.0, 3.0] {
                    let p = Potential::from_terms([(2, a), (2 * m, b)]).unwrap();
                    let t = period_pms(&p, 1e3).unwrap();
                    assert!((t / 4e3 - 1.0).abs() <= 1e-2, "{a} x^2 + {b} x^{}: {t}", 2 * m);
                }
            }
        }
    }

    #[test]
    fn continuous_and_positive() {
        let grid: Vec<f64> = (0..=600).map(|i| 10f64.powf(-3.0 + i as f64 / 100.0)).collect();
        for name in ["harmonic", "aug:2", "sum:5", "pure:2", "pure:20", "2:0.3,8:3"] {
            let p: Potential = name.parse().unwrap();
            let t: Vec<f64> = grid.iter().map(|&a| period_pms(&p, a).unwrap()).collect();
            assert!(t.iter().all(|v| v.is_finite() && *v > 0.0), "{name}");
            // pure:20 falls like A^-19 at small A, hence the bound in log T
            for w in t.windows(2) {
                assert!((w[1] / w[0]).ln().abs() < 0.5, "{name}: jump {} -> {}", w[0], w[1]);
            }
        }
    }
}
