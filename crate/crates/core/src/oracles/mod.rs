//! Reference periods: Gauss-Legendre quadrature of the exact period integral
//! and direct integration of the equation of motion.

mod ode;

pub use ode::{energy_drift, period_ode, OdeConfig};

use crate::error::{Error, Result};
use crate::potential::{check_positive, Potential, ScaledQs};
use crate::quadrature::{integrate_panels, turning_point_panels};
use crate::scaled::ScaledReal;

/// Environment variable overriding [`QuadratureConfig::nodes`].
pub const QUAD_NODES_ENV: &str = "RELPER_QUAD_NODES";

const MAX_DOUBLINGS: u32 = 4;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureConfig {
    /// Gauss-Legendre nodes per panel.
    pub nodes: usize,
    /// Compare against twice the nodes and refine until the two agree.
    pub richardson: bool,
    pub tol: f64,
}

impl Default for QuadratureConfig {
    fn default() -> Self {
        QuadratureConfig {
            nodes: 200,
            richardson: true,
            tol: 1e-12,
        }
    }
}

impl QuadratureConfig {
    /// Default configuration with the node count taken from
    /// `RELPER_QUAD_NODES` when set.
    pub fn from_env() -> Result<Self> {
        let mut cfg = QuadratureConfig::default();
        if let Ok(raw) = std::env::var(QUAD_NODES_ENV) {
            cfg.nodes = raw.trim().parse().map_err(|_| Error::Parse {
                what: QUAD_NODES_ENV,
                input: raw.clone(),
            })?;
        }
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.nodes < 32 {
            return Err(Error::Domain {
                function: "quadrature nodes (need >= 32)",
                value: self.nodes as f64,
            });
        }
        if !(self.tol > 0.0) {
            return Err(Error::Domain {
                function: "quadrature tol",
                value: self.tol,
            });
        }
        Ok(())
    }
}

/// `1/sqrt(R)` at `x = A cos(theta)`, in plain doubles while `M` allows it.
fn inverse_sqrt_kernel(qs: &ScaledQs) -> impl Fn(f64) -> Result<f64> + '_ {
    let s_scale = qs.scale() / ScaledReal::new(qs.amplitude()).powi(2);
    let plain = match (qs.scale().to_f64(), s_scale.to_f64()) {
        (Ok(m), Ok(s)) if m < 1e150 && m > 1e-150 && s < 1e300 && s > 1e-300 => Some((m, s)),
        _ => None,
    };
    move |theta: f64| {
        let value = match plain {
            Some((q_scale, s_scale)) => {
                let (sin, cos) = theta.sin_cos();
                let s_norm = qs.s_normalized().eval_in_square(cos * cos);
                let q = q_scale * sin * sin * s_norm;
                let s = s_scale * s_norm;
                if !(s > 0.0) {
                    return Err(Error::NonPositiveKernel { theta });
                }
                (q + 1.0) / (s * (q + 2.0)).sqrt()
            }
            None => {
                let r = qs.kernel_at_theta(theta);
                if r.is_zero() || r.is_sign_negative() || !r.mantissa().is_finite() {
                    return Err(Error::NonPositiveKernel { theta });
                }
                r.sqrt().recip().to_f64_saturating()
            }
        };
        Ok(value)
    }
}

fn quarter_integral(qs: &ScaledQs, panels: &[(f64, f64)], nodes: usize) -> Result<f64> {
    let f = inverse_sqrt_kernel(qs);
    let mut failure = None;
    let total = integrate_panels(panels, nodes, |t| match f(t) {
        Ok(v) => v,
        Err(e) => {
            failure.get_or_insert(e);
            0.0
        }
    });
    match failure {
        Some(e) => Err(e),
        None if !total.is_finite() => Err(Error::OverflowRisk("period integral exceeds f64 range")),
        None => Ok(total),
    }
}

/// Exact period `T = 4 int_0^{pi/2} dtheta / sqrt(R(theta))`.
pub fn period_quadrature(potential: &Potential, amplitude: f64, cfg: &QuadratureConfig) -> Result<f64> {
    cfg.validate()?;
    check_positive(amplitude)?;
    let qs = potential.scaled_qs(amplitude)?;
    let panels = turning_point_panels(&qs, potential.m());
    let mut nodes = cfg.nodes;
    let mut coarse = 4.0 * quarter_integral(&qs, &panels, nodes)?;
    if !cfg.richardson {
        return Ok(coarse);
    }
    for _ in 0..MAX_DOUBLINGS {
        nodes *= 2;
        let fine = 4.0 * quarter_integral(&qs, &panels, nodes)?;
        if (fine - coarse).abs() <= cfg.tol * fine.abs() {
            return Ok(fine);
        }
        coarse = fine;
    }
    let fine = 4.0 * quarter_integral(&qs, &panels, 2 * nodes)?;
    if (fine - coarse).abs() <= cfg.tol * fine.abs() {
        return Ok(fine);
    }
    Err(Error::QuadratureNonConvergence { coarse, fine })
}

/// `|approx/reference - 1|`.
pub fn relative_error(approx: f64, reference: f64) -> Result<f64> {
    if reference == 0.0 {
        return Err(Error::ZeroReference);
    }
    Ok((approx / reference - 1.0).abs())
}
