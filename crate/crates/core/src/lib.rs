//! Oscillation periods of a relativistic particle in an even polynomial
//! potential `phi(x)`, in units where the rest mass and `c` are one.
//!
//! Approximate periods come from a variational scheme that fixes its free
//! parameters with the ultrarelativistic boundary condition `T -> 4A`; the
//! [`closed_forms`] module holds the resulting formulas for the standard
//! families and [`pms`] the general pipeline. The [`oracles`] compute exact
//! periods by quadrature and by integrating the equation of motion.
//!
//! ```
//! use relper_core::{period_closed, period_harmonic_exact, Potential};
//!
//! let h = Potential::harmonic();
//! let approx = period_closed(&h, 1.0).unwrap();
//! let exact = period_harmonic_exact(1.0).unwrap();
//! assert!((approx / exact - 1.0).abs() < 1e-3);
//! ```

// NaN must fail positivity checks, so `!(x > 0.0)` is intended.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod closed_forms;
pub mod error;
pub mod evenpoly;
pub mod lambdas;
pub mod oracles;
pub mod pms;
pub mod potential;
pub mod quadrature;
pub mod scaled;
pub mod sweep;

pub use closed_forms::{
    period_closed, period_elliptic, period_family_a, period_family_b, period_family_c, period_harmonic_closed,
    period_harmonic_exact,
};
pub use error::{Error, Result};
pub use evenpoly::EvenPoly;
pub use lambdas::{LambdaMode, LambdaTable};
pub use oracles::{energy_drift, period_ode, period_quadrature, relative_error, OdeConfig, QuadratureConfig};
pub use pms::{omega_first_order_pms, period_pms, Evaluation, Substitution};
pub use potential::{Family, Potential};
pub use scaled::ScaledReal;
pub use sweep::{Evaluator, Grid, Method, Spacing, SweepRecord, SweepTable};
