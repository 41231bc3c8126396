//! Free parameters `lambda_{2n}` standing in for the harmonics `cos^{2n}(theta)`.
//!
//! `lambda_0 = 1` and `lambda_2 = 1/2` (the trigonometric average) are fixed.
//! Every higher value follows from demanding that the zeroth-order period
//! reach the photon-in-a-box limit `T -> 4A`, which gives the recursion
//!
//! ```text
//! lambda_{2m} = 1 - (4/pi^2) * sum_{n<m} lambda_{2n}
//! ```
//!
//! and its geometric closed form. The harmonic potential is the exception:
//! there the fourth-order parameter enters independently of the factoring
//! and takes the value `2/pi^2`.

use std::f64::consts::PI;

/// Ratio `(pi^2 - 4)/pi^2` of the geometric decay of `lambda_{2n}`.
pub fn decay_ratio() -> f64 {
    let pi2 = PI * PI;
    (pi2 - 4.0) / pi2
}

/// `lambda_{2n}` from the closed form, `n >= 2`, with the fixed low values.
pub fn lambda_closed(n: u32) -> f64 {
    match n {
        0 => 1.0,
        1 => 0.5,
        _ => {
            let pi2 = PI * PI;
            (pi2 - 6.0) / (pi2 - 4.0) * decay_ratio().powi(n as i32 - 1)
        }
    }
}

/// `[lambda_0, lambda_2, ..., lambda_{2 up_to_n}]` built bottom-up from the
/// boundary-condition recursion.
pub fn lambda_iterative(up_to_n: u32) -> Vec<f64> {
    let mut out = vec![1.0, 0.5];
    let mut partial = 1.5;
    let c = 4.0 / (PI * PI);
    for _ in 2..=up_to_n {
        let next = 1.0 - c * partial;
        out.push(next);
        partial += next;
    }
    out.truncate(up_to_n as usize + 1);
    out
}

/// `sum_{j=0}^{n-1} lambda_{2j}`, closed form. Tends to `pi^2/4`.
pub fn lambda_partial_sum(n: u32) -> f64 {
    match n {
        0 => 0.0,
        1 => 1.0,
        _ => 1.5 + (PI * PI - 6.0) / 4.0 * (1.0 - decay_ratio().powi(n as i32 - 2)),
    }
}

/// The fourth-order parameter of the harmonic potential, `2/pi^2`.
pub fn lambda_harmonic_l4() -> f64 {
    2.0 / (PI * PI)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum LambdaMode {
    General,
    HarmonicSpecial,
}

/// Lookup of `lambda_{2n}` by half-index `n`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct LambdaTable {
    mode: LambdaMode,
}

impl LambdaTable {
    pub fn general() -> Self {
        LambdaTable {
            mode: LambdaMode::General,
        }
    }

    pub fn harmonic_special() -> Self {
        LambdaTable {
            mode: LambdaMode::HarmonicSpecial,
        }
    }

    pub fn mode(&self) -> LambdaMode {
        self.mode
    }

    /// `lambda_{2n}`; `None` above `lambda_4` in harmonic mode.
    pub fn get(&self, n: u32) -> Option<f64> {
        match (self.mode, n) {
            (_, 0 | 1) => Some(lambda_closed(n)),
            (LambdaMode::HarmonicSpecial, 2) => Some(lambda_harmonic_l4()),
            (LambdaMode::HarmonicSpecial, _) => None,
            (LambdaMode::General, _) => Some(lambda_closed(n)),
        }
    }
}
