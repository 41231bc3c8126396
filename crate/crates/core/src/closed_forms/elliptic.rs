//! Complete elliptic integrals by the arithmetic-geometric mean.
//!
//! Parameter convention: the argument is `m = k^2`, so
//! `K(m) = int_0^{pi/2} dt / sqrt(1 - m sin^2 t)`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

const AGM_TOL: f64 = 1e-15;
const MAX_ITER: usize = 64;

/// Complete elliptic integral of the first kind, `0 <= m < 1`.
pub fn agm_k(m: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&m) {
        return Err(Error::Domain {
            function: "K(m)",
            value: m,
        });
    }
    Ok(agm_complementary(1.0 - m)?.0)
}

/// Complete elliptic integral of the second kind, `0 <= m <= 1`.
pub fn agm_e(m: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&m) {
        return Err(Error::Domain {
            function: "E(m)",
            value: m,
        });
    }
    if m == 1.0 {
        return Ok(1.0);
    }
    Ok(agm_complementary(1.0 - m)?.1)
}

/// `(K, E)` as functions of the complementary parameter `mc = 1 - m`,
/// `0 < mc <= 1`; keeps full accuracy as `m -> 1`.
///
/// `E = K (1 - sum_n 2^{n-1} c_n^2)` with `c_0^2 = m` and
/// `c_{n+1} = (a_n - b_n)/2`.
pub fn agm_complementary(mc: f64) -> Result<(f64, f64)> {
    if !(mc > 0.0 && mc <= 1.0) {
        return Err(Error::Domain {
            function: "K, E (complementary parameter)",
            value: mc,
        });
    }
    let (mut a, mut b) = (1.0_f64, mc.sqrt());
    let mut sum = 0.5 * (1.0 - mc);
    let mut weight = 0.5;
    for _ in 0..MAX_ITER {
        if (a - b).abs() <= AGM_TOL * a {
            break;
        }
        let c = 0.5 * (a - b);
        (a, b) = (0.5 * (a + b), (a * b).sqrt());
        weight *= 2.0;
        sum += weight * c * c;
    }
    let k = FRAC_PI_2 / a;
    Ok((k, k * (1.0 - sum)))
}
