//! `x'' = -phi'(x) (1 - x'^2)^{3/2}` by classic RK4 with step doubling.

use crate::error::{Error, Result};
use crate::potential::{check_positive, Potential};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OdeConfig {
    /// First step; `None` means `1e-3` of a period estimate.
    pub dt_init: Option<f64>,
    /// Local error tolerance, applied as `tol (1 + |y|)` per component.
    pub tol: f64,
    pub max_steps: usize,
}

impl Default for OdeConfig {
    fn default() -> Self {
        OdeConfig {
            dt_init: None,
            tol: 1e-10,
            max_steps: 1_000_000,
        }
    }
}

impl OdeConfig {
    fn validate(&self) -> Result<()> {
        if !(self.tol > 0.0) {
            return Err(Error::Domain { function: "ode tol", value: self.tol });
        }
        if let Some(dt) = self.dt_init {
            if !(dt > 0.0) {
                return Err(Error::Domain { function: "ode dt_init", value: dt });
            }
        }
        Ok(())
    }
}

type State = [f64; 2];

struct Integrator<'a> {
    potential: &'a Potential,
    tol: f64,
    h: f64,
    h_min: f64,
    t: f64,
    y: State,
    steps: usize,
    max_steps: usize,
}

impl<'a> Integrator<'a> {
    fn new(potential: &'a Potential, amplitude: f64, cfg: &OdeConfig) -> Result<Self> {
        cfg.validate()?;
        check_positive(amplitude)?;
        // the particle cannot cross faster than at its peak speed
        let v_max = potential.max_velocity(amplitude)?;
        let t_guess = 4.0 * amplitude / v_max.max(f64::MIN_POSITIVE);
        let h = cfg.dt_init.unwrap_or(1e-3 * t_guess);
        Ok(Integrator {
            potential,
            tol: cfg.tol,
            h,
            h_min: 1e-14 * t_guess,
            t: 0.0,
            y: [amplitude, 0.0],
            steps: 0,
            max_steps: cfg.max_steps,
        })
    }

    fn rhs(&self, y: &State) -> Option<State> {
        let w = 1.0 - y[1] * y[1];
        if !(w > 0.0) {
            return None;
        }
        Some([y[1], -self.potential.derivative(y[0]) * w * w.sqrt()])
    }

    fn rk4(&self, y: &State, h: f64) -> Option<State> {
        let shift = |k: &State, c: f64| [y[0] + c * h * k[0], y[1] + c * h * k[1]];
        let k1 = self.rhs(y)?;
        let k2 = self.rhs(&shift(&k1, 0.5))?;
        let k3 = self.rhs(&shift(&k2, 0.5))?;
        let k4 = self.rhs(&shift(&k3, 1.0))?;
        let out = [
            y[0] + h / 6.0 * (k1[0] + 2.0 * k2[0] + 2.0 * k3[0] + k4[0]),
            y[1] + h / 6.0 * (k1[1] + 2.0 * k2[1] + 2.0 * k3[1] + k4[1]),
        ];
        (out[1].abs() < 1.0).then_some(out)
    }

    /// One full step and two half steps, extrapolated; also the error norm.
    fn doubled(&self, y: &State, h: f64) -> Option<(State, f64)> {
        let big = self.rk4(y, h)?;
        let half = self.rk4(y, 0.5 * h)?;
        let fine = self.rk4(&half, 0.5 * h)?;
        let mut err: f64 = 0.0;
        let mut out = fine;
        for i in 0..2 {
            let d = fine[i] - big[i];
            out[i] = fine[i] + d / 15.0;
            err = err.max(d.abs() / (self.tol * (1.0 + fine[i].abs())));
        }
        (out[1].abs() < 1.0).then_some((out, err))
    }

    /// Advances by one accepted step, never past `t_end`. Returns the state
    /// before the step and the step taken.
    fn step(&mut self, t_end: f64) -> Result<(State, f64)> {
        loop {
            if self.steps >= self.max_steps {
                return Err(Error::MaxStepsExceeded(self.max_steps));
            }
            self.steps += 1;
            let h = self.h.min(t_end - self.t);
            match self.doubled(&self.y, h) {
                Some((next, err)) if err <= 1.0 => {
                    let before = self.y;
                    self.y = next;
                    self.t += h;
                    let grow = if err == 0.0 { 4.0 } else { (0.9 * err.powf(-0.2)).clamp(0.2, 4.0) };
                    // a step cut short by t_end says nothing about the next one
                    if h == self.h {
                        self.h *= grow;
                    }
                    return Ok((before, h));
                }
                Some((_, err)) => self.h = h * (0.9 * err.powf(-0.2)).clamp(0.1, 0.5),
                None => self.h = 0.25 * h,
            }
            if self.h < self.h_min {
                return Err(Error::SuperluminalState { t: self.t });
            }
        }
    }

    fn energy(&self, y: &State) -> f64 {
        1.0 / (1.0 - y[1] * y[1]).sqrt() + self.potential.eval(y[0])
    }
}

/// Period as four times the first passage through `x = 0`, starting at
/// rest from `x = A`.
pub fn period_ode(potential: &Potential, amplitude: f64, cfg: &OdeConfig) -> Result<f64> {
    let mut ode = Integrator::new(potential, amplitude, cfg)?;
    loop {
        let (before, h) = ode.step(f64::INFINITY)?;
        if ode.y[0] > 0.0 {
            continue;
        }
        // the crossing lies inside the last step; bisect on the sub-step
        let t0 = ode.t - h;
        let (mut lo, mut hi) = (0.0, h);
        for _ in 0..200 {
            if hi - lo <= 4.0 * f64::EPSILON * (t0 + hi) {
                break;
            }
            let mid = 0.5 * (lo + hi);
            match ode.doubled(&before, mid) {
                Some((y, _)) if y[0] > 0.0 => lo = mid,
                Some(_) => hi = mid,
                None => return Err(Error::SuperluminalState { t: t0 + mid }),
            }
        }
        return Ok(4.0 * (t0 + 0.5 * (lo + hi)));
    }
}

/// Largest relative change of `gamma + phi(x)` over `[0, duration]`.
pub fn energy_drift(potential: &Potential, amplitude: f64, duration: f64, cfg: &OdeConfig) -> Result<f64> {
    let mut ode = Integrator::new(potential, amplitude, cfg)?;
    let e0 = ode.energy(&ode.y);
    let mut worst: f64 = 0.0;
    while ode.t < duration {
        ode.step(duration)?;
        worst = worst.max((ode.energy(&ode.y) / e0 - 1.0).abs());
    }
    Ok(worst)
}
