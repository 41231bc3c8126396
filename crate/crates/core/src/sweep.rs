//! Amplitude grids, method dispatch and CSV tables of periods and errors.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::closed_forms::{period_closed, period_elliptic};
use crate::error::{Error, Result};
use crate::oracles::{period_ode, period_quadrature, relative_error, OdeConfig, QuadratureConfig};
use crate::pms::period_pms;
use crate::potential::Potential;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Spacing {
    Linear,
    Log,
}

/// `count` amplitudes from `min` to `max`, both included.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Grid {
    pub min: f64,
    pub max: f64,
    pub count: usize,
    pub spacing: Spacing,
}

impl Grid {
    pub fn new(min: f64, max: f64, count: usize, spacing: Spacing) -> Result<Self> {
        let bad = |function| Err(Error::Domain { function, value: min });
        if !(min.is_finite() && max.is_finite()) || min < 0.0 {
            return bad("grid bounds must be finite and non-negative");
        }
        if !(min < max) {
            return bad("grid needs min < max");
        }
        if count < 2 {
            return Err(Error::Domain {
                function: "grid needs count >= 2",
                value: count as f64,
            });
        }
        if spacing == Spacing::Log && min <= 0.0 {
            return bad("log grid needs min > 0");
        }
        Ok(Grid { min, max, count, spacing })
    }

    pub fn points(&self) -> Vec<f64> {
        let last = (self.count - 1) as f64;
        let mut points: Vec<f64> = (0..self.count)
            .map(|i| {
                let f = i as f64 / last;
                match self.spacing {
                    Spacing::Linear => self.min + f * (self.max - self.min),
                    Spacing::Log => (self.min.ln() + f * (self.max.ln() - self.min.ln())).exp(),
                }
            })
            .collect();
        points[0] = self.min;
        points[self.count - 1] = self.max;
        points
    }
}

impl FromStr for Grid {
    type Err = Error;

    /// `min:max:count:lin|log`
    fn from_str(s: &str) -> Result<Self> {
        let err = || Error::Parse {
            what: "grid (expected min:max:count:lin|log)",
            input: s.to_string(),
        };
        let parts: Vec<&str> = s.split(':').map(str::trim).collect();
        let [min, max, count, spacing] = parts.as_slice() else {
            return Err(err());
        };
        let spacing = match *spacing {
            "lin" | "linear" => Spacing::Linear,
            "log" => Spacing::Log,
            _ => return Err(err()),
        };
        Grid::new(
            min.parse().map_err(|_| err())?,
            max.parse().map_err(|_| err())?,
            count.parse().map_err(|_| err())?,
            spacing,
        )
    }
}

impl fmt::Display for Grid {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let spacing = match self.spacing {
            Spacing::Linear => "lin",
            Spacing::Log => "log",
        };
        write!(f, "{}:{}:{}:{}", self.min, self.max, self.count, spacing)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Closed,
    Pms,
    Elliptic,
    Quad,
    Ode,
}

impl Method {
    pub const ALL: [Method; 5] = [Method::Closed, Method::Pms, Method::Elliptic, Method::Quad, Method::Ode];

    pub fn name(&self) -> &'static str {
        match self {
            Method::Closed => "closed",
            Method::Pms => "pms",
            Method::Elliptic => "elliptic",
            Method::Quad => "quad",
            Method::Ode => "ode",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL
            .into_iter()
            .find(|m| m.name() == s.trim())
            .ok_or_else(|| Error::Parse {
                what: "method (closed|pms|elliptic|quad|ode)",
                input: s.to_string(),
            })
    }
}

/// Settings for the two numerical oracles.
#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct Evaluator {
    pub quad: QuadratureConfig,
    pub ode: OdeConfig,
}

impl Evaluator {
    /// Defaults, with the quadrature node count read from the environment.
    pub fn from_env() -> Result<Self> {
        Ok(Evaluator {
            quad: QuadratureConfig::from_env()?,
            ode: OdeConfig::default(),
        })
    }

    pub fn period(&self, potential: &Potential, amplitude: f64, method: Method) -> Result<f64> {
        match method {
            Method::Closed => period_closed(potential, amplitude),
            Method::Pms => period_pms(potential, amplitude),
            Method::Elliptic => period_elliptic(potential, amplitude),
            Method::Quad => period_quadrature(potential, amplitude, &self.quad),
            Method::Ode => period_ode(potential, amplitude, &self.ode),
        }
    }
}

/// Rounds to the 12 significant digits written to CSV.
pub fn round12(x: f64) -> f64 {
    format!("{x:.11e}").parse().expect("formatted float parses")
}

fn fmt12(x: f64) -> String {
    format!("{x:.11e}")
}

/// One amplitude: max speed, a period per method, the reference period and
/// each method's relative error against it.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepRecord {
    pub amplitude: f64,
    pub v_max: f64,
    pub periods: Vec<f64>,
    pub reference: f64,
    pub rel_errs: Vec<f64>,
}

impl SweepRecord {
    pub fn compute(
        potential: &Potential,
        amplitude: f64,
        methods: &[Method],
        reference: Method,
        eval: &Evaluator,
    ) -> Result<Self> {
        let row = || -> Result<SweepRecord> {
            let v_max = potential.max_velocity(amplitude)?;
            let t_ref = eval.period(potential, amplitude, reference)?;
            let mut periods = Vec::with_capacity(methods.len());
            let mut rel_errs = Vec::with_capacity(methods.len());
            for &m in methods {
                let t = if m == reference { t_ref } else { eval.period(potential, amplitude, m)? };
                rel_errs.push(round12(relative_error(t, t_ref)?));
                periods.push(round12(t));
            }
            Ok(SweepRecord {
                amplitude: round12(amplitude),
                v_max: round12(v_max),
                periods,
                reference: round12(t_ref),
                rel_errs,
            })
        };
        row().map_err(|e| Error::Row {
            amplitude,
            source: Box::new(e),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepTable {
    pub methods: Vec<Method>,
    pub records: Vec<SweepRecord>,
}

impl SweepTable {
    /// Rows are computed in parallel and kept in grid order; the first
    /// failing row in that order is reported.
    pub fn compute(
        potential: &Potential,
        amplitudes: &[f64],
        methods: &[Method],
        reference: Method,
        eval: &Evaluator,
    ) -> Result<Self> {
        if methods.is_empty() {
            return Err(Error::Parse {
                what: "method list",
                input: String::new(),
            });
        }
        let rows: Vec<Result<SweepRecord>> = amplitudes
            .par_iter()
            .map(|&a| SweepRecord::compute(potential, a, methods, reference, eval))
            .collect();
        Ok(SweepTable {
            methods: methods.to_vec(),
            records: rows.into_iter().collect::<Result<_>>()?,
        })
    }

    fn columns(&self) -> Vec<String> {
        let mut cols = vec!["A".to_string(), "v_max".to_string()];
        cols.extend(self.methods.iter().map(|m| format!("T_{m}")));
        cols.push("T_ref".to_string());
        cols.extend(self.methods.iter().map(|m| format!("rel_err_{m}")));
        cols
    }

    pub fn header(&self) -> String {
        self.columns().join(",")
    }

    pub fn max_rel_err(&self, method: Method) -> Option<f64> {
        let i = self.methods.iter().position(|&m| m == method)?;
        self.records.iter().map(|r| r.rel_errs[i]).reduce(f64::max)
    }

    pub fn to_csv(&self) -> String {
        let mut out = csv::Writer::from_writer(Vec::new());
        let write = |out: &mut csv::Writer<Vec<u8>>, row: Vec<String>| {
            out.write_record(row).expect("writing to memory");
        };
        write(&mut out, self.columns());
        for r in &self.records {
            let mut row = vec![fmt12(r.amplitude), fmt12(r.v_max)];
            row.extend(r.periods.iter().map(|&t| fmt12(t)));
            row.push(fmt12(r.reference));
            row.extend(r.rel_errs.iter().map(|&e| fmt12(e)));
            write(&mut out, row);
        }
        String::from_utf8(out.into_inner().expect("flushing to memory")).expect("ascii output")
    }

    pub fn from_csv(text: &str) -> Result<Self> {
        let bad = |input: String| Error::Parse {
            what: "sweep csv",
            input,
        };
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let cols: Vec<String> = reader
            .headers()
            .map_err(|e| bad(e.to_string()))?
            .iter()
            .map(str::to_string)
            .collect();
        let n = match cols.len().checked_sub(3) {
            Some(n) if n > 0 && n % 2 == 0 => n / 2,
            _ => return Err(bad(cols.join(","))),
        };
        if cols[0] != "A" || cols[1] != "v_max" || cols[2 + n] != "T_ref" {
            return Err(bad(cols.join(",")));
        }
        let methods = cols[2..2 + n]
            .iter()
            .map(|c| c.strip_prefix("T_").ok_or_else(|| bad(c.clone()))?.parse())
            .collect::<Result<Vec<Method>>>()?;
        let table = SweepTable { methods, records: Vec::new() };
        if table.columns() != cols {
            return Err(bad(cols.join(",")));
        }
        let records = reader
            .records()
            .map(|row| {
                let row = row.map_err(|e| bad(e.to_string()))?;
                let v: Vec<f64> = row
                    .iter()
                    .map(|f| f.parse::<f64>().map_err(|_| bad(f.to_string())))
                    .collect::<Result<_>>()?;
                Ok(SweepRecord {
                    amplitude: v[0],
                    v_max: v[1],
                    periods: v[2..2 + n].to_vec(),
                    reference: v[2 + n],
                    rel_errs: v[3 + n..].to_vec(),
                })
            })
            .collect::<Result<_>>()?;
        Ok(SweepTable { records, ..table })
    }
}
