//! The four figure data sets: one sweep CSV per curve and a combined error
//! CSV per figure.

use std::fs;
use std::path::{Path, PathBuf};

use relper_core::{Evaluator, Grid, Method, Potential, Spacing, SweepTable};

use crate::error::CliError;

pub struct Figure {
    pub id: u8,
    pub grid: Grid,
    pub method: Method,
    pub reference: Method,
    pub curves: Vec<(String, Potential)>,
}

impl Figure {
    pub fn new(id: u8) -> Result<Self, CliError> {
        let log = |min, max, count| Grid::new(min, max, count, Spacing::Log);
        let family = |f: fn(u32) -> relper_core::Result<Potential>, tag: &str, ms: &[u32]| {
            ms.iter()
                .map(|&m| Ok((format!("{tag}{m}"), f(m)?)))
                .collect::<relper_core::Result<Vec<_>>>()
        };
        let (grid, reference, curves) = match id {
            1 => (log(1e-2, 1e3, 300)?, Method::Elliptic, vec![("harmonic".into(), Potential::harmonic())]),
            2 => {
                let mut curves = vec![("harmonic".to_string(), Potential::harmonic())];
                curves.extend(family(Potential::augmented, "aug", &[2, 3, 4, 20, 500])?);
                (log(1e-2, 1e2, 200)?, Method::Quad, curves)
            }
            3 => (log(1e-2, 1e2, 200)?, Method::Quad, family(Potential::sum, "sum", &[3, 5, 10, 100])?),
            4 => (log(0.05, 1e2, 200)?, Method::Quad, family(Potential::pure, "pure", &[2, 3, 4, 20])?),
            _ => {
                return Err(relper_core::Error::Domain {
                    function: "figure id (1-4)",
                    value: id as f64,
                }
                .into())
            }
        };
        Ok(Figure {
            id,
            grid,
            method: Method::Closed,
            reference,
            curves,
        })
    }

    pub fn tables(&self, eval: &Evaluator) -> Result<Vec<(String, SweepTable)>, CliError> {
        let points = self.grid.points();
        self.curves
            .iter()
            .map(|(name, p)| {
                let table = SweepTable::compute(p, &points, &[self.method], self.reference, eval)?;
                Ok((name.clone(), table))
            })
            .collect()
    }

    /// Writes `fig<id>_<curve>.csv` per curve and `fig<id>_errors.csv`;
    /// returns the paths written.
    pub fn write(&self, dir: &Path, eval: &Evaluator) -> Result<Vec<PathBuf>, CliError> {
        let tables = self.tables(eval)?;
        fs::create_dir_all(dir).map_err(|e| CliError::io(dir, e))?;
        let mut written = Vec::new();
        for (name, table) in &tables {
            let path = dir.join(format!("fig{}_{name}.csv", self.id));
            fs::write(&path, table.to_csv()).map_err(|e| CliError::io(&path, e))?;
            written.push(path);
        }
        let path = dir.join(format!("fig{}_errors.csv", self.id));
        fs::write(&path, errors_csv(&tables)).map_err(|e| CliError::io(&path, e))?;
        written.push(path);
        Ok(written)
    }
}

/// `A,rel_err_<curve>,...` over the shared grid.
pub fn errors_csv(tables: &[(String, SweepTable)]) -> String {
    let mut out = csv::Writer::from_writer(Vec::new());
    let mut header = vec!["A".to_string()];
    header.extend(tables.iter().map(|(name, _)| format!("rel_err_{name}")));
    out.write_record(&header).expect("writing to memory");
    let rows = tables.first().map_or(0, |(_, t)| t.records.len());
    for i in 0..rows {
        let mut row = vec![format!("{:.11e}", tables[0].1.records[i].amplitude)];
        row.extend(tables.iter().map(|(_, t)| format!("{:.11e}", t.records[i].rel_errs[0])));
        out.write_record(&row).expect("writing to memory");
    }
    String::from_utf8(out.into_inner().expect("flushing to memory")).expect("ascii output")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn layouts() {
        assert_eq!(Figure::new(1).unwrap().curves.len(), 1);
        assert_eq!(Figure::new(2).unwrap().curves.len(), 6);
        assert_eq!(Figure::new(3).unwrap().curves[3].0, "sum100");
        assert_eq!(Figure::new(4).unwrap().grid.min, 0.05);
        assert!(matches!(Figure::new(5), Err(e) if e.exit_code() == 2));
    }

    #[test]
    fn fig1_errors() {
        let fig = Figure::new(1).unwrap();
        let tables = fig.tables(&Evaluator::default()).unwrap();
        let csv = errors_csv(&tables);
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("A,rel_err_harmonic"));
        assert_eq!(lines.count(), 300);
        // no grid point sits exactly on A = 1
        let t = &tables[0].1;
        let near = t
            .records
            .iter()
            .min_by(|a, b| (a.amplitude.ln()).abs().total_cmp(&(b.amplitude.ln()).abs()))
            .unwrap();
        assert!((near.amplitude - 1.0).abs() < 0.03);
        assert!((near.rel_errs[0] - 5.4e-4).abs() < 5e-5, "{}", near.rel_errs[0]);
    }
}
