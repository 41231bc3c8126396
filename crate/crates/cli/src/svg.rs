//! Single-panel SVG line plots of the CSV files written by this tool.
//!
//! Output depends only on the input data: no timestamps, fixed number
//! formatting, fixed palette.

use std::fmt::Write;
use std::str::FromStr;

const WIDTH: f64 = 800.0;
const HEIGHT: f64 = 500.0;
const LEFT: f64 = 80.0;
const RIGHT: f64 = 180.0;
const TOP: f64 = 40.0;
const BOTTOM: f64 = 60.0;
const PALETTE: [&str; 8] = [
    "#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#17becf",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scale {
    Lin,
    Log,
}

impl FromStr for Scale {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "lin" | "linear" => Ok(Scale::Lin),
            "log" => Ok(Scale::Log),
            _ => Err(format!("unknown axis scale '{s}' (lin|log)")),
        }
    }
}

/// `x:y` scales, e.g. `log:log` or `log:lin`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Axes {
    pub x: Scale,
    pub y: Scale,
}

impl FromStr for Axes {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let (x, y) = s.split_once(':').ok_or_else(|| format!("axes '{s}' should look like log:log"))?;
        Ok(Axes {
            x: x.parse()?,
            y: y.parse()?,
        })
    }
}

/// Numeric CSV with a header row; the first column is the abscissa.
#[derive(Debug, Clone, PartialEq)]
pub struct Data {
    pub columns: Vec<String>,
    pub rows: Vec<Vec<f64>>,
}

impl Data {
    pub fn parse(text: &str) -> Result<Self, String> {
        let mut reader = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(text.as_bytes());
        let columns: Vec<String> = reader
            .headers()
            .map_err(|e| e.to_string())?
            .iter()
            .map(str::to_string)
            .collect();
        if columns.len() < 2 || columns.iter().all(|c| c.is_empty()) {
            return Err("no header with at least two columns".into());
        }
        let mut rows = Vec::new();
        for record in reader.records() {
            let record = record.map_err(|e| e.to_string())?;
            let row = record
                .iter()
                .map(|f| f.parse::<f64>().map_err(|_| format!("not a number: '{f}'")))
                .collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        if rows.is_empty() {
            return Err("no data rows".into());
        }
        Ok(Data { columns, rows })
    }

    /// Error columns if there are any, otherwise everything but the
    /// abscissa and `v_max`.
    pub fn default_curves(&self) -> Vec<usize> {
        let errors: Vec<usize> = (1..self.columns.len())
            .filter(|&i| self.columns[i].starts_with("rel_err_"))
            .collect();
        if !errors.is_empty() {
            return errors;
        }
        (1..self.columns.len()).filter(|&i| self.columns[i] != "v_max").collect()
    }
}

struct Axis {
    scale: Scale,
    lo: f64,
    hi: f64,
}

impl Axis {
    fn fit(scale: Scale, values: impl Iterator<Item = f64>) -> Option<Axis> {
        let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
        for v in values.filter(|&v| usable(scale, v)) {
            lo = lo.min(v);
            hi = hi.max(v);
        }
        if lo > hi {
            return None;
        }
        let (lo, hi) = match scale {
            Scale::Log => (10f64.powf(lo.log10().floor()), 10f64.powf(hi.log10().ceil().max(lo.log10().floor() + 1.0))),
            Scale::Lin if lo == hi => (lo - 0.5, hi + 0.5),
            Scale::Lin => (lo, hi),
        };
        Some(Axis { scale, lo, hi })
    }

    /// Position in `[0, 1]`.
    fn unit(&self, v: f64) -> f64 {
        match self.scale {
            Scale::Lin => (v - self.lo) / (self.hi - self.lo),
            Scale::Log => (v.log10() - self.lo.log10()) / (self.hi.log10() - self.lo.log10()),
        }
    }

    fn ticks(&self) -> Vec<(f64, String)> {
        match self.scale {
            Scale::Log => {
                let (a, b) = (self.lo.log10().round() as i32, self.hi.log10().round() as i32);
                let step = ((b - a) as usize).div_ceil(8).max(1);
                (a..=b).step_by(step).map(|k| (10f64.powi(k), format!("1e{k}"))).collect()
            }
            Scale::Lin => {
                let raw = (self.hi - self.lo) / 5.0;
                let mag = 10f64.powf(raw.log10().floor());
                let step = [1.0, 2.0, 5.0, 10.0].into_iter().map(|s| s * mag).find(|s| *s >= raw).unwrap_or(10.0 * mag);
                let first = (self.lo / step).ceil() as i64;
                let last = (self.hi / step).floor() as i64;
                (first..=last)
                    .map(|i| {
                        let v = i as f64 * step;
                        (v, trim_label(v, step))
                    })
                    .collect()
            }
        }
    }
}

fn usable(scale: Scale, v: f64) -> bool {
    v.is_finite() && (scale == Scale::Lin || v > 0.0)
}

fn trim_label(v: f64, step: f64) -> String {
    let decimals = (-step.log10().floor()).max(0.0) as usize;
    let s = format!("{v:.decimals$}");
    if s == "-0" { "0".into() } else { s }
}

fn escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;")
}

/// Renders the selected columns against the first one.
pub fn render(data: &Data, curves: &[usize], axes: Axes, title: &str) -> Result<String, String> {
    let x_axis = Axis::fit(axes.x, data.rows.iter().map(|r| r[0])).ok_or("no plottable abscissa values")?;
    let y_axis = Axis::fit(axes.y, curves.iter().flat_map(|&c| data.rows.iter().map(move |r| r[c])))
        .ok_or("no plottable values")?;
    let (pw, ph) = (WIDTH - LEFT - RIGHT, HEIGHT - TOP - BOTTOM);
    let px = |v: f64| LEFT + pw * x_axis.unit(v);
    let py = |v: f64| TOP + ph * (1.0 - y_axis.unit(v));

    let mut s = String::new();
    let w = &mut s;
    writeln!(w, r#"<svg xmlns="http://www.w3.org/2000/svg" width="{WIDTH}" height="{HEIGHT}" viewBox="0 0 {WIDTH} {HEIGHT}" font-family="sans-serif" font-size="12">"#).unwrap();
    writeln!(w, r#"<rect width="{WIDTH}" height="{HEIGHT}" fill="white"/>"#).unwrap();
    writeln!(w, r#"<text x="{:.2}" y="24" text-anchor="middle" font-size="14">{}</text>"#, LEFT + pw / 2.0, escape(title)).unwrap();
    writeln!(w, r#"<rect x="{LEFT}" y="{TOP}" width="{pw}" height="{ph}" fill="none" stroke="black"/>"#).unwrap();
    for (v, label) in x_axis.ticks() {
        let x = px(v);
        writeln!(w, r#"<line x1="{x:.2}" y1="{:.2}" x2="{x:.2}" y2="{:.2}" stroke="black"/>"#, TOP + ph, TOP + ph + 5.0).unwrap();
        writeln!(w, r#"<text x="{x:.2}" y="{:.2}" text-anchor="middle">{label}</text>"#, TOP + ph + 18.0).unwrap();
    }
    for (v, label) in y_axis.ticks() {
        let y = py(v);
        writeln!(w, r#"<line x1="{:.2}" y1="{y:.2}" x2="{LEFT}" y2="{y:.2}" stroke="black"/>"#, LEFT - 5.0).unwrap();
        writeln!(w, r#"<text x="{:.2}" y="{:.2}" text-anchor="end">{label}</text>"#, LEFT - 8.0, y + 4.0).unwrap();
    }
    writeln!(w, r#"<text x="{:.2}" y="{:.2}" text-anchor="middle">{}</text>"#, LEFT + pw / 2.0, HEIGHT - 15.0, escape(&data.columns[0])).unwrap();

    for (k, &c) in curves.iter().enumerate() {
        let color = PALETTE[k % PALETTE.len()];
        // unplottable points (zero on a log axis, say) split the line
        let mut segments: Vec<Vec<String>> = vec![Vec::new()];
        for row in &data.rows {
            if usable(axes.x, row[0]) && usable(axes.y, row[c]) {
                segments.last_mut().unwrap().push(format!("{:.2},{:.2}", px(row[0]), py(row[c])));
            } else if !segments.last().unwrap().is_empty() {
                segments.push(Vec::new());
            }
        }
        for seg in segments.iter().filter(|s| !s.is_empty()) {
            writeln!(w, r#"<polyline fill="none" stroke="{color}" stroke-width="1.5" points="{}"/>"#, seg.join(" ")).unwrap();
        }
        let ly = TOP + 10.0 + 18.0 * k as f64;
        let lx = WIDTH - RIGHT + 15.0;
        writeln!(w, r#"<line x1="{lx}" y1="{ly}" x2="{}" y2="{ly}" stroke="{color}" stroke-width="2"/>"#, lx + 20.0).unwrap();
        writeln!(w, r#"<text x="{}" y="{}">{}</text>"#, lx + 26.0, ly + 4.0, escape(&data.columns[c])).unwrap();
    }
    writeln!(w, "</svg>").unwrap();
    Ok(s)
}
