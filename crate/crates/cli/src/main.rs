mod error;
mod figures;
mod svg;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use relper_core::lambdas::{lambda_closed, lambda_iterative};
use relper_core::{Evaluator, Grid, Method, Potential, SweepTable};

use crate::error::CliError;
use crate::figures::Figure;
use crate::svg::{Axes, Data};

const POTENTIAL_HELP: &str =
    "harmonic | aug:m (x^2/2 + x^2m/2m) | sum:m (sum of x^2n/2n, n = 1..m) | pure:m (x^2m/2m) | \
     explicit terms exponent:coefficient,... (e.g. 2:0.5,4:0.25)";

#[derive(Parser)]
#[command(name = "relper", version, about = "Periods of a relativistic particle in even polynomial potentials")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Period at a single amplitude, printed with 12 significant digits
    Period {
        #[arg(long, default_value = "harmonic", help = POTENTIAL_HELP)]
        potential: Potential,
        /// Amplitude (turning point)
        #[arg(short = 'A', long = "amplitude", allow_negative_numbers = true)]
        amplitude: f64,
        /// closed | pms | elliptic | quad | ode
        #[arg(long, default_value = "closed")]
        method: Method,
    },
    /// Periods and relative errors over an amplitude grid, as CSV
    Sweep {
        #[arg(long, default_value = "harmonic", help = POTENTIAL_HELP)]
        potential: Potential,
        /// min:max:count:lin|log
        #[arg(long)]
        grid: Grid,
        /// Comma-separated methods to tabulate
        #[arg(long, value_delimiter = ',', default_value = "closed")]
        method: Vec<Method>,
        /// Method giving T_ref
        #[arg(long, default_value = "quad")]
        reference: Method,
        /// Output file; standard output when omitted
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Data for one of the four error figures
    ///
    /// 1: harmonic, closed form vs elliptic route, log grid 1e-2..1e3, 300 points.
    /// 2: harmonic and x^2/2 + x^2m/2m for m = 2, 3, 4, 20, 500, closed form vs
    ///    quadrature, log grid 1e-2..1e2, 200 points.
    /// 3: sum_{n<=m} x^2n/2n for m = 3, 5, 10, 100, same grid and reference.
    /// 4: x^2m/2m for m = 2, 3, 4, 20, log grid 0.05..1e2, 200 points.
    ///
    /// Writes fig<id>_<curve>.csv for every curve and fig<id>_errors.csv.
    #[command(verbatim_doc_comment)]
    Figure {
        /// 1, 2, 3 or 4
        id: u8,
        /// Output directory
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
    /// Line plot of a CSV written by this tool
    Svg {
        csv: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// x:y axis scales, each lin or log
        #[arg(long, default_value = "log:log")]
        axes: Axes,
        /// Columns to plot; defaults to the rel_err_* columns if present
        #[arg(long, value_delimiter = ',')]
        columns: Vec<String>,
        #[arg(long)]
        title: Option<String>,
    },
    /// The free parameters lambda_2n: closed form, recursion and their difference
    LambdaTable {
        #[arg(long, default_value_t = 10)]
        up_to: u32,
    },
}

/// 12 significant digits, fixed notation where that stays readable.
fn sig12(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return x.to_string();
    }
    let e = x.abs().log10().floor() as i32;
    if (-4..12).contains(&e) {
        let decimals = (11 - e).max(0) as usize;
        format!("{x:.decimals$}")
    } else {
        format!("{x:.11e}")
    }
}

fn emit(out: Option<&PathBuf>, text: &str) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|e| CliError::io(path, e)),
        None => std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    match cli.command {
        Command::Period {
            potential,
            amplitude,
            method,
        } => {
            let eval = Evaluator::from_env()?;
            let t = eval.period(&potential, amplitude, method)?;
            println!("{}", sig12(t));
        }
        Command::Sweep {
            potential,
            grid,
            method,
            reference,
            out,
        } => {
            let eval = Evaluator::from_env()?;
            let table = SweepTable::compute(&potential, &grid.points(), &method, reference, &eval)?;
            emit(out.as_ref(), &table.to_csv())?;
        }
        Command::Figure { id, out } => {
            let figure = Figure::new(id)?;
            for path in figure.write(&out, &Evaluator::from_env()?)? {
                eprintln!("wrote {}", path.display());
            }
        }
        Command::Svg {
            csv,
            out,
            axes,
            columns,
            title,
        } => {
            let text = std::fs::read_to_string(&csv).map_err(|e| CliError::io(&csv, e))?;
            let bad = |message: String| CliError::Csv {
                path: csv.clone(),
                message,
            };
            let data = Data::parse(&text).map_err(bad)?;
            let curves = if columns.is_empty() {
                data.default_curves()
            } else {
                columns
                    .iter()
                    .map(|c| {
                        data.columns
                            .iter()
                            .position(|h| h == c)
                            .ok_or_else(|| bad(format!("no column '{c}'")))
                    })
                    .collect::<Result<_, _>>()?
            };
            let title = title.unwrap_or_else(|| {
                csv.file_stem()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_default()
            });
            let svg = svg::render(&data, &curves, axes, &title).map_err(bad)?;
            std::fs::write(&out, svg).map_err(|e| CliError::io(&out, e))?;
        }
        Command::LambdaTable { up_to } => {
            let iterative = lambda_iterative(up_to);
            let mut text = String::from("n,lambda_closed,lambda_iterative,difference\n");
            for (n, it) in (0..=up_to).zip(iterative) {
                let closed = lambda_closed(n);
                text.push_str(&format!("{n},{closed:.11e},{it:.11e},{:.3e}\n", closed - it));
            }
            emit(None, &text)?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("relper: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
