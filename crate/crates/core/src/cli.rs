//! The `scatter` command line.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::asymptotics::{
    convergence_rate, single_wall_gauge, single_wall_sweep, sweep_csv, two_wall_first_correction, Grid, TwoWallConfig,
};
use crate::error::{Error, Result};
use crate::json::{to_pretty, DiagramJson};
use crate::mc::{enumerate_trees, propagate, verify_against_ks, EvalOptions, InputPair, Method};
use crate::scattering::{ks_complete_with, Diagram, InsertionOrder, Support, Wall};
use crate::svg::{diagram_svg, heatmap_svg};

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILURE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_STRICT: i32 = 3;

#[derive(Parser, Debug)]
#[command(name = "scatter", version, about = "Consistent scattering diagrams, exactly and by trees")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Truncation order N.
    #[arg(long, global = true)]
    pub order: Option<u32>,
    /// Cone-measure integration method.
    #[arg(long, global = true, value_enum, default_value_t = MethodArg::Quadrature)]
    pub method: MethodArg,
    /// Seed of the Monte Carlo generator.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Monte Carlo sample count.
    #[arg(long, global = true, default_value_t = 1_000_000)]
    pub samples: usize,
    /// Comma-separated, strictly decreasing list of hbar values.
    #[arg(long, global = true, value_delimiter = ',')]
    pub hbar: Vec<f64>,
    /// Tolerance on coefficient deviations.
    #[arg(long, global = true, default_value_t = 1e-3)]
    pub tol: f64,
    /// Treat numerical-budget warnings as errors.
    #[arg(long, global = true)]
    pub strict: bool,
    /// Main output file.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// SVG output file.
    #[arg(long, global = true)]
    pub svg: Option<PathBuf>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Quadrature,
    Montecarlo,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum InsertionArg {
    Ascending,
    Descending,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Complete two line walls to a consistent diagram.
    Complete {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = InsertionArg::Ascending)]
        insertion: InsertionArg,
    },
    /// Check consistency of a diagram.
    Check { input: PathBuf },
    /// Path-ordered product around the standard loop.
    Product { input: PathBuf },
    /// List the labeled trees of two input walls.
    Trees { input: PathBuf },
    /// Compare the tree sum with the completion.
    Verify { input: PathBuf },
    /// Single-wall gauge sweep and the two-wall first correction.
    Asymptotics {
        /// Optional diagram whose first wall is used; defaults to log(1 + t z^(1,0)).
        input: Option<PathBuf>,
    },
}

/// Parses arguments, runs the command and returns the exit status.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            if code == EXIT_OK {
                let _ = write!(stdout, "{e}");
            } else {
                let _ = write!(stderr, "{e}");
            }
            return code;
        }
    };
    match execute(&cli, stdout) {
        Ok(code) => code,
        Err(e) => {
            let msg = serde_json::json!({ "error": e.code(), "message": e.to_string() });
            let _ = writeln!(stderr, "{msg}");
            match e {
                Error::Completion(_) => EXIT_FAILURE,
                _ => EXIT_INPUT,
            }
        }
    }
}

fn read_diagram(path: &Path, order: Option<u32>) -> Result<Diagram> {
    let text = std::fs::read_to_string(path)?;
    let js: DiagramJson = serde_json::from_str(&text)?;
    let d = Diagram::from_json(&js)?;
    Ok(match order {
        Some(n) if n < d.order() => d.truncate(n),
        Some(n) if n > d.order() => {
            let walls = d
                .walls()
                .iter()
                .map(|w| Wall::new(w.direction(), w.support(), w.log_theta().extend_order(n)))
                .collect::<Result<Vec<_>>>()?;
            Diagram::new(n, walls)?
        }
        _ => d,
    })
}

fn input_lines(d: &Diagram) -> Result<(Wall, Wall)> {
    let lines: Vec<&Wall> = d.walls().iter().filter(|w| w.support() == Support::Line).collect();
    match lines.as_slice() {
        [a, b] => {
            if crate::lattice::det(a.direction(), b.direction()) > 0 {
                Ok(((*a).clone(), (*b).clone()))
            } else {
                Ok(((*b).clone(), (*a).clone()))
            }
        }
        _ => Err(Error::InvalidData(format!("expected exactly two line walls, found {}", lines.len()))),
    }
}

fn write_out(path: &Option<PathBuf>, text: &str, stdout: &mut dyn Write) -> Result<()> {
    match path {
        Some(p) => std::fs::write(p, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn method(cli: &Cli) -> Method {
    match cli.method {
        MethodArg::Quadrature => Method::quadrature(),
        MethodArg::Montecarlo => Method::monte_carlo(cli.samples, cli.seed),
    }
}

#[derive(Serialize)]
struct TreeLine {
    tree: String,
    canonical: String,
    leaves: usize,
    ribbon_count: usize,
    automorphisms: u64,
    #[serde(rename = "m_T")]
    m_t: [i64; 2],
    #[serde(rename = "j_T")]
    j_t: u32,
    #[serde(rename = "n_T")]
    n_t: [i64; 2],
    chi: i32,
    wall: String,
}

#[derive(Serialize)]
struct AsymptoticsSummary {
    order: u32,
    hbar: Vec<f64>,
    single_wall_slope: f64,
    single_wall_plateau: f64,
    two_wall_values: Vec<f64>,
    two_wall_slope: Option<f64>,
}

fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<i32> {
    match &cli.command {
        Command::Complete { input, insertion } => {
            let d = read_diagram(input, cli.order)?;
            let (w1, w2) = input_lines(&d)?;
            let ins = match insertion {
                InsertionArg::Ascending => InsertionOrder::Ascending,
                InsertionArg::Descending => InsertionOrder::Descending,
            };
            let done = ks_complete_with(&w1, &w2, d.order(), ins)?;
            write_out(&cli.out, &to_pretty(&done.to_json())?, stdout)?;
            if let Some(p) = &cli.svg {
                std::fs::write(p, diagram_svg(&done))?;
            }
            Ok(EXIT_OK)
        }
        Command::Check { input } => {
            let d = read_diagram(input, cli.order)?;
            let ok = d.is_consistent()?;
            writeln!(stdout, "consistent: {ok}")?;
            Ok(if ok { EXIT_OK } else { EXIT_FAILURE })
        }
        Command::Product { input } => {
            let d = read_diagram(input, cli.order)?;
            let g = d.loop_product(d.standard_base_angle())?;
            write_out(&cli.out, &to_pretty(&g.log.to_json())?, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Trees { input } => {
            let d = read_diagram(input, cli.order)?;
            let (w1, w2) = input_lines(&d)?;
            let inputs = InputPair::from_walls(&w1, &w2)?;
            let mut text = String::new();
            for t in enumerate_trees(&inputs, d.order())? {
                let p = propagate(&t.tree, &inputs)?;
                let line = TreeLine {
                    tree: t.tree.to_string(),
                    canonical: t.canonical.clone(),
                    leaves: t.tree.num_leaves(),
                    ribbon_count: t.ribbon_count,
                    automorphisms: t.automorphisms,
                    m_t: [p.m_t.x, p.m_t.y],
                    j_t: p.j_t,
                    n_t: [p.n_t.x, p.n_t.y],
                    chi: p.chi_sign(),
                    wall: format!("{:?}", p.wall),
                };
                text.push_str(&serde_json::to_string(&line)?);
                text.push('\n');
            }
            write_out(&cli.out, &text, stdout)?;
            Ok(EXIT_OK)
        }
        Command::Verify { input } => {
            let d = read_diagram(input, cli.order)?;
            let (w1, w2) = input_lines(&d)?;
            let opts = EvalOptions { method: method(cli), flip_chi: false };
            let report = verify_against_ks(&w1, &w2, d.order(), cli.tol, &opts)?;
            write_out(&cli.out, &to_pretty(&report)?, stdout)?;
            if !report.ks_match {
                return Ok(EXIT_FAILURE);
            }
            let unconverged = report.diagnostics.iter().any(|d| d.starts_with("unsnapped"));
            Ok(if cli.strict && unconverged { EXIT_STRICT } else { EXIT_OK })
        }
        Command::Asymptotics { input } => {
            let n = cli.order.unwrap_or(2);
            let log_theta = match input {
                Some(p) => {
                    let d = read_diagram(p, Some(n))?;
                    d.walls()
                        .first()
                        .ok_or_else(|| Error::InvalidData("diagram has no walls".into()))?
                        .log_theta()
                        .clone()
                }
                None => crate::tropical::LieElement::log_binomial(
                    n,
                    crate::lattice::LatticeVector::new(1, 0),
                    1,
                    num_rational::BigRational::from_integer(1.into()),
                )?,
            };
            let hbars = if cli.hbar.is_empty() { vec![0.2, 0.1, 0.05, 0.025] } else { cli.hbar.clone() };
            if hbars.windows(2).any(|w| w[1] >= w[0]) {
                return Err(Error::InvalidData("hbar list must be strictly decreasing".into()));
            }
            let grid = Grid::standard();
            let rows = single_wall_sweep(&log_theta, n, &hbars, &grid)?;
            let samples: Vec<(f64, f64)> = rows.iter().map(|r| (r.hbar, r.sup_error_plus)).collect();
            let smallest = *hbars.last().expect("nonempty list");
            let run = single_wall_gauge(&log_theta, smallest, n, &grid)?;
            let two: Vec<f64> = hbars
                .iter()
                .map(|h| two_wall_first_correction(*h, &TwoWallConfig::default()))
                .collect::<Result<_>>()?;
            let dev: Vec<(f64, f64)> = hbars.iter().zip(&two).map(|(h, v)| (*h, (1.0 - v).abs())).collect();
            let summary = AsymptoticsSummary {
                order: n,
                hbar: hbars.clone(),
                single_wall_slope: convergence_rate(&samples)?,
                single_wall_plateau: run.plateau(1, 1),
                two_wall_values: two,
                two_wall_slope: convergence_rate(&dev).ok(),
            };
            write_out(&cli.out, &sweep_csv(&rows), stdout)?;
            writeln!(stdout, "{}", serde_json::to_string(&summary)?)?;
            if let Some(p) = &cli.svg {
                if let Some(f) = run.field(1, 1) {
                    std::fs::write(p, heatmap_svg(f, 64))?;
                }
            }
            Ok(EXIT_OK)
        }
    }
}
