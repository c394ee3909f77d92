//! Command-line front end: `sdfgraph <command> ...`.
//!
//! Exit codes: 0 on success, 1 when a verification fails, 2 on a parse or
//! usage error.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use sdfgraph::format::{fmt_g15, parse_moduli};
use sdfgraph::rng::{random_connected_multigraph, XorShift64Star};
use sdfgraph::spectral::spanning_tree_count;
use sdfgraph::{
    parse_graph, parse_voltage_graph, sdf, split_tree, tower_report, verify_main_bound,
    verify_uniform_estimate, Error, MultiGraph,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Vertex and edge caps for `bound-check --random`.
const RANDOM_MAX_VERTICES: usize = 12;
const RANDOM_MAX_EDGES: usize = 30;

#[derive(Debug, Parser)]
#[command(
    name = "sdfgraph",
    version,
    about = "Spectral density functions of finite multigraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print vertex/edge counts, degrees, diameter and Betti numbers.
    Stats { file: PathBuf },
    /// Print the jump points and values of the spectral density function.
    Sdf {
        file: PathBuf,
        /// Emit `lambda,value` CSV.
        #[arg(long)]
        csv: bool,
    },
    /// Check the linear spectral density estimate on [0, 1).
    BoundCheck {
        #[arg(required_unless_present = "random", conflicts_with = "random")]
        file: Option<PathBuf>,
        /// Uniform grid size.
        #[arg(long, default_value_t = 512)]
        grid: usize,
        /// Write the per-point report as CSV.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Check this many seeded random connected multigraphs instead of a file.
        #[arg(long)]
        random: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Split a tree into pieces of at most P edges.
    SplitTree {
        file: PathBuf,
        #[arg(long)]
        budget: f64,
    },
    /// Exact number of spanning trees.
    SpanningTrees { file: PathBuf },
    /// Normalized log-determinants along a tower of abelian covers.
    Tower {
        file: PathBuf,
        /// Moduli of one level, comma separated; repeat for each level.
        #[arg(long, required = true)]
        moduli: Vec<String>,
        /// Quadrature nodes per dimension (default 4096 for rank 1, 512 otherwise).
        #[arg(long)]
        oracle_nodes: Option<usize>,
        #[arg(long, default_value_t = 512)]
        grid: usize,
        /// Write the CSV here as well as to stdout.
        #[arg(long)]
        csv: Option<PathBuf>,
        /// Largest accepted |last level - limit|.
        #[arg(long, default_value_t = 0.05)]
        tol: f64,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::KernelMismatch { .. }
            | Error::NotPositiveSemidefinite { .. }
            | Error::TraceMismatch { .. }
            | Error::NoConvergence { .. } => EXIT_VERIFY,
            _ => EXIT_USAGE,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::usage(e.to_string())
    }
}

type Outcome = Result<i32, Failure>;

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK {
                out.write_all(text.as_bytes())
            } else {
                err.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: Command, out: &mut dyn Write, err: &mut dyn Write) -> Outcome {
    match cmd {
        Command::Stats { file } => stats(&read_graph(&file)?, out),
        Command::Sdf { file, csv } => sdf_cmd(&read_graph(&file)?, csv, out),
        Command::BoundCheck {
            file,
            grid,
            csv,
            random,
            seed,
        } => match (file, random) {
            (Some(file), None) => bound_check(&read_graph(&file)?, grid, csv.as_deref(), out),
            (None, Some(count)) => bound_check_random(count, seed, grid, out),
            _ => Err(Failure::usage("give either a file or --random")),
        },
        Command::SplitTree { file, budget } => split(&read_graph(&file)?, budget, out),
        Command::SpanningTrees { file } => {
            writeln!(out, "{}", spanning_tree_count(&read_graph(&file)?)?)?;
            Ok(EXIT_OK)
        }
        Command::Tower {
            file,
            moduli,
            oracle_nodes,
            grid,
            csv,
            tol,
        } => tower(
            &file,
            &moduli,
            oracle_nodes,
            grid,
            csv.as_deref(),
            tol,
            out,
            err,
        ),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    std::fs::read_to_string(path).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<MultiGraph, Failure> {
    parse_graph(&read_text(path)?).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn stats(g: &MultiGraph, out: &mut dyn Write) -> Outcome {
    let s = g.stats();
    writeln!(out, "vertex_count={}", s.vertex_count)?;
    writeln!(out, "edge_count={}", s.edge_count)?;
    writeln!(out, "max_degree={}", s.max_degree)?;
    writeln!(out, "volume={}", s.volume)?;
    let diameter = match s.diameter.finite() {
        Some(d) => d.to_string(),
        None => "inf".to_string(),
    };
    writeln!(out, "diameter={diameter}")?;
    writeln!(out, "b0={}", s.b0)?;
    writeln!(out, "b1={}", s.b1)?;
    let degrees: Vec<String> = s.degree_per_vertex.iter().map(usize::to_string).collect();
    writeln!(out, "degree_per_vertex={}", degrees.join(","))?;
    Ok(EXIT_OK)
}

fn sdf_cmd(g: &MultiGraph, csv: bool, out: &mut dyn Write) -> Outcome {
    let f = sdf(g)?;
    if csv {
        writeln!(out, "lambda,value")?;
        writeln!(out, "0,{}", f.at_zero())?;
        for (j, v) in f.jump_points().iter().zip(&f.values()[1..]) {
            writeln!(out, "{},{}", fmt_g15(*j), v)?;
        }
    } else {
        writeln!(out, "F(0) = {}", f.at_zero())?;
        for (j, v) in f.jump_points().iter().zip(&f.values()[1..]) {
            writeln!(out, "F = {v} from {}", fmt_g15(*j))?;
        }
    }
    Ok(EXIT_OK)
}

fn bound_check(g: &MultiGraph, grid: usize, csv: Option<&Path>, out: &mut dyn Write) -> Outcome {
    let report = verify_main_bound(g, grid)?;
    if let Some(path) = csv {
        std::fs::write(path, report.to_csv())?;
    }
    writeln!(
        out,
        "edges={} max_degree={} connected={} points={} violations={}",
        report.edge_count,
        report.max_degree,
        report.connected,
        report.lambda_grid.len(),
        report.violations.len()
    )?;
    for v in &report.violations {
        writeln!(
            out,
            "violation lambda={} gap={} bound={} ({:?})",
            fmt_g15(v.lambda),
            v.gap,
            fmt_g15(v.bound),
            v.assertion
        )?;
    }
    Ok(if report.is_ok() { EXIT_OK } else { EXIT_VERIFY })
}

fn bound_check_random(count: usize, seed: u64, grid: usize, out: &mut dyn Write) -> Outcome {
    let mut rng = XorShift64Star::new(seed);
    let mut failed = 0;
    for i in 0..count {
        let g = random_connected_multigraph(&mut rng, RANDOM_MAX_VERTICES, RANDOM_MAX_EDGES);
        let report = verify_main_bound(&g, grid)?;
        if !report.is_ok() {
            failed += 1;
            writeln!(out, "graph {i}: {} violations", report.violations.len())?;
            out.write_all(sdfgraph::format::write_graph(&g).as_bytes())?;
        }
    }
    writeln!(out, "seed={seed} graphs={count} failed={failed}")?;
    Ok(if failed == 0 { EXIT_OK } else { EXIT_VERIFY })
}

fn split(g: &MultiGraph, budget: f64, out: &mut dyn Write) -> Outcome {
    let s = split_tree(g, budget)?;
    let list = |edges: &[usize]| edges.iter().map(|e| format!(" {e}")).collect::<String>();
    writeln!(out, "removed:{}", list(&s.removed_edges))?;
    for (i, c) in s.components.iter().enumerate() {
        writeln!(out, "piece {i}:{}", list(c))?;
    }
    Ok(EXIT_OK)
}

#[allow(clippy::too_many_arguments)]
fn tower(
    file: &Path,
    moduli: &[String],
    oracle_nodes: Option<usize>,
    grid: usize,
    csv: Option<&Path>,
    tol: f64,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Outcome {
    let vg = parse_voltage_graph(&read_text(file)?)
        .map_err(|e| Failure::usage(format!("{}: {e}", file.display())))?;
    let seq = moduli
        .iter()
        .map(|m| {
            parse_moduli(m).map_err(|e| Failure::usage(format!("--moduli {m}: {}", e.message)))
        })
        .collect::<Result<Vec<_>, _>>()?;
    let nodes = oracle_nodes.unwrap_or(if vg.rank() == 1 { 4096 } else { 512 });
    if nodes == 0 {
        return Err(Failure::usage("--oracle-nodes must be positive"));
    }
    let report = tower_report(&vg, &seq, grid, nodes)?;
    let text = report.to_csv();
    if let Some(path) = csv {
        std::fs::write(path, &text)?;
    }
    out.write_all(text.as_bytes())?;

    let mut code = EXIT_OK;
    let violations = verify_uniform_estimate(&report);
    if !violations.is_empty() {
        writeln!(err, "uniform estimate fails at {} points", violations.len())?;
        code = EXIT_VERIFY;
    }
    let last = report.last_error().unwrap_or(0.0);
    if last.is_nan() || last >= tol {
        writeln!(
            err,
            "last level is {} from the limit, above {}",
            fmt_g15(last),
            fmt_g15(tol)
        )?;
        code = EXIT_VERIFY;
    }
    Ok(code)
}
