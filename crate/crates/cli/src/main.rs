//! `primtop`: primitive ideal spaces of graph algebras from JSON inputs.

mod action;
mod graph;
mod input;
mod kgraph;
mod output;
mod sgds;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Result;
use clap::{Parser, Subcommand};

use input::{parse_eps, ParseError};
use output::{Format, Output};

#[derive(Parser)]
#[command(name = "primtop", version, about = "Primitive ideal spaces of graph algebras")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value = "json")]
    format: Format,
    /// Write the result here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Directed graphs.
    #[command(subcommand)]
    Graph(GraphCmd),
    /// Higher-rank graphs.
    #[command(subcommand)]
    Kgraph(KgraphCmd),
    /// Self-maps of finite discrete spaces.
    #[command(subcommand)]
    Sgds(SgdsCmd),
    /// Finite group actions.
    #[command(subcommand)]
    Action(ActionCmd),
}

#[derive(Subcommand)]
enum GraphCmd {
    /// Maximal tails with their gamma and least-vertex data.
    Tails { input: PathBuf },
    /// The primitive ideal space and its specialization order.
    Prim { input: PathBuf },
    /// Whether the first point lies in the closure of the second.
    Specializes {
        input: PathBuf,
        p1: String,
        p2: String,
        /// Depth of the boundary-path simulation.
        #[arg(long, default_value_t = 8)]
        depth: usize,
    },
    /// Closure of a set of points.
    Closure {
        input: PathBuf,
        points: Vec<String>,
        /// JSON file with further points and fibre subsets.
        #[arg(long)]
        seeds: Option<PathBuf>,
    },
    /// Hereditary saturated vertex sets.
    Ideals { input: PathBuf },
}

#[derive(Subcommand)]
enum KgraphCmd {
    /// Check the factorization property.
    Validate { input: PathBuf },
    /// Maximal tails.
    Tails { input: PathBuf },
    /// Periodicity group of each maximal tail.
    Per {
        input: PathBuf,
        #[arg(long)]
        tail: Option<String>,
        /// Degree bound, one value or one per colour.
        #[arg(long, default_value = "3")]
        bound: String,
    },
    /// The periodic core of each maximal tail.
    Mper {
        input: PathBuf,
        #[arg(long)]
        tail: Option<String>,
        #[arg(long, default_value = "3")]
        bound: String,
    },
    /// Components of the primitive ideal space.
    Prim {
        input: PathBuf,
        #[arg(long, default_value = "3")]
        bound: String,
    },
    /// Check convergence of a finite sequence of points.
    Converges {
        input: PathBuf,
        params: PathBuf,
        #[arg(long, default_value = "1/16")]
        eps: String,
        #[arg(long, default_value = "3")]
        bound: String,
    },
    /// Whether the first point lies in the closure of the second.
    Specializes {
        input: PathBuf,
        p1: String,
        p2: String,
        #[arg(long, default_value = "3")]
        bound: String,
    },
    /// Check a candidate D-set up to a path-length horizon.
    Dset {
        input: PathBuf,
        dset: PathBuf,
        #[arg(long, default_value = "4")]
        horizon: String,
    },
}

#[derive(Subcommand)]
enum SgdsCmd {
    /// Period and preperiod of every point.
    Classify { input: PathBuf },
    /// The primitive ideal space.
    Prim { input: PathBuf },
    /// Check a family of fibre subsets.
    ValidateY { input: PathBuf, y: PathBuf },
}

#[derive(Subcommand)]
enum ActionCmd {
    /// Stabilizer of every point.
    Stab { input: PathBuf },
    /// Points of the dual groupoid.
    Delta { input: PathBuf },
    /// Orbits and quasi-orbits.
    Orbits { input: PathBuf },
}

fn dispatch(cmd: &Command) -> Result<Output> {
    match cmd {
        Command::Graph(c) => match c {
            GraphCmd::Tails { input } => graph::tails(input),
            GraphCmd::Prim { input } => graph::prim(input),
            GraphCmd::Specializes { input, p1, p2, depth } => graph::specializes_cmd(input, p1, p2, *depth),
            GraphCmd::Closure { input, points, seeds } => graph::closure_cmd(input, points, seeds.as_deref()),
            GraphCmd::Ideals { input } => graph::ideals(input),
        },
        Command::Kgraph(c) => match c {
            KgraphCmd::Validate { input } => kgraph::validate(input),
            KgraphCmd::Tails { input } => kgraph::tails(input),
            KgraphCmd::Per { input, tail, bound } => kgraph::per(input, tail.as_deref(), bound),
            KgraphCmd::Mper { input, tail, bound } => kgraph::mper(input, tail.as_deref(), bound),
            KgraphCmd::Prim { input, bound } => kgraph::prim(input, bound),
            KgraphCmd::Converges { input, params, eps, bound } => {
                kgraph::converges(input, params, parse_eps(eps)?, bound)
            }
            KgraphCmd::Specializes { input, p1, p2, bound } => kgraph::specializes(input, p1, p2, bound),
            KgraphCmd::Dset { input, dset, horizon } => kgraph::dset(input, dset, horizon),
        },
        Command::Sgds(c) => match c {
            SgdsCmd::Classify { input } => sgds::classify_cmd(input),
            SgdsCmd::Prim { input } => sgds::prim(input),
            SgdsCmd::ValidateY { input, y } => sgds::validate_y_cmd(input, y),
        },
        Command::Action(c) => match c {
            ActionCmd::Stab { input } => action::stab(input),
            ActionCmd::Delta { input } => action::delta_cmd(input),
            ActionCmd::Orbits { input } => action::orbits(input),
        },
    }
}

fn render(out: &Output, format: Format) -> Result<String> {
    Ok(match format {
        Format::Json => format!("{}\n", serde_json::to_string_pretty(&out.json)?),
        Format::Text => out.text.clone(),
        Format::Dot => match &out.dot {
            Some(d) => d.clone(),
            None => return Err(input::parse_error("this command has no DOT output")),
        },
    })
}

fn write(body: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => std::fs::write(p, body)?,
        None => std::io::stdout().lock().write_all(body.as_bytes())?,
    }
    Ok(())
}

fn init_threads() -> Result<()> {
    if let Ok(v) = std::env::var("PRIMTOP_THREADS") {
        let n: usize = v.parse().map_err(|_| input::parse_error(format!("PRIMTOP_THREADS={v:?} is not a count")))?;
        rayon::ThreadPoolBuilder::new().num_threads(n).build_global()?;
    }
    Ok(())
}

fn run(cli: &Cli) -> Result<bool> {
    init_threads()?;
    let out = dispatch(&cli.command)?;
    write(&render(&out, cli.format)?, cli.out.as_deref())?;
    Ok(out.ok)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            if e.is::<ParseError>() {
                ExitCode::from(2)
            } else {
                ExitCode::from(1)
            }
        }
    }
}
