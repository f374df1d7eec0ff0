mod bench;
mod report;
mod solve;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use tcand::redblue::{looks_like_rbsc, parse_rbsc};
use tcand::rounding::Graph;
use tcand::{parse_instance, write_instance, AttrSet, Error, Instance, RandomParams, RbscInstance};

use report::{emit, ClosureReport};

#[derive(Parser)]
#[command(
    name = "tcand",
    version,
    about = "Smallest attribute sets deriving a target under functional dependencies"
)]
struct Cli {
    /// Human-readable output instead of JSON.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Closure or bounded closure of a set of attributes.
    Closure {
        file: PathBuf,
        /// Comma-separated attribute names.
        #[arg(long, value_delimiter = ',', default_value = "")]
        attrs: Vec<String>,
        /// Stop after this many rounds of derivation.
        #[arg(long)]
        rounds: Option<usize>,
    },
    /// Solve a TCAND or Red-Blue Set Cover file.
    Solve {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Mode::Exact)]
        mode: Mode,
        /// First seed for lp-rand; later attempts use the following seeds.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Oversampling constant for lp-rand.
        #[arg(long, default_value_t = 2.0)]
        c: f64,
        /// Run every applicable mode and compare against the exact optimum.
        #[arg(long)]
        compare: bool,
    },
    /// Write a generated instance in the text format.
    Gen {
        #[command(subcommand)]
        kind: GenKind,
        /// Output file; stdout when absent.
        #[arg(long, global = true)]
        out: Option<PathBuf>,
    },
    /// Timings and approximation ratios over a built-in suite.
    Bench {
        #[arg(value_enum)]
        suite: bench::Suite,
        /// Timing samples per instance and mode.
        #[arg(long, default_value_t = 1)]
        repeat: usize,
        /// Also write the JSON report to this file.
        #[arg(long)]
        json: Option<PathBuf>,
        /// Run instances one after another.
        #[arg(long)]
        sequential: bool,
    },
}

#[derive(Subcommand)]
enum GenKind {
    /// Layered integrality-gap instance.
    Gap {
        #[arg(long, default_value_t = 5)]
        g: usize,
        #[arg(long, default_value_t = 1)]
        rounds: usize,
    },
    /// Vertex cover as one-round TCAND. The edge list has one `u v` pair of
    /// vertex numbers per line.
    Vc {
        #[arg(long)]
        edges: PathBuf,
    },
    /// Random instance.
    Random {
        #[arg(long, default_value_t = 10)]
        n: usize,
        #[arg(long, default_value_t = 15)]
        m: usize,
        #[arg(long, default_value_t = 2)]
        max_lhs: usize,
        #[arg(long, default_value_t = 0.3)]
        target_fraction: f64,
        /// Defaults to the number of attributes.
        #[arg(long)]
        rounds: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Mode {
    Exact,
    Simple,
    LpDet,
    LpRand,
    RbscGreedy,
}

impl Mode {
    pub const ALL: [Mode; 5] = [
        Mode::Exact,
        Mode::Simple,
        Mode::LpDet,
        Mode::LpRand,
        Mode::RbscGreedy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Mode::Exact => "exact",
            Mode::Simple => "simple",
            Mode::LpDet => "lp-det",
            Mode::LpRand => "lp-rand",
            Mode::RbscGreedy => "rbsc-greedy",
        }
    }
}

/// A failure with its exit status.
#[derive(Debug)]
pub struct Failure {
    pub code: u8,
    pub message: String,
}

impl Failure {
    pub fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

pub const EXIT_PARSE: u8 = 2;
pub const EXIT_SEMANTIC: u8 = 3;
pub const EXIT_INFEASIBLE: u8 = 4;
pub const EXIT_INTERNAL: u8 = 5;

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::Syntax { .. } | Error::UnknownAttribute { .. } => EXIT_PARSE,
            Error::Infeasible { .. } | Error::Uncoverable(_) | Error::LpInfeasible => {
                EXIT_INFEASIBLE
            }
            Error::Internal(_) | Error::LpUnbounded => EXIT_INTERNAL,
            _ => EXIT_SEMANTIC,
        };
        Failure::new(code, e.to_string())
    }
}

pub enum Input {
    Tcand(Instance),
    Rbsc(RbscInstance),
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path)
        .map_err(|e| Failure::new(EXIT_PARSE, format!("{}: {e}", path.display())))
}

fn load(path: &Path) -> Result<Input, Failure> {
    let text = read(path)?;
    let at = |e: Error| {
        let mut f = Failure::from(e);
        f.message = format!("{}: {}", path.display(), f.message);
        f
    };
    if looks_like_rbsc(&text) {
        parse_rbsc(&text).map(Input::Rbsc).map_err(at)
    } else {
        parse_instance(&text).map(Input::Tcand).map_err(at)
    }
}

fn closure(
    file: &Path,
    attrs: &[String],
    rounds: Option<usize>,
    pretty: bool,
) -> Result<(), Failure> {
    let Input::Tcand(inst) = load(file)? else {
        return Err(Failure::new(
            EXIT_SEMANTIC,
            "closure needs a dependency file, not Red-Blue Set Cover",
        ));
    };
    let mut x = AttrSet::new();
    for name in attrs.iter().filter(|a| !a.is_empty()) {
        let a = inst
            .symbols()
            .get(name)
            .ok_or_else(|| Failure::new(EXIT_SEMANTIC, format!("unknown attribute `{name}`")))?;
        x.insert(a.0);
    }
    let closed = match rounds {
        Some(d) => inst.fds().bounded_closure(&x, d),
        None => inst.fds().closure(&x),
    };
    emit(
        &ClosureReport {
            schema_version: report::SCHEMA_VERSION,
            command: "closure",
            input: inst.names_of(&x),
            rounds,
            closure: inst.names_of(&closed),
        },
        pretty,
    )
}

fn parse_edges(text: &str) -> Result<Graph, Failure> {
    let mut edges = Vec::new();
    for (k, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let bad = || {
            Failure::new(
                EXIT_PARSE,
                format!("line {}: expected two vertex numbers", k + 1),
            )
        };
        let ends: Vec<usize> = line
            .split_whitespace()
            .map(str::parse)
            .collect::<Result<_, _>>()
            .map_err(|_| bad())?;
        let [u, v] = ends[..] else { return Err(bad()) };
        edges.push((u, v));
    }
    let n = edges.iter().map(|&(u, v)| u.max(v) + 1).max().unwrap_or(0);
    Ok(Graph::from_edges(n, edges))
}

fn generate(kind: &GenKind, out: Option<&Path>) -> Result<(), Failure> {
    let inst = match kind {
        GenKind::Gap { g, rounds } => tcand::gen_gap_instance(*g, *rounds)?,
        GenKind::Vc { edges } => tcand::gen_vc_instance(&parse_edges(&read(edges)?)?)?,
        GenKind::Random {
            n,
            m,
            max_lhs,
            target_fraction,
            rounds,
            seed,
        } => tcand::gen_random_instance(&RandomParams {
            n: *n,
            m: *m,
            max_lhs: *max_lhs,
            target_fraction: *target_fraction,
            rounds: *rounds,
            seed: *seed,
        })?,
    };
    let text = write_instance(&inst);
    match out {
        Some(path) => fs::write(path, text)
            .map_err(|e| Failure::new(EXIT_SEMANTIC, format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Closure {
            file,
            attrs,
            rounds,
        } => closure(&file, &attrs, rounds, cli.pretty),
        Command::Solve {
            file,
            mode,
            seed,
            c,
            compare,
        } => {
            let input = load(&file)?;
            let opts = solve::Options { seed, c };
            if compare {
                emit(&solve::compare(&input, &opts), cli.pretty)
            } else {
                let out = solve::solve(&input, mode, &opts)?;
                let failed = !out.feasible;
                emit(&out, cli.pretty)?;
                if failed {
                    return Err(Failure::new(
                        EXIT_INTERNAL,
                        format!("{} found no feasible solution", mode.name()),
                    ));
                }
                Ok(())
            }
        }
        Command::Gen { kind, out } => generate(&kind, out.as_deref()),
        Command::Bench {
            suite,
            repeat,
            json,
            sequential,
        } => {
            let exec = if sequential {
                tcand::Execution::Sequential
            } else {
                tcand::Execution::Parallel
            };
            let rep = bench::run(suite, repeat.max(1), exec)?;
            if let Some(path) = json {
                let text = serde_json::to_string_pretty(&rep).expect("reports serialize");
                fs::write(&path, text + "\n")
                    .map_err(|e| Failure::new(EXIT_SEMANTIC, format!("{}: {e}", path.display())))?;
            }
            emit(&rep, cli.pretty)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
