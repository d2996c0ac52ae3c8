use std::fs::File;
use std::io::{self, BufReader, BufWriter, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};
use selfdual::budget::DEFAULT_BUDGET_MB;
use selfdual::counting::compute_lambda;
use selfdual::intervals::IntervalCounter;
use selfdual::selfcheck::selfcheck;
use selfdual::{classify, store, Budget, Error, LayerStack, Mbf, Method};

const EXIT_VERIFY: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

/// Count self-dual monotone Boolean functions.
#[derive(Debug, Parser)]
#[command(name = "selfdual", version)]
struct Cli {
    #[command(flatten)]
    run: RunConfig,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct RunConfig {
    /// Worker threads (defaults to hardware parallelism).
    #[arg(long, global = true, env = "SELFDUAL_THREADS", value_parser = clap::value_parser!(u64).range(1..))]
    threads: Option<u64>,

    /// Memory cap for layers, adjacency and interval tables.
    #[arg(long = "budget-mb", global = true, default_value_t = DEFAULT_BUDGET_MB, value_parser = clap::value_parser!(u64).range(1..))]
    budget_mb: u64,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Over {
    Classes,
    Layer,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Write the layer D_n.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write the orbit classes of D_n under variable permutations.
    Classes {
        #[arg(long)]
        n: usize,
        /// Layer file to classify instead of generating D_n.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Write re(x, top) for every class representative or layer element.
    Retable {
        #[arg(long)]
        n: usize,
        /// Classes file to use instead of classifying D_n.
        #[arg(long = "in")]
        input: Option<PathBuf>,
        #[arg(long, value_enum, default_value = "classes")]
        over: Over,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Compute lambda_target and print a result record.
    Lambda {
        #[arg(long)]
        target: usize,
        #[arg(long)]
        method: Method,
        /// Skip the comparison against the known values.
        #[arg(long = "no-verify")]
        no_verify: bool,
    },
    /// Run the invariant suites.
    Selfcheck {
        #[arg(long, default_value_t = 5)]
        n: usize,
    },
}

/// Opens the destination before any computation starts.
fn open_out(path: &Option<PathBuf>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(
            File::create(p).with_context(|| format!("cannot write {}", p.display()))?,
        )),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn open_in(path: &PathBuf) -> anyhow::Result<BufReader<File>> {
    Ok(BufReader::new(File::open(path).with_context(|| {
        format!("cannot read {}", path.display())
    })?))
}

fn run(cli: Cli) -> anyhow::Result<u8> {
    let budget = Budget::from_mb(cli.run.budget_mb);
    match cli.command {
        Command::Gen { n, out } => {
            let mut w = open_out(&out)?;
            let stack = LayerStack::generate_within(n, &budget)?;
            store::write_layer(&mut w, stack.top())?;
        }
        Command::Classes { n, input, out } => {
            let layer = match &input {
                Some(p) => store::read_layer(open_in(p)?)?,
                None => LayerStack::generate_within(n, &budget)?
                    .top()
                    .as_ref()
                    .clone(),
            };
            if layer.n() != n {
                anyhow::bail!(Error::WidthMismatch {
                    left: n,
                    right: layer.n()
                });
            }
            let mut w = open_out(&out)?;
            let classes = classify(&layer)?;
            store::write_classes(&mut w, n, &classes)?;
        }
        Command::Retable {
            n,
            input,
            over,
            out,
        } => {
            let elements: Vec<Mbf> = match (over, &input) {
                (Over::Classes, Some(p)) => {
                    let (m, classes) = store::read_classes(open_in(p)?)?;
                    if m != n {
                        anyhow::bail!(Error::WidthMismatch { left: n, right: m });
                    }
                    classes.into_iter().map(|c| c.representative).collect()
                }
                (Over::Classes, None) => {
                    let stack = LayerStack::generate_within(n, &budget)?;
                    classify(stack.top())?
                        .into_iter()
                        .map(|c| c.representative)
                        .collect()
                }
                (Over::Layer, _) => LayerStack::generate_within(n, &budget)?
                    .top()
                    .iter()
                    .collect(),
            };
            let mut w = open_out(&out)?;
            let counter = IntervalCounter::within(n, &budget, usize::MAX)?;
            store::write_upward(&mut w, &counter.upward_table(&elements)?)?;
        }
        Command::Lambda {
            target,
            method,
            no_verify,
        } => {
            let result = compute_lambda(target, method, &budget)?;
            println!("{}", result.record());
            if !no_verify {
                if let Err(e) = result.verify() {
                    eprintln!("error: {e}");
                    return Ok(EXIT_VERIFY);
                }
            }
        }
        Command::Selfcheck { n } => {
            let reports = selfcheck(n);
            for r in &reports {
                println!("{}", r.line());
            }
            if reports.iter().any(|r| !r.passed) {
                return Ok(EXIT_VERIFY);
            }
        }
    }
    Ok(0)
}

fn exit_code(err: &anyhow::Error) -> u8 {
    match err.downcast_ref::<Error>() {
        Some(Error::Budget { .. }) => EXIT_BUDGET,
        Some(Error::Verification { .. }) => EXIT_VERIFY,
        _ => EXIT_USAGE,
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let mut pool = rayon::ThreadPoolBuilder::new();
    if let Some(t) = cli.run.threads {
        pool = pool.num_threads(t as usize);
    }
    let pool = match pool.build() {
        Ok(p) => p,
        Err(e) => {
            eprintln!("error: cannot start worker pool: {e}");
            return ExitCode::from(EXIT_USAGE);
        }
    };
    match pool.install(|| run(cli)) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
