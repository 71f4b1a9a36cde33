//! Command-line front end.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_traits::ToPrimitive;
use serde_json::json;

use crate::error::Error;
use crate::growth::growth_constants;
use crate::kernel::{build_kernel_graph, verify_bottleneck, MonotonePath};
use crate::markov::{self, ChainSpec, MixOptions};
use crate::pip::{build_cube_complex, build_pip, ideal_graph};
use crate::transfer::{charpoly, count_paths, count_series, generating_function};

pub const EXIT_OK: i32 = 0;
pub const EXIT_IO: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_DOMAIN: i32 = 3;
pub const EXIT_RESOURCE: i32 = 4;

/// Largest state space the `kernel`, `mix` and `simulate` commands build.
pub const MAX_STATES: usize = 250_000;
/// Largest coral PIP the `pip` command builds.
pub const MAX_PIP_ELEMENTS: usize = 2_000;

#[derive(Parser, Debug)]
#[command(
    name = "stripmix",
    version,
    about = "Monotone paths in a strip: counts, growth, bottlenecks and mixing"
)]
pub struct Cli {
    /// Worker threads (default: all cores).
    #[arg(long, global = true, env = "STRIPMIX_THREADS")]
    pub threads: Option<usize>,
    /// Write to this file instead of stdout.
    #[arg(long, short, global = true)]
    pub output: Option<PathBuf>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
    Dot,
    Text,
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum ChainKind {
    Sym,
    Lazy,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Path counts c_m(0..=n_max).
    Count {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n_max: usize,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Characteristic polynomial, Perron root and asymptotic constants.
    Growth {
        #[arg(long)]
        m: u32,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Reduced generating function of c_m(n).
    Genfun {
        #[arg(long)]
        m: u32,
        /// Series terms to include.
        #[arg(long, default_value_t = 12)]
        terms: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// The transition kernel graph with its bottleneck classes.
    Kernel {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: usize,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
        /// Shorthand for --format dot.
        #[arg(long, conflicts_with_all = ["format", "json"])]
        dot: bool,
        /// Shorthand for --format json.
        #[arg(long, conflicts_with = "format")]
        json: bool,
    },
    /// Mixing report for one of the two chains.
    Mix {
        #[command(flatten)]
        chain: ChainArgs,
        #[arg(long, default_value_t = 0.25)]
        eps: f64,
        /// Last time step of the total-variation curve.
        #[arg(long, default_value_t = 100)]
        tmax: usize,
        /// Also compute the exact conductance (small state spaces only).
        #[arg(long)]
        exact_phi: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Coral PIP: Hasse diagram, ideal count, cube complex.
    Pip {
        #[arg(long)]
        m: u32,
        #[arg(long)]
        n: usize,
        /// Export the cube complex 1-skeleton instead of the Hasse diagram.
        #[arg(long)]
        complex: bool,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Simulate a trajectory of one of the chains.
    Simulate {
        #[command(flatten)]
        chain: ChainArgs,
        /// Start path as a step word, e.g. ENES (default: all E).
        #[arg(long)]
        start: Option<String>,
        #[arg(long)]
        steps: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value = "csv")]
        format: Format,
    },
}

#[derive(Args, Debug)]
pub struct ChainArgs {
    #[arg(long)]
    pub m: u32,
    #[arg(long)]
    pub n: usize,
    #[arg(long, value_enum, default_value = "sym")]
    pub chain: ChainKind,
    /// Move probability of the lazy chain, e.g. 1/2 or 0.5.
    #[arg(long, default_value = "1/2")]
    pub p: String,
}

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Lib(Error),
    Io(std::io::Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidInput(msg) => CliError::Usage(msg),
            other => CliError::Lib(other),
        }
    }
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Lib(Error::TooLarge { .. } | Error::ConvergenceFailure { .. }) => {
                EXIT_RESOURCE
            }
            CliError::Lib(_) => EXIT_DOMAIN,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => write!(f, "usage error: {m}"),
            CliError::Lib(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "i/o error: {e}"),
        }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

fn bad_format(cmd: &str, f: Format) -> CliError {
    CliError::Usage(format!("{cmd} does not support --format {f:?}").to_lowercase())
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

/// The `#` metadata line heading every CSV output.
fn csv_meta(invocation: &str) -> String {
    format!("# stripmix {} {invocation}\n", env!("CARGO_PKG_VERSION"))
}

fn check_states(m: u32, n: usize) -> CliResult<()> {
    let size = count_paths(m, n);
    match size.to_usize() {
        Some(s) if s <= MAX_STATES => Ok(()),
        _ => Err(Error::TooLarge {
            what: format!("paths of length {n} in height {m}"),
            size: size.to_usize().unwrap_or(usize::MAX),
            cap: MAX_STATES,
        }
        .into()),
    }
}

fn chain_spec(args: &ChainArgs) -> CliResult<ChainSpec> {
    match args.chain {
        ChainKind::Sym => Ok(ChainSpec::Symmetric),
        ChainKind::Lazy => Ok(ChainSpec::lazy(markov::parse_rational(&args.p)?)?),
    }
}

/// Runs one parsed command and returns its output text.
pub fn execute(command: &Command, invocation: &str) -> CliResult<String> {
    match command {
        Command::Count { m, n_max, format } => {
            let c = count_series(*m, *n_max);
            match format {
                Format::Json => Ok(pretty(&json!({
                    "m": m,
                    "n_max": n_max,
                    "counts": c.iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                }))),
                Format::Csv => {
                    let mut out = csv_meta(invocation);
                    out.push_str("n,count\n");
                    for (n, v) in c.iter().enumerate() {
                        writeln!(out, "{n},{v}").unwrap();
                    }
                    Ok(out)
                }
                Format::Text => {
                    let parts: Vec<String> = c.iter().map(|v| v.to_string()).collect();
                    Ok(format!("{}\n", parts.join(",")))
                }
                Format::Dot => Err(bad_format("count", *format)),
            }
        }
        Command::Growth { m, tol, format } => {
            let g = growth_constants(*m, *tol)?;
            let a = charpoly(*m);
            match format {
                Format::Json => Ok(pretty(&json!({
                    "m": m,
                    "charpoly": a,
                    "charpoly_text": a.to_string(),
                    "r": g.r,
                    "q": g.q,
                    "c": g.c,
                    "tol": g.tol,
                    "bracket": [g.bracket.0.to_string(), g.bracket.1.to_string()],
                }))),
                Format::Text => Ok(format!(
                    "a_{m}(x) = {a}\nr = {:.12}\nq = {:.12}\nC = {:.12}\n",
                    g.r,
                    g.q.unwrap(),
                    g.c.unwrap()
                )),
                _ => Err(bad_format("growth", *format)),
            }
        }
        Command::Genfun { m, terms, format } => {
            let gf = generating_function(*m);
            match format {
                Format::Json => Ok(pretty(&json!({
                    "m": m,
                    "numerator": gf.numerator,
                    "denominator": gf.denominator,
                    "text": gf.to_string(),
                    "series": gf.series(*terms).iter().map(|v| v.to_string()).collect::<Vec<_>>(),
                }))),
                Format::Text => Ok(format!("{gf}\n")),
                _ => Err(bad_format("genfun", *format)),
            }
        }
        Command::Kernel {
            m,
            n,
            format,
            dot,
            json,
        } => {
            let format = if *dot {
                Format::Dot
            } else if *json {
                Format::Json
            } else {
                *format
            };
            check_states(*m, *n)?;
            let k = build_kernel_graph(*m, *n);
            let report = match verify_bottleneck(&k) {
                Ok(r) => Some(r),
                Err(Error::TooSmall(_)) => None,
                Err(e) => return Err(e.into()),
            };
            let summary = report.as_ref().map(|r| {
                format!(
                    "sep/A/B = {}/{}/{}",
                    r.sep_size, r.side_a_size, r.side_b_size
                )
            });
            match format {
                Format::Json => {
                    let mut v = k.to_json();
                    v["bottleneck"] = serde_json::to_value(&report).unwrap();
                    Ok(pretty(&v))
                }
                Format::Dot => {
                    let mut out = String::new();
                    if let Some(s) = &summary {
                        writeln!(out, "// {s}").unwrap();
                    }
                    out.push_str(&k.to_dot());
                    Ok(out)
                }
                Format::Text => {
                    let mut out = String::new();
                    writeln!(
                        out,
                        "{}",
                        summary.unwrap_or_else(
                            || "no bottleneck classes (needs m >= 2, n >= 3)".into()
                        )
                    )
                    .unwrap();
                    for (i, p) in k.vertices.iter().enumerate() {
                        writeln!(out, "{i}\t{p}\t{}\t{}", k.classes[i], k.degree(i)).unwrap();
                    }
                    Ok(out)
                }
                Format::Csv => Err(bad_format("kernel", format)),
            }
        }
        Command::Mix {
            chain,
            eps,
            tmax,
            exact_phi,
            format,
        } => {
            if !matches!(format, Format::Json | Format::Csv) {
                return Err(bad_format("mix", *format));
            }
            let spec = chain_spec(chain)?;
            check_states(chain.m, chain.n)?;
            let k = build_kernel_graph(chain.m, chain.n);
            let opts = MixOptions {
                eps: *eps,
                t_max: *tmax,
                exact_phi: *exact_phi,
            };
            let report = markov::analyze(&k, &spec, &opts)?;
            if *format == Format::Json {
                return Ok(pretty(&serde_json::to_value(&report).unwrap()));
            }
            let mut out = csv_meta(invocation);
            out.push_str("t,d\n");
            for pt in &report.tv_curve {
                writeln!(out, "{},{:e}", pt.t, pt.d).unwrap();
            }
            Ok(out)
        }
        Command::Pip {
            m,
            n,
            complex,
            format,
        } => {
            let pip = build_pip(*m, *n)?;
            if pip.len() > MAX_PIP_ELEMENTS {
                return Err(Error::TooLarge {
                    what: "coral PIP elements".into(),
                    size: pip.len(),
                    cap: MAX_PIP_ELEMENTS,
                }
                .into());
            }
            if *complex {
                check_states(*m, *n)?;
            }
            match format {
                Format::Dot if *complex => Ok(build_cube_complex(&pip.pip).to_dot()),
                Format::Dot => Ok(pip.to_dot()),
                Format::Json => {
                    let elements: Vec<_> = (0..pip.len())
                        .map(|x| {
                            json!({
                                "id": x,
                                "snake": pip.snakes[pip.elements[x].snake].code(),
                                "label": pip.elements[x].label,
                            })
                        })
                        .collect();
                    let ideals = ideal_graph(&pip.pip);
                    Ok(pretty(&json!({
                        "m": m,
                        "n": n,
                        "elements": elements,
                        "covers": pip.pip.covers(),
                        "minimal_inconsistent_pairs": pip.pip.minimal_pairs(),
                        "ideal_count": ideals.len(),
                        "ideal_graph_edges": ideals.graph.edge_count(),
                    })))
                }
                Format::Text => {
                    let ideals = ideal_graph(&pip.pip);
                    let mut out = String::new();
                    writeln!(out, "elements: {}", pip.len()).unwrap();
                    writeln!(
                        out,
                        "minimal inconsistent pairs: {}",
                        pip.pip.minimal_pairs().len()
                    )
                    .unwrap();
                    writeln!(out, "consistent ideals: {}", ideals.len()).unwrap();
                    for x in 0..pip.len() {
                        writeln!(out, "{x}\t{}", pip.element_name(x)).unwrap();
                    }
                    Ok(out)
                }
                Format::Csv => Err(bad_format("pip", *format)),
            }
        }
        Command::Simulate {
            chain,
            start,
            steps,
            seed,
            format,
        } => {
            let spec = chain_spec(chain)?;
            check_states(chain.m, chain.n)?;
            let k = build_kernel_graph(chain.m, chain.n);
            let start_idx = match start {
                None => k.root(),
                Some(text) => {
                    let path = MonotonePath::parse(chain.m, text)?;
                    if path.len() != chain.n {
                        return Err(CliError::Usage(format!(
                            "start path has length {}, expected {}",
                            path.len(),
                            chain.n
                        )));
                    }
                    k.index_of(&path).expect("valid paths are vertices")
                }
            };
            let traj = markov::simulate(&k, &spec, start_idx, *steps, *seed)?;
            match format {
                Format::Csv => {
                    let mut out = csv_meta(invocation);
                    out.push_str("t,state,path\n");
                    for (t, &x) in traj.iter().enumerate() {
                        writeln!(out, "{t},{x},{}", k.vertices[x]).unwrap();
                    }
                    Ok(out)
                }
                Format::Json => Ok(pretty(&json!({
                    "m": chain.m,
                    "n": chain.n,
                    "chain": spec.name(),
                    "seed": seed,
                    "trajectory": traj,
                    "paths": traj.iter().map(|&x| k.vertices[x].to_string()).collect::<Vec<_>>(),
                }))),
                _ => Err(bad_format("simulate", *format)),
            }
        }
    }
}

/// Parses arguments, runs the command and writes its output; returns the
/// process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => {
                    EXIT_OK
                }
                _ => EXIT_USAGE,
            };
        }
    };
    let invocation = args
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect::<Vec<_>>()
        .join(" ");
    let result = with_threads(cli.threads, || execute(&cli.command, &invocation))
        .and_then(|text| write_output(cli.output.as_ref(), &text));
    match result {
        Ok(()) => EXIT_OK,
        Err(e) => {
            eprintln!("stripmix: {e}");
            e.exit_code()
        }
    }
}

fn with_threads<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> CliResult<T> + Send,
) -> CliResult<T> {
    match threads {
        None | Some(0) => f(),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| CliError::Usage(format!("cannot start {k} threads: {e}")))?
            .install(f),
    }
}

fn write_output(path: Option<&PathBuf>, text: &str) -> CliResult<()> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(CliError::Io),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(text.as_bytes()).map_err(CliError::Io)
        }
    }
}
