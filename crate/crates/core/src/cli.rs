//! The `tropelim` command line.
//!
//! stdout carries exactly one document per run; diagnostics go to stderr.
//! Exit codes: 0 attained, 1 invalid input or usage, 2 infimum not attained,
//! 3 capacity exceeded, 4 oracle disagreement under `--compare`.

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value as Json};

use crate::cheb::{self, ChebDataset};
use crate::eliminate::{
    format_value, solution_document, solve, stats_document, Pick, Solved, SolverOptions, Status,
    DEFAULT_MAX_MONOMIALS,
};
use crate::error::{Error, Result};
use crate::oracle::{grid_oracle, vertex_oracle, VertexCaps, DEFAULT_GRID_CAP};
use crate::polynomial::{parse_problem, AnyProblem, Problem};
use crate::prune::PruneLevel;
use crate::rational::Rational;
use crate::semifield::{Carrier, Semifield, Value};

pub const ENV_MAX_MONOMIALS: &str = "TROPELIM_MAX_MONOMIALS";

pub const EXIT_OK: i32 = 0;
pub const EXIT_INVALID: i32 = 1;
pub const EXIT_NOT_ATTAINED: i32 = 2;
pub const EXIT_CAPACITY: i32 = 3;
pub const EXIT_MISMATCH: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "tropelim",
    version,
    about = "Exact minimization of tropical polynomials over boxes"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Minimize a problem given as JSON.
    Solve {
        file: PathBuf,
        #[command(flatten)]
        solver: SolverArgs,
        /// Solve in floating point and print 17 significant digits.
        #[arg(long)]
        float: bool,
    },
    /// Chebyshev (minimax) fit of CSV data: N columns of X, then Y.
    Cheb {
        csv: PathBuf,
        /// Comma-separated lower bounds on θ.
        #[arg(
            long,
            allow_hyphen_values = true,
            requires = "upper",
            conflicts_with = "bounds"
        )]
        lower: Option<String>,
        /// Comma-separated upper bounds on θ.
        #[arg(
            long,
            allow_hyphen_values = true,
            requires = "lower",
            conflicts_with = "bounds"
        )]
        upper: Option<String>,
        /// JSON file with "lower" and "upper" arrays.
        #[arg(long)]
        bounds: Option<PathBuf>,
        #[command(flatten)]
        solver: SolverArgs,
    },
    /// Minimize with a brute-force reference method.
    Oracle {
        file: PathBuf,
        #[arg(long, value_enum)]
        kind: OracleKind,
        /// Lattice points per axis for the grid oracle.
        #[arg(long, default_value_t = 5)]
        resolution: usize,
        /// Also run the solver and report whether the two agree.
        #[arg(long)]
        compare: bool,
        #[arg(long)]
        threads: Option<usize>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OracleKind {
    Grid,
    Vertex,
}

#[derive(Debug, Args)]
struct SolverArgs {
    #[arg(long, default_value = "dominance")]
    prune: PruneLevel,
    #[arg(long, default_value = "lower")]
    pick: Pick,
    /// Cap on nonzero rows per stage [default: $TROPELIM_MAX_MONOMIALS or 5000000].
    #[arg(long)]
    max_monomials: Option<usize>,
    /// Include per-stage counts, prune reports and timings.
    #[arg(long)]
    stats: bool,
    /// Print a human-readable table instead of JSON.
    #[arg(long)]
    pretty: bool,
    /// Worker threads [default: all cores].
    #[arg(long)]
    threads: Option<usize>,
}

impl SolverArgs {
    fn options(&self) -> Result<SolverOptions> {
        let max_monomials = match self.max_monomials {
            Some(n) => n,
            None => cap_from_env()?,
        };
        Ok(SolverOptions {
            prune: self.prune,
            pick: self.pick,
            max_monomials,
            retain_trace: false,
        })
    }
}

fn cap_from_env() -> Result<usize> {
    match std::env::var(ENV_MAX_MONOMIALS) {
        Ok(s) => s.trim().parse().map_err(|_| {
            Error::validation(
                ENV_MAX_MONOMIALS,
                format!("expected a positive integer, found '{s}'"),
            )
        }),
        Err(_) => Ok(DEFAULT_MAX_MONOMIALS),
    }
}

/// What a command produced: the stdout document and the exit code.
struct Outcome {
    text: String,
    code: i32,
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Capacity { .. } => EXIT_CAPACITY,
        Error::NotAttained(_) => EXIT_NOT_ATTAINED,
        _ => EXIT_INVALID,
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                EXIT_INVALID
            } else {
                EXIT_OK
            };
            let rendered = e.render().to_string();
            if e.use_stderr() {
                let _ = err.write_all(rendered.as_bytes());
            } else {
                let _ = out.write_all(rendered.as_bytes());
            }
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(outcome) => {
            if out.write_all(outcome.text.as_bytes()).is_err() {
                return EXIT_INVALID;
            }
            outcome.code
        }
        Err(e) => {
            let _ = writeln!(err, "tropelim: {e}");
            exit_code(&e)
        }
    }
}

fn with_threads<T: Send>(
    threads: Option<usize>,
    f: impl FnOnce() -> Result<T> + Send,
) -> Result<T> {
    match threads {
        None => f(),
        Some(0) => Err(Error::validation("threads", "must be at least 1")),
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k)
            .build()
            .map_err(|e| Error::Internal(format!("thread pool: {e}")))?
            .install(f),
    }
}

fn read(path: &Path) -> Result<Vec<u8>> {
    std::fs::read(path).map_err(|e| Error::Io(format!("{}: {e}", path.display())))
}

fn dispatch(command: Command) -> Result<Outcome> {
    match command {
        Command::Solve {
            file,
            solver,
            float,
        } => {
            let prob = parse_problem(&read(&file)?)?;
            let options = solver.options()?;
            with_threads(solver.threads, || match prob {
                AnyProblem::Exact(p) if !float => solve_outcome(&p, &options, &solver),
                AnyProblem::Exact(p) => solve_outcome(&p.to_float(), &options, &solver),
                AnyProblem::Float(p) => solve_outcome(&p, &options, &solver),
            })
        }
        Command::Cheb {
            csv,
            lower,
            upper,
            bounds,
            solver,
        } => {
            let (x, y) = cheb::parse_csv(&read(&csv)?)?;
            let (lo, hi) = match (lower, upper, bounds) {
                (Some(l), Some(u), None) => (
                    cheb::parse_list(&l, "lower")?,
                    cheb::parse_list(&u, "upper")?,
                ),
                (None, None, Some(path)) => cheb::parse_bounds_json(&read(&path)?)?,
                _ => {
                    return Err(Error::validation(
                        "bounds",
                        "give either --lower and --upper, or --bounds",
                    ))
                }
            };
            let data = ChebDataset::new(x, y, lo, hi)?;
            let options = solver.options()?;
            with_threads(solver.threads, || cheb_outcome(&data, &options, &solver))
        }
        Command::Oracle {
            file,
            kind,
            resolution,
            compare,
            threads,
        } => {
            let prob = match parse_problem(&read(&file)?)? {
                AnyProblem::Exact(p) => p,
                AnyProblem::Float(_) => {
                    return Err(Error::validation("mode", "oracles run in exact mode only"))
                }
            };
            let options = SolverOptions {
                max_monomials: cap_from_env()?,
                ..SolverOptions::default()
            };
            with_threads(threads, || {
                oracle_outcome(&prob, kind, resolution, compare, &options)
            })
        }
    }
}

fn status_code(status: Status) -> i32 {
    match status {
        Status::Attained => EXIT_OK,
        Status::InfimumNotAttained => EXIT_NOT_ATTAINED,
    }
}

fn solve_outcome<C: Carrier>(
    prob: &Problem<C>,
    options: &SolverOptions,
    args: &SolverArgs,
) -> Result<Outcome> {
    let sf = prob.semifield();
    let solved = solve(prob, options)?;
    let code = status_code(solved.solution.status);
    let text = if args.pretty {
        pretty_solution(&sf, &solved, args.stats)
    } else {
        let mut doc = solution_document(&sf, &solved.solution);
        if args.stats {
            insert(&mut doc, "stats", stats_document(&solved.trace.stats));
        }
        to_json(&doc)
    };
    Ok(Outcome { text, code })
}

fn cheb_outcome(data: &ChebDataset, options: &SolverOptions, args: &SolverArgs) -> Result<Outcome> {
    let (res, solved) = cheb::solve_chebyshev(data, options)?;
    let text = if args.pretty {
        let mut s = String::new();
        s.push_str(&format!("error              {}\n", res.error));
        s.push_str(&format!("max |Xθ − Y|       {}\n", res.max_abs_residual));
        for (j, (t, (lo, hi))) in res.theta.iter().zip(&res.intervals).enumerate() {
            s.push_str(&format!("theta_{:<12} {t}  in [{lo}, {hi}]\n", j + 1));
        }
        if args.stats {
            s.push_str(&pretty_stats(&solved));
        }
        s
    } else {
        let strs = |v: &[Rational]| v.iter().map(|r| r.to_string()).collect::<Vec<_>>();
        let mut doc = json!({
            "status": Status::Attained,
            "observations": data.observations(),
            "parameters": data.parameters(),
            "error": res.error.to_string(),
            "theta": strs(&res.theta),
            "intervals": res
                .intervals
                .iter()
                .map(|(lo, hi)| [lo.to_string(), hi.to_string()])
                .collect::<Vec<_>>(),
            "certificate": {
                "max_abs_residual": res.max_abs_residual.to_string(),
                "matches_error": res.max_abs_residual == res.error,
            },
        });
        if args.stats {
            insert(&mut doc, "stats", stats_document(&solved.trace.stats));
        }
        to_json(&doc)
    };
    Ok(Outcome {
        text,
        code: EXIT_OK,
    })
}

fn oracle_outcome(
    prob: &Problem<Rational>,
    kind: OracleKind,
    resolution: usize,
    compare: bool,
    options: &SolverOptions,
) -> Result<Outcome> {
    let sf = prob.semifield();
    let (name, value) = match kind {
        OracleKind::Grid => ("grid", grid_oracle(prob, resolution, DEFAULT_GRID_CAP)?),
        OracleKind::Vertex => ("vertex", vertex_oracle(prob, VertexCaps::default())?),
    };
    let mut doc = Map::new();
    doc.insert("kind".into(), json!(name));
    if kind == OracleKind::Grid {
        doc.insert("resolution".into(), json!(resolution));
    }
    doc.insert("value".into(), json!(sf.format(&value)));
    let mut code = EXIT_OK;
    if compare {
        let mu = solve(prob, options)?.solution.mu;
        let verdict = if mu == value {
            "EQUAL"
        } else if kind == OracleKind::Grid && sf.lt(&mu, &value) {
            "UPPER-BOUND"
        } else {
            code = EXIT_MISMATCH;
            "MISMATCH"
        };
        doc.insert("solver_mu".into(), json!(sf.format(&mu)));
        doc.insert("verdict".into(), json!(verdict));
    }
    Ok(Outcome {
        text: to_json(&Json::Object(doc)),
        code,
    })
}

fn insert(doc: &mut Json, key: &str, value: Json) {
    if let Json::Object(map) = doc {
        map.insert(key.into(), value);
    }
}

fn to_json(doc: &Json) -> String {
    let mut s = serde_json::to_string_pretty(doc).expect("documents serialize");
    s.push('\n');
    s
}

fn pretty_solution<C: Carrier>(sf: &Semifield<C>, solved: &Solved<C>, stats: bool) -> String {
    let sol = &solved.solution;
    let fmt = |v: &Value<C>| format_value(sf, v);
    let status = match sol.status {
        Status::Attained => "attained",
        Status::InfimumNotAttained => "infimum-not-attained",
    };
    let mut s = format!(
        "status     {status}\nsemifield  {}\nmode       {}\nmu         {}\n",
        sf.id().name(),
        C::MODE.name(),
        fmt(&sol.mu)
    );
    for (j, (x, iv)) in sol.point.iter().zip(&sol.intervals).enumerate() {
        let label = format!("x_{}", j + 1);
        s.push_str(&format!(
            "{label:<10} {}  in [{}, {}]\n",
            fmt(x),
            fmt(&iv.lower),
            fmt(&iv.upper)
        ));
    }
    if stats {
        s.push_str(&pretty_stats(solved));
    }
    s
}

fn pretty_stats<C>(solved: &Solved<C>) -> String {
    let mut s = String::from("\nlevel        raw    nonzero     pruned         ms\n");
    for st in &solved.trace.stats {
        s.push_str(&format!(
            "{:>5} {:>10} {:>10} {:>10} {:>10.1}\n",
            st.level, st.raw_count, st.nonzero_count, st.pruned_count, st.elapsed_ms
        ));
    }
    s
}
