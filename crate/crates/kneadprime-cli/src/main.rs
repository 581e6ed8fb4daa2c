//! Command-line frontend exposing every library operation with reproducible
//! parameterization: each run echoes its full configuration as `#`-prefixed
//! header lines, serializes floats at fixed precision, and therefore produces
//! byte-identical output for identical invocations.

use std::cmp::Ordering;
use std::env;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Result;
use clap::{ArgGroup, Parser, Subcommand};
use kneadprime::{
    check_theme3, check_theorem4, compose_budgeted, constructed_prime_gaps, default_truncation,
    format_float, histogram, itinerary, lyapunov, orbit, parameter_chain_with_budget, prime_gaps,
    prime_word, sieve_primes, sieve_word_with_budget, solve_parameter, solve_superstable,
    topological_entropy, topological_entropy_with_cap, ChainOutcome, GapSequence, SymbolicWord,
    DEFAULT_LAP_BUDGET, DEFAULT_PERIOD_BUDGET,
};

/// Environment variable overriding the composed-word materialization budget.
const BUDGET_ENV: &str = "KNEADPRIME_BUDGET";

/// Symbolic encodings of the prime sieve and the kneading dynamics of the
/// quadratic family: word composition and ordering, parameter recovery, and
/// prime-gap versus chaotic-gap statistics.
#[derive(Parser)]
#[command(name = "kneadprime", version)]
struct Cli {
    /// Write output to PATH instead of standard output.
    #[arg(long, global = true, value_name = "PATH")]
    out: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List the primes up to a limit as CSV.
    Sieve {
        /// Inclusive upper bound of the sieve (at least 2).
        #[arg(long)]
        limit: u64,
    },

    /// Print the periodic word of one prime, or of the first i primes composed.
    #[command(group(ArgGroup::new("source").required(true).args(["prime", "i"])))]
    Encode {
        /// Prime p: its word is R followed by p-1 L symbols, repeated.
        #[arg(long)]
        prime: Option<u64>,

        /// Order i: the pointwise composition of the first i prime words.
        #[arg(long)]
        i: Option<usize>,
    },

    /// Compose two purely periodic words pointwise (L only where both hold L).
    Compose {
        /// Left word, e.g. "(RL)*".
        #[arg(long)]
        left: SymbolicWord,

        /// Right word, e.g. "(RLL)*".
        #[arg(long)]
        right: SymbolicWord,
    },

    /// Decide whether a word is admissible (no left shift exceeds it).
    Admissible {
        /// Word to test, e.g. "RL(R)*".
        #[arg(long)]
        word: SymbolicWord,
    },

    /// Compare two words in kneading order (parity-adjusted positional order).
    Compare {
        /// Left word.
        #[arg(long)]
        left: SymbolicWord,

        /// Right word.
        #[arg(long)]
        right: SymbolicWord,
    },

    /// Recover the map parameter whose kneading word matches a target.
    Solve {
        /// Target word; one ending in C is solved as a superstable orbit.
        #[arg(long)]
        word: SymbolicWord,

        /// Symbols per kneading comparison (default: three times the
        /// defining length, capped at 200).
        #[arg(long)]
        truncation: Option<usize>,

        /// Bisection tolerance on the parameter.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },

    /// Iterate the map x -> 1 - u*x^2 and print the orbit points as CSV.
    Orbit {
        /// Map parameter in (0, 2].
        #[arg(long)]
        u: f64,

        /// Starting point in [-1, 1].
        #[arg(long)]
        x0: f64,

        /// Number of points to keep.
        #[arg(long)]
        n: usize,

        /// Iterations discarded before recording.
        #[arg(long, default_value_t = 0)]
        transient: usize,
    },

    /// Print an orbit's symbol sequence relative to the critical point.
    Itinerary {
        /// Map parameter in (0, 2].
        #[arg(long)]
        u: f64,

        /// Starting point in [-1, 1].
        #[arg(long)]
        x0: f64,

        /// Maximum number of symbols.
        #[arg(long)]
        n: usize,

        /// Half-width around the critical point read as C.
        #[arg(long, default_value_t = 0.0)]
        c_epsilon: f64,
    },

    /// Estimate the Lyapunov exponent of an orbit.
    Lyapunov {
        /// Map parameter in (0, 2].
        #[arg(long)]
        u: f64,

        /// Starting point in [-1, 1].
        #[arg(long)]
        x0: f64,

        /// Number of averaged iterations.
        #[arg(long)]
        n: usize,

        /// Iterations discarded before averaging.
        #[arg(long, default_value_t = 0)]
        transient: usize,
    },

    /// Estimate topological entropy from turning-point preimage growth.
    Entropy {
        /// Map parameter in (0, 2].
        #[arg(long)]
        u: f64,

        /// Deepest preimage level fitted (at least 10).
        #[arg(long)]
        n_max: usize,

        /// Cap on the per-level preimage count.
        #[arg(long)]
        cap: Option<usize>,
    },

    /// Sample attractor points over a parameter range as CSV.
    Bifurcation {
        /// Lower end of the parameter range (exclusive of 0).
        #[arg(long)]
        u_min: f64,

        /// Upper end of the parameter range (at most 2).
        #[arg(long)]
        u_max: f64,

        /// Number of parameter samples (at least 2).
        #[arg(long)]
        u_steps: usize,

        /// Attractor points kept per parameter.
        #[arg(long, default_value_t = 100)]
        points_per_u: usize,

        /// Iterations discarded per parameter before recording.
        #[arg(long, default_value_t = 1000)]
        transient: usize,
    },

    /// Gaps between consecutive primes up to a limit, as CSV.
    Gaps {
        /// Inclusive upper bound of the sieve (at least 3).
        #[arg(long)]
        limit: u64,
    },

    /// Gaps between negative-side returns of a chaotic orbit, as CSV.
    ChaosGaps {
        /// Map parameter in (0, 2].
        #[arg(long)]
        u: f64,

        /// Starting point in [-1, 1].
        #[arg(long, default_value_t = 0.3)]
        x0: f64,

        /// Number of recorded orbit points.
        #[arg(long)]
        n: usize,

        /// Iterations discarded before recording.
        #[arg(long, default_value_t = 1000)]
        transient: usize,
    },

    /// Histogram of gap sizes from either source, as CSV.
    #[command(group(ArgGroup::new("source").required(true).args(["limit", "u"])))]
    Histogram {
        /// Real primes up to this limit.
        #[arg(long)]
        limit: Option<u64>,

        /// Chaotic orbit parameter (requires --n).
        #[arg(long, requires = "n")]
        u: Option<f64>,

        /// Starting point of the chaotic orbit.
        #[arg(long, default_value_t = 0.3)]
        x0: f64,

        /// Number of recorded chaotic orbit points.
        #[arg(long)]
        n: Option<usize>,

        /// Iterations discarded before recording.
        #[arg(long, default_value_t = 1000)]
        transient: usize,
    },

    /// Compare prime-gap and chaotic-gap histograms: frequencies, tail
    /// slopes, total-variation distance.
    CompareHist {
        /// Real primes up to this limit.
        #[arg(long)]
        limit: u64,

        /// Chaotic orbit parameter.
        #[arg(long)]
        u: f64,

        /// Starting point of the chaotic orbit.
        #[arg(long, default_value_t = 0.3)]
        x0: f64,

        /// Number of recorded chaotic orbit points.
        #[arg(long)]
        n: usize,

        /// Iterations discarded before recording.
        #[arg(long, default_value_t = 1000)]
        transient: usize,
    },

    /// Verify that composed sieve words increase strictly in kneading order.
    Theorem4 {
        /// Compare orders i and i+1 for every i below this bound.
        #[arg(long)]
        i_max: usize,
    },

    /// Check one sieve-word prefix: an admissible head and the matching
    /// prime-gap bound below the squared prime.
    Theme3 {
        /// Order of the sieve word (1-based prime index).
        #[arg(long)]
        i: usize,
    },

    /// Recover parameters for the sieve words of orders 1 through i_max.
    Chain {
        /// Highest sieve-word order attempted.
        #[arg(long)]
        i_max: usize,

        /// Symbols per kneading comparison (raised per word when needed).
        #[arg(long, default_value_t = 200)]
        truncation: usize,

        /// Bisection tolerance on each recovered parameter.
        #[arg(long, default_value_t = 1e-4)]
        tol: f64,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        // Usage errors exit 2; --help and --version exit 0.
        Err(err) => err.exit(),
    };
    let budget = match budget_from_env() {
        Ok(budget) => budget,
        Err(message) => {
            eprintln!("error: {message}");
            return ExitCode::from(2);
        }
    };
    let mut payload = Vec::new();
    if let Err(err) = run(&cli.command, budget, &mut payload) {
        eprintln!("error: {err:#}");
        return ExitCode::from(1);
    }
    if let Err(err) = deliver(cli.out.as_deref(), &payload) {
        eprintln!("error: {err}");
        return ExitCode::from(1);
    }
    ExitCode::SUCCESS
}

/// Reads the materialization budget from the environment, defaulting to the
/// library-wide cap.
fn budget_from_env() -> Result<u64, String> {
    match env::var(BUDGET_ENV) {
        Ok(raw) => raw
            .trim()
            .parse()
            .map_err(|_| format!("{BUDGET_ENV} must be an unsigned integer, got {raw:?}")),
        Err(env::VarError::NotPresent) => Ok(DEFAULT_PERIOD_BUDGET),
        Err(env::VarError::NotUnicode(_)) => Err(format!("{BUDGET_ENV} must be valid UTF-8")),
    }
}

/// Writes the payload to the requested file, or to standard output.
fn deliver(path: Option<&Path>, payload: &[u8]) -> io::Result<()> {
    match path {
        Some(path) => fs::write(path, payload),
        None => io::stdout().write_all(payload),
    }
}

/// Emits the `#`-prefixed configuration header every run starts with.
fn header(out: &mut Vec<u8>, command: &str, fields: &[(&str, String)]) -> io::Result<()> {
    writeln!(out, "# command={command}")?;
    for (key, value) in fields {
        writeln!(out, "# {key}={value}")?;
    }
    Ok(())
}

/// Lowercase rendering of a comparison outcome.
fn ordering_name(ordering: Ordering) -> &'static str {
    match ordering {
        Ordering::Less => "less",
        Ordering::Equal => "equal",
        Ordering::Greater => "greater",
    }
}

fn run(command: &Command, budget: u64, out: &mut Vec<u8>) -> Result<()> {
    match command {
        Command::Sieve { limit } => {
            header(out, "sieve", &[("limit", limit.to_string())])?;
            let table = sieve_primes(*limit)?;
            writeln!(out, "index,prime")?;
            for (index, prime) in table.primes().iter().enumerate() {
                writeln!(out, "{},{prime}", index + 1)?;
            }
        }
        Command::Encode { prime, i } => {
            let word = match (prime, i) {
                (Some(p), None) => {
                    header(out, "encode", &[("prime", p.to_string())])?;
                    prime_word(*p)?
                }
                (None, Some(i)) => {
                    header(
                        out,
                        "encode",
                        &[("i", i.to_string()), ("budget", budget.to_string())],
                    )?;
                    sieve_word_with_budget(*i, budget)?
                }
                _ => unreachable!("clap enforces exactly one source"),
            };
            writeln!(out, "{word}")?;
        }
        Command::Compose { left, right } => {
            header(
                out,
                "compose",
                &[
                    ("left", left.to_string()),
                    ("right", right.to_string()),
                    ("budget", budget.to_string()),
                ],
            )?;
            writeln!(out, "{}", compose_budgeted(left, right, budget)?)?;
        }
        Command::Admissible { word } => {
            header(out, "admissible", &[("word", word.to_string())])?;
            match word.violating_shift() {
                None => writeln!(out, "true")?,
                Some(shift) => writeln!(out, "false (shift {shift} exceeds the word)")?,
            }
        }
        Command::Compare { left, right } => {
            header(
                out,
                "compare",
                &[("left", left.to_string()), ("right", right.to_string())],
            )?;
            let (ordering, mismatch) = left.compare_detailed(right);
            writeln!(out, "{}", ordering_name(ordering))?;
            if let Some(m) = mismatch {
                writeln!(
                    out,
                    "mismatch_index={},left={},right={},r_prefix_parity={}",
                    m.index,
                    m.left,
                    m.right,
                    if m.even_r_prefix { "even" } else { "odd" }
                )?;
            }
        }
        Command::Solve {
            word,
            truncation,
            tol,
        } => {
            let truncation = truncation.unwrap_or_else(|| default_truncation(word));
            header(
                out,
                "solve",
                &[
                    ("word", word.to_string()),
                    ("truncation", truncation.to_string()),
                    ("tol", format_float(*tol)),
                ],
            )?;
            let result = if word.ends_with_c() {
                solve_superstable(word)?
            } else {
                solve_parameter(word, truncation, *tol)?
            };
            writeln!(out, "word,u,bracket_lo,bracket_hi,truncation")?;
            writeln!(
                out,
                "{word},{},{},{},{}",
                format_float(result.u),
                format_float(result.bracket.0),
                format_float(result.bracket.1),
                result.truncation
            )?;
        }
        Command::Orbit {
            u,
            x0,
            n,
            transient,
        } => {
            header(
                out,
                "orbit",
                &[
                    ("u", format_float(*u)),
                    ("x0", format_float(*x0)),
                    ("n", n.to_string()),
                    ("transient", transient.to_string()),
                ],
            )?;
            let orbit = orbit(*u, *x0, *n, *transient)?;
            writeln!(out, "index,x")?;
            for (index, x) in orbit.points.iter().enumerate() {
                writeln!(out, "{index},{}", format_float(*x))?;
            }
        }
        Command::Itinerary {
            u,
            x0,
            n,
            c_epsilon,
        } => {
            header(
                out,
                "itinerary",
                &[
                    ("u", format_float(*u)),
                    ("x0", format_float(*x0)),
                    ("n", n.to_string()),
                    ("c_epsilon", format_float(*c_epsilon)),
                ],
            )?;
            writeln!(out, "{}", itinerary(*u, *x0, *n, *c_epsilon)?)?;
        }
        Command::Lyapunov {
            u,
            x0,
            n,
            transient,
        } => {
            header(
                out,
                "lyapunov",
                &[
                    ("u", format_float(*u)),
                    ("x0", format_float(*x0)),
                    ("n", n.to_string()),
                    ("transient", transient.to_string()),
                ],
            )?;
            writeln!(out, "lambda={}", format_float(lyapunov(*u, *x0, *n, *transient)?))?;
        }
        Command::Entropy { u, n_max, cap } => {
            let cap = cap.unwrap_or(DEFAULT_LAP_BUDGET);
            header(
                out,
                "entropy",
                &[
                    ("u", format_float(*u)),
                    ("n_max", n_max.to_string()),
                    ("cap", cap.to_string()),
                ],
            )?;
            let entropy = if cap == DEFAULT_LAP_BUDGET {
                topological_entropy(*u, *n_max)?
            } else {
                topological_entropy_with_cap(*u, *n_max, cap)?
            };
            writeln!(out, "entropy={}", format_float(entropy))?;
        }
        Command::Bifurcation {
            u_min,
            u_max,
            u_steps,
            points_per_u,
            transient,
        } => {
            header(
                out,
                "bifurcation",
                &[
                    ("u_min", format_float(*u_min)),
                    ("u_max", format_float(*u_max)),
                    ("u_steps", u_steps.to_string()),
                    ("points_per_u", points_per_u.to_string()),
                    ("transient", transient.to_string()),
                ],
            )?;
            let samples =
                kneadprime::bifurcation_scan(*u_min, *u_max, *u_steps, *points_per_u, *transient)?;
            writeln!(out, "u,x")?;
            for (u, x) in samples {
                writeln!(out, "{},{}", format_float(u), format_float(x))?;
            }
        }
        Command::Gaps { limit } => {
            header(out, "gaps", &[("limit", limit.to_string())])?;
            prime_gaps(*limit)?.write_csv(&mut *out)?;
        }
        Command::ChaosGaps {
            u,
            x0,
            n,
            transient,
        } => {
            header(
                out,
                "chaos-gaps",
                &[
                    ("u", format_float(*u)),
                    ("x0", format_float(*x0)),
                    ("n", n.to_string()),
                    ("transient", transient.to_string()),
                ],
            )?;
            constructed_prime_gaps(*u, *x0, *n, *transient)?.write_csv(&mut *out)?;
        }
        Command::Histogram {
            limit,
            u,
            x0,
            n,
            transient,
        } => {
            let gaps: GapSequence = match (limit, u) {
                (Some(limit), None) => {
                    header(out, "histogram", &[("limit", limit.to_string())])?;
                    prime_gaps(*limit)?
                }
                (None, Some(u)) => {
                    let n = n.expect("clap enforces --n with --u");
                    header(
                        out,
                        "histogram",
                        &[
                            ("u", format_float(*u)),
                            ("x0", format_float(*x0)),
                            ("n", n.to_string()),
                            ("transient", transient.to_string()),
                        ],
                    )?;
                    constructed_prime_gaps(*u, *x0, n, *transient)?
                }
                _ => unreachable!("clap enforces exactly one source"),
            };
            histogram(&gaps)?.write_csv(&mut *out)?;
        }
        Command::CompareHist {
            limit,
            u,
            x0,
            n,
            transient,
        } => {
            header(
                out,
                "compare-hist",
                &[
                    ("limit", limit.to_string()),
                    ("u", format_float(*u)),
                    ("x0", format_float(*x0)),
                    ("n", n.to_string()),
                    ("transient", transient.to_string()),
                ],
            )?;
            let left = histogram(&prime_gaps(*limit)?)?;
            let right = histogram(&constructed_prime_gaps(*u, *x0, *n, *transient)?)?;
            let comparison = kneadprime::compare_histograms(&left, &right)?;
            comparison.write_summary(&mut *out, &left, &right)?;
        }
        Command::Theorem4 { i_max } => {
            header(
                out,
                "theorem4",
                &[
                    ("i_max", i_max.to_string()),
                    ("budget", budget.to_string()),
                ],
            )?;
            let report = check_theorem4(*i_max, budget)?;
            writeln!(out, "holds={}", report.holds)?;
            writeln!(
                out,
                "witness={}",
                report
                    .witness
                    .map_or_else(|| "none".to_string(), |i| i.to_string())
            )?;
            writeln!(out, "i,ordering,mismatch_index,left,right,r_prefix_parity")?;
            for step in &report.steps {
                match &step.mismatch {
                    Some(m) => writeln!(
                        out,
                        "{},{},{},{},{},{}",
                        step.index,
                        ordering_name(step.ordering),
                        m.index,
                        m.left,
                        m.right,
                        if m.even_r_prefix { "even" } else { "odd" }
                    )?,
                    None => writeln!(
                        out,
                        "{},{},,,,",
                        step.index,
                        ordering_name(step.ordering)
                    )?,
                }
            }
        }
        Command::Theme3 { i } => {
            header(out, "theme3", &[("i", i.to_string())])?;
            let report = check_theme3(*i)?;
            let square = report.prime * report.prime;
            if report.holds && report.gap_bound_holds {
                writeln!(
                    out,
                    "true (max gap {} \u{2264} {} below {square})",
                    report.max_gap, report.prime
                )?;
            } else if report.holds {
                writeln!(
                    out,
                    "true (admissible prefix; yet max gap {} > {} below {square})",
                    report.max_gap, report.prime
                )?;
            } else {
                let shift = report
                    .violating_shift
                    .expect("inadmissible prefix names its shift");
                writeln!(out, "false (shift {shift} exceeds the prefix)")?;
            }
        }
        Command::Chain {
            i_max,
            truncation,
            tol,
        } => {
            header(
                out,
                "chain",
                &[
                    ("i_max", i_max.to_string()),
                    ("truncation", truncation.to_string()),
                    ("tol", format_float(*tol)),
                    ("budget", budget.to_string()),
                ],
            )?;
            let entries = parameter_chain_with_budget(*i_max, *truncation, *tol, budget)?;
            writeln!(
                out,
                "i,word,outcome,u,bracket_lo,bracket_hi,truncation,violating_shift"
            )?;
            for entry in entries {
                match entry.outcome {
                    ChainOutcome::Solved(result) => writeln!(
                        out,
                        "{},{},solved,{},{},{},{},",
                        entry.index,
                        entry.word,
                        format_float(result.u),
                        format_float(result.bracket.0),
                        format_float(result.bracket.1),
                        result.truncation
                    )?,
                    ChainOutcome::AmbiguousWindow { lo, hi } => writeln!(
                        out,
                        "{},{},ambiguous-window,,{},{},,",
                        entry.index,
                        entry.word,
                        format_float(lo),
                        format_float(hi)
                    )?,
                    ChainOutcome::NotAdmissible { violating_shift } => writeln!(
                        out,
                        "{},{},not-admissible,,,,,{violating_shift}",
                        entry.index, entry.word
                    )?,
                }
            }
        }
    }
    Ok(())
}
