mod commands;
mod output;
mod verify;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::Context;
use clap::{Args, Parser, Subcommand, ValueEnum};

use kwclass_core::{Error, Settings};
use output::{Format, LengthRange};

/// Equivalence classes of binary words under keyword substitution.
#[derive(Debug, Parser)]
#[command(name = "kwclass", version, about)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, global = true, default_value_t = Format::Text)]
    format: Format,

    /// Worker threads for the partition engine (defaults to all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,

    /// Write output to this file instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    /// Keep one keyword per orbit under negation, reversal and seminegation.
    #[arg(long, global = true)]
    dedupe_orbit: bool,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Lengths {
    /// Word length.
    #[arg(short = 'n', conflicts_with = "n_range")]
    n: Option<usize>,

    /// Inclusive range of word lengths, `lo..hi`.
    #[arg(long)]
    n_range: Option<LengthRange>,
}

impl Lengths {
    fn resolve(&self) -> anyhow::Result<Vec<usize>> {
        match (self.n, self.n_range) {
            (Some(n), _) => Ok(vec![n]),
            (None, Some(r)) => Ok(r.iter().collect()),
            (None, None) => Err(UsageError("one of -n or --n-range is required".into()).into()),
        }
    }
}

#[derive(Debug, Args)]
struct Keywords {
    /// Keyword (repeatable).
    #[arg(short = 'a', long = "keyword", required = true)]
    keywords: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Suite {
    Theorem,
    Bipartite,
    Iso,
    Commute,
    Gf,
    All,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SeriesMethod {
    Gf,
    Transfer,
    Brute,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Number of classes, checked against the partial Fibonacci sum.
    Count {
        #[command(flatten)]
        keywords: Keywords,
        #[command(flatten)]
        lengths: Lengths,
    },
    /// Class-size histogram.
    Histogram {
        #[command(flatten)]
        keywords: Keywords,
        #[command(flatten)]
        lengths: Lengths,
    },
    /// Reproduce one of the reference histogram tables (1, 2 or 3).
    Table {
        #[arg(value_parser = clap::value_parser!(u8).range(1..=3))]
        number: u8,
    },
    /// Run an exhaustive verification sweep.
    Verify {
        #[arg(value_enum)]
        suite: Suite,
        /// Largest keyword parameter m (keyword length m + 1).
        #[arg(long, default_value_t = 3)]
        max_m: usize,
        /// Largest word length.
        #[arg(long, default_value_t = 10)]
        max_n: usize,
    },
    /// List classes, or the class of a single word.
    Classes {
        #[command(flatten)]
        keywords: Keywords,
        /// Word length when listing every class.
        #[arg(short = 'n')]
        n: Option<usize>,
        /// Show only the class containing this word.
        #[arg(short = 'u', long = "word")]
        word: Option<String>,
        /// Emit the class as a Graphviz graph (needs --word).
        #[arg(long, requires = "word")]
        dot: bool,
    },
    /// Graph distance between two words of equal length.
    Distance {
        #[command(flatten)]
        keywords: Keywords,
        u: String,
        v: String,
    },
    /// Number of singleton classes for n = 0..=N.
    Series {
        #[command(flatten)]
        keywords: Keywords,
        /// Largest length N.
        #[arg(short = 'n')]
        n: usize,
        #[arg(long, value_enum, default_value_t = SeriesMethod::Gf)]
        method: SeriesMethod,
    },
    /// Correlation fingerprint; with two keywords, whether singleton counts agree.
    Fingerprint {
        #[command(flatten)]
        keywords: Keywords,
    },
    /// Whether simple maps at distance DELTA commute (or, with -i/-j/-n, brute force).
    Commute {
        #[command(flatten)]
        keywords: Keywords,
        #[arg(long, allow_negative_numbers = true)]
        delta: Option<i64>,
        #[arg(short = 'i', requires_all = ["j", "n"])]
        i: Option<usize>,
        #[arg(short = 'j', requires_all = ["i", "n"])]
        j: Option<usize>,
        #[arg(short = 'n', requires_all = ["i", "j"])]
        n: Option<usize>,
    },
    /// Orbit of a keyword under negation, reversal and seminegation.
    Orbit {
        #[command(flatten)]
        keywords: Keywords,
    },
    /// Whether the substitution graphs of two keywords are isomorphic.
    Iso {
        #[command(flatten)]
        keywords: Keywords,
        #[command(flatten)]
        lengths: Lengths,
    },
    /// Zeckendorf representation over 1, 2, 3, 5, 8, ...
    Zeck { value: String },
    /// Number of representations of N as a sum of distinct m-step Fibonacci numbers.
    Reps {
        #[arg(short = 'm')]
        m: usize,
        value: String,
        /// Use only F_1 .. F_k.
        #[arg(long)]
        max_index: Option<usize>,
    },
    /// Largest representation count over F_n <= N < F_{n+1}.
    Maxsize {
        #[arg(short = 'm')]
        m: usize,
        #[command(flatten)]
        lengths: Lengths,
    },
}

/// Bad input that clap could not catch; exits like a parse error.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Rendered output plus whether a check inside it failed.
pub struct Report {
    pub body: String,
    pub failed: bool,
}

impl Report {
    pub fn ok(body: String) -> Self {
        Self {
            body,
            failed: false,
        }
    }
}

fn run(cli: &Cli) -> anyhow::Result<Report> {
    let mut settings = Settings::from_env()?;
    if let Some(w) = cli.workers {
        settings = settings.with_workers(w);
    }
    let ctx = commands::Ctx {
        format: cli.format,
        settings,
        dedupe_orbit: cli.dedupe_orbit,
    };
    match &cli.command {
        Command::Count { keywords, lengths } => {
            commands::count(&ctx, &keywords.keywords, &lengths.resolve()?)
        }
        Command::Histogram { keywords, lengths } => {
            commands::histogram(&ctx, &keywords.keywords, &lengths.resolve()?)
        }
        Command::Table { number } => commands::table(&ctx, *number),
        Command::Verify {
            suite,
            max_m,
            max_n,
        } => {
            let suites = match suite {
                Suite::Theorem => vec![verify::Suite::Theorem],
                Suite::Bipartite => vec![verify::Suite::Bipartite],
                Suite::Iso => vec![verify::Suite::Iso],
                Suite::Commute => vec![verify::Suite::Commute],
                Suite::Gf => vec![verify::Suite::Gf],
                Suite::All => verify::Suite::ALL.to_vec(),
            };
            verify::run(&ctx, &suites, *max_m, *max_n)
        }
        Command::Classes {
            keywords,
            n,
            word,
            dot,
        } => commands::classes(&ctx, &keywords.keywords, *n, word.as_deref(), *dot),
        Command::Distance { keywords, u, v } => commands::distance(&ctx, &keywords.keywords, u, v),
        Command::Series {
            keywords,
            n,
            method,
        } => commands::series(&ctx, &keywords.keywords, *n, *method),
        Command::Fingerprint { keywords } => commands::fingerprint_cmd(&ctx, &keywords.keywords),
        Command::Commute {
            keywords,
            delta,
            i,
            j,
            n,
        } => {
            let brute = match (i, j, n) {
                (Some(i), Some(j), Some(n)) => Some((*i, *j, *n)),
                _ => None,
            };
            commands::commute(&ctx, &keywords.keywords, *delta, brute)
        }
        Command::Orbit { keywords } => commands::orbit(&ctx, &keywords.keywords),
        Command::Iso { keywords, lengths } => {
            commands::iso(&ctx, &keywords.keywords, &lengths.resolve()?)
        }
        Command::Zeck { value } => commands::zeck(&ctx, value),
        Command::Reps {
            m,
            value,
            max_index,
        } => commands::reps(&ctx, *m, value, *max_index),
        Command::Maxsize { m, lengths } => commands::maxsize(&ctx, *m, &lengths.resolve()?),
    }
}

fn exit_code(err: &anyhow::Error) -> u8 {
    if let Some(e) = err.downcast_ref::<Error>() {
        return match e {
            Error::CapacityExceeded { .. } | Error::ComponentTooLarge { .. } => 3,
            Error::VerificationFailure { .. } => 2,
            _ => 1,
        };
    }
    1
}

fn emit(out: Option<&PathBuf>, body: &str) -> anyhow::Result<()> {
    match out {
        Some(path) => {
            std::fs::write(path, body).with_context(|| format!("writing {}", path.display()))
        }
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout.write_all(body.as_bytes())?;
            stdout.flush()?;
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    let result = run(&cli).and_then(|report| {
        emit(cli.out.as_ref(), &report.body)?;
        Ok(report.failed)
    });
    match result {
        Ok(false) => ExitCode::SUCCESS,
        Ok(true) => ExitCode::from(2),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(exit_code(&err))
        }
    }
}
