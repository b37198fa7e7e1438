//! The `vgit` command line: argument parsing, dispatch and report output.

use std::ffi::OsString;
use std::time::Instant;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};

mod commands;
mod report;

pub use report::Report;

pub const GRAMMAR: &str = "\
Polynomial grammar:
  poly   := term (('+' | '-') term)*
  term   := coeff ('*' factor)* | factor ('*' factor)*
  factor := var ('^' uint)?
  var    := 'x' uint                      x0, x1, ... (0-based)
  coeff  := int | int '/' uint
  Whitespace is ignored and every term must have the same degree.
  The number of variables is the largest index used plus one, unless --nvars is given.
Rationals are written p or p/q; weight vectors and points as comma lists, e.g. 6,-1,-1.
Exit codes: 0 success, 1 failed verification or self-test, 2 input or usage error, 3 budget exhausted.";

#[derive(Parser, Debug)]
#[command(name = "vgit", version, about = "Exact VGIT and Jacobian-ring computations for cubic hypersurfaces", after_help = GRAMMAR)]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args, Debug, Clone)]
pub(crate) struct Common {
    /// Coefficient field: Q or an odd prime p
    #[arg(long, global = true, default_value = "Q")]
    pub field: String,
    /// Number of variables (default: inferred from the inputs)
    #[arg(long, global = true)]
    pub nvars: Option<usize>,
    /// Emit one JSON object instead of key: value lines
    #[arg(long, global = true)]
    pub json: bool,
    /// Re-check certificates with the independent verifiers
    #[arg(long, global = true)]
    pub verify: bool,
    /// Include wall-clock time in the report
    #[arg(long, global = true)]
    pub timing: bool,
    /// Simplex pivot budget
    #[arg(long, global = true)]
    pub pivot_budget: Option<usize>,
    /// Primes for the modular rank fast path, comma separated
    #[arg(long, global = true, value_delimiter = ',')]
    pub primes: Option<Vec<u32>>,
    /// Largest rows*cols eliminated exactly over Q
    #[arg(long, global = true)]
    pub exact_limit: Option<usize>,
}

#[derive(Args, Debug, Clone)]
pub(crate) struct PairArgs {
    #[arg(long = "Y", allow_hyphen_values = true)]
    pub y: String,
    #[arg(long = "H", allow_hyphen_values = true)]
    pub h: String,
}

#[derive(Subcommand, Debug)]
pub(crate) enum Cmd {
    /// Hilbert-Mumford weight mu(f, lambda)
    Mu {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// mu(Y, lambda) + t * mu(H, lambda)
    MuPair {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
    },
    /// Torus stability of (Y, H) at slope t, with certificate
    TorusStab {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
    /// Search the default coordinate changes for a destabilizing subgroup
    Destab {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, allow_hyphen_values = true)]
        t: String,
    },
    /// Limit pair (initial forms) under lambda
    Limit {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, allow_hyphen_values = true)]
        lambda: String,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        t: String,
    },
    /// Slopes in (t_lo, t_hi] where the torus verdict changes
    WallScan {
        #[command(flatten)]
        pair: PairArgs,
        #[arg(long, allow_hyphen_values = true, default_value = "0")]
        t_lo: String,
        #[arg(long, allow_hyphen_values = true, default_value = "1")]
        t_hi: String,
        /// Candidate box bound B
        #[arg(long, default_value_t = 12)]
        bound: i64,
        /// Explicit candidate weights, separated by ';' (overrides the box)
        #[arg(long, allow_hyphen_values = true)]
        candidates: Option<String>,
    },
    /// dim of the degree-k piece of the Jacobian ring
    Jring {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long)]
        k: u32,
    },
    /// Smoothness via vanishing of the Jacobian ring above the socle degree
    Smooth {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
    },
    /// Primitive Hodge number h^{n-p,p}
    Hodge {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long)]
        p: u32,
    },
    /// Dimension of the intermediate Jacobian
    IjDim {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
    },
    /// Rank of the multiplication pairing R^a x R^(sigma-a) -> R^sigma
    Pairing {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long)]
        a: u32,
    },
    /// Classify a projective point of V(f)
    ClassifyPoint {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        point: String,
    },
    /// Containment family of cubics through V(f3) in the hyperplane x0 = 0
    FiberBuild {
        #[arg(long, allow_hyphen_values = true)]
        f3: String,
    },
    /// Weighted projective normal form of Y in the containment family
    FiberNormalForm {
        #[arg(long, allow_hyphen_values = true)]
        f3: String,
        #[arg(long = "Y", allow_hyphen_values = true)]
        y: String,
    },
    /// Compare the normal forms of Y and Z
    FiberEqual {
        #[arg(long, allow_hyphen_values = true)]
        f3: String,
        #[arg(long = "Y", allow_hyphen_values = true)]
        y: String,
        #[arg(long = "Z", allow_hyphen_values = true)]
        z: String,
    },
    /// Run the acceptance suite
    Selftest {
        #[arg(long, default_value_t = vgit_check::acceptance::DEFAULT_SEED)]
        seed: u64,
        /// Criteria to run, comma separated (default: all)
        #[arg(long, value_delimiter = ',')]
        criteria: Option<Vec<u8>>,
    },
}

/// Failure modes mapped to exit codes.
#[derive(Debug)]
pub(crate) enum CliError {
    Input(String),
    Budget(String),
}

/// Captured result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => Outcome {
                    code: 0,
                    stdout: text,
                    stderr: String::new(),
                },
                _ => Outcome {
                    code: 2,
                    stdout: String::new(),
                    stderr: format!("{text}\n{GRAMMAR}\n"),
                },
            };
        }
    };
    let start = Instant::now();
    match commands::dispatch(&cli.cmd, &cli.common) {
        Ok((mut report, verified)) => {
            if cli.common.timing {
                report.timing_ms = Some(start.elapsed().as_secs_f64() * 1e3);
            }
            let stdout = if cli.common.json {
                format!("{}\n", report.to_json())
            } else {
                report.to_text()
            };
            let (code, stderr) = match verified {
                Some(false) => (1, "verification failed\n".to_string()),
                _ => (report.exit_code, String::new()),
            };
            Outcome { code, stdout, stderr }
        }
        Err(CliError::Input(msg)) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {msg}\n\n{GRAMMAR}\n"),
        },
        Err(CliError::Budget(msg)) => Outcome {
            code: 3,
            stdout: String::new(),
            stderr: format!("error: {msg}\n"),
        },
    }
}
