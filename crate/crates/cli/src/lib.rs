//! The `permlogic` command line. `run` parses arguments, executes one
//! subcommand and returns the process exit code: 0 for success or a true
//! answer, 1 for a false answer or a failed check, 2 for usage errors.

pub mod config;
mod commands;
mod oracle;
pub mod verify;

use std::ffi::OsString;
use std::io::{Read, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use permlogic::Permutation;

pub use config::{Config, Output, Overrides};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    Usage(String),
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Usage(m) => f.write_str(m),
        }
    }
}

impl std::error::Error for CliError {}

pub(crate) fn usage(e: impl ToString) -> CliError {
    CliError::Usage(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "permlogic", version, about = "First-order logic over finite permutations")]
struct Cli {
    /// Output format.
    #[arg(long, global = true, value_enum)]
    output: Option<Output>,
    /// Largest permutation size for enumerations (overrides PERMLOGIC_MAX_N).
    #[arg(long, global = true)]
    max_n: Option<usize>,
    /// Largest EF game depth.
    #[arg(long, global = true)]
    max_ef_k: Option<usize>,
    /// Ceiling on enumerated count matrices.
    #[arg(long, global = true)]
    matrix_cap: Option<usize>,
    /// Worker threads; 0 picks one per core.
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// TOML config file (also read from PERMLOGIC_CONFIG).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Report elapsed_ms as 0 in JSON so reruns are byte-identical.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

/// Where a formula comes from: `--sentence`, `--file`, or stdin.
#[derive(Debug, Clone, Args)]
pub(crate) struct Source {
    #[arg(long, conflicts_with = "file")]
    sentence: Option<String>,
    #[arg(long)]
    file: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Evaluate a formula on one permutation.
    Eval {
        #[command(flatten)]
        src: Source,
        perm: Permutation,
        /// Free variable positions, e.g. `x=1,y=3`.
        #[arg(long)]
        assign: Option<String>,
    },
    /// List the models of a sentence of size n.
    Models {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        n: usize,
    },
    /// Count the models of a sentence of size n.
    Count {
        #[command(flatten)]
        src: Source,
        #[arg(long)]
        n: usize,
    },
    /// Decide the k-round EF game; exit 0 when Duplicator wins.
    Ef {
        perm1: Permutation,
        perm2: Permutation,
        #[arg(long)]
        k: usize,
        /// Opening positions in the first permutation, e.g. `2,5`.
        #[arg(long, requires = "marks2")]
        marks1: Option<String>,
        #[arg(long, requires = "marks1")]
        marks2: Option<String>,
        /// Ceiling on the combined size of the two permutations.
        #[arg(long)]
        max_size: Option<usize>,
    },
    /// Emit a compiled formula.
    Compile {
        /// Existentially close formulas with designated free variables.
        #[arg(long, global = true)]
        close: bool,
        #[command(subcommand)]
        kind: commands::CompileKind,
    },
    /// Apply sorting operators left to right.
    Sort {
        #[arg(long, value_delimiter = ',', required = true)]
        op: Vec<String>,
        perm: Permutation,
    },
    /// Stable occurrences of a pattern; exit 1 when there are none.
    Stable {
        #[arg(long)]
        pattern: Permutation,
        perm: Permutation,
    },
    /// Region matrix around an occurrence.
    Region {
        perm: Permutation,
        /// Occurrence positions, e.g. `2,4,5`.
        #[arg(long)]
        at: String,
    },
    /// Cycle decomposition of a balanced matrix given as JSON rows, bottom
    /// row first (stdin when omitted).
    Decompose { matrix: Option<String> },
    /// Expansion of a pattern along a cycle.
    Expand {
        #[arg(long)]
        pattern: Permutation,
        #[arg(long)]
        cycle: String,
        /// Blocks inflating the added points, left to right.
        #[arg(long)]
        inflate: Option<String>,
    },
    /// Run oracle-equivalence suites.
    Verify {
        /// Suite name or `all`.
        suite: String,
        /// Operators for the sortable suite, e.g. `stack,stack`.
        #[arg(long)]
        ops: Option<String>,
    },
}

/// Result of one subcommand.
pub(crate) struct Outcome {
    pub code: i32,
    pub text: String,
    pub json: serde_json::Value,
}

impl Outcome {
    pub fn ok(text: impl Into<String>, json: serde_json::Value) -> Self {
        Outcome {
            code: 0,
            text: text.into(),
            json,
        }
    }

    pub fn answer(yes: bool, text: impl Into<String>, json: serde_json::Value) -> Self {
        Outcome {
            code: if yes { 0 } else { 1 },
            text: text.into(),
            json,
        }
    }
}

pub(crate) struct Ctx<'a> {
    pub cfg: Config,
    pub timing: bool,
    pub stdin: &'a mut (dyn Read + Send),
}

/// Runs with the process environment and standard streams.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let env = |k: &str| std::env::var(k).ok();
    run_with(argv, env, &mut std::io::stdin(), &mut std::io::stdout(), &mut std::io::stderr())
}

pub fn run_with<I, T>(
    argv: I,
    env: impl Fn(&str) -> Option<String>,
    stdin: &mut (dyn Read + Send),
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let text = e.render().to_string();
            let sink: &mut dyn Write = if code == 0 { stdout } else { stderr };
            let _ = sink.write_all(text.as_bytes());
            return code;
        }
    };
    let flags = Overrides {
        max_n: cli.max_n,
        max_ef_k: cli.max_ef_k,
        matrix_cap: cli.matrix_cap,
        threads: cli.threads,
        output: cli.output,
    };
    let cfg = match Config::resolve(cli.config.as_deref(), &env, &flags) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(cfg.threads).build() {
        Ok(p) => p,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            return 2;
        }
    };
    let output = cfg.output;
    let mut ctx = Ctx {
        cfg,
        timing: !cli.no_timing,
        stdin,
    };
    let result = pool.install(|| dispatch(cli.cmd, &mut ctx));
    match result {
        Ok(out) => {
            let body = match output {
                Output::Text => out.text,
                Output::Json => out.json.to_string(),
            };
            let _ = writeln!(stdout, "{}", body.trim_end_matches('\n'));
            out.code
        }
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            2
        }
    }
}

fn dispatch(cmd: Cmd, ctx: &mut Ctx) -> Result<Outcome, CliError> {
    use commands as c;
    match cmd {
        Cmd::Eval { src, perm, assign } => c::eval(ctx, &src, &perm, assign.as_deref()),
        Cmd::Models { src, n } => c::models(ctx, &src, n, true),
        Cmd::Count { src, n } => c::models(ctx, &src, n, false),
        Cmd::Ef {
            perm1,
            perm2,
            k,
            marks1,
            marks2,
            max_size,
        } => c::ef(ctx, &perm1, &perm2, k, marks1.as_deref().zip(marks2.as_deref()), max_size),
        Cmd::Compile { close, kind } => c::compile(ctx, kind, close),
        Cmd::Sort { op, perm } => c::sort(&op, &perm),
        Cmd::Stable { pattern, perm } => c::stable(&pattern, &perm),
        Cmd::Region { perm, at } => c::region(&perm, &at),
        Cmd::Decompose { matrix } => c::decompose(ctx, matrix),
        Cmd::Expand { pattern, cycle, inflate } => c::expand(&pattern, &cycle, inflate.as_deref()),
        Cmd::Verify { suite, ops } => c::verify(ctx, &suite, ops.as_deref()),
    }
}
