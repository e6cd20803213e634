use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use serde_json::{json, Value};

use weilmot_cli::input::{InputRecord, RunOptions};
use weilmot_cli::{batch, commands, CliError};
use weilmot_core::PRECISION_ENV;

#[derive(Parser)]
#[command(name = "weilmot", version, about = "Frobenius eigenvalue invariants and Lefschetz motive decompositions")]
struct Cli {
    #[command(flatten)]
    options: GlobalOptions,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct GlobalOptions {
    /// Coordinate bound for the multiplicative relation search.
    #[arg(long, global = true)]
    search_bound: Option<u32>,
    /// Largest splitting field degree attempted.
    #[arg(long, global = true)]
    degree_cap: Option<u32>,
    /// Precision ceiling in bits for root isolation.
    #[arg(long, global = true, env = PRECISION_ENV)]
    max_precision: Option<u32>,
    /// Largest power d accepted by `motives` and `decompose`.
    #[arg(long, global = true)]
    max_power: Option<u32>,
    /// Extension degrees tried by the geometric simplicity probe.
    #[arg(long, global = true)]
    probe_bound: Option<u32>,
    /// Largest power included in batch reports and the `decompose` default.
    #[arg(long, global = true)]
    report_power: Option<u32>,
}

impl GlobalOptions {
    fn resolve(&self) -> Result<RunOptions, CliError> {
        let mut m = serde_json::Map::new();
        for (k, v) in [
            ("search_bound", self.search_bound),
            ("degree_cap", self.degree_cap),
            ("max_precision", self.max_precision),
            ("max_power", self.max_power),
            ("probe_bound", self.probe_bound),
            ("report_power", self.report_power),
        ] {
            if let Some(v) = v {
                m.insert(k.into(), json!(v));
            }
        }
        RunOptions::default().with_overrides(&m)
    }
}

#[derive(Args)]
struct RecordArgs {
    /// Whole record as JSON, e.g. '{"q": 5, "coeffs": [5, -1, 1]}'.
    #[arg(long, conflicts_with_all = ["q", "coeffs"])]
    record: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    q: Option<String>,
    /// Comma-separated coefficients, constant term first.
    #[arg(long, allow_hyphen_values = true)]
    coeffs: Option<String>,
    #[arg(long)]
    label: Option<String>,
}

impl RecordArgs {
    fn record(&self) -> Result<InputRecord, CliError> {
        if let Some(r) = &self.record {
            let mut rec = InputRecord::parse(r)?;
            if self.label.is_some() {
                rec.label = self.label.clone();
            }
            return Ok(rec);
        }
        let (Some(q), Some(coeffs)) = (&self.q, &self.coeffs) else {
            return Err(CliError::Malformed("give --record or both --q and --coeffs".into()));
        };
        let int = |s: &str| s.trim().parse::<BigInt>().map_err(|_| CliError::Malformed(format!("not an integer: {s:?}")));
        Ok(InputRecord {
            label: self.label.clone(),
            q: int(q)?,
            coeffs: coeffs.split(',').map(int).collect::<Result<_, _>>()?,
            cm_assertion: None,
            options: serde_json::Map::new(),
        })
    }
}

#[derive(Subcommand)]
enum Command {
    /// Check that the polynomial is a Weil q-polynomial.
    Validate(RecordArgs),
    /// Multiplicity, Frobenius rank, kernel rank and their identities.
    Invariants(RecordArgs),
    /// Enriched eigenvalue group and the kernel of its realization.
    Eig(RecordArgs),
    /// Splitting field and Galois group as root permutations.
    Galois(RecordArgs),
    /// Orbit decomposition of weight 2n classes on A^d.
    Motives {
        #[command(flatten)]
        record: RecordArgs,
        #[arg(long)]
        power: u32,
        #[arg(long)]
        codim: u32,
        /// Decompose the primitive part instead of the full cohomology.
        #[arg(long)]
        primitive: bool,
    },
    /// Dimension summary for every power up to --power and every codimension.
    Decompose {
        #[command(flatten)]
        record: RecordArgs,
        #[arg(long)]
        power: Option<u32>,
    },
    /// Structural hypotheses for the positivity statement.
    CheckHypotheses {
        #[command(flatten)]
        record: RecordArgs,
        /// Assert (or with =false deny) a totally real field for condition 3.
        #[arg(long, num_args = 0..=1, default_missing_value = "true")]
        assert_cm: Option<bool>,
    },
    /// Exact quadratic form computations on matrix files.
    Signature {
        #[command(subcommand)]
        command: SignatureCommand,
    },
    /// Process a file of newline-delimited records into an append-only report file.
    Batch {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long = "out")]
        output: PathBuf,
        #[arg(long, default_value_t = 1)]
        jobs: usize,
    },
}

#[derive(Subcommand)]
enum SignatureCommand {
    /// Signature of each matrix in FILE.
    Sig { file: PathBuf },
    /// Signature transfer from four forms: eta, eta2 under the first functor, then under the second.
    Transfer { file: PathBuf },
    /// Constant-signature certificate for a form and an operator.
    Certify { file: PathBuf },
    /// Rank-2 signatures compatible with multiplicity m.
    AmFilter {
        #[arg(long)]
        m: u32,
    },
}

fn read(path: &PathBuf) -> Result<String, CliError> {
    std::fs::read_to_string(path).map_err(|e| CliError::Io(format!("{}: {e}", path.display())))
}

fn run(cli: Cli) -> Result<Value, CliError> {
    let opts = cli.options.resolve()?;
    match cli.command {
        Command::Validate(r) => commands::validate(r.record()?, &opts),
        Command::Invariants(r) => commands::invariants(r.record()?, &opts),
        Command::Eig(r) => commands::eig(r.record()?, &opts),
        Command::Galois(r) => commands::galois(r.record()?, &opts),
        Command::Motives { record, power, codim, primitive } => {
            commands::motives(record.record()?, &opts, power, codim, primitive)
        }
        Command::Decompose { record, power } => commands::decompose(record.record()?, &opts, power),
        Command::CheckHypotheses { record, assert_cm } => commands::check_hypotheses(record.record()?, &opts, assert_cm),
        Command::Signature { command } => match command {
            SignatureCommand::Sig { file } => commands::signature_of(&read(&file)?),
            SignatureCommand::Transfer { file } => commands::transfer(&read(&file)?),
            SignatureCommand::Certify { file } => commands::certify(&read(&file)?),
            SignatureCommand::AmFilter { m } => commands::am_filter_cmd(m),
        },
        Command::Batch { input, output, jobs } => {
            let s = batch::run(&input, &output, jobs, &opts)?;
            eprintln!("{}", s.message());
            Ok(s.to_json(&output))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(v) => {
            println!("{v}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            println!("{}", json!({ "kind": "error", "error": e.name(), "message": e.to_string() }));
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
