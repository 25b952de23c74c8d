use std::io::Read;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use numring_cli::{parse_job, run, JobError, JobSpec, OutputFormat, DEFAULT_PRECISION};
use serde_json::{Map, Value};

#[derive(Parser, Debug)]
#[command(name = "numring", version, about = "Regulators, Bloch elements, heights and K-theory ranks of number rings")]
struct Cli {
    /// Field description as JSON, or a path to a JSON file.
    #[arg(long, global = true)]
    field: Option<String>,
    /// Decimal digits of precision.
    #[arg(long, global = true, default_value_t = DEFAULT_PRECISION)]
    precision: u32,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    output: Format,
    /// Read a complete JSON job; `-` for stdin.
    #[arg(long)]
    job: Option<String>,
    #[command(subcommand)]
    command: Option<Command>,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Degree, signature and certified embeddings.
    FieldInfo,
    /// Li2(z) and the Bloch-Wigner function D(z).
    Dilog {
        /// Complex number such as `0.5+0.25i`.
        #[arg(long, allow_hyphen_values = true)]
        z: String,
    },
    /// Exact Bloch-kernel basis over candidate exceptional units.
    BlochCheck {
        /// JSON array of elements.
        #[arg(long)]
        candidates: String,
        /// JSON array of multiplicative generators; defaults to -1, lambda, 1 - lambda.
        #[arg(long)]
        generators: Option<String>,
    },
    /// K3 regulator of a Bloch element.
    Regulator {
        /// `{"support": [...], "multiplicities": [...]}`.
        #[arg(long)]
        element: String,
        /// Generators used to check that the element lies in the kernel.
        #[arg(long)]
        generators: Option<String>,
        /// Also print the values divided by 2 pi.
        #[arg(long)]
        two_pi: bool,
    },
    /// Unit regulator vector and its mean.
    UnitReg {
        #[arg(long, allow_hyphen_values = true)]
        unit: String,
    },
    /// Arithmetic degree of a metrized line bundle.
    Degree {
        #[arg(long)]
        bundle: String,
        #[arg(long, allow_hyphen_values = true)]
        section: Option<String>,
    },
    /// Height of the class attached to a bundle whose n-th power is principal.
    Height {
        #[arg(long)]
        bundle: String,
        #[arg(long, default_value_t = 1)]
        n: u32,
        #[arg(long, allow_hyphen_values = true)]
        generator: String,
    },
    /// Rational ranks of the odd negative degrees.
    Kranks {
        #[arg(long, default_value_t = numring_core::kmodel::DEFAULT_MAX_P)]
        max_p: u32,
    },
}

/// Flag values are JSON when they parse as JSON, otherwise plain strings.
fn flag_value(s: &str) -> Value {
    serde_json::from_str(s).unwrap_or_else(|_| Value::String(s.to_string()))
}

fn read_source(s: &str) -> Result<String, JobError> {
    if s == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf).map_err(|e| JobError::schema(format!("stdin: {e}")))?;
        return Ok(buf);
    }
    let t = s.trim_start();
    if t.starts_with('{') || t.starts_with('[') {
        return Ok(s.to_string());
    }
    std::fs::read_to_string(s).map_err(|e| JobError::schema(format!("{s}: {e}")))
}

fn build_job(cli: Cli) -> Result<JobSpec, JobError> {
    if let Some(src) = &cli.job {
        if cli.command.is_some() {
            return Err(JobError::schema("--job cannot be combined with a subcommand"));
        }
        return parse_job(&read_source(src)?);
    }
    let Some(command) = cli.command else {
        return Err(JobError::schema("missing subcommand; see --help"));
    };
    let field = match &cli.field {
        Some(f) => Some(
            serde_json::from_str(&read_source(f)?).map_err(|e| JobError::schema(format!("--field: invalid JSON: {e}")))?,
        ),
        None => None,
    };
    let mut p = Map::new();
    let name = match command {
        Command::FieldInfo => "field-info",
        Command::Dilog { z } => {
            p.insert("z".into(), Value::String(z));
            "dilog"
        }
        Command::BlochCheck { candidates, generators } => {
            p.insert("candidates".into(), flag_value(&candidates));
            if let Some(g) = generators {
                p.insert("generators".into(), flag_value(&g));
            }
            "bloch-check"
        }
        Command::Regulator { element, generators, two_pi } => {
            p.insert("element".into(), flag_value(&element));
            if let Some(g) = generators {
                p.insert("generators".into(), flag_value(&g));
            }
            p.insert("two_pi".into(), Value::Bool(two_pi));
            "regulator"
        }
        Command::UnitReg { unit } => {
            p.insert("unit".into(), flag_value(&unit));
            "unit-reg"
        }
        Command::Degree { bundle, section } => {
            p.insert("bundle".into(), flag_value(&bundle));
            if let Some(s) = section {
                p.insert("section".into(), flag_value(&s));
            }
            "degree"
        }
        Command::Height { bundle, n, generator } => {
            p.insert("bundle".into(), flag_value(&bundle));
            p.insert("n".into(), n.into());
            p.insert("generator".into(), flag_value(&generator));
            "height"
        }
        Command::Kranks { max_p } => {
            p.insert("max_p".into(), max_p.into());
            "kranks"
        }
    };
    Ok(JobSpec {
        command: name.to_string(),
        field,
        payload: p,
        precision: cli.precision,
        output: match cli.output {
            Format::Text => OutputFormat::Text,
            Format::Json => OutputFormat::Json,
        },
    })
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) if matches!(e.kind(), clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion) => {
            print!("{e}");
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let msg = e.to_string();
            let first = msg.lines().next().unwrap_or("invalid arguments").trim_start_matches("error: ");
            eprintln!("{}", JobError::schema(first).to_line());
            return ExitCode::from(1);
        }
    };
    match build_job(cli).and_then(|job| run(&job)) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("{}", e.to_line());
            ExitCode::from(e.code as u8)
        }
    }
}
