//! `maskent` command-line front end.
//!
//! Exit codes: 0 when every asserted bound holds, 1 when a violation was
//! found, 2 on usage, input or budget errors. Stdout carries exactly one
//! JSON document (or CSV body); diagnostics go to stderr.

use std::ffi::OsString;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, Result};
use crate::family::{square_family, Budget, FunctionTable, TableFile};
use crate::gf::{build_field, field_of_order, FieldSpec, FieldVector};
use crate::verify::{run_campaign, verify_instance, CampaignConfig, Mode};

#[derive(Debug, Parser)]
#[command(name = "maskent", version, about = "Collision-probability and entropy checks for f(x) + k⊙x over GF(q)^n")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Dump the addition and multiplication tables of GF(p^m)
    Field(FieldArgs),
    /// Verify a single function table
    Verify(VerifyArgs),
    /// Run an exhaustive, random or hill-climb campaign
    Campaign(CampaignArgs),
    /// Compare the square map against its predicted averages
    Tightness(TightnessArgs),
    /// Hill-climb search for tables with large average collision probability
    Search(SearchArgs),
}

#[derive(Debug, Args)]
struct FieldArgs {
    /// Characteristic
    #[arg(long)]
    p: Option<u32>,
    /// Extension degree (default 1)
    #[arg(long)]
    m: Option<u32>,
    /// Field order, resolved to p^m
    #[arg(long)]
    q: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Builtin {
    Square,
    Zero,
    Identity,
    /// Reverses the coordinates
    Reverse,
}

#[derive(Debug, Args)]
struct OutputArgs {
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    /// Function table JSON file
    #[arg(long, conflicts_with = "function")]
    table: Option<PathBuf>,
    /// Built-in function (needs a field and --n)
    #[arg(long, value_enum)]
    function: Option<Builtin>,
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    n: Option<usize>,
    /// Include per-key rows
    #[arg(long)]
    per_k: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct CampaignArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    n: usize,
    #[arg(long, value_enum)]
    suite: Mode,
    #[arg(long, default_value_t = 1000)]
    samples: usize,
    #[arg(long, default_value_t = 5000)]
    iters: usize,
    #[arg(long, default_value_t = 4)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sampled instances that also get the joint-collision and shell checks
    #[arg(long, default_value_t = 50)]
    identity_checks: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct TightnessArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    per_k: bool,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[command(flatten)]
    field: FieldArgs,
    #[arg(long)]
    n: usize,
    #[arg(long, default_value_t = 5000)]
    iters: usize,
    #[arg(long, default_value_t = 4)]
    restarts: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[command(flatten)]
    output: OutputArgs,
}

/// Result of one invocation.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Outcome {
    pub code: u8,
    pub stdout: String,
    pub stderr: String,
}

struct Report {
    body: String,
    clean: bool,
    out: Option<PathBuf>,
    note: Option<String>,
}

/// Parses `args` (program name first) and executes the subcommand.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return if e.use_stderr() {
                Outcome { code: 2, stdout: String::new(), stderr: text }
            } else {
                Outcome { code: 0, stdout: text, stderr: String::new() }
            };
        }
    };
    finish(Budget::from_env().and_then(|budget| execute(cli.command, budget)))
}

fn finish(report: Result<Report>) -> Outcome {
    match report {
        Ok(r) => {
            let mut stderr = r.note.map(|n| n + "\n").unwrap_or_default();
            let code = if r.clean { 0 } else { 1 };
            if !r.clean {
                stderr.push_str("violations detected\n");
            }
            match r.out {
                Some(path) => match std::fs::write(&path, &r.body) {
                    Ok(()) => Outcome { code, stdout: String::new(), stderr },
                    Err(e) => Outcome {
                        code: 2,
                        stdout: String::new(),
                        stderr: format!("error: cannot write {}: {e}\n", path.display()),
                    },
                },
                None => Outcome { code, stdout: r.body, stderr },
            }
        }
        Err(e) => Outcome {
            code: 2,
            stdout: String::new(),
            stderr: format!("error: {e}\n"),
        },
    }
}

/// Reads and validates a function table file.
pub fn load_table(path: &Path) -> Result<FunctionTable> {
    let text = std::fs::read_to_string(path)?;
    let file: TableFile = serde_json::from_str(&text)?;
    FunctionTable::from_file(&file)
}

fn resolve_field(args: &FieldArgs) -> Result<FieldSpec> {
    let field = match (args.p, args.q) {
        (None, None) => return Err(Error::Invalid("give --q or --p/--m".into())),
        (None, Some(q)) => {
            if args.m.is_some() {
                return Err(Error::Invalid("--m needs --p".into()));
            }
            field_of_order(q)?
        }
        (Some(p), q) => {
            let f = build_field(p, args.m.unwrap_or(1))?;
            if let Some(q) = q.filter(|&q| q != f.q() as u64) {
                return Err(Error::Invalid(format!("--q {q} disagrees with --p/--m")));
            }
            f
        }
    };
    Ok(field)
}

fn builtin_table(kind: Builtin, field: Arc<FieldSpec>, n: usize) -> Result<FunctionTable> {
    match kind {
        Builtin::Square => {
            if n == 0 {
                return Err(Error::Invalid("dimension n must be at least 1".into()));
            }
            Ok(square_family(field, n))
        }
        Builtin::Zero => FunctionTable::from_fn(field, n, |_| FieldVector::zeros(n)),
        Builtin::Identity => FunctionTable::from_fn(field, n, |x| x.clone()),
        Builtin::Reverse => FunctionTable::from_fn(field, n, |x| {
            FieldVector::new(x.entries().iter().rev().copied().collect()).unwrap()
        }),
    }
}

fn json_only(output: &OutputArgs) -> Result<()> {
    match output.format {
        Format::Json => Ok(()),
        Format::Csv => Err(Error::Invalid("CSV output is only available for campaigns".into())),
    }
}

fn execute(command: Command, budget: Budget) -> Result<Report> {
    match command {
        Command::Field(args) => {
            let field = resolve_field(&args)?;
            Ok(Report {
                body: serde_json::to_string_pretty(&field.dump())? + "\n",
                clean: true,
                out: None,
                note: None,
            })
        }
        Command::Verify(args) => {
            json_only(&args.output)?;
            let table = match (&args.table, args.function) {
                (Some(path), None) => load_table(path)?,
                (None, Some(kind)) => {
                    let field = Arc::new(resolve_field(&args.field)?);
                    let n = args.n.ok_or_else(|| Error::Invalid("--function needs --n".into()))?;
                    builtin_table(kind, field, n)?
                }
                _ => return Err(Error::Invalid("give exactly one of --table or --function".into())),
            };
            let report = verify_instance(&table, args.per_k, budget)?;
            Ok(Report {
                clean: report.violations.is_empty(),
                body: report.to_json() + "\n",
                out: args.output.out,
                note: None,
            })
        }
        Command::Tightness(args) => {
            json_only(&args.output)?;
            let field = Arc::new(resolve_field(&args.field)?);
            let table = builtin_table(Builtin::Square, field, args.n)?;
            let report = verify_instance(&table, args.per_k, budget)?;
            Ok(Report {
                clean: report.violations.is_empty(),
                body: report.to_json() + "\n",
                out: args.output.out,
                note: None,
            })
        }
        Command::Campaign(args) => {
            let field = resolve_field(&args.field)?;
            let config = CampaignConfig {
                q: field.q(),
                n: args.n,
                mode: args.suite,
                samples: args.samples,
                iters: args.iters,
                restarts: args.restarts,
                seed: args.seed,
                budget,
                identity_checks: args.identity_checks,
            };
            campaign_report(&config, &args.output)
        }
        Command::Search(args) => {
            let field = resolve_field(&args.field)?;
            let mut config = CampaignConfig::new(field.q(), args.n, Mode::Hillclimb);
            config.iters = args.iters;
            config.restarts = args.restarts;
            config.seed = args.seed;
            config.budget = budget;
            campaign_report(&config, &args.output)
        }
    }
}

fn campaign_report(config: &CampaignConfig, output: &OutputArgs) -> Result<Report> {
    let result = run_campaign(config)?;
    let body = match output.format {
        Format::Json => result.to_json() + "\n",
        Format::Csv => result.to_csv(),
    };
    Ok(Report {
        clean: result.violations.is_empty(),
        body,
        out: output.out.clone(),
        note: Some(format!(
            "{} instances in {:.3} s",
            result.instances.len(),
            result.wall_time.as_secs_f64()
        )),
    })
}
