//! The `chainlogic` command line.
//!
//! Exit status 0 means the property was established (holds, valid, proof
//! accepted, no countermodel within the budget), 1 means it was refuted and
//! a witness or diagnostic was printed, 2 means the invocation itself was
//! wrong: usage, parse, or file format errors.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use crate::formula::{parse, Formula};
use crate::proofcheck::{check_script, ProofScript};
use crate::protocol::{telephone, ChainProtocol, Run, LATIN};
use crate::search::{falsify, SearchBounds};
use crate::semantics::EvalContext;

#[derive(Parser, Debug)]
#[command(name = "chainlogic", version, about = "Epistemic logic over communication chains")]
struct Cli {
    /// Print one JSON object instead of text.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Print the minimal scope of a formula.
    Scope {
        #[arg(value_name = "FORMULA", conflicts_with = "formula")]
        text: Option<String>,
        #[arg(long)]
        formula: Option<String>,
    },
    /// Evaluate a formula at one run of a protocol file.
    Eval {
        #[arg(long)]
        protocol: PathBuf,
        #[command(flatten)]
        eval: EvalArgs,
    },
    /// Check a formula at every run of a protocol file.
    Valid {
        #[arg(long)]
        protocol: PathBuf,
        #[command(flatten)]
        check: CheckArgs,
    },
    /// Check a proof script.
    Prove {
        #[arg(long)]
        script: PathBuf,
    },
    /// Search small protocols for a run falsifying a formula.
    Falsify(FalsifyArgs),
    /// Work with the Telephone game protocol.
    Telephone {
        /// Word length.
        #[arg(long)]
        len: usize,
        /// `latin` or the literal letters to use.
        #[arg(long, default_value = "latin")]
        alphabet: String,
        /// Number of channels.
        #[arg(long)]
        chain: usize,
        #[command(subcommand)]
        verb: TelephoneVerb,
    },
}

#[derive(Subcommand, Debug)]
enum TelephoneVerb {
    Eval(EvalArgs),
    Valid(CheckArgs),
    /// Print the first run falsifying the formula, if any.
    Counterexample(CheckArgs),
    /// Print the number of runs.
    Count,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// Comma-separated value labels, one per channel.
    #[arg(long)]
    run: String,
    #[command(flatten)]
    check: CheckArgs,
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long)]
    formula: String,
    /// Reject boxes on channels outside the protocol window.
    #[arg(long)]
    strict_window: bool,
}

#[derive(Args, Debug)]
struct FalsifyArgs {
    #[arg(long)]
    formula: String,
    #[arg(long, default_value_t = 3)]
    channels: usize,
    #[arg(long, default_value_t = 2)]
    max_values: usize,
    #[arg(long, default_value_t = 1)]
    atoms: usize,
    /// Sample protocols from this seed instead of enumerating them.
    #[arg(long)]
    seed: Option<u64>,
    /// Number of random samples (implies random mode).
    #[arg(long)]
    samples: Option<usize>,
    #[arg(long, default_value_t = 100_000)]
    budget: u64,
}

/// Verdict of a successful invocation.
enum Outcome {
    Established,
    Refuted,
}

struct Report {
    outcome: Outcome,
    text: Vec<String>,
    json: Value,
}

impl Report {
    fn new(outcome: Outcome, text: impl Into<String>, json: Value) -> Report {
        Report {
            outcome,
            text: vec![text.into()],
            json,
        }
    }

    fn line(mut self, text: impl Into<String>) -> Report {
        self.text.push(text.into());
        self
    }
}

/// Runs the command line `argv` (program name first) and returns the exit
/// status.
pub fn run_cli<I, S>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let first = e.to_string();
                let first = first.lines().next().unwrap_or("invalid usage");
                let _ = writeln!(stderr, "{first}");
                return 2;
            }
            let _ = write!(stdout, "{e}");
            return 0;
        }
    };
    match dispatch(&cli.command) {
        Ok(report) => {
            let written = if cli.json {
                writeln!(stdout, "{}", report.json)
            } else {
                report.text.iter().try_for_each(|l| writeln!(stdout, "{l}"))
            };
            if written.is_err() {
                return 2;
            }
            match report.outcome {
                Outcome::Established => 0,
                Outcome::Refuted => 1,
            }
        }
        Err(e) => {
            let msg = format!("error: {e:#}");
            let _ = writeln!(stderr, "{}", msg.replace('\n', " "));
            2
        }
    }
}

fn formula(text: &str) -> Result<Formula> {
    parse(text).with_context(|| format!("cannot parse formula {text:?}"))
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn load_protocol(path: &Path) -> Result<ChainProtocol> {
    ChainProtocol::from_json(&read(path)?).with_context(|| format!("in {}", path.display()))
}

fn labels(p: &ChainProtocol, run: &Run) -> Vec<String> {
    p.run_labels(run)
}

fn dispatch(cmd: &Command) -> Result<Report> {
    match cmd {
        Command::Scope { text, formula: flag } => {
            let Some(t) = text.as_ref().or(flag.as_ref()) else {
                bail!("scope needs a formula");
            };
            let s = formula(t)?.scope();
            Ok(Report::new(
                Outcome::Established,
                s.to_string(),
                json!({ "command": "scope", "scope": s.iter().collect::<Vec<_>>() }),
            ))
        }
        Command::Eval { protocol, eval } => eval_run(&load_protocol(protocol)?, eval),
        Command::Valid { protocol, check } => valid(&load_protocol(protocol)?, check, "valid"),
        Command::Prove { script } => prove(script),
        Command::Falsify(args) => search(args),
        Command::Telephone {
            len,
            alphabet,
            chain,
            verb,
        } => {
            let letters = if alphabet == "latin" { LATIN } else { alphabet.as_str() };
            let p = telephone(*len, letters, *chain)?;
            match verb {
                TelephoneVerb::Eval(args) => eval_run(&p, args),
                TelephoneVerb::Valid(args) => valid(&p, args, "valid"),
                TelephoneVerb::Counterexample(args) => valid(&p, args, "counterexample"),
                TelephoneVerb::Count => {
                    let n = p.run_count()?;
                    Ok(Report::new(
                        Outcome::Established,
                        n.to_string(),
                        json!({ "command": "count", "runs": n.to_string() }),
                    ))
                }
            }
        }
    }
}

fn eval_run(p: &ChainProtocol, args: &EvalArgs) -> Result<Report> {
    let f = formula(&args.check.formula)?;
    let parts: Vec<&str> = args.run.split(',').map(str::trim).collect();
    let run = p.run_from_labels(&parts)?;
    if !p.is_run(&run) {
        bail!("({}) is not a run of the protocol", parts.join(", "));
    }
    let mut ctx = EvalContext::new(p).strict_window(args.check.strict_window);
    let holds = ctx.eval(&run, &f)?;
    if holds {
        return Ok(Report::new(
            Outcome::Established,
            "true",
            json!({ "command": "eval", "holds": true }),
        ));
    }
    let witness = ctx.refutation(&run, &f)?;
    let mut report = Report::new(
        Outcome::Refuted,
        "false",
        json!({
            "command": "eval",
            "holds": false,
            "witness": witness.as_ref().map(|w| labels(p, w)),
        }),
    );
    if let Some(w) = witness {
        report = report.line(format!("witness: {}", w.display(p)));
    }
    Ok(report)
}

fn valid(p: &ChainProtocol, args: &CheckArgs, command: &str) -> Result<Report> {
    let f = formula(&args.formula)?;
    let mut ctx = EvalContext::new(p).strict_window(args.strict_window);
    let cex = ctx.counterexample(&f)?;
    let json = json!({
        "command": command,
        "valid": cex.is_none(),
        "counterexample": cex.as_ref().map(|r| labels(p, r)),
    });
    Ok(match (cex, command) {
        (None, "valid") => Report::new(Outcome::Established, "valid", json),
        (None, _) => Report::new(Outcome::Established, "none", json),
        (Some(r), "valid") => Report::new(Outcome::Refuted, "not valid", json)
            .line(format!("counterexample: {}", r.display(p))),
        (Some(r), _) => Report::new(Outcome::Refuted, r.display(p).to_string(), json),
    })
}

fn prove(path: &Path) -> Result<Report> {
    let script = ProofScript::from_json(&read(path)?).with_context(|| format!("in {}", path.display()))?;
    let verdict = check_script(&script);
    let lines: Vec<Value> = verdict
        .lines
        .iter()
        .map(|l| {
            json!({
                "id": l.id,
                "ok": l.result.is_ok(),
                "tainted": l.tainted,
                "reason": l.result.as_ref().err().map(ToString::to_string),
            })
        })
        .collect();
    let json = json!({
        "command": "prove",
        "accepted": verdict.accepted(),
        "line": verdict.failing_line(),
        "reason": verdict.failure.as_ref().map(|(_, r)| r.to_string()),
        "lines": lines,
    });
    let outcome = if verdict.accepted() {
        Outcome::Established
    } else {
        Outcome::Refuted
    };
    Ok(Report::new(outcome, verdict.to_string(), json))
}

fn search(args: &FalsifyArgs) -> Result<Report> {
    let f = formula(&args.formula)?;
    let bounds = if args.seed.is_some() || args.samples.is_some() {
        SearchBounds::random(
            args.channels,
            args.max_values,
            args.atoms,
            args.seed.unwrap_or(0),
            args.samples.unwrap_or(1000),
        )
    } else {
        SearchBounds::exhaustive(args.channels, args.max_values, args.atoms)
    };
    if args.budget == 0 {
        bail!("--budget must be positive");
    }
    let report = falsify(&f, &bounds, args.budget)?;
    let checked = report.protocols_checked;
    match report.witness {
        Some(w) => {
            let spec = w.protocol.to_spec();
            let run = labels(&w.protocol, &w.run);
            let json = json!({
                "command": "falsify",
                "found": true,
                "formula": w.formula.sugared().to_string(),
                "shift": w.shift,
                "protocol": serde_json::to_value(&spec)?,
                "run": run,
                "checked": checked,
            });
            let compact = serde_json::to_string(&spec)?;
            Ok(Report::new(Outcome::Refuted, "falsified", json)
                .line(format!("formula: {}", w.formula.sugared()))
                .line(format!("protocol: {compact}"))
                .line(format!("run: {}", w.run.display(&w.protocol)))
                .line(format!("checked {checked} protocol(s)")))
        }
        None => {
            let scope = if report.exhausted {
                "the whole bounded space"
            } else {
                "the budget"
            };
            Ok(Report::new(
                Outcome::Established,
                format!("no countermodel among {checked} protocol(s) ({scope}); this proves nothing beyond the bounds"),
                json!({
                    "command": "falsify",
                    "found": false,
                    "checked": checked,
                    "exhausted": report.exhausted,
                }),
            ))
        }
    }
}
