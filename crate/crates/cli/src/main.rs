//! `causalrate` command-line front end. JSON to stdout (or `--out`),
//! diagnostics to stderr.
//!
//! Exit codes: 0 success, 2 input or usage error, 3 identification failure.

mod evaluate;
mod input;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use causalrate::identify::{identify_effect, noise_verdict, rating_comparison};
use causalrate::road::{build_scenario, simulate_journeys, write_journeys_csv};
use causalrate::{EffectQuery, Error, TemplateId};
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::json;

use input::Source;

/// Default seed when neither `--seed` nor `CAUSALRATE_SEED` is given.
const DEFAULT_SEED: u64 = 42;

#[derive(Parser)]
#[command(name = "causalrate", version, about = "Causal identification and elimination checks for rating variables")]
struct Cli {
    /// Seed for random CPTs on bare graphs and for simulation.
    #[arg(long, global = true, env = "CAUSALRATE_SEED", default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// List built-in graphs, or print one as JSON.
    Templates { name: Option<String> },
    /// Test whether X and Y are d-separated given Z.
    Dsep {
        #[command(flatten)]
        source: Source,
        #[arg(long, value_delimiter = ',', required = true)]
        x: Vec<String>,
        #[arg(long, value_delimiter = ',', required = true)]
        y: Vec<String>,
        #[arg(long, value_delimiter = ',')]
        z: Vec<String>,
        #[command(flatten)]
        out: Out,
    },
    /// Identify an interventional distribution, e.g. "P(Y_f | do(J_o, D))".
    Identify {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        effect: String,
        #[command(flatten)]
        out: Out,
    },
    /// Decide whether a candidate rating variable is noise.
    Verdict {
        #[command(flatten)]
        source: Source,
        #[arg(long)]
        candidate: String,
        #[arg(long)]
        outcome: String,
        #[arg(long, value_delimiter = ',')]
        observed: Vec<String>,
        #[command(flatten)]
        out: Out,
    },
    /// Simulate journeys from a road-risk scenario.
    Simulate {
        #[command(flatten)]
        source: Source,
        /// Number of journeys.
        #[arg(long, value_parser = clap::value_parser!(u64).range(1..))]
        n: u64,
        /// CSV destination; stdout when absent.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Summary JSON destination; stdout when the CSV goes to a file,
        /// stderr otherwise.
        #[arg(long)]
        summary: Option<PathBuf>,
    },
    /// Full evaluation report of a road-risk scenario.
    Evaluate {
        #[command(flatten)]
        source: Source,
        /// Pass/fail tolerance for exact identities.
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[command(flatten)]
        out: Out,
    },
    /// Rating capacities and the claim-history verdict for a model.
    Report {
        #[command(flatten)]
        source: Source,
        #[arg(long, default_value = "Y_f")]
        outcome: String,
        #[arg(long, default_value = "Y_h")]
        history: String,
        #[arg(long, value_delimiter = ',', default_value = "X_c")]
        classification: Vec<String>,
        #[command(flatten)]
        out: Out,
    },
}

#[derive(Args)]
struct Out {
    /// Write JSON here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn writer(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(io::stdout().lock()),
    })
}

fn emit<T: Serialize>(value: &T, out: &Out) -> Result<()> {
    write_json(value, out.out.as_deref())
}

fn write_json<T: Serialize>(value: &T, path: Option<&Path>) -> Result<()> {
    let mut w = writer(path)?;
    serde_json::to_writer_pretty(&mut w, value)?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn run(cli: Cli) -> Result<()> {
    let seed = cli.seed;
    match cli.command {
        Command::Templates { name: None } => {
            let ids: Vec<String> = TemplateId::ALL.iter().map(|t| t.family().to_string()).collect();
            write_json(&json!({ "templates": ids }), None)
        }
        Command::Templates { name: Some(name) } => {
            let id: TemplateId = name.parse()?;
            write_json(&id.build()?.to_doc(), None)
        }
        Command::Dsep { source, x, y, z, out } => {
            let g = source.load()?.graph()?;
            let body = match g.active_trail(&x, &y, &z)? {
                None => json!({ "separated": true }),
                Some(trail) => json!({ "separated": false, "witness": trail }),
            };
            emit(&body, &out)
        }
        Command::Identify { source, effect, out } => {
            let scm = source.load()?.model(seed)?;
            let q: EffectQuery = effect.parse()?;
            let id = identify_effect(&scm, &q)?;
            emit(&id, &out)
        }
        Command::Verdict { source, candidate, outcome, observed, out } => {
            let g = source.load()?.graph()?;
            emit(&noise_verdict(&g, &candidate, &outcome, &observed)?, &out)
        }
        Command::Simulate { source, n, out, summary } => {
            let s = source.load()?.scenario()?;
            let n = n as usize;
            let records = simulate_journeys(&s, n, seed)?;
            write_journeys_csv(&records, writer(out.as_deref())?)?;
            let exact = build_scenario(&s)?.exact_joint()?.prob(&[("Y_f", 1)])?;
            let accidents = records.iter().filter(|r| r.y_f == 1).count();
            let empirical = accidents as f64 / n as f64;
            let sigma = (exact * (1.0 - exact) / n as f64).sqrt();
            let report = json!({
                "scenario": s.name,
                "n": n,
                "seed": seed,
                "journeys_started": records.iter().filter(|r| r.j_o == 1).count(),
                "accidents": accidents,
                "empirical_p_accident": empirical,
                "exact_p_accident": exact,
                "binomial_sigma": sigma,
                "within_3_sigma": (empirical - exact).abs() <= 3.0 * sigma,
            });
            match (summary, out) {
                (Some(p), _) => write_json(&report, Some(&p)),
                (None, Some(_)) => write_json(&report, None),
                (None, None) => {
                    eprintln!("{}", serde_json::to_string_pretty(&report)?);
                    Ok(())
                }
            }
        }
        Command::Evaluate { source, tolerance, out } => {
            let s = source.load()?.scenario()?;
            emit(&evaluate::evaluate(&s, tolerance)?, &out)
        }
        Command::Report { source, outcome, history, classification, out } => {
            let scm = source.load()?.model(seed)?;
            let j = scm.exact_joint()?.marginal(&scm.dag().observed())?;
            let capacity =
                rating_comparison(&j, std::slice::from_ref(&history), &classification, std::slice::from_ref(&outcome))?;
            let verdict = noise_verdict(scm.dag(), &history, &outcome, &classification)?;
            emit(
                &json!({
                    "outcome": outcome,
                    "history": history,
                    "classification": classification,
                    "capacity": capacity,
                    "verdict": verdict,
                }),
                &out,
            )
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => match e.downcast_ref::<Error>() {
            Some(
                err @ (Error::CriterionNotMet { .. } | Error::LatentAdjustment(_) | Error::PositivityViolation(_)),
            ) => {
                let body = match err {
                    Error::CriterionNotMet { criterion, reason, witness } => json!({
                        "error": "criterion_not_met",
                        "criterion": criterion,
                        "reason": reason,
                        "witness": witness,
                    }),
                    Error::LatentAdjustment(v) => json!({ "error": "latent_adjustment", "variable": v }),
                    other => json!({ "error": "positivity_violation", "reason": other.to_string() }),
                };
                println!("{}", serde_json::to_string_pretty(&body).expect("json"));
                eprintln!("error: {err}");
                ExitCode::from(3)
            }
            _ => {
                eprintln!("error: {e:#}");
                ExitCode::from(2)
            }
        },
    }
}
