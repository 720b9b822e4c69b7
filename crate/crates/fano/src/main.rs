use std::path::Path;
use std::process::ExitCode;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use clap::{Args, Parser, Subcommand};
use fano_rigidity::text::{render_explain, render_report};
use fano_rigidity::{build_report, explain, export_equations, load, to_canonical_json, Report};
use fano_rigidity_core::candidate::{lookup, registry, FanoCandidate, RegistryEntry};
use fano_rigidity_core::exclusion::VerifyOptions;
use fano_rigidity_core::explicit::ClusterFormat;

#[derive(Parser, Debug)]
#[command(name = "fano-rigidity", version, about = "Certify birational superrigidity of codimension-4 Fano 3-folds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List the built-in candidates.
    List,
    /// Print a built-in candidate as canonical JSON.
    Show { id: String },
    /// Verify a built-in candidate (`25`, `#25`) or a candidate JSON file.
    Verify {
        target: String,
        #[command(flatten)]
        run: RunArgs,
        /// Print the JSON report.
        #[arg(long, conflicts_with = "text")]
        json: bool,
        /// Print the text report (default).
        #[arg(long)]
        text: bool,
        /// Record wall-clock time in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Full certificate transcript for one center (`1/6(1,1,5)`, `1/6`, `curves`, `smooth`).
    Explain {
        target: String,
        center: String,
        #[command(flatten)]
        run: RunArgs,
        #[arg(long)]
        json: bool,
    },
    /// Print the equations of a built-in format of #282.
    ExportEquations {
        format: ClusterFormat,
        #[arg(long)]
        no_q_in_s6: bool,
    },
}

#[derive(Args, Debug)]
struct RunArgs {
    /// Use an explicit format of #282 (g2 or c2).
    #[arg(long)]
    format: Option<ClusterFormat>,
    /// Override the product used by the smooth-point lemma.
    #[arg(long)]
    isolating_product: Option<u64>,
    /// Do not assume q in S6 for the c2 format.
    #[arg(long)]
    no_q_in_s6: bool,
}

impl RunArgs {
    fn options(&self) -> VerifyOptions {
        VerifyOptions { isolating_product: self.isolating_product, format: self.format, assume_q_in_s6: !self.no_q_in_s6 }
    }
}

fn resolve(target: &str) -> Result<FanoCandidate> {
    let path = Path::new(target);
    if path.is_file() {
        return load(path).with_context(|| format!("loading {target}"));
    }
    if target.ends_with(".json") {
        bail!("no such file: {target}");
    }
    lookup(target).map_err(|e| anyhow!(e))
}

fn run_report(target: &str, run: &RunArgs, timing: bool) -> Result<Report> {
    let c = resolve(target)?;
    let start = Instant::now();
    let report = build_report(&c, &run.options(), None)?;
    Ok(if timing { report.with_timing(start.elapsed()) } else { report })
}

fn list() {
    for entry in registry() {
        match entry {
            RegistryEntry::Analyzable(c) => {
                let w: Vec<String> = c.space.weights().iter().map(u32::to_string).collect();
                let basket: Vec<String> = c.basket.iter().map(|b| format!("{} x {}", b.count, b.type_label())).collect();
                println!("{:<7} P({})  (-K)^3 = {}  basket {}", c.id, w.join(","), c.k3, basket.join(", "));
            }
            RegistryEntry::MetadataOnly { id, note } => println!("{id:<7} not analyzable: {note}"),
        }
    }
}

fn main_inner(cli: Cli) -> Result<u8> {
    match cli.command {
        Command::List => {
            list();
            Ok(0)
        }
        Command::Show { id } => {
            print!("{}", to_canonical_json(&lookup(&id).map_err(|e| anyhow!(e))?));
            Ok(0)
        }
        Command::Verify { target, run, json, text: _, timing } => {
            let report = run_report(&target, &run, timing)?;
            if json {
                print!("{}", report.to_json());
            } else {
                print!("{}", render_report(&report.to_value()));
            }
            if let fano_rigidity::ReportOverall::InvalidInput { violations } = &report.overall {
                for v in violations {
                    eprintln!("error: {v}");
                }
            }
            Ok(report.overall.exit_code())
        }
        Command::Explain { target, center, run, json } => {
            let report = run_report(&target, &run, false)?;
            if let fano_rigidity::ReportOverall::InvalidInput { violations } = &report.overall {
                bail!("invalid candidate: {}", violations.join("; "));
            }
            let rec = explain(&report, &center).ok_or_else(|| {
                let known: Vec<&str> = report.centers.iter().map(|c| c.center.as_str()).collect();
                anyhow!("no center `{center}` (known: {})", known.join(", "))
            })?;
            if json {
                println!("{}", serde_json::to_string_pretty(rec)?);
            } else {
                let id = report.candidate["id"].as_str().unwrap_or_default();
                print!("{}", render_explain(id, &serde_json::to_value(rec)?));
            }
            Ok(0)
        }
        Command::ExportEquations { format, no_q_in_s6 } => {
            print!("{}", export_equations(format, !no_q_in_s6));
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    match main_inner(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(1)
        }
    }
}
