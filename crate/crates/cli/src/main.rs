use anyhow::Result;
use clap::{Parser, Subcommand};
use std::path::PathBuf;
use std::process::ExitCode;

use airylab_cli::commands::{self, ecdf_rows};
use airylab_cli::config::{extract_dotted_overrides, ExperimentConfig};
use airylab_cli::{csv_from_rows, output_dir, write_text};

/// Numerical laboratory for inhomogeneous exponential last-passage
/// percolation, the generalized Wishart ensemble and their edge limits.
///
/// Any flag of the form `--<section>.<field> <value>` (for example
/// `--model.t 0.25` or `--model.x [2.0]`) overrides the corresponding
/// config field by dotted path.
#[derive(Parser)]
#[command(name = "airylab", version)]
struct Cli {
    /// JSON experiment configuration.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Master seed override (shorthand for --sampling.seed).
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Output directory override (shorthand for --output.path).
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Output format: csv or json.
    #[arg(long, global = true)]
    format: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Sample last-passage times and print summary statistics.
    SimulateLpp,
    /// Sample largest eigenvalues of the generalized Wishart ensemble.
    SimulateWishart,
    /// Distributional equality of the two models (two-sample KS harness).
    CheckThm1,
    /// Edge scaling limit of the percolation model against the limit-kernel
    /// gap curve, over a sweep of p.
    CheckThm2,
    /// Scaled finite kernel against the gauge-adjusted limit kernel.
    CheckThm4,
    /// Joint level profiles of both models: per-level KS plus correlation
    /// diagnostics (diagnostic only).
    CompareJoint,
    /// Tabulate the limit kernel on a grid.
    KernelEval,
    /// Gap probability determinants for the selected kernel.
    GapProb,
    /// Reference table of the unperturbed edge distribution.
    TwTable,
}

fn run() -> Result<i32> {
    let (plain, overrides) = extract_dotted_overrides(std::env::args().collect());
    let cli = Cli::parse_from(plain);
    let mut overrides = overrides;
    if let Some(seed) = cli.seed {
        overrides.push(("sampling.seed".into(), seed.to_string()));
    }
    if let Some(out) = &cli.out {
        overrides.push((
            "output.path".into(),
            format!("\"{}\"", out.display()),
        ));
    }
    if let Some(fmt) = &cli.format {
        overrides.push(("output.format".into(), format!("\"{fmt}\"")));
    }
    let cfg = ExperimentConfig::load(cli.config.as_deref(), &overrides)?;
    let dir = output_dir(&cfg);
    let json_wanted = cfg.output.format == "json";

    let (name, report_json, csv, pass) = match cli.command {
        Command::SimulateLpp => {
            let report = commands::cmd_simulate_lpp(&cfg)?;
            let csv = csv_from_rows(
                "index,value",
                report
                    .results
                    .values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| format!("{i},{v}")),
            );
            ("simulate-lpp", serde_json::to_value(&report)?, Some(csv), report.pass)
        }
        Command::SimulateWishart => {
            let report = commands::cmd_simulate_wishart(&cfg)?;
            let csv = csv_from_rows(
                "index,value",
                report
                    .results
                    .values
                    .iter()
                    .enumerate()
                    .map(|(i, v)| format!("{i},{v}")),
            );
            (
                "simulate-wishart",
                serde_json::to_value(&report)?,
                Some(csv),
                report.pass,
            )
        }
        Command::CheckThm1 => {
            let report = commands::cmd_check_thm1(&cfg)?;
            let (lpp, wis) = &report.results.ecdf_sample;
            let mut rows = Vec::new();
            for (v, f) in ecdf_rows(lpp) {
                rows.push(format!("lpp,{v},{f}"));
            }
            for (v, f) in ecdf_rows(wis) {
                rows.push(format!("wishart,{v},{f}"));
            }
            let csv = csv_from_rows("model,value,ecdf", rows.into_iter());
            ("check-thm1", serde_json::to_value(&report)?, Some(csv), report.pass)
        }
        Command::CheckThm2 => {
            let report = commands::cmd_check_thm2(&cfg)?;
            let csv = csv_from_rows(
                "p,sup_distance,sup_distance_literal",
                report
                    .results
                    .p_sweep
                    .iter()
                    .zip(&report.results.sup_distance)
                    .zip(&report.results.sup_distance_literal)
                    .map(|((p, d), dl)| format!("{p},{d},{dl}")),
            );
            ("check-thm2", serde_json::to_value(&report)?, Some(csv), report.pass)
        }
        Command::CheckThm4 => {
            let report = commands::cmd_check_thm4(&cfg)?;
            let csv = csv_from_rows(
                "p,max_error",
                report
                    .results
                    .p_sweep
                    .iter()
                    .zip(&report.results.max_errors)
                    .map(|(p, e)| format!("{p},{e}")),
            );
            ("check-thm4", serde_json::to_value(&report)?, Some(csv), report.pass)
        }
        Command::CompareJoint => {
            let report = commands::cmd_compare_joint(&cfg)?;
            let csv = csv_from_rows(
                "level,passes,min_p_value,pass",
                report.results.per_level.iter().map(|v| {
                    format!("{},{},{},{}", v.level, v.passes, v.min_p_value, v.pass)
                }),
            );
            (
                "compare-joint",
                serde_json::to_value(&report)?,
                Some(csv),
                report.pass,
            )
        }
        Command::KernelEval => {
            let report = commands::cmd_kernel_eval(&cfg)?;
            let csv = csv_from_rows(
                "t1,x,t2,y,value,imag_residue",
                report.results.iter().map(|r| {
                    format!("{},{},{},{},{},{}", r.t1, r.x, r.t2, r.y, r.value, r.imag_residue)
                }),
            );
            ("kernel-eval", serde_json::to_value(&report)?, Some(csv), report.pass)
        }
        Command::GapProb => {
            let report = commands::cmd_gap_prob(&cfg)?;
            let csv = csv_from_rows(
                "xi,det,flag",
                report
                    .results
                    .rows
                    .iter()
                    .map(|r| format!("{},{},{}", r.xi, r.det, r.flag)),
            );
            ("gap-prob", serde_json::to_value(&report)?, Some(csv), report.pass)
        }
        Command::TwTable => {
            let report = commands::cmd_tw_table(&cfg)?;
            let csv = csv_from_rows(
                "xi,det,flag",
                report
                    .results
                    .rows
                    .iter()
                    .map(|r| format!("{},{},{}", r.xi, r.det, r.flag)),
            );
            ("tw-table", serde_json::to_value(&report)?, Some(csv), report.pass)
        }
    };

    let json_text = serde_json::to_string_pretty(&report_json)?;
    write_text(&dir, &format!("{name}.json"), &json_text)?;
    if let Some(csv) = csv {
        write_text(&dir, &format!("{name}.csv"), &csv)?;
    }
    if json_wanted {
        println!("{json_text}");
    } else {
        match pass {
            Some(ok) => println!("{name}: {}", if ok { "PASS" } else { "FAIL" }),
            None => println!("{name}: wrote {}", dir.join(format!("{name}.csv")).display()),
        }
    }
    Ok(match pass {
        Some(false) => 1,
        _ => 0,
    })
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}
