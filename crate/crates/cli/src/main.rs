use std::path::PathBuf;

use anyhow::{bail, Context, Result};
use clap::{Parser, Subcommand};
use ensemble_verify::harness::{self, ExperimentConfig};
use ensemble_verify::io;
use ensemble_verify::par::{self, Exec};

#[derive(Parser)]
#[command(name = "ensemble-verify", version, about = "Ensemble error estimation for steady Euler shock interactions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// TOML experiment file; defaults apply to every omitted key.
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory, overriding the config.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Worker threads, overriding the config (0 uses all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Solve every ensemble member and write the solution fields.
    Solve,
    /// Solve, then compute errors, angles and estimators and write all reports.
    Analyze,
    /// Render a Markdown digest of an existing output directory.
    Report,
    /// Build the analytic reference and report its regions and residuals.
    Validate,
    /// Monte Carlo check of the orthogonality bound for random directions.
    McOrthogonality,
    /// Print the effective configuration as TOML.
    Config,
}

fn load(cli: &Cli) -> Result<ExperimentConfig> {
    let mut cfg = match &cli.config {
        Some(p) => ExperimentConfig::load(p).with_context(|| format!("reading {}", p.display()))?,
        None => ExperimentConfig::default(),
    };
    if let Some(o) = &cli.out {
        cfg.out = o.clone();
    }
    if let Some(j) = cli.jobs {
        cfg.jobs = j;
    }
    Ok(cfg)
}

fn run(cli: &Cli, cfg: &ExperimentConfig) -> Result<()> {
    let exec = Exec::best();
    let out = &cfg.out;
    match cli.command {
        Command::Solve => {
            let ens = harness::solve_ensemble(cfg, exec)?;
            harness::write_fields(out, &ens)?;
            io::write_json(&out.join("solve.json"), &ens.runs)?;
            for r in &ens.runs {
                match &r.failure {
                    Some(f) => println!("{:<24} excluded: {f}", r.id),
                    None => println!(
                        "{:<24} iters {:>7} converged {:<5} residual {:.3e}",
                        r.id, r.iters, r.converged, r.final_relative_residual
                    ),
                }
            }
        }
        Command::Analyze => {
            let res = harness::run_experiment(cfg, exec)?;
            print!("{}", harness::render_report(out)?);
            if res.summary.members.iter().any(|m| m.failure.is_some()) {
                log::warn!("some members were excluded, see summary.json");
            }
        }
        Command::Report => {
            let text = harness::render_report(out)?;
            std::fs::write(out.join("report.md"), &text)?;
            print!("{text}");
        }
        Command::Validate => {
            let r = harness::validate_only(cfg)?;
            io::write_json(&out.join("validate.json"), &r)?;
            println!("case {} on {}x{}", r.field.case, r.grid.nx, r.grid.ny);
            for (reg, n) in r.field.regions.iter().zip(&r.node_census) {
                println!(
                    "  {:<22} rho {:>9.5} p {:>9.5} M {:>7.4} angle {:>8.3} deg nodes {n}",
                    reg.name, reg.rho, reg.p, reg.mach, reg.flow_angle_deg
                );
            }
            let m = r.field.residuals;
            println!(
                "  slip pressure {:.3e}  slip direction {:.3e}  Rankine-Hugoniot {:.3e}",
                m.slip_pressure, m.slip_direction_rad, m.rankine_hugoniot_max
            );
        }
        Command::McOrthogonality => {
            let rows = harness::run_mc(cfg, exec)?;
            io::write_rows_csv(&out.join("mc_orthogonality.csv"), &rows)?;
            println!("N,delta,empirical,bound,within_three_sigma");
            for r in &rows {
                println!("{},{},{:e},{:e},{}", r.dim, r.delta, r.empirical, r.bound, r.within_three_sigma);
            }
            if rows.iter().any(|r| !r.within_three_sigma) {
                bail!("empirical exceedance above the bound by more than three standard deviations");
            }
        }
        Command::Config => print!("{}", cfg.to_toml()),
    }
    Ok(())
}

fn main() -> Result<()> {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    let cfg = load(&cli)?;
    par::with_jobs(cfg.jobs, || run(&cli, &cfg))
}
