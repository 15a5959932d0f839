use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use fluxbound::scenarios::{uniform_grid, SpinPairParams};
use fluxbound_cli::output::{render, Format};
use fluxbound_cli::runners::{
    max_saturation_gap, run_montecarlo, run_saturation, run_spinpair, DrawConfig, RejectionPolicy,
};
use fluxbound_cli::verify::{run_verify, VerifyConfig};
use fluxbound_cli::{with_threads, CliError, CliResult};

#[derive(Parser)]
#[command(
    name = "fluxbound",
    version,
    about = "Bounds on observable fluxes from relative entropy"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Master seed; draw i uses a substream derived from (seed, i).
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Slack allowed on each inequality.
    #[arg(long, default_value_t = 1e-9)]
    tolerance: f64,
    /// Worker threads (default: all cores). Output does not depend on it.
    #[arg(long, value_parser = clap::value_parser!(u16).range(1..))]
    threads: Option<u16>,
}

#[derive(Subcommand)]
enum Command {
    /// Random qubit triples evaluated against the full bound chain.
    Montecarlo {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 10_000)]
        draws: usize,
        #[arg(long, value_enum, default_value_t = RejectionPolicy::ReportInfinite)]
        policy: RejectionPolicy,
    },
    /// Two exchange-coupled spins: flux and local entropy bounds over time.
    Spinpair {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.9)]
        p: f64,
        #[arg(long, default_value_t = 0.1)]
        q: f64,
        #[arg(long, default_value_t = 1.0)]
        omega: f64,
        #[arg(long, default_value_t = 2.0)]
        g: f64,
        #[arg(long, default_value_t = 0.0)]
        omega0: f64,
        #[arg(long, default_value_t = 1.5)]
        t_max: f64,
        #[arg(long, default_value_t = 301)]
        t_steps: usize,
    },
    /// Two-level family that turns the trace-norm bound into an equality.
    Saturation {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
        a_min: f64,
        #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
        a_max: f64,
        #[arg(long, default_value_t = 101)]
        a_steps: usize,
    },
    /// Every inequality and identity over seeded random inputs.
    Verify {
        #[command(flatten)]
        common: Common,
        /// Random qubit triples.
        #[arg(long, default_value_t = 2_000)]
        draws: usize,
    },
}

fn emit(common: &Common, bytes: &[u8]) -> CliResult<()> {
    match &common.out {
        Some(path) => std::fs::write(path, bytes).map_err(|source| CliError::Io {
            path: path.display().to_string(),
            source,
        }),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(bytes)
                .and_then(|_| out.flush())
                .map_err(|source| CliError::Io {
                    path: "<stdout>".into(),
                    source,
                })
        }
    }
}

fn check_tolerance(t: f64) -> CliResult<()> {
    if t >= 0.0 && t.is_finite() {
        Ok(())
    } else {
        Err(CliError::Usage(format!(
            "tolerance must be finite and non-negative, got {t}"
        )))
    }
}

/// Returns the process exit status on success (0, or 2 for a failed check).
fn run(cli: Cli) -> CliResult<u8> {
    match cli.command {
        Command::Montecarlo {
            common,
            draws,
            policy,
        } => {
            check_tolerance(common.tolerance)?;
            let cfg = DrawConfig {
                n_draws: draws,
                master_seed: common.seed,
                policy,
                tolerance: common.tolerance,
            };
            let run = with_threads(common.threads.map(usize::from), || run_montecarlo(&cfg))??;
            emit(&common, &render(common.format, &run.records)?)?;
            let s = &run.summary;
            eprintln!(
                "draws={} main_violations={} strengthened_violations={} s_tilde_ge_2={} \
                 nontrivial_at_s_tilde_ge_2={} infinite={} redraws={}",
                s.n_draws,
                s.violations(fluxbound::flux::Inequality::Main),
                s.violations(fluxbound::flux::Inequality::Strengthened),
                s.far_from_equilibrium,
                s.nontrivial_far,
                s.infinite_entropy,
                s.total_redraws
            );
            Ok(0)
        }
        Command::Spinpair {
            common,
            p,
            q,
            omega,
            g,
            omega0,
            t_max,
            t_steps,
        } => {
            check_tolerance(common.tolerance)?;
            if t_steps == 0 {
                return Err(CliError::Usage("--t-steps must be at least 1".into()));
            }
            let params = SpinPairParams {
                p,
                q,
                omega,
                coupling: g,
                phase: omega0,
                times: uniform_grid(0.0, t_max, t_steps),
            };
            let rows = with_threads(common.threads.map(usize::from), || run_spinpair(&params))??;
            emit(&common, &render(common.format, &rows)?).map(|_| 0)
        }
        Command::Saturation {
            common,
            a_min,
            a_max,
            a_steps,
        } => {
            check_tolerance(common.tolerance)?;
            if a_steps == 0 {
                return Err(CliError::Usage("--a-steps must be at least 1".into()));
            }
            let grid = uniform_grid(a_min, a_max, a_steps);
            let rows = with_threads(common.threads.map(usize::from), || run_saturation(&grid))??;
            emit(&common, &render(common.format, &rows)?)?;
            eprintln!("max_abs_diff={:e}", max_saturation_gap(&rows));
            Ok(0)
        }
        Command::Verify { common, draws } => {
            check_tolerance(common.tolerance)?;
            let cfg = VerifyConfig {
                master_seed: common.seed,
                tolerance: common.tolerance,
                qubit_draws: draws,
                ..VerifyConfig::default()
            };
            let report = with_threads(common.threads.map(usize::from), || run_verify(&cfg))??;
            emit(&common, &render(common.format, &report.checks)?)?;
            for c in report.failures() {
                let f = c
                    .first_failure
                    .expect("failed check records its first failure");
                eprintln!(
                    "FAILED {}: {} violation(s), min slack {:e}, first at seed {} draw {}",
                    c.name, c.violations, c.min_slack, f.seed, f.draw
                );
            }
            Ok(if report.passed() { 0 } else { 2 })
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
