//! Monte Carlo, spin-pair and saturation runs.

use std::collections::BTreeMap;

use fluxbound::flux::{evaluate_bounds, BoundReport, Inequality};
use fluxbound::scenarios::{
    saturating_family, spin_pair_timeseries, SpinPairParams, SpinPairRecord,
};
use fluxbound::Error;
use rayon::prelude::*;

use crate::error::{CliError, CliResult};
use crate::sampler::{draw_rng, QubitDraw};

/// What to do with a draw whose symmetric relative entropy is infinite.
#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum RejectionPolicy {
    /// Discard and sample again from the same substream.
    Redraw,
    /// Keep the draw; infinite entries are written as `inf`.
    ReportInfinite,
}

#[derive(Debug, Clone, PartialEq)]
pub struct DrawConfig {
    pub n_draws: usize,
    pub master_seed: u64,
    pub policy: RejectionPolicy,
    /// Slack granted to every inequality verdict.
    pub tolerance: f64,
}

impl Default for DrawConfig {
    fn default() -> Self {
        DrawConfig {
            n_draws: 10_000,
            master_seed: 42,
            policy: RejectionPolicy::ReportInfinite,
            tolerance: 1e-9,
        }
    }
}

impl DrawConfig {
    pub fn validate(&self) -> CliResult<()> {
        if self.n_draws == 0 {
            return Err(CliError::Usage("draw count must be at least 1".into()));
        }
        if !(self.tolerance >= 0.0 && self.tolerance.is_finite()) {
            return Err(CliError::Usage(format!("bad tolerance {}", self.tolerance)));
        }
        Ok(())
    }
}

/// Redraws allowed per draw before giving up.
pub const MAX_REDRAWS: u64 = 1_000;

#[derive(Debug, Clone, PartialEq)]
pub struct DrawRecord {
    pub draw: u64,
    pub params: QubitDraw,
    pub report: BoundReport,
    pub redraws: u64,
}

/// Samples and evaluates draw `index` of the run seeded by `master_seed`.
pub fn evaluate_draw(
    master_seed: u64,
    index: u64,
    policy: RejectionPolicy,
    tolerance: f64,
) -> CliResult<DrawRecord> {
    let mut rng = draw_rng(master_seed, index);
    let mut redraws = 0;
    loop {
        let params = QubitDraw::sample(&mut rng);
        let (theta, rho, sigma) = params.build()?;
        let report = evaluate_bounds(&theta, &rho, &sigma, tolerance)?;
        if report.s_tilde.is_finite() || policy == RejectionPolicy::ReportInfinite {
            return Ok(DrawRecord {
                draw: index,
                params,
                report,
                redraws,
            });
        }
        redraws += 1;
        if redraws > MAX_REDRAWS {
            return Err(Error::Degenerate(format!(
                "draw {index}: {MAX_REDRAWS} consecutive draws with infinite relative entropy"
            ))
            .into());
        }
    }
}

/// Violation count and smallest slack of one inequality over a run.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct InequalityTally {
    pub violations: usize,
    /// `None` if every evaluation was trivially satisfied.
    pub min_slack: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloSummary {
    pub n_draws: usize,
    pub tallies: BTreeMap<Inequality, InequalityTally>,
    /// Draws with `S̃ ≥ 2`, where the Pinsker right-hand side `S̃/2` is ≥ 1.
    pub far_from_equilibrium: usize,
    /// Of those, draws whose main right-hand side stays below 1.
    pub nontrivial_far: usize,
    pub infinite_entropy: usize,
    pub total_redraws: u64,
}

impl MonteCarloSummary {
    pub fn violations(&self, which: Inequality) -> usize {
        self.tallies.get(&which).map_or(0, |t| t.violations)
    }

    pub fn min_slack(&self, which: Inequality) -> Option<f64> {
        self.tallies.get(&which).and_then(|t| t.min_slack)
    }

    pub fn total_violations(&self) -> usize {
        self.tallies.values().map(|t| t.violations).sum()
    }
}

pub fn summarize(records: &[DrawRecord]) -> MonteCarloSummary {
    let mut tallies: BTreeMap<Inequality, InequalityTally> = Inequality::ALL
        .iter()
        .map(|&k| (k, InequalityTally::default()))
        .collect();
    let (mut far, mut nontrivial, mut infinite, mut redraws) = (0, 0, 0, 0);
    for r in records {
        for (&k, v) in &r.report.verdicts {
            let t = tallies.entry(k).or_default();
            if !v.holds {
                t.violations += 1;
            }
            if let Some(s) = v.slack {
                t.min_slack = Some(t.min_slack.map_or(s, |m: f64| m.min(s)));
            }
        }
        let s = r.report.s_tilde.value_or(f64::INFINITY);
        if s >= 2.0 {
            far += 1;
            if r.report.main_rhs < 1.0 {
                nontrivial += 1;
            }
        }
        if !r.report.s_tilde.is_finite() {
            infinite += 1;
        }
        redraws += r.redraws;
    }
    MonteCarloSummary {
        n_draws: records.len(),
        tallies,
        far_from_equilibrium: far,
        nontrivial_far: nontrivial,
        infinite_entropy: infinite,
        total_redraws: redraws,
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonteCarloRun {
    pub records: Vec<DrawRecord>,
    pub summary: MonteCarloSummary,
}

/// Evaluates `n_draws` draws in parallel; records are ordered by draw index.
pub fn run_montecarlo(cfg: &DrawConfig) -> CliResult<MonteCarloRun> {
    cfg.validate()?;
    let records = (0..cfg.n_draws as u64)
        .into_par_iter()
        .map(|i| evaluate_draw(cfg.master_seed, i, cfg.policy, cfg.tolerance))
        .collect::<CliResult<Vec<_>>>()?;
    let summary = summarize(&records);
    Ok(MonteCarloRun { records, summary })
}

pub fn run_spinpair(params: &SpinPairParams) -> CliResult<Vec<SpinPairRecord>> {
    Ok(spin_pair_timeseries(params)?)
}

/// One point of the saturating family, both sides computed numerically.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaturationRow {
    pub a: f64,
    pub tn_sq_over_4: f64,
    pub b_of_s_tilde: f64,
    pub abs_diff: f64,
}

pub fn saturation_point(a: f64) -> CliResult<SaturationRow> {
    let (lhs, rhs) = saturating_family(a)?.numeric_sides()?;
    Ok(SaturationRow {
        a,
        tn_sq_over_4: lhs,
        b_of_s_tilde: rhs,
        abs_diff: (lhs - rhs).abs(),
    })
}

pub fn run_saturation(grid: &[f64]) -> CliResult<Vec<SaturationRow>> {
    if let Some(&bad) = grid.iter().find(|a| !a.is_finite()) {
        return Err(CliError::Usage(format!("non-finite grid point {bad}")));
    }
    grid.par_iter().map(|&a| saturation_point(a)).collect()
}

/// Largest `|a|`-gap in a saturation table.
pub fn max_saturation_gap(rows: &[SaturationRow]) -> f64 {
    rows.iter().map(|r| r.abs_diff).fold(0.0, f64::max)
}
