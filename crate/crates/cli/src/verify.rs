//! Verification harness: every inequality and identity of the library,
//! evaluated over seeded random inputs, with per-check minimum slack and
//! the first failing `(seed, draw)` pair.
//!
//! For inequalities the slack is `rhs − lhs`; for identities it is minus
//! the defect. A check fails when its own tolerance is exceeded.

use fluxbound::bounds::{flux_ratio_bound, inverse_x_tanh_half, variance_ratio_bound, x_tanh_half};
use fluxbound::flux::{
    evaluate_bounds, optimal_shift_check, qtur_check, shift_grid, sign_decomposition, Inequality,
    Observable, Verdict,
};
use fluxbound::linalg::real_trace_of_product;
use fluxbound::random;
use fluxbound::scenarios::{
    correlation_bound_check, entropy_flux, entropy_flux_chain_check, saturating_family,
    spin_pair_timeseries, thermal_environment, uniform_grid, BipartiteScenario, SpinPairParams,
};
use fluxbound::{DensityMatrix, Error, ExtendedReal};
use rand::Rng;
use rayon::prelude::*;

use crate::error::CliResult;
use crate::output::{Cell, Row};
use crate::runners::{evaluate_draw, RejectionPolicy};
use crate::sampler::draw_rng;

/// Right-hand side of the main bound as a function of `S̃`; replaceable so
/// the harness can be tested against a deliberately wrong bound.
pub type BoundFn = fn(f64) -> f64;

pub fn standard_main_bound(s_tilde: f64) -> f64 {
    flux_ratio_bound(s_tilde).unwrap_or(f64::NAN)
}

#[derive(Debug, Clone)]
pub struct VerifyConfig {
    pub master_seed: u64,
    /// Slack for inequalities and tolerance for the sign-operator identities.
    pub tolerance: f64,
    pub qubit_draws: usize,
    /// Random triples in dimensions 2, 3, 4 (cycled).
    pub general_draws: usize,
    pub shift_observables: usize,
    pub shift_grid_points: usize,
    pub scenarios: usize,
    pub thermal_scenarios: usize,
    pub main_bound: BoundFn,
}

impl Default for VerifyConfig {
    fn default() -> Self {
        VerifyConfig {
            master_seed: 42,
            tolerance: 1e-9,
            qubit_draws: 2_000,
            general_draws: 600,
            shift_observables: 100,
            shift_grid_points: 10_000,
            scenarios: 100,
            thermal_scenarios: 100,
            main_bound: standard_main_bound,
        }
    }
}

/// Absolute tolerances for identities that are not governed by the slack.
pub const FLUX_ANALYTIC_TOL: f64 = 1e-9;
pub const ENERGY_DRIFT_TOL: f64 = 1e-10;
pub const THERMAL_IDENTITY_TOL: f64 = 1e-10;
pub const SATURATION_TOL: f64 = 1e-8;
pub const ROUND_TRIP_TOL: f64 = 1e-10;
pub const SMALL_SLOPE_TOL: f64 = 1e-3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Failure {
    pub seed: u64,
    pub draw: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CheckSummary {
    pub name: &'static str,
    pub evaluated: usize,
    pub violations: usize,
    /// `+∞` when every evaluation was trivially satisfied.
    pub min_slack: f64,
    pub first_failure: Option<Failure>,
}

#[derive(Debug, Clone, PartialEq, Default)]
pub struct VerifyReport {
    pub checks: Vec<CheckSummary>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.violations == 0)
    }

    pub fn check(&self, name: &str) -> Option<&CheckSummary> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &CheckSummary> {
        self.checks.iter().filter(|c| c.violations > 0)
    }

    fn record(&mut self, o: &Observation, seed: u64, draw: u64) {
        let idx = match self.checks.iter().position(|c| c.name == o.name) {
            Some(i) => i,
            None => {
                self.checks.push(CheckSummary {
                    name: o.name,
                    evaluated: 0,
                    violations: 0,
                    min_slack: f64::INFINITY,
                    first_failure: None,
                });
                self.checks.len() - 1
            }
        };
        let c = &mut self.checks[idx];
        c.evaluated += 1;
        if let Some(s) = o.slack {
            c.min_slack = c.min_slack.min(s);
        }
        if !o.holds {
            c.violations += 1;
            c.first_failure.get_or_insert(Failure { seed, draw });
        }
    }
}

impl Row for CheckSummary {
    fn headers() -> &'static [&'static str] {
        &[
            "check",
            "evaluated",
            "violations",
            "min_slack",
            "first_failure_seed",
            "first_failure_draw",
        ]
    }

    fn cells(&self) -> Vec<Cell> {
        let (seed, draw) = match self.first_failure {
            Some(f) => (Cell::Int(f.seed), Cell::Int(f.draw)),
            None => (Cell::Empty, Cell::Empty),
        };
        vec![
            Cell::Text(self.name.to_string()),
            Cell::Int(self.evaluated as u64),
            Cell::Int(self.violations as u64),
            Cell::Real(self.min_slack),
            seed,
            draw,
        ]
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
struct Observation {
    name: &'static str,
    slack: Option<f64>,
    holds: bool,
}

impl Observation {
    fn verdict(name: &'static str, v: Verdict) -> Self {
        Observation {
            name,
            slack: v.slack,
            holds: v.holds,
        }
    }

    fn inequality(name: &'static str, slack: f64, tol: f64) -> Self {
        Observation {
            name,
            slack: Some(slack),
            holds: slack >= -tol,
        }
    }

    fn identity(name: &'static str, defect: f64, tol: f64) -> Self {
        Observation {
            name,
            slack: Some(0.0 - defect),
            holds: defect <= tol,
        }
    }
}

/// Runs `n` independent draws of one suite and folds them in index order.
fn suite<F>(report: &mut VerifyReport, seed: u64, n: usize, f: F) -> CliResult<()>
where
    F: Fn(u64) -> CliResult<Vec<Observation>> + Sync,
{
    let results = (0..n as u64)
        .into_par_iter()
        .map(&f)
        .collect::<CliResult<Vec<_>>>()?;
    for (i, obs) in results.iter().enumerate() {
        for o in obs {
            report.record(o, seed, i as u64);
        }
    }
    Ok(())
}

fn triple_checks(
    cfg: &VerifyConfig,
    theta: &Observable,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
) -> CliResult<Vec<Observation>> {
    let tol = cfg.tolerance;
    let rep = evaluate_bounds(theta, rho, sigma, tol)?;
    let mut out: Vec<Observation> = Inequality::ALL
        .iter()
        .filter(|&&k| k != Inequality::Main)
        .map(|&k| Observation::verdict(k.name(), rep.verdict(k)))
        .collect();
    out.push(match rep.s_tilde {
        ExtendedReal::Finite(s) => Observation::inequality(
            Inequality::Main.name(),
            (cfg.main_bound)(s) - rep.flux_ratio_sq,
            tol,
        ),
        ExtendedReal::Infinite => Observation::verdict(Inequality::Main.name(), Verdict::trivial()),
    });

    let decomposition = match sign_decomposition(rho, sigma) {
        Ok(d) => d,
        Err(Error::Degenerate(_)) => return Ok(out),
        Err(e) => return Err(e.into()),
    };
    let defects = decomposition.identity_defects(rho, sigma)?;
    out.push(Observation::identity(
        "sign_mean_gap",
        defects.mean_gap,
        tol,
    ));
    out.push(Observation::identity(
        "kernel_mean_balance",
        defects.epsilon_gap,
        tol,
    ));
    out.push(Observation::identity(
        "sign_completeness",
        defects.completeness,
        tol,
    ));
    match qtur_check(&decomposition.omega, rho, sigma, tol) {
        Ok(q) => out.push(Observation::inequality("qtur", q.slack, tol)),
        Err(Error::Degenerate(_)) => {}
        Err(e) => return Err(e.into()),
    }
    Ok(out)
}

fn scenario_checks(
    s: &BipartiteScenario,
    cfg: &VerifyConfig,
    rng: &mut impl Rng,
) -> CliResult<Vec<Observation>> {
    let tol = cfg.tolerance;
    let o = s.evolve()?;
    let chain = entropy_flux_chain_check(s, &o, tol)?;
    let mut out: Vec<Observation> = chain
        .links()
        .into_iter()
        .map(|(name, v)| {
            let name = match name {
                "data_processing" => "flux_chain_data_processing",
                "entropy_vs_onsager" => "flux_chain_entropy_vs_onsager",
                _ => "flux_chain_onsager_vs_quadratic",
            };
            Observation::verdict(name, v)
        })
        .collect();
    let ts = Observable::new(random::hermitian(rng, s.dim_s(), 1.0))?;
    let te = Observable::new(random::hermitian(rng, s.dim_e(), 1.0))?;
    let c = correlation_bound_check(&ts, &te, s, &o, tol)?;
    out.push(Observation::verdict("correlation", c.verdict));
    out.push(Observation::inequality(
        "correlation_cap",
        1.0 - c.bound,
        tol,
    ));
    Ok(out)
}

pub fn run_verify(cfg: &VerifyConfig) -> CliResult<VerifyReport> {
    let mut report = VerifyReport::default();
    let tol = cfg.tolerance;
    let seed = cfg.master_seed;

    suite(&mut report, seed, cfg.qubit_draws, |i| {
        let d = evaluate_draw(seed, i, RejectionPolicy::Redraw, tol)?;
        let (theta, rho, sigma) = d.params.build()?;
        triple_checks(cfg, &theta, &rho, &sigma)
    })?;

    let s1 = seed.wrapping_add(1);
    suite(&mut report, s1, cfg.general_draws, |i| {
        let mut rng = draw_rng(s1, i);
        let dim = 2 + (i % 3) as usize;
        let theta = Observable::new(random::hermitian(&mut rng, dim, 2.0))?;
        let rho = random::density_matrix(&mut rng, dim);
        let sigma = random::density_matrix(&mut rng, dim);
        triple_checks(cfg, &theta, &rho, &sigma)
    })?;

    let s2 = seed.wrapping_add(2);
    suite(&mut report, s2, cfg.shift_observables, |i| {
        let mut rng = draw_rng(s2, i);
        let theta = Observable::new(random::hermitian(&mut rng, 2 + (i % 3) as usize, 1.0))?;
        let c = optimal_shift_check(&theta, &shift_grid(&theta, cfg.shift_grid_points), tol)?;
        Ok(vec![Observation {
            name: "optimal_shift",
            slack: Some(-(c.at_lambda_star - c.half_capacity).abs()),
            holds: c.holds,
        }])
    })?;

    let s3 = seed.wrapping_add(3);
    suite(&mut report, s3, cfg.scenarios, |i| {
        let mut rng = draw_rng(s3, i);
        let s = BipartiteScenario::new(
            random::density_matrix(&mut rng, 2),
            random::density_matrix(&mut rng, 2),
            random::unitary(&mut rng, 4),
        )?;
        scenario_checks(&s, cfg, &mut rng)
    })?;

    let s4 = seed.wrapping_add(4);
    suite(&mut report, s4, cfg.thermal_scenarios, |i| {
        let mut rng = draw_rng(s4, i);
        let h_e = random::hermitian(&mut rng, 2, 1.0);
        let beta = rng.gen_range(0.1..=5.0);
        let env = thermal_environment(&h_e, beta)?;
        let s = BipartiteScenario::new(
            random::density_matrix(&mut rng, 2),
            env.state.clone(),
            random::unitary(&mut rng, 4),
        )?;
        let o = s.evolve()?;
        let phi = entropy_flux(&s, &o)?.flux;
        let heat =
            real_trace_of_product(&h_e, &o.rho_e_final.operator().sub(env.state.operator()))?;
        let mut out = vec![Observation::identity(
            "thermal_flux_identity",
            (phi - beta * heat).abs(),
            THERMAL_IDENTITY_TOL,
        )];
        out.extend(scenario_checks(&s, cfg, &mut rng)?);
        Ok(out)
    })?;

    spin_pair_checks(&mut report, tol)?;
    bound_function_checks(&mut report, tol)?;
    Ok(report)
}

fn spin_pair_checks(report: &mut VerifyReport, tol: f64) -> CliResult<()> {
    let params = SpinPairParams::default();
    let records = spin_pair_timeseries(&params)?;
    let e0 = records.first().map_or(0.0, |r| r.energy);
    for (i, r) in records.iter().enumerate() {
        let obs = [
            Observation::identity(
                "spin_flux_analytic",
                (r.flux - r.flux_analytic).abs(),
                FLUX_ANALYTIC_TOL,
            ),
            Observation::identity(
                "energy_conservation",
                (r.energy - e0).abs(),
                ENERGY_DRIFT_TOL,
            ),
            extended_dominance("local_entropy_vs_onsager", r.s_tilde, r.onsager, tol),
            extended_dominance(
                "local_onsager_vs_quadratic",
                r.onsager,
                ExtendedReal::Finite(r.two_phi_sq),
                tol,
            ),
        ];
        for o in &obs {
            report.record(o, 0, i as u64);
        }
    }
    for (i, a) in uniform_grid(0.1, 10.0, 100).into_iter().enumerate() {
        let (lhs, rhs) = saturating_family(a)?.numeric_sides()?;
        report.record(
            &Observation::identity("saturation_gap", (lhs - rhs).abs(), SATURATION_TOL),
            0,
            i as u64,
        );
    }
    Ok(())
}

fn extended_dominance(
    name: &'static str,
    big: ExtendedReal,
    small: ExtendedReal,
    tol: f64,
) -> Observation {
    match (big, small) {
        (ExtendedReal::Finite(b), ExtendedReal::Finite(s)) => {
            Observation::inequality(name, b - s, tol)
        }
        (ExtendedReal::Infinite, _) => Observation::verdict(name, Verdict::trivial()),
        (ExtendedReal::Finite(_), ExtendedReal::Infinite) => Observation {
            name,
            slack: None,
            holds: false,
        },
    }
}

/// Logarithmic grid of `n` points on `[lo, hi]`.
pub fn log_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    let (a, b) = (lo.ln(), hi.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1).max(1) as f64).exp())
        .collect()
}

fn bound_function_checks(report: &mut VerifyReport, tol: f64) -> CliResult<()> {
    for (i, x) in log_grid(1e-6, 50.0, 1000).into_iter().enumerate() {
        let back = x_tanh_half(inverse_x_tanh_half(x)?)?;
        let b = flux_ratio_bound(x)?;
        let obs = [
            Observation::identity("inverse_round_trip", (back - x).abs(), ROUND_TRIP_TOL),
            Observation::inequality("flux_bound_cap", 1.0f64.min(0.5 * x) - b, tol),
        ];
        for o in &obs {
            report.record(o, 0, i as u64);
        }
    }
    for (i, x) in log_grid(1e-4, 50.0, 1000).into_iter().enumerate() {
        let product = flux_ratio_bound(x)? * (1.0 + variance_ratio_bound(x)?);
        report.record(
            &Observation::identity(
                "variance_flux_product",
                (product - 1.0).abs(),
                ROUND_TRIP_TOL,
            ),
            0,
            i as u64,
        );
    }
    let slope = flux_ratio_bound(1e-8)? / 0.5e-8;
    report.record(
        &Observation::identity("small_argument_slope", (slope - 1.0).abs(), SMALL_SLOPE_TOL),
        0,
        0,
    );
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn small() -> VerifyConfig {
        VerifyConfig {
            qubit_draws: 200,
            general_draws: 60,
            shift_observables: 10,
            shift_grid_points: 1_000,
            scenarios: 10,
            thermal_scenarios: 10,
            ..VerifyConfig::default()
        }
    }

    #[test]
    fn small_run_passes() {
        let r = run_verify(&small()).unwrap();
        assert!(r.passed(), "{:?}", r.failures().collect::<Vec<_>>());
        for name in [
            "main",
            "strengthened",
            "qtur",
            "optimal_shift",
            "correlation",
            "saturation_gap",
        ] {
            assert!(r.check(name).unwrap().evaluated > 0, "{name}");
        }
    }

    #[test]
    fn broken_bound_is_named() {
        fn broken(s: f64) -> f64 {
            standard_main_bound(s) - 0.1
        }
        let r = run_verify(&VerifyConfig {
            main_bound: broken,
            ..small()
        })
        .unwrap();
        assert!(!r.passed());
        let names: Vec<_> = r.failures().map(|c| c.name).collect();
        assert_eq!(names, vec!["main"]);
        let f = r.check("main").unwrap().first_failure.unwrap();
        assert_eq!(f.seed, 42);
        // the reported draw reproduces the failure
        let d = evaluate_draw(42, f.draw, RejectionPolicy::Redraw, 1e-9).unwrap();
        let s = d.report.s_tilde.finite().unwrap();
        assert!(broken(s) < d.report.flux_ratio_sq - 1e-9);
    }
}
