//! System–environment scenarios.
//!
//! A system `S` and environment `E` start uncorrelated, `ρ_S ⊗ ρ_E`, and
//! evolve under a global unitary to `ρ_SE' = U(ρ_S ⊗ ρ_E)U†`. Entropy
//! production compares the final state with the "bath reset" reference
//! `ρ_S' ⊗ ρ_E`:
//!
//! ```text
//! Σ  = S(ρ_SE' ‖ ρ_S' ⊗ ρ_E)
//! Σ* = S(ρ_S' ⊗ ρ_E ‖ ρ_SE')
//! ```
//!
//! Two-qubit states are ordered `|g,g⟩, |g,e⟩, |e,g⟩, |e,e⟩` (system index
//! first).

use num_complex::Complex64;
use rayon::prelude::*;

use crate::bounds::{flux_ratio_bound_ext, onsager_like};
use crate::error::{Error, Result};
use crate::flux::{flux, Observable, Verdict};
use crate::linalg::{
    real_trace_of_product, unitary_from_generator, ComplexMatrix, HermitianOperator, Spectrum,
    Subsystem,
};
use crate::state::{
    relative_entropy, symmetric_relative_entropy, trace_distance_norm, DensityMatrix, ExtendedReal,
    RelEntropyValue,
};
use crate::tolerance::Tolerances;

/// Initially uncorrelated system and environment with a global unitary.
#[derive(Debug, Clone, PartialEq)]
pub struct BipartiteScenario {
    rho_s0: DensityMatrix,
    rho_e0: DensityMatrix,
    unitary: ComplexMatrix,
}

impl BipartiteScenario {
    pub fn new(
        rho_s0: DensityMatrix,
        rho_e0: DensityMatrix,
        unitary: ComplexMatrix,
    ) -> Result<Self> {
        let dim = rho_s0.dim() * rho_e0.dim();
        if unitary.dim() != dim {
            return Err(Error::dim_mismatch(unitary.dim(), dim));
        }
        let defect = unitary.unitarity_defect();
        if !(defect <= Tolerances::DEFAULT.unitarity) {
            return Err(Error::validation(
                "unitarity",
                format!("max |U†U − I| = {defect:e}"),
            ));
        }
        Ok(BipartiteScenario {
            rho_s0,
            rho_e0,
            unitary,
        })
    }

    pub fn dim_s(&self) -> usize {
        self.rho_s0.dim()
    }

    pub fn dim_e(&self) -> usize {
        self.rho_e0.dim()
    }

    pub fn rho_s0(&self) -> &DensityMatrix {
        &self.rho_s0
    }

    pub fn rho_e0(&self) -> &DensityMatrix {
        &self.rho_e0
    }

    pub fn unitary(&self) -> &ComplexMatrix {
        &self.unitary
    }

    pub fn initial_state(&self) -> Result<DensityMatrix> {
        self.rho_s0.kron(&self.rho_e0)
    }

    pub fn evolve(&self) -> Result<ScenarioOutcome> {
        evolve(self)
    }
}

/// Final states and entropy production of a [`BipartiteScenario`].
#[derive(Debug, Clone, PartialEq)]
pub struct ScenarioOutcome {
    pub rho_se_final: DensityMatrix,
    pub rho_s_final: DensityMatrix,
    pub rho_e_final: DensityMatrix,
    /// `ρ_S' ⊗ ρ_E`
    pub reference: DensityMatrix,
    /// `Σ`
    pub sigma_prod: RelEntropyValue,
    /// `Σ*`
    pub sigma_dual: RelEntropyValue,
}

impl ScenarioOutcome {
    /// `(Σ + Σ*)/2`.
    pub fn sigma_avg(&self) -> ExtendedReal {
        self.sigma_prod.average(self.sigma_dual)
    }
}

pub fn evolve(s: &BipartiteScenario) -> Result<ScenarioOutcome> {
    let (ds, de) = (s.dim_s(), s.dim_e());
    let rho_se_final = s.initial_state()?.evolve(&s.unitary)?;
    let rho_s_final = rho_se_final.partial_trace(ds, de, Subsystem::System)?;
    let rho_e_final = rho_se_final.partial_trace(ds, de, Subsystem::Environment)?;
    let reference = rho_s_final.kron(&s.rho_e0)?;
    let sigma_prod = relative_entropy(&rho_se_final, &reference)?;
    let sigma_dual = relative_entropy(&reference, &rho_se_final)?;
    Ok(ScenarioOutcome {
        rho_se_final,
        rho_s_final,
        rho_e_final,
        reference,
        sigma_prod,
        sigma_dual,
    })
}

/// Entropy flux `Φ = tr((ρ_E − ρ_E') ln ρ_E)` and its capacity
/// `Φ_L = max − min eigenvalue of ln ρ_E`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EntropyFlux {
    pub flux: f64,
    pub capacity: f64,
}

impl EntropyFlux {
    /// `Φ/Φ_L`, 0 when the environment is maximally mixed.
    pub fn ratio(&self) -> f64 {
        if self.capacity > 0.0 {
            (self.flux / self.capacity).clamp(-1.0, 1.0)
        } else {
            0.0
        }
    }
}

/// Requires a full-rank initial environment.
pub fn entropy_flux(s: &BipartiteScenario, outcome: &ScenarioOutcome) -> Result<EntropyFlux> {
    let log_env = s.rho_e0.log()?;
    let observable = Observable::new(log_env)?;
    // φ for θ = ln ρ_E between ρ = ρ_E and σ = ρ_E'
    let phi = flux(&observable, &s.rho_e0, &outcome.rho_e_final)?;
    Ok(EntropyFlux {
        flux: phi,
        capacity: observable.capacity(),
    })
}

/// Gibbs state `e^{−βH}/Z` of an environment Hamiltonian.
#[derive(Debug, Clone, PartialEq)]
pub struct ThermalEnvironment {
    pub hamiltonian: HermitianOperator,
    pub beta: f64,
    pub state: DensityMatrix,
    pub energy_min: f64,
    pub energy_max: f64,
}

impl ThermalEnvironment {
    /// `Φ_L = β·(E_max − E_min)`.
    pub fn flux_capacity(&self) -> f64 {
        self.beta * (self.energy_max - self.energy_min)
    }
}

pub fn thermal_environment(h_e: &HermitianOperator, beta: f64) -> Result<ThermalEnvironment> {
    if !(beta > 0.0 && beta.is_finite()) {
        return Err(Error::Domain {
            function: "thermal_environment",
            argument: beta,
        });
    }
    let spec = h_e.eigh()?;
    let (e0, e1) = (spec.min(), spec.max());
    // shift by the ground energy before exponentiating
    let weights: Vec<f64> = spec
        .eigenvalues
        .iter()
        .map(|e| (-beta * (e - e0)).exp())
        .collect();
    let z: f64 = weights.iter().sum();
    let populations: Vec<f64> = weights.iter().map(|w| w / z).collect();
    let state = DensityMatrix::from_spectrum(Spectrum {
        eigenvalues: populations,
        eigenvectors: spec.eigenvectors,
    })?;
    Ok(ThermalEnvironment {
        hamiltonian: h_e.clone(),
        beta,
        state,
        energy_min: e0,
        energy_max: e1,
    })
}

/// `big ≥ small` for extended reals; `None` slack when trivially true.
fn dominates(big: ExtendedReal, small: ExtendedReal, tol: f64) -> Verdict {
    match (big, small) {
        (ExtendedReal::Finite(b), ExtendedReal::Finite(s)) => Verdict::from_slack(b - s, tol),
        (ExtendedReal::Infinite, _) => Verdict::trivial(),
        (ExtendedReal::Finite(_), ExtendedReal::Infinite) => Verdict {
            holds: false,
            slack: None,
        },
    }
}

/// `(Σ+Σ*)/2 ≥ S̃(ρ_E, ρ_E') ≥ 2r·artanh(r) ≥ 2r²` with `r = Φ/Φ_L`.
#[derive(Debug, Clone, PartialEq)]
pub struct EntropyFluxChain {
    pub sigma_avg: ExtendedReal,
    pub s_tilde_env: RelEntropyValue,
    pub flux: EntropyFlux,
    pub onsager: ExtendedReal,
    pub quadratic: f64,
    /// `(Σ+Σ*)/2 ≥ S̃(ρ_E, ρ_E')`
    pub data_processing: Verdict,
    /// `S̃(ρ_E, ρ_E') ≥ 2r·artanh(r)`
    pub entropy_vs_onsager: Verdict,
    /// `2r·artanh(r) ≥ 2r²`
    pub onsager_vs_quadratic: Verdict,
}

impl EntropyFluxChain {
    pub fn holds(&self) -> bool {
        self.data_processing.holds
            && self.entropy_vs_onsager.holds
            && self.onsager_vs_quadratic.holds
    }

    pub fn links(&self) -> [(&'static str, Verdict); 3] {
        [
            ("data_processing", self.data_processing),
            ("entropy_vs_onsager", self.entropy_vs_onsager),
            ("onsager_vs_quadratic", self.onsager_vs_quadratic),
        ]
    }
}

pub fn entropy_flux_chain_check(
    s: &BipartiteScenario,
    outcome: &ScenarioOutcome,
    tol: f64,
) -> Result<EntropyFluxChain> {
    let ef = entropy_flux(s, outcome)?;
    let sigma_avg = outcome.sigma_avg();
    let s_tilde_env = symmetric_relative_entropy(&s.rho_e0, &outcome.rho_e_final)?;
    let r = ef.ratio();
    let onsager = onsager_like(r)?;
    let quadratic = 2.0 * r * r;
    Ok(EntropyFluxChain {
        sigma_avg,
        s_tilde_env,
        flux: ef,
        onsager,
        quadratic,
        data_processing: dominates(sigma_avg, s_tilde_env, tol),
        entropy_vs_onsager: dominates(s_tilde_env, onsager, tol),
        onsager_vs_quadratic: dominates(onsager, ExtendedReal::Finite(quadratic), tol),
    })
}

/// `S̃(ρ_S(t), ρ_S(0)) ≥ 2r·artanh(r) ≥ 2r²` for a local system observable.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalBoundCheck {
    /// `tr[θ_S(ρ_S(t) − ρ_S(0))]`
    pub flux: f64,
    pub capacity: f64,
    pub s_tilde: RelEntropyValue,
    pub onsager: ExtendedReal,
    pub quadratic: f64,
    pub entropy_vs_onsager: Verdict,
    pub onsager_vs_quadratic: Verdict,
}

impl LocalBoundCheck {
    pub fn holds(&self) -> bool {
        self.entropy_vs_onsager.holds && self.onsager_vs_quadratic.holds
    }
}

pub fn local_system_bound_check(
    theta_s: &Observable,
    rho_s_t: &DensityMatrix,
    rho_s_0: &DensityMatrix,
    tol: f64,
) -> Result<LocalBoundCheck> {
    let phi = flux(theta_s, rho_s_t, rho_s_0)?;
    let capacity = theta_s.capacity();
    let r = if capacity > 0.0 {
        (phi / capacity).clamp(-1.0, 1.0)
    } else {
        0.0
    };
    let s_tilde = symmetric_relative_entropy(rho_s_t, rho_s_0)?;
    let onsager = onsager_like(r)?;
    let quadratic = 2.0 * r * r;
    Ok(LocalBoundCheck {
        flux: phi,
        capacity,
        s_tilde,
        onsager,
        quadratic,
        entropy_vs_onsager: dominates(s_tilde, onsager, tol),
        onsager_vs_quadratic: dominates(onsager, ExtendedReal::Finite(quadratic), tol),
    })
}

/// Two exchange-coupled spins with `H_i = Ω|e⟩⟨e|_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinPairParams {
    /// Initial excited population of the system.
    pub p: f64,
    /// Initial excited population of the environment.
    pub q: f64,
    /// Level splitting `Ω`.
    pub omega: f64,
    /// Coupling strength `g`.
    pub coupling: f64,
    /// Exchange phase `ω₀`.
    pub phase: f64,
    pub times: Vec<f64>,
}

impl Default for SpinPairParams {
    fn default() -> Self {
        SpinPairParams {
            p: 0.9,
            q: 0.1,
            omega: 1.0,
            coupling: 2.0,
            phase: 0.0,
            times: uniform_grid(0.0, 1.5, 301),
        }
    }
}

/// `n` evenly spaced points from `lo` to `hi` inclusive.
pub fn uniform_grid(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![lo],
        _ => (0..n)
            .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
            .collect(),
    }
}

impl SpinPairParams {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [("p", self.p), ("q", self.q)] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::validation(
                    "population",
                    format!("{name} = {v} not in [0, 1]"),
                ));
            }
        }
        if !(self.omega > 0.0 && self.omega.is_finite()) {
            return Err(Error::validation(
                "omega",
                format!("{} must be positive", self.omega),
            ));
        }
        if !(self.coupling > 0.0 && self.coupling.is_finite()) {
            return Err(Error::validation(
                "coupling",
                format!("{} must be positive", self.coupling),
            ));
        }
        if !self.phase.is_finite() {
            return Err(Error::validation("phase", "must be finite"));
        }
        if self.times.iter().any(|t| !(*t >= 0.0 && t.is_finite())) {
            return Err(Error::validation(
                "times",
                "times must be finite and nonnegative",
            ));
        }
        if self.times.windows(2).any(|w| w[1] < w[0]) {
            return Err(Error::validation("times", "times must be ordered"));
        }
        Ok(())
    }

    /// Local Hamiltonian `Ω|e⟩⟨e|` (basis `|g⟩, |e⟩`).
    pub fn local_hamiltonian(&self) -> HermitianOperator {
        HermitianOperator::from_diagonal(&[0.0, self.omega])
    }

    /// `H_S ⊗ I + I ⊗ H_E`.
    pub fn total_hamiltonian(&self) -> HermitianOperator {
        let h = self.local_hamiltonian();
        let id = HermitianOperator::identity(2);
        h.kron(&id).add(&id.kron(&h))
    }

    /// Exchange generator `g(e^{iω₀}|g,e⟩⟨e,g| + e^{−iω₀}|e,g⟩⟨g,e|)`.
    pub fn generator(&self) -> HermitianOperator {
        let mut m = ComplexMatrix::zeros(4);
        m[(1, 2)] = Complex64::from_polar(self.coupling, self.phase);
        m[(2, 1)] = Complex64::from_polar(self.coupling, -self.phase);
        HermitianOperator::new(m).expect("exchange generator is Hermitian")
    }

    pub fn scenario(&self, t: f64) -> Result<BipartiteScenario> {
        let rho_s = DensityMatrix::diagonal(&[1.0 - self.p, self.p])?;
        let rho_e = DensityMatrix::diagonal(&[1.0 - self.q, self.q])?;
        let u = unitary_from_generator(&self.generator(), t)?;
        BipartiteScenario::new(rho_s, rho_e, u)
    }

    /// `|φ(t)| = sin²(g·t)·|p − q|·Ω`.
    pub fn analytic_flux(&self, t: f64) -> f64 {
        let s = (self.coupling * t).sin();
        s * s * (self.p - self.q).abs() * self.omega
    }
}

/// One time point of the spin-pair evolution.
#[derive(Debug, Clone, PartialEq)]
pub struct SpinPairRecord {
    pub t: f64,
    /// `|tr{H_S[ρ_S(t) − ρ_S(0)]}|`
    pub flux: f64,
    /// Signed `tr{H_S[ρ_S(t) − ρ_S(0)]}`.
    pub flux_signed: f64,
    pub flux_analytic: f64,
    /// `2(φ/φ_L)²`
    pub two_phi_sq: f64,
    /// `2(φ/φ_L)·artanh(φ/φ_L)`
    pub onsager: ExtendedReal,
    /// `S̃(ρ_S(t), ρ_S(0))`
    pub s_tilde: RelEntropyValue,
    /// `tr[(H_S + H_E)ρ_SE(t)]`
    pub energy: f64,
}

pub fn spin_pair_point(params: &SpinPairParams, t: f64) -> Result<SpinPairRecord> {
    let scenario = params.scenario(t)?;
    let outcome = scenario.evolve()?;
    let h_s = Observable::new(params.local_hamiltonian())?;
    let phi = flux(&h_s, &outcome.rho_s_final, scenario.rho_s0())?;
    let r = (phi / h_s.capacity()).clamp(-1.0, 1.0);
    let energy =
        real_trace_of_product(&params.total_hamiltonian(), outcome.rho_se_final.operator())?;
    Ok(SpinPairRecord {
        t,
        flux: phi.abs(),
        flux_signed: phi,
        flux_analytic: params.analytic_flux(t),
        two_phi_sq: 2.0 * r * r,
        onsager: onsager_like(r)?,
        s_tilde: symmetric_relative_entropy(&outcome.rho_s_final, scenario.rho_s0())?,
        energy,
    })
}

/// Evaluates every time point; output is ordered as `params.times`.
pub fn spin_pair_timeseries(params: &SpinPairParams) -> Result<Vec<SpinPairRecord>> {
    params.validate()?;
    params
        .times
        .par_iter()
        .map(|&t| spin_pair_point(params, t))
        .collect()
}

/// Reference product state used for a correlation function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResetProtocol {
    /// `σ = ρ_S' ⊗ ρ_E`
    BathReset,
    /// `σ = ρ_S ⊗ ρ_E`
    BothReset,
}

/// `C = tr((θ_S⊗θ_E)(ρ_SE' − σ))` for the protocol's reference `σ`.
///
/// For [`ResetProtocol::BathReset`] this is
/// `⟨θ_S⊗θ_E⟩_{ρ_SE'} − ⟨θ_S⟩_{ρ_S'}⟨θ_E⟩_{ρ_E}`.
pub fn correlation(
    theta_s: &Observable,
    theta_e: &Observable,
    scenario: &BipartiteScenario,
    outcome: &ScenarioOutcome,
    protocol: ResetProtocol,
) -> Result<f64> {
    if theta_s.dim() != scenario.dim_s() || theta_e.dim() != scenario.dim_e() {
        return Err(Error::validation(
            "dimension",
            "observables do not match the scenario factors",
        ));
    }
    let joint = theta_s.operator().kron(theta_e.operator());
    let joint_mean = real_trace_of_product(&joint, outcome.rho_se_final.operator())?;
    let rho_s_ref = match protocol {
        ResetProtocol::BathReset => &outcome.rho_s_final,
        ResetProtocol::BothReset => scenario.rho_s0(),
    };
    let s_mean = real_trace_of_product(theta_s.operator(), rho_s_ref.operator())?;
    let e_mean = real_trace_of_product(theta_e.operator(), scenario.rho_e0().operator())?;
    Ok(joint_mean - s_mean * e_mean)
}

/// `C²/φ_L² ≤ B((Σ+Σ*)/2) ≤ 1` for a product observable (bath reset).
#[derive(Debug, Clone, PartialEq)]
pub struct CorrelationCheck {
    pub correlation: f64,
    /// Capacity of `θ_S ⊗ θ_E`.
    pub capacity: f64,
    pub ratio_sq: f64,
    pub bound: f64,
    pub verdict: Verdict,
}

pub fn correlation_bound_check(
    theta_s: &Observable,
    theta_e: &Observable,
    scenario: &BipartiteScenario,
    outcome: &ScenarioOutcome,
    tol: f64,
) -> Result<CorrelationCheck> {
    let c = correlation(
        theta_s,
        theta_e,
        scenario,
        outcome,
        ResetProtocol::BathReset,
    )?;
    let joint = Observable::new(theta_s.operator().kron(theta_e.operator()))?;
    let capacity = joint.capacity();
    let ratio_sq = if capacity > 0.0 {
        (c / capacity).powi(2)
    } else {
        0.0
    };
    let bound = flux_ratio_bound_ext(outcome.sigma_avg())?;
    Ok(CorrelationCheck {
        correlation: c,
        capacity,
        ratio_sq,
        bound,
        verdict: Verdict::from_slack(bound - ratio_sq, tol),
    })
}

/// Two-level pair that turns `‖ρ−σ‖₁²/4 ≤ B(S̃)` into an equality:
/// `ρ ∝ e^{a/2}|1⟩⟨1| + e^{−a/2}|0⟩⟨0|` and `σ` with `a → −a`.
#[derive(Debug, Clone, PartialEq)]
pub struct SaturatingPair {
    pub a: f64,
    pub rho: DensityMatrix,
    pub sigma: DensityMatrix,
    /// `2·tanh(|a|/2)`
    pub trace_norm: f64,
    /// `a·tanh(a/2)`
    pub s_tilde: f64,
    pub epsilon: f64,
}

impl SaturatingPair {
    /// `(‖ρ−σ‖₁²/4, B(S̃))`, both computed from the states.
    pub fn numeric_sides(&self) -> Result<(f64, f64)> {
        let tn = trace_distance_norm(&self.rho, &self.sigma)?;
        let s = symmetric_relative_entropy(&self.rho, &self.sigma)?;
        Ok((0.25 * tn * tn, flux_ratio_bound_ext(s)?))
    }
}

pub fn saturating_family(a: f64) -> Result<SaturatingPair> {
    if !a.is_finite() {
        return Err(Error::Domain {
            function: "saturating_family",
            argument: a,
        });
    }
    // e^{±a/2}/(2cosh(a/2)) written as logistic functions to avoid overflow
    let upper = 1.0 / (1.0 + (-a).exp());
    let lower = 1.0 / (1.0 + a.exp());
    let rho = DensityMatrix::diagonal(&[lower, upper])?;
    let sigma = DensityMatrix::diagonal(&[upper, lower])?;
    let th = (0.5 * a).tanh();
    Ok(SaturatingPair {
        a,
        rho,
        sigma,
        trace_norm: 2.0 * th.abs(),
        s_tilde: a * th,
        epsilon: 0.0,
    })
}
