//! Fluxes of bounded observables and the inequalities that limit them.
//!
//! For states `ρ`, `σ` and an observable `θ` with capacity
//! `φ_L = θ_max − θ_min`, [`evaluate_bounds`] computes
//! `(φ/φ_L)²` together with every right-hand side of
//!
//! ```text
//! (φ/φ_L)² ≤ ‖ρ−σ‖₁²/4 ≤ (1−ε)·B(S̃) ≤ B(S̃) ≤ 1
//! ‖ρ−σ‖₁²/4 ≤ S(ρ‖σ)/2,   (φ/φ_L)² ≤ S̃/2
//! (φ/φ_L)·artanh(φ/φ_L) ≤ S̃/2
//! ```
//!
//! `ε` comes from the [`SignDecomposition`] of `ρ − σ`.

use std::collections::BTreeMap;
use std::fmt;

use crate::bounds::{flux_ratio_bound_ext, onsager_like, variance_ratio_bound_ext};
use crate::error::{Error, Result};
use crate::linalg::{
    real_trace_of_product, schatten_from_eigenvalues, schatten_norm, HermitianOperator,
    SchattenOrder, Spectrum,
};
use crate::state::{expectation, relative_entropy, DensityMatrix, ExtendedReal, RelEntropyValue};
use crate::tolerance::Tolerances;

/// Bounded observable with its cached spectrum.
#[derive(Debug, Clone, PartialEq)]
pub struct Observable {
    op: HermitianOperator,
    spectrum: Spectrum,
}

impl Observable {
    pub fn new(op: HermitianOperator) -> Result<Self> {
        let spectrum = op.eigh()?;
        Ok(Observable { op, spectrum })
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn theta_min(&self) -> f64 {
        self.spectrum.min()
    }

    pub fn theta_max(&self) -> f64 {
        self.spectrum.max()
    }

    /// `φ_L = θ_max − θ_min`.
    pub fn capacity(&self) -> f64 {
        self.theta_max() - self.theta_min()
    }

    /// `λ* = (θ_max + θ_min)/2`, the shift minimising `‖θ − λI‖_∞`.
    pub fn lambda_star(&self) -> f64 {
        0.5 * (self.theta_max() + self.theta_min())
    }

    /// `θ − λI`, re-diagonalised.
    pub fn shifted(&self, lambda: f64) -> Result<Observable> {
        Observable::new(self.op.shifted(lambda))
    }

    /// `‖θ − λI‖_∞ = max_n |θ_n − λ|` from the cached spectrum.
    pub fn shifted_operator_norm(&self, lambda: f64) -> f64 {
        self.spectrum
            .eigenvalues
            .iter()
            .map(|t| (t - lambda).abs())
            .fold(0.0, f64::max)
    }
}

/// `φ = tr(θ(ρ − σ))`.
pub fn flux(theta: &Observable, rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    if rho.dim() != sigma.dim() {
        return Err(Error::dim_mismatch(rho.dim(), sigma.dim()));
    }
    let diff = rho.operator().sub(sigma.operator());
    real_trace_of_product(theta.operator(), &diff)
}

/// Grid search of `λ ↦ ‖θ − λI‖_∞` compared with `φ_L/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct ShiftCheck {
    pub half_capacity: f64,
    pub grid_min: f64,
    pub grid_argmin: f64,
    /// Largest spacing between neighbouring grid points.
    pub grid_step: f64,
    /// `‖θ − λ*I‖_∞` from a fresh eigendecomposition of the shifted operator.
    pub at_lambda_star: f64,
    pub holds: bool,
}

/// `2n+1`-style uniform grid over `[θ_min − φ_L, θ_max + φ_L]`.
pub fn shift_grid(theta: &Observable, points: usize) -> Vec<f64> {
    let cap = theta.capacity().max(1.0);
    let (lo, hi) = (theta.theta_min() - cap, theta.theta_max() + cap);
    let n = points.max(2);
    (0..n)
        .map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64)
        .collect()
}

pub fn optimal_shift_check(theta: &Observable, grid: &[f64], tol: f64) -> Result<ShiftCheck> {
    if grid.is_empty() {
        return Err(Error::validation("grid", "empty shift grid"));
    }
    let (mut grid_min, mut grid_argmin) = (f64::INFINITY, grid[0]);
    for &l in grid {
        let v = theta.shifted_operator_norm(l);
        if v < grid_min {
            grid_min = v;
            grid_argmin = l;
        }
    }
    let grid_step = grid
        .windows(2)
        .map(|w| (w[1] - w[0]).abs())
        .fold(0.0, f64::max);
    let half_capacity = 0.5 * theta.capacity();
    let at_lambda_star = schatten_norm(
        &theta.op.shifted(theta.lambda_star()),
        SchattenOrder::Infinity,
    )?;
    let holds = grid_min >= half_capacity - tol
        && grid_min <= half_capacity + grid_step + tol
        && (at_lambda_star - half_capacity).abs() <= 1e-12;
    Ok(ShiftCheck {
        half_capacity,
        grid_min,
        grid_argmin,
        grid_step,
        at_lambda_star,
        holds,
    })
}

/// Sign operator `ω̂` and kernel projector `ε̂` of `ρ − σ`.
///
/// With `ρ − σ = Σ_k w_k |w_k⟩⟨w_k|`, `ω̂ = Σ_{w_k≠0} sign(w_k)|w_k⟩⟨w_k|` and
/// `ε̂ = Σ_{w_k=0} |w_k⟩⟨w_k|`, so that `ω̂² + ε̂ = I` and
/// `⟨ω̂⟩_ρ − ⟨ω̂⟩_σ = ‖ρ − σ‖₁`.
#[derive(Debug, Clone, PartialEq)]
pub struct SignDecomposition {
    pub omega: HermitianOperator,
    pub epsilon_op: HermitianOperator,
    /// `⟨ε̂⟩_ρ` (equal to `⟨ε̂⟩_σ`).
    pub epsilon: f64,
    pub zero_tolerance: f64,
    /// `‖ρ − σ‖₁` from the same spectrum.
    pub trace_norm: f64,
}

/// Numerical defects of the identities a [`SignDecomposition`] satisfies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignIdentityDefects {
    /// `|⟨ω̂⟩_ρ − ⟨ω̂⟩_σ − ‖ρ−σ‖₁|`
    pub mean_gap: f64,
    /// `|⟨ε̂⟩_ρ − ⟨ε̂⟩_σ|`
    pub epsilon_gap: f64,
    /// `max |ω̂² + ε̂ − I|`
    pub completeness: f64,
    /// `max |ε̂² − ε̂|`
    pub projector: f64,
    /// `max(|⟨ω̂²⟩_ρ − (1−ε)|, |⟨ω̂²⟩_σ − (1−ε)|)`
    pub second_moment: f64,
    /// Largest distance of an eigenvalue of `ω̂` from `{−1, 0, 1}`.
    pub sign_spectrum: f64,
}

impl SignIdentityDefects {
    pub fn max(&self) -> f64 {
        [
            self.mean_gap,
            self.epsilon_gap,
            self.completeness,
            self.projector,
            self.second_moment,
            self.sign_spectrum,
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Default zero threshold `1e−12·max(1, ‖ρ−σ‖_∞)`.
pub fn sign_decomposition(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<SignDecomposition> {
    sign_decomposition_with(rho, sigma, None)
}

pub fn sign_decomposition_with(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    zero_tolerance: Option<f64>,
) -> Result<SignDecomposition> {
    let (decomp, _) = decompose(rho, sigma, zero_tolerance)?;
    decomp.ok_or_else(|| Error::Degenerate("ρ = σ within tolerance: ⟨ω̂⟩_ρ = ⟨ω̂⟩_σ".to_string()))
}

/// Returns `None` (with the trace norm) when `ρ − σ` vanishes within the
/// zero threshold.
fn decompose(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    zero_tolerance: Option<f64>,
) -> Result<(Option<SignDecomposition>, f64)> {
    if rho.dim() != sigma.dim() {
        return Err(Error::dim_mismatch(rho.dim(), sigma.dim()));
    }
    let diff = rho.operator().sub(sigma.operator());
    let spec = diff.eigh()?;
    let op_norm = schatten_from_eigenvalues(&spec.eigenvalues, SchattenOrder::Infinity);
    let tol = zero_tolerance.unwrap_or(1e-12 * op_norm.max(1.0));
    let trace_norm = schatten_from_eigenvalues(&spec.eigenvalues, SchattenOrder::One);
    if trace_norm <= tol {
        return Ok((None, trace_norm));
    }
    let signs: Vec<f64> = spec
        .eigenvalues
        .iter()
        .map(|&w| if w.abs() <= tol { 0.0 } else { w.signum() })
        .collect();
    let omega = spec.compose_real(&signs);
    let epsilon_op = spec.projector(|w| w.abs() <= tol);
    let epsilon = expectation(&epsilon_op, rho)?.clamp(0.0, 1.0);
    Ok((
        Some(SignDecomposition {
            omega,
            epsilon_op,
            epsilon,
            zero_tolerance: tol,
            trace_norm,
        }),
        trace_norm,
    ))
}

impl SignDecomposition {
    pub fn identity_defects(
        &self,
        rho: &DensityMatrix,
        sigma: &DensityMatrix,
    ) -> Result<SignIdentityDefects> {
        let dim = self.omega.dim();
        let mean_gap =
            (expectation(&self.omega, rho)? - expectation(&self.omega, sigma)? - self.trace_norm)
                .abs();
        let epsilon_gap =
            (expectation(&self.epsilon_op, rho)? - expectation(&self.epsilon_op, sigma)?).abs();
        let omega_sq = self.omega.square();
        let completeness = (omega_sq.add(&self.epsilon_op).matrix()
            - HermitianOperator::identity(dim).matrix())
        .max_abs();
        let projector = (self.epsilon_op.square().matrix() - self.epsilon_op.matrix()).max_abs();
        let target = 1.0 - self.epsilon;
        let second_moment = (expectation(&omega_sq, rho)? - target)
            .abs()
            .max((expectation(&omega_sq, sigma)? - target).abs());
        let sign_spectrum = self
            .omega
            .eigh()?
            .eigenvalues
            .iter()
            .map(|&l| {
                [-1.0, 0.0, 1.0]
                    .iter()
                    .map(|t| (l - t).abs())
                    .fold(f64::INFINITY, f64::min)
            })
            .fold(0.0, f64::max);
        Ok(SignIdentityDefects {
            mean_gap,
            epsilon_gap,
            completeness,
            projector,
            second_moment,
            sign_spectrum,
        })
    }
}

/// Variance-ratio inequality for an operator `ω̂` and two states.
#[derive(Debug, Clone, PartialEq)]
pub struct QturCheck {
    pub mean_rho: f64,
    pub mean_sigma: f64,
    pub var_rho: f64,
    pub var_sigma: f64,
    /// `(Var_ρ + Var_σ) / ((⟨ω̂⟩_ρ − ⟨ω̂⟩_σ)²/2)`
    pub ratio: f64,
    pub s_tilde: RelEntropyValue,
    /// `f(S̃)`
    pub bound: f64,
    /// `Var_ρ + Var_σ − f(S̃)·(⟨ω̂⟩_ρ − ⟨ω̂⟩_σ)²/2`. Cross-multiplied so the
    /// slack stays bounded as the means approach each other.
    pub slack: f64,
    pub holds: bool,
}

pub fn qtur_check(
    omega: &HermitianOperator,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    tol: f64,
) -> Result<QturCheck> {
    let mean_rho = expectation(omega, rho)?;
    let mean_sigma = expectation(omega, sigma)?;
    let delta = mean_rho - mean_sigma;
    if delta.abs() <= Tolerances::DEFAULT.rank {
        return Err(Error::Degenerate(format!(
            "equal means ⟨ω̂⟩_ρ = ⟨ω̂⟩_σ = {mean_rho}"
        )));
    }
    let omega_sq = omega.square();
    let var_rho = expectation(&omega_sq, rho)? - mean_rho * mean_rho;
    let var_sigma = expectation(&omega_sq, sigma)? - mean_sigma * mean_sigma;
    let s_tilde = relative_entropy(rho, sigma)?.average(relative_entropy(sigma, rho)?);
    if s_tilde == ExtendedReal::Finite(0.0) {
        return Err(Error::Degenerate(
            "S̃(ρ,σ) rounds to zero for distinct means".to_string(),
        ));
    }
    let bound = variance_ratio_bound_ext(s_tilde)?;
    let half_sq = 0.5 * delta * delta;
    let slack = var_rho + var_sigma - bound * half_sq;
    Ok(QturCheck {
        mean_rho,
        mean_sigma,
        var_rho,
        var_sigma,
        ratio: (var_rho + var_sigma) / half_sq,
        s_tilde,
        bound,
        slack,
        holds: slack >= -tol,
    })
}

/// Inequalities evaluated by [`evaluate_bounds`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Inequality {
    /// `|φ| ≤ φ_L`
    Capacity,
    /// `(φ/φ_L)² ≤ ‖ρ−σ‖₁²/4`
    TraceNorm,
    /// `‖ρ−σ‖₁²/4 ≤ S(ρ‖σ)/2`
    PinskerForward,
    /// `(φ/φ_L)² ≤ S̃/2`
    PinskerSymmetric,
    /// `‖ρ−σ‖₁²/4 ≤ (1−ε)·B(S̃)`
    Strengthened,
    /// `(φ/φ_L)² ≤ B(S̃)`
    Main,
    /// `(φ/φ_L)·artanh(φ/φ_L) ≤ S̃/2`
    OnsagerLike,
}

impl Inequality {
    pub const ALL: [Inequality; 7] = [
        Inequality::Capacity,
        Inequality::TraceNorm,
        Inequality::PinskerForward,
        Inequality::PinskerSymmetric,
        Inequality::Strengthened,
        Inequality::Main,
        Inequality::OnsagerLike,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Inequality::Capacity => "capacity",
            Inequality::TraceNorm => "trace_norm",
            Inequality::PinskerForward => "pinsker_forward",
            Inequality::PinskerSymmetric => "pinsker_symmetric",
            Inequality::Strengthened => "strengthened",
            Inequality::Main => "main",
            Inequality::OnsagerLike => "onsager_like",
        }
    }
}

impl fmt::Display for Inequality {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// `rhs − lhs`, or `None` when the inequality holds trivially because a
/// side is infinite.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Verdict {
    pub holds: bool,
    pub slack: Option<f64>,
}

impl Verdict {
    pub fn from_slack(slack: f64, tol: f64) -> Self {
        Verdict {
            holds: slack >= -tol,
            slack: Some(slack),
        }
    }

    pub fn trivial() -> Self {
        Verdict {
            holds: true,
            slack: None,
        }
    }
}

/// One evaluation of every bound for a triple `(θ, ρ, σ)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub flux: f64,
    pub capacity: f64,
    /// `(φ/φ_L)²`; 0 when the capacity vanishes.
    pub flux_ratio_sq: f64,
    pub s_forward: RelEntropyValue,
    pub s_backward: RelEntropyValue,
    pub s_tilde: RelEntropyValue,
    /// `S̃/2`
    pub pinsker_rhs: ExtendedReal,
    /// `B(S̃)`
    pub main_rhs: f64,
    /// `(1−ε)·B(S̃)`
    pub strengthened_rhs: f64,
    pub trace_norm: f64,
    pub epsilon: f64,
    /// Set when `θ ∝ I`, i.e. `φ_L = 0`.
    pub zero_capacity: bool,
    pub verdicts: BTreeMap<Inequality, Verdict>,
}

impl BoundReport {
    pub fn all_hold(&self) -> bool {
        self.verdicts.values().all(|v| v.holds)
    }

    pub fn verdict(&self, which: Inequality) -> Verdict {
        self.verdicts[&which]
    }
}

/// Evaluates the full bound chain for `(θ, ρ, σ)`.
///
/// `ρ = σ` yields zero flux with every inequality satisfied at zero slack
/// (`ε = 1` since `ε̂ = I`). An infinite `S̃` makes `B(S̃) = 1` and the
/// entropy-side inequalities trivially true.
pub fn evaluate_bounds(
    theta: &Observable,
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
    tol: f64,
) -> Result<BoundReport> {
    if theta.dim() != rho.dim() {
        return Err(Error::dim_mismatch(theta.dim(), rho.dim()));
    }
    let phi = flux(theta, rho, sigma)?;
    let capacity = theta.capacity();
    let zero_capacity =
        capacity <= Tolerances::DEFAULT.rank * theta.shifted_operator_norm(0.0).max(1.0);
    let ratio = if zero_capacity { 0.0 } else { phi / capacity };
    let flux_ratio_sq = ratio * ratio;

    let s_forward = relative_entropy(rho, sigma)?;
    let s_backward = relative_entropy(sigma, rho)?;
    let s_tilde = s_forward.average(s_backward);
    let pinsker_rhs = s_tilde.map(|s| 0.5 * s);
    let main_rhs = flux_ratio_bound_ext(s_tilde)?;

    let (decomp, trace_norm) = decompose(rho, sigma, None)?;
    let epsilon = decomp.as_ref().map_or(1.0, |d| d.epsilon);
    let strengthened_rhs = (1.0 - epsilon) * main_rhs;
    let tn_sq_4 = 0.25 * trace_norm * trace_norm;

    let mut verdicts = BTreeMap::new();
    verdicts.insert(
        Inequality::Capacity,
        Verdict::from_slack(capacity - phi.abs(), tol),
    );
    verdicts.insert(
        Inequality::TraceNorm,
        Verdict::from_slack(tn_sq_4 - flux_ratio_sq, tol),
    );
    verdicts.insert(
        Inequality::PinskerForward,
        match s_forward {
            ExtendedReal::Finite(s) => Verdict::from_slack(0.5 * s - tn_sq_4, tol),
            ExtendedReal::Infinite => Verdict::trivial(),
        },
    );
    verdicts.insert(
        Inequality::PinskerSymmetric,
        match pinsker_rhs {
            ExtendedReal::Finite(p) => Verdict::from_slack(p - flux_ratio_sq, tol),
            ExtendedReal::Infinite => Verdict::trivial(),
        },
    );
    verdicts.insert(
        Inequality::Strengthened,
        Verdict::from_slack(strengthened_rhs - tn_sq_4, tol),
    );
    verdicts.insert(
        Inequality::Main,
        Verdict::from_slack(main_rhs - flux_ratio_sq, tol),
    );
    let r = ratio.clamp(-1.0, 1.0);
    let onsager = match (s_tilde, onsager_like(r)?) {
        (ExtendedReal::Infinite, _) => Verdict::trivial(),
        (ExtendedReal::Finite(s), ExtendedReal::Finite(o)) => {
            Verdict::from_slack(0.5 * s - 0.5 * o, tol)
        }
        (ExtendedReal::Finite(_), ExtendedReal::Infinite) => Verdict {
            holds: false,
            slack: None,
        },
    };
    verdicts.insert(Inequality::OnsagerLike, onsager);

    Ok(BoundReport {
        flux: phi,
        capacity,
        flux_ratio_sq,
        s_forward,
        s_backward,
        s_tilde,
        pinsker_rhs,
        main_rhs,
        strengthened_rhs,
        trace_norm,
        epsilon,
        zero_capacity,
        verdicts,
    })
}
