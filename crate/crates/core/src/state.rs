//! Density matrices and relative-entropy functionals.

use std::fmt;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    eigh_with, partial_trace, real_trace_of_product, schatten_from_eigenvalues, spectral_map,
    tensor_product, ComplexMatrix, HermitianOperator, SchattenOrder, Spectrum, Subsystem,
};
use crate::tolerance::Tolerances;

/// A non-negative real that may be `+∞`.
///
/// Infinite values are tagged, so no floating-point infinity reaches the
/// arithmetic of downstream bounds.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum ExtendedReal {
    Finite(f64),
    Infinite,
}

/// Quantum relative entropy `S(ρ‖σ)`; infinite when `supp ρ ⊄ supp σ`.
pub type RelEntropyValue = ExtendedReal;

impl ExtendedReal {
    pub fn finite(self) -> Option<f64> {
        match self {
            ExtendedReal::Finite(x) => Some(x),
            ExtendedReal::Infinite => None,
        }
    }

    pub fn is_finite(self) -> bool {
        matches!(self, ExtendedReal::Finite(_))
    }

    /// Finite value, or `cap` when infinite.
    pub fn value_or(self, cap: f64) -> f64 {
        self.finite().unwrap_or(cap)
    }

    /// Midpoint of two values; infinite if either is.
    pub fn average(self, other: ExtendedReal) -> ExtendedReal {
        match (self, other) {
            (ExtendedReal::Finite(a), ExtendedReal::Finite(b)) => {
                ExtendedReal::Finite(0.5 * (a + b))
            }
            _ => ExtendedReal::Infinite,
        }
    }

    pub fn map(self, f: impl FnOnce(f64) -> f64) -> ExtendedReal {
        match self {
            ExtendedReal::Finite(x) => ExtendedReal::Finite(f(x)),
            ExtendedReal::Infinite => ExtendedReal::Infinite,
        }
    }
}

impl fmt::Display for ExtendedReal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtendedReal::Finite(x) => write!(f, "{x}"),
            ExtendedReal::Infinite => write!(f, "inf"),
        }
    }
}

/// Validated quantum state: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    op: HermitianOperator,
    spectrum: Spectrum,
    rank_tolerance: f64,
    clamped: bool,
}

impl DensityMatrix {
    /// Validates with [`Tolerances::DEFAULT`]. See [`validate_state_with`].
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        validate_state_with(m, &Tolerances::DEFAULT)
    }

    /// Diagonal state with the given populations.
    pub fn diagonal(populations: &[f64]) -> Result<Self> {
        Self::new(ComplexMatrix::from_diagonal(populations))
    }

    /// `|ψ⟩⟨ψ|` for a normalised `ψ`.
    pub fn pure(psi: &[Complex64]) -> Result<Self> {
        Self::new(ComplexMatrix::outer(psi))
    }

    /// State with a known eigendecomposition; the spectrum is cached as
    /// given rather than recomputed, which keeps small populations exact.
    /// Eigenpairs are re-sorted ascending.
    pub fn from_spectrum(spectrum: Spectrum) -> Result<Self> {
        let tol = Tolerances::DEFAULT;
        if spectrum.eigenvectors.unitarity_defect() > tol.unitarity {
            return Err(Error::validation(
                "unitarity",
                "eigenvectors are not orthonormal",
            ));
        }
        if let Some(bad) = spectrum.eigenvalues.iter().find(|&&p| !(p >= 0.0)) {
            return Err(Error::validation(
                "positivity",
                format!("population {bad:e}"),
            ));
        }
        let total: f64 = spectrum.eigenvalues.iter().sum();
        if !((total - 1.0).abs() <= tol.trace) {
            return Err(Error::validation(
                "trace",
                format!("trace {total} differs from 1"),
            ));
        }
        let spectrum = spectrum.sorted();
        let op = spectrum.compose_real(&spectrum.eigenvalues);
        Ok(DensityMatrix {
            op,
            spectrum,
            rank_tolerance: tol.rank,
            clamped: false,
        })
    }

    pub fn maximally_mixed(dim: usize) -> Self {
        Self::new(ComplexMatrix::identity(dim).scale_real(1.0 / dim as f64))
            .expect("I/d is a state")
    }

    pub fn operator(&self) -> &HermitianOperator {
        &self.op
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        self.op.matrix()
    }

    pub fn spectrum(&self) -> &Spectrum {
        &self.spectrum
    }

    pub fn dim(&self) -> usize {
        self.op.dim()
    }

    pub fn rank_tolerance(&self) -> f64 {
        self.rank_tolerance
    }

    /// True if slightly negative eigenvalues were set to zero on validation.
    pub fn clamped(&self) -> bool {
        self.clamped
    }

    pub fn is_full_rank(&self) -> bool {
        self.spectrum.min() > self.rank_tolerance
    }

    /// `ln ρ`; a domain error if `ρ` has a zero eigenvalue.
    pub fn log(&self) -> Result<HermitianOperator> {
        let tol = self.rank_tolerance;
        let m = spectral_map(&self.spectrum, "ln", |p| {
            Complex64::new(if p > tol { p.ln() } else { f64::NEG_INFINITY }, 0.0)
        })?;
        HermitianOperator::new(m.hermitian_part())
    }

    /// `U ρ U†`.
    pub fn evolve(&self, u: &ComplexMatrix) -> Result<DensityMatrix> {
        DensityMatrix::new(u.conjugate(self.matrix())?.hermitian_part())
    }

    /// `ρ ⊗ τ`.
    pub fn kron(&self, other: &DensityMatrix) -> Result<DensityMatrix> {
        DensityMatrix::new(tensor_product(self.matrix(), other.matrix()))
    }

    pub fn partial_trace(
        &self,
        dim_s: usize,
        dim_e: usize,
        keep: Subsystem,
    ) -> Result<DensityMatrix> {
        DensityMatrix::new(partial_trace(self.matrix(), dim_s, dim_e, keep)?.hermitian_part())
    }
}

/// Validates `m` as a density matrix with default tolerances.
pub fn validate_state(m: ComplexMatrix) -> Result<DensityMatrix> {
    validate_state_with(m, &Tolerances::DEFAULT)
}

/// Eigenvalues in `[−negative_eigenvalue, 0)` are clamped to zero and the
/// state is renormalised; the `clamped` flag records that this happened.
pub fn validate_state_with(m: ComplexMatrix, tol: &Tolerances) -> Result<DensityMatrix> {
    let op = HermitianOperator::with_tolerance(m, tol.hermiticity)?;
    let mut spectrum = eigh_with(&op, tol)?;
    let min = spectrum.min();
    if min < -tol.negative_eigenvalue {
        return Err(Error::validation(
            "positivity",
            format!("eigenvalue {min:e} below −{:e}", tol.negative_eigenvalue),
        ));
    }
    let trace = op.matrix().trace().re;
    if !((trace - 1.0).abs() <= tol.trace) {
        return Err(Error::validation(
            "trace",
            format!("trace {trace} differs from 1"),
        ));
    }
    if min >= 0.0 {
        return Ok(DensityMatrix {
            op,
            spectrum,
            rank_tolerance: tol.rank,
            clamped: false,
        });
    }
    for l in spectrum.eigenvalues.iter_mut() {
        *l = l.max(0.0);
    }
    let total: f64 = spectrum.eigenvalues.iter().sum();
    for l in spectrum.eigenvalues.iter_mut() {
        *l /= total;
    }
    let op = spectrum.compose_real(&spectrum.eigenvalues);
    Ok(DensityMatrix {
        op,
        spectrum,
        rank_tolerance: tol.rank,
        clamped: true,
    })
}

/// `tr(H·ρ)`, real.
pub fn expectation(h: &HermitianOperator, rho: &DensityMatrix) -> Result<f64> {
    real_trace_of_product(h, rho.operator())
}

fn check_dims(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<()> {
    if rho.dim() != sigma.dim() {
        return Err(Error::dim_mismatch(rho.dim(), sigma.dim()));
    }
    Ok(())
}

/// `S(ρ‖σ) = tr ρ(ln ρ − ln σ)`.
///
/// Evaluated in the σ eigenbasis as
/// `Σ_i p_i ln p_i − Σ_j ⟨s_j|ρ|s_j⟩ ln s_j`, where the weights
/// `⟨s_j|ρ|s_j⟩ = Σ_i p_i |⟨p_i|s_j⟩|²` come from the overlap matrix of the two
/// eigenbases. A kernel direction of σ carrying weight above the rank
/// tolerance makes the divergence infinite.
pub fn relative_entropy(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<RelEntropyValue> {
    check_dims(rho, sigma)?;
    let tol = rho.rank_tolerance.max(sigma.rank_tolerance);
    let n = rho.dim();
    let (p, pv) = (&rho.spectrum.eigenvalues, &rho.spectrum.eigenvectors);
    let (s, sv) = (&sigma.spectrum.eigenvalues, &sigma.spectrum.eigenvectors);

    let support: Vec<usize> = (0..n).filter(|&i| p[i] > tol).collect();
    let neg_entropy: f64 = support.iter().map(|&i| p[i] * p[i].ln()).sum();

    let mut cross = 0.0;
    for j in 0..n {
        let weight: f64 = support
            .iter()
            .map(|&i| {
                let overlap: Complex64 = (0..n).map(|k| pv[(k, i)].conj() * sv[(k, j)]).sum();
                p[i] * overlap.norm_sqr()
            })
            .sum();
        if s[j] > tol {
            cross += weight * s[j].ln();
        } else if weight > tol {
            return Ok(ExtendedReal::Infinite);
        }
    }
    let value = neg_entropy - cross;
    debug_assert!(value >= -1e-10, "relative entropy {value} below round-off");
    Ok(ExtendedReal::Finite(value.max(0.0)))
}

/// `S̃(ρ,σ) = (S(ρ‖σ) + S(σ‖ρ))/2`.
pub fn symmetric_relative_entropy(
    rho: &DensityMatrix,
    sigma: &DensityMatrix,
) -> Result<RelEntropyValue> {
    Ok(relative_entropy(rho, sigma)?.average(relative_entropy(sigma, rho)?))
}

/// `‖ρ − σ‖₁`, in `[0, 2]`.
pub fn trace_distance_norm(rho: &DensityMatrix, sigma: &DensityMatrix) -> Result<f64> {
    check_dims(rho, sigma)?;
    let diff = rho.operator().sub(sigma.operator());
    let spec = diff.eigh()?;
    Ok(schatten_from_eigenvalues(
        &spec.eigenvalues,
        SchattenOrder::One,
    ))
}

/// Outcome of checking `S(ρ‖σ) ≥ ‖ρ−σ‖₁²/2`.
#[derive(Debug, Clone, PartialEq)]
pub struct PinskerCheck {
    pub relative_entropy: RelEntropyValue,
    pub trace_norm: f64,
    /// `‖ρ−σ‖₁²/2`
    pub lower_bound: f64,
    /// `S − ‖ρ−σ‖₁²/2`; `None` when `S` is infinite.
    pub slack: Option<f64>,
    pub holds: bool,
}

pub fn pinsker_check(rho: &DensityMatrix, sigma: &DensityMatrix, tol: f64) -> Result<PinskerCheck> {
    let s = relative_entropy(rho, sigma)?;
    let tn = trace_distance_norm(rho, sigma)?;
    let lower = 0.5 * tn * tn;
    let slack = s.finite().map(|v| v - lower);
    Ok(PinskerCheck {
        relative_entropy: s,
        trace_norm: tn,
        lower_bound: lower,
        slack,
        holds: slack.is_none_or(|x| x >= -tol),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn family(a: f64) -> (DensityMatrix, DensityMatrix) {
        let z = 2.0 * (a / 2.0).cosh();
        let rho = DensityMatrix::diagonal(&[(-a / 2.0).exp() / z, (a / 2.0).exp() / z]).unwrap();
        let sigma = DensityMatrix::diagonal(&[(a / 2.0).exp() / z, (-a / 2.0).exp() / z]).unwrap();
        (rho, sigma)
    }

    #[test]
    fn maximally_mixed_is_valid() {
        let m = validate_state(ComplexMatrix::identity(2).scale_real(0.5)).unwrap();
        assert!(!m.clamped());
    }

    #[test]
    fn tiny_negative_eigenvalue_is_clamped() {
        let m = validate_state(ComplexMatrix::from_diagonal(&[1.0, -1e-12])).unwrap();
        assert!(m.clamped());
        assert!(m.spectrum().eigenvalues.iter().all(|&l| l >= 0.0));
        assert!((m.matrix().trace().re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn trace_violation_is_named() {
        match validate_state(ComplexMatrix::from_diagonal(&[0.7, 0.4])) {
            Err(Error::Validation { invariant, .. }) => assert_eq!(invariant, "trace"),
            other => panic!("expected trace error, got {other:?}"),
        }
    }

    #[test]
    fn negative_eigenvalue_is_named() {
        match validate_state(ComplexMatrix::from_diagonal(&[1.1, -0.1])) {
            Err(Error::Validation { invariant, .. }) => assert_eq!(invariant, "positivity"),
            other => panic!("expected positivity error, got {other:?}"),
        }
    }

    #[test]
    fn self_divergence_vanishes() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for d in 2..=4 {
            let rho = random::density_matrix(&mut rng, d);
            let s = relative_entropy(&rho, &rho).unwrap().finite().unwrap();
            assert!(s.abs() < 1e-12, "dim {d}: {s}");
        }
    }

    #[test]
    fn saturating_family_closed_form() {
        let a: f64 = 2.0;
        let (rho, sigma) = family(a);
        let expected = a * (a / 2.0).tanh();
        assert!((expected - 1.5231883119115296).abs() < 1e-15);
        let fwd = relative_entropy(&rho, &sigma).unwrap().finite().unwrap();
        let sym = symmetric_relative_entropy(&rho, &sigma)
            .unwrap()
            .finite()
            .unwrap();
        assert!((fwd - expected).abs() < 1e-12);
        assert!((sym - expected).abs() < 1e-12);
        let tn = trace_distance_norm(&rho, &sigma).unwrap();
        assert!((tn - 2.0 * (a / 2.0).tanh()).abs() < 1e-14);
    }

    #[test]
    fn support_violation_is_infinite() {
        let rho = DensityMatrix::maximally_mixed(2);
        let sigma = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        assert_eq!(
            relative_entropy(&rho, &sigma).unwrap(),
            ExtendedReal::Infinite
        );
        assert_eq!(
            symmetric_relative_entropy(&rho, &sigma).unwrap(),
            ExtendedReal::Infinite
        );
        // the other direction is finite: ln 2
        let back = relative_entropy(&sigma, &rho).unwrap().finite().unwrap();
        assert!((back - 2f64.ln()).abs() < 1e-14);
    }

    #[test]
    fn orthogonal_pure_states_at_distance_two() {
        let a = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let b = DensityMatrix::diagonal(&[0.0, 1.0]).unwrap();
        assert!((trace_distance_norm(&a, &b).unwrap() - 2.0).abs() < 1e-15);
        assert_eq!(trace_distance_norm(&a, &a).unwrap(), 0.0);
    }

    #[test]
    fn dimension_mismatch() {
        let a = DensityMatrix::maximally_mixed(2);
        let b = DensityMatrix::maximally_mixed(3);
        assert!(relative_entropy(&a, &b).is_err());
        assert!(trace_distance_norm(&a, &b).is_err());
    }

    #[test]
    fn pinsker_cases() {
        let rho = DensityMatrix::maximally_mixed(2);
        let same = pinsker_check(&rho, &rho, 1e-9).unwrap();
        assert!(same.holds);
        assert!(same.slack.unwrap().abs() < 1e-15);

        let (r, s) = family(0.1);
        let c = pinsker_check(&r, &s, 1e-9).unwrap();
        assert!(c.slack.unwrap() > 0.0);

        let pure = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        let inf = pinsker_check(&rho, &pure, 1e-9).unwrap();
        assert!(inf.holds && inf.slack.is_none());
    }

    #[test]
    fn pinsker_random_qubits() {
        let mut rng = ChaCha8Rng::seed_from_u64(21);
        for _ in 0..1000 {
            let r = random::qubit_state(&mut rng);
            let s = random::qubit_state(&mut rng);
            assert!(pinsker_check(&r, &s, 1e-9).unwrap().holds);
        }
    }

    #[test]
    fn expectation_values() {
        let rho = DensityMatrix::maximally_mixed(3);
        assert!((expectation(&HermitianOperator::identity(3), &rho).unwrap() - 1.0).abs() < 1e-15);
        let p = 0.3;
        let d = DensityMatrix::diagonal(&[p, 1.0 - p]).unwrap();
        let e = expectation(&HermitianOperator::pauli_z(), &d).unwrap();
        assert!((e - (2.0 * p - 1.0)).abs() < 1e-15);
    }

    #[test]
    fn expectation_matches_double_sum() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let h = random::hermitian(&mut rng, 4, 1.0);
        let rho = random::density_matrix(&mut rng, 4);
        let mut acc = Complex64::new(0.0, 0.0);
        for i in 0..4 {
            for j in 0..4 {
                acc += h.matrix()[(i, j)] * rho.matrix()[(j, i)];
            }
        }
        assert!((expectation(&h, &rho).unwrap() - acc.re).abs() < 1e-13);
        assert!(expectation(&h, &DensityMatrix::maximally_mixed(2)).is_err());
    }

    #[test]
    fn log_of_rank_deficient_state_fails() {
        let pure = DensityMatrix::diagonal(&[1.0, 0.0]).unwrap();
        assert!(matches!(pure.log(), Err(Error::Domain { .. })));
        let mixed = DensityMatrix::diagonal(&[0.25, 0.75]).unwrap();
        let l = mixed.log().unwrap();
        assert!((l.matrix()[(0, 0)].re - 0.25f64.ln()).abs() < 1e-14);
    }
}
