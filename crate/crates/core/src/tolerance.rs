//! Numerical tolerances, collected in one record.
//!
//! Every threshold used by validation or by the inequality checks lives
//! here. Functions without an explicit tolerance argument use
//! [`Tolerances::DEFAULT`].

/// Tolerance configuration. All values are absolute unless noted.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Max entrywise `|M[i][j] − conj(M[j][i])|` for a Hermitian operator.
    pub hermiticity: f64,
    /// Jacobi stops once the off-diagonal Frobenius mass is below this
    /// fraction of `‖H‖_F`.
    pub jacobi_relative: f64,
    /// Maximum number of cyclic Jacobi sweeps.
    pub jacobi_max_sweeps: usize,
    /// Most negative eigenvalue a density matrix may have before clamping.
    pub negative_eigenvalue: f64,
    /// Max `|tr ρ − 1|`.
    pub trace: f64,
    /// Eigenvalues at or below this are exact zeros for support purposes.
    pub rank: f64,
    /// Max imaginary part of an expectation value of a Hermitian operator.
    pub imaginary: f64,
    /// Max entrywise `|U†U − I|` for a unitary.
    pub unitarity: f64,
    /// Slack allowed when checking an inequality `lhs ≤ rhs`.
    pub inequality_slack: f64,
}

impl Tolerances {
    pub const DEFAULT: Tolerances = Tolerances {
        hermiticity: 1e-12,
        jacobi_relative: 1e-14,
        jacobi_max_sweeps: 100,
        negative_eigenvalue: 1e-10,
        trace: 1e-10,
        rank: 1e-12,
        imaginary: 1e-10,
        unitarity: 1e-10,
        inequality_slack: 1e-9,
    };

    /// Same defaults with a different inequality slack.
    pub fn with_slack(slack: f64) -> Self {
        Tolerances {
            inequality_slack: slack,
            ..Self::DEFAULT
        }
    }
}

impl Default for Tolerances {
    fn default() -> Self {
        Self::DEFAULT
    }
}
