//! # fluxbound
//!
//! Upper bounds on the flux of a bounded observable between two quantum
//! states, expressed through the quantum relative entropy.
//!
//! For an observable `θ` with spectrum in `[θ_min, θ_max]` the flux
//! `φ = tr(θ(ρ − σ))` is limited by the capacity `φ_L = θ_max − θ_min`.
//! This crate evaluates, and checks numerically, the chain
//!
//! ```text
//! (φ/φ_L)² ≤ ‖ρ−σ‖₁²/4 ≤ (1−ε)·B(S̃(ρ,σ)) ≤ B(S̃(ρ,σ)) ≤ 1
//! ```
//!
//! where `S̃` is the symmetrised relative entropy and `B(x) = (x/g(x))²` with
//! `g` the inverse of `h(x) = x·tanh(x/2)`.
//!
//! ## Layout
//!
//! - [`linalg`]: small dense complex matrices, Jacobi eigensolver, spectral
//!   matrix functions, tensor products and partial traces.
//! - [`state`]: validated density matrices and relative-entropy functionals.
//! - [`bounds`]: the scalar functions `h`, `g`, `B`, `f` and the
//!   Onsager-like form `2r·artanh(r)`.
//! - [`flux`]: observables, the sign decomposition of `ρ − σ`, and full
//!   bound reports.
//! - [`scenarios`]: system–environment unitary evolution, entropy
//!   production, entropy flux, correlations, the saturating two-level family
//!   and the exchange-coupled spin pair.
//! - [`random`]: seeded samplers for Hermitian matrices, states and unitaries.
//!
//! Natural units (`k_B = ħ = 1`) throughout.

#![forbid(unsafe_code)]
// `!(x > 0.0)` style guards are deliberate: they also reject NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod bounds;
pub mod error;
pub mod flux;
pub mod linalg;
pub mod random;
pub mod scenarios;
pub mod state;
pub mod tolerance;

pub use error::{Error, Result};
pub use linalg::{ComplexMatrix, HermitianOperator, SchattenOrder, Spectrum, Subsystem};
pub use state::{DensityMatrix, ExtendedReal, RelEntropyValue};
pub use tolerance::Tolerances;
