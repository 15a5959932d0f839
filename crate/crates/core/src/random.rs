//! Seeded random matrices and states for property checks.
//!
//! All samplers take the generator by `&mut`, so a caller that derives one
//! generator per draw gets reproducible draws regardless of evaluation order.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::linalg::{unitary_from_generator, ComplexMatrix, HermitianOperator};
use crate::state::DensityMatrix;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    StandardNormal.sample(rng)
}

/// Ginibre matrix: i.i.d. standard complex Gaussian entries.
pub fn complex_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let data = (0..dim * dim)
        .map(|_| Complex64::new(gaussian(rng), gaussian(rng)))
        .collect();
    ComplexMatrix::from_vec(dim, data).expect("dim > 0")
}

/// Hermitian part of a Ginibre matrix, scaled.
pub fn hermitian<R: Rng + ?Sized>(rng: &mut R, dim: usize, scale: f64) -> HermitianOperator {
    let m = complex_matrix(rng, dim).hermitian_part().scale_real(scale);
    HermitianOperator::new(m).expect("hermitian part")
}

/// Full-rank state `G·G†/tr(G·G†)` from a Ginibre matrix `G`.
pub fn density_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> DensityMatrix {
    let g = complex_matrix(rng, dim);
    let gg = &g * &g.adjoint();
    let tr = gg.trace().re;
    DensityMatrix::new(gg.scale_real(1.0 / tr)).expect("Ginibre state is valid")
}

/// Unitary `exp(−i·H)` for a random Hermitian `H` with O(π) spectrum.
pub fn unitary<R: Rng + ?Sized>(rng: &mut R, dim: usize) -> ComplexMatrix {
    let h = hermitian(rng, dim, std::f64::consts::PI);
    unitary_from_generator(&h, 1.0).expect("finite spectrum")
}

/// Random qubit state with a uniformly drawn Bloch vector inside the ball.
pub fn qubit_state<R: Rng + ?Sized>(rng: &mut R) -> DensityMatrix {
    loop {
        let (x, y, z): (f64, f64, f64) = (
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
            rng.gen_range(-1.0..1.0),
        );
        if x * x + y * y + z * z < 1.0 {
            let m = ComplexMatrix::from_rows(vec![
                vec![
                    Complex64::new((1.0 + z) / 2.0, 0.0),
                    Complex64::new(x / 2.0, -y / 2.0),
                ],
                vec![
                    Complex64::new(x / 2.0, y / 2.0),
                    Complex64::new((1.0 - z) / 2.0, 0.0),
                ],
            ])
            .expect("2x2");
            return DensityMatrix::new(m).expect("Bloch ball state");
        }
    }
}
