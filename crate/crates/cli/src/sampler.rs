//! Seeded draws of qubit observable/state triples.

use std::f64::consts::TAU;

use fluxbound::flux::Observable;
use fluxbound::{ComplexMatrix, DensityMatrix, HermitianOperator, Result};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Generator for draw `index`: a pure function of `(master_seed, index)`,
/// independent of how draws are scheduled across threads.
pub fn draw_rng(master_seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(master_seed);
    rng.set_stream(index);
    rng
}

/// Parameters of one random qubit triple `(θ, ρ, σ)`:
///
/// * `ρ = diag(1−p₁, p₁)`
/// * `σ = diag(1−q₁, q₁) + C|0⟩⟨1| + C*|1⟩⟨0|`
/// * `θ = ω(|1⟩⟨1| − |0⟩⟨0|) + D|0⟩⟨1| + D*|1⟩⟨0|`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QubitDraw {
    pub p1: f64,
    pub q1: f64,
    /// `|C|²`, uniform on `[0, q₁(1−q₁)]` so that `σ ≥ 0`.
    pub c_abs_sq: f64,
    pub phase_c: f64,
    /// Diagonal coefficient of `θ`, uniform on `[0, 4]`.
    pub omega: f64,
    pub d_abs_sq: f64,
    pub phase_d: f64,
}

impl QubitDraw {
    /// Consumes seven uniforms in field order.
    pub fn sample<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let p1 = rng.gen::<f64>();
        let q1 = rng.gen::<f64>();
        let c_abs_sq = rng.gen::<f64>() * q1 * (1.0 - q1);
        let phase_c = rng.gen::<f64>() * TAU;
        let omega = rng.gen::<f64>() * 4.0;
        let d_abs_sq = rng.gen::<f64>();
        let phase_d = rng.gen::<f64>() * TAU;
        QubitDraw {
            p1,
            q1,
            c_abs_sq,
            phase_c,
            omega,
            d_abs_sq,
            phase_d,
        }
    }

    /// Every uniform pinned to the middle of its range (phases at 0).
    pub fn midpoint() -> Self {
        QubitDraw {
            p1: 0.5,
            q1: 0.5,
            c_abs_sq: 0.125,
            phase_c: 0.0,
            omega: 2.0,
            d_abs_sq: 0.5,
            phase_d: 0.0,
        }
    }

    pub fn coherence(&self) -> Complex64 {
        Complex64::from_polar(self.c_abs_sq.sqrt(), self.phase_c)
    }

    pub fn coupling(&self) -> Complex64 {
        Complex64::from_polar(self.d_abs_sq.sqrt(), self.phase_d)
    }

    pub fn rho(&self) -> Result<DensityMatrix> {
        DensityMatrix::diagonal(&[1.0 - self.p1, self.p1])
    }

    pub fn sigma(&self) -> Result<DensityMatrix> {
        let c = self.coherence();
        DensityMatrix::new(ComplexMatrix::from_rows(vec![
            vec![Complex64::new(1.0 - self.q1, 0.0), c],
            vec![c.conj(), Complex64::new(self.q1, 0.0)],
        ])?)
    }

    pub fn observable(&self) -> Result<Observable> {
        let d = self.coupling();
        let m = ComplexMatrix::from_rows(vec![
            vec![Complex64::new(-self.omega, 0.0), d],
            vec![d.conj(), Complex64::new(self.omega, 0.0)],
        ])?;
        Observable::new(HermitianOperator::new(m)?)
    }

    pub fn build(&self) -> Result<(Observable, DensityMatrix, DensityMatrix)> {
        Ok((self.observable()?, self.rho()?, self.sigma()?))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn midpoint_triple() {
        let d = QubitDraw::midpoint();
        let (theta, rho, sigma) = d.build().unwrap();
        assert_eq!(rho.spectrum().eigenvalues, vec![0.5, 0.5]);
        // σ = [[.5, c], [c, .5]] with c = √0.125: eigenvalues 0.5 ± c
        let c = 0.125f64.sqrt();
        let ev = &sigma.spectrum().eigenvalues;
        assert!((ev[0] - (0.5 - c)).abs() < 1e-15 && (ev[1] - (0.5 + c)).abs() < 1e-15);
        assert!(ev[0] >= 0.0);
        // θ eigenvalues ±√(ω² + |D|²)
        let r = (4.0f64 + 0.5).sqrt();
        assert!((theta.theta_max() - r).abs() < 1e-14);
        assert!((theta.capacity() - 2.0 * r).abs() < 1e-14);
    }

    #[test]
    fn substreams_are_pure_functions_of_seed_and_index() {
        let a = QubitDraw::sample(&mut draw_rng(42, 7));
        let b = QubitDraw::sample(&mut draw_rng(42, 7));
        let c = QubitDraw::sample(&mut draw_rng(42, 8));
        let d = QubitDraw::sample(&mut draw_rng(43, 7));
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_ne!(a, d);
    }

    #[test]
    fn draws_respect_ranges_and_validate() {
        for i in 0..10_000 {
            let d = QubitDraw::sample(&mut draw_rng(5, i));
            assert!((0.0..1.0).contains(&d.p1) && (0.0..1.0).contains(&d.q1));
            assert!(d.c_abs_sq <= d.q1 * (1.0 - d.q1));
            assert!(d.q1 * (1.0 - d.q1) - d.c_abs_sq >= 0.0);
            assert!((0.0..TAU).contains(&d.phase_c) && (0.0..TAU).contains(&d.phase_d));
            assert!((0.0..4.0).contains(&d.omega));
            d.build().unwrap();
        }
    }
}
