//! Dense complex linear algebra for small Hilbert spaces.
//!
//! Matrices are stored row-major in a flat `Vec<Complex64>`. Dimensions of
//! interest are at most 16, so everything here is written for clarity and
//! determinism rather than throughput.

use std::fmt;
use std::ops::{Add, Index, IndexMut, Mul, Sub};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::tolerance::Tolerances;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);
const ONE: Complex64 = Complex64::new(1.0, 0.0);

/// Square complex matrix.
#[derive(Clone, PartialEq)]
pub struct ComplexMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl fmt::Debug for ComplexMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "ComplexMatrix({}x{}) [", self.dim, self.dim)?;
        for i in 0..self.dim {
            write!(f, "  ")?;
            for j in 0..self.dim {
                let z = self[(i, j)];
                write!(f, "{:+.6}{:+.6}i  ", z.re, z.im)?;
            }
            writeln!(f)?;
        }
        write!(f, "]")
    }
}

impl ComplexMatrix {
    pub fn zeros(dim: usize) -> Self {
        ComplexMatrix {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    /// Builds a matrix from a flat row-major buffer of length `dim²`.
    pub fn from_vec(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if dim == 0 {
            return Err(Error::validation("square", "dimension must be at least 1"));
        }
        if data.len() != dim * dim {
            return Err(Error::validation(
                "square",
                format!("{} entries cannot form a {dim}x{dim} matrix", data.len()),
            ));
        }
        Ok(ComplexMatrix { dim, data })
    }

    pub fn from_rows(rows: Vec<Vec<Complex64>>) -> Result<Self> {
        let dim = rows.len();
        if let Some(bad) = rows.iter().find(|r| r.len() != dim) {
            return Err(Error::validation(
                "square",
                format!("row of length {} in a matrix with {dim} rows", bad.len()),
            ));
        }
        Self::from_vec(dim, rows.into_iter().flatten().collect())
    }

    pub fn from_real_rows(rows: &[&[f64]]) -> Result<Self> {
        Self::from_rows(
            rows.iter()
                .map(|r| r.iter().map(|&x| Complex64::new(x, 0.0)).collect())
                .collect(),
        )
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &d) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(d, 0.0);
        }
        m
    }

    /// Rank-one projector `|v⟩⟨v|` (not normalised).
    pub fn outer(v: &[Complex64]) -> Self {
        let n = v.len();
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn adjoint(&self) -> Self {
        let n = self.dim;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(j, i)] = self[(i, j)].conj();
            }
        }
        m
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    pub fn scale(&self, s: Complex64) -> Self {
        ComplexMatrix {
            dim: self.dim,
            data: self.data.iter().map(|z| z * s).collect(),
        }
    }

    pub fn scale_real(&self, s: f64) -> Self {
        self.scale(Complex64::new(s, 0.0))
    }

    /// Largest entry modulus.
    pub fn max_abs(&self) -> f64 {
        self.data.iter().map(|z| z.norm()).fold(0.0, f64::max)
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `max_{i,j} |M[i][j] − conj(M[j][i])|`.
    pub fn hermiticity_defect(&self) -> f64 {
        let n = self.dim;
        let mut worst = 0.0_f64;
        for i in 0..n {
            for j in i..n {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `(M + M†)/2`.
    pub fn hermitian_part(&self) -> Self {
        let n = self.dim;
        let mut m = Self::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = (self[(i, j)] + self[(j, i)].conj()) * 0.5;
            }
        }
        m
    }

    /// `max |M†M − I|` entrywise.
    pub fn unitarity_defect(&self) -> f64 {
        (&(&self.adjoint() * self) - &Self::identity(self.dim)).max_abs()
    }

    /// `M ρ M†`.
    pub fn conjugate(&self, rho: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.check_same_dim(rho)?;
        Ok(&(self * rho) * &self.adjoint())
    }

    pub fn check_same_dim(&self, other: &ComplexMatrix) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::dim_mismatch(self.dim, other.dim));
        }
        Ok(())
    }

    fn assert_same_dim(&self, other: &ComplexMatrix) {
        assert_eq!(
            self.dim, other.dim,
            "matrix dimensions differ: {} vs {}",
            self.dim, other.dim
        );
    }
}

impl Index<(usize, usize)> for ComplexMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.assert_same_dim(rhs);
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a + b)
                .collect(),
        }
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.assert_same_dim(rhs);
        ComplexMatrix {
            dim: self.dim,
            data: self
                .data
                .iter()
                .zip(&rhs.data)
                .map(|(a, b)| a - b)
                .collect(),
        }
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.assert_same_dim(rhs);
        let n = self.dim;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                for j in 0..n {
                    out[(i, j)] += a * rhs[(k, j)];
                }
            }
        }
        out
    }
}

/// Dense complex matrix with Hermitian symmetry.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianOperator {
    matrix: ComplexMatrix,
}

impl HermitianOperator {
    /// Validates Hermiticity at the default tolerance and stores the exact
    /// Hermitian part.
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        Self::with_tolerance(matrix, Tolerances::DEFAULT.hermiticity)
    }

    pub fn with_tolerance(matrix: ComplexMatrix, tol: f64) -> Result<Self> {
        let defect = matrix.hermiticity_defect();
        if !(defect <= tol) {
            return Err(Error::validation(
                "hermiticity",
                format!("max |M - M†| = {defect:e} exceeds {tol:e}"),
            ));
        }
        Ok(HermitianOperator {
            matrix: matrix.hermitian_part(),
        })
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        HermitianOperator {
            matrix: ComplexMatrix::from_diagonal(diag),
        }
    }

    pub fn identity(dim: usize) -> Self {
        HermitianOperator {
            matrix: ComplexMatrix::identity(dim),
        }
    }

    pub fn pauli_x() -> Self {
        Self::from_real_symmetric(&[&[0.0, 1.0], &[1.0, 0.0]])
    }

    pub fn pauli_z() -> Self {
        Self::from_diagonal(&[1.0, -1.0])
    }

    fn from_real_symmetric(rows: &[&[f64]]) -> Self {
        Self::new(ComplexMatrix::from_real_rows(rows).expect("square literal"))
            .expect("symmetric literal")
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    pub fn eigh(&self) -> Result<Spectrum> {
        eigh(self)
    }

    /// `H − λ·I`.
    pub fn shifted(&self, lambda: f64) -> Self {
        let mut m = self.matrix.clone();
        for i in 0..m.dim() {
            m[(i, i)] -= lambda;
        }
        HermitianOperator { matrix: m }
    }

    pub fn add(&self, other: &HermitianOperator) -> Self {
        HermitianOperator {
            matrix: &self.matrix + &other.matrix,
        }
    }

    pub fn sub(&self, other: &HermitianOperator) -> Self {
        HermitianOperator {
            matrix: &self.matrix - &other.matrix,
        }
    }

    pub fn scale(&self, s: f64) -> Self {
        HermitianOperator {
            matrix: self.matrix.scale_real(s),
        }
    }

    /// `H²`, symmetrised.
    pub fn square(&self) -> Self {
        HermitianOperator {
            matrix: (&self.matrix * &self.matrix).hermitian_part(),
        }
    }

    /// Tensor product of two Hermitian operators is Hermitian.
    pub fn kron(&self, other: &HermitianOperator) -> Self {
        HermitianOperator {
            matrix: tensor_product(&self.matrix, &other.matrix),
        }
    }
}

/// Eigendecomposition of a Hermitian operator.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrum {
    /// Ascending.
    pub eigenvalues: Vec<f64>,
    /// Column `k` is the eigenvector of `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl Spectrum {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    pub fn min(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max(&self) -> f64 {
        self.eigenvalues[self.eigenvalues.len() - 1]
    }

    /// Column `k` of the eigenvector matrix.
    pub fn eigenvector(&self, k: usize) -> Vec<Complex64> {
        (0..self.dim()).map(|i| self.eigenvectors[(i, k)]).collect()
    }

    /// Eigenpairs reordered by ascending eigenvalue (stable).
    pub fn sorted(self) -> Spectrum {
        let n = self.dim();
        let mut order: Vec<usize> = (0..n).collect();
        order.sort_by(|&i, &j| self.eigenvalues[i].total_cmp(&self.eigenvalues[j]));
        let mut eigenvectors = ComplexMatrix::zeros(n);
        for (col, &k) in order.iter().enumerate() {
            for i in 0..n {
                eigenvectors[(i, col)] = self.eigenvectors[(i, k)];
            }
        }
        Spectrum {
            eigenvalues: order.iter().map(|&k| self.eigenvalues[k]).collect(),
            eigenvectors,
        }
    }

    /// `V·diag(values)·V†`.
    pub fn compose(&self, values: &[Complex64]) -> ComplexMatrix {
        let n = self.dim();
        let v = &self.eigenvectors;
        let mut out = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                let mut acc = ZERO;
                for (k, &f) in values.iter().enumerate() {
                    acc += v[(i, k)] * f * v[(j, k)].conj();
                }
                out[(i, j)] = acc;
            }
        }
        out
    }

    /// `V·diag(values)·V†` for real weights; Hermitian by construction.
    pub fn compose_real(&self, values: &[f64]) -> HermitianOperator {
        let weights: Vec<Complex64> = values.iter().map(|&x| Complex64::new(x, 0.0)).collect();
        HermitianOperator {
            matrix: self.compose(&weights).hermitian_part(),
        }
    }

    /// Sum of projectors onto the eigenvectors selected by `keep`.
    pub fn projector(&self, keep: impl Fn(f64) -> bool) -> HermitianOperator {
        let w: Vec<f64> = self
            .eigenvalues
            .iter()
            .map(|&l| if keep(l) { 1.0 } else { 0.0 })
            .collect();
        self.compose_real(&w)
    }
}

/// Cyclic complex Jacobi eigensolver with default tolerances.
pub fn eigh(h: &HermitianOperator) -> Result<Spectrum> {
    eigh_with(h, &Tolerances::DEFAULT)
}

/// Cyclic Jacobi with complex Givens rotations.
///
/// Each rotation first removes the phase of `A[p][q]` and then applies the
/// real 2x2 Jacobi rotation, so the result is unitary to round-off.
pub fn eigh_with(h: &HermitianOperator, tol: &Tolerances) -> Result<Spectrum> {
    let n = h.dim();
    let mut a = h.matrix.clone();
    let mut v = ComplexMatrix::identity(n);
    let threshold = tol.jacobi_relative * a.frobenius_norm();

    let off_mass = |a: &ComplexMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += a[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };

    let mut sweeps = 0;
    loop {
        let off = off_mass(&a);
        if off <= threshold {
            break;
        }
        if sweeps == tol.jacobi_max_sweeps {
            return Err(Error::NotConverged {
                method: "jacobi",
                iterations: sweeps,
                residual: off,
            });
        }
        sweeps += 1;
        let mut rotated = false;
        for p in 0..n {
            for q in (p + 1)..n {
                rotated |= rotate(&mut a, &mut v, p, q);
            }
        }
        if !rotated {
            break;
        }
    }

    Ok(Spectrum {
        eigenvalues: (0..n).map(|i| a[(i, i)].re).collect(),
        eigenvectors: v,
    }
    .sorted())
}

/// Annihilates `a[p][q]`. Returns false when the element is already
/// negligible relative to the diagonal.
fn rotate(a: &mut ComplexMatrix, v: &mut ComplexMatrix, p: usize, q: usize) -> bool {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r == 0.0 {
        return false;
    }
    let app = a[(p, p)].re;
    let aqq = a[(q, q)].re;
    // Below round-off of both diagonal entries: rotation would be the identity.
    if app.abs() + r * 1e3 == app.abs() && aqq.abs() + r * 1e3 == aqq.abs() {
        a[(p, q)] = ZERO;
        a[(q, p)] = ZERO;
        return false;
    }
    let phase = apq / r;
    let zeta = (aqq - app) / (2.0 * r);
    let t = if zeta >= 0.0 {
        1.0 / (zeta + (1.0 + zeta * zeta).sqrt())
    } else {
        -1.0 / (-zeta + (1.0 + zeta * zeta).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;

    // G restricted to (p, q): [[c, s], [-s·conj(e), c·conj(e)]].
    let g_pp = Complex64::new(c, 0.0);
    let g_pq = Complex64::new(s, 0.0);
    let g_qp = -phase.conj() * s;
    let g_qq = phase.conj() * c;

    let n = a.dim();
    // A ← A·G
    for k in 0..n {
        let akp = a[(k, p)];
        let akq = a[(k, q)];
        a[(k, p)] = akp * g_pp + akq * g_qp;
        a[(k, q)] = akp * g_pq + akq * g_qq;
    }
    // A ← G†·A
    for k in 0..n {
        let apk = a[(p, k)];
        let aqk = a[(q, k)];
        a[(p, k)] = g_pp.conj() * apk + g_qp.conj() * aqk;
        a[(q, k)] = g_pq.conj() * apk + g_qq.conj() * aqk;
    }
    a[(p, q)] = ZERO;
    a[(q, p)] = ZERO;
    a[(p, p)] = Complex64::new(a[(p, p)].re, 0.0);
    a[(q, q)] = Complex64::new(a[(q, q)].re, 0.0);
    // V ← V·G
    for k in 0..n {
        let vkp = v[(k, p)];
        let vkq = v[(k, q)];
        v[(k, p)] = vkp * g_pp + vkq * g_qp;
        v[(k, q)] = vkp * g_pq + vkq * g_qq;
    }
    true
}

/// `V·diag(f(λ))·V†`.
///
/// Fails with a domain error at the first eigenvalue where `f` is not finite.
pub fn matrix_function(
    h: &HermitianOperator,
    f: impl Fn(f64) -> Complex64,
) -> Result<ComplexMatrix> {
    let spec = eigh(h)?;
    spectral_map(&spec, "matrix_function", f)
}

/// Real-valued spectral function; the result is Hermitian.
pub fn matrix_function_real(
    h: &HermitianOperator,
    f: impl Fn(f64) -> f64,
) -> Result<HermitianOperator> {
    let spec = eigh(h)?;
    let m = spectral_map(&spec, "matrix_function", |x| Complex64::new(f(x), 0.0))?;
    Ok(HermitianOperator {
        matrix: m.hermitian_part(),
    })
}

pub(crate) fn spectral_map(
    spec: &Spectrum,
    name: &'static str,
    f: impl Fn(f64) -> Complex64,
) -> Result<ComplexMatrix> {
    let mut values = Vec::with_capacity(spec.dim());
    for &l in &spec.eigenvalues {
        let z = f(l);
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Domain {
                function: name,
                argument: l,
            });
        }
        values.push(z);
    }
    Ok(spec.compose(&values))
}

/// `exp(−i·G·t)` for a Hermitian generator `G`; exactly `I` at `t = 0`.
pub fn unitary_from_generator(generator: &HermitianOperator, t: f64) -> Result<ComplexMatrix> {
    if t == 0.0 {
        return Ok(ComplexMatrix::identity(generator.dim()));
    }
    matrix_function(generator, |l| Complex64::new(0.0, -l * t).exp())
}

/// Kronecker product: `(A⊗B)[i·dB+k][j·dB+l] = A[i][j]·B[k][l]`.
pub fn tensor_product(a: &ComplexMatrix, b: &ComplexMatrix) -> ComplexMatrix {
    let (da, db) = (a.dim(), b.dim());
    let mut out = ComplexMatrix::zeros(da * db);
    for i in 0..da {
        for j in 0..da {
            let aij = a[(i, j)];
            for k in 0..db {
                for l in 0..db {
                    out[(i * db + k, j * db + l)] = aij * b[(k, l)];
                }
            }
        }
    }
    out
}

/// Which tensor factor survives a partial trace.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    System,
    Environment,
}

/// Partial trace of an operator on `S⊗E` (system index first).
pub fn partial_trace(
    m: &ComplexMatrix,
    dim_s: usize,
    dim_e: usize,
    keep: Subsystem,
) -> Result<ComplexMatrix> {
    if dim_s == 0 || dim_e == 0 || m.dim() != dim_s * dim_e {
        return Err(Error::validation(
            "dimension",
            format!("{} != {dim_s}·{dim_e}", m.dim()),
        ));
    }
    let out = match keep {
        Subsystem::System => {
            let mut r = ComplexMatrix::zeros(dim_s);
            for i in 0..dim_s {
                for j in 0..dim_s {
                    r[(i, j)] = (0..dim_e).map(|k| m[(i * dim_e + k, j * dim_e + k)]).sum();
                }
            }
            r
        }
        Subsystem::Environment => {
            let mut r = ComplexMatrix::zeros(dim_e);
            for k in 0..dim_e {
                for l in 0..dim_e {
                    r[(k, l)] = (0..dim_s).map(|i| m[(i * dim_e + k, i * dim_e + l)]).sum();
                }
            }
            r
        }
    };
    Ok(out)
}

/// Schatten order supported for Hermitian arguments.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SchattenOrder {
    One,
    Two,
    Infinity,
}

impl SchattenOrder {
    /// `1`, `2` or `f64::INFINITY`; anything else is rejected.
    pub fn from_k(k: f64) -> Result<Self> {
        if k == 1.0 {
            Ok(SchattenOrder::One)
        } else if k == 2.0 {
            Ok(SchattenOrder::Two)
        } else if k == f64::INFINITY {
            Ok(SchattenOrder::Infinity)
        } else {
            Err(Error::validation(
                "schatten order",
                format!("k = {k} is not one of 1, 2, ∞"),
            ))
        }
    }
}

pub fn schatten_norm(h: &HermitianOperator, k: SchattenOrder) -> Result<f64> {
    let spec = eigh(h)?;
    Ok(schatten_from_eigenvalues(&spec.eigenvalues, k))
}

pub(crate) fn schatten_from_eigenvalues(eigenvalues: &[f64], k: SchattenOrder) -> f64 {
    match k {
        SchattenOrder::One => eigenvalues.iter().map(|l| l.abs()).sum(),
        SchattenOrder::Two => eigenvalues.iter().map(|l| l * l).sum::<f64>().sqrt(),
        SchattenOrder::Infinity => eigenvalues.iter().map(|l| l.abs()).fold(0.0, f64::max),
    }
}

/// `tr(H·M)` without forming the product.
pub fn trace_of_product(h: &ComplexMatrix, m: &ComplexMatrix) -> Result<Complex64> {
    h.check_same_dim(m)?;
    let n = h.dim();
    let mut acc = ZERO;
    for i in 0..n {
        for j in 0..n {
            acc += h[(i, j)] * m[(j, i)];
        }
    }
    Ok(acc)
}

/// Real expectation value `tr(H·M)` for Hermitian `H` and `M`.
pub fn real_trace_of_product(h: &HermitianOperator, m: &HermitianOperator) -> Result<f64> {
    let z = trace_of_product(h.matrix(), m.matrix())?;
    let scale = 1.0_f64.max(z.re.abs());
    if z.im.abs() > Tolerances::DEFAULT.imaginary * scale {
        return Err(Error::validation(
            "real expectation",
            format!("imaginary part {:e}", z.im),
        ));
    }
    Ok(z.re)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_eigenvalues() {
        let s = eigh(&HermitianOperator::identity(2)).unwrap();
        assert_eq!(s.eigenvalues, vec![1.0, 1.0]);
    }

    #[test]
    fn pauli_x_eigenvalues() {
        let s = eigh(&HermitianOperator::pauli_x()).unwrap();
        assert!((s.eigenvalues[0] + 1.0).abs() < 1e-15);
        assert!((s.eigenvalues[1] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn complex_offdiagonal_eigenvalues() {
        // [[1, i],[−i, 1]] has eigenvalues 0 and 2.
        let m = ComplexMatrix::from_rows(vec![
            vec![c(1., 0.), c(0., 1.)],
            vec![c(0., -1.), c(1., 0.)],
        ])
        .unwrap();
        let s = eigh(&HermitianOperator::new(m).unwrap()).unwrap();
        assert!(s.eigenvalues[0].abs() < 1e-15);
        assert!((s.eigenvalues[1] - 2.0).abs() < 1e-15);
    }

    #[test]
    fn reconstruction_dim4() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let h = random::hermitian(&mut rng, 4, 1.0);
        let s = eigh(&h).unwrap();
        let back = s.compose_real(&s.eigenvalues);
        assert!((back.matrix() - h.matrix()).max_abs() <= 1e-10);
        assert!(s.eigenvectors.unitarity_defect() <= 1e-10);
        assert!(s.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn eigh_is_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(8);
        let h = random::hermitian(&mut rng, 5, 1.0);
        assert_eq!(eigh(&h).unwrap(), eigh(&h).unwrap());
    }

    #[test]
    fn zero_matrix_spectrum() {
        let s = eigh(&HermitianOperator::from_diagonal(&[0.0; 3])).unwrap();
        assert_eq!(s.eigenvalues, vec![0.0; 3]);
    }

    #[test]
    fn non_hermitian_rejected() {
        let m = ComplexMatrix::from_real_rows(&[&[0.0, 1.0], &[0.0, 0.0]]).unwrap();
        assert!(matches!(
            HermitianOperator::new(m),
            Err(Error::Validation {
                invariant: "hermiticity",
                ..
            })
        ));
    }

    #[test]
    fn non_square_rejected() {
        let r = ComplexMatrix::from_rows(vec![vec![c(1., 0.), c(0., 0.)], vec![c(0., 0.)]]);
        assert!(matches!(
            r,
            Err(Error::Validation {
                invariant: "square",
                ..
            })
        ));
        assert!(ComplexMatrix::from_vec(2, vec![ZERO; 3]).is_err());
        assert!(ComplexMatrix::from_vec(0, vec![]).is_err());
    }

    #[test]
    fn exp_of_diagonal() {
        let h = HermitianOperator::from_diagonal(&[0.0, 2f64.ln()]);
        let e = matrix_function_real(&h, f64::exp).unwrap();
        assert!((e.matrix() - &ComplexMatrix::from_diagonal(&[1.0, 2.0])).max_abs() < 1e-14);
    }

    #[test]
    fn log_exp_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let rho = random::density_matrix(&mut rng, 3);
        let log = matrix_function_real(rho.operator(), f64::ln).unwrap();
        let back = matrix_function_real(&log, f64::exp).unwrap();
        assert!((back.matrix() - rho.operator().matrix()).max_abs() <= 1e-10);
    }

    #[test]
    fn log_of_zero_eigenvalue_is_domain_error() {
        let h = HermitianOperator::from_diagonal(&[1.0, 0.0]);
        match matrix_function_real(&h, f64::ln) {
            Err(Error::Domain { argument, .. }) => assert_eq!(argument, 0.0),
            other => panic!("expected domain error, got {other:?}"),
        }
    }

    #[test]
    fn generator_gives_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        let g = random::hermitian(&mut rng, 4, 2.0);
        let u = unitary_from_generator(&g, 0.7).unwrap();
        assert!(u.unitarity_defect() <= 1e-10);
    }

    #[test]
    fn identity_function_returns_input() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        let h = random::hermitian(&mut rng, 6, 1.0);
        let same = matrix_function_real(&h, |x| x).unwrap();
        assert!((same.matrix() - h.matrix()).max_abs() <= 1e-12);
    }

    #[test]
    fn tensor_identities_and_diagonals() {
        let i2 = ComplexMatrix::identity(2);
        assert_eq!(tensor_product(&i2, &i2), ComplexMatrix::identity(4));
        let (a, b, cc, d) = (2.0, 3.0, 5.0, 7.0);
        let k = tensor_product(
            &ComplexMatrix::from_diagonal(&[a, b]),
            &ComplexMatrix::from_diagonal(&[cc, d]),
        );
        assert_eq!(
            k,
            ComplexMatrix::from_diagonal(&[a * cc, a * d, b * cc, b * d])
        );
    }

    #[test]
    fn tensor_trace_factorizes() {
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let a = random::complex_matrix(&mut rng, 3);
        let b = random::complex_matrix(&mut rng, 2);
        let lhs = tensor_product(&a, &b).trace();
        let rhs = a.trace() * b.trace();
        assert!((lhs - rhs).norm() < 1e-12);
    }

    #[test]
    fn partial_trace_of_products() {
        let mut rng = ChaCha8Rng::seed_from_u64(6);
        let rs = random::density_matrix(&mut rng, 2);
        let re = random::density_matrix(&mut rng, 3);
        let joint = tensor_product(rs.operator().matrix(), re.operator().matrix());
        let back_s = partial_trace(&joint, 2, 3, Subsystem::System).unwrap();
        let back_e = partial_trace(&joint, 2, 3, Subsystem::Environment).unwrap();
        assert!((&back_s - rs.operator().matrix()).max_abs() <= 1e-12);
        assert!((&back_e - re.operator().matrix()).max_abs() <= 1e-12);
    }

    #[test]
    fn partial_trace_maximally_mixed() {
        let m = ComplexMatrix::identity(4).scale_real(0.25);
        let r = partial_trace(&m, 2, 2, Subsystem::System).unwrap();
        assert!((&r - &ComplexMatrix::identity(2).scale_real(0.5)).max_abs() < 1e-15);
    }

    /// Brute-force partial trace by explicit basis-vector sandwiching.
    fn partial_trace_oracle(
        m: &ComplexMatrix,
        ds: usize,
        de: usize,
        keep: Subsystem,
    ) -> ComplexMatrix {
        let (dk, dt) = match keep {
            Subsystem::System => (ds, de),
            Subsystem::Environment => (de, ds),
        };
        let mut r = ComplexMatrix::zeros(dk);
        for a in 0..dk {
            for b in 0..dk {
                let mut acc = ZERO;
                for t in 0..dt {
                    let (row, col) = match keep {
                        Subsystem::System => (a * de + t, b * de + t),
                        Subsystem::Environment => (t * de + a, t * de + b),
                    };
                    // ⟨row| M |col⟩ via unit vectors
                    let mut e_row = vec![ZERO; ds * de];
                    let mut e_col = vec![ZERO; ds * de];
                    e_row[row] = ONE;
                    e_col[col] = ONE;
                    for i in 0..ds * de {
                        for j in 0..ds * de {
                            acc += e_row[i].conj() * m[(i, j)] * e_col[j];
                        }
                    }
                }
                r[(a, b)] = acc;
            }
        }
        r
    }

    #[test]
    fn partial_trace_matches_direct_summation() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        let m = random::complex_matrix(&mut rng, 6);
        for keep in [Subsystem::System, Subsystem::Environment] {
            let fast = partial_trace(&m, 2, 3, keep).unwrap();
            let slow = partial_trace_oracle(&m, 2, 3, keep);
            assert!((&fast - &slow).max_abs() < 1e-13);
            assert!((fast.trace() - m.trace()).norm() <= 1e-12);
        }
        assert!(partial_trace(&m, 2, 2, Subsystem::System).is_err());
    }

    #[test]
    fn schatten_norms_of_diagonal() {
        let h = HermitianOperator::from_diagonal(&[1.0, -1.0]);
        assert_eq!(schatten_norm(&h, SchattenOrder::One).unwrap(), 2.0);
        assert_eq!(schatten_norm(&h, SchattenOrder::Infinity).unwrap(), 1.0);
        assert!((schatten_norm(&h, SchattenOrder::Two).unwrap() - 2f64.sqrt()).abs() < 1e-15);
        let z = h.sub(&h);
        assert_eq!(schatten_norm(&z, SchattenOrder::One).unwrap(), 0.0);
    }

    #[test]
    fn unsupported_schatten_order() {
        assert!(SchattenOrder::from_k(3.0).is_err());
        assert_eq!(
            SchattenOrder::from_k(f64::INFINITY).unwrap(),
            SchattenOrder::Infinity
        );
    }

    #[test]
    fn holder_inequality_on_random_pairs() {
        let mut rng = ChaCha8Rng::seed_from_u64(12);
        for _ in 0..200 {
            let a = random::hermitian(&mut rng, 3, 1.0);
            let b = random::hermitian(&mut rng, 3, 1.0);
            let lhs = trace_of_product(a.matrix(), b.matrix()).unwrap().norm();
            let rhs = schatten_norm(&a, SchattenOrder::One).unwrap()
                * schatten_norm(&b, SchattenOrder::Infinity).unwrap();
            assert!(lhs <= rhs + 1e-12);
        }
    }
}
