//! Dense complex matrix primitives.
//!
//! Everything here works on `nalgebra` dynamic matrices of [`Complex64`]. The
//! functions are pure: inputs are borrowed, results are freshly allocated.
//! Sizes in this crate are small (system dimension at most a handful, Choi
//! matrices at most a few dozen rows), so no attempt is made at blocking or
//! reuse of workspaces.

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type CMatrix = DMatrix<Complex64>;
pub type CVector = DVector<Complex64>;

pub const ZERO: Complex64 = Complex64::new(0.0, 0.0);
pub const ONE: Complex64 = Complex64::new(1.0, 0.0);
pub const I: Complex64 = Complex64::new(0.0, 1.0);

#[inline]
pub fn c64(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Numerical thresholds shared by every check in the crate.
///
/// `zero_eig_rel` classifies an eigenvalue as zero when
/// `|λ| <= zero_eig_rel * max_i |λ_i|`; `residual_abs` bounds Frobenius-norm
/// residuals of identities that hold exactly in exact arithmetic.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerance {
    pub zero_eig_rel: f64,
    pub residual_abs: f64,
}

impl Default for Tolerance {
    fn default() -> Self {
        Self {
            zero_eig_rel: 1e-10,
            residual_abs: 1e-9,
        }
    }
}

impl Tolerance {
    pub fn new(zero_eig_rel: f64, residual_abs: f64) -> Result<Self> {
        let in_unit = |x: f64| x > 0.0 && x < 1.0;
        if !in_unit(zero_eig_rel) {
            return Err(Error::InvalidTolerance(format!(
                "zero_eig_rel must lie in (0, 1), got {zero_eig_rel}"
            )));
        }
        if !in_unit(residual_abs) {
            return Err(Error::InvalidTolerance(format!(
                "residual_abs must lie in (0, 1), got {residual_abs}"
            )));
        }
        Ok(Self {
            zero_eig_rel,
            residual_abs,
        })
    }

    /// Absolute cut below which an eigenvalue of `values` counts as zero.
    pub fn zero_threshold(&self, values: &[f64]) -> f64 {
        self.zero_eig_rel * values.iter().fold(0.0_f64, |m, v| m.max(v.abs()))
    }

    /// Residual bound scaled by the size of the matrix being checked.
    pub fn scaled_residual(&self, scale: f64) -> f64 {
        self.residual_abs * scale.max(1.0)
    }
}

pub fn identity(n: usize) -> CMatrix {
    CMatrix::identity(n, n)
}

pub fn zeros(rows: usize, cols: usize) -> CMatrix {
    CMatrix::zeros(rows, cols)
}

/// Matrix unit `|r⟩⟨s|` of size `n`.
pub fn matrix_unit(n: usize, r: usize, s: usize) -> CMatrix {
    let mut m = zeros(n, n);
    m[(r, s)] = ONE;
    m
}

pub fn basis_vector(n: usize, i: usize) -> CVector {
    let mut v = CVector::zeros(n);
    v[i] = ONE;
    v
}

pub fn outer(a: &CVector, b: &CVector) -> CMatrix {
    a * b.adjoint()
}

pub fn frobenius(m: &CMatrix) -> f64 {
    m.norm()
}

pub fn trace(m: &CMatrix) -> Complex64 {
    m.diagonal().iter().sum()
}

pub fn check_finite(m: &CMatrix) -> Result<()> {
    if m.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
        Ok(())
    } else {
        Err(Error::NonFinite)
    }
}

pub fn check_square(m: &CMatrix, what: &str) -> Result<usize> {
    if m.nrows() != m.ncols() {
        return Err(Error::DimensionMismatch(format!(
            "{what} must be square, got {}x{}",
            m.nrows(),
            m.ncols()
        )));
    }
    Ok(m.nrows())
}

/// `‖m − m†‖_F`.
pub fn hermiticity_residual(m: &CMatrix) -> f64 {
    (m - m.adjoint()).norm()
}

/// `(m + m†) / 2`.
pub fn hermitian_part(m: &CMatrix) -> CMatrix {
    (m + m.adjoint()).scale(0.5)
}

/// `‖u†u − I‖_F`.
pub fn unitarity_residual(u: &CMatrix) -> f64 {
    (u.adjoint() * u - identity(u.ncols())).norm()
}

/// Eigensystem of a Hermitian matrix with eigenvalues sorted descending.
///
/// Column `i` of `vectors` is the unit eigenvector belonging to `values[i]`.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn dim(&self) -> usize {
        self.values.len()
    }

    pub fn vector(&self, i: usize) -> CVector {
        self.vectors.column(i).into_owned()
    }

    pub fn min(&self) -> f64 {
        self.values.last().copied().unwrap_or(0.0)
    }

    pub fn max(&self) -> f64 {
        self.values.first().copied().unwrap_or(0.0)
    }

    /// `V f(Λ) V†`.
    pub fn spectral_map(&self, f: impl Fn(f64) -> f64) -> CMatrix {
        let mut scaled = self.vectors.clone();
        for (j, &lambda) in self.values.iter().enumerate() {
            let w = f(lambda);
            scaled.column_mut(j).scale_mut(w);
        }
        scaled * self.vectors.adjoint()
    }

    pub fn reconstruct(&self) -> CMatrix {
        self.spectral_map(|x| x)
    }
}

/// Eigendecomposition of a Hermitian matrix.
///
/// The input must satisfy `‖m − m†‖_F <= residual_abs · max(1, ‖m‖_F)`; it is
/// symmetrized before being handed to the solver. Within a degenerate
/// eigenspace the returned basis is whatever the solver produces.
pub fn hermitian_eig(m: &CMatrix, tol: &Tolerance) -> Result<HermitianEigen> {
    check_square(m, "eigendecomposition input")?;
    check_finite(m)?;
    let residual = hermiticity_residual(m);
    if residual > tol.scaled_residual(m.norm()) {
        return Err(Error::NonHermitianInput { residual });
    }
    Ok(hermitian_eig_unchecked(&hermitian_part(m)))
}

pub(crate) fn hermitian_eig_unchecked(h: &CMatrix) -> HermitianEigen {
    let n = h.nrows();
    if n == 0 {
        return HermitianEigen {
            values: Vec::new(),
            vectors: zeros(0, 0),
        };
    }
    let eig = SymmetricEigen::new(h.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[b].total_cmp(&eig.eigenvalues[a]));
    let values = order.iter().map(|&i| eig.eigenvalues[i]).collect();
    let mut vectors = zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    HermitianEigen { values, vectors }
}

/// Which tensor factor a partial trace removes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Subsystem {
    First,
    Second,
}

/// Partial trace of an operator on `C^{d_a} ⊗ C^{d_b}`.
///
/// Tracing [`Subsystem::First`] leaves a `d_b × d_b` matrix; tracing
/// [`Subsystem::Second`] leaves `d_a × d_a`.
pub fn partial_trace(m: &CMatrix, dims: (usize, usize), traced: Subsystem) -> Result<CMatrix> {
    let (da, db) = dims;
    let n = check_square(m, "partial trace input")?;
    if da * db != n {
        return Err(Error::DimensionMismatch(format!(
            "partial trace dims {da}x{db} do not match side length {n}"
        )));
    }
    let out = match traced {
        Subsystem::First => CMatrix::from_fn(db, db, |i, j| {
            (0..da).map(|a| m[(a * db + i, a * db + j)]).sum()
        }),
        Subsystem::Second => CMatrix::from_fn(da, da, |i, j| {
            (0..db).map(|b| m[(i * db + b, j * db + b)]).sum()
        }),
    };
    Ok(out)
}

pub fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    a.kronecker(b)
}

/// Principal square root of a positive semidefinite matrix.
///
/// Eigenvalues in `[−zero_eig_rel · max|λ|, 0)` are clamped to zero; anything
/// more negative is rejected with [`Error::NotPsd`].
pub fn psd_sqrt(m: &CMatrix, tol: &Tolerance) -> Result<CMatrix> {
    let eig = hermitian_eig(m, tol)?;
    check_psd(&eig, tol)?;
    Ok(eig.spectral_map(|x| x.max(0.0).sqrt()))
}

fn check_psd(eig: &HermitianEigen, tol: &Tolerance) -> Result<()> {
    let threshold = tol.zero_threshold(&eig.values);
    let min = eig.min();
    if min < -threshold {
        return Err(Error::NotPsd {
            min_eigenvalue: min,
        });
    }
    Ok(())
}

/// Pseudo-inverse of a PSD matrix restricted to its numerically nonzero
/// spectrum, together with the projector onto that support.
#[derive(Debug, Clone)]
pub struct PseudoInverse {
    pub pinv: CMatrix,
    pub support: CMatrix,
    pub rank: usize,
}

pub fn thresholded_pinv(m: &CMatrix, tol: &Tolerance) -> Result<PseudoInverse> {
    let eig = hermitian_eig(m, tol)?;
    pinv_from_eig(&eig, tol)
}

pub(crate) fn pinv_from_eig(eig: &HermitianEigen, tol: &Tolerance) -> Result<PseudoInverse> {
    check_psd(eig, tol)?;
    let threshold = tol.zero_threshold(&eig.values);
    let kept = |x: f64| x > threshold && x > 0.0;
    let pinv = eig.spectral_map(|x| if kept(x) { 1.0 / x } else { 0.0 });
    let support = eig.spectral_map(|x| if kept(x) { 1.0 } else { 0.0 });
    let rank = eig.values.iter().filter(|&&x| kept(x)).count();
    Ok(PseudoInverse {
        pinv,
        support,
        rank,
    })
}
