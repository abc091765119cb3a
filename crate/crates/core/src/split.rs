//! Splitting a trace-preserving map into completely positive parts.
//!
//! Grouping the Choi spectrum by sign writes `Λ = Λ⁺ − Λ⁻` with both parts
//! completely positive. Their trace functionals
//!
//! ```text
//! J = Σ_{λ_i > 0} λ_i L_i† L_i        K = Σ_{λ_i < 0} |λ_i| L_i† L_i
//! ```
//!
//! satisfy `Tr Λ⁺(X) = Tr(J X)`, `Tr Λ⁻(X) = Tr(K X)`, and trace preservation
//! of `Λ` is exactly `J − K = I`. Hence `J ≥ I` is invertible while `K` may be
//! singular; on `ker K` every negative eigenmatrix vanishes, which is why
//! `Λ⁻(ρ) = Λ⁻(Ψρ)` with `Ψ` the projector onto the support of `K`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{self, identity, outer, zeros, CMatrix, CVector, Tolerance};
use crate::map::{self, check_hermiticity_preserving, check_tp, kraus_to_map, KrausSet, LinearMap};
use crate::random;

/// `Λ = Λ⁺ − Λ⁻` together with the derived matrices `J`, `K`, `K⁺`, `Ψ`.
#[derive(Debug, Clone)]
pub struct CpSplit {
    pub dim: usize,
    /// The map that was split.
    pub original: LinearMap,
    pub lambda_plus: LinearMap,
    pub lambda_minus: LinearMap,
    /// Positive eigenmatrices (Hilbert–Schmidt normalized) with weights `λ_i`.
    pub positive: KrausSet,
    /// Negative eigenmatrices with weights `|λ_i|`.
    pub negative: KrausSet,
    /// Full descending Choi spectrum, including the discarded near-zero values.
    pub choi_eigenvalues: Vec<f64>,
    pub j: CMatrix,
    pub k: CMatrix,
    pub k_pinv: CMatrix,
    /// Projector onto the support of `K`.
    pub psi: CMatrix,
    /// Orthonormal eigenvectors of `K` with nonzero eigenvalue.
    pub support_basis: Vec<CVector>,
    /// Orthonormal basis of `ker K`.
    pub kernel_basis: Vec<CVector>,
    pub tol: Tolerance,
}

impl CpSplit {
    pub fn l_plus(&self) -> usize {
        self.positive.len()
    }

    pub fn l_minus(&self) -> usize {
        self.negative.len()
    }

    pub fn k_rank(&self) -> usize {
        self.support_basis.len()
    }

    pub fn has_negative_part(&self) -> bool {
        !self.negative.is_empty()
    }

    /// Smallest eigenvalue of `J`.
    pub fn j_min_eigenvalue(&self) -> f64 {
        linalg::hermitian_eig_unchecked(&self.j).min()
    }

    /// `J⁻¹`, refusing if `J` is numerically singular.
    pub fn j_inverse(&self) -> Result<CMatrix> {
        let eig = linalg::hermitian_eig_unchecked(&self.j);
        let threshold = self.tol.zero_threshold(&eig.values);
        if eig.min() <= threshold {
            return Err(Error::SingularJ {
                min_eigenvalue: eig.min(),
            });
        }
        Ok(eig.spectral_map(|x| 1.0 / x))
    }
}

/// Splits a Hermiticity-preserving, trace-preserving map.
pub fn split(map: &LinearMap, tol: &Tolerance) -> Result<CpSplit> {
    let hp = check_hermiticity_preserving(map, tol);
    if !hp.holds {
        return Err(Error::NonHermitianChoi {
            residual: hp.residual,
        });
    }
    let tp = check_tp(map, tol);
    if !tp.holds {
        return Err(Error::NotTracePreserving {
            residual: tp.residual,
        });
    }
    let n = map.dim();
    let eig = map::choi_eigen(map, tol)?;
    let (positive, negative) = map::kraus_from_eigen(n, &eig, tol);

    let lambda_plus = kraus_to_map(&positive, None)?;
    let lambda_minus = kraus_to_map(&negative, None)?;
    let j = linalg::hermitian_part(&positive.gram());
    let k = linalg::hermitian_part(&negative.gram());

    let k_eig = linalg::hermitian_eig_unchecked(&k);
    let pinv = linalg::pinv_from_eig(&k_eig, tol)?;
    let threshold = tol.zero_threshold(&k_eig.values);
    let (mut support_basis, mut kernel_basis) = (Vec::new(), Vec::new());
    for (i, &value) in k_eig.values.iter().enumerate() {
        if value > threshold && value > 0.0 {
            support_basis.push(k_eig.vector(i));
        } else {
            kernel_basis.push(k_eig.vector(i));
        }
    }

    Ok(CpSplit {
        dim: n,
        original: map.clone(),
        lambda_plus,
        lambda_minus,
        positive,
        negative,
        choi_eigenvalues: eig.values,
        j,
        k,
        k_pinv: pinv.pinv,
        psi: pinv.support,
        support_basis,
        kernel_basis,
        tol: *tol,
    })
}

/// Largest residuals of the statements that `Λ⁻` forgets `ker K`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AnnihilationReport {
    pub kernel_dim: usize,
    /// max_q ‖Λ⁻(|φ_q⟩⟨φ_q|)‖_F
    pub kernel_diagonal: f64,
    /// max_{q,r} of ‖Λ⁻(|φ_q⟩⟨ψ_r|)‖_F and ‖Λ⁻(|ψ_r⟩⟨φ_q|)‖_F
    pub kernel_cross: f64,
    /// max_{i,q} ‖L_i |φ_q⟩‖ over negative eigenmatrices
    pub eigenmatrix_kernel: f64,
    /// max over sampled ρ of ‖Λ⁻(ρ) − Λ⁻(Ψρ)‖_F
    pub support_projection: f64,
    pub bound: f64,
}

impl AnnihilationReport {
    pub fn max_residual(&self) -> f64 {
        self.kernel_diagonal
            .max(self.kernel_cross)
            .max(self.eigenmatrix_kernel)
            .max(self.support_projection)
    }

    pub fn passed(&self) -> bool {
        self.max_residual() <= self.bound
    }
}

pub fn verify_annihilation(split: &CpSplit, samples: usize, seed: u64) -> AnnihilationReport {
    let minus = &split.lambda_minus;
    let norm_of = |x: &CMatrix| minus.apply(x).expect("dim checked").norm();

    let kernel_diagonal = split
        .kernel_basis
        .iter()
        .map(|phi| norm_of(&outer(phi, phi)))
        .fold(0.0, f64::max);

    let mut kernel_cross = 0.0_f64;
    for phi in &split.kernel_basis {
        for psi in &split.support_basis {
            kernel_cross = kernel_cross
                .max(norm_of(&outer(phi, psi)))
                .max(norm_of(&outer(psi, phi)));
        }
    }

    let mut eigenmatrix_kernel = 0.0_f64;
    for l in split.negative.operators() {
        for phi in &split.kernel_basis {
            eigenmatrix_kernel = eigenmatrix_kernel.max((l * phi).norm());
        }
    }

    let mut rng = random::seeded(seed);
    let support_projection = (0..samples)
        .map(|_| {
            let rho = random::density_matrix(split.dim, &mut rng);
            let projected = &split.psi * &rho;
            (minus.apply(&rho).expect("dim") - minus.apply(&projected).expect("dim")).norm()
        })
        .fold(0.0, f64::max);

    AnnihilationReport {
        kernel_dim: split.kernel_basis.len(),
        kernel_diagonal,
        kernel_cross,
        eigenmatrix_kernel,
        support_projection,
        bound: split.tol.residual_abs,
    }
}

/// Largest deviations of the trace identities that make `J` and `K` the
/// trace functionals of `Λ⁺` and `Λ⁻`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TraceFunctionalReport {
    /// max |Tr Λ⁺(X) − Tr(J X)|
    pub plus_functional: f64,
    /// max |Tr Λ⁻(X) − Tr(K X)|
    pub minus_functional: f64,
    /// max |Tr Λ⁺(J⁻¹X) − Tr X|
    pub plus_normalized: f64,
    /// max |Tr Λ⁻(K⁺X) − Tr(Ψ X)|
    pub minus_normalized: f64,
    pub bound: f64,
}

impl TraceFunctionalReport {
    pub fn max_residual(&self) -> f64 {
        self.plus_functional
            .max(self.minus_functional)
            .max(self.plus_normalized)
            .max(self.minus_normalized)
    }

    pub fn passed(&self) -> bool {
        self.max_residual() <= self.bound
    }
}

/// Checks the trace identities on `samples` random complex matrices `X`
/// (unit Frobenius norm, not Hermitian).
pub fn trace_functionals(split: &CpSplit, samples: usize, seed: u64) -> Result<TraceFunctionalReport> {
    let j_inv = split.j_inverse()?;
    let mut rng = random::seeded(seed);
    let mut report = TraceFunctionalReport {
        plus_functional: 0.0,
        minus_functional: 0.0,
        plus_normalized: 0.0,
        minus_normalized: 0.0,
        bound: split.tol.residual_abs,
    };
    for _ in 0..samples {
        let x = unit_matrix(split.dim, &mut rng);
        let tr = |m: &LinearMap, y: &CMatrix| linalg::trace(&m.apply(y).expect("dim"));
        let d = |a: num_complex::Complex64, b: num_complex::Complex64| (a - b).norm();
        report.plus_functional = report
            .plus_functional
            .max(d(tr(&split.lambda_plus, &x), linalg::trace(&(&split.j * &x))));
        report.minus_functional = report
            .minus_functional
            .max(d(tr(&split.lambda_minus, &x), linalg::trace(&(&split.k * &x))));
        report.plus_normalized = report
            .plus_normalized
            .max(d(tr(&split.lambda_plus, &(&j_inv * &x)), linalg::trace(&x)));
        report.minus_normalized = report.minus_normalized.max(d(
            tr(&split.lambda_minus, &(&split.k_pinv * &x)),
            linalg::trace(&(&split.psi * &x)),
        ));
    }
    Ok(report)
}

fn unit_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let x = random::complex_matrix(n, n, rng);
    let norm = x.norm();
    x.unscale(norm)
}

/// `J` and `K` read entrywise off the Choi matrices of `Λ⁺` and `Λ⁻`:
/// `J_{sr} = Σ_{r′} Λ⁺_{(r′r),(r′s)}` and likewise for `K`.
pub fn partial_sum_functionals(split: &CpSplit) -> (CMatrix, CMatrix) {
    let n = split.dim;
    let sum = |choi: &CMatrix| {
        let mut out = zeros(n, n);
        for s in 0..n {
            for r in 0..n {
                out[(s, r)] = (0..n).map(|rp| choi[(rp * n + r, rp * n + s)]).sum();
            }
        }
        out
    };
    (sum(split.lambda_plus.choi()), sum(split.lambda_minus.choi()))
}

/// `‖J − K − I‖_F`.
pub fn tp_structure_residual(split: &CpSplit) -> f64 {
    (&split.j - &split.k - identity(split.dim)).norm()
}
