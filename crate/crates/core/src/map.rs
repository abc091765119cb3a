//! Linear maps on `N × N` matrices.
//!
//! A [`LinearMap`] is stored as its Choi matrix `B` in the "B-form" grouping:
//! the row multi-index is `(output row r′, input row r)` and the column
//! multi-index is `(output column s′, input column s)`, flattened as
//! `r′·N + r` and `s′·N + s`. The action is
//!
//! ```text
//! (Λρ)_{r′s′} = Σ_{rs} B_{(r′r),(s′s)} ρ_{rs}
//! ```
//!
//! so the map preserves Hermiticity exactly when `B` is Hermitian, and is
//! completely positive exactly when `B` is positive semidefinite. Writing the
//! spectral decomposition `B = Σ λ_i vec(L_i) vec(L_i)†` gives the operator
//! sum `Λρ = Σ λ_i L_i ρ L_i†`.
//!
//! The "A-form" is the ordinary matrix acting on the row-major vectorization
//! of `ρ`; it is the same numbers under an index permutation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{
    self, check_finite, check_square, hermiticity_residual, identity, matrix_unit, zeros, CMatrix,
    CVector, Subsystem, Tolerance, ZERO,
};

/// A validated density matrix: Hermitian, positive semidefinite, unit trace.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix, tol: &Tolerance) -> Result<Self> {
        check_square(&matrix, "density matrix")?;
        check_finite(&matrix)?;
        let residual = hermiticity_residual(&matrix);
        if residual > tol.residual_abs {
            return Err(Error::NotDensityMatrix(format!(
                "not Hermitian (residual {residual:.3e})"
            )));
        }
        let tr = linalg::trace(&matrix);
        if (tr - Complex64::new(1.0, 0.0)).norm() > tol.residual_abs {
            return Err(Error::NotDensityMatrix(format!("trace is {tr}, expected 1")));
        }
        let eig = linalg::hermitian_eig(&matrix, tol)?;
        if eig.min() < -tol.zero_eig_rel {
            return Err(Error::NotDensityMatrix(format!(
                "negative eigenvalue {:.3e}",
                eig.min()
            )));
        }
        Ok(Self { matrix })
    }

    /// `|ψ⟩⟨ψ|` for a (not necessarily normalized) nonzero vector.
    pub fn pure(psi: &CVector) -> Result<Self> {
        let norm = psi.norm();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotDensityMatrix("zero or non-finite state vector".into()));
        }
        let unit = psi.unscale(norm);
        Ok(Self {
            matrix: linalg::outer(&unit, &unit),
        })
    }

    pub fn maximally_mixed(n: usize) -> Self {
        Self {
            matrix: identity(n).unscale(n as f64),
        }
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn into_matrix(self) -> CMatrix {
        self.matrix
    }

    /// `Tr ρ²`.
    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }
}

/// Operator-sum data: operators `M_i` with positive weights `w_i`.
#[derive(Debug, Clone, PartialEq)]
pub struct KrausSet {
    dim: usize,
    operators: Vec<CMatrix>,
    weights: Vec<f64>,
}

impl KrausSet {
    /// Builds a Kraus set. Missing weights default to 1.
    pub fn new(dim: usize, operators: Vec<CMatrix>, weights: Option<Vec<f64>>) -> Result<Self> {
        for (i, op) in operators.iter().enumerate() {
            if op.nrows() != dim || op.ncols() != dim {
                return Err(Error::DimensionMismatch(format!(
                    "Kraus operator {i} is {}x{}, expected {dim}x{dim}",
                    op.nrows(),
                    op.ncols()
                )));
            }
            check_finite(op)?;
        }
        let weights = weights.unwrap_or_else(|| vec![1.0; operators.len()]);
        if weights.len() != operators.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} weights for {} Kraus operators",
                weights.len(),
                operators.len()
            )));
        }
        if let Some(w) = weights.iter().find(|w| !(w.is_finite() && **w > 0.0)) {
            return Err(Error::InvalidArgument(format!(
                "Kraus weights must be positive, got {w}"
            )));
        }
        Ok(Self {
            dim,
            operators,
            weights,
        })
    }

    pub fn empty(dim: usize) -> Self {
        Self {
            dim,
            operators: Vec::new(),
            weights: Vec::new(),
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    /// Operators with `√w_i` folded in and unit weights.
    pub fn folded(&self) -> Self {
        let operators = self
            .operators
            .iter()
            .zip(&self.weights)
            .map(|(m, w)| m.scale(w.sqrt()))
            .collect();
        Self {
            dim: self.dim,
            operators,
            weights: vec![1.0; self.operators.len()],
        }
    }

    /// `Σ w_i M_i† M_i`.
    pub fn gram(&self) -> CMatrix {
        self.operators
            .iter()
            .zip(&self.weights)
            .fold(zeros(self.dim, self.dim), |acc, (m, w)| {
                acc + (m.adjoint() * m).scale(*w)
            })
    }

    /// `‖Σ w_i M_i† M_i − I‖_F`.
    pub fn completeness_residual(&self) -> f64 {
        (self.gram() - identity(self.dim)).norm()
    }
}

/// Sign attached to a Kraus term when assembling a map.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    fn factor(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }
}

/// A linear map on `N × N` matrices in B-form (see the module docs).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearMap {
    dim: usize,
    choi: CMatrix,
}

fn side_root(len: usize, what: &str) -> Result<usize> {
    let n = (len as f64).sqrt().round() as usize;
    if n * n != len || n == 0 {
        return Err(Error::DimensionMismatch(format!(
            "{what} side {len} is not a nonzero perfect square"
        )));
    }
    Ok(n)
}

impl LinearMap {
    /// Wraps a B-form matrix of side `N²`.
    pub fn from_choi(choi: CMatrix) -> Result<Self> {
        let side = check_square(&choi, "Choi matrix")?;
        check_finite(&choi)?;
        let dim = side_root(side, "Choi matrix")?;
        Ok(Self { dim, choi })
    }

    /// Builds the map from its action on matrix units: `B_{(r′r),(s′s)} = Λ(|r⟩⟨s|)_{r′s′}`.
    pub fn from_action(dim: usize, mut action: impl FnMut(&CMatrix) -> CMatrix) -> Self {
        let n2 = dim * dim;
        let mut choi = zeros(n2, n2);
        for r in 0..dim {
            for s in 0..dim {
                let out = action(&matrix_unit(dim, r, s));
                for rp in 0..dim {
                    for sp in 0..dim {
                        choi[(rp * dim + r, sp * dim + s)] = out[(rp, sp)];
                    }
                }
            }
        }
        Self { dim, choi }
    }

    /// Reads an A-form matrix `A_{(r′s′),(rs)}` acting on row-major `vec(ρ)`.
    pub fn from_a_form(a: &CMatrix) -> Result<Self> {
        let side = check_square(a, "A-form matrix")?;
        check_finite(a)?;
        let dim = side_root(side, "A-form matrix")?;
        Ok(Self {
            dim,
            choi: reshuffle(a, dim),
        })
    }

    /// Reads a standard Choi matrix `Σ_{rs} |r⟩⟨s| ⊗ Λ(|r⟩⟨s|)` (input factor first).
    pub fn from_standard_choi(c: &CMatrix) -> Result<Self> {
        let side = check_square(c, "Choi matrix")?;
        check_finite(c)?;
        let dim = side_root(side, "Choi matrix")?;
        Ok(Self {
            dim,
            choi: swap_factors(c, dim),
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// The B-form matrix.
    pub fn choi(&self) -> &CMatrix {
        &self.choi
    }

    pub fn a_form(&self) -> CMatrix {
        reshuffle(&self.choi, self.dim)
    }

    pub fn standard_choi(&self) -> CMatrix {
        swap_factors(&self.choi, self.dim)
    }

    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        let n = self.dim;
        if rho.nrows() != n || rho.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "map acts on {n}x{n} matrices, got {}x{}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        Ok(CMatrix::from_fn(n, n, |rp, sp| {
            let mut acc = ZERO;
            for r in 0..n {
                for s in 0..n {
                    acc += self.choi[(rp * n + r, sp * n + s)] * rho[(r, s)];
                }
            }
            acc
        }))
    }

    /// The matrix `J` with `Tr Λ(X) = Tr(J X)` for every `X`, i.e.
    /// `J_{sr} = Σ_{r′} B_{(r′r),(r′s)}`. The map is trace preserving iff `J = I`.
    pub fn trace_functional(&self) -> CMatrix {
        linalg::partial_trace(&self.choi, (self.dim, self.dim), Subsystem::First)
            .expect("B-form side is dim²")
            .transpose()
    }

    pub fn scale(&self, factor: f64) -> Self {
        Self {
            dim: self.dim,
            choi: self.choi.scale(factor),
        }
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.dim != other.dim {
            return Err(Error::DimensionMismatch(format!(
                "maps on {} and {} dimensional systems",
                self.dim, other.dim
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            dim: self.dim,
            choi: &self.choi + &other.choi,
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            dim: self.dim,
            choi: &self.choi - &other.choi,
        })
    }
}

// B_{(r′r),(s′s)} <-> A_{(r′s′),(rs)}; the permutation is an involution.
fn reshuffle(m: &CMatrix, n: usize) -> CMatrix {
    let n2 = n * n;
    CMatrix::from_fn(n2, n2, |row, col| {
        let (a, b) = (row / n, row % n);
        let (c, d) = (col / n, col % n);
        m[(a * n + c, b * n + d)]
    })
}

// Swaps the two tensor factors on both the row and column multi-index.
fn swap_factors(m: &CMatrix, n: usize) -> CMatrix {
    let n2 = n * n;
    CMatrix::from_fn(n2, n2, |row, col| {
        let (a, b) = (row / n, row % n);
        let (c, d) = (col / n, col % n);
        m[(b * n + a, d * n + c)]
    })
}

/// Row-major vectorization `vec(M)_{r′N+r} = M_{r′r}`.
pub fn vectorize(m: &CMatrix) -> CVector {
    let (rows, cols) = m.shape();
    CVector::from_fn(rows * cols, |k, _| m[(k / cols, k % cols)])
}

/// Inverse of [`vectorize`] for square matrices.
pub fn unvectorize(v: &CVector, n: usize) -> CMatrix {
    CMatrix::from_fn(n, n, |i, j| v[i * n + j])
}

/// `Σ_i sign_i w_i vec(M_i) vec(M_i)†`, the map `ρ ↦ Σ_i sign_i w_i M_i ρ M_i†`.
pub fn kraus_to_map(kraus: &KrausSet, signs: Option<&[Sign]>) -> Result<LinearMap> {
    if let Some(signs) = signs {
        if signs.len() != kraus.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} signs for {} Kraus operators",
                signs.len(),
                kraus.len()
            )));
        }
    }
    let n = kraus.dim();
    let mut choi = zeros(n * n, n * n);
    for (i, (op, w)) in kraus.operators().iter().zip(kraus.weights()).enumerate() {
        let sign = signs.map_or(1.0, |s| s[i].factor());
        let v = vectorize(op);
        choi += (&v * v.adjoint()).scale(sign * w);
    }
    Ok(LinearMap { dim: n, choi })
}

/// Canonical decomposition of a Hermiticity-preserving map, grouped by sign.
///
/// Eigenvectors of the Choi matrix become Hilbert–Schmidt orthonormal
/// operators `L_i`; the eigenvalue magnitudes become weights. Eigenvalues
/// inside the zero threshold are dropped from both sets. Returns
/// `(positive, negative)` with `Λ = Σ_pos w L·L† − Σ_neg w L·L†`.
pub fn map_to_kraus(map: &LinearMap, tol: &Tolerance) -> Result<(KrausSet, KrausSet)> {
    let eig = choi_eigen(map, tol)?;
    Ok(kraus_from_eigen(map.dim(), &eig, tol))
}

pub(crate) fn choi_eigen(map: &LinearMap, tol: &Tolerance) -> Result<linalg::HermitianEigen> {
    let residual = hermiticity_residual(map.choi());
    if residual > tol.scaled_residual(map.choi().norm()) {
        return Err(Error::NonHermitianChoi { residual });
    }
    Ok(linalg::hermitian_eig_unchecked(&linalg::hermitian_part(
        map.choi(),
    )))
}

pub(crate) fn kraus_from_eigen(
    n: usize,
    eig: &linalg::HermitianEigen,
    tol: &Tolerance,
) -> (KrausSet, KrausSet) {
    let threshold = tol.zero_threshold(&eig.values);
    let mut positive = KrausSet::empty(n);
    let mut negative = KrausSet::empty(n);
    for (i, &lambda) in eig.values.iter().enumerate() {
        if lambda.abs() <= threshold {
            continue;
        }
        let op = unvectorize(&eig.vector(i), n);
        let target = if lambda > 0.0 {
            &mut positive
        } else {
            &mut negative
        };
        target.operators.push(op);
        target.weights.push(lambda.abs());
    }
    (positive, negative)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TpVerdict {
    pub holds: bool,
    /// `‖Tr_out(B) − I‖_F`
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HpVerdict {
    pub holds: bool,
    /// `‖B − B†‖_F`
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CpVerdict {
    pub holds: bool,
    pub min_eigenvalue: f64,
}

pub fn check_tp(map: &LinearMap, tol: &Tolerance) -> TpVerdict {
    let residual = (map.trace_functional() - identity(map.dim())).norm();
    TpVerdict {
        holds: residual <= tol.residual_abs,
        residual,
    }
}

pub fn check_hermiticity_preserving(map: &LinearMap, tol: &Tolerance) -> HpVerdict {
    let residual = hermiticity_residual(map.choi());
    HpVerdict {
        holds: residual <= tol.scaled_residual(map.choi().norm()),
        residual,
    }
}

pub fn check_cp(map: &LinearMap, tol: &Tolerance) -> Result<CpVerdict> {
    let eig = choi_eigen(map, tol)?;
    let threshold = tol.zero_threshold(&eig.values);
    let min_eigenvalue = eig.min();
    Ok(CpVerdict {
        holds: min_eigenvalue >= -threshold,
        min_eigenvalue,
    })
}

/// Descending Choi spectrum of a Hermiticity-preserving map.
pub fn choi_spectrum(map: &LinearMap, tol: &Tolerance) -> Result<Vec<f64>> {
    Ok(choi_eigen(map, tol)?.values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels;
    use crate::linalg::c64;
    use crate::random;

    fn sigma_y_state(a: f64) -> CMatrix {
        // (I + a σ_y) / 2
        CMatrix::from_row_slice(
            2,
            2,
            &[c64(0.5, 0.0), c64(0.0, -a / 2.0), c64(0.0, a / 2.0), c64(0.5, 0.0)],
        )
    }

    #[test]
    fn apply_examples() {
        let rho = sigma_y_state(0.6);
        let id = channels::identity(2);
        assert_eq!(id.apply(&rho).unwrap(), rho);
        let t = channels::transpose(2);
        assert!((t.apply(&rho).unwrap() - sigma_y_state(-0.6)).norm() < 1e-15);
        let dep = channels::depolarizing(2, 1.0).unwrap();
        let out = dep.apply(&matrix_unit(2, 0, 0)).unwrap();
        assert!((out - identity(2).scale(0.5)).norm() < 1e-15);
        assert!(matches!(id.apply(&identity(3)), Err(Error::DimensionMismatch(_))));
    }

    #[test]
    fn a_form_examples() {
        let id = channels::identity(2);
        assert_eq!(id.a_form(), identity(4));
        // transpose: ρ_{rs} -> ρ_{sr}, i.e. A sends basis index (r,s) to (s,r)
        let a = channels::transpose(2).a_form();
        for r in 0..2 {
            for s in 0..2 {
                for rp in 0..2 {
                    for sp in 0..2 {
                        let expected = if rp == s && sp == r { 1.0 } else { 0.0 };
                        assert_eq!(a[(rp * 2 + sp, r * 2 + s)], c64(expected, 0.0));
                    }
                }
            }
        }
        let mut rng = random::seeded(3);
        let m = random::complex_matrix(4, 4, &mut rng);
        let map = LinearMap::from_a_form(&m).unwrap();
        assert_eq!(map.a_form(), m);
        assert_eq!(LinearMap::from_a_form(&map.a_form()).unwrap(), map);
    }

    #[test]
    fn a_form_acts_on_row_major_vectorization() {
        let mut rng = random::seeded(11);
        let map = random::tp_map(3, &mut rng);
        let rho = random::density_matrix(3, &mut rng);
        let via_a = map.a_form() * vectorize(&rho);
        let direct = vectorize(&map.apply(&rho).unwrap());
        assert!((via_a - direct).norm() < 1e-13);
    }

    #[test]
    fn standard_choi_round_trip() {
        let mut rng = random::seeded(5);
        let map = random::tp_map(2, &mut rng);
        let c = map.standard_choi();
        assert_eq!(LinearMap::from_standard_choi(&c).unwrap(), map);
        // Σ_rs |r⟩⟨s| ⊗ Λ(|r⟩⟨s|)
        let expected = (0..2)
            .flat_map(|r| (0..2).map(move |s| (r, s)))
            .fold(zeros(4, 4), |acc, (r, s)| {
                let e = matrix_unit(2, r, s);
                acc + linalg::kron(&e, &map.apply(&e).unwrap())
            });
        assert!((c - expected).norm() < 1e-14);
    }

    #[test]
    fn from_choi_rejects_non_square_sides() {
        assert!(matches!(
            LinearMap::from_choi(identity(3)),
            Err(Error::DimensionMismatch(_))
        ));
    }

    #[test]
    fn kraus_to_map_examples() {
        let k = KrausSet::new(2, vec![identity(2)], None).unwrap();
        assert_eq!(kraus_to_map(&k, None).unwrap(), channels::identity(2));
        let damping = channels::amplitude_damping_kraus(0.0).unwrap();
        let m = kraus_to_map(&damping, None).unwrap();
        assert!((m.choi() - channels::identity(2).choi()).norm() < 1e-15);
        let (paulis, signs) = channels::transpose_pauli_kraus();
        let t = kraus_to_map(&paulis, Some(&signs)).unwrap();
        assert!((t.choi() - channels::transpose(2).choi()).norm() < 1e-15);
    }

    #[test]
    fn kraus_to_map_rejects_bad_sign_count() {
        let k = KrausSet::new(2, vec![identity(2)], None).unwrap();
        assert!(kraus_to_map(&k, Some(&[Sign::Plus, Sign::Minus])).is_err());
        assert!(KrausSet::new(2, vec![identity(3)], None).is_err());
        assert!(KrausSet::new(2, vec![identity(2)], Some(vec![-1.0])).is_err());
    }

    #[test]
    fn map_to_kraus_examples() {
        let tol = Tolerance::default();
        let (pos, neg) = map_to_kraus(&channels::identity(2), &tol).unwrap();
        assert_eq!(pos.len(), 1);
        assert!(neg.is_empty());
        assert!((pos.weights()[0] - 2.0).abs() < 1e-14);
        // I/√2 up to a global phase
        let l = &pos.operators()[0];
        let phase = l[(0, 0)] / l[(0, 0)].norm();
        assert!((l - identity(2).scale(std::f64::consts::FRAC_1_SQRT_2) * phase).norm() < 1e-14);

        let (pos, neg) = map_to_kraus(&channels::transpose(2), &tol).unwrap();
        assert_eq!((pos.len(), neg.len()), (3, 1));
        assert!(pos.weights().iter().chain(neg.weights()).all(|w| (w - 1.0).abs() < 1e-12));

        let (pos, neg) = map_to_kraus(&channels::depolarizing(2, 1.0).unwrap(), &tol).unwrap();
        assert_eq!((pos.len(), neg.len()), (4, 0));
        assert!(pos.weights().iter().all(|w| (w - 0.5).abs() < 1e-12));
    }

    #[test]
    fn map_to_kraus_rejects_non_hermitian_choi() {
        let mut choi = channels::identity(2).choi().clone();
        choi[(0, 1)] = c64(0.3, 0.0);
        let map = LinearMap::from_choi(choi).unwrap();
        assert!(matches!(
            map_to_kraus(&map, &Tolerance::default()),
            Err(Error::NonHermitianChoi { .. })
        ));
    }

    #[test]
    fn eigenmatrices_are_hilbert_schmidt_orthonormal() {
        let mut rng = random::seeded(9);
        let map = random::tp_map(3, &mut rng);
        let (pos, neg) = map_to_kraus(&map, &Tolerance::default()).unwrap();
        let all: Vec<&CMatrix> = pos.operators().iter().chain(neg.operators()).collect();
        for (i, a) in all.iter().enumerate() {
            for (j, b) in all.iter().enumerate() {
                let ip = (a.adjoint() * *b).trace();
                let expected = if i == j { 1.0 } else { 0.0 };
                assert!((ip - c64(expected, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn check_tp_examples() {
        let tol = Tolerance::default();
        let v = check_tp(&channels::identity(2), &tol);
        assert!(v.holds && v.residual == 0.0);
        assert!(check_tp(&channels::transpose(2), &tol).holds);
        let doubled = channels::identity(2).scale(2.0);
        let v = check_tp(&doubled, &tol);
        assert!(!v.holds);
        assert!((v.residual - 2.0_f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn check_cp_examples() {
        let tol = Tolerance::default();
        let v = check_cp(&channels::identity(2), &tol).unwrap();
        assert!(v.holds);
        assert!(v.min_eigenvalue.abs() < 1e-14);
        let v = check_cp(&channels::transpose(2), &tol).unwrap();
        assert!(!v.holds);
        assert!((v.min_eigenvalue + 1.0).abs() < 1e-12);
        assert!(check_cp(&channels::amplitude_damping(0.3).unwrap(), &tol).unwrap().holds);
    }

    #[test]
    fn density_matrix_validation() {
        let tol = Tolerance::default();
        assert!(DensityMatrix::new(sigma_y_state(0.6), &tol).is_ok());
        assert!(DensityMatrix::new(sigma_y_state(1.5), &tol).is_err());
        assert!(DensityMatrix::new(identity(2), &tol).is_err());
        assert!((DensityMatrix::maximally_mixed(2).purity() - 0.5).abs() < 1e-15);
    }
}
