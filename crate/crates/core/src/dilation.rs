//! Unitary dilation of completely positive trace-preserving maps.
//!
//! For a complete Kraus set `{M_i}` (`Σ M_i† M_i = I`) the operator
//! `V = Σ_i M_i ⊗ |i⟩` is an isometry from the system into system ⊗ ancilla.
//! Placing `V` in the columns `|s⟩ ⊗ |e₀⟩` of a square matrix and completing
//! the remaining columns to an orthonormal basis gives a unitary `U` with
//!
//! ```text
//! Λρ = Tr_anc[U (ρ ⊗ |e₀⟩⟨e₀|) U†]
//! ```

use crate::error::{Error, Result};
use crate::linalg::{self, kron, matrix_unit, zeros, CMatrix, CVector, Subsystem, Tolerance};
use crate::map::{check_cp, check_tp, map_to_kraus, KrausSet, LinearMap};
use crate::random;

#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryDilation {
    pub system_dim: usize,
    pub ancilla_dim: usize,
    /// Acts on system ⊗ ancilla, system factor first.
    pub unitary: CMatrix,
    /// Index of the ancilla reference state `|e₀⟩`.
    pub ancilla_ref_index: usize,
}

impl UnitaryDilation {
    /// `Tr_anc[U (ρ ⊗ |e₀⟩⟨e₀|) U†]`.
    pub fn apply(&self, rho: &CMatrix) -> Result<CMatrix> {
        let n = self.system_dim;
        if rho.nrows() != n || rho.ncols() != n {
            return Err(Error::DimensionMismatch(format!(
                "dilation acts on {n}x{n} states, got {}x{}",
                rho.nrows(),
                rho.ncols()
            )));
        }
        let d = self.ancilla_dim;
        let reference = matrix_unit(d, self.ancilla_ref_index, self.ancilla_ref_index);
        let joint = &self.unitary * kron(rho, &reference) * self.unitary.adjoint();
        linalg::partial_trace(&joint, (n, d), Subsystem::Second)
    }

    pub fn unitarity_residual(&self) -> f64 {
        linalg::unitarity_residual(&self.unitary)
    }
}

/// Completes a complete Kraus set to a unitary on system ⊗ ancilla.
///
/// Weights are folded into the operators first. The ancilla dimension is the
/// number of operators; `|e₀⟩` is the first ancilla basis vector. Remaining
/// columns come from Gram–Schmidt on the standard basis in index order, so
/// the output is deterministic.
pub fn kraus_to_unitary(kraus: &KrausSet, tol: &Tolerance) -> Result<UnitaryDilation> {
    if kraus.is_empty() {
        return Err(Error::NotCompleteKraus {
            residual: (linalg::identity(kraus.dim())).norm(),
        });
    }
    let kraus = kraus.folded();
    let residual = kraus.completeness_residual();
    if residual > tol.residual_abs {
        return Err(Error::NotCompleteKraus { residual });
    }
    let n = kraus.dim();
    let d = kraus.len();
    let total = n * d;

    let mut columns: Vec<Option<CVector>> = vec![None; total];
    let mut basis: Vec<CVector> = Vec::with_capacity(total);
    for s in 0..n {
        let col = CVector::from_fn(total, |row, _| {
            let (r, i) = (row / d, row % d);
            kraus.operators()[i][(r, s)]
        });
        columns[s * d] = Some(col.clone());
        basis.push(col);
    }

    let mut candidates = (0..total).map(|k| linalg::basis_vector(total, k));
    for (slot, column) in columns.iter_mut().enumerate() {
        if slot % d == 0 {
            continue;
        }
        let next = loop {
            let e = candidates
                .next()
                .expect("standard basis spans the space, so completion cannot run out");
            if let Some(v) = orthonormalize(&e, &basis) {
                break v;
            }
        };
        basis.push(next.clone());
        *column = Some(next);
    }

    let mut unitary = zeros(total, total);
    for (j, col) in columns.into_iter().enumerate() {
        unitary.set_column(j, &col.expect("every slot filled"));
    }
    Ok(UnitaryDilation {
        system_dim: n,
        ancilla_dim: d,
        unitary,
        ancilla_ref_index: 0,
    })
}

// Two passes of modified Gram–Schmidt; rejects candidates that are (almost)
// in the span of `basis`.
fn orthonormalize(v: &CVector, basis: &[CVector]) -> Option<CVector> {
    let mut w = v.clone();
    for _ in 0..2 {
        for b in basis {
            let proj = b.dotc(&w);
            w -= b * proj;
        }
    }
    let norm = w.norm();
    (norm > 1e-6).then(|| w.unscale(norm))
}

/// Dilates a map after checking it is completely positive and trace
/// preserving. The Kraus operators come from the Choi eigendecomposition, so
/// the ancilla dimension equals the Choi rank.
pub fn dilate_map(map: &LinearMap, tol: &Tolerance) -> Result<UnitaryDilation> {
    let cp = check_cp(map, tol)?;
    if !cp.holds {
        return Err(Error::NotCompletelyPositive {
            min_eigenvalue: cp.min_eigenvalue,
        });
    }
    let tp = check_tp(map, tol);
    if !tp.holds {
        return Err(Error::NotTracePreserving {
            residual: tp.residual,
        });
    }
    let (positive, _) = map_to_kraus(map, tol)?;
    kraus_to_unitary(&positive, tol)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundTripReport {
    pub max_residual: f64,
    pub unitarity_residual: f64,
    pub passed: bool,
}

/// Compares the dilation against `map` on `samples` seeded random states.
pub fn dilation_round_trip(
    dilation: &UnitaryDilation,
    map: &LinearMap,
    samples: usize,
    seed: u64,
    tol: &Tolerance,
) -> Result<RoundTripReport> {
    if map.dim() != dilation.system_dim {
        return Err(Error::DimensionMismatch(format!(
            "dilation of a {}-level system compared with a map on {} levels",
            dilation.system_dim,
            map.dim()
        )));
    }
    let mut rng = random::seeded(seed);
    let mut max_residual = 0.0_f64;
    for _ in 0..samples {
        let rho = random::density_matrix(map.dim(), &mut rng);
        let diff = dilation.apply(&rho)? - map.apply(&rho)?;
        max_residual = max_residual.max(diff.norm());
    }
    Ok(RoundTripReport {
        max_residual,
        unitarity_residual: dilation.unitarity_residual(),
        passed: max_residual <= tol.residual_abs,
    })
}
