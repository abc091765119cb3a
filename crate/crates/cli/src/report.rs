//! Report documents. Field order is fixed by the struct definitions and every
//! float is written with 17 significant digits, so identical runs produce
//! identical bytes.

use extmaps::{CMatrix, CVector};
use serde::{Serialize, Serializer};
use serde_json::value::RawValue;

/// `f64` written as `d.dddddddddddddddde±x`; non-finite values become `null`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Real(pub f64);

impl Serialize for Real {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        if !self.0.is_finite() {
            return serializer.serialize_none();
        }
        let raw = RawValue::from_string(format!("{:.16e}", self.0)).map_err(serde::ser::Error::custom)?;
        raw.serialize(serializer)
    }
}

pub type Complex = [Real; 2];
pub type Matrix = Vec<Vec<Complex>>;

pub fn reals(values: &[f64]) -> Vec<Real> {
    values.iter().copied().map(Real).collect()
}

pub fn matrix(m: &CMatrix) -> Matrix {
    (0..m.nrows())
        .map(|r| (0..m.ncols()).map(|c| [Real(m[(r, c)].re), Real(m[(r, c)].im)]).collect())
        .collect()
}

pub fn vector(v: &CVector) -> Vec<Complex> {
    v.iter().map(|z| [Real(z.re), Real(z.im)]).collect()
}

#[derive(Debug, Clone, Serialize)]
pub struct ToleranceReport {
    pub zero_eig_rel: Real,
    pub residual_abs: Real,
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub input: String,
    pub input_digest: String,
    pub seed: Option<u64>,
    pub tolerance: ToleranceReport,
    pub variant: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<Decomposition>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub verification: Option<Verification>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dilation: Option<Dilation>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extraction: Option<Extraction>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub extracted_map: Option<SuperopDocument>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Check {
    pub holds: bool,
    pub residual: Real,
}

#[derive(Debug, Clone, Serialize)]
pub struct CpCheck {
    pub holds: bool,
    pub min_choi_eigenvalue: Real,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verdicts {
    pub is_tp: Check,
    pub is_hp: Check,
    pub is_cp: CpCheck,
}

#[derive(Debug, Clone, Serialize)]
pub struct Annihilation {
    pub kernel_dim: usize,
    pub kernel_diagonal: Real,
    pub kernel_cross: Real,
    pub eigenmatrix_kernel: Real,
    pub support_projection: Real,
    pub max: Real,
}

#[derive(Debug, Clone, Serialize)]
pub struct OmegaVariant {
    pub sector_dim: usize,
    pub choi_hermiticity_residual: Real,
    pub min_choi_eigenvalue: Option<Real>,
    pub completely_positive: Option<bool>,
    pub plus_trace_residual: Real,
    pub minus_trace_residual: Option<Real>,
    pub extension_residual: Real,
    pub reconstruction_residual: Real,
}

#[derive(Debug, Clone, Serialize)]
pub struct Omega {
    pub literal: OmegaVariant,
    pub symmetric: OmegaVariant,
}

#[derive(Debug, Clone, Serialize)]
pub struct Decomposition {
    pub dim: usize,
    pub verdicts: Verdicts,
    pub choi_eigenvalues: Vec<Real>,
    pub j_matrix: Matrix,
    pub k_matrix: Matrix,
    pub j_min_eig: Real,
    pub k_rank: usize,
    pub l_plus: usize,
    pub l_minus: usize,
    pub extension_dim: usize,
    pub dilation_dim: usize,
    pub tp_structure_residual: Real,
    pub reconstruction_residual: Real,
    pub annihilation_residuals: Annihilation,
    pub omega: Omega,
}

#[derive(Debug, Clone, Serialize)]
pub struct Verification {
    pub samples: usize,
    pub seed: u64,
    pub max_reconstruction_residual: Real,
    pub max_extension_residual: Real,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Dilation {
    pub system_dim: usize,
    pub ancilla_dim: usize,
    pub ancilla_ref_index: usize,
    pub unitary: Matrix,
    pub unitarity_residual: Real,
    pub round_trip_samples: usize,
    pub round_trip_residual: Real,
    pub passed: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct ContradictionTerm {
    pub weight: Real,
    pub eigenvector: Vec<Complex>,
    pub distance: Real,
}

#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub dims: [usize; 2],
    pub reduced_state: Matrix,
    pub purity: Real,
    pub schmidt_rank: usize,
    pub verdict: &'static str,
    pub weights: Vec<Real>,
    pub contradiction: Vec<ContradictionTerm>,
}

#[derive(Debug, Clone, Serialize)]
pub struct Extraction {
    pub linear_part: Matrix,
    pub constant_part: Matrix,
    pub constant_trace: Complex,
    pub consistency_residual: Real,
    pub is_tp: Check,
    pub is_cp: CpCheck,
}

/// A `superop_b` input document, so extraction output can be fed back in.
#[derive(Debug, Clone, Serialize)]
pub struct SuperopDocument {
    pub kind: &'static str,
    pub dim: usize,
    pub data: Matrix,
}

#[derive(Debug, Clone, Serialize)]
pub struct BatchError {
    pub input: String,
    pub exit_code: i32,
    pub error: String,
}
