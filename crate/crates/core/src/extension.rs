//! Extension maps and the completely positive map that undoes them.
//!
//! An extension map `E` enlarges the system with an ancilla while leaving the
//! system's state intact: `Tr_e E(ρ) = ρ`. For a trace-preserving map split as
//! `Λ = Λ⁺ − Λ⁻` the literal construction is
//!
//! ```text
//! E(ρ) = Jρ ⊗ |e₊⟩⟨e₊| − Kρ ⊗ |e₋⟩⟨e₋|
//! Ω(X ⊗ |e₊⟩⟨e₊|) = Λ⁺(J⁻¹X) ⊗ |e₊⟩⟨e₊|
//! Ω(X ⊗ |e₋⟩⟨e₋|) = Λ⁻(K⁺X) ⊗ |e₋⟩⟨e₋|
//! ```
//!
//! and `Tr_e Ω(E(ρ)) = Λ⁺(ρ) − Λ⁻(Ψρ) = Λ(ρ)`. The ancilla kets only label
//! two diagonal blocks, so [`ExtendedState`] stores the blocks directly; the
//! minus block carries its sign. When `K = 0` the minus block is omitted and
//! `E` reduces to the product extension `ρ ↦ ρ ⊗ |e₀⟩⟨e₀|`.
//!
//! The [`Variant::Symmetric`] construction sandwiches instead of multiplying
//! from the left: `J^{1/2}ρJ^{1/2}` and `K^{1/2}ρK^{1/2}`, undone by
//! `J^{-1/2}` and `(K⁺)^{1/2}` on both sides. Its sectors of `Ω` are
//! manifestly completely positive, but `Tr_e E_sym(ρ) = ρ` fails whenever `J`
//! is not a multiple of the identity. Cross blocks `|e₊⟩⟨e₋|` are never
//! represented; `Ω` is only defined on the two diagonal sectors.

use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::{self, identity, kron, matrix_unit, zeros, CMatrix};
use crate::map::{DensityMatrix, LinearMap};
use crate::split::CpSplit;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Variant {
    #[default]
    Literal,
    Symmetric,
}

impl fmt::Display for Variant {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Variant::Literal => "literal",
            Variant::Symmetric => "symmetric",
        })
    }
}

/// Block-diagonal operator on system ⊗ {e₊, e₋}.
#[derive(Debug, Clone, PartialEq)]
pub struct ExtendedState {
    pub dim: usize,
    pub variant: Variant,
    pub plus_block: CMatrix,
    /// Signed block (`−Kρ` for the literal variant); `None` when `K = 0`.
    pub minus_block: Option<CMatrix>,
}

impl ExtendedState {
    pub fn zero(dim: usize, variant: Variant, with_minus: bool) -> Self {
        Self {
            dim,
            variant,
            plus_block: zeros(dim, dim),
            minus_block: with_minus.then(|| zeros(dim, dim)),
        }
    }

    pub fn ancilla_dim(&self) -> usize {
        if self.minus_block.is_some() {
            2
        } else {
            1
        }
    }

    /// Partial trace over the ancilla label: the block sum.
    pub fn ancilla_trace(&self) -> CMatrix {
        match &self.minus_block {
            Some(m) => &self.plus_block + m,
            None => self.plus_block.clone(),
        }
    }

    /// Dense operator `Σ_± B_± ⊗ |e±⟩⟨e±|` on system ⊗ ancilla.
    pub fn to_operator(&self) -> CMatrix {
        let d = self.ancilla_dim();
        let mut op = kron(&self.plus_block, &matrix_unit(d, 0, 0));
        if let Some(m) = &self.minus_block {
            op += kron(m, &matrix_unit(d, 1, 1));
        }
        op
    }
}

/// `ρ ↦ ρ ⊗ |0⟩⟨0|` on a `d`-dimensional ancilla.
pub fn build_cp_extension(rho: &DensityMatrix, ancilla_dim: usize) -> Result<CMatrix> {
    if ancilla_dim == 0 {
        return Err(Error::InvalidArgument("ancilla dimension must be at least 1".into()));
    }
    Ok(kron(rho.matrix(), &matrix_unit(ancilla_dim, 0, 0)))
}

/// `X ↦ left · X · right`.
#[derive(Debug, Clone)]
struct Sandwich {
    left: CMatrix,
    right: CMatrix,
}

impl Sandwich {
    fn left(m: CMatrix) -> Self {
        let n = m.nrows();
        Self {
            left: m,
            right: identity(n),
        }
    }

    fn both(m: CMatrix) -> Self {
        Self {
            right: m.clone(),
            left: m,
        }
    }

    fn apply(&self, x: &CMatrix) -> CMatrix {
        &self.left * x * &self.right
    }
}

struct Sectors {
    plus: Sandwich,
    minus: Option<Sandwich>,
}

fn j_inverse_sqrt(split: &CpSplit) -> Result<CMatrix> {
    let eig = linalg::hermitian_eig_unchecked(&split.j);
    let threshold = split.tol.zero_threshold(&eig.values);
    if eig.min() <= threshold {
        return Err(Error::SingularJ {
            min_eigenvalue: eig.min(),
        });
    }
    Ok(eig.spectral_map(|x| 1.0 / x.sqrt()))
}

fn extension_sectors(split: &CpSplit, variant: Variant) -> Result<Sectors> {
    let tol = &split.tol;
    let with_minus = split.has_negative_part();
    Ok(match variant {
        Variant::Literal => Sectors {
            plus: Sandwich::left(split.j.clone()),
            minus: with_minus.then(|| Sandwich::left(split.k.clone())),
        },
        Variant::Symmetric => Sectors {
            plus: Sandwich::both(linalg::psd_sqrt(&split.j, tol)?),
            minus: if with_minus {
                Some(Sandwich::both(linalg::psd_sqrt(&split.k, tol)?))
            } else {
                None
            },
        },
    })
}

fn omega_sectors(split: &CpSplit, variant: Variant) -> Result<Sectors> {
    let tol = &split.tol;
    let with_minus = split.has_negative_part();
    Ok(match variant {
        Variant::Literal => Sectors {
            plus: Sandwich::left(split.j_inverse()?),
            minus: with_minus.then(|| Sandwich::left(split.k_pinv.clone())),
        },
        Variant::Symmetric => Sectors {
            plus: Sandwich::both(j_inverse_sqrt(split)?),
            minus: if with_minus {
                Some(Sandwich::both(linalg::psd_sqrt(&split.k_pinv, tol)?))
            } else {
                None
            },
        },
    })
}

fn check_dim(split: &CpSplit, x: &CMatrix) -> Result<()> {
    let n = split.dim;
    if x.nrows() != n || x.ncols() != n {
        return Err(Error::DimensionMismatch(format!(
            "expected a {n}x{n} matrix, got {}x{}",
            x.nrows(),
            x.ncols()
        )));
    }
    Ok(())
}

/// `E(ρ)`; for the literal variant `plus = Jρ`, `minus = −Kρ`.
pub fn build_extension(split: &CpSplit, rho: &CMatrix, variant: Variant) -> Result<ExtendedState> {
    check_dim(split, rho)?;
    let sectors = extension_sectors(split, variant)?;
    Ok(ExtendedState {
        dim: split.dim,
        variant,
        plus_block: sectors.plus.apply(rho),
        minus_block: sectors.minus.map(|s| -s.apply(rho)),
    })
}

/// `Ω` applied sector by sector, using the variant recorded in `x`.
pub fn apply_omega(split: &CpSplit, x: &ExtendedState) -> Result<ExtendedState> {
    check_dim(split, &x.plus_block)?;
    let sectors = omega_sectors(split, x.variant)?;
    let plus_block = split.lambda_plus.apply(&sectors.plus.apply(&x.plus_block))?;
    let minus_block = match (&x.minus_block, &sectors.minus) {
        (Some(block), Some(s)) => Some(split.lambda_minus.apply(&s.apply(block))?),
        (Some(_), None) => {
            return Err(Error::DimensionMismatch(
                "state has a minus block but the split has no negative part".into(),
            ))
        }
        (None, _) => None,
    };
    Ok(ExtendedState {
        dim: split.dim,
        variant: x.variant,
        plus_block,
        minus_block,
    })
}

#[derive(Debug, Clone)]
pub struct Reconstruction {
    /// `Tr_e Ω(E(ρ))`
    pub result: CMatrix,
    /// `‖result − Λρ‖_F`
    pub residual: f64,
}

/// Runs `ρ ↦ Tr_e Ω(E(ρ))` and compares with the original map.
pub fn reconstruct(split: &CpSplit, rho: &CMatrix, variant: Variant) -> Result<Reconstruction> {
    let extended = build_extension(split, rho, variant)?;
    let result = apply_omega(split, &extended)?.ancilla_trace();
    let residual = (&result - split.original.apply(rho)?).norm();
    Ok(Reconstruction { result, residual })
}

/// `‖Tr_e E(ρ) − ρ‖_F`.
pub fn extension_residual(split: &CpSplit, rho: &CMatrix, variant: Variant) -> Result<f64> {
    Ok((build_extension(split, rho, variant)?.ancilla_trace() - rho).norm())
}

/// `Ω` as a linear map on the block-diagonal sector, with basis ordered
/// ancilla-major (`e₊` block first). Off-diagonal blocks of the input are
/// ignored and off-diagonal blocks of the output are zero.
pub fn omega_map(split: &CpSplit, variant: Variant) -> Result<LinearMap> {
    let n = split.dim;
    let sectors = omega_sectors(split, variant)?;
    let blocks = if sectors.minus.is_some() { 2 } else { 1 };
    let plus = &split.lambda_plus;
    let minus = &split.lambda_minus;
    Ok(LinearMap::from_action(blocks * n, |x| {
        let mut out = zeros(blocks * n, blocks * n);
        let xp = x.view((0, 0), (n, n)).into_owned();
        out.view_mut((0, 0), (n, n))
            .copy_from(&plus.apply(&sectors.plus.apply(&xp)).expect("dim"));
        if let Some(s) = &sectors.minus {
            let xm = x.view((n, n), (n, n)).into_owned();
            out.view_mut((n, n), (n, n))
                .copy_from(&minus.apply(&s.apply(&xm)).expect("dim"));
        }
        out
    }))
}

/// Measured properties of one `Ω` construction.
#[derive(Debug, Clone, PartialEq)]
pub struct OmegaVariantReport {
    pub variant: Variant,
    /// Dimension of the block-diagonal space `Ω` acts on (`2N`, or `N` when `K = 0`).
    pub sector_dim: usize,
    /// `‖C − C†‖_F` for the Choi matrix `C` of `Ω`.
    pub choi_hermiticity_residual: f64,
    /// Smallest Choi eigenvalue, only when the Choi matrix is Hermitian.
    pub min_choi_eigenvalue: Option<f64>,
    pub completely_positive: Option<bool>,
    /// `‖J_Ω₊ − I‖_F` for the trace functional of the plus sector.
    pub plus_trace_residual: f64,
    /// `‖J_Ω₋ − Ψ‖_F` for the minus sector.
    pub minus_trace_residual: Option<f64>,
    /// max over matrix units `E_rs` of `‖Tr_e E(E_rs) − E_rs‖_F`.
    pub extension_residual: f64,
    /// max over matrix units of `‖Tr_e Ω(E(E_rs)) − Λ(E_rs)‖_F`.
    pub reconstruction_residual: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct OmegaReport {
    pub literal: OmegaVariantReport,
    pub symmetric: OmegaVariantReport,
}

/// Builds `Ω` explicitly for both variants and measures what holds. Checking
/// on the `N²` matrix units is exhaustive because every map involved is linear.
pub fn omega_choi_report(split: &CpSplit) -> Result<OmegaReport> {
    Ok(OmegaReport {
        literal: omega_variant_report(split, Variant::Literal)?,
        symmetric: omega_variant_report(split, Variant::Symmetric)?,
    })
}

pub fn omega_variant_report(split: &CpSplit, variant: Variant) -> Result<OmegaVariantReport> {
    let n = split.dim;
    let tol = &split.tol;
    let omega = omega_map(split, variant)?;
    let choi = omega.choi();
    let choi_hermiticity_residual = linalg::hermiticity_residual(choi);
    let hermitian = choi_hermiticity_residual <= tol.scaled_residual(choi.norm());
    let (min_choi_eigenvalue, completely_positive) = if hermitian {
        let eig = linalg::hermitian_eig_unchecked(&linalg::hermitian_part(choi));
        let threshold = tol.zero_threshold(&eig.values);
        (Some(eig.min()), Some(eig.min() >= -threshold))
    } else {
        (None, None)
    };

    let functional = omega.trace_functional();
    let plus_trace_residual = (functional.view((0, 0), (n, n)) - identity(n)).norm();
    let minus_trace_residual = (omega.dim() == 2 * n)
        .then(|| (functional.view((n, n), (n, n)) - &split.psi).norm());

    let mut extension_residual = 0.0_f64;
    let mut reconstruction_residual = 0.0_f64;
    for r in 0..n {
        for s in 0..n {
            let unit = matrix_unit(n, r, s);
            extension_residual = extension_residual.max(self::extension_residual(split, &unit, variant)?);
            reconstruction_residual =
                reconstruction_residual.max(reconstruct(split, &unit, variant)?.residual);
        }
    }

    Ok(OmegaVariantReport {
        variant,
        sector_dim: omega.dim(),
        choi_hermiticity_residual,
        min_choi_eigenvalue,
        completely_positive,
        plus_trace_residual,
        minus_trace_residual,
        extension_residual,
        reconstruction_residual,
    })
}

/// Sizes of the spaces the construction needs.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimensionReport {
    pub l_plus: usize,
    pub l_minus: usize,
    /// `dim(J) + dim(K)`, with `dim(K) = 0` when `K = 0`.
    pub extension_dim: usize,
    /// `dim(J)·l₊ + dim(K)·l₋`.
    pub dilation_dim: usize,
    /// `N²`, an upper bound for `l₊ + l₋`.
    pub n_squared_bound: usize,
}

pub fn dimension_report(split: &CpSplit) -> DimensionReport {
    let n = split.dim;
    let dim_k = if split.has_negative_part() { n } else { 0 };
    let (l_plus, l_minus) = (split.l_plus(), split.l_minus());
    DimensionReport {
        l_plus,
        l_minus,
        extension_dim: n + dim_k,
        dilation_dim: n * l_plus + dim_k * l_minus,
        n_squared_bound: n * n,
    }
}
