//! Decomposition of trace-preserving, Hermiticity-preserving linear maps on
//! density matrices into completely positive pieces.
//!
//! Every such map `Λ` splits as `Λ = Λ⁺ − Λ⁻` with both parts completely
//! positive. From that split the crate builds an extension `E` onto a larger
//! space and a completely positive map `Ω` such that
//! `Tr_anc[Ω(E(ρ))] = Λρ`, so non-completely-positive dynamics is always the
//! ancilla trace of completely positive dynamics applied to an extended state.
//!
//! ```
//! use extmaps::{channels, extension, split, Tolerance};
//!
//! let tol = Tolerance::default();
//! let transpose = channels::transpose(2);
//! let parts = split::split(&transpose, &tol).unwrap();
//! assert_eq!((parts.l_plus(), parts.l_minus()), (3, 1));
//!
//! let rho = extmaps::random::density_matrix(2, &mut extmaps::random::seeded(0));
//! let rebuilt = extension::reconstruct(&parts, &rho, extension::Variant::Literal).unwrap();
//! assert!(rebuilt.residual < 1e-12);
//! ```

pub mod channels;
pub mod dilation;
pub mod entangled;
pub mod error;
pub mod extension;
pub mod linalg;
pub mod map;
pub mod random;
pub mod split;

pub use error::{Error, Result};
pub use linalg::{CMatrix, CVector, Tolerance};
pub use map::{DensityMatrix, KrausSet, LinearMap, Sign};

#[cfg(doctest)]
mod guide {
    #[doc = include_str!("../../../book/src/introduction.md")]
    mod introduction {}
    #[doc = include_str!("../../../book/src/maps.md")]
    mod maps {}
    #[doc = include_str!("../../../book/src/split.md")]
    mod split {}
    #[doc = include_str!("../../../book/src/extension.md")]
    mod extension {}
    #[doc = include_str!("../../../book/src/dilation.md")]
    mod dilation {}
    #[doc = include_str!("../../../book/src/entanglement.md")]
    mod entanglement {}
    #[doc = include_str!("../../../book/src/cli.md")]
    mod cli {}
}
