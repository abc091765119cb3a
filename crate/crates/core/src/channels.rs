//! A small zoo of standard maps used throughout the tests and examples.

use crate::error::{Error, Result};
use crate::linalg::{self, c64, CMatrix, I, ONE, ZERO};
use crate::map::{kraus_to_map, KrausSet, LinearMap, Sign};

pub fn pauli_x() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, ONE, ONE, ZERO])
}

pub fn pauli_y() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ZERO, -I, I, ZERO])
}

pub fn pauli_z() -> CMatrix {
    CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, -ONE])
}

pub fn hadamard() -> CMatrix {
    (pauli_x() + pauli_z()).scale(std::f64::consts::FRAC_1_SQRT_2)
}

/// SWAP on `C^n ⊗ C^n`.
pub fn swap(n: usize) -> CMatrix {
    let mut m = linalg::zeros(n * n, n * n);
    for a in 0..n {
        for b in 0..n {
            m[(b * n + a, a * n + b)] = ONE;
        }
    }
    m
}

/// CNOT on two qubits, control on the first factor.
pub fn cnot() -> CMatrix {
    let mut m = linalg::zeros(4, 4);
    m[(0, 0)] = ONE;
    m[(1, 1)] = ONE;
    m[(2, 3)] = ONE;
    m[(3, 2)] = ONE;
    m
}

fn check_probability(name: &str, p: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("{name} must lie in [0, 1], got {p}")));
    }
    Ok(())
}

pub fn identity(n: usize) -> LinearMap {
    LinearMap::from_action(n, |x| x.clone())
}

/// `ρ ↦ u ρ u†`.
pub fn unitary_conjugation(u: &CMatrix) -> LinearMap {
    let n = u.nrows();
    LinearMap::from_action(n, |x| u * x * u.adjoint())
}

/// `ρ ↦ (1 − p) ρ + p Tr(ρ) I/n`.
pub fn depolarizing(n: usize, p: f64) -> Result<LinearMap> {
    check_probability("depolarizing strength", p)?;
    Ok(LinearMap::from_action(n, |x| {
        x.scale(1.0 - p) + linalg::identity(n) * (linalg::trace(x) * c64(p / n as f64, 0.0))
    }))
}

pub fn amplitude_damping_kraus(gamma: f64) -> Result<KrausSet> {
    check_probability("damping rate", gamma)?;
    let m0 = CMatrix::from_row_slice(2, 2, &[ONE, ZERO, ZERO, c64((1.0 - gamma).sqrt(), 0.0)]);
    let m1 = CMatrix::from_row_slice(2, 2, &[ZERO, c64(gamma.sqrt(), 0.0), ZERO, ZERO]);
    KrausSet::new(2, vec![m0, m1], None)
}

pub fn amplitude_damping(gamma: f64) -> Result<LinearMap> {
    kraus_to_map(&amplitude_damping_kraus(gamma)?, None)
}

/// `ρ ↦ ρᵀ`; trace preserving, Hermiticity preserving, not completely positive.
pub fn transpose(n: usize) -> LinearMap {
    LinearMap::from_action(n, |x| x.transpose())
}

/// The qubit transpose as a signed operator sum `Σ_μ ± (σ_μ/√2) ρ (σ_μ/√2)`,
/// with the minus sign on the `σ_y` term.
pub fn transpose_pauli_kraus() -> (KrausSet, [Sign; 4]) {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    let ops = vec![
        linalg::identity(2).scale(h),
        pauli_x().scale(h),
        pauli_y().scale(h),
        pauli_z().scale(h),
    ];
    let set = KrausSet::new(2, ops, None).expect("2x2 operators");
    (set, [Sign::Plus, Sign::Plus, Sign::Minus, Sign::Plus])
}
