//! Seeded random states, unitaries and maps for tests and verification runs.
//!
//! Every generator takes the RNG explicitly; use [`seeded`] to get a
//! reproducible stream.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::linalg::{self, c64, CMatrix, CVector, Tolerance};
use crate::map::{kraus_to_map, KrausSet, LinearMap};

pub fn seeded(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Standard complex Gaussian, `E|z|² = 1`.
pub fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> num_complex::Complex64 {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    c64(re, im).unscale(std::f64::consts::SQRT_2)
}

pub fn complex_matrix<R: Rng + ?Sized>(rows: usize, cols: usize, rng: &mut R) -> CMatrix {
    CMatrix::from_fn(rows, cols, |_, _| complex_gaussian(rng))
}

pub fn hermitian<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    linalg::hermitian_part(&complex_matrix(n, n, rng))
}

/// Unit vector drawn from the unitarily invariant measure.
pub fn pure_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CVector {
    let v = CVector::from_fn(n, |_, _| complex_gaussian(rng));
    let norm = v.norm();
    v.unscale(norm)
}

/// Full-rank density matrix `G G† / Tr(G G†)` with `G` Ginibre.
pub fn density_matrix<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let g = complex_matrix(n, n, rng);
    let m = linalg::hermitian_part(&(&g * g.adjoint()));
    let tr = linalg::trace(&m).re;
    m.unscale(tr)
}

/// Haar-random unitary via QR with the phase of `R`'s diagonal divided out.
pub fn unitary<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CMatrix {
    let qr = complex_matrix(n, n, rng).qr();
    let (q, r) = (qr.q(), qr.r());
    let mut u = q;
    for j in 0..n {
        let d = r[(j, j)];
        if d.norm() > 0.0 {
            let col = u.column(j) * (d / d.norm());
            u.set_column(j, &col);
        }
    }
    u
}

/// Rescales the input side of a Hermiticity-preserving map so it becomes
/// trace preserving: `Λ'(X) = Λ(J^{-1/2} X J^{-1/2})` where `Tr Λ(X) = Tr(J X)`.
///
/// Returns `None` when `J` is not positive definite.
pub fn normalize_tp(map: &LinearMap) -> Option<LinearMap> {
    let tol = Tolerance::default();
    let j = map.trace_functional();
    let eig = linalg::hermitian_eig(&j, &tol).ok()?;
    if eig.min() <= 1e-6 * eig.max().abs().max(1.0) {
        return None;
    }
    let s = eig.spectral_map(|x| 1.0 / x.sqrt());
    Some(LinearMap::from_action(map.dim(), |x| {
        map.apply(&(&s * x * &s)).expect("dimension preserved")
    }))
}

/// Random trace-preserving, Hermiticity-preserving map on `n × n` matrices.
///
/// Draws a Hermitian B-form matrix `I + H` with `H` from the Gaussian
/// unitary ensemble and renormalizes it with [`normalize_tp`], redrawing until
/// the trace functional is positive definite with condition number at most
/// 4. Almost all draws are not completely positive.
pub fn tp_map<R: Rng + ?Sized>(n: usize, rng: &mut R) -> LinearMap {
    let n2 = n * n;
    let tol = Tolerance::default();
    loop {
        let b = linalg::identity(n2) + hermitian(n2, rng);
        let map = LinearMap::from_choi(b).expect("square of side n²");
        let Ok(j) = linalg::hermitian_eig(&map.trace_functional(), &tol) else {
            continue;
        };
        if j.min() < 0.25 * j.max() {
            continue;
        }
        if let Some(tp) = normalize_tp(&map) {
            return tp;
        }
    }
}

/// Random trace-preserving map whose negative part has a rank-deficient
/// `K`, so `ker K` is nontrivial.
///
/// The negative Kraus operator `L` maps into a `k`-dimensional output
/// subspace (`1 ≤ k < n`) and the completely positive Kraus operators map
/// into its orthogonal complement. Output orthogonality survives the
/// `J^{-1/2}` input renormalization, so `vec(L J^{-1/2})` remains the unique
/// negative Choi eigenvector and `ker K = ker(L J^{-1/2})`. A final random
/// output unitary hides the block structure without changing `K`.
///
/// # Panics
///
/// If `n < 2`.
pub fn rank_deficient_k_map<R: Rng + ?Sized>(n: usize, rng: &mut R) -> LinearMap {
    assert!(n >= 2, "a rank-deficient K needs n >= 2");
    loop {
        let k = rng.random_range(1..n);
        let mut l = complex_matrix(n, n, rng);
        for r in k..n {
            l.row_mut(r).fill(linalg::ZERO);
        }
        let l = l.unscale(l.norm());
        let ops: Vec<CMatrix> = (0..n + 1)
            .map(|_| {
                let mut m = complex_matrix(n, n, rng);
                for r in 0..k {
                    m.row_mut(r).fill(linalg::ZERO);
                }
                m
            })
            .collect();
        let cp = kraus_to_map(&KrausSet::new(n, ops, None).expect("n x n"), None)
            .expect("unsigned");
        let strength = rng.random_range(0.2..0.8) * cp.choi().norm() / n as f64;
        let neg = kraus_to_map(&KrausSet::new(n, vec![l], Some(vec![strength])).expect("n x n"), None)
            .expect("unsigned");
        let Some(tp) = normalize_tp(&cp.sub(&neg).expect("same dim")) else {
            continue;
        };
        let v = unitary(n, rng);
        return LinearMap::from_action(n, |x| &v * tp.apply(x).expect("n x n") * v.adjoint());
    }
}

/// Random CPTP Kraus set with `count` operators, sliced from a random
/// `(n·count) × n` isometry.
pub fn cptp_kraus<R: Rng + ?Sized>(n: usize, count: usize, rng: &mut R) -> KrausSet {
    let q = complex_matrix(n * count, n, rng).qr().q();
    let ops = (0..count)
        .map(|i| q.view((i * n, 0), (n, n)).into_owned())
        .collect();
    KrausSet::new(n, ops, None).expect("n x n blocks")
}
