//! Structural properties of the split and the extension on seeded random
//! inputs.

mod common;

use extmaps::extension::{extension_residual, reconstruct, Variant};
use extmaps::map::{kraus_to_map, LinearMap};
use extmaps::split::{partial_sum_functionals, split, tp_structure_residual, verify_annihilation};
use extmaps::{channels, linalg, random, CMatrix, KrausSet, Tolerance};
use proptest::prelude::*;

fn tol() -> Tolerance {
    Tolerance::default()
}

#[test]
fn reconstruction_on_fifty_maps_per_dimension() {
    let mut rng = random::seeded(200);
    for n in 2..=4 {
        for _ in 0..50 {
            let s = split(&random::tp_map(n, &mut rng), &tol()).unwrap();
            let rho = random::density_matrix(n, &mut rng);
            for variant in [Variant::Literal, Variant::Symmetric] {
                assert!(reconstruct(&s, &rho, variant).unwrap().residual <= 1e-9);
            }
            assert!(extension_residual(&s, &rho, Variant::Literal).unwrap() <= 1e-9);
        }
    }
}

#[test]
fn trace_structure_on_random_maps() {
    let mut rng = random::seeded(201);
    for n in 2..=4 {
        for _ in 0..20 {
            let s = split(&random::tp_map(n, &mut rng), &tol()).unwrap();
            assert!(tp_structure_residual(&s) <= 1e-9);
            assert!(s.j_min_eigenvalue() >= 1.0 - 1e-9);
            let k_min = common::hermitian_eigenvalues(&s.k).last().copied().unwrap();
            assert!(k_min >= -1e-10);
            let (j, k) = partial_sum_functionals(&s);
            assert!((j - &s.j).camax() <= 1e-10);
            assert!((k - &s.k).camax() <= 1e-10);
        }
    }
}

#[test]
fn annihilation_on_rank_deficient_k() {
    let mut rng = random::seeded(202);
    for n in 2..=4 {
        for _ in 0..7 {
            let s = split(&random::rank_deficient_k_map(n, &mut rng), &tol()).unwrap();
            assert!(!s.kernel_basis.is_empty());
            let report = verify_annihilation(&s, 10, 7);
            assert!(report.passed(), "{report:?}");
        }
    }
}

// The transpose map has a threefold degenerate positive Choi eigenvalue, so
// its positive eigenmatrices are only fixed up to a unitary mixing. Any
// mixing must give the same positive part and the same trace functional.
#[test]
fn degenerate_eigenbasis_mixing_is_invisible() {
    let s = split(&channels::transpose(2), &tol()).unwrap();
    let mut rng = random::seeded(203);
    for _ in 0..10 {
        let u = random::unitary(3, &mut rng);
        let ops = s.positive.folded();
        let mixed: Vec<CMatrix> = (0..3)
            .map(|a| {
                (0..3).fold(linalg::zeros(2, 2), |acc, b| acc + &ops.operators()[b] * u[(a, b)])
            })
            .collect();
        let mixed = KrausSet::new(2, mixed, None).unwrap();
        let plus = kraus_to_map(&mixed, None).unwrap();
        assert!((plus.choi() - s.lambda_plus.choi()).norm() < 1e-12);
        assert!((mixed.gram() - &s.j).norm() < 1e-12);
    }
}

fn covariant(map: &LinearMap, v: &CMatrix, w: &CMatrix) -> LinearMap {
    LinearMap::from_action(map.dim(), |x| {
        v * map.apply(&(w * x * w.adjoint())).unwrap() * v.adjoint()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn split_is_covariant_under_unitaries(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = random::seeded(seed);
        let m = random::tp_map(n, &mut rng);
        let v = random::unitary(n, &mut rng);
        let w = random::unitary(n, &mut rng);
        let s = split(&m, &tol()).unwrap();
        let t = split(&covariant(&m, &v, &w), &tol()).unwrap();
        prop_assert_eq!(s.l_plus(), t.l_plus());
        prop_assert_eq!(s.l_minus(), t.l_minus());
        let j = w.adjoint() * &s.j * &w;
        let k = w.adjoint() * &s.k * &w;
        prop_assert!((t.j - j).norm() < 1e-9);
        prop_assert!((t.k - k).norm() < 1e-9);
    }

    #[test]
    fn maps_are_linear(seed in any::<u64>(), n in 1usize..=4, a in -3.0f64..3.0, b in -3.0f64..3.0) {
        let mut rng = random::seeded(seed);
        let m = random::tp_map(n, &mut rng);
        let x = random::complex_matrix(n, n, &mut rng);
        let y = random::complex_matrix(n, n, &mut rng);
        let lhs = m.apply(&(x.scale(a) + y.scale(b))).unwrap();
        let rhs = m.apply(&x).unwrap().scale(a) + m.apply(&y).unwrap().scale(b);
        prop_assert!((lhs - rhs).norm() < 1e-10);
    }

    #[test]
    fn reconstruction_holds_on_hermitian_inputs(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = random::seeded(seed);
        let s = split(&random::tp_map(n, &mut rng), &tol()).unwrap();
        let h = random::hermitian(n, &mut rng);
        for variant in [Variant::Literal, Variant::Symmetric] {
            let r = reconstruct(&s, &h, variant).unwrap();
            prop_assert!(r.residual <= 1e-9 * h.norm().max(1.0));
        }
    }

    #[test]
    fn positive_and_negative_parts_are_cp(seed in any::<u64>(), n in 2usize..=4) {
        let mut rng = random::seeded(seed);
        let s = split(&random::tp_map(n, &mut rng), &tol()).unwrap();
        for part in [&s.lambda_plus, &s.lambda_minus] {
            let min = common::hermitian_eigenvalues(part.choi()).last().copied().unwrap();
            prop_assert!(min >= -1e-10);
        }
        prop_assert!(s.l_plus() + s.l_minus() <= n * n);
    }
}
