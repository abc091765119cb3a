//! Library spectra checked against the Jacobi oracle.

mod common;

use common::{hermitian_eigenvalues, max_abs_diff};
use extmaps::entangled::{induced_dynamics, ncp_family, JointPureState};
use extmaps::map::choi_spectrum;
use extmaps::{channels, linalg, random, split, Tolerance};

fn tol() -> Tolerance {
    Tolerance::default()
}

#[test]
fn swap_eigensystem() {
    let oracle = hermitian_eigenvalues(&channels::swap(2));
    assert!(max_abs_diff(&oracle, &[1.0, 1.0, 1.0, -1.0]) < 1e-12);
    let lib = choi_spectrum(&channels::transpose(2), &tol()).unwrap();
    assert!(max_abs_diff(&lib, &oracle) < 1e-10);
}

#[test]
fn transpose_choi_is_swap() {
    for n in 2..=4 {
        let t = channels::transpose(n);
        assert!((t.choi() - channels::swap(n)).norm() < 1e-15);
        let lib = choi_spectrum(&t, &tol()).unwrap();
        let oracle = hermitian_eigenvalues(t.choi());
        assert!(max_abs_diff(&lib, &oracle) < 1e-10);
    }
}

#[test]
fn hermitian_eig_matches_oracle() {
    let mut rng = random::seeded(100);
    for n in 1..=8 {
        for _ in 0..5 {
            let h = random::hermitian(n, &mut rng);
            let lib = linalg::hermitian_eig(&h, &tol()).unwrap();
            assert!(max_abs_diff(&lib.values, &hermitian_eigenvalues(&h)) < 1e-10);
        }
    }
}

#[test]
fn random_map_choi_spectra_match_oracle() {
    let mut rng = random::seeded(101);
    for n in 2..=4 {
        for _ in 0..5 {
            let m = random::tp_map(n, &mut rng);
            let s = split::split(&m, &tol()).unwrap();
            let oracle = hermitian_eigenvalues(m.choi());
            assert!(max_abs_diff(&s.choi_eigenvalues, &oracle) < 1e-10);
        }
    }
}

#[test]
fn ncp_family_half_regression() {
    let m = ncp_family(0.5).unwrap();
    let oracle = hermitian_eigenvalues(m.choi());
    assert!(max_abs_diff(&oracle, &[0.75, 0.75, 0.75, -0.25]) < 1e-12);
}

#[test]
fn amplitude_damping_spectrum() {
    let gamma = 0.3;
    let m = channels::amplitude_damping(gamma).unwrap();
    let oracle = hermitian_eigenvalues(m.choi());
    assert!(max_abs_diff(&oracle, &[2.0 - gamma, gamma, 0.0, 0.0]) < 1e-12);
}

#[test]
fn bell_swap_oracle_value() {
    let d = induced_dynamics(&JointPureState::bell(), &channels::swap(2), &tol()).unwrap();
    let oracle = hermitian_eigenvalues(d.tp_linear_form.choi());
    assert!(max_abs_diff(&oracle, &[0.5; 4]) < 1e-12);
}

#[test]
fn bell_cnot_oracle_value() {
    let d = induced_dynamics(&JointPureState::bell(), &channels::cnot(), &tol()).unwrap();
    let oracle = hermitian_eigenvalues(d.tp_linear_form.choi());
    let min = *oracle.last().unwrap();
    assert!((min - (1.0 - 2.0_f64.sqrt()) / 2.0).abs() < 1e-12);
}
