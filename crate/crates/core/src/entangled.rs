//! Entangled initial conditions.
//!
//! A linear extension map that is positive cannot send a mixed reduced state
//! to an entangled pure joint state: positivity would split the pure target
//! into a convex mixture of images of the eigenprojectors, and a pure state
//! admits no such splitting. [`extension_witness`] records that argument for
//! a concrete state.
//!
//! [`induced_dynamics`] goes the other way and extracts the subsystem map
//! induced by a joint unitary acting on a correlated initial state. The
//! result is trace preserving and Hermiticity preserving but in general not
//! completely positive.

use crate::error::{Error, Result};
use crate::linalg::{self, c64, kron, CMatrix, CVector, Subsystem, Tolerance};
use crate::map::{DensityMatrix, LinearMap};

/// Pure state on system ⊗ environment, system factor first.
#[derive(Debug, Clone, PartialEq)]
pub struct JointPureState {
    dims: (usize, usize),
    amplitudes: CVector,
}

impl JointPureState {
    pub fn new(dims: (usize, usize), amplitudes: CVector, tol: &Tolerance) -> Result<Self> {
        let (ns, ne) = dims;
        if ns == 0 || ne == 0 {
            return Err(Error::DimensionMismatch("joint dimensions must be positive".into()));
        }
        if amplitudes.len() != ns * ne {
            return Err(Error::DimensionMismatch(format!(
                "{ns}x{ne} joint state needs {} amplitudes, got {}",
                ns * ne,
                amplitudes.len()
            )));
        }
        if amplitudes.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::NonFinite);
        }
        let residual = (amplitudes.norm() - 1.0).abs();
        if residual > tol.residual_abs {
            return Err(Error::InvalidArgument(format!(
                "joint amplitudes must have unit norm (off by {residual:e})"
            )));
        }
        Ok(Self { dims, amplitudes })
    }

    /// `|a⟩ ⊗ |b⟩`.
    pub fn product(a: &CVector, b: &CVector, tol: &Tolerance) -> Result<Self> {
        let amps = CVector::from_fn(a.len() * b.len(), |k, _| a[k / b.len()] * b[k % b.len()]);
        Self::new((a.len(), b.len()), amps, tol)
    }

    /// `(|00⟩ + |11⟩)/√2`.
    pub fn bell() -> Self {
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let amps = CVector::from_vec(vec![c64(h, 0.0), linalg::ZERO, linalg::ZERO, c64(h, 0.0)]);
        Self { dims: (2, 2), amplitudes: amps }
    }

    pub fn dims(&self) -> (usize, usize) {
        self.dims
    }

    pub fn amplitudes(&self) -> &CVector {
        &self.amplitudes
    }

    pub fn projector(&self) -> CMatrix {
        linalg::outer(&self.amplitudes, &self.amplitudes)
    }

    pub fn system_state(&self) -> CMatrix {
        linalg::partial_trace(&self.projector(), self.dims, Subsystem::Second)
            .expect("dims match by construction")
    }

    pub fn environment_state(&self) -> CMatrix {
        linalg::partial_trace(&self.projector(), self.dims, Subsystem::First)
            .expect("dims match by construction")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WitnessVerdict {
    PositiveExtensionImpossible,
    ProductState,
}

/// One term of the reduced state's spectral decomposition, with the distance
/// between the full reduced state and that term's projector.
#[derive(Debug, Clone, PartialEq)]
pub struct ContradictionTerm {
    pub weight: f64,
    pub eigenvector: CVector,
    /// `‖ρ − |φ⟩⟨φ|‖_F`; nonzero means a positive extension would have to map
    /// `|φ⟩⟨φ|` to the joint state while its ancilla trace differs from `ρ`.
    pub distance: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WitnessCertificate {
    pub reduced_state: DensityMatrix,
    pub purity: f64,
    pub schmidt_rank: usize,
    pub verdict: WitnessVerdict,
    /// Reduced-state eigenvalues, descending.
    pub weights: Vec<f64>,
    /// Empty for product states.
    pub contradiction: Vec<ContradictionTerm>,
}

/// Checks whether a positive linear extension map can produce `phi` from its
/// own system reduction.
pub fn extension_witness(phi: &JointPureState, tol: &Tolerance) -> Result<WitnessCertificate> {
    let rho = linalg::hermitian_part(&phi.system_state());
    let eig = linalg::hermitian_eig(&rho, tol)?;
    let threshold = tol.zero_threshold(&eig.values);
    let schmidt_rank = eig.values.iter().filter(|&&v| v > threshold).count();
    let purity = eig.values.iter().map(|v| v * v).sum();
    let verdict = if schmidt_rank >= 2 {
        WitnessVerdict::PositiveExtensionImpossible
    } else {
        WitnessVerdict::ProductState
    };
    let contradiction = match verdict {
        WitnessVerdict::ProductState => Vec::new(),
        WitnessVerdict::PositiveExtensionImpossible => (0..schmidt_rank)
            .map(|i| {
                let v = eig.vector(i);
                ContradictionTerm {
                    weight: eig.values[i],
                    distance: (&rho - linalg::outer(&v, &v)).norm(),
                    eigenvector: v,
                }
            })
            .collect(),
    };
    Ok(WitnessCertificate {
        reduced_state: DensityMatrix::new(rho, tol)?,
        purity,
        schmidt_rank,
        verdict,
        weights: eig.values.clone(),
        contradiction,
    })
}

/// Subsystem dynamics `σ ↦ linear_part(σ) + Tr(σ)·constant_part` induced by
/// a joint unitary on a correlated initial state.
#[derive(Debug, Clone, PartialEq)]
pub struct AffineDynamics {
    pub linear_part: LinearMap,
    pub constant_part: CMatrix,
    pub tp_linear_form: LinearMap,
    /// `‖tp_linear_form(ρ_s) − Tr_e[u |Φ⟩⟨Φ| u†]‖_F`.
    pub consistency_residual: f64,
}

/// Splits the joint state as `ρ_s ⊗ ρ_e + χ`, holds `χ` fixed and evolves
/// with `u`: `linear_part(σ) = Tr_e[u (σ ⊗ ρ_e) u†]`,
/// `constant_part = Tr_e[u χ u†]`.
pub fn induced_dynamics(phi: &JointPureState, u: &CMatrix, tol: &Tolerance) -> Result<AffineDynamics> {
    let (ns, ne) = phi.dims();
    let total = ns * ne;
    if u.nrows() != total || u.ncols() != total {
        return Err(Error::DimensionMismatch(format!(
            "joint unitary must be {total}x{total}, got {}x{}",
            u.nrows(),
            u.ncols()
        )));
    }
    linalg::check_finite(u)?;
    let residual = linalg::unitarity_residual(u);
    if residual > tol.residual_abs {
        return Err(Error::NotUnitary { residual });
    }

    let joint = phi.projector();
    let rho_s = phi.system_state();
    let rho_e = phi.environment_state();
    let chi = &joint - kron(&rho_s, &rho_e);
    let evolve_reduce = |x: &CMatrix| {
        linalg::partial_trace(&(u * x * u.adjoint()), (ns, ne), Subsystem::Second)
            .expect("dims checked")
    };

    let linear_part = LinearMap::from_action(ns, |s| evolve_reduce(&kron(s, &rho_e)));
    let constant_part = evolve_reduce(&chi);
    let tp_linear_form = LinearMap::from_action(ns, |s| {
        linear_part.apply(s).expect("dims checked") + &constant_part * linalg::trace(s)
    });
    let target = evolve_reduce(&joint);
    let consistency_residual = (tp_linear_form.apply(&rho_s)? - target).norm();
    Ok(AffineDynamics {
        linear_part,
        constant_part,
        tp_linear_form,
        consistency_residual,
    })
}

/// Qubit map `ρ ↦ (1 − p)·Tr(ρ) I/2 + p·ρᵀ`. Completely positive exactly for
/// `p ≤ 1/3`; its Choi spectrum is `(1 + p)/2` (threefold) and `(1 − 3p)/2`.
pub fn ncp_family(p: f64) -> Result<LinearMap> {
    if !(0.0..=1.0).contains(&p) {
        return Err(Error::InvalidArgument(format!("mixing weight must lie in [0, 1], got {p}")));
    }
    Ok(LinearMap::from_action(2, |x| {
        linalg::identity(2) * (linalg::trace(x) * c64((1.0 - p) / 2.0, 0.0)) + x.transpose().scale(p)
    }))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::channels;
    use crate::extension::{reconstruct, Variant};
    use crate::map::{check_cp, check_tp};
    use crate::random;
    use crate::split::split;

    fn tol() -> Tolerance {
        Tolerance::default()
    }

    fn ket(bits: &[f64]) -> CVector {
        CVector::from_iterator(bits.len(), bits.iter().map(|&b| c64(b, 0.0)))
    }

    fn random_joint(dims: (usize, usize), rng: &mut rand_chacha::ChaCha8Rng) -> JointPureState {
        JointPureState::new(dims, random::pure_state(dims.0 * dims.1, rng), &tol()).unwrap()
    }

    #[test]
    fn bell_witness() {
        let cert = extension_witness(&JointPureState::bell(), &tol()).unwrap();
        assert!((cert.reduced_state.matrix() - linalg::identity(2).scale(0.5)).norm() < 1e-15);
        assert!((cert.purity - 0.5).abs() < 1e-15);
        assert_eq!(cert.schmidt_rank, 2);
        assert_eq!(cert.verdict, WitnessVerdict::PositiveExtensionImpossible);
        assert_eq!(cert.contradiction.len(), 2);
        for term in &cert.contradiction {
            assert!((term.weight - 0.5).abs() < 1e-15);
            assert!((term.distance - 0.5_f64.sqrt()).abs() < 1e-14);
        }
    }

    #[test]
    fn product_witness() {
        let zero = ket(&[1.0, 0.0]);
        let phi = JointPureState::product(&zero, &zero, &tol()).unwrap();
        let cert = extension_witness(&phi, &tol()).unwrap();
        assert!((cert.purity - 1.0).abs() < 1e-15);
        assert_eq!(cert.schmidt_rank, 1);
        assert_eq!(cert.verdict, WitnessVerdict::ProductState);
        assert!(cert.contradiction.is_empty());
    }

    #[test]
    fn partially_entangled_witness() {
        let amps = ket(&[0.9_f64.sqrt(), 0.0, 0.0, 0.1_f64.sqrt()]);
        let phi = JointPureState::new((2, 2), amps, &tol()).unwrap();
        let cert = extension_witness(&phi, &tol()).unwrap();
        assert!((cert.purity - 0.82).abs() < 1e-12);
        assert_eq!(cert.schmidt_rank, 2);
        assert_eq!(cert.verdict, WitnessVerdict::PositiveExtensionImpossible);
    }

    #[test]
    fn unnormalized_state_is_rejected() {
        assert!(JointPureState::new((2, 2), ket(&[1.0, 1.0, 0.0, 0.0]), &tol()).is_err());
        assert!(JointPureState::new((2, 2), ket(&[1.0, 0.0]), &tol()).is_err());
    }

    #[test]
    fn witness_dichotomy_on_random_states() {
        let mut rng = random::seeded(11);
        for i in 0..100 {
            let phi = if i % 4 == 0 {
                let a = random::pure_state(2, &mut rng);
                let b = random::pure_state(3, &mut rng);
                JointPureState::product(&a, &b, &tol()).unwrap()
            } else {
                random_joint((2, 3), &mut rng)
            };
            let cert = extension_witness(&phi, &tol()).unwrap();
            let entangled = cert.purity < 1.0 - 1e-10;
            assert_eq!(entangled, cert.verdict == WitnessVerdict::PositiveExtensionImpossible);
        }
    }

    #[test]
    fn product_state_induces_cptp() {
        let mut rng = random::seeded(5);
        for _ in 0..10 {
            let a = random::pure_state(2, &mut rng);
            let b = random::pure_state(2, &mut rng);
            let phi = JointPureState::product(&a, &b, &tol()).unwrap();
            let u = random::unitary(4, &mut rng);
            let dynamics = induced_dynamics(&phi, &u, &tol()).unwrap();
            assert!(dynamics.constant_part.norm() < 1e-12);
            let cp = check_cp(&dynamics.tp_linear_form, &tol()).unwrap();
            assert!(cp.holds && cp.min_eigenvalue >= -1e-10);
        }
    }

    #[test]
    fn bell_without_evolution() {
        let dynamics = induced_dynamics(&JointPureState::bell(), &linalg::identity(4), &tol()).unwrap();
        let half = linalg::identity(2).scale(0.5);
        let out = dynamics.tp_linear_form.apply(&half).unwrap();
        assert!((out - half).norm() < 1e-15);
        assert!(dynamics.consistency_residual < 1e-15);
    }

    // SWAP carries the environment's maximally mixed marginal into the
    // system and leaves no correlation term behind, so the induced map is
    // the completely depolarizing channel with B-form Choi I/2.
    #[test]
    fn bell_with_swap_is_depolarizing() {
        let dynamics = induced_dynamics(&JointPureState::bell(), &channels::swap(2), &tol()).unwrap();
        assert!(dynamics.constant_part.norm() < 1e-15);
        let cp = check_cp(&dynamics.tp_linear_form, &tol()).unwrap();
        assert!(cp.holds);
        assert!((cp.min_eigenvalue - 0.5).abs() < 1e-15);
        let expected = channels::depolarizing(2, 1.0).unwrap();
        assert!((dynamics.tp_linear_form.choi() - expected.choi()).norm() < 1e-15);
    }

    #[test]
    fn bell_with_cnot_is_not_cp() {
        let dynamics = induced_dynamics(&JointPureState::bell(), &channels::cnot(), &tol()).unwrap();
        assert!(check_tp(&dynamics.tp_linear_form, &tol()).holds);
        let cp = check_cp(&dynamics.tp_linear_form, &tol()).unwrap();
        assert!(!cp.holds);
        assert!((cp.min_eigenvalue - (1.0 - 2.0_f64.sqrt()) / 2.0).abs() < 1e-12);
    }

    #[test]
    fn non_unitary_is_rejected() {
        let u = linalg::identity(4).scale(2.0);
        assert!(matches!(
            induced_dynamics(&JointPureState::bell(), &u, &tol()),
            Err(Error::NotUnitary { .. })
        ));
    }

    #[test]
    fn consistency_and_tracelessness_on_random_pairs() {
        let mut rng = random::seeded(21);
        for dims in [(2, 2), (2, 3)] {
            for _ in 0..50 {
                let phi = random_joint(dims, &mut rng);
                let u = random::unitary(dims.0 * dims.1, &mut rng);
                let d = induced_dynamics(&phi, &u, &tol()).unwrap();
                assert!(d.consistency_residual <= 1e-9);
                assert!(linalg::trace(&d.constant_part).norm() <= 1e-9);
                assert!(check_tp(&d.tp_linear_form, &tol()).holds);
            }
        }
    }

    #[test]
    fn entangled_ncp_maps_reconstruct() {
        let mut rng = random::seeded(23);
        let mut ncp = 0;
        for _ in 0..30 {
            let phi = random_joint((2, 2), &mut rng);
            let u = random::unitary(4, &mut rng);
            let d = induced_dynamics(&phi, &u, &tol()).unwrap();
            if check_cp(&d.tp_linear_form, &tol()).unwrap().holds {
                continue;
            }
            ncp += 1;
            let s = split(&d.tp_linear_form, &tol()).unwrap();
            for _ in 0..5 {
                let rho = random::density_matrix(2, &mut rng);
                for variant in [Variant::Literal, Variant::Symmetric] {
                    assert!(reconstruct(&s, &rho, variant).unwrap().residual <= 1e-9);
                }
            }
        }
        assert!(ncp > 0);
    }

    #[test]
    fn ncp_family_endpoints() {
        let p0 = check_cp(&ncp_family(0.0).unwrap(), &tol()).unwrap();
        assert!(p0.holds);
        let p1 = check_cp(&ncp_family(1.0).unwrap(), &tol()).unwrap();
        assert!(!p1.holds);
        assert!((p1.min_eigenvalue + 1.0).abs() < 1e-12);
        let half = check_cp(&ncp_family(0.5).unwrap(), &tol()).unwrap();
        assert!(!half.holds);
        assert!((half.min_eigenvalue + 0.25).abs() < 1e-12);
        assert!(ncp_family(1.5).is_err());
    }

    #[test]
    fn ncp_family_is_tp_and_monotone() {
        let mut last = f64::INFINITY;
        for i in 0..=20 {
            let p = i as f64 / 20.0;
            let map = ncp_family(p).unwrap();
            assert!(check_tp(&map, &tol()).residual <= 1e-9);
            let min = check_cp(&map, &tol()).unwrap().min_eigenvalue;
            assert!(min <= last + 1e-12);
            last = min;
        }
    }
}
