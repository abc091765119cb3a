use extmaps::dilation::{dilate_map, dilation_round_trip};
use extmaps::entangled::{extension_witness, induced_dynamics, JointPureState, WitnessVerdict};
use extmaps::extension::{self, dimension_report, omega_choi_report, Variant};
use extmaps::map::{check_cp, check_hermiticity_preserving, check_tp};
use extmaps::split::{split, tp_structure_residual, verify_annihilation, CpSplit};
use extmaps::{linalg, random, LinearMap, Tolerance};
use sha2::{Digest, Sha256};

use crate::input::{self, Document, JointDocument, Payload, ToleranceOverrides};
use crate::report::{self, Real};
use crate::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Decompose { seed: Option<u64> },
    Verify { samples: usize, seed: Option<u64> },
    Dilate { samples: usize, seed: Option<u64> },
    Witness,
    Extract,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Self::Decompose { .. } => "decompose",
            Self::Verify { .. } => "verify",
            Self::Dilate { .. } => "dilate",
            Self::Witness => "witness",
            Self::Extract => "extract",
        }
    }

    fn seed_flag(self) -> Option<u64> {
        match self {
            Self::Decompose { seed } | Self::Verify { seed, .. } | Self::Dilate { seed, .. } => seed,
            Self::Witness | Self::Extract => None,
        }
    }
}

#[derive(Debug, Clone, Copy)]
pub struct Settings {
    pub command: Command,
    pub tolerance: ToleranceOverrides,
    pub variant: Variant,
}

/// A finished run: the report (absent when the input was rejected) and the
/// exit code, with a diagnostic for nonzero codes.
#[derive(Debug)]
pub struct Outcome {
    pub report: Option<report::Report>,
    pub exit_code: i32,
    pub diagnostic: Option<String>,
}

impl Outcome {
    fn failed(e: CliError) -> Self {
        Self {
            report: None,
            exit_code: e.exit_code(),
            diagnostic: Some(e.to_string()),
        }
    }
}

pub fn run(settings: &Settings, label: &str, bytes: &[u8]) -> Outcome {
    match run_inner(settings, label, bytes) {
        Ok(outcome) => outcome,
        Err(e) => Outcome::failed(e),
    }
}

fn run_inner(settings: &Settings, label: &str, bytes: &[u8]) -> Result<Outcome, CliError> {
    let doc = input::parse(bytes)?;
    let tol = settings.tolerance.or(doc.tolerance).resolve()?;
    let command = settings.command;
    let seed = command.seed_flag().or(doc.seed).unwrap_or(0);
    let mut out = report::Report {
        tool: "extmaps",
        version: env!("CARGO_PKG_VERSION"),
        command: command.name(),
        input: label.to_string(),
        input_digest: format!("sha256:{}", hex::encode(Sha256::digest(bytes))),
        seed: uses_seed(command).then_some(seed),
        tolerance: report::ToleranceReport {
            zero_eig_rel: Real(tol.zero_eig_rel),
            residual_abs: Real(tol.residual_abs),
        },
        variant: settings.variant.to_string(),
        decomposition: None,
        verification: None,
        dilation: None,
        witness: None,
        extraction: None,
        extracted_map: None,
    };

    let mut failure = None;
    match command {
        Command::Decompose { .. } => {
            let map = map_payload(&doc, command)?;
            out.decomposition = Some(decompose(map, &tol, seed, settings.variant)?.0);
        }
        Command::Verify { samples, .. } => {
            let map = map_payload(&doc, command)?;
            let (decomposition, parts) = decompose(map, &tol, seed, settings.variant)?;
            let verification = verify(&parts, samples, seed, settings.variant, &tol)?;
            if !verification.passed {
                failure = Some(format!(
                    "reconstruction residual {:e} exceeds {:e}",
                    verification.max_reconstruction_residual.0, tol.residual_abs
                ));
            }
            out.decomposition = Some(decomposition);
            out.verification = Some(verification);
        }
        Command::Dilate { samples, .. } => {
            let map = map_payload(&doc, command)?;
            let dilation = dilate(map, samples, seed, &tol)?;
            if !dilation.passed {
                failure = Some(format!(
                    "dilation round trip residual {:e}, unitarity residual {:e}",
                    dilation.round_trip_residual.0, dilation.unitarity_residual.0
                ));
            }
            out.dilation = Some(dilation);
        }
        Command::Witness => {
            let joint = joint_payload(&doc, command)?;
            out.witness = Some(witness(&joint_state(joint, &tol)?, &tol)?);
        }
        Command::Extract => {
            let joint = joint_payload(&doc, command)?;
            let state = joint_state(joint, &tol)?;
            let unitary = joint.unitary.as_ref().ok_or_else(|| {
                CliError::Input("$.unitary: missing (extract needs the joint unitary)".into())
            })?;
            let dynamics = induced_dynamics(&state, unitary, &tol).map_err(CliError::from_core)?;
            let map = &dynamics.tp_linear_form;
            let tp = check_tp(map, &tol);
            let cp = check_cp(map, &tol).map_err(CliError::from_core)?;
            if dynamics.consistency_residual > tol.residual_abs {
                failure = Some(format!(
                    "extracted map misses the joint trajectory by {:e}",
                    dynamics.consistency_residual
                ));
            }
            out.witness = Some(witness(&state, &tol)?);
            out.extraction = Some(report::Extraction {
                linear_part: report::matrix(dynamics.linear_part.choi()),
                constant_part: report::matrix(&dynamics.constant_part),
                constant_trace: {
                    let t = linalg::trace(&dynamics.constant_part);
                    [Real(t.re), Real(t.im)]
                },
                consistency_residual: Real(dynamics.consistency_residual),
                is_tp: report::Check {
                    holds: tp.holds,
                    residual: Real(tp.residual),
                },
                is_cp: report::CpCheck {
                    holds: cp.holds,
                    min_choi_eigenvalue: Real(cp.min_eigenvalue),
                },
            });
            out.extracted_map = Some(report::SuperopDocument {
                kind: "superop_b",
                dim: map.dim(),
                data: report::matrix(map.choi()),
            });
        }
    }

    Ok(Outcome {
        report: Some(out),
        exit_code: if failure.is_some() { 3 } else { 0 },
        diagnostic: failure.map(|m| format!("verification failed: {m}")),
    })
}

fn uses_seed(command: Command) -> bool {
    !matches!(command, Command::Witness | Command::Extract)
}

fn map_payload(doc: &Document, command: Command) -> Result<&LinearMap, CliError> {
    match &doc.payload {
        Payload::Map(m) => Ok(&m.map),
        Payload::Joint(_) => Err(CliError::Input(format!(
            "$.kind: {} needs a map document (kraus, choi, superop_a or superop_b), got joint_dynamics",
            command.name()
        ))),
    }
}

fn joint_payload(doc: &Document, command: Command) -> Result<&JointDocument, CliError> {
    match &doc.payload {
        Payload::Joint(j) => Ok(j),
        Payload::Map(m) => Err(CliError::Input(format!(
            "$.kind: {} needs a joint_dynamics document, got {}",
            command.name(),
            m.kind.as_str()
        ))),
    }
}

fn joint_state(joint: &JointDocument, tol: &Tolerance) -> Result<JointPureState, CliError> {
    JointPureState::new(joint.dims, joint.state.clone(), tol)
        .map_err(|e| CliError::Input(format!("$.state: {e}")))
}

fn decompose(
    map: &LinearMap,
    tol: &Tolerance,
    seed: u64,
    variant: Variant,
) -> Result<(report::Decomposition, CpSplit), CliError> {
    let parts = split(map, tol).map_err(CliError::from_core)?;
    let tp = check_tp(map, tol);
    let hp = check_hermiticity_preserving(map, tol);
    let cp = check_cp(map, tol).map_err(CliError::from_core)?;
    let dims = dimension_report(&parts);
    let annihilation = verify_annihilation(&parts, 20, seed);
    let omega = omega_choi_report(&parts).map_err(CliError::from_core)?;
    let reconstruction_residual = match variant {
        Variant::Literal => omega.literal.reconstruction_residual,
        Variant::Symmetric => omega.symmetric.reconstruction_residual,
    };
    let decomposition = report::Decomposition {
        dim: parts.dim,
        verdicts: report::Verdicts {
            is_tp: report::Check {
                holds: tp.holds,
                residual: Real(tp.residual),
            },
            is_hp: report::Check {
                holds: hp.holds,
                residual: Real(hp.residual),
            },
            is_cp: report::CpCheck {
                holds: cp.holds,
                min_choi_eigenvalue: Real(cp.min_eigenvalue),
            },
        },
        choi_eigenvalues: report::reals(&parts.choi_eigenvalues),
        j_matrix: report::matrix(&parts.j),
        k_matrix: report::matrix(&parts.k),
        j_min_eig: Real(parts.j_min_eigenvalue()),
        k_rank: parts.k_rank(),
        l_plus: dims.l_plus,
        l_minus: dims.l_minus,
        extension_dim: dims.extension_dim,
        dilation_dim: dims.dilation_dim,
        tp_structure_residual: Real(tp_structure_residual(&parts)),
        reconstruction_residual: Real(reconstruction_residual),
        annihilation_residuals: report::Annihilation {
            kernel_dim: annihilation.kernel_dim,
            kernel_diagonal: Real(annihilation.kernel_diagonal),
            kernel_cross: Real(annihilation.kernel_cross),
            eigenmatrix_kernel: Real(annihilation.eigenmatrix_kernel),
            support_projection: Real(annihilation.support_projection),
            max: Real(annihilation.max_residual()),
        },
        omega: report::Omega {
            literal: omega_variant(&omega.literal),
            symmetric: omega_variant(&omega.symmetric),
        },
    };
    Ok((decomposition, parts))
}

fn omega_variant(r: &extension::OmegaVariantReport) -> report::OmegaVariant {
    report::OmegaVariant {
        sector_dim: r.sector_dim,
        choi_hermiticity_residual: Real(r.choi_hermiticity_residual),
        min_choi_eigenvalue: r.min_choi_eigenvalue.map(Real),
        completely_positive: r.completely_positive,
        plus_trace_residual: Real(r.plus_trace_residual),
        minus_trace_residual: r.minus_trace_residual.map(Real),
        extension_residual: Real(r.extension_residual),
        reconstruction_residual: Real(r.reconstruction_residual),
    }
}

fn verify(
    parts: &CpSplit,
    samples: usize,
    seed: u64,
    variant: Variant,
    tol: &Tolerance,
) -> Result<report::Verification, CliError> {
    let mut rng = random::seeded(seed);
    let mut max_reconstruction = 0.0_f64;
    let mut max_extension = 0.0_f64;
    for _ in 0..samples {
        let rho = random::density_matrix(parts.dim, &mut rng);
        let r = extension::reconstruct(parts, &rho, variant).map_err(CliError::from_core)?;
        max_reconstruction = max_reconstruction.max(r.residual);
        let e = extension::extension_residual(parts, &rho, variant).map_err(CliError::from_core)?;
        max_extension = max_extension.max(e);
    }
    Ok(report::Verification {
        samples,
        seed,
        max_reconstruction_residual: Real(max_reconstruction),
        max_extension_residual: Real(max_extension),
        passed: max_reconstruction <= tol.residual_abs,
    })
}

fn dilate(map: &LinearMap, samples: usize, seed: u64, tol: &Tolerance) -> Result<report::Dilation, CliError> {
    let dilation = dilate_map(map, tol).map_err(CliError::from_core)?;
    let trip = dilation_round_trip(&dilation, map, samples, seed, tol).map_err(CliError::from_core)?;
    Ok(report::Dilation {
        system_dim: dilation.system_dim,
        ancilla_dim: dilation.ancilla_dim,
        ancilla_ref_index: dilation.ancilla_ref_index,
        unitary: report::matrix(&dilation.unitary),
        unitarity_residual: Real(trip.unitarity_residual),
        round_trip_samples: samples,
        round_trip_residual: Real(trip.max_residual),
        passed: trip.passed && trip.unitarity_residual <= tol.residual_abs,
    })
}

fn witness(state: &JointPureState, tol: &Tolerance) -> Result<report::Witness, CliError> {
    let cert = extension_witness(state, tol).map_err(CliError::from_core)?;
    let (ns, ne) = state.dims();
    Ok(report::Witness {
        dims: [ns, ne],
        reduced_state: report::matrix(cert.reduced_state.matrix()),
        purity: Real(cert.purity),
        schmidt_rank: cert.schmidt_rank,
        verdict: match cert.verdict {
            WitnessVerdict::PositiveExtensionImpossible => "PositiveExtensionImpossible",
            WitnessVerdict::ProductState => "ProductState",
        },
        weights: report::reals(&cert.weights),
        contradiction: cert
            .contradiction
            .iter()
            .map(|t| report::ContradictionTerm {
                weight: Real(t.weight),
                eigenvector: report::vector(&t.eigenvector),
                distance: Real(t.distance),
            })
            .collect(),
    })
}
