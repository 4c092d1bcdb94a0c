//! Randomized search for alternative tripartite decompositions.
//!
//! Each trial starts a local residual descent from a seeded random direction
//! on the Bloch sphere of subsystem 0. A descent that reaches a product
//! conditional either lands on a canonical branch direction (modulo phase)
//! or exhibits a genuine alternative decomposition; a descent stuck above
//! tolerance is a failure. Zero alternatives over all trials certifies the
//! decomposition unique at the tested resolution.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::decomp::pencil::ConditionalPencil;
use crate::decomp::tridecomp::{refine_direction, TriDecomposition};
use crate::error::{Error, Result};
use crate::linalg::{vec_inner, vec_normalize};
use crate::states::bloch_vector;
use crate::tensor::PureState;
use crate::tolerances::{MATCH_FIDELITY_TOL, NOT_FOUND_FACTOR, SCAN_GRID_DEG};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TrialOutcome {
    ConvergedToCanonical,
    FailedToConverge,
    AlternativeFound,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UniquenessReport {
    pub trials: usize,
    pub seed: u64,
    pub tol: f64,
    pub converged_to_canonical: usize,
    pub failed_to_converge: usize,
    pub alternatives_found: usize,
    /// Up to ten alternative directions (θ°, φ°, residual).
    pub alternative_examples: Vec<(f64, f64, f64)>,
    /// True when no trial produced a decomposition direction off the
    /// canonical set.
    pub certified_unique: bool,
}

/// Canonical probe for branch `n`: the direction orthogonal to every other
/// system-family vector (for orthonormal families this is sₙ itself).
fn canonical_probes(canonical: &TriDecomposition) -> Result<Vec<Vec<Complex64>>> {
    let n = canonical.branches();
    if canonical.dims()[0] != 2 {
        return Err(Error::DimensionMismatch(
            "uniqueness search needs dims[0] = 2".into(),
        ));
    }
    if n == 1 {
        return Ok(vec![canonical.s_vecs[0].clone()]);
    }
    if n != 2 {
        return Err(Error::BranchCountUnsupported(n));
    }
    let perp = |v: &[Complex64]| -> Vec<Complex64> { vec![-v[1].conj(), v[0].conj()] };
    Ok(vec![
        vec_normalize(&perp(&canonical.s_vecs[1]))?,
        vec_normalize(&perp(&canonical.s_vecs[0]))?,
    ])
}

pub fn verify_uniqueness(
    state: &PureState,
    canonical: &TriDecomposition,
    trials: usize,
    seed: u64,
    tol: f64,
) -> Result<UniquenessReport> {
    let canonical_residual = canonical.residual_against(state);
    if canonical_residual > NOT_FOUND_FACTOR * tol {
        return Err(Error::InvalidCanonical {
            residual: canonical_residual,
        });
    }
    let probes = canonical_probes(canonical)?;
    let pencil = ConditionalPencil::new(state, 0)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    let mut report = UniquenessReport {
        trials,
        seed,
        tol,
        converged_to_canonical: 0,
        failed_to_converge: 0,
        alternatives_found: 0,
        alternative_examples: Vec::new(),
        certified_unique: true,
    };
    let step0 = SCAN_GRID_DEG.to_radians();
    for _ in 0..trials {
        let z: f64 = 1.0 - 2.0 * rng.gen::<f64>();
        let theta0 = z.clamp(-1.0, 1.0).acos();
        let phi0 = rng.gen::<f64>() * std::f64::consts::TAU;
        let (theta, phi, residual) = refine_direction(&pencil, theta0, phi0, step0);
        if residual > tol {
            report.failed_to_converge += 1;
            continue;
        }
        let found = bloch_vector(theta, phi);
        let matches_canonical = probes
            .iter()
            .any(|p| vec_inner(p, &found).norm() >= 1.0 - MATCH_FIDELITY_TOL);
        if matches_canonical {
            report.converged_to_canonical += 1;
        } else {
            report.alternatives_found += 1;
            report.certified_unique = false;
            if report.alternative_examples.len() < 10 {
                report
                    .alternative_examples
                    .push((theta.to_degrees(), phi.to_degrees(), residual));
            }
        }
    }
    Ok(report)
}
