//! Compressed evaluation of conditional-vector product residuals.
//!
//! For a tripartite state and a probed two-level subsystem, every conditional
//! vector is a combination conj(u₀)·M₀ + conj(u₁)·M₁ of the two matricized
//! slices. Both slices are projected onto orthonormal bases of their joint
//! column and row spaces once; after that each probe costs one tiny SVD
//! instead of one over the full apparatus×environment matrix. The projection
//! is exact up to the [`PENCIL_RANK_CUTOFF`] truncation.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{eig_hermitian, svd, CMatrix};
use crate::tensor::PureState;
use crate::tolerances::{CONDITIONAL_PROB_FLOOR, PENCIL_RANK_CUTOFF};

/// Probe outcome: conditional norm (√probability) and normalized second
/// singular value. Near-zero conditionals count as product.
#[derive(Debug, Clone, Copy)]
pub struct ProbeResidual {
    pub norm: f64,
    pub residual: f64,
}

#[derive(Debug, Clone)]
pub struct ConditionalPencil {
    m_small: [CMatrix; 2],
}

impl ConditionalPencil {
    /// `state` must have exactly three subsystems with dims[sys] = 2; the two
    /// remaining subsystems form the product-test bipartition.
    pub fn new(state: &PureState, sys: usize) -> Result<Self> {
        if state.subsystems() != 3 {
            return Err(Error::DimensionMismatch(format!(
                "conditional scan needs exactly 3 subsystems, state has {}",
                state.subsystems()
            )));
        }
        if sys >= 3 {
            return Err(Error::IndexOutOfRange {
                index: sys,
                count: 3,
            });
        }
        if state.dims()[sys] != 2 {
            return Err(Error::DimensionMismatch(format!(
                "probed subsystem must have dimension 2, got {}",
                state.dims()[sys]
            )));
        }
        let rest: Vec<usize> = (0..3).filter(|&k| k != sys).collect();
        let (d_a, d_e) = (state.dims()[rest[0]], state.dims()[rest[1]]);

        let c = state.matricize(&[sys])?;
        let slices: Vec<CMatrix> = (0..2)
            .map(|i| CMatrix::from_fn(d_a, d_e, |a, e| c[(i, a * d_e + e)]))
            .collect();

        // Compress the smaller side first via its Gram matrix, then the other
        // side through the stacked compressed slices.
        let (m0, m1) = if d_e <= d_a {
            let mut gram = slices[0].adjoint().mul(&slices[0]);
            gram = gram.add(&slices[1].adjoint().mul(&slices[1]));
            let w = range_basis(&gram)?; // d_e × r'
            let n0 = slices[0].mul(&w);
            let n1 = slices[1].mul(&w);
            let stacked = hcat(&n0, &n1);
            let q = column_basis(&stacked)?; // d_a × r
            (q.adjoint().mul(&n0), q.adjoint().mul(&n1))
        } else {
            let mut gram = slices[0].mul(&slices[0].adjoint());
            gram = gram.add(&slices[1].mul(&slices[1].adjoint()));
            let q = range_basis(&gram)?; // d_a × r
            let n0 = q.adjoint().mul(&slices[0]); // r × d_e
            let n1 = q.adjoint().mul(&slices[1]);
            let stacked = hcat(&n0.adjoint(), &n1.adjoint()); // d_e × 2r
            let w = column_basis(&stacked)?; // d_e × r'
            (n0.mul(&w), n1.mul(&w))
        };
        Ok(ConditionalPencil {
            m_small: [m0, m1],
        })
    }

    /// Conditional of the probe (conjugated against the state) in the small
    /// frame; singular values match the full conditional exactly.
    pub fn conditional_small(&self, probe: &[Complex64; 2]) -> CMatrix {
        self.m_small[0]
            .scaled(probe[0].conj())
            .add(&self.m_small[1].scaled(probe[1].conj()))
    }

    pub fn residual_for_probe(&self, probe: &[Complex64; 2]) -> ProbeResidual {
        let small = self.conditional_small(probe);
        let norm = small.frobenius_norm();
        if norm * norm < CONDITIONAL_PROB_FLOOR {
            return ProbeResidual {
                norm,
                residual: 0.0,
            };
        }
        let sv = match svd(&small) {
            Ok(s) => s.singular_values,
            Err(_) => return ProbeResidual { norm, residual: f64::INFINITY },
        };
        let residual = if sv.len() < 2 { 0.0 } else { sv[1] / norm };
        ProbeResidual { norm, residual }
    }

    /// Probe on the Bloch sphere, angles in radians.
    pub fn residual(&self, theta: f64, phi: f64) -> ProbeResidual {
        let probe = [
            Complex64::new((theta / 2.0).cos(), 0.0),
            Complex64::from_polar((theta / 2.0).sin(), phi),
        ];
        self.residual_for_probe(&probe)
    }
}

/// Orthonormal basis of the range of a PSD Gram matrix, eigenvalues above
/// `PENCIL_RANK_CUTOFF` relative to the largest.
fn range_basis(gram: &CMatrix) -> Result<CMatrix> {
    let e = eig_hermitian(gram)?;
    let lam_max = e.values.first().copied().unwrap_or(0.0).max(0.0);
    let keep: Vec<usize> = (0..e.values.len())
        .filter(|&j| e.values[j] > lam_max * PENCIL_RANK_CUTOFF && e.values[j] > 0.0)
        .collect();
    let n = gram.rows();
    let r = keep.len().max(1);
    let mut basis = CMatrix::zeros(n, r);
    if keep.is_empty() {
        basis[(0, 0)] = crate::linalg::ONE;
        return Ok(basis);
    }
    for (slot, &j) in keep.iter().enumerate() {
        basis.set_col(slot, &e.vectors.col(j));
    }
    Ok(basis)
}

/// Orthonormal basis of the column space of a (tall) stacked matrix, computed
/// through its small Gram matrix S†S.
fn column_basis(s: &CMatrix) -> Result<CMatrix> {
    let gram = s.adjoint().mul(s);
    let e = eig_hermitian(&gram)?;
    let lam_max = e.values.first().copied().unwrap_or(0.0).max(0.0);
    let keep: Vec<usize> = (0..e.values.len())
        .filter(|&j| e.values[j] > lam_max * PENCIL_RANK_CUTOFF && e.values[j] > 0.0)
        .collect();
    let rows = s.rows();
    let r = keep.len().max(1);
    let mut basis = CMatrix::zeros(rows, r);
    if keep.is_empty() {
        basis[(0, 0)] = crate::linalg::ONE;
        return Ok(basis);
    }
    for (slot, &j) in keep.iter().enumerate() {
        let y = e.vectors.col(j);
        let v = s.mul_vec(&y);
        let scale = 1.0 / e.values[j].sqrt();
        let col: Vec<Complex64> = v.iter().map(|z| z * scale).collect();
        basis.set_col(slot, &col);
    }
    Ok(basis)
}

fn hcat(a: &CMatrix, b: &CMatrix) -> CMatrix {
    assert_eq!(a.rows(), b.rows());
    CMatrix::from_fn(a.rows(), a.cols() + b.cols(), |i, j| {
        if j < a.cols() {
            a[(i, j)]
        } else {
            b[(i, j - a.cols())]
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::vec_norm;
    use crate::states;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    /// The compressed residual must agree with the residual computed from the
    /// full conditional vector.
    #[test]
    fn compressed_matches_direct() {
        let mut rng = ChaCha8Rng::seed_from_u64(4);
        for dims in [vec![2, 2, 2], vec![2, 3, 4], vec![2, 5, 3]] {
            let amps = crate::linalg::random_unit_vector(dims.iter().product(), &mut rng);
            let s = PureState::new(dims.clone(), amps).unwrap();
            let pencil = ConditionalPencil::new(&s, 0).unwrap();
            for _ in 0..10 {
                let theta = rng.gen::<f64>() * std::f64::consts::PI;
                let phi = rng.gen::<f64>() * std::f64::consts::TAU;
                let fast = pencil.residual(theta, phi);
                let probe = crate::states::bloch_vector(theta, phi);
                let cond = s.conditional_vector(0, &probe).unwrap();
                let norm = vec_norm(&cond);
                let (_, direct) =
                    crate::decomp::is_product(&cond, (dims[1], dims[2]), 1e-7).unwrap();
                assert!((fast.norm - norm).abs() < 1e-12);
                assert!((fast.residual - direct).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn ghz_poles_are_product() {
        let pencil = ConditionalPencil::new(&states::ghz(), 0).unwrap();
        assert!(pencil.residual(0.0, 0.0).residual < 1e-13);
        assert!(pencil.residual(std::f64::consts::PI, 0.0).residual < 1e-13);
        // Equator conditional is a Bell pair: residual 1/√2.
        let eq = pencil.residual(std::f64::consts::FRAC_PI_2, 0.0);
        assert!((eq.residual - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
    }
}
