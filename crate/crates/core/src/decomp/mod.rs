//! Biorthogonal (Schmidt) decompositions, alternatives in degenerate
//! spectra, product tests, and the tripartite uniqueness machinery.

mod pencil;
mod scan;
mod tridecomp;
mod uniqueness;

pub use pencil::ConditionalPencil;
pub use scan::{scan_product_conditioning, ScanCluster, ScanHit, ScanResult};
pub use tridecomp::{find_tridecomposition, FamilyReport, TriDecomposition, TriOutcome};
pub use uniqueness::{verify_uniqueness, TrialOutcome, UniquenessReport};

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{svd, CMatrix, ZERO};
use crate::tensor::{DenseOperator, PureState};
use crate::tolerances::DEGENERACY_REL_GAP;

/// A bipartite expansion Σₙ cₙ |uₙ⟩|vₙ⟩ with orthonormal families and
/// non-negative coefficients sorted descending.
#[derive(Debug, Clone)]
pub struct SchmidtDecomposition {
    dims: Vec<usize>,
    left: Vec<usize>,
    coeffs: Vec<f64>,
    left_basis: Vec<Vec<Complex64>>,
    right_basis: Vec<Vec<Complex64>>,
    degeneracy_groups: Vec<Vec<usize>>,
}

impl SchmidtDecomposition {
    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn left_basis(&self) -> &[Vec<Complex64>] {
        &self.left_basis
    }

    pub fn right_basis(&self) -> &[Vec<Complex64>] {
        &self.right_basis
    }

    /// Indices grouped by coefficient degeneracy (relative gap below
    /// [`DEGENERACY_REL_GAP`]), in descending coefficient order.
    pub fn degeneracy_groups(&self) -> &[Vec<usize>] {
        &self.degeneracy_groups
    }

    pub fn left_subsystems(&self) -> &[usize] {
        &self.left
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    /// Σₙ cₙ |uₙ⟩|vₙ⟩ assembled back into the original subsystem layout.
    pub fn reconstruct(&self) -> Result<PureState> {
        let rows = self.left_basis.first().map(|v| v.len()).unwrap_or(0);
        let cols = self.right_basis.first().map(|v| v.len()).unwrap_or(0);
        let mut m = CMatrix::zeros(rows, cols);
        for ((c, u), v) in self
            .coeffs
            .iter()
            .zip(&self.left_basis)
            .zip(&self.right_basis)
        {
            for i in 0..rows {
                let cu = Complex64::new(*c, 0.0) * u[i];
                for j in 0..cols {
                    m[(i, j)] += cu * v[j];
                }
            }
        }
        PureState::from_matricized(self.dims.clone(), &self.left, &m)
    }

    /// 2-norm of (reconstruction − state).
    pub fn reconstruction_residual(&self, state: &PureState) -> Result<f64> {
        let rebuilt = self.reconstruct()?;
        let diff: f64 = rebuilt
            .amps()
            .iter()
            .zip(state.amps())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        Ok(diff.sqrt())
    }
}

/// Groups descending values by relative gap.
pub(crate) fn degeneracy_groups_of(values: &[f64]) -> Vec<Vec<usize>> {
    let mut groups: Vec<Vec<usize>> = Vec::new();
    for i in 0..values.len() {
        let joins_previous = if i == 0 {
            false
        } else {
            let hi = values[i - 1];
            if hi <= f64::MIN_POSITIVE {
                true // zeros group together
            } else {
                (hi - values[i]) / hi < DEGENERACY_REL_GAP
            }
        };
        if joins_previous {
            groups.last_mut().unwrap().push(i);
        } else {
            groups.push(vec![i]);
        }
    }
    groups
}

/// Biorthogonal decomposition across the bipartition `left` | rest.
/// Coefficients are the singular values of the matricized state.
pub fn schmidt(state: &PureState, left: &[usize]) -> Result<SchmidtDecomposition> {
    let m = state.matricize(left)?;
    let s = svd(&m)?;
    let n = s.singular_values.len();
    let left_basis: Vec<Vec<Complex64>> = (0..n).map(|j| s.u.col(j)).collect();
    let right_basis: Vec<Vec<Complex64>> = (0..n).map(|j| s.vt.row(j).to_vec()).collect();
    let degeneracy_groups = degeneracy_groups_of(&s.singular_values);
    Ok(SchmidtDecomposition {
        dims: state.dims().to_vec(),
        left: left.to_vec(),
        coeffs: s.singular_values,
        left_basis,
        right_basis,
        degeneracy_groups,
    })
}

/// Rewrites a decomposition by rotating `indices` of the left family with a
/// unitary and the right family with its conjugate. Valid only inside one
/// degeneracy group: Σₙ c|u'ₙ⟩|v'ₙ⟩ = Σₙ c|uₙ⟩|vₙ⟩ needs equal cₙ.
pub fn degenerate_alternatives(
    sd: &SchmidtDecomposition,
    indices: &[usize],
    rotation: &DenseOperator,
) -> Result<SchmidtDecomposition> {
    if indices.is_empty() {
        return Err(Error::DimensionMismatch("empty index set".into()));
    }
    for &i in indices {
        if i >= sd.coeffs.len() {
            return Err(Error::IndexOutOfRange {
                index: i,
                count: sd.coeffs.len(),
            });
        }
    }
    let group = sd
        .degeneracy_groups
        .iter()
        .find(|g| g.contains(&indices[0]))
        .expect("every index belongs to a group");
    for &i in indices {
        if !group.contains(&i) {
            return Err(Error::NotDegenerate(format!(
                "coefficients {:.6e} and {:.6e} are distinct",
                sd.coeffs[indices[0]], sd.coeffs[i]
            )));
        }
    }
    if rotation.dim() != indices.len() {
        return Err(Error::DimensionMismatch(format!(
            "rotation is {}×{dim}, index set has {} entries",
            rotation.dim(),
            indices.len(),
            dim = rotation.dim()
        )));
    }
    let r = rotation.matrix();
    let residual = r.unitarity_residual();
    if residual > crate::tolerances::UNITARITY_TOL {
        return Err(Error::NonUnitary { residual });
    }

    let mut left_basis = sd.left_basis.clone();
    let mut right_basis = sd.right_basis.clone();
    let ldim = sd.left_basis[0].len();
    let rdim = sd.right_basis[0].len();
    for (jj, &out_idx) in indices.iter().enumerate() {
        let mut new_l = vec![ZERO; ldim];
        let mut new_r = vec![ZERO; rdim];
        for (kk, &in_idx) in indices.iter().enumerate() {
            let w = r[(kk, jj)];
            for (dst, src) in new_l.iter_mut().zip(&sd.left_basis[in_idx]) {
                *dst += w * src;
            }
            let wc = w.conj();
            for (dst, src) in new_r.iter_mut().zip(&sd.right_basis[in_idx]) {
                *dst += wc * src;
            }
        }
        left_basis[out_idx] = new_l;
        right_basis[out_idx] = new_r;
    }
    Ok(SchmidtDecomposition {
        dims: sd.dims.clone(),
        left: sd.left.clone(),
        coeffs: sd.coeffs.clone(),
        left_basis,
        right_basis,
        degeneracy_groups: sd.degeneracy_groups.clone(),
    })
}

/// Schmidt-rank-1 test across the (d₁, d₂) split of `v`. Returns the verdict
/// and the residual (second singular value over the vector norm).
pub fn is_product(v: &[Complex64], split: (usize, usize), tol: f64) -> Result<(bool, f64)> {
    let (d1, d2) = split;
    if d1 * d2 != v.len() {
        return Err(Error::DimensionMismatch(format!(
            "split {d1}×{d2} does not match vector length {}",
            v.len()
        )));
    }
    let norm = crate::linalg::vec_norm(v);
    if norm < 1e-150 {
        return Err(Error::ZeroVector);
    }
    let m = CMatrix::from_fn(d1, d2, |i, j| v[i * d2 + j]);
    let s = svd(&m)?;
    let residual = if s.singular_values.len() < 2 {
        0.0
    } else {
        s.singular_values[1] / norm
    };
    Ok((residual <= tol, residual))
}
