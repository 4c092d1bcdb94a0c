//! Multipartite pure states, dense operators, and the contractions between
//! them.
//!
//! Subsystem indexing is row-major throughout the crate: for dims
//! `[d₀, d₁, …]` the flat amplitude index of `(i₀, i₁, …)` is
//! `i₀·d₁·d₂·… + i₁·d₂·… + …`. Every module shares this convention.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{vec_inner, vec_norm, CMatrix, ONE, ZERO};
use crate::tolerances::{HERMITICITY_TOL, NORM_TOL, PROJECTOR_TOL, UNITARITY_TOL};

/// A normalized pure state on a tensor product of finite subsystems.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: Vec<usize>,
    amps: Vec<Complex64>,
}

impl PureState {
    /// Validates lengths and normalization (|⟨ψ|ψ⟩ − 1| ≤ [`NORM_TOL`]).
    pub fn new(dims: Vec<usize>, amps: Vec<Complex64>) -> Result<Self> {
        if dims.is_empty() || dims.iter().any(|&d| d < 2) {
            return Err(Error::DimensionMismatch(format!(
                "subsystem dims must all be ≥ 2, got {dims:?}"
            )));
        }
        let total: usize = dims.iter().product();
        if amps.len() != total {
            return Err(Error::DimensionMismatch(format!(
                "amplitude count {} does not match ∏dims = {}",
                amps.len(),
                total
            )));
        }
        let norm = vec_norm(&amps);
        if (norm * norm - 1.0).abs() > NORM_TOL {
            return Err(Error::DimensionMismatch(format!(
                "state is not normalized: ⟨ψ|ψ⟩ = {:.12}",
                norm * norm
            )));
        }
        Ok(PureState { dims, amps })
    }

    /// No validation; for internal intermediates (branch terms, projected
    /// pieces) that are not themselves normalized states.
    pub(crate) fn raw(dims: Vec<usize>, amps: Vec<Complex64>) -> Self {
        PureState { dims, amps }
    }

    /// Rescales to unit norm before validating; errors on the zero vector.
    pub fn normalized(dims: Vec<usize>, amps: Vec<Complex64>) -> Result<Self> {
        let norm = vec_norm(&amps);
        if norm < 1e-300 {
            return Err(Error::ZeroVector);
        }
        let scaled = amps.iter().map(|z| z / norm).collect();
        PureState::new(dims, scaled)
    }

    /// |i₀ i₁ …⟩
    pub fn basis_state(dims: Vec<usize>, indices: &[usize]) -> Result<Self> {
        if indices.len() != dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "need {} indices, got {}",
                dims.len(),
                indices.len()
            )));
        }
        let mut flat = 0usize;
        for (k, (&i, &d)) in indices.iter().zip(&dims).enumerate() {
            if i >= d {
                return Err(Error::IndexOutOfRange {
                    index: k,
                    count: dims.len(),
                });
            }
            flat = flat * d + i;
        }
        let total: usize = dims.iter().product();
        let mut amps = vec![ZERO; total];
        amps[flat] = ONE;
        PureState::new(dims, amps)
    }

    /// Single-subsystem state from raw amplitudes.
    pub fn from_vector(amps: &[Complex64]) -> Result<Self> {
        PureState::new(vec![amps.len()], amps.to_vec())
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn amps(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn subsystems(&self) -> usize {
        self.dims.len()
    }

    pub fn total_dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.amps)
    }

    /// ⟨self|other⟩
    pub fn overlap(&self, other: &PureState) -> Result<Complex64> {
        if self.dims != other.dims {
            return Err(Error::DimensionMismatch(format!(
                "dims {:?} vs {:?}",
                self.dims, other.dims
            )));
        }
        Ok(vec_inner(&self.amps, &other.amps))
    }

    /// min over global phase of ‖ψ − e^{iθ}φ‖.
    pub fn distance_up_to_phase(&self, other: &PureState) -> f64 {
        crate::linalg::phase_invariant_distance(&self.amps, &other.amps)
    }

    /// Tensor product; dims concatenate, row-major index composes.
    pub fn tensor_product(&self, other: &PureState) -> PureState {
        let mut dims = self.dims.clone();
        dims.extend_from_slice(&other.dims);
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        PureState { dims, amps }
    }

    fn strides(&self) -> Vec<usize> {
        let mut s = vec![1usize; self.dims.len()];
        for k in (0..self.dims.len().saturating_sub(1)).rev() {
            s[k] = s[k + 1] * self.dims[k + 1];
        }
        s
    }

    fn check_targets(&self, targets: &[usize]) -> Result<()> {
        for &t in targets {
            if t >= self.dims.len() {
                return Err(Error::IndexOutOfRange {
                    index: t,
                    count: self.dims.len(),
                });
            }
        }
        for (i, &t) in targets.iter().enumerate() {
            if targets[..i].contains(&t) {
                return Err(Error::DimensionMismatch(format!(
                    "duplicate target subsystem {t}"
                )));
            }
        }
        Ok(())
    }

    /// Applies an arbitrary square matrix to the listed target subsystems
    /// (row-major composite index over `targets` in the order given).
    /// No unitarity is assumed; the result is not renormalized.
    pub fn apply_matrix(&self, m: &CMatrix, targets: &[usize]) -> Result<Vec<Complex64>> {
        self.check_targets(targets)?;
        let target_dim: usize = targets.iter().map(|&t| self.dims[t]).product();
        if m.rows() != target_dim || m.cols() != target_dim {
            return Err(Error::DimensionMismatch(format!(
                "operator is {}×{}, targets span dimension {}",
                m.rows(),
                m.cols(),
                target_dim
            )));
        }
        let strides = self.strides();
        let t_strides: Vec<usize> = targets.iter().map(|&t| strides[t]).collect();
        let t_dims: Vec<usize> = targets.iter().map(|&t| self.dims[t]).collect();
        let rest: Vec<usize> = (0..self.dims.len()).filter(|k| !targets.contains(k)).collect();
        let rest_dims: Vec<usize> = rest.iter().map(|&k| self.dims[k]).collect();
        let rest_strides: Vec<usize> = rest.iter().map(|&k| strides[k]).collect();
        let rest_total: usize = rest_dims.iter().product();

        // Flat offsets of every target multi-index, row-major over `targets`.
        let mut offsets = vec![0usize; target_dim];
        for (flat, off) in offsets.iter_mut().enumerate() {
            let mut rem = flat;
            let mut acc = 0usize;
            for (k, &d) in t_dims.iter().enumerate().rev() {
                acc += (rem % d) * t_strides[k];
                rem /= d;
            }
            *off = acc;
        }

        let diag = m.diagonal_entries();
        let mut out = vec![ZERO; self.amps.len()];
        let mut fiber = vec![ZERO; target_dim];
        for rest_flat in 0..rest_total {
            let mut rem = rest_flat;
            let mut base = 0usize;
            for (k, &d) in rest_dims.iter().enumerate().rev() {
                base += (rem % d) * rest_strides[k];
                rem /= d;
            }
            if let Some(diag) = &diag {
                for (d_entry, &off) in diag.iter().zip(&offsets) {
                    out[base + off] = self.amps[base + off] * d_entry;
                }
                continue;
            }
            for (f, &off) in fiber.iter_mut().zip(&offsets) {
                *f = self.amps[base + off];
            }
            let mapped = m.mul_vec(&fiber);
            for (v, &off) in mapped.iter().zip(&offsets) {
                out[base + off] = *v;
            }
        }
        Ok(out)
    }

    /// Applies a unitary operator to the target subsystems.
    pub fn apply_unitary(&self, u: &DenseOperator, targets: &[usize]) -> Result<PureState> {
        if u.kind() != OperatorKind::Unitary {
            let residual = u.matrix().unitarity_residual();
            if residual > UNITARITY_TOL {
                return Err(Error::NonUnitary { residual });
            }
        }
        let amps = self.apply_matrix(u.matrix(), targets)?;
        let state = PureState {
            dims: self.dims.clone(),
            amps,
        };
        let drift = (state.norm() - 1.0).abs();
        if drift > NORM_TOL {
            return Err(Error::NonUnitary { residual: drift });
        }
        Ok(state)
    }

    /// Reshapes the amplitudes into a (∏dims[left]) × (∏dims[rest]) matrix.
    /// Rows run over `left` in the order given, columns over the remaining
    /// subsystems in their original order.
    pub fn matricize(&self, left: &[usize]) -> Result<CMatrix> {
        self.check_targets(left)?;
        if left.is_empty() || left.len() >= self.dims.len() {
            return Err(Error::DimensionMismatch(format!(
                "left must be a proper nonempty subset, got {left:?} of {} subsystems",
                self.dims.len()
            )));
        }
        let strides = self.strides();
        let rest: Vec<usize> = (0..self.dims.len()).filter(|k| !left.contains(k)).collect();
        let row_offsets = flat_offsets(left, &self.dims, &strides);
        let col_offsets = flat_offsets(&rest, &self.dims, &strides);
        let mut m = CMatrix::zeros(row_offsets.len(), col_offsets.len());
        for (i, &ro) in row_offsets.iter().enumerate() {
            for (j, &co) in col_offsets.iter().enumerate() {
                m[(i, j)] = self.amps[ro + co];
            }
        }
        Ok(m)
    }

    /// Inverse of [`matricize`]: rebuilds a state from a matrix laid out the
    /// same way. Exact (no arithmetic beyond copying).
    pub fn from_matricized(dims: Vec<usize>, left: &[usize], m: &CMatrix) -> Result<PureState> {
        let probe = PureState {
            dims: dims.clone(),
            amps: vec![ZERO; dims.iter().product()],
        };
        probe.check_targets(left)?;
        let strides = probe.strides();
        let rest: Vec<usize> = (0..dims.len()).filter(|k| !left.contains(k)).collect();
        let row_offsets = flat_offsets(left, &dims, &strides);
        let col_offsets = flat_offsets(&rest, &dims, &strides);
        if m.rows() != row_offsets.len() || m.cols() != col_offsets.len() {
            return Err(Error::DimensionMismatch(format!(
                "matrix is {}×{}, expected {}×{}",
                m.rows(),
                m.cols(),
                row_offsets.len(),
                col_offsets.len()
            )));
        }
        let mut amps = vec![ZERO; dims.iter().product()];
        for (i, &ro) in row_offsets.iter().enumerate() {
            for (j, &co) in col_offsets.iter().enumerate() {
                amps[ro + co] = m[(i, j)];
            }
        }
        PureState::new(dims, amps)
    }

    /// Reduced density matrix on the `keep` subsystems (in the order given).
    pub fn partial_trace(&self, keep: &[usize]) -> Result<DensityMatrix> {
        self.check_targets(keep)?;
        if keep.is_empty() {
            return Err(Error::DimensionMismatch("keep must be nonempty".into()));
        }
        let m = if keep.len() == self.dims.len() {
            // Keeping everything: ρ = |ψ⟩⟨ψ| directly.
            let strides = self.strides();
            let offsets = flat_offsets(keep, &self.dims, &strides);
            let v: Vec<Complex64> = offsets.iter().map(|&o| self.amps[o]).collect();
            let n = v.len();
            CMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj())
        } else {
            let mat = self.matricize(keep)?;
            mat.mul(&mat.adjoint())
        };
        DensityMatrix::new(m)
    }

    /// Projects subsystem `sys` onto `probe` and returns the unnormalized
    /// vector on the remaining subsystems; its squared norm is the outcome
    /// probability.
    pub fn conditional_vector(&self, sys: usize, probe: &[Complex64]) -> Result<Vec<Complex64>> {
        if sys >= self.dims.len() {
            return Err(Error::IndexOutOfRange {
                index: sys,
                count: self.dims.len(),
            });
        }
        if probe.len() != self.dims[sys] {
            return Err(Error::DimensionMismatch(format!(
                "probe has dimension {}, subsystem {} has dimension {}",
                probe.len(),
                sys,
                self.dims[sys]
            )));
        }
        let norm = vec_norm(probe);
        if (norm - 1.0).abs() > NORM_TOL {
            return Err(Error::DimensionMismatch(format!(
                "probe is not normalized: ‖probe‖ = {norm:.12}"
            )));
        }
        let m = self.matricize(&[sys])?;
        let mut out = vec![ZERO; m.cols()];
        for (i, p) in probe.iter().enumerate() {
            let pc = p.conj();
            let row = m.row(i);
            for (o, r) in out.iter_mut().zip(row) {
                *o += pc * r;
            }
        }
        Ok(out)
    }
}

fn flat_offsets(subsystems: &[usize], dims: &[usize], strides: &[usize]) -> Vec<usize> {
    let sel_dims: Vec<usize> = subsystems.iter().map(|&k| dims[k]).collect();
    let sel_strides: Vec<usize> = subsystems.iter().map(|&k| strides[k]).collect();
    let total: usize = sel_dims.iter().product();
    let mut offsets = vec![0usize; total.max(1)];
    for (flat, off) in offsets.iter_mut().enumerate() {
        let mut rem = flat;
        let mut acc = 0usize;
        for (k, &d) in sel_dims.iter().enumerate().rev() {
            acc += (rem % d) * sel_strides[k];
            rem /= d;
        }
        *off = acc;
    }
    offsets
}

// ---------------------------------------------------------------------------
// operators
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorKind {
    General,
    Unitary,
    Hermitian,
    Projector,
}

/// A square operator with a validated kind tag.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseOperator {
    mat: CMatrix,
    kind: OperatorKind,
}

impl DenseOperator {
    pub fn new(mat: CMatrix, kind: OperatorKind) -> Result<Self> {
        if mat.rows() != mat.cols() {
            return Err(Error::DimensionMismatch(format!(
                "operator must be square, got {}×{}",
                mat.rows(),
                mat.cols()
            )));
        }
        match kind {
            OperatorKind::General => {}
            OperatorKind::Unitary => {
                let residual = mat.unitarity_residual();
                if residual > UNITARITY_TOL {
                    return Err(Error::NonUnitary { residual });
                }
            }
            OperatorKind::Hermitian => {
                let residual = mat.hermiticity_residual();
                if residual > HERMITICITY_TOL {
                    return Err(Error::NonHermitian { residual });
                }
            }
            OperatorKind::Projector => {
                let h = mat.hermiticity_residual();
                if h > HERMITICITY_TOL {
                    return Err(Error::NonHermitian { residual: h });
                }
                let residual = mat.mul(&mat).sub(&mat).frobenius_norm();
                if residual > PROJECTOR_TOL {
                    return Err(Error::NonProjector { residual });
                }
            }
        }
        Ok(DenseOperator { mat, kind })
    }

    pub fn unitary(mat: CMatrix) -> Result<Self> {
        DenseOperator::new(mat, OperatorKind::Unitary)
    }

    pub fn hermitian(mat: CMatrix) -> Result<Self> {
        DenseOperator::new(mat, OperatorKind::Hermitian)
    }

    pub fn projector(mat: CMatrix) -> Result<Self> {
        DenseOperator::new(mat, OperatorKind::Projector)
    }

    pub fn general(mat: CMatrix) -> Self {
        DenseOperator {
            mat,
            kind: OperatorKind::General,
        }
    }

    pub fn identity(dim: usize) -> Self {
        DenseOperator {
            mat: CMatrix::identity(dim),
            kind: OperatorKind::Unitary,
        }
    }

    /// |v⟩⟨v| for a unit vector.
    pub fn projector_onto(v: &[Complex64]) -> Result<Self> {
        let n = vec_norm(v);
        if (n - 1.0).abs() > NORM_TOL {
            return Err(Error::DimensionMismatch(format!(
                "projector vector not normalized: ‖v‖ = {n:.12}"
            )));
        }
        let dim = v.len();
        let mat = CMatrix::from_fn(dim, dim, |i, j| v[i] * v[j].conj());
        DenseOperator::new(mat, OperatorKind::Projector)
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn kind(&self) -> OperatorKind {
        self.kind
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }
}

/// Density matrix: hermitian, unit trace (positivity is checked on demand).
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    mat: CMatrix,
}

impl DensityMatrix {
    pub fn new(mat: CMatrix) -> Result<Self> {
        if mat.rows() != mat.cols() {
            return Err(Error::DimensionMismatch(format!(
                "density matrix must be square, got {}×{}",
                mat.rows(),
                mat.cols()
            )));
        }
        let h = mat.hermiticity_residual();
        if h > HERMITICITY_TOL {
            return Err(Error::NonHermitian { residual: h });
        }
        let tr = mat.trace();
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(Error::DimensionMismatch(format!(
                "density matrix trace is {tr}, expected 1"
            )));
        }
        Ok(DensityMatrix { mat })
    }

    pub fn from_pure(v: &[Complex64]) -> Result<Self> {
        let n = v.len();
        DensityMatrix::new(CMatrix::from_fn(n, n, |i, j| v[i] * v[j].conj()))
    }

    pub fn dim(&self) -> usize {
        self.mat.rows()
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.mat
    }

    /// Descending eigenvalues; also validates positivity to −[`NORM_TOL`].
    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        let e = crate::linalg::eig_hermitian(&self.mat)?;
        if let Some(min) = e.values.last() {
            if *min < -NORM_TOL {
                return Err(Error::DimensionMismatch(format!(
                    "density matrix has negative eigenvalue {min:.3e}"
                )));
            }
        }
        Ok(e.values)
    }

    /// ⟨v|ρ|v⟩ for a unit vector.
    pub fn fidelity_with_pure(&self, v: &[Complex64]) -> f64 {
        let rv = self.mat.mul_vec(v);
        vec_inner(v, &rv).re
    }

    /// Diagonal of ρ in the basis given by the columns of `basis`.
    pub fn diagonal_in_basis(&self, basis: &[Vec<Complex64>]) -> Vec<f64> {
        basis.iter().map(|b| self.fidelity_with_pure(b)).collect()
    }
}

/// A complete set of orthogonal projectors with real eigenvalues.
#[derive(Debug, Clone)]
pub struct Observable {
    eigenvalues: Vec<f64>,
    projectors: Vec<DenseOperator>,
}

impl Observable {
    pub fn new(eigenvalues: Vec<f64>, projectors: Vec<DenseOperator>) -> Result<Self> {
        if eigenvalues.len() != projectors.len() || projectors.is_empty() {
            return Err(Error::DimensionMismatch(format!(
                "{} eigenvalues vs {} projectors",
                eigenvalues.len(),
                projectors.len()
            )));
        }
        let dim = projectors[0].dim();
        let mut sum = CMatrix::zeros(dim, dim);
        for p in &projectors {
            if p.dim() != dim {
                return Err(Error::DimensionMismatch(
                    "projectors have mixed dimensions".into(),
                ));
            }
            if p.kind() != OperatorKind::Projector {
                let residual = p.matrix().mul(p.matrix()).sub(p.matrix()).frobenius_norm();
                if residual > PROJECTOR_TOL {
                    return Err(Error::NonProjector { residual });
                }
            }
            sum = sum.add(p.matrix());
        }
        let completeness = sum.sub(&CMatrix::identity(dim)).frobenius_norm();
        if completeness > PROJECTOR_TOL {
            return Err(Error::DimensionMismatch(format!(
                "projectors do not sum to identity (residual {completeness:.3e})"
            )));
        }
        for i in 0..projectors.len() {
            for j in (i + 1)..projectors.len() {
                let cross = projectors[i]
                    .matrix()
                    .mul(projectors[j].matrix())
                    .frobenius_norm();
                if cross > PROJECTOR_TOL {
                    return Err(Error::DimensionMismatch(format!(
                        "projectors {i} and {j} are not orthogonal (‖PᵢPⱼ‖ = {cross:.3e})"
                    )));
                }
            }
        }
        Ok(Observable {
            eigenvalues,
            projectors,
        })
    }

    /// Projectors onto the computational basis |n⟩⟨n|.
    pub fn computational(dim: usize, eigenvalues: Vec<f64>) -> Result<Self> {
        if eigenvalues.len() != dim {
            return Err(Error::DimensionMismatch(format!(
                "need {dim} eigenvalues, got {}",
                eigenvalues.len()
            )));
        }
        let projectors = (0..dim)
            .map(|n| {
                let mut v = vec![ZERO; dim];
                v[n] = ONE;
                DenseOperator::projector_onto(&v)
            })
            .collect::<Result<Vec<_>>>()?;
        Observable::new(eigenvalues, projectors)
    }

    /// Projectors onto the given orthonormal vectors.
    pub fn from_basis(vectors: &[Vec<Complex64>], eigenvalues: Vec<f64>) -> Result<Self> {
        let projectors = vectors
            .iter()
            .map(|v| DenseOperator::projector_onto(v))
            .collect::<Result<Vec<_>>>()?;
        Observable::new(eigenvalues, projectors)
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.projectors[0].dim()
    }

    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn projectors(&self) -> &[DenseOperator] {
        &self.projectors
    }

    /// Σ λₙ Pₙ as a dense hermitian operator.
    pub fn to_operator(&self) -> Result<DenseOperator> {
        let dim = self.dim();
        let mut m = CMatrix::zeros(dim, dim);
        for (lam, p) in self.eigenvalues.iter().zip(&self.projectors) {
            m = m.add(&p.matrix().scaled(Complex64::new(*lam, 0.0)));
        }
        DenseOperator::hermitian(m)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::states;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn tensor_product_basis_case() {
        // |0⟩ ⊗ |0⟩ = (1, 0, 0, 0)
        let zero = PureState::from_vector(&[ONE, ZERO]).unwrap();
        let prod = zero.tensor_product(&zero);
        assert_eq!(prod.dims(), &[2, 2]);
        assert_eq!(prod.amps()[0], ONE);
        for k in 1..4 {
            assert_eq!(prod.amps()[k], ZERO);
        }
    }

    #[test]
    fn tensor_product_superposition_times_basis() {
        // (|0⟩+|1⟩)/√2 ⊗ |1⟩ = (0, 1/√2, 0, 1/√2)
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let plus = PureState::from_vector(&[c(s, 0.0), c(s, 0.0)]).unwrap();
        let one = PureState::from_vector(&[ZERO, ONE]).unwrap();
        let prod = plus.tensor_product(&one);
        let expect = [0.0, s, 0.0, s];
        for (a, e) in prod.amps().iter().zip(expect) {
            assert!((a.re - e).abs() < 1e-15 && a.im.abs() < 1e-15);
        }
    }

    #[test]
    fn apply_identity_is_exact() {
        let bell = states::bell();
        let id = DenseOperator::identity(2);
        let out = bell.apply_unitary(&id, &[0]).unwrap();
        assert_eq!(out.amps(), bell.amps());
    }

    #[test]
    fn apply_bit_flip_on_first_subsystem() {
        // X on subsystem 0 of |00⟩ → |10⟩
        let s00 = PureState::basis_state(vec![2, 2], &[0, 0]).unwrap();
        let x = DenseOperator::unitary(CMatrix::from_rows(vec![
            vec![ZERO, ONE],
            vec![ONE, ZERO],
        ]))
        .unwrap();
        let out = s00.apply_unitary(&x, &[0]).unwrap();
        let expect = PureState::basis_state(vec![2, 2], &[1, 0]).unwrap();
        assert_eq!(out.amps(), expect.amps());
    }

    #[test]
    fn disjoint_unitaries_commute() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let amps = crate::linalg::random_unit_vector(12, &mut rng);
            let s = PureState::new(vec![2, 3, 2], amps).unwrap();
            let u = DenseOperator::unitary(crate::linalg::random_unitary(2, &mut rng)).unwrap();
            let v = DenseOperator::unitary(crate::linalg::random_unitary(3, &mut rng)).unwrap();
            let a = s.apply_unitary(&u, &[0]).unwrap().apply_unitary(&v, &[1]).unwrap();
            let b = s.apply_unitary(&v, &[1]).unwrap().apply_unitary(&u, &[0]).unwrap();
            let diff: f64 = a
                .amps()
                .iter()
                .zip(b.amps())
                .map(|(x, y)| (x - y).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(diff <= 1e-12);
        }
    }

    #[test]
    fn apply_unitary_rejects_bad_inputs() {
        let bell = states::bell();
        let id3 = DenseOperator::identity(3);
        assert!(matches!(
            bell.apply_unitary(&id3, &[0]),
            Err(Error::DimensionMismatch(_))
        ));
        let not_unitary = CMatrix::from_rows(vec![
            vec![c(2.0, 0.0), ZERO],
            vec![ZERO, ONE],
        ]);
        assert!(matches!(
            DenseOperator::unitary(not_unitary),
            Err(Error::NonUnitary { .. })
        ));
        assert!(matches!(
            bell.apply_unitary(&DenseOperator::identity(2), &[5]),
            Err(Error::IndexOutOfRange { .. })
        ));
    }

    #[test]
    fn partial_trace_product_state() {
        // |0⟩|1⟩ keep [0] → |0⟩⟨0|
        let s = PureState::basis_state(vec![2, 2], &[0, 1]).unwrap();
        let rho = s.partial_trace(&[0]).unwrap();
        assert!((rho.matrix()[(0, 0)].re - 1.0).abs() < 1e-14);
        assert!(rho.matrix()[(1, 1)].norm() < 1e-14);
        assert!(rho.matrix()[(0, 1)].norm() < 1e-14);
    }

    #[test]
    fn partial_trace_bell_is_maximally_mixed() {
        let rho = states::bell().partial_trace(&[0]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                let expect = if i == j { 0.5 } else { 0.0 };
                assert!((rho.matrix()[(i, j)].re - expect).abs() < 1e-12);
                assert!(rho.matrix()[(i, j)].im.abs() < 1e-12);
            }
        }
    }

    /// Independent contraction oracle: ρ[i,i'] = Σ_rest ψ(i,rest)·ψ*(i',rest)
    /// written with explicit index loops, no matricize involved.
    fn brute_force_partial_trace(s: &PureState, keep: &[usize]) -> CMatrix {
        let dims = s.dims();
        let n = dims.len();
        let total = s.total_dim();
        let keep_dim: usize = keep.iter().map(|&k| dims[k]).product();
        let mut rho = CMatrix::zeros(keep_dim, keep_dim);
        let decode = |mut flat: usize| -> Vec<usize> {
            let mut idx = vec![0usize; n];
            for k in (0..n).rev() {
                idx[k] = flat % dims[k];
                flat /= dims[k];
            }
            idx
        };
        let keep_flat = |idx: &[usize]| -> usize {
            let mut f = 0usize;
            for &k in keep {
                f = f * dims[k] + idx[k];
            }
            f
        };
        for a in 0..total {
            let ia = decode(a);
            'outer: for b in 0..total {
                let ib = decode(b);
                for k in 0..n {
                    if !keep.contains(&k) && ia[k] != ib[k] {
                        continue 'outer;
                    }
                }
                let r = keep_flat(&ia);
                let c = keep_flat(&ib);
                rho[(r, c)] += s.amps()[a] * s.amps()[b].conj();
            }
        }
        rho
    }

    #[test]
    fn partial_trace_ghz_keep_two_matches_oracle() {
        let ghz = states::ghz();
        let rho = ghz.partial_trace(&[0, 1]).unwrap();
        let oracle = brute_force_partial_trace(&ghz, &[0, 1]);
        assert!(rho.matrix().sub(&oracle).frobenius_norm() < 1e-12);
        // (|00⟩⟨00| + |11⟩⟨11|)/2
        assert!((rho.matrix()[(0, 0)].re - 0.5).abs() < 1e-12);
        assert!((rho.matrix()[(3, 3)].re - 0.5).abs() < 1e-12);
        assert!(rho.matrix()[(0, 3)].norm() < 1e-12);
    }

    #[test]
    fn partial_trace_random_states_match_oracle() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(17);
        for keep in [vec![0], vec![2], vec![1, 2], vec![2, 0]] {
            let amps = crate::linalg::random_unit_vector(12, &mut rng);
            let s = PureState::new(vec![2, 2, 3], amps).unwrap();
            let rho = s.partial_trace(&keep).unwrap();
            let oracle = brute_force_partial_trace(&s, &keep);
            assert!(rho.matrix().sub(&oracle).frobenius_norm() < 1e-12);
            assert!((rho.matrix().trace().re - 1.0).abs() < 1e-10);
        }
    }

    #[test]
    fn partial_trace_of_everything_is_projector() {
        let ghz = states::ghz();
        let rho = ghz.partial_trace(&[0, 1, 2]).unwrap();
        let expect = DensityMatrix::from_pure(ghz.amps()).unwrap();
        assert!(rho.matrix().sub(expect.matrix()).frobenius_norm() < 1e-12);
    }

    #[test]
    fn matricize_row_major_contract() {
        // dims [2,2], left=[0]: entry (i,j) = amps[2i+j]
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let amps = crate::linalg::random_unit_vector(4, &mut rng);
        let s = PureState::new(vec![2, 2], amps.clone()).unwrap();
        let m = s.matricize(&[0]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert_eq!(m[(i, j)], amps[2 * i + j]);
            }
        }
    }

    #[test]
    fn matricize_bell_is_diagonal() {
        let m = states::bell().matricize(&[0]).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        assert!((m[(0, 0)].re - s).abs() < 1e-15);
        assert!((m[(1, 1)].re - s).abs() < 1e-15);
        assert!(m[(0, 1)].norm() < 1e-15 && m[(1, 0)].norm() < 1e-15);
    }

    #[test]
    fn matricize_round_trip_exact() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(29);
        for left in [vec![0], vec![1], vec![2, 1], vec![0, 2]] {
            let amps = crate::linalg::random_unit_vector(24, &mut rng);
            let s = PureState::new(vec![2, 3, 4], amps).unwrap();
            let m = s.matricize(&left).unwrap();
            assert!((m.frobenius_norm() - 1.0).abs() < 1e-10);
            let back = PureState::from_matricized(vec![2, 3, 4], &left, &m).unwrap();
            assert_eq!(back.amps(), s.amps());
        }
    }

    #[test]
    fn conditional_vector_ghz() {
        let ghz = states::ghz();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        // probe |0⟩ → (1/√2)|00⟩
        let v = ghz.conditional_vector(0, &[ONE, ZERO]).unwrap();
        assert!((v[0].re - s).abs() < 1e-15);
        for k in 1..4 {
            assert!(v[k].norm() < 1e-15);
        }
        // probe |+⟩ → (1/2)(|00⟩+|11⟩), entangled conditional
        let plus = [c(s, 0.0), c(s, 0.0)];
        let v = ghz.conditional_vector(0, &plus).unwrap();
        assert!((v[0].re - 0.5).abs() < 1e-15);
        assert!((v[3].re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn conditional_vector_completeness() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(41);
        let amps = crate::linalg::random_unit_vector(8, &mut rng);
        let s = PureState::new(vec![2, 2, 2], amps).unwrap();
        let u = crate::linalg::random_unitary(2, &mut rng);
        let mut total = 0.0;
        for j in 0..2 {
            let probe = u.col(j);
            let v = s.conditional_vector(1, &probe).unwrap();
            total += vec_norm(&v).powi(2);
        }
        assert!((total - 1.0).abs() < 1e-10);
    }

    #[test]
    fn observable_validation() {
        let obs = Observable::computational(2, vec![1.0, -1.0]).unwrap();
        assert_eq!(obs.len(), 2);
        let op = obs.to_operator().unwrap();
        assert!((op.matrix()[(0, 0)].re - 1.0).abs() < 1e-15);
        assert!((op.matrix()[(1, 1)].re + 1.0).abs() < 1e-15);

        // Overlapping projectors must be rejected.
        let p0 = DenseOperator::projector_onto(&[ONE, ZERO]).unwrap();
        let bad = Observable::new(vec![1.0, 2.0], vec![p0.clone(), p0]);
        assert!(bad.is_err());
    }

    #[test]
    fn norm_preserved_over_many_applications() {
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(53);
        let amps = crate::linalg::random_unit_vector(8, &mut rng);
        let mut s = PureState::new(vec![2, 2, 2], amps).unwrap();
        for k in 0..1000 {
            let u = DenseOperator::unitary(crate::linalg::random_unitary(2, &mut rng)).unwrap();
            s = s.apply_unitary(&u, &[k % 3]).unwrap();
        }
        assert!((s.norm() - 1.0).abs() <= 1e-8);
    }
}
