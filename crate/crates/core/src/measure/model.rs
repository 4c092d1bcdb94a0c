//! Branch-structured measurement interactions.
//!
//! A model is a complete set of system branch projectors with one unitary
//! kick per branch on the change-carrying subsystem and one on the apparatus
//! subsystem. The assembled operator Σₙ Pₙ⊗Uₙ⊗Vₙ is unitary whenever the
//! projectors are complete and every kick is unitary.

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::tensor::{DenseOperator, Observable, PureState};
use crate::tolerances::UNITARITY_TOL;

#[derive(Debug, Clone)]
pub struct MeasurementModel {
    branch_projectors: Observable,
    /// Kicks on the change-carrying subsystem; absent for the two-subsystem
    /// premeasurement case.
    p_kicks: Option<Vec<DenseOperator>>,
    a_kicks: Vec<DenseOperator>,
}

fn validate_kicks(kicks: &[DenseOperator]) -> Result<()> {
    for k in kicks {
        let residual = k.matrix().unitarity_residual();
        if residual > UNITARITY_TOL {
            return Err(Error::NonUnitaryKick { residual });
        }
    }
    let dim = kicks[0].dim();
    if kicks.iter().any(|k| k.dim() != dim) {
        return Err(Error::DimensionMismatch(
            "branch kicks have mixed dimensions".into(),
        ));
    }
    Ok(())
}

impl MeasurementModel {
    /// Ideal premeasurement |sₙ⟩|a₀⟩ → |sₙ⟩|aₙ⟩ with cyclic-shift pointer
    /// states, so ⟨aₘ|aₙ⟩ = δₘₙ. Branch 0 leaves the apparatus untouched.
    pub fn premeasurement(n_branches: usize, apparatus_dim: usize) -> Result<Self> {
        if apparatus_dim < n_branches {
            return Err(Error::DimensionTooSmall {
                dim: apparatus_dim,
                branches: n_branches,
            });
        }
        let branch_projectors =
            Observable::computational(n_branches, (0..n_branches).map(|n| n as f64).collect())?;
        let a_kicks = (0..n_branches)
            .map(|n| {
                let shift = CMatrix::from_fn(apparatus_dim, apparatus_dim, |i, j| {
                    if i == (j + n) % apparatus_dim {
                        crate::linalg::ONE
                    } else {
                        crate::linalg::ZERO
                    }
                });
                DenseOperator::unitary(shift)
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(MeasurementModel {
            branch_projectors,
            p_kicks: None,
            a_kicks,
        })
    }

    /// Three-degree-of-freedom interaction: per-branch kicks on both the
    /// change-carrying subsystem and the apparatus.
    pub fn three_dof(
        branch_projectors: Observable,
        p_kicks: Vec<DenseOperator>,
        a_kicks: Vec<DenseOperator>,
    ) -> Result<Self> {
        let n = branch_projectors.len();
        if p_kicks.len() != n || a_kicks.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "{n} projectors vs {} p-kicks and {} a-kicks",
                p_kicks.len(),
                a_kicks.len()
            )));
        }
        validate_kicks(&p_kicks)?;
        validate_kicks(&a_kicks)?;
        Ok(MeasurementModel {
            branch_projectors,
            p_kicks: Some(p_kicks),
            a_kicks,
        })
    }

    pub fn branches(&self) -> usize {
        self.branch_projectors.len()
    }

    pub fn branch_projectors(&self) -> &Observable {
        &self.branch_projectors
    }

    pub fn p_kicks(&self) -> Option<&[DenseOperator]> {
        self.p_kicks.as_deref()
    }

    pub fn a_kicks(&self) -> &[DenseOperator] {
        &self.a_kicks
    }

    /// Applies the interaction: Σₙ (Pₙ on `sys`) ⊗ (p-kick on `p`) ⊗
    /// (a-kick on `a`). `p` must be given exactly when the model carries
    /// p-kicks.
    pub fn apply(
        &self,
        state: &PureState,
        sys: usize,
        p: Option<usize>,
        a: usize,
    ) -> Result<PureState> {
        match (&self.p_kicks, p) {
            (Some(_), None) => {
                return Err(Error::DimensionMismatch(
                    "model has p-kicks but no change-carrying subsystem was given".into(),
                ))
            }
            (None, Some(_)) => {
                return Err(Error::DimensionMismatch(
                    "model has no p-kicks but a change-carrying subsystem was given".into(),
                ))
            }
            _ => {}
        }
        let mut total = vec![crate::linalg::ZERO; state.total_dim()];
        for n in 0..self.branches() {
            let projected =
                state.apply_matrix(self.branch_projectors.projectors()[n].matrix(), &[sys])?;
            let projected = PureState::raw(state.dims().to_vec(), projected);
            let after_p = match (&self.p_kicks, p) {
                (Some(kicks), Some(p_idx)) => {
                    let amps = projected.apply_matrix(kicks[n].matrix(), &[p_idx])?;
                    PureState::raw(state.dims().to_vec(), amps)
                }
                _ => projected,
            };
            let amps = after_p.apply_matrix(self.a_kicks[n].matrix(), &[a])?;
            for (t, v) in total.iter_mut().zip(&amps) {
                *t += v;
            }
        }
        PureState::new(state.dims().to_vec(), total)
    }

    /// Dense Σₙ Pₙ⊗Uₙ⊗Vₙ, validated unitary. Intended for small dimensions.
    pub fn assemble_dense(&self) -> Result<DenseOperator> {
        let d_s = self.branch_projectors.dim();
        let d_p = self.p_kicks.as_ref().map(|k| k[0].dim()).unwrap_or(1);
        let d_a = self.a_kicks[0].dim();
        let total_dim = d_s * d_p * d_a;
        let mut total = CMatrix::zeros(total_dim, total_dim);
        for n in 0..self.branches() {
            let mut term = self.branch_projectors.projectors()[n].matrix().clone();
            if let Some(kicks) = &self.p_kicks {
                term = term.kron(kicks[n].matrix());
            }
            term = term.kron(self.a_kicks[n].matrix());
            total = total.add(&term);
        }
        DenseOperator::unitary(total)
    }
}

/// Ideal premeasurement constructor (two-subsystem model).
pub fn build_premeasurement(n_branches: usize, apparatus_dim: usize) -> Result<MeasurementModel> {
    MeasurementModel::premeasurement(n_branches, apparatus_dim)
}

/// Three-degree-of-freedom interaction constructor.
pub fn build_three_dof(
    branch_projectors: Observable,
    p_kicks: Vec<DenseOperator>,
    a_kicks: Vec<DenseOperator>,
) -> Result<MeasurementModel> {
    MeasurementModel::three_dof(branch_projectors, p_kicks, a_kicks)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{vec_inner, ONE, ZERO};
    use crate::measure::grid::momentum_boost;
    use num_complex::Complex64;
    use std::f64::consts::FRAC_1_SQRT_2;

    #[test]
    fn premeasurement_entangles_equal_superposition() {
        // (|s₀⟩+|s₁⟩)/√2 ⊗ |a₀⟩ → (|s₀⟩|a₀⟩+|s₁⟩|a₁⟩)/√2
        let model = MeasurementModel::premeasurement(2, 2).unwrap();
        let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
        let input = PureState::new(vec![2, 2], vec![s, ZERO, s, ZERO]).unwrap();
        let out = model.apply(&input, 0, None, 1).unwrap();
        let expect = crate::states::bell();
        assert!(out.distance_up_to_phase(&expect) < 1e-12);
    }

    #[test]
    fn premeasurement_branch_zero_is_untouched() {
        let model = MeasurementModel::premeasurement(2, 2).unwrap();
        let input = PureState::basis_state(vec![2, 2], &[0, 0]).unwrap();
        let out = model.apply(&input, 0, None, 1).unwrap();
        assert_eq!(out.amps(), input.amps());
    }

    #[test]
    fn premeasurement_pointer_states_orthonormal() {
        let model = MeasurementModel::premeasurement(3, 5).unwrap();
        let a0 = PureState::basis_state(vec![5], &[0]).unwrap();
        let pointers: Vec<Vec<Complex64>> = model
            .a_kicks()
            .iter()
            .map(|k| k.matrix().mul_vec(a0.amps()))
            .collect();
        for i in 0..3 {
            for j in 0..3 {
                let ip = vec_inner(&pointers[i], &pointers[j]).norm();
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((ip - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn premeasurement_preserves_system_marginals() {
        let model = MeasurementModel::premeasurement(2, 3).unwrap();
        let c = [Complex64::new(0.8, 0.0), Complex64::new(0.0, 0.6)];
        let sys = PureState::from_vector(&c).unwrap();
        let app = PureState::basis_state(vec![3], &[0]).unwrap();
        let input = sys.tensor_product(&app);
        let out = model.apply(&input, 0, None, 1).unwrap();
        let rho = out.partial_trace(&[0]).unwrap();
        assert!((rho.matrix()[(0, 0)].re - 0.64).abs() < 1e-10);
        assert!((rho.matrix()[(1, 1)].re - 0.36).abs() < 1e-10);
    }

    #[test]
    fn apparatus_too_small_is_rejected() {
        assert!(matches!(
            MeasurementModel::premeasurement(3, 2),
            Err(Error::DimensionTooSmall { .. })
        ));
    }

    #[test]
    fn three_dof_identity_kicks_do_nothing() {
        let obs = Observable::computational(2, vec![1.0, -1.0]).unwrap();
        let id4 = DenseOperator::identity(4);
        let model =
            MeasurementModel::three_dof(obs, vec![id4.clone(), id4.clone()], vec![id4.clone(), id4])
                .unwrap();
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(1);
        let amps = crate::linalg::random_unit_vector(32, &mut rng);
        let input = PureState::new(vec![2, 4, 4], amps).unwrap();
        let out = model.apply(&input, 0, Some(1), 2).unwrap();
        let diff: f64 = out
            .amps()
            .iter()
            .zip(input.amps())
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(diff < 1e-12);
    }

    #[test]
    fn three_dof_produces_branch_structure() {
        // Σcₙ|sₙ⟩|p₀⟩|a₀⟩ → Σcₙ|sₙ⟩|pₙ⟩|aₙ⟩ with |pₙ⟩ = kickₙ|p₀⟩.
        let obs = Observable::computational(2, vec![1.0, -1.0]).unwrap();
        let p_kicks = vec![
            momentum_boost(8, 0.5).unwrap(),
            momentum_boost(8, -0.5).unwrap(),
        ];
        let a_kicks = vec![
            momentum_boost(8, -0.5).unwrap(),
            momentum_boost(8, 0.5).unwrap(),
        ];
        let model = MeasurementModel::three_dof(obs, p_kicks.clone(), a_kicks.clone()).unwrap();

        let c = [Complex64::new(0.6, 0.0), Complex64::new(0.8, 0.0)];
        let pkt = crate::measure::grid::GaussianWavepacket::centered(8, 2.0)
            .state()
            .unwrap();
        let sys = PureState::from_vector(&c).unwrap();
        let input = sys.tensor_product(&pkt).tensor_product(&pkt);
        let out = model.apply(&input, 0, Some(1), 2).unwrap();

        // Expected state assembled by hand from the kicked packets.
        let mut expect = vec![ZERO; 2 * 8 * 8];
        for n in 0..2 {
            let pn = p_kicks[n].matrix().mul_vec(pkt.amps());
            let an = a_kicks[n].matrix().mul_vec(pkt.amps());
            for i in 0..8 {
                for j in 0..8 {
                    expect[n * 64 + i * 8 + j] += c[n] * pn[i] * an[j];
                }
            }
        }
        let diff: f64 = out
            .amps()
            .iter()
            .zip(&expect)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum::<f64>()
            .sqrt();
        assert!(diff <= 1e-10);
    }

    #[test]
    fn assembled_operator_is_unitary() {
        let obs = Observable::computational(2, vec![1.0, -1.0]).unwrap();
        let p_kicks = vec![
            momentum_boost(8, 0.4).unwrap(),
            momentum_boost(8, -0.4).unwrap(),
        ];
        let a_kicks = vec![
            momentum_boost(8, -0.4).unwrap(),
            momentum_boost(8, 0.4).unwrap(),
        ];
        let model = MeasurementModel::three_dof(obs, p_kicks, a_kicks).unwrap();
        let total = model.assemble_dense().unwrap();
        assert!(total.matrix().unitarity_residual() <= 1e-10);

        let pre = MeasurementModel::premeasurement(2, 4).unwrap();
        let total = pre.assemble_dense().unwrap();
        assert!(total.matrix().unitarity_residual() <= 1e-10);
    }

    #[test]
    fn non_unitary_kick_is_rejected() {
        let obs = Observable::computational(2, vec![1.0, -1.0]).unwrap();
        let bad = DenseOperator::general(CMatrix::from_fn(4, 4, |i, j| {
            if i == j {
                Complex64::new(2.0, 0.0)
            } else {
                ZERO
            }
        }));
        let id = DenseOperator::identity(4);
        assert!(matches!(
            MeasurementModel::three_dof(obs, vec![bad, id.clone()], vec![id.clone(), id]),
            Err(Error::NonUnitaryKick { .. })
        ));
    }

    #[test]
    fn cross_module_tridecomposition_recovers_branches() {
        // Distinct coefficients, partially overlapping kicked packets: the
        // decomposition finder must return the constructed families.
        let obs = Observable::computational(2, vec![1.0, -1.0]).unwrap();
        let p_kicks = vec![
            momentum_boost(16, 1.0).unwrap(),
            momentum_boost(16, -1.0).unwrap(),
        ];
        let a_kicks = vec![
            momentum_boost(16, -1.0).unwrap(),
            momentum_boost(16, 1.0).unwrap(),
        ];
        let model = MeasurementModel::three_dof(obs, p_kicks, a_kicks).unwrap();
        let c = [Complex64::new(0.8, 0.0), Complex64::new(0.6, 0.0)];
        let pkt = crate::measure::grid::GaussianWavepacket::centered(16, 2.0)
            .state()
            .unwrap();
        let input = PureState::from_vector(&c)
            .unwrap()
            .tensor_product(&pkt)
            .tensor_product(&pkt);
        let out = model.apply(&input, 0, Some(1), 2).unwrap();
        let outcome =
            crate::decomp::find_tridecomposition(&out, crate::tolerances::PRODUCT_TOL).unwrap();
        let crate::decomp::TriOutcome::Found(d) = outcome else {
            panic!("expected decomposition, got {outcome:?}");
        };
        assert_eq!(d.branches(), 2);
        // s-family = computational basis up to phase, coefficients 0.8/0.6.
        assert!((d.coeffs[0].norm() - 0.8).abs() < 1e-8);
        assert!((d.coeffs[1].norm() - 0.6).abs() < 1e-8);
        for (n, expect_idx) in [(0usize, 0usize), (1, 1)] {
            let fid = d.s_vecs[n][expect_idx].norm();
            assert!(fid >= 1.0 - 1e-8, "branch {n} fidelity {fid}");
        }
    }
}
