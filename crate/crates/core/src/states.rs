//! Stock states and spin-1/2 conventions.
//!
//! |z₊⟩, |z₋⟩ are the computational basis; |x₊⟩ = (|z₊⟩+|z₋⟩)/√2 and
//! |x₋⟩ = (|z₊⟩−|z₋⟩)/√2.

use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

use crate::error::Result;
use crate::linalg::{ONE, ZERO};
use crate::tensor::PureState;

pub fn z_plus() -> Vec<Complex64> {
    vec![ONE, ZERO]
}

pub fn z_minus() -> Vec<Complex64> {
    vec![ZERO, ONE]
}

pub fn x_plus() -> Vec<Complex64> {
    vec![
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::new(FRAC_1_SQRT_2, 0.0),
    ]
}

pub fn x_minus() -> Vec<Complex64> {
    vec![
        Complex64::new(FRAC_1_SQRT_2, 0.0),
        Complex64::new(-FRAC_1_SQRT_2, 0.0),
    ]
}

/// Bloch direction cos(θ/2)|0⟩ + e^{iφ} sin(θ/2)|1⟩, angles in radians.
pub fn bloch_vector(theta: f64, phi: f64) -> Vec<Complex64> {
    vec![
        Complex64::new((theta / 2.0).cos(), 0.0),
        Complex64::from_polar((theta / 2.0).sin(), phi),
    ]
}

/// (|00⟩ + |11⟩)/√2
pub fn bell() -> PureState {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    PureState::new(vec![2, 2], vec![s, ZERO, ZERO, s]).unwrap()
}

/// (|01⟩ − |10⟩)/√2
pub fn singlet() -> PureState {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    PureState::new(vec![2, 2], vec![ZERO, s, -s, ZERO]).unwrap()
}

/// (|000⟩ + |111⟩)/√2
pub fn ghz() -> PureState {
    let s = Complex64::new(FRAC_1_SQRT_2, 0.0);
    let mut amps = vec![ZERO; 8];
    amps[0] = s;
    amps[7] = s;
    PureState::new(vec![2, 2, 2], amps).unwrap()
}

/// (|001⟩ + |010⟩ + |100⟩)/√3
pub fn w_state() -> PureState {
    let s = Complex64::new(1.0 / 3.0_f64.sqrt(), 0.0);
    let mut amps = vec![ZERO; 8];
    amps[1] = s;
    amps[2] = s;
    amps[4] = s;
    PureState::new(vec![2, 2, 2], amps).unwrap()
}

/// Σ cₙ |nn⟩ on two d-dimensional subsystems, coefficients normalized.
pub fn weighted_pair(coeffs: &[f64]) -> Result<PureState> {
    let d = coeffs.len();
    let mut amps = vec![ZERO; d * d];
    for (n, &c) in coeffs.iter().enumerate() {
        amps[n * d + n] = Complex64::new(c, 0.0);
    }
    PureState::normalized(vec![d, d], amps)
}

/// GHZ-like state (1/√2)(|0⟩|a₀⟩|e₀⟩ + |1⟩|a₁⟩|e₁⟩) with orthonormal system
/// and apparatus families and an environment pair of adjustable overlap
/// ⟨e₀|e₁⟩ = `env_overlap` ∈ [−1, 1]. `env_overlap = 1` collapses the
/// environment to a single (colinear) vector; `0` recovers GHZ.
pub fn ghz_with_env_overlap(env_overlap: f64) -> Result<PureState> {
    let e0 = vec![ONE, ZERO];
    let ortho = (1.0 - env_overlap * env_overlap).max(0.0).sqrt();
    let e1 = vec![
        Complex64::new(env_overlap, 0.0),
        Complex64::new(ortho, 0.0),
    ];
    let mut amps = vec![ZERO; 8];
    let s = FRAC_1_SQRT_2;
    // |0⟩|a₀⟩ ⊗ e₀ and |1⟩|a₁⟩ ⊗ e₁
    for (k, &e) in e0.iter().enumerate() {
        amps[k] += Complex64::new(s, 0.0) * e;
    }
    for (k, &e) in e1.iter().enumerate() {
        amps[6 + k] += Complex64::new(s, 0.0) * e;
    }
    PureState::new(vec![2, 2, 2], amps)
}

/// (|0⟩+|1⟩)/√2 ⊗ |0⟩ ⊗ |0⟩ — fully unentangled three-party state.
pub fn product_three() -> PureState {
    let plus = PureState::from_vector(&x_plus()).unwrap();
    let zero = PureState::from_vector(&[ONE, ZERO]).unwrap();
    plus.tensor_product(&zero).tensor_product(&zero)
}
