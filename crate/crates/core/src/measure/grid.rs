//! Periodic-grid wavepackets and momentum bookkeeping.
//!
//! Continuous degrees of freedom live on periodic position grids of
//! power-of-two size. Momentum is dimensionless (radians per grid step) and
//! signed within (−π, π]; a momentum kick is the diagonal phase e^{iδx}.
//! Wavepackets must stay inside the anti-aliasing band, otherwise the kick
//! wraps around the Brillouin zone and momentum bookkeeping breaks.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg::{vec_norm, CMatrix};
use crate::tensor::{DenseOperator, PureState};

/// Gaussian wavepacket spec on a periodic grid. `sigma_x` is the amplitude
/// width: ψ(x) ∝ exp(−d(x,x₀)²/(4σ²))·e^{ik₀x} with d the periodic distance.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct GaussianWavepacket {
    pub grid_size: usize,
    pub sigma_x: f64,
    pub center_x: f64,
    pub center_k: f64,
}

impl GaussianWavepacket {
    /// Packet centered on the grid with zero mean momentum.
    pub fn centered(grid_size: usize, sigma_x: f64) -> Self {
        GaussianWavepacket {
            grid_size,
            sigma_x,
            center_x: grid_size as f64 / 2.0,
            center_k: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !self.grid_size.is_power_of_two() || self.grid_size < 8 {
            return Err(Error::invalid_config(
                "grid_size",
                format!("must be a power of two ≥ 8, got {}", self.grid_size),
            ));
        }
        if !(self.sigma_x >= 2.0) {
            return Err(Error::invalid_config(
                "sigma_x",
                format!("must be ≥ 2 grid steps, got {}", self.sigma_x),
            ));
        }
        if self.sigma_x > self.grid_size as f64 / 8.0 {
            return Err(Error::invalid_config(
                "sigma_x",
                format!(
                    "must be ≤ grid_size/8 = {} (anti-aliasing band), got {}",
                    self.grid_size as f64 / 8.0,
                    self.sigma_x
                ),
            ));
        }
        if self.center_k.abs() >= std::f64::consts::PI {
            return Err(Error::invalid_config(
                "center_k",
                format!("must satisfy |k₀| < π, got {}", self.center_k),
            ));
        }
        Ok(())
    }

    /// σ_k = 1/(2σ_x), the momentum width of the amplitude Gaussian.
    pub fn sigma_k(&self) -> f64 {
        1.0 / (2.0 * self.sigma_x)
    }

    /// Whether the packet, shifted by `extra_kick`, keeps 4σ_k of headroom to
    /// the Brillouin-zone edge.
    pub fn in_band_with(&self, extra_kick: f64) -> bool {
        (self.center_k + extra_kick).abs() + 4.0 * self.sigma_k() < std::f64::consts::PI
    }

    pub fn amplitudes(&self) -> Result<Vec<Complex64>> {
        self.validate()?;
        let l = self.grid_size;
        let mut amps: Vec<Complex64> = (0..l)
            .map(|x| {
                let mut d = (x as f64 - self.center_x).abs();
                if d > l as f64 / 2.0 {
                    d = l as f64 - d;
                }
                let env = (-d * d / (4.0 * self.sigma_x * self.sigma_x)).exp();
                Complex64::from_polar(env, self.center_k * x as f64)
            })
            .collect();
        let norm = vec_norm(&amps);
        if norm < 1e-300 {
            return Err(Error::ZeroVector);
        }
        for a in &mut amps {
            *a /= norm;
        }
        Ok(amps)
    }

    pub fn state(&self) -> Result<PureState> {
        PureState::new(vec![self.grid_size], self.amplitudes()?)
    }
}

/// Signed grid momenta k_q = 2πq/L wrapped into (−π, π], in DFT index order.
pub fn momentum_values(l: usize) -> Vec<f64> {
    use std::f64::consts::{PI, TAU};
    (0..l)
        .map(|q| {
            let k = TAU * q as f64 / l as f64;
            if k > PI + 1e-15 {
                k - TAU
            } else {
                k
            }
        })
        .collect()
}

/// Unitary radix-2 FFT, ψ̂(q) = (1/√L) Σ_x ψ(x) e^{−2πiqx/L}. Length must be
/// a power of two.
pub fn dft(amps: &[Complex64]) -> Vec<Complex64> {
    let l = amps.len();
    assert!(l.is_power_of_two(), "dft length must be a power of two");
    let mut a = amps.to_vec();
    // bit reversal
    let bits = l.trailing_zeros();
    for i in 0..l {
        let j = (i.reverse_bits() >> (usize::BITS - bits)) & (l - 1);
        if j > i {
            a.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= l {
        let ang = -std::f64::consts::TAU / len as f64;
        let wlen = Complex64::from_polar(1.0, ang);
        let mut i = 0;
        while i < l {
            let mut w = Complex64::new(1.0, 0.0);
            for j in 0..len / 2 {
                let u = a[i + j];
                let v = a[i + j + len / 2] * w;
                a[i + j] = u + v;
                a[i + j + len / 2] = u - v;
                w *= wlen;
            }
            i += len;
        }
        len <<= 1;
    }
    let scale = 1.0 / (l as f64).sqrt();
    for z in &mut a {
        *z *= scale;
    }
    a
}

/// ⟨K⟩ of a single-grid vector (need not be normalized).
pub fn momentum_expectation(amps: &[Complex64]) -> f64 {
    let spec = dft(amps);
    let ks = momentum_values(amps.len());
    let mut num = 0.0;
    let mut den = 0.0;
    for (z, k) in spec.iter().zip(&ks) {
        let p = z.norm_sqr();
        num += k * p;
        den += p;
    }
    if den > 0.0 {
        num / den
    } else {
        0.0
    }
}

/// ⟨K⟩ on one grid subsystem of a composite state: fiber-wise spectra summed
/// with their weights.
pub fn state_momentum_expectation(state: &PureState, subsystem: usize) -> Result<f64> {
    let m = state.matricize(&[subsystem])?;
    let l = m.rows();
    let ks = momentum_values(l);
    let mut num = 0.0;
    let mut den = 0.0;
    let mut fiber = vec![Complex64::new(0.0, 0.0); l];
    for j in 0..m.cols() {
        for (i, f) in fiber.iter_mut().enumerate() {
            *f = m[(i, j)];
        }
        let spec = dft(&fiber);
        for (z, k) in spec.iter().zip(&ks) {
            let p = z.norm_sqr();
            num += k * p;
            den += p;
        }
    }
    Ok(if den > 0.0 { num / den } else { 0.0 })
}

/// Diagonal momentum kick e^{iδx}. Errors when |δ| ≥ π (the kick would wrap
/// the Brillouin zone).
pub fn momentum_boost(grid_size: usize, delta: f64) -> Result<DenseOperator> {
    if delta.abs() >= std::f64::consts::PI {
        return Err(Error::AliasRisk {
            delta,
            reason: "|δ| ≥ π exceeds the Nyquist momentum".into(),
        });
    }
    let mat = CMatrix::from_fn(grid_size, grid_size, |i, j| {
        if i == j {
            Complex64::from_polar(1.0, delta * i as f64)
        } else {
            Complex64::new(0.0, 0.0)
        }
    });
    DenseOperator::unitary(mat)
}

/// |⟨ψ_{k+δ}|ψ_k⟩| for two identical Gaussians whose momentum centers differ
/// by δ: exp(−δ²σ_x²/2).
pub fn gaussian_overlap(delta: f64, sigma_x: f64) -> f64 {
    (-delta * delta * sigma_x * sigma_x / 2.0).exp()
}
