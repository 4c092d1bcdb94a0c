//! Measurement-interaction models: ideal premeasurement, the
//! three-degree-of-freedom interaction with apparatus recoil, and grid-based
//! Stern–Gerlach / PBS simulations.

mod grid;
mod model;
mod stern_gerlach;

pub use grid::{
    dft, gaussian_overlap, momentum_boost, momentum_expectation, momentum_values,
    state_momentum_expectation, GaussianWavepacket,
};
pub use model::{build_premeasurement, build_three_dof, MeasurementModel};
pub use stern_gerlach::{simulate_pbs, simulate_stern_gerlach, InteractionReport, SgParams};
