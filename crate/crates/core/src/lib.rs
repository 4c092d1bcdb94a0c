//! Dense state-vector toolkit for studying how a measurement interaction
//! fixes the basis a quantum apparatus records.
//!
//! The crate builds bipartite and tripartite post-measurement states,
//! exhibits the non-uniqueness of degenerate biorthogonal decompositions,
//! certifies tripartite decomposition uniqueness numerically, simulates
//! Stern–Gerlach and polarizing-beam-splitter interactions with apparatus
//! recoil on periodic grids, and runs pure-dephasing environment dynamics
//! with pointer-commutator diagnostics.
//!
//! Modules:
//! - [`tensor`]: multipartite states, operators, partial trace, matricization.
//! - [`linalg`]: dense complex matrices, Jacobi SVD and hermitian eigensolver.
//! - [`decomp`]: Schmidt decompositions, the Bloch product-conditioning scan,
//!   tridecompositions and the uniqueness search.
//! - [`measure`]: premeasurement and three-degree-of-freedom interaction
//!   models, wavepacket grids, Stern–Gerlach / PBS simulations.
//! - [`decohere`]: dephasing environments, decoherence factors, pointer
//!   commutators, and the two worked demos.
//! - [`scenario`]: JSON-configured runs with machine-readable output.

pub mod decohere;
pub mod decomp;
pub mod error;
pub mod linalg;
pub mod measure;
pub mod scenario;
pub mod states;
pub mod tensor;
pub mod tolerances;

pub use error::{Error, Result};
pub use tensor::{DenseOperator, DensityMatrix, Observable, OperatorKind, PureState};
