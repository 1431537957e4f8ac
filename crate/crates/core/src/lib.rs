//! Three-dimensional q-deformed Euclidean space realized by difference
//! operators.
//!
//! The crate has three layers:
//!
//! * [`lattice`]: the q-lattice Hilbert space with basis `u_M χ_{σ,m_t} e^{imφ}`,
//!   the Jackson inner product, and the coordinate (`X`), `t`, `K` and orbital
//!   (`T_orb`) operators as sparse index-shift rules.
//! * [`smooth`]: the same operators acting on smooth test functions by
//!   argument scaling and Fourier-mode shifts, plus their `q → 1` limits.
//! * [`verify`]: residual checks of every algebraic relation, adjointness
//!   property, spectrum and limit, with JSON reports.
//!
//! The runnable programs under `examples/` walk through each capability.

pub mod basis;
pub mod cli;
pub mod error;
pub mod lattice;
pub mod params;
pub mod smooth;
pub mod verify;

pub use basis::{
    build_window, jackson_weight, lattice_coordinates, BasisIndex, LatticeCoordinates, Shift,
    Sign, TruncationWindow, DEFAULT_CAPACITY,
};
pub use error::{Error, Result};
pub use lattice::{LatticeState, OpName};
pub use params::DeformationParams;
