//! The truncated q-lattice Hilbert space and the operator catalogue on it.

pub mod catalogue;
pub mod expr;
pub mod io;
pub mod matrix;
pub mod state;

pub use catalogue::{operator_action, LatticeOperator, OpName, ShiftTerm};
pub use expr::{Evaluation, Expr, Term};
pub use matrix::{adjoint_matrix, materialize, spectrum_diagonal, OperatorMatrix};
pub use state::{apply, apply_in_window, inner_product, LatticeState};
