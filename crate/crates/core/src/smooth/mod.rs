//! Operators acting on smooth test functions, and their classical limits.

pub mod classical;
pub mod dual;
pub mod function;
pub mod limit;
pub mod rules;

pub use classical::{classical_apply, ClassicalOp};
pub use dual::{CDual, Dual};
pub use function::{polynomial_gaussian, standard_test_function, ModeFn, SmoothFunction, XiDomain};
pub use limit::{limit_convergence, loglog_slope, ConvergenceReport, ConvergenceRow, SampleGrid};
pub use rules::{dilation, smooth_apply, smooth_operator, Prim, SmoothOp};
