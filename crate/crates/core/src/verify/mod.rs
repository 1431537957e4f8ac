//! Executable checks of the algebraic identities on truncated lattices.

pub mod relations;
pub mod report;
pub mod suites;

pub use relations::{check_adjoint, check_diagonal_form, check_relation, Relation, VerifyConfig};
pub use report::{ResidualReport, RunSummary, SuiteReport};
pub use suites::{run_all, run_suite, SUITE_NAMES};
