//! Problem files, dispatch to the quotient routes and oracles, and result documents.

pub mod dispatch;
pub mod document;
pub mod problem;
pub mod suite;

pub use dispatch::{demo_example_1_2, dispatch, run_conic, run_count, run_specialize, DispatchOptions};
pub use document::{ExitStatus, ResultDocument};
pub use problem::{parse_problem, FieldDescriptor, ProblemError, ProblemSpec};
pub use suite::verify_suite;
