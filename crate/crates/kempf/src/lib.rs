//! Command-line companion to `kempf-core`: instance files, seeded random
//! suites, a small gallery of reference instances, and reports that run
//! several stability engines on the same points and cross-check them.

pub mod format;
pub mod gallery;
pub mod instance;
pub mod probe;
pub mod random;
pub mod report;

pub use instance::{Instance, Problem};
pub use report::{compare, CompareOptions, Engine, Report};
