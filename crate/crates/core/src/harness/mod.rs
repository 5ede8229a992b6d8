//! Seeded experiments: sampling smooth polynomials, sampled minima of
//! Newton polygons, the verification suites and their persisted reports.

pub mod emit;
pub mod gnp;
pub mod report;
pub mod sample;
pub mod suites;

pub use emit::Format;
pub use gnp::gnp_estimate;
pub use report::{ExperimentReport, Parameters};
pub use sample::{sample_smooth, Shape};
pub use suites::{verify_suite, Suite, SuiteParams};
