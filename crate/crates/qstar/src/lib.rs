//! Instance files, verification suites, reports and the `qstar` command line.

pub mod bundled;
pub mod cli;
pub mod error;
pub mod instance;
pub mod report;
pub mod suites;
