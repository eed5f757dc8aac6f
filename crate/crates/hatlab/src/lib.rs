//! IO, file formats and verification suites around `hatlab-core`.

pub mod bodyspec;
pub mod fixtures;
pub mod pool;
pub mod report;
pub mod suites;
pub mod svg;
