//! Command line, file formats, parallel verification and reports for
//! generalized derangement graphs. The mathematics lives in `derange_core`.

pub mod cache;
pub mod cli;
pub mod clock;
pub mod formats;
pub mod report;
pub mod verify;

pub use cli::run;
