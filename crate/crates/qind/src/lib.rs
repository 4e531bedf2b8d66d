//! Evidence collection, file formats and the pipeline behind the `qind`
//! command line. Scoring and rendering come from `qind_core`.

pub mod checks;
pub mod cli;
pub mod collectors;
pub mod evidence;
pub mod formats;
pub mod net;
pub mod pipeline;
pub mod verdicts;

pub use qind_core as core;
