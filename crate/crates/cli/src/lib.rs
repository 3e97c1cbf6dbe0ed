//! Library side of the `pga-infer` command: request handling, query syntax
//! and the DOT / JSON / CSV renderers.

pub mod dot;
pub mod query;
pub mod report;
pub mod run;

pub use dot::dot_export;
pub use run::{run, CliRequest, RunOutput};
