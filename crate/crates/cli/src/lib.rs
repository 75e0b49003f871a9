//! Job specifications and report generation for the `bgg` command.

pub mod job;
pub mod run;

pub use job::{Command, JobSpec};
pub use run::{envelope, error_envelope, exit_code, run, Output, SCHEMA};
