//! Front end for `solvhull`: JSON specs, reports and the commands behind the binary.

pub mod commands;
pub mod dsl;
pub mod report;
pub mod spec;

pub use commands::{run, Command, Options, Outcome};
pub use spec::SpecFile;
