//! Command-line front end: problem files, subcommands and CSV output.

pub mod commands;
pub mod problem_file;

pub use commands::{run, Cli};
pub use problem_file::ProblemFile;
