//! Seed files, scripts and the `cluster` command line.

pub mod commands;
pub mod script;
pub mod seedfile;

pub use commands::{error_record, execute, opposite_check, parse_path, parse_vector, run, Cli, Command, Outcome};
pub use script::run_script;
pub use seedfile::{parse_seed, read_seed, serialize_seed, FORMAT_VERSION};
