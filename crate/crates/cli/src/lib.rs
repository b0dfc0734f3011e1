//! Command implementations behind the `stieltjes` binary.
//!
//! Every command returns a serializable output record; the binary prints it
//! as JSON or as text. The records also deserialize, so emitted JSON can be
//! read back under the same schema.

pub mod commands;
pub mod error;
pub mod input;
pub mod schema;

pub use error::{CliError, ExitCode};
