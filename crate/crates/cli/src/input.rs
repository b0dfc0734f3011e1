use std::path::Path;

use serde::de::DeserializeOwned;
use stieltjes::scalar::parse_rational;
use stieltjes::Rational;

use crate::error::{CliError, CliResult};

/// Reads and parses a JSON file, reporting the failing field path together
/// with the line and column.
pub fn read_json<T: DeserializeOwned>(path: &Path) -> CliResult<T> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_json(&text).map_err(|msg| CliError::Input(format!("{}: {msg}", path.display())))
}

pub fn parse_json<T: DeserializeOwned>(text: &str) -> Result<T, String> {
    let de = &mut serde_json::Deserializer::from_str(text);
    serde_path_to_error::deserialize(de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        if path == "." {
            inner.to_string()
        } else {
            format!("field `{path}`: {inner}")
        }
    })
}

pub fn rational_arg(s: &str) -> Result<Rational, String> {
    parse_rational(s).map_err(|e| e.to_string())
}
