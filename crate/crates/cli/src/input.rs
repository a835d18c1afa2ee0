//! Reading states and pencils from JSON files with exact scalar strings.

use std::fs;
use std::path::Path;

use serde_json::Value;
use slocc_core::slocc::{pencil_to_state, State};
use slocc_core::{Error, Pencil, Result};

/// Loads either a state file (`{"dims", "amplitudes"}`) or a pencil file
/// (`{"R", "S"}`) as a state.
pub fn load_state(path: &Path) -> Result<State> {
    let text =
        fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    parse_state(&text).map_err(|e| match e {
        Error::Parse(msg) => Error::Parse(format!("{}: {msg}", path.display())),
        other => other,
    })
}

pub fn parse_state(text: &str) -> Result<State> {
    let value: Value = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let is_pencil = value.get("R").is_some() || value.get("S").is_some();
    if is_pencil {
        let p: Pencil = serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))?;
        pencil_to_state(&p)
    } else {
        serde_json::from_value(value).map_err(|e| Error::Parse(e.to_string()))
    }
}
