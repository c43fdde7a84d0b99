//! Canonical JSON: keys sorted, rationals as lowest-terms strings, two-space
//! indentation and a trailing newline.

use std::fs;
use std::io::Read;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::Serialize;

use crate::CliError;

pub fn encode<T: Serialize>(value: &T) -> String {
    // serde_json::Value keeps object keys in a sorted map
    let tree = serde_json::to_value(value).expect("module values serialize");
    let mut out = serde_json::to_string_pretty(&tree).expect("values print");
    out.push('\n');
    out
}

/// Parses `text`, reporting the JSON path and position of the first problem.
pub fn decode<T: DeserializeOwned>(text: &str, source: &str) -> Result<T, CliError> {
    let mut de = serde_json::Deserializer::from_str(text);
    let value = serde_path_to_error::deserialize(&mut de).map_err(|e| {
        let path = e.path().to_string();
        let inner = e.into_inner();
        CliError::Usage(format!(
            "{source}: invalid JSON at `{path}` (line {}, column {}): {inner}",
            inner.line(),
            inner.column()
        ))
    })?;
    de.end()
        .map_err(|e| CliError::Usage(format!("{source}: trailing data: {e}")))?;
    Ok(value)
}

/// Reads a file, or standard input for `None` or `-`.
pub fn read_input(path: Option<&Path>) -> Result<(String, String), CliError> {
    match path {
        Some(p) if p != Path::new("-") => {
            let text = fs::read_to_string(p).map_err(|e| CliError::Usage(format!("{}: {e}", p.display())))?;
            Ok((text, p.display().to_string()))
        }
        _ => {
            let mut text = String::new();
            std::io::stdin()
                .read_to_string(&mut text)
                .map_err(|e| CliError::Usage(format!("stdin: {e}")))?;
            Ok((text, "stdin".into()))
        }
    }
}

pub fn load<T: DeserializeOwned>(path: Option<&Path>) -> Result<T, CliError> {
    let (text, source) = read_input(path)?;
    decode(&text, &source)
}
