use std::io::Read;
use std::path::Path;

use hardmat::{Error, ExactMatrix, FieldDescriptor, FieldElement};
use serde_json::Value;

/// Contents of `path`, or of stdin when `path` is absent or `-`.
pub fn read_text(path: Option<&Path>) -> Result<String, Error> {
    match path {
        Some(p) if p != Path::new("-") => std::fs::read_to_string(p)
            .map_err(|e| Error::InvalidArgument(format!("cannot read {}: {e}", p.display()))),
        _ => {
            let mut s = String::new();
            std::io::stdin()
                .read_to_string(&mut s)
                .map_err(|e| Error::InvalidArgument(format!("cannot read stdin: {e}")))?;
            Ok(s)
        }
    }
}

pub fn read_json(path: Option<&Path>) -> Result<Value, Error> {
    let text = read_text(path)?;
    serde_json::from_str(&text).map_err(|e| Error::InvalidArgument(format!("malformed JSON: {e}")))
}

pub fn read_matrix(path: Option<&Path>) -> Result<ExactMatrix, Error> {
    ExactMatrix::from_json(&read_json(path)?)
}

/// Comma-separated scalars in the text form of `field`.
pub fn parse_vector(field: &FieldDescriptor, text: &str) -> Result<Vec<FieldElement>, Error> {
    text.split(',')
        .map(|s| field.parse_scalar(s.trim()))
        .collect()
}
