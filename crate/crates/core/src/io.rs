//! Reading observation vectors from disk.

use std::path::Path;

use crate::error::{Error, Result};

/// Parse a JSON array of numbers, or a single-column CSV of reals.
///
/// In the CSV form blank lines and `#` comments are skipped, and a
/// non-numeric first line is taken as a header.
pub fn parse_vector(text: &str) -> Result<Vec<f64>> {
    if text.trim_start().starts_with('[') {
        return serde_json::from_str(text).map_err(|e| Error::InvalidInput(format!("JSON vector: {e}")));
    }
    let mut values = Vec::new();
    let mut first = true;
    for (lineno, line) in text.lines().enumerate() {
        let field = line.trim();
        if field.is_empty() || field.starts_with('#') {
            continue;
        }
        let is_first = std::mem::replace(&mut first, false);
        if field.contains(',') {
            return Err(Error::InvalidInput(format!(
                "line {}: expected a single column, got {field:?}",
                lineno + 1
            )));
        }
        match field.parse::<f64>() {
            Ok(v) => values.push(v),
            Err(_) if is_first => {}
            Err(_) => {
                return Err(Error::InvalidInput(format!(
                    "line {}: not a number: {field:?}",
                    lineno + 1
                )))
            }
        }
    }
    Ok(values)
}

pub fn read_vector(path: &Path) -> Result<Vec<f64>> {
    let text = std::fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_vector(&text)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_and_json_forms() {
        assert_eq!(parse_vector("1\n2.5\n-3e-1\n").unwrap(), vec![1.0, 2.5, -0.3]);
        assert_eq!(parse_vector("y\n# note\n1\n\n2\n").unwrap(), vec![1.0, 2.0]);
        assert_eq!(parse_vector(" [1, 2.5, -3]").unwrap(), vec![1.0, 2.5, -3.0]);
    }

    #[test]
    fn malformed_input() {
        assert!(parse_vector("1\nfoo\n").is_err());
        assert!(parse_vector("1,2\n").is_err());
        assert!(parse_vector("[1, \"a\"]").is_err());
    }
}
