//! Parsing of the two state inputs: an inline standard-form quadruple and a
//! plain-text 4x4 matrix file.

use std::fmt;
use std::path::Path;

use gaussian_eof::{tol, CovarianceMatrix, Role, StandardForm};
use nalgebra::Matrix4;

#[derive(Debug, Clone, PartialEq)]
pub struct ParseError(pub String);

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn number(token: &str, what: &str) -> Result<f64, ParseError> {
    let x: f64 = token
        .trim()
        .parse()
        .map_err(|_| ParseError(format!("{what}: '{}' is not a number", token.trim())))?;
    if !x.is_finite() {
        return Err(ParseError(format!("{what}: '{}' is not finite", token.trim())));
    }
    Ok(x)
}

/// `a,b,c,d` as `(n, m, k_x, k_p)`. The quadruple is canonicalized, which
/// may swap the modes.
pub fn parse_standard_form(text: &str) -> Result<StandardForm, ParseError> {
    let parts: Vec<&str> = text.split(',').collect();
    if parts.len() != 4 {
        return Err(ParseError(format!(
            "--sf expects four comma-separated numbers n,m,kx,kp (got {})",
            parts.len()
        )));
    }
    let v = parts.iter().map(|p| number(p, "--sf")).collect::<Result<Vec<_>, _>>()?;
    Ok(StandardForm::new(v[0], v[1], v[2], v[3]))
}

/// Four rows of four whitespace-separated numbers; `#` starts a comment.
/// Asymmetry up to `tol::INPUT_SYMMETRY` is averaged away.
pub fn parse_matrix(text: &str) -> Result<CovarianceMatrix, ParseError> {
    let mut rows = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let content = line.split('#').next().unwrap_or("").trim();
        if content.is_empty() {
            continue;
        }
        let what = format!("line {}", lineno + 1);
        let row = content
            .split_whitespace()
            .map(|t| number(t, &what))
            .collect::<Result<Vec<_>, _>>()?;
        if row.len() != 4 {
            return Err(ParseError(format!("{what}: expected 4 numbers, found {}", row.len())));
        }
        rows.push(row);
    }
    if rows.len() != 4 {
        return Err(ParseError(format!("expected 4 matrix rows, found {}", rows.len())));
    }
    let flat: Vec<f64> = rows.concat();
    CovarianceMatrix::symmetrize_within(Matrix4::from_row_slice(&flat), tol::INPUT_SYMMETRY, Role::State)
        .map_err(|e| ParseError(e.to_string()))
}

pub fn read_matrix(path: &Path) -> Result<CovarianceMatrix, ParseError> {
    let text = std::fs::read_to_string(path).map_err(|e| ParseError(format!("{}: {e}", path.display())))?;
    parse_matrix(&text)
}
