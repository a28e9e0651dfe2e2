//! Text format for an initial density matrix: four lines of four complex
//! entries `re+imj`. Blank lines and `#` comments are ignored.

use std::fmt::Write as _;
use std::path::Path;

use discord_core::{CMatrix, DensityMatrix, C64};

use crate::error::{AppError, Result};

/// Parses one entry such as `0.5`, `-0.25j`, `1e-3-2.5e-1j`.
pub fn parse_complex(s: &str) -> Option<C64> {
    let Some(body) = s.strip_suffix(['j', 'J']) else {
        return s.parse().ok().map(|re| C64::new(re, 0.0));
    };
    let bytes = body.as_bytes();
    let split = (1..bytes.len())
        .rev()
        .find(|&i| matches!(bytes[i], b'+' | b'-') && !matches!(bytes[i - 1], b'e' | b'E'));
    match split {
        Some(i) => {
            let re = body[..i].parse().ok()?;
            let im = match &body[i..] {
                "+" => 1.0,
                "-" => -1.0,
                t => t.parse().ok()?,
            };
            Some(C64::new(re, im))
        }
        None => {
            let im = match body {
                "" | "+" => 1.0,
                "-" => -1.0,
                t => t.parse().ok()?,
            };
            Some(C64::new(0.0, im))
        }
    }
}

pub fn parse_initial(text: &str) -> std::result::Result<CMatrix, String> {
    let rows: Vec<&str> = text
        .lines()
        .map(|l| l.split('#').next().unwrap_or("").trim())
        .filter(|l| !l.is_empty())
        .collect();
    if rows.len() != 4 {
        return Err(format!("expected 4 rows, found {}", rows.len()));
    }
    let mut entries = Vec::with_capacity(16);
    for (r, line) in rows.iter().enumerate() {
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 4 {
            return Err(format!("row {} has {} entries, expected 4", r + 1, fields.len()));
        }
        for f in fields {
            entries.push(parse_complex(f).ok_or_else(|| format!("row {}: cannot parse {f:?}", r + 1))?);
        }
    }
    Ok(CMatrix::from_rows(4, 4, &entries))
}

/// Reads and validates an initial-state file.
pub fn load_initial(path: &Path) -> Result<DensityMatrix> {
    let text = std::fs::read_to_string(path).map_err(|e| AppError::io(path, e))?;
    let m = parse_initial(&text).map_err(|message| AppError::InitialState { path: path.into(), message })?;
    Ok(DensityMatrix::new(m)?)
}

/// Writes `m` in the format read by [`parse_initial`].
pub fn format_initial(m: &CMatrix) -> String {
    let mut out = String::new();
    for r in 0..m.rows() {
        let row: Vec<String> = (0..m.cols())
            .map(|c| {
                let z = m[(r, c)];
                format!("{:e}{}{:e}j", z.re, if z.im < 0.0 || z.im.is_sign_negative() { "" } else { "+" }, z.im)
            })
            .collect();
        let _ = writeln!(out, "{}", row.join(" "));
    }
    out
}
