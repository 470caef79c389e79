//! Plain-text point files: one whitespace-separated `x y` pair per line.
//! Blank lines and lines starting with `#` are skipped on input.

use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::Point2;
use crate::error::{Error, Result};

pub fn parse_points(text: &str) -> Result<Vec<Point2>> {
    let mut out = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let parse_err = |msg: String| Error::Parse { line: i + 1, msg };
        let fields: Vec<&str> = line.split_whitespace().collect();
        if fields.len() != 2 {
            return Err(parse_err(format!(
                "expected `x y`, found {} fields",
                fields.len()
            )));
        }
        let coord = |s: &str| -> Result<f64> {
            let v: f64 = s.parse().map_err(|_| parse_err(format!("not a number: `{s}`")))?;
            if !v.is_finite() {
                return Err(parse_err(format!("non-finite coordinate `{s}`")));
            }
            Ok(v)
        };
        out.push(Point2::new(coord(fields[0])?, coord(fields[1])?));
    }
    Ok(out)
}

/// Round-trips exactly: Rust prints the shortest decimal that parses back
/// to the same double.
pub fn format_points(points: &[Point2]) -> String {
    let mut s = String::with_capacity(points.len() * 40);
    for p in points {
        let _ = writeln!(s, "{:?} {:?}", p.x, p.y);
    }
    s
}

pub fn read_points(path: &Path) -> Result<Vec<Point2>> {
    let text = fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_points(&text)
}

pub fn write_points(path: &Path, points: &[Point2]) -> Result<()> {
    fs::write(path, format_points(points)).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}
