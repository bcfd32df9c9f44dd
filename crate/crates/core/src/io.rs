//! Curve files: UTF-8 CSV with a `u,v` header, one point per row, `#`
//! comment lines, and `#key=value` metadata comments.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::metrics::PointUV;

#[derive(Debug, Clone, PartialEq, Default)]
pub struct CurveFile {
    pub points: Vec<PointUV>,
    /// `#key=value` entries in file order of first appearance, keyed by name.
    pub metadata: BTreeMap<String, String>,
}

impl CurveFile {
    pub fn get(&self, key: &str) -> Option<&str> {
        self.metadata.get(key).map(String::as_str)
    }

    /// Value of a boolean metadata key; `true`/`false`/`1`/`0`.
    pub fn flag(&self, key: &str) -> Result<Option<bool>> {
        match self.get(key) {
            None => Ok(None),
            Some("true" | "1") => Ok(Some(true)),
            Some("false" | "0") => Ok(Some(false)),
            Some(other) => Err(Error::Parse {
                line: 0,
                message: format!("metadata {key}={other} is not a boolean"),
            }),
        }
    }
}

fn parse_error(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

/// Parses a curve file. Line numbers in errors are 1-based.
pub fn parse_curve(text: &str) -> Result<CurveFile> {
    let mut file = CurveFile::default();
    let mut header_seen = false;
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(comment) = line.strip_prefix('#') {
            if let Some((key, value)) = comment.split_once('=') {
                let key = key.trim();
                if !key.is_empty() && !key.contains(char::is_whitespace) {
                    file.metadata.insert(key.to_string(), value.trim().to_string());
                }
            }
            continue;
        }
        if !header_seen {
            let cols: Vec<&str> = line.split(',').map(str::trim).collect();
            if cols != ["u", "v"] {
                return Err(parse_error(line_no, format!("expected header `u,v`, found `{line}`")));
            }
            header_seen = true;
            continue;
        }
        let mut fields = line.split(',').map(str::trim);
        let (Some(u), Some(v), None) = (fields.next(), fields.next(), fields.next()) else {
            return Err(parse_error(line_no, format!("expected two columns, found `{line}`")));
        };
        let parse = |s: &str| {
            s.parse::<f64>()
                .ok()
                .filter(|x| x.is_finite())
                .ok_or_else(|| parse_error(line_no, format!("`{s}` is not a finite number")))
        };
        file.points.push(PointUV::new(parse(u)?, parse(v)?));
    }
    if !header_seen {
        return Err(parse_error(0, "missing `u,v` header"));
    }
    Ok(file)
}

/// Formats a curve file. Coordinates are written in the shortest form that
/// parses back to the same value, without exponents.
pub fn format_curve(points: &[PointUV], metadata: &[(&str, String)]) -> String {
    let mut out = String::new();
    for (key, value) in metadata {
        let _ = writeln!(out, "#{key}={value}");
    }
    out.push_str("u,v\n");
    for p in points {
        let _ = writeln!(out, "{},{}", p.u, p.v);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_exact() {
        let pts = vec![
            PointUV::new(0.1, 1.0 / 3.0),
            PointUV::new(-2.5e-17, 1e300),
            PointUV::new(std::f64::consts::PI, 2.0),
        ];
        let text = format_curve(&pts, &[("n", "2".into()), ("closed", "true".into())]);
        let parsed = parse_curve(&text).unwrap();
        assert_eq!(parsed.points, pts);
        assert_eq!(parsed.get("n"), Some("2"));
        assert_eq!(parsed.flag("closed").unwrap(), Some(true));
    }

    #[test]
    fn comments_and_blank_lines_are_skipped() {
        let parsed = parse_curve("# produced by hand\n\nu, v\n1,2\n# mid comment\n3,4\n").unwrap();
        assert_eq!(parsed.points.len(), 2);
        assert!(parsed.metadata.is_empty());
    }

    #[test]
    fn errors_carry_line_numbers() {
        match parse_curve("u,v\n1,2\n3,x\n") {
            Err(Error::Parse { line, .. }) => assert_eq!(line, 3),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse_curve("x,y\n1,2\n"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(parse_curve("u,v\n1,2,3\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_curve("u,v\n1,NaN\n"), Err(Error::Parse { line: 2, .. })));
        assert!(matches!(parse_curve("1,2\n"), Err(Error::Parse { .. })));
    }
}
