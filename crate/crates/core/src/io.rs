//! Plain-text matrix files.
//!
//! ```text
//! # any comment
//! # designated e=e
//! q 2
//! rows 3
//! cols 4
//! labels b1 b2 b3 e
//! 1 0 0 1
//! 0 1 0 1
//! 0 0 1 1
//! ```
//!
//! Comment lines may appear anywhere. `labels` is optional (default
//! `c1..cn`). Entries use the field's element codes; for GF(4), GF(8) and
//! GF(9) a code is the base-p digit vector of the polynomial, lowest degree
//! first.

use std::fmt::Write as _;

use thiserror::Error;

use crate::gfq::{field, Code};
use crate::matvec::FqMatrix;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Line { line: usize, msg: String },
    #[error("missing header `{0}`")]
    MissingHeader(&'static str),
    #[error("expected {expected} matrix rows, found {found}")]
    RowCount { expected: usize, found: usize },
}

fn at(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Line { line, msg: msg.into() }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MatrixFile {
    pub matrix: FqMatrix,
    /// Free-form comment lines, without the leading `#`.
    pub comments: Vec<String>,
    /// `(role, label)` pairs from `# designated role=label` lines.
    pub designated: Vec<(String, String)>,
}

impl MatrixFile {
    pub fn new(matrix: FqMatrix) -> Self {
        MatrixFile {
            matrix,
            comments: Vec::new(),
            designated: Vec::new(),
        }
    }

    pub fn with_designated(mut self, role: &str, label: &str) -> Self {
        self.designated.push((role.to_string(), label.to_string()));
        self
    }

    pub fn designated(&self, role: &str) -> Option<&str> {
        self.designated.iter().find(|(r, _)| r == role).map(|(_, l)| l.as_str())
    }

    pub fn parse(text: &str) -> Result<MatrixFile, ParseError> {
        let mut comments = Vec::new();
        let mut designated = Vec::new();
        let mut q = None;
        let mut rows = None;
        let mut cols = None;
        let mut labels: Option<Vec<String>> = None;
        let mut data: Vec<(usize, Vec<Code>)> = Vec::new();

        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.trim();
            if line.is_empty() {
                continue;
            }
            if let Some(c) = line.strip_prefix('#') {
                let c = c.strip_prefix(' ').unwrap_or(c);
                if let Some(rest) = c.strip_prefix("designated ") {
                    for pair in rest.split_whitespace() {
                        let (role, label) = pair
                            .split_once('=')
                            .ok_or_else(|| at(line_no, format!("bad designation `{pair}`")))?;
                        designated.push((role.to_string(), label.to_string()));
                    }
                } else {
                    comments.push(c.to_string());
                }
                continue;
            }
            let mut toks = line.split_whitespace();
            let head = toks.next().unwrap();
            let num = |toks: &mut std::str::SplitWhitespace, key: &str| -> Result<usize, ParseError> {
                let v = toks
                    .next()
                    .ok_or_else(|| at(line_no, format!("`{key}` needs a value")))?;
                if toks.next().is_some() {
                    return Err(at(line_no, format!("`{key}` takes one value")));
                }
                v.parse()
                    .map_err(|_| at(line_no, format!("`{key}` value `{v}` is not a number")))
            };
            match head {
                "q" => q = Some(num(&mut toks, "q")?),
                "rows" => rows = Some(num(&mut toks, "rows")?),
                "cols" => cols = Some(num(&mut toks, "cols")?),
                "labels" => labels = Some(toks.map(str::to_string).collect()),
                _ if head.chars().all(|c| c.is_ascii_digit()) => {
                    let q = q.ok_or_else(|| at(line_no, "matrix row before `q` header"))?;
                    let entries = line
                        .split_whitespace()
                        .map(|t| {
                            let v: usize = t
                                .parse()
                                .map_err(|_| at(line_no, format!("`{t}` is not an element code")))?;
                            if v >= q {
                                return Err(at(line_no, format!("code {v} is not below q = {q}")));
                            }
                            Ok(v as Code)
                        })
                        .collect::<Result<Vec<_>, _>>()?;
                    data.push((line_no, entries));
                }
                _ => return Err(at(line_no, format!("unknown header `{head}`"))),
            }
        }

        let q = q.ok_or(ParseError::MissingHeader("q"))?;
        let rows = rows.ok_or(ParseError::MissingHeader("rows"))?;
        let cols = cols.ok_or(ParseError::MissingHeader("cols"))?;
        let f = field(q as u32).map_err(|e| at(1, e.to_string()))?;
        if data.len() != rows {
            return Err(ParseError::RowCount {
                expected: rows,
                found: data.len(),
            });
        }
        let mut entries = Vec::with_capacity(rows * cols);
        for (line_no, row) in &data {
            if row.len() != cols {
                return Err(at(*line_no, format!("expected {cols} entries, found {}", row.len())));
            }
            entries.extend_from_slice(row);
        }
        if let Some(l) = &labels {
            if l.len() != cols {
                return Err(at(0, format!("expected {cols} labels, found {}", l.len())));
            }
        }
        let matrix = FqMatrix::new(f, rows, cols, &entries, labels).map_err(|e| at(0, e.to_string()))?;
        for (role, label) in &designated {
            if matrix.index_of(label).is_err() {
                return Err(at(0, format!("designated {role}={label} names no column")));
            }
        }
        Ok(MatrixFile {
            matrix,
            comments,
            designated,
        })
    }

    pub fn print(&self) -> String {
        let m = &self.matrix;
        let mut out = String::new();
        for c in &self.comments {
            let _ = writeln!(out, "# {c}");
        }
        for (role, label) in &self.designated {
            let _ = writeln!(out, "# designated {role}={label}");
        }
        let _ = writeln!(out, "q {}", m.field().q());
        let _ = writeln!(out, "rows {}", m.rows());
        let _ = writeln!(out, "cols {}", m.cols());
        let _ = writeln!(out, "labels {}", m.labels().join(" "));
        for i in 0..m.rows() {
            let row: Vec<String> = (0..m.cols()).map(|j| m.get(i, j).to_string()).collect();
            let _ = writeln!(out, "{}", row.join(" "));
        }
        out
    }
}

/// One-line-per-row rendering used inside counterexample reports.
pub fn matrix_text(m: &FqMatrix) -> String {
    MatrixFile::new(m.clone()).print()
}

#[cfg(test)]
mod tests {
    use super::*;

    const SAMPLE: &str = "# a comment\nq 3\nrows 2\n# between headers\ncols 3\n1 0 2\n0 1 1\n";

    #[test]
    fn parse_defaults() {
        let mf = MatrixFile::parse(SAMPLE).unwrap();
        assert_eq!(mf.matrix.labels(), ["c1", "c2", "c3"]);
        assert_eq!(mf.matrix.get(0, 2), 2);
        assert_eq!(mf.comments, ["a comment", "between headers"]);
    }

    #[test]
    fn round_trip() {
        let mf = MatrixFile::parse(SAMPLE).unwrap().with_designated("e", "c3");
        let again = MatrixFile::parse(&mf.print()).unwrap();
        assert_eq!(again, mf);
        assert_eq!(again.designated("e"), Some("c3"));
    }

    #[test]
    fn errors_carry_line_numbers() {
        let err = MatrixFile::parse("q 2\nrows 1\ncols 2\n1 2\n").unwrap_err();
        assert_eq!(err.to_string(), "line 4: code 2 is not below q = 2");
        let err = MatrixFile::parse("q 2\nrows 1\ncols 2\n1 0 1\n").unwrap_err();
        assert!(err.to_string().starts_with("line 4"));
        assert!(matches!(
            MatrixFile::parse("rows 1\n"),
            Err(ParseError::MissingHeader("q"))
        ));
        let err = MatrixFile::parse("q 6\nrows 0\ncols 0\n").unwrap_err();
        assert!(err.to_string().contains("unsupported"));
        let err = MatrixFile::parse("q 2\nrows 1\ncols 1\nbogus 3\n1\n").unwrap_err();
        assert_eq!(err.to_string(), "line 4: unknown header `bogus`");
    }

    #[test]
    fn designation_must_name_a_column() {
        let err = MatrixFile::parse("# designated e=zz\nq 2\nrows 1\ncols 1\n1\n").unwrap_err();
        assert!(err.to_string().contains("zz"));
    }
}
