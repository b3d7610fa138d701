//! Text formats: the shared matrix file format, `--g` group specs, and
//! comma-separated real lists.
//!
//! Matrix files start with a `rows cols` line followed by `rows` lines of
//! `cols` space-separated reals. Lines starting with `#` are skipped, as are
//! blank lines.

use std::fmt::Write as _;
use std::path::Path;

use opline_core::{DenseMatrix, GroupElement, SubgroupTag};
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum FormatError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("expected {expected} data rows, found {found}")]
    RowCount { expected: usize, found: usize },
    #[error("invalid number {token:?}")]
    Number { token: String },
    #[error("invalid group element {spec:?}: {msg}")]
    Group { spec: String, msg: String },
    #[error("empty list")]
    EmptyList,
}

fn parse_real(token: &str) -> Result<f64, FormatError> {
    token.parse::<f64>().map_err(|_| FormatError::Number {
        token: token.to_string(),
    })
}

pub fn parse_matrix(text: &str) -> Result<DenseMatrix, FormatError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or(FormatError::Syntax {
        line: 1,
        msg: "missing `rows cols` header".into(),
    })?;
    let dims: Vec<&str> = header.split_whitespace().collect();
    let parse_dim = |s: &str| {
        s.parse::<usize>().map_err(|_| FormatError::Syntax {
            line: hline,
            msg: format!("bad dimension {s:?}"),
        })
    };
    if dims.len() != 2 {
        return Err(FormatError::Syntax {
            line: hline,
            msg: format!("header must be `rows cols`, got {header:?}"),
        });
    }
    let (rows, cols) = (parse_dim(dims[0])?, parse_dim(dims[1])?);

    let mut data = Vec::with_capacity(rows * cols);
    let mut found = 0;
    for (line, content) in lines {
        if found == rows {
            return Err(FormatError::Syntax {
                line,
                msg: format!("extra data after {rows} rows"),
            });
        }
        let row: Vec<f64> = content
            .split_whitespace()
            .map(parse_real)
            .collect::<Result<_, _>>()?;
        if row.len() != cols {
            return Err(FormatError::Syntax {
                line,
                msg: format!("expected {cols} values, found {}", row.len()),
            });
        }
        data.extend(row);
        found += 1;
    }
    if found != rows {
        return Err(FormatError::RowCount {
            expected: rows,
            found,
        });
    }
    DenseMatrix::new(rows, cols, data).map_err(|e| FormatError::Syntax {
        line: hline,
        msg: e.to_string(),
    })
}

/// Shortest round-trip scientific notation, so files re-read exactly.
pub fn write_matrix(m: &DenseMatrix) -> String {
    let mut s = format!("{} {}\n", m.rows(), m.cols());
    for i in 0..m.rows() {
        let row: Vec<String> = m.row(i).iter().map(|v| format!("{v:e}")).collect();
        let _ = writeln!(s, "{}", row.join(" "));
    }
    s
}

#[derive(Debug, Error)]
pub enum ReadError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Format { path: String, source: FormatError },
}

pub fn read_matrix_file(path: &Path) -> Result<DenseMatrix, ReadError> {
    let text = std::fs::read_to_string(path).map_err(|source| ReadError::Io {
        path: path.display().to_string(),
        source,
    })?;
    parse_matrix(&text).map_err(|source| ReadError::Format {
        path: path.display().to_string(),
        source,
    })
}

/// Comma-separated reals; `inf` (any sign or case) is accepted.
pub fn parse_real_list(text: &str) -> Result<Vec<f64>, FormatError> {
    let out: Vec<f64> = text
        .split(',')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(parse_real)
        .collect::<Result<_, _>>()?;
    if out.is_empty() {
        return Err(FormatError::EmptyList);
    }
    if out.iter().any(|v| v.is_nan()) {
        return Err(FormatError::Number {
            token: "NaN".into(),
        });
    }
    Ok(out)
}

/// `a,b,c,d` or one of `K:t`, `N:t`, `NP:t`, `A:t`, `NL:λ,t`, `AL:λ,t`.
pub fn parse_group(spec: &str) -> Result<GroupElement, FormatError> {
    let fail = |msg: String| FormatError::Group {
        spec: spec.to_string(),
        msg,
    };
    let nums = |s: &str, want: usize| -> Result<Vec<f64>, FormatError> {
        let v = parse_real_list(s).map_err(|e| fail(e.to_string()))?;
        if v.len() != want || v.iter().any(|x| !x.is_finite()) {
            return Err(fail(format!("expected {want} finite numbers")));
        }
        Ok(v)
    };
    let tag = match spec.split_once(':') {
        None => {
            let v = nums(spec, 4)?;
            return GroupElement::new(v[0], v[1], v[2], v[3]).map_err(|e| fail(e.to_string()));
        }
        Some((name, rest)) => match name.trim() {
            "K" => SubgroupTag::K(nums(rest, 1)?[0]),
            "N" => SubgroupTag::N(nums(rest, 1)?[0]),
            "NP" => SubgroupTag::NPrime(nums(rest, 1)?[0]),
            "A" => SubgroupTag::A(nums(rest, 1)?[0]),
            "NL" => {
                let v = nums(rest, 2)?;
                SubgroupTag::NLambda {
                    lambda: v[0],
                    t: v[1],
                }
            }
            "AL" => {
                let v = nums(rest, 2)?;
                SubgroupTag::ALambda {
                    lambda: v[0],
                    t: v[1],
                }
            }
            other => return Err(fail(format!("unknown subgroup {other:?}"))),
        },
    };
    tag.element().map_err(|e| fail(e.to_string()))
}
