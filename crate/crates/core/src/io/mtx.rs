//! Matrix Market coordinate files: `real`, `integer`, or `pattern` fields
//! with `general` or `symmetric` storage. Entry `(i, j)` becomes edge
//! `i -> j`.

use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use super::GraphIoError;
use crate::types::EdgeTriple;

#[derive(Clone, Copy, PartialEq)]
enum Field {
    Real,
    Integer,
    Pattern,
}

pub fn parse_matrix_market(reader: impl BufRead) -> Result<(Vec<EdgeTriple<f64>>, usize), GraphIoError> {
    let mut lines = reader.lines().enumerate();
    let header = match lines.next() {
        Some((_, l)) => l.map_err(|e| GraphIoError::Parse {
            line: 1,
            message: e.to_string(),
        })?,
        None => return Err(GraphIoError::UnsupportedHeader(String::new())),
    };
    let toks: Vec<String> = header.split_whitespace().map(|t| t.to_ascii_lowercase()).collect();
    if toks.len() != 5 || toks[0] != "%%matrixmarket" || toks[1] != "matrix" || toks[2] != "coordinate" {
        return Err(GraphIoError::UnsupportedHeader(header));
    }
    let field = match toks[3].as_str() {
        "real" => Field::Real,
        "integer" => Field::Integer,
        "pattern" => Field::Pattern,
        _ => return Err(GraphIoError::UnsupportedHeader(header)),
    };
    let symmetric = match toks[4].as_str() {
        "general" => false,
        "symmetric" => true,
        _ => return Err(GraphIoError::UnsupportedHeader(header)),
    };

    let mut dims: Option<(u64, u64, u64)> = None;
    let mut edges = Vec::new();
    let mut seen = 0u64;
    for (i, line) in lines {
        let lineno = i + 1;
        let line = line.map_err(|e| GraphIoError::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        let body = line.trim();
        if body.is_empty() || body.starts_with('%') {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        let num = |t: &str| {
            t.parse::<u64>().map_err(|_| GraphIoError::Parse {
                line: lineno,
                message: format!("invalid integer {t:?}"),
            })
        };
        let Some((rows, cols, nnz)) = dims else {
            if toks.len() != 3 {
                return Err(GraphIoError::Parse {
                    line: lineno,
                    message: "size line must be `rows cols entries`".into(),
                });
            }
            let d = (num(toks[0])?, num(toks[1])?, num(toks[2])?);
            if d.0.max(d.1) > u32::MAX as u64 {
                return Err(GraphIoError::Parse {
                    line: lineno,
                    message: "dimensions exceed the 32-bit id space".into(),
                });
            }
            edges.reserve(d.2 as usize * if symmetric { 2 } else { 1 });
            dims = Some(d);
            continue;
        };
        let want = if field == Field::Pattern { 2 } else { 3 };
        if toks.len() != want {
            return Err(GraphIoError::Parse {
                line: lineno,
                message: format!("expected {want} fields, found {}", toks.len()),
            });
        }
        let (row, col) = (num(toks[0])?, num(toks[1])?);
        if row == 0 || col == 0 || row > rows || col > cols {
            return Err(GraphIoError::OutOfBounds {
                line: lineno,
                row,
                col,
                rows,
                cols,
            });
        }
        let value = match field {
            Field::Pattern => 1.0,
            Field::Integer => num(toks[2])? as f64,
            Field::Real => toks[2].parse::<f64>().map_err(|_| GraphIoError::Parse {
                line: lineno,
                message: format!("invalid value {:?}", toks[2]),
            })?,
        };
        let (s, d) = ((row - 1) as u32, (col - 1) as u32);
        edges.push(EdgeTriple::new(s, d, value));
        if symmetric && s != d {
            edges.push(EdgeTriple::new(d, s, value));
        }
        seen += 1;
        if seen > nnz {
            return Err(GraphIoError::Parse {
                line: lineno,
                message: format!("more entries than the declared {nnz}"),
            });
        }
    }
    let Some((rows, cols, nnz)) = dims else {
        return Err(GraphIoError::Parse {
            line: 1,
            message: "missing size line".into(),
        });
    };
    if seen != nnz {
        return Err(GraphIoError::Parse {
            line: 0,
            message: format!("declared {nnz} entries, found {seen}"),
        });
    }
    Ok((edges, rows.max(cols) as usize))
}

pub fn load_matrix_market(path: impl AsRef<Path>) -> Result<(Vec<EdgeTriple<f64>>, usize), GraphIoError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| GraphIoError::io(path, e))?;
    parse_matrix_market(BufReader::new(file))
}
