//! Whitespace-separated `src dst [weight]` text, 1-based ids. Lines
//! starting with `#` or `%` are comments.

use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::Path;

use super::GraphIoError;
use crate::types::EdgeTriple;

fn parse_id(tok: &str, line: usize) -> Result<u32, GraphIoError> {
    let id: u64 = tok.parse().map_err(|_| GraphIoError::Parse {
        line,
        message: format!("invalid vertex id {tok:?}"),
    })?;
    if id == 0 || id > u32::MAX as u64 {
        return Err(GraphIoError::Parse {
            line,
            message: format!("vertex id {id} outside 1..={}", u32::MAX),
        });
    }
    Ok((id - 1) as u32)
}

/// Parses edge-list text. Returns 0-based triples and the largest id seen.
pub fn parse_edge_list(
    reader: impl BufRead,
    weighted: bool,
) -> Result<(Vec<EdgeTriple<f64>>, usize), GraphIoError> {
    let mut edges = Vec::new();
    let mut num_vertices = 0usize;
    for (i, line) in reader.lines().enumerate() {
        let lineno = i + 1;
        let line = line.map_err(|e| GraphIoError::Parse {
            line: lineno,
            message: e.to_string(),
        })?;
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') || body.starts_with('%') {
            continue;
        }
        let toks: Vec<&str> = body.split_whitespace().collect();
        let expected = if weighted { 3 } else { 2 };
        if toks.len() != expected {
            return Err(GraphIoError::Parse {
                line: lineno,
                message: format!(
                    "expected {expected} fields ({}), found {}",
                    if weighted { "src dst weight" } else { "src dst" },
                    toks.len()
                ),
            });
        }
        let src = parse_id(toks[0], lineno)?;
        let dst = parse_id(toks[1], lineno)?;
        let value = if weighted {
            toks[2].parse::<f64>().map_err(|_| GraphIoError::Parse {
                line: lineno,
                message: format!("invalid weight {:?}", toks[2]),
            })?
        } else {
            1.0
        };
        num_vertices = num_vertices.max(src.max(dst) as usize + 1);
        edges.push(EdgeTriple::new(src, dst, value));
    }
    Ok((edges, num_vertices))
}

pub fn load_edge_list(
    path: impl AsRef<Path>,
    weighted: bool,
) -> Result<(Vec<EdgeTriple<f64>>, usize), GraphIoError> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| GraphIoError::io(path, e))?;
    parse_edge_list(BufReader::new(file), weighted)
}

/// Writes 1-based `src dst` lines, adding the weight column when `weighted`.
pub fn write_edge_list(
    path: impl AsRef<Path>,
    edges: &[EdgeTriple<f64>],
    weighted: bool,
) -> Result<(), GraphIoError> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| GraphIoError::io(path, e))?;
    let mut w = BufWriter::new(file);
    let res: std::io::Result<()> = (|| {
        for e in edges {
            if weighted {
                writeln!(w, "{} {} {}", e.src.0 as u64 + 1, e.dst.0 as u64 + 1, e.value)?;
            } else {
                writeln!(w, "{} {}", e.src.0 as u64 + 1, e.dst.0 as u64 + 1)?;
            }
        }
        w.flush()
    })();
    res.map_err(|e| GraphIoError::io(path, e))
}
