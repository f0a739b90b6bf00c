//! `GMB1` binary edge files.
//!
//! Layout, all little-endian: the four bytes `GMB1`, `num_vertices: u64`,
//! `num_edges: u64`, then `num_edges` records of
//! `(src: u64, dst: u64, value: f64)`.

use std::fs::File;
use std::io::{BufWriter, Read, Write};
use std::path::Path;

use super::GraphIoError;
use crate::types::EdgeTriple;

pub const MAGIC: &[u8; 4] = b"GMB1";
pub const HEADER_BYTES: u64 = 20;
pub const RECORD_BYTES: u64 = 24;

pub fn encode(edges: &[EdgeTriple<f64>], num_vertices: usize, out: &mut impl Write) -> std::io::Result<()> {
    out.write_all(MAGIC)?;
    out.write_all(&(num_vertices as u64).to_le_bytes())?;
    out.write_all(&(edges.len() as u64).to_le_bytes())?;
    for e in edges {
        out.write_all(&(e.src.0 as u64).to_le_bytes())?;
        out.write_all(&(e.dst.0 as u64).to_le_bytes())?;
        out.write_all(&e.value.to_le_bytes())?;
    }
    Ok(())
}

pub fn decode(bytes: &[u8]) -> Result<(Vec<EdgeTriple<f64>>, usize), GraphIoError> {
    let actual = bytes.len() as u64;
    if actual < 4 {
        return Err(GraphIoError::Truncated {
            expected: HEADER_BYTES,
            actual,
        });
    }
    let magic: [u8; 4] = bytes[..4].try_into().unwrap();
    if &magic != MAGIC {
        return Err(GraphIoError::BadMagic(magic));
    }
    if actual < HEADER_BYTES {
        return Err(GraphIoError::Truncated {
            expected: HEADER_BYTES,
            actual,
        });
    }
    let word = |off: usize| u64::from_le_bytes(bytes[off..off + 8].try_into().unwrap());
    let num_vertices = word(4);
    let num_edges = word(12);
    let expected = num_edges
        .checked_mul(RECORD_BYTES)
        .and_then(|b| b.checked_add(HEADER_BYTES))
        .unwrap_or(u64::MAX);
    if actual < expected {
        return Err(GraphIoError::Truncated { expected, actual });
    }
    if actual > expected {
        return Err(GraphIoError::LengthMismatch {
            num_edges,
            expected,
            actual,
        });
    }
    if num_vertices > u32::MAX as u64 + 1 {
        return Err(GraphIoError::BadRecord {
            index: 0,
            src: 0,
            dst: 0,
            num_vertices,
        });
    }
    let edges = bytes[HEADER_BYTES as usize..]
        .chunks_exact(RECORD_BYTES as usize)
        .enumerate()
        .map(|(i, r)| {
            let src = u64::from_le_bytes(r[0..8].try_into().unwrap());
            let dst = u64::from_le_bytes(r[8..16].try_into().unwrap());
            let value = f64::from_le_bytes(r[16..24].try_into().unwrap());
            if src >= num_vertices || dst >= num_vertices {
                return Err(GraphIoError::BadRecord {
                    index: i as u64,
                    src,
                    dst,
                    num_vertices,
                });
            }
            Ok(EdgeTriple::new(src as u32, dst as u32, value))
        })
        .collect::<Result<Vec<_>, _>>()?;
    Ok((edges, num_vertices as usize))
}

pub fn write_binary(path: impl AsRef<Path>, edges: &[EdgeTriple<f64>], num_vertices: usize) -> Result<(), GraphIoError> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| GraphIoError::io(path, e))?;
    let mut w = BufWriter::new(file);
    encode(edges, num_vertices, &mut w)
        .and_then(|_| w.flush())
        .map_err(|e| GraphIoError::io(path, e))
}

pub fn read_binary(path: impl AsRef<Path>) -> Result<(Vec<EdgeTriple<f64>>, usize), GraphIoError> {
    let path = path.as_ref();
    let mut bytes = Vec::new();
    File::open(path)
        .and_then(|mut f| f.read_to_end(&mut bytes))
        .map_err(|e| GraphIoError::io(path, e))?;
    decode(&bytes)
}
