//! Doubly compressed sparse column storage for one row slab of a matrix.
//!
//! Only columns holding at least one nonzero are listed, so a slab of a
//! very sparse matrix costs memory proportional to its nonzeros rather than
//! to the column count. Column lookup is a binary search over `col_ids`;
//! there is no auxiliary column index.

use std::ops::Range;

use crate::types::VertexId;

#[derive(Clone, Debug, PartialEq)]
pub struct DcscPartition<E> {
    pub(crate) row_lo: usize,
    pub(crate) row_hi: usize,
    pub(crate) col_ids: Vec<u32>,
    pub(crate) col_starts: Vec<usize>,
    pub(crate) row_ids: Vec<u32>,
    pub(crate) values: Vec<E>,
}

/// A `(row, col)` pair appeared twice while building a partition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(crate) struct DuplicateEntry {
    pub row: u32,
    pub col: u32,
}

impl<E> DcscPartition<E> {
    pub fn empty(rows: Range<usize>) -> Self {
        DcscPartition {
            row_lo: rows.start,
            row_hi: rows.end,
            col_ids: Vec::new(),
            col_starts: vec![0],
            row_ids: Vec::new(),
            values: Vec::new(),
        }
    }

    /// Builds from `(col, row, value)` entries sorted by `(col, row)`, all
    /// with rows inside `rows`.
    pub(crate) fn from_sorted(
        rows: Range<usize>,
        entries: Vec<(u32, u32, E)>,
    ) -> Result<Self, DuplicateEntry> {
        let mut part = Self::empty(rows);
        part.row_ids.reserve(entries.len());
        part.values.reserve(entries.len());
        let mut prev: Option<(u32, u32)> = None;
        for (col, row, value) in entries {
            debug_assert!((part.row_lo..part.row_hi).contains(&(row as usize)));
            match prev {
                Some(p) if p == (col, row) => return Err(DuplicateEntry { row, col }),
                Some((pc, _)) if pc == col => {}
                _ => {
                    if !part.col_ids.is_empty() {
                        part.col_starts.push(part.row_ids.len());
                    }
                    part.col_ids.push(col);
                }
            }
            part.row_ids.push(row);
            part.values.push(value);
            prev = Some((col, row));
        }
        if !part.col_ids.is_empty() {
            part.col_starts.push(part.row_ids.len());
        }
        Ok(part)
    }

    pub fn row_range(&self) -> Range<usize> {
        self.row_lo..self.row_hi
    }

    pub fn nnz(&self) -> usize {
        self.row_ids.len()
    }

    pub fn col_ids(&self) -> &[u32] {
        &self.col_ids
    }

    pub fn col_starts(&self) -> &[usize] {
        &self.col_starts
    }

    pub fn row_ids(&self) -> &[u32] {
        &self.row_ids
    }

    pub fn values(&self) -> &[E] {
        &self.values
    }

    /// Rows and values of the `i`-th listed column.
    #[inline]
    pub(crate) fn column_at(&self, i: usize) -> (&[u32], &[E]) {
        let span = self.col_starts[i]..self.col_starts[i + 1];
        (&self.row_ids[span.clone()], &self.values[span])
    }

    /// Nonzeros of column `col` inside this slab, ascending by row. Empty
    /// when the column is compressed out.
    pub fn iterate_column(&self, col: VertexId) -> impl Iterator<Item = (VertexId, &E)> + '_ {
        let (rows, vals): (&[u32], &[E]) = match self.col_ids.binary_search(&col.0) {
            Ok(i) => self.column_at(i),
            Err(_) => (&[], &[]),
        };
        rows.iter().map(|&r| VertexId(r)).zip(vals)
    }

    /// Every stored `(row, col, value)` in column-major order.
    pub fn entries(&self) -> impl Iterator<Item = (VertexId, VertexId, &E)> + '_ {
        (0..self.col_ids.len()).flat_map(move |i| {
            let col = VertexId(self.col_ids[i]);
            let (rows, vals) = self.column_at(i);
            rows.iter().zip(vals).map(move |(&r, v)| (VertexId(r), col, v))
        })
    }

    /// Checks the structural invariants, describing the first violation.
    pub fn validate(&self) -> Result<(), String> {
        if self.col_starts.len() != self.col_ids.len() + 1 {
            return Err("col_starts must have one more entry than col_ids".into());
        }
        if self.col_starts[0] != 0 {
            return Err("col_starts[0] must be 0".into());
        }
        if *self.col_starts.last().unwrap() != self.row_ids.len()
            || self.row_ids.len() != self.values.len()
        {
            return Err("last col_start must equal the nonzero count".into());
        }
        if self.col_starts.windows(2).any(|w| w[1] <= w[0]) {
            return Err("listed columns must be non-empty".into());
        }
        if self.col_ids.windows(2).any(|w| w[1] <= w[0]) {
            return Err("col_ids must be strictly ascending".into());
        }
        for i in 0..self.col_ids.len() {
            let (rows, _) = self.column_at(i);
            if rows.windows(2).any(|w| w[1] <= w[0]) {
                return Err(format!("rows of column {} not strictly ascending", self.col_ids[i]));
            }
        }
        if let Some(&r) = self
            .row_ids
            .iter()
            .find(|&&r| !(self.row_lo..self.row_hi).contains(&(r as usize)))
        {
            return Err(format!("row {r} outside {:?}", self.row_range()));
        }
        Ok(())
    }
}
