//! Sparse vector backed by a validity bitvector and a full-length value
//! array.
//!
//! Membership tests are a single word load, and the bitvector is small
//! enough to stay cache resident while many workers probe it. Values at
//! clear positions hold `T::default()` and must not be read.
//!
//! Parallel writers obtain disjoint [`Segment`]s through
//! [`SparseVector::segments_mut`]. Value slots are split with
//! `split_at_mut`; the bit words are shared and updated with atomic
//! `fetch_or`, since a segment boundary may fall inside a word.

use std::ops::Range;
use std::sync::atomic::{AtomicU64, Ordering};

const WORD_BITS: usize = 64;

#[inline]
fn word_count(len: usize) -> usize {
    len.div_ceil(WORD_BITS)
}

#[derive(Debug)]
pub struct SparseVector<T> {
    len: usize,
    bits: Vec<AtomicU64>,
    values: Vec<T>,
}

impl<T: Default> SparseVector<T> {
    /// All-clear vector with `len` slots.
    pub fn new(len: usize) -> Self {
        SparseVector {
            len,
            bits: (0..word_count(len)).map(|_| AtomicU64::new(0)).collect(),
            values: std::iter::repeat_with(T::default).take(len).collect(),
        }
    }

    pub fn from_entries(len: usize, entries: impl IntoIterator<Item = (usize, T)>) -> Self {
        let mut v = Self::new(len);
        for (i, x) in entries {
            v.set(i, x);
        }
        v
    }

    /// Removes the entry at `index`, returning its value if it was valid.
    pub fn take(&mut self, index: usize) -> Option<T> {
        if !self.contains(index) {
            return None;
        }
        *self.bits[index / WORD_BITS].get_mut() &= !(1u64 << (index % WORD_BITS));
        Some(std::mem::take(&mut self.values[index]))
    }
}

impl<T> SparseVector<T> {
    #[inline]
    pub fn len(&self) -> usize {
        self.len
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    /// Number of valid entries.
    pub fn nnz(&self) -> usize {
        self.bits
            .iter()
            .map(|w| w.load(Ordering::Relaxed).count_ones() as usize)
            .sum()
    }

    #[inline]
    pub fn contains(&self, index: usize) -> bool {
        index < self.len
            && self.bits[index / WORD_BITS].load(Ordering::Relaxed) & (1u64 << (index % WORD_BITS))
                != 0
    }

    #[inline]
    pub fn get(&self, index: usize) -> Option<&T> {
        if self.contains(index) {
            Some(&self.values[index])
        } else {
            None
        }
    }

    /// Value at a position known to be valid.
    #[inline]
    pub fn value(&self, index: usize) -> &T {
        debug_assert!(self.contains(index), "read of clear sparse-vector slot {index}");
        &self.values[index]
    }

    #[inline]
    pub fn get_mut(&mut self, index: usize) -> Option<&mut T> {
        if self.contains(index) {
            Some(&mut self.values[index])
        } else {
            None
        }
    }

    pub fn set(&mut self, index: usize, value: T) {
        assert!(index < self.len, "index {index} out of range for length {}", self.len);
        *self.bits[index / WORD_BITS].get_mut() |= 1u64 << (index % WORD_BITS);
        self.values[index] = value;
    }

    /// Valid indices in ascending order.
    pub fn indices(&self) -> Indices<'_> {
        Indices {
            bits: &self.bits,
            word: 0,
            current: self.bits.first().map_or(0, |w| w.load(Ordering::Relaxed)),
        }
    }

    /// Valid `(index, value)` pairs in ascending index order.
    pub fn iter(&self) -> impl Iterator<Item = (usize, &T)> + '_ {
        self.indices().map(move |i| (i, &self.values[i]))
    }

    /// Splits the vector into writers over the given ranges, which must be
    /// ascending, non-overlapping, and within bounds.
    pub fn segments_mut(&mut self, ranges: &[Range<usize>]) -> Vec<Segment<'_, T>> {
        let mut out = Vec::with_capacity(ranges.len());
        let bits: &[AtomicU64] = &self.bits;
        let mut rest: &mut [T] = &mut self.values;
        let mut consumed = 0;
        for r in ranges {
            assert!(r.start >= consumed && r.start <= r.end && r.end <= self.len);
            let (_, tail) = rest.split_at_mut(r.start - consumed);
            let (mine, tail) = tail.split_at_mut(r.end - r.start);
            rest = tail;
            consumed = r.end;
            out.push(Segment {
                lo: r.start,
                values: mine,
                bits,
            });
        }
        out
    }
}

impl<T: Clone> Clone for SparseVector<T> {
    fn clone(&self) -> Self {
        SparseVector {
            len: self.len,
            bits: self
                .bits
                .iter()
                .map(|w| AtomicU64::new(w.load(Ordering::Relaxed)))
                .collect(),
            values: self.values.clone(),
        }
    }
}

impl<T: PartialEq> PartialEq for SparseVector<T> {
    /// Equal when the valid index sets and the values at those indices agree.
    fn eq(&self, other: &Self) -> bool {
        self.len == other.len && self.iter().eq(other.iter())
    }
}

/// Ascending iterator over set bits.
pub struct Indices<'a> {
    bits: &'a [AtomicU64],
    word: usize,
    current: u64,
}

impl Iterator for Indices<'_> {
    type Item = usize;

    #[inline]
    fn next(&mut self) -> Option<usize> {
        loop {
            if self.current != 0 {
                let tz = self.current.trailing_zeros() as usize;
                self.current &= self.current - 1;
                return Some(self.word * WORD_BITS + tz);
            }
            self.word += 1;
            if self.word >= self.bits.len() {
                return None;
            }
            self.current = self.bits[self.word].load(Ordering::Relaxed);
        }
    }
}

/// Exclusive writer over one index range of a [`SparseVector`].
pub struct Segment<'a, T> {
    lo: usize,
    values: &'a mut [T],
    bits: &'a [AtomicU64],
}

impl<T> Segment<'_, T> {
    #[inline]
    pub fn range(&self) -> Range<usize> {
        self.lo..self.lo + self.values.len()
    }

    #[inline]
    pub fn contains(&self, index: usize) -> bool {
        debug_assert!(self.range().contains(&index), "index {index} outside segment {:?}", self.range());
        self.bits[index / WORD_BITS].load(Ordering::Relaxed) & (1u64 << (index % WORD_BITS)) != 0
    }

    #[inline]
    pub fn set(&mut self, index: usize, value: T) {
        self.values[index - self.lo] = value;
        self.bits[index / WORD_BITS].fetch_or(1u64 << (index % WORD_BITS), Ordering::Relaxed);
    }

    /// Mutable slot at `index`; the slot is only meaningful when valid.
    #[inline]
    pub fn slot_mut(&mut self, index: usize) -> &mut T {
        &mut self.values[index - self.lo]
    }
}
