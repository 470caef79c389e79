use std::ops::Deref;

use crate::error::{Error, Result};

/// Immutable flat array of plain values.
///
/// Combinators accept slices, so a `&ParArray<E>` can be passed anywhere a
/// `&[E]` is expected.
#[derive(Clone, Debug, PartialEq)]
pub struct ParArray<E> {
    values: Vec<E>,
}

impl<E> ParArray<E> {
    pub fn from_vec(values: Vec<E>) -> Self {
        Self { values }
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    /// Total element access: `None` past the end, never a panic.
    pub fn get(&self, i: usize) -> Option<&E> {
        self.values.get(i)
    }

    pub fn as_slice(&self) -> &[E] {
        &self.values
    }

    pub fn into_vec(self) -> Vec<E> {
        self.values
    }
}

impl<E> Default for ParArray<E> {
    fn default() -> Self {
        Self { values: Vec::new() }
    }
}

impl<E> Deref for ParArray<E> {
    type Target = [E];

    fn deref(&self) -> &[E] {
        &self.values
    }
}

impl<E> From<Vec<E>> for ParArray<E> {
    fn from(values: Vec<E>) -> Self {
        Self { values }
    }
}

impl<E: Clone> From<&[E]> for ParArray<E> {
    fn from(values: &[E]) -> Self {
        Self {
            values: values.to_vec(),
        }
    }
}

impl<E> FromIterator<E> for ParArray<E> {
    fn from_iter<I: IntoIterator<Item = E>>(iter: I) -> Self {
        Self {
            values: iter.into_iter().collect(),
        }
    }
}

impl<E> IntoIterator for ParArray<E> {
    type Item = E;
    type IntoIter = std::vec::IntoIter<E>;

    fn into_iter(self) -> Self::IntoIter {
        self.values.into_iter()
    }
}

impl<'a, E> IntoIterator for &'a ParArray<E> {
    type Item = &'a E;
    type IntoIter = std::slice::Iter<'a, E>;

    fn into_iter(self) -> Self::IntoIter {
        self.values.iter()
    }
}

/// A flat data array split into contiguous segments by a start-flag array.
///
/// `flags[i]` is true when a new segment begins at `i`. A non-empty vector
/// always has `flags[0] == true`.
#[derive(Clone, Debug, PartialEq)]
pub struct SegmentedVector<E> {
    data: ParArray<E>,
    flags: ParArray<bool>,
    segment_count: usize,
}

impl<E> SegmentedVector<E> {
    pub fn new(data: ParArray<E>, flags: ParArray<bool>) -> Result<Self> {
        if data.len() != flags.len() {
            return Err(Error::LengthMismatch {
                left: data.len(),
                right: flags.len(),
            });
        }
        if !flags.is_empty() && !flags[0] {
            return Err(Error::MalformedSegments("first flag must be set"));
        }
        let segment_count = flags.iter().filter(|&&f| f).count();
        Ok(Self {
            data,
            flags,
            segment_count,
        })
    }

    /// Builds a segmented vector from per-segment lengths. Zero-length
    /// segments cannot be represented by flags and are rejected.
    pub fn from_lengths(data: ParArray<E>, lengths: &[usize]) -> Result<Self> {
        let total: usize = lengths.iter().sum();
        if total != data.len() {
            return Err(Error::LengthMismatch {
                left: data.len(),
                right: total,
            });
        }
        if lengths.contains(&0) {
            return Err(Error::MalformedSegments("empty segment"));
        }
        let mut flags = vec![false; total];
        let mut at = 0;
        for &len in lengths {
            flags[at] = true;
            at += len;
        }
        Self::new(data, flags.into())
    }

    pub fn empty() -> Self {
        Self {
            data: ParArray::default(),
            flags: ParArray::default(),
            segment_count: 0,
        }
    }

    pub fn data(&self) -> &ParArray<E> {
        &self.data
    }

    pub fn flags(&self) -> &ParArray<bool> {
        &self.flags
    }

    pub fn segment_count(&self) -> usize {
        self.segment_count
    }

    pub fn len(&self) -> usize {
        self.data.len()
    }

    pub fn is_empty(&self) -> bool {
        self.data.is_empty()
    }

    /// Start offset of every segment, in order.
    pub fn offsets(&self) -> Vec<usize> {
        self.flags
            .iter()
            .enumerate()
            .filter_map(|(i, &f)| f.then_some(i))
            .collect()
    }

    /// Iterates the segments as slices.
    pub fn segments(&self) -> impl Iterator<Item = &[E]> + '_ {
        let offsets = self.offsets();
        let len = self.data.len();
        (0..offsets.len()).map(move |s| {
            let end = offsets.get(s + 1).copied().unwrap_or(len);
            &self.data[offsets[s]..end]
        })
    }

    pub fn into_parts(self) -> (ParArray<E>, ParArray<bool>) {
        (self.data, self.flags)
    }
}
