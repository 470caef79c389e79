//! The combinators.
//!
//! Reductions and scans follow one fixed evaluation tree: the input is cut
//! into `ceil(len / CHUNK)` chunks of [`CHUNK`] elements, each chunk is folded
//! left to right starting from its first element, and chunk partials are
//! folded left to right. Chunk boundaries depend only on the input length,
//! so results are bit-identical for every worker count.

use std::sync::atomic::{AtomicBool, Ordering};

use rayon::prelude::*;

use super::pool::install;
use super::{monoid, Monoid, ParArray, SegmentedVector};
use crate::error::{Error, Result};

/// Chunk length of the fixed reduction tree.
pub const CHUNK: usize = 4096;

// Elementwise work below this length stays on one worker.
const MIN_PAR_LEN: usize = 2048;

// Upper bound on the total number of partial-histogram slots that
// `reduce_by_index` allocates at once.
const PARTIAL_BUDGET: usize = 1 << 22;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ScanMode {
    Inclusive,
    Exclusive,
}

/// Evaluation policy for `reduce_by_index`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Determinism {
    /// Per-chunk partial histograms merged in chunk order.
    #[default]
    Deterministic,
    /// Work-stealing fold; bucket values may differ in the last bits between
    /// runs for non-associative-in-practice operators such as float `+`.
    Relaxed,
}

struct SharedMut<E>(*mut E);

unsafe impl<E: Send> Send for SharedMut<E> {}
unsafe impl<E: Send> Sync for SharedMut<E> {}

impl<E> SharedMut<E> {
    /// # Safety
    /// `i` must be in bounds and no other thread may access slot `i`
    /// concurrently.
    #[inline]
    unsafe fn write(&self, i: usize, v: E) {
        unsafe { self.0.add(i).write(v) }
    }
}

pub fn map<A, B, F>(xs: &[A], f: F) -> ParArray<B>
where
    A: Copy + Sync,
    B: Send,
    F: Fn(A) -> B + Sync + Send,
{
    install(|| {
        xs.par_iter()
            .with_min_len(MIN_PAR_LEN)
            .map(|&x| f(x))
            .collect::<Vec<_>>()
            .into()
    })
}

pub fn map2<A, B, C, F>(xs: &[A], ys: &[B], f: F) -> Result<ParArray<C>>
where
    A: Copy + Sync,
    B: Copy + Sync,
    C: Send,
    F: Fn(A, B) -> C + Sync + Send,
{
    if xs.len() != ys.len() {
        return Err(Error::LengthMismatch {
            left: xs.len(),
            right: ys.len(),
        });
    }
    Ok(install(|| {
        xs.par_iter()
            .zip(ys.par_iter())
            .with_min_len(MIN_PAR_LEN)
            .map(|(&x, &y)| f(x, y))
            .collect::<Vec<_>>()
            .into()
    }))
}

/// `map` over the index space `0..n`.
pub fn tabulate<E, F>(n: usize, f: F) -> ParArray<E>
where
    E: Send,
    F: Fn(usize) -> E + Sync + Send,
{
    install(|| {
        (0..n)
            .into_par_iter()
            .with_min_len(MIN_PAR_LEN)
            .map(&f)
            .collect::<Vec<_>>()
            .into()
    })
}

/// `map` producing a regular `rows × row_len` array: `f(r, row)` fills row `r`.
pub fn tabulate_rows<E, F>(rows: usize, row_len: usize, f: F) -> ParArray<E>
where
    E: Copy + Default + Send + Sync,
    F: Fn(usize, &mut [E]) + Sync + Send,
{
    let mut out = vec![E::default(); rows * row_len];
    if row_len > 0 {
        install(|| {
            out.par_chunks_mut(row_len)
                .enumerate()
                .for_each(|(r, row)| f(r, row))
        });
    }
    out.into()
}

pub fn iota(n: usize) -> ParArray<usize> {
    tabulate(n, |i| i)
}

pub fn replicate<E: Copy + Send + Sync>(n: usize, x: E) -> ParArray<E> {
    tabulate(n, |_| x)
}

#[inline]
fn fold_range<E, Op, G>(start: usize, end: usize, op: &Op, get: &G) -> E
where
    Op: Fn(E, E) -> E,
    G: Fn(usize) -> E,
{
    let mut acc = get(start);
    for i in start + 1..end {
        acc = op(acc, get(i));
    }
    acc
}

fn chunk_partials<E, Op, G>(len: usize, op: &Op, get: &G) -> Vec<E>
where
    E: Send,
    Op: Fn(E, E) -> E + Sync,
    G: Fn(usize) -> E + Sync,
{
    let chunks = len.div_ceil(CHUNK);
    let bounds = |c: usize| (c * CHUNK, ((c + 1) * CHUNK).min(len));
    if chunks == 1 {
        return vec![fold_range(0, len, op, get)];
    }
    install(|| {
        (0..chunks)
            .into_par_iter()
            .map(|c| {
                let (s, e) = bounds(c);
                fold_range(s, e, op, get)
            })
            .collect()
    })
}

pub fn reduce<E, F>(xs: &[E], m: &Monoid<E, F>) -> E
where
    E: Copy + Send + Sync,
    F: Fn(E, E) -> E + Sync,
{
    reduce_indexed(xs.len(), m, |i| xs[i])
}

/// `reduce(tabulate(len, f), m)` without materializing the mapped array.
/// Uses the same evaluation tree, so the result is bit-identical.
pub fn reduce_indexed<E, F, G>(len: usize, m: &Monoid<E, F>, f: G) -> E
where
    E: Copy + Send + Sync,
    F: Fn(E, E) -> E + Sync,
    G: Fn(usize) -> E + Sync,
{
    if len == 0 {
        return m.neutral();
    }
    let partials = chunk_partials(len, m.op(), &f);
    partials[1..]
        .iter()
        .fold(partials[0], |acc, &p| m.combine(acc, p))
}

fn inclusive_scan_with<E, Op>(xs: &[E], op: &Op) -> Vec<E>
where
    E: Copy + Send + Sync,
    Op: Fn(E, E) -> E + Sync,
{
    let len = xs.len();
    let mut out = xs.to_vec();
    if len == 0 {
        return out;
    }
    install(|| {
        out.par_chunks_mut(CHUNK).for_each(|c| {
            for i in 1..c.len() {
                c[i] = op(c[i - 1], c[i]);
            }
        })
    });
    let chunks = len.div_ceil(CHUNK);
    if chunks > 1 {
        // offsets[c - 1] is the fold of every chunk before chunk c.
        let mut offsets = Vec::with_capacity(chunks - 1);
        let mut acc = out[CHUNK - 1];
        offsets.push(acc);
        for c in 1..chunks - 1 {
            acc = op(acc, out[(c + 1) * CHUNK - 1]);
            offsets.push(acc);
        }
        install(|| {
            out.par_chunks_mut(CHUNK)
                .skip(1)
                .zip(offsets.par_iter())
                .for_each(|(c, &off)| {
                    for x in c {
                        *x = op(off, *x);
                    }
                })
        });
    }
    out
}

pub fn scan<E, F>(xs: &[E], m: &Monoid<E, F>, mode: ScanMode) -> ParArray<E>
where
    E: Copy + Send + Sync,
    F: Fn(E, E) -> E + Sync,
{
    let inclusive = inclusive_scan_with(xs, m.op());
    match mode {
        ScanMode::Inclusive => inclusive.into(),
        ScanMode::Exclusive => {
            let neutral = m.neutral();
            tabulate(xs.len(), |i| if i == 0 { neutral } else { inclusive[i - 1] })
        }
    }
}

pub fn segmented_scan<E, F>(sv: &SegmentedVector<E>, m: &Monoid<E, F>, mode: ScanMode) -> ParArray<E>
where
    E: Copy + Send + Sync,
    F: Fn(E, E) -> E + Sync,
{
    segmented_scan_raw(sv.data(), sv.flags(), m, mode)
        .expect("segmented vector invariants hold by construction")
}

/// Segmented scan over a data array and a parallel start-flag array.
pub fn segmented_scan_flags<E, F>(
    data: &[E],
    flags: &[bool],
    m: &Monoid<E, F>,
    mode: ScanMode,
) -> Result<ParArray<E>>
where
    E: Copy + Send + Sync,
    F: Fn(E, E) -> E + Sync,
{
    if data.len() != flags.len() {
        return Err(Error::LengthMismatch {
            left: data.len(),
            right: flags.len(),
        });
    }
    if !flags.is_empty() && !flags[0] {
        return Err(Error::MalformedSegments("first flag must be set"));
    }
    segmented_scan_raw(data, flags, m, mode)
}

fn segmented_scan_raw<E, F>(
    data: &[E],
    flags: &[bool],
    m: &Monoid<E, F>,
    mode: ScanMode,
) -> Result<ParArray<E>>
where
    E: Copy + Send + Sync,
    F: Fn(E, E) -> E + Sync,
{
    let pairs: Vec<(bool, E)> = flags.iter().copied().zip(data.iter().copied()).collect();
    let lifted = |a: (bool, E), b: (bool, E)| {
        if b.0 {
            b
        } else {
            (a.0, m.combine(a.1, b.1))
        }
    };
    let inclusive = inclusive_scan_with(&pairs, &lifted);
    Ok(match mode {
        ScanMode::Inclusive => map(&inclusive, |p| p.1),
        ScanMode::Exclusive => {
            let neutral = m.neutral();
            tabulate(
                data.len(),
                |i| {
                    if flags[i] {
                        neutral
                    } else {
                        inclusive[i - 1].1
                    }
                },
            )
        }
    })
}

/// Segment number of every element: the inclusive count of set flags minus one.
pub fn segment_ids(flags: &[bool]) -> ParArray<usize> {
    let counts = map(flags, |f| f as usize);
    let ids = scan(&counts, &monoid::sum(), ScanMode::Inclusive);
    map(&ids, |c| c.wrapping_sub(1))
}

fn check_scatter_indices(indices: &[i64], len: usize) -> Result<()> {
    let bad = install(|| {
        indices
            .par_iter()
            .with_min_len(MIN_PAR_LEN)
            .position_first(|&ix| ix >= 0 && ix as u64 >= len as u64)
    });
    if let Some(pos) = bad {
        return Err(Error::IndexOutOfBounds {
            index: indices[pos],
            len,
        });
    }
    let seen: Vec<AtomicBool> = (0..len).map(|_| AtomicBool::new(false)).collect();
    let duplicated = install(|| {
        indices
            .par_iter()
            .with_min_len(MIN_PAR_LEN)
            .any(|&ix| ix >= 0 && seen[ix as usize].swap(true, Ordering::Relaxed))
    });
    if duplicated {
        // Report the first duplicate in input order.
        let mut mark = vec![false; len];
        for &ix in indices.iter().filter(|&&ix| ix >= 0) {
            let slot = &mut mark[ix as usize];
            if *slot {
                return Err(Error::DuplicateIndex { index: ix as usize });
            }
            *slot = true;
        }
    }
    Ok(())
}

/// Copy of `dest` with `dest[indices[i]] = values[i]`. Negative indices are
/// sentinels and are skipped.
pub fn scatter<E>(dest: &[E], indices: &[i64], values: &[E]) -> Result<ParArray<E>>
where
    E: Copy + Send + Sync,
{
    if indices.len() != values.len() {
        return Err(Error::LengthMismatch {
            left: indices.len(),
            right: values.len(),
        });
    }
    check_scatter_indices(indices, dest.len())?;
    let mut out = dest.to_vec();
    let target = SharedMut(out.as_mut_ptr());
    install(|| {
        indices
            .par_iter()
            .zip(values.par_iter())
            .with_min_len(MIN_PAR_LEN)
            .for_each(|(&ix, &v)| {
                if ix >= 0 {
                    // SAFETY: indices were checked to be in bounds and unique.
                    unsafe { target.write(ix as usize, v) }
                }
            })
    });
    Ok(out.into())
}

pub fn gather<E>(src: &[E], indices: &[usize]) -> Result<ParArray<E>>
where
    E: Copy + Send + Sync,
{
    let bad = install(|| {
        indices
            .par_iter()
            .with_min_len(MIN_PAR_LEN)
            .position_first(|&ix| ix >= src.len())
    });
    if let Some(pos) = bad {
        return Err(Error::IndexOutOfBounds {
            index: indices[pos] as i64,
            len: src.len(),
        });
    }
    Ok(map(indices, |ix| src[ix]))
}

/// Stable split into `(satisfying, rest)`, built from map, scan and scatter.
pub fn partition<E, P>(xs: &[E], pred: P) -> (ParArray<E>, ParArray<E>)
where
    E: Copy + Send + Sync,
    P: Fn(E) -> bool + Sync + Send,
{
    let n = xs.len();
    if n == 0 {
        return (ParArray::default(), ParArray::default());
    }
    let flags = map(xs, |x| pred(x) as usize);
    let offsets = scan(&flags, &monoid::sum(), ScanMode::Exclusive);
    let n_true = offsets[n - 1] + flags[n - 1];
    let true_idx = tabulate(n, |i| if flags[i] == 1 { offsets[i] as i64 } else { -1 });
    let false_idx = tabulate(n, |i| {
        if flags[i] == 0 {
            (i - offsets[i]) as i64
        } else {
            -1
        }
    });
    let trues = scatter(&replicate(n_true, xs[0]), &true_idx, xs)
        .expect("partition offsets are in bounds and unique");
    let falses = scatter(&replicate(n - n_true, xs[0]), &false_idx, xs)
        .expect("partition offsets are in bounds and unique");
    (trues, falses)
}

/// Generalized histogram: `result[k] = m(dest[k], fold of values[i] with indices[i] == k)`.
pub fn reduce_by_index<E, F>(
    dest: &[E],
    m: &Monoid<E, F>,
    indices: &[usize],
    values: &[E],
) -> Result<ParArray<E>>
where
    E: Copy + Send + Sync,
    F: Fn(E, E) -> E + Sync,
{
    reduce_by_index_with(dest, m, indices, values, Determinism::Deterministic)
}

pub fn reduce_by_index_with<E, F>(
    dest: &[E],
    m: &Monoid<E, F>,
    indices: &[usize],
    values: &[E],
    mode: Determinism,
) -> Result<ParArray<E>>
where
    E: Copy + Send + Sync,
    F: Fn(E, E) -> E + Sync,
{
    if indices.len() != values.len() {
        return Err(Error::LengthMismatch {
            left: indices.len(),
            right: values.len(),
        });
    }
    if !m.is_commutative() {
        return Err(Error::InvalidSpec(
            "reduce_by_index requires a commutative monoid".into(),
        ));
    }
    let buckets = dest.len();
    let bad = install(|| {
        indices
            .par_iter()
            .with_min_len(MIN_PAR_LEN)
            .position_first(|&ix| ix >= buckets)
    });
    if let Some(pos) = bad {
        return Err(Error::IndexOutOfBounds {
            index: indices[pos] as i64,
            len: buckets,
        });
    }
    let len = indices.len();
    if len == 0 {
        return Ok(dest.to_vec().into());
    }
    let neutral = m.neutral();
    let accumulate = |hist: &mut Vec<E>, range: std::ops::Range<usize>| {
        for i in range {
            let k = indices[i];
            hist[k] = m.combine(hist[k], values[i]);
        }
    };
    match mode {
        Determinism::Deterministic => {
            let chunk = CHUNK.max(len.saturating_mul(buckets).div_ceil(PARTIAL_BUDGET));
            let chunks = len.div_ceil(chunk);
            let partials: Vec<Vec<E>> = install(|| {
                (0..chunks)
                    .into_par_iter()
                    .map(|c| {
                        let mut hist = vec![neutral; buckets];
                        accumulate(&mut hist, c * chunk..((c + 1) * chunk).min(len));
                        hist
                    })
                    .collect()
            });
            Ok(tabulate(buckets, |k| {
                partials.iter().fold(dest[k], |acc, hist| m.combine(acc, hist[k]))
            }))
        }
        Determinism::Relaxed => {
            let hist = install(|| {
                (0..len)
                    .into_par_iter()
                    .with_min_len(MIN_PAR_LEN)
                    .fold(
                        || vec![neutral; buckets],
                        |mut hist, i| {
                            let k = indices[i];
                            hist[k] = m.combine(hist[k], values[i]);
                            hist
                        },
                    )
                    .reduce(
                        || vec![neutral; buckets],
                        |mut a, b| {
                            for (x, y) in a.iter_mut().zip(b) {
                                *x = m.combine(*x, y);
                            }
                            a
                        },
                    )
            });
            Ok(tabulate(buckets, |k| m.combine(dest[k], hist[k])))
        }
    }
}
