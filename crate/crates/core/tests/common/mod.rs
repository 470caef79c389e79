//! Sequential reference implementations shared by the integration and
//! acceptance tests.
#![allow(dead_code)]

use flatpar::par::CHUNK;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub const LENGTHS: [usize; 6] = [0, 1, 2, 7, 1000, 100_000];
pub const THREADS: [usize; 3] = [1, 2, 8];

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

pub fn ints(len: usize, seed: u64) -> Vec<i64> {
    let mut r = rng(seed);
    (0..len).map(|_| r.gen_range(-1000..1000)).collect()
}

pub fn floats(len: usize, seed: u64) -> Vec<f64> {
    let mut r = rng(seed);
    (0..len)
        .map(|_| r.gen_range(-1.0..1.0) * 10f64.powi(r.gen_range(-3..4)))
        .collect()
}

/// Runs `f` under every thread count and asserts the results are identical.
pub fn same_across_threads<R: PartialEq + std::fmt::Debug>(f: impl Fn() -> R) -> R {
    let first = flatpar::par::with_threads(THREADS[0], &f);
    for &t in &THREADS[1..] {
        assert_eq!(flatpar::par::with_threads(t, &f), first, "differs at {t} threads");
    }
    first
}

/// Chunks of `CHUNK` folded from their first element, partials folded
/// left to right.
pub fn tree_reduce<E: Copy>(xs: &[E], neutral: E, op: impl Fn(E, E) -> E) -> E {
    let partials: Vec<E> = xs
        .chunks(CHUNK)
        .map(|c| c[1..].iter().fold(c[0], |a, &b| op(a, b)))
        .collect();
    match partials.split_first() {
        None => neutral,
        Some((&first, rest)) => rest.iter().fold(first, |a, &b| op(a, b)),
    }
}

/// Inclusive scan on the same tree: local prefixes per chunk, each offset
/// by the left-to-right fold of all earlier chunk totals.
pub fn tree_scan<E: Copy>(xs: &[E], op: impl Fn(E, E) -> E) -> Vec<E> {
    let mut out = Vec::with_capacity(xs.len());
    let mut offset: Option<E> = None;
    for c in xs.chunks(CHUNK) {
        let mut local = Vec::with_capacity(c.len());
        let mut acc = c[0];
        local.push(acc);
        for &x in &c[1..] {
            acc = op(acc, x);
            local.push(acc);
        }
        match offset {
            None => out.extend(&local),
            Some(off) => out.extend(local.iter().map(|&l| op(off, l))),
        }
        offset = Some(match offset {
            None => acc,
            Some(off) => op(off, acc),
        });
    }
    out
}

pub fn exclusive_from_inclusive<E: Copy>(inc: &[E], neutral: E) -> Vec<E> {
    (0..inc.len())
        .map(|i| if i == 0 { neutral } else { inc[i - 1] })
        .collect()
}

pub fn seq_segmented_scan(data: &[i64], flags: &[bool], inclusive: bool) -> Vec<i64> {
    let mut out = Vec::with_capacity(data.len());
    let mut acc = 0;
    for (&x, &f) in data.iter().zip(flags) {
        if f {
            acc = 0;
        }
        if inclusive {
            acc += x;
            out.push(acc);
        } else {
            out.push(acc);
            acc += x;
        }
    }
    out
}

pub fn random_flags(len: usize, seed: u64) -> Vec<bool> {
    let mut r = rng(seed);
    (0..len).map(|i| i == 0 || r.gen_bool(0.05)).collect()
}

/// A permutation of `0..len` with a random subset replaced by -1.
pub fn scatter_indices(len: usize, seed: u64) -> Vec<i64> {
    use rand::seq::SliceRandom;
    let mut r = rng(seed);
    let mut idx: Vec<i64> = (0..len as i64).collect();
    idx.shuffle(&mut r);
    for i in idx.iter_mut() {
        if r.gen_bool(0.1) {
            *i = -1;
        }
    }
    idx
}

pub fn seq_scatter<E: Copy>(dest: &[E], idx: &[i64], vals: &[E]) -> Vec<E> {
    let mut out = dest.to_vec();
    for (&i, &v) in idx.iter().zip(vals) {
        if i >= 0 {
            out[i as usize] = v;
        }
    }
    out
}

pub fn seq_histogram(buckets: usize, idx: &[usize], vals: &[i64]) -> Vec<i64> {
    let mut out = vec![0; buckets];
    for (&i, &v) in idx.iter().zip(vals) {
        out[i] += v;
    }
    out
}
