use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::par;

/// Dense row-major `f32` matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    rows: usize,
    cols: usize,
    data: Vec<f32>,
}

impl Matrix {
    pub fn new(rows: usize, cols: usize, data: Vec<f32>) -> Result<Self> {
        if rows.checked_mul(cols) != Some(data.len()) {
            return Err(Error::Shape(format!(
                "{rows}x{cols} matrix needs {} values, got {}",
                rows.saturating_mul(cols),
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            rows,
            cols,
            data: vec![0.0; rows * cols],
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> f32) -> Self {
        let data = (0..rows * cols)
            .map(|k| f(k / cols.max(1), k % cols.max(1)))
            .collect();
        Self { rows, cols, data }
    }

    /// Entries uniform in `[lo, hi)`.
    pub fn random(rows: usize, cols: usize, lo: f32, hi: f32, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let data = (0..rows * cols).map(|_| rng.gen_range(lo..hi)).collect();
        Self { rows, cols, data }
    }

    pub(crate) fn from_par(rows: usize, cols: usize, data: par::ParArray<f32>) -> Self {
        debug_assert_eq!(data.len(), rows * cols);
        Self {
            rows,
            cols,
            data: data.into_vec(),
        }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn as_slice(&self) -> &[f32] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f32> {
        self.data
    }

    pub fn row(&self, i: usize) -> &[f32] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    /// Rows `start..start + count` as a borrowed view.
    pub(crate) fn row_block(&self, start: usize, count: usize) -> &[f32] {
        &self.data[start * self.cols..(start + count) * self.cols]
    }

    pub fn get(&self, i: usize, j: usize) -> f32 {
        self.data[i * self.cols + j]
    }

    pub fn max_abs_diff(&self, other: &Matrix) -> Result<f32> {
        if (self.rows, self.cols) != (other.rows, other.cols) {
            return Err(Error::Shape(format!(
                "{}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f32::max))
    }
}

/// `a · bᵀ` for an `m × k` block `a` and an `n × k` block `b` into the
/// `m × n` block `out`, accumulating each dot product sequentially over `k`.
pub(crate) fn mm_nt_into(a: &[f32], b: &[f32], k: usize, n: usize, out: &mut [f32]) {
    if n == 0 {
        return;
    }
    for (i, row) in out.chunks_mut(n).enumerate() {
        let ai = &a[i * k..(i + 1) * k];
        for (j, o) in row.iter_mut().enumerate() {
            let bj = &b[j * k..(j + 1) * k];
            let mut acc = 0.0f32;
            for t in 0..k {
                acc += ai[t] * bj[t];
            }
            *o = acc;
        }
    }
}

/// `out += p · v` for an `m × n` block `p` and an `n × d` block `v`,
/// accumulating sequentially over `n`.
pub(crate) fn mm_nn_acc(p: &[f32], v: &[f32], n: usize, d: usize, out: &mut [f32]) {
    if d == 0 {
        return;
    }
    for (i, orow) in out.chunks_mut(d).enumerate() {
        let prow = &p[i * n..(i + 1) * n];
        for (t, &w) in prow.iter().enumerate() {
            let vrow = &v[t * d..(t + 1) * d];
            for (o, &x) in orow.iter_mut().zip(vrow) {
                *o += w * x;
            }
        }
    }
}

/// `A · Bᵀ` for `A: m × k` and `B: n × k`, parallel over rows of the result.
pub fn matmul_nt(a: &Matrix, b: &Matrix) -> Result<Matrix> {
    if a.cols != b.cols {
        return Err(Error::Shape(format!(
            "inner dimensions differ: {}x{} times ({}x{})ᵀ",
            a.rows, a.cols, b.rows, b.cols
        )));
    }
    let k = a.cols;
    let data = par::tabulate_rows(a.rows, b.rows, |i, out| {
        mm_nt_into(a.row(i), &b.data, k, b.rows, out);
    });
    Ok(Matrix::from_par(a.rows, b.rows, data))
}
