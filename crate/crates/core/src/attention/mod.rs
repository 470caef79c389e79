//! Single-precision self-attention: the standard materialized form, a
//! block-of-queries form driven by online softmax, and the fused tiled form
//! that never holds more than one `Ti × Tj` score tile per row block.
//!
//! Scores are `Q·Kᵀ` with no `1/√d` factor; use [`AttentionProblem::scaled`]
//! when comparing against implementations that apply it.

use std::sync::atomic::{AtomicUsize, Ordering};

use crate::error::{Error, Result};
use crate::par;

mod matrix;

pub use matrix::{matmul_nt, Matrix};
use matrix::{mm_nn_acc, mm_nt_into};

/// Largest sequence length [`standard_attention`] accepts by default. Two
/// `N × N` buffers are materialized, 512 MiB at this size.
pub const STANDARD_MAX_N: usize = 8192;

pub const DEFAULT_TILE: usize = 64;

fn stable_softmax_row(s: &[f32], out: &mut [f32]) {
    let m = s.iter().copied().fold(f32::NEG_INFINITY, f32::max);
    let mut l = 0.0f32;
    for &x in s {
        l += (x - m).exp();
    }
    for (o, &x) in out.iter_mut().zip(s) {
        *o = (x - m).exp() / l;
    }
}

/// Running `(m, l)` over a row processed `t` entries at a time.
fn online_softmax_row(s: &[f32], t: usize, out: &mut [f32]) {
    let mut m = f32::NEG_INFINITY;
    let mut l = 0.0f32;
    for tile in s.chunks(t) {
        let m_tile = tile.iter().copied().fold(f32::NEG_INFINITY, f32::max);
        let m_next = m.max(m_tile);
        let mut sum = 0.0f32;
        for &x in tile {
            sum += (x - m_tile).exp();
        }
        let l_tile = (m_tile - m_next).exp() * sum;
        l = l_tile + l * (m - m_next).exp();
        m = m_next;
    }
    for (o, &x) in out.iter_mut().zip(s) {
        *o = (x - m).exp() / l;
    }
}

/// Row-wise softmax with the row maximum subtracted first.
pub fn stable_softmax(s: &Matrix) -> Matrix {
    let cols = s.cols();
    let data = par::tabulate_rows(s.rows(), cols, |i, out| stable_softmax_row(s.row(i), out));
    Matrix::from_par(s.rows(), cols, data)
}

/// Row-wise softmax computed in one pass over tiles of `t` columns,
/// followed by the normalizing pass. With `t` equal to the row length it
/// performs exactly the operations of [`stable_softmax`].
pub fn online_softmax(s: &Matrix, t: usize) -> Result<Matrix> {
    let cols = s.cols();
    if t == 0 || !cols.is_multiple_of(t) {
        return Err(Error::Shape(format!(
            "tile {t} does not divide row length {cols}"
        )));
    }
    let data = par::tabulate_rows(s.rows(), cols, |i, out| online_softmax_row(s.row(i), t, out));
    Ok(Matrix::from_par(s.rows(), cols, data))
}

/// Queries, keys and values, each `N × d`.
#[derive(Clone, Debug, PartialEq)]
pub struct AttentionProblem {
    q: Matrix,
    k: Matrix,
    v: Matrix,
}

impl AttentionProblem {
    pub fn new(q: Matrix, k: Matrix, v: Matrix) -> Result<Self> {
        let shape = (q.rows(), q.cols());
        if (k.rows(), k.cols()) != shape || (v.rows(), v.cols()) != shape {
            return Err(Error::Shape(format!(
                "Q, K, V must share one shape: {}x{}, {}x{}, {}x{}",
                q.rows(),
                q.cols(),
                k.rows(),
                k.cols(),
                v.rows(),
                v.cols()
            )));
        }
        if shape.0 == 0 || shape.1 == 0 {
            return Err(Error::Shape("attention needs N >= 1 and d >= 1".into()));
        }
        Ok(Self { q, k, v })
    }

    /// Entries uniform in `[-3, 3)`.
    pub fn random(n: usize, d: usize, seed: u64) -> Result<Self> {
        let gen = |stream: u64| Matrix::random(n, d, -3.0, 3.0, seed.wrapping_mul(3).wrapping_add(stream));
        Self::new(gen(0), gen(1), gen(2))
    }

    pub fn n(&self) -> usize {
        self.q.rows()
    }

    pub fn d(&self) -> usize {
        self.q.cols()
    }

    pub fn q(&self) -> &Matrix {
        &self.q
    }

    pub fn k(&self) -> &Matrix {
        &self.k
    }

    pub fn v(&self) -> &Matrix {
        &self.v
    }

    /// The same problem with `Q` multiplied by `1/√d`.
    pub fn scaled(&self) -> Self {
        let f = 1.0 / (self.d() as f32).sqrt();
        let q = Matrix::from_fn(self.n(), self.d(), |i, j| self.q.get(i, j) * f);
        Self {
            q,
            k: self.k.clone(),
            v: self.v.clone(),
        }
    }
}

/// `softmax(Q·Kᵀ)·V` with both `N × N` intermediates materialized.
pub fn standard_attention(p: &AttentionProblem) -> Result<Matrix> {
    standard_attention_capped(p, STANDARD_MAX_N)
}

pub fn standard_attention_capped(p: &AttentionProblem, max_n: usize) -> Result<Matrix> {
    let (n, d) = (p.n(), p.d());
    if n > max_n {
        return Err(Error::TooLarge {
            what: "standard attention sequence length",
            value: n,
            cap: max_n,
        });
    }
    let s = matmul_nt(&p.q, &p.k)?;
    let probs = stable_softmax(&s);
    drop(s);
    let out = par::tabulate_rows(n, d, |i, row| mm_nn_acc(probs.row(i), p.v.as_slice(), n, d, row));
    Ok(Matrix::from_par(n, d, out))
}

/// Attention over blocks of `block` query rows. Each block materializes its
/// `block × N` scores, normalizes them with online softmax in tiles of
/// `block` columns, and multiplies by `V`. Blocks run in parallel.
pub fn custom_attention(p: &AttentionProblem, block: usize) -> Result<Matrix> {
    let (n, d) = (p.n(), p.d());
    if block == 0 || n % block != 0 {
        return Err(Error::Shape(format!("block {block} does not divide N = {n}")));
    }
    let out = par::tabulate_rows(n / block, block * d, |b, out| {
        let qb = p.q.row_block(b * block, block);
        let mut sb = vec![0.0f32; block * n];
        mm_nt_into(qb, p.k.as_slice(), d, n, &mut sb);
        let mut pb = vec![0.0f32; block * n];
        for (srow, prow) in sb.chunks(n).zip(pb.chunks_mut(n)) {
            online_softmax_row(srow, block, prow);
        }
        mm_nn_acc(&pb, p.v.as_slice(), n, d, out);
    });
    Ok(Matrix::from_par(n, d, out))
}

/// Row-block and column-block sizes for [`flash_attention`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TileConfig {
    pub ti: usize,
    pub tj: usize,
}

impl Default for TileConfig {
    fn default() -> Self {
        Self {
            ti: DEFAULT_TILE,
            tj: DEFAULT_TILE,
        }
    }
}

impl TileConfig {
    pub fn new(ti: usize, tj: usize) -> Self {
        Self { ti, tj }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        for (name, t) in [("Ti", self.ti), ("Tj", self.tj)] {
            if t == 0 || !n.is_multiple_of(t) {
                return Err(Error::Shape(format!("{name} = {t} does not divide N = {n}")));
            }
        }
        Ok(())
    }
}

/// Scratch memory used by one row block of [`flash_attention`].
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct FlashStats {
    /// Largest number of `f32` scratch values any row block held at once.
    pub peak_block_floats: usize,
    /// Largest single scratch buffer, in `f32` values.
    pub largest_buffer: usize,
    pub blocks: usize,
}

#[derive(Default)]
struct Scratch {
    floats: usize,
    largest: usize,
}

impl Scratch {
    fn alloc(&mut self, len: usize, fill: f32) -> Vec<f32> {
        self.floats += len;
        self.largest = self.largest.max(len);
        vec![fill; len]
    }
}

/// Fused tiled attention. Each `Ti`-row block keeps a running max `m`,
/// normalizer `l` and normalized partial output, and folds in one `Tj`-column
/// tile of keys and values at a time.
pub fn flash_attention(p: &AttentionProblem, cfg: TileConfig) -> Result<Matrix> {
    flash_attention_with_stats(p, cfg).map(|(o, _)| o)
}

pub fn flash_attention_with_stats(p: &AttentionProblem, cfg: TileConfig) -> Result<(Matrix, FlashStats)> {
    let (n, d) = (p.n(), p.d());
    cfg.validate(n)?;
    let TileConfig { ti, tj } = cfg;
    let peak = AtomicUsize::new(0);
    let largest = AtomicUsize::new(0);

    let out = par::tabulate_rows(n / ti, ti * d, |b, out| {
        let q_i = p.q.row_block(b * ti, ti);
        let mut scratch = Scratch::default();
        let mut m = scratch.alloc(ti, f32::NEG_INFINITY);
        let mut l = scratch.alloc(ti, 0.0);
        let mut s = scratch.alloc(ti * tj, 0.0);
        let mut o_i = scratch.alloc(ti * d, 0.0);
        let mut m_new = scratch.alloc(ti, 0.0);
        let mut l_tmp = scratch.alloc(ti, 0.0);
        let mut l_new = scratch.alloc(ti, 0.0);
        let mut pv = scratch.alloc(ti * d, 0.0);
        peak.fetch_max(scratch.floats, Ordering::Relaxed);
        largest.fetch_max(scratch.largest, Ordering::Relaxed);

        for j0 in (0..n).step_by(tj) {
            mm_nt_into(q_i, p.k.row_block(j0, tj), d, tj, &mut s);
            for r in 0..ti {
                let row = &mut s[r * tj..(r + 1) * tj];
                let max_row = row.iter().copied().fold(f32::NEG_INFINITY, f32::max);
                let mn = m[r].max(max_row);
                let mut sum_row = 0.0f32;
                for x in row.iter_mut() {
                    *x = (*x - mn).exp();
                    sum_row += *x;
                }
                m_new[r] = mn;
                l_tmp[r] = l[r] * (m[r] - mn).exp();
                l_new[r] = l_tmp[r] + sum_row;
            }
            pv.fill(0.0);
            mm_nn_acc(&s, p.v.row_block(j0, tj), tj, d, &mut pv);
            for r in 0..ti {
                for c in 0..d {
                    let k = r * d + c;
                    o_i[k] = (o_i[k] * l_tmp[r] + pv[k]) / l_new[r];
                }
            }
            std::mem::swap(&mut m, &mut m_new);
            std::mem::swap(&mut l, &mut l_new);
        }
        out.copy_from_slice(&o_i);
    });
    let stats = FlashStats {
        peak_block_floats: peak.into_inner(),
        largest_buffer: largest.into_inner(),
        blocks: n / ti,
    };
    Ok((Matrix::from_par(n, d, out), stats))
}

/// Operation count of standard attention: `N²·(4d + 5)`.
pub fn attention_flops(n: u64, d: u64) -> u64 {
    n * n * (4 * d + 5)
}
