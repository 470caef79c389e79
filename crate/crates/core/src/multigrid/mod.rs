//! NAS MG: V-cycle multigrid for the periodic discrete Poisson problem.
//!
//! Every operator is a 27-point periodic stencil
//!
//! ```text
//! out[i] = Σ_{j ∈ {0,1,2}³} w[j] · x[(i + j - 1) mod n]
//! ```
//!
//! whose weights take only four distinct values (center, face, edge,
//! corner). [`relax_opt`] exploits that with two per-line temporary buffers;
//! [`stencil27_naive`] is the direct 27-term sum it must agree with.
//!
//! Grids are stored row-major with the last index fastest.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::par::{self, ParArray};

pub mod reference;
mod weights;

pub use weights::{parse_weights, NasClass, WeightsFile};

/// Cubic grid of side `n` with `n³` values.
#[derive(Clone, Debug, PartialEq)]
pub struct Grid3 {
    n: usize,
    values: ParArray<f64>,
}

impl Grid3 {
    pub fn new(n: usize, values: ParArray<f64>) -> Result<Self> {
        if n == 0 {
            return Err(Error::Shape("grid side must be positive".into()));
        }
        if values.len() != n * n * n {
            return Err(Error::LengthMismatch {
                left: values.len(),
                right: n * n * n,
            });
        }
        Ok(Self { n, values })
    }

    pub fn zeros(n: usize) -> Self {
        Self::filled(n, 0.0)
    }

    pub fn filled(n: usize, value: f64) -> Self {
        Self {
            n,
            values: par::replicate(n * n * n, value),
        }
    }

    pub fn from_fn(n: usize, f: impl Fn(usize, usize, usize) -> f64 + Sync + Send) -> Self {
        Self {
            n,
            values: par::tabulate(n * n * n, |idx| {
                let (i, j, k) = unflatten(n, idx);
                f(i, j, k)
            }),
        }
    }

    /// Independent uniform values in `[-1, 1)`.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let values: Vec<f64> = (0..n * n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
        Self {
            n,
            values: values.into(),
        }
    }

    /// NAS-style right-hand side: zero except `+1` at ten and `-1` at ten
    /// distinct seeded positions.
    pub fn point_charges(n: usize, seed: u64) -> Self {
        let total = n * n * n;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut values = vec![0.0; total];
        let charges = 20.min(total);
        let mut placed = 0;
        while placed < charges {
            let at = rng.gen_range(0..total);
            if values[at] == 0.0 {
                values[at] = if placed % 2 == 0 { 1.0 } else { -1.0 };
                placed += 1;
            }
        }
        Self {
            n,
            values: values.into(),
        }
    }

    pub fn side(&self) -> usize {
        self.n
    }

    pub fn values(&self) -> &ParArray<f64> {
        &self.values
    }

    pub fn into_values(self) -> ParArray<f64> {
        self.values
    }

    #[inline]
    pub fn at(&self, i: usize, j: usize, k: usize) -> f64 {
        self.values[(i * self.n + j) * self.n + k]
    }

    /// Elementwise `self + other`.
    pub fn add(&self, other: &Grid3) -> Result<Grid3> {
        self.zip_with(other, |a, b| a + b)
    }

    /// Elementwise `self - other`.
    pub fn sub(&self, other: &Grid3) -> Result<Grid3> {
        self.zip_with(other, |a, b| a - b)
    }

    pub fn scale(&self, s: f64) -> Grid3 {
        Grid3 {
            n: self.n,
            values: par::map(&self.values, |x| s * x),
        }
    }

    fn zip_with(&self, other: &Grid3, f: impl Fn(f64, f64) -> f64 + Sync + Send) -> Result<Grid3> {
        if self.n != other.n {
            return Err(Error::Shape(format!("grid sides {} and {}", self.n, other.n)));
        }
        Ok(Grid3 {
            n: self.n,
            values: par::map2(&self.values, &other.values, f)?,
        })
    }
}

#[inline]
fn unflatten(n: usize, idx: usize) -> (usize, usize, usize) {
    (idx / (n * n), (idx / n) % n, idx % n)
}

#[inline]
fn wrap_dec(i: usize, n: usize) -> usize {
    if i == 0 {
        n - 1
    } else {
        i - 1
    }
}

#[inline]
fn wrap_inc(i: usize, n: usize) -> usize {
    if i + 1 == n {
        0
    } else {
        i + 1
    }
}

/// Full 3×3×3 weight cube indexed by `(j1, j2, j3) ∈ {0,1,2}³`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Weights27 {
    pub w: [f64; 27],
}

impl Weights27 {
    #[inline]
    pub fn get(&self, j1: usize, j2: usize, j3: usize) -> f64 {
        self.w[j1 * 9 + j2 * 3 + j3]
    }

    /// All zero except 1 at the center.
    pub fn delta() -> Self {
        let mut w = [0.0; 27];
        w[13] = 1.0;
        Self { w }
    }
}

/// Weights by distance class from the center: `[center, face, edge, corner]`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Weights4 {
    pub ws: [f64; 4],
}

impl Weights4 {
    pub const fn new(ws: [f64; 4]) -> Self {
        Self { ws }
    }
}

/// Expands class weights onto the cube: a position whose offset from the
/// center is nonzero in `c` coordinates receives `ws[c]`.
pub fn expand_weights(ws: &Weights4) -> Weights27 {
    let mut w = [0.0; 27];
    for j1 in 0..3 {
        for j2 in 0..3 {
            for j3 in 0..3 {
                let class = [j1, j2, j3].iter().filter(|&&j| j != 1).count();
                w[j1 * 9 + j2 * 3 + j3] = ws.ws[class];
            }
        }
    }
    Weights27 { w }
}

/// Laplacian discretization.
pub const WEIGHTS_A: Weights4 = Weights4::new([-8.0 / 3.0, 0.0, 1.0 / 6.0, 1.0 / 12.0]);
/// Trilinear prolongation.
pub const WEIGHTS_Q: Weights4 = Weights4::new([1.0, 0.5, 0.25, 0.125]);

/// The four stencils of the V-cycle. `A` and `Q` are fixed; `P`
/// (restriction) and `S` (smoother) are configurable.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct MgOperators {
    a: Weights4,
    p: Weights4,
    q: Weights4,
    s: Weights4,
}

impl MgOperators {
    pub fn new(p: Weights4, s: Weights4) -> Self {
        Self {
            a: WEIGHTS_A,
            p,
            q: WEIGHTS_Q,
            s,
        }
    }

    pub fn a(&self) -> &Weights4 {
        &self.a
    }

    pub fn p(&self) -> &Weights4 {
        &self.p
    }

    pub fn q(&self) -> &Weights4 {
        &self.q
    }

    pub fn s(&self) -> &Weights4 {
        &self.s
    }
}

/// Direct 27-term evaluation of the periodic stencil.
pub fn stencil27_naive(x: &Grid3, w: &Weights27) -> Grid3 {
    let n = x.n;
    let values = par::tabulate(n * n * n, |idx| {
        let (i1, i2, i3) = unflatten(n, idx);
        let mut acc = 0.0;
        for j1 in 0..3 {
            let a = (i1 + j1 + n - 1) % n;
            for j2 in 0..3 {
                let b = (i2 + j2 + n - 1) % n;
                for j3 in 0..3 {
                    let c = (i3 + j3 + n - 1) % n;
                    acc += w.get(j1, j2, j3) * x.at(a, b, c);
                }
            }
        }
        acc
    });
    Grid3 { n, values }
}

/// Stencil application specialized to four distinct weights.
///
/// For every `(i, j)` line two buffers are built over `k`: `u1s[k]`, the sum
/// of the four in-plane face neighbours, and `u2s[k]`, the sum of the four
/// in-plane diagonal neighbours. Each output then needs only the center,
/// the two `k` neighbours and `u1s`/`u2s` at `k-1, k, k+1`.
///
/// `x_at` must be total over `[0, n)³`.
pub fn relax_opt<F>(x_at: F, n: usize, ws: &Weights4) -> Grid3
where
    F: Fn(usize, usize, usize) -> f64 + Sync + Send,
{
    let [w0, w1, w2, w3] = ws.ws;
    let values = par::tabulate_rows(n * n, n, |line, out: &mut [f64]| {
        let (i, j) = (line / n, line % n);
        let (im, ip) = (wrap_dec(i, n), wrap_inc(i, n));
        let (jm, jp) = (wrap_dec(j, n), wrap_inc(j, n));
        let mut u1s = vec![0.0; n];
        let mut u2s = vec![0.0; n];
        for k in 0..n {
            u1s[k] = x_at(i, jm, k) + x_at(i, jp, k) + x_at(im, j, k) + x_at(ip, j, k);
            u2s[k] = x_at(im, jm, k) + x_at(im, jp, k) + x_at(ip, jm, k) + x_at(ip, jp, k);
        }
        for (k, o) in out.iter_mut().enumerate() {
            let (km, kp) = (wrap_dec(k, n), wrap_inc(k, n));
            *o = w0 * x_at(i, j, k)
                + w1 * (u1s[k] + x_at(i, j, km) + x_at(i, j, kp))
                + w2 * (u2s[k] + u1s[km] + u1s[kp])
                + w3 * (u2s[km] + u2s[kp]);
        }
    });
    Grid3 { n, values }
}

/// [`relax_opt`] over a materialized grid.
pub fn relax(x: &Grid3, ws: &Weights4) -> Grid3 {
    relax_opt(|i, j, k| x.at(i, j, k), x.n, ws)
}

/// Restriction: keeps the values at odd indices in every dimension.
pub fn f2c(x: &Grid3) -> Result<Grid3> {
    let n = x.n;
    if !n.is_multiple_of(2) {
        return Err(Error::OddSide(n));
    }
    let m = n / 2;
    Ok(Grid3::from_fn(m, |i, j, k| x.at(2 * i + 1, 2 * j + 1, 2 * k + 1)))
}

#[inline]
fn embedded_at(x: &Grid3, i: usize, j: usize, k: usize) -> f64 {
    if i % 2 == 1 && j % 2 == 1 && k % 2 == 1 {
        x.at(i / 2, j / 2, k / 2)
    } else {
        0.0
    }
}

/// Prolongation by embedding: the fine grid holds `x` at odd indices and
/// zero elsewhere.
pub fn c2f(x: &Grid3) -> Grid3 {
    Grid3::from_fn(2 * x.n, |i, j, k| embedded_at(x, i, j, k))
}

fn check_mg_side(n: usize) -> Result<()> {
    if n >= 2 && n.is_power_of_two() {
        Ok(())
    } else {
        Err(Error::NotPowerOfTwo(n))
    }
}

/// `r - A(z)`.
pub fn residual(r: &Grid3, z: &Grid3, ops: &MgOperators) -> Result<Grid3> {
    r.sub(&relax(z, &ops.a))
}

/// One V-cycle: an approximate solution `z` of `A z = r`.
pub fn vcycle(r: &Grid3, ops: &MgOperators) -> Result<Grid3> {
    check_mg_side(r.n)?;
    vcycle_inner(r, ops)
}

fn vcycle_inner(r: &Grid3, ops: &MgOperators) -> Result<Grid3> {
    let n = r.n;
    if n == 2 {
        return Ok(relax(r, &ops.s));
    }
    let rs = relax(&f2c(r)?, &ops.p);
    let zs = vcycle_inner(&rs, ops)?;
    let z = relax_opt(|i, j, k| embedded_at(&zs, i, j, k), n, &ops.q);
    let r = residual(r, &z, ops)?;
    z.add(&relax(&r, &ops.s))
}

/// Runs `t` multigrid iterations from `u = 0` and returns the solution with
/// the L2 norm of the final residual `v - A(u)`.
pub fn mg_solve(v: &Grid3, t: usize, ops: &MgOperators) -> Result<(Grid3, f64)> {
    check_mg_side(v.n)?;
    let mut u = Grid3::zeros(v.n);
    for _ in 0..t {
        let r = residual(v, &u, ops)?;
        u = u.add(&vcycle_inner(&r, ops)?)?;
    }
    let r = residual(v, &u, ops)?;
    let norm = l2_norm(&r);
    Ok((u, norm))
}

/// Root mean square of the grid values.
pub fn l2_norm(r: &Grid3) -> f64 {
    let total = r.values.len();
    if total == 0 {
        return 0.0;
    }
    let sq = par::reduce_indexed(total, &par::monoid::sum(), |i| r.values[i] * r.values[i]);
    (sq / total as f64).sqrt()
}

/// Flop count `58·t·n³`.
pub fn mg_flops(n: u64, t: u64) -> u64 {
    58 * t * n * n * n
}
