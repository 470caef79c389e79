use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use super::{Input, Output, Params};
use crate::attention::{standard_attention, AttentionProblem, Matrix};
use crate::error::{Error, Result};
use crate::multigrid::reference::mg_solve_naive;
use crate::multigrid::{l2_norm, Grid3};
use crate::nbody::reference::simulate_sequential;
use crate::nbody::{BodySystem, SimParams};
use crate::quickhull::{brute_force_hull, lex_cmp, orientation, Point2, BRUTE_FORCE_MAX_POINTS};

/// Full sequential N-body oracle up to this many pair interactions.
const NBODY_ORACLE_WORK: usize = 50_000_000;
const MG_ORACLE_MAX_SIDE: usize = 32;
const ATTENTION_ORACLE_MAX_N: usize = 2048;
const ATTENTION_SAMPLE_ROWS: usize = 16;
const ATTENTION_TOL: f64 = 1e-3;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Verification {
    pub passed: bool,
    pub method: String,
    pub detail: String,
}

impl Verification {
    fn check(passed: bool, method: &str, detail: String) -> Self {
        Self {
            passed,
            method: method.to_string(),
            detail,
        }
    }

    pub fn into_result(self) -> Result<Self> {
        if self.passed {
            Ok(self)
        } else {
            Err(Error::Verification(format!("{}: {}", self.method, self.detail)))
        }
    }
}

/// Checks a benchmark output against the module's oracle when the size
/// permits, and against its invariants otherwise.
pub fn verify(params: &Params, input: &Input, output: &Output) -> Result<Verification> {
    match (*params, input, output) {
        (Params::Nbody { steps, dt, .. }, Input::Nbody(sys), Output::Nbody(got)) => {
            Ok(verify_nbody(sys, &SimParams::new(dt, steps), got))
        }
        (Params::Mg { class, iters, .. }, Input::Mg(v), Output::Mg { u, residual_norm }) => {
            verify_mg(v, iters, &class.operators(), u, *residual_norm)
        }
        (Params::Quickhull { .. }, Input::Quickhull(points), Output::Quickhull(hull)) => {
            verify_hull(points, hull)
        }
        (Params::Attention { .. }, Input::Attention(p), Output::Attention(o)) => verify_attention(p, o),
        _ => Err(Error::InvalidSpec("output does not match benchmark".into())),
    }
}

fn verify_nbody(sys: &BodySystem, params: &SimParams, got: &BodySystem) -> Verification {
    let n = sys.len();
    if n.saturating_mul(n).saturating_mul(params.steps) <= NBODY_ORACLE_WORK {
        let want = simulate_sequential(sys, params);
        let same = want == *got;
        return Verification::check(
            same,
            "sequential oracle",
            if same {
                "bit-identical".into()
            } else {
                "state differs from sequential simulation".into()
            },
        );
    }
    let finite = (0..got.len()).all(|i| got.position(i).is_finite() && got.velocity(i).is_finite());
    let drift = (got.momentum() - sys.momentum()).norm();
    let scale = got
        .momentum_magnitude()
        .max(sys.momentum_magnitude())
        .max(f64::MIN_POSITIVE);
    let bound = 1e-9 * params.steps.max(1) as f64 * scale;
    Verification::check(
        finite && drift <= bound,
        "momentum conservation",
        format!("finite = {finite}, drift {drift:.3e} vs bound {bound:.3e}"),
    )
}

fn verify_mg(
    v: &Grid3,
    iters: usize,
    ops: &crate::multigrid::MgOperators,
    u: &Grid3,
    norm: f64,
) -> Result<Verification> {
    if v.side() <= MG_ORACLE_MAX_SIDE {
        let (want, want_norm) = mg_solve_naive(v, iters, ops)?;
        let scale = want
            .values()
            .iter()
            .fold(0.0f64, |m, x| m.max(x.abs()))
            .max(f64::MIN_POSITIVE);
        let diff = want
            .values()
            .iter()
            .zip(u.values().iter())
            .fold(0.0f64, |m, (a, b)| m.max((a - b).abs()));
        let rel = diff / scale;
        let norm_rel = (want_norm - norm).abs() / want_norm.max(f64::MIN_POSITIVE);
        return Ok(Verification::check(
            rel <= 1e-11 && norm_rel <= 1e-11,
            "naive stencil oracle",
            format!("max relative difference {rel:.3e}, residual norm difference {norm_rel:.3e}"),
        ));
    }
    let start = l2_norm(v);
    Ok(Verification::check(
        norm.is_finite() && norm < start,
        "residual decrease",
        format!("residual norm {norm:.6e} vs initial {start:.6e}"),
    ))
}

/// Whether `p` lies inside or on the convex polygon `hull` (CCW, at least
/// three vertices), by binary search over the fan from `hull[0]`.
fn in_convex(hull: &[Point2], p: Point2) -> bool {
    let k = hull.len();
    let h0 = hull[0];
    if orientation(h0, hull[1], p) == Ordering::Less || orientation(h0, hull[k - 1], p) == Ordering::Greater {
        return false;
    }
    let (mut lo, mut hi) = (1, k - 1);
    while hi - lo > 1 {
        let mid = (lo + hi) / 2;
        if orientation(h0, hull[mid], p) != Ordering::Less {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    orientation(hull[lo], hull[lo + 1], p) != Ordering::Less
}

fn verify_hull(points: &[Point2], hull: &[Point2]) -> Result<Verification> {
    if points.len() <= BRUTE_FORCE_MAX_POINTS {
        let want = brute_force_hull(points)?;
        let same = want.as_slice() == hull;
        return Ok(Verification::check(
            same,
            "gift-wrapping oracle",
            format!("{} vertices, oracle {}", hull.len(), want.len()),
        ));
    }
    let k = hull.len();
    let lexmin = points
        .iter()
        .copied()
        .reduce(|a, b| if lex_cmp(b, a) == Ordering::Less { b } else { a });
    let starts_ok = k >= 2 && lexmin == Some(hull[0]);
    let convex = k < 3
        || (0..k).all(|i| orientation(hull[i], hull[(i + 1) % k], hull[(i + 2) % k]) == Ordering::Greater);
    let contained = if k >= 3 {
        points.iter().filter(|&&p| !in_convex(hull, p)).count()
    } else {
        points
            .iter()
            .filter(|&&p| orientation(hull[0], hull[k - 1], p) != Ordering::Equal)
            .count()
    };
    Ok(Verification::check(
        starts_ok && convex && contained == 0,
        "hull invariants",
        format!("{k} vertices, starts at minimum = {starts_ok}, strictly convex = {convex}, points outside = {contained}"),
    ))
}

fn attention_row_f64(p: &AttentionProblem, i: usize) -> Vec<f64> {
    let (n, d) = (p.n(), p.d());
    let s: Vec<f64> = (0..n)
        .map(|j| {
            (0..d)
                .map(|t| p.q().get(i, t) as f64 * p.k().get(j, t) as f64)
                .sum()
        })
        .collect();
    let m = s.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let w: Vec<f64> = s.iter().map(|x| (x - m).exp()).collect();
    let l: f64 = w.iter().sum();
    (0..d)
        .map(|c| (0..n).map(|j| w[j] * p.v().get(j, c) as f64).sum::<f64>() / l)
        .collect()
}

fn verify_attention(p: &AttentionProblem, o: &Matrix) -> Result<Verification> {
    let n = p.n();
    let rows = ATTENTION_SAMPLE_ROWS.min(n);
    let sample_err = (0..rows)
        .map(|r| r * n / rows)
        .flat_map(|i| {
            let want = attention_row_f64(p, i);
            o.row(i)
                .iter()
                .zip(want)
                .map(|(&a, b)| (a as f64 - b).abs())
                .collect::<Vec<_>>()
        })
        .fold(0.0f64, f64::max);
    let mut detail = format!("{rows} sampled rows vs double precision: max error {sample_err:.3e}");
    let mut passed = sample_err <= ATTENTION_TOL;
    let mut method = "sampled double-precision rows";
    if n <= ATTENTION_ORACLE_MAX_N {
        let full = standard_attention(p)?.max_abs_diff(o)? as f64;
        passed &= full <= ATTENTION_TOL;
        method = "standard attention oracle";
        detail = format!("max abs difference {full:.3e}; {detail}");
    }
    Ok(Verification::check(passed, method, detail))
}
