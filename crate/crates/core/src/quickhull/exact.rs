//! Exact sign of `(a - b)(c - d) - (e - f)(g - h)` for finite doubles.
//!
//! A floating-point evaluation is accepted when it clears a forward error
//! bound; otherwise the value is rebuilt as a nonoverlapping expansion with
//! error-free sums and products and the sign of its largest component is
//! returned. Exact as long as no intermediate product underflows or
//! overflows.

use std::cmp::Ordering;

const EPS: f64 = f64::EPSILON / 2.0;
const ERR_BOUND: f64 = (3.0 + 16.0 * EPS) * EPS;

#[inline]
fn two_sum(a: f64, b: f64) -> (f64, f64) {
    let s = a + b;
    let bv = s - a;
    let av = s - bv;
    (s, (a - av) + (b - bv))
}

#[inline]
fn two_prod(a: f64, b: f64) -> (f64, f64) {
    let p = a * b;
    (p, a.mul_add(b, -p))
}

fn grow(e: &mut Vec<f64>, b: f64) {
    let mut q = b;
    for h in e.iter_mut() {
        let (s, err) = two_sum(q, *h);
        *h = err;
        q = s;
    }
    e.push(q);
}

fn sign_of(x: f64) -> Ordering {
    x.partial_cmp(&0.0).unwrap_or(Ordering::Equal)
}

#[allow(clippy::too_many_arguments)]
pub fn det_sign(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64, g: f64, h: f64) -> Ordering {
    let left = (a - b) * (c - d);
    let right = (e - f) * (g - h);
    let det = left - right;
    let bound = ERR_BOUND * (left.abs() + right.abs());
    if det > bound || -det > bound {
        return sign_of(det);
    }
    exact_sign(a, b, c, d, e, f, g, h)
}

#[allow(clippy::too_many_arguments)]
fn exact_sign(a: f64, b: f64, c: f64, d: f64, e: f64, f: f64, g: f64, h: f64) -> Ordering {
    let diff = |x: f64, y: f64| {
        let (hi, lo) = two_sum(x, -y);
        [lo, hi]
    };
    let mut acc = Vec::with_capacity(16);
    for (u, v, sign) in [(diff(a, b), diff(c, d), 1.0), (diff(e, f), diff(g, h), -1.0)] {
        for &x in &u {
            for &y in &v {
                let (p, err) = two_prod(x, y);
                grow(&mut acc, sign * err);
                grow(&mut acc, sign * p);
            }
        }
    }
    acc.iter()
        .rev()
        .find(|&&x| x != 0.0)
        .map_or(Ordering::Equal, |&x| sign_of(x))
}
