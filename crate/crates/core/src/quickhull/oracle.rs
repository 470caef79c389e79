//! Gift-wrapping reference hull, used to check [`super::hull`].

use std::cmp::Ordering;

use super::{dot_sign, lex_cmp, orientation, Point2};
use crate::error::{Error, Result};
use crate::par::ParArray;

pub const BRUTE_FORCE_MAX_POINTS: usize = 10_000;

/// Strict convex hull by Jarvis march, counter-clockwise from the
/// lexicographically smallest point. Quadratic in the worst case, so inputs
/// are capped at [`BRUTE_FORCE_MAX_POINTS`].
pub fn brute_force_hull(points: &[Point2]) -> Result<ParArray<Point2>> {
    if points.len() > BRUTE_FORCE_MAX_POINTS {
        return Err(Error::TooLarge {
            what: "gift-wrapping points",
            value: points.len(),
            cap: BRUTE_FORCE_MAX_POINTS,
        });
    }
    if points.len() < 2 {
        return Err(Error::Degenerate("quickhull needs at least two points"));
    }
    if points.iter().any(|p| !(p.x.is_finite() && p.y.is_finite())) {
        return Err(Error::Degenerate("point coordinates must be finite"));
    }
    let start = points
        .iter()
        .copied()
        .reduce(|a, b| if lex_cmp(b, a) == Ordering::Less { b } else { a })
        .expect("non-empty");
    if points.iter().all(|&p| lex_cmp(p, start) == Ordering::Equal) {
        return Err(Error::Degenerate("all points are identical"));
    }

    let mut out = vec![start];
    let mut cur = start;
    loop {
        let mut next = *points
            .iter()
            .find(|&&p| lex_cmp(p, cur) != Ordering::Equal)
            .expect("at least two distinct points");
        for &p in points {
            match orientation(cur, next, p) {
                Ordering::Less => next = p,
                Ordering::Equal if dot_sign(next, p, cur, next) == Ordering::Greater => next = p,
                _ => {}
            }
        }
        if lex_cmp(next, start) == Ordering::Equal {
            break;
        }
        out.push(next);
        cur = next;
        assert!(out.len() <= points.len(), "gift wrapping failed to close");
    }
    Ok(out.into())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pts(v: &[(f64, f64)]) -> Vec<Point2> {
        v.iter().map(|&(x, y)| Point2::new(x, y)).collect()
    }

    #[test]
    fn triangle() {
        let t = pts(&[(0.0, 1.0), (1.0, 0.0), (0.0, 0.0)]);
        assert_eq!(
            brute_force_hull(&t).unwrap().as_slice(),
            pts(&[(0.0, 0.0), (1.0, 0.0), (0.0, 1.0)]).as_slice()
        );
    }

    #[test]
    fn square_with_interior_and_edge_points() {
        let p = pts(&[
            (0.5, 0.5),
            (1.0, 1.0),
            (0.5, 0.0),
            (0.0, 0.0),
            (1.0, 0.0),
            (0.0, 1.0),
            (0.0, 0.5),
            (0.2, 0.7),
        ]);
        assert_eq!(
            brute_force_hull(&p).unwrap().as_slice(),
            pts(&[(0.0, 0.0), (1.0, 0.0), (1.0, 1.0), (0.0, 1.0)]).as_slice()
        );
    }

    #[test]
    fn collinear_and_duplicates() {
        let p = pts(&[
            (2.0, 2.0),
            (1.0, 1.0),
            (1.0, 1.0),
            (0.0, 0.0),
            (3.0, 3.0),
            (0.0, 0.0),
        ]);
        assert_eq!(
            brute_force_hull(&p).unwrap().as_slice(),
            pts(&[(0.0, 0.0), (3.0, 3.0)]).as_slice()
        );
    }

    #[test]
    fn rejects_oversized_input() {
        let p = vec![Point2::default(); BRUTE_FORCE_MAX_POINTS + 1];
        assert!(matches!(brute_force_hull(&p), Err(Error::TooLarge { .. })));
    }
}
