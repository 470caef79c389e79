//! Planar convex hull by Quickhull, flattened into flat data-parallel steps.
//!
//! Recursive Quickhull splits the undecided points of every hull edge into
//! two children around the point furthest from that edge. Here all edges at
//! the same recursion depth advance together: the undecided points live in
//! one [`SegmentedVector`] (one segment per active edge) and each [`step`]
//! is a fixed composition of map, segmented scan, scatter and
//! reduce-by-index over that vector.
//!
//! The hull is strict (collinear boundary points are dropped) and all side
//! and distance tests use exact predicates, so the result is the unique
//! vertex set of the convex hull regardless of input order.

use std::cmp::Ordering;

use crate::error::{Error, Result};
use crate::par::{self, monoid, Monoid, ParArray, ScanMode, SegmentedVector};

pub mod datasets;
mod exact;
pub mod io;
mod oracle;

pub use oracle::{brute_force_hull, BRUTE_FORCE_MAX_POINTS};

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Point2 {
    pub x: f64,
    pub y: f64,
}

impl Point2 {
    pub const fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }
}

/// Twice the signed area of `p, q, r`; positive when `r` is left of `p → q`.
#[inline]
pub fn cross(p: Point2, q: Point2, r: Point2) -> f64 {
    (q.x - p.x) * (r.y - p.y) - (q.y - p.y) * (r.x - p.x)
}

/// Exact sign of [`cross`]: `Greater` when `r` is strictly left of `p → q`.
#[inline]
pub fn orientation(p: Point2, q: Point2, r: Point2) -> Ordering {
    exact::det_sign(q.x, p.x, r.y, p.y, q.y, p.y, r.x, p.x)
}

/// Sign of `(b - a) · (d - c)`, exact.
#[inline]
pub(crate) fn dot_sign(a: Point2, b: Point2, c: Point2, d: Point2) -> Ordering {
    // (bx-ax)(dx-cx) + (by-ay)(dy-cy) = (bx-ax)(dx-cx) - (ay-by)(dy-cy)
    exact::det_sign(b.x, a.x, d.x, c.x, a.y, b.y, d.y, c.y)
}

pub(crate) fn lex_cmp(a: Point2, b: Point2) -> Ordering {
    a.x.partial_cmp(&b.x)
        .unwrap_or(Ordering::Equal)
        .then(a.y.partial_cmp(&b.y).unwrap_or(Ordering::Equal))
}

/// An undecided input point and its position in the original input.
#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Candidate {
    pub p: Point2,
    pub idx: usize,
}

/// Whether `a` beats `b` as the furthest point outside edge `p → q`:
/// larger distance, then nearer to `p` along the edge, then lower index.
fn further(p: Point2, q: Point2, a: Candidate, b: Candidate) -> bool {
    // sign of cross(p,q,a) - cross(p,q,b) = (q - p) × (a - b)
    let by_distance = exact::det_sign(q.x, p.x, a.p.y, b.p.y, q.y, p.y, a.p.x, b.p.x);
    match by_distance {
        Ordering::Less => true,
        Ordering::Greater => false,
        Ordering::Equal => match dot_sign(b.p, a.p, p, q) {
            Ordering::Less => true,
            Ordering::Greater => false,
            Ordering::Equal => a.idx < b.idx,
        },
    }
}

#[derive(Clone, Copy, Debug, Default)]
struct Best {
    seg: usize,
    cand: Candidate,
    valid: bool,
}

/// Flattened Quickhull state between steps.
///
/// `hull` is the cyclic counter-clockwise list of confirmed vertices. Every
/// segment of `points` belongs to one hull edge `hull[e] → hull[e + 1]` and
/// holds the undecided points strictly to the right of (outside) that edge.
#[derive(Clone, Debug, PartialEq)]
pub struct HullState {
    points: SegmentedVector<Candidate>,
    seg_endpoints: Vec<(Point2, Point2)>,
    seg_edge: Vec<usize>,
    hull: Vec<Point2>,
}

impl HullState {
    pub fn segment_count(&self) -> usize {
        self.seg_endpoints.len()
    }

    /// Number of points not yet confirmed or discarded.
    pub fn undecided(&self) -> usize {
        self.points.len()
    }

    pub fn points(&self) -> &SegmentedVector<Candidate> {
        &self.points
    }

    pub fn endpoints(&self) -> &[(Point2, Point2)] {
        &self.seg_endpoints
    }

    pub fn hull(&self) -> &[Point2] {
        &self.hull
    }

    pub fn is_done(&self) -> bool {
        self.seg_endpoints.is_empty()
    }
}

/// Regroups points into child segments.
///
/// `child[i]` is `2·parent + side` for a kept point, negative for a
/// discarded one; every kept point's parent must be its current segment.
/// Returns the new segmented vector (children ordered by key, empty ones
/// dropped) and the keys of the surviving children.
fn regroup(
    data: &[Candidate],
    flags: &[bool],
    child: &[i64],
    n_children: usize,
) -> (SegmentedVector<Candidate>, Vec<usize>) {
    let n = data.len();
    let sum = monoid::sum::<usize>();
    let ones = par::map(child, |c| (c >= 0) as usize);
    let bucket = par::map(child, |c| c.max(0) as usize);
    let counts =
        par::reduce_by_index(&vec![0; n_children], &sum, &bucket, &ones).expect("child keys are in range");
    let offsets = par::scan(&counts, &sum, ScanMode::Exclusive);
    let total = par::reduce(&counts, &sum);

    let side0 = par::map(child, |c| (c >= 0 && c % 2 == 0) as usize);
    let side1 = par::map(child, |c| (c >= 0 && c % 2 == 1) as usize);
    let rank0 = par::segmented_scan_flags(&side0, flags, &sum, ScanMode::Exclusive)
        .expect("segment flags are well formed");
    let rank1 = par::segmented_scan_flags(&side1, flags, &sum, ScanMode::Exclusive)
        .expect("segment flags are well formed");
    let target = par::tabulate(n, |i| {
        let c = child[i];
        if c < 0 {
            return -1;
        }
        let c = c as usize;
        let rank = if c.is_multiple_of(2) { rank0[i] } else { rank1[i] };
        (offsets[c] + rank) as i64
    });
    if total == 0 {
        return (SegmentedVector::empty(), Vec::new());
    }
    let new_data = par::scatter(&par::replicate(total, data[0]), &target, data)
        .expect("regroup targets are unique and in range");

    let (kept, _) = par::partition(&par::iota(n_children), |c| counts[c] > 0);
    let starts = par::map(&kept, |c| offsets[c] as i64);
    let new_flags = par::scatter(
        &par::replicate(total, false),
        &starts,
        &par::replicate(kept.len(), true),
    )
    .expect("segment starts are unique and in range");
    let sv = SegmentedVector::new(new_data, new_flags).expect("first kept child starts at 0");
    (sv, kept.into_vec())
}

/// Seeds the hull with the lexicographically smallest and largest points
/// and splits the rest into the points strictly below and strictly above
/// the line through them.
pub fn init(points: &[Point2]) -> Result<HullState> {
    let n = points.len();
    if n < 2 {
        return Err(Error::Degenerate("quickhull needs at least two points"));
    }
    if points.iter().any(|p| !(p.x.is_finite() && p.y.is_finite())) {
        return Err(Error::Degenerate("point coordinates must be finite"));
    }
    let cands = par::tabulate(n, |i| Candidate { p: points[i], idx: i });
    let pick = |prefer: Ordering| {
        Monoid::new(None, move |a: Option<Candidate>, b: Option<Candidate>| {
            match (a, b) {
                (Some(x), Some(y)) => Some(if lex_cmp(y.p, x.p) == prefer { y } else { x }),
                (x, None) => x,
                (None, y) => y,
            }
        })
    };
    let wrapped = par::map(&cands, Some);
    let a = par::reduce(&wrapped, &pick(Ordering::Less)).expect("non-empty").p;
    let b = par::reduce(&wrapped, &pick(Ordering::Greater))
        .expect("non-empty")
        .p;
    if lex_cmp(a, b) == Ordering::Equal {
        return Err(Error::Degenerate("all points are identical"));
    }
    let child = par::map(&cands, |c| match orientation(a, b, c.p) {
        Ordering::Less => 0,
        Ordering::Greater => 1,
        Ordering::Equal => -1,
    });
    let mut flags = vec![false; n];
    flags[0] = true;
    let (sv, kept) = regroup(&cands, &flags, &child, 2);
    let seg_endpoints = kept
        .iter()
        .map(|&k| if k == 0 { (a, b) } else { (b, a) })
        .collect();
    Ok(HullState {
        points: sv,
        seg_endpoints,
        seg_edge: kept,
        hull: vec![a, b],
    })
}

/// Advances every active segment by one level of the recursion.
pub fn step(state: &HullState) -> HullState {
    let segs = state.segment_count();
    if segs == 0 {
        return state.clone();
    }
    let data = state.points.data();
    let flags = state.points.flags();
    let n = data.len();
    let endpoints = &state.seg_endpoints;
    let seg = par::segment_ids(flags);

    let none = Best::default();
    let best_of = Monoid::commutative(none, |a: Best, b: Best| {
        if !a.valid {
            return b;
        }
        if !b.valid {
            return a;
        }
        let (p, q) = endpoints[a.seg];
        if further(p, q, a.cand, b.cand) {
            a
        } else {
            b
        }
    });
    let entries = par::tabulate(n, |i| Best {
        seg: seg[i],
        cand: data[i],
        valid: true,
    });
    let best =
        par::reduce_by_index(&vec![none; segs], &best_of, &seg, &entries).expect("segment ids are in range");
    let far = par::map(&best, |b| b.cand.p);

    // Splice every furthest point in after its edge's start vertex.
    let h = state.hull.len();
    let edge_idx = par::map(&state.seg_edge, |e| e as i64);
    let seg_of_edge = par::scatter(
        &par::replicate(h, -1i64),
        &edge_idx,
        &par::tabulate(segs, |s| s as i64),
    )
    .expect("each edge has at most one segment");
    let widths = par::map(&seg_of_edge, |s| 1 + (s >= 0) as usize);
    let new_pos = par::scan(&widths, &monoid::sum(), ScanMode::Exclusive);
    let hull_idx = par::map(&new_pos, |p| p as i64);
    let far_idx = par::map(&state.seg_edge, |e| (new_pos[e] + 1) as i64);
    let hull = par::scatter(&par::replicate(h + segs, state.hull[0]), &hull_idx, &state.hull)
        .and_then(|partial| par::scatter(&partial, &far_idx, &far))
        .expect("hull positions are unique and in range");

    let child = par::tabulate(n, |i| {
        let s = seg[i];
        let (p, q) = endpoints[s];
        let c = far[s];
        let pt = data[i].p;
        if orientation(p, c, pt) == Ordering::Less {
            2 * s as i64
        } else if orientation(c, q, pt) == Ordering::Less {
            2 * s as i64 + 1
        } else {
            -1
        }
    });
    let (points, kept) = regroup(data, flags, &child, 2 * segs);
    let seg_endpoints = kept
        .iter()
        .map(|&k| {
            let (p, q) = endpoints[k / 2];
            let c = far[k / 2];
            if k % 2 == 0 {
                (p, c)
            } else {
                (c, q)
            }
        })
        .collect();
    let seg_edge = kept
        .iter()
        .map(|&k| new_pos[state.seg_edge[k / 2]] + k % 2)
        .collect();
    HullState {
        points,
        seg_endpoints,
        seg_edge,
        hull: hull.into_vec(),
    }
}

/// Strict convex hull, counter-clockwise from the lexicographically
/// smallest point.
pub fn hull(points: &[Point2]) -> Result<ParArray<Point2>> {
    let mut state = init(points)?;
    while !state.is_done() {
        state = step(&state);
    }
    Ok(state.hull.into())
}
