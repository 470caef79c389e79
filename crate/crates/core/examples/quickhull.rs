//! Convex hulls of the built-in point distributions, checked against gift wrapping.
//!
//! `cargo run --release --example quickhull -- [n]`

use std::time::Instant;

use flatpar::quickhull::datasets::Generator;
use flatpar::quickhull::{brute_force_hull, hull, BRUTE_FORCE_MAX_POINTS};

fn main() -> flatpar::Result<()> {
    let n: usize = std::env::args().nth(1).map_or(100_000, |s| s.parse().expect("n"));
    for g in Generator::ALL {
        let pts = g.generate(n, 1);
        let start = Instant::now();
        let h = hull(&pts)?;
        let secs = start.elapsed().as_secs_f64();
        let check = if n <= BRUTE_FORCE_MAX_POINTS {
            if brute_force_hull(&pts)? == h {
                "matches gift wrapping"
            } else {
                "MISMATCH"
            }
        } else {
            "too large to cross-check"
        };
        println!(
            "{:<16} {n} points -> {:>6} vertices in {secs:.3}s ({check})",
            g.name(),
            h.len()
        );
    }
    Ok(())
}
