//! Seeded point-set generators.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Point2;
use crate::error::Error;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    /// Uniform in the unit square `[0, 1]²`.
    Rectangle,
    /// Uniform in the closed unit disk, by rejection from `[-1, 1]²`.
    Disk,
    /// `x` uniform in `[-1, 1]`, `y = x²`.
    Quadratic,
    /// Lattice points on the boundary of a square and along its diagonals,
    /// so most candidate triples are exactly collinear.
    CollinearHeavy,
    /// Draws with replacement from a small pool of distinct disk points.
    DuplicateHeavy,
}

impl Generator {
    pub const ALL: [Generator; 5] = [
        Generator::Rectangle,
        Generator::Disk,
        Generator::Quadratic,
        Generator::CollinearHeavy,
        Generator::DuplicateHeavy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Generator::Rectangle => "rectangle",
            Generator::Disk => "disk",
            Generator::Quadratic => "quadratic",
            Generator::CollinearHeavy => "collinear-heavy",
            Generator::DuplicateHeavy => "duplicate-heavy",
        }
    }

    pub fn generate(self, n: usize, seed: u64) -> Vec<Point2> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        match self {
            Generator::Rectangle => (0..n)
                .map(|_| Point2::new(rng.gen::<f64>(), rng.gen::<f64>()))
                .collect(),
            Generator::Disk => (0..n).map(|_| disk_point(&mut rng)).collect(),
            Generator::Quadratic => (0..n)
                .map(|_| {
                    let x = rng.gen_range(-1.0..=1.0);
                    Point2::new(x, x * x)
                })
                .collect(),
            Generator::CollinearHeavy => (0..n).map(|_| lattice_line_point(&mut rng)).collect(),
            Generator::DuplicateHeavy => {
                let pool: Vec<Point2> = (0..(n / 50).max(3)).map(|_| disk_point(&mut rng)).collect();
                (0..n).map(|_| pool[rng.gen_range(0..pool.len())]).collect()
            }
        }
    }
}

fn disk_point(rng: &mut ChaCha8Rng) -> Point2 {
    loop {
        let x = rng.gen_range(-1.0..=1.0);
        let y = rng.gen_range(-1.0..=1.0);
        if x * x + y * y <= 1.0 {
            return Point2::new(x, y);
        }
    }
}

fn lattice_line_point(rng: &mut ChaCha8Rng) -> Point2 {
    const STEPS: i32 = 64;
    let t = rng.gen_range(0..=STEPS) as f64 / STEPS as f64;
    match rng.gen_range(0..6) {
        0 => Point2::new(t, 0.0),
        1 => Point2::new(1.0, t),
        2 => Point2::new(t, 1.0),
        3 => Point2::new(0.0, t),
        4 => Point2::new(t, t),
        _ => Point2::new(t, 1.0 - t),
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Generator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Generator::ALL
            .into_iter()
            .find(|g| g.name() == s || (s == "circle" && *g == Generator::Disk))
            .ok_or_else(|| Error::InvalidSpec(format!("unknown point generator `{s}`")))
    }
}
