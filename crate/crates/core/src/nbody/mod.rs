//! Direct O(n²) gravitational N-body simulation in structure-of-arrays form.
//!
//! Interaction kernel (softened inverse-cube law):
//!
//! ```text
//! r = p_j - p_i
//! a_ij = m_j * r / (|r|² + eps)^(3/2)
//! ```
//!
//! The softening constant is added to the squared distance unsquared, which
//! is the form every benchmarked implementation uses. Self-interaction is
//! included because `r = 0` makes it contribute exactly zero.

use std::ops::{Add, Mul, Sub};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::par::{self, Monoid, ParArray};

pub mod reference;

/// Default softening constant.
pub const EPSILON: f64 = 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
pub struct Vec3 {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Vec3 {
    pub const ZERO: Vec3 = Vec3 {
        x: 0.0,
        y: 0.0,
        z: 0.0,
    };

    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    #[inline]
    pub fn dot(self, o: Vec3) -> f64 {
        self.x * o.x + self.y * o.y + self.z * o.z
    }

    pub fn norm(self) -> f64 {
        self.dot(self).sqrt()
    }

    pub fn is_finite(self) -> bool {
        self.x.is_finite() && self.y.is_finite() && self.z.is_finite()
    }
}

impl Add for Vec3 {
    type Output = Vec3;

    #[inline]
    fn add(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x + o.x, self.y + o.y, self.z + o.z)
    }
}

impl Sub for Vec3 {
    type Output = Vec3;

    #[inline]
    fn sub(self, o: Vec3) -> Vec3 {
        Vec3::new(self.x - o.x, self.y - o.y, self.z - o.z)
    }
}

/// Scaling `s * v`.
impl Mul<Vec3> for f64 {
    type Output = Vec3;

    #[inline]
    fn mul(self, v: Vec3) -> Vec3 {
        Vec3::new(self * v.x, self * v.y, self * v.z)
    }
}

/// Seven equal-length arrays: position, velocity and mass per body.
#[derive(Clone, Debug, PartialEq)]
pub struct BodySystem {
    pub pos_x: ParArray<f64>,
    pub pos_y: ParArray<f64>,
    pub pos_z: ParArray<f64>,
    pub vel_x: ParArray<f64>,
    pub vel_y: ParArray<f64>,
    pub vel_z: ParArray<f64>,
    pub mass: ParArray<f64>,
}

impl BodySystem {
    pub fn new(positions: &[Vec3], velocities: &[Vec3], masses: &[f64]) -> Result<Self> {
        let n = positions.len();
        for len in [velocities.len(), masses.len()] {
            if len != n {
                return Err(Error::LengthMismatch { left: n, right: len });
            }
        }
        if masses.iter().any(|m| m.is_nan() || *m < 0.0) {
            return Err(Error::Degenerate("masses must be non-negative"));
        }
        Ok(Self {
            pos_x: positions.iter().map(|p| p.x).collect(),
            pos_y: positions.iter().map(|p| p.y).collect(),
            pos_z: positions.iter().map(|p| p.z).collect(),
            vel_x: velocities.iter().map(|v| v.x).collect(),
            vel_y: velocities.iter().map(|v| v.y).collect(),
            vel_z: velocities.iter().map(|v| v.z).collect(),
            mass: masses.iter().copied().collect(),
        })
    }

    /// Uniform positions in the unit cube, zero velocities, unit masses.
    pub fn random(n: usize, seed: u64) -> Self {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let positions: Vec<Vec3> = (0..n)
            .map(|_| Vec3::new(rng.gen(), rng.gen(), rng.gen()))
            .collect();
        Self::new(&positions, &vec![Vec3::ZERO; n], &vec![1.0; n]).expect("generated system is well formed")
    }

    pub fn len(&self) -> usize {
        self.mass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.mass.is_empty()
    }

    #[inline]
    pub fn position(&self, i: usize) -> Vec3 {
        Vec3::new(self.pos_x[i], self.pos_y[i], self.pos_z[i])
    }

    #[inline]
    pub fn velocity(&self, i: usize) -> Vec3 {
        Vec3::new(self.vel_x[i], self.vel_y[i], self.vel_z[i])
    }

    /// Total momentum `Σ m_i v_i`.
    pub fn momentum(&self) -> Vec3 {
        let m = Monoid::commutative(Vec3::ZERO, |a: Vec3, b| a + b);
        par::reduce_indexed(self.len(), &m, |i| self.mass[i] * self.velocity(i))
    }

    /// `Σ m_i |v_i|`, the scale momentum drift is measured against.
    pub fn momentum_magnitude(&self) -> f64 {
        par::reduce_indexed(self.len(), &par::monoid::sum(), |i| {
            self.mass[i] * self.velocity(i).norm()
        })
    }
}

/// Which velocity the position update uses.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum UpdateOrder {
    /// `p' = p + dt·v`, with `v` from before the step (the benchmarked form).
    #[default]
    OldVelocity,
    /// `p' = p + dt·v'`, updating positions after all velocities.
    NewVelocity,
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SimParams {
    pub dt: f64,
    pub steps: usize,
    pub epsilon: f64,
    pub update: UpdateOrder,
}

impl SimParams {
    pub fn new(dt: f64, steps: usize) -> Self {
        Self {
            dt,
            steps,
            epsilon: EPSILON,
            update: UpdateOrder::OldVelocity,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt >= 0.0 && self.dt.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "time step {} must be finite and >= 0",
                self.dt
            )));
        }
        if !(self.epsilon > 0.0 && self.epsilon.is_finite()) {
            return Err(Error::InvalidSpec(format!(
                "softening {} must be > 0",
                self.epsilon
            )));
        }
        Ok(())
    }
}

/// Acceleration on a body at `p_i` caused by a body of mass `m_j` at `p_j`.
#[inline]
pub fn accel(p_i: Vec3, p_j: Vec3, m_j: f64, eps: f64) -> Vec3 {
    let r = p_j - p_i;
    let rsqr = r.dot(r) + eps;
    let inv_dist = 1.0 / rsqr.sqrt();
    let inv_dist3 = inv_dist * inv_dist * inv_dist;
    let s = m_j * inv_dist3;
    s * r
}

/// Net acceleration on every body, summed over all bodies with the fixed
/// reduction tree.
pub fn calc_accels(sys: &BodySystem, eps: f64) -> ParArray<Vec3> {
    let n = sys.len();
    let vec_sum = Monoid::commutative(Vec3::ZERO, |a: Vec3, b| a + b);
    par::tabulate(n, |i| {
        let p_i = sys.position(i);
        par::reduce_indexed(n, &vec_sum, |j| accel(p_i, sys.position(j), sys.mass[j], eps))
    })
}

/// Advances the system by one time step.
pub fn step(sys: &BodySystem, params: &SimParams) -> Result<BodySystem> {
    params.validate()?;
    Ok(step_unchecked(sys, params))
}

fn step_unchecked(sys: &BodySystem, params: &SimParams) -> BodySystem {
    let n = sys.len();
    let dt = params.dt;
    let acc = calc_accels(sys, params.epsilon);
    let vel_x = par::tabulate(n, |i| sys.vel_x[i] + dt * acc[i].x);
    let vel_y = par::tabulate(n, |i| sys.vel_y[i] + dt * acc[i].y);
    let vel_z = par::tabulate(n, |i| sys.vel_z[i] + dt * acc[i].z);
    let (vx, vy, vz) = match params.update {
        UpdateOrder::OldVelocity => (&sys.vel_x, &sys.vel_y, &sys.vel_z),
        UpdateOrder::NewVelocity => (&vel_x, &vel_y, &vel_z),
    };
    let pos_x = par::tabulate(n, |i| sys.pos_x[i] + dt * vx[i]);
    let pos_y = par::tabulate(n, |i| sys.pos_y[i] + dt * vy[i]);
    let pos_z = par::tabulate(n, |i| sys.pos_z[i] + dt * vz[i]);
    BodySystem {
        pos_x,
        pos_y,
        pos_z,
        vel_x,
        vel_y,
        vel_z,
        mass: sys.mass.clone(),
    }
}

/// Applies [`step`] exactly `params.steps` times.
pub fn simulate(sys: &BodySystem, params: &SimParams) -> Result<BodySystem> {
    params.validate()?;
    let mut cur = sys.clone();
    for _ in 0..params.steps {
        cur = step_unchecked(&cur, params);
    }
    Ok(cur)
}

/// Flop count `(19n² + 12n)·t`.
pub fn nbody_flops(n: u64, t: u64) -> u64 {
    (19 * n * n + 12 * n) * t
}
