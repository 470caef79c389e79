//! Sequential reference simulation with plain loops.
//!
//! Sums each body's interactions with the same chunked evaluation tree as
//! [`crate::par::reduce`], so results are comparable bit for bit.

use super::{accel, BodySystem, SimParams, UpdateOrder, Vec3};
use crate::par::CHUNK;

fn net_accel(sys: &BodySystem, i: usize, eps: f64) -> Vec3 {
    let n = sys.len();
    let p_i = sys.position(i);
    let mut total: Option<Vec3> = None;
    let mut start = 0;
    while start < n {
        let end = (start + CHUNK).min(n);
        let mut part = accel(p_i, sys.position(start), sys.mass[start], eps);
        for j in start + 1..end {
            part = part + accel(p_i, sys.position(j), sys.mass[j], eps);
        }
        total = Some(match total {
            None => part,
            Some(t) => t + part,
        });
        start = end;
    }
    total.unwrap_or(Vec3::ZERO)
}

pub fn step_sequential(sys: &BodySystem, params: &SimParams) -> BodySystem {
    let n = sys.len();
    let dt = params.dt;
    let mut out = sys.clone();
    let acc: Vec<Vec3> = (0..n).map(|i| net_accel(sys, i, params.epsilon)).collect();
    let mut vx = sys.vel_x.to_vec();
    let mut vy = sys.vel_y.to_vec();
    let mut vz = sys.vel_z.to_vec();
    let mut px = sys.pos_x.to_vec();
    let mut py = sys.pos_y.to_vec();
    let mut pz = sys.pos_z.to_vec();
    for i in 0..n {
        let v_old = sys.velocity(i);
        vx[i] = v_old.x + dt * acc[i].x;
        vy[i] = v_old.y + dt * acc[i].y;
        vz[i] = v_old.z + dt * acc[i].z;
        let v = match params.update {
            UpdateOrder::OldVelocity => v_old,
            UpdateOrder::NewVelocity => Vec3::new(vx[i], vy[i], vz[i]),
        };
        px[i] += dt * v.x;
        py[i] += dt * v.y;
        pz[i] += dt * v.z;
    }
    out.pos_x = px.into();
    out.pos_y = py.into();
    out.pos_z = pz.into();
    out.vel_x = vx.into();
    out.vel_y = vy.into();
    out.vel_z = vz.into();
    out
}

pub fn simulate_sequential(sys: &BodySystem, params: &SimParams) -> BodySystem {
    let mut cur = sys.clone();
    for _ in 0..params.steps {
        cur = step_sequential(&cur, params);
    }
    cur
}
