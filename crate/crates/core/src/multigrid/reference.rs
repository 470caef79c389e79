//! Recursive V-cycle and solver built only from the naive 27-term stencil
//! and materialized grid transfers.

use super::{c2f, expand_weights, f2c, l2_norm, stencil27_naive, Grid3, MgOperators};
use crate::error::Result;

pub fn vcycle_naive(r: &Grid3, ops: &MgOperators) -> Result<Grid3> {
    let s = expand_weights(ops.s());
    if r.side() == 2 {
        return Ok(stencil27_naive(r, &s));
    }
    let rs = stencil27_naive(&f2c(r)?, &expand_weights(ops.p()));
    let zs = vcycle_naive(&rs, ops)?;
    let z = stencil27_naive(&c2f(&zs), &expand_weights(ops.q()));
    let r = r.sub(&stencil27_naive(&z, &expand_weights(ops.a())))?;
    z.add(&stencil27_naive(&r, &s))
}

pub fn mg_solve_naive(v: &Grid3, t: usize, ops: &MgOperators) -> Result<(Grid3, f64)> {
    let a = expand_weights(ops.a());
    let mut u = Grid3::zeros(v.side());
    for _ in 0..t {
        let r = v.sub(&stencil27_naive(&u, &a))?;
        u = u.add(&vcycle_naive(&r, ops)?)?;
    }
    let r = v.sub(&stencil27_naive(&u, &a))?;
    let norm = l2_norm(&r);
    Ok((u, norm))
}
