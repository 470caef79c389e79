//! Direct-summation n-body run with momentum bookkeeping.
//!
//! `cargo run --release --example nbody -- [n] [steps]`

use std::time::Instant;

use flatpar::nbody::{nbody_flops, simulate, BodySystem, SimParams};

fn main() -> flatpar::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(2000, |s| s.parse().expect("n"));
    let steps: usize = args.next().map_or(10, |s| s.parse().expect("steps"));

    let sys = BodySystem::random(n, 7);
    let params = SimParams::new(0.01, steps);
    let start = Instant::now();
    let out = simulate(&sys, &params)?;
    let secs = start.elapsed().as_secs_f64();

    let drift = (out.momentum() - sys.momentum()).norm();
    println!("{n} bodies, {steps} steps in {secs:.3}s");
    println!(
        "{:.2} GFLOP/s",
        nbody_flops(n as u64, steps as u64) as f64 / secs / 1e9
    );
    println!("momentum before {:?}", sys.momentum());
    println!("momentum after  {:?} (drift {drift:.2e})", out.momentum());
    println!("body 0 at {:?}", out.position(0));
    Ok(())
}
