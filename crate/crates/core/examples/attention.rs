//! Compare the three attention kernels on one random problem.
//!
//! `cargo run --release --example attention -- [n] [d]`

use std::time::Instant;

use flatpar::attention::{
    attention_flops, custom_attention, flash_attention_with_stats, standard_attention, AttentionProblem,
    TileConfig,
};

fn main() -> flatpar::Result<()> {
    let mut args = std::env::args().skip(1);
    let n: usize = args.next().map_or(1024, |s| s.parse().expect("n"));
    let d: usize = args.next().map_or(64, |s| s.parse().expect("d"));
    let p = AttentionProblem::random(n, d, 11)?;
    let flops = attention_flops(n as u64, d as u64) as f64;

    let t = Instant::now();
    let std = standard_attention(&p)?;
    let t_std = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let custom = custom_attention(&p, d)?;
    let t_custom = t.elapsed().as_secs_f64();

    let t = Instant::now();
    let (flash, stats) = flash_attention_with_stats(&p, TileConfig::default())?;
    let t_flash = t.elapsed().as_secs_f64();

    println!("N={n} d={d}");
    println!("standard {t_std:.3}s {:.2} GFLOP/s", flops / t_std / 1e9);
    println!(
        "custom   {t_custom:.3}s {:.2} GFLOP/s, max diff {:.2e}",
        flops / t_custom / 1e9,
        custom.max_abs_diff(&std)?
    );
    println!(
        "flash    {t_flash:.3}s {:.2} GFLOP/s, max diff {:.2e}",
        flops / t_flash / 1e9,
        flash.max_abs_diff(&std)?
    );
    println!(
        "flash scratch: peak {} floats per block, largest buffer {} floats (N*N = {})",
        stats.peak_block_floats,
        stats.largest_buffer,
        n * n
    );
    Ok(())
}
