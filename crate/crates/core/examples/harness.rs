//! Drive the benchmark harness from code and print the report in both formats.
//!
//! `cargo run --release --example harness -- [benchmark] [preset]`

use flatpar::bench::{render, run_bench_with, BenchSpec, Benchmark, Format, HarnessConfig};

fn main() -> flatpar::Result<()> {
    let mut args = std::env::args().skip(1);
    let bench: Benchmark = args.next().unwrap_or_else(|| "nbody".into()).parse()?;
    let preset = args.next().unwrap_or_else(|| "smoke".into());
    let spec = BenchSpec::preset(bench, &preset, 42, flatpar::par::current_threads())?;
    let cfg = HarnessConfig {
        verify: true,
        ..HarnessConfig::default()
    };
    let report = run_bench_with(&spec, &cfg)?;
    println!("{}", render(&report, Format::Json)?);
    print!("{}", render(&report, Format::Csv)?);
    Ok(())
}
