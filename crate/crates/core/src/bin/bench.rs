//! Benchmark runner. Exit status: 0 on success, 2 for an invalid benchmark
//! spec, 3 when verification fails, 1 for I/O errors.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use flatpar::bench::{self, AttentionKernel, BenchSpec, Benchmark, Format, HarnessConfig, Params};
use flatpar::multigrid::NasClass;
use flatpar::par::{self, THREADS_ENV};
use flatpar::quickhull::datasets::Generator;
use flatpar::Error;

#[derive(Parser)]
#[command(name = "bench", version, about = "Run and verify the flatpar benchmarks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Time a benchmark and report the measurements.
    Run {
        #[command(flatten)]
        common: Common,
        /// Verify the output after timing; exit 3 if it fails.
        #[arg(long)]
        verify: bool,
        /// Stop after this many measured runs even if timings are noisy.
        #[arg(long, default_value_t = 50)]
        max_runs: usize,
    },
    /// Run a benchmark once and check it against its oracle.
    Verify {
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Args)]
struct Common {
    /// nbody, mg, quickhull or attention.
    benchmark: Benchmark,
    /// Named problem size; see the README for the list.
    #[arg(long, conflicts_with_all = ["n", "steps", "dt", "class", "side", "iters", "generator", "d", "ti", "tj"])]
    preset: Option<String>,
    /// Bodies (nbody), points (quickhull) or sequence length (attention).
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    steps: Option<usize>,
    #[arg(long)]
    dt: Option<f64>,
    /// MG class whose smoother weights are used (S, W, A, B or C).
    #[arg(long)]
    class: Option<NasClass>,
    #[arg(long)]
    side: Option<usize>,
    #[arg(long)]
    iters: Option<usize>,
    #[arg(long)]
    generator: Option<Generator>,
    #[arg(long)]
    d: Option<usize>,
    #[arg(long)]
    ti: Option<usize>,
    #[arg(long)]
    tj: Option<usize>,
    /// Attention kernel: flash, custom or standard.
    #[arg(long)]
    kernel: Option<AttentionKernel>,
    /// Scale attention scores by 1/sqrt(d).
    #[arg(long)]
    scale: bool,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    /// Worker threads; defaults to the environment setting, then all cores.
    #[arg(long, env = THREADS_ENV)]
    threads: Option<usize>,
    #[arg(long, default_value = "json")]
    format: Format,
    /// Write the report here instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    /// Rejects size flags that belong to a different benchmark.
    fn check_flags(&self) -> flatpar::Result<()> {
        use Benchmark::*;
        let flags: [(&str, bool, &[Benchmark]); 12] = [
            ("n", self.n.is_some(), &[Nbody, Quickhull, Attention]),
            ("steps", self.steps.is_some(), &[Nbody]),
            ("dt", self.dt.is_some(), &[Nbody]),
            ("class", self.class.is_some(), &[Mg]),
            ("side", self.side.is_some(), &[Mg]),
            ("iters", self.iters.is_some(), &[Mg]),
            ("generator", self.generator.is_some(), &[Quickhull]),
            ("d", self.d.is_some(), &[Attention]),
            ("ti", self.ti.is_some(), &[Attention]),
            ("tj", self.tj.is_some(), &[Attention]),
            ("kernel", self.kernel.is_some(), &[Attention]),
            ("scale", self.scale, &[Attention]),
        ];
        match flags
            .iter()
            .find(|(_, set, to)| *set && !to.contains(&self.benchmark))
        {
            Some((flag, ..)) => Err(Error::InvalidSpec(format!(
                "--{flag} does not apply to {}",
                self.benchmark
            ))),
            None => Ok(()),
        }
    }

    fn spec(&self) -> flatpar::Result<BenchSpec> {
        self.check_flags()?;
        let threads = self.threads.unwrap_or_else(par::current_threads);
        let name = self.preset.as_deref().unwrap_or("smoke");
        let mut params = Params::preset(self.benchmark, name)?;
        match &mut params {
            Params::Nbody { n, steps, dt } => {
                *n = self.n.unwrap_or(*n);
                *steps = self.steps.unwrap_or(*steps);
                *dt = self.dt.unwrap_or(*dt);
            }
            Params::Mg { class, side, iters } => {
                if let Some(c) = self.class {
                    *class = c;
                    *side = c.side();
                    *iters = c.iterations();
                }
                *side = self.side.unwrap_or(*side);
                *iters = self.iters.unwrap_or(*iters);
            }
            Params::Quickhull { generator, n } => {
                *generator = self.generator.unwrap_or(*generator);
                *n = self.n.unwrap_or(*n);
            }
            Params::Attention {
                n,
                d,
                ti,
                tj,
                kernel,
                scale,
            } => {
                *n = self.n.unwrap_or(*n);
                *d = self.d.unwrap_or(*d);
                *ti = self.ti.unwrap_or(*ti);
                *tj = self.tj.unwrap_or(*tj);
                *kernel = self.kernel.unwrap_or(*kernel);
                *scale |= self.scale;
            }
        }
        let spec = BenchSpec::new(params, self.seed, threads);
        spec.validate()?;
        Ok(spec)
    }
}

fn run(cli: Cli) -> flatpar::Result<()> {
    match cli.command {
        Command::Run {
            common,
            verify,
            max_runs,
        } => {
            let spec = common.spec()?;
            let cfg = HarnessConfig {
                max_runs,
                verify,
                ..HarnessConfig::default()
            };
            let report = bench::run_bench_with(&spec, &cfg)?;
            bench::emit(&report, common.format, common.out.as_deref())?;
            match report.verification {
                Some(v) => v.into_result().map(drop),
                None => Ok(()),
            }
        }
        Command::Verify { common } => {
            let spec = common.spec()?;
            let report = bench::verify_spec(&spec)?;
            let text = bench::render_verify(&report, common.format)?;
            bench::write_output(&text, common.out.as_deref())?;
            report.verification.into_result().map(drop)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("bench: {e}");
            ExitCode::from(bench::exit_code(&e))
        }
    }
}
