//! Benchmark specifications, input generation, kernel dispatch and
//! verification. Timing and reporting live in [`harness`].

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde_json::{json, Value};

use crate::attention::{
    custom_attention, flash_attention, standard_attention, AttentionProblem, Matrix, TileConfig, DEFAULT_TILE,
};
use crate::error::{Error, Result};
use crate::multigrid::{self, Grid3, NasClass};
use crate::nbody::{self, BodySystem, SimParams};
use crate::par::ParArray;
use crate::quickhull::{self, datasets::Generator, Point2};

mod harness;
mod verify;

pub use harness::{
    emit, render, render_verify, run_bench, run_bench_with, verify_spec, write_output, BenchReport, Format,
    HarnessConfig, VerifyReport, CSV_HEADER, VERIFY_CSV_HEADER, WARMUPS,
};
pub use verify::{verify, Verification};

pub const DEFAULT_DT: f64 = 0.01;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Benchmark {
    Nbody,
    Mg,
    Quickhull,
    Attention,
}

impl Benchmark {
    pub const ALL: [Benchmark; 4] = [
        Benchmark::Nbody,
        Benchmark::Mg,
        Benchmark::Quickhull,
        Benchmark::Attention,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Benchmark::Nbody => "nbody",
            Benchmark::Mg => "mg",
            Benchmark::Quickhull => "quickhull",
            Benchmark::Attention => "attention",
        }
    }

    pub fn presets(self) -> &'static [&'static str] {
        match self {
            Benchmark::Nbody => &["smoke", "n1e3-t1e5", "n1e4-t1e3", "n1e5-t10"],
            Benchmark::Mg => &["smoke", "S", "W", "A", "B", "C"],
            Benchmark::Quickhull => &["smoke", "rectangle-1e8", "disk-1e8", "quadratic-1e8"],
            Benchmark::Attention => &["smoke", "n16k-d64", "n32k-d64", "n8k-d128", "n16k-d128"],
        }
    }
}

impl fmt::Display for Benchmark {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Benchmark {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Benchmark::ALL
            .into_iter()
            .find(|b| b.name() == s)
            .ok_or_else(|| Error::InvalidSpec(format!("unknown benchmark `{s}`")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum AttentionKernel {
    #[default]
    Flash,
    Custom,
    Standard,
}

impl AttentionKernel {
    pub fn name(self) -> &'static str {
        match self {
            AttentionKernel::Flash => "flash",
            AttentionKernel::Custom => "custom",
            AttentionKernel::Standard => "standard",
        }
    }
}

impl FromStr for AttentionKernel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        [
            AttentionKernel::Flash,
            AttentionKernel::Custom,
            AttentionKernel::Standard,
        ]
        .into_iter()
        .find(|k| k.name() == s)
        .ok_or_else(|| Error::InvalidSpec(format!("unknown attention kernel `{s}`")))
    }
}

/// Problem sizes for one benchmark.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Params {
    Nbody {
        n: usize,
        steps: usize,
        dt: f64,
    },
    /// `class` selects the smoother weights; `side` and `iters` may differ
    /// from the class defaults.
    Mg {
        class: NasClass,
        side: usize,
        iters: usize,
    },
    Quickhull {
        generator: Generator,
        n: usize,
    },
    Attention {
        n: usize,
        d: usize,
        ti: usize,
        tj: usize,
        kernel: AttentionKernel,
        scale: bool,
    },
}

impl Params {
    pub fn benchmark(&self) -> Benchmark {
        match self {
            Params::Nbody { .. } => Benchmark::Nbody,
            Params::Mg { .. } => Benchmark::Mg,
            Params::Quickhull { .. } => Benchmark::Quickhull,
            Params::Attention { .. } => Benchmark::Attention,
        }
    }

    pub fn preset(benchmark: Benchmark, name: &str) -> Result<Self> {
        let unknown = || {
            Error::InvalidSpec(format!(
                "unknown {benchmark} preset `{name}` (expected one of {})",
                benchmark.presets().join(", ")
            ))
        };
        let attention = |n, d| Params::Attention {
            n,
            d,
            ti: DEFAULT_TILE,
            tj: DEFAULT_TILE,
            kernel: AttentionKernel::Flash,
            scale: false,
        };
        let nbody = |n, steps| Params::Nbody {
            n,
            steps,
            dt: DEFAULT_DT,
        };
        Ok(match (benchmark, name) {
            (Benchmark::Nbody, "smoke") => nbody(256, 10),
            (Benchmark::Nbody, "n1e3-t1e5") => nbody(1_000, 100_000),
            (Benchmark::Nbody, "n1e4-t1e3") => nbody(10_000, 1_000),
            (Benchmark::Nbody, "n1e5-t10") => nbody(100_000, 10),
            (Benchmark::Mg, "smoke") => Params::Mg {
                class: NasClass::S,
                side: 16,
                iters: 2,
            },
            (Benchmark::Mg, class) => {
                let class: NasClass = class.parse().map_err(|_| unknown())?;
                Params::Mg {
                    class,
                    side: class.side(),
                    iters: class.iterations(),
                }
            }
            (Benchmark::Quickhull, "smoke") => Params::Quickhull {
                generator: Generator::Disk,
                n: 2_000,
            },
            (Benchmark::Quickhull, "rectangle-1e8") => Params::Quickhull {
                generator: Generator::Rectangle,
                n: 100_000_000,
            },
            (Benchmark::Quickhull, "disk-1e8") => Params::Quickhull {
                generator: Generator::Disk,
                n: 100_000_000,
            },
            (Benchmark::Quickhull, "quadratic-1e8") => Params::Quickhull {
                generator: Generator::Quadratic,
                n: 100_000_000,
            },
            (Benchmark::Attention, "smoke") => attention(512, 64),
            (Benchmark::Attention, "n16k-d64") => attention(16_384, 64),
            (Benchmark::Attention, "n32k-d64") => attention(32_768, 64),
            (Benchmark::Attention, "n8k-d128") => attention(8_192, 128),
            (Benchmark::Attention, "n16k-d128") => attention(16_384, 128),
            _ => return Err(unknown()),
        })
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::InvalidSpec(msg));
        match *self {
            Params::Nbody { n, dt, .. } => {
                if n == 0 {
                    return bad("nbody needs n >= 1".into());
                }
                SimParams::new(dt, 0).validate()
            }
            Params::Mg { side, .. } => {
                if side < 2 || !side.is_power_of_two() {
                    return bad(format!("mg side {side} must be a power of two >= 2"));
                }
                Ok(())
            }
            Params::Quickhull { n, .. } => {
                if n < 2 {
                    return bad("quickhull needs n >= 2".into());
                }
                Ok(())
            }
            Params::Attention {
                n, d, ti, tj, kernel, ..
            } => {
                if n == 0 || d == 0 {
                    return bad("attention needs N >= 1 and d >= 1".into());
                }
                TileConfig::new(ti, tj)
                    .validate(n)
                    .map_err(|e| Error::InvalidSpec(e.to_string()))?;
                if kernel == AttentionKernel::Custom && n % d != 0 {
                    return bad(format!("custom attention needs d = {d} to divide N = {n}"));
                }
                Ok(())
            }
        }
    }

    /// Operation count the throughput figure is based on; `None` for
    /// quickhull, which is reported as runtime only.
    pub fn flops(&self) -> Option<u64> {
        match *self {
            Params::Nbody { n, steps, .. } => Some(nbody::nbody_flops(n as u64, steps as u64)),
            Params::Mg { side, iters, .. } => Some(multigrid::mg_flops(side as u64, iters as u64)),
            Params::Quickhull { .. } => None,
            Params::Attention { n, d, .. } => Some(crate::attention::attention_flops(n as u64, d as u64)),
        }
    }

    pub fn to_map(&self) -> BTreeMap<String, Value> {
        let v = match *self {
            Params::Nbody { n, steps, dt } => json!({ "n": n, "steps": steps, "dt": dt }),
            Params::Mg { class, side, iters } => {
                json!({ "class": format!("{class:?}"), "side": side, "iters": iters })
            }
            Params::Quickhull { generator, n } => json!({ "generator": generator.name(), "n": n }),
            Params::Attention {
                n,
                d,
                ti,
                tj,
                kernel,
                scale,
            } => json!({
                "n": n, "d": d, "ti": ti, "tj": tj, "kernel": kernel.name(), "scale": scale
            }),
        };
        serde_json::from_value(v).expect("object literal")
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct BenchSpec {
    pub params: Params,
    pub seed: u64,
    pub threads: usize,
}

impl BenchSpec {
    pub fn new(params: Params, seed: u64, threads: usize) -> Self {
        Self {
            params,
            seed,
            threads,
        }
    }

    pub fn preset(benchmark: Benchmark, name: &str, seed: u64, threads: usize) -> Result<Self> {
        Ok(Self::new(Params::preset(benchmark, name)?, seed, threads))
    }

    pub fn benchmark(&self) -> Benchmark {
        self.params.benchmark()
    }

    pub fn validate(&self) -> Result<()> {
        if self.threads == 0 {
            return Err(Error::InvalidSpec("thread count must be >= 1".into()));
        }
        self.params.validate()
    }
}

/// A generated benchmark input.
#[derive(Clone, Debug, PartialEq)]
pub enum Input {
    Nbody(BodySystem),
    Mg(Grid3),
    Quickhull(Vec<Point2>),
    Attention(AttentionProblem),
}

/// A benchmark result.
#[derive(Clone, Debug, PartialEq)]
pub enum Output {
    Nbody(BodySystem),
    Mg { u: Grid3, residual_norm: f64 },
    Quickhull(ParArray<Point2>),
    Attention(Matrix),
}

impl Output {
    /// FNV-1a over the bit patterns of every output value.
    pub fn checksum(&self) -> u64 {
        let mut h = Fnv::default();
        match self {
            Output::Nbody(sys) => {
                for col in [
                    &sys.pos_x, &sys.pos_y, &sys.pos_z, &sys.vel_x, &sys.vel_y, &sys.vel_z,
                ] {
                    col.iter().for_each(|v| h.write(v.to_bits()));
                }
            }
            Output::Mg { u, residual_norm } => {
                u.values().iter().for_each(|v| h.write(v.to_bits()));
                h.write(residual_norm.to_bits());
            }
            Output::Quickhull(hull) => {
                for p in hull.iter() {
                    h.write(p.x.to_bits());
                    h.write(p.y.to_bits());
                }
            }
            Output::Attention(o) => o.as_slice().iter().for_each(|v| h.write(v.to_bits() as u64)),
        }
        h.0
    }
}

struct Fnv(u64);

impl Default for Fnv {
    fn default() -> Self {
        Fnv(0xcbf2_9ce4_8422_2325)
    }
}

impl Fnv {
    fn write(&mut self, word: u64) {
        for b in word.to_le_bytes() {
            self.0 ^= b as u64;
            self.0 = self.0.wrapping_mul(0x0100_0000_01b3);
        }
    }
}

/// Process exit status for an error: 3 for failed verification, 1 for I/O,
/// 2 for everything else (an invalid spec or input).
pub fn exit_code(e: &Error) -> u8 {
    match e {
        Error::Verification(_) => 3,
        Error::Io { .. } => 1,
        _ => 2,
    }
}

/// Deterministic input for a spec: a function of the parameters and seed.
pub fn generate(spec: &BenchSpec) -> Result<Input> {
    spec.validate()?;
    Ok(match spec.params {
        Params::Nbody { n, .. } => Input::Nbody(BodySystem::random(n, spec.seed)),
        Params::Mg { side, .. } => Input::Mg(Grid3::point_charges(side, spec.seed)),
        Params::Quickhull { generator, n } => Input::Quickhull(generator.generate(n, spec.seed)),
        Params::Attention { n, d, scale, .. } => {
            let p = AttentionProblem::random(n, d, spec.seed)?;
            Input::Attention(if scale { p.scaled() } else { p })
        }
    })
}

/// Runs the benchmark kernel once on the calling thread's pool.
pub fn execute(params: &Params, input: &Input) -> Result<Output> {
    let mismatch = || Error::InvalidSpec("input does not match benchmark".into());
    match (*params, input) {
        (Params::Nbody { steps, dt, .. }, Input::Nbody(sys)) => {
            nbody::simulate(sys, &SimParams::new(dt, steps)).map(Output::Nbody)
        }
        (Params::Mg { class, iters, .. }, Input::Mg(v)) => {
            let (u, residual_norm) = multigrid::mg_solve(v, iters, &class.operators())?;
            Ok(Output::Mg { u, residual_norm })
        }
        (Params::Quickhull { .. }, Input::Quickhull(points)) => {
            quickhull::hull(points).map(Output::Quickhull)
        }
        (
            Params::Attention {
                d, ti, tj, kernel, ..
            },
            Input::Attention(p),
        ) => match kernel {
            AttentionKernel::Flash => flash_attention(p, TileConfig::new(ti, tj)),
            AttentionKernel::Custom => custom_attention(p, d),
            AttentionKernel::Standard => standard_attention(p),
        }
        .map(Output::Attention),
        _ => Err(mismatch()),
    }
}
