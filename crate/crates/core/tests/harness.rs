use flatpar::bench::{
    generate, render, run_bench, run_bench_with, verify_spec, BenchReport, BenchSpec, Benchmark, Format,
    HarnessConfig, Params, CSV_HEADER, WARMUPS,
};
use flatpar::quickhull::datasets::Generator;
use serde_json::Value;

fn smoke(b: Benchmark, threads: usize) -> BenchSpec {
    BenchSpec::preset(b, "smoke", 11, threads).unwrap()
}

fn quick() -> HarnessConfig {
    HarnessConfig {
        max_runs: 12,
        ..HarnessConfig::default()
    }
}

#[test]
fn protocol_fields_for_every_benchmark() {
    for b in Benchmark::ALL {
        let r = run_bench_with(&smoke(b, 2), &quick()).unwrap();
        assert_eq!(r.warmups, WARMUPS);
        assert_eq!(WARMUPS, 5);
        assert!(r.runs >= 10 && r.runs <= 12);
        assert_eq!(r.times_s.len(), r.runs);
        assert!(r.times_s.iter().all(|&t| t > 0.0));
        assert_eq!(r.threads, 2);
        assert_eq!(r.benchmark, b.name());
        let mean = r.times_s.iter().sum::<f64>() / r.times_s.len() as f64;
        assert!((r.mean_s - mean).abs() <= 1e-12 * mean);
        match b {
            Benchmark::Quickhull => assert!(r.flops.is_none() && r.gflops.is_none()),
            _ => {
                let g = r.flops.unwrap() as f64 / r.mean_s / 1e9;
                assert!((r.gflops.unwrap() - g).abs() <= 1e-12 * g);
            }
        }
    }
}

#[test]
fn checksums_stable_across_runs_and_threads() {
    for b in Benchmark::ALL {
        let a = run_bench_with(&smoke(b, 1), &quick()).unwrap();
        let c = run_bench_with(&smoke(b, 3), &quick()).unwrap();
        assert_eq!(a.checksum, c.checksum, "{b}");
        let other = BenchSpec {
            seed: 12,
            ..smoke(b, 1)
        };
        assert_ne!(
            run_bench_with(&other, &quick()).unwrap().checksum,
            a.checksum,
            "{b}"
        );
    }
}

#[test]
fn json_round_trips_and_schema_is_stable() {
    let keys = |r: &BenchReport| -> Vec<String> {
        match serde_json::to_value(r).unwrap() {
            Value::Object(m) => m.keys().cloned().collect(),
            _ => unreachable!(),
        }
    };
    let spec = smoke(Benchmark::Nbody, 1);
    let a = run_bench_with(&spec, &quick()).unwrap();
    let b = run_bench_with(&spec, &quick()).unwrap();
    assert_eq!(keys(&a), keys(&b));
    let text = render(&a, Format::Json).unwrap();
    let parsed: Value = serde_json::from_str(&text).unwrap();
    assert_eq!(parsed["benchmark"], "nbody");
    let back: BenchReport = serde_json::from_str(&text).unwrap();
    assert_eq!(back, a);
    for k in [
        "benchmark",
        "params",
        "seed",
        "threads",
        "runs",
        "mean_s",
        "stddev_rel",
        "flops",
        "gflops",
    ] {
        assert!(parsed.get(k).is_some(), "missing {k}");
    }

    let hull = run_bench_with(&smoke(Benchmark::Quickhull, 1), &quick()).unwrap();
    let v: Value = serde_json::from_str(&render(&hull, Format::Json).unwrap()).unwrap();
    assert!(v.get("gflops").is_none() && v.get("flops").is_none());
}

#[test]
fn csv_has_header_and_one_row() {
    for b in Benchmark::ALL {
        let r = run_bench_with(&smoke(b, 1), &quick()).unwrap();
        let text = render(&r, Format::Csv).unwrap();
        let mut rd = csv::Reader::from_reader(text.as_bytes());
        let header: Vec<String> = rd.headers().unwrap().iter().map(String::from).collect();
        assert_eq!(header, CSV_HEADER);
        let rows: Vec<csv::StringRecord> = rd.records().map(Result::unwrap).collect();
        assert_eq!(rows.len(), 1);
        assert_eq!(&rows[0][0], b.name());
        let gflops = &rows[0][10];
        assert_eq!(gflops.is_empty(), b == Benchmark::Quickhull);
    }
}

#[test]
fn verification_after_timing() {
    let cfg = HarnessConfig {
        verify: true,
        ..quick()
    };
    for b in Benchmark::ALL {
        let r = run_bench_with(&smoke(b, 2), &cfg).unwrap();
        let v = r.verification.expect("requested");
        assert!(v.passed, "{b}: {} {}", v.method, v.detail);
    }
    let spec = BenchSpec::new(
        Params::Quickhull {
            generator: Generator::Quadratic,
            n: 2000,
        },
        5,
        1,
    );
    let v = verify_spec(&spec).unwrap();
    assert!(v.verification.passed);
    assert_eq!(v.verification.method, "gift-wrapping oracle");
}

#[test]
fn invariant_checks_above_oracle_caps() {
    let spec = BenchSpec::new(
        Params::Quickhull {
            generator: Generator::Disk,
            n: 200_000,
        },
        1,
        2,
    );
    let v = verify_spec(&spec).unwrap();
    assert!(v.verification.passed, "{}", v.verification.detail);
    assert_eq!(v.verification.method, "hull invariants");
    let spec = BenchSpec::new(
        Params::Mg {
            class: flatpar::multigrid::NasClass::S,
            side: 64,
            iters: 1,
        },
        1,
        2,
    );
    let v = verify_spec(&spec).unwrap();
    assert!(v.verification.passed);
    assert_eq!(v.verification.method, "residual decrease");
}

#[test]
fn generation_deterministic_and_disk_in_bounds() {
    for b in Benchmark::ALL {
        let s = smoke(b, 1);
        assert_eq!(generate(&s).unwrap(), generate(&s).unwrap());
    }
    let spec = BenchSpec::new(
        Params::Quickhull {
            generator: Generator::Disk,
            n: 10_000,
        },
        3,
        1,
    );
    match generate(&spec).unwrap() {
        flatpar::bench::Input::Quickhull(p) => assert!(p.iter().all(|q| q.x * q.x + q.y * q.y <= 1.0)),
        _ => unreachable!(),
    }
}

#[test]
fn default_config_runs_at_least_ten() {
    let r = run_bench(&smoke(Benchmark::Quickhull, 1)).unwrap();
    assert!(r.runs >= 10 && r.runs <= 50);
    assert_eq!(r.converged, r.stddev_rel < 0.03);
}
