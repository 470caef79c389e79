use flatpar::attention::{
    custom_attention, flash_attention, flash_attention_with_stats, matmul_nt, online_softmax, stable_softmax,
    standard_attention, AttentionProblem, Matrix, TileConfig,
};
use flatpar::par;
use proptest::prelude::*;

fn softmax_f64(row: &[f64]) -> Vec<f64> {
    let m = row.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let l: f64 = row.iter().map(|x| (x - m).exp()).sum();
    row.iter().map(|x| (x - m).exp() / l).collect()
}

fn attention_f64(p: &AttentionProblem) -> Vec<f64> {
    let (n, d) = (p.n(), p.d());
    let mut out = vec![0.0; n * d];
    for i in 0..n {
        let s: Vec<f64> = (0..n)
            .map(|j| {
                (0..d)
                    .map(|t| p.q().get(i, t) as f64 * p.k().get(j, t) as f64)
                    .sum()
            })
            .collect();
        let w = softmax_f64(&s);
        for c in 0..d {
            out[i * d + c] = (0..n).map(|j| w[j] * p.v().get(j, c) as f64).sum();
        }
    }
    out
}

fn max_abs(a: &Matrix, b: &[f64]) -> f64 {
    a.as_slice()
        .iter()
        .zip(b)
        .map(|(&x, &y)| (x as f64 - y).abs())
        .fold(0.0, f64::max)
}

#[test]
fn matmul_nt_matches_triple_loop() {
    let a = Matrix::random(17, 9, -2.0, 2.0, 1);
    let b = Matrix::random(13, 9, -2.0, 2.0, 2);
    let c = matmul_nt(&a, &b).unwrap();
    for i in 0..17 {
        for j in 0..13 {
            let mut acc = 0.0f32;
            for t in 0..9 {
                acc += a.get(i, t) * b.get(j, t);
            }
            assert_eq!(c.get(i, j), acc);
        }
    }
}

#[test]
fn stable_softmax_matches_double_precision() {
    let s = Matrix::random(8, 8, -5.0, 5.0, 3);
    let p = stable_softmax(&s);
    for i in 0..8 {
        let row: Vec<f64> = s.row(i).iter().map(|&x| x as f64).collect();
        for (got, want) in p.row(i).iter().zip(softmax_f64(&row)) {
            assert!((*got as f64 - want).abs() < 1e-6);
        }
    }
}

#[test]
fn online_softmax_matches_stable_for_smaller_tiles() {
    let s = Matrix::random(64, 64, -8.0, 8.0, 4);
    let stable = stable_softmax(&s);
    assert_eq!(online_softmax(&s, 64).unwrap(), stable);
    for t in [8, 16, 32] {
        assert!(online_softmax(&s, t).unwrap().max_abs_diff(&stable).unwrap() < 2e-6);
    }
}

#[test]
fn standard_matches_double_precision_oracle() {
    let p = AttentionProblem::new(
        Matrix::random(64, 8, -1.0, 1.0, 10),
        Matrix::random(64, 8, -1.0, 1.0, 11),
        Matrix::random(64, 8, -1.0, 1.0, 12),
    )
    .unwrap();
    assert!(max_abs(&standard_attention(&p).unwrap(), &attention_f64(&p)) < 1e-5);
}

#[test]
fn paths_agree_with_standard() {
    for (n, d) in [(128, 16), (512, 64), (1024, 64)] {
        let p = AttentionProblem::random(n, d, n as u64).unwrap();
        let std = standard_attention(&p).unwrap();
        let flash = flash_attention(&p, TileConfig::default()).unwrap();
        let custom = custom_attention(&p, d).unwrap();
        assert!(flash.max_abs_diff(&std).unwrap() <= 1e-3, "flash {n} {d}");
        assert!(custom.max_abs_diff(&std).unwrap() <= 1e-3, "custom {n} {d}");
        assert!(flash.max_abs_diff(&custom).unwrap() <= 1e-3);
    }
}

#[test]
fn custom_single_block_and_moderate_size() {
    let p = AttentionProblem::random(32, 32, 7).unwrap();
    let single = custom_attention(&p, 32).unwrap();
    assert!(single.max_abs_diff(&standard_attention(&p).unwrap()).unwrap() < 1e-5);

    let p = AttentionProblem::new(
        Matrix::random(256, 32, -1.0, 1.0, 1),
        Matrix::random(256, 32, -1.0, 1.0, 2),
        Matrix::random(256, 32, -1.0, 1.0, 3),
    )
    .unwrap();
    let got = custom_attention(&p, 32).unwrap();
    assert!(got.max_abs_diff(&standard_attention(&p).unwrap()).unwrap() < 1e-4);
}

#[test]
fn flash_single_tile_and_tile_sweep() {
    let p = AttentionProblem::new(
        Matrix::random(128, 16, -1.0, 1.0, 21),
        Matrix::random(128, 16, -1.0, 1.0, 22),
        Matrix::random(128, 16, -1.0, 1.0, 23),
    )
    .unwrap();
    let std = standard_attention(&p).unwrap();
    let one = flash_attention(&p, TileConfig::new(128, 128)).unwrap();
    assert!(one.max_abs_diff(&std).unwrap() < 1e-5);
    for tj in [32, 64] {
        let o = flash_attention(&p, TileConfig::new(32, tj)).unwrap();
        assert!(o.max_abs_diff(&one).unwrap() < 2e-5, "Tj = {tj}");
    }
}

#[test]
fn flash_random_512_matches_standard() {
    let p = AttentionProblem::random(512, 64, 99).unwrap();
    let o = flash_attention(&p, TileConfig::new(64, 64)).unwrap();
    assert!(o.max_abs_diff(&standard_attention(&p).unwrap()).unwrap() <= 1e-3);
}

#[test]
fn flash_scratch_never_quadratic() {
    let p = AttentionProblem::random(1024, 64, 1).unwrap();
    let cfg = TileConfig::default();
    let (_, stats) = flash_attention_with_stats(&p, cfg).unwrap();
    let (ti, tj, d) = (cfg.ti, cfg.tj, 64);
    assert!(stats.peak_block_floats <= 2 * ti * (d + tj));
    assert!(stats.largest_buffer < 1024 * 1024 / 16);
}

#[test]
fn outputs_independent_of_thread_count() {
    let p = AttentionProblem::random(256, 32, 5).unwrap();
    let run = || {
        (
            standard_attention(&p).unwrap(),
            custom_attention(&p, 32).unwrap(),
            flash_attention(&p, TileConfig::new(32, 64)).unwrap(),
        )
    };
    let one = par::with_threads(1, run);
    for t in [2, 8] {
        assert_eq!(par::with_threads(t, run), one);
    }
}

#[test]
fn scaling_divides_scores() {
    let p = AttentionProblem::random(16, 4, 2).unwrap();
    let s = p.scaled();
    assert_eq!(s.q().get(3, 1), p.q().get(3, 1) * 0.5);
    assert_eq!(s.k(), p.k());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn softmax_rows_are_distributions(seed in any::<u64>(), rows in 1usize..12, tiles in 1usize..6, t in 1usize..9) {
        let cols = tiles * t;
        let s = Matrix::random(rows, cols, -20.0, 20.0, seed);
        for p in [stable_softmax(&s), online_softmax(&s, t).unwrap()] {
            for i in 0..rows {
                prop_assert!(p.row(i).iter().all(|&x| x >= 0.0));
                let sum: f32 = p.row(i).iter().sum();
                prop_assert!((sum - 1.0).abs() <= 1e-5);
            }
        }
    }

    #[test]
    fn softmax_shift_invariance(seed in any::<u64>(), c in -50.0f32..50.0) {
        let s = Matrix::random(4, 16, -5.0, 5.0, seed);
        let shifted = Matrix::from_fn(4, 16, |i, j| s.get(i, j) + if i == 2 { c } else { 0.0 });
        let (a, b) = (stable_softmax(&s), stable_softmax(&shifted));
        for (x, y) in a.row(2).iter().zip(b.row(2)) {
            prop_assert!((x - y).abs() <= 1e-6);
        }
    }

    #[test]
    fn all_paths_agree_on_small_problems(seed in any::<u64>(), blocks in 1usize..5, d in 1usize..9) {
        let n = blocks * d * 2;
        let p = AttentionProblem::random(n, d, seed).unwrap();
        let std = standard_attention(&p).unwrap();
        prop_assert!(custom_attention(&p, d).unwrap().max_abs_diff(&std).unwrap() <= 1e-3);
        prop_assert!(flash_attention(&p, TileConfig::new(d, 2 * d)).unwrap().max_abs_diff(&std).unwrap() <= 1e-3);
    }
}
