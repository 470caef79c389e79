mod common;

use common::*;
use flatpar::par::{self, monoid, Determinism, Monoid, ScanMode, SegmentedVector};
use proptest::prelude::*;
use rand::Rng;

fn for_each_input(mut f: impl FnMut(usize, u64)) {
    for seed in 0..100u64 {
        f(LENGTHS[seed as usize % LENGTHS.len()], seed);
    }
}

#[test]
fn map_and_map2_match_loops() {
    for_each_input(|len, seed| {
        let xs = floats(len, seed);
        let ys = floats(len, seed + 1000);
        let got = same_across_threads(|| par::map(&xs, |x| x * 3.0 - 1.0));
        let want: Vec<f64> = xs.iter().map(|x| x * 3.0 - 1.0).collect();
        assert_eq!(got.as_slice(), want.as_slice());
        let got = same_across_threads(|| par::map2(&xs, &ys, |a, b| a * b).unwrap());
        let want: Vec<f64> = xs.iter().zip(&ys).map(|(a, b)| a * b).collect();
        assert_eq!(got.as_slice(), want.as_slice());
    });
}

#[test]
fn reduce_matches_tree_oracle() {
    for_each_input(|len, seed| {
        let xi = ints(len, seed);
        assert_eq!(
            same_across_threads(|| par::reduce(&xi, &monoid::sum())),
            xi.iter().sum::<i64>()
        );
        assert_eq!(
            same_across_threads(|| par::reduce(&xi, &monoid::max())),
            xi.iter().copied().max().unwrap_or(i64::MIN)
        );
        let xf = floats(len, seed);
        let got = same_across_threads(|| par::reduce(&xf, &monoid::sum()).to_bits());
        assert_eq!(got, tree_reduce(&xf, 0.0, |a, b| a + b).to_bits());
    });
}

#[test]
fn scan_matches_oracles() {
    for_each_input(|len, seed| {
        let xi = ints(len, seed);
        let mut acc = 0;
        let seq: Vec<i64> = xi
            .iter()
            .map(|x| {
                acc += x;
                acc
            })
            .collect();
        let inc = same_across_threads(|| par::scan(&xi, &monoid::sum(), ScanMode::Inclusive));
        assert_eq!(inc.as_slice(), seq.as_slice());
        let exc = same_across_threads(|| par::scan(&xi, &monoid::sum(), ScanMode::Exclusive));
        assert_eq!(exc.as_slice(), exclusive_from_inclusive(&seq, 0).as_slice());

        let xf = floats(len, seed);
        let want = tree_scan(&xf, |a, b| a + b);
        let got = same_across_threads(|| par::scan(&xf, &monoid::sum(), ScanMode::Inclusive));
        let bits = |v: &[f64]| v.iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&got), bits(&want));
        if len > 0 {
            assert_eq!(got[len - 1].to_bits(), par::reduce(&xf, &monoid::sum()).to_bits());
        }
    });
}

#[test]
fn segmented_scan_matches_oracle() {
    for_each_input(|len, seed| {
        let data = ints(len, seed);
        let flags = random_flags(len, seed);
        for (mode, inclusive) in [(ScanMode::Inclusive, true), (ScanMode::Exclusive, false)] {
            let got = same_across_threads(|| {
                par::segmented_scan_flags(&data, &flags, &monoid::sum(), mode).unwrap()
            });
            assert_eq!(
                got.as_slice(),
                seq_segmented_scan(&data, &flags, inclusive).as_slice()
            );
        }
        let sv = SegmentedVector::new(data.clone().into(), flags.clone().into()).unwrap();
        let ids = same_across_threads(|| par::segment_ids(sv.flags()));
        let mut seg = 0usize.wrapping_sub(1);
        for (i, &f) in flags.iter().enumerate() {
            seg = seg.wrapping_add(f as usize);
            assert_eq!(ids[i], seg);
        }
    });
}

#[test]
fn scatter_gather_partition_match_loops() {
    for_each_input(|len, seed| {
        let vals = ints(len, seed);
        let dest = ints(len, seed + 7);
        let idx = scatter_indices(len, seed);
        let got = same_across_threads(|| par::scatter(&dest, &idx, &vals).unwrap());
        assert_eq!(got.as_slice(), seq_scatter(&dest, &idx, &vals).as_slice());

        let gidx: Vec<usize> = idx.iter().map(|&i| if i < 0 { 0 } else { i as usize }).collect();
        if len > 0 {
            let g = same_across_threads(|| par::gather(&got, &gidx).unwrap());
            let want: Vec<i64> = gidx.iter().map(|&i| got[i]).collect();
            assert_eq!(g.as_slice(), want.as_slice());
        }

        let (yes, no) = same_across_threads(|| par::partition(&vals, |x| x % 3 == 0));
        let want_yes: Vec<i64> = vals.iter().copied().filter(|x| x % 3 == 0).collect();
        let want_no: Vec<i64> = vals.iter().copied().filter(|x| x % 3 != 0).collect();
        assert_eq!(yes.as_slice(), want_yes.as_slice());
        assert_eq!(no.as_slice(), want_no.as_slice());
    });
}

#[test]
fn reduce_by_index_matches_loop() {
    for_each_input(|len, seed| {
        let buckets = [1usize, 3, 64, 5000][seed as usize % 4];
        let mut r = rng(seed);
        let idx: Vec<usize> = (0..len).map(|_| r.gen_range(0..buckets)).collect();
        let vals = ints(len, seed);
        let dest = vec![0i64; buckets];
        let got = same_across_threads(|| par::reduce_by_index(&dest, &monoid::sum(), &idx, &vals).unwrap());
        assert_eq!(got.as_slice(), seq_histogram(buckets, &idx, &vals).as_slice());
        let relaxed =
            par::reduce_by_index_with(&dest, &monoid::sum(), &idx, &vals, Determinism::Relaxed).unwrap();
        assert_eq!(relaxed, got);
        let fv = floats(len, seed);
        same_across_threads(|| {
            par::reduce_by_index(&vec![0.0f64; buckets], &monoid::sum(), &idx, &fv)
                .unwrap()
                .iter()
                .map(|x| x.to_bits())
                .collect::<Vec<_>>()
        });
    });
}

#[test]
fn non_commutative_reduce_respects_order() {
    // String-like concatenation encoded as (length, hash) pairs.
    let concat = Monoid::new((0u64, 0u64), |a: (u64, u64), b: (u64, u64)| {
        (
            a.0 + b.0,
            a.1.wrapping_mul(31u64.wrapping_pow(b.0 as u32)).wrapping_add(b.1),
        )
    });
    let xs: Vec<(u64, u64)> = (0..20_000u64).map(|i| (1, i % 97)).collect();
    let mut want = (0u64, 0u64);
    for &x in &xs {
        want = concat.combine(want, x);
    }
    assert_eq!(same_across_threads(|| par::reduce(&xs, &concat)), want);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn last_inclusive_equals_reduce(xs in proptest::collection::vec(-1e6f64..1e6, 1..20_000)) {
        let inc = par::scan(&xs, &monoid::sum(), ScanMode::Inclusive);
        prop_assert_eq!(inc[xs.len() - 1].to_bits(), par::reduce(&xs, &monoid::sum()).to_bits());
    }

    #[test]
    fn single_segment_equals_scan(xs in proptest::collection::vec(-1000i64..1000, 1..10_000)) {
        let sv = SegmentedVector::from_lengths(xs.clone().into(), &[xs.len()]).unwrap();
        for mode in [ScanMode::Inclusive, ScanMode::Exclusive] {
            prop_assert_eq!(
                par::segmented_scan(&sv, &monoid::sum(), mode),
                par::scan(&xs, &monoid::sum(), mode)
            );
        }
    }

    #[test]
    fn partition_is_stable_permutation(xs in proptest::collection::vec(any::<i32>(), 0..10_000), k in 1i32..7) {
        let (a, b) = par::partition(&xs, |x| x.rem_euclid(k) == 0);
        prop_assert!(a.iter().all(|x| x.rem_euclid(k) == 0));
        prop_assert!(b.iter().all(|x| x.rem_euclid(k) != 0));
        let mut all: Vec<i32> = a.iter().chain(b.iter()).copied().collect();
        let mut sorted = xs.clone();
        all.sort_unstable();
        sorted.sort_unstable();
        prop_assert_eq!(all, sorted);
        let want_a: Vec<i32> = xs.iter().copied().filter(|x| x.rem_euclid(k) == 0).collect();
        prop_assert_eq!(a.as_slice(), want_a.as_slice());
    }

    #[test]
    fn scatter_then_gather_recovers(seed in any::<u64>(), len in 1usize..5000) {
        let idx: Vec<i64> = scatter_indices(len, seed).into_iter().filter(|&i| i >= 0).collect();
        let vals = ints(idx.len(), seed);
        let out = par::scatter(&vec![0i64; len], &idx, &vals).unwrap();
        let back = par::gather(&out, &idx.iter().map(|&i| i as usize).collect::<Vec<_>>()).unwrap();
        prop_assert_eq!(back.as_slice(), vals.as_slice());
    }
}
