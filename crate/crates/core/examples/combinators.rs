//! Tour of the flat data-parallel combinators.
//!
//! `cargo run --example combinators`

use flatpar::par::{self, monoid, ScanMode, SegmentedVector};

fn main() -> flatpar::Result<()> {
    let xs: Vec<i64> = (1..=10).collect();

    let squares = par::map(&xs, |x| x * x);
    let total = par::reduce(&squares, &monoid::sum());
    println!("squares {:?} sum {total}", squares.as_slice());

    let inc = par::scan(&xs, &monoid::sum(), ScanMode::Inclusive);
    let exc = par::scan(&xs, &monoid::sum(), ScanMode::Exclusive);
    println!("inclusive {:?}", inc.as_slice());
    println!("exclusive {:?}", exc.as_slice());

    // Three segments of lengths 3, 4 and 3.
    let sv = SegmentedVector::from_lengths(par::ParArray::from_vec(xs.clone()), &[3, 4, 3])?;
    let seg = par::segmented_scan(&sv, &monoid::sum(), ScanMode::Inclusive);
    println!("segmented {:?}", seg.as_slice());

    let (even, odd) = par::partition(&xs, |x| x % 2 == 0);
    println!("even {:?} odd {:?}", even.as_slice(), odd.as_slice());

    // Negative indices are dropped.
    let moved = par::scatter(&[0i64; 5], &[4, -1, 0, 2], &[10, 20, 30, 40])?;
    println!("scatter {:?}", moved.as_slice());

    let buckets: Vec<usize> = xs.iter().map(|x| (*x as usize) % 3).collect();
    let hist = par::reduce_by_index(&[0i64; 3], &monoid::sum(), &buckets, &xs)?;
    println!("sum by x mod 3 {:?}", hist.as_slice());

    // Float results are bit-identical at any thread count.
    let fs: Vec<f64> = (0..100_000).map(|i| (i as f64).sin()).collect();
    let one = par::with_threads(1, || par::reduce(&fs, &monoid::sum()));
    let four = par::with_threads(4, || par::reduce(&fs, &monoid::sum()));
    println!(
        "float sum 1 thread {one:e}, 4 threads {four:e}, identical: {}",
        one.to_bits() == four.to_bits()
    );
    Ok(())
}
