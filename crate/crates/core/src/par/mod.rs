//! Deterministic flat data-parallel combinators.
//!
//! Every benchmark kernel in this crate expresses its parallelism through
//! these functions. They run on a rayon worker pool whose size is set by
//! [`set_threads`], [`with_threads`] or the `FLATPAR_THREADS` environment
//! variable; outputs are bit-identical for any worker count.
//!
//! ```
//! use flatpar::par::{self, monoid, ScanMode};
//!
//! let xs = par::map(&[1, 2, 3], |x| x * 2);
//! assert_eq!(xs.as_slice(), &[2, 4, 6]);
//! assert_eq!(par::reduce(&xs, &monoid::sum()), 12);
//! let ex = par::scan(&[1, 2, 3], &monoid::sum(), ScanMode::Exclusive);
//! assert_eq!(ex.as_slice(), &[0, 1, 3]);
//! ```

mod array;
pub mod monoid;
mod ops;
mod pool;

pub use array::{ParArray, SegmentedVector};
pub use monoid::Monoid;
pub use ops::{
    gather, iota, map, map2, partition, reduce, reduce_by_index, reduce_by_index_with, reduce_indexed,
    replicate, scan, scatter, segment_ids, segmented_scan, segmented_scan_flags, tabulate, tabulate_rows,
    Determinism, ScanMode, CHUNK,
};
pub use pool::{current_threads, set_threads, with_threads, THREADS_ENV};
