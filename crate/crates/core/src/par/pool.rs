//! Worker-pool configuration.
//!
//! The thread count is resolved in this order: a scoped override installed by
//! [`with_threads`], the process-wide value from [`set_threads`], the
//! `FLATPAR_THREADS` environment variable, and finally the number of
//! available CPUs. Results never depend on the resolved value.

use std::cell::Cell;
use std::collections::HashMap;
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, OnceLock};

use rayon::{ThreadPool, ThreadPoolBuilder};

/// Environment variable holding the default worker count.
pub const THREADS_ENV: &str = "FLATPAR_THREADS";

static GLOBAL_THREADS: AtomicUsize = AtomicUsize::new(0);

thread_local! {
    static SCOPED_THREADS: Cell<usize> = const { Cell::new(0) };
}

fn pools() -> &'static Mutex<HashMap<usize, Arc<ThreadPool>>> {
    static POOLS: OnceLock<Mutex<HashMap<usize, Arc<ThreadPool>>>> = OnceLock::new();
    POOLS.get_or_init(|| Mutex::new(HashMap::new()))
}

/// Sets the process-wide worker count. `None` clears it so the environment
/// variable (or the CPU count) applies again.
pub fn set_threads(threads: Option<usize>) {
    GLOBAL_THREADS.store(threads.unwrap_or(0), Ordering::SeqCst);
}

fn env_threads() -> Option<usize> {
    std::env::var(THREADS_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
}

fn configured_threads() -> usize {
    let scoped = SCOPED_THREADS.with(Cell::get);
    if scoped > 0 {
        return scoped;
    }
    let global = GLOBAL_THREADS.load(Ordering::SeqCst);
    if global > 0 {
        return global;
    }
    env_threads().unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Number of workers the next combinator call on this thread will use.
pub fn current_threads() -> usize {
    if rayon::current_thread_index().is_some() {
        rayon::current_num_threads()
    } else {
        configured_threads()
    }
}

/// Runs `f` with combinators on this thread limited to `threads` workers.
pub fn with_threads<R>(threads: usize, f: impl FnOnce() -> R) -> R {
    struct Restore(usize);
    impl Drop for Restore {
        fn drop(&mut self) {
            SCOPED_THREADS.with(|c| c.set(self.0));
        }
    }
    let prev = SCOPED_THREADS.with(|c| c.replace(threads.max(1)));
    let _restore = Restore(prev);
    f()
}

fn pool(threads: usize) -> Arc<ThreadPool> {
    let mut pools = pools().lock().unwrap_or_else(|e| e.into_inner());
    pools
        .entry(threads)
        .or_insert_with(|| {
            Arc::new(
                ThreadPoolBuilder::new()
                    .num_threads(threads)
                    .thread_name(move |i| format!("flatpar-{threads}-{i}"))
                    .build()
                    .expect("failed to build worker pool"),
            )
        })
        .clone()
}

/// Executes `f` inside the configured pool. Calls made from a worker thread
/// run inline on that worker's pool.
pub(crate) fn install<R: Send>(f: impl FnOnce() -> R + Send) -> R {
    if rayon::current_thread_index().is_some() {
        f()
    } else {
        pool(configured_threads()).install(f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn scoped_override_wins_and_restores() {
        with_threads(3, || {
            assert_eq!(current_threads(), 3);
            with_threads(1, || assert_eq!(current_threads(), 1));
            assert_eq!(current_threads(), 3);
            assert_eq!(install(rayon::current_num_threads), 3);
        });
    }
}
