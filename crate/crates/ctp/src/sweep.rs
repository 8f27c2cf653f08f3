//! Parallel minor sweep with a deterministic witness.
//!
//! Minors are visited in the canonical order of the core sweep: by size,
//! then row set, then column set, both in lexicographic order. Workers test
//! minors concurrently, but the reported witness is always the failing minor
//! with the smallest position in that order, so the report is identical to a
//! sequential run.

use ctp_core::tp::{check_minor, combinations, minor_count, TPReport};
use ctp_core::{Error, PolyMatrix, Result};
use rayon::prelude::*;

/// Environment variable holding the default worker count.
pub const WORKERS_ENV: &str = "CTP_WORKERS";

/// Default cap on the number of minors a sweep may evaluate.
pub const DEFAULT_MAX_MINORS: u64 = 2_000_000;

/// Worker count from `CTP_WORKERS`, falling back to the available parallelism.
pub fn default_workers() -> usize {
    std::env::var(WORKERS_ENV)
        .ok()
        .and_then(|s| s.trim().parse::<usize>().ok())
        .filter(|&n| n > 0)
        .unwrap_or_else(|| std::thread::available_parallelism().map(|n| n.get()).unwrap_or(1))
}

/// Fails with a guard error when the sweep would exceed `max_minors`.
pub fn guard(m: &PolyMatrix, r: usize, max_minors: u64) -> Result<u128> {
    let total = minor_count(m.rows(), m.cols(), r);
    if total > max_minors as u128 {
        return Err(Error::Guard(format!(
            "{total} minors up to order {r} exceed the limit of {max_minors}"
        )));
    }
    Ok(total)
}

/// Checks every minor of size at most `r` using `workers` threads.
pub fn check_tp_order_parallel(m: &PolyMatrix, r: usize, workers: usize, max_minors: u64) -> Result<TPReport> {
    guard(m, r, max_minors)?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers.max(1))
        .build()
        .map_err(|e| Error::Precondition(format!("cannot start worker pool: {e}")))?;
    let size = m.rows().min(m.cols());
    let mut report = TPReport {
        order_checked: r,
        size,
        minors_checked: 0,
        witness: None,
    };
    for k in 1..=r.min(size) {
        let row_sets = combinations(m.rows(), k);
        let col_sets = combinations(m.cols(), k);
        let per_row = col_sets.len();
        let total = row_sets.len() * per_row;
        let found = pool.install(|| {
            (0..total).into_par_iter().find_map_first(|idx| {
                let (rs, cs) = (&row_sets[idx / per_row], &col_sets[idx % per_row]);
                check_minor(m, rs, cs)
                    .expect("index sets are generated in range")
                    .map(|w| (idx, w))
            })
        });
        match found {
            Some((idx, w)) => {
                report.minors_checked += idx as u64 + 1;
                report.witness = Some(w);
                return Ok(report);
            }
            None => report.minors_checked += total as u64,
        }
    }
    Ok(report)
}
