//! Wall-clock timing of the Ryser permanent, with the naive expansion as a
//! cross-check for small sizes.

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::permanent::{permanent_naive, permanent_ryser, NAIVE_MAX_N, RYSER_MAX_N};
use crate::random::{random_disk_matrix, seeded};

const BENCH_SEED: u64 = 7;
const ORACLE_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRow {
    pub n: usize,
    pub median_ns: u128,
    /// Whether the result was compared with the naive expansion.
    pub oracle_checked: bool,
}

/// Median time of `reps` Ryser evaluations for every `n` in `1..=max_n`.
pub fn bench_permanent(max_n: usize, reps: usize) -> Result<Vec<BenchRow>> {
    if max_n > RYSER_MAX_N {
        return Err(Error::TooLarge { n: max_n, max: RYSER_MAX_N });
    }
    if reps == 0 {
        return Ok(Vec::new());
    }
    let mut rng = seeded(BENCH_SEED);
    let mut rows = Vec::with_capacity(max_n);
    for n in 1..=max_n {
        let m = random_disk_matrix(&mut rng, n, n);
        let mut times = Vec::with_capacity(reps);
        let mut value = Default::default();
        for _ in 0..reps {
            let start = Instant::now();
            value = std::hint::black_box(permanent_ryser(std::hint::black_box(&m))?);
            times.push(start.elapsed().as_nanos());
        }
        times.sort_unstable();
        let oracle_checked = n <= NAIVE_MAX_N;
        if oracle_checked {
            let oracle = permanent_naive(&m)?;
            if (value - oracle).norm() > ORACLE_TOLERANCE * oracle.norm().max(1.0) {
                return Err(Error::OracleMismatch {
                    n,
                    kernel: value.to_string(),
                    oracle: oracle.to_string(),
                });
            }
        }
        rows.push(BenchRow { n, median_ns: times[times.len() / 2], oracle_checked });
    }
    Ok(rows)
}

pub fn bench_csv(rows: &[BenchRow]) -> String {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "median_ns", "oracle_checked"]).expect("in-memory write");
    for r in rows {
        w.serialize((r.n, r.median_ns, r.oracle_checked)).expect("in-memory write");
    }
    String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is UTF-8")
}
