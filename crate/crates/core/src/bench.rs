//! Factorized inverse versus fraction-free elimination.
//!
//! Runs are single-threaded per measurement so timings are not disturbed by
//! contention; no thresholds are asserted anywhere since timings depend on the
//! machine.

use std::time::{Duration, Instant};

use serde::Serialize;

use crate::exact::format_rational;
use crate::factorization::FactorizationBundle;
use crate::matrices::hankel_g;
use crate::{Error, ExactMatrix, GCParams, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Factorized,
    Elimination,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchRecord {
    pub method: Method,
    pub params: GCParams,
    pub n: usize,
    /// Median wall time in nanoseconds.
    pub wall_nanos: u128,
    /// Largest bit length of any integer produced along the way.
    pub max_bits: u64,
    /// Big-integer multiplications, when instrumented (elimination only).
    pub multiplications: Option<u64>,
}

fn median(mut samples: Vec<Duration>) -> Duration {
    samples.sort();
    samples[samples.len() / 2]
}

fn factorized(params: GCParams, n: usize) -> Result<(ExactMatrix, u64)> {
    let bundle = FactorizationBundle::new(params, n)?;
    let inv = bundle.inverse();
    let bits = bundle.max_bits().max(inv.max_bits());
    Ok((inv, bits))
}

/// Times both methods at every size in `n_list`, after first checking that they
/// produce identical matrices. Records come back sorted by `(method, n)`.
pub fn run_bench(params: GCParams, n_list: &[usize], repetitions: usize) -> Result<Vec<BenchRecord>> {
    let repetitions = repetitions.max(1);
    let mut records = Vec::new();
    for &n in n_list {
        let g = hankel_g(params, n);
        let (fast, fast_bits) = factorized(params, n)?;
        let (slow, stats) = g.invert_oracle_with_stats()?;
        if let Some((row, col)) = first_difference(&fast, &slow) {
            return Err(Error::BenchMismatch {
                n,
                row,
                col,
                factorized: format_rational(fast.get(row, col)),
                elimination: format_rational(slow.get(row, col)),
            });
        }

        let mut fast_times = Vec::with_capacity(repetitions);
        let mut slow_times = Vec::with_capacity(repetitions);
        for _ in 0..repetitions {
            let start = Instant::now();
            std::hint::black_box(factorized(params, n)?);
            fast_times.push(start.elapsed());

            let start = Instant::now();
            std::hint::black_box(hankel_g(params, n).invert_oracle_with_stats()?);
            slow_times.push(start.elapsed());
        }
        records.push(BenchRecord {
            method: Method::Factorized,
            params,
            n,
            wall_nanos: median(fast_times).as_nanos(),
            max_bits: fast_bits,
            multiplications: None,
        });
        records.push(BenchRecord {
            method: Method::Elimination,
            params,
            n,
            wall_nanos: median(slow_times).as_nanos(),
            max_bits: stats.max_bits.max(slow.max_bits()),
            multiplications: Some(stats.multiplications),
        });
    }
    records.sort_by_key(|r| (r.method, r.n));
    Ok(records)
}

fn first_difference(a: &ExactMatrix, b: &ExactMatrix) -> Option<(usize, usize)> {
    if a.shape() != b.shape() {
        return Some((0, 0));
    }
    (0..a.rows())
        .flat_map(|i| (0..a.cols()).map(move |j| (i, j)))
        .find(|&(i, j)| a.get(i, j) != b.get(i, j))
}

pub fn to_csv(records: &[BenchRecord]) -> String {
    let mut out = String::from("method,p,q,a,n,wall_nanos,max_bits,multiplications\n");
    for r in records {
        out.push_str(&format!(
            "{},{},{},{},{},{},{},{}\n",
            match r.method {
                Method::Factorized => "factorized",
                Method::Elimination => "elimination",
            },
            r.params.p,
            r.params.q,
            r.params.a,
            r.n,
            r.wall_nanos,
            r.max_bits,
            r.multiplications.map_or(String::new(), |m| m.to_string()),
        ));
    }
    out
}
