//! Benchmark harness: times closure computation over a seeded generator grid
//! and emits CSV. Generation and parsing stay outside the timed region; each
//! instance is materialized once and shared by all algorithms so rows of one
//! instance are directly comparable.

use std::io::{self, Write};
use std::time::Instant;

use crate::closure::{Closure, Flavor};
use crate::generate::{GenModel, GenSpec};
use crate::graph::EvolvingGraph;
use crate::nonstrict::nonstrict_closure;
use crate::oracle::baseline_closure;
use crate::strict::strict_closure;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Algorithm {
    DedicatedStrict,
    DedicatedNonStrict,
    Baseline,
}

impl std::fmt::Display for Algorithm {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Algorithm::DedicatedStrict => "dedicated-strict",
            Algorithm::DedicatedNonStrict => "dedicated-nonstrict",
            Algorithm::Baseline => "baseline",
        })
    }
}

impl std::str::FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "dedicated-strict" => Ok(Algorithm::DedicatedStrict),
            "dedicated-nonstrict" => Ok(Algorithm::DedicatedNonStrict),
            "baseline" => Ok(Algorithm::Baseline),
            other => Err(format!(
                "unknown algorithm `{other}` (expected dedicated-strict, dedicated-nonstrict, or baseline)"
            )),
        }
    }
}

pub const CSV_HEADER: &str = "algorithm,n,k,mu,m,seed,wall_time_s,stop_step,connected";

/// One measured run.
#[derive(Clone, Debug, PartialEq)]
pub struct BenchRecord {
    pub algorithm: Algorithm,
    pub n: usize,
    pub k: usize,
    pub mu: usize,
    pub m: usize,
    pub seed: u64,
    pub wall_time_s: f64,
    pub stop_step: Option<usize>,
    pub connected: bool,
}

impl BenchRecord {
    pub fn csv_row(&self) -> String {
        let stop = self.stop_step.map_or(String::new(), |s| s.to_string());
        format!(
            "{},{},{},{},{},{},{:.9},{},{}",
            self.algorithm, self.n, self.k, self.mu, self.m, self.seed, self.wall_time_s, stop, self.connected
        )
    }
}

/// Benchmark grid: the cross product of `ns` and `ks` under one generator
/// model, `reps` fresh instances per cell. Instance seeds are derived from
/// `base_seed` by position: the c-th (cell, rep) combination in n-major,
/// k-minor, rep-innermost order uses base_seed + c, counting infeasible
/// cells too.
#[derive(Clone, Debug)]
pub struct GridSpec {
    pub ns: Vec<usize>,
    pub ks: Vec<usize>,
    pub model: GenModel,
    pub reps: usize,
    pub base_seed: u64,
    pub algorithms: Vec<Algorithm>,
    pub early_stop: bool,
}

/// Runs one algorithm on a materialized instance, returning the closure and
/// the wall time of the closure computation alone.
pub fn time_closure(g: &EvolvingGraph, algorithm: Algorithm, early_stop: bool) -> (Closure, f64) {
    let start = Instant::now();
    let closure = match algorithm {
        Algorithm::DedicatedStrict => strict_closure(g, early_stop).expect("generated streams are well-formed"),
        Algorithm::DedicatedNonStrict => nonstrict_closure(g, early_stop).expect("generated streams are well-formed"),
        // The baseline has no step-boundary early stop; each per-source
        // sweep already exits once its arrivals are complete.
        Algorithm::Baseline => baseline_closure(g, Flavor::Strict),
    };
    (closure, start.elapsed().as_secs_f64())
}

fn median(mut xs: Vec<f64>) -> f64 {
    xs.sort_by(|a, b| a.partial_cmp(b).expect("wall times are finite"));
    let mid = xs.len() / 2;
    if xs.len() % 2 == 1 {
        xs[mid]
    } else {
        (xs[mid - 1] + xs[mid]) / 2.0
    }
}

/// Runs the whole grid, streaming rows to `out` as they are measured. Each
/// cell additionally gets per-algorithm median comment lines, and infeasible
/// cells produce a comment line instead of data rows. Returns all records.
pub fn run_grid<W: Write>(spec: &GridSpec, out: &mut W) -> io::Result<Vec<BenchRecord>> {
    writeln!(out, "{CSV_HEADER}")?;
    let mut records = Vec::new();
    let mut counter: u64 = 0;
    for &n in &spec.ns {
        for &k in &spec.ks {
            let mut cell_times: Vec<(Algorithm, Vec<f64>)> =
                spec.algorithms.iter().map(|&a| (a, Vec::new())).collect();
            let mut feasible = true;
            for _ in 0..spec.reps {
                let seed = spec.base_seed.wrapping_add(counter);
                counter += 1;
                if !feasible {
                    continue;
                }
                let gen = GenSpec { n, k, model: spec.model, seed };
                let g = match gen.materialize() {
                    Ok(g) => g,
                    Err(e) => {
                        feasible = false;
                        eprintln!("skipping cell n={n} k={k}: {e}");
                        writeln!(out, "# skipped n={n} k={k}: {e}")?;
                        continue;
                    }
                };
                let params = g.params();
                for (algorithm, times) in cell_times.iter_mut() {
                    time_closure(&g, *algorithm, spec.early_stop); // warm-up, discarded
                    let (closure, wall_time_s) = time_closure(&g, *algorithm, spec.early_stop);
                    let record = BenchRecord {
                        algorithm: *algorithm,
                        n,
                        k,
                        mu: params.mu,
                        m: params.m,
                        seed,
                        wall_time_s,
                        stop_step: closure.stop_step(),
                        connected: closure.is_connected(),
                    };
                    writeln!(out, "{}", record.csv_row())?;
                    times.push(wall_time_s);
                    records.push(record);
                }
            }
            for (algorithm, times) in &cell_times {
                if !times.is_empty() {
                    writeln!(out, "# median algorithm={algorithm} n={n} k={k} wall_time_s={:.9}", median(times.clone()))?;
                }
            }
        }
    }
    Ok(records)
}
