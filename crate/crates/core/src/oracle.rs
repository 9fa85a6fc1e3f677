//! Reference implementations kept deliberately independent of the engines:
//! a brute-force reachability oracle over boolean matrices for correctness
//! testing, and a per-source earliest-arrival baseline that recomputes
//! reachability from every vertex, the strategy the dedicated engine is
//! benchmarked against.
//!
//! Nothing here reads predecessor sets or closed snapshots; only the graph
//! model and the result container are shared.

use std::io::{self, Write};

use crate::closure::{Closure, Flavor};
use crate::graph::EvolvingGraph;

/// Brute force is quadratic-in-n per step and exists for small instances
/// only.
pub const ORACLE_VERTEX_CAP: usize = 12;

/// Sentinel arrival step, strictly greater than any real step.
pub const UNREACHABLE: usize = usize::MAX;

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("instance has {n} vertices, brute-force oracle is capped at {cap}")]
    AboveCap { n: usize, cap: usize },
    #[error("source vertex {vertex} out of range for n={n}")]
    SourceOutOfRange { vertex: usize, n: usize },
}

fn all_rows_complete(reach: &[Vec<bool>]) -> bool {
    reach.iter().all(|row| row.iter().all(|&b| b))
}

/// Step-indexed reachability by dynamic programming: row u of `reach` is the
/// set of vertices some journey from u has reached within the prefix so far.
/// Strict steps add a single arc layer read from the pre-step rows;
/// non-strict steps saturate within the snapshot.
pub fn oracle_reach(g: &EvolvingGraph, flavor: Flavor) -> Result<Closure, OracleError> {
    let n = g.n;
    if n > ORACLE_VERTEX_CAP {
        return Err(OracleError::AboveCap { n, cap: ORACLE_VERTEX_CAP });
    }
    let mut reach: Vec<Vec<bool>> = (0..n)
        .map(|u| {
            let mut row = vec![false; n];
            row[u] = true;
            row
        })
        .collect();
    let mut stop = all_rows_complete(&reach).then_some(0);
    for snap in &g.snapshots {
        for u in 0..n {
            match flavor {
                Flavor::Strict => {
                    let before = reach[u].clone();
                    for arc in &snap.arcs {
                        if before[arc.src] {
                            reach[u][arc.dst] = true;
                        }
                    }
                }
                Flavor::NonStrict => loop {
                    let mut changed = false;
                    for arc in &snap.arcs {
                        if reach[u][arc.src] && !reach[u][arc.dst] {
                            reach[u][arc.dst] = true;
                            changed = true;
                        }
                    }
                    if !changed {
                        break;
                    }
                },
            }
        }
        if stop.is_none() && all_rows_complete(&reach) {
            stop = Some(snap.step);
        }
    }
    Ok(Closure::from_reach_fn(n, flavor, stop, |u, v| reach[u][v]))
}

/// Earliest arrival step from one source to every vertex.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ArrivalTable {
    pub source: usize,
    pub flavor: Flavor,
    pub arrival: Vec<usize>,
}

impl ArrivalTable {
    pub fn reaches(&self, v: usize) -> bool {
        self.arrival[v] != UNREACHABLE
    }

    pub fn write_text<W: Write>(&self, out: &mut W) -> io::Result<()> {
        writeln!(out, "source={}", self.source)?;
        for (v, &a) in self.arrival.iter().enumerate() {
            if a == UNREACHABLE {
                writeln!(out, "{v} -1")?;
            } else {
                writeln!(out, "{v} {a}")?;
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("arrival text is UTF-8")
    }
}

/// Forward step sweep from one source. Strict steps may only extend from
/// vertices reached at an earlier step; non-strict steps saturate within the
/// snapshot, so same-step chains propagate. The sweep stops once every
/// vertex has an arrival.
pub fn earliest_arrival(g: &EvolvingGraph, source: usize, flavor: Flavor) -> Result<ArrivalTable, OracleError> {
    let n = g.n;
    if source >= n {
        return Err(OracleError::SourceOutOfRange { vertex: source, n });
    }
    let mut arrival = vec![UNREACHABLE; n];
    arrival[source] = 0;
    let mut remaining = n - 1;
    for snap in &g.snapshots {
        if remaining == 0 {
            break;
        }
        let t = snap.step;
        match flavor {
            Flavor::Strict => {
                for arc in &snap.arcs {
                    if arrival[arc.src] < t && arrival[arc.dst] == UNREACHABLE {
                        arrival[arc.dst] = t;
                        remaining -= 1;
                    }
                }
            }
            Flavor::NonStrict => loop {
                let mut changed = false;
                for arc in &snap.arcs {
                    if arrival[arc.src] <= t && arrival[arc.dst] == UNREACHABLE {
                        arrival[arc.dst] = t;
                        remaining -= 1;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            },
        }
    }
    Ok(ArrivalTable { source, flavor, arrival })
}

/// The comparison strategy: n independent single-source sweeps, reach
/// assembled from the arrival tables. Cost scales with the total arc volume
/// across steps rather than with the largest snapshot.
pub fn baseline_closure(g: &EvolvingGraph, flavor: Flavor) -> Closure {
    let n = g.n;
    let tables: Vec<ArrivalTable> = (0..n)
        .map(|s| earliest_arrival(g, s, flavor).expect("sources enumerate 0..n"))
        .collect();
    let mut connected = true;
    let mut last_needed = 0;
    for table in &tables {
        for &a in &table.arrival {
            if a == UNREACHABLE {
                connected = false;
            } else if a > last_needed {
                last_needed = a;
            }
        }
    }
    let stop = connected.then_some(last_needed);
    Closure::from_reach_fn(n, flavor, stop, |u, v| tables[u].reaches(v))
}
