//! Strict closure engine: predecessor-set propagation over a snapshot stream.
//!
//! Each vertex v carries a committed predecessor set pred(v) (value as of the
//! end of the previous step) and a step-local buffer pred_new(v). An arc
//! (u,v) in the current snapshot merges pred(u) into pred_new(v); buffers are
//! committed only at the step boundary, so sources always read end-of-step
//! values and arc order within a snapshot cannot matter. A journey acquires
//! at most one arc per step this way, which is exactly the strict rule.
//!
//! Cost: one merge is O(n) bit positions, so a run is O(k * mu * n) where mu
//! is the largest snapshot; the `merge_work` counter makes that observable.

use std::convert::Infallible;

use crate::bitset::BitSet;
use crate::closure::{Closure, Flavor};
use crate::format::ParseError;
use crate::graph::{EvolvingGraph, Snapshot};

#[derive(Debug, thiserror::Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("snapshot step {found} arrived out of order (expected {expected})")]
    StepMismatch { expected: usize, found: usize },
    #[error("step {step}: arc endpoint {v} out of range for n={n}")]
    EndpointOutOfRange { step: usize, v: usize, n: usize },
}

/// Error of a closure run driven by a fallible snapshot stream.
#[derive(Debug, thiserror::Error)]
pub enum CloseError {
    #[error(transparent)]
    Engine(#[from] EngineError),
    #[error(transparent)]
    Parse(#[from] ParseError),
}

impl From<Infallible> for CloseError {
    fn from(x: Infallible) -> Self {
        match x {}
    }
}

/// Engine state between steps.
///
/// Holds the invariants:
/// - v is in pred(v) always;
/// - pred_new(v) is disjoint from pred(v) while a step is being merged and
///   empty at every step boundary;
/// - pred sets only grow.
pub struct PredecessorState {
    n: usize,
    pred: Vec<BitSet>,
    pred_new: Vec<BitSet>,
    pred_size: Vec<usize>,
    touched: Vec<usize>,
    touched_flag: BitSet,
    complete_count: usize,
    current_step: usize,
    first_complete: Option<usize>,
    merge_work: u64,
}

impl PredecessorState {
    pub fn new(n: usize) -> Self {
        let mut state = PredecessorState {
            n,
            pred: (0..n).map(|_| BitSet::new(n)).collect(),
            pred_new: (0..n).map(|_| BitSet::new(n)).collect(),
            pred_size: vec![0; n],
            touched: Vec::new(),
            touched_flag: BitSet::new(n),
            complete_count: 0,
            current_step: 0,
            first_complete: None,
            merge_work: 0,
        };
        state.seed();
        state
    }

    /// Back to the post-init state without releasing any allocation.
    pub fn reset(&mut self) {
        for v in 0..self.n {
            self.pred[v].clear();
            self.pred_new[v].clear();
        }
        self.touched.clear();
        self.touched_flag.clear();
        self.seed();
    }

    fn seed(&mut self) {
        for v in 0..self.n {
            self.pred[v].insert(v);
            self.pred_size[v] = 1;
        }
        self.complete_count = if self.n <= 1 { self.n } else { 0 };
        self.current_step = 0;
        self.merge_work = 0;
        self.first_complete = (self.complete_count == self.n).then_some(0);
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn current_step(&self) -> usize {
        self.current_step
    }

    /// True once every vertex has all n vertices as predecessors.
    pub fn is_complete(&self) -> bool {
        self.complete_count == self.n
    }

    /// First step boundary at which the state was complete; 0 when complete
    /// at initialization (n <= 1).
    pub fn first_complete(&self) -> Option<usize> {
        self.first_complete
    }

    pub fn pred(&self, v: usize) -> &BitSet {
        &self.pred[v]
    }

    pub fn pred_new(&self, v: usize) -> &BitSet {
        &self.pred_new[v]
    }

    pub fn pred_size(&self, v: usize) -> usize {
        self.pred_size[v]
    }

    /// Largest |pred(v) \ {v}| over all v.
    pub fn max_pred_excluding_self(&self) -> usize {
        self.pred_size.iter().map(|&s| s - 1).max().unwrap_or(0)
    }

    /// Bit positions scanned by merges and commits so far. Bounded by
    /// 2 * k * mu * n over any run.
    pub fn merge_work(&self) -> u64 {
        self.merge_work
    }

    /// Bytes held by the predecessor sets and their buffers.
    pub fn state_bytes(&self) -> usize {
        let rows: usize = self
            .pred
            .iter()
            .chain(self.pred_new.iter())
            .map(BitSet::storage_bytes)
            .sum();
        rows + self.touched_flag.storage_bytes()
            + self.pred_size.capacity() * std::mem::size_of::<usize>()
            + self.touched.capacity() * std::mem::size_of::<usize>()
    }

    /// Folds one snapshot into the state: merge every arc into the step
    /// buffers, then commit the buffers at the boundary.
    pub fn process_snapshot(&mut self, snap: &Snapshot) -> Result<(), EngineError> {
        if snap.step != self.current_step + 1 {
            return Err(EngineError::StepMismatch { expected: self.current_step + 1, found: snap.step });
        }
        for arc in &snap.arcs {
            let (u, v) = (arc.src, arc.dst);
            if u >= self.n || v >= self.n {
                let bad = if u >= self.n { u } else { v };
                return Err(EngineError::EndpointOutOfRange { step: snap.step, v: bad, n: self.n });
            }
            if u == v {
                continue;
            }
            if self.touched_flag.insert(v) {
                self.touched.push(v);
            }
            // pred(u) still holds its end-of-previous-step value here; the
            // subtraction keeps pred_new disjoint from pred.
            self.pred_new[v].or_and_not(&self.pred[u], &self.pred[v]);
            self.merge_work += self.n as u64;
        }
        for i in 0..self.touched.len() {
            let v = self.touched[i];
            let added = self.pred[v].union_with(&self.pred_new[v]);
            if added > 0 {
                self.pred_size[v] += added;
                if self.pred_size[v] == self.n {
                    self.complete_count += 1;
                }
            }
            self.pred_new[v].clear();
            self.merge_work += self.n as u64;
        }
        self.touched.clear();
        self.touched_flag.clear();
        self.current_step = snap.step;
        if self.first_complete.is_none() && self.complete_count == self.n {
            self.first_complete = Some(snap.step);
        }
        Ok(())
    }

    /// Finishes the run. The predecessor relation, transposed, is the reach
    /// relation; no extra pass is needed.
    pub fn into_closure(self, flavor: Flavor) -> Closure {
        Closure::from_pred_rows(flavor, self.first_complete, self.pred)
    }
}

/// Strict closure of a materialized graph.
pub fn strict_closure(g: &EvolvingGraph, early_stop: bool) -> Result<Closure, EngineError> {
    let mut state = PredecessorState::new(g.n);
    if !(early_stop && state.is_complete()) {
        for snap in &g.snapshots {
            state.process_snapshot(snap)?;
            if early_stop && state.is_complete() {
                break;
            }
        }
    }
    Ok(state.into_closure(Flavor::Strict))
}

/// Strict closure of a snapshot stream. With `early_stop`, nothing past the
/// completing snapshot is pulled from the stream.
pub fn strict_closure_stream<I, E>(n: usize, stream: I, early_stop: bool) -> Result<Closure, CloseError>
where
    I: IntoIterator<Item = Result<Snapshot, E>>,
    CloseError: From<E>,
{
    let mut state = PredecessorState::new(n);
    if !(early_stop && state.is_complete()) {
        for item in stream {
            let snap = item?;
            state.process_snapshot(&snap)?;
            if early_stop && state.is_complete() {
                break;
            }
        }
    }
    Ok(state.into_closure(Flavor::Strict))
}
