//! Non-strict closure: close every snapshot statically, then run the strict
//! engine on the closed snapshots. A non-strict journey decomposes into
//! maximal same-step path segments, and each such segment is a single arc of
//! the closed snapshot, so the strict rule on {G_i*} captures exactly the
//! non-strict journeys of {G_i}.

use crate::closure::{Closure, Flavor};
use crate::graph::{Arc, EvolvingGraph, Snapshot};
use crate::strict::{CloseError, EngineError, PredecessorState};

/// A snapshot whose arcs form a static transitive closure: one arc per
/// ordered pair joined by a directed path in the original snapshot. Never
/// contains self-arcs, even on cycles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClosedSnapshot {
    pub step: usize,
    pub arcs: Vec<Arc>,
}

impl ClosedSnapshot {
    pub fn into_snapshot(self) -> Snapshot {
        Snapshot::new(self.step, self.arcs)
    }
}

/// Per-snapshot closure worker with reusable scratch space. Traversals start
/// only from vertices that have outgoing arcs; each traversal scans a
/// snapshot's adjacency at most once, so a snapshot costs O(sources * |E_i|)
/// arc touches.
pub struct StaticCloser {
    n: usize,
    adj: Vec<Vec<usize>>,
    sources: Vec<usize>,
    visited_epoch: Vec<u64>,
    epoch: u64,
    queue: Vec<usize>,
    arc_touches: u64,
}

impl StaticCloser {
    pub fn new(n: usize) -> Self {
        StaticCloser {
            n,
            adj: vec![Vec::new(); n],
            sources: Vec::new(),
            visited_epoch: vec![0; n],
            epoch: 0,
            queue: Vec::new(),
            arc_touches: 0,
        }
    }

    /// Adjacency-entry scans performed so far, across all snapshots.
    pub fn arc_touches(&self) -> u64 {
        self.arc_touches
    }

    pub fn close(&mut self, snap: &Snapshot) -> Result<ClosedSnapshot, EngineError> {
        for arc in &snap.arcs {
            let (u, v) = (arc.src, arc.dst);
            if u >= self.n || v >= self.n {
                let bad = if u >= self.n { u } else { v };
                return Err(EngineError::EndpointOutOfRange { step: snap.step, v: bad, n: self.n });
            }
            if u == v {
                continue;
            }
            if self.adj[u].is_empty() {
                self.sources.push(u);
            }
            self.adj[u].push(v);
            self.arc_touches += 1;
        }
        let mut arcs = Vec::new();
        for i in 0..self.sources.len() {
            let src = self.sources[i];
            self.epoch += 1;
            self.visited_epoch[src] = self.epoch;
            self.queue.clear();
            self.queue.push(src);
            let mut head = 0;
            while head < self.queue.len() {
                let u = self.queue[head];
                head += 1;
                for j in 0..self.adj[u].len() {
                    let v = self.adj[u][j];
                    self.arc_touches += 1;
                    if self.visited_epoch[v] != self.epoch {
                        self.visited_epoch[v] = self.epoch;
                        self.queue.push(v);
                        arcs.push(Arc::new(src, v));
                    }
                }
            }
        }
        for i in 0..self.sources.len() {
            let src = self.sources[i];
            self.adj[src].clear();
        }
        self.sources.clear();
        arcs.sort_unstable();
        Ok(ClosedSnapshot { step: snap.step, arcs })
    }
}

/// One-shot static transitive closure of a single snapshot.
pub fn static_closure(snap: &Snapshot, n: usize) -> Result<ClosedSnapshot, EngineError> {
    StaticCloser::new(n).close(snap)
}

/// Non-strict closure of a materialized graph.
pub fn nonstrict_closure(g: &EvolvingGraph, early_stop: bool) -> Result<Closure, EngineError> {
    let mut closer = StaticCloser::new(g.n);
    let mut state = PredecessorState::new(g.n);
    if !(early_stop && state.is_complete()) {
        for snap in &g.snapshots {
            let closed = closer.close(snap)?;
            state.process_snapshot(&closed.into_snapshot())?;
            if early_stop && state.is_complete() {
                break;
            }
        }
    }
    Ok(state.into_closure(Flavor::NonStrict))
}

/// Non-strict closure of a snapshot stream. With `early_stop`, nothing past
/// the completing snapshot is pulled from the stream.
pub fn nonstrict_closure_stream<I, E>(n: usize, stream: I, early_stop: bool) -> Result<Closure, CloseError>
where
    I: IntoIterator<Item = Result<Snapshot, E>>,
    CloseError: From<E>,
{
    let mut closer = StaticCloser::new(n);
    let mut state = PredecessorState::new(n);
    if !(early_stop && state.is_complete()) {
        for item in stream {
            let snap = item?;
            let closed = closer.close(&snap)?;
            state.process_snapshot(&closed.into_snapshot())?;
            if early_stop && state.is_complete() {
                break;
            }
        }
    }
    Ok(state.into_closure(Flavor::NonStrict))
}
