//! Core types for untimed directed evolving graphs: a fixed vertex set and an
//! ordered sequence of arc sets, one per step.

use std::collections::HashSet;

use crate::bitset::BitSet;

/// Dense zero-based vertex index; the vertex set is fixed for the whole graph.
pub type VertexId = usize;

/// Directed arc. Self-loops are dropped at ingestion, so `src != dst` holds
/// for every stored arc.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Arc {
    pub src: VertexId,
    pub dst: VertexId,
}

impl Arc {
    pub fn new(src: VertexId, dst: VertexId) -> Self {
        Arc { src, dst }
    }
}

/// One step of the evolving graph: the arcs present at step `step` (1-based).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Snapshot {
    pub step: usize,
    pub arcs: Vec<Arc>,
}

impl Snapshot {
    pub fn new(step: usize, arcs: Vec<Arc>) -> Self {
        Snapshot { step, arcs }
    }
}

/// An evolving graph: `n` vertices and snapshots with contiguous steps `1..=k`.
/// Empty snapshots are permitted and count toward `k`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EvolvingGraph {
    pub n: usize,
    pub snapshots: Vec<Snapshot>,
}

impl EvolvingGraph {
    pub fn new(n: usize) -> Self {
        EvolvingGraph { n, snapshots: Vec::new() }
    }

    /// Builds a graph from per-step arc lists, steps numbered from 1.
    /// Intended for tests and small fixtures; panics on out-of-range
    /// endpoints or self-loops rather than normalizing.
    pub fn from_arc_lists(n: usize, steps: &[&[(VertexId, VertexId)]]) -> Self {
        let snapshots = steps
            .iter()
            .enumerate()
            .map(|(i, arcs)| {
                let arcs = arcs
                    .iter()
                    .map(|&(u, v)| {
                        assert!(u < n && v < n, "endpoint out of range");
                        assert_ne!(u, v, "self-loop in fixture");
                        Arc::new(u, v)
                    })
                    .collect();
                Snapshot::new(i + 1, arcs)
            })
            .collect();
        EvolvingGraph { n, snapshots }
    }

    /// Number of steps `k`.
    pub fn k(&self) -> usize {
        self.snapshots.len()
    }

    pub fn params(&self) -> GraphParams {
        compute_params(self)
    }
}

/// Derived size parameters: step count `k`, the peak per-step arc count `mu`,
/// and the cumulative distinct arc count `m`. Always `m >= mu`.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct GraphParams {
    pub k: usize,
    pub mu: usize,
    pub m: usize,
}

pub fn compute_params(g: &EvolvingGraph) -> GraphParams {
    let mut union: HashSet<Arc> = HashSet::new();
    let mut mu = 0;
    for snap in &g.snapshots {
        mu = mu.max(snap.arcs.len());
        union.extend(snap.arcs.iter().copied());
    }
    GraphParams { k: g.snapshots.len(), mu, m: union.len() }
}

/// Incremental view of [`GraphParams`] over a snapshot stream, plus the peak
/// per-snapshot buffer size. The cumulative-arc set is a packed n*n bitmap,
/// so tracker memory is O(n^2) bits independent of the stream length.
pub struct ParamTracker {
    n: usize,
    k: usize,
    mu: usize,
    m: usize,
    seen: BitSet,
    peak_snapshot_arcs: usize,
}

impl ParamTracker {
    pub fn new(n: usize) -> Self {
        ParamTracker {
            n,
            k: 0,
            mu: 0,
            m: 0,
            seen: BitSet::new(n * n),
            peak_snapshot_arcs: 0,
        }
    }

    pub fn observe(&mut self, snap: &Snapshot) {
        self.k = self.k.max(snap.step);
        self.mu = self.mu.max(snap.arcs.len());
        self.peak_snapshot_arcs = self.peak_snapshot_arcs.max(snap.arcs.len());
        for arc in &snap.arcs {
            if self.seen.insert(arc.src * self.n + arc.dst) {
                self.m += 1;
            }
        }
    }

    pub fn params(&self) -> GraphParams {
        GraphParams { k: self.k, mu: self.mu, m: self.m }
    }

    /// Largest single-snapshot arc buffer seen so far.
    pub fn peak_snapshot_arcs(&self) -> usize {
        self.peak_snapshot_arcs
    }

    pub fn storage_bytes(&self) -> usize {
        self.seen.storage_bytes()
    }

    /// Wraps a fallible snapshot stream so every yielded snapshot is observed.
    pub fn wrap<'a, I, E>(&'a mut self, inner: I) -> Tracked<'a, I::IntoIter>
    where
        I: IntoIterator<Item = Result<Snapshot, E>>,
    {
        Tracked { inner: inner.into_iter(), tracker: self }
    }
}

pub struct Tracked<'a, I> {
    inner: I,
    tracker: &'a mut ParamTracker,
}

impl<I, E> Iterator for Tracked<'_, I>
where
    I: Iterator<Item = Result<Snapshot, E>>,
{
    type Item = Result<Snapshot, E>;

    fn next(&mut self) -> Option<Self::Item> {
        let item = self.inner.next()?;
        if let Ok(snap) = &item {
            self.tracker.observe(snap);
        }
        Some(item)
    }
}
