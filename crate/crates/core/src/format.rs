//! Line-based text format for evolving graphs, with streaming ingestion.
//!
//! Layout: `#` comment lines anywhere (ignored), a `n=<count>` header as the
//! first non-comment line, then for each step a `t=<i>` marker (starting at 1,
//! increasing by exactly 1) followed by `u v` arc lines. The step count is
//! inferred from the last marker; end of input terminates the last snapshot.
//! Duplicate arcs within a snapshot are dropped, as are self-loops; both are
//! counted in [`IngestStats`].

use std::collections::HashSet;
use std::io::{self, BufRead, Write};

use crate::graph::{Arc, EvolvingGraph, Snapshot};

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: expected header `n=<count>` before any other content")]
    MissingHeader { line: usize },
    #[error("line {line}: malformed header `{text}`")]
    BadHeader { line: usize, text: String },
    #[error("line {line}: step marker t={found} does not follow t={prev} (steps start at 1 and increase by 1)")]
    BadStepMarker { line: usize, prev: usize, found: usize },
    #[error("line {line}: vertex {v} out of range for n={n}")]
    VertexOutOfRange { line: usize, v: usize, n: usize },
    #[error("line {line}: malformed integer `{token}`")]
    InvalidToken { line: usize, token: String },
    #[error("line {line}: arc line before the first step marker")]
    ArcBeforeStep { line: usize },
    #[error("line {line}: expected `u v` arc line, got `{text}`")]
    BadArcLine { line: usize, text: String },
    #[error(transparent)]
    Io(#[from] io::Error),
}

/// Counts of arcs dropped during ingestion.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct IngestStats {
    pub self_loops_dropped: usize,
    pub duplicate_arcs_dropped: usize,
}

fn parse_uint(token: &str, line: usize) -> Result<usize, ParseError> {
    token
        .parse()
        .map_err(|_| ParseError::InvalidToken { line, token: token.to_string() })
}

/// Streaming snapshot reader. Snapshots are yielded one at a time in step
/// order; the memory held per yield is proportional to that snapshot alone,
/// not to the whole stream. Errors surface lazily at the offending snapshot.
pub struct SnapshotReader<R: BufRead> {
    input: R,
    line_no: usize,
    n: usize,
    current_step: usize,
    arcs: Vec<Arc>,
    seen: HashSet<(usize, usize)>,
    stats: IngestStats,
    done: bool,
}

impl<R: BufRead> SnapshotReader<R> {
    /// Reads up to and including the header line.
    pub fn new(input: R) -> Result<Self, ParseError> {
        let mut reader = SnapshotReader {
            input,
            line_no: 0,
            n: 0,
            current_step: 0,
            arcs: Vec::new(),
            seen: HashSet::new(),
            stats: IngestStats::default(),
            done: false,
        };
        reader.read_header()?;
        Ok(reader)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Drop counts accumulated so far; final once the iterator is exhausted.
    pub fn stats(&self) -> IngestStats {
        self.stats
    }

    /// Next line with trailing newline trimmed, or None at end of input.
    fn next_line(&mut self) -> Result<Option<String>, ParseError> {
        let mut buf = String::new();
        let read = self.input.read_line(&mut buf)?;
        if read == 0 {
            return Ok(None);
        }
        self.line_no += 1;
        while buf.ends_with('\n') || buf.ends_with('\r') {
            buf.pop();
        }
        Ok(Some(buf))
    }

    fn read_header(&mut self) -> Result<(), ParseError> {
        loop {
            let Some(line) = self.next_line()? else {
                return Err(ParseError::MissingHeader { line: self.line_no + 1 });
            };
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let Some(value) = trimmed.strip_prefix("n=") else {
                return Err(ParseError::BadHeader { line: self.line_no, text: trimmed.to_string() });
            };
            self.n = parse_uint(value, self.line_no)?;
            return Ok(());
        }
    }

    fn push_arc(&mut self, u: usize, v: usize) {
        if u == v {
            self.stats.self_loops_dropped += 1;
        } else if self.seen.insert((u, v)) {
            self.arcs.push(Arc::new(u, v));
        } else {
            self.stats.duplicate_arcs_dropped += 1;
        }
    }

    fn take_snapshot(&mut self) -> Snapshot {
        self.seen.clear();
        Snapshot::new(self.current_step, std::mem::take(&mut self.arcs))
    }

    fn fail(&mut self, err: ParseError) -> Option<Result<Snapshot, ParseError>> {
        self.done = true;
        Some(Err(err))
    }
}

impl<R: BufRead> Iterator for SnapshotReader<R> {
    type Item = Result<Snapshot, ParseError>;

    fn next(&mut self) -> Option<Self::Item> {
        if self.done {
            return None;
        }
        loop {
            let line = match self.next_line() {
                Ok(Some(line)) => line,
                Ok(None) => {
                    self.done = true;
                    if self.current_step >= 1 {
                        return Some(Ok(self.take_snapshot()));
                    }
                    return None;
                }
                Err(e) => return self.fail(e),
            };
            let trimmed = line.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            if let Some(value) = trimmed.strip_prefix("t=") {
                let step = match parse_uint(value, self.line_no) {
                    Ok(step) => step,
                    Err(e) => return self.fail(e),
                };
                if step != self.current_step + 1 {
                    let prev = self.current_step;
                    return self.fail(ParseError::BadStepMarker { line: self.line_no, prev, found: step });
                }
                let finished = if self.current_step >= 1 { Some(self.take_snapshot()) } else { None };
                self.current_step = step;
                if let Some(snap) = finished {
                    return Some(Ok(snap));
                }
                continue;
            }
            // Arc line.
            if self.current_step == 0 {
                return self.fail(ParseError::ArcBeforeStep { line: self.line_no });
            }
            let mut tokens = trimmed.split_whitespace();
            let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
                return self.fail(ParseError::BadArcLine { line: self.line_no, text: trimmed.to_string() });
            };
            let u = match parse_uint(a, self.line_no) {
                Ok(u) => u,
                Err(e) => return self.fail(e),
            };
            let v = match parse_uint(b, self.line_no) {
                Ok(v) => v,
                Err(e) => return self.fail(e),
            };
            for &x in [u, v].iter() {
                if x >= self.n {
                    return self.fail(ParseError::VertexOutOfRange { line: self.line_no, v: x, n: self.n });
                }
            }
            self.push_arc(u, v);
        }
    }
}

/// Parses a whole evolving graph, materializing every snapshot.
pub fn parse_evolving_graph<R: BufRead>(input: R) -> Result<(EvolvingGraph, IngestStats), ParseError> {
    let mut reader = SnapshotReader::new(input)?;
    let mut graph = EvolvingGraph::new(reader.n());
    for snap in reader.by_ref() {
        graph.snapshots.push(snap?);
    }
    Ok((graph, reader.stats()))
}

/// Writes snapshots in the text format, streaming; `comments` become leading
/// `#` lines.
pub fn write_snapshot_stream<W, I>(out: &mut W, n: usize, snapshots: I, comments: &[String]) -> io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = Snapshot>,
{
    for comment in comments {
        writeln!(out, "# {comment}")?;
    }
    writeln!(out, "n={n}")?;
    for snap in snapshots {
        writeln!(out, "t={}", snap.step)?;
        for arc in &snap.arcs {
            writeln!(out, "{} {}", arc.src, arc.dst)?;
        }
    }
    Ok(())
}

pub fn write_evolving_graph<W: Write>(out: &mut W, g: &EvolvingGraph, comments: &[String]) -> io::Result<()> {
    write_snapshot_stream(out, g.n, g.snapshots.iter().cloned(), comments)
}

pub fn graph_to_string(g: &EvolvingGraph) -> String {
    let mut buf = Vec::new();
    write_evolving_graph(&mut buf, g, &[]).expect("write to Vec cannot fail");
    String::from_utf8(buf).expect("format output is UTF-8")
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_two_step_example() {
        let (g, stats) = parse_evolving_graph("n=3\nt=1\n0 1\nt=2\n1 2\n".as_bytes()).unwrap();
        assert_eq!(g, EvolvingGraph::from_arc_lists(3, &[&[(0, 1)], &[(1, 2)]]));
        assert_eq!(stats, IngestStats::default());
    }

    #[test]
    fn parses_header_only_as_empty_graph() {
        let (g, _) = parse_evolving_graph("n=2\n".as_bytes()).unwrap();
        assert_eq!(g.n, 2);
        assert_eq!(g.k(), 0);
    }

    #[test]
    fn drops_duplicates_and_self_loops_with_counts() {
        let (g, stats) = parse_evolving_graph("n=3\nt=1\n0 1\n0 1\n0 0\n".as_bytes()).unwrap();
        assert_eq!(g.snapshots[0].arcs, vec![Arc::new(0, 1)]);
        assert_eq!(stats, IngestStats { self_loops_dropped: 1, duplicate_arcs_dropped: 1 });
    }

    #[test]
    fn duplicate_allowed_again_in_next_step() {
        let (g, stats) = parse_evolving_graph("n=3\nt=1\n0 1\nt=2\n0 1\n".as_bytes()).unwrap();
        assert_eq!(g.k(), 2);
        assert_eq!(stats.duplicate_arcs_dropped, 0);
    }

    #[test]
    fn comments_and_blank_lines_ignored() {
        let text = "# generated\n\nn=2\n# body\nt=1\n\n0 1\n";
        let (g, _) = parse_evolving_graph(text.as_bytes()).unwrap();
        assert_eq!(g.snapshots[0].arcs, vec![Arc::new(0, 1)]);
    }

    #[test]
    fn empty_snapshots_preserved() {
        let (g, _) = parse_evolving_graph("n=2\nt=1\nt=2\nt=3\n0 1\n".as_bytes()).unwrap();
        assert_eq!(g.k(), 3);
        assert!(g.snapshots[0].arcs.is_empty());
        assert!(g.snapshots[1].arcs.is_empty());
        assert_eq!(g.snapshots[2].arcs.len(), 1);
    }

    #[test]
    fn error_missing_header() {
        let err = parse_evolving_graph("# only comments\n".as_bytes()).unwrap_err();
        assert!(matches!(err, ParseError::MissingHeader { .. }), "{err}");
    }

    #[test]
    fn error_bad_header_line() {
        let err = parse_evolving_graph("vertices: 3\n".as_bytes()).unwrap_err();
        assert!(matches!(err, ParseError::BadHeader { line: 1, .. }), "{err}");
    }

    #[test]
    fn error_vertex_out_of_range_with_line() {
        let err = parse_evolving_graph("n=2\nt=1\n0 5\n".as_bytes()).unwrap_err();
        assert!(matches!(err, ParseError::VertexOutOfRange { line: 3, v: 5, n: 2 }), "{err}");
    }

    #[test]
    fn error_non_increasing_steps() {
        let err = parse_evolving_graph("n=2\nt=1\nt=1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, ParseError::BadStepMarker { line: 3, prev: 1, found: 1 }), "{err}");
        let err = parse_evolving_graph("n=2\nt=2\n".as_bytes()).unwrap_err();
        assert!(matches!(err, ParseError::BadStepMarker { line: 2, prev: 0, found: 2 }), "{err}");
        let err = parse_evolving_graph("n=2\nt=1\nt=3\n".as_bytes()).unwrap_err();
        assert!(matches!(err, ParseError::BadStepMarker { line: 3, prev: 1, found: 3 }), "{err}");
    }

    #[test]
    fn error_non_integer_token() {
        let err = parse_evolving_graph("n=2\nt=1\n0 x\n".as_bytes()).unwrap_err();
        assert!(matches!(err, ParseError::InvalidToken { line: 3, .. }), "{err}");
    }

    #[test]
    fn error_arc_before_step() {
        let err = parse_evolving_graph("n=2\n0 1\n".as_bytes()).unwrap_err();
        assert!(matches!(err, ParseError::ArcBeforeStep { line: 2 }), "{err}");
    }

    #[test]
    fn streaming_error_raised_at_offending_snapshot() {
        let text = "n=3\nt=1\n0 1\nt=2\n9 9\n";
        let mut reader = SnapshotReader::new(text.as_bytes()).unwrap();
        let first = reader.next().unwrap();
        assert!(first.is_ok());
        let second = reader.next().unwrap();
        assert!(second.is_err());
        assert!(reader.next().is_none());
    }

    #[test]
    fn stream_and_parse_yield_identical_sequences() {
        let text = "n=4\nt=1\n0 1\n2 3\nt=2\nt=3\n1 2\n";
        let (g, _) = parse_evolving_graph(text.as_bytes()).unwrap();
        let streamed: Vec<Snapshot> = SnapshotReader::new(text.as_bytes())
            .unwrap()
            .map(|r| r.unwrap())
            .collect();
        assert_eq!(g.snapshots, streamed);
    }

    #[test]
    fn streaming_peak_buffer_independent_of_stream_length() {
        // Snapshots of <=8 arcs each; the largest buffer held at any yield
        // must not grow with the number of steps.
        fn peak_for(k: usize) -> usize {
            let mut text = String::from("n=16\n");
            for step in 1..=k {
                text.push_str(&format!("t={step}\n"));
                for j in 0..8 {
                    let u = (step + j) % 16;
                    let v = (step + j + 1 + j % 3) % 16;
                    if u != v {
                        text.push_str(&format!("{u} {v}\n"));
                    }
                }
            }
            SnapshotReader::new(text.as_bytes())
                .unwrap()
                .map(|r| r.unwrap().arcs.len())
                .max()
                .unwrap_or(0)
        }
        let small = peak_for(100);
        let large = peak_for(10_000);
        assert!(large <= 8);
        assert_eq!(small, large);
    }

    fn arb_graph() -> impl Strategy<Value = EvolvingGraph> {
        (1usize..6, 0usize..5).prop_flat_map(|(n, k)| {
            let pairs: Vec<(usize, usize)> = (0..n)
                .flat_map(|u| (0..n).filter(move |&v| v != u).map(move |v| (u, v)))
                .collect();
            let per_step = proptest::sample::subsequence(pairs.clone(), 0..=pairs.len());
            proptest::collection::vec(per_step, k..=k).prop_map(move |steps| {
                let snapshots = steps
                    .into_iter()
                    .enumerate()
                    .map(|(i, arcs)| {
                        Snapshot::new(i + 1, arcs.into_iter().map(|(u, v)| Arc::new(u, v)).collect())
                    })
                    .collect();
                EvolvingGraph { n, snapshots }
            })
        })
    }

    proptest! {
        #[test]
        fn roundtrip_identity_on_normalized_graphs(g in arb_graph()) {
            let text = graph_to_string(&g);
            let (back, stats) = parse_evolving_graph(text.as_bytes()).unwrap();
            prop_assert_eq!(back, g);
            prop_assert_eq!(stats, IngestStats::default());
        }

        #[test]
        fn stream_matches_parse(g in arb_graph()) {
            let text = graph_to_string(&g);
            let (parsed, _) = parse_evolving_graph(text.as_bytes()).unwrap();
            let streamed: Vec<Snapshot> = SnapshotReader::new(text.as_bytes())
                .unwrap()
                .map(|r| r.unwrap())
                .collect();
            prop_assert_eq!(parsed.snapshots, streamed);
        }
    }
}
