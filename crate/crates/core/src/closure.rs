//! Closure results: which vertices can reach which through journeys, under
//! either journey flavor, plus the text form they are written in.

use std::fmt;
use std::io::{self, BufRead, Write};
use std::str::FromStr;

use crate::bitset::BitSet;
use crate::format::ParseError;

/// Journey flavor. Strict journeys traverse at most one arc per step and must
/// advance in time between arcs; non-strict journeys may chain any number of
/// arcs inside a single step.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Flavor {
    Strict,
    NonStrict,
}

impl fmt::Display for Flavor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Flavor::Strict => "strict",
            Flavor::NonStrict => "non-strict",
        })
    }
}

impl FromStr for Flavor {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "strict" => Ok(Flavor::Strict),
            "non-strict" | "nonstrict" => Ok(Flavor::NonStrict),
            other => Err(format!("unknown flavor `{other}` (expected `strict` or `non-strict`)")),
        }
    }
}

/// Reachability over a whole evolving graph: `reaches(u, v)` says whether a
/// journey of the given flavor goes from u to v. Rows are indexed by target:
/// `pred_rows[v]` holds every vertex that reaches v, v itself included.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    n: usize,
    flavor: Flavor,
    stop_step: Option<usize>,
    pred_rows: Vec<BitSet>,
}

impl Closure {
    pub fn from_pred_rows(flavor: Flavor, stop_step: Option<usize>, pred_rows: Vec<BitSet>) -> Self {
        let n = pred_rows.len();
        for (v, row) in pred_rows.iter().enumerate() {
            assert_eq!(row.domain(), n, "row {v} domain mismatch");
            assert!(row.contains(v), "row {v} must contain its own vertex");
        }
        Closure { n, flavor, stop_step, pred_rows }
    }

    /// Builds a closure by probing a reachability predicate for every pair.
    pub fn from_reach_fn<F: FnMut(usize, usize) -> bool>(
        n: usize,
        flavor: Flavor,
        stop_step: Option<usize>,
        mut reaches: F,
    ) -> Self {
        let mut pred_rows: Vec<BitSet> = (0..n).map(|_| BitSet::new(n)).collect();
        for v in 0..n {
            pred_rows[v].insert(v);
            for u in 0..n {
                if u != v && reaches(u, v) {
                    pred_rows[v].insert(u);
                }
            }
        }
        Closure { n, flavor, stop_step, pred_rows }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn flavor(&self) -> Flavor {
        self.flavor
    }

    /// First step after which every vertex could already reach every other,
    /// or None when the closure never became complete. 0 means complete
    /// before any step was processed (n <= 1).
    pub fn stop_step(&self) -> Option<usize> {
        self.stop_step
    }

    pub fn reaches(&self, u: usize, v: usize) -> bool {
        self.pred_rows[v].contains(u)
    }

    pub fn predecessors(&self, v: usize) -> &BitSet {
        &self.pred_rows[v]
    }

    /// True when every vertex reaches every other vertex.
    pub fn is_connected(&self) -> bool {
        self.pred_rows.iter().all(|row| row.is_full())
    }

    /// All u -> v closure pairs with u != v, sorted.
    pub fn arc_pairs(&self) -> Vec<(usize, usize)> {
        let mut pairs = Vec::new();
        for (v, row) in self.pred_rows.iter().enumerate() {
            for u in row.iter_ones() {
                if u != v {
                    pairs.push((u, v));
                }
            }
        }
        pairs.sort_unstable();
        pairs
    }

    pub fn arc_count(&self) -> usize {
        self.pred_rows.iter().enumerate().map(|(v, row)| row.count_ones() - usize::from(row.contains(v))).sum()
    }

    pub fn write_text<W: Write>(&self, out: &mut W) -> io::Result<()> {
        let stop = match self.stop_step {
            Some(step) => step.to_string(),
            None => "none".to_string(),
        };
        writeln!(out, "# closure flavor={} stop_step={stop}", self.flavor)?;
        writeln!(out, "n={}", self.n)?;
        for (u, v) in self.arc_pairs() {
            writeln!(out, "{u} {v}")?;
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut buf = Vec::new();
        self.write_text(&mut buf).expect("write to Vec cannot fail");
        String::from_utf8(buf).expect("closure text is UTF-8")
    }

    /// Reads the text form back. The flavor/stop_step comment is optional;
    /// absent, strict and none are assumed.
    pub fn read_text<R: BufRead>(input: R) -> Result<Self, ParseError> {
        let mut flavor = Flavor::Strict;
        let mut stop_step: Option<usize> = None;
        let mut n: Option<usize> = None;
        let mut pred_rows: Vec<BitSet> = Vec::new();
        let mut line_no = 0;
        for line in input.lines() {
            line_no += 1;
            let line = line?;
            let trimmed = line.trim();
            if trimmed.starts_with('#') {
                for token in trimmed.trim_start_matches('#').split_whitespace() {
                    if let Some(value) = token.strip_prefix("flavor=") {
                        flavor = value
                            .parse()
                            .map_err(|_| ParseError::InvalidToken { line: line_no, token: value.to_string() })?;
                    } else if let Some(value) = token.strip_prefix("stop_step=") {
                        stop_step = if value == "none" {
                            None
                        } else {
                            Some(value.parse().map_err(|_| ParseError::InvalidToken {
                                line: line_no,
                                token: value.to_string(),
                            })?)
                        };
                    }
                }
                continue;
            }
            if trimmed.is_empty() {
                continue;
            }
            let Some(count) = n else {
                let Some(value) = trimmed.strip_prefix("n=") else {
                    return Err(ParseError::BadHeader { line: line_no, text: trimmed.to_string() });
                };
                let count: usize = value
                    .parse()
                    .map_err(|_| ParseError::InvalidToken { line: line_no, token: value.to_string() })?;
                pred_rows = (0..count).map(|_| BitSet::new(count)).collect();
                for (v, row) in pred_rows.iter_mut().enumerate() {
                    row.insert(v);
                }
                n = Some(count);
                continue;
            };
            let mut tokens = trimmed.split_whitespace();
            let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
                return Err(ParseError::BadArcLine { line: line_no, text: trimmed.to_string() });
            };
            let u: usize = a
                .parse()
                .map_err(|_| ParseError::InvalidToken { line: line_no, token: a.to_string() })?;
            let v: usize = b
                .parse()
                .map_err(|_| ParseError::InvalidToken { line: line_no, token: b.to_string() })?;
            for &x in [u, v].iter() {
                if x >= count {
                    return Err(ParseError::VertexOutOfRange { line: line_no, v: x, n: count });
                }
            }
            pred_rows[v].insert(u);
        }
        match n {
            Some(n) => Ok(Closure { n, flavor, stop_step, pred_rows }),
            None => Err(ParseError::MissingHeader { line: line_no + 1 }),
        }
    }
}
