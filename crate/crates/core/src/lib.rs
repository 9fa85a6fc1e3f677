//! Transitive closure of journeys in evolving directed graphs.
//!
//! An evolving graph is a sequence of arc sets over a fixed vertex set, one
//! snapshot per step. A strict journey crosses at most one arc per step with
//! strictly increasing steps; a non-strict journey may chain any number of
//! arcs within a step. Both closures come from the same predecessor-merging
//! engine, which streams snapshots and keeps O(n^2) bits of state, so step
//! count is bounded only by time. The non-strict flavor closes each snapshot
//! statically before feeding it to the engine.
//!
//! ```
//! use tempoclose::closure::Flavor;
//! use tempoclose::graph::EvolvingGraph;
//! use tempoclose::{nonstrict, oracle, strict};
//!
//! // 0 -> 1 at step 1, then 1 -> 2 at step 2.
//! let g = EvolvingGraph::from_arc_lists(3, &[&[(0, 1)], &[(1, 2)]]);
//! let closure = strict::strict_closure(&g, false).unwrap();
//! assert!(closure.reaches(0, 2));
//! assert!(!closure.reaches(2, 0));
//! assert_eq!(closure, oracle::oracle_reach(&g, Flavor::Strict).unwrap());
//!
//! // Within a single step only the non-strict flavor chains arcs.
//! let h = EvolvingGraph::from_arc_lists(3, &[&[(0, 1), (1, 2)]]);
//! assert!(!strict::strict_closure(&h, false).unwrap().reaches(0, 2));
//! assert!(nonstrict::nonstrict_closure(&h, false).unwrap().reaches(0, 2));
//! ```

pub mod bench;
pub mod bitset;
pub mod closure;
pub mod format;
pub mod generate;
pub mod graph;
pub mod nonstrict;
pub mod oracle;
pub mod strict;
