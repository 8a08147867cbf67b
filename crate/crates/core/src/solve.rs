//! Options, results and trace records shared by the symbolic solvers.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::oracle::Regions;
use crate::rank::Rank;
use crate::symset::OpCounters;

/// Version of the trace record layout.
pub const TRACE_SCHEMA: u32 = 1;

#[derive(Clone, Debug, Default)]
pub struct SolveOptions {
    /// Check the structural invariants at every outer-loop boundary.
    pub assert_invariants: bool,
    /// Least fixpoint from the naive oracle; the derived ranking must stay below it.
    pub reference: Option<Vec<Rank>>,
    /// Record one trace entry per outer iteration.
    pub trace: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TraceRecord {
    pub schema: u32,
    pub iteration: u64,
    pub rank: String,
    pub p_size: usize,
    pub stored: usize,
}

#[derive(Clone, Debug)]
pub struct Solution {
    pub regions: Regions,
    pub counters: OpCounters,
    /// Derived ranking `ρ` at termination.
    pub ranking: Vec<Rank>,
    pub trace: Vec<TraceRecord>,
    pub iterations: u64,
    /// Distinct ranks ever stored in the rank structure.
    pub distinct_ranks_stored: usize,
    /// Largest number of stored ranks seen.
    pub max_stored: usize,
}

impl Solution {
    /// Trace as line-delimited JSON.
    pub fn trace_jsonl(&self) -> String {
        self.trace.iter().map(|t| serde_json::to_string(t).expect("plain record") + "\n").collect()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SolveError {
    #[error("invariant violated: {0}")]
    Invariant(String),
    #[error("domain is not tuple structured")]
    NotTupleDomain,
}
