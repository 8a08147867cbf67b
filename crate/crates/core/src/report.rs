//! Single-run driver and the report it produces.

use std::time::Instant;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::blackbox::solve_blackbox;
use crate::compact::solve_compact;
use crate::game::ParityGame;
use crate::oracle::{naive_fixpoint, regions_of_ranking, zielonka, OracleError, Regions};
use crate::rank::{DomainKind, RankDomain};
use crate::solve::{Solution, SolveError, SolveOptions};
use crate::symset::{BackendKind, BddBackend, BitsetBackend, OpCounters, SetBackend};

/// Version of the report layout.
pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Blackbox,
    Compact,
    Zielonka,
    Naive,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Blackbox => "blackbox",
            Algo::Compact => "compact",
            Algo::Zielonka => "zielonka",
            Algo::Naive => "naive",
        }
    }

    pub fn parse(s: &str) -> Option<Algo> {
        match s {
            "blackbox" => Some(Algo::Blackbox),
            "compact" => Some(Algo::Compact),
            "zielonka" => Some(Algo::Zielonka),
            "naive" => Some(Algo::Naive),
            _ => None,
        }
    }

    /// Whether the algorithm works on a set backend.
    pub fn is_symbolic(self) -> bool {
        matches!(self, Algo::Blackbox | Algo::Compact)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RunConfig {
    pub algo: Algo,
    pub domain: DomainKind,
    pub backend: BackendKind,
    pub assert_invariants: bool,
}

impl RunConfig {
    /// Rejects combinations the solvers do not support.
    pub fn validate(&self) -> Result<(), RunError> {
        if self.algo == Algo::Compact && self.domain != DomainKind::Opm {
            return Err(RunError::FlagConflict("compact requires the opm domain".into()));
        }
        Ok(())
    }
}

#[derive(Debug, Error)]
pub enum RunError {
    #[error("flag conflict: {0}")]
    FlagConflict(String),
    #[error(transparent)]
    Solve(#[from] SolveError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

/// Self-contained record of one run.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema: u32,
    pub game: String,
    pub n: usize,
    pub m: usize,
    pub d: u32,
    pub algo: String,
    pub domain: String,
    pub backend: String,
    pub w_size_estimate: String,
    pub counters: OpCounters,
    pub w_even_size: usize,
    pub w_odd_size: usize,
    pub wall_ms: f64,
    pub seed: Option<u64>,
}

/// Outcome of `run`.
pub struct RunOutcome {
    pub regions: Regions,
    pub report: RunReport,
    pub solution: Option<Solution>,
}

fn symbolic<B: SetBackend>(
    b: &B,
    g: &ParityGame,
    cfg: &RunConfig,
    dom: &dyn RankDomain,
) -> Result<Solution, RunError> {
    let mut opts = SolveOptions { assert_invariants: cfg.assert_invariants, ..Default::default() };
    if cfg.assert_invariants && g.n() <= 8 && dom.size_estimate() <= 1_000_000 {
        opts.reference = Some(naive_fixpoint(g, dom)?);
    }
    Ok(match cfg.algo {
        Algo::Compact => solve_compact(b, dom, &opts)?,
        _ => solve_blackbox(b, dom, &opts)?,
    })
}

/// Solves `g` under `cfg` and reports counters and timing.
pub fn run(g: &ParityGame, name: &str, cfg: &RunConfig, seed: Option<u64>) -> Result<RunOutcome, RunError> {
    cfg.validate()?;
    let dom = cfg.domain.build(g);
    let start = Instant::now();
    let (regions, counters, solution) = match cfg.algo {
        Algo::Zielonka => (zielonka(g), OpCounters::default(), None),
        Algo::Naive => {
            let f = naive_fixpoint(g, &dom)?;
            (regions_of_ranking(&dom, &f), OpCounters::default(), None)
        }
        Algo::Blackbox | Algo::Compact => {
            let sol = match cfg.backend {
                BackendKind::Bitset => symbolic(&BitsetBackend::new(g), g, cfg, &dom)?,
                BackendKind::Bdd => symbolic(&BddBackend::new(g), g, cfg, &dom)?,
            };
            (sol.regions.clone(), sol.counters, Some(sol))
        }
    };
    let wall_ms = start.elapsed().as_secs_f64() * 1000.0;
    let report = RunReport {
        schema: REPORT_SCHEMA,
        game: name.to_string(),
        n: g.n(),
        m: g.m(),
        d: g.d(),
        algo: cfg.algo.name().into(),
        domain: cfg.domain.name().into(),
        backend: if cfg.algo.is_symbolic() { cfg.backend.name().into() } else { "none".into() },
        w_size_estimate: dom.size_estimate().to_string(),
        counters,
        w_even_size: regions.even.len(),
        w_odd_size: regions.odd.len(),
        wall_ms,
        seed,
    };
    Ok(RunOutcome { regions, report, solution })
}

/// Compact JSON form of a report.
pub fn report_json(r: &RunReport) -> String {
    serde_json::to_string(r).expect("reports serialize")
}

/// Winners file body: `even: <ids>` and `odd: <ids>`, ascending.
pub fn winners_text(r: &Regions) -> String {
    let join = |v: &[usize]| v.iter().map(usize::to_string).collect::<Vec<_>>().join(" ");
    format!("even: {}\nodd: {}\n", join(&r.even), join(&r.odd))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::random_game;

    #[test]
    fn compact_needs_opm() {
        let cfg = RunConfig { algo: Algo::Compact, domain: DomainKind::Spm, backend: BackendKind::Bitset, assert_invariants: false };
        assert!(matches!(cfg.validate(), Err(RunError::FlagConflict(_))));
    }

    #[test]
    fn every_algorithm_agrees() {
        let g = random_game(6, 4, 0.4, 21);
        let mut seen = Vec::new();
        for algo in [Algo::Blackbox, Algo::Compact, Algo::Zielonka, Algo::Naive] {
            for backend in [BackendKind::Bitset, BackendKind::Bdd] {
                let cfg = RunConfig { algo, domain: DomainKind::Opm, backend, assert_invariants: true };
                let out = run(&g, "g", &cfg, Some(21)).unwrap();
                seen.push(winners_text(&out.regions));
            }
        }
        assert!(seen.windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn winners_format() {
        let r = Regions { even: vec![0, 2], odd: vec![1] };
        assert_eq!(winners_text(&r), "even: 0 2\nodd: 1\n");
    }
}
