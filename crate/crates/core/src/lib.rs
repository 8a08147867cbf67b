//! Set-based symbolic parity game solving with exact accounting of
//! predecessor operations, basic set operations and symbolic space.
//!
//! * [`game`]: game model, PGSolver I/O and a seeded generator.
//! * [`symset`]: counting set backends (bitsets and ROBDDs).
//! * [`rank`]: rank domains (small and ordered progress measures).
//! * [`blackbox`], [`compact`]: the symbolic progress-measure solvers.
//! * [`oracle`]: explicit reference solvers.
//! * [`report`]: single-run driver used by the command line.

pub mod blackbox;
pub mod compact;
pub mod game;
pub mod oracle;
pub mod rank;
pub mod report;
pub mod solve;
pub mod structure;
pub mod symset;

pub use blackbox::solve_blackbox;
pub use compact::solve_compact;
pub use game::{parse_pgsolver, random_game, write_pgsolver, GameError, ParityGame, Player};
pub use oracle::{naive_fixpoint, zielonka, Regions};
pub use rank::{AnyDomain, DomainKind, Opm, Rank, RankDomain, Spm};
pub use solve::{Solution, SolveError, SolveOptions};
pub use symset::{BackendKind, BddBackend, BitsetBackend, OpCounters, PairedBackend, SetBackend};
