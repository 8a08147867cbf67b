//! Counting set backends for the set-based symbolic model.
//!
//! Every backend exposes the same interface: basic set operations, the
//! one-step predecessor `pre` and the controllable predecessor `cpre`. Each
//! public operation bumps exactly one counter. Set handles are reference
//! counted; dropping the last handle of a set releases it, so
//! `live_sets_max` is the symbolic space high-water mark.

pub mod bdd;
pub mod bitset;
pub mod paired;

use std::cell::RefCell;
use std::fmt;
use std::rc::Rc;

use serde::{Deserialize, Serialize};

use crate::game::{ParityGame, Player};

pub use bdd::BddBackend;
pub use bitset::BitsetBackend;
pub use paired::PairedBackend;

/// Symbolic resource counters of one backend instance.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct OpCounters {
    pub pre_ops: u64,
    pub union: u64,
    pub intersect: u64,
    pub difference: u64,
    pub subseteq: u64,
    pub equals: u64,
    pub live_sets_now: u64,
    pub live_sets_max: u64,
}

impl OpCounters {
    pub fn basic_ops(&self) -> u64 {
        self.union + self.intersect + self.difference + self.subseteq + self.equals
    }
}

/// Shared counter cell of a backend instance.
#[derive(Debug, Default)]
pub struct Meter(RefCell<OpCounters>);

impl Meter {
    pub fn snapshot(&self) -> OpCounters {
        *self.0.borrow()
    }

    pub fn bump(&self, f: impl FnOnce(&mut OpCounters)) {
        f(&mut self.0.borrow_mut());
    }

    fn alloc(&self) {
        let mut c = self.0.borrow_mut();
        c.live_sets_now += 1;
        c.live_sets_max = c.live_sets_max.max(c.live_sets_now);
    }

    fn release(&self) {
        self.0.borrow_mut().live_sets_now -= 1;
    }
}

struct Slot<R> {
    repr: R,
    meter: Option<Rc<Meter>>,
}

impl<R> Drop for Slot<R> {
    fn drop(&mut self) {
        if let Some(m) = &self.meter {
            m.release();
        }
    }
}

/// Handle to a vertex set. Clones share the same underlying set.
pub struct SymSet<R>(Rc<Slot<R>>);

impl<R> Clone for SymSet<R> {
    fn clone(&self) -> Self {
        SymSet(Rc::clone(&self.0))
    }
}

impl<R: fmt::Debug> fmt::Debug for SymSet<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.repr.fmt(f)
    }
}

impl<R> SymSet<R> {
    /// A fresh set that counts towards the live-set total.
    pub fn counted(repr: R, meter: &Rc<Meter>) -> Self {
        meter.alloc();
        SymSet(Rc::new(Slot { repr, meter: Some(Rc::clone(meter)) }))
    }

    /// A set that belongs to the game representation and is never counted.
    pub fn fixed(repr: R) -> Self {
        SymSet(Rc::new(Slot { repr, meter: None }))
    }

    pub fn repr(&self) -> &R {
        &self.0.repr
    }
}

/// The set-based symbolic interface.
pub trait SetBackend {
    type Repr;

    fn game(&self) -> &ParityGame;
    fn meter(&self) -> &Rc<Meter>;

    /// `V`, part of the game representation.
    fn universe(&self) -> &SymSet<Self::Repr>;
    /// `V_c`, part of the game representation.
    fn priority_set(&self, c: u32) -> &SymSet<Self::Repr>;
    /// `V_p`, part of the game representation.
    fn player_set(&self, p: Player) -> &SymSet<Self::Repr>;

    fn union(&self, a: &SymSet<Self::Repr>, b: &SymSet<Self::Repr>) -> SymSet<Self::Repr>;
    fn intersect(&self, a: &SymSet<Self::Repr>, b: &SymSet<Self::Repr>) -> SymSet<Self::Repr>;
    fn difference(&self, a: &SymSet<Self::Repr>, b: &SymSet<Self::Repr>) -> SymSet<Self::Repr>;
    fn subseteq(&self, a: &SymSet<Self::Repr>, b: &SymSet<Self::Repr>) -> bool;
    fn equals(&self, a: &SymSet<Self::Repr>, b: &SymSet<Self::Repr>) -> bool;
    /// Vertices with at least one successor in `s`.
    fn pre(&self, s: &SymSet<Self::Repr>) -> SymSet<Self::Repr>;

    /// A counted copy of `s`, for storing a set that must survive changes to the original.
    fn copy(&self, s: &SymSet<Self::Repr>) -> SymSet<Self::Repr>;
    /// Counted empty set.
    fn empty(&self) -> SymSet<Self::Repr>;
    /// Counted set built from explicit members. Not an operation of the model.
    fn from_members(&self, members: &[usize]) -> SymSet<Self::Repr>;
    /// Explicit members, ascending. Inspection only, never counted.
    fn members(&self, s: &SymSet<Self::Repr>) -> Vec<usize>;
    /// Membership test. Inspection only, never counted.
    fn contains(&self, s: &SymSet<Self::Repr>, v: usize) -> bool;

    fn counters(&self) -> OpCounters {
        self.meter().snapshot()
    }

    /// Strict superset `a ⊃ b`, as one ⊆ test and one equality test.
    fn proper_superset(&self, a: &SymSet<Self::Repr>, b: &SymSet<Self::Repr>) -> bool {
        self.subseteq(b, a) && !self.equals(a, b)
    }

    /// `(pre(S) ∩ V_z) ∪ (V_z̄ \ pre(V \ S))`.
    fn cpre(&self, z: Player, s: &SymSet<Self::Repr>) -> SymSet<Self::Repr> {
        let forced = {
            let outside = self.difference(self.universe(), s);
            let escape = self.pre(&outside);
            drop(outside);
            self.difference(self.player_set(z.opponent()), &escape)
        };
        let chosen = {
            let reach = self.pre(s);
            self.intersect(&reach, self.player_set(z))
        };
        self.union(&chosen, &forced)
    }
}

/// Backend selector used by the command line and bindings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BackendKind {
    Bitset,
    Bdd,
}

impl BackendKind {
    pub fn name(self) -> &'static str {
        match self {
            BackendKind::Bitset => "bitset",
            BackendKind::Bdd => "bdd",
        }
    }

    pub fn parse(s: &str) -> Option<BackendKind> {
        match s {
            "bitset" => Some(BackendKind::Bitset),
            "bdd" => Some(BackendKind::Bdd),
            _ => None,
        }
    }
}
