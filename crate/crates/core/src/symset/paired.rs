//! A backend that runs every operation on both the bitset and the BDD
//! backend and records any extensional disagreement.

use std::cell::Cell;
use std::rc::Rc;

use super::bdd::NodeId;
use super::bitset::Bits;
use super::{BddBackend, BitsetBackend, Meter, OpCounters, SetBackend, SymSet};
use crate::game::{ParityGame, Player};

type Pair = (SymSet<Bits>, SymSet<NodeId>);

pub struct PairedBackend {
    bits: BitsetBackend,
    bdd: BddBackend,
    meter: Rc<Meter>,
    universe: SymSet<Pair>,
    by_priority: Vec<SymSet<Pair>>,
    by_player: [SymSet<Pair>; 2],
    empty_fixed: SymSet<Pair>,
    calls: Cell<u64>,
    divergences: Cell<u64>,
}

impl PairedBackend {
    pub fn new(game: &ParityGame) -> PairedBackend {
        let bits = BitsetBackend::new(game);
        let bdd = BddBackend::new(game);
        let fixed = |a: &SymSet<Bits>, b: &SymSet<NodeId>| SymSet::fixed((a.clone(), b.clone()));
        let universe = fixed(bits.universe(), bdd.universe());
        let by_priority = (0..game.d()).map(|c| fixed(bits.priority_set(c), bdd.priority_set(c))).collect();
        let by_player = [Player::Even, Player::Odd].map(|p| fixed(bits.player_set(p), bdd.player_set(p)));
        let empty_fixed = fixed(bits.priority_set(game.d()), bdd.priority_set(game.d()));
        PairedBackend {
            bits,
            bdd,
            meter: Rc::new(Meter::default()),
            universe,
            by_priority,
            by_player,
            empty_fixed,
            calls: Cell::new(0),
            divergences: Cell::new(0),
        }
    }

    /// Number of interface calls checked so far.
    pub fn calls(&self) -> u64 {
        self.calls.get()
    }

    /// Number of calls whose two results differed.
    pub fn divergences(&self) -> u64 {
        self.divergences.get()
    }

    pub fn bitset_counters(&self) -> OpCounters {
        self.bits.counters()
    }

    pub fn bdd_counters(&self) -> OpCounters {
        self.bdd.counters()
    }

    fn check(&self, same: bool) {
        self.calls.set(self.calls.get() + 1);
        if !same {
            self.divergences.set(self.divergences.get() + 1);
        }
    }

    fn join(&self, a: SymSet<Bits>, b: SymSet<NodeId>) -> SymSet<Pair> {
        self.check(self.bits.members(&a) == self.bdd.members(&b));
        SymSet::counted((a, b), &self.meter)
    }

    fn truth(&self, a: bool, b: bool) -> bool {
        self.check(a == b);
        a
    }
}

impl SetBackend for PairedBackend {
    type Repr = Pair;

    fn game(&self) -> &ParityGame {
        self.bits.game()
    }

    fn meter(&self) -> &Rc<Meter> {
        &self.meter
    }

    fn universe(&self) -> &SymSet<Pair> {
        &self.universe
    }

    fn priority_set(&self, c: u32) -> &SymSet<Pair> {
        self.by_priority.get(c as usize).unwrap_or(&self.empty_fixed)
    }

    fn player_set(&self, p: Player) -> &SymSet<Pair> {
        &self.by_player[p.index()]
    }

    fn union(&self, a: &SymSet<Pair>, b: &SymSet<Pair>) -> SymSet<Pair> {
        self.meter.bump(|c| c.union += 1);
        let (x, y) = (a.repr(), b.repr());
        self.join(self.bits.union(&x.0, &y.0), self.bdd.union(&x.1, &y.1))
    }

    fn intersect(&self, a: &SymSet<Pair>, b: &SymSet<Pair>) -> SymSet<Pair> {
        self.meter.bump(|c| c.intersect += 1);
        let (x, y) = (a.repr(), b.repr());
        self.join(self.bits.intersect(&x.0, &y.0), self.bdd.intersect(&x.1, &y.1))
    }

    fn difference(&self, a: &SymSet<Pair>, b: &SymSet<Pair>) -> SymSet<Pair> {
        self.meter.bump(|c| c.difference += 1);
        let (x, y) = (a.repr(), b.repr());
        self.join(self.bits.difference(&x.0, &y.0), self.bdd.difference(&x.1, &y.1))
    }

    fn subseteq(&self, a: &SymSet<Pair>, b: &SymSet<Pair>) -> bool {
        self.meter.bump(|c| c.subseteq += 1);
        let (x, y) = (a.repr(), b.repr());
        self.truth(self.bits.subseteq(&x.0, &y.0), self.bdd.subseteq(&x.1, &y.1))
    }

    fn equals(&self, a: &SymSet<Pair>, b: &SymSet<Pair>) -> bool {
        self.meter.bump(|c| c.equals += 1);
        let (x, y) = (a.repr(), b.repr());
        self.truth(self.bits.equals(&x.0, &y.0), self.bdd.equals(&x.1, &y.1))
    }

    fn pre(&self, s: &SymSet<Pair>) -> SymSet<Pair> {
        self.meter.bump(|c| c.pre_ops += 1);
        let x = s.repr();
        self.join(self.bits.pre(&x.0), self.bdd.pre(&x.1))
    }

    fn copy(&self, s: &SymSet<Pair>) -> SymSet<Pair> {
        let x = s.repr();
        self.join(self.bits.copy(&x.0), self.bdd.copy(&x.1))
    }

    fn empty(&self) -> SymSet<Pair> {
        self.join(self.bits.empty(), self.bdd.empty())
    }

    fn from_members(&self, members: &[usize]) -> SymSet<Pair> {
        self.join(self.bits.from_members(members), self.bdd.from_members(members))
    }

    fn members(&self, s: &SymSet<Pair>) -> Vec<usize> {
        self.bits.members(&s.repr().0)
    }

    fn contains(&self, s: &SymSet<Pair>, v: usize) -> bool {
        self.bits.contains(&s.repr().0, v)
    }
}
