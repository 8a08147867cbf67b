//! Explicit fixed-width bitset backend.

use std::rc::Rc;

use super::{Meter, SetBackend, SymSet};
use crate::game::{ParityGame, Player};

/// Words of a bitset over `0..n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Bits(Vec<u64>);

impl Bits {
    fn zeros(n: usize) -> Bits {
        Bits(vec![0; n.div_ceil(64)])
    }

    fn of(n: usize, members: impl IntoIterator<Item = usize>) -> Bits {
        let mut b = Bits::zeros(n);
        for v in members {
            b.0[v / 64] |= 1 << (v % 64);
        }
        b
    }

    fn get(&self, v: usize) -> bool {
        self.0[v / 64] >> (v % 64) & 1 == 1
    }

    fn zip(&self, other: &Bits, f: impl Fn(u64, u64) -> u64) -> Bits {
        Bits(self.0.iter().zip(&other.0).map(|(&a, &b)| f(a, b)).collect())
    }

    fn iter(&self) -> impl Iterator<Item = usize> + '_ {
        self.0.iter().enumerate().flat_map(|(i, &w)| {
            (0..64).filter(move |b| w >> b & 1 == 1).map(move |b| i * 64 + b)
        })
    }
}

pub struct BitsetBackend {
    game: ParityGame,
    meter: Rc<Meter>,
    universe: SymSet<Bits>,
    by_priority: Vec<SymSet<Bits>>,
    by_player: [SymSet<Bits>; 2],
    empty_fixed: SymSet<Bits>,
    preds: Vec<Bits>,
}

impl BitsetBackend {
    pub fn new(game: &ParityGame) -> BitsetBackend {
        let n = game.n();
        let by_priority = (0..game.d()).map(|c| SymSet::fixed(Bits::of(n, game.with_priority(c)))).collect();
        let by_player = [
            SymSet::fixed(Bits::of(n, game.owned_by(Player::Even))),
            SymSet::fixed(Bits::of(n, game.owned_by(Player::Odd))),
        ];
        let preds = (0..n).map(|w| Bits::of(n, game.predecessors(w).iter().copied())).collect();
        BitsetBackend {
            game: game.clone(),
            meter: Rc::new(Meter::default()),
            universe: SymSet::fixed(Bits::of(n, 0..n)),
            by_priority,
            by_player,
            empty_fixed: SymSet::fixed(Bits::zeros(n)),
            preds,
        }
    }

    fn make(&self, b: Bits) -> SymSet<Bits> {
        SymSet::counted(b, &self.meter)
    }
}

impl SetBackend for BitsetBackend {
    type Repr = Bits;

    fn game(&self) -> &ParityGame {
        &self.game
    }

    fn meter(&self) -> &Rc<Meter> {
        &self.meter
    }

    fn universe(&self) -> &SymSet<Bits> {
        &self.universe
    }

    fn priority_set(&self, c: u32) -> &SymSet<Bits> {
        self.by_priority.get(c as usize).unwrap_or(&self.empty_fixed)
    }

    fn player_set(&self, p: Player) -> &SymSet<Bits> {
        &self.by_player[p.index()]
    }

    fn union(&self, a: &SymSet<Bits>, b: &SymSet<Bits>) -> SymSet<Bits> {
        self.meter.bump(|c| c.union += 1);
        self.make(a.repr().zip(b.repr(), |x, y| x | y))
    }

    fn intersect(&self, a: &SymSet<Bits>, b: &SymSet<Bits>) -> SymSet<Bits> {
        self.meter.bump(|c| c.intersect += 1);
        self.make(a.repr().zip(b.repr(), |x, y| x & y))
    }

    fn difference(&self, a: &SymSet<Bits>, b: &SymSet<Bits>) -> SymSet<Bits> {
        self.meter.bump(|c| c.difference += 1);
        self.make(a.repr().zip(b.repr(), |x, y| x & !y))
    }

    fn subseteq(&self, a: &SymSet<Bits>, b: &SymSet<Bits>) -> bool {
        self.meter.bump(|c| c.subseteq += 1);
        a.repr().0.iter().zip(&b.repr().0).all(|(&x, &y)| x & !y == 0)
    }

    fn equals(&self, a: &SymSet<Bits>, b: &SymSet<Bits>) -> bool {
        self.meter.bump(|c| c.equals += 1);
        a.repr() == b.repr()
    }

    fn pre(&self, s: &SymSet<Bits>) -> SymSet<Bits> {
        self.meter.bump(|c| c.pre_ops += 1);
        let mut out = Bits::zeros(self.game.n());
        for w in s.repr().iter() {
            for (o, p) in out.0.iter_mut().zip(&self.preds[w].0) {
                *o |= p;
            }
        }
        self.make(out)
    }

    fn copy(&self, s: &SymSet<Bits>) -> SymSet<Bits> {
        self.make(s.repr().clone())
    }

    fn empty(&self) -> SymSet<Bits> {
        self.make(Bits::zeros(self.game.n()))
    }

    fn from_members(&self, members: &[usize]) -> SymSet<Bits> {
        self.make(Bits::of(self.game.n(), members.iter().copied()))
    }

    fn members(&self, s: &SymSet<Bits>) -> Vec<usize> {
        s.repr().iter().collect()
    }

    fn contains(&self, s: &SymSet<Bits>, v: usize) -> bool {
        s.repr().get(v)
    }
}
