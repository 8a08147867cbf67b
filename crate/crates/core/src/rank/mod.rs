//! Rank domains: a finite total order with `min` and `⊤` and a monotone
//! `lift` consumed by the progress-measure solvers.

pub mod opm;
pub mod spm;

use std::cmp::Ordering;

use serde::{Deserialize, Serialize};

use crate::game::{ParityGame, Player};

pub use opm::{opm_symbol_compare, Opm};
pub use spm::Spm;

/// An element of a rank domain. Tuples compare lexicographically on their
/// coordinate indices and every tuple lies below `Top`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Rank {
    Tuple(Vec<u32>),
    Top,
}

impl Rank {
    pub fn is_top(&self) -> bool {
        matches!(self, Rank::Top)
    }

    /// Coordinates of a tuple, `None` for `Top`.
    pub fn coords(&self) -> Option<&[u32]> {
        match self {
            Rank::Tuple(t) => Some(t),
            Rank::Top => None,
        }
    }
}

/// The contract the solvers consume.
pub trait RankDomain {
    /// Player whose winning region is the set of `⊤`-ranked vertices.
    fn z(&self) -> Player;
    /// Number of coordinates of a tuple.
    fn width(&self) -> usize;
    /// Number of values of each coordinate. Coordinate `i` ranges over
    /// `0..alphabet_sizes()[i]`, listed in ascending order.
    fn alphabet_sizes(&self) -> Vec<u32>;
    fn lift(&self, r: &Rank, c: u32) -> Rank;
    /// `|W|`, exact or an upper bound depending on the domain.
    fn size_estimate(&self) -> u128;
    /// Human readable rank, `TOP` for `⊤`.
    fn render(&self, r: &Rank) -> String;
    fn name(&self) -> &'static str;

    fn min(&self) -> Rank {
        Rank::Tuple(vec![0; self.width()])
    }

    fn top(&self) -> Rank {
        Rank::Top
    }

    fn compare(&self, a: &Rank, b: &Rank) -> Ordering {
        a.cmp(b)
    }

    /// Per-coordinate view used by the coordinate store.
    fn tuple_view<'a>(&self, r: &'a Rank) -> Option<&'a [u32]> {
        r.coords()
    }

    /// Inverse of `tuple_view`.
    fn from_tuple(&self, coords: &[u32]) -> Rank {
        Rank::Tuple(coords.to_vec())
    }
}

/// Domain selector used by the command line and bindings.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum DomainKind {
    Spm,
    Opm,
}

impl DomainKind {
    pub fn name(self) -> &'static str {
        match self {
            DomainKind::Spm => "spm",
            DomainKind::Opm => "opm",
        }
    }

    pub fn parse(s: &str) -> Option<DomainKind> {
        match s {
            "spm" => Some(DomainKind::Spm),
            "opm" => Some(DomainKind::Opm),
            _ => None,
        }
    }

    pub fn build(self, g: &ParityGame) -> AnyDomain {
        match self {
            DomainKind::Spm => AnyDomain::Spm(Spm::for_game(g)),
            DomainKind::Opm => AnyDomain::Opm(Opm::for_game(g)),
        }
    }
}

/// Either domain behind one type.
#[derive(Clone, Debug)]
pub enum AnyDomain {
    Spm(Spm),
    Opm(Opm),
}

impl AnyDomain {
    fn inner(&self) -> &dyn RankDomain {
        match self {
            AnyDomain::Spm(d) => d,
            AnyDomain::Opm(d) => d,
        }
    }
}

impl RankDomain for AnyDomain {
    fn z(&self) -> Player {
        self.inner().z()
    }

    fn width(&self) -> usize {
        self.inner().width()
    }

    fn alphabet_sizes(&self) -> Vec<u32> {
        self.inner().alphabet_sizes()
    }

    fn lift(&self, r: &Rank, c: u32) -> Rank {
        self.inner().lift(r, c)
    }

    fn size_estimate(&self) -> u128 {
        self.inner().size_estimate()
    }

    fn render(&self, r: &Rank) -> String {
        self.inner().render(r)
    }

    fn name(&self) -> &'static str {
        self.inner().name()
    }
}
