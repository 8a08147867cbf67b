//! Ordered progress measures.
//!
//! Ranks are `k`-tuples over `C_ = {_} ∪ {0..d-1}` with `k = ⌈log2 n⌉ + 1`,
//! ordered lexicographically by the symbol order `_ ≺ odd (descending) ≺
//! even (ascending)`. `⊤` denotes the Even winning region.
//!
//! Every symbol belongs to an even level: `s - s mod 2`, with `_` on the
//! highest even level. Odd symbols and `_` act as 0-bits, even symbols as
//! 1-bits. The ranks actually produced by `lift` are the leaves of a
//! succinct universal tree: tuples whose levels never increase, whose last
//! symbol is on level 0 and which contain the symbol 0. `lift(r, c)` is the
//! least leaf whose truncation to the levels at least `c` (strictly above
//! `c` for odd `c`) dominates that of `r`, strictly so for even `c`.

use std::cmp::Ordering;

use super::{Rank, RankDomain};
use crate::game::{ParityGame, Player};
use crate::symset::bdd::id_bits;

/// Position of a symbol in the ascending order of `C_`; `None` is `_`.
fn symbol_key(x: Option<u32>) -> (u8, i64) {
    match x {
        None => (0, 0),
        Some(p) if p % 2 == 1 => (1, -(p as i64)),
        Some(p) => (2, p as i64),
    }
}

/// Total order on `C ∪ {_}`.
pub fn opm_symbol_compare(x: Option<u32>, y: Option<u32>) -> Ordering {
    symbol_key(x).cmp(&symbol_key(y))
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Opm {
    d: u32,
    k: usize,
    /// Symbols of `C_` in ascending order; coordinates index into it.
    symbols: Vec<Option<u32>>,
    level: Vec<u32>,
    one_bit: Vec<bool>,
    in_leaves: Vec<bool>,
    zero: u32,
}

impl Opm {
    pub fn new(d: u32, k: usize) -> Opm {
        assert!(d >= 1 && k >= 1, "OPM needs d >= 1 and k >= 1");
        let mut symbols: Vec<Option<u32>> = std::iter::once(None).chain((0..d).map(Some)).collect();
        symbols.sort_by(|a, b| opm_symbol_compare(*a, *b));
        let top_level = (d - 1) - (d - 1) % 2;
        let level = symbols.iter().map(|s| s.map_or(top_level, |p| p - p % 2)).collect();
        let one_bit = symbols.iter().map(|s| matches!(s, Some(p) if p % 2 == 0)).collect();
        // `_` is needed as the 0-bit of the top level only when d-1 is even.
        let in_leaves = symbols.iter().map(|s| s.is_some() || (d - 1).is_multiple_of(2)).collect();
        let zero = symbols.iter().position(|&s| s == Some(0)).unwrap() as u32;
        Opm { d, k, symbols, level, one_bit, in_leaves, zero }
    }

    pub fn for_game(g: &ParityGame) -> Opm {
        Opm::new(g.d(), id_bits(g.n()) as usize + 1)
    }

    pub fn d(&self) -> u32 {
        self.d
    }

    /// Symbols of `C_` in ascending order.
    pub fn symbols(&self) -> &[Option<u32>] {
        &self.symbols
    }

    /// Coordinate index of a symbol.
    pub fn index_of(&self, s: Option<u32>) -> u32 {
        self.symbols.iter().position(|&x| x == s).expect("symbol outside C_") as u32
    }

    /// Rank from symbols, `None` standing for `_`.
    pub fn rank_of(&self, syms: &[Option<u32>]) -> Rank {
        assert_eq!(syms.len(), self.k);
        Rank::Tuple(syms.iter().map(|&s| self.index_of(s)).collect())
    }

    /// Parses the rendering produced by `render`.
    pub fn parse_rank(&self, text: &str) -> Option<Rank> {
        if text == "TOP" {
            return Some(Rank::Top);
        }
        let parts: Vec<&str> = if self.d > 10 {
            text.split('.').collect()
        } else {
            text.split("").filter(|s| !s.is_empty()).collect()
        };
        let mut syms = Vec::with_capacity(parts.len());
        for p in parts {
            syms.push(if p == "_" { None } else { Some(p.parse().ok()?) });
        }
        if syms.len() != self.k || syms.iter().any(|s| matches!(s, Some(p) if *p >= self.d)) {
            return None;
        }
        Some(self.rank_of(&syms))
    }

    /// Longest prefix of `t` whose symbols lie on levels at least `q`.
    fn truncate<'a>(&self, t: &'a [u32], q: u32) -> &'a [u32] {
        let len = t.iter().take_while(|&&s| self.level[s as usize] >= q).count();
        &t[..len]
    }

    /// Order on truncations: an ended sequence sits above a 0-bit and below a 1-bit.
    fn compare_truncations(&self, a: &[u32], b: &[u32]) -> Ordering {
        for i in 0..a.len().max(b.len()) {
            match (a.get(i), b.get(i)) {
                (Some(x), Some(y)) if x != y => return x.cmp(y),
                (Some(_), Some(_)) => {}
                (None, Some(&y)) => return if self.one_bit[y as usize] { Ordering::Less } else { Ordering::Greater },
                (Some(&x), None) => return if self.one_bit[x as usize] { Ordering::Greater } else { Ordering::Less },
                (None, None) => unreachable!(),
            }
        }
        Ordering::Equal
    }

    /// Whether `prefix` extends to a leaf of length `k`.
    fn completable(&self, prefix: &[u32]) -> bool {
        if prefix.len() > self.k || prefix.iter().any(|&s| !self.in_leaves[s as usize]) {
            return false;
        }
        if prefix.windows(2).any(|w| self.level[w[0] as usize] < self.level[w[1] as usize]) {
            return false;
        }
        prefix.contains(&self.zero) || prefix.len() < self.k
    }

    /// Greatest leaf extending `prefix`, which must be completable.
    fn max_leaf(&self, prefix: &[u32]) -> Vec<u32> {
        let mut t = prefix.to_vec();
        while t.len() < self.k {
            let s = (0..self.symbols.len() as u32)
                .rev()
                .find(|&s| {
                    t.push(s);
                    let ok = self.completable(&t);
                    t.pop();
                    ok
                })
                .expect("completable prefix has an extension");
            t.push(s);
        }
        t
    }

    /// Whether `t` is a leaf.
    pub fn is_leaf(&self, t: &[u32]) -> bool {
        t.len() == self.k && self.completable(t)
    }
}

impl RankDomain for Opm {
    fn z(&self) -> Player {
        Player::Even
    }

    fn width(&self) -> usize {
        self.k
    }

    fn alphabet_sizes(&self) -> Vec<u32> {
        vec![self.d + 1; self.k]
    }

    fn lift(&self, r: &Rank, c: u32) -> Rank {
        let t = match r {
            Rank::Top => return Rank::Top,
            Rank::Tuple(t) => t,
        };
        assert_eq!(t.len(), self.k, "rank width");
        let (q, strict) = if c.is_multiple_of(2) { (c, true) } else { (c + 1, false) };
        let bound = self.truncate(t, q);
        let accepts = |leaf: &[u32]| {
            let ord = self.compare_truncations(self.truncate(leaf, q), bound);
            ord == Ordering::Greater || (!strict && ord == Ordering::Equal)
        };
        let mut prefix = Vec::with_capacity(self.k);
        while prefix.len() < self.k {
            let next = (0..self.symbols.len() as u32).find(|&s| {
                prefix.push(s);
                let ok = self.completable(&prefix) && accepts(&self.max_leaf(&prefix));
                prefix.pop();
                ok
            });
            match next {
                Some(s) => prefix.push(s),
                None => return Rank::Top,
            }
        }
        Rank::Tuple(prefix)
    }

    fn size_estimate(&self) -> u128 {
        (self.d as u128 + 1).saturating_pow(self.k as u32).saturating_add(1)
    }

    fn render(&self, r: &Rank) -> String {
        match r {
            Rank::Top => "TOP".into(),
            Rank::Tuple(t) => {
                let parts: Vec<String> = t
                    .iter()
                    .map(|&i| self.symbols[i as usize].map_or("_".to_string(), |p| p.to_string()))
                    .collect();
                parts.join(if self.d > 10 { "." } else { "" })
            }
        }
    }

    fn name(&self) -> &'static str {
        "opm"
    }
}
