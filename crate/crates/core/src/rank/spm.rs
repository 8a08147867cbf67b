//! Small progress measures.
//!
//! One coordinate per odd priority, highest first; coordinate `p` ranges
//! over `0..=|V_p|`. `⊤` denotes the Odd winning region.

use super::{Rank, RankDomain};
use crate::game::{ParityGame, Player};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Spm {
    /// Odd priorities, descending.
    odds: Vec<u32>,
    /// `|V_p|` for each entry of `odds`.
    bounds: Vec<u32>,
}

impl Spm {
    /// Domain with explicit `(odd priority, |V_p|)` pairs in any order.
    pub fn new(mut coords: Vec<(u32, u32)>) -> Spm {
        assert!(coords.iter().all(|&(p, _)| p % 2 == 1), "coordinates belong to odd priorities");
        coords.sort_by_key(|c| std::cmp::Reverse(c.0));
        Spm { odds: coords.iter().map(|c| c.0).collect(), bounds: coords.iter().map(|c| c.1).collect() }
    }

    pub fn for_game(g: &ParityGame) -> Spm {
        Spm::new((1..g.d()).step_by(2).map(|p| (p, g.with_priority(p).len() as u32)).collect())
    }

    /// Number of leading coordinates whose priority is at least `c`.
    fn significant(&self, c: u32) -> usize {
        self.odds.iter().take_while(|&&p| p >= c).count()
    }
}

impl RankDomain for Spm {
    fn z(&self) -> Player {
        Player::Odd
    }

    fn width(&self) -> usize {
        self.odds.len()
    }

    fn alphabet_sizes(&self) -> Vec<u32> {
        self.bounds.iter().map(|b| b + 1).collect()
    }

    fn lift(&self, r: &Rank, c: u32) -> Rank {
        let t = match r {
            Rank::Top => return Rank::Top,
            Rank::Tuple(t) => t,
        };
        let keep = self.significant(c);
        let mut out = t.clone();
        for x in out[keep..].iter_mut() {
            *x = 0;
        }
        if c % 2 == 1 {
            let mut i = keep;
            loop {
                if i == 0 {
                    return Rank::Top;
                }
                i -= 1;
                if out[i] < self.bounds[i] {
                    out[i] += 1;
                    break;
                }
                out[i] = 0;
            }
        }
        Rank::Tuple(out)
    }

    fn size_estimate(&self) -> u128 {
        self.bounds.iter().fold(1u128, |acc, &b| acc.saturating_mul(b as u128 + 1)).saturating_add(1)
    }

    fn render(&self, r: &Rank) -> String {
        match r {
            Rank::Top => "TOP".into(),
            Rank::Tuple(t) => {
                let parts: Vec<String> = t.iter().map(u32::to_string).collect();
                format!("({})", parts.join(","))
            }
        }
    }

    fn name(&self) -> &'static str {
        "spm"
    }
}
