//! Explicit reference solvers: attractors, Zielonka's recursion and the
//! naive simultaneous lift fixpoint.

use std::collections::VecDeque;

use thiserror::Error;

use crate::game::{ParityGame, Player};
use crate::rank::{Rank, RankDomain};

#[derive(Debug, Error, PartialEq, Eq)]
pub enum OracleError {
    #[error("naive fixpoint limited to n <= 8 and |W| <= 10^6 (n = {n}, |W| = {w})")]
    TooLarge { n: usize, w: u128 },
}

/// Winning regions as membership vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Regions {
    pub even: Vec<usize>,
    pub odd: Vec<usize>,
}

impl Regions {
    /// Regions from the set won by `z`; the opponent wins the rest.
    pub fn from_winner_set(n: usize, z: Player, won: &[usize]) -> Regions {
        let mut mine = won.to_vec();
        mine.sort_unstable();
        let other: Vec<usize> = (0..n).filter(|v| mine.binary_search(v).is_err()).collect();
        match z {
            Player::Even => Regions { even: mine, odd: other },
            Player::Odd => Regions { even: other, odd: mine },
        }
    }
}

/// Least set containing `target` (within `alive`) closed under the
/// controllable predecessor of `z` in the subgame induced by `alive`.
pub fn attractor(g: &ParityGame, alive: &[bool], z: Player, target: &[usize]) -> Vec<bool> {
    let n = g.n();
    let mut inside = vec![false; n];
    let mut count: Vec<usize> =
        (0..n).map(|v| g.successors(v).iter().filter(|&&w| alive[w]).count()).collect();
    let mut queue = VecDeque::new();
    for &t in target {
        if alive[t] && !inside[t] {
            inside[t] = true;
            queue.push_back(t);
        }
    }
    while let Some(w) = queue.pop_front() {
        for &v in g.predecessors(w) {
            if !alive[v] || inside[v] {
                continue;
            }
            let take = if g.owner(v) == z {
                true
            } else {
                count[v] -= 1;
                count[v] == 0
            };
            if take {
                inside[v] = true;
                queue.push_back(v);
            }
        }
    }
    inside
}

/// Zielonka's recursive algorithm.
pub fn zielonka(g: &ParityGame) -> Regions {
    let won = solve_sub(g, &vec![true; g.n()]);
    let even: Vec<usize> = (0..g.n()).filter(|&v| won[v] == Some(Player::Even)).collect();
    let odd: Vec<usize> = (0..g.n()).filter(|&v| won[v] == Some(Player::Odd)).collect();
    Regions { even, odd }
}

fn solve_sub(g: &ParityGame, alive: &[bool]) -> Vec<Option<Player>> {
    let n = g.n();
    let mut won = vec![None; n];
    let top = match (0..n).filter(|&v| alive[v]).map(|v| g.priority(v)).max() {
        None => return won,
        Some(p) => p,
    };
    let z = Player::of_priority(top);
    let heads: Vec<usize> = (0..n).filter(|&v| alive[v] && g.priority(v) == top).collect();
    let a = attractor(g, alive, z, &heads);
    let rest: Vec<bool> = (0..n).map(|v| alive[v] && !a[v]).collect();
    let sub = solve_sub(g, &rest);
    let lost: Vec<usize> = (0..n).filter(|&v| sub[v] == Some(z.opponent())).collect();
    if lost.is_empty() {
        for v in (0..n).filter(|&v| alive[v]) {
            won[v] = Some(z);
        }
        return won;
    }
    let b = attractor(g, alive, z.opponent(), &lost);
    let remaining: Vec<bool> = (0..n).map(|v| alive[v] && !b[v]).collect();
    let sub = solve_sub(g, &remaining);
    for v in 0..n {
        if b[v] {
            won[v] = Some(z.opponent());
        } else if remaining[v] {
            won[v] = sub[v];
        }
    }
    won
}

/// `best(f, v)`: maximum over successors for `z`-owned vertices, minimum otherwise.
pub fn best<D: RankDomain + ?Sized>(g: &ParityGame, dom: &D, f: &[Rank], v: usize) -> Rank {
    let succ = g.successors(v).iter().map(|&w| &f[w]);
    let r = if g.owner(v) == dom.z() { succ.max() } else { succ.min() };
    r.expect("every vertex has a successor").clone()
}

/// `Lift(f, v)(v)`.
pub fn lift_at<D: RankDomain + ?Sized>(g: &ParityGame, dom: &D, f: &[Rank], v: usize) -> Rank {
    dom.lift(&best(g, dom, f, v), g.priority(v))
}

/// Whether one full round of `Lift` leaves `f` unchanged.
pub fn is_fixpoint<D: RankDomain + ?Sized>(g: &ParityGame, dom: &D, f: &[Rank]) -> bool {
    (0..g.n()).all(|v| lift_at(g, dom, f, v) == f[v])
}

/// Least simultaneous fixpoint of all `Lift(·, v)`, by round-robin
/// iteration in ascending vertex order starting from `min`.
pub fn naive_fixpoint<D: RankDomain + ?Sized>(g: &ParityGame, dom: &D) -> Result<Vec<Rank>, OracleError> {
    let w = dom.size_estimate();
    if g.n() > 8 || w > 1_000_000 {
        return Err(OracleError::TooLarge { n: g.n(), w });
    }
    let mut f = vec![dom.min(); g.n()];
    loop {
        let mut changed = false;
        for v in 0..g.n() {
            let r = lift_at(g, dom, &f, v);
            if r != f[v] {
                debug_assert!(r > f[v], "monotone iteration from min only increases");
                f[v] = r;
                changed = true;
            }
        }
        if !changed {
            return Ok(f);
        }
    }
}

/// Regions read off the `⊤` vertices of a ranking.
pub fn regions_of_ranking<D: RankDomain + ?Sized>(dom: &D, f: &[Rank]) -> Regions {
    let top: Vec<usize> = (0..f.len()).filter(|&v| f[v].is_top()).collect();
    Regions::from_winner_set(f.len(), dom.z(), &top)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::game::{parse_pgsolver, random_game};
    use crate::rank::{Opm, Spm};

    #[test]
    fn trivial_games() {
        let g = parse_pgsolver(b"0 0 1 0;").unwrap();
        assert_eq!(zielonka(&g), Regions { even: vec![0], odd: vec![] });
        let g = parse_pgsolver(b"0 1 0 0;").unwrap();
        assert_eq!(zielonka(&g), Regions { even: vec![], odd: vec![0] });
        let g = parse_pgsolver(b"0 1 0 0,1;\n1 2 0 1;").unwrap();
        assert_eq!(zielonka(&g), Regions { even: vec![0, 1], odd: vec![] });
    }

    #[test]
    fn attractor_edge_cases() {
        let g = random_game(6, 3, 0.4, 5);
        let alive = vec![true; 6];
        let all: Vec<usize> = (0..6).collect();
        assert!(attractor(&g, &alive, Player::Even, &all).iter().all(|&b| b));
        assert!(attractor(&g, &alive, Player::Odd, &[]).iter().all(|&b| !b));
    }

    #[test]
    fn attractor_on_chain() {
        // 0 -> 1 -> 2 -> 2, plus 1 -> 0. Vertex 1 is Odd-owned.
        let g = parse_pgsolver(b"0 0 0 1;\n1 0 1 0,2;\n2 0 0 2;").unwrap();
        let alive = vec![true; 3];
        assert_eq!(attractor(&g, &alive, Player::Even, &[2]), vec![false, false, true]);
        assert_eq!(attractor(&g, &alive, Player::Odd, &[2]), vec![true, true, true]);
    }

    #[test]
    fn naive_orientation() {
        let even_loop = parse_pgsolver(b"0 0 0 0;").unwrap();
        let f = naive_fixpoint(&even_loop, &Opm::for_game(&even_loop)).unwrap();
        assert_eq!(f, vec![Rank::Top]);
        let odd_loop = parse_pgsolver(b"0 1 0 0;").unwrap();
        let f = naive_fixpoint(&odd_loop, &Spm::for_game(&odd_loop)).unwrap();
        assert_eq!(f, vec![Rank::Top]);
    }

    #[test]
    fn oracles_agree_and_are_fixpoints() {
        for seed in 0..400 {
            let g = random_game(1 + (seed % 7) as usize, 1 + (seed % 5) as u32, [0.2, 0.5, 0.9][(seed % 3) as usize], seed);
            let z = zielonka(&g);
            let spm = Spm::for_game(&g);
            let f = naive_fixpoint(&g, &spm).unwrap();
            assert!(is_fixpoint(&g, &spm, &f));
            assert_eq!(regions_of_ranking(&spm, &f), z, "spm seed {seed}");
            let opm = Opm::for_game(&g);
            let f = naive_fixpoint(&g, &opm).unwrap();
            assert!(is_fixpoint(&g, &opm, &f));
            assert_eq!(regions_of_ranking(&opm, &f), z, "opm seed {seed}");
        }
    }

    #[test]
    fn zielonka_is_invariant_under_relabeling() {
        for seed in 0..100 {
            let n = 2 + (seed % 7) as usize;
            let g = random_game(n, 4, 0.3, seed);
            let perm: Vec<usize> = (0..n).map(|v| (v * 5 + seed as usize) % n).collect();
            let mut seen = perm.clone();
            seen.sort_unstable();
            seen.dedup();
            if seen.len() != n {
                continue;
            }
            let base = zielonka(&g);
            let moved = zielonka(&g.permuted(&perm));
            let mut even: Vec<usize> = base.even.iter().map(|&v| perm[v]).collect();
            even.sort_unstable();
            assert_eq!(moved.even, even);
        }
    }

    #[test]
    fn naive_guard() {
        let g = random_game(9, 2, 0.5, 1);
        assert!(matches!(naive_fixpoint(&g, &Spm::for_game(&g)), Err(OracleError::TooLarge { .. })));
    }
}
