//! Progress measure with the coordinate-encoded set family: one set per
//! (position, symbol) plus `C_⊤`, instead of one set per stored rank.

use std::collections::HashSet;

use crate::oracle::{is_fixpoint, Regions};
use crate::rank::{Rank, RankDomain};
use crate::solve::{Solution, SolveError, SolveOptions, TraceRecord, TRACE_SCHEMA};
use crate::structure::{ActiveList, RankMap};
use crate::symset::{SetBackend, SymSet};

/// Sets `C_x^i` (vertices whose rank has symbol `x` at position `i`) and `C_⊤`.
pub struct CoordinateStore<R> {
    cells: Vec<Vec<SymSet<R>>>,
    top: SymSet<R>,
}

impl<R> CoordinateStore<R> {
    /// Every vertex at `min`: `C_0^i = V`, all other sets empty.
    pub fn new<B: SetBackend<Repr = R>>(b: &B, sizes: &[u32]) -> Self {
        let cells = sizes
            .iter()
            .map(|&m| (0..m).map(|x| if x == 0 { b.copy(b.universe()) } else { b.empty() }).collect())
            .collect();
        CoordinateStore { cells, top: b.empty() }
    }

    /// Store holding an explicit ranking.
    pub fn from_ranking<B: SetBackend<Repr = R>>(b: &B, sizes: &[u32], rho: &[Rank]) -> Self {
        let cells = sizes
            .iter()
            .enumerate()
            .map(|(i, &m)| {
                (0..m)
                    .map(|x| {
                        let members: Vec<usize> =
                            (0..rho.len()).filter(|&v| rho[v].coords().is_some_and(|t| t[i] == x)).collect();
                        b.from_members(&members)
                    })
                    .collect()
            })
            .collect();
        let tops: Vec<usize> = (0..rho.len()).filter(|&v| rho[v].is_top()).collect();
        CoordinateStore { cells, top: b.from_members(&tops) }
    }

    /// Number of sets held.
    pub fn set_count(&self) -> usize {
        self.cells.iter().map(Vec::len).sum::<usize>() + 1
    }

    pub fn cell(&self, i: usize, x: u32) -> &SymSet<R> {
        &self.cells[i][x as usize]
    }

    pub fn top(&self) -> &SymSet<R> {
        &self.top
    }

    /// `S_⪰r`, evaluated from the last position backwards:
    /// `G_k = V`, `G_i = ⋃_{x ≻ b_i} C_x^i ∪ (C_{b_i}^i ∩ G_{i+1})`, result `G_1 ∪ C_⊤`.
    pub fn get_set<B: SetBackend<Repr = R>>(&self, b: &B, r: &Rank) -> SymSet<R> {
        let t = match r {
            Rank::Top => return self.top.clone(),
            Rank::Tuple(t) => t,
        };
        let mut acc: Option<SymSet<R>> = None;
        for (i, &bi) in t.iter().enumerate().rev() {
            let row = &self.cells[i];
            let mut g = match acc.take() {
                None => row[bi as usize].clone(),
                Some(prev) => b.intersect(&row[bi as usize], &prev),
            };
            for cell in &row[bi as usize + 1..] {
                g = b.union(&g, cell);
            }
            acc = Some(g);
        }
        match acc {
            None => b.copy(b.universe()),
            Some(g) => b.union(&g, &self.top),
        }
    }

    /// `(S_r, S_⪰r)` by the forward prefix form: `T^0 = V`,
    /// `T^i = T^{i-1} ∩ C_{b_i}^i`, `S_r = T^k` and
    /// `S_⪰r = ⋃_i (T^{i-1} ∩ ⋃_{x ≻ b_i} C_x^i) ∪ S_r ∪ C_⊤`.
    pub fn get_set_by_prefix<B: SetBackend<Repr = R>>(&self, b: &B, r: &Rank) -> (SymSet<R>, SymSet<R>) {
        let t = match r {
            Rank::Top => return (self.top.clone(), self.top.clone()),
            Rank::Tuple(t) => t,
        };
        let mut prefix = b.copy(b.universe());
        let mut acc = b.copy(&self.top);
        for (i, &bi) in t.iter().enumerate() {
            let mut above = b.empty();
            for cell in &self.cells[i][bi as usize + 1..] {
                above = b.union(&above, cell);
            }
            let part = b.intersect(&prefix, &above);
            acc = b.union(&acc, &part);
            prefix = b.intersect(&prefix, &self.cells[i][bi as usize]);
        }
        let full = b.union(&acc, &prefix);
        (prefix, full)
    }

    /// Raises every vertex of `s \ S_⪰r` to rank `r`.
    pub fn update<B: SetBackend<Repr = R>>(&mut self, b: &B, r: &Rank, s: &SymSet<R>) {
        let delta = {
            let old = self.get_set(b, r);
            debug_assert!(b.members(&old).iter().all(|&v| b.contains(s, v)), "update needs S ⊇ S_⪰r");
            b.difference(s, &old)
        };
        for row in self.cells.iter_mut() {
            for cell in row.iter_mut() {
                *cell = b.difference(cell, &delta);
            }
        }
        match r {
            Rank::Top => self.top = b.union(&self.top, &delta),
            Rank::Tuple(t) => {
                for (i, &x) in t.iter().enumerate() {
                    let cell = &mut self.cells[i][x as usize];
                    *cell = b.union(cell, &delta);
                }
            }
        }
    }

    /// `ρ(v)` read off the coordinates.
    pub fn ranking<B: SetBackend<Repr = R>>(&self, b: &B) -> Vec<Rank> {
        (0..b.game().n())
            .map(|v| {
                if b.contains(&self.top, v) {
                    return Rank::Top;
                }
                let t = self
                    .cells
                    .iter()
                    .map(|row| row.iter().position(|c| b.contains(c, v)).expect("positions partition V") as u32)
                    .collect();
                Rank::Tuple(t)
            })
            .collect()
    }

    /// Per position and symbol, the member list. The last entry is `C_⊤`.
    pub fn dump<B: SetBackend<Repr = R>>(&self, b: &B) -> Vec<Vec<Vec<usize>>> {
        let mut out: Vec<Vec<Vec<usize>>> =
            self.cells.iter().map(|row| row.iter().map(|c| b.members(c)).collect()).collect();
        out.push(vec![b.members(&self.top)]);
        out
    }

    /// Whether every position's sets, together with `C_⊤`, partition `V`.
    pub fn is_partition<B: SetBackend<Repr = R>>(&self, b: &B) -> bool {
        let n = b.game().n();
        let top = b.members(&self.top);
        self.cells.iter().all(|row| {
            let mut count = vec![0; n];
            for v in row.iter().flat_map(|c| b.members(c)).chain(top.iter().copied()) {
                count[v] += 1;
            }
            count.iter().all(|&c| c == 1)
        })
    }
}

/// Runs the coordinate-encoded progress measure.
pub fn solve_compact<B: SetBackend, D: RankDomain + ?Sized>(
    b: &B,
    dom: &D,
    opts: &SolveOptions,
) -> Result<Solution, SolveError> {
    if dom.width() == 0 {
        return Err(SolveError::NotTupleDomain);
    }
    let g = b.game();
    let n = g.n();
    let z = dom.z();
    let min = dom.min();
    let mut store = CoordinateStore::new(b, &dom.alphabet_sizes());
    let mut keys: RankMap<()> = RankMap::new();
    keys.insert(min.clone(), ());
    keys.insert(Rank::Top, ());
    let mut active = ActiveList::default();
    let mut seen: HashSet<Rank> = [min.clone(), Rank::Top].into_iter().collect();
    let mut max_stored = 2;
    let mut trace = Vec::new();
    let mut iterations = 0u64;
    active.activate(&min);
    while let Some(r) = active.pop() {
        if opts.assert_invariants {
            check_boundary(b, &store, &keys, opts)?;
        }
        iterations += 1;
        let p = {
            let s = store.get_set(b, &r);
            b.cpre(z, &s)
        };
        if opts.trace {
            trace.push(TraceRecord {
                schema: TRACE_SCHEMA,
                iteration: iterations,
                rank: dom.render(&r),
                p_size: b.members(&p).len(),
                stored: keys.len(),
            });
        }
        for c in 0..g.d() {
            let mut rp = dom.lift(&r, c);
            let pvc = b.intersect(&p, b.priority_set(c));
            let mut s_rp = store.get_set(b, &rp);
            let rold = rp.clone();
            let s_rold = b.union(&s_rp, &pvc);
            while !b.subseteq(&pvc, &s_rp) {
                assert!(rp != min, "min holds V and never needs growing");
                s_rp = b.union(&s_rp, &pvc);
                let grows = rp.is_top() || {
                    let next = keys.next(&rp).expect("stored successor").clone();
                    let s_next = store.get_set(b, &next);
                    b.proper_superset(&s_rp, &s_next)
                };
                loop {
                    let prev = keys.previous(&rp).expect("stored predecessor").clone();
                    if prev == min {
                        break;
                    }
                    let same = {
                        let s_prev = store.get_set(b, &prev);
                        let joined = b.union(&s_prev, &pvc);
                        b.equals(&s_rp, &joined)
                    };
                    if !same {
                        break;
                    }
                    keys.remove(&prev);
                    active.deactivate(&prev);
                }
                if grows {
                    keys.insert(rp.clone(), ());
                    seen.insert(rp.clone());
                    max_stored = max_stored.max(keys.len());
                    active.activate(&rp);
                }
                rp = keys.previous(&rp).expect("stored predecessor").clone();
                s_rp = store.get_set(b, &rp);
            }
            drop(s_rp);
            store.update(b, &rold, &s_rold);
        }
    }
    let ranking = store.ranking(b);
    if opts.assert_invariants {
        check_boundary(b, &store, &keys, opts)?;
        if !is_fixpoint(g, dom, &ranking) {
            return Err(SolveError::Invariant("final ranking is not a fixpoint of Lift".into()));
        }
    }
    let won = b.members(store.top());
    let regions = Regions::from_winner_set(n, z, &won);
    drop(store);
    Ok(Solution {
        regions,
        counters: b.counters(),
        ranking,
        trace,
        iterations,
        distinct_ranks_stored: seen.len(),
        max_stored,
    })
}

fn check_boundary<B: SetBackend>(
    b: &B,
    store: &CoordinateStore<B::Repr>,
    keys: &RankMap<()>,
    opts: &SolveOptions,
) -> Result<(), SolveError> {
    if !store.is_partition(b) {
        return Err(SolveError::Invariant("coordinate sets do not partition V".into()));
    }
    let ranks: Vec<Rank> = keys.iter().map(|(k, _)| k.clone()).collect();
    let rho = store.ranking(b);
    let n = rho.len();
    // S_⪰r read from ρ is anti-monotone by construction; check the stored keys against it.
    for w in ranks.windows(2) {
        let lo: Vec<usize> = (0..n).filter(|&v| rho[v] >= w[0]).collect();
        let hi: Vec<usize> = (0..n).filter(|&v| rho[v] >= w[1]).collect();
        if !hi.iter().all(|v| lo.contains(v)) {
            return Err(SolveError::Invariant("anti-monotonicity broken".into()));
        }
    }
    if keys.len() > n + 2 {
        return Err(SolveError::Invariant(format!("{} stored ranks exceed n + 2", keys.len())));
    }
    if let Some(reference) = &opts.reference {
        if let Some(v) = (0..n).find(|&v| rho[v] > reference[v]) {
            return Err(SolveError::Invariant(format!("rank of vertex {v} exceeds the least fixpoint")));
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::blackbox::solve_blackbox;
    use crate::game::{parse_pgsolver, random_game};
    use crate::oracle::{naive_fixpoint, zielonka};
    use crate::rank::{Opm, Spm};
    use crate::symset::{BddBackend, BitsetBackend};

    #[test]
    fn one_vertex_games() {
        for (text, even) in [(&b"0 0 0 0;"[..], vec![0]), (&b"0 1 1 0;"[..], vec![])] {
            let g = parse_pgsolver(text).unwrap();
            let b = BitsetBackend::new(&g);
            let sol = solve_compact(&b, &Opm::for_game(&g), &SolveOptions::default()).unwrap();
            assert_eq!(sol.regions.even, even);
        }
    }

    #[test]
    fn agrees_with_blackbox_and_oracle() {
        for seed in 0..300 {
            let n = 1 + (seed % 8) as usize;
            let g = random_game(n, 1 + (seed % 6) as u32, [0.2, 0.5, 0.9][(seed % 3) as usize], seed);
            let dom = Opm::for_game(&g);
            let reference = naive_fixpoint(&g, &dom).unwrap();
            let opts = SolveOptions { assert_invariants: true, reference: Some(reference.clone()), trace: false };
            let b = BitsetBackend::new(&g);
            let sol = solve_compact(&b, &dom, &opts).unwrap();
            assert_eq!(sol.regions, zielonka(&g), "seed {seed}");
            assert_eq!(sol.ranking, reference, "seed {seed}");
            let bb = solve_blackbox(&BitsetBackend::new(&g), &dom, &SolveOptions::default()).unwrap();
            assert_eq!(bb.regions, sol.regions);
            let k = dom.width() as u64;
            assert!(sol.counters.live_sets_max <= k * (g.d() as u64 + 1) + 7, "seed {seed}: {}", sol.counters.live_sets_max);
            assert_eq!(b.counters().live_sets_now, 0);
        }
    }

    #[test]
    fn bdd_backend_gives_same_result() {
        for seed in 0..50 {
            let g = random_game(1 + (seed % 12) as usize, 4, 0.3, seed);
            let dom = Opm::for_game(&g);
            let x = solve_compact(&BitsetBackend::new(&g), &dom, &SolveOptions::default()).unwrap();
            let y = solve_compact(&BddBackend::new(&g), &dom, &SolveOptions::default()).unwrap();
            assert_eq!(x.regions, y.regions);
            assert_eq!(x.counters, y.counters);
        }
    }

    #[test]
    fn spm_is_accepted_when_tuple_shaped() {
        let g = random_game(6, 4, 0.4, 3);
        let sol = solve_compact(&BitsetBackend::new(&g), &Spm::for_game(&g), &SolveOptions::default()).unwrap();
        assert_eq!(sol.regions, zielonka(&g));
    }

    #[test]
    fn update_keeps_partition_and_is_idempotent() {
        let g = random_game(5, 3, 0.5, 2);
        let b = BitsetBackend::new(&g);
        let dom = Opm::for_game(&g);
        let mut store = CoordinateStore::new(&b, &dom.alphabet_sizes());
        assert_eq!(store.set_count(), dom.width() * 4 + 1);
        let r = dom.lift(&dom.min(), 0);
        let s = b.from_members(&[1, 3]);
        store.update(&b, &r, &s);
        assert!(store.is_partition(&b));
        let before = store.dump(&b);
        let again = store.get_set(&b, &r);
        store.update(&b, &r, &again);
        assert_eq!(store.dump(&b), before);
        assert_eq!(b.members(&store.get_set(&b, &dom.min())), vec![0, 1, 2, 3, 4]);
        assert_eq!(b.members(&store.get_set(&b, &r)), vec![1, 3]);
        store.update(&b, &Rank::Top, &b.from_members(&[3]));
        assert!(store.is_partition(&b));
        assert_eq!(b.members(&store.get_set(&b, &Rank::Top)), vec![3]);
    }
}
