//! Black-box set-based symbolic progress measure over any rank domain.

use std::collections::HashSet;

use crate::oracle::{is_fixpoint, Regions};
use crate::rank::{Rank, RankDomain};
use crate::solve::{Solution, SolveError, SolveOptions, TraceRecord, TRACE_SCHEMA};
use crate::structure::{ActiveList, RankMap};
use crate::symset::{SetBackend, SymSet};

/// Stored ranks with their sets `S_⪰r` and the active list.
pub struct RankStructure<R> {
    sets: RankMap<SymSet<R>>,
    active: ActiveList,
    min: Rank,
    seen: HashSet<Rank>,
    max_stored: usize,
}

impl<R> RankStructure<R> {
    /// Stores `min ↦ V` and `⊤ ↦ ∅`.
    pub fn new<B: SetBackend<Repr = R>>(b: &B, min: Rank) -> Self {
        let mut sets = RankMap::new();
        sets.insert(min.clone(), b.copy(b.universe()));
        sets.insert(Rank::Top, b.empty());
        let seen = [min.clone(), Rank::Top].into_iter().collect();
        RankStructure { sets, active: ActiveList::default(), min, seen, max_stored: 2 }
    }

    pub fn pop_active_set(&mut self) -> Option<Rank> {
        self.active.pop()
    }

    /// Set of the smallest stored rank `⪰ r`.
    pub fn get_set(&self, r: &Rank) -> SymSet<R> {
        self.sets.resolve(r).1.clone()
    }

    pub fn get_next(&self, r: &Rank) -> Rank {
        self.sets.next(r).expect("getNext is never asked for TOP").clone()
    }

    pub fn get_previous(&self, r: &Rank) -> Rank {
        self.sets.previous(r).expect("getPrevious is never asked for min").clone()
    }

    pub fn remove_set(&mut self, r: &Rank) {
        assert!(self.sets.remove(r).is_some(), "removeSet on an unstored rank");
        self.active.deactivate(r);
    }

    pub fn activate(&mut self, r: &Rank) {
        assert!(self.sets.contains(r), "activate on an unstored rank");
        self.active.activate(r);
    }

    /// Sets `S_⪰r` to `s`, inserting `r` if needed. Stored ranks below `r`
    /// whose set equalled the old `S_⪰r` follow along.
    pub fn update<B: SetBackend<Repr = R>>(&mut self, b: &B, r: &Rank, s: SymSet<R>) {
        let old = self.get_set(r);
        let followers: Vec<Rank> = self
            .sets
            .iter()
            .filter(|(k, v)| *k < r && b.members(v) == b.members(&old))
            .map(|(k, _)| k.clone())
            .collect();
        for k in followers {
            *self.sets.get_mut(&k).expect("present") = s.clone();
        }
        self.sets.insert(r.clone(), s);
        self.seen.insert(r.clone());
        self.max_stored = self.max_stored.max(self.sets.len());
    }

    pub fn stored(&self) -> usize {
        self.sets.len()
    }

    pub fn is_min(&self, r: &Rank) -> bool {
        *r == self.min
    }

    pub fn stored_ranks(&self) -> Vec<Rank> {
        self.sets.iter().map(|(k, _)| k.clone()).collect()
    }

    /// `ρ(v) = max { r stored | v ∈ S_⪰r }`.
    pub fn ranking<B: SetBackend<Repr = R>>(&self, b: &B) -> Vec<Rank> {
        let n = b.game().n();
        let mut rho = vec![None; n];
        for (r, s) in self.sets.iter().rev() {
            for v in b.members(s) {
                if rho[v].is_none() {
                    rho[v] = Some(r.clone());
                }
            }
        }
        rho.into_iter().map(|r| r.expect("min holds V")).collect()
    }

    /// Stored sets shrink weakly as ranks grow.
    pub fn check_anti_monotone<B: SetBackend<Repr = R>>(&self, b: &B) -> Result<(), SolveError> {
        let entries: Vec<(&Rank, Vec<usize>)> = self.sets.iter().map(|(k, v)| (k, b.members(v))).collect();
        for w in entries.windows(2) {
            if !w[1].1.iter().all(|v| w[0].1.binary_search(v).is_ok()) {
                return Err(SolveError::Invariant(format!("anti-monotonicity broken between {:?} and {:?}", w[0].0, w[1].0)));
            }
        }
        Ok(())
    }
}

/// Runs the black-box progress measure and returns both winning regions.
pub fn solve_blackbox<B: SetBackend, D: RankDomain + ?Sized>(
    b: &B,
    dom: &D,
    opts: &SolveOptions,
) -> Result<Solution, SolveError> {
    let g = b.game();
    let n = g.n();
    let z = dom.z();
    let mut d = RankStructure::new(b, dom.min());
    let mut trace = Vec::new();
    let mut iterations = 0u64;
    d.activate(&dom.min());
    while let Some(r) = d.pop_active_set() {
        if opts.assert_invariants {
            check_boundary(b, &d, n, opts)?;
        }
        iterations += 1;
        let p = {
            let s = d.get_set(&r);
            b.cpre(z, &s)
        };
        if opts.trace {
            trace.push(TraceRecord {
                schema: TRACE_SCHEMA,
                iteration: iterations,
                rank: dom.render(&r),
                p_size: b.members(&p).len(),
                stored: d.stored(),
            });
        }
        for c in 0..g.d() {
            let mut rp = dom.lift(&r, c);
            let pvc = b.intersect(&p, b.priority_set(c));
            let mut s_rp = d.get_set(&rp);
            while !b.subseteq(&pvc, &s_rp) {
                assert!(!d.is_min(&rp), "min holds V and never needs growing");
                s_rp = b.union(&s_rp, &pvc);
                let grows = rp.is_top() || {
                    let s_next = d.get_set(&d.get_next(&rp));
                    b.proper_superset(&s_rp, &s_next)
                };
                loop {
                    let prev = d.get_previous(&rp);
                    if d.is_min(&prev) {
                        break;
                    }
                    let same = {
                        let s_prev = d.get_set(&prev);
                        let joined = b.union(&s_prev, &pvc);
                        b.equals(&s_rp, &joined)
                    };
                    if !same {
                        break;
                    }
                    d.remove_set(&prev);
                }
                if grows {
                    d.update(b, &rp, s_rp.clone());
                    d.activate(&rp);
                }
                rp = d.get_previous(&rp);
                s_rp = d.get_set(&rp);
            }
        }
    }
    let ranking = d.ranking(b);
    if opts.assert_invariants {
        check_boundary(b, &d, n, opts)?;
        if !is_fixpoint(g, dom, &ranking) {
            return Err(SolveError::Invariant("final ranking is not a fixpoint of Lift".into()));
        }
    }
    let won = b.members(&d.get_set(&Rank::Top));
    let regions = Regions::from_winner_set(n, z, &won);
    let distinct = d.seen.len();
    let max_stored = d.max_stored;
    drop(d);
    Ok(Solution {
        regions,
        counters: b.counters(),
        ranking,
        trace,
        iterations,
        distinct_ranks_stored: distinct,
        max_stored,
    })
}

fn check_boundary<B: SetBackend>(
    b: &B,
    d: &RankStructure<B::Repr>,
    n: usize,
    opts: &SolveOptions,
) -> Result<(), SolveError> {
    d.check_anti_monotone(b)?;
    if d.stored() > n + 2 {
        return Err(SolveError::Invariant(format!("{} stored ranks exceed n + 2", d.stored())));
    }
    if let Some(reference) = &opts.reference {
        let rho = d.ranking(b);
        if let Some(v) = (0..n).find(|&v| rho[v] > reference[v]) {
            return Err(SolveError::Invariant(format!("rank of vertex {v} exceeds the least fixpoint")));
        }
    }
    Ok(())
}
