//! Rank bookkeeping shared by the symbolic solvers: the ordered key set of
//! stored ranks and the FIFO active list.

use std::collections::{BTreeMap, HashMap, VecDeque};
use std::ops::Bound::{Excluded, Included, Unbounded};

use crate::rank::Rank;

/// FIFO list of active ranks. Activation is idempotent and removal is O(1);
/// stale queue entries are skipped by generation number.
#[derive(Debug, Default)]
pub struct ActiveList {
    queue: VecDeque<(Rank, u64)>,
    live: HashMap<Rank, u64>,
    stamp: u64,
}

impl ActiveList {
    pub fn activate(&mut self, r: &Rank) {
        if !self.live.contains_key(r) {
            self.stamp += 1;
            self.live.insert(r.clone(), self.stamp);
            self.queue.push_back((r.clone(), self.stamp));
        }
    }

    pub fn deactivate(&mut self, r: &Rank) {
        self.live.remove(r);
    }

    pub fn pop(&mut self) -> Option<Rank> {
        while let Some((r, s)) = self.queue.pop_front() {
            if self.live.get(&r) == Some(&s) {
                self.live.remove(&r);
                return Some(r);
            }
        }
        None
    }

    pub fn is_active(&self, r: &Rank) -> bool {
        self.live.contains_key(r)
    }

    pub fn len(&self) -> usize {
        self.live.len()
    }

    pub fn is_empty(&self) -> bool {
        self.live.is_empty()
    }
}

/// Ordered map of stored ranks to payloads with successor lookup.
#[derive(Debug)]
pub struct RankMap<T> {
    map: BTreeMap<Rank, T>,
}

impl<T> RankMap<T> {
    pub fn new() -> Self {
        RankMap { map: BTreeMap::new() }
    }

    pub fn insert(&mut self, r: Rank, t: T) -> Option<T> {
        self.map.insert(r, t)
    }

    pub fn remove(&mut self, r: &Rank) -> Option<T> {
        self.map.remove(r)
    }

    pub fn contains(&self, r: &Rank) -> bool {
        self.map.contains_key(r)
    }

    pub fn len(&self) -> usize {
        self.map.len()
    }

    pub fn is_empty(&self) -> bool {
        self.map.is_empty()
    }

    /// Smallest stored rank `⪰ r`.
    pub fn resolve(&self, r: &Rank) -> (&Rank, &T) {
        self.map.range((Included(r), Unbounded)).next().expect("TOP is always stored")
    }

    /// Smallest stored rank strictly above `r`.
    pub fn next(&self, r: &Rank) -> Option<&Rank> {
        self.map.range((Excluded(r), Unbounded)).next().map(|(k, _)| k)
    }

    /// Largest stored rank strictly below `r`.
    pub fn previous(&self, r: &Rank) -> Option<&Rank> {
        self.map.range((Unbounded, Excluded(r))).next_back().map(|(k, _)| k)
    }

    pub fn iter(&self) -> impl DoubleEndedIterator<Item = (&Rank, &T)> {
        self.map.iter()
    }

    pub fn get_mut(&mut self, r: &Rank) -> Option<&mut T> {
        self.map.get_mut(r)
    }
}

impl<T> Default for RankMap<T> {
    fn default() -> Self {
        RankMap::new()
    }
}
