//! Reduced ordered BDD backend.
//!
//! Vertex ids are encoded with `⌈log2 n⌉` bits. Current and next bits are
//! interleaved, most significant first: current bit `i` is variable `2i`,
//! next bit `i` is variable `2i + 1`. Sets live on current variables only
//! and are conjoined with a domain constraint excluding ids `>= n`.

use std::cell::RefCell;
use std::collections::HashMap;
use std::fmt::Write as _;
use std::rc::Rc;

use super::{Meter, SetBackend, SymSet};
use crate::game::{ParityGame, Player};

/// Node reference. `FALSE` and `TRUE` are the terminals.
pub type NodeId = u32;
pub const FALSE: NodeId = 0;
pub const TRUE: NodeId = 1;
const TERMINAL_VAR: u32 = u32::MAX;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
struct Node {
    var: u32,
    lo: NodeId,
    hi: NodeId,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
enum Op {
    And,
    Or,
    Diff,
}

/// Hash-consed node store with an apply cache.
#[derive(Debug)]
pub struct Manager {
    nodes: Vec<Node>,
    unique: HashMap<Node, NodeId>,
    apply_cache: HashMap<(Op, NodeId, NodeId), NodeId>,
    relprod_cache: HashMap<(NodeId, NodeId), NodeId>,
    shift_cache: HashMap<NodeId, NodeId>,
}

impl Default for Manager {
    fn default() -> Self {
        Manager::new()
    }
}

impl Manager {
    pub fn new() -> Manager {
        let t = Node { var: TERMINAL_VAR, lo: FALSE, hi: FALSE };
        let tt = Node { var: TERMINAL_VAR, lo: TRUE, hi: TRUE };
        Manager {
            nodes: vec![t, tt],
            unique: HashMap::new(),
            apply_cache: HashMap::new(),
            relprod_cache: HashMap::new(),
            shift_cache: HashMap::new(),
        }
    }

    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    fn var(&self, a: NodeId) -> u32 {
        self.nodes[a as usize].var
    }

    /// Cofactors of `a` with respect to variable `v`.
    fn cofactors(&self, a: NodeId, v: u32) -> (NodeId, NodeId) {
        let n = self.nodes[a as usize];
        if n.var == v {
            (n.lo, n.hi)
        } else {
            (a, a)
        }
    }

    pub fn mk(&mut self, var: u32, lo: NodeId, hi: NodeId) -> NodeId {
        if lo == hi {
            return lo;
        }
        let node = Node { var, lo, hi };
        if let Some(&id) = self.unique.get(&node) {
            return id;
        }
        let id = self.nodes.len() as NodeId;
        self.nodes.push(node);
        self.unique.insert(node, id);
        id
    }

    fn apply(&mut self, op: Op, a: NodeId, b: NodeId) -> NodeId {
        match op {
            Op::And => {
                if a == FALSE || b == FALSE {
                    return FALSE;
                }
                if a == TRUE {
                    return b;
                }
                if b == TRUE || a == b {
                    return a;
                }
            }
            Op::Or => {
                if a == TRUE || b == TRUE {
                    return TRUE;
                }
                if a == FALSE {
                    return b;
                }
                if b == FALSE || a == b {
                    return a;
                }
            }
            Op::Diff => {
                if a == FALSE || b == TRUE || a == b {
                    return FALSE;
                }
                if b == FALSE {
                    return a;
                }
            }
        }
        let key = match op {
            Op::And | Op::Or if a > b => (op, b, a),
            _ => (op, a, b),
        };
        if let Some(&r) = self.apply_cache.get(&key) {
            return r;
        }
        let v = self.var(a).min(self.var(b));
        let (al, ah) = self.cofactors(a, v);
        let (bl, bh) = self.cofactors(b, v);
        let lo = self.apply(op, al, bl);
        let hi = self.apply(op, ah, bh);
        let r = self.mk(v, lo, hi);
        self.apply_cache.insert(key, r);
        r
    }

    pub fn and(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.apply(Op::And, a, b)
    }

    pub fn or(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.apply(Op::Or, a, b)
    }

    pub fn diff(&mut self, a: NodeId, b: NodeId) -> NodeId {
        self.apply(Op::Diff, a, b)
    }

    /// Renames every current variable `2i` of `a` to the next variable `2i + 1`.
    fn shift_to_next(&mut self, a: NodeId) -> NodeId {
        if a <= TRUE {
            return a;
        }
        if let Some(&r) = self.shift_cache.get(&a) {
            return r;
        }
        let n = self.nodes[a as usize];
        debug_assert!(n.var.is_multiple_of(2), "set BDDs use current variables only");
        let lo = self.shift_to_next(n.lo);
        let hi = self.shift_to_next(n.hi);
        let r = self.mk(n.var + 1, lo, hi);
        self.shift_cache.insert(a, r);
        r
    }

    /// `∃ next. rel ∧ s`, where `s` is already over next variables.
    fn relprod(&mut self, rel: NodeId, s: NodeId) -> NodeId {
        if rel == FALSE || s == FALSE {
            return FALSE;
        }
        if rel == TRUE && s == TRUE {
            return TRUE;
        }
        if let Some(&r) = self.relprod_cache.get(&(rel, s)) {
            return r;
        }
        let v = self.var(rel).min(self.var(s));
        let (rl, rh) = self.cofactors(rel, v);
        let (sl, sh) = self.cofactors(s, v);
        let r = if v % 2 == 1 {
            let lo = self.relprod(rl, sl);
            if lo == TRUE {
                TRUE
            } else {
                let hi = self.relprod(rh, sh);
                self.or(lo, hi)
            }
        } else {
            let lo = self.relprod(rl, sl);
            let hi = self.relprod(rh, sh);
            self.mk(v, lo, hi)
        };
        self.relprod_cache.insert((rel, s), r);
        r
    }

    /// BDD of a sorted key list. Bit `j` of a key, counted from the most
    /// significant of `vars.len()` bits, is the value of `vars[j]`.
    pub fn from_sorted_keys(&mut self, keys: &[u64], vars: &[u32]) -> NodeId {
        if keys.is_empty() {
            return FALSE;
        }
        if vars.is_empty() {
            return TRUE;
        }
        let shift = vars.len() - 1;
        let split = keys.partition_point(|&k| k >> shift & 1 == 0);
        let mask = if shift == 0 { 0 } else { (1u64 << shift) - 1 };
        let lo_keys: Vec<u64> = keys[..split].iter().map(|k| k & mask).collect();
        let hi_keys: Vec<u64> = keys[split..].iter().map(|k| k & mask).collect();
        let lo = self.from_sorted_keys(&lo_keys, &vars[1..]);
        let hi = self.from_sorted_keys(&hi_keys, &vars[1..]);
        self.mk(vars[0], lo, hi)
    }

    /// Number of satisfying assignments over variables `0..nvars`.
    pub fn sat_count(&self, a: NodeId, nvars: u32) -> u128 {
        fn go(m: &Manager, a: NodeId, nvars: u32, memo: &mut HashMap<NodeId, u128>) -> u128 {
            // Models over the variables from var(a) to nvars - 1.
            if a == FALSE {
                return 0;
            }
            if a == TRUE {
                return 1;
            }
            if let Some(&c) = memo.get(&a) {
                return c;
            }
            let n = m.nodes[a as usize];
            let level = |x: NodeId| if x <= TRUE { nvars } else { m.nodes[x as usize].var };
            let lo = go(m, n.lo, nvars, memo) << (level(n.lo) - n.var - 1);
            let hi = go(m, n.hi, nvars, memo) << (level(n.hi) - n.var - 1);
            memo.insert(a, lo + hi);
            lo + hi
        }
        let top = if a <= TRUE { nvars } else { self.var(a) };
        go(self, a, nvars, &mut HashMap::new()) << top
    }

    /// Evaluates `a` under an assignment given as a predicate on variables.
    pub fn eval(&self, mut a: NodeId, assign: impl Fn(u32) -> bool) -> bool {
        while a > TRUE {
            let n = self.nodes[a as usize];
            a = if assign(n.var) { n.hi } else { n.lo };
        }
        a == TRUE
    }

    /// Graphviz rendering of the BDD rooted at `a`.
    pub fn dot(&self, a: NodeId) -> String {
        let mut out = String::from("digraph bdd {\n  0 [shape=box,label=\"0\"];\n  1 [shape=box,label=\"1\"];\n");
        let mut seen = std::collections::HashSet::new();
        let mut stack = vec![a];
        while let Some(x) = stack.pop() {
            if x <= TRUE || !seen.insert(x) {
                continue;
            }
            let n = self.nodes[x as usize];
            let _ = writeln!(out, "  {x} [label=\"x{}\"];", n.var);
            let _ = writeln!(out, "  {x} -> {} [style=dashed];", n.lo);
            let _ = writeln!(out, "  {x} -> {};", n.hi);
            stack.push(n.lo);
            stack.push(n.hi);
        }
        out.push_str("}\n");
        out
    }

    /// Checks that variables strictly increase along every edge and that no
    /// node is redundant or duplicated.
    pub fn is_reduced_ordered(&self) -> bool {
        let mut seen = std::collections::HashSet::new();
        self.nodes.iter().skip(2).all(|n| {
            n.lo != n.hi
                && seen.insert((n.var, n.lo, n.hi))
                && [n.lo, n.hi].iter().all(|&c| c <= TRUE || self.var(c) > n.var)
        })
    }
}

pub struct BddBackend {
    game: ParityGame,
    meter: Rc<Meter>,
    mgr: RefCell<Manager>,
    bits: u32,
    domain: NodeId,
    relation: NodeId,
    universe: SymSet<NodeId>,
    by_priority: Vec<SymSet<NodeId>>,
    by_player: [SymSet<NodeId>; 2],
    empty_fixed: SymSet<NodeId>,
}

/// Number of bits needed for ids `0..n`.
pub fn id_bits(n: usize) -> u32 {
    if n <= 1 {
        0
    } else {
        usize::BITS - (n - 1).leading_zeros()
    }
}

impl BddBackend {
    pub fn new(game: &ParityGame) -> BddBackend {
        let n = game.n();
        let bits = id_bits(n);
        let mut mgr = Manager::new();
        let cur: Vec<u32> = (0..bits).map(|i| 2 * i).collect();
        let both: Vec<u32> = (0..2 * bits).collect();
        let set_of = |mgr: &mut Manager, ids: &[usize]| {
            let keys: Vec<u64> = ids.iter().map(|&v| v as u64).collect();
            mgr.from_sorted_keys(&keys, &cur)
        };
        let all: Vec<usize> = (0..n).collect();
        let domain = set_of(&mut mgr, &all);
        let mut pairs: Vec<u64> = Vec::with_capacity(game.m());
        for v in 0..n {
            for &w in game.successors(v) {
                pairs.push(interleave(v as u64, w as u64, bits));
            }
        }
        pairs.sort_unstable();
        let relation = mgr.from_sorted_keys(&pairs, &both);
        let by_priority = (0..game.d()).map(|c| SymSet::fixed(set_of(&mut mgr, &game.with_priority(c)))).collect();
        let by_player = [
            SymSet::fixed(set_of(&mut mgr, &game.owned_by(Player::Even))),
            SymSet::fixed(set_of(&mut mgr, &game.owned_by(Player::Odd))),
        ];
        BddBackend {
            game: game.clone(),
            meter: Rc::new(Meter::default()),
            mgr: RefCell::new(mgr),
            bits,
            domain,
            relation,
            universe: SymSet::fixed(domain),
            by_priority,
            by_player,
            empty_fixed: SymSet::fixed(FALSE),
        }
    }

    /// Root of the transition relation over current and next variables.
    pub fn relation(&self) -> NodeId {
        self.relation
    }

    /// Number of boolean variables per vertex id.
    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn manager(&self) -> std::cell::Ref<'_, Manager> {
        self.mgr.borrow()
    }

    /// Graphviz rendering of a set.
    pub fn dot(&self, s: &SymSet<NodeId>) -> String {
        self.mgr.borrow().dot(*s.repr())
    }

    fn make(&self, id: NodeId) -> SymSet<NodeId> {
        SymSet::counted(id, &self.meter)
    }

    /// Truth of current variable `var` for vertex `v`.
    fn cur_bit(&self, v: usize, var: u32) -> bool {
        let i = var / 2;
        (v >> (self.bits - 1 - i)) & 1 == 1
    }
}

/// Interleaves the bits of `v` (current) and `w` (next), most significant first.
pub fn interleave(v: u64, w: u64, bits: u32) -> u64 {
    let mut key = 0;
    for i in (0..bits).rev() {
        key = (key << 1) | (v >> i & 1);
        key = (key << 1) | (w >> i & 1);
    }
    key
}

impl SetBackend for BddBackend {
    type Repr = NodeId;

    fn game(&self) -> &ParityGame {
        &self.game
    }

    fn meter(&self) -> &Rc<Meter> {
        &self.meter
    }

    fn universe(&self) -> &SymSet<NodeId> {
        &self.universe
    }

    fn priority_set(&self, c: u32) -> &SymSet<NodeId> {
        self.by_priority.get(c as usize).unwrap_or(&self.empty_fixed)
    }

    fn player_set(&self, p: Player) -> &SymSet<NodeId> {
        &self.by_player[p.index()]
    }

    fn union(&self, a: &SymSet<NodeId>, b: &SymSet<NodeId>) -> SymSet<NodeId> {
        self.meter.bump(|c| c.union += 1);
        let r = self.mgr.borrow_mut().or(*a.repr(), *b.repr());
        self.make(r)
    }

    fn intersect(&self, a: &SymSet<NodeId>, b: &SymSet<NodeId>) -> SymSet<NodeId> {
        self.meter.bump(|c| c.intersect += 1);
        let r = self.mgr.borrow_mut().and(*a.repr(), *b.repr());
        self.make(r)
    }

    fn difference(&self, a: &SymSet<NodeId>, b: &SymSet<NodeId>) -> SymSet<NodeId> {
        self.meter.bump(|c| c.difference += 1);
        let r = self.mgr.borrow_mut().diff(*a.repr(), *b.repr());
        self.make(r)
    }

    fn subseteq(&self, a: &SymSet<NodeId>, b: &SymSet<NodeId>) -> bool {
        self.meter.bump(|c| c.subseteq += 1);
        self.mgr.borrow_mut().diff(*a.repr(), *b.repr()) == FALSE
    }

    fn equals(&self, a: &SymSet<NodeId>, b: &SymSet<NodeId>) -> bool {
        self.meter.bump(|c| c.equals += 1);
        a.repr() == b.repr()
    }

    fn pre(&self, s: &SymSet<NodeId>) -> SymSet<NodeId> {
        self.meter.bump(|c| c.pre_ops += 1);
        let mut mgr = self.mgr.borrow_mut();
        let next = mgr.shift_to_next(*s.repr());
        let r = mgr.relprod(self.relation, next);
        drop(mgr);
        self.make(r)
    }

    fn copy(&self, s: &SymSet<NodeId>) -> SymSet<NodeId> {
        self.make(*s.repr())
    }

    fn empty(&self) -> SymSet<NodeId> {
        self.make(FALSE)
    }

    fn from_members(&self, members: &[usize]) -> SymSet<NodeId> {
        let mut keys: Vec<u64> = members.iter().filter(|&&v| v < self.game.n()).map(|&v| v as u64).collect();
        keys.sort_unstable();
        keys.dedup();
        let cur: Vec<u32> = (0..self.bits).map(|i| 2 * i).collect();
        let r = self.mgr.borrow_mut().from_sorted_keys(&keys, &cur);
        self.make(r)
    }

    fn members(&self, s: &SymSet<NodeId>) -> Vec<usize> {
        (0..self.game.n()).filter(|&v| self.contains(s, v)).collect()
    }

    fn contains(&self, s: &SymSet<NodeId>, v: usize) -> bool {
        self.mgr.borrow().eval(*s.repr(), |var| self.cur_bit(v, var))
    }
}

impl BddBackend {
    /// Whether any id `>= n` satisfies `s`.
    pub fn has_dead_ids(&self, s: &SymSet<NodeId>) -> bool {
        self.mgr.borrow_mut().diff(*s.repr(), self.domain) != FALSE
    }
}
