//! Parity game model, PGSolver text format and a seeded random generator.

use std::collections::HashMap;
use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

/// One of the two players.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Player {
    Even,
    Odd,
}

impl Player {
    pub fn opponent(self) -> Player {
        match self {
            Player::Even => Player::Odd,
            Player::Odd => Player::Even,
        }
    }

    /// The player favoured by a priority.
    pub fn of_priority(p: u32) -> Player {
        if p.is_multiple_of(2) {
            Player::Even
        } else {
            Player::Odd
        }
    }

    pub fn index(self) -> usize {
        match self {
            Player::Even => 0,
            Player::Odd => 1,
        }
    }
}

impl fmt::Display for Player {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Player::Even => write!(f, "even"),
            Player::Odd => write!(f, "odd"),
        }
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GameError {
    #[error("syntax error at {line}:{col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("duplicate vertex id {id} at line {line}")]
    DuplicateId { id: u64, line: usize },
    #[error("vertex {from} has successor {to} which is not declared")]
    DanglingSuccessor { from: u64, to: u64 },
    #[error("vertex {id} at line {line} has no successors")]
    NoSuccessors { id: u64, line: usize },
    #[error("vertex {id} at line {line} has negative priority {priority}")]
    NegativePriority { id: u64, line: usize, priority: i64 },
    #[error("invalid game: {0}")]
    Invalid(String),
}

/// A parity game over dense vertex ids `0..n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ParityGame {
    owner: Vec<Player>,
    priority: Vec<u32>,
    succ: Vec<Vec<usize>>,
    pred: Vec<Vec<usize>>,
    names: Vec<Option<String>>,
    d: u32,
}

impl ParityGame {
    /// Builds and validates a game. Successor lists are sorted and deduplicated.
    pub fn new(
        owner: Vec<Player>,
        priority: Vec<u32>,
        succ: Vec<Vec<usize>>,
        d: u32,
    ) -> Result<ParityGame, GameError> {
        let n = owner.len();
        if n == 0 {
            return Err(GameError::Invalid("game has no vertices".into()));
        }
        if priority.len() != n || succ.len() != n {
            return Err(GameError::Invalid("per-vertex vectors differ in length".into()));
        }
        if d == 0 {
            return Err(GameError::Invalid("priority count must be at least 1".into()));
        }
        if let Some(&p) = priority.iter().find(|&&p| p >= d) {
            return Err(GameError::Invalid(format!("priority {p} outside 0..{d}")));
        }
        let mut succ = succ;
        let mut pred = vec![Vec::new(); n];
        for (v, out) in succ.iter_mut().enumerate() {
            out.sort_unstable();
            out.dedup();
            if out.is_empty() {
                return Err(GameError::NoSuccessors { id: v as u64, line: 0 });
            }
            if let Some(&w) = out.iter().find(|&&w| w >= n) {
                return Err(GameError::DanglingSuccessor { from: v as u64, to: w as u64 });
            }
            for &w in out.iter() {
                pred[w].push(v);
            }
        }
        Ok(ParityGame { owner, priority, succ, pred, names: vec![None; n], d })
    }

    pub fn with_names(mut self, names: Vec<Option<String>>) -> ParityGame {
        assert_eq!(names.len(), self.n());
        self.names = names;
        self
    }

    pub fn n(&self) -> usize {
        self.owner.len()
    }

    /// Number of edges.
    pub fn m(&self) -> usize {
        self.succ.iter().map(Vec::len).sum()
    }

    /// Number of priorities; every priority lies in `0..d`.
    pub fn d(&self) -> u32 {
        self.d
    }

    pub fn owner(&self, v: usize) -> Player {
        self.owner[v]
    }

    pub fn priority(&self, v: usize) -> u32 {
        self.priority[v]
    }

    pub fn successors(&self, v: usize) -> &[usize] {
        &self.succ[v]
    }

    pub fn predecessors(&self, v: usize) -> &[usize] {
        &self.pred[v]
    }

    pub fn name(&self, v: usize) -> Option<&str> {
        self.names[v].as_deref()
    }

    pub fn owners(&self) -> &[Player] {
        &self.owner
    }

    pub fn priorities(&self) -> &[u32] {
        &self.priority
    }

    /// Vertices with priority `c`, ascending.
    pub fn with_priority(&self, c: u32) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.priority[v] == c).collect()
    }

    /// Vertices owned by `p`, ascending.
    pub fn owned_by(&self, p: Player) -> Vec<usize> {
        (0..self.n()).filter(|&v| self.owner[v] == p).collect()
    }

    /// Same game with vertex `v` renamed to `perm[v]`.
    pub fn permuted(&self, perm: &[usize]) -> ParityGame {
        let n = self.n();
        let mut owner = vec![Player::Even; n];
        let mut priority = vec![0; n];
        let mut succ = vec![Vec::new(); n];
        for v in 0..n {
            owner[perm[v]] = self.owner[v];
            priority[perm[v]] = self.priority[v];
            succ[perm[v]] = self.succ[v].iter().map(|&w| perm[w]).collect();
        }
        ParityGame::new(owner, priority, succ, self.d).expect("permutation of a valid game")
    }
}

/// Seeded random game: uniform owners and priorities, each ordered pair an
/// edge with probability `edge_density`, and a forced uniform successor for
/// vertices left without one.
pub fn random_game(n: usize, d: u32, edge_density: f64, seed: u64) -> ParityGame {
    assert!(n >= 1 && d >= 1, "random_game needs n >= 1 and d >= 1");
    assert!(edge_density > 0.0 && edge_density <= 1.0, "edge density must lie in (0, 1]");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut owner = Vec::with_capacity(n);
    let mut priority = Vec::with_capacity(n);
    for _ in 0..n {
        owner.push(if rng.gen_bool(0.5) { Player::Odd } else { Player::Even });
        priority.push(rng.gen_range(0..d));
    }
    let mut succ = vec![Vec::new(); n];
    for out in succ.iter_mut() {
        for w in 0..n {
            if rng.gen_bool(edge_density) {
                out.push(w);
            }
        }
    }
    for out in succ.iter_mut() {
        if out.is_empty() {
            out.push(rng.gen_range(0..n));
        }
    }
    ParityGame::new(owner, priority, succ, d).expect("generator produces valid games")
}

struct Lexer<'a> {
    src: &'a [u8],
    pos: usize,
    line: usize,
    col: usize,
}

#[derive(Debug, PartialEq)]
enum Tok {
    Int(i64),
    Word(String),
    Str(String),
    Comma,
    Semi,
    Eof,
}

impl<'a> Lexer<'a> {
    fn new(src: &'a [u8]) -> Self {
        Lexer { src, pos: 0, line: 1, col: 1 }
    }

    fn err(&self, line: usize, col: usize, msg: impl Into<String>) -> GameError {
        GameError::Syntax { line, col, msg: msg.into() }
    }

    fn bump(&mut self) -> Option<u8> {
        let c = *self.src.get(self.pos)?;
        self.pos += 1;
        if c == b'\n' {
            self.line += 1;
            self.col = 1;
        } else {
            self.col += 1;
        }
        Some(c)
    }

    fn peek(&self) -> Option<u8> {
        self.src.get(self.pos).copied()
    }

    /// Next token together with its starting line and column.
    fn next(&mut self) -> Result<(Tok, usize, usize), GameError> {
        while matches!(self.peek(), Some(c) if c.is_ascii_whitespace()) {
            self.bump();
        }
        let (line, col) = (self.line, self.col);
        let c = match self.peek() {
            None => return Ok((Tok::Eof, line, col)),
            Some(c) => c,
        };
        let tok = match c {
            b',' => {
                self.bump();
                Tok::Comma
            }
            b';' => {
                self.bump();
                Tok::Semi
            }
            b'"' => {
                self.bump();
                let mut buf = Vec::new();
                loop {
                    match self.bump() {
                        None => return Err(self.err(line, col, "unterminated name")),
                        Some(b'"') => break,
                        Some(b'\\') => match self.bump() {
                            Some(e) => buf.push(e),
                            None => return Err(self.err(line, col, "unterminated name")),
                        },
                        Some(ch) => buf.push(ch),
                    }
                }
                let s = String::from_utf8(buf).map_err(|_| self.err(line, col, "name is not UTF-8"))?;
                Tok::Str(s)
            }
            b'-' | b'0'..=b'9' => {
                let start = self.pos;
                self.bump();
                while matches!(self.peek(), Some(b'0'..=b'9')) {
                    self.bump();
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits");
                let v = text.parse::<i64>().map_err(|_| self.err(line, col, format!("bad integer `{text}`")))?;
                Tok::Int(v)
            }
            c if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while matches!(self.peek(), Some(c) if c.is_ascii_alphanumeric() || c == b'_') {
                    self.bump();
                }
                Tok::Word(String::from_utf8_lossy(&self.src[start..self.pos]).into_owned())
            }
            other => return Err(self.err(line, col, format!("unexpected character `{}`", other as char))),
        };
        Ok((tok, line, col))
    }
}

struct RawVertex {
    id: u64,
    line: usize,
    priority: u32,
    owner: Player,
    succ: Vec<u64>,
    name: Option<String>,
}

fn expect_id(tok: (Tok, usize, usize), what: &str) -> Result<u64, GameError> {
    match tok {
        (Tok::Int(v), _, _) if v >= 0 => Ok(v as u64),
        (t, line, col) => Err(GameError::Syntax { line, col, msg: format!("expected {what}, found {t:?}") }),
    }
}

/// Parses PGSolver text. Vertex ids are compacted to `0..n` in declaration order.
pub fn parse_pgsolver(text: &[u8]) -> Result<ParityGame, GameError> {
    let mut lx = Lexer::new(text);
    let mut raw: Vec<RawVertex> = Vec::new();
    let mut first = true;
    loop {
        let tok = lx.next()?;
        match tok {
            (Tok::Eof, _, _) => break,
            (Tok::Word(w), line, col) => {
                if w != "parity" || !first {
                    return Err(GameError::Syntax { line, col, msg: format!("unexpected keyword `{w}`") });
                }
                expect_id(lx.next()?, "maximum vertex id")?;
                match lx.next()? {
                    (Tok::Semi, _, _) => {}
                    (t, line, col) => {
                        return Err(GameError::Syntax { line, col, msg: format!("expected `;`, found {t:?}") })
                    }
                }
            }
            (Tok::Int(id), line, col) => {
                if id < 0 {
                    return Err(GameError::Syntax { line, col, msg: "negative vertex id".into() });
                }
                let id = id as u64;
                let priority = match lx.next()? {
                    (Tok::Int(p), _, _) if p < 0 => {
                        return Err(GameError::NegativePriority { id, line, priority: p })
                    }
                    (Tok::Int(p), l, c) => {
                        u32::try_from(p).map_err(|_| GameError::Syntax { line: l, col: c, msg: "priority too large".into() })?
                    }
                    (t, l, c) => {
                        return Err(GameError::Syntax { line: l, col: c, msg: format!("expected priority, found {t:?}") })
                    }
                };
                let owner = match lx.next()? {
                    (Tok::Int(0), _, _) => Player::Even,
                    (Tok::Int(1), _, _) => Player::Odd,
                    (t, l, c) => {
                        return Err(GameError::Syntax { line: l, col: c, msg: format!("expected owner 0 or 1, found {t:?}") })
                    }
                };
                let mut succ = Vec::new();
                let mut name = None;
                let mut tok = lx.next()?;
                match tok {
                    (Tok::Int(_), _, _) => {
                        succ.push(expect_id(tok, "successor id")?);
                        loop {
                            tok = lx.next()?;
                            if tok.0 != Tok::Comma {
                                break;
                            }
                            succ.push(expect_id(lx.next()?, "successor id")?);
                        }
                    }
                    (Tok::Semi, _, _) | (Tok::Str(_), _, _) => {
                        return Err(GameError::NoSuccessors { id, line });
                    }
                    _ => {}
                }
                if let (Tok::Str(s), _, _) = tok {
                    name = Some(s);
                    tok = lx.next()?;
                }
                match tok {
                    (Tok::Semi, _, _) => {}
                    (t, l, c) => {
                        return Err(GameError::Syntax { line: l, col: c, msg: format!("expected `;`, found {t:?}") })
                    }
                }
                raw.push(RawVertex { id, line, priority, owner, succ, name });
            }
            (t, line, col) => {
                return Err(GameError::Syntax { line, col, msg: format!("expected vertex declaration, found {t:?}") })
            }
        }
        first = false;
    }
    if raw.is_empty() {
        return Err(GameError::Syntax { line: lx.line, col: lx.col, msg: "no vertices declared".into() });
    }
    let mut index = HashMap::new();
    for (i, rv) in raw.iter().enumerate() {
        if index.insert(rv.id, i).is_some() {
            return Err(GameError::DuplicateId { id: rv.id, line: rv.line });
        }
    }
    let mut succ = Vec::with_capacity(raw.len());
    for rv in &raw {
        let mut out = Vec::with_capacity(rv.succ.len());
        for &w in &rv.succ {
            match index.get(&w) {
                Some(&j) => out.push(j),
                None => return Err(GameError::DanglingSuccessor { from: rv.id, to: w }),
            }
        }
        succ.push(out);
    }
    let d = raw.iter().map(|rv| rv.priority).max().unwrap_or(0) + 1;
    let owner = raw.iter().map(|rv| rv.owner).collect();
    let priority = raw.iter().map(|rv| rv.priority).collect();
    let names = raw.into_iter().map(|rv| rv.name).collect();
    Ok(ParityGame::new(owner, priority, succ, d)?.with_names(names))
}

/// Canonical PGSolver text: header, vertices ascending, successors ascending.
pub fn write_pgsolver(g: &ParityGame) -> String {
    let mut out = format!("parity {};\n", g.n() - 1);
    for v in 0..g.n() {
        let succ: Vec<String> = g.successors(v).iter().map(|w| w.to_string()).collect();
        out.push_str(&format!("{} {} {} {}", v, g.priority(v), g.owner(v).index(), succ.join(",")));
        if let Some(name) = g.name(v) {
            let escaped = name.replace('\\', "\\\\").replace('"', "\\\"");
            out.push_str(&format!(" \"{escaped}\""));
        }
        out.push_str(";\n");
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_small_game() {
        let g = parse_pgsolver(b"parity 1;\n0 2 0 1;\n1 1 1 1,0;").unwrap();
        assert_eq!(g.n(), 2);
        assert_eq!(g.priorities(), &[2, 1]);
        assert_eq!(g.owners(), &[Player::Even, Player::Odd]);
        assert_eq!(g.successors(0), &[1]);
        assert_eq!(g.successors(1), &[0, 1]);
        assert_eq!(g.m(), 3);
    }

    #[test]
    fn minimal_game_without_header() {
        let g = parse_pgsolver(b"0 0 0 0;").unwrap();
        assert_eq!(g.n(), 1);
        assert_eq!(g.successors(0), &[0]);
        assert_eq!(g.d(), 1);
    }

    #[test]
    fn ids_are_compacted_in_declaration_order() {
        let g = parse_pgsolver(b"7 1 1 3;\n3 0 0 7,3 \"x\";").unwrap();
        assert_eq!(g.successors(0), &[1]);
        assert_eq!(g.successors(1), &[0, 1]);
        assert_eq!(g.name(1), Some("x"));
    }

    #[test]
    fn writer_is_canonical() {
        let g = parse_pgsolver(b"0 2 0 1,0;\n1 1 1 0 \"a\\\"b\";").unwrap();
        let text = write_pgsolver(&g);
        assert_eq!(text, "parity 1;\n0 2 0 0,1;\n1 1 1 0 \"a\\\"b\";\n");
        assert_eq!(parse_pgsolver(text.as_bytes()).unwrap(), g);
    }

    #[test]
    fn error_classes() {
        assert!(matches!(parse_pgsolver(b"0 0 0 0\n"), Err(GameError::Syntax { .. })));
        assert!(matches!(parse_pgsolver(b"0 0 0 0;\n0 1 1 0;"), Err(GameError::DuplicateId { id: 0, line: 2 })));
        assert!(matches!(parse_pgsolver(b"0 0 0 5;"), Err(GameError::DanglingSuccessor { from: 0, to: 5 })));
        assert!(matches!(parse_pgsolver(b"0 0 0;"), Err(GameError::NoSuccessors { id: 0, .. })));
        assert!(matches!(parse_pgsolver(b"0 -1 0 0;"), Err(GameError::NegativePriority { .. })));
    }

    #[test]
    fn syntax_error_position() {
        match parse_pgsolver(b"0 0 0 0;\n1 1 2 0;") {
            Err(GameError::Syntax { line, col, .. }) => assert_eq!((line, col), (2, 5)),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn random_game_contract() {
        let g = random_game(1, 1, 0.5, 3);
        assert_eq!(g.successors(0), &[0]);
        assert_eq!(g.priority(0), 0);
        assert_eq!(random_game(6, 4, 0.3, 11), random_game(6, 4, 0.3, 11));
        for seed in 0..1000 {
            let g = random_game(1 + (seed % 8) as usize, 3, 0.2, seed);
            assert!((0..g.n()).all(|v| !g.successors(v).is_empty()));
        }
    }

    #[test]
    fn player_opponent_involution() {
        for p in [Player::Even, Player::Odd] {
            assert_eq!(p.opponent().opponent(), p);
            assert_ne!(p.opponent(), p);
        }
    }
}
