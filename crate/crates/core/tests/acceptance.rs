//! Acceptance gate. Runs every criterion, prints one line per criterion and
//! exits non-zero if any fails.

use std::cmp::Ordering;
use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use pgsym::compact::CoordinateStore;
use pgsym::oracle::{is_fixpoint, naive_fixpoint, regions_of_ranking};
use pgsym::rank::opm_symbol_compare;
use pgsym::*;

type Outcome = Result<String, String>;
type Criterion<'a> = (&'a str, Box<dyn Fn() -> Outcome + 'a>);

fn ensure(ok: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if ok {
        Ok(())
    } else {
        Err(msg())
    }
}

fn log2_ceil(n: usize) -> u32 {
    pgsym::symset::bdd::id_bits(n)
}

/// Parameters of the i-th oracle game: n in 1..=8, d in 1..=6, p in {0.2, 0.5, 0.9}.
fn small_game(i: u64) -> ParityGame {
    let n = 1 + (i % 8) as usize;
    let d = 1 + ((i / 8) % 6) as u32;
    let p = [0.2, 0.5, 0.9][((i / 48) % 3) as usize];
    random_game(n, d, p, 0x5eed_0000 + i)
}

fn oracle_equivalence() -> Outcome {
    let games = 10_000u64;
    for i in 0..games {
        let g = small_game(i);
        let z = zielonka(&g);
        let spm = Spm::for_game(&g);
        let opm = Opm::for_game(&g);
        let opts = SolveOptions::default();
        let results = [
            ("blackbox spm", solve_blackbox(&BitsetBackend::new(&g), &spm, &opts).map(|s| s.regions)),
            ("blackbox opm", solve_blackbox(&BitsetBackend::new(&g), &opm, &opts).map(|s| s.regions)),
            ("compact opm", solve_compact(&BitsetBackend::new(&g), &opm, &opts).map(|s| s.regions)),
        ];
        for (name, r) in results {
            let r = r.map_err(|e| format!("game {i}: {name}: {e}"))?;
            ensure(r == z, || format!("game {i}: {name} disagrees with zielonka"))?;
        }
        let naive_spm = naive_fixpoint(&g, &spm).map_err(|e| e.to_string())?;
        let naive_opm = naive_fixpoint(&g, &opm).map_err(|e| e.to_string())?;
        ensure(regions_of_ranking(&spm, &naive_spm) == z, || format!("game {i}: naive spm disagrees"))?;
        ensure(regions_of_ranking(&opm, &naive_opm) == z, || format!("game {i}: naive opm disagrees"))?;
    }
    Ok(format!("{games} games, 6 solvers agree"))
}

fn invariant_suite() -> Outcome {
    let games = 1000u64;
    let mut runs = 0;
    for i in 0..games {
        let n = 1 + (i % 6) as usize;
        let g = random_game(n, 1 + ((i / 6) % 6) as u32, [0.2, 0.5, 0.9][(i % 3) as usize], 0xa55e_0000 + i);
        let spm: AnyDomain = DomainKind::Spm.build(&g);
        let opm: AnyDomain = DomainKind::Opm.build(&g);
        for (dom, compact) in [(&spm, false), (&opm, false), (&opm, true)] {
            let reference = naive_fixpoint(&g, dom).map_err(|e| e.to_string())?;
            let opts = SolveOptions { assert_invariants: true, reference: Some(reference), trace: false };
            let b = BitsetBackend::new(&g);
            let sol = if compact { solve_compact(&b, dom, &opts) } else { solve_blackbox(&b, dom, &opts) }
                .map_err(|e| format!("game {i} {} compact={compact}: {e}", dom.name()))?;
            ensure(is_fixpoint(&g, dom, &sol.ranking), || format!("game {i}: final sweep changed a rank"))?;
            runs += 1;
        }
    }
    Ok(format!("{runs} asserted runs, 0 violations"))
}

/// Benchmark corpus shared by the bound criteria.
fn bench_games() -> Vec<ParityGame> {
    let mut out = Vec::new();
    for i in 0..400u64 {
        let n = 2 + (i % 23) as usize;
        let d = 1 + ((i / 23) % 8) as u32;
        let p = [0.05, 0.15, 0.4][(i % 3) as usize];
        out.push(random_game(n, d, p, 0xbe9c_0000 + i));
    }
    out
}

struct BenchRow {
    label: String,
    n: u64,
    d: u64,
    k: u64,
    w: f64,
    counters: OpCounters,
    compact: bool,
}

fn bench_rows() -> Result<Vec<BenchRow>, String> {
    let mut rows = Vec::new();
    for (i, g) in bench_games().iter().enumerate() {
        let opm = Opm::for_game(g);
        let spm = Spm::for_game(g);
        let mut doms: Vec<(&dyn RankDomain, bool)> = vec![(&opm, false), (&opm, true)];
        if spm.size_estimate() <= 50_000 {
            doms.push((&spm, false));
        }
        for (dom, compact) in doms {
            let b = BitsetBackend::new(g);
            let opts = SolveOptions::default();
            let sol = if compact { solve_compact(&b, dom, &opts) } else { solve_blackbox(&b, dom, &opts) }
                .map_err(|e| format!("bench game {i}: {e}"))?;
            rows.push(BenchRow {
                label: format!("bench game {i} ({}, {})", dom.name(), if compact { "compact" } else { "blackbox" }),
                n: g.n() as u64,
                d: g.d() as u64,
                k: opm.width() as u64,
                w: dom.size_estimate() as f64,
                counters: sol.counters,
                compact,
            });
        }
    }
    Ok(rows)
}

fn operation_bounds(rows: &[BenchRow]) -> Outcome {
    let mut worst: f64 = 0.0;
    for r in rows {
        let (n, d) = (r.n as f64, r.d as f64);
        let c = &r.counters;
        ensure(c.pre_ops as f64 <= 2.0 * (n * r.w + 1.0), || format!("{}: pre_ops {}", r.label, c.pre_ops))?;
        let bound = if r.compact {
            16.0 * d * d * n * r.w * log2_ceil(r.n as usize) as f64
        } else {
            16.0 * d * n * r.w
        };
        ensure(c.basic_ops() as f64 <= bound, || format!("{}: basic_ops {} > {bound}", r.label, c.basic_ops()))?;
        worst = worst.max(c.basic_ops() as f64 / bound);
    }
    Ok(format!("{} runs, worst basic_ops/bound {worst:.3}", rows.len()))
}

fn space_bounds(rows: &[BenchRow]) -> Outcome {
    for r in rows {
        let bound = if r.compact { r.k * (r.d + 1) + 7 } else { r.n + 8 };
        let live = r.counters.live_sets_max;
        ensure(live <= bound, || format!("{}: live_sets_max {live} > {bound}", r.label))?;
    }
    Ok(format!("{} runs", rows.len()))
}

fn encoding_fixture() -> Outcome {
    let dom = Opm::new(8, 5);
    let texts = ["65433", "75422", "___32"];
    let rho: Vec<Rank> = texts.iter().map(|t| dom.parse_rank(t).expect("fixture rank")).collect();
    let g = random_game(3, 8, 0.5, 1);
    let b = BitsetBackend::new(&g);
    let store = CoordinateStore::from_ranking(&b, &dom.alphabet_sizes(), &rho);
    let cell = |pos: usize, sym: Option<u32>| b.members(store.cell(pos - 1, dom.index_of(sym)));
    let listed: [(usize, Option<u32>, &[usize]); 12] = [
        (1, None, &[2]),
        (1, Some(6), &[0]),
        (1, Some(7), &[1]),
        (2, None, &[2]),
        (2, Some(5), &[0, 1]),
        (3, None, &[2]),
        (3, Some(4), &[0, 1]),
        (4, Some(2), &[1]),
        (4, Some(3), &[0, 2]),
        (5, Some(3), &[0]),
        (5, Some(2), &[1, 2]),
        (5, None, &[]),
    ];
    for (pos, sym, want) in listed {
        let got = cell(pos, sym);
        ensure(got == want, || format!("C^{pos}_{sym:?} = {got:?}, expected {want:?}"))?;
    }
    let nonempty: usize = store.dump(&b).iter().flatten().filter(|c| !c.is_empty()).count();
    ensure(nonempty == 11, || format!("{nonempty} nonempty sets, expected 11"))?;
    for r in &rho {
        let exact: Vec<usize> = (0..3).filter(|&v| rho[v] == *r).collect();
        let above: Vec<usize> = (0..3).filter(|&v| rho[v] >= *r).collect();
        let (s_r, s_ge) = store.get_set_by_prefix(&b, r);
        ensure(b.members(&s_r) == exact, || format!("S_r for {}", dom.render(r)))?;
        ensure(b.members(&s_ge) == above, || format!("S_>=r for {}", dom.render(r)))?;
        ensure(b.members(&store.get_set(&b, r)) == above, || format!("getSet for {}", dom.render(r)))?;
    }
    Ok("memberships and reconstructions match".into())
}

fn domain_laws() -> Outcome {
    let start = Instant::now();
    for d in 1..=4u32 {
        for k in 1..=3usize {
            let dom = Opm::new(d, k);
            let mut all: Vec<Rank> = Vec::new();
            let total = (d + 1).pow(k as u32);
            for code in 0..total {
                let mut t = Vec::with_capacity(k);
                let mut x = code;
                for _ in 0..k {
                    t.push(x % (d + 1));
                    x /= d + 1;
                }
                t.reverse();
                all.push(Rank::Tuple(t));
            }
            all.push(Rank::Top);
            check_order_and_lift(&dom, &all, d)?;
            let syms = dom.symbols();
            for a in &all[..all.len() - 1] {
                for b in &all[..all.len() - 1] {
                    let by_symbols = a
                        .coords()
                        .unwrap()
                        .iter()
                        .zip(b.coords().unwrap())
                        .map(|(&x, &y)| opm_symbol_compare(syms[x as usize], syms[y as usize]))
                        .find(|o| *o != Ordering::Equal)
                        .unwrap_or(Ordering::Equal);
                    ensure(dom.compare(a, b) == by_symbols, || format!("opm d={d} k={k}: order of {a:?} {b:?}"))?;
                }
            }
        }
    }
    for n1 in 0..=2u32 {
        for n3 in 0..=2u32 {
            let dom = Spm::new(vec![(1, n1), (3, n3)]);
            let mut all = Vec::new();
            for a in 0..=n3 {
                for b in 0..=n1 {
                    all.push(Rank::Tuple(vec![a, b]));
                }
            }
            all.push(Rank::Top);
            check_order_and_lift(&dom, &all, 4)?;
        }
    }
    let dom = Opm::new(5, 1);
    let mut chain = dom.symbols().to_vec();
    chain.sort_by(|a, b| opm_symbol_compare(*a, *b));
    let want = [None, Some(3), Some(1), Some(0), Some(2), Some(4)];
    ensure(chain == want, || format!("d=5 symbol chain {chain:?}"))?;
    let secs = start.elapsed().as_secs_f64();
    ensure(secs < 10.0, || format!("took {secs:.1}s"))?;
    Ok(format!("exhaustive, {secs:.2}s"))
}

/// `all` is listed in ascending domain order with `⊤` last.
fn check_order_and_lift<D: RankDomain>(dom: &D, all: &[Rank], d: u32) -> Result<(), String> {
    for (i, a) in all.iter().enumerate() {
        for (j, b) in all.iter().enumerate() {
            ensure(dom.compare(a, b) == i.cmp(&j), || format!("{}: order of {a:?} {b:?}", dom.name()))?;
        }
    }
    ensure(dom.compare(&dom.min(), &all[0]) == Ordering::Equal, || "min is not least".into())?;
    for c in 0..d {
        ensure(dom.lift(&Rank::Top, c) == Rank::Top, || "lift of top".into())?;
        let lifted: Vec<Rank> = all.iter().map(|r| dom.lift(r, c)).collect();
        ensure(lifted.windows(2).all(|w| w[0] <= w[1]), || format!("{}: lift not monotone at c={c}", dom.name()))?;
    }
    Ok(())
}

fn backend_equivalence() -> Outcome {
    let games = 1000u64;
    let mut calls = 0;
    for i in 0..games {
        let n = 1 + (i % 32) as usize;
        let g = random_game(n, 1 + ((i / 32) % 6) as u32, [0.1, 0.3, 0.6][(i % 3) as usize], 0xb0b0_0000 + i);
        let opm = Opm::for_game(&g);
        let spm = Spm::for_game(&g);
        let mut runs: Vec<(&dyn RankDomain, bool)> = vec![(&opm, false), (&opm, true)];
        if spm.size_estimate() <= 50_000 {
            runs.push((&spm, false));
        }
        for (dom, compact) in runs {
            let opts = SolveOptions { trace: true, ..Default::default() };
            let solve = |b: &dyn Fn() -> Result<Solution, SolveError>| b().map_err(|e| format!("game {i}: {e}"));
            let p = PairedBackend::new(&g);
            let x = BitsetBackend::new(&g);
            let y = BddBackend::new(&g);
            let (sp, sx, sy) = if compact {
                (
                    solve(&|| solve_compact(&p, dom, &opts))?,
                    solve(&|| solve_compact(&x, dom, &opts))?,
                    solve(&|| solve_compact(&y, dom, &opts))?,
                )
            } else {
                (
                    solve(&|| solve_blackbox(&p, dom, &opts))?,
                    solve(&|| solve_blackbox(&x, dom, &opts))?,
                    solve(&|| solve_blackbox(&y, dom, &opts))?,
                )
            };
            ensure(p.divergences() == 0, || format!("game {i}: {} diverging calls", p.divergences()))?;
            ensure(sx.regions == sy.regions && sx.regions == sp.regions, || format!("game {i}: winners differ"))?;
            ensure(sx.counters.pre_ops == sy.counters.pre_ops, || format!("game {i}: pre_ops differ"))?;
            ensure(sx.trace_jsonl() == sy.trace_jsonl(), || format!("game {i}: traces differ"))?;
            calls += p.calls();
        }
    }
    Ok(format!("{games} games, {calls} paired calls, 0 divergences"))
}

fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

fn sorted_files(dir: &Path) -> Vec<PathBuf> {
    let mut v: Vec<PathBuf> = fs::read_dir(dir).expect("fixture dir").map(|e| e.unwrap().path()).collect();
    v.sort();
    v
}

fn parser_conformance() -> Outcome {
    let valid = sorted_files(&fixtures().join("valid"));
    ensure(valid.len() >= 50, || format!("only {} valid fixtures", valid.len()))?;
    let (mut header, mut bare, mut named, mut unnamed, mut multi) = (0, 0, 0, 0, 0);
    for path in &valid {
        let raw = fs::read(path).unwrap();
        let g = parse_pgsolver(&raw).map_err(|e| format!("{}: {e}", path.display()))?;
        let once = write_pgsolver(&g);
        let h = parse_pgsolver(once.as_bytes()).map_err(|e| format!("{}: reparse: {e}", path.display()))?;
        ensure(write_pgsolver(&h) == once, || format!("{}: not a fixpoint", path.display()))?;
        ensure(g.n() == h.n() && g.m() == h.m(), || format!("{}: shape changed", path.display()))?;
        let text = String::from_utf8_lossy(&raw);
        if text.trim_start().starts_with("parity") {
            header += 1;
        } else {
            bare += 1;
        }
        if (0..g.n()).any(|v| g.name(v).is_some()) {
            named += 1;
        } else {
            unnamed += 1;
        }
        if (0..g.n()).any(|v| g.successors(v).len() > 1) {
            multi += 1;
        }
    }
    ensure(header > 0 && bare > 0 && named > 0 && unnamed > 0 && multi > 0, || "corpus lacks a case".into())?;
    let mut classes = [0usize; 5];
    for path in sorted_files(&fixtures().join("invalid")) {
        let stem = path.file_stem().unwrap().to_string_lossy().to_string();
        let err = match parse_pgsolver(&fs::read(&path).unwrap()) {
            Ok(_) => return Err(format!("{stem}: accepted")),
            Err(e) => e,
        };
        let (slot, ok) = match &err {
            GameError::Syntax { .. } => (0, stem.starts_with("syntax")),
            GameError::DuplicateId { .. } => (1, stem.starts_with("duplicate")),
            GameError::DanglingSuccessor { .. } => (2, stem.starts_with("dangling")),
            GameError::NoSuccessors { .. } => (3, stem.starts_with("no_successors")),
            GameError::NegativePriority { .. } => (4, stem.starts_with("negative")),
            other => return Err(format!("{stem}: unexpected {other}")),
        };
        ensure(ok, || format!("{stem}: wrong class {err}"))?;
        classes[slot] += 1;
    }
    ensure(classes.iter().all(|&c| c > 0), || format!("error classes covered {classes:?}"))?;
    Ok(format!("{} valid files round-trip, 5 error classes triggered", valid.len()))
}

fn main() -> ExitCode {
    let rows = bench_rows();
    let bench = |f: fn(&[BenchRow]) -> Outcome| match &rows {
        Ok(r) => f(r),
        Err(e) => Err(e.clone()),
    };
    let criteria: Vec<Criterion> = vec![
        ("oracle equivalence", Box::new(oracle_equivalence)),
        ("invariant suite", Box::new(invariant_suite)),
        ("operation bounds", Box::new(move || bench(operation_bounds))),
        ("space bounds", Box::new(move || bench(space_bounds))),
        ("encoding fixture", Box::new(encoding_fixture)),
        ("domain laws", Box::new(domain_laws)),
        ("backend equivalence", Box::new(backend_equivalence)),
        ("parser conformance", Box::new(parser_conformance)),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let outcome = run();
        let secs = start.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("criterion {} {name}: PASS ({detail}; {secs:.1}s)", i + 1),
            Err(detail) => {
                failed += 1;
                println!("criterion {} {name}: FAIL ({detail})", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
