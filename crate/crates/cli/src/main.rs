//! `pgsym`: solve PGSolver games, generate random corpora and run counter sweeps.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use pgsym::report::{run, winners_text, Algo, RunConfig, RunError, RunReport};
use pgsym::symset::bdd::id_bits;
use pgsym::{parse_pgsolver, random_game, write_pgsolver, BackendKind, DomainKind, SolveError};
use serde::Serialize;

const EXIT_PARSE: u8 = 2;
const EXIT_FLAGS: u8 = 3;
const EXIT_INVARIANT: u8 = 4;

#[derive(Parser)]
#[command(name = "pgsym", version, about = "Set-based symbolic parity game solver")]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Solve one game file.
    Solve(SolveArgs),
    /// Write seeded random games in PGSolver format.
    Generate(GenerateArgs),
    /// Solve every game of a corpus under every configuration and write a CSV.
    Bench(BenchArgs),
}

#[derive(Parser)]
struct SolveArgs {
    input: PathBuf,
    #[arg(long, default_value = "blackbox", value_parser = parse_algo)]
    algo: Algo,
    #[arg(long, default_value = "opm", value_parser = parse_domain)]
    domain: DomainKind,
    #[arg(long, default_value = "bitset", value_parser = parse_backend)]
    backend: BackendKind,
    #[arg(long)]
    assert_invariants: bool,
    /// JSON run report.
    #[arg(long)]
    report: Option<PathBuf>,
    /// Winning regions, one line per player.
    #[arg(long)]
    winners: Option<PathBuf>,
    /// Per-iteration JSONL trace of the symbolic solvers.
    #[arg(long)]
    trace: Option<PathBuf>,
}

#[derive(Parser)]
struct GenerateArgs {
    #[arg(long)]
    vertices: usize,
    #[arg(long)]
    priorities: u32,
    #[arg(long, default_value_t = 0.5)]
    edge_prob: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 1)]
    count: u64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Parser)]
struct BenchArgs {
    #[arg(long)]
    corpus: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "blackbox,compact", value_parser = parse_algo)]
    algos: Vec<Algo>,
    #[arg(long, value_delimiter = ',', default_value = "opm", value_parser = parse_domain)]
    domains: Vec<DomainKind>,
    #[arg(long, value_delimiter = ',', default_value = "bitset", value_parser = parse_backend)]
    backends: Vec<BackendKind>,
    #[arg(long)]
    out: PathBuf,
}

fn parse_algo(s: &str) -> Result<Algo, String> {
    Algo::parse(s).ok_or_else(|| format!("unknown algorithm `{s}`"))
}

fn parse_domain(s: &str) -> Result<DomainKind, String> {
    DomainKind::parse(s).ok_or_else(|| format!("unknown domain `{s}`"))
}

fn parse_backend(s: &str) -> Result<BackendKind, String> {
    BackendKind::parse(s).ok_or_else(|| format!("unknown backend `{s}`"))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.cmd {
        Cmd::Solve(a) => solve(a),
        Cmd::Generate(a) => generate(a).map(|_| ExitCode::SUCCESS),
        Cmd::Bench(a) => bench(a).map(|_| ExitCode::SUCCESS),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e:#}");
        ExitCode::FAILURE
    })
}

fn solve(a: SolveArgs) -> Result<ExitCode> {
    let cfg = RunConfig { algo: a.algo, domain: a.domain, backend: a.backend, assert_invariants: a.assert_invariants };
    if let Err(e) = cfg.validate() {
        eprintln!("error: {e}");
        return Ok(ExitCode::from(EXIT_FLAGS));
    }
    let text = fs::read(&a.input).with_context(|| format!("reading {}", a.input.display()))?;
    let g = match parse_pgsolver(&text) {
        Ok(g) => g,
        Err(e) => {
            eprintln!("error: {}: {e}", a.input.display());
            return Ok(ExitCode::from(EXIT_PARSE));
        }
    };
    let name = a.input.file_name().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    let out = match run(&g, &name, &cfg, None) {
        Ok(out) => out,
        Err(RunError::Solve(SolveError::Invariant(msg))) => {
            eprintln!("error: invariant violated: {msg}");
            return Ok(ExitCode::from(EXIT_INVARIANT));
        }
        Err(e) => return Err(e.into()),
    };
    let winners = winners_text(&out.regions);
    match &a.winners {
        Some(p) => fs::write(p, &winners).with_context(|| format!("writing {}", p.display()))?,
        None => print!("{winners}"),
    }
    if let Some(p) = &a.report {
        let json = serde_json::to_string_pretty(&out.report)?;
        fs::write(p, json + "\n").with_context(|| format!("writing {}", p.display()))?;
    }
    if let Some(p) = &a.trace {
        let body = out.solution.as_ref().map(|s| s.trace_jsonl()).unwrap_or_default();
        fs::write(p, body).with_context(|| format!("writing {}", p.display()))?;
    }
    Ok(ExitCode::SUCCESS)
}

fn generate(a: GenerateArgs) -> Result<()> {
    anyhow::ensure!(a.vertices >= 1 && a.priorities >= 1, "need at least one vertex and one priority");
    anyhow::ensure!(a.edge_prob > 0.0 && a.edge_prob <= 1.0, "edge probability must lie in (0, 1]");
    fs::create_dir_all(&a.out).with_context(|| format!("creating {}", a.out.display()))?;
    for i in 0..a.count {
        let g = random_game(a.vertices, a.priorities, a.edge_prob, a.seed.wrapping_add(i));
        let path = a.out.join(format!("{}_{i}.gm", a.seed));
        fs::write(&path, write_pgsolver(&g)).with_context(|| format!("writing {}", path.display()))?;
    }
    Ok(())
}

/// One CSV line. Summary lines carry ratios in the counter columns.
#[derive(Serialize, Default)]
struct Row {
    game: String,
    n: String,
    m: String,
    d: String,
    algo: String,
    domain: String,
    backend: String,
    w_size_estimate: String,
    pre_ops: String,
    basic_ops: String,
    live_sets_max: String,
    w_even_size: String,
    wall_ms: String,
    status: String,
    seed: String,
}

impl Row {
    fn from_report(r: &RunReport) -> Row {
        Row {
            game: r.game.clone(),
            n: r.n.to_string(),
            m: r.m.to_string(),
            d: r.d.to_string(),
            algo: r.algo.clone(),
            domain: r.domain.clone(),
            backend: r.backend.clone(),
            w_size_estimate: r.w_size_estimate.clone(),
            pre_ops: r.counters.pre_ops.to_string(),
            basic_ops: r.counters.basic_ops().to_string(),
            live_sets_max: r.counters.live_sets_max.to_string(),
            w_even_size: r.w_even_size.to_string(),
            wall_ms: format!("{:.3}", r.wall_ms),
            status: "ok".into(),
            seed: r.seed.map(|s| s.to_string()).unwrap_or_default(),
        }
    }
}

/// Seed encoded in a generated file name `<seed>_<i>.gm`.
fn seed_of(path: &Path) -> Option<u64> {
    let stem = path.file_stem()?.to_str()?;
    let (seed, i) = stem.split_once('_')?;
    Some(seed.parse::<u64>().ok()?.wrapping_add(i.parse().ok()?))
}

#[derive(Default)]
struct Ratios {
    pre: f64,
    space: f64,
}

fn bench(a: BenchArgs) -> Result<()> {
    let mut files: Vec<PathBuf> = fs::read_dir(&a.corpus)
        .with_context(|| format!("reading {}", a.corpus.display()))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.extension().is_some_and(|x| x == "gm"))
        .collect();
    files.sort();
    let mut configs = Vec::new();
    for &algo in &a.algos {
        for &domain in &a.domains {
            let backends = if algo.is_symbolic() { a.backends.clone() } else { vec![BackendKind::Bitset] };
            for backend in backends {
                let cfg = RunConfig { algo, domain, backend, assert_invariants: false };
                if cfg.validate().is_ok() {
                    configs.push(cfg);
                }
            }
        }
    }
    let mut w = csv::Writer::from_path(&a.out).with_context(|| format!("writing {}", a.out.display()))?;
    let (mut blackbox, mut compact) = (Ratios::default(), Ratios::default());
    for path in &files {
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        let seed = seed_of(path);
        let g = match fs::read(path).map_err(|e| e.to_string()).and_then(|t| parse_pgsolver(&t).map_err(|e| e.to_string())) {
            Ok(g) => g,
            Err(e) => {
                w.serialize(Row { game: name, status: format!("parse error: {e}"), ..Row::default() })?;
                continue;
            }
        };
        for cfg in &configs {
            match run(&g, &name, cfg, seed) {
                Ok(out) => {
                    let r = &out.report;
                    let n = r.n as f64;
                    let wsize: f64 = r.w_size_estimate.parse().unwrap_or(f64::INFINITY);
                    let live = r.counters.live_sets_max as f64;
                    let pre = r.counters.pre_ops as f64 / (n * wsize);
                    match cfg.algo {
                        Algo::Blackbox => {
                            blackbox.pre = blackbox.pre.max(pre);
                            blackbox.space = blackbox.space.max(live / n);
                        }
                        Algo::Compact => {
                            compact.pre = compact.pre.max(pre);
                            let logn = id_bits(r.n).max(1) as f64;
                            compact.space = compact.space.max(live / (r.d as f64 * logn));
                        }
                        _ => {}
                    }
                    w.serialize(Row::from_report(r))?;
                }
                Err(e) => w.serialize(Row {
                    game: name.clone(),
                    algo: cfg.algo.name().into(),
                    domain: cfg.domain.name().into(),
                    backend: cfg.backend.name().into(),
                    status: format!("error: {e}"),
                    seed: seed.map(|s| s.to_string()).unwrap_or_default(),
                    ..Row::default()
                })?,
            }
        }
    }
    if !files.is_empty() {
        for (algo, r) in [(Algo::Blackbox, &blackbox), (Algo::Compact, &compact)] {
            if a.algos.contains(&algo) {
                w.serialize(Row {
                    game: "summary".into(),
                    algo: algo.name().into(),
                    pre_ops: format!("{:.6}", r.pre),
                    live_sets_max: format!("{:.6}", r.space),
                    status: "summary".into(),
                    ..Row::default()
                })?;
            }
        }
    }
    if files.is_empty() {
        // Header only.
        w.write_record([
            "game", "n", "m", "d", "algo", "domain", "backend", "w_size_estimate", "pre_ops", "basic_ops",
            "live_sets_max", "w_even_size", "wall_ms", "status", "seed",
        ])?;
    }
    w.flush()?;
    Ok(())
}
