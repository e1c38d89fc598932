//! The `nilgrowth` command-line interface.
//!
//! Subcommands map one-to-one onto the library: `criterion`, `ball`,
//! `growth`, `geodesic-growth`, `eval`, `norm`, `family`, `by-bound`,
//! `norm-gap`, `alpha`, `delta`. Exit codes: 0 success, 2 usage error,
//! 3 domain error, 4 resource error. All numeric output is exact; rationals
//! print as `p` or `p/q`, never as floats.

use crate::criterion::{classify, report_json, CriterionError, Verdict};
use crate::engine::{
    bfs_ball, by_bound_sweep, family_words, geodesic_counts, load_table, norm_gap_check,
    save_table, verify_family, BfsOptions, EngineError, NormTable,
};
use crate::engine::growth::{brute_force_gamma, growth_report};
use crate::group::{lookup, GroupDescriptor};
use crate::rat::{fmt_rat, parse_rat, Rational};
use crate::word::{evaluate, parse_word, GenSet};
use clap::{Parser, Subcommand};
use num_traits::Signed;
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};

const WORD_GRAMMAR: &str = "WORD GRAMMAR:
  Letter names separated by whitespace or '*', each optionally followed by
  '^' and a nonzero integer. '^-1' (and any negative exponent) refers to the
  letter of the generating set whose element is the inverse; it must exist.
  Examples: \"a^3 t a^-2\", \"x*y*c\", \"t^-2\".

GROUPS:
  Z1, Z2, H3, Engel, vZ, vH, vE, G2rot. Generating sets are built in:
  Z1 {a,a^-1}; Z2 {x,x^-1,y,y^-1}; H3/Engel {a,a^-1,b,b^-1};
  vZ/vH/vE {a,a^-1,t}; G2rot {x,y,c,r} with c = (xy)^-1.

CONFIG:
  Flat key=value file (default ./nilgrowth.conf): cache_dir, threads,
  memory_budget. NILGROWTH_CACHE overrides cache_dir.";

#[derive(Parser)]
#[command(
    name = "nilgrowth",
    about = "Exact computations in virtually nilpotent groups: growth classification, norm tables, geodesic counting",
    after_help = WORD_GRAMMAR
)]
struct Cli {
    /// Configuration file (key=value lines).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Skip the norm-table cache.
    #[arg(long, global = true)]
    no_cache: bool,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Classify geodesic growth by the facet-incidence criterion.
    Criterion {
        group: String,
        /// Also write the machine-readable report here.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Ball layer sizes as CSV (n, beta_layer, beta_cum).
    Ball {
        group: String,
        #[arg(long)]
        radius: u32,
        /// Save the norm table to this file.
        #[arg(long)]
        save: Option<PathBuf>,
        #[arg(long)]
        threads: Option<usize>,
    },
    /// Volume and geodesic growth as CSV (n, beta, gamma, beta/n^d).
    Growth {
        group: String,
        #[arg(long)]
        radius: u32,
    },
    /// Geodesic growth as CSV (n, gamma), optionally brute-force checked.
    GeodesicGrowth {
        group: String,
        #[arg(long)]
        radius: u32,
        /// Cross-check gamma(0..=M) against full word enumeration.
        #[arg(long)]
        brute_check: Option<u32>,
    },
    /// Evaluate a word to exact element coordinates.
    Eval { group: String, word: String },
    /// Word norm of a word's element, via a BFS table of the given radius.
    Norm {
        group: String,
        word: String,
        #[arg(long)]
        radius: u32,
    },
    /// Enumerate (and optionally verify) the alternating geodesic family in vE.
    Family {
        #[arg(long)]
        n: u64,
        #[arg(long = "K")]
        k: u64,
        /// Balance window exponent as an exact rational, e.g. 1/2.
        #[arg(long)]
        eps: String,
        /// Check every word against a BFS table of radius n + K.
        #[arg(long)]
        verify: bool,
    },
    /// Exhaustive barycenter-inequality sweep over balanced positive words.
    ByBound {
        #[arg(long)]
        n: u64,
    },
    /// Norm of the horizontal Engel element (n,0,0,0) and its gap above n.
    NormGap {
        #[arg(long)]
        n: u64,
        #[arg(long)]
        radius: u32,
    },
    /// The sub-exponential growth exponent alpha_s, exact.
    Alpha {
        #[arg(long)]
        s: u32,
    },
    /// The volume-growth error exponent delta_s, exact.
    Delta {
        #[arg(long)]
        s: u32,
    },
}

/// CLI configuration, merged from defaults, file, and environment.
#[derive(Debug, Clone)]
pub struct Config {
    pub cache_dir: PathBuf,
    pub threads: usize,
    pub memory_budget: usize,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            cache_dir: PathBuf::from(".nilgrowth-cache"),
            threads: 1,
            memory_budget: 10_000_000,
        }
    }
}

impl Config {
    pub fn load(explicit: Option<&Path>) -> Result<Config, CliError> {
        let mut cfg = Config::default();
        let path = match explicit {
            Some(p) => Some(p.to_path_buf()),
            None => {
                let default = PathBuf::from("nilgrowth.conf");
                default.exists().then_some(default)
            }
        };
        if let Some(path) = path {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::usage(format!("cannot read config {path:?}: {e}")))?;
            for (lineno, line) in text.lines().enumerate() {
                let line = line.trim();
                if line.is_empty() || line.starts_with('#') {
                    continue;
                }
                let Some((key, value)) = line.split_once('=') else {
                    return Err(CliError::usage(format!(
                        "config line {} is not key=value",
                        lineno + 1
                    )));
                };
                let (key, value) = (key.trim(), value.trim());
                match key {
                    "cache_dir" => cfg.cache_dir = PathBuf::from(value),
                    "threads" => {
                        cfg.threads = value.parse().map_err(|_| {
                            CliError::usage(format!("bad threads value `{value}`"))
                        })?;
                    }
                    "memory_budget" => {
                        cfg.memory_budget = value.parse().map_err(|_| {
                            CliError::usage(format!("bad memory_budget value `{value}`"))
                        })?;
                    }
                    other => {
                        return Err(CliError::usage(format!("unknown config key `{other}`")))
                    }
                }
            }
        }
        if let Ok(dir) = std::env::var("NILGROWTH_CACHE") {
            if !dir.is_empty() {
                cfg.cache_dir = PathBuf::from(dir);
            }
        }
        if cfg.threads == 0 || cfg.memory_budget == 0 {
            return Err(CliError::usage(
                "threads and memory_budget must be positive".into(),
            ));
        }
        Ok(cfg)
    }
}

/// Error with an exit-code class.
#[derive(Debug)]
pub struct CliError {
    pub kind: &'static str,
    pub message: String,
    pub exit_code: i32,
}

impl CliError {
    fn usage(message: String) -> CliError {
        CliError {
            kind: "usage",
            message,
            exit_code: 2,
        }
    }

    fn domain(kind: &'static str, message: String) -> CliError {
        CliError {
            kind,
            message,
            exit_code: 3,
        }
    }

    fn resource(kind: &'static str, message: String) -> CliError {
        CliError {
            kind,
            message,
            exit_code: 4,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.kind, self.message)
    }
}

impl From<EngineError> for CliError {
    fn from(e: EngineError) -> CliError {
        match &e {
            EngineError::MemoryBudgetExceeded { .. } => {
                CliError::resource("memory-budget", e.to_string())
            }
            EngineError::Io(_) => CliError::resource("io", e.to_string()),
            EngineError::OutOfRadius { .. } => CliError::domain("out-of-radius", e.to_string()),
            EngineError::InvalidParams(_) => CliError::usage(e.to_string()),
            EngineError::FormatVersionMismatch { .. } => {
                CliError::domain("format-version", e.to_string())
            }
            EngineError::FingerprintMismatch => CliError::domain("fingerprint", e.to_string()),
            EngineError::CorruptFile(_) => CliError::domain("corrupt-file", e.to_string()),
            EngineError::Group(_) => CliError::domain("group", e.to_string()),
        }
    }
}

impl From<CriterionError> for CliError {
    fn from(e: CriterionError) -> CliError {
        CliError::domain("criterion", e.to_string())
    }
}

impl From<crate::word::WordError> for CliError {
    fn from(e: crate::word::WordError) -> CliError {
        CliError::usage(e.to_string())
    }
}

impl From<crate::group::GroupError> for CliError {
    fn from(e: crate::group::GroupError) -> CliError {
        CliError::domain("group", e.to_string())
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> CliError {
        CliError::resource("io", e.to_string())
    }
}

/// Run against real stdout/stderr.
pub fn run(args: impl IntoIterator<Item = String>) -> i32 {
    let (out, err) = (std::io::stdout(), std::io::stderr());
    run_with(args, &mut out.lock(), &mut err.lock())
}

/// Run with captured output; returns the exit code.
pub fn run_with(
    args: impl IntoIterator<Item = String>,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes.
            if e.use_stderr() {
                let _ = write!(err, "{e}");
                return 2;
            }
            let _ = write!(out, "{e}");
            return 0;
        }
    };
    let json_sink = match &cli.cmd {
        Cmd::Criterion { json, .. } => json.clone(),
        _ => None,
    };
    match dispatch(cli, out) {
        Ok(()) => 0,
        Err(e) => {
            if json_sink.is_some() {
                let payload = serde_json::json!({
                    "error": { "kind": e.kind, "message": e.message }
                });
                let _ = writeln!(err, "{payload}");
            } else {
                let _ = writeln!(err, "error: {e}");
            }
            e.exit_code
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write) -> Result<(), CliError> {
    let cfg = Config::load(cli.config.as_deref())?;
    let use_cache = !cli.no_cache;
    match cli.cmd {
        Cmd::Criterion { group, json } => cmd_criterion(&group, json.as_deref(), out),
        Cmd::Ball {
            group,
            radius,
            save,
            threads,
        } => cmd_ball(&group, radius, save.as_deref(), threads, &cfg, use_cache, out),
        Cmd::Growth { group, radius } => cmd_growth(&group, radius, &cfg, use_cache, out),
        Cmd::GeodesicGrowth {
            group,
            radius,
            brute_check,
        } => cmd_geodesic_growth(&group, radius, brute_check, &cfg, use_cache, out),
        Cmd::Eval { group, word } => cmd_eval(&group, &word, out),
        Cmd::Norm {
            group,
            word,
            radius,
        } => cmd_norm(&group, &word, radius, &cfg, use_cache, out),
        Cmd::Family { n, k, eps, verify } => cmd_family(n, k, &eps, verify, &cfg, use_cache, out),
        Cmd::ByBound { n } => cmd_by_bound(n, out),
        Cmd::NormGap { n, radius } => cmd_norm_gap(n, radius, &cfg, use_cache, out),
        Cmd::Alpha { s } => {
            if s < 2 {
                return Err(CliError::usage("alpha requires s >= 2".into()));
            }
            writeln!(out, "{}", fmt_rat(&crate::criterion::alpha(s)))?;
            Ok(())
        }
        Cmd::Delta { s } => {
            if s < 1 {
                return Err(CliError::usage("delta requires s >= 1".into()));
            }
            writeln!(out, "{}", fmt_rat(&crate::criterion::delta(s)))?;
            Ok(())
        }
    }
}

fn group_by_name(name: &str) -> Result<&'static GroupDescriptor, CliError> {
    lookup(name).ok_or_else(|| {
        CliError::usage(format!(
            "unknown group `{name}` (known: Z1, Z2, H3, Engel, vZ, vH, vE, G2rot)"
        ))
    })
}

/// Fetch a norm table from the cache or build and cache it.
fn obtain_table(
    desc: &GroupDescriptor,
    gens: &GenSet,
    radius: u32,
    cfg: &Config,
    threads: usize,
    use_cache: bool,
) -> Result<NormTable, CliError> {
    let fp = crate::engine::bfs::fingerprint(desc, gens);
    if use_cache {
        // Any cached table with at least the requested radius serves.
        let mut best: Option<(u32, PathBuf)> = None;
        if let Ok(entries) = std::fs::read_dir(&cfg.cache_dir) {
            for entry in entries.flatten() {
                let name = entry.file_name();
                let Some(name) = name.to_str() else { continue };
                let prefix = format!("{}-{:016x}-r", desc.name(), fp);
                let Some(rest) = name.strip_prefix(&prefix) else {
                    continue;
                };
                let Some(r) = rest.strip_suffix(".nt").and_then(|r| r.parse::<u32>().ok())
                else {
                    continue;
                };
                if r >= radius && best.as_ref().is_none_or(|(b, _)| r < *b) {
                    best = Some((r, entry.path()));
                }
            }
        }
        if let Some((_, path)) = best {
            if let Ok(t) = load_table(&path, desc, gens) {
                return Ok(t.truncated(radius));
            }
            // An unreadable cache entry falls through to a rebuild.
        }
    }
    let table = bfs_ball(
        desc,
        gens,
        radius,
        &BfsOptions {
            max_elements: cfg.memory_budget,
            workers: threads,
        },
    )?;
    if use_cache {
        let _ = std::fs::create_dir_all(&cfg.cache_dir);
        let path = cfg
            .cache_dir
            .join(format!("{}-{:016x}-r{}.nt", desc.name(), fp, radius));
        let _ = save_table(&table, &path);
    }
    Ok(table)
}

fn cmd_criterion(group: &str, json: Option<&Path>, out: &mut dyn Write) -> Result<(), CliError> {
    let desc = group_by_name(group)?;
    let gens = GenSet::default_for(desc);
    let report = classify(desc, &gens)?;

    writeln!(out, "group: {}", report.group)?;
    writeln!(out, "simple cycles (A multiset):")?;
    for (i, c) in report.a.iter().enumerate() {
        writeln!(
            out,
            "  [{i}] {:<12} point {}  len {}",
            c.word.display(&gens),
            c.point,
            c.len
        )?;
    }
    if let Some(adim) = report.degenerate {
        writeln!(
            out,
            "polytope: degenerate (affine dimension {adim} < {}), no verdict",
            desc.ab_dim()
        )?;
        return Err(CliError::domain(
            "degenerate-polytope",
            format!("orbit spans affine dimension {adim} only"),
        ));
    }
    let p = report.polytope.as_ref().expect("non-degenerate");
    writeln!(
        out,
        "polytope P(S): {} vertices, {} facets",
        p.vertices().len(),
        p.facets().len()
    )?;
    for v in p.vertices() {
        writeln!(out, "  vertex {v}")?;
    }
    for (i, f) in p.facets().iter().enumerate() {
        let members: Vec<String> = report.incidence[i].iter().map(|j| j.to_string()).collect();
        writeln!(out, "  facet [{i}] {f}  A-members: [{}]", members.join(", "))?;
    }
    match report.verdict.as_ref().expect("non-degenerate") {
        Verdict::Exponential { witness, facet } => writeln!(
            out,
            "verdict: exponential (cycles [{}] \"{}\" and [{}] \"{}\" share facet [{}])",
            witness.0,
            report.a[witness.0].word.display(&gens),
            witness.1,
            report.a[witness.1].word.display(&gens),
            facet
        )?,
        Verdict::Polynomial { s } => writeln!(out, "verdict: polynomial (s = {s})")?,
        Verdict::SubExponential { s, alpha } => writeln!(
            out,
            "verdict: sub-exponential (s = {s}, alpha = {})",
            fmt_rat(alpha)
        )?,
    }
    if let Some(path) = json {
        let value = report_json(&report, &gens);
        std::fs::write(path, format!("{:#}\n", value))?;
        writeln!(out, "json report written to {}", path.display())?;
    }
    Ok(())
}

fn cmd_ball(
    group: &str,
    radius: u32,
    save: Option<&Path>,
    threads: Option<usize>,
    cfg: &Config,
    use_cache: bool,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let desc = group_by_name(group)?;
    let gens = GenSet::default_for(desc);
    let threads = threads.unwrap_or(cfg.threads);
    if threads == 0 {
        return Err(CliError::usage("--threads must be positive".into()));
    }
    let table = obtain_table(desc, &gens, radius, cfg, threads, use_cache)?;
    writeln!(out, "n,beta_layer,beta_cum")?;
    let sizes = table.layer_sizes();
    let balls = table.ball_sizes();
    for n in 0..sizes.len() {
        writeln!(out, "{n},{},{}", sizes[n], balls[n])?;
    }
    if let Some(path) = save {
        save_table(&table, path)?;
    }
    Ok(())
}

fn cmd_growth(
    group: &str,
    radius: u32,
    cfg: &Config,
    use_cache: bool,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let desc = group_by_name(group)?;
    let gens = GenSet::default_for(desc);
    let table = obtain_table(desc, &gens, radius, cfg, cfg.threads, use_cache)?;
    let report = growth_report(&table, desc, &gens)?;
    writeln!(out, "n,beta,gamma,beta_over_n_d")?;
    for n in 0..report.beta.len() {
        let ratio = match &report.ratios[n] {
            Some(r) => fmt_rat(r),
            None => "-".into(),
        };
        writeln!(out, "{n},{},{},{}", report.beta[n], report.gamma[n], ratio)?;
    }
    Ok(())
}

fn cmd_geodesic_growth(
    group: &str,
    radius: u32,
    brute_check: Option<u32>,
    cfg: &Config,
    use_cache: bool,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let desc = group_by_name(group)?;
    let gens = GenSet::default_for(desc);
    let table = obtain_table(desc, &gens, radius, cfg, cfg.threads, use_cache)?;
    let gamma = geodesic_counts(&table, desc, &gens)?;
    writeln!(out, "n,gamma")?;
    for (n, g) in gamma.iter().enumerate() {
        writeln!(out, "{n},{g}")?;
    }
    if let Some(m) = brute_check {
        if m > radius {
            return Err(CliError::domain(
                "out-of-radius",
                format!("--brute-check {m} exceeds radius {radius}"),
            ));
        }
        for n in 0..=m {
            let brute = brute_force_gamma(&table, desc, &gens, n)?;
            if brute != gamma[n as usize] {
                return Err(CliError::domain(
                    "brute-check",
                    format!(
                        "gamma({n}) mismatch: dp={} brute={brute}",
                        gamma[n as usize]
                    ),
                ));
            }
        }
        writeln!(out, "# brute-check 0..={m}: ok")?;
    }
    Ok(())
}

fn cmd_eval(group: &str, word: &str, out: &mut dyn Write) -> Result<(), CliError> {
    let desc = group_by_name(group)?;
    let gens = GenSet::default_for(desc);
    let w = parse_word(word, &gens)?;
    let g = evaluate(&w, &gens, desc)?;
    writeln!(out, "{}", desc.display_element(&g))?;
    Ok(())
}

fn cmd_norm(
    group: &str,
    word: &str,
    radius: u32,
    cfg: &Config,
    use_cache: bool,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let desc = group_by_name(group)?;
    let gens = GenSet::default_for(desc);
    let w = parse_word(word, &gens)?;
    let g = evaluate(&w, &gens, desc)?;
    let table = obtain_table(desc, &gens, radius, cfg, cfg.threads, use_cache)?;
    let Some(norm) = table.norm_of(desc, &g) else {
        return Err(CliError::domain(
            "out-of-radius",
            format!("the element's norm exceeds radius {radius}"),
        ));
    };
    let len = w.weighted_len(&gens);
    writeln!(out, "length: {len}")?;
    writeln!(out, "norm: {norm}")?;
    writeln!(out, "geodesic: {}", u64::from(norm) == len)?;
    Ok(())
}

fn parse_eps(text: &str) -> Result<Rational, CliError> {
    let eps =
        parse_rat(text).ok_or_else(|| CliError::usage(format!("bad rational `{text}`")))?;
    if eps.is_negative() {
        return Err(CliError::usage("eps must be nonnegative".into()));
    }
    Ok(eps)
}

fn cmd_family(
    n: u64,
    k: u64,
    eps: &str,
    verify: bool,
    cfg: &Config,
    use_cache: bool,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let eps = parse_eps(eps)?;
    let desc = group_by_name("vE")?;
    let gens = GenSet::default_for(desc);
    if !verify {
        let words = family_words(&gens, n, k, &eps)?;
        writeln!(out, "count: {}", words.len())?;
        for w in &words {
            writeln!(out, "{}", w.display(&gens))?;
        }
        return Ok(());
    }
    let radius = (n + k) as u32;
    let table = obtain_table(desc, &gens, radius, cfg, cfg.threads, use_cache)?;
    let report = verify_family(desc, &gens, &table, n, k, &eps)?;
    writeln!(out, "word,length,norm,geodesic,witness")?;
    for v in &report.verdicts {
        let witness = v
            .witness
            .as_ref()
            .map(|w| w.display(&gens))
            .unwrap_or_default();
        writeln!(
            out,
            "{},{},{},{},{witness}",
            v.word.display(&gens),
            v.length,
            v.norm,
            v.geodesic
        )?;
    }
    writeln!(
        out,
        "# {} words, all geodesic: {}",
        report.verdicts.len(),
        report.all_geodesic()
    )?;
    Ok(())
}

fn cmd_by_bound(n: u64, out: &mut dyn Write) -> Result<(), CliError> {
    let report = by_bound_sweep(n)?;
    let desc = group_by_name("Engel")?;
    let gens = GenSet::default_for(desc);
    writeln!(out, "n: {}", report.n)?;
    writeln!(out, "total words: {}", report.total_words)?;
    writeln!(out, "violations: {}", report.violations.len())?;
    for v in &report.violations {
        writeln!(
            out,
            "  VIOLATION {} (k={}, -B_y={}, slack={})",
            v.word.display(&gens),
            v.coarse_len,
            fmt_rat(&v.neg_moment),
            fmt_rat(&v.slack)
        )?;
    }
    writeln!(out, "min slack: {}", fmt_rat(&report.min_slack))?;
    writeln!(out, "tight words ({}):", report.minimizers.len())?;
    for m in &report.minimizers {
        writeln!(
            out,
            "  {} (k={}, -B_y={})",
            m.word.display(&gens),
            m.coarse_len,
            fmt_rat(&m.neg_moment)
        )?;
    }
    Ok(())
}

fn cmd_norm_gap(
    n: u64,
    radius: u32,
    cfg: &Config,
    use_cache: bool,
    out: &mut dyn Write,
) -> Result<(), CliError> {
    let desc = group_by_name("Engel")?;
    let gens = GenSet::default_for(desc);
    // The unreachable verdict needs no table; check first to keep the cheap
    // path cheap.
    let probe = crate::engel::EngelElement::from_ints(n as i64, 0, 0, 0);
    if !crate::engel::lattice_contains(&probe) {
        writeln!(
            out,
            "g_{n} = ({n},0,0,0) is not in the lattice (area/moment parity); no word represents it"
        )?;
        writeln!(out, "gap = infinite")?;
        return Ok(());
    }
    let table = obtain_table(desc, &gens, radius, cfg, cfg.threads, use_cache)?;
    let report = norm_gap_check(&table, n)?;
    match report.status {
        crate::engine::NormGapStatus::Norm { norm, gap } => {
            writeln!(out, "norm(g_{}) = {norm}", report.n)?;
            writeln!(out, "gap = {gap}")?;
        }
        crate::engine::NormGapStatus::Unreachable => unreachable!("checked above"),
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_cli(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let full: Vec<String> = std::iter::once("nilgrowth".to_string())
            .chain(args.iter().map(|s| s.to_string()))
            .collect();
        let code = run_with(full, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn alpha_and_delta_output() {
        let (code, out, _) = run_cli(&["alpha", "--s", "2"]);
        assert_eq!(code, 0);
        assert_eq!(out, "0\n");
        let (code, out, _) = run_cli(&["alpha", "--s", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out, "3/5\n");
        let (code, out, _) = run_cli(&["delta", "--s", "5"]);
        assert_eq!(code, 0);
        assert_eq!(out, "1/5\n");
    }

    #[test]
    fn usage_errors_exit_2() {
        let (code, _, _) = run_cli(&["alpha", "--s", "1"]);
        assert_eq!(code, 2);
        let (code, _, err) = run_cli(&["criterion", "Zmystery"]);
        assert_eq!(code, 2);
        assert!(err.contains("unknown group"));
        let (code, _, _) = run_cli(&["definitely-not-a-subcommand"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn eval_engel_word() {
        let (code, out, _) = run_cli(&["eval", "Engel", "a b"]);
        assert_eq!(code, 0);
        assert_eq!(out, "x=2 y=0 area=-1 moment=-1/3\n");
        let (code, out, _) = run_cli(&["eval", "vE", "t a t"]);
        assert_eq!(code, 0);
        assert_eq!(out, "x=-1 y=1 area=0 moment=0 coset=e\n");
    }

    #[test]
    fn eval_bad_word_is_usage_error() {
        let (code, _, err) = run_cli(&["eval", "Engel", "q"]);
        assert_eq!(code, 2);
        assert!(err.contains("unknown letter"));
    }

    #[test]
    fn criterion_fixtures_text() {
        let (code, out, _) = run_cli(&["criterion", "vE"]);
        assert_eq!(code, 0);
        assert!(out.contains("verdict: sub-exponential (s = 3, alpha = 3/5)"));
        let (code, out, _) = run_cli(&["criterion", "Z2"]);
        assert_eq!(code, 0);
        assert!(out.contains("verdict: exponential"));
        let (code, out, _) = run_cli(&["criterion", "G2rot"]);
        assert_eq!(code, 0);
        assert!(out.contains("verdict: polynomial (s = 1)"));
    }

    #[test]
    fn criterion_json_roundtrip() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("report.json");
        let (code, _, _) = run_cli(&["criterion", "vE", "--json", path.to_str().unwrap()]);
        assert_eq!(code, 0);
        let text = std::fs::read_to_string(&path).unwrap();
        let v: serde_json::Value = serde_json::from_str(&text).unwrap();
        assert_eq!(v["verdict"]["kind"], "sub_exponential");
        // Identical runs produce byte-identical reports.
        let path2 = dir.path().join("report2.json");
        run_cli(&["criterion", "vE", "--json", path2.to_str().unwrap()]);
        assert_eq!(text, std::fs::read_to_string(&path2).unwrap());
    }

    #[test]
    fn ball_csv_no_cache() {
        let (code, out, _) = run_cli(&["--no-cache", "ball", "Z2", "--radius", "3"]);
        assert_eq!(code, 0);
        assert_eq!(out, "n,beta_layer,beta_cum\n0,1,1\n1,4,5\n2,8,13\n3,12,25\n");
    }

    #[test]
    fn growth_csv() {
        let (code, out, _) = run_cli(&["--no-cache", "growth", "Z1", "--radius", "3"]);
        assert_eq!(code, 0);
        assert_eq!(
            out,
            "n,beta,gamma,beta_over_n_d\n0,1,1,-\n1,3,2,3\n2,5,2,5/2\n3,7,2,7/3\n"
        );
    }

    #[test]
    fn geodesic_growth_with_brute_check() {
        let (code, out, _) = run_cli(&[
            "--no-cache",
            "geodesic-growth",
            "vE",
            "--radius",
            "4",
            "--brute-check",
            "4",
        ]);
        assert_eq!(code, 0);
        assert!(out.starts_with("n,gamma\n0,1\n1,3\n2,6\n"));
        assert!(out.trim_end().ends_with("# brute-check 0..=4: ok"));
    }

    #[test]
    fn norm_command_and_out_of_radius() {
        let (code, out, _) = run_cli(&["--no-cache", "norm", "vE", "a t a", "--radius", "4"]);
        assert_eq!(code, 0);
        assert!(out.contains("length: 3\n"));
        assert!(out.contains("norm: 3\n"));
        assert!(out.contains("geodesic: true\n"));
        let (code, _, err) = run_cli(&["--no-cache", "norm", "Z1", "a^9", "--radius", "3"]);
        assert_eq!(code, 3);
        assert!(err.contains("out-of-radius"));
    }

    #[test]
    fn family_listing() {
        let (code, out, _) = run_cli(&["family", "--n", "8", "--K", "2", "--eps", "1/2"]);
        assert_eq!(code, 0);
        assert_eq!(
            out,
            "count: 3\na t a^-4 t a^3\na^2 t a^-4 t a^2\na^3 t a^-4 t a\n"
        );
        let (code, _, _) = run_cli(&["family", "--n", "7", "--K", "2", "--eps", "1/2"]);
        assert_eq!(code, 2);
    }

    #[test]
    fn by_bound_output() {
        let (code, out, _) = run_cli(&["by-bound", "--n", "4"]);
        assert_eq!(code, 0);
        assert!(out.contains("total words: 6"));
        assert!(out.contains("violations: 0"));
        assert!(out.contains("min slack: 0"));
        assert!(out.contains("a^2 b^2"));
    }

    // Guards the process-global NILGROWTH_CACHE variable.
    static ENV_LOCK: std::sync::Mutex<()> = std::sync::Mutex::new(());

    #[test]
    fn env_var_overrides_cache_dir() {
        let _guard = ENV_LOCK.lock().unwrap();
        let dir = tempfile::tempdir().unwrap();
        let env_cache = dir.path().join("env-cache");
        std::env::set_var("NILGROWTH_CACHE", &env_cache);
        let (code, _, _) = run_cli(&["ball", "vE", "--radius", "2"]);
        std::env::remove_var("NILGROWTH_CACHE");
        assert_eq!(code, 0);
        let cached: Vec<_> = std::fs::read_dir(&env_cache).unwrap().collect();
        assert_eq!(cached.len(), 1);
    }

    #[test]
    fn cache_round_trip() {
        let _guard = ENV_LOCK.lock().unwrap();
        let dir = tempfile::tempdir().unwrap();
        let cfg_path = dir.path().join("nilgrowth.conf");
        std::fs::write(
            &cfg_path,
            format!("cache_dir={}\nthreads=1\n", dir.path().join("cache").display()),
        )
        .unwrap();
        let cfg_arg = cfg_path.to_str().unwrap();
        let args = ["--config", cfg_arg, "ball", "vE", "--radius", "3"];
        let (code, out1, _) = run_cli(&args);
        assert_eq!(code, 0);
        // Second run hits the cache and produces identical output.
        let (code, out2, _) = run_cli(&args);
        assert_eq!(code, 0);
        assert_eq!(out1, out2);
        let cached: Vec<_> = std::fs::read_dir(dir.path().join("cache"))
            .unwrap()
            .collect();
        assert_eq!(cached.len(), 1);
    }

    #[test]
    fn json_flag_reports_errors_as_json_on_stderr() {
        // criterion succeeds but the report path is unwritable, so the
        // failure surfaces as machine-readable JSON.
        let (code, _, err) = run_cli(&[
            "criterion",
            "vE",
            "--json",
            "/nonexistent-dir/report.json",
        ]);
        assert_eq!(code, 4);
        let v: serde_json::Value = serde_json::from_str(err.trim()).unwrap();
        assert_eq!(v["error"]["kind"], "io");
        assert!(v["error"]["message"].as_str().is_some());
    }

    #[test]
    fn config_errors() {
        let dir = tempfile::tempdir().unwrap();
        let cfg_path = dir.path().join("bad.conf");
        std::fs::write(&cfg_path, "threads=zero\n").unwrap();
        let (code, _, _) = run_cli(&["--config", cfg_path.to_str().unwrap(), "alpha", "--s", "3"]);
        assert_eq!(code, 2);
    }
}
