//! The `setfix` command line: config-driven runs of every library operation.
//!
//! Exit status: 0 success, 1 property violated, 2 config or usage error,
//! 3 numerical non-convergence.

pub mod config;

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

pub use config::{
    parse_config, parse_config_with, serialize_config, CommandBlock, ConfigError, EnrichmentBlock, EstimateBlock,
    ExperimentConfig, HausdorffBlock, OracleBlock, OracleOp,
};

use crate::enrichment::{
    check_b_enriched, check_nonexpansive, check_star_b_enriched, estimate_min_b, EnrichmentReport, PairSampleSpec,
    DEFAULT_B_MAX, DEFAULT_TOL,
};
use crate::error::Error;
use crate::fmt::num;
use crate::geometry::{hausdorff, hausdorff_with_resolution, CompactSet, Point};
use crate::iteration::{
    browder_path, fejer_check, krasnoselskii_run, residual, residual_summary, write_trace_csv, BrowderStep,
    FejerOutcome, Termination,
};
use crate::multimap::MultiMap;
use crate::oracle::{grid_fixed_points, grid_hausdorff, grid_min_b_1d};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_NONCONVERGENCE: i32 = 3;

/// Optional cap on worker threads.
pub const THREADS_ENV: &str = "SETFIX_THREADS";

/// The paper-example preset; also shipped as `fixtures/paper_example.toml`.
pub const PAPER_EXAMPLE_PRESET: &str = include_str!("../../fixtures/paper_example.toml");

/// The often-quoted enrichment constant of `paper-example`, printed next to the
/// computed one.
pub const PAPER_EXAMPLE_CLAIMED_B: f64 = 2.5;

/// One subcommand and the library operations it reaches.
#[derive(Debug, Clone, Copy)]
pub struct Route {
    pub subcommand: &'static str,
    /// Config section the subcommand reads.
    pub section: Option<&'static str>,
    pub operations: &'static [&'static str],
}

pub const DISPATCH: &[Route] = &[
    Route {
        subcommand: "iterate",
        section: Some("iterate"),
        operations: &[
            "krasnoselskii_run",
            "fejer_check",
            "residual_summary",
            "evaluate",
            "select",
            "best_approx",
            "nearest_point",
            "dist_point_set",
            "convex_combination",
            "averaged",
            "affine_combine",
            "scale",
            "translate",
        ],
    },
    Route {
        subcommand: "check-enrichment",
        section: Some("enrichment"),
        operations: &["check_b_enriched", "check_nonexpansive", "hausdorff"],
    },
    Route {
        subcommand: "check-star-enrichment",
        section: Some("enrichment"),
        operations: &["check_star_b_enriched", "best_approx"],
    },
    Route {
        subcommand: "estimate-b",
        section: Some("estimate"),
        operations: &["estimate_min_b"],
    },
    Route {
        subcommand: "hausdorff",
        section: Some("hausdorff"),
        operations: &["hausdorff"],
    },
    Route {
        subcommand: "browder",
        section: Some("browder"),
        operations: &["browder_path", "residual", "averaged", "best_approx"],
    },
    Route {
        subcommand: "oracle",
        section: Some("oracle"),
        operations: &["grid_hausdorff", "grid_min_b_1d", "grid_fixed_points"],
    },
    Route {
        subcommand: "preset",
        section: None,
        operations: &[
            "hausdorff",
            "check_b_enriched",
            "estimate_min_b",
            "krasnoselskii_run",
            "fejer_check",
            "parse_config",
        ],
    },
];

#[derive(Debug, Parser)]
#[command(name = "setfix", version, about = "Fixed points of multivalued maps: experiments from config files")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Debug, Args)]
struct RunArgs {
    /// Experiment config (TOML).
    config: PathBuf,
    /// Override a config value, e.g. `--set iterate.theta=0.2`.
    #[arg(long = "set", value_name = "KEY=VALUE")]
    overrides: Vec<String>,
    /// CSV output path (overrides `output` in the config).
    #[arg(long)]
    output: Option<PathBuf>,
    /// Seed for random selectors and pair sampling.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum PresetName {
    PaperExample,
}

#[derive(Debug, Subcommand)]
enum Cmd {
    /// Krasnoselskii iteration x ← (1−θ)x + θy, y ∈ T(x).
    Iterate(RunArgs),
    /// Check H(bx+Tx, by+Ty) ≤ (b+1)‖x−y‖ on a pair sample.
    CheckEnrichment(RunArgs),
    /// Check the best-approximation (*) form of enrichment.
    CheckStarEnrichment(RunArgs),
    /// Estimate the smallest enrichment constant b.
    EstimateB(RunArgs),
    /// Hausdorff distance between two sets.
    Hausdorff(RunArgs),
    /// Follow the Browder regularization path.
    Browder(RunArgs),
    /// Brute-force grid computations.
    Oracle(RunArgs),
    /// Run a built-in experiment.
    Preset {
        name: PresetName,
        #[arg(long)]
        output: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
    },
}

/// Summary lines plus an exit status.
struct Outcome {
    lines: Vec<(String, String)>,
    status: i32,
}

impl Outcome {
    fn new() -> Self {
        Outcome {
            lines: Vec::new(),
            status: EXIT_OK,
        }
    }

    fn put(&mut self, k: impl Into<String>, v: impl ToString) {
        self.lines.push((k.into(), v.to_string()));
    }

    fn status(&mut self, s: i32) {
        self.status = self.status.max(s);
    }
}

enum Failure {
    Usage(String),
    NonConvergence(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InnerNonConvergence { .. } => Failure::NonConvergence(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<ConfigError> for Failure {
    fn from(e: ConfigError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(format!("i/o error: {e}"))
    }
}

fn short(x: f64) -> String {
    format!("{x}")
}

fn pt(p: &Point) -> String {
    let parts: Vec<String> = p.coords().iter().map(|&c| short(c)).collect();
    format!("({})", parts.join(", "))
}

fn pair(p: &(Point, Point)) -> String {
    format!("{} {}", pt(&p.0), pt(&p.1))
}

/// Runs the command line and returns the exit status.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// [`run`] with explicit output streams.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let text = e.render().to_string();
            let _ = if code == EXIT_OK { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    if let Ok(v) = std::env::var(THREADS_ENV) {
        match v.parse::<usize>() {
            Ok(n) if n > 0 => {
                // a pool set up by an earlier call in the same process stays
                let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            }
            _ => {
                let _ = writeln!(err, "{THREADS_ENV}={v:?} is not a positive integer");
                return EXIT_USAGE;
            }
        }
    }
    match dispatch(cli.command) {
        Ok(o) => {
            for (k, v) in &o.lines {
                let _ = writeln!(out, "{k}: {v}");
            }
            o.status
        }
        Err(Failure::Usage(m)) => {
            let _ = writeln!(err, "error: {}", m.trim_end());
            EXIT_USAGE
        }
        Err(Failure::NonConvergence(m)) => {
            let _ = writeln!(out, "status: non-convergence");
            let _ = writeln!(err, "error: {m}");
            EXIT_NONCONVERGENCE
        }
    }
}

fn load(args: &RunArgs) -> Result<ExperimentConfig, Failure> {
    let text = std::fs::read_to_string(&args.config)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", args.config.display())))?;
    let mut overrides = Vec::new();
    for o in &args.overrides {
        let (k, v) = o
            .split_once('=')
            .ok_or_else(|| Failure::Usage(format!("--set expects KEY=VALUE, got {o:?}")))?;
        overrides.push((k.trim().to_string(), v.trim().to_string()));
    }
    if let Some(s) = args.seed {
        overrides.push(("seed".into(), s.to_string()));
    }
    let mut cfg = parse_config_with(&text, &overrides)?;
    if let Some(o) = &args.output {
        cfg.output = Some(o.clone());
    }
    Ok(cfg)
}

fn expect_section(cfg: &ExperimentConfig, subcommand: &str, section: &str) -> Result<(), Failure> {
    if cfg.command.section() == section {
        Ok(())
    } else {
        Err(Failure::Usage(format!(
            "`{subcommand}` needs a [{section}] block, the config has [{}]",
            cfg.command.section()
        )))
    }
}

fn dispatch(cmd: Cmd) -> Result<Outcome, Failure> {
    let (name, args) = match &cmd {
        Cmd::Preset { name, output, seed } => return preset(*name, output.clone(), *seed),
        Cmd::Iterate(a) => ("iterate", a),
        Cmd::CheckEnrichment(a) => ("check-enrichment", a),
        Cmd::CheckStarEnrichment(a) => ("check-star-enrichment", a),
        Cmd::EstimateB(a) => ("estimate-b", a),
        Cmd::Hausdorff(a) => ("hausdorff", a),
        Cmd::Browder(a) => ("browder", a),
        Cmd::Oracle(a) => ("oracle", a),
    };
    let route = DISPATCH.iter().find(|r| r.subcommand == name).expect("every subcommand is routed");
    let cfg = load(args)?;
    expect_section(&cfg, name, route.section.expect("config subcommands name a section"))?;
    let mut o = Outcome::new();
    o.put("command", name);
    if let Some(m) = &cfg.map {
        o.put("map", m.describe());
    }
    let out = cfg.output.as_deref();
    let map = || cfg.map.as_ref().expect("config validation requires a map here");
    match &cfg.command {
        CommandBlock::Iterate(c) => run_iterate(map(), c, out, &mut o)?,
        CommandBlock::Enrichment(e) => run_enrichment(map(), e, name == "check-star-enrichment", out, &mut o)?,
        CommandBlock::Estimate(e) => run_estimate(map(), &e.sample, e.b_max, e.tol, out, &mut o)?,
        CommandBlock::Hausdorff(h) => {
            let r = match h.resolution {
                Some(res) => hausdorff_with_resolution(&h.a, &h.b, res)?,
                None => hausdorff(&h.a, &h.b)?,
            };
            o.put("distance", short(r.value));
            o.put("exact", r.is_exact());
            if let Some(res) = r.resolution {
                o.put("resolution", short(res));
            }
        }
        CommandBlock::Browder(b) => run_browder(map(), b, out, &mut o)?,
        CommandBlock::Oracle(ob) => run_oracle(cfg.map.as_ref(), ob, out, &mut o)?,
    }
    if let Some(p) = out {
        o.put("csv", p.display());
    }
    Ok(o)
}

fn create(path: &Path) -> Result<BufWriter<File>, Failure> {
    File::create(path)
        .map(BufWriter::new)
        .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))
}

fn run_iterate(
    map: &MultiMap,
    c: &crate::iteration::IterationConfig,
    out: Option<&Path>,
    o: &mut Outcome,
) -> Result<(), Failure> {
    let trace = krasnoselskii_run(map, c)?;
    o.put("theta", short(c.theta));
    o.put("theta_warning", trace.theta_warning);
    o.put("assume_hemicompact", trace.assume_hemicompact);
    let last = trace.last();
    match &trace.terminated_by {
        Termination::ResidualTol => o.put("terminated_by", "residual-tol"),
        Termination::MaxIter => {
            o.put("terminated_by", "max-iter");
            o.status(EXIT_NONCONVERGENCE);
        }
        Termination::DomainExit { at } => {
            o.put("terminated_by", "domain-exit");
            o.put("domain_exit_at", pt(at));
            o.status(EXIT_NONCONVERGENCE);
        }
    }
    o.put("iterations", trace.records.len() - 1);
    o.put("final_x", pt(&last.x));
    o.put("final_residual", short(last.residual));
    let s = residual_summary(&trace, c.residual_tol)?;
    o.put("first_below_tol", s.first_below_tol.map_or("none".into(), |n| n.to_string()));
    o.put("monotone_after_burnin", s.is_monotone_after_burnin);
    o.put("clamp_events", trace.records.iter().filter(|r| r.clamped).count());
    if let Some(p) = &c.target {
        o.put("final_dist_to_target", short(last.x.dist(p)));
        match fejer_check(&trace, p, 1e-12)? {
            FejerOutcome::Pass => o.put("fejer", "pass"),
            FejerOutcome::Fail { index } => {
                o.put("fejer", format!("fail at {index}"));
                o.status(EXIT_VIOLATED);
            }
        }
    }
    if let Some(path) = out {
        let mut w = create(path)?;
        write_trace_csv(&trace, &mut w)?;
        w.flush()?;
    }
    Ok(())
}

fn point_cols(prefix: &str, dim: usize) -> Vec<String> {
    (0..dim).map(|i| format!("{prefix}_{i}")).collect()
}

fn run_enrichment(map: &MultiMap, e: &EnrichmentBlock, star: bool, out: Option<&Path>, o: &mut Outcome) -> Result<(), Failure> {
    let r = if star {
        check_star_b_enriched(map, e.b, &e.sample, e.tol)?
    } else if e.b == 0.0 {
        check_nonexpansive(map, &e.sample, e.tol)?
    } else {
        check_b_enriched(map, e.b, &e.sample, e.tol)?
    };
    report_lines(&r, o);
    if !r.passed() {
        o.status(EXIT_VIOLATED);
    }
    if let Some(path) = out {
        let d = map.dim();
        let mut header = vec!["check".to_string(), "b".into(), "verdict".into(), "worst_ratio".into()];
        header.extend(point_cols("witness_x", d));
        header.extend(point_cols("witness_y", d));
        header.extend(["violation_ratio".to_string(), "max_violation".into()]);
        header.extend(point_cols("violation_x", d));
        header.extend(point_cols("violation_y", d));
        header.extend(["pairs_checked".to_string(), "pairs_skipped".into(), "tolerance".into(), "resolution".into()]);
        let mut row = vec![
            check_name(&r).to_string(),
            num(r.b),
            r.verdict.as_str().to_string(),
            num(r.worst_ratio),
        ];
        let coords = |p: &Point| p.coords().iter().map(|&c| num(c)).collect::<Vec<_>>();
        row.extend(coords(&r.witness.0));
        row.extend(coords(&r.witness.1));
        row.extend([num(r.violation_ratio), num(r.max_violation)]);
        row.extend(coords(&r.violation_witness.0));
        row.extend(coords(&r.violation_witness.1));
        row.extend([
            r.pairs_checked.to_string(),
            r.pairs_skipped.to_string(),
            num(r.tolerance),
            r.resolution.map(num).unwrap_or_default(),
        ]);
        let mut w = create(path)?;
        writeln!(w, "{}", header.join(","))?;
        writeln!(w, "{}", row.join(","))?;
        w.flush()?;
    }
    Ok(())
}

fn check_name(r: &EnrichmentReport) -> &'static str {
    match r.check {
        crate::enrichment::CheckKind::Enriched => "enriched",
        crate::enrichment::CheckKind::StarEnriched => "star-enriched",
    }
}

fn report_lines(r: &EnrichmentReport, o: &mut Outcome) {
    o.put("check", check_name(r));
    o.put("b", short(r.b));
    o.put("verdict", r.verdict.as_str());
    o.put("worst_ratio", short(r.worst_ratio));
    o.put("witness", pair(&r.witness));
    o.put("violation_ratio", short(r.violation_ratio));
    o.put("violation_witness", pair(&r.violation_witness));
    o.put("max_violation", short(r.max_violation));
    o.put("pairs_checked", r.pairs_checked);
    o.put("pairs_skipped", r.pairs_skipped);
    o.put("resolution", r.resolution.map_or("exact".into(), short));
}

fn run_estimate(map: &MultiMap, sample: &PairSampleSpec, b_max: f64, tol: f64, out: Option<&Path>, o: &mut Outcome) -> Result<(), Failure> {
    let e = estimate_min_b(map, sample, b_max, tol)?;
    o.put("b", short(e.b));
    o.put("witness", e.witness.as_ref().map_or("none".into(), pair));
    o.put("pairs_checked", e.pairs_checked);
    o.put("pairs_skipped", e.pairs_skipped);
    o.put("infeasible_pairs", e.infeasible_pairs);
    o.put("b_max", short(e.b_max));
    if !e.is_finite() {
        o.status(EXIT_VIOLATED);
    }
    if let Some(path) = out {
        let mut w = create(path)?;
        writeln!(w, "b,pairs_checked,pairs_skipped,infeasible_pairs,b_max")?;
        writeln!(w, "{},{},{},{},{}", num(e.b), e.pairs_checked, e.pairs_skipped, e.infeasible_pairs, num(e.b_max))?;
        w.flush()?;
    }
    Ok(())
}

fn run_browder(map: &MultiMap, b: &crate::iteration::BrowderPathConfig, out: Option<&Path>, o: &mut Outcome) -> Result<(), Failure> {
    let path = browder_path(map, b)?;
    let last: &BrowderStep = path.last().expect("schedules are nonempty");
    o.put("mu", short(b.mu));
    o.put("steps", path.len());
    o.put("final_c", short(last.c));
    o.put("final_u", pt(&last.u));
    o.put("final_residual", short(residual(map, &last.u)?));
    o.put("inner_iters_total", path.iter().map(|s| s.inner_iters).sum::<usize>());
    let worst = path
        .iter()
        .filter_map(|s| s.observed_ratio.map(|r| r - s.c))
        .fold(f64::NEG_INFINITY, f64::max);
    if worst.is_finite() {
        o.put("max_ratio_minus_c", short(worst));
    }
    if let Some(p) = out {
        let d = b.x0.dim();
        let mut w = create(p)?;
        let mut header = vec!["j".to_string(), "c".into()];
        header.extend(point_cols("u", d));
        header.extend(["inner_iters".to_string(), "observed_ratio".into()]);
        writeln!(w, "{}", header.join(","))?;
        for (j, s) in path.iter().enumerate() {
            let mut row = vec![(j + 1).to_string(), num(s.c)];
            row.extend(s.u.coords().iter().map(|&c| num(c)));
            row.push(s.inner_iters.to_string());
            row.push(s.observed_ratio.map(num).unwrap_or_default());
            writeln!(w, "{}", row.join(","))?;
        }
        w.flush()?;
    }
    Ok(())
}

fn run_oracle(map: Option<&MultiMap>, ob: &OracleBlock, out: Option<&Path>, o: &mut Outcome) -> Result<(), Failure> {
    o.put("resolution", short(ob.grid.resolution));
    o.put("grid_points", ob.grid.point_count()?);
    match &ob.op {
        OracleOp::Hausdorff { a, b } => {
            o.put("op", "hausdorff");
            o.put("distance", short(grid_hausdorff(a, b, &ob.grid)?));
        }
        OracleOp::MinB => {
            let map = map.expect("validated");
            let r = grid_min_b_1d(map, &ob.grid)?;
            o.put("op", "min-b");
            o.put("b", short(r.b));
            o.put("witness", r.witness.map_or("none".into(), |(x, y)| format!("({}) ({})", short(x), short(y))));
            o.put("pairs", r.pairs);
            if r.b.is_infinite() {
                o.status(EXIT_VIOLATED);
            }
        }
        OracleOp::FixedPoints { tol } => {
            let map = map.expect("validated");
            let clusters = grid_fixed_points(map, &ob.grid, *tol)?;
            o.put("op", "fixed-points");
            o.put("clusters", clusters.len());
            for (i, c) in clusters.iter().enumerate() {
                o.put(
                    format!("cluster_{i}"),
                    format!("{} members={} residual={}", pt(&c.representative), c.members.len(), short(c.residual)),
                );
            }
            if let Some(p) = out {
                let d = map.dim();
                let mut w = create(p)?;
                let mut header = vec!["cluster".to_string()];
                header.extend(point_cols("x", d));
                header.push("representative".into());
                writeln!(w, "{}", header.join(","))?;
                for (i, c) in clusters.iter().enumerate() {
                    for m in &c.members {
                        let mut row = vec![i.to_string()];
                        row.extend(m.coords().iter().map(|&v| num(v)));
                        row.push((m == &c.representative).to_string());
                        writeln!(w, "{}", row.join(","))?;
                    }
                }
                w.flush()?;
            }
        }
    }
    Ok(())
}

/// Points per axis giving a spacing of 1e-3 on `[0.5, 1]`.
const PRESET_GRID_POINTS: usize = 501;

fn preset(name: PresetName, output: Option<PathBuf>, seed: Option<u64>) -> Result<Outcome, Failure> {
    let PresetName::PaperExample = name;
    let mut overrides = Vec::new();
    if let Some(s) = seed {
        overrides.push(("seed".to_string(), s.to_string()));
    }
    let mut cfg = parse_config_with(PAPER_EXAMPLE_PRESET, &overrides)?;
    if output.is_some() {
        cfg.output = output;
    }
    let map = cfg.map.clone().expect("the preset names its map");
    let mut o = Outcome::new();
    o.put("preset", "paper-example");
    o.put("map", map.describe());

    let a = CompactSet::Interval { lo: 2.0, hi: 4.0 };
    let b = CompactSet::singleton(Point::scalar(1.0));
    o.put("hausdorff.sets", "[2, 4] {1}");
    o.put("hausdorff.distance", short(hausdorff(&a, &b)?.value));

    let sample = PairSampleSpec::grid(PRESET_GRID_POINTS);
    let r = check_b_enriched(&map, 0.0, &sample, DEFAULT_TOL)?;
    o.put("nonexpansive.verdict", r.verdict.as_str());
    o.put("nonexpansive.violation_witness", pair(&r.violation_witness));
    o.put("nonexpansive.violation_ratio", short(r.violation_ratio));
    o.put("nonexpansive.worst_ratio", short(r.worst_ratio));
    o.put("nonexpansive.witness", pair(&r.witness));

    let e = estimate_min_b(&map, &sample, DEFAULT_B_MAX, DEFAULT_TOL)?;
    o.put("estimate.b", short(e.b));
    o.put("estimate.witness", e.witness.as_ref().map_or("none".into(), pair));
    o.put("estimate.claimed_b", short(PAPER_EXAMPLE_CLAIMED_B));
    o.put(
        "estimate.claimed_b_feasible",
        check_b_enriched(&map, PAPER_EXAMPLE_CLAIMED_B, &sample, DEFAULT_TOL)?.passed(),
    );

    let CommandBlock::Iterate(it) = &cfg.command else {
        return Err(Failure::Usage("the preset config must hold an [iterate] block".into()));
    };
    let mut sub = Outcome::new();
    run_iterate(&map, it, cfg.output.as_deref(), &mut sub)?;
    for (k, v) in sub.lines {
        o.put(format!("iterate.{k}"), v);
    }
    o.status(sub.status);
    if let Some(p) = &cfg.output {
        o.put("csv", p.display());
    }
    Ok(o)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_capture(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run_with(std::iter::once("setfix").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn dispatch_table_covers_every_operation() {
        let ops = [
            "dist_point_set",
            "nearest_point",
            "translate",
            "scale",
            "affine_combine",
            "hausdorff",
            "convex_combination",
            "evaluate",
            "averaged",
            "best_approx",
            "select",
            "check_b_enriched",
            "check_star_b_enriched",
            "estimate_min_b",
            "check_nonexpansive",
            "krasnoselskii_run",
            "residual",
            "fejer_check",
            "residual_summary",
            "browder_path",
            "grid_hausdorff",
            "grid_min_b_1d",
            "grid_fixed_points",
            "parse_config",
        ];
        for op in ops {
            assert!(DISPATCH.iter().any(|r| r.operations.contains(&op)), "{op} is unreachable");
        }
        // every routed subcommand parses
        for r in DISPATCH {
            let args: Vec<&str> = if r.subcommand == "preset" {
                vec!["setfix", "preset", "paper-example"]
            } else {
                vec!["setfix", r.subcommand, "x.toml"]
            };
            Cli::try_parse_from(args).unwrap_or_else(|e| panic!("{}: {e}", r.subcommand));
        }
    }

    #[test]
    fn preset_file_parses() {
        let cfg = parse_config(PAPER_EXAMPLE_PRESET).unwrap();
        assert!(matches!(cfg.command, CommandBlock::Iterate(_)));
    }

    #[test]
    fn usage_errors() {
        assert_eq!(run_capture(&[]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["frobnicate"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["iterate", "/nonexistent/config.toml"]).0, EXIT_USAGE);
        assert_eq!(run_capture(&["preset", "nope"]).0, EXIT_USAGE);
        let (code, out, _) = run_capture(&["--help"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("check-star-enrichment"));
    }

    #[test]
    fn wrong_block_for_subcommand() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.toml");
        std::fs::write(&p, PAPER_EXAMPLE_PRESET).unwrap();
        let (code, _, err) = run_capture(&["estimate-b", p.to_str().unwrap()]);
        assert_eq!(code, EXIT_USAGE);
        assert!(err.contains("[estimate]"));
    }

    #[test]
    fn malformed_set_flag() {
        let dir = tempfile::tempdir().unwrap();
        let p = dir.path().join("c.toml");
        std::fs::write(&p, PAPER_EXAMPLE_PRESET).unwrap();
        assert_eq!(run_capture(&["iterate", p.to_str().unwrap(), "--set", "novalue"]).0, EXIT_USAGE);
        let (code, out, _) = run_capture(&["iterate", p.to_str().unwrap(), "--set", "iterate.theta=0.2"]);
        assert_eq!(code, EXIT_OK);
        assert!(out.contains("theta: 0.2\n"));
    }
}
