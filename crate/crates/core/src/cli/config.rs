//! Experiment config files: TOML with a fixed, kind-tagged schema.
//!
//! Parsing collects every problem it finds (unknown keys included) instead of
//! stopping at the first one. See `docs/config.md` for the grammar.

use std::fmt;
use std::path::PathBuf;

use toml::{Table, Value};

use crate::builtins::builtin;
use crate::enrichment::{PairSampleSpec, PairSampling, DEFAULT_B_MAX, DEFAULT_MIN_SEPARATION, DEFAULT_TOL};
use crate::geometry::{CompactSet, Point};
use crate::iteration::{BrowderPathConfig, IterationConfig};
use crate::multimap::{MapKind, MultiMap, ScalarFn, SelectorStrategy, VectorFn};
use crate::oracle::GridSpec;

/// All problems found in a config.
#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub errors: Vec<String>,
}

impl fmt::Display for ConfigError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "{} config error(s):", self.errors.len())?;
        for e in &self.errors {
            writeln!(f, "  - {e}")?;
        }
        Ok(())
    }
}

impl std::error::Error for ConfigError {}

#[derive(Debug, Clone, PartialEq)]
pub struct EnrichmentBlock {
    pub b: f64,
    pub sample: PairSampleSpec,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EstimateBlock {
    pub sample: PairSampleSpec,
    pub b_max: f64,
    pub tol: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HausdorffBlock {
    pub a: CompactSet,
    pub b: CompactSet,
    /// Lattice spacing for the approximate cases.
    pub resolution: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum OracleOp {
    Hausdorff { a: CompactSet, b: CompactSet },
    MinB,
    FixedPoints { tol: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct OracleBlock {
    pub op: OracleOp,
    pub grid: GridSpec,
}

#[derive(Debug, Clone, PartialEq)]
pub enum CommandBlock {
    Iterate(IterationConfig),
    Enrichment(EnrichmentBlock),
    Estimate(EstimateBlock),
    Browder(BrowderPathConfig),
    Hausdorff(HausdorffBlock),
    Oracle(OracleBlock),
}

impl CommandBlock {
    pub fn section(&self) -> &'static str {
        match self {
            CommandBlock::Iterate(_) => "iterate",
            CommandBlock::Enrichment(_) => "enrichment",
            CommandBlock::Estimate(_) => "estimate",
            CommandBlock::Browder(_) => "browder",
            CommandBlock::Hausdorff(_) => "hausdorff",
            CommandBlock::Oracle(_) => "oracle",
        }
    }
}

pub const SECTIONS: [&str; 6] = ["iterate", "enrichment", "estimate", "browder", "hausdorff", "oracle"];

#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentConfig {
    pub map: Option<MultiMap>,
    pub command: CommandBlock,
    pub output: Option<PathBuf>,
    pub seed: u64,
}

// ---------------------------------------------------------------------------
// reading

struct Reader<'a> {
    errors: &'a mut Vec<String>,
}

/// A table being read; remembers which keys were consumed.
struct Fields<'t> {
    path: String,
    table: &'t Table,
    used: Vec<&'static str>,
}

impl<'t> Fields<'t> {
    fn new(path: impl Into<String>, table: &'t Table) -> Self {
        Fields {
            path: path.into(),
            table,
            used: Vec::new(),
        }
    }

    fn key(&self, k: &str) -> String {
        if self.path.is_empty() {
            k.to_string()
        } else {
            format!("{}.{k}", self.path)
        }
    }

    fn get(&mut self, k: &'static str) -> Option<&'t Value> {
        self.used.push(k);
        self.table.get(k)
    }

    fn finish(self, r: &mut Reader) {
        for k in self.table.keys() {
            if !self.used.contains(&k.as_str()) {
                r.errors.push(format!("{}: unknown key", self.key(k)));
            }
        }
    }
}

fn as_f64(v: &Value) -> Option<f64> {
    match v {
        Value::Float(f) => Some(*f),
        Value::Integer(i) => Some(*i as f64),
        _ => None,
    }
}

impl Reader<'_> {
    fn err(&mut self, msg: String) {
        self.errors.push(msg);
    }

    fn opt_f64(&mut self, f: &mut Fields, k: &'static str) -> Option<f64> {
        let v = f.get(k)?;
        match as_f64(v) {
            Some(x) if x.is_finite() => Some(x),
            _ => {
                self.err(format!("{}: expected a finite number, got {v}", f.key(k)));
                None
            }
        }
    }

    fn req_f64(&mut self, f: &mut Fields, k: &'static str) -> Option<f64> {
        if !f.table.contains_key(k) {
            f.used.push(k);
            self.err(format!("{}: missing required field", f.key(k)));
            return None;
        }
        self.opt_f64(f, k)
    }

    /// Reads a number and checks it against `ok`, naming `range` on failure.
    fn ranged(&mut self, f: &mut Fields, k: &'static str, required: bool, range: &str, ok: impl Fn(f64) -> bool) -> Option<f64> {
        let x = if required { self.req_f64(f, k) } else { self.opt_f64(f, k) }?;
        if ok(x) {
            Some(x)
        } else {
            self.err(format!("{}: {x} is out of range, must be {range}", f.key(k)));
            None
        }
    }

    fn opt_usize(&mut self, f: &mut Fields, k: &'static str, min: usize) -> Option<usize> {
        let v = f.get(k)?;
        match v {
            Value::Integer(i) if *i >= min as i64 => Some(*i as usize),
            _ => {
                self.err(format!("{}: expected an integer ≥ {min}, got {v}", f.key(k)));
                None
            }
        }
    }

    fn opt_bool(&mut self, f: &mut Fields, k: &'static str) -> Option<bool> {
        let v = f.get(k)?;
        match v {
            Value::Boolean(b) => Some(*b),
            _ => {
                self.err(format!("{}: expected true or false, got {v}", f.key(k)));
                None
            }
        }
    }

    fn opt_str<'t>(&mut self, f: &mut Fields<'t>, k: &'static str) -> Option<&'t str> {
        let key = f.key(k);
        match f.get(k)? {
            Value::String(s) => Some(s.as_str()),
            v => {
                self.err(format!("{key}: expected a string, got {v}"));
                None
            }
        }
    }

    fn req_str<'t>(&mut self, f: &mut Fields<'t>, k: &'static str) -> Option<&'t str> {
        let key = f.key(k);
        match f.get(k) {
            Some(Value::String(s)) => Some(s.as_str()),
            Some(v) => {
                self.err(format!("{key}: expected a string, got {v}"));
                None
            }
            None => {
                self.err(format!("{key}: missing required field"));
                None
            }
        }
    }

    fn point_value(&mut self, key: &str, v: &Value) -> Option<Point> {
        let coords = match v {
            Value::Array(a) => a.iter().map(as_f64).collect::<Option<Vec<f64>>>(),
            other => as_f64(other).map(|x| vec![x]),
        };
        match coords.map(Point::new) {
            Some(Ok(p)) => Some(p),
            _ => {
                self.err(format!("{key}: expected a point (a number or an array of finite numbers), got {v}"));
                None
            }
        }
    }

    fn opt_point(&mut self, f: &mut Fields, k: &'static str) -> Option<Point> {
        let key = f.key(k);
        let v = f.get(k)?;
        self.point_value(&key, v)
    }

    fn req_point(&mut self, f: &mut Fields, k: &'static str) -> Option<Point> {
        if !f.table.contains_key(k) {
            f.used.push(k);
            self.err(format!("{}: missing required field", f.key(k)));
            return None;
        }
        self.opt_point(f, k)
    }

    fn point_list(&mut self, f: &mut Fields, k: &'static str) -> Option<Vec<Point>> {
        let key = f.key(k);
        match f.get(k) {
            Some(Value::Array(items)) => {
                let pts: Vec<Option<Point>> = items
                    .iter()
                    .enumerate()
                    .map(|(i, v)| self.point_value(&format!("{key}[{i}]"), v))
                    .collect();
                pts.into_iter().collect()
            }
            Some(v) => {
                self.err(format!("{key}: expected an array of points, got {v}"));
                None
            }
            None => {
                self.err(format!("{key}: missing required field"));
                None
            }
        }
    }

    fn sub_table<'t>(&mut self, f: &mut Fields<'t>, k: &'static str, required: bool) -> Option<&'t Table> {
        let key = f.key(k);
        match f.get(k) {
            Some(Value::Table(t)) => Some(t),
            Some(v) => {
                self.err(format!("{key}: expected a table, got {v}"));
                None
            }
            None => {
                if required {
                    self.err(format!("{key}: missing required table"));
                }
                None
            }
        }
    }

    fn set(&mut self, path: String, t: &Table) -> Option<CompactSet> {
        let mut f = Fields::new(path, t);
        let kind = self.req_str(&mut f, "kind");
        let set = (|| match kind {
            Some("interval") => {
                let (lo, hi) = (self.req_f64(&mut f, "lo"), self.req_f64(&mut f, "hi"));
                Some(CompactSet::interval(lo?, hi?))
            }
            Some("box") => {
                let (lo, hi) = (self.req_point(&mut f, "lo"), self.req_point(&mut f, "hi"));
                Some(CompactSet::boxed(lo?, hi?))
            }
            Some("ball") => {
                let (c, r) = (self.req_point(&mut f, "center"), self.req_f64(&mut f, "radius"));
                Some(CompactSet::ball(c?, r?))
            }
            Some("polytope") => self.point_list(&mut f, "vertices").map(CompactSet::polytope),
            Some("finite") => self.point_list(&mut f, "points").map(CompactSet::finite),
            Some(other) => {
                self.err(format!(
                    "{}: unknown set kind {other:?} (expected interval, box, ball, polytope or finite)",
                    f.key("kind")
                ));
                None
            }
            None => None,
        })();
        let path = f.path.clone();
        f.finish(self);
        match set? {
            Ok(s) => Some(s),
            Err(e) => {
                self.err(format!("{path}: {e}"));
                None
            }
        }
    }

    fn req_set(&mut self, f: &mut Fields, k: &'static str) -> Option<CompactSet> {
        let key = f.key(k);
        let t = self.sub_table(f, k, true)?;
        self.set(key, t)
    }

    fn scalar_fn(&mut self, path: String, t: &Table) -> Option<ScalarFn> {
        let mut f = Fields::new(path, t);
        let out = (|| match self.req_str(&mut f, "kind") {
            Some("constant") => self.req_f64(&mut f, "c").map(|c| ScalarFn::Constant { c }),
            Some("linear") => {
                let (s, i) = (self.req_f64(&mut f, "slope"), self.req_f64(&mut f, "intercept"));
                Some(ScalarFn::Linear {
                    slope: s?,
                    intercept: i?,
                })
            }
            Some("reciprocal") => self.req_f64(&mut f, "scale").map(|scale| ScalarFn::Reciprocal { scale }),
            Some("inverse-square") => self.req_f64(&mut f, "scale").map(|scale| ScalarFn::InverseSquare { scale }),
            Some(other) => {
                self.err(format!(
                    "{}: unknown function kind {other:?} (expected constant, linear, reciprocal or inverse-square)",
                    f.key("kind")
                ));
                None
            }
            None => None,
        })();
        f.finish(self);
        out
    }

    fn vector_fn(&mut self, path: String, t: &Table) -> Option<VectorFn> {
        let mut f = Fields::new(path, t);
        let out = (|| match self.req_str(&mut f, "kind") {
            Some("identity") => Some(VectorFn::Identity),
            Some("linear") => self.req_f64(&mut f, "k").map(|k| VectorFn::Linear { k }),
            Some("affine") => {
                let (k, o) = (self.req_f64(&mut f, "k"), self.req_point(&mut f, "offset"));
                Some(VectorFn::Affine { k: k?, offset: o? })
            }
            Some("rotation") => {
                let (a, s) = (self.req_f64(&mut f, "angle"), self.req_f64(&mut f, "scale"));
                Some(VectorFn::Rotation { angle: a?, scale: s? })
            }
            Some("reciprocal") => self.req_f64(&mut f, "scale").map(|scale| VectorFn::Reciprocal { scale }),
            Some(other) => {
                self.err(format!(
                    "{}: unknown function kind {other:?} (expected identity, linear, affine, rotation or reciprocal)",
                    f.key("kind")
                ));
                None
            }
            None => None,
        })();
        f.finish(self);
        out
    }

    fn map(&mut self, path: String, t: &Table) -> Option<MultiMap> {
        let mut f = Fields::new(path, t);
        let kind = self.req_str(&mut f, "kind");
        let built = (|| match kind {
            Some("paper-example") => Some(Ok(MultiMap::paper_example())),
            Some("builtin") => match self.req_str(&mut f, "name") {
                Some(name) => match builtin(name) {
                    Some(b) => Some(Ok(b.map)),
                    None => {
                        self.err(format!("{}: no built-in map named {name:?}", f.key("name")));
                        None
                    }
                },
                None => None,
            },
            Some("averaged") => {
                let mu = self.ranged(&mut f, "mu", true, "in (0, 1]", |m| m > 0.0 && m <= 1.0);
                let key = f.key("inner");
                let inner = self.sub_table(&mut f, "inner", true).and_then(|t| self.map(key, t));
                Some(inner?.averaged(mu?))
            }
            Some(k @ ("single-valued" | "constant" | "linear-scale" | "interval-band")) => {
                let domain = self.req_set(&mut f, "domain");
                let map_kind = match k {
                    "single-valued" => {
                        let key = f.key("function");
                        self.sub_table(&mut f, "function", true)
                            .and_then(|t| self.vector_fn(key, t))
                            .map(MapKind::SingleValuedLift)
                    }
                    "constant" => self.req_set(&mut f, "set").map(MapKind::ConstantSet),
                    "linear-scale" => self.req_f64(&mut f, "k").map(|k| MapKind::LinearScale1D { k }),
                    _ => {
                        let (klo, khi) = (f.key("lo"), f.key("hi"));
                        let lo = self.sub_table(&mut f, "lo", true).and_then(|t| self.scalar_fn(klo, t));
                        let hi = self.sub_table(&mut f, "hi", true).and_then(|t| self.scalar_fn(khi, t));
                        match (lo, hi) {
                            (Some(lo), Some(hi)) => Some(MapKind::IntervalBand1D { lo, hi }),
                            _ => None,
                        }
                    }
                };
                Some(MultiMap::new(map_kind?, domain?))
            }
            Some(other) => {
                self.err(format!(
                    "{}: unknown map kind {other:?} (expected paper-example, builtin, single-valued, constant, linear-scale, interval-band or averaged)",
                    f.key("kind")
                ));
                None
            }
            None => None,
        })();
        let path = f.path.clone();
        f.finish(self);
        match built? {
            Ok(m) => Some(m),
            Err(e) => {
                self.err(format!("{path}: {e}"));
                None
            }
        }
    }

    fn sample(&mut self, f: &mut Fields, seed: u64) -> Option<PairSampleSpec> {
        let min_separation = self
            .ranged(f, "min_separation", false, "> 0", |x| x > 0.0)
            .unwrap_or(DEFAULT_MIN_SEPARATION);
        let mode = match self.opt_str(f, "pairs").unwrap_or("grid") {
            "grid" => PairSampling::GridPairs {
                points_per_axis: self.opt_usize(f, "points_per_axis", 2).unwrap_or(101),
            },
            "random" => PairSampling::RandomPairs {
                count: self.opt_usize(f, "count", 1).unwrap_or(1000),
                seed,
            },
            other => {
                let key = f.key("pairs");
                self.err(format!("{key}: unknown pair sampling {other:?} (expected grid or random)"));
                return None;
            }
        };
        Some(PairSampleSpec { mode, min_separation })
    }

    fn selector(&mut self, f: &mut Fields, seed: u64) -> Option<SelectorStrategy> {
        let key = f.key("selector");
        Some(match self.opt_str(f, "selector").unwrap_or("nearest") {
            "nearest" => SelectorStrategy::Nearest,
            "lower-endpoint" => SelectorStrategy::LowerEndpoint,
            "upper-endpoint" => SelectorStrategy::UpperEndpoint,
            "random" => SelectorStrategy::RandomInSet { seed },
            "fixed-member" => SelectorStrategy::FixedMember {
                index: self.opt_usize(f, "member_index", 0).unwrap_or(0),
            },
            other => {
                self.err(format!(
                    "{key}: unknown selector {other:?} (expected nearest, lower-endpoint, upper-endpoint, random or fixed-member)"
                ));
                return None;
            }
        })
    }

    fn command(&mut self, name: &str, t: &Table, seed: u64) -> Option<CommandBlock> {
        let mut f = Fields::new(name, t);
        let positive = |x: f64| x > 0.0;
        let block = (|| match name {
            "iterate" => {
                let theta = self.ranged(&mut f, "theta", true, "in the open interval (0, 1)", |x| x > 0.0 && x < 1.0);
                let x0 = self.req_point(&mut f, "x0");
                let b_hint = self.ranged(&mut f, "b_hint", false, "≥ 0", |x| x >= 0.0);
                let selector = self.selector(&mut f, seed);
                let max_iter = self.opt_usize(&mut f, "max_iter", 1).unwrap_or(1000);
                let residual_tol = self.ranged(&mut f, "residual_tol", false, "> 0", positive).unwrap_or(1e-8);
                let target = self.opt_point(&mut f, "target");
                let clamp_to_domain = self.opt_bool(&mut f, "clamp_to_domain").unwrap_or(false);
                let assume_hemicompact = self.opt_bool(&mut f, "assume_hemicompact").unwrap_or(false);
                Some(CommandBlock::Iterate(IterationConfig {
                    theta: theta?,
                    b_hint,
                    x0: x0?,
                    selector: selector?,
                    max_iter,
                    residual_tol,
                    target,
                    clamp_to_domain,
                    assume_hemicompact,
                }))
            }
            "enrichment" => {
                let b = self.ranged(&mut f, "b", true, "≥ 0", |x| x >= 0.0);
                let tol = self.ranged(&mut f, "tol", false, "> 0", positive).unwrap_or(DEFAULT_TOL);
                let sample = self.sample(&mut f, seed);
                Some(CommandBlock::Enrichment(EnrichmentBlock {
                    b: b?,
                    sample: sample?,
                    tol,
                }))
            }
            "estimate" => {
                let b_max = self.ranged(&mut f, "b_max", false, "> 0", positive).unwrap_or(DEFAULT_B_MAX);
                let tol = self.ranged(&mut f, "tol", false, "> 0", positive).unwrap_or(DEFAULT_TOL);
                let sample = self.sample(&mut f, seed);
                Some(CommandBlock::Estimate(EstimateBlock {
                    sample: sample?,
                    b_max,
                    tol,
                }))
            }
            "browder" => {
                let mu = self.ranged(&mut f, "mu", true, "in (0, 1]", |m| m > 0.0 && m <= 1.0);
                let x0 = self.req_point(&mut f, "x0");
                let steps = self.opt_usize(&mut f, "steps", 1);
                let schedule = match f.get("c_schedule") {
                    Some(Value::Array(a)) => {
                        let cs = a.iter().map(as_f64).collect::<Option<Vec<f64>>>();
                        if cs.is_none() {
                            self.err("browder.c_schedule: expected an array of numbers".into());
                        }
                        cs
                    }
                    Some(v) => {
                        self.err(format!("browder.c_schedule: expected an array of numbers, got {v}"));
                        None
                    }
                    None => Some(BrowderPathConfig::default_schedule(steps.unwrap_or(20))),
                };
                if steps.is_some() && f.table.contains_key("c_schedule") {
                    self.err("browder: give either steps or c_schedule, not both".into());
                }
                let inner_tol = self.ranged(&mut f, "inner_tol", false, "> 0", positive).unwrap_or(1e-13);
                let inner_max_iter = self.opt_usize(&mut f, "inner_max_iter", 1).unwrap_or(100_000);
                let cfg = BrowderPathConfig {
                    c_schedule: schedule?,
                    mu: mu?,
                    x0: x0?,
                    inner_tol,
                    inner_max_iter,
                };
                if let Err(e) = cfg.validate() {
                    self.err(format!("browder: {e}"));
                    None
                } else {
                    Some(CommandBlock::Browder(cfg))
                }
            }
            "hausdorff" => {
                let a = self.req_set(&mut f, "a");
                let b = self.req_set(&mut f, "b");
                let resolution = self.ranged(&mut f, "resolution", false, "> 0", positive);
                Some(CommandBlock::Hausdorff(HausdorffBlock {
                    a: a?,
                    b: b?,
                    resolution,
                }))
            }
            "oracle" => {
                let resolution = self.ranged(&mut f, "resolution", true, "> 0", positive);
                let bounds = self.req_set(&mut f, "bounds");
                let op = match self.req_str(&mut f, "op") {
                    Some("hausdorff") => {
                        let a = self.req_set(&mut f, "a");
                        let b = self.req_set(&mut f, "b");
                        Some(OracleOp::Hausdorff { a: a?, b: b? })
                    }
                    Some("min-b") => Some(OracleOp::MinB),
                    Some("fixed-points") => {
                        let tol = self.ranged(&mut f, "tol", false, "≥ 0", |x| x >= 0.0).unwrap_or(1e-9);
                        Some(OracleOp::FixedPoints { tol })
                    }
                    Some(other) => {
                        self.err(format!(
                            "oracle.op: unknown oracle {other:?} (expected hausdorff, min-b or fixed-points)"
                        ));
                        None
                    }
                    None => None,
                };
                let grid = GridSpec::new(resolution?, bounds?);
                if let Err(e) = grid.point_count() {
                    self.err(format!("oracle: {e}"));
                }
                Some(CommandBlock::Oracle(OracleBlock { op: op?, grid }))
            }
            _ => unreachable!("section names are checked by the caller"),
        })();
        f.finish(self);
        block
    }
}

fn map_required(cmd: &CommandBlock) -> bool {
    match cmd {
        CommandBlock::Hausdorff(_) => false,
        CommandBlock::Oracle(o) => !matches!(o.op, OracleOp::Hausdorff { .. }),
        _ => true,
    }
}

/// Dimension checks that need both the map and the command block.
fn cross_check(map: &MultiMap, cmd: &CommandBlock, errors: &mut Vec<String>) {
    let d = map.dim();
    let mut pt = |name: &str, p: &Point| {
        if p.dim() != d {
            errors.push(format!("{name}: point has dimension {}, the map has dimension {d}", p.dim()));
        } else if let Err(e) = map.check_in_domain(p) {
            errors.push(format!("{name}: {e}"));
        }
    };
    match cmd {
        CommandBlock::Iterate(c) => {
            pt("iterate.x0", &c.x0);
            if let Some(t) = &c.target {
                if t.dim() != d {
                    errors.push(format!("iterate.target: point has dimension {}, the map has dimension {d}", t.dim()));
                }
            }
        }
        CommandBlock::Browder(c) => pt("browder.x0", &c.x0),
        CommandBlock::Oracle(o) => {
            if o.grid.bounds.dim() != d {
                errors.push(format!("oracle.bounds: dimension {} does not match the map dimension {d}", o.grid.bounds.dim()));
            }
        }
        _ => {}
    }
}

fn parse_table(table: &Table) -> Result<ExperimentConfig, ConfigError> {
    let mut errors = Vec::new();
    let mut r = Reader { errors: &mut errors };
    let mut top = Fields::new("", table);

    let seed = match top.get("seed") {
        None => 0,
        Some(Value::Integer(i)) if *i >= 0 => *i as u64,
        Some(v) => {
            r.err(format!("seed: expected a nonnegative integer, got {v}"));
            0
        }
    };
    let output = r.opt_str(&mut top, "output").map(PathBuf::from);

    let present: Vec<&'static str> = SECTIONS.iter().copied().filter(|s| table.contains_key(*s)).collect();
    let command = match present.as_slice() {
        [one] => {
            let t = r.sub_table(&mut top, one, true);
            t.and_then(|t| r.command(one, t, seed))
        }
        [] => {
            r.err(format!("no command block; expected exactly one of [{}]", SECTIONS.join("], [")));
            None
        }
        many => {
            for s in many {
                top.used.push(s);
            }
            r.err(format!("found blocks [{}]; a config holds exactly one command block", many.join("], [")));
            None
        }
    };

    let map_table = r.sub_table(&mut top, "map", false);
    let map = map_table.and_then(|t| r.map("map".into(), t));
    if map_table.is_none() && command.as_ref().is_some_and(map_required) {
        r.err("map: missing required table".into());
    }
    top.finish(&mut r);
    if let (Some(m), Some(c)) = (&map, &command) {
        cross_check(m, c, &mut errors);
    }

    match command {
        Some(command) if errors.is_empty() => Ok(ExperimentConfig {
            map,
            command,
            output,
            seed,
        }),
        _ => Err(ConfigError { errors }),
    }
}

/// Parses and validates a config, reporting every problem found.
pub fn parse_config(text: &str) -> Result<ExperimentConfig, ConfigError> {
    parse_config_with(text, &[])
}

/// Like [`parse_config`], with `key.path=value` overrides applied to the
/// document before validation. Values are TOML literals; anything that does
/// not parse as one is taken as a string.
pub fn parse_config_with(text: &str, overrides: &[(String, String)]) -> Result<ExperimentConfig, ConfigError> {
    let mut table: Table = text.parse().map_err(|e: toml::de::Error| ConfigError {
        errors: vec![format!("TOML syntax: {}", e.to_string().trim_end())],
    })?;
    for (k, v) in overrides {
        apply_override(&mut table, k, v)?;
    }
    parse_table(&table)
}

fn apply_override(table: &mut Table, key: &str, raw: &str) -> Result<(), ConfigError> {
    let fail = |m: String| ConfigError { errors: vec![m] };
    let value = format!("v = {raw}")
        .parse::<Table>()
        .ok()
        .and_then(|mut t| t.remove("v"))
        .unwrap_or_else(|| Value::String(raw.to_string()));
    let parts: Vec<&str> = key.split('.').collect();
    if parts.iter().any(|p| p.is_empty()) {
        return Err(fail(format!("--set {key}: malformed key")));
    }
    let mut cur = table;
    for p in &parts[..parts.len() - 1] {
        let entry = cur.entry(p.to_string()).or_insert_with(|| Value::Table(Table::new()));
        cur = match entry {
            Value::Table(t) => t,
            _ => return Err(fail(format!("--set {key}: {p} is not a table"))),
        };
    }
    cur.insert(parts[parts.len() - 1].to_string(), value);
    Ok(())
}

// ---------------------------------------------------------------------------
// writing

fn fval(x: f64) -> Value {
    Value::Float(x)
}

fn pval(p: &Point) -> Value {
    Value::Array(p.coords().iter().map(|&c| fval(c)).collect())
}

fn tbl<const N: usize>(entries: [(&str, Value); N]) -> Value {
    Value::Table(entries.into_iter().map(|(k, v)| (k.to_string(), v)).collect())
}

fn s(x: &str) -> Value {
    Value::String(x.into())
}

pub(crate) fn set_value(set: &CompactSet) -> Value {
    match set {
        CompactSet::Interval { lo, hi } => tbl([("kind", s("interval")), ("lo", fval(*lo)), ("hi", fval(*hi))]),
        CompactSet::Box { lo, hi } => tbl([("kind", s("box")), ("lo", pval(lo)), ("hi", pval(hi))]),
        CompactSet::Ball { center, radius } => tbl([("kind", s("ball")), ("center", pval(center)), ("radius", fval(*radius))]),
        CompactSet::Polytope { vertices } => tbl([
            ("kind", s("polytope")),
            ("vertices", Value::Array(vertices.iter().map(pval).collect())),
        ]),
        CompactSet::FiniteSet { points } => tbl([
            ("kind", s("finite")),
            ("points", Value::Array(points.iter().map(pval).collect())),
        ]),
    }
}

fn scalar_fn_value(f: &ScalarFn) -> Value {
    match f {
        ScalarFn::Constant { c } => tbl([("kind", s("constant")), ("c", fval(*c))]),
        ScalarFn::Linear { slope, intercept } => tbl([
            ("kind", s("linear")),
            ("slope", fval(*slope)),
            ("intercept", fval(*intercept)),
        ]),
        ScalarFn::Reciprocal { scale } => tbl([("kind", s("reciprocal")), ("scale", fval(*scale))]),
        ScalarFn::InverseSquare { scale } => tbl([("kind", s("inverse-square")), ("scale", fval(*scale))]),
    }
}

fn vector_fn_value(f: &VectorFn) -> Value {
    match f {
        VectorFn::Identity => tbl([("kind", s("identity"))]),
        VectorFn::Linear { k } => tbl([("kind", s("linear")), ("k", fval(*k))]),
        VectorFn::Affine { k, offset } => tbl([("kind", s("affine")), ("k", fval(*k)), ("offset", pval(offset))]),
        VectorFn::Rotation { angle, scale } => tbl([("kind", s("rotation")), ("angle", fval(*angle)), ("scale", fval(*scale))]),
        VectorFn::Reciprocal { scale } => tbl([("kind", s("reciprocal")), ("scale", fval(*scale))]),
    }
}

pub(crate) fn map_value(m: &MultiMap) -> Value {
    let dom = || set_value(m.domain());
    match m.kind() {
        MapKind::PaperExample => tbl([("kind", s("paper-example"))]),
        MapKind::SingleValuedLift(f) => tbl([("kind", s("single-valued")), ("function", vector_fn_value(f)), ("domain", dom())]),
        MapKind::ConstantSet(set) => tbl([("kind", s("constant")), ("set", set_value(set)), ("domain", dom())]),
        MapKind::LinearScale1D { k } => tbl([("kind", s("linear-scale")), ("k", fval(*k)), ("domain", dom())]),
        MapKind::IntervalBand1D { lo, hi } => tbl([
            ("kind", s("interval-band")),
            ("lo", scalar_fn_value(lo)),
            ("hi", scalar_fn_value(hi)),
            ("domain", dom()),
        ]),
        MapKind::Averaged { inner, mu } => tbl([("kind", s("averaged")), ("mu", fval(*mu)), ("inner", map_value(inner))]),
    }
}

fn sample_entries(t: &mut Table, spec: &PairSampleSpec) {
    match spec.mode {
        PairSampling::GridPairs { points_per_axis } => {
            t.insert("pairs".into(), s("grid"));
            t.insert("points_per_axis".into(), Value::Integer(points_per_axis as i64));
        }
        PairSampling::RandomPairs { count, .. } => {
            t.insert("pairs".into(), s("random"));
            t.insert("count".into(), Value::Integer(count as i64));
        }
    }
    t.insert("min_separation".into(), fval(spec.min_separation));
}

fn command_value(cmd: &CommandBlock) -> Value {
    let mut t = Table::new();
    let mut put = |k: &str, v: Value| {
        t.insert(k.to_string(), v);
    };
    match cmd {
        CommandBlock::Iterate(c) => {
            put("theta", fval(c.theta));
            put("x0", pval(&c.x0));
            if let Some(b) = c.b_hint {
                put("b_hint", fval(b));
            }
            match c.selector {
                SelectorStrategy::Nearest => put("selector", s("nearest")),
                SelectorStrategy::LowerEndpoint => put("selector", s("lower-endpoint")),
                SelectorStrategy::UpperEndpoint => put("selector", s("upper-endpoint")),
                SelectorStrategy::RandomInSet { .. } => put("selector", s("random")),
                SelectorStrategy::FixedMember { index } => {
                    put("selector", s("fixed-member"));
                    put("member_index", Value::Integer(index as i64));
                }
            }
            put("max_iter", Value::Integer(c.max_iter as i64));
            put("residual_tol", fval(c.residual_tol));
            if let Some(p) = &c.target {
                put("target", pval(p));
            }
            put("clamp_to_domain", Value::Boolean(c.clamp_to_domain));
            put("assume_hemicompact", Value::Boolean(c.assume_hemicompact));
        }
        CommandBlock::Enrichment(e) => {
            put("b", fval(e.b));
            put("tol", fval(e.tol));
            sample_entries(&mut t, &e.sample);
        }
        CommandBlock::Estimate(e) => {
            put("b_max", fval(e.b_max));
            put("tol", fval(e.tol));
            sample_entries(&mut t, &e.sample);
        }
        CommandBlock::Browder(b) => {
            put("mu", fval(b.mu));
            put("x0", pval(&b.x0));
            put("c_schedule", Value::Array(b.c_schedule.iter().map(|&c| fval(c)).collect()));
            put("inner_tol", fval(b.inner_tol));
            put("inner_max_iter", Value::Integer(b.inner_max_iter as i64));
        }
        CommandBlock::Hausdorff(h) => {
            put("a", set_value(&h.a));
            put("b", set_value(&h.b));
            if let Some(r) = h.resolution {
                put("resolution", fval(r));
            }
        }
        CommandBlock::Oracle(o) => {
            put("resolution", fval(o.grid.resolution));
            put("bounds", set_value(&o.grid.bounds));
            match &o.op {
                OracleOp::Hausdorff { a, b } => {
                    put("op", s("hausdorff"));
                    put("a", set_value(a));
                    put("b", set_value(b));
                }
                OracleOp::MinB => put("op", s("min-b")),
                OracleOp::FixedPoints { tol } => {
                    put("op", s("fixed-points"));
                    put("tol", fval(*tol));
                }
            }
        }
    }
    Value::Table(t)
}

/// Writes a config back out in the format [`parse_config`] reads.
pub fn serialize_config(cfg: &ExperimentConfig) -> String {
    let mut t = Table::new();
    t.insert("seed".into(), Value::Integer(cfg.seed as i64));
    if let Some(o) = &cfg.output {
        t.insert("output".into(), s(&o.to_string_lossy()));
    }
    if let Some(m) = &cfg.map {
        t.insert("map".into(), map_value(m));
    }
    t.insert(cfg.command.section().into(), command_value(&cfg.command));
    t.to_string()
}
