//! Krasnoselskii iteration `x_{n+1} = (1−θ)x_n + θy_n` with `y_n ∈ T(x_n)`,
//! its convergence diagnostics, and the Browder regularization path.
//!
//! With the `Nearest` selector, `y_n ∈ P_T(x_n)` and the engine runs the
//! best-approximation scheme.
//!
//! In ℝⁿ weak and strong convergence coincide, so the weak-convergence
//! statements are checked as plain convergence of the iterates.

mod browder;
mod csv;

pub use browder::{browder_path, BrowderPathConfig, BrowderStep};
pub use csv::{trace_csv_header, write_trace_csv};

use crate::error::{check_dims, invalid, Error, Result};
use crate::geometry::{convex_combination, Point};
use crate::multimap::{MultiMap, SelectorStrategy};

/// Parameters of a Krasnoselskii run.
#[derive(Debug, Clone, PartialEq)]
pub struct IterationConfig {
    /// Step θ ∈ (0, 1).
    pub theta: f64,
    /// Known enrichment constant; used only for the θ < 1/(b+1) warning.
    pub b_hint: Option<f64>,
    pub x0: Point,
    pub selector: SelectorStrategy,
    pub max_iter: usize,
    pub residual_tol: f64,
    /// A known stationary point `p` (with `T(p) = {p}`) for distance tracking.
    pub target: Option<Point>,
    /// Project iterates that leave the domain back onto it instead of stopping.
    pub clamp_to_domain: bool,
    /// Advisory flag; recorded in the trace and otherwise unused.
    pub assume_hemicompact: bool,
}

impl IterationConfig {
    pub fn new(theta: f64, x0: Point) -> Self {
        IterationConfig {
            theta,
            b_hint: None,
            x0,
            selector: SelectorStrategy::Nearest,
            max_iter: 1000,
            residual_tol: 1e-8,
            target: None,
            clamp_to_domain: false,
            assume_hemicompact: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.theta > 0.0 && self.theta < 1.0) {
            return invalid(format!("theta must lie in (0, 1), got {}", self.theta));
        }
        if let Some(b) = self.b_hint {
            if !(b >= 0.0) || !b.is_finite() {
                return invalid(format!("b_hint must be finite and ≥ 0, got {b}"));
            }
        }
        if self.max_iter == 0 {
            return invalid("max_iter must be ≥ 1");
        }
        if !(self.residual_tol > 0.0) {
            return invalid(format!("residual_tol must be > 0, got {}", self.residual_tol));
        }
        if let Some(t) = &self.target {
            check_dims(self.x0.dim(), t.dim())?;
        }
        Ok(())
    }

    /// Whether θ breaks the θ < 1/(b_hint + 1) bound the convergence proof uses.
    pub fn theta_exceeds_hint(&self) -> bool {
        self.b_hint.is_some_and(|b| self.theta >= 1.0 / (b + 1.0))
    }
}

/// One iterate.
#[derive(Debug, Clone, PartialEq)]
pub struct TraceRecord {
    pub n: usize,
    pub x: Point,
    /// The selected image member `y_n ∈ T(x_n)`.
    pub y: Point,
    /// `d(x_n, T(x_n))`
    pub residual: f64,
    /// `‖x_n − p‖` when a target is configured.
    pub dist_to_target: Option<f64>,
    /// Set on the record whose `x` was projected back onto the domain.
    pub clamped: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Termination {
    ResidualTol,
    MaxIter,
    /// The next iterate left the domain at `at`.
    DomainExit { at: Point },
}

#[derive(Debug, Clone, PartialEq)]
pub struct IterationTrace {
    pub records: Vec<TraceRecord>,
    pub terminated_by: Termination,
    pub theta: f64,
    /// θ ≥ 1/(b_hint + 1) at run time.
    pub theta_warning: bool,
    pub assume_hemicompact: bool,
}

impl IterationTrace {
    pub fn last(&self) -> &TraceRecord {
        self.records.last().expect("traces are nonempty")
    }

    pub fn converged(&self) -> bool {
        self.terminated_by == Termination::ResidualTol
    }
}

/// Runs `x_{n+1} = (1−θ)x_n + θy_n` until the residual drops to
/// `residual_tol` or `max_iter` steps have been taken.
///
/// The trace holds at most `max_iter + 1` records (the start point plus one
/// per step).
pub fn krasnoselskii_run(map: &MultiMap, cfg: &IterationConfig) -> Result<IterationTrace> {
    cfg.validate()?;
    map.check_in_domain(&cfg.x0)?;
    let theta_warning = cfg.theta_exceeds_hint();

    let mut records = Vec::new();
    let mut x = cfg.x0.clone();
    let mut clamped = false;
    let terminated_by = loop {
        let n = records.len();
        let image = map.evaluate(&x)?;
        let residual = image.dist_point(&x)?.distance;
        let y = map.select(&x, &cfg.selector, n as u64)?;
        let dist_to_target = cfg.target.as_ref().map(|p| x.dist(p));
        let next = convex_combination(cfg.theta, &y, &x)?;
        records.push(TraceRecord {
            n,
            x,
            y,
            residual,
            dist_to_target,
            clamped,
        });
        if residual <= cfg.residual_tol {
            break Termination::ResidualTol;
        }
        if n >= cfg.max_iter {
            break Termination::MaxIter;
        }
        match map.check_in_domain(&next) {
            Ok(()) => {
                x = next;
                clamped = false;
            }
            Err(Error::OutsideDomain { .. }) if cfg.clamp_to_domain => {
                x = map.domain().dist_point(&next)?.witness;
                clamped = true;
            }
            Err(Error::OutsideDomain { .. }) => break Termination::DomainExit { at: next },
            Err(e) => return Err(e),
        }
    };
    Ok(IterationTrace {
        records,
        terminated_by,
        theta: cfg.theta,
        theta_warning,
        assume_hemicompact: cfg.assume_hemicompact,
    })
}

/// `d(x, T(x))`.
pub fn residual(map: &MultiMap, x: &Point) -> Result<f64> {
    map.residual(x)
}

/// Outcome of [`fejer_check`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FejerOutcome {
    Pass,
    /// `‖x_{n+1} − p‖ > ‖x_n − p‖ + tol` first happens at this `n + 1`.
    Fail { index: usize },
}

/// Checks `‖x_{n+1} − p‖ ≤ ‖x_n − p‖ + tol` along the trace.
pub fn fejer_check(trace: &IterationTrace, p: &Point, tol: f64) -> Result<FejerOutcome> {
    if trace.records.is_empty() {
        return invalid("cannot check Fejér monotonicity of an empty trace");
    }
    check_dims(trace.records[0].x.dim(), p.dim())?;
    for w in trace.records.windows(2) {
        if w[1].x.dist(p) > w[0].x.dist(p) + tol {
            return Ok(FejerOutcome::Fail { index: w[1].n });
        }
    }
    Ok(FejerOutcome::Pass)
}

/// Residual statistics of a trace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ResidualSummary {
    /// First index whose residual meets the run's tolerance.
    pub first_below_tol: Option<usize>,
    pub final_residual: f64,
    /// Residuals never increase after the burn-in records.
    pub is_monotone_after_burnin: bool,
}

pub const BURN_IN: usize = 10;

pub fn residual_summary(trace: &IterationTrace, residual_tol: f64) -> Result<ResidualSummary> {
    if trace.records.is_empty() {
        return invalid("cannot summarize an empty trace");
    }
    let first_below_tol = trace.records.iter().find(|r| r.residual <= residual_tol).map(|r| r.n);
    let tail = &trace.records[BURN_IN.min(trace.records.len())..];
    let is_monotone_after_burnin = tail.windows(2).all(|w| w[1].residual <= w[0].residual);
    Ok(ResidualSummary {
        first_below_tol,
        final_residual: trace.last().residual,
        is_monotone_after_burnin,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::CompactSet;
    use crate::multimap::VectorFn;

    fn p(x: f64) -> Point {
        Point::scalar(x)
    }

    fn example_cfg() -> IterationConfig {
        IterationConfig {
            max_iter: 500,
            target: Some(p(1.0)),
            ..IterationConfig::new(0.1, p(0.6))
        }
    }

    #[test]
    fn paper_example_converges_to_one() {
        let trace = krasnoselskii_run(&MultiMap::paper_example(), &example_cfg()).unwrap();
        assert!(trace.converged());
        let last = trace.last();
        assert!(last.residual <= 1e-8);
        assert!((last.x.coords()[0] - 1.0).abs() <= 1e-6);

        // independent scalar recursion x ← (1−θ)x + θ/x
        let mut x = 0.6f64;
        for r in &trace.records {
            assert!((r.x.coords()[0] - x).abs() < 1e-14);
            x = 0.9 * x + 0.1 / x;
        }
        assert_eq!(fejer_check(&trace, &p(1.0), 1e-12).unwrap(), FejerOutcome::Pass);
    }

    #[test]
    fn recurrence_and_membership_hold() {
        let map = MultiMap::paper_example();
        let trace = krasnoselskii_run(&map, &example_cfg()).unwrap();
        for w in trace.records.windows(2) {
            let expect = Point::lin_comb(0.9, &w[0].x, 0.1, &w[0].y);
            assert!(expect.dist(&w[1].x) <= 1e-12);
        }
        for r in &trace.records {
            let img = map.evaluate(&r.x).unwrap();
            assert!(img.dist_point(&r.y).unwrap().distance <= 1e-9);
        }
    }

    #[test]
    fn linear_lift_hits_zero_in_one_step() {
        let map = MultiMap::single_valued(VectorFn::Linear { k: -3.0 }, CompactSet::Interval { lo: -2.0, hi: 2.0 }).unwrap();
        let cfg = IterationConfig {
            b_hint: Some(1.0),
            ..IterationConfig::new(0.25, p(1.0))
        };
        let trace = krasnoselskii_run(&map, &cfg).unwrap();
        assert!(!trace.theta_warning);
        assert_eq!(trace.records.len(), 2);
        assert_eq!(trace.records[1].x, p(0.0));
        assert_eq!(trace.records[1].residual, 0.0);
    }

    #[test]
    fn fixed_start_gives_single_record() {
        let trace = krasnoselskii_run(&MultiMap::paper_example(), &IterationConfig::new(0.3, p(1.0))).unwrap();
        assert_eq!(trace.records.len(), 1);
        assert_eq!(trace.records[0].residual, 0.0);
        let s = residual_summary(&trace, 1e-8).unwrap();
        assert_eq!(s.first_below_tol, Some(0));
        assert_eq!(s.final_residual, 0.0);
    }

    #[test]
    fn theta_warning_when_step_too_large() {
        let map = MultiMap::linear_scale(-3.0, CompactSet::Interval { lo: -2.0, hi: 2.0 }).unwrap();
        let cfg = IterationConfig {
            b_hint: Some(1.0),
            max_iter: 5,
            ..IterationConfig::new(0.5, p(1.0))
        };
        assert!(krasnoselskii_run(&map, &cfg).unwrap().theta_warning);
    }

    #[test]
    fn domain_exit_and_clamping() {
        // x ↦ {3x} pushes iterates out of [0, 1]
        let map = MultiMap::linear_scale(3.0, CompactSet::Interval { lo: 0.0, hi: 1.0 }).unwrap();
        let cfg = IterationConfig {
            max_iter: 50,
            ..IterationConfig::new(0.5, p(0.5))
        };
        let trace = krasnoselskii_run(&map, &cfg).unwrap();
        assert!(matches!(trace.terminated_by, Termination::DomainExit { .. }));

        let cfg = IterationConfig {
            clamp_to_domain: true,
            ..cfg
        };
        let trace = krasnoselskii_run(&map, &cfg).unwrap();
        assert_eq!(trace.terminated_by, Termination::MaxIter);
        assert!(trace.records.iter().any(|r| r.clamped));
        assert_eq!(trace.records.len(), 51);
    }

    #[test]
    fn rejects_bad_config() {
        let map = MultiMap::paper_example();
        assert!(krasnoselskii_run(&map, &IterationConfig::new(1.5, p(0.6))).is_err());
        assert!(krasnoselskii_run(&map, &IterationConfig::new(0.0, p(0.6))).is_err());
        assert!(matches!(
            krasnoselskii_run(&map, &IterationConfig::new(0.5, p(0.2))),
            Err(Error::OutsideDomain { .. })
        ));
    }

    #[test]
    fn residual_examples() {
        let map = MultiMap::paper_example();
        assert_eq!(residual(&map, &p(1.0)).unwrap(), 0.0);
        assert_eq!(residual(&map, &p(0.5)).unwrap(), 1.5);
        let c = MultiMap::constant(CompactSet::Interval { lo: 0.2, hi: 0.6 }, CompactSet::Interval { lo: 0.0, hi: 1.0 }).unwrap();
        assert_eq!(residual(&c, &p(0.3)).unwrap(), 0.0);
    }

    fn hand_trace(xs: &[f64]) -> IterationTrace {
        IterationTrace {
            records: xs
                .iter()
                .enumerate()
                .map(|(n, &x)| TraceRecord {
                    n,
                    x: p(x),
                    y: p(x),
                    residual: 0.0,
                    dist_to_target: None,
                    clamped: false,
                })
                .collect(),
            terminated_by: Termination::MaxIter,
            theta: 0.5,
            theta_warning: false,
            assume_hemicompact: false,
        }
    }

    #[test]
    fn fejer_examples() {
        assert_eq!(fejer_check(&hand_trace(&[1.0, 1.0, 1.0]), &p(1.0), 0.0).unwrap(), FejerOutcome::Pass);
        assert_eq!(
            fejer_check(&hand_trace(&[0.5, 0.7, 0.6, 0.9]), &p(1.0), 1e-12).unwrap(),
            FejerOutcome::Fail { index: 2 }
        );
        let empty = IterationTrace {
            records: vec![],
            ..hand_trace(&[1.0])
        };
        assert!(fejer_check(&empty, &p(1.0), 0.0).is_err());
    }

    #[test]
    fn summary_of_divergent_run() {
        let map = MultiMap::paper_example();
        let cfg = IterationConfig {
            max_iter: 3,
            ..IterationConfig::new(0.01, p(0.5))
        };
        let trace = krasnoselskii_run(&map, &cfg).unwrap();
        assert_eq!(trace.terminated_by, Termination::MaxIter);
        let s = residual_summary(&trace, cfg.residual_tol).unwrap();
        assert!(s.first_below_tol.is_none());
    }
}
