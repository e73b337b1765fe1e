use crate::error::{invalid, Error, Result};
use crate::geometry::Point;
use crate::multimap::MultiMap;

/// Parameters of the Browder regularization path.
#[derive(Debug, Clone, PartialEq)]
pub struct BrowderPathConfig {
    /// Strictly increasing values in (0, 1).
    pub c_schedule: Vec<f64>,
    pub mu: f64,
    pub x0: Point,
    /// Inner Picard iterations stop once a step is no longer than this.
    pub inner_tol: f64,
    pub inner_max_iter: usize,
}

impl BrowderPathConfig {
    /// Schedule `c_j = j/(j+1)` for `j = 1..=steps`.
    pub fn default_schedule(steps: usize) -> Vec<f64> {
        (1..=steps).map(|j| j as f64 / (j as f64 + 1.0)).collect()
    }

    pub fn new(mu: f64, x0: Point, steps: usize) -> Self {
        BrowderPathConfig {
            c_schedule: Self::default_schedule(steps),
            mu,
            x0,
            inner_tol: 1e-13,
            inner_max_iter: 100_000,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.c_schedule.is_empty() {
            return invalid("c_schedule must not be empty");
        }
        if let Some(c) = self.c_schedule.iter().find(|c| !(**c > 0.0 && **c < 1.0)) {
            return invalid(format!("c_schedule values must lie in (0, 1), got {c}"));
        }
        if self.c_schedule.windows(2).any(|w| w[1] <= w[0]) {
            return invalid("c_schedule must be strictly increasing");
        }
        if !(self.mu > 0.0 && self.mu <= 1.0) {
            return invalid(format!("mu must lie in (0, 1], got {}", self.mu));
        }
        if !(self.inner_tol > 0.0) {
            return invalid(format!("inner_tol must be > 0, got {}", self.inner_tol));
        }
        if self.inner_max_iter == 0 {
            return invalid("inner_max_iter must be ≥ 1");
        }
        Ok(())
    }
}

/// One point of the path.
#[derive(Debug, Clone, PartialEq)]
pub struct BrowderStep {
    pub c: f64,
    /// Fixed point of `x ↦ c·P_{T_μ}(x) + (1−c)·x₀`.
    pub u: Point,
    pub inner_iters: usize,
    /// Largest ratio of consecutive inner step lengths, ignoring steps at
    /// rounding level. `None` when fewer than two steps were measurable.
    pub observed_ratio: Option<f64>,
}

/// Steps below this are rounding noise and are left out of the ratio estimate.
const RATIO_FLOOR: f64 = 1e-11;

/// Follows the fixed points `u_c` of the contractions
/// `x ↦ c·P_{T_μ}(x) + (1−c)·x₀` along the schedule, warm-starting each
/// solve from the previous `u`.
pub fn browder_path(map: &MultiMap, cfg: &BrowderPathConfig) -> Result<Vec<BrowderStep>> {
    cfg.validate()?;
    map.check_in_domain(&cfg.x0)?;
    let averaged = map.averaged(cfg.mu)?;
    let mut u = cfg.x0.clone();
    let mut path = Vec::with_capacity(cfg.c_schedule.len());
    for &c in &cfg.c_schedule {
        let mut prev_step: Option<f64> = None;
        let mut observed: Option<f64> = None;
        let mut iters = 0;
        loop {
            if iters == cfg.inner_max_iter {
                return Err(Error::InnerNonConvergence {
                    c,
                    iterations: cfg.inner_max_iter,
                });
            }
            let next = Point::lin_comb(c, &averaged.best_approx(&u)?, 1.0 - c, &cfg.x0);
            let step = next.dist(&u);
            iters += 1;
            u = next;
            if let Some(p) = prev_step {
                if p > RATIO_FLOOR && step > RATIO_FLOOR {
                    let r = step / p;
                    observed = Some(observed.map_or(r, |o: f64| o.max(r)));
                }
            }
            prev_step = Some(step);
            if step <= cfg.inner_tol {
                break;
            }
        }
        path.push(BrowderStep {
            c,
            u: u.clone(),
            inner_iters: iters,
            observed_ratio: observed,
        });
    }
    Ok(path)
}
