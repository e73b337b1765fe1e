//! Sampling-based verification and estimation of enrichment constants.
//!
//! A map `T` is b-enriched when `H(bx + Tx, by + Ty) ≤ (b+1)‖x − y‖` for all
//! `x, y`, and *-b-enriched when every best approximation `u_x ∈ P_T x` has a
//! partner `u_y ∈ P_T y` with `‖b(x−y) + (u_x − u_y)‖ ≤ (b+1)‖x − y‖`.
//! Nonexpansiveness is the case `b = 0`.
//!
//! The universally quantified definitions are checked on a finite pair
//! sample: a failure comes with a violating witness pair, a pass is evidence
//! only.

use std::cmp::Ordering;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::error::{invalid, Result};
use crate::geometry::{hausdorff, CompactSet, Point, MEMBERSHIP_TOL};
use crate::multimap::{selector::sample_uniform, MultiMap};

pub const DEFAULT_TOL: f64 = 1e-9;
pub const DEFAULT_MIN_SEPARATION: f64 = 1e-6;
pub const DEFAULT_B_MAX: f64 = 64.0;
pub const BISECTION_ITERS: usize = 60;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PairSampling {
    /// All pairs of a regular grid over the domain's bounding box,
    /// restricted to the domain.
    GridPairs { points_per_axis: usize },
    /// `count` independent pairs drawn inside the domain.
    RandomPairs { count: usize, seed: u64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairSampleSpec {
    pub mode: PairSampling,
    /// Pairs closer than this are skipped.
    pub min_separation: f64,
}

impl PairSampleSpec {
    pub fn grid(points_per_axis: usize) -> Self {
        PairSampleSpec {
            mode: PairSampling::GridPairs { points_per_axis },
            min_separation: DEFAULT_MIN_SEPARATION,
        }
    }

    pub fn random(count: usize, seed: u64) -> Self {
        PairSampleSpec {
            mode: PairSampling::RandomPairs { count, seed },
            min_separation: DEFAULT_MIN_SEPARATION,
        }
    }

    fn validate(&self) -> Result<()> {
        match self.mode {
            PairSampling::GridPairs { points_per_axis } if points_per_axis < 2 => {
                invalid(format!("points_per_axis must be ≥ 2, got {points_per_axis}"))
            }
            PairSampling::RandomPairs { count: 0, .. } => invalid("pair count must be ≥ 1"),
            _ if !(self.min_separation > 0.0) => invalid(format!(
                "min_separation must be > 0, got {}",
                self.min_separation
            )),
            _ => Ok(()),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CheckKind {
    Enriched,
    StarEnriched,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Pass,
    Fail,
}

impl Verdict {
    pub fn as_str(&self) -> &'static str {
        match self {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
        }
    }
}

/// Outcome of an enrichment check over a pair sample.
#[derive(Debug, Clone, PartialEq)]
pub struct EnrichmentReport {
    pub check: CheckKind,
    pub b: f64,
    /// `Pass` iff `worst_ratio ≤ b + 1 + tolerance`.
    pub verdict: Verdict,
    /// Largest sampled ratio `ρ(x, y; b)`.
    pub worst_ratio: f64,
    /// The pair attaining `worst_ratio`.
    pub witness: (Point, Point),
    /// Largest absolute excess `ρ·‖x − y‖ − (b+1)‖x − y‖` over the sample.
    pub max_violation: f64,
    /// The pair attaining `max_violation`, and its ratio.
    pub violation_witness: (Point, Point),
    pub violation_ratio: f64,
    pub pairs_checked: usize,
    pub pairs_skipped: usize,
    pub tolerance: f64,
    /// Set when some Hausdorff value came from a sampled fallback.
    pub resolution: Option<f64>,
    pub sample: PairSampleSpec,
}

impl EnrichmentReport {
    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }
}

/// Result of [`estimate_min_b`].
#[derive(Debug, Clone, PartialEq)]
pub struct MinBEstimate {
    /// Max over sampled pairs of the pair's minimal b; `+∞` if some pair is
    /// infeasible at `b_max`.
    pub b: f64,
    /// The pair whose requirement is largest.
    pub witness: Option<(Point, Point)>,
    pub pairs_checked: usize,
    pub pairs_skipped: usize,
    pub infeasible_pairs: usize,
    pub b_max: f64,
    pub resolution: Option<f64>,
}

impl MinBEstimate {
    pub fn is_finite(&self) -> bool {
        self.b.is_finite()
    }
}

/// Sample points and the index pairs to check.
struct PairPlan {
    points: Vec<Point>,
    pairs: Vec<(usize, usize)>,
    skipped: usize,
}

fn grid_points(domain: &CompactSet, n: usize) -> Result<Vec<Point>> {
    let (lo, hi) = domain.bounding_box();
    let axes: Vec<Vec<f64>> = lo
        .coords()
        .iter()
        .zip(hi.coords())
        .map(|(l, h)| {
            if l == h {
                vec![*l]
            } else {
                (0..n).map(|i| l + (h - l) * i as f64 / (n - 1) as f64).collect()
            }
        })
        .collect();
    let mut out: Vec<Vec<f64>> = vec![vec![]];
    for axis in &axes {
        out = out
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |c| {
                    let mut q = p.clone();
                    q.push(*c);
                    q
                })
            })
            .collect();
    }
    let mut pts = Vec::with_capacity(out.len());
    for c in out {
        let p = Point::new(c)?;
        if domain.dist_point(&p)?.distance <= MEMBERSHIP_TOL {
            pts.push(p);
        }
    }
    Ok(pts)
}

fn plan(map: &MultiMap, sample: &PairSampleSpec) -> Result<PairPlan> {
    sample.validate()?;
    let domain = map.domain();
    let mut skipped = 0;
    match sample.mode {
        PairSampling::GridPairs { points_per_axis } => {
            let points = grid_points(domain, points_per_axis)?;
            let mut pairs = Vec::new();
            for i in 0..points.len() {
                for j in i + 1..points.len() {
                    if points[i].dist(&points[j]) < sample.min_separation {
                        skipped += 1;
                    } else {
                        pairs.push((i, j));
                    }
                }
            }
            Ok(PairPlan {
                points,
                pairs,
                skipped,
            })
        }
        PairSampling::RandomPairs { count, seed } => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut points = Vec::with_capacity(2 * count);
            let mut pairs = Vec::with_capacity(count);
            for _ in 0..count {
                let x = sample_uniform(domain, &mut rng);
                let y = sample_uniform(domain, &mut rng);
                if x.dist(&y) < sample.min_separation {
                    skipped += 1;
                    continue;
                }
                pairs.push((points.len(), points.len() + 1));
                points.push(x);
                points.push(y);
            }
            Ok(PairPlan {
                points,
                pairs,
                skipped,
            })
        }
    }
}

#[derive(Debug, Clone, Copy)]
struct PairScore {
    ratio: f64,
    excess: f64,
    i: usize,
    j: usize,
}

/// Best-first order: larger value wins, ties go to the lexicographically
/// smaller witness so the reduction is schedule-independent.
fn better(points: &[Point], a: (f64, usize, usize), b: (f64, usize, usize)) -> Ordering {
    b.0.total_cmp(&a.0).then_with(|| {
        points[a.1]
            .lex_cmp(&points[b.1])
            .then_with(|| points[a.2].lex_cmp(&points[b.2]))
    })
}

struct Reduced {
    worst: PairScore,
    violation: PairScore,
    resolution: Option<f64>,
}

fn reduce(points: &[Point], scores: Vec<(PairScore, Option<f64>)>) -> Option<Reduced> {
    let mut it = scores.into_iter();
    let (first, res) = it.next()?;
    let mut acc = Reduced {
        worst: first,
        violation: first,
        resolution: res,
    };
    for (s, r) in it {
        if better(points, (s.ratio, s.i, s.j), (acc.worst.ratio, acc.worst.i, acc.worst.j)) == Ordering::Less {
            acc.worst = s;
        }
        if better(points, (s.excess, s.i, s.j), (acc.violation.excess, acc.violation.i, acc.violation.j))
            == Ordering::Less
        {
            acc.violation = s;
        }
        acc.resolution = match (acc.resolution, r) {
            (None, r) | (r, None) => r,
            (Some(a), Some(b)) => Some(a.max(b)),
        };
    }
    Some(acc)
}

/// `H(Tx + b·x, Ty + b·y) / ‖x − y‖` from cached images.
fn enriched_ratio(
    b: f64,
    x: &Point,
    tx: &CompactSet,
    y: &Point,
    ty: &CompactSet,
) -> Result<(f64, Option<f64>)> {
    let ax = tx.translate(&x.scaled(b))?;
    let ay = ty.translate(&y.scaled(b))?;
    let h = hausdorff(&ax, &ay)?;
    Ok((h.value / x.dist(y), h.resolution))
}

/// `max over u_x of min over u_y of ‖b(x−y) + (u_x − u_y)‖ / ‖x − y‖`.
fn star_ratio(b: f64, x: &Point, ux: &[Point], y: &Point, uy: &[Point]) -> f64 {
    let d = x.dist(y);
    let diff = x - y;
    ux.iter()
        .map(|u| {
            uy.iter()
                .map(|v| {
                    let w = Point::lin_comb(b, &diff, 1.0, &(u - v));
                    w.norm() / d
                })
                .fold(f64::INFINITY, f64::min)
        })
        .fold(0.0, f64::max)
}

fn check_common(
    check: CheckKind,
    map: &MultiMap,
    b: f64,
    sample: &PairSampleSpec,
    tol: f64,
) -> Result<EnrichmentReport> {
    if !(b >= 0.0) || !b.is_finite() {
        return invalid(format!("b must be finite and ≥ 0, got {b}"));
    }
    if !(tol >= 0.0) {
        return invalid(format!("tolerance must be ≥ 0, got {tol}"));
    }
    let plan = plan(map, sample)?;
    let pts = &plan.points;

    let scores: Vec<(PairScore, Option<f64>)> = match check {
        CheckKind::Enriched => {
            let images = pts.par_iter().map(|p| map.evaluate(p)).collect::<Result<Vec<_>>>()?;
            plan.pairs
                .par_iter()
                .map(|&(i, j)| {
                    let (ratio, res) = enriched_ratio(b, &pts[i], &images[i], &pts[j], &images[j])?;
                    let d = pts[i].dist(&pts[j]);
                    Ok((
                        PairScore {
                            ratio,
                            excess: (ratio - (b + 1.0)) * d,
                            i,
                            j,
                        },
                        res,
                    ))
                })
                .collect::<Result<Vec<_>>>()?
        }
        CheckKind::StarEnriched => {
            let cands = pts
                .par_iter()
                .map(|p| map.best_approx_candidates(p))
                .collect::<Result<Vec<_>>>()?;
            plan.pairs
                .par_iter()
                .map(|&(i, j)| {
                    let fwd = star_ratio(b, &pts[i], &cands[i], &pts[j], &cands[j]);
                    let bwd = star_ratio(b, &pts[j], &cands[j], &pts[i], &cands[i]);
                    let (ratio, i, j) = if bwd > fwd { (bwd, j, i) } else { (fwd, i, j) };
                    let d = pts[i].dist(&pts[j]);
                    Ok((
                        PairScore {
                            ratio,
                            excess: (ratio - (b + 1.0)) * d,
                            i,
                            j,
                        },
                        None,
                    ))
                })
                .collect::<Result<Vec<_>>>()?
        }
    };

    let Some(red) = reduce(pts, scores) else {
        return invalid("the pair sample is empty: no pair reached min_separation");
    };
    let pair = |s: &PairScore| (pts[s.i].clone(), pts[s.j].clone());
    Ok(EnrichmentReport {
        check,
        b,
        verdict: if red.worst.ratio <= b + 1.0 + tol {
            Verdict::Pass
        } else {
            Verdict::Fail
        },
        worst_ratio: red.worst.ratio,
        witness: pair(&red.worst),
        max_violation: red.violation.excess,
        violation_witness: pair(&red.violation),
        violation_ratio: red.violation.ratio,
        pairs_checked: plan.pairs.len(),
        pairs_skipped: plan.skipped,
        tolerance: tol,
        resolution: red.resolution,
        sample: *sample,
    })
}

/// Checks `H(bx + Tx, by + Ty) ≤ (b+1)‖x − y‖` on the pair sample.
pub fn check_b_enriched(map: &MultiMap, b: f64, sample: &PairSampleSpec, tol: f64) -> Result<EnrichmentReport> {
    check_common(CheckKind::Enriched, map, b, sample, tol)
}

/// Checks the *-b-enrichment inequality on best-approximation points.
///
/// Multiple best approximations (finite images) are all enumerated: every
/// `u_x` must find some `u_y`. Both orientations of each pair are checked.
pub fn check_star_b_enriched(
    map: &MultiMap,
    b: f64,
    sample: &PairSampleSpec,
    tol: f64,
) -> Result<EnrichmentReport> {
    check_common(CheckKind::StarEnriched, map, b, sample, tol)
}

/// Multivalued nonexpansiveness, `H(Tx, Ty) ≤ ‖x − y‖`.
pub fn check_nonexpansive(map: &MultiMap, sample: &PairSampleSpec, tol: f64) -> Result<EnrichmentReport> {
    check_b_enriched(map, 0.0, sample, tol)
}

/// Smallest b satisfying the enrichment inequality on every sampled pair.
///
/// Each pair is bisected on `[0, b_max]`; feasibility in b is upward closed
/// because `H(A + bx, B + by)` grows by at most `|b' − b|·‖x − y‖`.
pub fn estimate_min_b(map: &MultiMap, sample: &PairSampleSpec, b_max: f64, tol: f64) -> Result<MinBEstimate> {
    if !(b_max > 0.0) || !b_max.is_finite() {
        return invalid(format!("b_max must be finite and > 0, got {b_max}"));
    }
    if !(tol > 0.0) {
        return invalid(format!("tolerance must be > 0, got {tol}"));
    }
    let plan = plan(map, sample)?;
    let pts = &plan.points;
    let images = pts.par_iter().map(|p| map.evaluate(p)).collect::<Result<Vec<_>>>()?;

    let per_pair: Vec<(f64, usize, usize, Option<f64>)> = plan
        .pairs
        .par_iter()
        .map(|&(i, j)| {
            let mut res: Option<f64> = None;
            let mut feasible = |b: f64| -> Result<bool> {
                let (r, h) = enriched_ratio(b, &pts[i], &images[i], &pts[j], &images[j])?;
                if let Some(h) = h {
                    res = Some(res.map_or(h, |o: f64| o.max(h)));
                }
                Ok(r <= b + 1.0)
            };
            let need = if feasible(0.0)? {
                0.0
            } else if !feasible(b_max)? {
                f64::INFINITY
            } else {
                let (mut lo, mut hi) = (0.0, b_max);
                for _ in 0..BISECTION_ITERS {
                    if hi - lo <= tol {
                        break;
                    }
                    let mid = 0.5 * (lo + hi);
                    if feasible(mid)? {
                        hi = mid;
                    } else {
                        lo = mid;
                    }
                }
                hi
            };
            Ok((need, i, j, res))
        })
        .collect::<Result<Vec<_>>>()?;

    let infeasible_pairs = per_pair.iter().filter(|p| p.0.is_infinite()).count();
    let mut best: Option<(f64, usize, usize)> = None;
    let mut resolution = None;
    for &(need, i, j, r) in &per_pair {
        if let Some(r) = r {
            resolution = Some(resolution.map_or(r, |o: f64| o.max(r)));
        }
        let cand = (need, i, j);
        best = match best {
            None => Some(cand),
            Some(cur) if better(pts, cand, cur) == Ordering::Less => Some(cand),
            keep => keep,
        };
    }
    let (b, witness) = match best {
        Some((b, i, j)) => (b, Some((pts[i].clone(), pts[j].clone()))),
        None => return invalid("the pair sample is empty: no pair reached min_separation"),
    };
    Ok(MinBEstimate {
        b,
        witness,
        pairs_checked: plan.pairs.len(),
        pairs_skipped: plan.skipped,
        infeasible_pairs,
        b_max,
        resolution,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::multimap::VectorFn;

    fn iv(lo: f64, hi: f64) -> CompactSet {
        CompactSet::interval(lo, hi).unwrap()
    }

    fn lift_neg3() -> MultiMap {
        MultiMap::single_valued(VectorFn::Linear { k: -3.0 }, iv(-2.0, 2.0)).unwrap()
    }

    #[test]
    fn paper_example_is_not_nonexpansive() {
        let r = check_b_enriched(&MultiMap::paper_example(), 0.0, &PairSampleSpec::grid(200), DEFAULT_TOL).unwrap();
        assert_eq!(r.verdict, Verdict::Fail);
        assert!(r.worst_ratio >= 6.0 - 1e-9);
        // the largest absolute violation is the pair (1/2, 1) with H = 3
        let (x, y) = &r.violation_witness;
        assert_eq!((x.coords()[0], y.coords()[0]), (0.5, 1.0));
        assert!((r.violation_ratio - 6.0).abs() < 1e-12);
        assert!((r.max_violation - 2.5).abs() < 1e-12);
        // the ratio itself peaks for close pairs near 1/2, approaching 16
        assert!(r.worst_ratio > 15.0 && r.worst_ratio < 16.0);
        assert_eq!(r.witness.0.coords()[0], 0.5);
    }

    #[test]
    fn constant_map_passes_for_any_b() {
        let m = MultiMap::constant(iv(0.0, 3.0), iv(-1.0, 1.0)).unwrap();
        for b in [0.0, 0.5, 4.0] {
            let r = check_b_enriched(&m, b, &PairSampleSpec::grid(50), DEFAULT_TOL).unwrap();
            assert!(r.passed());
            assert!(r.worst_ratio <= 1.0f64.max(b) + 1e-12);
        }
    }

    #[test]
    fn linear_scale_is_one_enriched() {
        let m = MultiMap::linear_scale(-3.0, iv(-2.0, 2.0)).unwrap();
        let r = check_b_enriched(&m, 1.0, &PairSampleSpec::grid(40), DEFAULT_TOL).unwrap();
        assert!(r.passed());
        assert!((r.worst_ratio - 2.0).abs() < 1e-12);
        let r = check_b_enriched(&m, 0.9, &PairSampleSpec::grid(40), DEFAULT_TOL).unwrap();
        assert!(!r.passed());
    }

    #[test]
    fn star_check_on_linear_lift() {
        let r = check_star_b_enriched(&lift_neg3(), 1.0, &PairSampleSpec::grid(40), DEFAULT_TOL).unwrap();
        assert!(r.passed());
        assert!((r.worst_ratio - 2.0).abs() < 1e-9);
        let r = check_star_b_enriched(&lift_neg3(), 0.0, &PairSampleSpec::grid(40), DEFAULT_TOL).unwrap();
        assert!(!r.passed());
        assert!((r.worst_ratio - 3.0).abs() < 1e-9);
    }

    #[test]
    fn star_check_enumerates_finite_minimizers() {
        // Tx = {−1, 1} everywhere; at x = 0 both points are best approximations.
        let m = MultiMap::constant(
            CompactSet::finite(vec![Point::scalar(-1.0), Point::scalar(1.0)]).unwrap(),
            iv(-0.5, 0.5),
        )
        .unwrap();
        let r = check_star_b_enriched(&m, 0.0, &PairSampleSpec::grid(3), DEFAULT_TOL).unwrap();
        // pair (0, 0.5): u_x ∈ {−1, 1}, u_y = 1, so u_x = −1 forces ratio 2/0.5 = 4
        assert!((r.worst_ratio - 4.0).abs() < 1e-12, "{r:?}");
    }

    #[test]
    fn identity_lift_is_nonexpansive() {
        let m = MultiMap::single_valued(VectorFn::Identity, iv(0.0, 1.0)).unwrap();
        let r = check_nonexpansive(&m, &PairSampleSpec::grid(30), DEFAULT_TOL).unwrap();
        assert!(r.passed());
        assert!((r.worst_ratio - 1.0).abs() < 1e-12);
    }

    #[test]
    fn estimate_simple_maps() {
        let m = MultiMap::linear_scale(-3.0, iv(-2.0, 2.0)).unwrap();
        let e = estimate_min_b(&m, &PairSampleSpec::grid(30), DEFAULT_B_MAX, 1e-9).unwrap();
        assert!((e.b - 1.0).abs() < 1e-8, "{e:?}");
        let c = MultiMap::constant(iv(0.0, 3.0), iv(-1.0, 1.0)).unwrap();
        let e = estimate_min_b(&c, &PairSampleSpec::grid(30), DEFAULT_B_MAX, 1e-9).unwrap();
        assert_eq!(e.b, 0.0);
    }

    #[test]
    fn estimate_reports_infeasible_pairs() {
        // k = 2 > 1: |b + 2| ≤ b + 1 never holds
        let m = MultiMap::linear_scale(2.0, iv(0.0, 1.0)).unwrap();
        let e = estimate_min_b(&m, &PairSampleSpec::grid(5), 8.0, 1e-9).unwrap();
        assert!(e.b.is_infinite());
        assert!(e.witness.is_some());
        assert_eq!(e.infeasible_pairs, e.pairs_checked);
    }

    #[test]
    fn random_pairs_are_deterministic() {
        let m = MultiMap::paper_example();
        let a = check_b_enriched(&m, 7.5, &PairSampleSpec::random(500, 3), DEFAULT_TOL).unwrap();
        let b = check_b_enriched(&m, 7.5, &PairSampleSpec::random(500, 3), DEFAULT_TOL).unwrap();
        assert_eq!(a, b);
        assert!(a.passed());
    }

    #[test]
    fn bad_arguments() {
        let m = MultiMap::paper_example();
        assert!(check_b_enriched(&m, -1.0, &PairSampleSpec::grid(10), DEFAULT_TOL).is_err());
        assert!(check_b_enriched(&m, 0.0, &PairSampleSpec::grid(1), DEFAULT_TOL).is_err());
        assert!(estimate_min_b(&m, &PairSampleSpec::grid(10), 0.0, 1e-9).is_err());
    }
}
