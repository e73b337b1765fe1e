//! Multivalued map descriptors and the operator constructions built on them:
//! averaged maps `T_μ = (1−μ)I + μT`, the best-approximation operator `P_T`
//! and selectors.
//!
//! Maps form a closed descriptor algebra (no callbacks) so that every map can
//! be written down in an experiment config.

mod functions;
pub(crate) mod selector;

pub use functions::{ScalarFn, VectorFn};
pub use selector::SelectorStrategy;

use crate::error::{check_dims, invalid, Error, Result};
use crate::geometry::{CompactSet, Point, MEMBERSHIP_TOL};

/// Samples used to check `f_lo ≤ f_hi` on the domain of an interval band.
const BAND_CHECK_SAMPLES: usize = 10_000;

#[derive(Debug, Clone, PartialEq)]
pub enum MapKind {
    /// `x ↦ [1/x, 1/x²]` on `[½, 1]`.
    PaperExample,
    /// `x ↦ {f(x)}`
    SingleValuedLift(VectorFn),
    /// `x ↦ S`
    ConstantSet(CompactSet),
    /// `x ↦ {k·x}` in one dimension.
    LinearScale1D { k: f64 },
    /// `x ↦ [f_lo(x), f_hi(x)]`
    IntervalBand1D { lo: ScalarFn, hi: ScalarFn },
    /// `x ↦ (1−μ)x + μ·inner(x)`
    Averaged { inner: Box<MultiMap>, mu: f64 },
}

/// A multivalued map `x ↦ T(x)` from a convex domain to compact sets.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiMap {
    kind: MapKind,
    domain: CompactSet,
}

impl MultiMap {
    pub fn new(kind: MapKind, domain: CompactSet) -> Result<Self> {
        domain.validate()?;
        if !domain.is_convex() {
            return invalid("map domain must be a convex set");
        }
        let map = MultiMap { kind, domain };
        map.validate()?;
        Ok(map)
    }

    pub fn paper_example() -> Self {
        MultiMap {
            kind: MapKind::PaperExample,
            domain: CompactSet::Interval { lo: 0.5, hi: 1.0 },
        }
    }

    pub fn single_valued(f: VectorFn, domain: CompactSet) -> Result<Self> {
        MultiMap::new(MapKind::SingleValuedLift(f), domain)
    }

    pub fn constant(set: CompactSet, domain: CompactSet) -> Result<Self> {
        MultiMap::new(MapKind::ConstantSet(set), domain)
    }

    pub fn linear_scale(k: f64, domain: CompactSet) -> Result<Self> {
        MultiMap::new(MapKind::LinearScale1D { k }, domain)
    }

    pub fn interval_band(lo: ScalarFn, hi: ScalarFn, domain: CompactSet) -> Result<Self> {
        MultiMap::new(MapKind::IntervalBand1D { lo, hi }, domain)
    }

    /// Wraps the map into `T_μ = (1−μ)I + μT` for `μ ∈ (0, 1]`.
    pub fn averaged(&self, mu: f64) -> Result<Self> {
        if !(mu > 0.0 && mu <= 1.0) {
            return invalid(format!("mu must lie in (0, 1], got {mu}"));
        }
        Ok(MultiMap {
            kind: MapKind::Averaged {
                inner: Box::new(self.clone()),
                mu,
            },
            domain: self.domain.clone(),
        })
    }

    fn validate(&self) -> Result<()> {
        let dim = self.domain.dim();
        match &self.kind {
            MapKind::PaperExample => {
                if self.domain != (CompactSet::Interval { lo: 0.5, hi: 1.0 }) {
                    return invalid("paper-example is defined on [0.5, 1] only");
                }
            }
            MapKind::SingleValuedLift(f) => {
                if let Some(d) = f.required_dim() {
                    check_dims(d, dim)?;
                }
                if let VectorFn::Reciprocal { .. } = f {
                    let (lo, hi) = self.domain.to_interval_1d().expect("1D convex domain");
                    if lo <= 0.0 && hi >= 0.0 {
                        return invalid("reciprocal lift needs a domain excluding 0");
                    }
                }
            }
            MapKind::ConstantSet(s) => {
                s.validate()?;
                check_dims(dim, s.dim())?;
            }
            MapKind::LinearScale1D { k } => {
                check_dims(1, dim)?;
                if !k.is_finite() {
                    return invalid("linear scale factor must be finite");
                }
            }
            MapKind::IntervalBand1D { lo, hi } => {
                check_dims(1, dim)?;
                let (a, b) = self.domain.to_interval_1d().expect("1D convex domain");
                for (name, f) in [("lo", lo), ("hi", hi)] {
                    if !f.is_monotone_on(a, b) {
                        return invalid(format!("band endpoint {name} is not monotone on [{a}, {b}]"));
                    }
                }
                for i in 0..BAND_CHECK_SAMPLES {
                    let t = a + (b - a) * i as f64 / (BAND_CHECK_SAMPLES - 1) as f64;
                    let (l, h) = (lo.eval(t), hi.eval(t));
                    if !(l <= h) || !l.is_finite() || !h.is_finite() {
                        return invalid(format!("band endpoints violate lo ≤ hi at x = {t} ({l} > {h})"));
                    }
                }
            }
            MapKind::Averaged { inner, mu } => {
                if !(*mu > 0.0 && *mu <= 1.0) {
                    return invalid(format!("mu must lie in (0, 1], got {mu}"));
                }
                if inner.domain != self.domain {
                    return invalid("averaged map must share the inner map's domain");
                }
                inner.validate()?;
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> &MapKind {
        &self.kind
    }

    pub fn domain(&self) -> &CompactSet {
        &self.domain
    }

    pub fn dim(&self) -> usize {
        self.domain.dim()
    }

    /// Fails with [`Error::OutsideDomain`] when `x` is farther than the
    /// membership tolerance from the domain.
    pub fn check_in_domain(&self, x: &Point) -> Result<()> {
        check_dims(self.dim(), x.dim())?;
        let r = self.domain.dist_point(x)?;
        if r.distance <= MEMBERSHIP_TOL {
            return Ok(());
        }
        let (coordinate, excess) = x
            .coords()
            .iter()
            .zip(r.witness.coords())
            .map(|(a, b)| (a - b).abs())
            .enumerate()
            .max_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        Err(Error::OutsideDomain {
            point: x.coords().to_vec(),
            coordinate,
            excess,
        })
    }

    /// The image set `T(x)`.
    pub fn evaluate(&self, x: &Point) -> Result<CompactSet> {
        self.check_in_domain(x)?;
        self.eval_unchecked(x)
    }

    fn eval_unchecked(&self, x: &Point) -> Result<CompactSet> {
        Ok(match &self.kind {
            MapKind::PaperExample => {
                // x may sit a hair past 1 within the domain tolerance
                let t = x.coords()[0];
                let (a, b) = (1.0 / t, 1.0 / (t * t));
                CompactSet::Interval {
                    lo: a.min(b),
                    hi: a.max(b),
                }
            }
            MapKind::SingleValuedLift(f) => CompactSet::singleton(f.apply(x)?),
            MapKind::ConstantSet(s) => s.clone(),
            MapKind::LinearScale1D { k } => CompactSet::singleton(x.scaled(*k)),
            MapKind::IntervalBand1D { lo, hi } => {
                let t = x.coords()[0];
                CompactSet::interval(lo.eval(t), hi.eval(t))?
            }
            MapKind::Averaged { inner, mu } => {
                let img = inner.eval_unchecked(x)?;
                CompactSet::affine_combine(1.0 - mu, x, *mu, &img)?
            }
        })
    }

    /// `P_T(x)`: the point of `T(x)` nearest to `x`.
    pub fn best_approx(&self, x: &Point) -> Result<Point> {
        Ok(self.evaluate(x)?.dist_point(x)?.witness)
    }

    /// Every best-approximation point of `x` in `T(x)` (within the
    /// membership tolerance), in lexicographic order.
    pub fn best_approx_candidates(&self, x: &Point) -> Result<Vec<Point>> {
        self.evaluate(x)?.nearest_candidates(x)
    }

    /// `d(x, T(x))`.
    pub fn residual(&self, x: &Point) -> Result<f64> {
        Ok(self.evaluate(x)?.dist_point(x)?.distance)
    }

    /// A member of `T(x)` chosen by `strategy`. `ordinal` distinguishes
    /// repeated random draws at the same point.
    pub fn select(&self, x: &Point, strategy: &SelectorStrategy, ordinal: u64) -> Result<Point> {
        let image = self.evaluate(x)?;
        strategy.pick(x, &image, ordinal)
    }

    /// A short human-readable name of the map kind.
    pub fn describe(&self) -> String {
        match &self.kind {
            MapKind::PaperExample => "paper-example".into(),
            MapKind::SingleValuedLift(f) => format!("single-valued {f:?}"),
            MapKind::ConstantSet(s) => format!("constant {}", s.kind_name()),
            MapKind::LinearScale1D { k } => format!("linear-scale k={k}"),
            MapKind::IntervalBand1D { .. } => "interval-band".into(),
            MapKind::Averaged { inner, mu } => format!("averaged mu={mu} of {}", inner.describe()),
        }
    }
}

/// `evaluate(map, x)`.
pub fn evaluate(map: &MultiMap, x: &Point) -> Result<CompactSet> {
    map.evaluate(x)
}

/// `averaged(map, mu)`.
pub fn averaged(map: &MultiMap, mu: f64) -> Result<MultiMap> {
    map.averaged(mu)
}

/// `best_approx(map, x)`.
pub fn best_approx(map: &MultiMap, x: &Point) -> Result<Point> {
    map.best_approx(x)
}

/// `select(map, x, strategy)` with call ordinal 0.
pub fn select(map: &MultiMap, x: &Point, strategy: &SelectorStrategy) -> Result<Point> {
    map.select(x, strategy, 0)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::geometry::hausdorff;

    fn p(x: f64) -> Point {
        Point::scalar(x)
    }

    #[test]
    fn paper_example_images() {
        let t = MultiMap::paper_example();
        assert_eq!(t.evaluate(&p(0.5)).unwrap(), CompactSet::Interval { lo: 2.0, hi: 4.0 });
        assert_eq!(t.evaluate(&p(1.0)).unwrap(), CompactSet::Interval { lo: 1.0, hi: 1.0 });
        let err = t.evaluate(&p(1.2)).unwrap_err();
        assert!(matches!(err, Error::OutsideDomain { coordinate: 0, .. }), "{err:?}");
    }

    #[test]
    fn averaging_keeps_fixed_points() {
        let t = MultiMap::paper_example().averaged(2.0 / 7.0).unwrap();
        let img = t.evaluate(&p(1.0)).unwrap();
        let s = img.as_singleton().unwrap();
        assert!((s.coords()[0] - 1.0).abs() < 1e-15);
    }

    #[test]
    fn averaged_image_endpoints() {
        let mu = 2.0 / 7.0;
        let t = MultiMap::paper_example();
        let img = t.averaged(mu).unwrap().evaluate(&p(0.5)).unwrap();
        let CompactSet::Interval { lo, hi } = img else { panic!() };
        assert!((lo - (0.5 * 5.0 / 7.0 + 2.0 * 2.0 / 7.0)).abs() < 1e-15);
        assert!((hi - (0.5 * 5.0 / 7.0 + 4.0 * 2.0 / 7.0)).abs() < 1e-15);
        // grid image of (1−μ)x + μy, y ∈ [2, 4]
        let pts: Vec<f64> = (0..=4000).map(|k| (1.0 - mu) * 0.5 + mu * (2.0 + k as f64 * 5e-4)).collect();
        assert!((pts[0] - lo).abs() < 1e-12 && (pts[4000] - hi).abs() < 1e-12);
    }

    #[test]
    fn mu_one_is_identity_wrap() {
        let t = MultiMap::paper_example();
        let a = t.averaged(1.0).unwrap();
        for x in [0.5, 0.6, 0.77, 1.0] {
            let h = hausdorff(&a.evaluate(&p(x)).unwrap(), &t.evaluate(&p(x)).unwrap()).unwrap();
            assert_eq!(h.value, 0.0);
        }
        assert!(t.averaged(0.0).is_err());
        assert!(t.averaged(1.5).is_err());
    }

    #[test]
    fn best_approx_examples() {
        let t = MultiMap::paper_example();
        let u = t.best_approx(&p(0.6)).unwrap();
        assert!((u.coords()[0] - 1.0 / 0.6).abs() < 1e-15);
        // grid scan of the image [1/0.6, 1/0.36] for the point nearest 0.6
        let (lo, hi) = (1.0 / 0.6, 1.0 / 0.36);
        let n = 100_000;
        let nearest = (0..=n)
            .map(|k| lo + (hi - lo) * k as f64 / n as f64)
            .min_by(|a, b| (a - 0.6).abs().total_cmp(&(b - 0.6).abs()))
            .unwrap();
        assert!((nearest - u.coords()[0]).abs() < 1e-12);

        assert_eq!(t.best_approx(&p(1.0)).unwrap(), p(1.0));
        let lift = MultiMap::single_valued(VectorFn::Linear { k: -3.0 }, CompactSet::Interval { lo: -2.0, hi: 2.0 }).unwrap();
        assert_eq!(lift.best_approx(&p(0.5)).unwrap(), p(-1.5));
    }

    #[test]
    fn band_must_be_ordered() {
        let bad = MultiMap::interval_band(
            ScalarFn::Linear { slope: 1.0, intercept: 0.0 },
            ScalarFn::Constant { c: 0.5 },
            CompactSet::Interval { lo: 0.0, hi: 1.0 },
        );
        assert!(bad.is_err());
        let ok = MultiMap::interval_band(
            ScalarFn::Linear { slope: 0.5, intercept: 0.0 },
            ScalarFn::Linear { slope: 0.5, intercept: 0.25 },
            CompactSet::Interval { lo: 0.0, hi: 1.0 },
        );
        assert!(ok.is_ok());
    }

    #[test]
    fn constructors_reject_bad_descriptors() {
        let d2 = CompactSet::boxed(Point::from([0.0, 0.0]), Point::from([1.0, 1.0])).unwrap();
        assert!(MultiMap::linear_scale(2.0, d2.clone()).is_err());
        assert!(MultiMap::constant(CompactSet::Interval { lo: 0.0, hi: 1.0 }, d2.clone()).is_err());
        assert!(MultiMap::single_valued(VectorFn::Rotation { angle: 1.0, scale: 1.0 }, CompactSet::Interval { lo: 0.0, hi: 1.0 }).is_err());
        let finite = CompactSet::finite(vec![p(0.0), p(1.0)]).unwrap();
        assert!(MultiMap::constant(CompactSet::singleton(p(0.0)), finite).is_err());
        assert!(MultiMap::new(MapKind::PaperExample, CompactSet::Interval { lo: 0.0, hi: 1.0 }).is_err());
    }
}
