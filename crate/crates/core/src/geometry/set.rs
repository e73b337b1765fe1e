use crate::error::{check_dims, invalid, Result};

use super::point::{lex_cmp, Point};
use super::projection::project_onto_hull;
use super::MEMBERSHIP_TOL;

/// Compact subsets of ℝⁿ at desk scale.
///
/// `FiniteSet` is the only non-convex variant. Construct through the checked
/// constructors ([`CompactSet::interval`] and friends) or call
/// [`CompactSet::validate`] after building a variant by hand.
#[derive(Debug, Clone, PartialEq)]
pub enum CompactSet {
    Interval { lo: f64, hi: f64 },
    Box { lo: Point, hi: Point },
    Ball { center: Point, radius: f64 },
    /// Convex hull of the vertices.
    Polytope { vertices: Vec<Point> },
    FiniteSet { points: Vec<Point> },
}

/// Distance from a point to a set together with the nearest point.
#[derive(Debug, Clone, PartialEq)]
pub struct SetDistanceResult {
    pub distance: f64,
    pub witness: Point,
}

impl CompactSet {
    pub fn interval(lo: f64, hi: f64) -> Result<Self> {
        let s = CompactSet::Interval { lo, hi };
        s.validate()?;
        Ok(s)
    }

    pub fn boxed(lo: Point, hi: Point) -> Result<Self> {
        let s = CompactSet::Box { lo, hi };
        s.validate()?;
        Ok(s)
    }

    pub fn ball(center: Point, radius: f64) -> Result<Self> {
        let s = CompactSet::Ball { center, radius };
        s.validate()?;
        Ok(s)
    }

    pub fn polytope(vertices: Vec<Point>) -> Result<Self> {
        let s = CompactSet::Polytope { vertices };
        s.validate()?;
        Ok(s)
    }

    pub fn finite(points: Vec<Point>) -> Result<Self> {
        let s = CompactSet::FiniteSet { points };
        s.validate()?;
        Ok(s)
    }

    pub fn singleton(p: Point) -> Self {
        CompactSet::FiniteSet { points: vec![p] }
    }

    pub fn validate(&self) -> Result<()> {
        match self {
            CompactSet::Interval { lo, hi } => {
                if !lo.is_finite() || !hi.is_finite() {
                    return invalid("interval endpoints must be finite");
                }
                if lo > hi {
                    return invalid(format!("interval has lo {lo} > hi {hi}"));
                }
            }
            CompactSet::Box { lo, hi } => {
                check_dims(lo.dim(), hi.dim())?;
                if let Some(i) = (0..lo.dim()).find(|&i| lo.coords()[i] > hi.coords()[i]) {
                    return invalid(format!("box has lo > hi on axis {i}"));
                }
            }
            CompactSet::Ball { radius, .. } => {
                if !radius.is_finite() || *radius < 0.0 {
                    return invalid(format!("ball radius must be finite and ≥ 0, got {radius}"));
                }
            }
            CompactSet::Polytope { vertices: pts } | CompactSet::FiniteSet { points: pts } => {
                let Some(first) = pts.first() else {
                    return invalid("point list must be nonempty");
                };
                for p in pts {
                    check_dims(first.dim(), p.dim())?;
                }
            }
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        match self {
            CompactSet::Interval { .. } => 1,
            CompactSet::Box { lo, .. } => lo.dim(),
            CompactSet::Ball { center, .. } => center.dim(),
            CompactSet::Polytope { vertices: pts } | CompactSet::FiniteSet { points: pts } => {
                pts[0].dim()
            }
        }
    }

    pub fn is_convex(&self) -> bool {
        match self {
            CompactSet::FiniteSet { points } => points.len() == 1,
            _ => true,
        }
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            CompactSet::Interval { .. } => "interval",
            CompactSet::Box { .. } => "box",
            CompactSet::Ball { .. } => "ball",
            CompactSet::Polytope { .. } => "polytope",
            CompactSet::FiniteSet { .. } => "finite",
        }
    }

    /// The unique point of a singleton, however it is represented.
    pub fn as_singleton(&self) -> Option<Point> {
        match self {
            CompactSet::Interval { lo, hi } if lo == hi => Some(Point::scalar(*lo)),
            CompactSet::Box { lo, hi } if lo == hi => Some(lo.clone()),
            CompactSet::Ball { center, radius } if *radius == 0.0 => Some(center.clone()),
            CompactSet::FiniteSet { points } if points.len() == 1 => Some(points[0].clone()),
            CompactSet::Polytope { vertices } if vertices.iter().all(|v| v == &vertices[0]) => {
                Some(vertices[0].clone())
            }
            _ => None,
        }
    }

    /// A finite list whose convex hull is the set, when one exists.
    ///
    /// For a `FiniteSet` this is the point list itself (whose hull is a superset).
    pub fn extreme_points(&self) -> Option<Vec<Point>> {
        match self {
            CompactSet::Interval { lo, hi } => {
                if lo == hi {
                    Some(vec![Point::scalar(*lo)])
                } else {
                    Some(vec![Point::scalar(*lo), Point::scalar(*hi)])
                }
            }
            CompactSet::Box { lo, hi } => Some(box_corners(lo, hi)),
            CompactSet::Ball { center, radius } => (*radius == 0.0).then(|| vec![center.clone()]),
            CompactSet::Polytope { vertices } => Some(vertices.clone()),
            CompactSet::FiniteSet { points } => Some(points.clone()),
        }
    }

    /// Componentwise bounding box `(lo, hi)`.
    pub fn bounding_box(&self) -> (Point, Point) {
        match self {
            CompactSet::Interval { lo, hi } => (Point::scalar(*lo), Point::scalar(*hi)),
            CompactSet::Box { lo, hi } => (lo.clone(), hi.clone()),
            CompactSet::Ball { center, radius } => (
                Point::from_vec(center.coords().iter().map(|c| c - radius).collect()),
                Point::from_vec(center.coords().iter().map(|c| c + radius).collect()),
            ),
            CompactSet::Polytope { vertices: pts } | CompactSet::FiniteSet { points: pts } => {
                let d = pts[0].dim();
                let mut lo = vec![f64::INFINITY; d];
                let mut hi = vec![f64::NEG_INFINITY; d];
                for p in pts {
                    for (k, c) in p.coords().iter().enumerate() {
                        lo[k] = lo[k].min(*c);
                        hi[k] = hi[k].max(*c);
                    }
                }
                (Point::from_vec(lo), Point::from_vec(hi))
            }
        }
    }

    /// Rewrites a one-dimensional convex set as an interval.
    pub fn to_interval_1d(&self) -> Option<(f64, f64)> {
        if self.dim() != 1 || !self.is_convex() {
            return None;
        }
        let (lo, hi) = self.bounding_box();
        Some((lo.coords()[0], hi.coords()[0]))
    }

    /// Membership with the library-wide tolerance.
    pub fn contains(&self, x: &Point) -> Result<bool> {
        Ok(self.dist_point(x)?.distance <= MEMBERSHIP_TOL)
    }

    /// `inf over s ∈ S of ‖x − s‖` and the point attaining it.
    ///
    /// For convex variants the witness is unique. For a `FiniteSet` ties
    /// within the membership tolerance resolve to the lexicographically
    /// smallest attaining point.
    pub fn dist_point(&self, x: &Point) -> Result<SetDistanceResult> {
        check_dims(self.dim(), x.dim())?;
        let witness = match self {
            CompactSet::Interval { lo, hi } => Point::scalar(x.coords()[0].clamp(*lo, *hi)),
            CompactSet::Box { lo, hi } => Point::from_vec(
                x.coords()
                    .iter()
                    .zip(lo.coords().iter().zip(hi.coords()))
                    .map(|(c, (l, h))| c.clamp(*l, *h))
                    .collect(),
            ),
            CompactSet::Ball { center, radius } => {
                let offset = x - center;
                let r = offset.norm();
                if r <= *radius {
                    x.clone()
                } else {
                    Point::lin_comb(1.0, center, radius / r, &offset)
                }
            }
            CompactSet::Polytope { vertices } => {
                if vertices.len() == 1 {
                    vertices[0].clone()
                } else {
                    let refs: Vec<&[f64]> = vertices.iter().map(|v| v.coords()).collect();
                    Point::from_vec(project_onto_hull(x.coords(), &refs).point)
                }
            }
            CompactSet::FiniteSet { points } => {
                let dmin = points.iter().map(|p| p.dist(x)).fold(f64::INFINITY, f64::min);
                points
                    .iter()
                    .filter(|p| p.dist(x) <= dmin + MEMBERSHIP_TOL)
                    .min_by(|a, b| lex_cmp(a.coords(), b.coords()))
                    .unwrap()
                    .clone()
            }
        };
        Ok(SetDistanceResult {
            distance: x.dist(&witness),
            witness,
        })
    }

    /// All nearest points within the membership tolerance of the minimum
    /// distance, in lexicographic order. A single point for convex variants.
    pub fn nearest_candidates(&self, x: &Point) -> Result<Vec<Point>> {
        match self {
            CompactSet::FiniteSet { points } => {
                check_dims(self.dim(), x.dim())?;
                let dmin = points.iter().map(|p| p.dist(x)).fold(f64::INFINITY, f64::min);
                let mut out: Vec<Point> = points
                    .iter()
                    .filter(|p| p.dist(x) <= dmin + MEMBERSHIP_TOL)
                    .cloned()
                    .collect();
                out.sort_by(|a, b| a.lex_cmp(b));
                out.dedup();
                Ok(out)
            }
            _ => Ok(vec![self.dist_point(x)?.witness]),
        }
    }

    /// `{s + v : s ∈ S}`; the variant is preserved.
    pub fn translate(&self, v: &Point) -> Result<Self> {
        check_dims(self.dim(), v.dim())?;
        Ok(match self {
            CompactSet::Interval { lo, hi } => {
                let t = v.coords()[0];
                CompactSet::Interval { lo: lo + t, hi: hi + t }
            }
            CompactSet::Box { lo, hi } => CompactSet::Box {
                lo: lo + v,
                hi: hi + v,
            },
            CompactSet::Ball { center, radius } => CompactSet::Ball {
                center: center + v,
                radius: *radius,
            },
            CompactSet::Polytope { vertices } => CompactSet::Polytope {
                vertices: vertices.iter().map(|p| p + v).collect(),
            },
            CompactSet::FiniteSet { points } => CompactSet::FiniteSet {
                points: points.iter().map(|p| p + v).collect(),
            },
        })
    }

    /// `{a·s : s ∈ S}` for `a ≥ 0`. Scaling by zero collapses to the singleton `{0}`.
    pub fn scale(&self, a: f64) -> Result<Self> {
        if !(a >= 0.0) || !a.is_finite() {
            return invalid(format!("scale factor must be finite and ≥ 0, got {a}"));
        }
        if a == 0.0 {
            return Ok(CompactSet::singleton(Point::zeros(self.dim())));
        }
        Ok(match self {
            CompactSet::Interval { lo, hi } => CompactSet::Interval {
                lo: a * lo,
                hi: a * hi,
            },
            CompactSet::Box { lo, hi } => CompactSet::Box {
                lo: a * lo,
                hi: a * hi,
            },
            CompactSet::Ball { center, radius } => CompactSet::Ball {
                center: a * center,
                radius: a * radius,
            },
            CompactSet::Polytope { vertices } => CompactSet::Polytope {
                vertices: vertices.iter().map(|p| a * p).collect(),
            },
            CompactSet::FiniteSet { points } => CompactSet::FiniteSet {
                points: points.iter().map(|p| a * p).collect(),
            },
        })
    }

    /// `a·x + b·S`, the image shape of the averaged map `(1−μ)x + μTx`.
    pub fn affine_combine(a: f64, x: &Point, b: f64, set: &CompactSet) -> Result<Self> {
        if !(a >= 0.0) {
            return invalid(format!("affine weight a must be ≥ 0, got {a}"));
        }
        check_dims(set.dim(), x.dim())?;
        set.scale(b)?.translate(&(a * x))
    }
}

/// Nearest point of `S` to `x`.
pub fn nearest_point(x: &Point, set: &CompactSet) -> Result<Point> {
    Ok(set.dist_point(x)?.witness)
}

pub fn dist_point_set(x: &Point, set: &CompactSet) -> Result<SetDistanceResult> {
    set.dist_point(x)
}

pub fn translate(set: &CompactSet, v: &Point) -> Result<CompactSet> {
    set.translate(v)
}

pub fn scale(set: &CompactSet, a: f64) -> Result<CompactSet> {
    set.scale(a)
}

pub fn affine_combine(a: f64, x: &Point, b: f64, set: &CompactSet) -> Result<CompactSet> {
    CompactSet::affine_combine(a, x, b, set)
}

/// `l·x + (1−l)·y` for `l ∈ [0, 1]`.
pub fn convex_combination(l: f64, x: &Point, y: &Point) -> Result<Point> {
    if !(0.0..=1.0).contains(&l) {
        return invalid(format!("convex weight must lie in [0, 1], got {l}"));
    }
    check_dims(x.dim(), y.dim())?;
    Ok(Point::lin_comb(l, x, 1.0 - l, y))
}

const MAX_BOX_DIM: usize = 20;

fn box_corners(lo: &Point, hi: &Point) -> Vec<Point> {
    let d = lo.dim();
    assert!(d <= MAX_BOX_DIM, "box corner enumeration limited to {MAX_BOX_DIM} dims");
    let free: Vec<usize> = (0..d).filter(|&k| lo.coords()[k] < hi.coords()[k]).collect();
    (0..1usize << free.len())
        .map(|mask| {
            let mut c = lo.coords().to_vec();
            for (bit, &k) in free.iter().enumerate() {
                if mask >> bit & 1 == 1 {
                    c[k] = hi.coords()[k];
                }
            }
            Point::from_vec(c)
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p1(x: f64) -> Point {
        Point::scalar(x)
    }

    #[test]
    fn interval_distance_examples() {
        let s = CompactSet::interval(2.0, 4.0).unwrap();
        let r = s.dist_point(&p1(1.0)).unwrap();
        assert_eq!(r.distance, 1.0);
        assert_eq!(r.witness, p1(2.0));
        let r = s.dist_point(&p1(3.0)).unwrap();
        assert_eq!(r.distance, 0.0);
        assert_eq!(r.witness, p1(3.0));
    }

    #[test]
    fn polytope_distance_matches_sampled_hull() {
        let s = CompactSet::polytope(vec![
            Point::from([1.0, 0.0]),
            Point::from([0.0, 1.0]),
            Point::from([1.0, 1.0]),
        ])
        .unwrap();
        let x = Point::from([0.0, 0.0]);
        let r = s.dist_point(&x).unwrap();
        // Frozen from a 1e-4 barycentric scan of the triangle: min distance
        // 0.70710678..., attained at (0.5, 0.5).
        assert!((r.distance - std::f64::consts::FRAC_1_SQRT_2).abs() < 1e-12);
        assert!(r.witness.dist(&Point::from([0.5, 0.5])) < 1e-12);

        let n = 10_000;
        let mut best = f64::INFINITY;
        for i in 0..=n {
            for j in 0..=(n - i) {
                let (a, b) = (i as f64 / n as f64, j as f64 / n as f64);
                let c = 1.0 - a - b;
                let q = [a + c, b + c];
                best = best.min((q[0] * q[0] + q[1] * q[1]).sqrt());
            }
        }
        assert!((best - r.distance).abs() < 1e-4);
    }

    #[test]
    fn nearest_point_examples() {
        let s = CompactSet::interval(1.0, 2.78).unwrap();
        assert_eq!(nearest_point(&p1(0.6), &s).unwrap(), p1(1.0));
        assert_eq!(nearest_point(&p1(1.5), &s).unwrap(), p1(1.5));
        let ball = CompactSet::ball(Point::from([0.0, 0.0]), 1.0).unwrap();
        assert_eq!(
            nearest_point(&Point::from([3.0, 0.0]), &ball).unwrap(),
            Point::from([1.0, 0.0])
        );
    }

    #[test]
    fn clamp_formula_checked_by_grid_scan() {
        let s = CompactSet::interval(1.0, 2.78).unwrap();
        let x = 0.6;
        let (mut best, mut arg) = (f64::INFINITY, 0.0);
        for k in 0..=178_000 {
            let t = 1.0 + k as f64 * 1e-5;
            if (t - x).abs() < best {
                best = (t - x).abs();
                arg = t;
            }
        }
        assert_eq!(arg, 1.0);
        assert_eq!(nearest_point(&p1(x), &s).unwrap(), p1(arg));
    }

    #[test]
    fn finite_ties_break_lexicographically() {
        let s = CompactSet::finite(vec![
            Point::from([1.0, 0.0]),
            Point::from([-1.0, 0.0]),
            Point::from([0.0, 1.0]),
        ])
        .unwrap();
        let w = nearest_point(&Point::from([0.0, 0.0]), &s).unwrap();
        assert_eq!(w, Point::from([-1.0, 0.0]));
        assert_eq!(s.nearest_candidates(&Point::from([0.0, 0.0])).unwrap().len(), 3);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let s = CompactSet::interval(0.0, 1.0).unwrap();
        assert!(s.dist_point(&Point::from([0.0, 0.0])).is_err());
        assert!(s.translate(&Point::from([1.0, 1.0])).is_err());
    }

    #[test]
    fn translate_and_scale() {
        let s = CompactSet::interval(1.0, 4.0).unwrap();
        assert_eq!(
            s.translate(&p1(1.25)).unwrap(),
            CompactSet::Interval { lo: 2.25, hi: 5.25 }
        );
        let b = CompactSet::ball(Point::from([0.0, 0.0]), 1.0).unwrap();
        assert_eq!(
            b.translate(&Point::from([1.0, 1.0])).unwrap(),
            CompactSet::Ball {
                center: Point::from([1.0, 1.0]),
                radius: 1.0
            }
        );
        let poly = CompactSet::polytope(vec![Point::from([0.0, 0.0]), Point::from([1.0, 2.0])]).unwrap();
        assert_eq!(
            poly.translate(&Point::from([1.0, -1.0])).unwrap(),
            CompactSet::Polytope {
                vertices: vec![Point::from([1.0, -1.0]), Point::from([2.0, 1.0])]
            }
        );

        let s = CompactSet::interval(2.0, 4.0).unwrap();
        assert_eq!(s.scale(0.5).unwrap(), CompactSet::Interval { lo: 1.0, hi: 2.0 });
        assert_eq!(s.scale(0.0).unwrap(), CompactSet::singleton(p1(0.0)));
        assert_eq!(
            CompactSet::ball(Point::from([1.0, 2.0]), 3.0).unwrap().scale(2.0).unwrap(),
            CompactSet::Ball {
                center: Point::from([2.0, 4.0]),
                radius: 6.0
            }
        );
        assert!(s.scale(-1.0).is_err());
    }

    #[test]
    fn affine_combine_examples() {
        let one = CompactSet::singleton(p1(1.0));
        for mu in [0.1, 0.5, 2.0 / 7.0, 1.0] {
            let img = affine_combine(1.0 - mu, &p1(1.0), mu, &one).unwrap();
            let s = img.as_singleton().unwrap();
            assert!((s.coords()[0] - 1.0).abs() < 1e-15);
        }

        let mu = 2.0 / 7.0;
        let img = affine_combine(1.0 - mu, &p1(0.5), mu, &CompactSet::interval(2.0, 4.0).unwrap()).unwrap();
        let CompactSet::Interval { lo, hi } = img else { panic!() };
        assert!((lo - (0.5 * 5.0 / 7.0 + 4.0 / 7.0)).abs() < 1e-15);
        assert!((hi - (0.5 * 5.0 / 7.0 + 8.0 / 7.0)).abs() < 1e-15);
        // grid image of (1-μ)x + μt, t ∈ [2, 4]
        let image: Vec<f64> = (0..=2000).map(|k| (1.0 - mu) * 0.5 + mu * (2.0 + k as f64 * 1e-3)).collect();
        let (gmin, gmax) = image.iter().fold((f64::INFINITY, f64::NEG_INFINITY), |(a, b), v| (a.min(*v), b.max(*v)));
        assert!((gmin - lo).abs() < 1e-12 && (gmax - hi).abs() < 1e-12);

        let img = affine_combine(0.3, &Point::from([1.0, 1.0]), 0.0, &CompactSet::ball(Point::from([5.0, 5.0]), 1.0).unwrap()).unwrap();
        assert_eq!(img.as_singleton().unwrap(), Point::from([0.3, 0.3]));
    }

    #[test]
    fn convex_combination_examples() {
        let x = Point::from([2.0, 0.0]);
        let y = Point::from([0.0, 2.0]);
        assert_eq!(convex_combination(1.0, &x, &y).unwrap(), x);
        assert_eq!(convex_combination(0.5, &x, &y).unwrap(), Point::from([1.0, 1.0]));
        assert!(convex_combination(1.5, &x, &y).is_err());
    }

    #[test]
    fn invalid_sets_rejected() {
        assert!(CompactSet::interval(2.0, 1.0).is_err());
        assert!(CompactSet::ball(Point::from([0.0]), -1.0).is_err());
        assert!(CompactSet::finite(vec![]).is_err());
        assert!(CompactSet::polytope(vec![Point::from([0.0]), Point::from([0.0, 1.0])]).is_err());
        assert!(CompactSet::boxed(Point::from([0.0, 1.0]), Point::from([1.0, 0.0])).is_err());
    }
}
