//! Pompeiu–Hausdorff distance between compact sets.
//!
//! Exact paths:
//! - one-dimensional sets (every convex 1D set is an interval, finite sets
//!   via gap midpoints);
//! - ball pairs, `‖c_A − c_B‖ + |r_A − r_B|`;
//! - directed distances out of a set with finitely many extreme points into a
//!   convex set (the supremum of a convex function over a polytope sits at a
//!   vertex), and out of any finite set.
//!
//! Directed distances from a ball into a non-ball convex set, and from a
//! convex body into a finite set with two or more points, have no closed form
//! here. Those are evaluated on a lattice of spacing `resolution` projected
//! onto the source set and the result carries that resolution.

use rayon::prelude::*;

use crate::error::{check_dims, invalid, Result};

use super::point::Point;
use super::set::CompactSet;

pub const DEFAULT_FALLBACK_RESOLUTION: f64 = 1e-3;
const MAX_FALLBACK_SAMPLES: f64 = 2e7;

/// A Hausdorff distance value. `resolution` is `None` when the value is
/// exact and otherwise the lattice spacing of the approximation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Hausdorff {
    pub value: f64,
    pub resolution: Option<f64>,
}

impl Hausdorff {
    fn exact(value: f64) -> Self {
        Hausdorff {
            value,
            resolution: None,
        }
    }

    fn approx(value: f64, resolution: f64) -> Self {
        Hausdorff {
            value,
            resolution: Some(resolution),
        }
    }

    pub fn is_exact(&self) -> bool {
        self.resolution.is_none()
    }

    fn join(self, other: Hausdorff) -> Hausdorff {
        let resolution = match (self.resolution, other.resolution) {
            (None, r) | (r, None) => r,
            (Some(a), Some(b)) => Some(a.max(b)),
        };
        Hausdorff {
            value: self.value.max(other.value),
            resolution,
        }
    }
}

/// `H(A, B)` with the default fallback resolution.
pub fn hausdorff(a: &CompactSet, b: &CompactSet) -> Result<Hausdorff> {
    hausdorff_with_resolution(a, b, DEFAULT_FALLBACK_RESOLUTION)
}

pub fn hausdorff_with_resolution(a: &CompactSet, b: &CompactSet, resolution: f64) -> Result<Hausdorff> {
    check_dims(a.dim(), b.dim())?;
    if !(resolution > 0.0) || !resolution.is_finite() {
        return invalid(format!("resolution must be positive, got {resolution}"));
    }
    if let (Some((alo, ahi)), Some((blo, bhi))) = (a.to_interval_1d(), b.to_interval_1d()) {
        return Ok(Hausdorff::exact((alo - blo).abs().max((ahi - bhi).abs())));
    }
    if let (
        CompactSet::Ball { center: ca, radius: ra },
        CompactSet::Ball { center: cb, radius: rb },
    ) = (a, b)
    {
        return Ok(Hausdorff::exact(ca.dist(cb) + (ra - rb).abs()));
    }
    let ab = directed_hausdorff(a, b, resolution)?;
    let ba = directed_hausdorff(b, a, resolution)?;
    Ok(ab.join(ba))
}

/// `sup over a ∈ A of d(a, B)`.
pub fn directed_hausdorff(a: &CompactSet, b: &CompactSet, resolution: f64) -> Result<Hausdorff> {
    check_dims(a.dim(), b.dim())?;

    if let Some(q) = b.as_singleton() {
        let v = match a {
            CompactSet::Ball { center, radius } => center.dist(&q) + radius,
            _ => max_dist_from(&a.extreme_points().expect("non-ball sets have extreme points"), b)?,
        };
        return Ok(Hausdorff::exact(v));
    }

    if a.dim() == 1 {
        return directed_1d(a, b).map(Hausdorff::exact);
    }

    match a {
        CompactSet::FiniteSet { points } => Ok(Hausdorff::exact(max_dist_from(points, b)?)),
        CompactSet::Ball { center, radius } => match b {
            CompactSet::Ball {
                center: cb,
                radius: rb,
            } => Ok(Hausdorff::exact((center.dist(cb) + radius - rb).max(0.0))),
            _ if *radius == 0.0 => Ok(Hausdorff::exact(b.dist_point(center)?.distance)),
            _ if b.is_convex() => {
                let (samples, h) = sphere_samples(center, *radius, resolution);
                Ok(Hausdorff::approx(max_dist_par(&samples, b)?, h))
            }
            _ => {
                let (samples, h) = body_samples(a, resolution)?;
                Ok(Hausdorff::approx(max_dist_par(&samples, b)?, h))
            }
        },
        _ => {
            if b.is_convex() {
                let ext = a.extreme_points().expect("interval, box and polytope have extreme points");
                Ok(Hausdorff::exact(max_dist_from(&ext, b)?))
            } else {
                let (samples, h) = body_samples(a, resolution)?;
                Ok(Hausdorff::approx(max_dist_par(&samples, b)?, h))
            }
        }
    }
}

fn max_dist_from(points: &[Point], b: &CompactSet) -> Result<f64> {
    let mut m = 0.0f64;
    for p in points {
        m = m.max(b.dist_point(p)?.distance);
    }
    Ok(m)
}

fn max_dist_par(points: &[Point], b: &CompactSet) -> Result<f64> {
    points
        .par_iter()
        .map(|p| b.dist_point(p).map(|r| r.distance))
        .try_reduce(|| 0.0, |x, y| Ok(x.max(y)))
}

fn directed_1d(a: &CompactSet, b: &CompactSet) -> Result<f64> {
    if let CompactSet::FiniteSet { points } = a {
        return max_dist_from(points, b);
    }
    let (lo, hi) = a.to_interval_1d().expect("convex 1D set");
    if b.is_convex() {
        return max_dist_from(&[Point::scalar(lo), Point::scalar(hi)], b);
    }
    // d(·, F) on [lo, hi] peaks at an endpoint or at a midpoint between
    // consecutive points of F.
    let CompactSet::FiniteSet { points } = b else { unreachable!() };
    let mut xs: Vec<f64> = points.iter().map(|p| p.coords()[0]).collect();
    xs.sort_by(f64::total_cmp);
    let mut candidates = vec![lo, hi];
    candidates.extend(
        xs.windows(2)
            .map(|w| 0.5 * (w[0] + w[1]))
            .filter(|m| (lo..=hi).contains(m)),
    );
    let pts: Vec<Point> = candidates.into_iter().map(Point::scalar).collect();
    max_dist_from(&pts, b)
}

fn coarsen(extents: &[f64], mut h: f64, faces: f64) -> f64 {
    loop {
        let count: f64 = faces * extents.iter().map(|e| (e / h).ceil() + 1.0).product::<f64>();
        if count <= MAX_FALLBACK_SAMPLES {
            return h;
        }
        h *= 1.5;
    }
}

fn axis_nodes(lo: f64, hi: f64, h: f64) -> Vec<f64> {
    let n = ((hi - lo) / h).ceil().max(0.0) as usize;
    if n == 0 {
        return vec![lo];
    }
    (0..=n).map(|i| lo + (hi - lo) * i as f64 / n as f64).collect()
}

fn lattice(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut out: Vec<Vec<f64>> = vec![Vec::with_capacity(axes.len())];
    for axis in axes {
        out = out
            .into_iter()
            .flat_map(|prefix| {
                axis.iter().map(move |&c| {
                    let mut v = prefix.clone();
                    v.push(c);
                    v
                })
            })
            .collect();
    }
    out
}

/// Lattice over the bounding box projected onto the set; covers a convex set
/// to within `h·√n / 2` since the projection is nonexpansive.
fn body_samples(set: &CompactSet, resolution: f64) -> Result<(Vec<Point>, f64)> {
    let (lo, hi) = set.bounding_box();
    let extents: Vec<f64> = lo.coords().iter().zip(hi.coords()).map(|(l, u)| u - l).collect();
    let h = coarsen(&extents, resolution, 1.0);
    let axes: Vec<Vec<f64>> = lo
        .coords()
        .iter()
        .zip(hi.coords())
        .map(|(l, u)| axis_nodes(*l, *u, h))
        .collect();
    let samples = lattice(&axes)
        .into_par_iter()
        .map(|c| set.dist_point(&Point::from_vec(c)).map(|r| r.witness))
        .collect::<Result<Vec<_>>>()?;
    Ok((samples, h))
}

/// Lattice on the faces of the cube around the ball, pushed radially onto
/// the sphere; covers the sphere to within `h·√(n−1) / 2`.
fn sphere_samples(center: &Point, radius: f64, resolution: f64) -> (Vec<Point>, f64) {
    let n = center.dim();
    let extents = vec![2.0 * radius; n - 1];
    let h = coarsen(&extents, resolution, 2.0 * n as f64);
    let face_axis = axis_nodes(-radius, radius, h);
    let mut out = Vec::new();
    for fixed in 0..n {
        let axes: Vec<Vec<f64>> = (0..n)
            .map(|k| if k == fixed { vec![-radius, radius] } else { face_axis.clone() })
            .collect();
        for offset in lattice(&axes) {
            let norm = offset.iter().map(|c| c * c).sum::<f64>().sqrt();
            let coords = center
                .coords()
                .iter()
                .zip(&offset)
                .map(|(c, o)| c + radius * o / norm)
                .collect();
            out.push(Point::from_vec(coords));
        }
    }
    (out, h)
}
