//! Brute-force reference computations on regular grids.
//!
//! Nothing here calls the closed-form distance or projection code of
//! [`crate::geometry`]; set distances are recomputed from scratch so the two
//! sides can be checked against each other.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::error::{check_dims, invalid, Error, Result};
use crate::geometry::{CompactSet, Point, MEMBERSHIP_TOL};
use crate::multimap::MultiMap;

/// Upper limit on the number of grid nodes.
pub const MAX_GRID_POINTS: u128 = 10_000_000;

/// A regular grid of spacing `resolution` anchored at the lower corner of
/// `bounds`. The last node on each axis may overshoot the upper bound by less
/// than one cell.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub resolution: f64,
    pub bounds: CompactSet,
}

struct Grid {
    h: f64,
    lo: Vec<f64>,
    /// Nodes per axis.
    shape: Vec<usize>,
}

impl Grid {
    fn len(&self) -> usize {
        self.shape.iter().product()
    }

    fn dim(&self) -> usize {
        self.shape.len()
    }

    /// Multi-index of flat index `k`; the last axis varies fastest.
    fn index(&self, mut k: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for a in (0..self.dim()).rev() {
            idx[a] = k % self.shape[a];
            k /= self.shape[a];
        }
        idx
    }

    fn node(&self, k: usize) -> Vec<f64> {
        self.index(k)
            .iter()
            .zip(&self.lo)
            .map(|(&i, l)| l + i as f64 * self.h)
            .collect()
    }
}

impl GridSpec {
    pub fn new(resolution: f64, bounds: CompactSet) -> Self {
        GridSpec { resolution, bounds }
    }

    fn build(&self) -> Result<Grid> {
        let h = self.resolution;
        if !(h > 0.0) || !h.is_finite() {
            return invalid(format!("grid resolution must be finite and > 0, got {h}"));
        }
        let (lo, hi) = match &self.bounds {
            CompactSet::Interval { lo, hi } => (vec![*lo], vec![*hi]),
            CompactSet::Box { lo, hi } => (lo.coords().to_vec(), hi.coords().to_vec()),
            other => return invalid(format!("grid bounds must be an interval or a box, got a {}", other.kind_name())),
        };
        let mut shape = Vec::with_capacity(lo.len());
        let mut total: u128 = 1;
        for (a, (l, u)) in lo.iter().zip(&hi).enumerate() {
            let cells = ((u - l) / h - 1e-9).ceil().max(0.0);
            if (u - l) / h < 2.0 - 1e-9 {
                return invalid(format!(
                    "resolution {h} gives fewer than 2 cells along axis {a} of width {}",
                    u - l
                ));
            }
            if cells > MAX_GRID_POINTS as f64 {
                return Err(Error::GridTooLarge {
                    points: u128::MAX,
                    limit: MAX_GRID_POINTS,
                });
            }
            shape.push(cells as usize + 1);
            total = total.saturating_mul(cells as u128 + 1);
        }
        if total > MAX_GRID_POINTS {
            return Err(Error::GridTooLarge {
                points: total,
                limit: MAX_GRID_POINTS,
            });
        }
        Ok(Grid { h, lo, shape })
    }

    /// Number of grid nodes, or the guard error.
    pub fn point_count(&self) -> Result<usize> {
        Ok(self.build()?.len())
    }
}

// ---------------------------------------------------------------------------
// independent point-to-set distances

fn sq(x: f64) -> f64 {
    x * x
}

fn euclid(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| sq(x - y)).sum::<f64>().sqrt()
}

fn clamp_dist(x: &[f64], lo: &[f64], hi: &[f64]) -> f64 {
    x.iter()
        .zip(lo.iter().zip(hi))
        .map(|(v, (l, u))| sq((l - v).max(0.0) + (v - u).max(0.0)))
        .sum::<f64>()
        .sqrt()
}

/// Solves the small symmetric system `g·w = r` by Gaussian elimination with
/// partial pivoting. `None` when the system is numerically singular.
fn solve(mut g: Vec<Vec<f64>>, mut r: Vec<f64>) -> Option<Vec<f64>> {
    let n = r.len();
    let scale = g.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    if scale == 0.0 {
        return None;
    }
    for c in 0..n {
        let p = (c..n).max_by(|&a, &b| g[a][c].abs().total_cmp(&g[b][c].abs()))?;
        if g[p][c].abs() <= 1e-12 * scale {
            return None;
        }
        g.swap(c, p);
        r.swap(c, p);
        for row in c + 1..n {
            let f = g[row][c] / g[c][c];
            for col in c..n {
                g[row][col] -= f * g[c][col];
            }
            r[row] -= f * r[c];
        }
    }
    let mut w = vec![0.0; n];
    for c in (0..n).rev() {
        let s: f64 = (c + 1..n).map(|k| g[c][k] * w[k]).sum();
        w[c] = (r[c] - s) / g[c][c];
    }
    Some(w)
}

/// Distance from `x` to the simplex spanned by `verts`: project onto the
/// affine hull, accept if the barycentric weights are nonnegative, otherwise
/// recurse into the faces.
fn simplex_dist(x: &[f64], verts: &[&[f64]]) -> f64 {
    if verts.len() == 1 {
        return euclid(x, verts[0]);
    }
    let v0 = verts[0];
    let edges: Vec<Vec<f64>> = verts[1..]
        .iter()
        .map(|v| v.iter().zip(v0).map(|(a, b)| a - b).collect())
        .collect();
    let rel: Vec<f64> = x.iter().zip(v0).map(|(a, b)| a - b).collect();
    let dot = |a: &[f64], b: &[f64]| a.iter().zip(b).map(|(p, q)| p * q).sum::<f64>();
    let g = edges
        .iter()
        .map(|e| edges.iter().map(|f| dot(e, f)).collect())
        .collect();
    let r = edges.iter().map(|e| dot(e, &rel)).collect();
    if let Some(w) = solve(g, r) {
        let w0 = 1.0 - w.iter().sum::<f64>();
        if w0 >= 0.0 && w.iter().all(|&v| v >= 0.0) {
            let mut proj = v0.to_vec();
            for (e, wi) in edges.iter().zip(&w) {
                for (p, c) in proj.iter_mut().zip(e) {
                    *p += wi * c;
                }
            }
            return euclid(x, &proj);
        }
    }
    (0..verts.len())
        .map(|skip| {
            let face: Vec<&[f64]> = verts
                .iter()
                .enumerate()
                .filter(|&(i, _)| i != skip)
                .map(|(_, v)| *v)
                .collect();
            simplex_dist(x, &face)
        })
        .fold(f64::INFINITY, f64::min)
}

fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Point-to-set distance evaluator. Polytopes are covered by the simplices
/// on all `(d+1)`-subsets of their vertices, which by Carathéodory's theorem
/// union to the hull.
struct SetDist<'a> {
    set: &'a CompactSet,
    simplices: Vec<Vec<&'a [f64]>>,
    bbox: (Vec<f64>, Vec<f64>),
}

impl<'a> SetDist<'a> {
    fn new(set: &'a CompactSet) -> Self {
        let (lo, hi) = set.bounding_box();
        let simplices = match set {
            CompactSet::Polytope { vertices } => {
                let k = vertices.len().min(set.dim() + 1);
                subsets(vertices.len(), k)
                    .into_iter()
                    .map(|s| s.into_iter().map(|i| vertices[i].coords()).collect())
                    .collect()
            }
            _ => Vec::new(),
        };
        SetDist {
            set,
            simplices,
            bbox: (lo.into_coords(), hi.into_coords()),
        }
    }

    fn dist(&self, x: &[f64]) -> f64 {
        match self.set {
            CompactSet::Interval { lo, hi } => clamp_dist(x, &[*lo], &[*hi]),
            CompactSet::Box { lo, hi } => clamp_dist(x, lo.coords(), hi.coords()),
            CompactSet::Ball { center, radius } => (euclid(x, center.coords()) - radius).max(0.0),
            CompactSet::FiniteSet { points } => points
                .iter()
                .map(|p| euclid(x, p.coords()))
                .fold(f64::INFINITY, f64::min),
            CompactSet::Polytope { .. } => self
                .simplices
                .iter()
                .map(|s| simplex_dist(x, s))
                .fold(f64::INFINITY, f64::min),
        }
    }

    /// `dist(x) ≤ r`, rejecting far points by the bounding box first.
    fn within(&self, x: &[f64], r: f64) -> bool {
        clamp_dist(x, &self.bbox.0, &self.bbox.1) <= r && self.dist(x) <= r
    }
}

// ---------------------------------------------------------------------------
// Hausdorff distance on the grid

/// Nodes whose distance to `set` is at most half a cell diagonal. Every point
/// of the set inside the grid has such a node within that distance.
fn mark(grid: &Grid, set: &CompactSet) -> Vec<bool> {
    let sd = SetDist::new(set);
    let r = 0.5 * grid.h * (grid.dim() as f64).sqrt() + MEMBERSHIP_TOL;
    (0..grid.len())
        .into_par_iter()
        .map(|k| sd.within(&grid.node(k), r))
        .collect()
}

/// One-dimensional squared distance transform of sampled function `f` with
/// node spacing `h` (lower envelope of parabolas).
fn edt_1d(f: &[f64], h: f64, out: &mut [f64]) {
    let n = f.len();
    let mut v = vec![0usize; n];
    let mut z = vec![0.0f64; n + 1];
    let mut k = 0usize;
    let first = f.iter().position(|x| x.is_finite());
    let Some(first) = first else {
        out.iter_mut().for_each(|o| *o = f64::INFINITY);
        return;
    };
    v[0] = first;
    z[0] = f64::NEG_INFINITY;
    z[1] = f64::INFINITY;
    let pos = |i: usize| i as f64 * h;
    for q in first + 1..n {
        if !f[q].is_finite() {
            continue;
        }
        loop {
            let p = v[k];
            let s = ((f[q] + sq(pos(q))) - (f[p] + sq(pos(p)))) / (2.0 * (pos(q) - pos(p)));
            if s <= z[k] && k > 0 {
                k -= 1;
            } else {
                k += 1;
                v[k] = q;
                z[k] = s;
                z[k + 1] = f64::INFINITY;
                break;
            }
        }
    }
    let mut j = 0;
    for (q, o) in out.iter_mut().enumerate() {
        while z[j + 1] < pos(q) {
            j += 1;
        }
        *o = sq(pos(q) - pos(v[j])) + f[v[j]];
    }
}

/// Exact squared Euclidean distance from every node to the nearest marked node.
fn distance_transform(grid: &Grid, marked: &[bool]) -> Vec<f64> {
    let mut d: Vec<f64> = marked.iter().map(|&m| if m { 0.0 } else { f64::INFINITY }).collect();
    let total = grid.len();
    let mut stride = 1;
    for a in (0..grid.dim()).rev() {
        let n = grid.shape[a];
        let mut line = vec![0.0; n];
        let mut out = vec![0.0; n];
        for start in 0..total {
            // first node of each line along axis a
            if (start / stride) % n != 0 {
                continue;
            }
            for (i, l) in line.iter_mut().enumerate() {
                *l = d[start + i * stride];
            }
            edt_1d(&line, grid.h, &mut out);
            for (i, o) in out.iter().enumerate() {
                d[start + i * stride] = *o;
            }
        }
        stride *= n;
    }
    d
}

fn directed(from: &[bool], to_sq: &[f64]) -> f64 {
    from.iter()
        .zip(to_sq)
        .filter(|(m, _)| **m)
        .map(|(_, d)| *d)
        .fold(0.0f64, f64::max)
        .sqrt()
}

fn check_inside(set: &CompactSet, grid: &Grid) -> Result<()> {
    check_dims(grid.dim(), set.dim())?;
    let (lo, hi) = set.bounding_box();
    for a in 0..grid.dim() {
        let top = grid.lo[a] + (grid.shape[a] - 1) as f64 * grid.h;
        if lo.coords()[a] < grid.lo[a] - MEMBERSHIP_TOL || hi.coords()[a] > top + MEMBERSHIP_TOL {
            return invalid(format!("set {} extends past the grid bounds on axis {a}", set.kind_name()));
        }
    }
    Ok(())
}

/// Hausdorff distance between the grid discretizations of `a` and `b`.
///
/// Each set is replaced by the nodes within half a cell diagonal of it, so
/// each discretization is within `resolution·√d/2` of its set and the result
/// is within `resolution·√d` of the true distance.
pub fn grid_hausdorff(a: &CompactSet, b: &CompactSet, grid: &GridSpec) -> Result<f64> {
    a.validate()?;
    b.validate()?;
    let g = grid.build()?;
    check_inside(a, &g)?;
    check_inside(b, &g)?;
    let ma = mark(&g, a);
    let mb = mark(&g, b);
    let da = distance_transform(&g, &ma);
    let db = distance_transform(&g, &mb);
    Ok(directed(&ma, &db).max(directed(&mb, &da)))
}

// ---------------------------------------------------------------------------
// minimal enrichment constant for 1D interval-valued maps

/// Result of [`grid_min_b_1d`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GridMinB {
    /// Smallest feasible `b` over all grid pairs, `∞` when some pair has an
    /// endpoint slope above 1.
    pub b: f64,
    /// A pair attaining `b` (the first infeasible pair when `b = ∞`).
    pub witness: Option<(f64, f64)>,
    pub pairs: usize,
}

enum Image1d {
    Interval(f64, f64),
    Points(Vec<f64>),
}

fn image_1d(map: &MultiMap, x: f64) -> Result<Image1d> {
    match map.evaluate(&Point::scalar(x))? {
        CompactSet::Interval { lo, hi } => Ok(Image1d::Interval(lo, hi)),
        CompactSet::Ball { center, radius } => {
            let c = center.coords()[0];
            Ok(Image1d::Interval(c - radius, c + radius))
        }
        CompactSet::FiniteSet { points } if points.len() == 1 => {
            let c = points[0].coords()[0];
            Ok(Image1d::Interval(c, c))
        }
        CompactSet::FiniteSet { points } => Ok(Image1d::Points(points.iter().map(|p| p.coords()[0]).collect())),
        other => invalid(format!("image at {x} is a {}, not an interval or finite set", other.kind_name())),
    }
}

/// Minimal b for one pair with `dx = x − y > 0`, or `∞` when infeasible.
fn pair_min_b(dx: f64, tx: &Image1d, ty: &Image1d) -> Result<f64> {
    match (tx, ty) {
        (Image1d::Interval(lx, hx), Image1d::Interval(ly, hy)) => {
            let s_lo = (lx - ly) / dx;
            let s_hi = (hx - hy) / dx;
            if s_lo > 1.0 || s_hi > 1.0 {
                return Ok(f64::INFINITY);
            }
            Ok(((-s_lo - 1.0) / 2.0).max((-s_hi - 1.0) / 2.0).max(0.0))
        }
        (Image1d::Points(sx), Image1d::Points(sy)) => {
            // s ∈ Tx needs some t ∈ Ty in [s − dx, s + (2b+1)dx],
            // t ∈ Ty needs some s ∈ Tx in [t − (2b+1)dx, t + dx].
            let mut need = 0.0f64;
            for &s in sx {
                let t = sy.iter().copied().filter(|&t| t >= s - dx).fold(f64::INFINITY, f64::min);
                need = need.max((t - s - dx) / (2.0 * dx));
            }
            for &t in sy {
                let s = sx.iter().copied().filter(|&s| s <= t + dx).fold(f64::NEG_INFINITY, f64::max);
                need = need.max((t - s - dx) / (2.0 * dx));
            }
            Ok(need)
        }
        _ => invalid("grid_min_b_1d cannot mix interval and finite images"),
    }
}

fn domain_nodes(map: &MultiMap, g: &Grid) -> Vec<Point> {
    (0..g.len())
        .map(|k| Point::from_vec(g.node(k)))
        .filter(|p| map.check_in_domain(p).is_ok())
        .collect()
}

/// For interval images the enrichment inequality splits per endpoint: with
/// endpoint slopes `s = (e(Tx) − e(Ty))/(x − y)`, the pair `(x, y)` is
/// feasible at `b` iff every `s ∈ [−2b−1, 1]`. The pair's minimal `b` is
/// `max(0, max_s (−s−1)/2)`; the result is the maximum over all grid pairs
/// inside the domain. Finite images are handled by the same reasoning per
/// point: each point of one image needs a partner in the other inside a window
/// whose right edge grows with `b`.
pub fn grid_min_b_1d(map: &MultiMap, grid: &GridSpec) -> Result<GridMinB> {
    if map.dim() != 1 {
        return invalid(format!("grid_min_b_1d needs a one-dimensional map, got dimension {}", map.dim()));
    }
    let g = grid.build()?;
    check_dims(1, g.dim())?;
    let xs: Vec<f64> = domain_nodes(map, &g).iter().map(|p| p.coords()[0]).collect();
    let imgs = xs.iter().map(|&x| image_1d(map, x)).collect::<Result<Vec<_>>>()?;

    let mut best = GridMinB {
        b: 0.0,
        witness: None,
        pairs: 0,
    };
    for i in 0..xs.len() {
        for j in i + 1..xs.len() {
            let dx = xs[j] - xs[i];
            if dx == 0.0 {
                continue;
            }
            best.pairs += 1;
            let need = pair_min_b(dx, &imgs[j], &imgs[i])?;
            if need.is_infinite() {
                if best.b.is_finite() {
                    best.b = f64::INFINITY;
                    best.witness = Some((xs[i], xs[j]));
                }
                continue;
            }
            if need > best.b || (best.witness.is_none() && best.b.is_finite()) {
                best.b = need;
                best.witness = Some((xs[i], xs[j]));
            }
        }
    }
    Ok(best)
}

// ---------------------------------------------------------------------------
// fixed points

/// A group of grid fixed points chained together by steps of at most
/// `2·resolution`.
#[derive(Debug, Clone, PartialEq)]
pub struct FixedPointCluster {
    /// The member with the smallest residual (lexicographically smallest on ties).
    pub representative: Point,
    pub residual: f64,
    /// Members in lexicographic order.
    pub members: Vec<Point>,
}

/// All grid nodes in the map's domain with `d(x, T(x)) ≤ tol`, merged into
/// clusters by single linkage at distance `2·resolution`.
pub fn grid_fixed_points(map: &MultiMap, grid: &GridSpec, tol: f64) -> Result<Vec<FixedPointCluster>> {
    if !(tol >= 0.0) {
        return invalid(format!("tolerance must be ≥ 0, got {tol}"));
    }
    let g = grid.build()?;
    check_dims(map.dim(), g.dim())?;

    // (grid index, point, residual) in lexicographic order
    let hits: Vec<(Vec<i64>, Point, f64)> = (0..g.len())
        .into_par_iter()
        .filter_map(|k| {
            let p = Point::from_vec(g.node(k));
            map.check_in_domain(&p).ok()?;
            let img = map.evaluate(&p).ok()?;
            let r = SetDist::new(&img).dist(p.coords());
            (r <= tol).then(|| (g.index(k).iter().map(|&i| i as i64).collect(), p, r))
        })
        .collect();

    let lookup: HashMap<&[i64], usize> = hits.iter().enumerate().map(|(n, h)| (h.0.as_slice(), n)).collect();
    let mut parent: Vec<usize> = (0..hits.len()).collect();
    fn root(parent: &mut [usize], mut i: usize) -> usize {
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let offsets = neighbour_offsets(g.dim());
    for (n, (idx, _, _)) in hits.iter().enumerate() {
        for off in &offsets {
            let nb: Vec<i64> = idx.iter().zip(off).map(|(a, b)| a + b).collect();
            if let Some(&m) = lookup.get(nb.as_slice()) {
                let (ra, rb) = (root(&mut parent, n), root(&mut parent, m));
                if ra != rb {
                    parent[ra.max(rb)] = ra.min(rb);
                }
            }
        }
    }

    let mut groups: Vec<Vec<usize>> = Vec::new();
    let mut slot: HashMap<usize, usize> = HashMap::new();
    for n in 0..hits.len() {
        let r = root(&mut parent, n);
        let s = *slot.entry(r).or_insert_with(|| {
            groups.push(Vec::new());
            groups.len() - 1
        });
        groups[s].push(n);
    }
    Ok(groups
        .into_iter()
        .map(|members| {
            let rep = *members
                .iter()
                .min_by(|&&a, &&b| hits[a].2.total_cmp(&hits[b].2).then(hits[a].1.lex_cmp(&hits[b].1)))
                .expect("clusters are nonempty");
            FixedPointCluster {
                representative: hits[rep].1.clone(),
                residual: hits[rep].2,
                members: members.iter().map(|&m| hits[m].1.clone()).collect(),
            }
        })
        .collect())
}

/// Integer offsets of Euclidean length in (0, 2].
fn neighbour_offsets(dim: usize) -> Vec<Vec<i64>> {
    let mut out = vec![Vec::new()];
    for _ in 0..dim {
        out = out
            .into_iter()
            .flat_map(|v| {
                (-2..=2).map(move |c| {
                    let mut w = v.clone();
                    w.push(c);
                    w
                })
            })
            .collect();
    }
    out.retain(|v| {
        let n: i64 = v.iter().map(|c| c * c).sum();
        n > 0 && n <= 4
    });
    out
}

/// Whether two cluster lists describe the same fixed-point set up to
/// `radius`: equal cluster counts and every member of either list within
/// `radius` of a member of the other.
pub fn same_fixed_point_sets(a: &[FixedPointCluster], b: &[FixedPointCluster], radius: f64) -> bool {
    if a.len() != b.len() {
        return false;
    }
    let flat = |c: &[FixedPointCluster]| -> Vec<Point> { c.iter().flat_map(|k| k.members.iter().cloned()).collect() };
    let (pa, pb) = (flat(a), flat(b));
    let covered = |from: &[Point], to: &[Point]| from.iter().all(|p| to.iter().any(|q| p.dist(q) <= radius + 1e-12));
    covered(&pa, &pb) && covered(&pb, &pa)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::builtins::builtins;
    use crate::multimap::VectorFn;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn iv(lo: f64, hi: f64) -> CompactSet {
        CompactSet::Interval { lo, hi }
    }

    fn pt(c: &[f64]) -> Point {
        Point::new(c.to_vec()).unwrap()
    }

    #[test]
    fn paper_example_hausdorff_value() {
        let h = grid_hausdorff(&iv(2.0, 4.0), &CompactSet::singleton(Point::scalar(1.0)), &GridSpec::new(1e-4, iv(0.0, 5.0))).unwrap();
        assert!((h - 3.0).abs() <= 2e-4, "{h}");
        let s = CompactSet::ball(pt(&[0.3, 0.4]), 0.2).unwrap();
        let g = GridSpec::new(0.01, CompactSet::boxed(pt(&[0.0, 0.0]), pt(&[1.0, 1.0])).unwrap());
        assert_eq!(grid_hausdorff(&s, &s, &g).unwrap(), 0.0);
    }

    #[test]
    fn guards() {
        assert!(matches!(
            GridSpec::new(1e-4, CompactSet::boxed(pt(&[0.0, 0.0]), pt(&[1.0, 1.0])).unwrap()).point_count(),
            Err(Error::GridTooLarge { .. })
        ));
        assert!(GridSpec::new(0.6, iv(0.0, 1.0)).point_count().is_err());
        assert_eq!(GridSpec::new(0.5, iv(0.0, 1.0)).point_count().unwrap(), 3);
        assert!(GridSpec::new(0.1, CompactSet::ball(pt(&[0.0]), 1.0).unwrap()).point_count().is_err());
    }

    #[test]
    fn simplex_distance_against_known_values() {
        let tri: [&[f64]; 3] = [&[0.0, 0.0], &[1.0, 0.0], &[0.0, 1.0]];
        assert_eq!(simplex_dist(&[0.2, 0.2], &tri), 0.0);
        assert!((simplex_dist(&[1.0, 1.0], &tri) - 0.5f64.sqrt()).abs() < 1e-15);
        assert!((simplex_dist(&[-1.0, -1.0], &tri) - 2f64.sqrt()).abs() < 1e-15);
        assert!((simplex_dist(&[0.5, -2.0], &tri) - 2.0).abs() < 1e-15);
        // degenerate: collinear vertices
        let seg: [&[f64]; 3] = [&[0.0, 0.0], &[1.0, 0.0], &[2.0, 0.0]];
        assert!((simplex_dist(&[1.5, 1.0], &seg) - 1.0).abs() < 1e-15);
        // square with an interior redundant vertex
        let sq = CompactSet::polytope(vec![pt(&[0.0, 0.0]), pt(&[1.0, 0.0]), pt(&[1.0, 1.0]), pt(&[0.0, 1.0]), pt(&[0.5, 0.5])]).unwrap();
        let sd = SetDist::new(&sq);
        assert_eq!(sd.dist(&[0.9, 0.9]), 0.0);
        assert!((sd.dist(&[2.0, 0.5]) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn distance_transform_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for dims in [vec![17usize], vec![9, 13], vec![5, 6, 7]] {
            let g = Grid {
                h: 0.3,
                lo: vec![0.0; dims.len()],
                shape: dims.clone(),
            };
            let marked: Vec<bool> = (0..g.len()).map(|_| rng.gen_bool(0.08)).collect();
            let d = distance_transform(&g, &marked);
            for k in 0..g.len() {
                let brute = (0..g.len())
                    .filter(|&m| marked[m])
                    .map(|m| sq(euclid(&g.node(k), &g.node(m))))
                    .fold(f64::INFINITY, f64::min);
                if brute.is_infinite() {
                    assert!(d[k].is_infinite());
                } else {
                    assert!((d[k] - brute).abs() < 1e-12, "{dims:?} node {k}: {} vs {brute}", d[k]);
                }
            }
        }
    }

    #[test]
    fn min_b_closed_forms() {
        let g = GridSpec::new(1e-2, iv(-2.0, 2.0));
        let neg3 = MultiMap::linear_scale(-3.0, iv(-2.0, 2.0)).unwrap();
        assert!((grid_min_b_1d(&neg3, &g).unwrap().b - 1.0).abs() < 1e-12);
        let c = MultiMap::constant(iv(0.2, 0.6), iv(-2.0, 2.0)).unwrap();
        assert_eq!(grid_min_b_1d(&c, &g).unwrap().b, 0.0);
        let grow = MultiMap::single_valued(VectorFn::Linear { k: 2.0 }, iv(-1.0, 1.0)).unwrap();
        assert!(grid_min_b_1d(&grow, &g).unwrap().b.is_infinite());
        let finite = MultiMap::constant(CompactSet::finite(vec![Point::scalar(0.0), Point::scalar(1.0)]).unwrap(), iv(0.0, 1.0)).unwrap();
        assert_eq!(grid_min_b_1d(&finite, &GridSpec::new(0.1, iv(0.0, 1.0))).unwrap().b, 0.0);
    }

    #[test]
    fn finite_pair_rule() {
        // both points shift by −3 over dx = 1, like x ↦ −3x
        let (tx, ty) = (Image1d::Points(vec![-3.0, 5.0]), Image1d::Points(vec![0.0, 8.0]));
        assert!((pair_min_b(1.0, &tx, &ty).unwrap() - 1.0).abs() < 1e-15);
        // a point shifting up by more than dx is infeasible
        let (tx, ty) = (Image1d::Points(vec![3.0]), Image1d::Points(vec![0.0, 1.0]));
        assert!(pair_min_b(1.0, &tx, &ty).unwrap().is_infinite());
        assert!(pair_min_b(1.0, &Image1d::Interval(0.0, 1.0), &Image1d::Points(vec![0.0])).is_err());
    }

    // Endpoint slopes of [1/t, 1/t²] between x < y are −1/(xy) ∈ [−4, −1] and
    // −(x+y)/(x²y²) ∈ [−16, −2]; the worst grid pair is the first one,
    // (0.5, 0.501), giving b = ((x+y)/(x²y²) − 1)/2.
    #[test]
    fn paper_example_min_b() {
        let r = grid_min_b_1d(&MultiMap::paper_example(), &GridSpec::new(1e-3, iv(0.5, 1.0))).unwrap();
        assert!((r.b - 7.476_063_840_383_106).abs() < 1e-9, "{}", r.b);
        let (x, y) = r.witness.unwrap();
        assert_eq!(x, 0.5);
        assert!((y - 0.501).abs() < 1e-12);
        assert_eq!(r.pairs, 501 * 500 / 2);
        let fine = grid_min_b_1d(&MultiMap::paper_example(), &GridSpec::new(2.5e-4, iv(0.5, 1.0))).unwrap();
        assert!((fine.b - 7.5).abs() <= 0.02, "{}", fine.b);
    }

    #[test]
    fn paper_example_fixed_point() {
        let f = grid_fixed_points(&MultiMap::paper_example(), &GridSpec::new(1e-3, iv(0.5, 1.0)), 1e-3).unwrap();
        assert_eq!(f.len(), 1);
        assert!((f[0].representative.coords()[0] - 1.0).abs() < 1e-12);
        assert!(f[0].members.iter().all(|p| (p.coords()[0] - 1.0).abs() <= 1e-3));
    }

    #[test]
    fn constant_interval_fixed_points_are_the_interval() {
        let m = MultiMap::constant(iv(0.2, 0.6), iv(0.0, 1.0)).unwrap();
        let f = grid_fixed_points(&m, &GridSpec::new(0.01, iv(0.0, 1.0)), 1e-9).unwrap();
        assert_eq!(f.len(), 1);
        assert_eq!(f[0].members.len(), 41);
        assert!((f[0].representative.coords()[0] - 0.2).abs() < 1e-12);
    }

    #[test]
    fn fixed_points_survive_averaging() {
        for b in builtins() {
            let (lo, hi) = b.map.domain().bounding_box();
            let bounds = if b.map.dim() == 1 {
                iv(lo.coords()[0], hi.coords()[0])
            } else {
                CompactSet::boxed(lo, hi).unwrap()
            };
            let h = if b.map.dim() == 1 { 1e-3 } else { 2e-2 };
            let g = GridSpec::new(h, bounds);
            let base = grid_fixed_points(&b.map, &g, 1e-9).unwrap();
            for mu in [0.1, 0.5] {
                let avg = grid_fixed_points(&b.map.averaged(mu).unwrap(), &g, 1e-9).unwrap();
                assert!(same_fixed_point_sets(&base, &avg, 2.0 * h), "{} μ={mu}", b.name);
            }
        }
    }

    #[test]
    fn set_comparison() {
        let c = |xs: &[f64]| FixedPointCluster {
            representative: Point::scalar(xs[0]),
            residual: 0.0,
            members: xs.iter().map(|&x| Point::scalar(x)).collect(),
        };
        assert!(same_fixed_point_sets(&[c(&[0.0, 0.1])], &[c(&[0.0, 0.1, 0.2])], 0.1));
        assert!(!same_fixed_point_sets(&[c(&[0.0])], &[c(&[0.0]), c(&[1.0])], 0.1));
        assert!(!same_fixed_point_sets(&[c(&[0.0])], &[c(&[0.5])], 0.1));
    }
}
