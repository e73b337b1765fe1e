//! Euclidean projection onto the convex hull of a finite point list.
//!
//! This is Wolfe's minimum-norm-point method applied to the vertices shifted
//! by the query point: the nearest hull point to `x` is `x + z*` where `z*` is
//! the minimum-norm point of `conv{v_i - x}`. The method keeps a small
//! "corral" of active vertices, solves the affine minimization on it, and
//! walks back into the simplex when the affine minimizer leaves it.

use nalgebra::{DMatrix, DVector};

use super::point::dot;

/// Stopping tolerance on the optimality gap, relative to the squared scale.
pub const HULL_PROJECTION_TOL: f64 = 1e-10;
/// Hard cap on major plus minor steps.
pub const HULL_PROJECTION_MAX_ITER: usize = 10_000;

const WEIGHT_EPS: f64 = 1e-14;

/// Result of a hull projection: the nearest point and its convex weights.
#[derive(Debug, Clone)]
pub struct HullProjection {
    pub point: Vec<f64>,
    /// `(vertex index, weight)` pairs with positive weights summing to one.
    pub weights: Vec<(usize, f64)>,
    pub iterations: usize,
}

pub fn project_onto_hull(x: &[f64], vertices: &[&[f64]]) -> HullProjection {
    assert!(!vertices.is_empty());
    let shifted: Vec<Vec<f64>> = vertices
        .iter()
        .map(|v| v.iter().zip(x).map(|(a, b)| a - b).collect())
        .collect();
    let scale = shifted
        .iter()
        .map(|p| dot(p, p))
        .fold(0.0f64, f64::max)
        .max(f64::MIN_POSITIVE);

    let start = (0..shifted.len())
        .min_by(|&i, &j| dot(&shifted[i], &shifted[i]).total_cmp(&dot(&shifted[j], &shifted[j])))
        .unwrap();
    let mut corral = vec![start];
    let mut weights = vec![1.0];
    let mut z = shifted[start].clone();
    let mut iterations = 0;

    'major: while iterations < HULL_PROJECTION_MAX_ITER {
        iterations += 1;
        let zz = dot(&z, &z);
        if zz <= scale * f64::EPSILON * f64::EPSILON {
            break;
        }
        let (j, zp) = (0..shifted.len())
            .map(|i| (i, dot(&z, &shifted[i])))
            .min_by(|a, b| a.1.total_cmp(&b.1))
            .unwrap();
        // ‖z - z*‖² ≤ zz - zp, so this bounds the distance error.
        if zz - zp <= HULL_PROJECTION_TOL * HULL_PROJECTION_TOL * scale || corral.contains(&j) {
            break;
        }
        corral.push(j);
        weights.push(0.0);

        loop {
            iterations += 1;
            if iterations >= HULL_PROJECTION_MAX_ITER {
                break 'major;
            }
            let alpha = affine_minimizer(&shifted, &corral);
            if alpha.iter().all(|&a| a > WEIGHT_EPS) {
                weights = alpha;
                break;
            }
            let mut step = 1.0f64;
            for (w, a) in weights.iter().zip(&alpha) {
                if *a <= WEIGHT_EPS && w - a > 0.0 {
                    step = step.min(w / (w - a));
                }
            }
            for (w, a) in weights.iter_mut().zip(&alpha) {
                *w = step * a + (1.0 - step) * *w;
            }
            let mut k = 0;
            while k < corral.len() {
                if weights[k] <= WEIGHT_EPS && corral.len() > 1 {
                    corral.remove(k);
                    weights.remove(k);
                } else {
                    k += 1;
                }
            }
            let total: f64 = weights.iter().sum();
            weights.iter_mut().for_each(|w| *w /= total);
            if corral.len() == 1 {
                weights[0] = 1.0;
                break;
            }
        }
        z = combine(&shifted, &corral, &weights);
    }

    let point = combine(vertices, &corral, &weights);
    HullProjection {
        point,
        weights: corral.into_iter().zip(weights).collect(),
        iterations,
    }
}

fn combine<P: AsRef<[f64]>>(points: &[P], idx: &[usize], w: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; points[idx[0]].as_ref().len()];
    for (&i, &wi) in idx.iter().zip(w) {
        for (o, p) in out.iter_mut().zip(points[i].as_ref()) {
            *o += wi * p;
        }
    }
    out
}

/// Weights summing to one that minimize ‖Σ αₖ pₖ‖ over the affine hull of the corral.
fn affine_minimizer(points: &[Vec<f64>], corral: &[usize]) -> Vec<f64> {
    let base = &points[corral[0]];
    let dim = base.len();
    let k = corral.len() - 1;
    // Minimize ‖base + D β‖ with D = [p_i - base]; α₀ = 1 - Σβ.
    let d = DMatrix::from_fn(dim, k, |r, c| points[corral[c + 1]][r] - base[r]);
    let rhs = DVector::from_iterator(dim, base.iter().map(|b| -b));
    let svd = d.svd(true, true);
    let eps = svd.singular_values.max() * 1e-13;
    let beta = match svd.solve(&rhs, eps) {
        Ok(b) => b,
        Err(_) => DVector::zeros(k),
    };
    let mut alpha = Vec::with_capacity(k + 1);
    alpha.push(1.0 - beta.sum());
    alpha.extend(beta.iter().copied());
    alpha
}

#[cfg(test)]
mod tests {
    use super::*;

    fn project(x: &[f64], vs: &[Vec<f64>]) -> Vec<f64> {
        let refs: Vec<&[f64]> = vs.iter().map(|v| v.as_slice()).collect();
        project_onto_hull(x, &refs).point
    }

    #[test]
    fn triangle_edge_projection() {
        let vs = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![1.0, 1.0]];
        let p = project(&[0.0, 0.0], &vs);
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12, "{p:?}");
    }

    #[test]
    fn interior_point_is_fixed() {
        let vs = vec![vec![0.0, 0.0], vec![2.0, 0.0], vec![0.0, 2.0]];
        let p = project(&[0.5, 0.5], &vs);
        assert!((p[0] - 0.5).abs() < 1e-12 && (p[1] - 0.5).abs() < 1e-12, "{p:?}");
    }

    #[test]
    fn vertex_region() {
        let vs = vec![vec![0.0, 0.0], vec![1.0, 0.0], vec![0.0, 1.0]];
        let p = project(&[-1.0, -2.0], &vs);
        assert!(p[0].abs() < 1e-12 && p[1].abs() < 1e-12);
    }

    #[test]
    fn square_with_redundant_points() {
        let vs = vec![
            vec![0.0, 0.0],
            vec![1.0, 0.0],
            vec![1.0, 1.0],
            vec![0.0, 1.0],
            vec![0.5, 0.5],
            vec![0.5, 0.0],
        ];
        let p = project(&[3.0, 0.25], &vs);
        assert!((p[0] - 1.0).abs() < 1e-12 && (p[1] - 0.25).abs() < 1e-12, "{p:?}");
    }

    #[test]
    fn tetrahedron_face() {
        let vs = vec![
            vec![0.0, 0.0, 0.0],
            vec![1.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 1.0],
        ];
        let p = project(&[1.0, 1.0, 1.0], &vs);
        for c in p {
            assert!((c - 1.0 / 3.0).abs() < 1e-12);
        }
    }
}
