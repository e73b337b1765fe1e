use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::geometry::{CompactSet, Point};

/// Rule for picking `y ∈ T(x)` in an iteration step.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SelectorStrategy {
    /// The best-approximation point `P_T(x)`.
    Nearest,
    /// Smallest element of a one-dimensional image.
    LowerEndpoint,
    /// Largest element of a one-dimensional image.
    UpperEndpoint,
    /// Uniform draw; deterministic in `(seed, x, ordinal)`.
    RandomInSet { seed: u64 },
    /// The `index`-th listed point of the image (points of a finite set,
    /// vertices of a polytope, endpoints of an interval, corners of a box).
    FixedMember { index: usize },
}

impl SelectorStrategy {
    pub(crate) fn pick(&self, x: &Point, image: &CompactSet, ordinal: u64) -> Result<Point> {
        match *self {
            SelectorStrategy::Nearest => Ok(image.dist_point(x)?.witness),
            SelectorStrategy::LowerEndpoint | SelectorStrategy::UpperEndpoint => {
                if image.dim() != 1 {
                    return invalid(format!(
                        "endpoint selectors need one-dimensional images, got dimension {}",
                        image.dim()
                    ));
                }
                let (lo, hi) = image.bounding_box();
                Ok(if *self == SelectorStrategy::LowerEndpoint { lo } else { hi })
            }
            SelectorStrategy::FixedMember { index } => {
                let members = match image {
                    CompactSet::Ball { radius, .. } if *radius > 0.0 => {
                        return invalid("fixed-member selector cannot index a ball image");
                    }
                    _ => image.extreme_points().expect("non-ball images list their points"),
                };
                members.get(index).cloned().ok_or_else(|| {
                    crate::Error::InvalidArgument(format!(
                        "member index {index} out of range for an image with {} listed points",
                        members.len()
                    ))
                })
            }
            SelectorStrategy::RandomInSet { seed } => {
                let mut rng = ChaCha8Rng::seed_from_u64(stream_seed(seed, x, ordinal));
                Ok(sample_uniform(image, &mut rng))
            }
        }
    }
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

fn stream_seed(seed: u64, x: &Point, ordinal: u64) -> u64 {
    let mut h = splitmix(seed);
    for c in x.coords() {
        h = splitmix(h ^ c.to_bits());
    }
    splitmix(h ^ ordinal)
}

pub(crate) fn sample_uniform(set: &CompactSet, rng: &mut ChaCha8Rng) -> Point {
    match set {
        CompactSet::Interval { lo, hi } => Point::scalar(lo + (hi - lo) * rng.gen::<f64>()),
        CompactSet::Box { lo, hi } => Point::from_vec(
            lo.coords()
                .iter()
                .zip(hi.coords())
                .map(|(l, h)| l + (h - l) * rng.gen::<f64>())
                .collect(),
        ),
        CompactSet::Ball { center, radius } => {
            if *radius == 0.0 {
                return center.clone();
            }
            loop {
                let v: Vec<f64> = (0..center.dim()).map(|_| rng.gen_range(-1.0..=1.0)).collect();
                if v.iter().map(|c| c * c).sum::<f64>() <= 1.0 {
                    return Point::from_vec(
                        center.coords().iter().zip(&v).map(|(c, o)| c + radius * o).collect(),
                    );
                }
            }
        }
        CompactSet::Polytope { vertices } => {
            // flat Dirichlet weights
            let w: Vec<f64> = vertices.iter().map(|_| -(1.0 - rng.gen::<f64>()).ln()).collect();
            let total: f64 = w.iter().sum();
            let mut out = vec![0.0; vertices[0].dim()];
            for (v, wi) in vertices.iter().zip(&w) {
                for (o, c) in out.iter_mut().zip(v.coords()) {
                    *o += wi / total * c;
                }
            }
            Point::from_vec(out)
        }
        CompactSet::FiniteSet { points } => points[rng.gen_range(0..points.len())].clone(),
    }
}
