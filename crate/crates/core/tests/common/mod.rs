#![allow(dead_code)]

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use setfix::{CompactSet, Point};

pub fn pt(c: &[f64]) -> Point {
    Point::new(c.to_vec()).unwrap()
}

fn uniform(rng: &mut ChaCha8Rng, d: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..d).map(|_| rng.gen_range(lo..hi)).collect()
}

/// A random set of variant `variant % 4` inside `[lo, hi]^d`.
pub fn random_set(rng: &mut ChaCha8Rng, variant: usize, d: usize, lo: f64, hi: f64) -> CompactSet {
    let w = hi - lo;
    match variant % 4 {
        0 => {
            let a = uniform(rng, d, lo, hi);
            let b = uniform(rng, d, lo, hi);
            let (l, h): (Vec<f64>, Vec<f64>) = a.iter().zip(&b).map(|(x, y)| (x.min(*y), x.max(*y))).unzip();
            if d == 1 {
                CompactSet::interval(l[0], h[0]).unwrap()
            } else {
                CompactSet::boxed(pt(&l), pt(&h)).unwrap()
            }
        }
        1 => {
            let r = rng.gen_range(0.05 * w..0.3 * w);
            let c = uniform(rng, d, lo + r, hi - r);
            CompactSet::ball(pt(&c), r).unwrap()
        }
        2 => {
            let m = if d == 3 { 4 } else { rng.gen_range(d + 1..=d + 2) };
            CompactSet::polytope((0..m).map(|_| pt(&uniform(rng, d, lo, hi))).collect()).unwrap()
        }
        _ => {
            let m = rng.gen_range(1..=4);
            CompactSet::finite((0..m).map(|_| pt(&uniform(rng, d, lo, hi))).collect()).unwrap()
        }
    }
}

/// A uniform point of an interval or box domain.
pub fn random_in_domain(rng: &mut ChaCha8Rng, domain: &CompactSet) -> Point {
    let (lo, hi) = domain.bounding_box();
    let c: Vec<f64> = lo
        .coords()
        .iter()
        .zip(hi.coords())
        .map(|(l, h)| rng.gen_range(*l..=*h))
        .collect();
    pt(&c)
}
