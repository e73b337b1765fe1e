//! The worked example x -> [1/x, 1/x^2] on [1/2, 1], end to end.
//!
//! ```text
//! cargo run --release --example paper_example
//! ```

use setfix::enrichment::{check_b_enriched, estimate_min_b, PairSampleSpec, DEFAULT_B_MAX};
use setfix::geometry::hausdorff;
use setfix::iteration::{fejer_check, krasnoselskii_run, IterationConfig};
use setfix::oracle::{grid_min_b_1d, GridSpec};
use setfix::{CompactSet, MultiMap, Point};

fn main() -> setfix::Result<()> {
    let t = MultiMap::paper_example();
    let half = Point::scalar(0.5);
    let one = Point::scalar(1.0);
    println!("T(1/2) = {:?}, T(1) = {:?}", t.evaluate(&half)?, t.evaluate(&one)?);
    let h = hausdorff(&t.evaluate(&half)?, &t.evaluate(&one)?)?.value;
    println!("H(T(1/2), T(1)) = {h}, |1/2 - 1| = 0.5, so T is not nonexpansive");

    let grid = PairSampleSpec::grid(501);
    let e = estimate_min_b(&t, &grid, DEFAULT_B_MAX, 1e-9)?;
    let o = grid_min_b_1d(&t, &GridSpec::new(1e-3, CompactSet::interval(0.5, 1.0)?))?;
    println!("smallest b: {:.6} (bisection), {:.6} (endpoint slopes); sup over the domain is 7.5", e.b, o.b);
    println!("b = 5/2 holds on the grid? {}", check_b_enriched(&t, 2.5, &grid, 1e-9)?.passed());

    let theta = 1.0 / (2.0 * (e.b + 1.0));
    let cfg = IterationConfig {
        max_iter: 500,
        b_hint: Some(e.b),
        target: Some(one.clone()),
        ..IterationConfig::new(theta, Point::scalar(0.6))
    };
    let trace = krasnoselskii_run(&t, &cfg)?;
    for r in trace.records.iter().step_by(10) {
        println!("  n = {:>3}  x = {:.12}  d(x, Tx) = {:.3e}", r.n, r.x.coords()[0], r.residual);
    }
    println!("Fejér monotone toward 1: {:?}", fejer_check(&trace, &one, 1e-12)?);
    Ok(())
}
