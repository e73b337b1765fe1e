//! Slow brute-force grid oracles used to validate the closed-form code.
//!
//! ```text
//! cargo run --release --example oracle
//! ```

use setfix::builtins::builtins;
use setfix::enrichment::{estimate_min_b, PairSampleSpec, DEFAULT_B_MAX};
use setfix::oracle::{grid_fixed_points, grid_min_b_1d, same_fixed_point_sets, GridSpec};
use setfix::{CompactSet, MultiMap};

fn main() -> setfix::Result<()> {
    let paper = MultiMap::paper_example();
    for h in [1e-2, 1e-3] {
        let r = grid_min_b_1d(&paper, &GridSpec::new(h, CompactSet::interval(0.5, 1.0)?))?;
        println!("paper-example, spacing {h}: minimal b {:.9} at {:?}", r.b, r.witness.unwrap());
    }
    let e = estimate_min_b(&paper, &PairSampleSpec::grid(501), DEFAULT_B_MAX, 1e-9)?;
    println!("bisection on the same pairs: {:.9}", e.b);

    println!("\nfixed points, T against its averages:");
    for b in builtins() {
        let (lo, hi) = b.map.domain().bounding_box();
        let grid = if b.map.dim() == 1 {
            GridSpec::new(1e-3, CompactSet::interval(lo.coords()[0], hi.coords()[0])?)
        } else {
            GridSpec::new(2e-2, CompactSet::boxed(lo, hi)?)
        };
        let base = grid_fixed_points(&b.map, &grid, 1e-9)?;
        let same = [0.1, 0.5]
            .iter()
            .map(|&mu| Ok(same_fixed_point_sets(&base, &grid_fixed_points(&b.map.averaged(mu)?, &grid, 1e-9)?, 2.0 * grid.resolution)))
            .collect::<setfix::Result<Vec<_>>>()?;
        let summary: Vec<String> = base
            .iter()
            .map(|c| format!("{} ({} nodes)", c.representative, c.members.len()))
            .collect();
        println!("  {:<22} {:<40} averages agree: {:?}", b.name, summary.join(", "), same);
    }
    Ok(())
}
