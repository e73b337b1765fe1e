//! Checking the enrichment inequality on sampled pairs, and estimating the
//! smallest constant for which it holds.
//!
//! ```text
//! cargo run --example enrichment
//! ```

use setfix::builtins::builtins;
use setfix::enrichment::{
    check_b_enriched, check_nonexpansive, check_star_b_enriched, estimate_min_b, PairSampleSpec, DEFAULT_B_MAX,
};
use setfix::MultiMap;

fn main() -> setfix::Result<()> {
    let paper = MultiMap::paper_example();
    let sample = PairSampleSpec::grid(201);

    let r = check_nonexpansive(&paper, &sample, 1e-9)?;
    println!("x -> [1/x, 1/x^2] nonexpansive? {}", r.verdict.as_str());
    println!("  largest ratio {:.4} at {} {}", r.worst_ratio, r.witness.0, r.witness.1);
    println!("  largest excess {:.4} at {} {}", r.max_violation, r.violation_witness.0, r.violation_witness.1);

    for b in [2.5, 7.0, 7.5] {
        let r = check_b_enriched(&paper, b, &sample, 1e-9)?;
        println!("  b = {b}: {} (worst ratio {:.4} vs bound {})", r.verdict.as_str(), r.worst_ratio, b + 1.0);
    }

    let star = check_star_b_enriched(&paper, 1.5, &sample, 1e-9)?;
    println!("  star variant at b = 1.5: {}", star.verdict.as_str());

    println!("\nsmallest b on grids of 101 (1D) or 11x11 (2D) points:");
    for m in builtins() {
        let s = PairSampleSpec::grid(if m.map.dim() == 1 { 101 } else { 11 });
        let e = estimate_min_b(&m.map, &s, DEFAULT_B_MAX, 1e-9)?;
        println!("  {:<22} {:.6}", m.name, e.b);
    }
    Ok(())
}
