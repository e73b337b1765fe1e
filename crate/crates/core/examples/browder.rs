//! The Browder path u_c = c·P(u_c) + (1-c)·x0 for c increasing to 1.
//!
//! ```text
//! cargo run --example browder
//! ```

use setfix::builtins::builtin;
use setfix::iteration::{browder_path, BrowderPathConfig};
use setfix::{MultiMap, Point};

fn main() -> setfix::Result<()> {
    let neg3 = builtin("lift-neg3").unwrap().map;
    let path = browder_path(&neg3, &BrowderPathConfig::new(0.5, Point::scalar(1.0), 20))?;
    println!("  j      c             u_c        (1-c)/(1+c)   d(u, Tu)  inner");
    for (j, s) in path.iter().enumerate() {
        let u = s.u.coords()[0];
        println!(
            "{:>3} {:>9.6} {:>15.12} {:>15.12} {:>9.6} {:>6}",
            j + 1,
            s.c,
            u,
            (1.0 - s.c) / (1.0 + s.c),
            neg3.residual(&s.u)?,
            s.inner_iters
        );
    }

    // paper-example: the path drifts toward the fixed point 1
    let paper = MultiMap::paper_example();
    let path = browder_path(&paper, &BrowderPathConfig::new(1.0 / 8.5, Point::scalar(0.75), 2000))?;
    let last = path.last().unwrap();
    println!("paper-example, c = {:.5}: u = {}", last.c, last.u);
    Ok(())
}
