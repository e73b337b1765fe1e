//! Hausdorff distances between the supported set shapes.
//!
//! ```text
//! cargo run --example hausdorff
//! ```

use setfix::geometry::{hausdorff, hausdorff_with_resolution};
use setfix::oracle::{grid_hausdorff, GridSpec};
use setfix::{CompactSet, Point};

fn main() -> setfix::Result<()> {
    let interval = CompactSet::interval(2.0, 4.0)?;
    let point = CompactSet::singleton(Point::scalar(1.0));
    println!("H([2, 4], {{1}}) = {}", hausdorff(&interval, &point)?.value);

    let square = CompactSet::boxed(Point::from([0.0, 0.0]), Point::from([1.0, 1.0]))?;
    let triangle = CompactSet::polytope(vec![
        Point::from([0.0, 0.0]),
        Point::from([2.0, 0.0]),
        Point::from([0.0, 2.0]),
    ])?;
    let disc = CompactSet::ball(Point::from([0.5, 0.5]), 0.5)?;
    let corners = CompactSet::finite(vec![Point::from([0.0, 0.0]), Point::from([1.0, 1.0])])?;

    for (name, a, b) in [
        ("square / triangle", &square, &triangle),
        ("square / disc", &square, &disc),
        ("disc / triangle", &disc, &triangle),
        ("square / corners", &square, &corners),
    ] {
        let h = hausdorff_with_resolution(a, b, 1e-3)?;
        let how = match h.resolution {
            None => "exact".to_string(),
            Some(r) => format!("lattice, spacing {r}"),
        };
        // the grid oracle shares no code with the closed forms
        let grid = GridSpec::new(1e-2, CompactSet::boxed(Point::from([-0.1, -0.1]), Point::from([2.1, 2.1]))?);
        let o = grid_hausdorff(a, b, &grid)?;
        println!("{name:<18} {:.6} ({how}); grid oracle {:.6}", h.value, o);
    }
    Ok(())
}
