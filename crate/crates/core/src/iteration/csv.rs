use std::io::{self, Write};

use super::IterationTrace;
use crate::fmt::num;

/// `n,x_0..x_{d−1},y_0..y_{d−1},residual,dist_to_target`
pub fn trace_csv_header(dim: usize) -> String {
    let mut cols = vec!["n".to_string()];
    cols.extend((0..dim).map(|i| format!("x_{i}")));
    cols.extend((0..dim).map(|i| format!("y_{i}")));
    cols.push("residual".into());
    cols.push("dist_to_target".into());
    cols.join(",")
}

/// Writes the trace as CSV. `dist_to_target` is left empty when the run had
/// no target.
pub fn write_trace_csv<W: Write>(trace: &IterationTrace, mut out: W) -> io::Result<()> {
    let dim = trace.records.first().map_or(0, |r| r.x.dim());
    writeln!(out, "{}", trace_csv_header(dim))?;
    for r in &trace.records {
        let mut row = vec![r.n.to_string()];
        row.extend(r.x.coords().iter().map(|&c| num(c)));
        row.extend(r.y.coords().iter().map(|&c| num(c)));
        row.push(num(r.residual));
        row.push(r.dist_to_target.map(num).unwrap_or_default());
        writeln!(out, "{}", row.join(","))?;
    }
    Ok(())
}
