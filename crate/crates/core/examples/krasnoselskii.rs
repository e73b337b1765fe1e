//! Krasnoselskii iteration x_{n+1} = (1-θ)x_n + θy_n with y_n picked from T(x_n).
//!
//! ```text
//! cargo run --example krasnoselskii
//! ```

use setfix::builtins::builtin;
use setfix::iteration::{fejer_check, krasnoselskii_run, residual_summary, IterationConfig};
use setfix::multimap::SelectorStrategy;
use setfix::{MultiMap, Point};

fn main() -> setfix::Result<()> {
    let paper = MultiMap::paper_example();
    for selector in [
        SelectorStrategy::Nearest,
        SelectorStrategy::LowerEndpoint,
        SelectorStrategy::RandomInSet { seed: 1 },
    ] {
        let cfg = IterationConfig {
            selector,
            max_iter: 500,
            target: Some(Point::scalar(1.0)),
            ..IterationConfig::new(0.1, Point::scalar(0.6))
        };
        let trace = krasnoselskii_run(&paper, &cfg)?;
        let last = trace.last();
        let summary = residual_summary(&trace, cfg.residual_tol)?;
        println!(
            "{selector:?}: {:?} after {} steps, x = {}, residual {:.2e}, monotone {}",
            trace.terminated_by,
            last.n,
            last.x,
            last.residual,
            summary.is_monotone_after_burnin
        );
    }

    // x -> -3x needs θ < 1/2; the run is Fejér monotone toward 0
    let neg3 = builtin("lift-neg3").unwrap();
    let cfg = IterationConfig {
        b_hint: Some(1.0),
        ..IterationConfig::new(0.2, Point::scalar(1.5))
    };
    let trace = krasnoselskii_run(&neg3.map, &cfg)?;
    println!(
        "-3x from 1.5: {} steps, Fejér {:?}",
        trace.last().n,
        fejer_check(&trace, &Point::scalar(0.0), 1e-12)?
    );

    let cfg = IterationConfig {
        b_hint: Some(1.0),
        max_iter: 20,
        ..IterationConfig::new(0.5, Point::scalar(1.5))
    };
    let trace = krasnoselskii_run(&neg3.map, &cfg)?;
    println!(
        "-3x with θ = 1/2: warning {}, ends at {} after {:?}",
        trace.theta_warning,
        trace.last().x,
        trace.terminated_by
    );
    Ok(())
}
