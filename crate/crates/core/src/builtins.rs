//! The catalogue of built-in test maps.

use std::f64::consts::FRAC_PI_2;

use crate::geometry::{CompactSet, Point};
use crate::multimap::{MultiMap, ScalarFn, VectorFn};

/// A named map with what is known about its fixed points.
#[derive(Debug, Clone)]
pub struct BuiltinMap {
    pub name: &'static str,
    pub map: MultiMap,
    /// A point `p` with `T(p) = {p}`, when the map has one.
    pub stationary_point: Option<Point>,
}

fn iv(lo: f64, hi: f64) -> CompactSet {
    CompactSet::interval(lo, hi).expect("valid interval")
}

fn square(r: f64) -> CompactSet {
    CompactSet::boxed(Point::from([-r, -r]), Point::from([r, r])).expect("valid box")
}

pub fn paper_example() -> BuiltinMap {
    BuiltinMap {
        name: "paper-example",
        map: MultiMap::paper_example(),
        stationary_point: Some(Point::scalar(1.0)),
    }
}

/// `x ↦ {−3x}` on `[−2, 2]` as a single-valued lift.
pub fn lift_neg3() -> BuiltinMap {
    BuiltinMap {
        name: "lift-neg3",
        map: MultiMap::single_valued(VectorFn::Linear { k: -3.0 }, iv(-2.0, 2.0)).unwrap(),
        stationary_point: Some(Point::scalar(0.0)),
    }
}

pub fn builtins() -> Vec<BuiltinMap> {
    vec![
        paper_example(),
        BuiltinMap {
            name: "linear-scale-neg3",
            map: MultiMap::linear_scale(-3.0, iv(-2.0, 2.0)).unwrap(),
            stationary_point: Some(Point::scalar(0.0)),
        },
        lift_neg3(),
        BuiltinMap {
            name: "constant-interval",
            map: MultiMap::constant(iv(0.2, 0.6), iv(0.0, 1.0)).unwrap(),
            stationary_point: None,
        },
        BuiltinMap {
            name: "constant-finite",
            map: MultiMap::constant(
                CompactSet::finite(vec![Point::scalar(0.25), Point::scalar(0.75)]).unwrap(),
                iv(0.0, 1.0),
            )
            .unwrap(),
            stationary_point: None,
        },
        BuiltinMap {
            name: "half-band",
            map: MultiMap::interval_band(
                ScalarFn::Linear {
                    slope: 0.5,
                    intercept: 0.0,
                },
                ScalarFn::Linear {
                    slope: 0.5,
                    intercept: 0.25,
                },
                iv(0.0, 1.0),
            )
            .unwrap(),
            stationary_point: None,
        },
        BuiltinMap {
            name: "rotation-2d",
            map: MultiMap::single_valued(
                VectorFn::Rotation {
                    angle: FRAC_PI_2,
                    scale: 1.0,
                },
                square(1.0),
            )
            .unwrap(),
            stationary_point: Some(Point::from([0.0, 0.0])),
        },
        BuiltinMap {
            name: "constant-triangle-2d",
            map: MultiMap::constant(
                CompactSet::polytope(vec![
                    Point::from([0.0, 0.0]),
                    Point::from([0.5, 0.0]),
                    Point::from([0.0, 0.5]),
                ])
                .unwrap(),
                square(1.0),
            )
            .unwrap(),
            stationary_point: None,
        },
        BuiltinMap {
            name: "constant-ball-2d",
            map: MultiMap::constant(
                CompactSet::ball(Point::from([0.2, 0.1]), 0.3).unwrap(),
                square(1.0),
            )
            .unwrap(),
            stationary_point: None,
        },
    ]
}

/// Looks a built-in up by name.
pub fn builtin(name: &str) -> Option<BuiltinMap> {
    builtins().into_iter().find(|b| b.name == name)
}
