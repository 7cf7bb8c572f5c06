//! Built-in instances covering each stability class.
//!
//! The verdicts of these instances are not asserted here; they are produced
//! by the engines and kept as regression goldens.

use crate::instance::{Group, Instance, Point, RepSpec};

fn torus(id: &str, rank: usize, weights: Vec<Vec<i64>>, tau: Vec<f64>, points: Vec<Point>) -> Instance {
    Instance {
        id: id.into(),
        group: Group::Torus { rank },
        representation: RepSpec::Weights(weights),
        tau,
        points,
    }
}

fn gl(id: &str, rank: usize, named: &str, tau: f64, points: Vec<Point>) -> Instance {
    Instance {
        id: id.into(),
        group: Group::Gl { rank },
        representation: RepSpec::Named(named.into()),
        tau: vec![tau],
        points,
    }
}

/// Suffixes of the `τ` sweeps.
const SWEEP: [(&str, f64); 3] = [("minus", -1.0), ("zero", 0.0), ("plus", 1.0)];

pub fn gallery() -> Vec<Instance> {
    let mut out = vec![torus(
        "A",
        1,
        vec![vec![1], vec![-1]],
        vec![0.0],
        vec![
            Point::real("one_one", &[1.0, 1.0]),
            Point::real("one_zero", &[1.0, 0.0]),
            Point::real("origin", &[0.0, 0.0]),
        ],
    )];
    for (suffix, tau) in SWEEP {
        out.push(torus(
            &format!("B_{suffix}"),
            1,
            vec![vec![1]],
            vec![tau],
            vec![Point::real("one", &[1.0])],
        ));
    }
    out.push(torus(
        "C",
        2,
        vec![vec![1, 0], vec![0, 1], vec![-1, -1]],
        vec![0.0, 0.0],
        vec![
            Point::real("one_one_one", &[1.0, 1.0, 1.0]),
            Point::real("one_one_zero", &[1.0, 1.0, 0.0]),
        ],
    ));
    out.push(gl(
        "D",
        2,
        "standard",
        0.0,
        vec![Point::real("e1", &[1.0, 0.0]), Point::real("origin", &[0.0, 0.0])],
    ));
    // sym² in the basis x², √2·xy, y²; scaling is irrelevant for gl verdicts
    for (suffix, tau) in SWEEP {
        out.push(gl(
            &format!("E_{suffix}"),
            2,
            "sym^2",
            0.5 * tau,
            vec![
                Point::real("x2", &[1.0, 0.0, 0.0]),
                Point::real("xy", &[0.0, 1.0, 0.0]),
                Point::real("x2_plus_y2", &[1.0, 0.0, 1.0]),
            ],
        ));
    }
    out
}

pub fn find(id: &str) -> Option<Instance> {
    gallery().into_iter().find(|i| i.id == id)
}
