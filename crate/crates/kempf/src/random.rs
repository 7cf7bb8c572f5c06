//! Seeded random instances.
//!
//! Every instance carries four points: two with independent complex
//! Gaussian coordinates and two sparse ones, where a random proper subset of
//! the coordinates is kept. The sparse points land on the boundary strata
//! (semistable but not polystable) far more often than generic ones.

use rand::seq::index;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::instance::{Complex, Group, Instance, Point, RepSpec};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GroupChoice {
    Torus,
    Gl,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomParams {
    pub seed: u64,
    pub count: usize,
    pub group: GroupChoice,
    /// Largest torus rank (or `r` for `gl`).
    pub k: usize,
    /// Largest representation dimension.
    pub n: usize,
    /// Torus weights are uniform in `[−bound, bound]`.
    pub bound: i64,
    /// Each `τ` coordinate is drawn from this set.
    pub tau_set: Vec<f64>,
}

impl Default for RandomParams {
    fn default() -> Self {
        Self {
            seed: 0,
            count: 200,
            group: GroupChoice::Torus,
            k: 3,
            n: 6,
            bound: 5,
            tau_set: vec![-1.0, 0.0, 1.0],
        }
    }
}

pub const DENSE_POINTS: usize = 2;
pub const SPARSE_POINTS: usize = 2;

fn gaussian(rng: &mut ChaCha8Rng) -> Complex {
    [rng.sample(StandardNormal), rng.sample(StandardNormal)]
}

fn points(rng: &mut ChaCha8Rng, n: usize) -> Vec<Point> {
    let mut out = Vec::with_capacity(DENSE_POINTS + SPARSE_POINTS);
    for i in 0..DENSE_POINTS {
        let coords = (0..n).map(|_| gaussian(rng)).collect();
        out.push(Point {
            name: format!("g{i}"),
            coords,
        });
    }
    for i in 0..SPARSE_POINTS {
        let keep = rng.random_range(0..n);
        let support = index::sample(rng, n, keep);
        let mut coords = vec![[0.0, 0.0]; n];
        for j in support.iter() {
            coords[j] = gaussian(rng);
        }
        out.push(Point {
            name: format!("s{i}"),
            coords,
        });
    }
    out
}

fn binomial(n: usize, k: usize) -> usize {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

fn gl_reps(r: usize, nmax: usize) -> Vec<(String, usize)> {
    let mut reps = vec![("standard".to_string(), r)];
    for d in 2..=4 {
        reps.push((format!("sym^{d}"), binomial(r + d - 1, d)));
    }
    reps.push(("adjoint".to_string(), r * r));
    reps.retain(|(_, dim)| *dim <= nmax.max(r));
    reps
}

pub fn generate(p: &RandomParams) -> Vec<Instance> {
    let mut rng = ChaCha8Rng::seed_from_u64(p.seed);
    let kmax = p.k.max(1);
    let nmax = p.n.max(1);
    let bound = p.bound.abs();
    let tau_set = if p.tau_set.is_empty() { vec![0.0] } else { p.tau_set.clone() };
    let mut out = Vec::with_capacity(p.count);
    for i in 0..p.count {
        let rank = rng.random_range(1..=kmax);
        let id = format!("r{}-{i:04}", p.seed);
        let inst = match p.group {
            GroupChoice::Torus => {
                let n = rng.random_range(1..=nmax);
                let weights = (0..n)
                    .map(|_| (0..rank).map(|_| rng.random_range(-bound..=bound)).collect())
                    .collect();
                let tau = (0..rank).map(|_| tau_set[rng.random_range(0..tau_set.len())]).collect();
                Instance {
                    id,
                    group: Group::Torus { rank },
                    representation: RepSpec::Weights(weights),
                    tau,
                    points: points(&mut rng, n),
                }
            }
            GroupChoice::Gl => {
                let reps = gl_reps(rank, nmax);
                let (name, n) = reps[rng.random_range(0..reps.len())].clone();
                let tau = vec![tau_set[rng.random_range(0..tau_set.len())]];
                Instance {
                    id,
                    group: Group::Gl { rank },
                    representation: RepSpec::Named(name),
                    tau,
                    points: points(&mut rng, n),
                }
            }
        };
        out.push(inst);
    }
    out
}

/// Whether a point was generated with a proper support.
pub fn is_sparse(p: &Point) -> bool {
    p.coords.iter().any(|c| c[0] == 0.0 && c[1] == 0.0)
}
