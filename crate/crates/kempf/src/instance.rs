//! Instance documents.
//!
//! An instance is a group, a representation, a central shift `τ` and a list
//! of named points, stored as UTF-8 JSON. Complex scalars are `[re, im]`
//! pairs and matrices are row-major nested arrays:
//!
//! ```json
//! {
//!   "id": "A",
//!   "group": { "kind": "torus", "rank": 1 },
//!   "representation": { "weights": [[1], [-1]] },
//!   "tau": [0.0],
//!   "points": [{ "name": "p", "coords": [[1.0, 0.0], [1.0, 0.0]] }]
//! }
//! ```
//!
//! A `gl` representation is `{"named": "standard" | "sym^d" | "adjoint"}` or
//! `{"images": [...]}` with the images of the elementary matrices `E_ab` in
//! row-major order of `(a, b)`. `τ` has one entry per torus factor and a
//! single entry for `gl`.

use std::collections::BTreeSet;

use anyhow::{anyhow, bail, Context, Result};
use kempf_core::{CMat, CVec, Error as CoreError, Representation, Symplectization, C64};
use serde::{Deserialize, Serialize};

pub type Complex = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Instance {
    pub id: String,
    pub group: Group,
    pub representation: RepSpec,
    pub tau: Vec<f64>,
    pub points: Vec<Point>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Group {
    Torus { rank: usize },
    Gl { rank: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum RepSpec {
    Weights(Vec<Vec<i64>>),
    Named(String),
    Images(Vec<Vec<Vec<Complex>>>),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Point {
    pub name: String,
    pub coords: Vec<Complex>,
}

/// A validated instance, ready for the engines.
#[derive(Debug, Clone)]
pub struct Problem {
    pub id: String,
    pub sympl: Symplectization,
    pub points: Vec<(String, CVec)>,
}

impl Point {
    pub fn new(name: impl Into<String>, coords: &[C64]) -> Self {
        Self {
            name: name.into(),
            coords: coords.iter().map(|z| [z.re, z.im]).collect(),
        }
    }

    pub fn real(name: impl Into<String>, coords: &[f64]) -> Self {
        Self {
            name: name.into(),
            coords: coords.iter().map(|&x| [x, 0.0]).collect(),
        }
    }

    pub fn vector(&self) -> CVec {
        CVec::from_iterator(self.coords.len(), self.coords.iter().map(|c| C64::new(c[0], c[1])))
    }
}

impl Group {
    pub fn rank(self) -> usize {
        match self {
            Group::Torus { rank } | Group::Gl { rank } => rank,
        }
    }
}

fn parse_named(name: &str, r: usize) -> Result<Representation> {
    match name {
        "standard" => Ok(Representation::standard(r)),
        "adjoint" => Ok(Representation::adjoint(r)),
        _ => {
            let d = name
                .strip_prefix("sym^")
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&d| d >= 1)
                .ok_or_else(|| {
                    anyhow!("representation.named: unknown constructor {name:?} (expected \"standard\", \"sym^d\" with d >= 1, or \"adjoint\")")
                })?;
            Ok(Representation::sym(r, d))
        }
    }
}

fn elementary(i: usize, r: usize) -> String {
    format!("E_{}{}", i / r, i % r)
}

fn images(r: usize, data: &[Vec<Vec<Complex>>]) -> Result<Representation> {
    let n = data.first().map(Vec::len).unwrap_or(0);
    let mut mats = Vec::with_capacity(data.len());
    for (i, m) in data.iter().enumerate() {
        if m.len() != n || m.iter().any(|row| row.len() != n) {
            bail!("representation.images[{i}]: expected a {n}x{n} matrix");
        }
        mats.push(CMat::from_fn(n, n, |a, b| C64::new(m[a][b][0], m[a][b][1])));
    }
    Representation::from_images(r, mats).map_err(|e| match e {
        CoreError::BracketMismatch {
            first,
            second,
            residual,
        } => anyhow!(
            "representation.images: bracket relation fails on the pair ({}, {}) = images[{first}], images[{second}]: residual {residual:.3e}",
            elementary(first, r),
            elementary(second, r)
        ),
        other => anyhow!("representation.images: {other}"),
    })
}

impl Instance {
    pub fn build(&self) -> Result<Problem> {
        if self.id.is_empty() {
            bail!("id: must not be empty");
        }
        let rep = match (&self.group, &self.representation) {
            (Group::Torus { rank }, RepSpec::Weights(w)) => {
                Representation::torus(*rank, w.clone()).map_err(|e| anyhow!("representation.weights: {e}"))?
            }
            (Group::Gl { rank }, RepSpec::Named(name)) => parse_named(name, *rank)?,
            (Group::Gl { rank }, RepSpec::Images(data)) => images(*rank, data)?,
            (Group::Torus { .. }, _) => bail!("representation: a torus needs \"weights\""),
            (Group::Gl { .. }, _) => bail!("representation: gl needs \"named\" or \"images\""),
        };
        if self.group.rank() == 0 {
            bail!("group.rank: must be at least 1");
        }
        if let Some(i) = self.tau.iter().position(|t| !t.is_finite()) {
            bail!("tau[{i}]: not finite");
        }
        let n = rep.dim();
        let sympl = Symplectization::new(rep, self.tau.clone()).map_err(|e| anyhow!("tau: {e}"))?;
        let mut seen = BTreeSet::new();
        let mut points = Vec::with_capacity(self.points.len());
        for (i, p) in self.points.iter().enumerate() {
            if !seen.insert(p.name.as_str()) {
                bail!("points[{i}].name: duplicate name {:?}", p.name);
            }
            if p.coords.len() != n {
                bail!(
                    "points[{i}].coords: {} entries, the representation has dimension {n}",
                    p.coords.len()
                );
            }
            if p.coords.iter().flatten().any(|x| !x.is_finite()) {
                bail!("points[{i}].coords: not finite");
            }
            points.push((p.name.clone(), p.vector()));
        }
        Ok(Problem {
            id: self.id.clone(),
            sympl,
            points,
        })
    }
}

/// Parses a document holding one instance or an array of instances, and
/// validates each.
pub fn parse_instances(text: &str) -> Result<Vec<Instance>> {
    let list = if text.trim_start().starts_with('[') {
        serde_json::from_str::<Vec<Instance>>(text)?
    } else {
        vec![serde_json::from_str::<Instance>(text)?]
    };
    for (i, inst) in list.iter().enumerate() {
        inst.build().with_context(|| format!("instance {i} ({:?})", inst.id))?;
    }
    Ok(list)
}

/// Parses and validates a single instance.
pub fn parse_instance(text: &str) -> Result<Instance> {
    let inst: Instance = serde_json::from_str(text)?;
    inst.build()?;
    Ok(inst)
}

pub fn read_instances(path: &std::path::Path) -> Result<Vec<Instance>> {
    let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
    parse_instances(&text).with_context(|| format!("in {}", path.display()))
}

pub fn to_json(inst: &Instance) -> String {
    crate::format::to_json(inst)
}

pub fn list_to_json(list: &[Instance]) -> String {
    crate::format::to_json(list)
}
