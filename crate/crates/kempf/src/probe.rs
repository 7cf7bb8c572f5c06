//! Single-direction and single-run views used by the `weights` and `flow`
//! commands.

use anyhow::{anyhow, bail, Result};
use kempf_core::flow::{self, FlowOptions};
use kempf_core::lie::HermitianTypeElement;
use kempf_core::{linalg, CMat, GroupKind, MaximalWeight};
use serde_json::{json, Value};

use crate::instance::Problem;

/// Times at which `Ψ(v, e^{ts})` is sampled.
pub const PSI_TIMES: [f64; 6] = [0.0, 0.5, 1.0, 2.0, 4.0, 8.0];

/// A Hermitian direction from plain coordinates: `k` diagonal entries on a
/// torus; `r` diagonal entries or `r²` coordinates in the orthonormal
/// Hermitian basis on `gl(r)`.
pub fn direction(kind: GroupKind, coords: &[f64]) -> Result<CMat> {
    let r = kind.matrix_dim();
    if coords.iter().any(|x| !x.is_finite()) {
        bail!("--s: coordinates must be finite");
    }
    match kind {
        GroupKind::Torus { .. } if coords.len() == r => Ok(linalg::real_diag(coords)),
        GroupKind::Gl { .. } if coords.len() == r => Ok(linalg::real_diag(coords)),
        GroupKind::Gl { .. } if coords.len() == r * r => Ok(kind.from_hermitian_coords(coords)),
        GroupKind::Torus { .. } => bail!("--s: a rank-{r} torus needs {r} coordinates, got {}", coords.len()),
        GroupKind::Gl { .. } => bail!("--s: gl({r}) needs {r} or {} coordinates, got {}", r * r, coords.len()),
    }
}

fn weight_json(w: MaximalWeight) -> Value {
    match w {
        MaximalWeight::Finite(x) => json!(x),
        MaximalWeight::Infinite => json!("+inf"),
    }
}

fn cvec_json(v: &kempf_core::CVec) -> Value {
    json!(v.iter().map(|z| [z.re, z.im]).collect::<Vec<_>>())
}

/// `λ^s`, `Ψ(v, e^{ts})` samples and the limit point for every point.
pub fn weights(problem: &Problem, s: &CMat, point: Option<&str>) -> Result<Value> {
    let sympl = &problem.sympl;
    let h = HermitianTypeElement::hermitian(sympl.kind(), s.clone())?;
    let mut rows = Vec::new();
    for (name, v) in select(problem, point)? {
        let lambda = sympl.maximal_weight(&h, v)?;
        let psi: Vec<Value> = PSI_TIMES
            .iter()
            .map(|&t| Ok(json!({ "t": t, "psi": sympl.kempf_ness(s, t, v)? })))
            .collect::<kempf_core::Result<_>>()?;
        let limit = sympl.limit_point(&h, v)?;
        rows.push(json!({
            "name": name,
            "lambda": weight_json(lambda),
            "energy": weight_json(sympl.energy(&h, v)?),
            "psi": psi,
            "limit": limit.as_ref().map(cvec_json),
        }));
    }
    Ok(json!({ "instance": problem.id, "points": rows }))
}

/// One Kempf–Ness descent per point, with its trajectory.
pub fn flow_runs(problem: &Problem, opts: &FlowOptions, point: Option<&str>) -> Result<Value> {
    let mut rows = Vec::new();
    for (name, v) in select(problem, point)? {
        let run = flow::kn_descent(&problem.sympl, v, opts)?;
        let trajectory: Vec<Value> = run
            .trajectory
            .iter()
            .map(|s| {
                json!({
                    "iteration": s.iteration,
                    "moment_norm": s.moment_norm,
                    "psi": s.psi,
                    "exponent_norm": s.exponent_norm,
                })
            })
            .collect();
        rows.push(json!({
            "name": name,
            "classification": run.classification.as_str(),
            "iterations": run.iterations,
            "moment_norm": run.moment_norm,
            "psi": run.psi,
            "exponent_norm": run.exponent_norm(),
            "newton_step": run.newton_step,
            "note": run.note,
            "point": cvec_json(&run.point),
            "trajectory": trajectory,
        }));
    }
    Ok(json!({ "instance": problem.id, "points": rows }))
}

fn select<'a>(problem: &'a Problem, point: Option<&str>) -> Result<Vec<&'a (String, kempf_core::CVec)>> {
    let out: Vec<_> = problem
        .points
        .iter()
        .filter(|(n, _)| point.is_none_or(|p| p == n))
        .collect();
    if out.is_empty() {
        if let Some(p) = point {
            return Err(anyhow!("instance {:?} has no point named {p:?}", problem.id));
        }
    }
    Ok(out)
}
