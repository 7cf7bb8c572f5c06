//! Running engines side by side and cross-checking them.
//!
//! Three engines classify each point:
//!
//! * `analytic` — the weight-cone verdict (exact linear programming on a
//!   torus, frame search plus flow on `gl`);
//! * `flow` — Kempf–Ness descent read off directly: zero reached, escape,
//!   or a positive stall;
//! * `kn` — whether the Kempf–Ness function is bounded below.
//!
//! The analytic and flow engines both resolve the full level (stable,
//! polystable, semistable, unstable) and are compared on it; the bounded-
//! below probe only sees semistability, so any pair involving it is
//! compared on that alone. Inconclusive and failed runs are flagged and
//! left out of the agreement matrix.

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use anyhow::{bail, Result};
use kempf_core::flow::{self, Boundedness, FlowClass};
use kempf_core::lie::HermitianTypeElement;
use kempf_core::stability::{self, Budget, Check};
use kempf_core::{linalg, CMat, CVec, Certificate, Error as CoreError, GroupKind, Level, MaximalWeight, Symplectization, Verdict, C64};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use serde_json::{json, Value};

use crate::instance::Problem;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Engine {
    Analytic,
    Flow,
    Kn,
}

impl Engine {
    pub const ALL: [Engine; 3] = [Engine::Analytic, Engine::Flow, Engine::Kn];

    pub fn as_str(self) -> &'static str {
        match self {
            Engine::Analytic => "analytic",
            Engine::Flow => "flow",
            Engine::Kn => "kn",
        }
    }
}

impl fmt::Display for Engine {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Engine {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "analytic" => Ok(Engine::Analytic),
            "flow" => Ok(Engine::Flow),
            "kn" | "kn-bounded" => Ok(Engine::Kn),
            _ => bail!("unknown engine {s:?} (expected analytic, flow, kn or all)"),
        }
    }
}

/// Comma-separated engine names, or `all`. Order and duplicates are
/// normalised.
pub fn parse_engines(s: &str) -> Result<Vec<Engine>> {
    let mut out = Vec::new();
    for part in s.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        if part == "all" {
            out.extend(Engine::ALL);
        } else {
            out.push(part.parse()?);
        }
    }
    out.sort();
    out.dedup();
    if out.is_empty() {
        bail!("no engines selected");
    }
    Ok(out)
}

#[derive(Debug, Clone)]
pub struct CompareOptions {
    pub engines: Vec<Engine>,
    pub budget: Budget,
    /// Include wall-clock timings (makes reports machine-dependent).
    pub timings: bool,
    /// Restrict to one named point.
    pub point: Option<String>,
}

impl Default for CompareOptions {
    fn default() -> Self {
        Self {
            engines: Engine::ALL.to_vec(),
            budget: Budget::default(),
            timings: false,
            point: None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Decided,
    Inconclusive,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct EngineResult {
    pub engine: &'static str,
    pub status: Status,
    /// Level name for engines that resolve it; `semistable` / `unstable`
    /// for the bounded-below probe.
    pub verdict: Option<&'static str>,
    pub semistable: Option<bool>,
    pub confidence: Option<&'static str>,
    pub margin: Option<f64>,
    pub certificate: Option<Value>,
    /// `verified`, `unverifiable`, or `failed: <reason>`.
    pub verification: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub flow: Option<Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub millis: Option<f64>,
    #[serde(skip)]
    pub level: Option<Level>,
    #[serde(skip)]
    pub flow_class: Option<FlowClass>,
    #[serde(skip)]
    pub zero_point: Option<CVec>,
    #[serde(skip)]
    pub trajectory_psi: Vec<f64>,
}

impl EngineResult {
    fn new(engine: Engine, status: Status) -> Self {
        Self {
            engine: engine.as_str(),
            status,
            verdict: None,
            semistable: None,
            confidence: None,
            margin: None,
            certificate: None,
            verification: None,
            flow: None,
            note: None,
            millis: None,
            level: None,
            flow_class: None,
            zero_point: None,
            trajectory_psi: Vec::new(),
        }
    }

    fn failed(engine: Engine, err: &CoreError) -> Self {
        let status = match err {
            CoreError::NoConvergence(_) | CoreError::Indeterminate(_) => Status::Inconclusive,
            _ => Status::Error,
        };
        Self {
            note: Some(err.to_string()),
            ..Self::new(engine, status)
        }
    }

    pub fn decided(&self) -> bool {
        self.status == Status::Decided
    }

    pub fn verification_failed(&self) -> bool {
        self.verification.as_deref().is_some_and(|v| v.starts_with("failed"))
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Disagreement {
    pub engines: [&'static str; 2],
    /// `level` or `semistability`.
    pub compared_on: &'static str,
    pub verdicts: [Option<&'static str>; 2],
    pub certificates: [Option<Value>; 2],
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: &'static str,
    pub status: CheckStatus,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
pub struct PointReport {
    pub name: String,
    pub results: Vec<EngineResult>,
    /// Symmetric; `null` on the diagonal and wherever a run is undecided.
    /// Empty for single-engine runs.
    pub agreement: Vec<Vec<Option<bool>>>,
    pub disagreements: Vec<Disagreement>,
    pub checks: Vec<CheckResult>,
}

#[derive(Debug, Clone, Default, Serialize, PartialEq, Eq)]
pub struct Summary {
    pub points: usize,
    pub disagreements: usize,
    pub inconclusive: usize,
    pub errors: usize,
    pub check_failures: usize,
}

impl Summary {
    fn add(&mut self, other: &Summary) {
        self.points += other.points;
        self.disagreements += other.disagreements;
        self.inconclusive += other.inconclusive;
        self.errors += other.errors;
        self.check_failures += other.check_failures;
    }

    /// 0 when everything agrees, 2 on any disagreement or failed check,
    /// 3 when something was left undecided.
    pub fn exit_code(&self) -> i32 {
        if self.disagreements > 0 || self.check_failures > 0 {
            2
        } else if self.inconclusive > 0 || self.errors > 0 {
            3
        } else {
            0
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct Report {
    pub instance: String,
    pub group: String,
    pub engines: Vec<&'static str>,
    pub points: Vec<PointReport>,
    pub summary: Summary,
}

// ---------------------------------------------------------------------------
// number formatting: reports keep 11 significant digits so that goldens do
// not churn on last-bit noise

fn rnd(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return if x == 0.0 { 0.0 } else { x };
    }
    format!("{x:.10e}").parse().unwrap_or(x)
}

fn rnd_rel(x: f64, scale: f64) -> f64 {
    if x.abs() <= 1e-12 * scale {
        0.0
    } else {
        rnd(x)
    }
}

fn mat_json(m: &CMat) -> Value {
    let scale = linalg::scale_of(m);
    let rows: Vec<Vec<[f64; 2]>> = (0..m.nrows())
        .map(|i| {
            (0..m.ncols())
                .map(|j| [rnd_rel(m[(i, j)].re, scale), rnd_rel(m[(i, j)].im, scale)])
                .collect()
        })
        .collect();
    json!(rows)
}

fn vec_json(v: &CVec) -> Value {
    let scale = v.iter().fold(1.0f64, |m, z| m.max(z.norm()));
    let coords: Vec<[f64; 2]> = v.iter().map(|z| [rnd_rel(z.re, scale), rnd_rel(z.im, scale)]).collect();
    json!(coords)
}

fn certificate_json(c: &Certificate) -> Value {
    match c {
        Certificate::Destabilizer { s, value } => json!({
            "kind": c.kind_str(), "s": mat_json(s), "value": rnd(*value)
        }),
        Certificate::ZeroMoment { shift, norm } => json!({
            "kind": c.kind_str(), "shift": mat_json(shift), "norm": rnd(*norm)
        }),
        Certificate::Degeneration(d) => json!({
            "kind": c.kind_str(), "s_m": mat_json(&d.s_m), "y": vec_json(&d.y), "s0": mat_json(&d.s0)
        }),
        Certificate::AnalyticOnly {
            weights,
            multipliers,
            margin,
        } => json!({
            "kind": c.kind_str(),
            "weights": weights,
            "multipliers": multipliers.iter().map(|&x| rnd(x)).collect::<Vec<_>>(),
            "margin": rnd(*margin)
        }),
    }
}

fn check_string(r: kempf_core::Result<Check>) -> String {
    match r {
        Ok(Check::Verified) => "verified".into(),
        Ok(Check::Unverifiable) => "unverifiable".into(),
        Err(e) => format!("failed: {e}"),
    }
}

// ---------------------------------------------------------------------------
// engines

fn lambda(sympl: &Symplectization, s: &CMat, v: &CVec) -> kempf_core::Result<MaximalWeight> {
    let h = HermitianTypeElement::hermitian(sympl.kind(), s.clone())?;
    sympl.maximal_weight(&h, v)
}

fn run_analytic(sympl: &Symplectization, v: &CVec, budget: &Budget) -> EngineResult {
    let verdict = match stability::analytic_verdict(sympl, v, budget) {
        Ok(v) => v,
        Err(e) => return EngineResult::failed(Engine::Analytic, &e),
    };
    let verification = check_string(stability::verify_certificate(sympl, v, &verdict));
    EngineResult {
        verdict: Some(verdict.level.as_str()),
        semistable: Some(verdict.level.is_semistable()),
        confidence: Some(verdict.confidence.as_str()),
        margin: Some(rnd(verdict.margin)),
        certificate: Some(certificate_json(&verdict.certificate)),
        verification: Some(verification),
        level: Some(verdict.level),
        ..EngineResult::new(Engine::Analytic, Status::Decided)
    }
}

fn run_flow(sympl: &Symplectization, v: &CVec, budget: &Budget) -> EngineResult {
    let run = match flow::kn_descent(sympl, v, &budget.flow) {
        Ok(r) => r,
        Err(e) => return EngineResult::failed(Engine::Flow, &e),
    };
    let summary = json!({
        "classification": run.classification.as_str(),
        "iterations": run.iterations,
        "moment_norm": rnd(run.moment_norm),
        "psi": rnd(run.psi),
        "exponent_norm": rnd(run.exponent_norm()),
    });
    let mut out = EngineResult {
        flow: Some(summary),
        flow_class: Some(run.classification),
        trajectory_psi: run.trajectory.iter().map(|s| s.psi).collect(),
        note: run.note.clone(),
        ..EngineResult::new(Engine::Flow, Status::Decided)
    };
    let level = match run.classification {
        FlowClass::Inconclusive => {
            out.status = Status::Inconclusive;
            return out;
        }
        FlowClass::StalledPositive => {
            out.margin = Some(rnd(-run.moment_norm));
            Level::Unstable
        }
        FlowClass::Degenerating => {
            out.margin = Some(rnd(run.moment_norm));
            Level::SemistableNotPolystable
        }
        FlowClass::ReachedZero => {
            out.margin = Some(rnd(run.moment_norm));
            out.zero_point = Some(run.point.clone());
            let trivial = match sympl.stabilizer_algebra(v) {
                Ok(s) => s.is_trivial(),
                Err(e) => return EngineResult::failed(Engine::Flow, &e),
            };
            let level = if trivial {
                Level::Stable
            } else {
                Level::PolystableNotStable
            };
            match flow::zero_shift(sympl, v, &run, &budget.flow) {
                Ok(shift) => {
                    let moved = linalg::exp_hermitian(&sympl.rep().sigma(&shift), 1.0) * v;
                    let norm = sympl.moment_vector(&moved).map(|m| m.norm).unwrap_or(f64::INFINITY);
                    let verdict = Verdict {
                        level,
                        certificate: Certificate::ZeroMoment { shift, norm },
                        confidence: kempf_core::Confidence::Heuristic,
                        margin: run.moment_norm,
                    };
                    out.verification = Some(check_string(stability::verify_certificate(sympl, v, &verdict)));
                    out.certificate = Some(certificate_json(&verdict.certificate));
                }
                Err(e) => out.verification = Some(format!("failed: {e}")),
            }
            level
        }
    };
    out.level = Some(level);
    out.verdict = Some(level.as_str());
    out.semistable = Some(level.is_semistable());
    out.confidence = Some(if sympl.kind().is_torus() { "exact" } else { "heuristic" });
    out
}

fn run_kn(sympl: &Symplectization, v: &CVec, budget: &Budget) -> EngineResult {
    let probe = match flow::boundedness_probe(sympl, v, budget) {
        Ok(p) => p,
        Err(e) => return EngineResult::failed(Engine::Kn, &e),
    };
    let mut out = EngineResult::new(Engine::Kn, Status::Decided);
    match probe {
        Boundedness::BoundedBelow {
            inf_estimate,
            confidence,
        } => {
            out.verdict = Some("semistable");
            out.semistable = Some(true);
            out.confidence = Some(confidence.as_str());
            out.margin = Some(rnd(inf_estimate));
        }
        Boundedness::Unbounded { direction, slope } => {
            out.verdict = Some("unstable");
            out.semistable = Some(false);
            out.margin = Some(rnd(slope));
            out.verification = Some(match lambda(sympl, &direction, v) {
                Ok(MaximalWeight::Finite(l)) if l < 0.0 => "verified".into(),
                Ok(_) => "unverifiable".into(),
                Err(e) => format!("failed: {e}"),
            });
            out.confidence = Some(if out.verification.as_deref() == Some("verified") {
                "exact"
            } else {
                "heuristic"
            });
            let cert = Certificate::Destabilizer {
                s: direction,
                value: slope,
            };
            out.certificate = Some(certificate_json(&cert));
        }
        Boundedness::Inconclusive { psi, note } => {
            out.status = Status::Inconclusive;
            out.margin = Some(rnd(psi));
            out.note = Some(note);
        }
    }
    out
}

fn run_engine(engine: Engine, sympl: &Symplectization, v: &CVec, opts: &CompareOptions) -> EngineResult {
    let start = Instant::now();
    let mut r = match engine {
        Engine::Analytic => run_analytic(sympl, v, &opts.budget),
        Engine::Flow => run_flow(sympl, v, &opts.budget),
        Engine::Kn => run_kn(sympl, v, &opts.budget),
    };
    if opts.timings {
        r.millis = Some((start.elapsed().as_secs_f64() * 1e6).round() / 1e3);
    }
    r
}

// ---------------------------------------------------------------------------
// cross-checks

fn compare_pair(a: &EngineResult, b: &EngineResult) -> Option<(bool, &'static str)> {
    if !a.decided() || !b.decided() {
        return None;
    }
    Some(match (a.level, b.level) {
        (Some(x), Some(y)) => (x == y, "level"),
        _ => (a.semistable == b.semistable, "semistability"),
    })
}

fn check(name: &'static str, ok: bool, detail: Option<String>) -> CheckResult {
    CheckResult {
        name,
        status: if ok { CheckStatus::Pass } else { CheckStatus::Fail },
        detail,
    }
}

fn iff(name: &'static str, lhs: bool, rhs: bool, lhs_name: &str, rhs_name: &str) -> CheckResult {
    let detail = (lhs != rhs).then(|| format!("{lhs_name} = {lhs}, {rhs_name} = {rhs}"));
    check(name, lhs == rhs, detail)
}

fn result<'a>(results: &'a [EngineResult], e: Engine) -> Option<&'a EngineResult> {
    results.iter().find(|r| r.engine == e.as_str() && r.decided())
}

const STRUCT_TOL: f64 = 1e-8;

fn commutant_check(sympl: &Symplectization, v: &CVec) -> kempf_core::Result<CheckResult> {
    let stab = sympl.stabilizer_algebra(v)?;
    let m = sympl.moment_vector(v)?.hermitian;
    let scale = 1.0 + linalg::norm(&m);
    let worst = stab
        .k_v
        .iter()
        .map(|k| linalg::norm(&linalg::commutator(&m, k)) / (scale * linalg::norm(k).max(1e-300)))
        .fold(0.0f64, f64::max);
    Ok(check(
        "moment_in_commutant",
        worst <= STRUCT_TOL,
        (worst > STRUCT_TOL).then(|| format!("relative commutator {worst:.3e}")),
    ))
}

fn vanishing_check(sympl: &Symplectization, v: &CVec) -> kempf_core::Result<CheckResult> {
    let w = stability::stabilizer_weights(sympl, v)?;
    let worst = w.iter().fold(0.0f64, |m, x| m.max(x.abs()));
    let slack = 1e-9 * (1.0 + sympl.tau().iter().fold(0.0f64, |m, t| m.max(t.abs())));
    Ok(check(
        "stabilizer_weights_vanish",
        worst <= slack,
        (worst > slack).then(|| format!("largest weight {worst:.3e}")),
    ))
}

fn reductive_check(sympl: &Symplectization, zeros: &[CVec]) -> kempf_core::Result<CheckResult> {
    for z in zeros {
        let st = sympl.stabilizer_algebra(z)?;
        if !st.is_reductive() {
            return Ok(check(
                "zero_stabilizer_reductive",
                false,
                Some(format!("dim g_x = {}, dim k_x = {}", st.g_v.len(), st.k_v.len())),
            ));
        }
    }
    Ok(check("zero_stabilizer_reductive", true, None))
}

fn random_hermitian(kind: GroupKind, rng: &mut ChaCha8Rng) -> CMat {
    let coords: Vec<f64> = (0..kind.dim()).map(|_| rng.random_range(-1.0..1.0)).collect();
    let s = kind.from_hermitian_coords(&coords);
    let n = linalg::norm(&s).max(1e-12);
    s * C64::new(1.0 / n, 0.0)
}

/// Second differences of `t ↦ Ψ(v, e^{ts})`, evaluated through the group
/// action, along seeded random directions; plus monotonicity of `Ψ` along
/// the recorded flow trajectory.
fn convexity_check(sympl: &Symplectization, v: &CVec, seed: u64, trajectory: &[f64]) -> kempf_core::Result<CheckResult> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let kind = sympl.kind();
    let h = 0.5;
    for _ in 0..3 {
        let s = random_hermitian(kind, &mut rng);
        let mut f = Vec::new();
        for i in -4..=4 {
            let g = linalg::exp_hermitian(&s, f64::from(i) * h);
            f.push(sympl.kempf_ness_potential(&g, v)?);
        }
        let scale = 1.0 + f.iter().fold(0.0f64, |m, x| m.max(x.abs()));
        for w in f.windows(3) {
            let d2 = w[0] + w[2] - 2.0 * w[1];
            if d2 < -1e-9 * scale {
                return Ok(check(
                    "kempf_ness_convex",
                    false,
                    Some(format!("second difference {d2:.3e}")),
                ));
            }
        }
    }
    for w in trajectory.windows(2) {
        if w[1] > w[0] + 1e-9 * (1.0 + w[0].abs()) {
            return Ok(check(
                "kempf_ness_convex",
                false,
                Some(format!("flow increased psi from {} to {}", w[0], w[1])),
            ));
        }
    }
    Ok(check("kempf_ness_convex", true, None))
}

fn cross_checks(
    sympl: &Symplectization,
    v: &CVec,
    results: &[EngineResult],
    budget: &Budget,
    seed: u64,
) -> Vec<CheckResult> {
    let mut out = Vec::new();
    let analytic = result(results, Engine::Analytic);
    let fl = result(results, Engine::Flow);
    let kn = result(results, Engine::Kn);
    let mut zeros = Vec::new();

    if let (Some(a), Some(f)) = (analytic, fl) {
        let level = a.level.expect("analytic runs resolve the level");
        let class = f.flow_class.expect("flow runs carry a class");
        out.push(iff(
            "polystable_iff_zero_reached",
            level.is_polystable(),
            class == FlowClass::ReachedZero,
            "polystable",
            "zero reached",
        ));
        out.push(iff(
            "stable_iff_zero_reached_with_trivial_stabilizer",
            level.is_stable(),
            f.level == Some(Level::Stable),
            "stable",
            "zero reached with trivial stabilizer",
        ));
        out.push(iff(
            "semistable_iff_inf_moment_zero",
            level.is_semistable(),
            class.semistable() == Some(true),
            "semistable",
            "inf |mu| = 0",
        ));
    }
    if let (Some(a), Some(k)) = (analytic, kn) {
        out.push(iff(
            "semistable_iff_bounded_below",
            a.semistable == Some(true),
            k.semistable == Some(true),
            "semistable",
            "bounded below",
        ));
    }
    if let Some(a) = analytic {
        let semistable = a.semistable == Some(true);
        let deg = stability::degeneration_certificate(sympl, v, budget);
        let detail = match (&deg, semistable) {
            (Ok(_), false) => Some("degeneration built for an unstable point".to_string()),
            (Err(e), true) => Some(format!("no verified degeneration: {e}")),
            _ => None,
        };
        out.push(check("semistable_iff_degeneration", deg.is_ok() == semistable, detail));
        if let Ok(d) = &deg {
            zeros.push(linalg::exp_hermitian(&sympl.rep().sigma(&d.s0), 1.0) * &d.y);
        }
        if semistable {
            out.push(vanishing_check(sympl, v).unwrap_or_else(|e| check("stabilizer_weights_vanish", false, Some(e.to_string()))));
        }
    }
    let failed: Vec<String> = results
        .iter()
        .filter(|r| r.verification_failed())
        .map(|r| format!("{}: {}", r.engine, r.verification.as_deref().unwrap_or_default()))
        .collect();
    if results.iter().any(|r| r.verification.is_some()) {
        let detail = (!failed.is_empty()).then(|| failed.join("; "));
        out.push(check("certificates_reverified", failed.is_empty(), detail));
    }
    if let Some(z) = fl.and_then(|f| f.zero_point.clone()) {
        zeros.push(z);
    }
    if !zeros.is_empty() {
        out.push(reductive_check(sympl, &zeros).unwrap_or_else(|e| check("zero_stabilizer_reductive", false, Some(e.to_string()))));
    }
    out.push(commutant_check(sympl, v).unwrap_or_else(|e| check("moment_in_commutant", false, Some(e.to_string()))));
    let trajectory = fl.map(|f| f.trajectory_psi.as_slice()).unwrap_or(&[]);
    out.push(
        convexity_check(sympl, v, seed, trajectory).unwrap_or_else(|e| check("kempf_ness_convex", false, Some(e.to_string()))),
    );
    out
}

fn point_report(sympl: &Symplectization, name: &str, v: &CVec, index: usize, opts: &CompareOptions) -> PointReport {
    let results: Vec<EngineResult> = opts.engines.iter().map(|&e| run_engine(e, sympl, v, opts)).collect();
    let m = results.len();
    let mut agreement = Vec::new();
    let mut disagreements = Vec::new();
    if m > 1 {
        agreement = vec![vec![None; m]; m];
        for i in 0..m {
            for j in i + 1..m {
                if let Some((ok, on)) = compare_pair(&results[i], &results[j]) {
                    agreement[i][j] = Some(ok);
                    agreement[j][i] = Some(ok);
                    if !ok {
                        disagreements.push(Disagreement {
                            engines: [results[i].engine, results[j].engine],
                            compared_on: on,
                            verdicts: [results[i].verdict, results[j].verdict],
                            certificates: [results[i].certificate.clone(), results[j].certificate.clone()],
                        });
                    }
                }
            }
        }
    }
    let seed = opts.budget.seed ^ (index as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15);
    let checks = cross_checks(sympl, v, &results, &opts.budget, seed);
    PointReport {
        name: name.to_string(),
        results,
        agreement,
        disagreements,
        checks,
    }
}

fn group_name(kind: GroupKind) -> String {
    match kind {
        GroupKind::Torus { rank } => format!("torus({rank})"),
        GroupKind::Gl { rank } => format!("gl({rank})"),
    }
}

fn summarize(points: &[PointReport]) -> Summary {
    let mut s = Summary {
        points: points.len(),
        ..Summary::default()
    };
    for p in points {
        s.disagreements += p.disagreements.len();
        s.check_failures += p.checks.iter().filter(|c| c.status == CheckStatus::Fail).count();
        for r in &p.results {
            match r.status {
                Status::Inconclusive => s.inconclusive += 1,
                Status::Error => s.errors += 1,
                Status::Decided => {}
            }
        }
    }
    s
}

/// Runs the selected engines on every point of `problem`; points run in
/// parallel and are reported in instance order.
pub fn compare(problem: &Problem, opts: &CompareOptions) -> Result<Report> {
    let selected: Vec<(usize, &(String, CVec))> = match &opts.point {
        Some(name) => {
            let found: Vec<_> = problem.points.iter().enumerate().filter(|(_, (n, _))| n == name).collect();
            if found.is_empty() {
                bail!("instance {:?} has no point named {name:?}", problem.id);
            }
            found
        }
        None => problem.points.iter().enumerate().collect(),
    };
    let points: Vec<PointReport> = selected
        .par_iter()
        .map(|(i, (name, v))| point_report(&problem.sympl, name, v, *i, opts))
        .collect();
    let summary = summarize(&points);
    Ok(Report {
        instance: problem.id.clone(),
        group: group_name(problem.sympl.kind()),
        engines: opts.engines.iter().map(|e| e.as_str()).collect(),
        points,
        summary,
    })
}

/// [`compare`] over many problems, in parallel, in input order.
pub fn compare_all(problems: &[Problem], opts: &CompareOptions) -> Result<Vec<Report>> {
    problems.par_iter().map(|p| compare(p, opts)).collect()
}

pub fn total(reports: &[Report]) -> Summary {
    let mut s = Summary::default();
    for r in reports {
        s.add(&r.summary);
    }
    s
}

pub fn to_json<T: Serialize + ?Sized>(value: &T) -> String {
    crate::format::to_json(value)
}
