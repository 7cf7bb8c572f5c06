//! Stability verdicts with certificates that can be re-checked.
//!
//! On a torus everything reduces to the cone spanned by the weights that
//! `v` carries, and the verdict comes from exact rational linear programs:
//!
//! * unstable iff some `s` with `⟨w, s⟩ ≤ 0` on the support has
//!   `⟨τ, s⟩ < 0`;
//! * polystable iff `−τ` is a strictly positive combination of the
//!   support weights;
//! * stable iff moreover the support weights span.
//!
//! For `GL(r)` the same programs run on the maximal tori of sampled
//! unitary frames; a negative value there is a verified destabilizer,
//! otherwise the gradient flow decides and the verdict is tagged
//! heuristic unless the flow produced a zero of the moment map.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_rational::BigRational;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::flow::{self, FlowClass, FlowOptions, FlowResult};
use crate::group::{unit, AlgebraElement, GroupKind};
use crate::lie::{self, HermitianTypeElement};
use crate::linalg::{self, cx, re, CMat, CVec, C64};
use crate::lp::{self, ConeAnalysis, Scalar};
use crate::momentum::{MaximalWeight, Symplectization};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Level {
    Unstable,
    SemistableNotPolystable,
    PolystableNotStable,
    Stable,
}

impl Level {
    pub const ALL: [Level; 4] = [
        Level::Unstable,
        Level::SemistableNotPolystable,
        Level::PolystableNotStable,
        Level::Stable,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Level::Unstable => "unstable",
            Level::SemistableNotPolystable => "semistable_not_polystable",
            Level::PolystableNotStable => "polystable_not_stable",
            Level::Stable => "stable",
        }
    }

    pub fn parse(s: &str) -> Option<Level> {
        Level::ALL.into_iter().find(|l| l.as_str() == s)
    }

    pub fn is_semistable(self) -> bool {
        self >= Level::SemistableNotPolystable
    }

    pub fn is_polystable(self) -> bool {
        self >= Level::PolystableNotStable
    }

    pub fn is_stable(self) -> bool {
        self == Level::Stable
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Confidence {
    Exact,
    Heuristic,
}

impl Confidence {
    pub fn as_str(self) -> &'static str {
        match self {
            Confidence::Exact => "exact",
            Confidence::Heuristic => "heuristic",
        }
    }
}

/// `lim e^{t s_m} v = y` and `μ(e^{s₀} y) = 0` with `[s_m, s₀] = 0`.
#[derive(Debug, Clone)]
pub struct Degeneration {
    pub s_m: CMat,
    pub y: CVec,
    pub s0: CMat,
}

#[derive(Debug, Clone)]
pub enum Certificate {
    /// Hermitian `s` with `λ^s(v) = value < 0`.
    Destabilizer { s: CMat, value: f64 },
    /// Hermitian `shift` with `‖μ(e^{shift} v)‖ = norm ≈ 0`.
    ZeroMoment { shift: CMat, norm: f64 },
    Degeneration(Degeneration),
    /// Support weights and positive multipliers `c` with `Σ c_w w = −τ`;
    /// empty when no certificate beyond the margin is available.
    AnalyticOnly {
        weights: Vec<Vec<i64>>,
        multipliers: Vec<f64>,
        margin: f64,
    },
}

impl Certificate {
    pub fn kind_str(&self) -> &'static str {
        match self {
            Certificate::Destabilizer { .. } => "destabilizer",
            Certificate::ZeroMoment { .. } => "zero_moment",
            Certificate::Degeneration(_) => "degeneration",
            Certificate::AnalyticOnly { .. } => "analytic_only",
        }
    }
}

#[derive(Debug, Clone)]
pub struct Verdict {
    pub level: Level,
    pub certificate: Certificate,
    pub confidence: Confidence,
    /// Signed distance to the decision boundary: the destabilizing value
    /// when unstable, the multiplier slack when polystable, `0` otherwise.
    pub margin: f64,
}

/// Search effort for the `GL(r)` engine.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Budget {
    /// Random unitary frames tried in addition to the structured ones.
    pub frames: usize,
    pub seed: u64,
    pub flow: FlowOptions,
}

impl Default for Budget {
    fn default() -> Self {
        Self {
            frames: 16,
            seed: 0x6b65_6d70_66,
            flow: FlowOptions::default(),
        }
    }
}

/// Distinct weights carried by `v`; coordinates sharing a weight are
/// pooled.
pub fn support_weights(weights: &[Vec<i64>], v: &CVec) -> Result<Vec<Vec<i64>>> {
    if weights.len() != v.len() {
        return Err(Error::Shape(format!("{} weights for a point of length {}", weights.len(), v.len())));
    }
    let scale = linalg::vec_norm(v);
    let mut pooled: BTreeMap<&[i64], f64> = BTreeMap::new();
    for (w, z) in weights.iter().zip(v.iter()) {
        *pooled.entry(w.as_slice()).or_insert(0.0) += z.norm_sqr();
    }
    let mut out = Vec::new();
    for (w, mass) in pooled {
        let c = linalg::sqrt(mass);
        if c > tol::SUPPORT_BAND * scale {
            out.push(w.to_vec());
        } else if c > tol::SUPPORT_ZERO * scale {
            return Err(Error::Indeterminate(format!(
                "coordinate of size {c:.3e} on weight {w:?} inside the support band"
            )));
        }
    }
    Ok(out)
}

fn exact_tau(tau: &[f64]) -> Vec<BigRational> {
    tau.iter().map(|&t| BigRational::from_f64(t)).collect()
}

fn to_f64s(xs: &[BigRational]) -> Vec<f64> {
    xs.iter().map(Scalar::to_f64).collect()
}

fn lambda_of(sympl: &Symplectization, s: &CMat, v: &CVec) -> Result<MaximalWeight> {
    let h = HermitianTypeElement::hermitian(sympl.kind(), s.clone())?;
    sympl.maximal_weight(&h, v)
}

pub fn analytic_verdict(sympl: &Symplectization, v: &CVec, budget: &Budget) -> Result<Verdict> {
    sympl.rep().check_point(v)?;
    match sympl.kind() {
        GroupKind::Torus { .. } => torus_verdict(sympl, v, budget),
        GroupKind::Gl { .. } => gl_verdict(sympl, v, budget),
    }
}

fn torus_analysis(sympl: &Symplectization, v: &CVec) -> Result<(Vec<Vec<i64>>, ConeAnalysis<BigRational>)> {
    let weights = sympl.rep().weights().expect("torus representations carry weights");
    let supp = support_weights(weights, v)?;
    let an = lp::analyze_cone(&supp, &exact_tau(sympl.tau()));
    Ok((supp, an))
}

fn torus_verdict(sympl: &Symplectization, v: &CVec, budget: &Budget) -> Result<Verdict> {
    let k = sympl.tau().len();
    let (supp, an) = torus_analysis(sympl, v)?;
    if !an.semistable() {
        let s = linalg::real_diag(&to_f64s(an.destabilizer.as_deref().unwrap_or(&[])));
        let value = an.min_value.to_f64();
        match lambda_of(sympl, &s, v)? {
            MaximalWeight::Finite(l) if l < 0.0 => {}
            other => {
                return Err(Error::Certificate(format!(
                    "linear program destabilizer evaluates to {other:?}"
                )))
            }
        }
        return Ok(Verdict {
            level: Level::Unstable,
            certificate: Certificate::Destabilizer { s, value },
            confidence: Confidence::Exact,
            margin: value,
        });
    }
    if an.polystable() {
        let level = if an.rank == k {
            Level::Stable
        } else {
            Level::PolystableNotStable
        };
        let margin = an.multiplier_margin.as_ref().map(Scalar::to_f64).unwrap_or(0.0);
        return Ok(Verdict {
            level,
            certificate: Certificate::AnalyticOnly {
                weights: supp,
                multipliers: to_f64s(an.multipliers.as_deref().unwrap_or(&[])),
                margin,
            },
            confidence: Confidence::Exact,
            margin,
        });
    }
    let certificate = match torus_degeneration(sympl, v, &an, budget) {
        Ok(d) => Certificate::Degeneration(d),
        Err(_) => Certificate::AnalyticOnly {
            weights: an.killable.iter().map(|&i| supp[i].clone()).collect(),
            multipliers: Vec::new(),
            margin: 0.0,
        },
    };
    Ok(Verdict {
        level: Level::SemistableNotPolystable,
        certificate,
        confidence: Confidence::Exact,
        margin: 0.0,
    })
}

fn torus_degeneration(
    sympl: &Symplectization,
    v: &CVec,
    an: &ConeAnalysis<BigRational>,
    budget: &Budget,
) -> Result<Degeneration> {
    let k = sympl.tau().len();
    let s_m = match &an.face_direction {
        Some(face) => linalg::real_diag(&to_f64s(face)),
        None => CMat::zeros(k, k),
    };
    degenerate_along(sympl, v, s_m, budget)
}

fn degenerate_along(sympl: &Symplectization, v: &CVec, s_m: CMat, budget: &Budget) -> Result<Degeneration> {
    let h = HermitianTypeElement::hermitian(sympl.kind(), s_m.clone())?;
    let y = sympl
        .limit_point(&h, v)?
        .ok_or_else(|| Error::DegenerationFailed("the curve along s_m diverges".into()))?;
    let s0 = flow::find_zero_shift(sympl, &y, &budget.flow)?;
    Ok(Degeneration { s_m, y, s0 })
}

/// A degeneration of a semistable `v` to a polystable limit.
pub fn degeneration_certificate(sympl: &Symplectization, v: &CVec, budget: &Budget) -> Result<Degeneration> {
    sympl.rep().check_point(v)?;
    let d = match sympl.kind() {
        GroupKind::Torus { .. } => {
            let (_, an) = torus_analysis(sympl, v)?;
            if !an.semistable() {
                return Err(Error::NotSemistable {
                    value: an.min_value.to_f64(),
                });
            }
            torus_degeneration(sympl, v, &an, budget)?
        }
        GroupKind::Gl { .. } => gl_degeneration(sympl, v, budget, None)?,
    };
    check_degeneration(sympl, v, &d)?;
    Ok(d)
}

/// Best destabilizing direction found, normalised to `‖s‖_∞ ≤ 1` in its
/// eigenframe, with its value `λ^s(v)`; `(0, 0)` when none is found.
pub fn destabilizer_search(sympl: &Symplectization, v: &CVec, budget: &Budget) -> Result<(CMat, f64)> {
    sympl.rep().check_point(v)?;
    let r = sympl.kind().matrix_dim();
    match sympl.kind() {
        GroupKind::Torus { .. } => {
            let (_, an) = torus_analysis(sympl, v)?;
            Ok(match an.destabilizer {
                Some(s) => (linalg::real_diag(&to_f64s(&s)), an.min_value.to_f64()),
                None => (CMat::zeros(r, r), 0.0),
            })
        }
        GroupKind::Gl { .. } => {
            let search = gl_search(sympl, v, budget, true)?;
            Ok(search.best.unwrap_or((CMat::zeros(r, r), 0.0)))
        }
    }
}

// ---------------------------------------------------------------------------
// GL(r)

/// The representation restricted to the diagonal torus of a unitary frame.
struct FrameTorus {
    frame: CMat,
    /// Eigenbasis of the torus action on `ℂ^n`.
    basis: CMat,
    weights: Vec<Vec<i64>>,
}

const PRIMES: [f64; 12] = [2.0, 3.0, 5.0, 7.0, 11.0, 13.0, 17.0, 19.0, 23.0, 29.0, 31.0, 37.0];

fn frame_torus(sympl: &Symplectization, frame: &CMat, rng: &mut ChaCha8Rng) -> Option<FrameTorus> {
    let r = frame.nrows();
    let rep = sympl.rep();
    let images: Vec<CMat> = (0..r)
        .map(|a| rep.sigma(&(frame * unit(r, a, a) * frame.adjoint())))
        .collect();
    let scale = images.iter().map(linalg::norm).fold(1.0, f64::max);
    for attempt in 0..3 {
        let coeffs: Vec<f64> = (0..r)
            .map(|a| {
                if attempt == 0 {
                    libm::log(PRIMES[a % PRIMES.len()]) + a as f64 / 97.0
                } else {
                    0.5 + rng.random::<f64>()
                }
            })
            .collect();
        let combo = images
            .iter()
            .zip(&coeffs)
            .fold(CMat::zeros(rep.dim(), rep.dim()), |acc, (m, &c)| acc + m * re(c));
        let eig = linalg::hermitian_eigen(&combo);
        let q = eig.vectors;
        let mut weights = vec![vec![0i64; r]; rep.dim()];
        let mut ok = true;
        'check: for (a, img) in images.iter().enumerate() {
            let d = q.adjoint() * img * &q;
            for i in 0..d.nrows() {
                for j in 0..d.ncols() {
                    if i != j && d[(i, j)].norm() > 1e-8 * scale {
                        ok = false;
                        break 'check;
                    }
                }
                let x = d[(i, i)].re;
                let rounded = libm::round(x);
                if (x - rounded).abs() > 1e-6 {
                    return None;
                }
                weights[i][a] = rounded as i64;
            }
        }
        if ok {
            return Some(FrameTorus {
                frame: frame.clone(),
                basis: q,
                weights,
            });
        }
    }
    None
}

impl FrameTorus {
    fn coords(&self, v: &CVec) -> CVec {
        self.basis.adjoint() * v
    }

    fn lift(&self, s: &[f64]) -> CMat {
        linalg::hermitian_part(&(&self.frame * linalg::real_diag(s) * self.frame.adjoint()))
    }
}

fn random_unitary(r: usize, rng: &mut ChaCha8Rng) -> CMat {
    let z = CMat::from_fn(r, r, |_, _| cx(rng.sample(StandardNormal), rng.sample(StandardNormal)));
    let cols: Vec<CVec> = z.column_iter().map(|c| c.into_owned()).collect();
    linalg::columns_to_matrix(r, &linalg::orthonormalize(&cols, 0.0))
}

fn eigenframe(h: &CMat) -> CMat {
    linalg::hermitian_eigen(&linalg::hermitian_part(h)).vectors
}

/// Frames suggested by a flow run: the eigenframe of the polar part of the
/// accumulated group element, and that of the retract of
/// `g⁻¹ (−m) g`, whose maximal weight at `v` equals that of `−m` at `gv`.
fn flow_frames(sympl: &Symplectization, run: &FlowResult) -> Vec<CMat> {
    let mut out = vec![eigenframe(&run.exponent)];
    if let Some(g) = &run.group {
        if let Ok(p) = lie::polar_decompose(g) {
            out.push(eigenframe(&p.h_part));
        }
        if let Some(g_inv) = linalg::inverse(g) {
            let pulled = &g_inv * (-&run.moment) * g;
            if let Ok(el) = AlgebraElement::new(sympl.kind(), pulled) {
                if let Ok(h) = HermitianTypeElement::classify(&el) {
                    out.push(eigenframe(lie::retract_to_compact(&h).matrix()));
                }
            }
        }
    }
    out
}

struct GlSearch {
    best: Option<(CMat, f64)>,
    run: Option<FlowResult>,
}

fn frame_destabilizer(sympl: &Symplectization, ft: &FrameTorus, v: &CVec) -> Result<Option<(CMat, f64)>> {
    let r = ft.frame.nrows();
    // A frame whose coordinates sit inside the tolerance band says nothing.
    let Ok(supp) = support_weights(&ft.weights, &ft.coords(v)) else {
        return Ok(None);
    };
    let cone: Vec<Vec<BigRational>> = supp
        .iter()
        .map(|w| w.iter().map(|&x| BigRational::from_i64(x)).collect())
        .collect();
    let tau = exact_tau(&vec![sympl.tau()[0]; r]);
    let (s, value) = lp::box_cone_min(&cone, None, &tau);
    if !value.is_neg() {
        return Ok(None);
    }
    let s = ft.lift(&to_f64s(&s));
    match lambda_of(sympl, &s, v) {
        Ok(MaximalWeight::Finite(l)) if l < 0.0 => Ok(Some((s, l))),
        _ => Ok(None),
    }
}

/// Frame sampling for a destabilizer. Unless `stop_early` ends the search
/// at the first hit, the flow runs and, if nothing was found, contributes
/// frames of its own.
fn gl_search(sympl: &Symplectization, v: &CVec, budget: &Budget, stop_early: bool) -> Result<GlSearch> {
    let r = sympl.kind().matrix_dim();
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed);
    let mut frames = vec![CMat::identity(r, r), eigenframe(&sympl.moment_vector(v)?.hermitian)];
    for _ in 0..budget.frames {
        frames.push(random_unitary(r, &mut rng));
    }
    let mut best: Option<(CMat, f64)> = None;
    let consider = |frame: &CMat, rng: &mut ChaCha8Rng, best: &mut Option<(CMat, f64)>| -> Result<()> {
        if let Some(ft) = frame_torus(sympl, frame, rng) {
            if let Some((s, l)) = frame_destabilizer(sympl, &ft, v)? {
                if best.as_ref().is_none_or(|b| l < b.1) {
                    *best = Some((s, l));
                }
            }
        }
        Ok(())
    };
    for f in &frames {
        consider(f, &mut rng, &mut best)?;
        if stop_early && best.is_some() {
            return Ok(GlSearch { best, run: None });
        }
    }
    let run = flow::kn_descent(sympl, v, &budget.flow)?;
    if best.is_none() {
        let mut seeds = flow_frames(sympl, &run);
        for f in &seeds {
            consider(f, &mut rng, &mut best)?;
        }
        if best.is_none() {
            seeds.extend(frames.into_iter().take(2));
            best = polished_destabilizer(sympl, v, &seeds, &mut rng);
        }
    }
    Ok(GlSearch { best, run: Some(run) })
}

/// Loose-support destabilizers of a frame (or, with `face`, directions of
/// vanishing weight): coordinates below `θ‖v‖` are treated as absent. Each
/// comes with the largest eigenvalue of `ς(S)` on the loose support, above
/// which `v` must carry no mass.
fn loose_candidates(sympl: &Symplectization, ft: &FrameTorus, v: &CVec, face: bool) -> Vec<(CMat, f64)> {
    let r = ft.frame.nrows();
    let tau = exact_tau(&vec![sympl.tau()[0]; r]);
    let coords = ft.coords(v);
    let mut mass: BTreeMap<&[i64], f64> = BTreeMap::new();
    for (w, c) in ft.weights.iter().zip(coords.iter()) {
        *mass.entry(w.as_slice()).or_insert(0.0) += c.norm_sqr();
    }
    let vn = v.norm();
    let mut out: Vec<(CMat, f64)> = Vec::new();
    for theta in [1e-1, 1e-2, 1e-3, 1e-5] {
        let supp: Vec<&[i64]> = mass
            .iter()
            .filter(|(_, &m)| libm::sqrt(m) > theta * vn)
            .map(|(w, _)| *w)
            .collect();
        if supp.is_empty() || supp.len() == mass.len() {
            continue;
        }
        let s = if face {
            let owned: Vec<Vec<i64>> = supp.iter().map(|w| w.to_vec()).collect();
            let an = lp::analyze_cone(&owned, &tau);
            match (an.semistable(), an.face_direction) {
                (true, Some(f)) => to_f64s(&f),
                _ => continue,
            }
        } else {
            let cone: Vec<Vec<BigRational>> = supp
                .iter()
                .map(|w| w.iter().map(|&x| BigRational::from_i64(x)).collect())
                .collect();
            let (s, value) = lp::box_cone_min(&cone, None, &tau);
            if !value.is_neg() {
                continue;
            }
            to_f64s(&s)
        };
        let level = supp
            .iter()
            .map(|w| w.iter().zip(&s).map(|(&a, &b)| a as f64 * b).sum::<f64>())
            .fold(f64::NEG_INFINITY, f64::max);
        let lifted = ft.lift(&s);
        if !out.iter().any(|(m, _)| linalg::norm(&(m - &lifted)) < 1e-9) {
            out.push((lifted, level));
        }
    }
    out
}

/// Rotates `S` by Gauss–Newton on the unitary group until `v` has no mass
/// on the eigenspaces of `ς(S)` above `level`, then checks `λ < 0`.
/// Destabilizers of non-generic points live on a measure-zero set of
/// frames, which no sampling hits exactly.
fn polish(sympl: &Symplectization, v: &CVec, s0: &CMat, level: f64) -> Option<(CMat, MaximalWeight)> {
    let frame = sympl.hermitian_frame();
    let rep = sympl.rep();
    let gap = 1e-6 * (1.0 + linalg::norm(s0));
    let vn = v.norm();
    let mut s = s0.clone();
    let mut last = f64::INFINITY;
    let mut stalls = 0;
    for _ in 0..60 {
        let eig = linalg::hermitian_eigen(&rep.sigma(&s));
        let bad: Vec<CVec> = eig
            .values
            .iter()
            .zip(eig.vectors.column_iter())
            .filter(|(&x, _)| x > level + gap)
            .map(|(_, q)| q.into_owned())
            .collect();
        let project = |x: &CVec| bad.iter().fold(CVec::zeros(x.len()), |acc, q| acc + q * q.dotc(x));
        let res = project(v);
        let rn = res.norm();
        if rn <= 1e-15 * vn {
            break;
        }
        if rn > 0.9 * last {
            stalls += 1;
            if stalls > 3 {
                break;
            }
        }
        last = last.min(rn);
        // d/dA of P(A) v for S ↦ e^A S e^{-A}, A = i·b
        let cols: Vec<DVector<f64>> = frame
            .iter()
            .map(|(_, img)| {
                let j = (img * &res - project(&(img * v))) * cx(0.0, 1.0);
                linalg::realify(&j)
            })
            .collect();
        let rows = cols[0].len();
        let jac = linalg::RMat::from_fn(rows, cols.len(), |i, k| cols[k][i]);
        let rhs = -linalg::realify(&res);
        let svd = jac.svd(true, true);
        let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
        if top == 0.0 {
            return None;
        }
        let x = svd.solve(&rhs, 1e-10 * top).ok()?;
        let h = frame
            .iter()
            .zip(x.iter())
            .fold(CMat::zeros(s.nrows(), s.ncols()), |acc, ((b, _), &c)| acc + b * re(c));
        let he = linalg::hermitian_eigen(&h);
        let phases = CVec::from_iterator(he.values.len(), he.values.iter().map(|&t| cx(libm::cos(t), libm::sin(t))));
        let u = &he.vectors * CMat::from_diagonal(&phases) * he.vectors.adjoint();
        s = linalg::hermitian_part(&(&u * &s * u.adjoint()));
    }
    lambda_of(sympl, &s, v).ok().map(|l| (s, l))
}

fn polished_destabilizer(
    sympl: &Symplectization,
    v: &CVec,
    frames: &[CMat],
    rng: &mut ChaCha8Rng,
) -> Option<(CMat, f64)> {
    for f in frames {
        let Some(ft) = frame_torus(sympl, f, rng) else {
            continue;
        };
        for (s0, level) in loose_candidates(sympl, &ft, v, false) {
            if let Some((s, MaximalWeight::Finite(l))) = polish(sympl, v, &s0, level) {
                if l < 0.0 {
                    return Some((s, l));
                }
            }
        }
    }
    None
}

/// A nonzero `S` with `λ(S, v) = 0`, which rules out stability.
fn polished_null_direction(
    sympl: &Symplectization,
    v: &CVec,
    frames: &[CMat],
    rng: &mut ChaCha8Rng,
) -> Option<CMat> {
    for f in frames {
        let Some(ft) = frame_torus(sympl, f, rng) else {
            continue;
        };
        for (s0, level) in loose_candidates(sympl, &ft, v, true) {
            if let Some((s, MaximalWeight::Finite(l))) = polish(sympl, v, &s0, level) {
                if l.abs() <= 1e-9 * (1.0 + linalg::norm(&s)) && linalg::norm(&s) > 1e-6 {
                    return Some(s);
                }
            }
        }
    }
    None
}

fn gl_verdict(sympl: &Symplectization, v: &CVec, budget: &Budget) -> Result<Verdict> {
    let search = gl_search(sympl, v, budget, true)?;
    if let Some((s, value)) = search.best {
        return Ok(Verdict {
            level: Level::Unstable,
            certificate: Certificate::Destabilizer { s, value },
            confidence: Confidence::Exact,
            margin: value,
        });
    }
    let run = match search.run {
        Some(run) => run,
        None => flow::kn_descent(sympl, v, &budget.flow)?,
    };
    match run.classification {
        FlowClass::ReachedZero => {
            let shift = flow::zero_shift(sympl, v, &run, &budget.flow)?;
            let moved = linalg::exp_hermitian(&sympl.rep().sigma(&shift), 1.0) * v;
            let norm = sympl.moment_vector(&moved)?.norm;
            let stab = sympl.stabilizer_algebra(v)?;
            let level = if stab.is_trivial() {
                Level::Stable
            } else {
                Level::PolystableNotStable
            };
            if level == Level::Stable {
                // A boundary point can slide onto a stable neighbour by
                // rounding; a direction of vanishing weight unmasks it.
                let r = sympl.kind().matrix_dim();
                let mut seeds = flow_frames(sympl, &run);
                seeds.push(CMat::identity(r, r));
                seeds.push(eigenframe(&sympl.moment_vector(v)?.hermitian));
                let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ 0x0b0d);
                if let Some(s_m) = polished_null_direction(sympl, v, &seeds, &mut rng) {
                    let certificate = match degenerate_along(sympl, v, s_m, budget) {
                        Ok(d) if check_degeneration(sympl, v, &d).is_ok() => Certificate::Degeneration(d),
                        _ => Certificate::AnalyticOnly {
                            weights: Vec::new(),
                            multipliers: Vec::new(),
                            margin: 0.0,
                        },
                    };
                    return Ok(Verdict {
                        level: Level::SemistableNotPolystable,
                        certificate,
                        confidence: Confidence::Heuristic,
                        margin: 0.0,
                    });
                }
            }
            let confirmed = norm <= 10.0 * budget.flow.tol && sympl.stabilizer_algebra(&moved)?.is_reductive();
            Ok(Verdict {
                level,
                certificate: Certificate::ZeroMoment { shift, norm },
                confidence: if confirmed {
                    Confidence::Exact
                } else {
                    Confidence::Heuristic
                },
                margin: stiffness(sympl, &run.point),
            })
        }
        FlowClass::Degenerating => {
            let certificate = match gl_degeneration(sympl, v, budget, Some(&run)) {
                Ok(d) if check_degeneration(sympl, v, &d).is_ok() => Certificate::Degeneration(d),
                _ => Certificate::AnalyticOnly {
                    weights: Vec::new(),
                    multipliers: Vec::new(),
                    margin: 0.0,
                },
            };
            Ok(Verdict {
                level: Level::SemistableNotPolystable,
                certificate,
                confidence: Confidence::Heuristic,
                margin: 0.0,
            })
        }
        FlowClass::StalledPositive => Ok(Verdict {
            level: Level::Unstable,
            certificate: Certificate::AnalyticOnly {
                weights: Vec::new(),
                multipliers: Vec::new(),
                margin: -run.moment_norm,
            },
            confidence: Confidence::Heuristic,
            margin: -run.moment_norm,
        }),
        FlowClass::Inconclusive => Err(Error::NoConvergence(
            run.note.unwrap_or_else(|| String::from("flow inconclusive")),
        )),
    }
}

/// Smallest nonzero eigenvalue of `H_ij = Re⟨ς(e_i)w, ς(e_j)w⟩`.
fn stiffness(sympl: &Symplectization, w: &CVec) -> f64 {
    let cols: Vec<CVec> = sympl.hermitian_frame().iter().map(|(_, img)| img * w).collect();
    let d = cols.len();
    let h = DMatrix::from_fn(d, d, |i, j| linalg::vec_inner(&cols[i], &cols[j]).re);
    let eig = SymmetricEigen::new(h);
    let top = eig.eigenvalues.iter().copied().fold(0.0, f64::max);
    eig.eigenvalues
        .iter()
        .copied()
        .filter(|&x| x > 1e-10 * top)
        .fold(f64::INFINITY, f64::min)
        .min(top)
}

fn gl_degeneration(
    sympl: &Symplectization,
    v: &CVec,
    budget: &Budget,
    run: Option<&FlowResult>,
) -> Result<Degeneration> {
    let r = sympl.kind().matrix_dim();
    let owned;
    let run = match run {
        Some(run) => run,
        None => {
            owned = flow::kn_descent(sympl, v, &budget.flow)?;
            &owned
        }
    };
    match run.classification {
        FlowClass::ReachedZero => return degenerate_along(sympl, v, CMat::zeros(r, r), budget),
        FlowClass::StalledPositive => {
            return Err(Error::NotSemistable {
                value: -run.moment_norm,
            })
        }
        _ => {}
    }
    let mut rng = ChaCha8Rng::seed_from_u64(budget.seed ^ 0x5eed);
    let mut frames = flow_frames(sympl, run);
    frames.push(CMat::identity(r, r));
    frames.push(eigenframe(&sympl.moment_vector(v)?.hermitian));
    for _ in 0..budget.frames {
        frames.push(random_unitary(r, &mut rng));
    }
    let tau = exact_tau(&vec![sympl.tau()[0]; r]);
    let mut last = String::from("no frame exhibits a degenerating direction");
    for frame in &frames {
        let Some(ft) = frame_torus(sympl, frame, &mut rng) else {
            continue;
        };
        let Ok(supp) = support_weights(&ft.weights, &ft.coords(v)) else {
            continue;
        };
        let an = lp::analyze_cone(&supp, &tau);
        if !an.semistable() {
            return Err(Error::NotSemistable {
                value: an.min_value.to_f64(),
            });
        }
        let Some(face) = an.face_direction else {
            continue;
        };
        let s_m = ft.lift(&to_f64s(&face));
        match degenerate_along(sympl, v, s_m, budget) {
            Ok(d) if check_degeneration(sympl, v, &d).is_ok() => return Ok(d),
            Ok(_) => last = String::from("degeneration failed its own check"),
            Err(e) => last = format!("{e}"),
        }
    }
    Err(Error::DegenerationFailed(last))
}

// ---------------------------------------------------------------------------
// certificate checks

/// What a certificate check established.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Check {
    Verified,
    /// The certificate carries no data that can be checked independently.
    Unverifiable,
}

fn fail<T>(msg: String) -> Result<T> {
    Err(Error::Certificate(msg))
}

fn check_degeneration(sympl: &Symplectization, v: &CVec, d: &Degeneration) -> Result<()> {
    let kind = sympl.kind();
    let h = HermitianTypeElement::hermitian(kind, d.s_m.clone())?;
    match sympl.maximal_weight(&h, v)? {
        MaximalWeight::Finite(l) if l.abs() <= 1e-9 * (1.0 + linalg::norm(&d.s_m)) => {}
        other => return fail(format!("lambda along s_m is {other:?}, not 0")),
    }
    let y = match sympl.limit_point(&h, v)? {
        Some(y) => y,
        None => return fail("curve along s_m diverges".into()),
    };
    let gap = linalg::vec_norm(&(&y - &d.y));
    if gap > 1e-8 * (1.0 + linalg::vec_norm(&y)) {
        return fail(format!("limit differs from y by {gap:.3e}"));
    }
    let br = linalg::norm(&linalg::commutator(&d.s_m, &d.s0));
    if br > 1e-8 * linalg::scale_of(&d.s_m) * linalg::scale_of(&d.s0) {
        return fail(format!("[s_m, s0] has norm {br:.3e}"));
    }
    let moved = linalg::exp_hermitian(&sympl.rep().sigma(&d.s0), 1.0) * &d.y;
    let norm = sympl.moment_vector(&moved)?.norm;
    if norm > 10.0 * tol::MOMENT {
        return fail(format!("moment at exp(s0) y has norm {norm:.3e}"));
    }
    Ok(())
}

/// Re-derives the verdict's claim from its certificate, using only the
/// moment map and maximal weights.
pub fn verify_certificate(sympl: &Symplectization, v: &CVec, verdict: &Verdict) -> Result<Check> {
    sympl.rep().check_point(v)?;
    let level = verdict.level;
    match &verdict.certificate {
        Certificate::Destabilizer { s, value } => {
            if level != Level::Unstable {
                return fail(format!("destabilizer attached to {}", level.as_str()));
            }
            match lambda_of(sympl, s, v)? {
                MaximalWeight::Finite(l) if l < 0.0 && (l - value).abs() <= 1e-9 * (1.0 + value.abs()) => {
                    Ok(Check::Verified)
                }
                other => fail(format!("lambda^s(v) = {other:?}, claimed {value}")),
            }
        }
        Certificate::ZeroMoment { shift, .. } => {
            if !level.is_polystable() {
                return fail(format!("zero moment attached to {}", level.as_str()));
            }
            let moved = linalg::exp_hermitian(&sympl.rep().sigma(shift), 1.0) * v;
            let norm = sympl.moment_vector(&moved)?.norm;
            if norm > 10.0 * tol::MOMENT {
                return fail(format!("moment at the shifted point has norm {norm:.3e}"));
            }
            let trivial = sympl.stabilizer_algebra(v)?.is_trivial();
            if trivial != (level == Level::Stable) {
                return fail(format!("stabilizer triviality {trivial} contradicts {}", level.as_str()));
            }
            Ok(Check::Verified)
        }
        Certificate::Degeneration(d) => {
            if level != Level::SemistableNotPolystable {
                return fail(format!("degeneration attached to {}", level.as_str()));
            }
            if linalg::norm(&d.s_m) == 0.0 {
                return fail("degeneration with s_m = 0 does not leave the orbit".into());
            }
            check_degeneration(sympl, v, d)?;
            Ok(Check::Verified)
        }
        Certificate::AnalyticOnly {
            weights, multipliers, ..
        } => {
            // empty support (v = 0) is checked like any other: the sum is
            // empty and τ itself must vanish
            let empty_support = weights.is_empty() && sympl.rep().weights().is_some();
            if multipliers.is_empty() && !empty_support {
                return Ok(Check::Unverifiable);
            }
            let Some(all) = sympl.rep().weights() else {
                return fail("multipliers need a weight representation".into());
            };
            if !level.is_polystable() {
                return fail(format!("multipliers attached to {}", level.as_str()));
            }
            if support_weights(all, v)? != *weights || weights.len() != multipliers.len() {
                return fail("weights do not match the support of v".into());
            }
            let tau = sympl.tau();
            let mut residual = 0.0f64;
            for a in 0..tau.len() {
                let sum: f64 = weights.iter().zip(multipliers).map(|(w, c)| c * w[a] as f64).sum();
                residual = residual.max((sum + tau[a]).abs());
            }
            let scale = 1.0 + multipliers.iter().fold(0.0f64, |m, c| m.max(c.abs()));
            if residual > 1e-9 * scale {
                return fail(format!("multiplier residual {residual:.3e}"));
            }
            if multipliers.iter().any(|&c| c <= 0.0) {
                return fail("a multiplier is not positive".into());
            }
            let spans = lp::exact_rank(weights) == tau.len();
            if spans != (level == Level::Stable) {
                return fail(format!("weight rank contradicts {}", level.as_str()));
            }
            Ok(Check::Verified)
        }
    }
}

// ---------------------------------------------------------------------------
// probes

/// `λ^s(v)` for `±s` over a Hermitian basis of `𝔤_v ∩ i𝔨`.
pub fn stabilizer_weights(sympl: &Symplectization, v: &CVec) -> Result<Vec<f64>> {
    let stab = sympl.stabilizer_algebra(v)?;
    let mut out = Vec::new();
    for k in &stab.k_v {
        let s = linalg::hermitian_part(&(k * C64::new(0.0, -1.0)));
        for sign in [1.0, -1.0] {
            out.push(lambda_of(sympl, &(&s * re(sign)), v)?.as_f64());
        }
    }
    Ok(out)
}

/// Linear growth of `Ψ(v, ·)` estimated on spheres of radius 1, 2, 4, 8.
#[derive(Debug, Clone)]
pub struct Properness {
    /// `min Ψ` over the sampled directions at each radius.
    pub minima: Vec<(f64, f64)>,
    pub c1: f64,
    pub c2: f64,
    /// Whether the minima grow between radius 4 and 8.
    pub proper: bool,
}

pub fn properness_probe(sympl: &Symplectization, v: &CVec, samples: usize, seed: u64) -> Result<Properness> {
    sympl.rep().check_point(v)?;
    let kind = sympl.kind();
    let basis = kind.hermitian_basis();
    let mut dirs: Vec<CMat> = Vec::new();
    for b in &basis {
        dirs.push(b.clone());
        dirs.push(-b);
    }
    let (s, l) = destabilizer_search(sympl, v, &Budget::default())?;
    if l < 0.0 {
        dirs.push(&s * re(1.0 / linalg::norm(&s)));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..samples {
        let c: Vec<f64> = (0..basis.len()).map(|_| rng.sample(StandardNormal)).collect();
        let n = linalg::sqrt(c.iter().map(|x| x * x).sum());
        if n > 0.0 {
            let c: Vec<f64> = c.iter().map(|x| x / n).collect();
            dirs.push(kind.from_hermitian_coords(&c));
        }
    }
    let radii = [1.0, 2.0, 4.0, 8.0];
    let mut table = Vec::new();
    for &r in &radii {
        let mut vals = Vec::with_capacity(dirs.len());
        for d in &dirs {
            vals.push(sympl.kempf_ness(d, r, v)?);
        }
        table.push(vals);
    }
    let minima: Vec<(f64, f64)> = radii
        .iter()
        .zip(&table)
        .map(|(&r, vals)| (r, vals.iter().copied().fold(f64::INFINITY, f64::min)))
        .collect();
    let growth = minima[3].1 - minima[2].1;
    let proper = growth > 0.0;
    let c1 = if proper { 4.0 / growth } else { f64::INFINITY };
    let c2 = if proper {
        radii
            .iter()
            .zip(&table)
            .flat_map(|(&r, vals)| vals.iter().map(move |&p| r - c1 * p))
            .fold(f64::NEG_INFINITY, f64::max)
    } else {
        f64::INFINITY
    };
    Ok(Properness {
        minima,
        c1,
        c2,
        proper,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rep::Representation;

    fn torus(weights: Vec<Vec<i64>>, tau: Vec<f64>) -> Symplectization {
        let k = tau.len();
        Symplectization::new(Representation::torus(k, weights).unwrap(), tau).unwrap()
    }

    fn pt(xs: &[f64]) -> CVec {
        CVec::from_iterator(xs.len(), xs.iter().map(|&x| re(x)))
    }

    fn verdict(sy: &Symplectization, v: &CVec) -> Verdict {
        let out = analytic_verdict(sy, v, &Budget::default()).unwrap();
        verify_certificate(sy, v, &out).unwrap();
        out
    }

    #[test]
    fn opposite_weights() {
        let sy = torus(vec![vec![1], vec![-1]], vec![0.0]);
        assert_eq!(verdict(&sy, &pt(&[1.0, 1.0])).level, Level::Stable);
        let v = verdict(&sy, &pt(&[1.0, 0.0]));
        assert_eq!(v.level, Level::SemistableNotPolystable);
        assert!(matches!(v.certificate, Certificate::Degeneration(_)));
        let origin = pt(&[0.0, 0.0]);
        let v = verdict(&sy, &origin);
        assert_eq!(v.level, Level::PolystableNotStable);
        assert_eq!(verify_certificate(&sy, &origin, &v), Ok(Check::Verified));
    }

    #[test]
    fn single_weight_with_shift() {
        let cases = [
            (-1.0, Level::Stable),
            (0.0, Level::SemistableNotPolystable),
            (1.0, Level::Unstable),
        ];
        for (tau, want) in cases {
            let sy = torus(vec![vec![1]], vec![tau]);
            assert_eq!(verdict(&sy, &pt(&[1.0])).level, want, "tau = {tau}");
        }
    }

    #[test]
    fn rank_two_triangle() {
        let sy = torus(vec![vec![1, 0], vec![0, 1], vec![-1, -1]], vec![0.0, 0.0]);
        assert_eq!(verdict(&sy, &pt(&[1.0, 1.0, 1.0])).level, Level::Stable);
        assert_eq!(verdict(&sy, &pt(&[1.0, 1.0, 0.0])).level, Level::SemistableNotPolystable);
    }

    #[test]
    fn gl_standard_and_binary_quadrics() {
        let sy = Symplectization::new(Representation::standard(2), vec![0.0]).unwrap();
        let e1 = CVec::from_vec(vec![re(1.0), re(0.0)]);
        assert_eq!(verdict(&sy, &e1).level, Level::SemistableNotPolystable);
        assert_eq!(verdict(&sy, &CVec::zeros(2)).level, Level::PolystableNotStable);

        // coordinates x², xy, y²
        let x2 = pt(&[1.0, 0.0, 0.0]);
        let xy = pt(&[0.0, 1.0, 0.0]);
        let sq = pt(&[1.0, 0.0, 1.0]);
        let table = [
            (-0.5, [Level::Unstable, Level::PolystableNotStable, Level::PolystableNotStable]),
            (0.0, [Level::SemistableNotPolystable; 3]),
            (0.5, [Level::Unstable; 3]),
        ];
        for (tau, want) in table {
            let sy = Symplectization::new(Representation::sym(2, 2), vec![tau]).unwrap();
            for (v, w) in [&x2, &xy, &sq].into_iter().zip(want) {
                assert_eq!(verdict(&sy, v).level, w, "tau = {tau}, v = {v:?}");
            }
        }
    }

    #[test]
    fn stabilizer_weights_vanish_on_semistable_points() {
        let sy = torus(vec![vec![1, 0], vec![-1, 0], vec![0, 0]], vec![0.0, 0.0]);
        let w = stabilizer_weights(&sy, &pt(&[1.0, 1.0, 1.0])).unwrap();
        assert_eq!(w.len(), 2);
        assert!(w.iter().all(|x| x.abs() < 1e-12));
    }

    #[test]
    fn properness_separates_stable_from_unstable() {
        let sy = torus(vec![vec![1], vec![-1]], vec![0.0]);
        assert!(properness_probe(&sy, &pt(&[1.0, 1.0]), 32, 1).unwrap().proper);
        let sy = torus(vec![vec![1]], vec![1.0]);
        assert!(!properness_probe(&sy, &pt(&[1.0]), 32, 1).unwrap().proper);
    }
}
