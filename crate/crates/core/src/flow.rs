//! Descent of the Kempf–Ness function along the orbit.
//!
//! The gradient of `s ↦ Ψ(w, e^s)` at the identity is the moment `m` (as a
//! Hermitian element) and its Hessian is `H(s, s') = Re⟨ς(s)w, ς(s')w⟩`.
//! Each step replaces `w` by `e^{-ε ς(d)} w`, where `d` is `m` itself
//! (plain gradient) or `H⁺m` (the default), with `ε` chosen by Armijo
//! backtracking. Along the step the change of `Ψ` is explicit: with `η_j`,
//! `w_j` the eigen-data of `ς(d)` and `φ(x) = e^{-x} − 1 + x`,
//!
//! ```text
//! Ψ(w, e^{-εd}) = Σ_j |w_j|²/4 · φ(2εη_j) − ε ⟨m, d⟩,
//! ```
//!
//! which is evaluated without cancellation.
//!
//! Plain gradient descent converges like `1/t` when the zero of the moment
//! recedes to infinity, because the degenerating directions flatten out;
//! the Hessian scaling removes that stiffness.
//!
//! How the run ends decides the classification. Once `‖μ‖ ≤ tol`, a short
//! Newton step means the zero is at hand (`ReachedZero`); a Newton step
//! that stays large while the moment keeps vanishing means the zero
//! recedes to infinity (`Degenerating`). A moment that levels off at a
//! positive value (`StalledPositive`) is detected either as a plateau of
//! `‖μ‖` between doublings of the exponent norm beyond
//! [`tol::DIVERGENCE`], or directly when the moment pairs nontrivially with
//! a direction that fixes the current point (then `Ψ` decreases linearly
//! along it forever).

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use nalgebra::DVector;

use crate::error::{Error, Result};
use crate::lie::{self, Ambient};
use crate::linalg::{self, re, CMat, CVec, C64};
use crate::momentum::{MomentVector, Symplectization};
use crate::stability::{self, Budget, Confidence};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StepRule {
    pub initial: f64,
    pub shrink: f64,
    pub sufficient: f64,
}

impl Default for StepRule {
    fn default() -> Self {
        Self {
            initial: 1.0,
            shrink: 0.5,
            sufficient: 1e-4,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowOptions {
    pub tol: f64,
    pub max_iter: usize,
    pub step: StepRule,
    /// Scale the gradient by the pseudo-inverse Hessian of the
    /// Kempf–Ness function (a damped Newton iteration); plain gradient
    /// descent otherwise.
    pub precondition: bool,
}

impl Default for FlowOptions {
    fn default() -> Self {
        Self {
            tol: tol::MOMENT,
            max_iter: 100_000,
            step: StepRule::default(),
            precondition: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum FlowClass {
    ReachedZero,
    StalledPositive,
    Degenerating,
    Inconclusive,
}

impl FlowClass {
    pub fn as_str(self) -> &'static str {
        match self {
            FlowClass::ReachedZero => "reached_zero",
            FlowClass::StalledPositive => "stalled_positive",
            FlowClass::Degenerating => "degenerating",
            FlowClass::Inconclusive => "inconclusive",
        }
    }

    /// The semistability verdict licensed by the moment-norm infimum.
    pub fn semistable(self) -> Option<bool> {
        match self {
            FlowClass::ReachedZero | FlowClass::Degenerating => Some(true),
            FlowClass::StalledPositive => Some(false),
            FlowClass::Inconclusive => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FlowSample {
    pub iteration: usize,
    pub moment_norm: f64,
    pub psi: f64,
    pub exponent_norm: f64,
}

#[derive(Debug, Clone)]
pub struct FlowResult {
    pub point: CVec,
    /// Sum of the Hermitian steps `−ε d`.
    pub exponent: CMat,
    /// Product of the step exponentials; `None` if it overflowed.
    pub group: Option<CMat>,
    pub trajectory: Vec<FlowSample>,
    pub classification: FlowClass,
    pub iterations: usize,
    pub moment: CMat,
    pub moment_norm: f64,
    /// `Ψ(v, group)`, accumulated step by step.
    pub psi: f64,
    /// Norm of the Newton step at the last point where `‖μ‖ ≤ tol`.
    pub newton_step: Option<f64>,
    pub note: Option<String>,
}

impl FlowResult {
    pub fn exponent_norm(&self) -> f64 {
        linalg::norm(&self.exponent)
    }

    /// Hermitian `s` with `e^s v` on the `K`-orbit of the final point: the
    /// exponent itself on a torus, the log of the polar part otherwise.
    pub fn shift(&self) -> Result<CMat> {
        if linalg::is_diagonal(&self.exponent, 0.0) {
            return Ok(self.exponent.clone());
        }
        let g = self.group.as_ref().ok_or(Error::Overflow)?;
        Ok(lie::polar_decompose(g)?.log_h())
    }
}

/// Hermitian `s` with `‖μ(e^{ς(s)} v)‖ ≤ 10·tol`, from a run that reached
/// zero. Newton leaps along a non-compact stabilizer leave the point alone
/// but can carry the group element off to a numerically singular matrix;
/// plain gradient descent has no such component and converges linearly
/// near a zero, so it is the fallback.
pub fn zero_shift(sympl: &Symplectization, v: &CVec, run: &FlowResult, opts: &FlowOptions) -> Result<CMat> {
    let ok = |s: &CMat| {
        let moved = linalg::exp_hermitian(&sympl.rep().sigma(s), 1.0) * v;
        sympl.moment_unchecked(&moved).norm <= 10.0 * opts.tol
    };
    if let Ok(s) = run.shift() {
        if ok(&s) {
            return Ok(s);
        }
    }
    let plain = FlowOptions {
        precondition: false,
        ..opts.clone()
    };
    let slow = descend(sympl, v, &plain, None);
    let s = slow.shift()?;
    if slow.classification == FlowClass::ReachedZero && ok(&s) {
        Ok(s)
    } else {
        run.shift()
    }
}

/// Numerical residue that counts as a negligible moment direction.
const NEWTON_ACCEPT: f64 = 1e-3;
const NEWTON_RCOND: f64 = 1e-12;

pub fn kn_descent(sympl: &Symplectization, v: &CVec, opts: &FlowOptions) -> Result<FlowResult> {
    sympl.rep().check_point(v)?;
    if !(opts.tol > 0.0) {
        return Err(Error::Unsupported("flow tolerance must be positive".into()));
    }
    Ok(descend(sympl, v, opts, None))
}

/// Infimum of `‖μ‖` over the orbit, with the semistability reading of the
/// run.
#[derive(Debug, Clone)]
pub struct InfMoment {
    pub value: f64,
    pub classification: FlowClass,
    pub semistable: Option<bool>,
}

pub fn inf_moment_norm(sympl: &Symplectization, v: &CVec, opts: &FlowOptions) -> Result<InfMoment> {
    let r = kn_descent(sympl, v, opts)?;
    Ok(InfMoment {
        value: r.moment_norm,
        classification: r.classification,
        semistable: r.classification.semistable(),
    })
}

/// Descent, optionally restricted to the span of an orthonormal family of
/// Hermitian directions.
fn descend(sympl: &Symplectization, v: &CVec, opts: &FlowOptions, subspace: Option<&[CMat]>) -> FlowResult {
    let kind = sympl.kind();
    let r = kind.matrix_dim();
    let weights = sympl.rep().weights();
    let rule = opts.step;
    let frame: Vec<(CMat, CMat)> = match subspace {
        Some(basis) => basis.iter().map(|b| (b.clone(), sympl.rep().sigma(b))).collect(),
        None => sympl.hermitian_frame().to_vec(),
    };

    let mut w = v.clone();
    let mut exponent = CMat::zeros(r, r);
    // a torus stabilizer is the same Hermitian subalgebra all along the
    // orbit, so only nonabelian groups need the cut
    let decision_cut = if weights.is_some() { 0.0 } else { libm::pow(opts.tol, 0.75) };
    let mut group = if weights.is_some() { None } else { Some(CMat::identity(r, r)) };
    let mut psi = 0.0;
    let mut last_eps = [rule.initial / 2.0; 2];
    let mut trajectory = Vec::new();
    let mut boundary = 0usize;
    let mut newton = None;
    let mut next_checkpoint = tol::DIVERGENCE;
    let mut checkpoint_norm: Option<f64> = None;

    let finish = |w: CVec,
                  exponent: CMat,
                  group: Option<CMat>,
                  mut trajectory: Vec<FlowSample>,
                  class: FlowClass,
                  iter: usize,
                  mom: MomentVector,
                  psi: f64,
                  newton: Option<f64>,
                  note: Option<String>| {
        let exponent_norm = linalg::norm(&exponent);
        if trajectory.last().map(|s: &FlowSample| s.iteration) != Some(iter) {
            trajectory.push(FlowSample {
                iteration: iter,
                moment_norm: mom.norm,
                psi,
                exponent_norm,
            });
        }
        let group = match (group, weights) {
            (Some(g), _) => Some(g),
            (None, Some(_)) => {
                let d: Vec<f64> = (0..exponent.nrows()).map(|a| exponent[(a, a)].re).collect();
                if d.iter().all(|x| x.abs() < 700.0) {
                    let e: Vec<C64> = d.iter().map(|&x| re(libm::exp(x))).collect();
                    Some(linalg::diag(&e))
                } else {
                    None
                }
            }
            (None, None) => None,
        };
        FlowResult {
            point: w,
            exponent,
            group,
            trajectory,
            classification: class,
            iterations: iter,
            moment: mom.hermitian,
            moment_norm: mom.norm,
            psi,
            newton_step: newton,
            note,
        }
    };

    let mut iter = 0usize;
    loop {
        let mom = sympl.moment_unchecked(&w);
        let full = mom.norm;
        let expn = linalg::norm(&exponent);
        if iter == 0 || iter.is_power_of_two() {
            trajectory.push(FlowSample {
                iteration: iter,
                moment_norm: full,
                psi,
                exponent_norm: expn,
            });
        }
        let dirs = directions(&frame, &w, &mom.hermitian, r, decision_cut);

        if full <= opts.tol {
            newton = Some(dirs.decrement);
            if dirs.decrement <= NEWTON_ACCEPT {
                return finish(w, exponent, group, trajectory, FlowClass::ReachedZero, iter, mom, psi, newton, None);
            }
            // the zero keeps receding: the Newton step stays large over
            // several short steps
            boundary += 1;
            if boundary > BOUNDARY_STEPS {
                return finish(w, exponent, group, trajectory, FlowClass::Degenerating, iter, mom, psi, newton, None);
            }
        }
        if subspace.is_some() && dirs.gradient_norm <= 0.1 * opts.tol && full > opts.tol {
            let note = format!("moment {full:.3e} has no component along the shift directions");
            return finish(w, exponent, group, trajectory, FlowClass::Inconclusive, iter, mom, psi, newton, Some(note));
        }
        // on a semistable point the moment pairs to zero with every
        // direction fixing it
        if opts.precondition && subspace.is_none() && dirs.kernel_slope > 10.0 * opts.tol {
            return finish(w, exponent, group, trajectory, FlowClass::StalledPositive, iter, mom, psi, newton, None);
        }
        if expn > next_checkpoint {
            if let Some(prev) = checkpoint_norm {
                if full >= 10.0 * opts.tol && prev - full < 1e-3 * prev {
                    return finish(w, exponent, group, trajectory, FlowClass::StalledPositive, iter, mom, psi, newton, None);
                }
            }
            checkpoint_norm = Some(full);
            while next_checkpoint < expn {
                next_checkpoint *= 2.0;
            }
        }
        if iter >= opts.max_iter {
            let note = format!("iteration limit {} reached", opts.max_iter);
            return finish(w, exponent, group, trajectory, FlowClass::Inconclusive, iter, mom, psi, newton, Some(note));
        }

        // Newton part with unit steps at most, then the part of the
        // gradient the Hessian cannot see with growing steps; plain
        // gradient descent uses the second slot only.
        let cap = if boundary > 0 { BOUNDARY_LOG_STEP } else { f64::INFINITY };
        let plan = if opts.precondition {
            [(dirs.newton, true), (dirs.kernel, false)]
        } else {
            [(CMat::zeros(r, r), true), (dirs.gradient, false)]
        };
        let mut moved = false;
        for (slot, (dir, unit)) in plan.into_iter().enumerate() {
            if linalg::norm(&dir) == 0.0 {
                continue;
            }
            let m_now = if moved {
                sympl.moment_unchecked(&w).hermitian
            } else {
                mom.hermitian.clone()
            };
            let big_m = linalg::inner(&dir, &m_now);
            if !(big_m > 0.0) {
                continue;
            }
            let trial = if unit { 1.0f64.min(2.0 * last_eps[slot]) } else { MAX_TRIAL.min(2.0 * last_eps[slot]) };
            // directions nearly fixing `w` barely move it but would inflate
            // the group element without bound
            let reach = if unit { NEWTON_LOG_STEP } else { KERNEL_LOG_STEP };
            let trial = trial.min(reach / linalg::norm(&dir));
            let Some((eps, dpsi)) = armijo_step(sympl, &mut w, &dir, big_m, trial, cap, &rule) else {
                continue;
            };
            moved = true;
            last_eps[slot] = eps;
            psi += dpsi;
            exponent -= &dir * re(eps);
            if let Some(g) = group.as_mut() {
                let step = linalg::exp_hermitian(&dir, -eps);
                *g = step * &*g;
                if g.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
                    group = None;
                }
            }
        }
        if !moved {
            let note = format!("no descent step found at |mu| = {full:.3e}");
            return finish(w, exponent, group, trajectory, FlowClass::Inconclusive, iter, mom, psi, newton, Some(note));
        }
        iter += 1;
    }
}

/// One Armijo step `w ← e^{-ε ς(dir)} w` with `big_m = ⟨m, dir⟩ > 0`;
/// returns `ε` and the change of `Ψ`, or `None` if no step decreases `Ψ`
/// enough. `cap` bounds `ε·max|η_j|` over the occupied eigenvalues.
fn armijo_step(
    sympl: &Symplectization,
    w: &mut CVec,
    dir: &CMat,
    big_m: f64,
    trial: f64,
    cap: f64,
    rule: &StepRule,
) -> Option<(f64, f64)> {
    let (etas, mass, eigvecs) = match sympl.rep().weights() {
        Some(ws) => {
            let etas: Vec<f64> = ws
                .iter()
                .map(|wj| wj.iter().enumerate().map(|(a, &c)| c as f64 * dir[(a, a)].re).sum())
                .collect();
            let mass: Vec<f64> = w.iter().map(|z| z.norm_sqr()).collect();
            (etas, mass, None)
        }
        None => {
            let eig = linalg::hermitian_eigen(&sympl.rep().sigma(dir));
            let c = eig.vectors.adjoint() * &*w;
            let mass = c.iter().map(|z| z.norm_sqr()).collect();
            (eig.values, mass, Some((eig.vectors, c)))
        }
    };
    let spread = etas
        .iter()
        .zip(&mass)
        .filter(|(_, &a)| a > 0.0)
        .fold(0.0f64, |acc, (e, _)| acc.max(e.abs()));
    let mut eps = trial;
    if spread > 0.0 {
        eps = eps.min(cap / spread);
    }
    let corr = loop {
        let corr: f64 = etas
            .iter()
            .zip(&mass)
            .filter(|(&eta, &a)| a > 0.0 && eta != 0.0)
            .map(|(&eta, &a)| 0.25 * a * linalg::exp_neg_remainder(2.0 * eps * eta))
            .sum();
        if corr <= (1.0 - rule.sufficient) * eps * big_m {
            break corr;
        }
        eps *= rule.shrink;
        if eps < 1e-300 {
            return None;
        }
    };
    let scale = |z: C64, eta: f64, a: f64| if a > 0.0 { z * libm::exp(-eps * eta) } else { C64::new(0.0, 0.0) };
    match eigvecs {
        None => {
            for ((z, &eta), &a) in w.iter_mut().zip(&etas).zip(&mass) {
                *z = scale(*z, eta, a);
            }
        }
        Some((q, mut c)) => {
            for ((z, &eta), &a) in c.iter_mut().zip(&etas).zip(&mass) {
                *z = scale(*z, eta, a);
            }
            *w = q * c;
        }
    }
    Some((eps, corr - eps * big_m))
}

/// Consecutive iterations at the zero level with a large Newton step
/// before the zero is declared to recede. Steps are kept short meanwhile
/// so the vanishing directions stay numerically visible.
const BOUNDARY_STEPS: usize = 5;
const BOUNDARY_LOG_STEP: f64 = 1.0;
const MAX_TRIAL: f64 = 1e12;
const NEWTON_LOG_STEP: f64 = 8.0;
const KERNEL_LOG_STEP: f64 = 1.0;

struct Directions {
    /// The moment, projected on the frame.
    gradient: CMat,
    gradient_norm: f64,
    /// `H⁺ g`.
    newton: CMat,
    /// Component of `g` in the kernel of `H`, scaled by `1/‖H‖`.
    kernel: CMat,
    /// Norm of the unscaled kernel component: the rate at which `Ψ`
    /// decreases, forever, along a direction fixing `w`.
    kernel_slope: f64,
    /// Norm of the pure pseudo-inverse step.
    newton_norm: f64,
    /// Same, dropping singular values below the decision cut: near a zero
    /// whose stabilizer does not stay Hermitian along the orbit, `B` has
    /// a singular value of the order of `‖μ‖` which carries no distance.
    decrement: f64,
}

/// Gradient and Newton data of `s ↦ Ψ(w, e^s)` at `s = 0` in the given
/// orthonormal frame: `g_i = ⟨b_i, m⟩` and `H = BᵀB` with `B` the realified
/// columns `ς(b_i) w`. Working with the singular values of `B` rather than
/// the eigenvalues of `H` halves the dynamic range, which keeps directions
/// with `‖ς(b)w‖² ~ 1e-20` visible.
fn directions(frame: &[(CMat, CMat)], w: &CVec, m: &CMat, r: usize, cut: f64) -> Directions {
    let d = frame.len();
    let cols: Vec<DVector<f64>> = frame.iter().map(|(_, img)| linalg::realify(&(img * w))).collect();
    let rows = cols.first().map_or(0, |c| c.len());
    let b = linalg::RMat::from_fn(rows, d, |i, j| cols[j][i]);
    let g = DVector::from_fn(d, |i, _| linalg::inner(&frame[i].0, m));
    let svd = b.svd(false, true);
    let vt = svd.v_t.expect("right factor requested");
    let top = svd.singular_values.iter().copied().fold(0.0, f64::max);
    let mut newton = DVector::zeros(d);
    let mut range = DVector::zeros(d);
    let mut decrement = 0.0;
    for (k, &sig) in svd.singular_values.iter().enumerate() {
        // σ² must stay representable
        if sig > NEWTON_RCOND * top && sig > 1e-150 {
            let q = vt.row(k).transpose();
            let proj = q.dot(&g);
            if sig > cut * top {
                decrement += (proj / (sig * sig)) * (proj / (sig * sig));
            }
            newton += &q * (proj / (sig * sig));
            range += q * proj;
        }
    }
    let kernel = &g - range;
    let kernel_slope = kernel.norm();
    let kernel = if top > 1e-150 { kernel / (top * top) } else { kernel };
    let assemble = |c: &DVector<f64>| {
        frame
            .iter()
            .zip(c.iter())
            .fold(CMat::zeros(r, r), |acc, ((b, _), &x)| acc + b * re(x))
    };
    Directions {
        gradient: assemble(&g),
        gradient_norm: g.norm(),
        kernel: assemble(&kernel),
        kernel_slope,
        newton_norm: newton.norm(),
        decrement: libm::sqrt(decrement),
        newton: assemble(&newton),
    }
}

/// Norm of the Newton step `H⁺ g` for `Ψ(w, exp(·))` at the identity over
/// the full Hermitian frame. Directions in the kernel of `H` (the
/// stabilizer) are dropped.
pub fn newton_step(sympl: &Symplectization, w: &CVec) -> Result<f64> {
    sympl.rep().check_point(w)?;
    let m = sympl.moment_unchecked(w).hermitian;
    Ok(directions(sympl.hermitian_frame(), w, &m, sympl.kind().matrix_dim(), 0.0).newton_norm)
}

/// Orthonormal Hermitian basis of `i·[z(𝔨_v)^⊥ ∩ z_𝔨(𝔨_v)]`: the
/// directions along which the moment can still be moved to zero without
/// leaving the centralizer of the stabilizer.
pub fn shift_subspace(sympl: &Symplectization, v: &CVec) -> Result<Vec<CMat>> {
    let kind = sympl.kind();
    let stab = sympl.stabilizer_algebra(v)?;
    let k_v = &stab.k_v;
    let cent = lie::centralizer_algebra(kind, k_v, Ambient::Compact).basis;
    // centre of 𝔨_v: combinations of k_v commuting with every element of k_v
    let center: Vec<CMat> = if k_v.is_empty() {
        Vec::new()
    } else {
        let cols: Vec<DVector<f64>> = k_v
            .iter()
            .map(|a| {
                let parts: Vec<CMat> = k_v.iter().map(|b| linalg::commutator(a, b)).collect();
                let flat = CVec::from_iterator(
                    parts.iter().map(|p| p.len()).sum(),
                    parts.iter().flat_map(|p| p.iter().copied()),
                );
                linalg::realify(&flat)
            })
            .collect();
        let rows = cols[0].len();
        let map = linalg::RMat::from_fn(rows, cols.len(), |i, j| cols[j][i]);
        let top = linalg::real_singular_values(&map).first().copied().unwrap_or(0.0).max(1.0);
        let kernel = linalg::real_null_space(&map, tol::RANK_ZERO * top);
        kernel
            .column_iter()
            .map(|c| {
                k_v.iter()
                    .zip(c.iter())
                    .fold(CMat::zeros(kind.matrix_dim(), kind.matrix_dim()), |acc, (b, &x)| acc + b * re(x))
            })
            .collect()
    };
    let center = linalg::orthonormalize_real(&center, 1e-9);
    let mut family = center.clone();
    family.extend(cent);
    let all = linalg::orthonormalize_real(&family, 1e-9);
    Ok(all[center.len()..]
        .iter()
        .map(|b| linalg::hermitian_part(&(b * C64::new(0.0, -1.0))))
        .collect())
}

/// A Hermitian `s₀` in the shift subspace with `μ(e^{s₀} v) = 0`.
pub fn find_zero_shift(sympl: &Symplectization, v: &CVec, opts: &FlowOptions) -> Result<CMat> {
    sympl.rep().check_point(v)?;
    let r = sympl.kind().matrix_dim();
    if sympl.moment_unchecked(v).norm <= opts.tol {
        return Ok(CMat::zeros(r, r));
    }
    let basis = shift_subspace(sympl, v)?;
    let run = descend(sympl, v, opts, Some(&basis));
    if run.moment_norm > opts.tol {
        return Err(Error::NoConvergence(format!(
            "restricted descent ended {} with |mu| = {:.3e}{}",
            run.classification.as_str(),
            run.moment_norm,
            run.note.map(|n| format!(" ({n})")).unwrap_or_default()
        )));
    }
    let s0 = run.shift()?;
    let moved = linalg::exp_hermitian(&sympl.rep().sigma(&s0), 1.0) * v;
    let check = sympl.moment_unchecked(&moved).norm;
    if check > 10.0 * opts.tol {
        return Err(Error::NoConvergence(format!(
            "shift reproduces |mu| = {check:.3e} only"
        )));
    }
    Ok(s0)
}

#[derive(Debug, Clone)]
pub enum Boundedness {
    BoundedBelow {
        inf_estimate: f64,
        confidence: Confidence,
    },
    Unbounded {
        direction: CMat,
        /// `λ^s(v)`, bounding the eventual slope of `t ↦ Ψ(v, e^{ts})`.
        slope: f64,
    },
    Inconclusive {
        psi: f64,
        note: String,
    },
}

impl Boundedness {
    pub fn bounded(&self) -> Option<bool> {
        match self {
            Boundedness::BoundedBelow { .. } => Some(true),
            Boundedness::Unbounded { .. } => Some(false),
            Boundedness::Inconclusive { .. } => None,
        }
    }
}

/// Whether `Ψ(v, ·)` is bounded below on the group.
pub fn boundedness_probe(sympl: &Symplectization, v: &CVec, budget: &Budget) -> Result<Boundedness> {
    let (s, lambda) = stability::destabilizer_search(sympl, v, budget)?;
    if lambda < 0.0 {
        let psi10 = sympl.kempf_ness(&s, 10.0, v)?;
        let psi20 = sympl.kempf_ness(&s, 20.0, v)?;
        let slack = 1e-9 * (1.0 + psi10.abs());
        if psi20 - psi10 <= 10.0 * lambda + slack {
            return Ok(Boundedness::Unbounded {
                direction: s,
                slope: lambda,
            });
        }
    }
    let run = kn_descent(sympl, v, &budget.flow)?;
    let confidence = if sympl.kind().is_torus() {
        Confidence::Exact
    } else {
        Confidence::Heuristic
    };
    Ok(match run.classification {
        FlowClass::StalledPositive => Boundedness::Unbounded {
            direction: run.exponent.clone() * re(1.0 / run.exponent_norm().max(1e-300)),
            slope: -run.moment_norm,
        },
        FlowClass::Inconclusive => Boundedness::Inconclusive {
            psi: run.psi,
            note: run.note.unwrap_or_default(),
        },
        _ => Boundedness::BoundedBelow {
            inf_estimate: run.psi,
            confidence,
        },
    })
}
