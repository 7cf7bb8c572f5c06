//! Acceptance suite. Each test prints one `PASS`/`FAIL` line for its
//! criterion (written to stdout directly, so it survives output capture).
//!
//! Goldens for the gallery live in `tests/golden/`; run with
//! `KEMPF_BLESS=1` to regenerate them after an intentional change.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;
use std::sync::OnceLock;
use std::time::{Duration, Instant};

use kempf::instance::{self, Problem};
use kempf::random::{self, RandomParams};
use kempf::report::{self, CheckStatus, CompareOptions, Report, Status};
use kempf::{format, gallery};
use kempf_core::flow::{self, FlowClass, FlowOptions};
use kempf_core::lie::{self, HermitianTypeElement};
use kempf_core::linalg::{self, cx, re, CMat, CVec, C64};
use kempf_core::stability::{self, Budget};
use kempf_core::{AlgebraElement, Level, MaximalWeight, Representation, Symplectization};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn announce(n: u32, name: &str, failures: &[String], elapsed: Duration, extra: &str) {
    let status = if failures.is_empty() { "PASS" } else { "FAIL" };
    let mut line = format!("criterion {n} [{name}]: {status} ({:.2} s{extra})", elapsed.as_secs_f64());
    if let Some(first) = failures.first() {
        line.push_str(&format!(" — {} failures, first: {first}", failures.len()));
    }
    let mut out = std::io::stdout().lock();
    writeln!(out, "{line}").unwrap();
    out.flush().unwrap();
}

fn conclude(n: u32, name: &str, failures: Vec<String>, start: Instant, budget: Duration, extra: &str) {
    let elapsed = start.elapsed();
    let mut failures = failures;
    if elapsed > budget {
        failures.push(format!("runtime {:.1} s exceeds {:.0} s", elapsed.as_secs_f64(), budget.as_secs_f64()));
    }
    announce(n, name, &failures, elapsed, extra);
    assert!(failures.is_empty(), "criterion {n}: {failures:#?}");
}

// ---------------------------------------------------------------------------
// samplers

fn gauss(rng: &mut ChaCha8Rng) -> C64 {
    cx(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn gauss_vec(rng: &mut ChaCha8Rng, n: usize) -> CVec {
    CVec::from_iterator(n, (0..n).map(|_| gauss(rng)))
}

fn gauss_mat(rng: &mut ChaCha8Rng, r: usize) -> CMat {
    CMat::from_fn(r, r, |_, _| gauss(rng))
}

fn unitary(rng: &mut ChaCha8Rng, r: usize) -> CMat {
    let a = gauss_mat(rng, r);
    let h = (&a + a.adjoint()) * re(0.5);
    linalg::expm(&(h * C64::new(0.0, 1.0)))
}

/// A well-conditioned random element of `GL(r)`.
fn invertible(rng: &mut ChaCha8Rng, r: usize) -> CMat {
    linalg::expm(&(gauss_mat(rng, r) * re(0.4)))
}

/// Hermitian with eigenvalues from a small integer set, so repeated
/// eigenvalues (non-minimal parabolics) are common.
fn hermitian_with_repeats(rng: &mut ChaCha8Rng, r: usize) -> CMat {
    let levels = [-2.0, -1.0, 0.0, 1.0, 2.0];
    let d: Vec<f64> = (0..r).map(|_| levels[rng.random_range(0..levels.len())]).collect();
    let u = unitary(rng, r);
    linalg::hermitian_part(&(&u * linalg::real_diag(&d) * u.adjoint()))
}

fn unit_hermitian(rng: &mut ChaCha8Rng, r: usize) -> CMat {
    let a = gauss_mat(rng, r);
    let h = (&a + a.adjoint()) * re(0.5);
    let n = linalg::norm(&h);
    h * re(1.0 / n)
}

/// `gl(r)` representations of dimension at most 6 with `r ≤ 3`.
fn gl_rep(rng: &mut ChaCha8Rng) -> Representation {
    match rng.random_range(0..8) {
        0 => Representation::standard(2),
        1 => Representation::standard(3),
        2 => Representation::sym(2, 2),
        3 => Representation::sym(2, 3),
        4 => Representation::sym(2, 5),
        5 => Representation::sym(3, 2),
        6 => Representation::adjoint(2),
        _ => Representation::standard(1),
    }
}

fn torus_rep(rng: &mut ChaCha8Rng) -> Representation {
    let k = rng.random_range(1..=3);
    let n = rng.random_range(1..=6);
    let weights = (0..n).map(|_| (0..k).map(|_| rng.random_range(-3..=3)).collect()).collect();
    Representation::torus(k, weights).unwrap()
}

/// Representation, shift and a unit direction; tori on even cases.
fn sample(rng: &mut ChaCha8Rng, case: usize, diagonal: bool) -> (Symplectization, CMat) {
    let rep = if case % 2 == 0 { torus_rep(rng) } else { gl_rep(rng) };
    let kind = rep.kind();
    let r = kind.matrix_dim();
    let tau = if kind.is_torus() {
        (0..r).map(|_| rng.random_range(-2.0..2.0)).collect()
    } else {
        vec![rng.random_range(-2.0..2.0)]
    };
    let s = if kind.is_torus() || diagonal {
        let d: Vec<f64> = (0..r).map(|_| rng.random_range(-1.0..1.0)).collect();
        linalg::real_diag(&d)
    } else {
        unit_hermitian(rng, r)
    };
    (Symplectization::new(rep, tau).unwrap(), s)
}

/// Keeps the eigencomponents of `ς(s)` with eigenvalue `≤ −gap` or `0`.
fn finite_part(sy: &Symplectization, s: &CMat, v: &CVec, gap: f64) -> CVec {
    let eig = linalg::hermitian_eigen(&sy.rep().sigma(s));
    let c = eig.vectors.adjoint() * v;
    let kept = CVec::from_iterator(
        c.len(),
        c.iter().zip(&eig.values).map(|(&z, &eta)| {
            if eta <= -gap || eta.abs() < 1e-9 {
                z
            } else {
                C64::new(0.0, 0.0)
            }
        }),
    );
    &eig.vectors * kept
}

fn moved(sy: &Symplectization, s: &CMat, t: f64, v: &CVec) -> CVec {
    linalg::expm(&(sy.rep().sigma(s) * re(t))) * v
}

fn hermitian_type(kind: kempf_core::GroupKind, m: CMat) -> HermitianTypeElement {
    HermitianTypeElement::classify(&AlgebraElement::new(kind, m).unwrap()).unwrap()
}

/// Richardson-extrapolated central difference.
fn derivative(f: impl Fn(f64) -> f64, t: f64, h: f64) -> f64 {
    let d = |h: f64| (f(t + h) - f(t - h)) / (2.0 * h);
    (4.0 * d(h / 2.0) - d(h)) / 3.0
}

// ---------------------------------------------------------------------------

#[test]
fn criterion_1_calibration_identities() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let mut failures = Vec::new();
    for case in 0..100 {
        let (sy, s) = sample(&mut rng, case, false);
        let v = gauss_vec(&mut rng, sy.rep().dim());
        let t = rng.random_range(-1.0..1.0);
        let el = AlgebraElement::new(sy.kind(), s.clone()).unwrap();
        let lambda_t = |t: f64| sy.moment_pairing(&s, &sy.act(&el, t, &v).unwrap()).unwrap();
        let sig = sy.rep().sigma(&s);
        let speed = (&sig * moved(&sy, &s, t, &v)).norm_squared();
        let d = derivative(lambda_t, t, 1e-3);
        if (d - speed).abs() > 1e-6 * speed.abs().max(1e-12) {
            failures.push(format!("case {case}: d/dt lambda = {d}, |sigma(s) e^ts v|^2 = {speed}"));
        }
        let psi = |t: f64| sy.kempf_ness(&s, t, &v).unwrap();
        let mu = lambda_t(t);
        let d = derivative(psi, t, 1e-3);
        if (d - mu).abs() > 1e-7 * mu.abs().max(1.0) {
            failures.push(format!("case {case}: d/dt psi = {d}, mu = {mu}"));
        }
    }
    conclude(1, "calibration identities", failures, start, Duration::from_secs(10), ", 100 samples");
}

/// `∫₀^∞ ‖ς(s) e^{ts} v‖² dt` through `t = u / (1 − u)`.
fn energy_by_quadrature(sy: &Symplectization, s: &CMat, v: &CVec) -> f64 {
    let sig = sy.rep().sigma(s);
    let f = |u: f64| {
        if u >= 1.0 {
            return 0.0;
        }
        let t = u / (1.0 - u);
        (&sig * moved(sy, s, t, v)).norm_squared() / ((1.0 - u) * (1.0 - u))
    };
    quadrature::double_exponential::integrate(f, 0.0, 1.0, 1e-12).integral
}

#[test]
fn criterion_2_closed_forms_against_quadrature() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(102);
    let mut failures = Vec::new();
    let mut finite = 0;
    let mut infinite = 0;
    let mut case = 0;
    while finite < 100 || infinite < 100 {
        case += 1;
        // ς(s) diagonal keeps the discarded components exactly zero over
        // the infinite horizon
        let (sy, s) = sample(&mut rng, case, true);
        let dense = gauss_vec(&mut rng, sy.rep().dim());
        let h = hermitian_type(sy.kind(), s.clone());
        let mu = |t: f64, v: &CVec| sy.moment_pairing(&s, &moved(&sy, &s, t, v)).unwrap();
        if finite < 100 {
            let v = finite_part(&sy, &s, &dense, 0.2);
            let closed = sy.energy(&h, &v).unwrap();
            let quad = energy_by_quadrature(&sy, &s, &v);
            match closed {
                MaximalWeight::Finite(e) if (e - quad).abs() <= 1e-7 * quad.abs().max(1.0) => {}
                other => failures.push(format!("case {case}: energy {other:?} vs quadrature {quad}")),
            }
            let t_end = rng.random_range(0.2..3.0);
            let psi = sy.kempf_ness(&s, t_end, &v).unwrap();
            let quad = quadrature::double_exponential::integrate(|u| mu(u, &v), 0.0, t_end, 1e-12).integral;
            if (psi - quad).abs() > 1e-7 * quad.abs().max(1.0) {
                failures.push(format!("case {case}: psi {psi} vs quadrature {quad}"));
            }
            // finite energy: increments of λ_v^s shrink
            let (a, b, c) = (mu(0.0, &v), mu(10.0, &v), mu(20.0, &v));
            if c - b > (b - a).max(0.0) + 1e-9 * (1.0 + c.abs()) {
                failures.push(format!("case {case}: finite energy but lambda grows {a} {b} {c}"));
            }
            finite += 1;
        }
        if infinite < 100 && sy.maximal_weight(&h, &dense).unwrap() == MaximalWeight::Infinite {
            // the top component grows like e^{2ηt}; over [T/2, T] with
            // T = 10/η it must dominate whatever the rest did on [0, T/2]
            let top = linalg::hermitian_eigen(&sy.rep().sigma(&s)).values.last().copied().unwrap_or(0.0);
            let horizon = 10.0 / top;
            let vals = [0.0, 0.5, 1.0].map(|f| mu(f * horizon, &dense));
            if !(vals[2] - vals[1] > (vals[1] - vals[0]).max(0.0) && vals[2] - vals[1] > 0.0) {
                failures.push(format!("case {case}: +inf classification but lambda at 0, T/2, T is {vals:?}"));
            }
            infinite += 1;
        }
    }
    conclude(
        2,
        "closed forms vs quadrature",
        failures,
        start,
        Duration::from_secs(30),
        ", 100 finite and 100 infinite samples",
    );
}

fn lambda_diff(a: MaximalWeight, b: MaximalWeight) -> Option<f64> {
    match (a, b) {
        (MaximalWeight::Infinite, MaximalWeight::Infinite) => Some(0.0),
        (MaximalWeight::Finite(x), MaximalWeight::Finite(y)) => Some((x - y).abs()),
        _ => None,
    }
}

/// A `gl` sample whose point has finite weight along `s` half the time.
fn gl_sample(rng: &mut ChaCha8Rng) -> (Symplectization, CMat, CVec) {
    let rep = loop {
        let rep = gl_rep(rng);
        if rep.kind().matrix_dim() >= 2 {
            break rep;
        }
    };
    let r = rep.kind().matrix_dim();
    let sy = Symplectization::new(rep, vec![rng.random_range(-2.0..2.0)]).unwrap();
    let s = hermitian_with_repeats(rng, r);
    let dense = gauss_vec(rng, sy.rep().dim());
    let v = if rng.random_bool(0.5) {
        finite_part(&sy, &s, &dense, 0.5)
    } else {
        dense
    };
    (sy, s, v)
}

#[test]
fn criterion_3_maximal_weight_structure() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(103);
    let mut failures = Vec::new();
    let mut finite_seen = 0;
    let tol = 1e-8;
    for case in 0..100 {
        let (sy, s, v) = gl_sample(&mut rng);
        let kind = sy.kind();
        let h = hermitian_type(kind, s.clone());
        let base = sy.maximal_weight(&h, &v).unwrap();
        if base.finite().is_some() {
            finite_seen += 1;
        }

        // homogeneity, exactly, for powers of two
        let c = [0.25, 0.5, 2.0, 4.0, 8.0][case % 5];
        let hc = hermitian_type(kind, &s * re(c));
        let scaled = sy.maximal_weight(&hc, &v).unwrap();
        let ok = match (base, scaled) {
            (MaximalWeight::Infinite, MaximalWeight::Infinite) => true,
            (MaximalWeight::Finite(a), MaximalWeight::Finite(b)) => b == c * a,
            _ => false,
        };
        if !ok {
            failures.push(format!("homogeneity case {case}: {base:?} scaled by {c} gives {scaled:?}"));
        }

        // equivariance: λ^{γ s γ⁻¹}(γ v) = λ^s(v)
        let g = invertible(&mut rng, kind.matrix_dim());
        let g_inv = linalg::inverse(&g).unwrap();
        let moved_s = hermitian_type(kind, &g * &s * &g_inv);
        let gv = sy.rep().rho(&g).unwrap() * &v;
        let eq = sy.maximal_weight_general(&moved_s, &gv).unwrap();
        if lambda_diff(base, eq).is_none_or(|d| d > tol) {
            failures.push(format!("equivariance case {case}: {base:?} vs {eq:?}"));
        }

        // parabolic invariance: λ^s(p v) = λ^s(v) for p ∈ G(s)
        let triple = lie::parabolic_triple(&h);
        let mut x = CMat::zeros(kind.matrix_dim(), kind.matrix_dim());
        for e in &triple.g_alg {
            x += e.matrix() * (gauss(&mut rng) * 0.3);
        }
        let p = linalg::expm(&x);
        let pv = sy.rep().rho(&p).unwrap() * &v;
        let par = sy.maximal_weight(&h, &pv).unwrap();
        if lambda_diff(base, par).is_none_or(|d| d > tol) {
            failures.push(format!("parabolic invariance case {case}: {base:?} vs {par:?}"));
        }

        // ∼-invariance: λ^{u s u⁻¹}(v) = λ^s(v) for u ∈ U(s)
        let mut n = CMat::zeros(kind.matrix_dim(), kind.matrix_dim());
        for e in &triple.u_alg {
            n += e.matrix() * (gauss(&mut rng) * 0.5);
        }
        let u = linalg::expm(&n);
        let sigma = hermitian_type(kind, &u * &s * linalg::inverse(&u).unwrap());
        let sim = sy.maximal_weight_general(&sigma, &v).unwrap();
        if lambda_diff(base, sim).is_none_or(|d| d > tol) {
            failures.push(format!("equivalence invariance case {case}: {base:?} vs {sim:?}"));
        }

        // representative independence: the same data transported by a
        // unitary change of basis W of the representation space
        let w = unitary(&mut rng, sy.rep().dim());
        let images: Vec<CMat> = sy.rep().images().iter().map(|m| &w * m * w.adjoint()).collect();
        let rep2 = Representation::from_images(kind.matrix_dim(), images).unwrap();
        let sy2 = Symplectization::new(rep2, sy.tau().to_vec()).unwrap();
        let other = sy2.maximal_weight(&h, &(&w * &v)).unwrap();
        if lambda_diff(base, other).is_none_or(|d| d > tol) {
            failures.push(format!("representative independence case {case}: {base:?} vs {other:?}"));
        }
    }
    if finite_seen < 30 {
        failures.push(format!("only {finite_seen} finite samples"));
    }
    conclude(3, "maximal weight structure", failures, start, Duration::from_secs(60), ", 5 x 100 samples");
}

#[test]
fn criterion_4_cone_algebra() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let mut failures = Vec::new();
    for case in 0..100 {
        let r = 2 + case % 3;
        let kind = kempf_core::GroupKind::Gl { rank: r };
        let s = hermitian_with_repeats(&mut rng, r);
        let hs = hermitian_type(kind, s.clone());
        let scale = linalg::norm(&s).max(1.0);

        // unipotent transit round trip, and uniqueness
        let triple = lie::parabolic_triple(&hs);
        let mut n = CMat::zeros(r, r);
        for e in &triple.u_alg {
            n += e.matrix() * gauss(&mut rng);
        }
        let u = linalg::expm(&n);
        let sigma_m = &u * &s * linalg::inverse(&u).unwrap();
        let sigma = hermitian_type(kind, sigma_m.clone());
        match lie::find_unipotent(&hs, &sigma) {
            Ok(found) => {
                let res = linalg::norm(&(&found * &s * linalg::inverse(&found).unwrap() - &sigma_m));
                let gap = linalg::norm(&(&found - &u));
                if res > 1e-10 * scale.max(linalg::norm(&sigma_m)) || gap > 1e-9 * linalg::norm(&u) {
                    failures.push(format!("transit case {case}: residual {res:.2e}, distance to u {gap:.2e}"));
                }
            }
            Err(e) => failures.push(format!("transit case {case}: {e}")),
        }

        // retraction: Hermitian, idempotent, lands back on s, keeps the flag
        let back = lie::retract_to_compact(&sigma);
        let again = lie::retract_to_compact(&back);
        let err = linalg::norm(&(back.matrix() - &s));
        let same_flag = lie::flag_class(&back).unwrap().same_class(&lie::flag_class(&sigma).unwrap());
        if !back.is_hermitian() || err > 1e-10 * scale || again.matrix() != back.matrix() || !same_flag {
            failures.push(format!("retraction case {case}: distance to s {err:.2e}, flag kept {same_flag}"));
        }

        // compact-orbit projection: retracting ad_g(s) lands on ad_k(s)
        let g = invertible(&mut rng, r);
        let ad = hermitian_type(kind, &g * &s * linalg::inverse(&g).unwrap());
        let proj = lie::retract_to_compact(&ad);
        let mut want = linalg::hermitian_eigen(&s).values;
        let got = linalg::hermitian_eigen(proj.matrix()).values;
        want.sort_by(f64::total_cmp);
        let spec_err = want.iter().zip(&got).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        // the unitary k: Q of g·(eigenbasis of s), which carries the flag
        let q = {
            let eig = linalg::hermitian_eigen(&s);
            let cols: Vec<CVec> = (&g * &eig.vectors).column_iter().map(|c| c.into_owned()).collect();
            let q = linalg::columns_to_matrix(r, &linalg::orthonormalize(&cols, 0.0));
            q * eig.vectors.adjoint()
        };
        let via_k = &q * &s * q.adjoint();
        let k_err = linalg::norm(&(proj.matrix() - &via_k));
        if !proj.is_hermitian() || spec_err > 1e-10 * scale || k_err > 1e-9 * scale {
            failures.push(format!("compact orbit case {case}: spectrum error {spec_err:.2e}, ad_k error {k_err:.2e}"));
        }

        // polar fixed point: ad_g(s) Hermitian forces ad_h(s) = s
        let mut zx = CMat::zeros(r, r);
        for e in &triple.z_alg {
            zx += e.matrix() * gauss(&mut rng);
        }
        let z_herm = linalg::hermitian_part(&zx);
        let g = unitary(&mut rng, r) * linalg::exp_hermitian(&z_herm, 0.5);
        let polar = lie::polar_decompose(&g).unwrap();
        let recon = linalg::norm(&(&polar.k_part * &polar.h_part - &g));
        let h_inv = linalg::inverse(&polar.h_part).unwrap();
        let fixed = linalg::norm(&(&polar.h_part * &s * h_inv - &s));
        if recon > 1e-10 * linalg::norm(&g) || fixed > 1e-8 * scale {
            failures.push(format!("polar case {case}: reconstruction {recon:.2e}, ad_h(s) - s {fixed:.2e}"));
        }
    }
    conclude(4, "cone algebra", failures, start, Duration::from_secs(60), ", 4 x 100 samples, r <= 4");
}

// ---------------------------------------------------------------------------
// the random torus suite, shared by criteria 5 and 6

struct Suite {
    problems: Vec<Problem>,
    reports: Vec<Report>,
    sparse_fraction: f64,
    elapsed: Duration,
}

fn suite() -> &'static Suite {
    static SUITE: OnceLock<Suite> = OnceLock::new();
    SUITE.get_or_init(|| {
        let start = Instant::now();
        let params = RandomParams {
            seed: 2024,
            count: 200,
            ..RandomParams::default()
        };
        let instances = random::generate(&params);
        let total: usize = instances.iter().map(|i| i.points.len()).sum();
        let sparse: usize = instances.iter().flat_map(|i| &i.points).filter(|p| random::is_sparse(p)).count();
        let problems: Vec<Problem> = instances.iter().map(|i| i.build().unwrap()).collect();
        let reports = report::compare_all(&problems, &CompareOptions::default()).unwrap();
        Suite {
            problems,
            reports,
            sparse_fraction: sparse as f64 / total as f64,
            elapsed: start.elapsed(),
        }
    })
}

#[test]
fn criterion_5_equivalence_suite() {
    let start = Instant::now();
    let suite = suite();
    let mut failures = Vec::new();
    if suite.sparse_fraction < 0.25 {
        failures.push(format!("sparse fraction {:.2}", suite.sparse_fraction));
    }
    let total = report::total(&suite.reports);
    if total.disagreements + total.inconclusive + total.errors > 0 {
        failures.push(format!("summary {total:?}"));
    }
    let licensed = [
        "polystable_iff_zero_reached",
        "stable_iff_zero_reached_with_trivial_stabilizer",
        "semistable_iff_inf_moment_zero",
        "semistable_iff_bounded_below",
        "semistable_iff_degeneration",
        "certificates_reverified",
    ];
    let mut levels = BTreeSet::new();
    for rep in &suite.reports {
        for p in &rep.points {
            let analytic = &p.results[0];
            levels.insert(analytic.verdict.unwrap_or("-"));
            for name in licensed {
                match p.checks.iter().find(|c| c.name == name) {
                    Some(c) if c.status == CheckStatus::Pass => {}
                    Some(c) => failures.push(format!("{} {}: {name} failed: {:?}", rep.instance, p.name, c.detail)),
                    None => failures.push(format!("{} {}: {name} missing", rep.instance, p.name)),
                }
            }
            // non-semistable points carry a re-verified destabilizer
            if analytic.semistable == Some(false) {
                let kind = analytic.certificate.as_ref().and_then(|c| c["kind"].as_str());
                if kind != Some("destabilizer") || analytic.verification.as_deref() != Some("verified") {
                    failures.push(format!("{} {}: unstable without verified destabilizer", rep.instance, p.name));
                }
            }
            if p.results.iter().any(|r| r.status != Status::Decided) {
                failures.push(format!("{} {}: undecided engine", rep.instance, p.name));
            }
        }
    }
    if levels.len() < 4 {
        failures.push(format!("suite covers only {levels:?}"));
    }
    let elapsed = suite.elapsed + start.elapsed();
    let extra = format!(
        ", {} points, sparse {:.0}%, levels {:?}",
        total.points,
        100.0 * suite.sparse_fraction,
        levels
    );
    if elapsed > Duration::from_secs(300) {
        failures.push(format!("runtime {:.1} s", elapsed.as_secs_f64()));
    }
    announce(5, "equivalence suite", &failures, elapsed, &extra);
    assert!(failures.is_empty(), "criterion 5: {failures:#?}");
}

#[test]
fn criterion_6_structural_invariants() {
    let start = Instant::now();
    let suite = suite();
    let mut failures = Vec::new();
    let structural = [
        "zero_stabilizer_reductive",
        "moment_in_commutant",
        "stabilizer_weights_vanish",
        "kempf_ness_convex",
    ];
    let mut counts = [0usize; 4];
    for rep in &suite.reports {
        for p in &rep.points {
            for (i, name) in structural.iter().enumerate() {
                if let Some(c) = p.checks.iter().find(|c| c.name == *name) {
                    counts[i] += 1;
                    if c.status != CheckStatus::Pass {
                        failures.push(format!("{} {}: {name}: {:?}", rep.instance, p.name, c.detail));
                    }
                }
            }
        }
    }
    // the zero a polystable point reaches is unique up to the compact torus:
    // the flow's limit and the degeneration's zero have equal moduli
    let budget = Budget::default();
    let mut compared = 0;
    for (problem, rep) in suite.problems.iter().zip(&suite.reports) {
        for ((name, v), p) in problem.points.iter().zip(&rep.points) {
            if p.results[0].verdict != Some(Level::PolystableNotStable.as_str())
                && p.results[0].verdict != Some(Level::Stable.as_str())
            {
                continue;
            }
            let run = flow::kn_descent(&problem.sympl, v, &FlowOptions::default()).unwrap();
            let deg = stability::degeneration_certificate(&problem.sympl, v, &budget).unwrap();
            let zero = linalg::exp_hermitian(&problem.sympl.rep().sigma(&deg.s0), 1.0) * &deg.y;
            assert_eq!(run.classification, FlowClass::ReachedZero);
            let gap = run
                .point
                .iter()
                .zip(zero.iter())
                .map(|(a, b)| (a.norm() - b.norm()).abs())
                .fold(0.0, f64::max);
            if gap > 1e-6 * (1.0 + linalg::vec_norm(&zero)) {
                failures.push(format!("{} {name}: zeros differ in modulus by {gap:.2e}", problem.id));
            }
            compared += 1;
        }
    }
    for (i, name) in structural.iter().enumerate() {
        if counts[i] == 0 {
            failures.push(format!("{name} never applied"));
        }
    }
    let extra = format!(
        ", checks applied: reductive {} commutant {} vanishing {} convex {}, {compared} zeros compared",
        counts[0], counts[1], counts[2], counts[3]
    );
    conclude(6, "structural invariants", failures, start, Duration::from_secs(300), &extra);
}

// ---------------------------------------------------------------------------

fn golden_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests").join("golden")
}

#[test]
fn criterion_7_gallery_regression() {
    let start = Instant::now();
    let bless = std::env::var_os("KEMPF_BLESS").is_some();
    let dir = golden_dir();
    let mut failures = Vec::new();
    let list = gallery::gallery();
    let problems: Vec<Problem> = list.iter().map(|i| i.build().unwrap()).collect();
    let reports = report::compare_all(&problems, &CompareOptions::default()).unwrap();
    for (inst, rep) in list.iter().zip(&reports) {
        for (file, text) in [
            (format!("{}.json", inst.id), instance::to_json(inst)),
            (format!("{}.report.json", inst.id), format::to_json(rep)),
        ] {
            let path = dir.join(&file);
            if bless {
                std::fs::create_dir_all(&dir).unwrap();
                std::fs::write(&path, &text).unwrap();
                continue;
            }
            match std::fs::read_to_string(&path) {
                Ok(golden) if golden == text => {}
                Ok(_) => failures.push(format!("{file} differs from its golden")),
                Err(e) => failures.push(format!("{file}: {e}")),
            }
        }
        if instance::parse_instance(&instance::to_json(inst)).unwrap() != *inst {
            failures.push(format!("{} does not round-trip", inst.id));
        }
    }
    let verdicts = |id: &str| -> Vec<&str> {
        let rep = reports.iter().find(|r| r.instance == id).unwrap();
        rep.points.iter().map(|p| p.results[0].verdict.unwrap_or("-")).collect()
    };
    let a = verdicts("A");
    if a != ["stable", "semistable_not_polystable", "polystable_not_stable"] {
        failures.push(format!("A classifies as {a:?}"));
    }
    let b: BTreeSet<&str> = ["B_minus", "B_zero", "B_plus"].iter().flat_map(|id| verdicts(id)).collect();
    let want: BTreeSet<&str> = ["stable", "semistable_not_polystable", "unstable"].into_iter().collect();
    if b != want {
        failures.push(format!("B sweep covers {b:?}"));
    }
    let a_rep = reports.iter().find(|r| r.instance == "A").unwrap();
    if a_rep.summary.exit_code() != 0 {
        failures.push(format!("A does not fully agree: {:?}", a_rep.summary));
    }
    let extra = format!(", {} instances{}", list.len(), if bless { ", goldens rewritten" } else { "" });
    conclude(7, "gallery regression", failures, start, Duration::from_secs(120), &extra);
}
