//! Closed forms against their defining integrals, and the sign of the
//! central term that makes them agree.
//!
//! The energy of `t ↦ e^{ts} v` is `∫₀^∞ ‖ς(s) e^{ts} v‖² dt`, and
//! `Ψ(v, e^{Ts}) = ∫₀^T μ^{−is}(e^{us} v) du`. Both integrals are evaluated
//! by double-exponential quadrature with the group action computed by a
//! Padé matrix exponential, so nothing here shares code with the spectral
//! closed forms beyond `ς` itself.

use kempf_core::lie::HermitianTypeElement;
use kempf_core::linalg::{self, cx, re, CMat, CVec, C64};
use kempf_core::{MaximalWeight, Representation, Symplectization};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

fn gauss(rng: &mut ChaCha8Rng) -> C64 {
    cx(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

fn hermitian(rng: &mut ChaCha8Rng, r: usize) -> CMat {
    let a = CMat::from_fn(r, r, |_, _| gauss(rng));
    (&a + a.adjoint()) * re(0.5)
}

/// A random representation with its shift and a direction `s`; `s` is
/// diagonal when `diagonal` is set (then `ς(s)` is diagonal too, since the
/// named representations use monomial bases).
fn sample_with(rng: &mut ChaCha8Rng, diagonal: bool) -> (Symplectization, CMat) {
    if rng.random_bool(0.5) {
        let k = rng.random_range(1..=3);
        let n = rng.random_range(1..=6);
        let weights = (0..n).map(|_| (0..k).map(|_| rng.random_range(-3..=3)).collect()).collect();
        let tau = (0..k).map(|_| rng.random_range(-2.0..2.0)).collect();
        let s: Vec<f64> = (0..k).map(|_| rng.random_range(-1.0..1.0)).collect();
        let sy = Symplectization::new(Representation::torus(k, weights).unwrap(), tau).unwrap();
        (sy, linalg::real_diag(&s))
    } else {
        let r = rng.random_range(1..=3);
        let rep = match rng.random_range(0..3) {
            0 => Representation::standard(r),
            1 => Representation::sym(r, 2),
            _ => Representation::adjoint(r),
        };
        let sy = Symplectization::new(rep, vec![rng.random_range(-2.0..2.0)]).unwrap();
        let s = if diagonal {
            let d: Vec<f64> = (0..r).map(|_| rng.random_range(-1.0..1.0)).collect();
            linalg::real_diag(&d)
        } else {
            hermitian(rng, r)
        };
        (sy, s)
    }
}

fn sample(rng: &mut ChaCha8Rng) -> (Symplectization, CMat) {
    sample_with(rng, false)
}

/// A point whose curve along `s` has finite energy: only eigenvectors of
/// `ς(s)` with eigenvalue `≤ −0.2` or exactly `0` are kept. For the
/// infinite-horizon integral `ς(s)` must be diagonal, or rounding leaves
/// growing components behind.
fn finite_energy_point(rng: &mut ChaCha8Rng, sy: &Symplectization, s: &CMat) -> CVec {
    let eig = linalg::hermitian_eigen(&sy.rep().sigma(s));
    let n = eig.values.len();
    let mut v = CVec::zeros(n);
    for (j, &eta) in eig.values.iter().enumerate() {
        if eta <= -0.2 || eta.abs() < 1e-9 {
            v += eig.vectors.column(j) * gauss(rng);
        }
    }
    v
}

fn moved(sy: &Symplectization, s: &CMat, t: f64, v: &CVec) -> CVec {
    linalg::expm(&(sy.rep().sigma(s) * re(t))) * v
}

/// `∫₀^∞ ‖ς(s) e^{ts} v‖² dt` through `t = u / (1 − u)`.
fn energy_by_quadrature(sy: &Symplectization, s: &CMat, v: &CVec) -> f64 {
    let sig = sy.rep().sigma(s);
    let f = |u: f64| {
        if u >= 1.0 {
            return 0.0;
        }
        let t = u / (1.0 - u);
        let w = &sig * moved(sy, s, t, v);
        w.norm_squared() / ((1.0 - u) * (1.0 - u))
    };
    quadrature::double_exponential::integrate(f, 0.0, 1.0, 1e-12).integral
}

fn psi_by_quadrature(sy: &Symplectization, s: &CMat, t_end: f64, v: &CVec) -> f64 {
    let f = |u: f64| sy.moment_pairing(s, &moved(sy, s, u, v)).unwrap();
    quadrature::double_exponential::integrate(f, 0.0, t_end, 1e-12).integral
}

fn finite(w: MaximalWeight) -> f64 {
    w.finite().expect("finite maximal weight")
}

#[test]
fn energy_matches_quadrature_only_with_the_calibrated_sign() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let mut flipped_failures = 0;
    let mut informative = 0;
    for _ in 0..60 {
        let (sy, s) = sample_with(&mut rng, true);
        let v = finite_energy_point(&mut rng, &sy, &s);
        let h = HermitianTypeElement::hermitian(sy.kind(), s.clone()).unwrap();
        let closed = finite(sy.energy(&h, &v).unwrap());
        let quad = energy_by_quadrature(&sy, &s, &v);
        assert!(
            (closed - quad).abs() <= 1e-7 * (1.0 + quad.abs()),
            "energy {closed} vs quadrature {quad}"
        );

        // the same closed form with the central term entering μ with the
        // opposite sign
        let central = sy.tau_pairing(&s);
        let mu_flipped = sy.moment_pairing(&s, &v).unwrap() - 2.0 * central;
        let flipped = central - mu_flipped;
        if central.abs() > 1e-3 {
            informative += 1;
            if (flipped - quad).abs() > 1e-7 * (1.0 + quad.abs()) {
                flipped_failures += 1;
            }
        }
    }
    assert!(informative > 30);
    assert_eq!(flipped_failures, informative);
}

#[test]
fn psi_matches_integrated_moment() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    for _ in 0..60 {
        let (sy, s) = sample(&mut rng);
        let n = sy.rep().dim();
        let v = CVec::from_iterator(n, (0..n).map(|_| gauss(&mut rng)));
        let t_end = rng.random_range(0.1..1.5);
        let closed = sy.kempf_ness(&s, t_end, &v).unwrap();
        let quad = psi_by_quadrature(&sy, &s, t_end, &v);
        assert!(
            (closed - quad).abs() <= 1e-7 * (1.0 + quad.abs()),
            "psi {closed} vs quadrature {quad}"
        );
    }
}

#[test]
fn positive_support_has_infinite_weight() {
    let sy = Symplectization::new(Representation::torus(1, vec![vec![1], vec![-1]]).unwrap(), vec![0.0]).unwrap();
    let h = HermitianTypeElement::hermitian(sy.kind(), linalg::real_diag(&[1.0])).unwrap();
    let v = CVec::from_vec(vec![re(1.0), re(1.0)]);
    assert_eq!(sy.maximal_weight(&h, &v).unwrap(), MaximalWeight::Infinite);
    // μ along the curve grows like e^{2t}/2
    let s = h.matrix().clone();
    let mu = |t: f64| sy.moment_pairing(&s, &moved(&sy, &s, t, &v)).unwrap();
    assert!(mu(10.0) > 1e8 && mu(10.0) / mu(5.0) > 1e4);
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn maximal_weight_is_positively_homogeneous(seed in any::<u64>(), c in 0.05f64..20.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (sy, s) = sample(&mut rng);
        let n = sy.rep().dim();
        let v = CVec::from_iterator(n, (0..n).map(|_| gauss(&mut rng)));
        let h = HermitianTypeElement::hermitian(sy.kind(), s.clone()).unwrap();
        let hc = HermitianTypeElement::hermitian(sy.kind(), &s * re(c)).unwrap();
        match (sy.maximal_weight(&h, &v).unwrap(), sy.maximal_weight(&hc, &v).unwrap()) {
            (MaximalWeight::Infinite, MaximalWeight::Infinite) => {}
            (MaximalWeight::Finite(a), MaximalWeight::Finite(b)) => {
                prop_assert!((b - c * a).abs() <= 1e-9 * (1.0 + b.abs()));
            }
            other => prop_assert!(false, "mismatch {other:?}"),
        }
    }

    #[test]
    fn psi_is_convex_along_rays(seed in any::<u64>(), t in -2.0f64..2.0, h in 0.01f64..0.5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (sy, s) = sample(&mut rng);
        let n = sy.rep().dim();
        let v = CVec::from_iterator(n, (0..n).map(|_| gauss(&mut rng)));
        let f = |t: f64| sy.kempf_ness(&s, t, &v).unwrap();
        let d2 = f(t - h) + f(t + h) - 2.0 * f(t);
        prop_assert!(d2 >= -1e-9 * (1.0 + f(t).abs()));
    }

    #[test]
    fn energy_is_nonnegative(seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (sy, s) = sample_with(&mut rng, true);
        let v = finite_energy_point(&mut rng, &sy, &s);
        let h = HermitianTypeElement::hermitian(sy.kind(), s).unwrap();
        let e = finite(sy.energy(&h, &v).unwrap());
        prop_assert!(e >= -1e-12 * (1.0 + v.norm_squared()));
    }

    #[test]
    fn psi_cocycle_along_one_ray(seed in any::<u64>(), a in -1.5f64..1.5, b in -1.5f64..1.5) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (sy, s) = sample(&mut rng);
        let n = sy.rep().dim();
        let v = CVec::from_iterator(n, (0..n).map(|_| gauss(&mut rng)));
        let w = moved(&sy, &s, a, &v);
        let lhs = sy.kempf_ness(&s, a + b, &v).unwrap();
        let rhs = sy.kempf_ness(&s, a, &v).unwrap() + sy.kempf_ness(&s, b, &w).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-8 * (1.0 + lhs.abs()));
    }
}
