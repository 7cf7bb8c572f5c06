//! Moment map, maximal weights and the Kempf–Ness integral of a linear
//! action.
//!
//! For Hermitian `s` and a point `v` the pairing of the moment map with
//! `-is` is
//!
//! ```text
//! μ^{-is}(v) = ½ ⟨v, ς(s) v⟩ + ⟨τ, s⟩,
//! ```
//!
//! so that `d/dt μ^{-is}(e^{ts} v) = ‖ς(s) e^{ts} v‖²`. The sign in front of
//! the central term is the one for which the energy of the curve `e^{ts}v`
//! equals `⟨τ, s⟩ − μ^{-is}(v)` whenever it is finite; the unit tests check
//! this against quadrature.
//!
//! In the eigenbasis of `ς(s)` (eigenvalues `η_j`, components `v_j`) all
//! quantities are explicit:
//!
//! * `λ^s(v) = +∞` if some `v_j ≠ 0` has `η_j > 0`, else `⟨τ, s⟩`;
//! * `Ψ(v, e^{ts}) = ¼ Σ |v_j|² (e^{2tη_j} − 1) + t ⟨τ, s⟩`;
//! * `lim e^{ts} v = Σ_{η_j = 0} v_j` when `λ^s(v)` is finite.

use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::group::{AlgebraElement, GroupKind};
use crate::lie::{self, HermitianTypeElement};
use crate::linalg::{self, re, CMat, CVec, C64};
use crate::rep::Representation;
use crate::tol;

/// A representation together with the central shift of its moment map.
#[derive(Debug, Clone)]
pub struct Symplectization {
    rep: Representation,
    tau: Vec<f64>,
    tau_lift: CMat,
    /// Orthonormal basis of `i𝔨` and the images `ς(e_i)`.
    frame: Vec<(CMat, CMat)>,
}

impl Symplectization {
    pub fn new(rep: Representation, tau: Vec<f64>) -> Result<Self> {
        let kind = rep.kind();
        let tau_lift = kind.tau_lift(&tau)?;
        let frame = kind
            .hermitian_basis()
            .into_iter()
            .map(|e| {
                let img = rep.sigma(&e);
                (e, img)
            })
            .collect();
        Ok(Self {
            rep,
            tau,
            tau_lift,
            frame,
        })
    }

    pub fn rep(&self) -> &Representation {
        &self.rep
    }

    pub fn kind(&self) -> GroupKind {
        self.rep.kind()
    }

    pub fn tau(&self) -> &[f64] {
        &self.tau
    }

    pub fn tau_lift(&self) -> &CMat {
        &self.tau_lift
    }

    /// `⟨τ, s⟩` for the lifted central element.
    pub fn tau_pairing(&self, s: &CMat) -> f64 {
        linalg::inner(&self.tau_lift, s)
    }

    /// Basis of `i𝔨` with the corresponding `ς` images.
    pub fn hermitian_frame(&self) -> &[(CMat, CMat)] {
        &self.frame
    }

    /// `μ^{-is}(v)` for Hermitian `s`.
    pub fn moment_pairing(&self, s: &CMat, v: &CVec) -> Result<f64> {
        self.rep.check_point(v)?;
        self.kind().check(s)?;
        let defect = linalg::hermitian_defect(s);
        if defect > tol::IDENTITY * linalg::scale_of(s) {
            return Err(Error::NotHermitian { defect });
        }
        let sv = self.rep.sigma(s) * v;
        Ok(0.5 * linalg::vec_inner(v, &sv).re + self.tau_pairing(s))
    }

    /// The moment map at `v`, as the Hermitian element `m` with
    /// `⟨m, s⟩ = μ^{-is}(v)`; the `𝔨`-valued moment is `-i m`.
    pub fn moment_vector(&self, v: &CVec) -> Result<MomentVector> {
        self.rep.check_point(v)?;
        Ok(self.moment_unchecked(v))
    }

    pub(crate) fn moment_unchecked(&self, v: &CVec) -> MomentVector {
        if let Some(w) = self.rep.weights() {
            let k = self.tau.len();
            let mut coords = self.tau.clone();
            for (wj, z) in w.iter().zip(v.iter()) {
                let a2 = 0.5 * z.norm_sqr();
                for a in 0..k {
                    coords[a] += wj[a] as f64 * a2;
                }
            }
            let hermitian = linalg::real_diag(&coords);
            let norm = linalg::sqrt(coords.iter().map(|c| c * c).sum());
            return MomentVector {
                hermitian,
                coords,
                norm,
            };
        }
        let mut coords = Vec::with_capacity(self.frame.len());
        let r = self.kind().matrix_dim();
        let mut hermitian = CMat::zeros(r, r);
        for (e, img) in &self.frame {
            let c = 0.5 * linalg::vec_inner(v, &(img * v)).re + self.tau_pairing(e);
            hermitian += e * re(c);
            coords.push(c);
        }
        let norm = linalg::sqrt(coords.iter().map(|c| c * c).sum());
        MomentVector {
            hermitian,
            coords,
            norm,
        }
    }

    /// `e^{t ς(s)} v`. Overflow of the exponential is reported as
    /// [`Error::Overflow`], which callers read as infinite energy.
    pub fn act(&self, s: &AlgebraElement, t: f64, v: &CVec) -> Result<CVec> {
        self.rep.check_point(v)?;
        let sig = self.rep.sigma_of(s)?;
        let out = if linalg::hermitian_defect(&sig) <= 1e-13 * linalg::scale_of(&sig) {
            let eig = linalg::hermitian_eigen(&sig);
            let mut c = eig.vectors.adjoint() * v;
            for (cj, &eta) in c.iter_mut().zip(&eig.values) {
                if *cj != C64::new(0.0, 0.0) {
                    if t * eta > 700.0 {
                        return Err(Error::Overflow);
                    }
                    *cj *= libm::exp(t * eta);
                }
            }
            eig.vectors * c
        } else {
            linalg::expm(&(sig * re(t))) * v
        };
        if out.iter().any(|z| !z.re.is_finite() || !z.im.is_finite()) {
            return Err(Error::Overflow);
        }
        Ok(out)
    }

    /// Spectral data of `ς(s)` for Hermitian `s`, with clustered eigenvalues.
    pub fn spectral(&self, s: &CMat, v: &CVec) -> Result<Spectral> {
        self.rep.check_point(v)?;
        self.kind().check(s)?;
        let defect = linalg::hermitian_defect(s);
        if defect > tol::IDENTITY * linalg::scale_of(s) {
            return Err(Error::NotHermitian { defect });
        }
        Ok(Spectral::new(&self.rep.sigma(s), v))
    }

    /// `λ^s(v)` for Hermitian `s`.
    pub fn maximal_weight(&self, s: &HermitianTypeElement, v: &CVec) -> Result<MaximalWeight> {
        let sp = self.spectral(s.matrix(), v)?;
        if sp.positive_support()? {
            Ok(MaximalWeight::Infinite)
        } else {
            Ok(MaximalWeight::Finite(self.tau_pairing(s.matrix())))
        }
    }

    /// `λ^s(v)` for any Hermitian-type `s`, through its Hermitian
    /// representative (`λ` is constant on equivalence classes).
    pub fn maximal_weight_general(&self, s: &HermitianTypeElement, v: &CVec) -> Result<MaximalWeight> {
        self.maximal_weight(&lie::retract_to_compact(s), v)
    }

    /// Energy of the curve `t ↦ e^{ts} v` on `[0, ∞)`.
    pub fn energy(&self, s: &HermitianTypeElement, v: &CVec) -> Result<MaximalWeight> {
        Ok(match self.maximal_weight(s, v)? {
            MaximalWeight::Infinite => MaximalWeight::Infinite,
            MaximalWeight::Finite(l) => MaximalWeight::Finite(l - self.moment_pairing(s.matrix(), v)?),
        })
    }

    /// `lim_{t→∞} e^{ts} v`, or `None` when the curve diverges.
    pub fn limit_point(&self, s: &HermitianTypeElement, v: &CVec) -> Result<Option<CVec>> {
        let sp = self.spectral(s.matrix(), v)?;
        if sp.positive_support()? {
            return Ok(None);
        }
        Ok(Some(sp.kernel_component()))
    }

    /// `Ψ(v, e^{ts})` for Hermitian `s`; `+∞` on overflow.
    pub fn kempf_ness(&self, s: &CMat, t: f64, v: &CVec) -> Result<f64> {
        let sp = self.spectral(s, v)?;
        Ok(sp.psi_quadratic(t) + t * self.tau_pairing(s))
    }

    /// `Ψ(v, g)` through the polar decomposition `g = k e^s`.
    pub fn kempf_ness_group(&self, g: &CMat, v: &CVec) -> Result<f64> {
        let polar = lie::polar_decompose(g)?;
        let s = self.kind().project(&polar.log_h());
        self.kempf_ness(&s, 1.0, v)
    }

    /// `Ψ(v, g) = ¼(‖g v‖² − ‖v‖²) + ⟨τ, log|g|⟩` evaluated through the
    /// group action; agrees with [`Symplectization::kempf_ness_group`].
    pub fn kempf_ness_potential(&self, g: &CMat, v: &CVec) -> Result<f64> {
        let gv = self.rep.rho(g)? * v;
        let quad = 0.25 * (gv.norm_squared() - v.norm_squared());
        let central = match self.kind() {
            GroupKind::Torus { rank } => (0..rank)
                .map(|a| self.tau[a] * libm::log(g[(a, a)].norm()))
                .sum::<f64>(),
            GroupKind::Gl { .. } => {
                let det = g.clone().determinant();
                self.tau[0] * libm::log(det.norm())
            }
        };
        Ok(quad + central)
    }

    /// Stabilizer of `v` in `𝔤` and in `𝔨`.
    pub fn stabilizer_algebra(&self, v: &CVec) -> Result<Stabilizer> {
        stabilizer_algebra(&self.rep, v)
    }
}

/// The moment map at a point.
#[derive(Debug, Clone)]
pub struct MomentVector {
    /// Hermitian `m` with `⟨m, s⟩ = μ^{-is}`.
    pub hermitian: CMat,
    /// Coordinates of `m` in the orthonormal Hermitian basis.
    pub coords: Vec<f64>,
    pub norm: f64,
}

impl MomentVector {
    /// The moment as an element of the compact algebra, `-i m`.
    pub fn compact(&self) -> CMat {
        &self.hermitian * C64::new(0.0, -1.0)
    }
}

/// `λ^s(v) ∈ ℝ ∪ {+∞}`, also used for energies.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MaximalWeight {
    Finite(f64),
    Infinite,
}

impl MaximalWeight {
    pub fn finite(self) -> Option<f64> {
        match self {
            MaximalWeight::Finite(x) => Some(x),
            MaximalWeight::Infinite => None,
        }
    }

    pub fn is_infinite(self) -> bool {
        matches!(self, MaximalWeight::Infinite)
    }

    pub fn as_f64(self) -> f64 {
        match self {
            MaximalWeight::Finite(x) => x,
            MaximalWeight::Infinite => f64::INFINITY,
        }
    }
}

/// A point written in an eigenbasis of a Hermitian operator.
#[derive(Debug, Clone)]
pub struct Spectral {
    pub vectors: CMat,
    pub values: Vec<f64>,
    pub coords: CVec,
    /// `(eigenvalue, columns)` per cluster, ascending.
    pub clusters: Vec<(f64, Vec<usize>)>,
    zero_tol: f64,
    v_norm: f64,
}

impl Spectral {
    pub fn new(op: &CMat, v: &CVec) -> Self {
        let eig = linalg::hermitian_eigen(op);
        let rho = eig.values.iter().map(|x| x.abs()).fold(0.0, f64::max);
        let zero_tol = tol::EIGEN_CLUSTER * rho.max(1.0);
        let clusters = linalg::cluster_sorted(&eig.values, zero_tol);
        let coords = eig.vectors.adjoint() * v;
        Self {
            values: eig.values,
            vectors: eig.vectors,
            coords,
            clusters,
            zero_tol,
            v_norm: linalg::vec_norm(v),
        }
    }

    fn cluster_norm(&self, members: &[usize]) -> f64 {
        linalg::sqrt(members.iter().map(|&i| self.coords[i].norm_sqr()).sum())
    }

    pub fn is_zero_eigenvalue(&self, eta: f64) -> bool {
        eta.abs() <= self.zero_tol
    }

    /// Whether `v` has a component on a positive eigenvalue.
    pub fn positive_support(&self) -> Result<bool> {
        let mut found = false;
        for (eta, members) in &self.clusters {
            if *eta <= self.zero_tol {
                continue;
            }
            let c = self.cluster_norm(members);
            if c > tol::SUPPORT_BAND * self.v_norm {
                found = true;
            } else if c > tol::SUPPORT_ZERO * self.v_norm {
                return Err(Error::Indeterminate(alloc::format!(
                    "component {c:.3e} on eigenvalue {eta:.6e} inside the support band"
                )));
            }
        }
        Ok(found)
    }

    /// Projection of `v` on the kernel of the operator.
    pub fn kernel_component(&self) -> CVec {
        let mut c = CVec::zeros(self.coords.len());
        for (eta, members) in &self.clusters {
            if self.is_zero_eigenvalue(*eta) {
                for &i in members {
                    c[i] = self.coords[i];
                }
            }
        }
        &self.vectors * c
    }

    /// `¼ Σ |v_j|² (e^{2tη_j} − 1)`, `+∞` on overflow.
    pub fn psi_quadratic(&self, t: f64) -> f64 {
        let mut out = 0.0;
        for (z, &eta) in self.coords.iter().zip(&self.values) {
            let a = z.norm_sqr();
            if a == 0.0 {
                continue;
            }
            let x = 2.0 * t * eta;
            if x > 709.0 {
                return f64::INFINITY;
            }
            out += 0.25 * a * libm::expm1(x);
        }
        out
    }
}

/// Stabilizer subalgebras of a point.
#[derive(Debug, Clone)]
pub struct Stabilizer {
    /// Complex basis of `𝔤_v`.
    pub g_v: Vec<CMat>,
    /// Real basis of `𝔨_v` (anti-Hermitian matrices).
    pub k_v: Vec<CMat>,
}

impl Stabilizer {
    /// `𝔤_v = (𝔨_v)^ℂ`, i.e. `dim_ℝ 𝔤_v = 2 dim_ℝ 𝔨_v`.
    pub fn is_reductive(&self) -> bool {
        self.g_v.len() == self.k_v.len()
    }

    pub fn is_trivial(&self) -> bool {
        self.g_v.is_empty()
    }
}

pub fn stabilizer_algebra(rep: &Representation, v: &CVec) -> Result<Stabilizer> {
    rep.check_point(v)?;
    let kind = rep.kind();
    let n = rep.dim();
    let complex = kind.complex_basis();
    let cols: Vec<CVec> = complex.iter().map(|e| rep.sigma(e) * v).collect();
    let map = linalg::columns_to_matrix(n, &cols);
    let top = linalg::singular_values(&map).first().copied().unwrap_or(0.0);
    let kernel = linalg::null_space(&map, tol::RANK_ZERO * top);
    let g_v = kernel
        .column_iter()
        .map(|c| {
            complex
                .iter()
                .zip(c.iter())
                .fold(CMat::zeros(kind.matrix_dim(), kind.matrix_dim()), |acc, (e, z)| acc + e * *z)
        })
        .collect();

    let compact: Vec<CMat> = kind
        .hermitian_basis()
        .into_iter()
        .map(|h| h * C64::new(0.0, 1.0))
        .collect();
    let real_cols: Vec<nalgebra::DVector<f64>> = compact
        .iter()
        .map(|e| linalg::realify(&(rep.sigma(e) * v)))
        .collect();
    let real_map = linalg::RMat::from_fn(2 * n, compact.len(), |r, c| real_cols[c][r]);
    let top = linalg::real_singular_values(&real_map).first().copied().unwrap_or(0.0);
    let real_kernel = linalg::real_null_space(&real_map, tol::RANK_ZERO * top);
    let k_v = real_kernel
        .column_iter()
        .map(|c| {
            compact
                .iter()
                .zip(c.iter())
                .fold(CMat::zeros(kind.matrix_dim(), kind.matrix_dim()), |acc, (e, &x)| acc + e * re(x))
        })
        .collect();
    Ok(Stabilizer { g_v, k_v })
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    fn torus(weights: Vec<Vec<i64>>, tau: Vec<f64>) -> Symplectization {
        let k = tau.len();
        Symplectization::new(Representation::torus(k, weights).unwrap(), tau).unwrap()
    }

    fn pt(xs: &[f64]) -> CVec {
        CVec::from_iterator(xs.len(), xs.iter().map(|&x| re(x)))
    }

    fn ht(xs: &[f64]) -> HermitianTypeElement {
        HermitianTypeElement::classify(&AlgebraElement::torus_real(xs)).unwrap()
    }

    fn pm() -> Symplectization {
        torus(vec![vec![1], vec![-1]], vec![0.0])
    }

    #[test]
    fn pairing_examples() {
        let s = linalg::real_diag(&[1.0]);
        assert_eq!(pm().moment_pairing(&s, &pt(&[1.0, 1.0])).unwrap(), 0.0);
        assert_eq!(pm().moment_pairing(&s, &pt(&[1.0, 0.0])).unwrap(), 0.5);
        assert_eq!(pm().moment_pairing(&s, &pt(&[0.0, 0.0])).unwrap(), 0.0);
        let bad = linalg::diag(&[C64::new(0.0, 1.0)]);
        assert!(matches!(
            pm().moment_pairing(&bad, &pt(&[1.0, 0.0])),
            Err(Error::NotHermitian { .. })
        ));
    }

    #[test]
    fn moment_vector_examples() {
        let m = pm().moment_vector(&pt(&[1.0, 1.0])).unwrap();
        assert_eq!(m.norm, 0.0);
        let m = pm().moment_vector(&pt(&[0.0, 0.0])).unwrap();
        assert_eq!(m.norm, 0.0);
        let gl = Symplectization::new(Representation::standard(2), vec![0.0]).unwrap();
        let v = CVec::from_vec(vec![C64::new(1.0, 2.0), re(-1.0)]);
        let m = gl.moment_vector(&v).unwrap();
        let expect = (&v * v.adjoint()) * re(0.5);
        assert!(linalg::norm(&(m.hermitian - expect)) < 1e-14);
    }

    #[test]
    fn act_examples() {
        let s = AlgebraElement::torus_real(&[1.0]);
        let v = pt(&[1.0, 1.0]);
        assert_eq!(pm().act(&s, 0.0, &v).unwrap(), v);
        let out = pm().act(&s, libm::log(2.0), &v).unwrap();
        assert!((out - pt(&[2.0, 0.5])).norm() < 1e-14);
        assert_eq!(pm().act(&s, 1000.0, &v), Err(Error::Overflow));
    }

    #[test]
    fn maximal_weight_examples() {
        let sy = pm();
        assert_eq!(
            sy.maximal_weight(&ht(&[0.0]), &pt(&[1.0, 1.0])).unwrap(),
            MaximalWeight::Finite(0.0)
        );
        assert_eq!(
            sy.maximal_weight(&ht(&[1.0]), &pt(&[1.0, 1.0])).unwrap(),
            MaximalWeight::Infinite
        );
        assert_eq!(
            sy.maximal_weight(&ht(&[-1.0]), &pt(&[1.0, 0.0])).unwrap(),
            MaximalWeight::Finite(0.0)
        );
        assert!(matches!(
            sy.maximal_weight(&ht(&[-1.0]), &pt(&[1.0, 1e-10])),
            Err(Error::Indeterminate(_))
        ));
    }

    #[test]
    fn energy_examples() {
        let sy = pm();
        assert_eq!(
            sy.energy(&ht(&[-1.0]), &pt(&[1.0, 0.0])).unwrap(),
            MaximalWeight::Finite(0.5)
        );
        assert_eq!(sy.energy(&ht(&[1.0]), &pt(&[1.0, 1.0])).unwrap(), MaximalWeight::Infinite);
        // fixed point of s
        let fixed = torus(vec![vec![0], vec![2]], vec![0.7]);
        assert_eq!(fixed.energy(&ht(&[-3.0]), &pt(&[2.0, 0.0])).unwrap(), MaximalWeight::Finite(0.0));
    }

    #[test]
    fn limit_point_examples() {
        let sy = pm();
        let v = pt(&[1.0, 1.0]);
        assert_eq!(sy.limit_point(&ht(&[0.0]), &v).unwrap(), Some(v));
        let lim = sy.limit_point(&ht(&[-1.0]), &pt(&[1.0, 0.0])).unwrap().unwrap();
        assert!(lim.norm() < 1e-15);
        let half = torus(vec![vec![1], vec![0]], vec![0.0]);
        let lim = half.limit_point(&ht(&[-1.0]), &pt(&[1.0, 1.0])).unwrap().unwrap();
        assert!((lim.clone() - pt(&[0.0, 1.0])).norm() < 1e-15);
        let far = half.act(&AlgebraElement::torus_real(&[-1.0]), 30.0, &pt(&[1.0, 1.0])).unwrap();
        assert!((far - lim).norm() < 1e-12);
        assert_eq!(sy.limit_point(&ht(&[1.0]), &pt(&[1.0, 1.0])).unwrap(), None);
    }

    #[test]
    fn kempf_ness_examples() {
        let sy = pm();
        let s = linalg::real_diag(&[1.0]);
        let v = pt(&[1.0, 1.0]);
        assert_eq!(sy.kempf_ness(&s, 0.0, &v).unwrap(), 0.0);
        for t in [0.3, 1.0, 2.5] {
            let expect = 0.25 * (libm::exp(2.0 * t) - 1.0) + 0.25 * (libm::exp(-2.0 * t) - 1.0);
            assert!((sy.kempf_ness(&s, t, &v).unwrap() - expect).abs() < 1e-13);
        }
        let rot = CMat::from_row_slice(2, 2, &[re(0.0), re(-1.0), re(1.0), re(0.0)]);
        let gl = Symplectization::new(Representation::standard(2), vec![0.3]).unwrap();
        let w = CVec::from_vec(vec![C64::new(1.0, 2.0), re(-1.0)]);
        assert!(gl.kempf_ness_group(&rot, &w).unwrap().abs() < 1e-14);
        assert!(gl.kempf_ness_group(&CMat::identity(2, 2), &w).unwrap().abs() < 1e-14);
    }

    #[test]
    fn stabilizer_examples() {
        let st = stabilizer_algebra(pm().rep(), &pt(&[0.0, 0.0])).unwrap();
        assert_eq!(st.g_v.len(), 1);
        assert!(st.is_reductive());
        let st = stabilizer_algebra(pm().rep(), &pt(&[1.0, 1.0])).unwrap();
        assert!(st.is_trivial() && st.is_reductive());
        let std = Representation::standard(2);
        let st = stabilizer_algebra(&std, &pt(&[1.0, 0.0])).unwrap();
        assert_eq!(st.g_v.len(), 2);
        // only i·E_22 survives in the compact form
        assert_eq!(st.k_v.len(), 1);
        assert!(!st.is_reductive());
        for g in &st.g_v {
            assert!(g[(0, 0)].norm() < 1e-12 && g[(1, 0)].norm() < 1e-12);
        }
    }
}
