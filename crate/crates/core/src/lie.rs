//! Hermitian-type elements and the parabolic data attached to them.
//!
//! An element `s` of the algebra is of Hermitian type when it is
//! diagonalizable with real spectrum. Such an `s` determines
//!
//! * the parabolic subgroup `G(s)` of elements `g` for which
//!   `e^{ts} g e^{-ts}` converges as `t → ∞`,
//! * its Levi factor `Z(s)` (the centralizer of `s`) and unipotent radical
//!   `U(s)` (the elements whose limit is the identity),
//! * an equivalence class under `s ∼ σ ⇔ σ = ad_u(s)` for some `u ∈ U(s)`.
//!
//! Everything is computed in an eigenbasis of `s` with eigenvalues in
//! ascending order, where `G(s)` is block upper triangular.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;
use core::ops::Range;

use crate::error::{Error, Result};
use crate::group::{AlgebraElement, GroupKind};
use crate::linalg::{self, re, CMat, C64};
use crate::tol;

/// A classified Hermitian-type element with its eigen-data.
#[derive(Debug, Clone)]
pub struct HermitianTypeElement {
    raw: AlgebraElement,
    eigenvalues: Vec<f64>,
    projectors: Vec<CMat>,
    basis: CMat,
    basis_inv: CMat,
    blocks: Vec<Range<usize>>,
}

/// Why an element failed to be of Hermitian type.
#[derive(Debug, Clone, PartialEq)]
pub enum Rejection {
    NonRealEigenvalue { value: C64 },
    NilpotentPart { eigenvalue: f64, rank_drop: usize },
}

/// Outcome of [`classify_hermitian_type`].
#[derive(Debug, Clone)]
pub enum HermitianType {
    Accepted(HermitianTypeElement),
    Rejected(Rejection),
    Indeterminate(String),
}

impl HermitianType {
    pub fn accepted(self) -> Result<HermitianTypeElement> {
        match self {
            HermitianType::Accepted(h) => Ok(h),
            HermitianType::Rejected(Rejection::NonRealEigenvalue { value }) => Err(Error::NotHermitianType(
                format!("non-real eigenvalue {:.6e}{:+.6e}i", value.re, value.im),
            )),
            HermitianType::Rejected(Rejection::NilpotentPart { eigenvalue, rank_drop }) => Err(
                Error::NotHermitianType(format!(
                    "nilpotent part at eigenvalue {eigenvalue:.6e} (rank drop {rank_drop})"
                )),
            ),
            HermitianType::Indeterminate(why) => Err(Error::Indeterminate(why)),
        }
    }
}

pub fn classify_hermitian_type(s: &AlgebraElement) -> HermitianType {
    let m = s.matrix();
    let n = m.nrows();
    if n == 0 {
        return HermitianType::Accepted(HermitianTypeElement::assemble(
            s.clone(),
            Vec::new(),
            CMat::zeros(0, 0),
            CMat::zeros(0, 0),
            Vec::new(),
        ));
    }
    if linalg::hermitian_defect(m) <= 1e-13 * linalg::scale_of(m) {
        return HermitianType::Accepted(HermitianTypeElement::from_hermitian_unchecked(s.clone()));
    }

    let schur = nalgebra::linalg::Schur::new(m.clone());
    let (_, t) = schur.unpack();
    let eig: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();
    let rho = eig.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let scale = rho.max(1.0);

    if let Some(worst) = eig.iter().max_by(|a, b| a.im.abs().total_cmp(&b.im.abs())) {
        if worst.im.abs() > tol::IMAG_BAND * scale {
            return HermitianType::Rejected(Rejection::NonRealEigenvalue { value: *worst });
        }
        if worst.im.abs() > tol::IMAG_ZERO * scale {
            return HermitianType::Indeterminate(format!(
                "imaginary part {:.3e} inside the tolerance band",
                worst.im
            ));
        }
    }

    let mut reals: Vec<f64> = eig.iter().map(|z| z.re).collect();
    reals.sort_by(f64::total_cmp);
    let clusters = linalg::cluster_sorted(&reals, tol::EIGEN_CLUSTER * scale);
    for pair in clusters.windows(2) {
        if pair[1].0 - pair[0].0 <= tol::EIGEN_BAND * scale {
            return HermitianType::Indeterminate(format!(
                "eigenvalues {:.9e} and {:.9e} nearly coincide",
                pair[0].0, pair[1].0
            ));
        }
    }

    let sv_scale = linalg::singular_values(m).first().copied().unwrap_or(0.0).max(1.0);
    let mut cols: Vec<linalg::CVec> = Vec::with_capacity(n);
    let mut blocks = Vec::with_capacity(clusters.len());
    let mut values = Vec::with_capacity(clusters.len());
    for (eta, members) in &clusters {
        let a = m - CMat::identity(n, n) * re(*eta);
        let a2 = &a * &a;
        let sa = linalg::singular_values(&a);
        let sa2 = linalg::singular_values(&a2);
        let ambiguous = |sv: &[f64], sc: f64| {
            sv.iter()
                .any(|&x| x > tol::RANK_ZERO * sc && x <= tol::RANK_BAND * sc)
        };
        if ambiguous(&sa, sv_scale) || ambiguous(&sa2, sv_scale * sv_scale) {
            return HermitianType::Indeterminate(format!(
                "rank of s - {eta:.6e} I is ambiguous at tolerance"
            ));
        }
        let rank_a = sa.iter().filter(|&&x| x > tol::RANK_ZERO * sv_scale).count();
        let rank_a2 = sa2
            .iter()
            .filter(|&&x| x > tol::RANK_ZERO * sv_scale * sv_scale)
            .count();
        if rank_a != rank_a2 {
            return HermitianType::Rejected(Rejection::NilpotentPart {
                eigenvalue: *eta,
                rank_drop: rank_a - rank_a2,
            });
        }
        let kernel = linalg::null_space(&a, tol::RANK_ZERO * sv_scale);
        if kernel.ncols() != members.len() {
            return HermitianType::Indeterminate(format!(
                "eigenvalue {eta:.6e}: geometric multiplicity {} vs algebraic {}",
                kernel.ncols(),
                members.len()
            ));
        }
        let start = cols.len();
        cols.extend(kernel.column_iter().map(|c| c.into_owned()));
        blocks.push(start..cols.len());
        values.push(*eta);
    }
    let basis = linalg::columns_to_matrix(n, &cols);
    let Some(basis_inv) = linalg::inverse(&basis) else {
        return HermitianType::Indeterminate("eigenbasis is numerically singular".into());
    };
    HermitianType::Accepted(HermitianTypeElement::assemble(s.clone(), values, basis, basis_inv, blocks))
}

impl HermitianTypeElement {
    fn assemble(
        raw: AlgebraElement,
        eigenvalues: Vec<f64>,
        basis: CMat,
        basis_inv: CMat,
        blocks: Vec<Range<usize>>,
    ) -> Self {
        let projectors = blocks
            .iter()
            .map(|b| basis.columns(b.start, b.len()) * basis_inv.rows(b.start, b.len()))
            .collect();
        Self {
            raw,
            eigenvalues,
            projectors,
            basis,
            basis_inv,
            blocks,
        }
    }

    fn from_hermitian_unchecked(raw: AlgebraElement) -> Self {
        let eig = linalg::hermitian_eigen(raw.matrix());
        let scale = eig.values.iter().map(|x| x.abs()).fold(1.0, f64::max);
        let clusters = linalg::cluster_sorted(&eig.values, tol::EIGEN_CLUSTER * scale);
        let blocks = clusters
            .iter()
            .map(|(_, m)| m[0]..m[m.len() - 1] + 1)
            .collect();
        let values = clusters.iter().map(|(v, _)| *v).collect();
        let inv = eig.vectors.adjoint();
        Self::assemble(raw, values, eig.vectors, inv, blocks)
    }

    /// Classifies a Hermitian matrix; fails if `h` is not Hermitian.
    pub fn hermitian(kind: GroupKind, h: CMat) -> Result<Self> {
        let defect = linalg::hermitian_defect(&h);
        if defect > tol::IDENTITY * linalg::scale_of(&h) {
            return Err(Error::NotHermitian { defect });
        }
        let h = linalg::hermitian_part(&h);
        Ok(Self::from_hermitian_unchecked(AlgebraElement::new(kind, h)?))
    }

    pub fn classify(s: &AlgebraElement) -> Result<Self> {
        classify_hermitian_type(s).accepted()
    }

    pub fn raw(&self) -> &AlgebraElement {
        &self.raw
    }

    pub fn kind(&self) -> GroupKind {
        self.raw.kind()
    }

    pub fn matrix(&self) -> &CMat {
        self.raw.matrix()
    }

    /// Distinct eigenvalues, ascending.
    pub fn eigenvalues(&self) -> &[f64] {
        &self.eigenvalues
    }

    pub fn projectors(&self) -> &[CMat] {
        &self.projectors
    }

    /// Eigenvectors as columns, grouped by ascending eigenvalue.
    pub fn basis(&self) -> &CMat {
        &self.basis
    }

    pub fn basis_inv(&self) -> &CMat {
        &self.basis_inv
    }

    pub fn blocks(&self) -> &[Range<usize>] {
        &self.blocks
    }

    pub fn multiplicities(&self) -> Vec<usize> {
        self.blocks.iter().map(|b| b.len()).collect()
    }

    pub fn is_hermitian(&self) -> bool {
        self.raw.is_hermitian(1e-12)
    }

    /// `Σ η_j P_j`.
    pub fn reconstruct(&self) -> CMat {
        let n = self.raw.matrix().nrows();
        self.projectors
            .iter()
            .zip(&self.eigenvalues)
            .fold(CMat::zeros(n, n), |acc, (p, &e)| acc + p * re(e))
    }

    /// `X⁻¹ m X` in the ascending eigenbasis.
    fn to_eigenbasis(&self, m: &CMat) -> CMat {
        &self.basis_inv * m * &self.basis
    }

    fn from_eigenbasis(&self, m: &CMat) -> CMat {
        &self.basis * m * &self.basis_inv
    }

    /// Eigenvalue attached to each basis column.
    fn column_values(&self) -> Vec<f64> {
        let mut out = Vec::with_capacity(self.basis.ncols());
        for (b, &e) in self.blocks.iter().zip(&self.eigenvalues) {
            out.extend(core::iter::repeat(e).take(b.len()));
        }
        out
    }

    fn block_of(&self) -> Vec<usize> {
        let mut out = Vec::with_capacity(self.basis.ncols());
        for (i, b) in self.blocks.iter().enumerate() {
            out.extend(core::iter::repeat(i).take(b.len()));
        }
        out
    }
}

/// Bases of `𝔤(s) = 𝔷(s) ⊕ 𝔲(s)`.
#[derive(Debug, Clone)]
pub struct ParabolicTriple {
    pub base: HermitianTypeElement,
    pub g_alg: Vec<AlgebraElement>,
    pub z_alg: Vec<AlgebraElement>,
    pub u_alg: Vec<AlgebraElement>,
}

/// The eigenvectors of `ad(s)` are the rank-one maps `x_a ⊗ w_b` with `x_a`
/// a column of the eigenbasis and `w_b` a row of its inverse; the
/// eigenvalue is `η(a) − η(b)`.
pub fn parabolic_triple(s: &HermitianTypeElement) -> ParabolicTriple {
    let kind = s.kind();
    if kind.is_torus() {
        let full: Vec<AlgebraElement> = kind
            .complex_basis()
            .into_iter()
            .map(|m| AlgebraElement::new(kind, m).expect("basis lies in the algebra"))
            .collect();
        return ParabolicTriple {
            base: s.clone(),
            g_alg: full.clone(),
            z_alg: full,
            u_alg: Vec::new(),
        };
    }
    let block = s.block_of();
    let n = block.len();
    let mut z_alg = Vec::new();
    let mut u_alg = Vec::new();
    for a in 0..n {
        for b in 0..n {
            if block[a] > block[b] {
                continue;
            }
            let m = s.basis.column(a) * s.basis_inv.row(b);
            let e = AlgebraElement::new(kind, m).expect("square matrix lies in gl");
            if block[a] == block[b] {
                z_alg.push(e);
            } else {
                u_alg.push(e);
            }
        }
    }
    let g_alg = z_alg.iter().chain(&u_alg).cloned().collect();
    ParabolicTriple {
        base: s.clone(),
        g_alg,
        z_alg,
        u_alg,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Membership {
    /// In `U(s)`: the conjugation limit is the identity.
    Unipotent,
    /// In `G(s)` but not in `U(s)`.
    Parabolic,
    Neither,
}

#[derive(Debug, Clone)]
pub struct ParabolicMembership {
    pub membership: Membership,
    /// `lim_{t→∞} e^{ts} g e^{-ts}` when it exists.
    pub limit: Option<CMat>,
}

/// Decides `g ∈ U(s) ⊂ G(s)` from the block structure of `g` in the
/// ascending eigenbasis of `s`: block `(i, j)` is scaled by `e^{t(η_i−η_j)}`
/// under conjugation, so the limit exists iff the blocks below the
/// diagonal vanish, and it is then the block diagonal.
pub fn parabolic_member(g: &CMat, s: &HermitianTypeElement) -> Result<ParabolicMembership> {
    check_invertible(g)?;
    let gp = s.to_eigenbasis(g);
    let scale = linalg::scale_of(&gp);
    let block = s.block_of();
    let n = block.len();
    let mut lower = 0.0f64;
    let mut diag = CMat::zeros(n, n);
    for a in 0..n {
        for b in 0..n {
            if block[a] > block[b] {
                lower = lower.max(gp[(a, b)].norm());
            } else if block[a] == block[b] {
                diag[(a, b)] = gp[(a, b)];
            }
        }
    }
    if lower > 1e-10 * scale {
        return Ok(ParabolicMembership {
            membership: Membership::Neither,
            limit: None,
        });
    }
    let unipotent = linalg::norm(&(&diag - CMat::identity(n, n))) <= 1e-10 * scale;
    Ok(ParabolicMembership {
        membership: if unipotent {
            Membership::Unipotent
        } else {
            Membership::Parabolic
        },
        limit: Some(s.from_eigenbasis(&diag)),
    })
}

fn check_invertible(g: &CMat) -> Result<()> {
    let sv = linalg::singular_values(g);
    let (Some(&hi), Some(&lo)) = (sv.first(), sv.last()) else {
        return Ok(());
    };
    if lo <= 1e-14 * hi.max(1e-300) {
        return Err(Error::Singular { smallest: lo });
    }
    Ok(())
}

/// `σ ∼ s`: `σ ∈ 𝔤(s)` and the `𝔷(s)`-component of `σ` is `s`.
pub fn equiv(s: &HermitianTypeElement, sigma: &HermitianTypeElement) -> bool {
    if s.kind() != sigma.kind() {
        return false;
    }
    let sp = s.to_eigenbasis(sigma.matrix());
    let scale = linalg::scale_of(&sp).max(linalg::scale_of(s.matrix()));
    let block = s.block_of();
    let vals = s.column_values();
    let n = block.len();
    for a in 0..n {
        for b in 0..n {
            let expect = if a == b { re(vals[a]) } else { C64::new(0.0, 0.0) };
            if block[a] >= block[b] && (sp[(a, b)] - expect).norm() > tol::IDENTITY * scale {
                return false;
            }
        }
    }
    true
}

/// The unique `u ∈ U(s)` with `u s u⁻¹ = σ`.
///
/// Writing `u = I + N` and `σ = D + M` in the eigenbasis of `s` (with `N`,
/// `M` strictly block upper triangular) the equation becomes
/// `N_ij (η_j − η_i) = M_ij + Σ_{i<k<j} M_ik N_kj`, solved by increasing
/// block distance.
pub fn find_unipotent(s: &HermitianTypeElement, sigma: &HermitianTypeElement) -> Result<CMat> {
    if !equiv(s, sigma) {
        return Err(Error::NotEquivalent);
    }
    let sp = s.to_eigenbasis(sigma.matrix());
    let blocks = s.blocks();
    let m = blocks.len();
    let n = sp.nrows();
    let mut big_n = CMat::zeros(n, n);
    for dist in 1..m {
        for i in 0..m - dist {
            let j = i + dist;
            let (bi, bj) = (&blocks[i], &blocks[j]);
            let mut rhs = sp.view((bi.start, bj.start), (bi.len(), bj.len())).into_owned();
            for k in i + 1..j {
                let bk = &blocks[k];
                rhs += sp.view((bi.start, bk.start), (bi.len(), bk.len()))
                    * big_n.view((bk.start, bj.start), (bk.len(), bj.len()));
            }
            let gap = s.eigenvalues[j] - s.eigenvalues[i];
            big_n
                .view_mut((bi.start, bj.start), (bi.len(), bj.len()))
                .copy_from(&(rhs * re(1.0 / gap)));
        }
    }
    let u = s.from_eigenbasis(&(CMat::identity(n, n) + big_n));
    Ok(s.kind().project(&u))
}

/// The Hermitian representative of the class of `s`: same eigenvalues,
/// eigenspaces obtained by orthogonalising the ascending flag of `s`.
pub fn retract_to_compact(s: &HermitianTypeElement) -> HermitianTypeElement {
    if s.is_hermitian() {
        return s.clone();
    }
    let q = orthonormal_flag_basis(s);
    let d = linalg::real_diag(&s.column_values());
    let h = linalg::hermitian_part(&(&q * d * q.adjoint()));
    let kind = s.kind();
    let raw = AlgebraElement::new(kind, kind.project(&h)).expect("retraction stays in the algebra");
    let q_inv = q.adjoint();
    HermitianTypeElement::assemble(raw, s.eigenvalues.clone(), q, q_inv, s.blocks.clone())
}

/// Unitary whose leading columns span the ascending flag of `s`.
fn orthonormal_flag_basis(s: &HermitianTypeElement) -> CMat {
    let cols: Vec<linalg::CVec> = s.basis.column_iter().map(|c| c.into_owned()).collect();
    let q = linalg::orthonormalize(&cols, 0.0);
    linalg::columns_to_matrix(s.basis.nrows(), &q)
}

/// The filtration `F_1 ⊂ … ⊂ F_m` with `F_j` the sum of the eigenspaces
/// of the `j` smallest eigenvalues, and those eigenvalues.
#[derive(Debug, Clone)]
pub struct FlagClass {
    /// Orthonormal basis of each `F_j` as matrix columns.
    pub steps: Vec<CMat>,
    pub weights: Vec<f64>,
}

impl FlagClass {
    pub fn dims(&self) -> Vec<usize> {
        self.steps.iter().map(|f| f.ncols()).collect()
    }

    /// Same weights and the same subspaces up to principal angles.
    pub fn same_class(&self, other: &FlagClass) -> bool {
        let scale = self
            .weights
            .iter()
            .chain(&other.weights)
            .map(|w| w.abs())
            .fold(1.0, f64::max);
        self.weights.len() == other.weights.len()
            && self
                .weights
                .iter()
                .zip(&other.weights)
                .all(|(a, b)| (a - b).abs() <= tol::IDENTITY * scale)
            && self
                .steps
                .iter()
                .zip(&other.steps)
                .all(|(a, b)| linalg::subspace_distance(a, b) < tol::SUBSPACE)
    }
}

pub fn flag_class(s: &HermitianTypeElement) -> Result<FlagClass> {
    if s.kind().is_torus() {
        return Err(Error::Unsupported(
            "flags are trivial on a torus; equivalence is equality".into(),
        ));
    }
    let q = orthonormal_flag_basis(s);
    let steps = s
        .blocks
        .iter()
        .map(|b| q.columns(0, b.end).into_owned())
        .collect();
    Ok(FlagClass {
        steps,
        weights: s.eigenvalues.clone(),
    })
}

/// `g = k·h` with `k` unitary and `h` positive definite Hermitian.
#[derive(Debug, Clone)]
pub struct PolarPair {
    pub k_part: CMat,
    pub h_part: CMat,
}

impl PolarPair {
    /// The Hermitian `s` with `h = exp(s)`.
    pub fn log_h(&self) -> CMat {
        linalg::log_positive(&self.h_part)
    }
}

pub fn polar_decompose(g: &CMat) -> Result<PolarPair> {
    check_invertible(g)?;
    let svd = g.clone().svd(true, true);
    let u = svd.u.expect("left factor requested");
    let v_t = svd.v_t.expect("right factor requested");
    let sigma: Vec<C64> = svd.singular_values.iter().map(|&x| re(x)).collect();
    let k_part = &u * &v_t;
    let h_part = linalg::hermitian_part(&(v_t.adjoint() * linalg::diag(&sigma) * &v_t));
    Ok(PolarPair { k_part, h_part })
}

/// Which real form a centralizer is taken in.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Ambient {
    /// The complex algebra `𝔤`; the basis is complex.
    Full,
    /// The compact form `𝔨` (anti-Hermitian elements); the basis is real.
    Compact,
}

#[derive(Debug, Clone)]
pub struct Centralizer {
    pub ambient: Ambient,
    pub basis: Vec<CMat>,
}

impl Centralizer {
    /// Complex dimension for [`Ambient::Full`], real for [`Ambient::Compact`].
    pub fn dim(&self) -> usize {
        self.basis.len()
    }
}

/// Common commutant `{a : [a, g] = 0 for all generators g}`.
pub fn centralizer_algebra(kind: GroupKind, generators: &[CMat], ambient: Ambient) -> Centralizer {
    let candidates: Vec<CMat> = match ambient {
        Ambient::Full => kind.complex_basis(),
        Ambient::Compact => kind
            .hermitian_basis()
            .into_iter()
            .map(|h| h * C64::new(0.0, 1.0))
            .collect(),
    };
    if generators.is_empty() || kind.is_torus() {
        return Centralizer {
            ambient,
            basis: candidates,
        };
    }
    let basis = match ambient {
        Ambient::Full => {
            let images: Vec<linalg::CVec> = candidates
                .iter()
                .map(|b| stack_brackets(b, generators))
                .collect();
            let rows = images[0].len();
            let map = linalg::columns_to_matrix(rows, &images);
            let thr = null_threshold(&linalg::singular_values(&map));
            let kernel = linalg::null_space(&map, thr);
            kernel
                .column_iter()
                .map(|c| combine(&candidates, c.iter().copied()))
                .collect()
        }
        Ambient::Compact => {
            let images: Vec<nalgebra::DVector<f64>> = candidates
                .iter()
                .map(|b| linalg::realify(&stack_brackets(b, generators)))
                .collect();
            let rows = images[0].len();
            let map = linalg::RMat::from_fn(rows, images.len(), |r, c| images[c][r]);
            let thr = null_threshold(&linalg::real_singular_values(&map));
            let kernel = linalg::real_null_space(&map, thr);
            kernel
                .column_iter()
                .map(|c| combine(&candidates, c.iter().map(|&x| re(x))))
                .collect()
        }
    };
    Centralizer { ambient, basis }
}

fn null_threshold(sv: &[f64]) -> f64 {
    tol::RANK_ZERO * sv.first().copied().unwrap_or(0.0).max(1.0)
}

fn stack_brackets(a: &CMat, generators: &[CMat]) -> linalg::CVec {
    let parts: Vec<CMat> = generators.iter().map(|g| linalg::commutator(a, g)).collect();
    let len: usize = parts.iter().map(|p| p.len()).sum();
    linalg::CVec::from_iterator(len, parts.iter().flat_map(|p| p.iter().copied()))
}

fn combine(basis: &[CMat], coeffs: impl Iterator<Item = C64>) -> CMat {
    let (r, c) = basis[0].shape();
    basis
        .iter()
        .zip(coeffs)
        .fold(CMat::zeros(r, c), |acc, (b, x)| acc + b * x)
}
