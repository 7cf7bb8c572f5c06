//! Linear representations on `ℂ^n`.
//!
//! A torus acts diagonally through integer weights. A `GL(r)` action is
//! given by its differential on the elementary matrices; the named
//! constructors build the standard, symmetric-power and adjoint actions in
//! orthonormal bases so that the compact form acts unitarily.

use alloc::collections::BTreeMap;
use alloc::format;
use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::group::{AlgebraElement, GroupKind};
use crate::linalg::{self, re, CMat, CVec, C64};
use crate::tol;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Named {
    Standard,
    Sym(usize),
    Adjoint,
}

#[derive(Debug, Clone, PartialEq)]
enum Data {
    Weights(Vec<Vec<i64>>),
    /// `ς(E_ab)` for `E_ab` in row-major order.
    Images(Vec<CMat>),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Representation {
    kind: GroupKind,
    dim: usize,
    data: Data,
    named: Option<Named>,
}

impl Representation {
    /// Diagonal torus action: coordinate `j` has weight `weights[j] ∈ ℤ^k`.
    pub fn torus(rank: usize, weights: Vec<Vec<i64>>) -> Result<Self> {
        if let Some((j, w)) = weights.iter().enumerate().find(|(_, w)| w.len() != rank) {
            return Err(Error::Shape(format!(
                "weight {j} has {} entries, expected {rank}",
                w.len()
            )));
        }
        Ok(Self {
            kind: GroupKind::Torus { rank },
            dim: weights.len(),
            data: Data::Weights(weights),
            named: None,
        })
    }

    pub fn standard(r: usize) -> Self {
        let images = GroupKind::Gl { rank: r }.complex_basis();
        Self {
            kind: GroupKind::Gl { rank: r },
            dim: r,
            data: Data::Images(images),
            named: Some(Named::Standard),
        }
    }

    /// Degree-`d` polynomials in `r` variables, basis `√(d!/α!) x^α` in
    /// descending lexicographic order of `α`.
    pub fn sym(r: usize, d: usize) -> Self {
        let monos = monomials(r, d);
        let index: BTreeMap<Vec<usize>, usize> =
            monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
        let n = monos.len();
        let mut images = Vec::with_capacity(r * r);
        for a in 0..r {
            for b in 0..r {
                let mut m = CMat::zeros(n, n);
                for (col, alpha) in monos.iter().enumerate() {
                    if a == b {
                        m[(col, col)] = re(alpha[a] as f64);
                    } else if alpha[b] > 0 {
                        let mut beta = alpha.clone();
                        beta[b] -= 1;
                        beta[a] += 1;
                        let coeff = linalg::sqrt((alpha[b] * (alpha[a] + 1)) as f64);
                        m[(index[&beta], col)] = re(coeff);
                    }
                }
                images.push(m);
            }
        }
        Self {
            kind: GroupKind::Gl { rank: r },
            dim: n,
            data: Data::Images(images),
            named: Some(Named::Sym(d)),
        }
    }

    /// `gl(r)` acting on itself by brackets, basis `E_cd` row-major.
    pub fn adjoint(r: usize) -> Self {
        let n = r * r;
        let mut images = Vec::with_capacity(n);
        for a in 0..r {
            for b in 0..r {
                let mut m = CMat::zeros(n, n);
                for c in 0..r {
                    for d in 0..r {
                        let col = c * r + d;
                        if b == c {
                            m[(a * r + d, col)] += re(1.0);
                        }
                        if d == a {
                            m[(c * r + b, col)] -= re(1.0);
                        }
                    }
                }
                images.push(m);
            }
        }
        Self {
            kind: GroupKind::Gl { rank: r },
            dim: n,
            data: Data::Images(images),
            named: Some(Named::Adjoint),
        }
    }

    /// Explicit images `ς(E_ab)`, row-major in `(a, b)`. Rejects data that
    /// breaks the bracket relations or unitarity of the compact form.
    pub fn from_images(r: usize, images: Vec<CMat>) -> Result<Self> {
        if images.len() != r * r {
            return Err(Error::Shape(format!("need {} images, got {}", r * r, images.len())));
        }
        let n = images.first().map(|m| m.nrows()).unwrap_or(0);
        if let Some(i) = images.iter().position(|m| m.shape() != (n, n)) {
            return Err(Error::Shape(format!("image {i} is not {n}x{n}")));
        }
        let rep = Self {
            kind: GroupKind::Gl { rank: r },
            dim: n,
            data: Data::Images(images),
            named: None,
        };
        rep.validate()?;
        Ok(rep)
    }

    /// Checks `ς([E_ab, E_cd]) = [ς(E_ab), ς(E_cd)]` and `ς(E_ab)* = ς(E_ba)`.
    pub fn validate(&self) -> Result<()> {
        let Data::Images(images) = &self.data else {
            return Ok(());
        };
        let r = self.kind.matrix_dim();
        let scale = images.iter().map(linalg::norm).fold(1.0, f64::max);
        for i in 0..r * r {
            let (a, b) = (i / r, i % r);
            let residual = linalg::norm(&(images[i].adjoint() - &images[b * r + a]));
            if residual > tol::BRACKET * scale {
                return Err(Error::NotUnitary { index: i, residual });
            }
        }
        for i in 0..r * r {
            for j in 0..r * r {
                let (a, b) = (i / r, i % r);
                let (c, d) = (j / r, j % r);
                let mut expect = CMat::zeros(self.dim, self.dim);
                if b == c {
                    expect += &images[a * r + d];
                }
                if d == a {
                    expect -= &images[c * r + b];
                }
                let got = linalg::commutator(&images[i], &images[j]);
                let residual = linalg::norm(&(got - expect));
                if residual > tol::BRACKET * scale * scale {
                    return Err(Error::BracketMismatch {
                        first: i,
                        second: j,
                        residual,
                    });
                }
            }
        }
        Ok(())
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    /// Dimension `n` of the represented space.
    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn named(&self) -> Option<Named> {
        self.named
    }

    pub fn weights(&self) -> Option<&[Vec<i64>]> {
        match &self.data {
            Data::Weights(w) => Some(w),
            Data::Images(_) => None,
        }
    }

    /// `ς(E_ab)` (gl) or `ς(E_aa)` (torus), in the order of
    /// [`GroupKind::complex_basis`].
    pub fn images(&self) -> Vec<CMat> {
        match &self.data {
            Data::Images(m) => m.clone(),
            Data::Weights(w) => (0..self.kind.matrix_dim())
                .map(|a| {
                    let d: Vec<f64> = w.iter().map(|wj| wj[a] as f64).collect();
                    linalg::real_diag(&d)
                })
                .collect(),
        }
    }

    /// The differential `ς(a)` for `a` in the algebra (as a matrix).
    pub fn sigma(&self, a: &CMat) -> CMat {
        match &self.data {
            Data::Weights(w) => {
                let d: Vec<C64> = w
                    .iter()
                    .map(|wj| wj.iter().enumerate().map(|(i, &c)| a[(i, i)] * c as f64).sum())
                    .collect();
                linalg::diag(&d)
            }
            Data::Images(images) => {
                let r = self.kind.matrix_dim();
                let mut out = CMat::zeros(self.dim, self.dim);
                for (i, img) in images.iter().enumerate() {
                    let c = a[(i / r, i % r)];
                    if c != C64::new(0.0, 0.0) {
                        out += img * c;
                    }
                }
                out
            }
        }
    }

    pub fn sigma_of(&self, s: &AlgebraElement) -> Result<CMat> {
        self.check_element(s)?;
        Ok(self.sigma(s.matrix()))
    }

    pub fn check_element(&self, s: &AlgebraElement) -> Result<()> {
        if s.kind() != self.kind {
            return Err(Error::Shape(format!(
                "element of {:?} used with representation of {:?}",
                s.kind(),
                self.kind
            )));
        }
        Ok(())
    }

    pub fn check_point(&self, v: &CVec) -> Result<()> {
        if v.len() != self.dim {
            return Err(Error::Shape(format!(
                "point has {} coordinates, representation dimension is {}",
                v.len(),
                self.dim
            )));
        }
        Ok(())
    }

    /// The fundamental vector `ς(s) v`.
    pub fn infinitesimal_action(&self, s: &AlgebraElement, v: &CVec) -> Result<CVec> {
        self.check_point(v)?;
        Ok(self.sigma_of(s)? * v)
    }

    /// `ρ(exp x) = exp(ς(x))`; available for every representation.
    pub fn rho_exp(&self, x: &CMat) -> CMat {
        linalg::expm(&self.sigma(x))
    }

    /// The group action `ρ(g)` for an invertible `g`.
    ///
    /// Explicitly given images only determine the action on the identity
    /// component through exponentials; use [`Representation::rho_exp`] there.
    pub fn rho(&self, g: &CMat) -> Result<CMat> {
        let r = self.kind.matrix_dim();
        if g.shape() != (r, r) {
            return Err(Error::Shape(format!("group element must be {r}x{r}")));
        }
        match (&self.data, self.named) {
            (Data::Weights(w), _) => {
                if !linalg::is_diagonal(g, 1e-12 * linalg::scale_of(g)) {
                    return Err(Error::NotInAlgebra("torus elements are diagonal".into()));
                }
                let d: Vec<C64> = w
                    .iter()
                    .map(|wj| {
                        wj.iter()
                            .enumerate()
                            .fold(re(1.0), |acc, (a, &e)| acc * g[(a, a)].powi(e as i32))
                    })
                    .collect();
                Ok(linalg::diag(&d))
            }
            (_, Some(Named::Standard)) => Ok(g.clone()),
            (_, Some(Named::Adjoint)) => {
                let g_inv = linalg::inverse(g).ok_or(Error::Singular { smallest: 0.0 })?;
                let n = r * r;
                let mut out = CMat::zeros(n, n);
                for c in 0..r {
                    for d in 0..r {
                        let img = g.column(c) * g_inv.row(d);
                        for (k, z) in img.transpose().iter().enumerate() {
                            // transpose().iter() walks row-major
                            out[(k, c * r + d)] = *z;
                        }
                    }
                }
                Ok(out)
            }
            (_, Some(Named::Sym(d))) => Ok(sym_power(g, d)),
            (Data::Images(_), None) => Err(Error::Unsupported(
                "group action of explicitly given images; use exponentials".into(),
            )),
        }
    }
}

/// Exponent vectors of degree `d` in `r` variables, descending lex order.
pub fn monomials(r: usize, d: usize) -> Vec<Vec<usize>> {
    fn go(r: usize, left: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() + 1 == r {
            prefix.push(left);
            out.push(prefix.clone());
            prefix.pop();
            return;
        }
        for e in (0..=left).rev() {
            prefix.push(e);
            go(r, left - e, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if r == 0 {
        return out;
    }
    go(r, d, &mut Vec::with_capacity(r), &mut out);
    out
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

fn multi_factorial(alpha: &[usize]) -> f64 {
    alpha.iter().map(|&a| factorial(a)).product()
}

/// Matrix of `g` on degree-`d` polynomials in the normalised monomial basis.
fn sym_power(g: &CMat, d: usize) -> CMat {
    let r = g.nrows();
    let monos = monomials(r, d);
    let index: BTreeMap<Vec<usize>, usize> =
        monos.iter().cloned().enumerate().map(|(i, m)| (m, i)).collect();
    let n = monos.len();
    let df = factorial(d);
    let mut out = CMat::zeros(n, n);
    for (col, alpha) in monos.iter().enumerate() {
        // g x_a = Σ_c g_ca x_c; expand Π_a (g x_a)^{α_a}
        let mut poly: BTreeMap<Vec<usize>, C64> = BTreeMap::new();
        poly.insert(vec![0; r], re(1.0));
        for (a, &power) in alpha.iter().enumerate() {
            for _ in 0..power {
                let mut next: BTreeMap<Vec<usize>, C64> = BTreeMap::new();
                for (mono, coeff) in &poly {
                    for c in 0..r {
                        let z = g[(c, a)];
                        if z == C64::new(0.0, 0.0) {
                            continue;
                        }
                        let mut m = mono.clone();
                        m[c] += 1;
                        *next.entry(m).or_insert(C64::new(0.0, 0.0)) += coeff * z;
                    }
                }
                poly = next;
            }
        }
        let norm_in = linalg::sqrt(df / multi_factorial(alpha));
        for (beta, coeff) in poly {
            let norm_out = linalg::sqrt(df / multi_factorial(&beta));
            out[(index[&beta], col)] = coeff * (norm_in / norm_out);
        }
    }
    out
}
