//! The two group families and their Lie algebras.
//!
//! A torus `(ℂ*)^k` is realised as the diagonal subgroup of `GL(k)`, so every
//! algebra element is a square complex matrix. The compact form is the
//! unitary group (resp. the real torus) and the pairing on the algebra is
//! `⟨a, b⟩ = Re tr(a* b)`, which restricts to the dot product on diagonals.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::linalg::{self, cx, re, CMat, C64};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GroupKind {
    Torus { rank: usize },
    Gl { rank: usize },
}

impl GroupKind {
    /// Size of the matrices representing group and algebra elements.
    pub fn matrix_dim(&self) -> usize {
        match *self {
            GroupKind::Torus { rank } | GroupKind::Gl { rank } => rank,
        }
    }

    /// Complex dimension of the Lie algebra (= real dimension of `𝔨`).
    pub fn dim(&self) -> usize {
        match *self {
            GroupKind::Torus { rank } => rank,
            GroupKind::Gl { rank } => rank * rank,
        }
    }

    pub fn is_torus(&self) -> bool {
        matches!(self, GroupKind::Torus { .. })
    }

    /// Complex basis: `E_aa` for a torus, `E_ab` in row-major order for `gl`.
    pub fn complex_basis(&self) -> Vec<CMat> {
        let r = self.matrix_dim();
        match self {
            GroupKind::Torus { .. } => (0..r).map(|a| unit(r, a, a)).collect(),
            GroupKind::Gl { .. } => (0..r * r).map(|i| unit(r, i / r, i % r)).collect(),
        }
    }

    /// Orthonormal real basis of the Hermitian part `i𝔨`.
    pub fn hermitian_basis(&self) -> Vec<CMat> {
        let r = self.matrix_dim();
        let mut out: Vec<CMat> = (0..r).map(|a| unit(r, a, a)).collect();
        if let GroupKind::Gl { .. } = self {
            let h = 1.0 / linalg::sqrt(2.0);
            for a in 0..r {
                for b in a + 1..r {
                    let mut sym = CMat::zeros(r, r);
                    sym[(a, b)] = re(h);
                    sym[(b, a)] = re(h);
                    out.push(sym);
                    let mut anti = CMat::zeros(r, r);
                    anti[(a, b)] = cx(0.0, -h);
                    anti[(b, a)] = cx(0.0, h);
                    out.push(anti);
                }
            }
        }
        out
    }

    /// Whether `a` is (numerically) in the algebra.
    pub fn contains(&self, a: &CMat) -> bool {
        let r = self.matrix_dim();
        a.shape() == (r, r) && (!self.is_torus() || linalg::is_diagonal(a, 1e-12 * linalg::scale_of(a)))
    }

    pub fn check(&self, a: &CMat) -> Result<()> {
        let r = self.matrix_dim();
        if a.shape() != (r, r) {
            return Err(Error::Shape(format!(
                "expected {r}x{r} algebra element, got {}x{}",
                a.nrows(),
                a.ncols()
            )));
        }
        if !self.contains(a) {
            return Err(Error::NotInAlgebra("torus elements must be diagonal".into()));
        }
        Ok(())
    }

    /// The central shift lifted to an algebra element: `diag(τ)` on a
    /// torus, `τ·I` on `gl(r)`.
    pub fn tau_lift(&self, tau: &[f64]) -> Result<CMat> {
        match *self {
            GroupKind::Torus { rank } => {
                if tau.len() != rank {
                    return Err(Error::Shape(format!("tau needs {rank} entries, got {}", tau.len())));
                }
                Ok(linalg::real_diag(tau))
            }
            GroupKind::Gl { rank } => {
                if tau.len() != 1 {
                    return Err(Error::Shape(format!("tau for gl is a scalar, got {} entries", tau.len())));
                }
                Ok(CMat::identity(rank, rank) * re(tau[0]))
            }
        }
    }

    /// Coordinates of a Hermitian element in [`GroupKind::hermitian_basis`].
    pub fn hermitian_coords(&self, h: &CMat) -> Vec<f64> {
        self.hermitian_basis().iter().map(|b| linalg::inner(b, h)).collect()
    }

    pub fn from_hermitian_coords(&self, coords: &[f64]) -> CMat {
        let r = self.matrix_dim();
        let mut out = CMat::zeros(r, r);
        for (b, &c) in self.hermitian_basis().iter().zip(coords) {
            out += b * re(c);
        }
        out
    }

    /// Orthogonal projection onto the algebra (diagonal part for tori).
    pub fn project(&self, a: &CMat) -> CMat {
        match self {
            GroupKind::Torus { .. } => {
                let d: Vec<C64> = (0..a.nrows()).map(|i| a[(i, i)]).collect();
                linalg::diag(&d)
            }
            GroupKind::Gl { .. } => a.clone(),
        }
    }
}

/// `E_ab` as an `r×r` matrix.
pub fn unit(r: usize, a: usize, b: usize) -> CMat {
    let mut m = CMat::zeros(r, r);
    m[(a, b)] = re(1.0);
    m
}

/// An element of the complex Lie algebra of a [`GroupKind`].
#[derive(Debug, Clone, PartialEq)]
pub struct AlgebraElement {
    kind: GroupKind,
    mat: CMat,
}

impl AlgebraElement {
    pub fn new(kind: GroupKind, mat: CMat) -> Result<Self> {
        kind.check(&mat)?;
        Ok(Self { kind, mat })
    }

    /// A torus element from its `k` complex coordinates.
    pub fn torus(coords: &[C64]) -> Self {
        Self {
            kind: GroupKind::Torus { rank: coords.len() },
            mat: linalg::diag(coords),
        }
    }

    pub fn torus_real(coords: &[f64]) -> Self {
        Self {
            kind: GroupKind::Torus { rank: coords.len() },
            mat: linalg::real_diag(coords),
        }
    }

    pub fn gl(mat: CMat) -> Result<Self> {
        let r = mat.nrows();
        Self::new(GroupKind::Gl { rank: r }, mat)
    }

    pub fn zero(kind: GroupKind) -> Self {
        let r = kind.matrix_dim();
        Self { kind, mat: CMat::zeros(r, r) }
    }

    pub fn kind(&self) -> GroupKind {
        self.kind
    }

    pub fn matrix(&self) -> &CMat {
        &self.mat
    }

    pub fn into_matrix(self) -> CMat {
        self.mat
    }

    /// Torus coordinates (the diagonal); for `gl` the diagonal as well.
    pub fn diagonal(&self) -> Vec<C64> {
        (0..self.mat.nrows()).map(|i| self.mat[(i, i)]).collect()
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        linalg::hermitian_defect(&self.mat) <= tol * linalg::scale_of(&self.mat)
    }

    pub fn scaled(&self, t: f64) -> Self {
        Self {
            kind: self.kind,
            mat: &self.mat * re(t),
        }
    }

    /// `ad_g(self) = g · self · g⁻¹`.
    pub fn conjugated(&self, g: &CMat) -> Result<Self> {
        let g_inv = linalg::inverse(g).ok_or(Error::Singular { smallest: 0.0 })?;
        Self::new(self.kind, self.kind.project(&linalg::conjugate(g, &self.mat, &g_inv)))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hermitian_basis_is_orthonormal() {
        let kind = GroupKind::Gl { rank: 3 };
        let basis = kind.hermitian_basis();
        assert_eq!(basis.len(), 9);
        for (i, a) in basis.iter().enumerate() {
            assert!(linalg::hermitian_defect(a) < 1e-15);
            for (j, b) in basis.iter().enumerate() {
                let expect = if i == j { 1.0 } else { 0.0 };
                assert!((linalg::inner(a, b) - expect).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn coordinates_round_trip() {
        let kind = GroupKind::Gl { rank: 2 };
        let h = CMat::from_row_slice(2, 2, &[re(1.0), cx(2.0, 3.0), cx(2.0, -3.0), re(-4.0)]);
        let back = kind.from_hermitian_coords(&kind.hermitian_coords(&h));
        assert!(linalg::norm(&(back - h)) < 1e-13);
    }

    #[test]
    fn torus_rejects_off_diagonal() {
        let kind = GroupKind::Torus { rank: 2 };
        assert!(AlgebraElement::new(kind, unit(2, 0, 1)).is_err());
        assert!(AlgebraElement::new(kind, unit(2, 1, 1)).is_ok());
    }
}
