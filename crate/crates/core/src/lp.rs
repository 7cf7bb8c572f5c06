//! Dense two-phase simplex and the cone programs behind the torus verdicts.
//!
//! The solver is generic over an ordered field so the same code runs over
//! `BigRational` (exact, used for verdicts) and `f64` (cross-checks).
//! Bland's rule is used throughout, so degenerate pivots cannot cycle.

use alloc::vec;
use alloc::vec::Vec;
use core::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

pub trait Scalar:
    Clone
    + PartialOrd
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_i64(x: i64) -> Self;
    /// Exact for rationals: every finite `f64` is a dyadic rational.
    fn from_f64(x: f64) -> Self;
    fn to_f64(&self) -> f64;
    fn is_pos(&self) -> bool;
    fn is_neg(&self) -> bool;
    fn is_zero(&self) -> bool {
        !self.is_pos() && !self.is_neg()
    }
}

const F64_EPS: f64 = 1e-11;

impl Scalar for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_i64(x: i64) -> Self {
        x as f64
    }
    fn from_f64(x: f64) -> Self {
        x
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn is_pos(&self) -> bool {
        *self > F64_EPS
    }
    fn is_neg(&self) -> bool {
        *self < -F64_EPS
    }
}

impl Scalar for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_i64(x: i64) -> Self {
        BigRational::from_integer(BigInt::from(x))
    }
    fn from_f64(x: f64) -> Self {
        BigRational::from_float(x).expect("finite input")
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn is_pos(&self) -> bool {
        Signed::is_positive(self)
    }
    fn is_neg(&self) -> bool {
        Signed::is_negative(self)
    }
}

/// `minimize c·x subject to a_ub x ≤ b_ub, a_eq x = b_eq, x ≥ 0`.
#[derive(Debug, Clone)]
pub struct Lp<T> {
    pub c: Vec<T>,
    pub a_ub: Vec<Vec<T>>,
    pub b_ub: Vec<T>,
    pub a_eq: Vec<Vec<T>>,
    pub b_eq: Vec<T>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum LpOutcome<T> {
    Optimal { x: Vec<T>, value: T },
    Infeasible,
    Unbounded,
}

impl<T: Scalar> LpOutcome<T> {
    pub fn optimal(self) -> Option<(Vec<T>, T)> {
        match self {
            LpOutcome::Optimal { x, value } => Some((x, value)),
            _ => None,
        }
    }
}

impl<T: Scalar> Lp<T> {
    pub fn new(c: Vec<T>) -> Self {
        Self {
            c,
            a_ub: Vec::new(),
            b_ub: Vec::new(),
            a_eq: Vec::new(),
            b_eq: Vec::new(),
        }
    }

    pub fn le(&mut self, row: Vec<T>, rhs: T) -> &mut Self {
        self.a_ub.push(row);
        self.b_ub.push(rhs);
        self
    }

    pub fn eq(&mut self, row: Vec<T>, rhs: T) -> &mut Self {
        self.a_eq.push(row);
        self.b_eq.push(rhs);
        self
    }

    pub fn solve(&self) -> LpOutcome<T> {
        Tableau::build(self).run(&self.c)
    }
}

struct Tableau<T> {
    /// Rows of `[A | b]`; the last column is the right-hand side.
    rows: Vec<Vec<T>>,
    basis: Vec<usize>,
    n_orig: usize,
    /// Columns at or beyond this index are artificial.
    first_art: usize,
    width: usize,
}

impl<T: Scalar> Tableau<T> {
    fn build(lp: &Lp<T>) -> Self {
        let n = lp.c.len();
        let m_ub = lp.a_ub.len();
        let m = m_ub + lp.a_eq.len();
        let first_art = n + m_ub;
        let width = first_art + m + 1;
        let mut rows = Vec::with_capacity(m);
        let sources = lp
            .a_ub
            .iter()
            .zip(&lp.b_ub)
            .map(|(a, b)| (a, b, true))
            .chain(lp.a_eq.iter().zip(&lp.b_eq).map(|(a, b)| (a, b, false)));
        for (i, (a, b, is_ub)) in sources.enumerate() {
            let mut row = vec![T::zero(); width];
            row[..n].clone_from_slice(a);
            if is_ub {
                row[n + i] = T::one();
            }
            row[width - 1] = b.clone();
            if b.is_neg() {
                for x in row.iter_mut() {
                    *x = -x.clone();
                }
            }
            row[first_art + i] = T::one();
            rows.push(row);
        }
        let basis = (0..m).map(|i| first_art + i).collect();
        Self {
            rows,
            basis,
            n_orig: n,
            first_art,
            width,
        }
    }

    fn width(&self) -> usize {
        self.width
    }

    fn pivot(&mut self, r: usize, c: usize) {
        let p = self.rows[r][c].clone();
        for x in self.rows[r].iter_mut() {
            *x = x.clone() / p.clone();
        }
        let pivot_row = self.rows[r].clone();
        for (i, row) in self.rows.iter_mut().enumerate() {
            if i == r || row[c].is_zero() {
                continue;
            }
            let f = row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                if !y.is_zero() {
                    *x = x.clone() - f.clone() * y.clone();
                }
            }
        }
        self.basis[r] = c;
    }

    /// Reduced costs for cost vector `cost` (indexed by column).
    fn reduced(&self, cost: &[T]) -> Vec<T> {
        let w = self.width();
        let mut out: Vec<T> = (0..w).map(|j| cost.get(j).cloned().unwrap_or_else(T::zero)).collect();
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            let cb = cost.get(b).cloned().unwrap_or_else(T::zero);
            if cb.is_zero() {
                continue;
            }
            for (o, x) in out.iter_mut().zip(row) {
                *o = o.clone() - cb.clone() * x.clone();
            }
        }
        out
    }

    /// Simplex iterations with Bland's rule; columns `>= limit` never enter.
    fn optimize(&mut self, cost: &[T], limit: usize) -> bool {
        let w = self.width();
        loop {
            let red = self.reduced(cost);
            let Some(enter) = (0..limit).find(|&j| red[j].is_neg()) else {
                return true;
            };
            let mut best: Option<(usize, T)> = None;
            for (i, row) in self.rows.iter().enumerate() {
                if !row[enter].is_pos() {
                    continue;
                }
                let ratio = row[w - 1].clone() / row[enter].clone();
                let better = match &best {
                    None => true,
                    Some((bi, br)) => {
                        ratio < *br || (!(ratio > *br) && self.basis[i] < self.basis[*bi])
                    }
                };
                if better {
                    best = Some((i, ratio));
                }
            }
            match best {
                Some((r, _)) => self.pivot(r, enter),
                None => return false,
            }
        }
    }

    fn run(mut self, c: &[T]) -> LpOutcome<T> {
        let w = self.width();
        let phase1: Vec<T> = (0..w - 1)
            .map(|j| if j >= self.first_art { T::one() } else { T::zero() })
            .collect();
        self.optimize(&phase1, w - 1);
        let infeas = self
            .rows
            .iter()
            .zip(&self.basis)
            .filter(|(_, &b)| b >= self.first_art)
            .fold(T::zero(), |acc, (row, _)| acc + row[w - 1].clone());
        if infeas.is_pos() {
            return LpOutcome::Infeasible;
        }
        // drive remaining (zero-level) artificials out of the basis
        let mut i = 0;
        while i < self.rows.len() {
            if self.basis[i] >= self.first_art {
                if let Some(j) = (0..self.first_art).find(|&j| !self.rows[i][j].is_zero()) {
                    self.pivot(i, j);
                } else {
                    self.rows.remove(i);
                    self.basis.remove(i);
                    continue;
                }
            }
            i += 1;
        }
        if !self.optimize(c, self.first_art) {
            return LpOutcome::Unbounded;
        }
        let w = self.width();
        let mut x = vec![T::zero(); self.n_orig];
        for (row, &b) in self.rows.iter().zip(&self.basis) {
            if b < self.n_orig {
                x[b] = row[w - 1].clone();
            }
        }
        let value = x
            .iter()
            .zip(c)
            .fold(T::zero(), |acc, (xi, ci)| acc + xi.clone() * ci.clone());
        LpOutcome::Optimal { x, value }
    }
}

/// Rank of an integer matrix, computed exactly.
pub fn exact_rank(rows: &[Vec<i64>]) -> usize {
    let mut m: Vec<Vec<BigRational>> = rows
        .iter()
        .map(|r| r.iter().map(|&x| <BigRational as Scalar>::from_i64(x)).collect())
        .collect();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for c in 0..cols {
        let Some(p) = (rank..m.len()).find(|&i| !Scalar::is_zero(&m[i][c])) else {
            continue;
        };
        m.swap(rank, p);
        let pivot_row = m[rank].clone();
        for row in m.iter_mut().skip(rank + 1) {
            if Scalar::is_zero(&row[c]) {
                continue;
            }
            let f = row[c].clone() / pivot_row[c].clone();
            for (x, y) in row.iter_mut().zip(&pivot_row) {
                *x = x.clone() - f.clone() * y.clone();
            }
        }
        rank += 1;
    }
    rank
}

fn dot<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter()
        .zip(b)
        .fold(T::zero(), |acc, (x, y)| acc + x.clone() * y.clone())
}

/// `minimize obj·s` over `{⟨w, s⟩ ≤ 0 for w in cone, ‖s‖_∞ ≤ 1}`,
/// optionally with the extra cut `⟨τ, s⟩ ≤ 0`. Solved in `y = s + 𝟙 ≥ 0`.
pub fn box_cone_min<T: Scalar>(cone: &[Vec<T>], cut: Option<&[T]>, obj: &[T]) -> (Vec<T>, T) {
    let k = obj.len();
    let ones = vec![T::one(); k];
    let mut lp = Lp::new(obj.to_vec());
    for a in 0..k {
        let mut row = vec![T::zero(); k];
        row[a] = T::one();
        lp.le(row, T::from_i64(2));
    }
    for w in cone {
        lp.le(w.clone(), dot(w, &ones));
    }
    if let Some(cut) = cut {
        lp.le(cut.to_vec(), dot(cut, &ones));
    }
    let (y, _) = lp
        .solve()
        .optimal()
        .expect("the box program is feasible (s = 0) and bounded");
    let s: Vec<T> = y.into_iter().map(|yi| yi - T::one()).collect();
    let value = dot(obj, &s);
    (s, value)
}

/// Exact facts about `−τ` relative to the cone generated by the supported
/// weights.
#[derive(Debug, Clone)]
pub struct ConeAnalysis<T> {
    /// `min ⟨τ, s⟩` over the admissible box; `0` iff semistable.
    pub min_value: T,
    /// A minimiser, only kept when `min_value < 0`.
    pub destabilizer: Option<Vec<T>>,
    /// Weights (by index) that some `s` with `⟨τ, s⟩ ≤ 0` drives to `−∞`.
    pub killable: Vec<usize>,
    /// Sum of the killing directions: the face-selecting `s_m`.
    pub face_direction: Option<Vec<T>>,
    /// Positive multipliers `c_w` with `Σ c_w w = −τ` (polystable case).
    pub multipliers: Option<Vec<T>>,
    /// Optimal slack of the multiplier program; positive iff polystable.
    pub multiplier_margin: Option<T>,
    pub rank: usize,
}

impl<T: Scalar> ConeAnalysis<T> {
    pub fn semistable(&self) -> bool {
        !self.min_value.is_neg()
    }

    pub fn polystable(&self) -> bool {
        self.semistable() && self.killable.is_empty()
    }

    pub fn stable(&self, k: usize) -> bool {
        self.polystable() && self.rank == k
    }
}

pub fn analyze_cone<T: Scalar>(weights: &[Vec<i64>], tau: &[T]) -> ConeAnalysis<T> {
    let k = tau.len();
    let cone: Vec<Vec<T>> = weights
        .iter()
        .map(|w| w.iter().map(|&x| T::from_i64(x)).collect())
        .collect();
    let rank = exact_rank(weights);
    let (s, min_value) = box_cone_min(&cone, None, tau);
    if min_value.is_neg() {
        return ConeAnalysis {
            min_value,
            destabilizer: Some(s),
            killable: Vec::new(),
            face_direction: None,
            multipliers: None,
            multiplier_margin: None,
            rank,
        };
    }
    let mut killable = Vec::new();
    let mut face = vec![T::zero(); k];
    for (i, w) in cone.iter().enumerate() {
        let (s, val) = box_cone_min(&cone, Some(tau), w);
        if val.is_neg() {
            killable.push(i);
            face = face.into_iter().zip(s).map(|(a, b)| a + b).collect();
        }
    }
    let (multipliers, margin) = if killable.is_empty() {
        let (c, d) = positive_multipliers(&cone, tau);
        (Some(c), Some(d))
    } else {
        (None, None)
    };
    ConeAnalysis {
        min_value: T::zero(),
        destabilizer: None,
        face_direction: if killable.is_empty() { None } else { Some(face) },
        killable,
        multipliers,
        multiplier_margin: margin,
        rank,
    }
}

/// `max δ` s.t. `Σ c_w w + θ τ = 0`, `c_w ≥ δ`, `θ ≥ δ`, all in `[0, 1]`.
/// Returns `c / θ` (so that `Σ c_w w = −τ`) and the optimal `δ`.
pub fn positive_multipliers<T: Scalar>(cone: &[Vec<T>], tau: &[T]) -> (Vec<T>, T) {
    let m = cone.len();
    let k = tau.len();
    // variables: c_0..c_{m-1}, θ, δ
    let nv = m + 2;
    let mut obj = vec![T::zero(); nv];
    obj[m + 1] = -T::one();
    let mut lp = Lp::new(obj);
    for a in 0..k {
        let mut row = vec![T::zero(); nv];
        for (i, w) in cone.iter().enumerate() {
            row[i] = w[a].clone();
        }
        row[m] = tau[a].clone();
        lp.eq(row, T::zero());
    }
    for i in 0..=m {
        let mut row = vec![T::zero(); nv];
        row[m + 1] = T::one();
        row[i] = -T::one();
        lp.le(row, T::zero());
        let mut cap = vec![T::zero(); nv];
        cap[i] = T::one();
        lp.le(cap, T::one());
    }
    let mut cap = vec![T::zero(); nv];
    cap[m + 1] = T::one();
    lp.le(cap, T::one());
    let (x, _) = lp.solve().optimal().expect("zero is feasible and δ is capped");
    let delta = x[m + 1].clone();
    let theta = x[m].clone();
    let c = if theta.is_pos() {
        x[..m].iter().map(|ci| ci.clone() / theta.clone()).collect()
    } else {
        vec![T::zero(); m]
    };
    (c, delta)
}
