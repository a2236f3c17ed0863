use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use crate::diffpoly::DiffPoly;
use crate::lie::{GradedSetup, LieAlgebra, Vector};
use crate::scalar::Scalar;

/// The grading `deg(a ⊗ z^k) = i − (d+1)k` of `𝔤((z⁻¹))`, stored doubled:
/// a basis vector of doubled grade `g` at `z^k` has degree `g − z·k` with
/// `z = 2(d+1)`, where `d` is the grade of `s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LoopGrading {
    grade2: Vec<i32>,
    z: i32,
}

impl LoopGrading {
    pub fn new(setup: &GradedSetup, s_grade2: i32) -> Self {
        LoopGrading {
            grade2: (0..setup.dim()).map(|i| setup.grade2(i)).collect(),
            z: s_grade2 + 2,
        }
    }

    /// Doubled degree of `z⁻¹`.
    pub fn z(&self) -> i32 {
        self.z
    }

    pub fn dim(&self) -> usize {
        self.grade2.len()
    }

    /// Doubled degree of `e_i ⊗ z^k`.
    pub fn degree(&self, k: i32, i: usize) -> i32 {
        self.grade2[i] - self.z * k
    }

    /// The `z`-power at which `e_i` has doubled degree `deg`, if any.
    pub fn z_power(&self, deg: i32, i: usize) -> Option<i32> {
        let t = self.grade2[i] - deg;
        (t % self.z == 0).then_some(t / self.z)
    }

    /// Basis `(k, i)` of the slice of doubled degree `deg`.
    pub fn slice(&self, deg: i32) -> Vec<(i32, usize)> {
        (0..self.dim()).filter_map(|i| self.z_power(deg, i).map(|k| (k, i))).collect()
    }
}

/// A finite element `Σ e_i ⊗ z^k ⊗ p_{k,i}` of `𝔤((z⁻¹)) ⊗ V` with
/// differential polynomial coefficients, keyed by `(k, i)`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct LoopElement {
    terms: BTreeMap<(i32, usize), DiffPoly>,
}

impl LoopElement {
    pub fn zero() -> Self {
        LoopElement::default()
    }

    /// `v ⊗ z^k ⊗ p`.
    pub fn tensor(v: &Vector, k: i32, p: &DiffPoly) -> Self {
        let mut out = LoopElement::zero();
        for i in v.support() {
            out.add_term(k, i, &p.scale(&v[i]));
        }
        out
    }

    /// `v ⊗ z^k ⊗ 1`.
    pub fn constant(v: &Vector, k: i32) -> Self {
        LoopElement::tensor(v, k, &DiffPoly::one())
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(i32, usize), &DiffPoly)> {
        self.terms.iter()
    }

    pub fn coeff(&self, k: i32, i: usize) -> DiffPoly {
        self.terms.get(&(k, i)).cloned().unwrap_or_default()
    }

    pub fn add_term(&mut self, k: i32, i: usize, p: &DiffPoly) {
        if p.is_zero() {
            return;
        }
        let e = self.terms.entry((k, i)).or_default();
        *e += p;
        if e.is_zero() {
            self.terms.remove(&(k, i));
        }
    }

    /// Smallest and largest `z`-power present.
    pub fn z_range(&self) -> Option<(i32, i32)> {
        let lo = self.terms.keys().map(|&(k, _)| k).min()?;
        let hi = self.terms.keys().map(|&(k, _)| k).max()?;
        Some((lo, hi))
    }

    pub fn scale(&self, c: &Scalar) -> LoopElement {
        self.map(|p| p.scale(c))
    }

    pub fn mul_poly(&self, q: &DiffPoly) -> LoopElement {
        self.map(|p| p * q)
    }

    pub fn map(&self, mut f: impl FnMut(&DiffPoly) -> DiffPoly) -> LoopElement {
        let mut out = LoopElement::zero();
        for (&(k, i), p) in &self.terms {
            out.add_term(k, i, &f(p));
        }
        out
    }

    /// `∂` applied to the coefficients.
    pub fn derivative(&self) -> LoopElement {
        self.map(|p| p.derivative())
    }

    /// Multiplication by `z^m`.
    pub fn z_shift(&self, m: i32) -> LoopElement {
        LoopElement {
            terms: self.terms.iter().map(|(&(k, i), p)| ((k + m, i), p.clone())).collect(),
        }
    }

    /// The coefficient vector at `z^k`, if all coefficients are constants.
    pub fn vector_at(&self, k: i32, dim: usize) -> Option<Vector> {
        let mut v = Vector::zeros(dim);
        for (&(kk, i), p) in &self.terms {
            if kk == k {
                v[i] = p.as_constant()?;
            }
        }
        Some(v)
    }

    /// `[a ⊗ z^k ⊗ p, b ⊗ z^l ⊗ q] = [a,b] ⊗ z^{k+l} ⊗ pq`.
    pub fn bracket(&self, other: &LoopElement, alg: &LieAlgebra) -> LoopElement {
        let mut out = LoopElement::zero();
        for (&(k, i), p) in &self.terms {
            for (&(l, j), q) in &other.terms {
                let c = alg.basis_bracket(i, j);
                if c.is_empty() {
                    continue;
                }
                let pq = p * q;
                for (m, cm) in c {
                    out.add_term(k + l, *m, &pq.scale(cm));
                }
            }
        }
        out
    }

    /// `(self|other)` as a Laurent polynomial in `z`.
    pub fn pairing(&self, other: &LoopElement, alg: &LieAlgebra) -> BTreeMap<i32, DiffPoly> {
        let g = alg.form_matrix();
        let mut out: BTreeMap<i32, DiffPoly> = BTreeMap::new();
        for (&(k, i), p) in &self.terms {
            for (&(l, j), q) in &other.terms {
                let c = &g[(i, j)];
                if c.is_zero() {
                    continue;
                }
                *out.entry(k + l).or_default() += &(p * q).scale(c);
            }
        }
        out.retain(|_, p| !p.is_zero());
        out
    }

    /// The homogeneous component of doubled degree `deg`.
    pub fn part(&self, grading: &LoopGrading, deg: i32) -> LoopElement {
        self.filter(|k, i| grading.degree(k, i) == deg)
    }

    /// All components of doubled degree at most `max`.
    pub fn truncate(&self, grading: &LoopGrading, max: i32) -> LoopElement {
        self.filter(|k, i| grading.degree(k, i) <= max)
    }

    fn filter(&self, keep: impl Fn(i32, usize) -> bool) -> LoopElement {
        LoopElement {
            terms: self
                .terms
                .iter()
                .filter(|(&(k, i), _)| keep(k, i))
                .map(|(key, p)| (*key, p.clone()))
                .collect(),
        }
    }

    /// Doubled degrees present, ascending.
    pub fn degrees(&self, grading: &LoopGrading) -> Vec<i32> {
        let mut d: Vec<i32> = self.terms.keys().map(|&(k, i)| grading.degree(k, i)).collect();
        d.sort_unstable();
        d.dedup();
        d
    }

    pub fn min_degree(&self, grading: &LoopGrading) -> Option<i32> {
        self.terms.keys().map(|&(k, i)| grading.degree(k, i)).min()
    }
}

impl AddAssign<&LoopElement> for LoopElement {
    fn add_assign(&mut self, rhs: &LoopElement) {
        for (&(k, i), p) in &rhs.terms {
            self.add_term(k, i, p);
        }
    }
}

impl SubAssign<&LoopElement> for LoopElement {
    fn sub_assign(&mut self, rhs: &LoopElement) {
        for (&(k, i), p) in &rhs.terms {
            self.add_term(k, i, &-p);
        }
    }
}

impl Add for &LoopElement {
    type Output = LoopElement;
    fn add(self, rhs: &LoopElement) -> LoopElement {
        let mut out = self.clone();
        out += rhs;
        out
    }
}

impl Sub for &LoopElement {
    type Output = LoopElement;
    fn sub(self, rhs: &LoopElement) -> LoopElement {
        let mut out = self.clone();
        out -= rhs;
        out
    }
}

impl Neg for &LoopElement {
    type Output = LoopElement;
    fn neg(self) -> LoopElement {
        self.map(|p| -p)
    }
}
