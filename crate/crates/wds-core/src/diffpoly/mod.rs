//! Differential polynomials `F[u_i^{(n)}]` with the total derivative,
//! variational derivatives and equality of local functionals.

mod lambda;
mod render;

pub use lambda::{BiLambdaPoly, LambdaPoly};
pub use render::Context;

use alloc::collections::BTreeMap;
use alloc::collections::BTreeSet;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::ops::{Add, AddAssign, Mul, Neg, Sub, SubAssign};

use crate::scalar::{Rational, Scalar};

/// The differential variable `u_gen^{(ord)}`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Var {
    pub gen: u32,
    pub ord: u32,
}

impl Var {
    pub fn new(gen: u32, ord: u32) -> Self {
        Var { gen, ord }
    }

    pub fn prime(self) -> Self {
        Var {
            gen: self.gen,
            ord: self.ord + 1,
        }
    }
}

/// A monomial as a sorted list of `(variable, exponent)` with positive
/// exponents, ordered graded-lexicographically.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct Monomial(Vec<(Var, u32)>);

impl Monomial {
    pub fn one() -> Self {
        Monomial(Vec::new())
    }

    pub fn var(v: Var) -> Self {
        Monomial(alloc::vec![(v, 1)])
    }

    pub fn factors(&self) -> &[(Var, u32)] {
        &self.0
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().map(|(_, e)| e).sum()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_empty()
    }

    pub fn exponent(&self, v: Var) -> u32 {
        self.0
            .iter()
            .find(|(w, _)| *w == v)
            .map_or(0, |(_, e)| *e)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let (a, b) = (&self.0, &other.0);
        let mut out = Vec::with_capacity(a.len() + b.len());
        let (mut i, mut j) = (0, 0);
        while i < a.len() && j < b.len() {
            match a[i].0.cmp(&b[j].0) {
                Ordering::Less => {
                    out.push(a[i]);
                    i += 1;
                }
                Ordering::Greater => {
                    out.push(b[j]);
                    j += 1;
                }
                Ordering::Equal => {
                    out.push((a[i].0, a[i].1 + b[j].1));
                    i += 1;
                    j += 1;
                }
            }
        }
        out.extend_from_slice(&a[i..]);
        out.extend_from_slice(&b[j..]);
        Monomial(out)
    }

    /// Multiplies by `v^k` (`k` may be negative as long as the result exists).
    fn shift(&self, v: Var, k: i32) -> Monomial {
        let mut out = self.0.clone();
        match out.binary_search_by(|(w, _)| w.cmp(&v)) {
            Ok(p) => {
                let e = out[p].1 as i32 + k;
                debug_assert!(e >= 0);
                if e == 0 {
                    out.remove(p);
                } else {
                    out[p].1 = e as u32;
                }
            }
            Err(p) => {
                debug_assert!(k > 0);
                out.insert(p, (v, k as u32));
            }
        }
        Monomial(out)
    }

    pub fn weight(&self, weights: &[Rational]) -> Rational {
        let mut w = Rational::from_integer(0.into());
        for (v, e) in &self.0 {
            let gw = &weights[v.gen as usize] + Rational::from_integer(v.ord.into());
            w += gw * Rational::from_integer((*e).into());
        }
        w
    }
}

impl Ord for Monomial {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A differential polynomial in canonical form: no zero coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct DiffPoly {
    terms: BTreeMap<Monomial, Scalar>,
}

impl DiffPoly {
    pub fn zero() -> Self {
        DiffPoly::default()
    }

    pub fn one() -> Self {
        DiffPoly::constant(Scalar::one())
    }

    pub fn constant(c: Scalar) -> Self {
        DiffPoly::term(c, Monomial::one())
    }

    pub fn term(c: Scalar, m: Monomial) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert(m, c);
        }
        DiffPoly { terms }
    }

    /// The generator `u_gen`.
    pub fn gen(gen: u32) -> Self {
        DiffPoly::var(Var::new(gen, 0))
    }

    pub fn var(v: Var) -> Self {
        DiffPoly::term(Scalar::one(), Monomial::var(v))
    }

    /// `Σ c_i u_i` for a coefficient list indexed by generator.
    pub fn linear(coeffs: &[Scalar]) -> Self {
        let mut p = DiffPoly::zero();
        for (i, c) in coeffs.iter().enumerate() {
            p.add_term(c.clone(), Monomial::var(Var::new(i as u32, 0)));
        }
        p
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

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &Scalar)> {
        self.terms.iter()
    }

    pub fn coeff(&self, m: &Monomial) -> Scalar {
        self.terms.get(m).cloned().unwrap_or_else(Scalar::zero)
    }

    pub fn constant_term(&self) -> Scalar {
        self.coeff(&Monomial::one())
    }

    /// The constant value if the polynomial is constant.
    pub fn as_constant(&self) -> Option<Scalar> {
        match self.terms.len() {
            0 => Some(Scalar::zero()),
            1 => self.terms.get(&Monomial::one()).cloned(),
            _ => None,
        }
    }

    pub fn add_term(&mut self, c: Scalar, m: Monomial) {
        if c.is_zero() {
            return;
        }
        match self.terms.get_mut(&m) {
            Some(x) => {
                *x += &c;
                if x.is_zero() {
                    self.terms.remove(&m);
                }
            }
            None => {
                self.terms.insert(m, c);
            }
        }
    }

    pub fn scale(&self, k: &Scalar) -> DiffPoly {
        if k.is_zero() {
            return DiffPoly::zero();
        }
        DiffPoly {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), c * k))
                .filter(|(_, c)| !c.is_zero())
                .collect(),
        }
    }

    pub fn mul_monomial(&self, c: &Scalar, m: &Monomial) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (n, d) in &self.terms {
            out.add_term(c * d, n.mul(m));
        }
        out
    }

    pub fn pow(&self, k: u32) -> DiffPoly {
        let mut r = DiffPoly::one();
        for _ in 0..k {
            r = &r * self;
        }
        r
    }

    /// Largest total degree (0 for constants and zero).
    pub fn degree(&self) -> u32 {
        self.terms.keys().map(Monomial::degree).max().unwrap_or(0)
    }

    /// All variables occurring.
    pub fn vars(&self) -> BTreeSet<Var> {
        self.terms
            .keys()
            .flat_map(|m| m.0.iter().map(|(v, _)| *v))
            .collect()
    }

    /// All generators occurring.
    pub fn gens(&self) -> BTreeSet<u32> {
        self.vars().into_iter().map(|v| v.gen).collect()
    }

    /// Highest derivative order of `gen`, if it occurs.
    pub fn max_order(&self, gen: u32) -> Option<u32> {
        self.vars().into_iter().filter(|v| v.gen == gen).map(|v| v.ord).max()
    }

    /// Partial derivative `∂p/∂v`.
    pub fn partial(&self, v: Var) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let e = m.exponent(v);
            if e > 0 {
                out.add_term(c * &Scalar::from_int(e as i64), m.shift(v, -1));
            }
        }
        out
    }

    /// Total derivative `∂`, with `∂u^{(n)} = u^{(n+1)}`.
    pub fn derivative(&self) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            for (v, e) in &m.0 {
                let k = c * &Scalar::from_int(*e as i64);
                out.add_term(k, m.shift(*v, -1).shift(v.prime(), 1));
            }
        }
        out
    }

    pub fn nth_derivative(&self, n: u32) -> DiffPoly {
        let mut p = self.clone();
        for _ in 0..n {
            p = p.derivative();
        }
        p
    }

    /// Variational derivative `δp/δu_gen = Σ_n (−∂)^n ∂p/∂u_gen^{(n)}`.
    pub fn variational(&self, gen: u32) -> DiffPoly {
        let top = match self.max_order(gen) {
            Some(n) => n,
            None => return DiffPoly::zero(),
        };
        // Horner: ∂_0 − ∂(∂_1 − ∂(∂_2 − …)).
        let mut acc = DiffPoly::zero();
        for n in (0..=top).rev() {
            acc = &self.partial(Var::new(gen, n)) - &acc.derivative();
        }
        acc
    }

    /// `∫f = ∫g` in `V/∂V`: decided by the kernel of the variational
    /// derivative (constants plus total derivatives).
    pub fn functional_eq(&self, other: &DiffPoly) -> bool {
        (self - other).is_total_derivative()
    }

    /// Whether `∫p = 0`.
    pub fn is_total_derivative(&self) -> bool {
        self.constant_term().is_zero() && self.gens().into_iter().all(|g| self.variational(g).is_zero())
    }

    /// Conformal weight if homogeneous; constants (and zero) have weight 0.
    pub fn conformal_weight(&self, weights: &[Rational]) -> Option<Rational> {
        let mut it = self.terms.keys().map(|m| m.weight(weights));
        let first = match it.next() {
            Some(w) => w,
            None => return Some(Rational::from_integer(0.into())),
        };
        if it.all(|w| w == first) {
            Some(first)
        } else {
            None
        }
    }

    /// The part of conformal weight `w`.
    pub fn weight_part(&self, weights: &[Rational], w: &Rational) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| &m.weight(weights) == w)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// The part of polynomial degree `d`.
    pub fn degree_part(&self, d: u32) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.degree() == d)
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }

    /// Applies `f` to every coefficient.
    pub fn map_coeffs(&self, mut f: impl FnMut(&Scalar) -> Scalar) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            out.add_term(f(c), m.clone());
        }
        out
    }

    /// Renumbers generators; generators mapped to `None` must not occur.
    pub fn rename(&self, map: impl Fn(u32) -> Option<u32>) -> Option<DiffPoly> {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let mut r = Monomial::one();
            for (v, e) in &m.0 {
                let g = map(v.gen)?;
                for _ in 0..*e {
                    r = r.mul(&Monomial::var(Var::new(g, v.ord)));
                }
            }
            out.add_term(c.clone(), r);
        }
        Some(out)
    }

    /// The differential algebra homomorphism sending `u_g ↦ images[g]`
    /// (generators without an image are kept).
    pub fn substitute(&self, images: &BTreeMap<u32, DiffPoly>) -> DiffPoly {
        let mut cache: BTreeMap<Var, DiffPoly> = BTreeMap::new();
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            let mut t = DiffPoly::constant(c.clone());
            for (v, e) in &m.0 {
                let img = match cache.get(v) {
                    Some(p) => p.clone(),
                    None => {
                        let p = match images.get(&v.gen) {
                            Some(base) => derivative_cached(&mut cache, base, *v),
                            None => DiffPoly::var(*v),
                        };
                        cache.insert(*v, p.clone());
                        p
                    }
                };
                t = &t * &img.pow(*e);
            }
            out += &t;
        }
        out
    }

    /// Sets the given generators and all their derivatives to zero.
    pub fn kill(&self, gens: &BTreeSet<u32>) -> DiffPoly {
        DiffPoly {
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.0.iter().all(|(v, _)| !gens.contains(&v.gen)))
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect(),
        }
    }
}

fn derivative_cached(cache: &mut BTreeMap<Var, DiffPoly>, base: &DiffPoly, v: Var) -> DiffPoly {
    if v.ord == 0 {
        return base.clone();
    }
    let lower = Var::new(v.gen, v.ord - 1);
    let prev = match cache.get(&lower) {
        Some(p) => p.clone(),
        None => {
            let p = derivative_cached(cache, base, lower);
            cache.insert(lower, p.clone());
            p
        }
    };
    prev.derivative()
}

impl core::fmt::Debug for DiffPoly {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", Context::anonymous().text(self))
    }
}

impl AddAssign<&DiffPoly> for DiffPoly {
    fn add_assign(&mut self, rhs: &DiffPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(c.clone(), m.clone());
        }
    }
}

impl SubAssign<&DiffPoly> for DiffPoly {
    fn sub_assign(&mut self, rhs: &DiffPoly) {
        for (m, c) in &rhs.terms {
            self.add_term(-c, m.clone());
        }
    }
}

impl Add for &DiffPoly {
    type Output = DiffPoly;
    fn add(self, rhs: &DiffPoly) -> DiffPoly {
        let mut r = self.clone();
        r += rhs;
        r
    }
}

impl Sub for &DiffPoly {
    type Output = DiffPoly;
    fn sub(self, rhs: &DiffPoly) -> DiffPoly {
        let mut r = self.clone();
        r -= rhs;
        r
    }
}

impl Neg for &DiffPoly {
    type Output = DiffPoly;
    fn neg(self) -> DiffPoly {
        self.scale(&Scalar::from_int(-1))
    }
}

impl Mul for &DiffPoly {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        let mut out = DiffPoly::zero();
        for (m, c) in &self.terms {
            for (n, d) in &rhs.terms {
                out.add_term(c * d, m.mul(n));
            }
        }
        out
    }
}

impl Mul<&DiffPoly> for &Scalar {
    type Output = DiffPoly;
    fn mul(self, rhs: &DiffPoly) -> DiffPoly {
        rhs.scale(self)
    }
}

impl From<Scalar> for DiffPoly {
    fn from(c: Scalar) -> Self {
        DiffPoly::constant(c)
    }
}
