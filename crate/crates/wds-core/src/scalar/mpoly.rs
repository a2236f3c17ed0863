//! Sparse multivariate polynomials over ℚ with a fixed number of variables.
//!
//! Exponent vectors are compared lexicographically with the first variable
//! most significant, so the last entry of the term map is the leading term.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;
use num_traits::{One, Zero};

use super::Rational;

#[derive(Clone, Debug, PartialEq, Eq)]
pub(crate) struct MPoly {
    nvars: usize,
    terms: BTreeMap<Vec<u32>, Rational>,
}

impl MPoly {
    pub fn zero(nvars: usize) -> Self {
        MPoly {
            nvars,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(nvars: usize, c: Rational) -> Self {
        let mut p = MPoly::zero(nvars);
        if !c.is_zero() {
            p.terms.insert(vec![0; nvars], c);
        }
        p
    }

    pub fn one(nvars: usize) -> Self {
        MPoly::constant(nvars, Rational::one())
    }

    pub fn var(nvars: usize, i: usize) -> Self {
        let mut e = vec![0; nvars];
        e[i] = 1;
        let mut p = MPoly::zero(nvars);
        p.terms.insert(e, Rational::one());
        p
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Vec<u32>, &Rational)> {
        self.terms.iter()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn constant_value(&self) -> Option<Rational> {
        match self.terms.len() {
            0 => Some(Rational::zero()),
            1 => {
                let (e, c) = self.terms.iter().next().unwrap();
                if e.iter().all(|&x| x == 0) {
                    Some(c.clone())
                } else {
                    None
                }
            }
            _ => None,
        }
    }

    pub fn is_constant(&self) -> bool {
        self.constant_value().is_some()
    }

    pub fn leading(&self) -> Option<(&Vec<u32>, &Rational)> {
        self.terms.iter().next_back()
    }

    fn add_term(&mut self, e: Vec<u32>, c: Rational) {
        if c.is_zero() {
            return;
        }
        use alloc::collections::btree_map::Entry;
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn add(&self, other: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), c.clone());
        }
        r
    }

    pub fn sub(&self, other: &MPoly) -> MPoly {
        let mut r = self.clone();
        for (e, c) in &other.terms {
            r.add_term(e.clone(), -c.clone());
        }
        r
    }

    pub fn neg(&self) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c.clone())).collect(),
        }
    }

    pub fn scale(&self, k: &Rational) -> MPoly {
        if k.is_zero() {
            return MPoly::zero(self.nvars);
        }
        MPoly {
            nvars: self.nvars,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), c * k)).collect(),
        }
    }

    pub fn mul(&self, other: &MPoly) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e: Vec<u32> = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                r.add_term(e, c1 * c2);
            }
        }
        r
    }

    fn mul_term(&self, e: &[u32], c: &Rational) -> MPoly {
        MPoly {
            nvars: self.nvars,
            terms: self
                .terms
                .iter()
                .map(|(e1, c1)| (e1.iter().zip(e).map(|(a, b)| a + b).collect(), c1 * c))
                .collect(),
        }
    }

    /// Divides by the leading coefficient.
    pub fn monic(&self) -> MPoly {
        match self.leading() {
            None => self.clone(),
            Some((_, c)) => {
                let inv = c.recip();
                self.scale(&inv)
            }
        }
    }

    pub fn deg_in(&self, k: usize) -> u32 {
        self.terms.keys().map(|e| e[k]).max().unwrap_or(0)
    }

    pub fn uses_var(&self, k: usize) -> bool {
        self.terms.keys().any(|e| e[k] > 0)
    }

    /// Coefficient of `x_k^d`, as a polynomial not involving `x_k`.
    fn coeff_in(&self, k: usize, d: u32) -> MPoly {
        let mut r = MPoly::zero(self.nvars);
        for (e, c) in &self.terms {
            if e[k] == d {
                let mut e2 = e.clone();
                e2[k] = 0;
                r.terms.insert(e2, c.clone());
            }
        }
        r
    }

    /// Exact quotient; panics if `d` does not divide `self`.
    pub fn div_exact(&self, d: &MPoly) -> MPoly {
        let (ld, lc) = d.leading().expect("division by zero polynomial");
        let (ld, lc) = (ld.clone(), lc.clone());
        let mut rem = self.clone();
        let mut q = MPoly::zero(self.nvars);
        while let Some((le, lr)) = rem.leading() {
            let e: Vec<u32> = le
                .iter()
                .zip(&ld)
                .map(|(a, b)| a.checked_sub(*b))
                .collect::<Option<_>>()
                .expect("inexact polynomial division");
            let c = lr / &lc;
            rem = rem.sub(&d.mul_term(&e, &c));
            q.add_term(e, c);
        }
        q
    }

    /// Monic greatest common divisor (zero only if both inputs are zero).
    pub fn gcd(a: &MPoly, b: &MPoly) -> MPoly {
        if a.is_zero() {
            return b.monic();
        }
        if b.is_zero() {
            return a.monic();
        }
        gcd_from(a, b, 0).monic()
    }

    /// Re-expresses the polynomial in a larger variable list; `map[i]` is the
    /// new index of old variable `i`.
    pub fn remap(&self, map: &[usize], nvars: usize) -> MPoly {
        let mut r = MPoly::zero(nvars);
        for (e, c) in &self.terms {
            let mut e2 = vec![0; nvars];
            for (i, &x) in e.iter().enumerate() {
                e2[map[i]] = x;
            }
            r.terms.insert(e2, c.clone());
        }
        r
    }

    /// Drops the variables not in `keep` (which must be unused).
    pub fn restrict(&self, keep: &[usize]) -> MPoly {
        let mut r = MPoly::zero(keep.len());
        for (e, c) in &self.terms {
            r.terms
                .insert(keep.iter().map(|&i| e[i]).collect(), c.clone());
        }
        r
    }

    pub fn eval(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (e, c) in &self.terms {
            let mut t = c.clone();
            for (x, &k) in point.iter().zip(e) {
                for _ in 0..k {
                    t *= x;
                }
            }
            acc += t;
        }
        acc
    }
}

/// Gcd of nonzero `a`, `b` involving only variables `>= k`, up to a unit.
fn gcd_from(a: &MPoly, b: &MPoly, k: usize) -> MPoly {
    let n = a.nvars;
    if k >= n || a.is_constant() || b.is_constant() {
        return MPoly::one(n);
    }
    let (da, db) = (a.deg_in(k), b.deg_in(k));
    if da == 0 && db == 0 {
        return gcd_from(a, b, k + 1);
    }
    let ca = content(a, k);
    let cb = content(b, k);
    let c = gcd_from(&ca, &cb, k + 1);
    let mut p = a.div_exact(&ca);
    let mut q = b.div_exact(&cb);
    if p.deg_in(k) < q.deg_in(k) {
        core::mem::swap(&mut p, &mut q);
    }
    while !q.is_zero() {
        if q.deg_in(k) == 0 {
            p = MPoly::one(n);
            break;
        }
        let r = prem(&p, &q, k);
        p = q;
        q = if r.is_zero() { r } else { primitive_part(&r, k) };
    }
    c.mul(&primitive_part(&p, k))
}

/// Gcd of the coefficients of `p` viewed as a polynomial in `x_k`.
fn content(p: &MPoly, k: usize) -> MPoly {
    let d = p.deg_in(k);
    let mut g: Option<MPoly> = None;
    for i in 0..=d {
        let c = p.coeff_in(k, i);
        if c.is_zero() {
            continue;
        }
        g = Some(match g {
            None => c.monic(),
            Some(g) => gcd_from(&g, &c, k + 1).monic(),
        });
        if g.as_ref().unwrap().is_constant() {
            break;
        }
    }
    g.unwrap_or_else(|| MPoly::one(p.nvars))
}

fn primitive_part(p: &MPoly, k: usize) -> MPoly {
    p.div_exact(&content(p, k))
}

/// Pseudo-remainder of `p` by `q` with respect to `x_k`.
fn prem(p: &MPoly, q: &MPoly, k: usize) -> MPoly {
    let dq = q.deg_in(k);
    let lq = q.coeff_in(k, dq);
    let mut r = p.clone();
    while !r.is_zero() && r.deg_in(k) >= dq {
        let dr = r.deg_in(k);
        let lr = r.coeff_in(k, dr);
        let mut shift = vec![0; p.nvars];
        shift[k] = dr - dq;
        let t = lr.mul(&q.mul_term(&shift, &Rational::one()));
        r = lq.mul(&r).sub(&t);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64) -> Rational {
        Rational::from_integer(n.into())
    }

    #[test]
    fn gcd_of_products() {
        let x = MPoly::var(2, 0);
        let y = MPoly::var(2, 1);
        let one = MPoly::one(2);
        let a = x.add(&y); // x + y
        let b = x.sub(&y).add(&one); // x - y + 1
        let c = x.mul(&y).add(&MPoly::constant(2, q(3))); // xy + 3
        let p1 = a.mul(&b).mul(&b);
        let p2 = b.mul(&c);
        let g = MPoly::gcd(&p1, &p2);
        assert_eq!(g, b.monic());
        assert_eq!(MPoly::gcd(&a, &c), one);
    }

    #[test]
    fn exact_division_round_trip() {
        let x = MPoly::var(3, 0);
        let z = MPoly::var(3, 2);
        let a = x.mul(&x).sub(&z.scale(&q(2)));
        let b = x.add(&z).add(&MPoly::one(3));
        assert_eq!(a.mul(&b).div_exact(&b), a);
    }
}
