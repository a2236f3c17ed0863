use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::ops::{Add, AddAssign, Neg, Sub, SubAssign};

use super::DiffPoly;
use crate::scalar::Scalar;

/// A polynomial `Σ c_k λ^k` with differential polynomial coefficients.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct LambdaPoly {
    coeffs: Vec<DiffPoly>,
}

impl LambdaPoly {
    pub fn zero() -> Self {
        LambdaPoly::default()
    }

    pub fn from_coeffs(coeffs: Vec<DiffPoly>) -> Self {
        let mut p = LambdaPoly { coeffs };
        p.trim();
        p
    }

    /// The constant polynomial `c λ^0`.
    pub fn constant(c: DiffPoly) -> Self {
        LambdaPoly::from_coeffs(alloc::vec![c])
    }

    /// `c λ^k`.
    pub fn monomial(c: DiffPoly, k: usize) -> Self {
        let mut coeffs = alloc::vec![DiffPoly::zero(); k];
        coeffs.push(c);
        LambdaPoly::from_coeffs(coeffs)
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(DiffPoly::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeffs(&self) -> &[DiffPoly] {
        &self.coeffs
    }

    /// Coefficient of `λ^k`.
    pub fn coeff(&self, k: usize) -> DiffPoly {
        self.coeffs.get(k).cloned().unwrap_or_default()
    }

    /// Degree in λ (`None` for zero).
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Value at `λ = 0`.
    pub fn at_zero(&self) -> DiffPoly {
        self.coeff(0)
    }

    pub fn scale(&self, k: &Scalar) -> LambdaPoly {
        LambdaPoly::from_coeffs(self.coeffs.iter().map(|c| c.scale(k)).collect())
    }

    /// Multiplies every coefficient by `p` (on the left, the algebra being
    /// commutative).
    pub fn mul_poly(&self, p: &DiffPoly) -> LambdaPoly {
        LambdaPoly::from_coeffs(self.coeffs.iter().map(|c| p * c).collect())
    }

    /// Multiplies by `λ^k`.
    pub fn shift(&self, k: usize) -> LambdaPoly {
        if self.is_zero() {
            return LambdaPoly::zero();
        }
        let mut coeffs = alloc::vec![DiffPoly::zero(); k];
        coeffs.extend(self.coeffs.iter().cloned());
        LambdaPoly { coeffs }
    }

    /// `(λ+∂)P`, with ∂ acting on the coefficients.
    pub fn lambda_plus_d(&self) -> LambdaPoly {
        let mut coeffs = alloc::vec![DiffPoly::zero(); self.coeffs.len() + 1];
        for (k, c) in self.coeffs.iter().enumerate() {
            coeffs[k + 1] += c;
            coeffs[k] += &c.derivative();
        }
        LambdaPoly::from_coeffs(coeffs)
    }

    /// `(λ+∂)^n P`.
    pub fn lambda_plus_d_pow(&self, n: u32) -> LambdaPoly {
        let mut p = self.clone();
        for _ in 0..n {
            p = p.lambda_plus_d();
        }
        p
    }

    /// Applies `∂` to every coefficient.
    pub fn derivative(&self) -> LambdaPoly {
        LambdaPoly::from_coeffs(self.coeffs.iter().map(DiffPoly::derivative).collect())
    }

    /// Substitutes `λ ↦ −λ−∂` with ∂ acting from the left on the
    /// coefficients: `Σ (−λ−∂)^k c_k`.
    pub fn skew_substitute(&self) -> LambdaPoly {
        let mut acc = LambdaPoly::zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            let t = LambdaPoly::constant(c.clone()).lambda_plus_d_pow(k as u32);
            if k % 2 == 1 {
                acc -= &t;
            } else {
                acc += &t;
            }
        }
        acc
    }

    /// Applies `f` to every coefficient.
    pub fn map(&self, f: impl FnMut(&DiffPoly) -> DiffPoly) -> LambdaPoly {
        LambdaPoly::from_coeffs(self.coeffs.iter().map(f).collect())
    }
}

impl core::fmt::Debug for LambdaPoly {
    fn fmt(&self, f: &mut core::fmt::Formatter<'_>) -> core::fmt::Result {
        write!(f, "{}", super::Context::anonymous().lambda_text(self, "λ"))
    }
}

impl AddAssign<&LambdaPoly> for LambdaPoly {
    fn add_assign(&mut self, rhs: &LambdaPoly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), DiffPoly::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a += b;
        }
        self.trim();
    }
}

impl SubAssign<&LambdaPoly> for LambdaPoly {
    fn sub_assign(&mut self, rhs: &LambdaPoly) {
        if self.coeffs.len() < rhs.coeffs.len() {
            self.coeffs.resize(rhs.coeffs.len(), DiffPoly::zero());
        }
        for (a, b) in self.coeffs.iter_mut().zip(&rhs.coeffs) {
            *a -= b;
        }
        self.trim();
    }
}

impl Add for &LambdaPoly {
    type Output = LambdaPoly;
    fn add(self, rhs: &LambdaPoly) -> LambdaPoly {
        let mut r = self.clone();
        r += rhs;
        r
    }
}

impl Sub for &LambdaPoly {
    type Output = LambdaPoly;
    fn sub(self, rhs: &LambdaPoly) -> LambdaPoly {
        let mut r = self.clone();
        r -= rhs;
        r
    }
}

impl Neg for &LambdaPoly {
    type Output = LambdaPoly;
    fn neg(self) -> LambdaPoly {
        self.scale(&Scalar::from_int(-1))
    }
}

impl From<DiffPoly> for LambdaPoly {
    fn from(p: DiffPoly) -> Self {
        LambdaPoly::constant(p)
    }
}

/// A polynomial in two commuting variables `λ, μ` with differential
/// polynomial coefficients, used for Jacobi identities.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct BiLambdaPoly {
    terms: BTreeMap<(usize, usize), DiffPoly>,
}

impl BiLambdaPoly {
    pub fn zero() -> Self {
        BiLambdaPoly::default()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c λ^i μ^j`.
    pub fn add_term(&mut self, i: usize, j: usize, c: &DiffPoly) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((i, j)).or_default();
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(i, j));
        }
    }

    /// Adds `Σ_k p_k(λ) μ^k` given the μ-coefficients as λ-polynomials.
    pub fn add_mu_expansion(&mut self, parts: &[LambdaPoly], sign: &Scalar) {
        for (j, p) in parts.iter().enumerate() {
            for (i, c) in p.coeffs().iter().enumerate() {
                self.add_term(i, j, &c.scale(sign));
            }
        }
    }

    /// Adds `Σ_k q_k(μ) λ^k` given the λ-coefficients as μ-polynomials.
    pub fn add_lambda_expansion(&mut self, parts: &[LambdaPoly], sign: &Scalar) {
        for (i, p) in parts.iter().enumerate() {
            for (j, c) in p.coeffs().iter().enumerate() {
                self.add_term(i, j, &c.scale(sign));
            }
        }
    }

    /// Adds `c λ^a (λ+μ)^b`.
    pub fn add_binomial(&mut self, a: usize, b: usize, c: &DiffPoly) {
        let mut binom = Scalar::one();
        for k in 0..=b {
            // λ^{a+k} μ^{b−k} with coefficient C(b,k)
            self.add_term(a + k, b - k, &c.scale(&binom));
            binom = &(&binom * &Scalar::from_int((b - k) as i64)) / &Scalar::from_int((k + 1) as i64);
        }
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(usize, usize), &DiffPoly)> {
        self.terms.iter()
    }
}

impl SubAssign<&BiLambdaPoly> for BiLambdaPoly {
    fn sub_assign(&mut self, rhs: &BiLambdaPoly) {
        for (&(i, j), c) in &rhs.terms {
            self.add_term(i, j, &-c);
        }
    }
}
