//! Exact scalars: elements of ℚ(p₁,…,p_k), rational functions in named
//! parameters with rational coefficients.
//!
//! A scalar without parameters is stored as a plain rational. Otherwise the
//! numerator and denominator are coprime polynomials over the sorted list of
//! parameter names that actually occur, and the denominator is monic, so equal
//! values have identical representations.

mod mpoly;

use alloc::boxed::Box;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::fmt;
use core::ops::{Add, AddAssign, Div, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use mpoly::MPoly;

pub type Rational = num_rational::BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Clone, PartialEq, Eq)]
pub struct Scalar(Repr);

#[derive(Clone, PartialEq, Eq)]
enum Repr {
    Rat(Rational),
    Fun(Box<RatFun>),
}

#[derive(Clone, PartialEq, Eq)]
struct RatFun {
    vars: Vec<String>,
    num: MPoly,
    den: MPoly,
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar(Repr::Rat(Rational::zero()))
    }

    pub fn one() -> Self {
        Scalar(Repr::Rat(Rational::one()))
    }

    pub fn from_int(n: i64) -> Self {
        Scalar(Repr::Rat(Rational::from_integer(n.into())))
    }

    pub fn from_ratio(n: i64, d: i64) -> Self {
        Scalar(Repr::Rat(rat(n, d)))
    }

    pub fn from_rational(r: Rational) -> Self {
        Scalar(Repr::Rat(r))
    }

    /// The parameter called `name`.
    pub fn param(name: &str) -> Self {
        Scalar(Repr::Fun(Box::new(RatFun {
            vars: alloc::vec![name.to_string()],
            num: MPoly::var(1, 0),
            den: MPoly::one(1),
        })))
    }

    pub fn is_zero(&self) -> bool {
        matches!(&self.0, Repr::Rat(r) if r.is_zero())
    }

    pub fn is_one(&self) -> bool {
        matches!(&self.0, Repr::Rat(r) if r.is_one())
    }

    /// The value as a rational, if it involves no parameters.
    pub fn as_rational(&self) -> Option<&Rational> {
        match &self.0 {
            Repr::Rat(r) => Some(r),
            Repr::Fun(_) => None,
        }
    }

    /// Names of the parameters occurring in the value.
    pub fn params(&self) -> &[String] {
        match &self.0 {
            Repr::Rat(_) => &[],
            Repr::Fun(f) => &f.vars,
        }
    }

    pub fn inv(&self) -> Option<Scalar> {
        match &self.0 {
            Repr::Rat(r) => {
                if r.is_zero() {
                    None
                } else {
                    Some(Scalar(Repr::Rat(r.recip())))
                }
            }
            Repr::Fun(f) => Some(canonical(f.vars.clone(), f.den.clone(), f.num.clone())),
        }
    }

    /// Evaluates at a point given as (parameter name, value) pairs; `None` if
    /// a parameter is unassigned or the denominator vanishes.
    pub fn eval(&self, point: &[(&str, Rational)]) -> Option<Rational> {
        match &self.0 {
            Repr::Rat(r) => Some(r.clone()),
            Repr::Fun(f) => {
                let vals: Option<Vec<Rational>> = f
                    .vars
                    .iter()
                    .map(|v| point.iter().find(|(n, _)| *n == v).map(|(_, x)| x.clone()))
                    .collect();
                let vals = vals?;
                let d = f.den.eval(&vals);
                if d.is_zero() {
                    None
                } else {
                    Some(f.num.eval(&vals) / d)
                }
            }
        }
    }

    /// True for plain rationals that are negative; used by renderers to
    /// print signs.
    pub fn is_negative_rational(&self) -> bool {
        matches!(&self.0, Repr::Rat(r) if r.is_negative())
    }

    /// True if the value prints as a single factor (no sum, no fraction bar
    /// around a sum), so it can be juxtaposed with a monomial.
    pub fn is_atomic(&self) -> bool {
        match &self.0 {
            Repr::Rat(_) => true,
            Repr::Fun(f) => f.den.is_constant() && f.num.terms().count() == 1,
        }
    }

    pub fn to_latex(&self) -> String {
        match &self.0 {
            Repr::Rat(r) => rational_latex(r),
            Repr::Fun(f) => {
                let n = poly_string(&f.num, &f.vars, true);
                if f.den.is_constant() {
                    n
                } else {
                    format!("\\frac{{{}}}{{{}}}", n, poly_string(&f.den, &f.vars, true))
                }
            }
        }
    }

    fn parts(&self, vars: &[String]) -> (MPoly, MPoly) {
        match &self.0 {
            Repr::Rat(r) => (MPoly::constant(vars.len(), r.clone()), MPoly::one(vars.len())),
            Repr::Fun(f) => {
                let map: Vec<usize> = f
                    .vars
                    .iter()
                    .map(|v| vars.iter().position(|w| w == v).unwrap())
                    .collect();
                (f.num.remap(&map, vars.len()), f.den.remap(&map, vars.len()))
            }
        }
    }

    fn binary(&self, other: &Scalar, op: BinOp) -> Scalar {
        if let (Repr::Rat(a), Repr::Rat(b)) = (&self.0, &other.0) {
            return Scalar(Repr::Rat(match op {
                BinOp::Add => a + b,
                BinOp::Sub => a - b,
                BinOp::Mul => a * b,
                BinOp::Div => {
                    assert!(!b.is_zero(), "division by zero scalar");
                    a / b
                }
            }));
        }
        let vars = merge_vars(self.params(), other.params());
        let (n1, d1) = self.parts(&vars);
        let (n2, d2) = other.parts(&vars);
        let (num, den) = match op {
            BinOp::Add | BinOp::Sub => {
                let (a, b) = if d1 == d2 {
                    (n1, n2)
                } else {
                    (n1.mul(&d2), n2.mul(&d1))
                };
                let num = if matches!(op, BinOp::Add) { a.add(&b) } else { a.sub(&b) };
                let den = if d1 == d2 { d1 } else { d1.mul(&d2) };
                (num, den)
            }
            BinOp::Mul => (n1.mul(&n2), d1.mul(&d2)),
            BinOp::Div => {
                assert!(!n2.is_zero(), "division by zero scalar");
                (n1.mul(&d2), d1.mul(&n2))
            }
        };
        canonical(vars, num, den)
    }
}

#[derive(Clone, Copy)]
enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

fn merge_vars(a: &[String], b: &[String]) -> Vec<String> {
    let mut v: Vec<String> = a.iter().chain(b.iter()).cloned().collect();
    v.sort();
    v.dedup();
    v
}

fn canonical(vars: Vec<String>, num: MPoly, den: MPoly) -> Scalar {
    if num.is_zero() {
        return Scalar::zero();
    }
    let g = MPoly::gcd(&num, &den);
    let (mut num, mut den) = if g.is_constant() {
        (num, den)
    } else {
        (num.div_exact(&g), den.div_exact(&g))
    };
    let lc = den.leading().unwrap().1.clone();
    if !lc.is_one() {
        let inv = lc.recip();
        num = num.scale(&inv);
        den = den.scale(&inv);
    }
    let used: Vec<usize> = (0..vars.len())
        .filter(|&k| num.uses_var(k) || den.uses_var(k))
        .collect();
    if used.is_empty() {
        let n = num.constant_value().unwrap();
        let d = den.constant_value().unwrap();
        return Scalar(Repr::Rat(n / d));
    }
    if used.len() < vars.len() {
        let vars: Vec<String> = used.iter().map(|&k| vars[k].clone()).collect();
        num = num.restrict(&used);
        den = den.restrict(&used);
        return Scalar(Repr::Fun(Box::new(RatFun { vars, num, den })));
    }
    Scalar(Repr::Fun(Box::new(RatFun { vars, num, den })))
}

fn rational_latex(r: &Rational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        let sign = if r.is_negative() { "-" } else { "" };
        format!("{}\\frac{{{}}}{{{}}}", sign, r.numer().abs(), r.denom())
    }
}

fn poly_string(p: &MPoly, vars: &[String], latex: bool) -> String {
    let mut out = String::new();
    for (i, (e, c)) in p.terms().rev().enumerate() {
        let is_const = e.iter().all(|&x| x == 0);
        let neg = c.is_negative();
        let a = c.abs();
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        let mut factors: Vec<String> = Vec::new();
        if is_const || !a.is_one() {
            factors.push(if latex { rational_latex(&a) } else { a.to_string() });
        }
        for (k, &x) in e.iter().enumerate() {
            if x == 0 {
                continue;
            }
            let name = if latex {
                latex_param(&vars[k])
            } else {
                vars[k].clone()
            };
            factors.push(match (x, latex) {
                (1, _) => name,
                (_, false) => format!("{}^{}", name, x),
                (_, true) => format!("{}^{{{}}}", name, x),
            });
        }
        out.push_str(&factors.join(if latex { " " } else { "*" }));
    }
    out
}

fn latex_param(name: &str) -> String {
    let split = name.find(|c: char| c.is_ascii_digit());
    match split {
        Some(i) if i > 0 => format!("{}_{{{}}}", &name[..i], &name[i..]),
        _ => name.to_string(),
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Rat(r) => write!(f, "{}", r),
            Repr::Fun(rf) => {
                let n = poly_string(&rf.num, &rf.vars, false);
                if rf.den.is_constant() {
                    if rf.num.terms().count() > 1 {
                        write!(f, "({})", n)
                    } else {
                        write!(f, "{}", n)
                    }
                } else {
                    let d = poly_string(&rf.den, &rf.vars, false);
                    let single_integer = rf.num.terms().count() == 1
                        && rf.num.terms().next().is_some_and(|(_, c)| c.is_integer());
                    let n = if single_integer { n } else { format!("({})", n) };
                    if rf.den.terms().count() > 1 {
                        write!(f, "{}/({})", n, d)
                    } else {
                        write!(f, "{}/{}", n, d)
                    }
                }
            }
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl From<i64> for Scalar {
    fn from(n: i64) -> Self {
        Scalar::from_int(n)
    }
}

impl From<Rational> for Scalar {
    fn from(r: Rational) -> Self {
        Scalar::from_rational(r)
    }
}

macro_rules! scalar_binop {
    ($tr:ident, $m:ident, $op:expr) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                self.binary(rhs, $op)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.binary(&rhs, $op)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $m(self, rhs: &Scalar) -> Scalar {
                self.binary(rhs, $op)
            }
        }
        impl $tr<Scalar> for &Scalar {
            type Output = Scalar;
            fn $m(self, rhs: Scalar) -> Scalar {
                self.binary(&rhs, $op)
            }
        }
    };
}

scalar_binop!(Add, add, BinOp::Add);
scalar_binop!(Sub, sub, BinOp::Sub);
scalar_binop!(Mul, mul, BinOp::Mul);
scalar_binop!(Div, div, BinOp::Div);

impl AddAssign<&Scalar> for Scalar {
    fn add_assign(&mut self, rhs: &Scalar) {
        if let (Repr::Rat(a), Repr::Rat(b)) = (&mut self.0, &rhs.0) {
            *a += b;
            return;
        }
        *self = self.binary(rhs, BinOp::Add);
    }
}

impl SubAssign<&Scalar> for Scalar {
    fn sub_assign(&mut self, rhs: &Scalar) {
        if let (Repr::Rat(a), Repr::Rat(b)) = (&mut self.0, &rhs.0) {
            *a -= b;
            return;
        }
        *self = self.binary(rhs, BinOp::Sub);
    }
}

impl MulAssign<&Scalar> for Scalar {
    fn mul_assign(&mut self, rhs: &Scalar) {
        if let (Repr::Rat(a), Repr::Rat(b)) = (&mut self.0, &rhs.0) {
            *a *= b;
            return;
        }
        *self = self.binary(rhs, BinOp::Mul);
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        match self.0 {
            Repr::Rat(r) => Scalar(Repr::Rat(-r)),
            Repr::Fun(mut f) => {
                f.num = f.num.neg();
                Scalar(Repr::Fun(f))
            }
        }
    }
}

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        -(self.clone())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_fast_path() {
        let a = Scalar::from_ratio(1, 2);
        let b = Scalar::from_ratio(1, 3);
        assert_eq!(&a + &b, Scalar::from_ratio(5, 6));
        assert_eq!((&a * &b).inv().unwrap(), Scalar::from_int(6));
        assert!(Scalar::zero().inv().is_none());
    }

    #[test]
    fn cancellation_collapses_to_rational() {
        let s1 = Scalar::param("s1");
        let s2 = Scalar::param("s2");
        let d = &s1 - &s2;
        let q = &(&d * &d) / &d;
        assert_eq!(q, d);
        assert_eq!(&d / &d, Scalar::one());
        assert_eq!(&s1 - &s1, Scalar::zero());
        assert!(( &s1 - &s1).params().is_empty());
    }

    #[test]
    fn canonical_denominator_is_monic() {
        let s1 = Scalar::param("s1");
        let x = Scalar::from_int(2) / (Scalar::from_int(3) * &s1 + Scalar::from_int(6));
        assert_eq!(x.to_string(), "(2/3)/(s1 + 2)");
        let y = Scalar::from_ratio(2, 3) / (&s1 + &Scalar::from_int(2));
        assert_eq!(x, y);
    }

    #[test]
    fn parameter_lists_merge() {
        let c = Scalar::param("c");
        let s = Scalar::param("s1");
        let x = &(&c + &s) - &s;
        assert_eq!(x, c);
        assert_eq!(x.params(), &["c".to_string()]);
    }

    #[test]
    fn evaluation() {
        let s1 = Scalar::param("s1");
        let s2 = Scalar::param("s2");
        let x = (&s1 + &s2) / (&s1 - &s2);
        assert_eq!(x.eval(&[("s1", rat(3, 1)), ("s2", rat(1, 1))]), Some(rat(2, 1)));
        assert_eq!(x.eval(&[("s1", rat(1, 1)), ("s2", rat(1, 1))]), None);
    }
}
