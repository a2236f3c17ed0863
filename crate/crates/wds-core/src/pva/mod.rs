//! λ-brackets: generator tables, the Master Formula, the ρ-twisted action
//! defining the W-algebra, and PVA axiom checks.

mod axioms;
mod reduction;

pub use axioms::{check_pva_axioms, random_poly, AxiomReport, Violation};
pub use reduction::{Reduction, Variant};

use alloc::collections::BTreeMap;
use alloc::string::String;
use alloc::vec::Vec;

use crate::diffpoly::{DiffPoly, LambdaPoly};
use crate::lie::LieError;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PvaError {
    #[error("element is not in the W-algebra")]
    NotInW,
    #[error("ρ-action depends on z: {0}")]
    ZDependent(String),
    #[error("invalid choice of s: {0}")]
    InvalidS(String),
    #[error(transparent)]
    Lie(#[from] LieError),
}

/// The two parts of a bracket `{g_λ h}_z = H − z K`.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ZBracket {
    pub h: LambdaPoly,
    pub k: LambdaPoly,
}

impl ZBracket {
    pub fn is_zero(&self) -> bool {
        self.h.is_zero() && self.k.is_zero()
    }

    pub fn part(&self, part: Part) -> &LambdaPoly {
        match part {
            Part::H => &self.h,
            Part::K => &self.k,
        }
    }

    pub fn map(&self, mut f: impl FnMut(&LambdaPoly) -> LambdaPoly) -> ZBracket {
        ZBracket {
            h: f(&self.h),
            k: f(&self.k),
        }
    }
}

/// Selects the `H` or the `K` structure.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Part {
    H,
    K,
}

/// Generator brackets `{u_i λ u_j} = H_ij(λ) − z K_ij(λ)`, sparse.
#[derive(Clone, Debug, Default)]
pub struct BracketTable {
    h: BTreeMap<(u32, u32), LambdaPoly>,
    k: BTreeMap<(u32, u32), LambdaPoly>,
}

impl BracketTable {
    pub fn new() -> Self {
        BracketTable::default()
    }

    pub fn set(&mut self, i: u32, j: u32, value: ZBracket) {
        if value.h.is_zero() {
            self.h.remove(&(i, j));
        } else {
            self.h.insert((i, j), value.h);
        }
        if value.k.is_zero() {
            self.k.remove(&(i, j));
        } else {
            self.k.insert((i, j), value.k);
        }
    }

    pub fn get(&self, i: u32, j: u32) -> ZBracket {
        ZBracket {
            h: self.h.get(&(i, j)).cloned().unwrap_or_default(),
            k: self.k.get(&(i, j)).cloned().unwrap_or_default(),
        }
    }

    /// All generators with a nonzero entry.
    pub fn generators(&self) -> Vec<u32> {
        let mut g: Vec<u32> = self
            .h
            .keys()
            .chain(self.k.keys())
            .flat_map(|&(i, j)| [i, j])
            .collect();
        g.sort_unstable();
        g.dedup();
        g
    }

    fn entries(&self, part: Part) -> &BTreeMap<(u32, u32), LambdaPoly> {
        match part {
            Part::H => &self.h,
            Part::K => &self.k,
        }
    }

    /// Both parts of `{g_λ h}` by the Master Formula.
    pub fn bracket(&self, g: &DiffPoly, h: &DiffPoly) -> ZBracket {
        ZBracket {
            h: self.master(Part::H, g, h),
            k: self.master(Part::K, g, h),
        }
    }

    /// The Master Formula
    /// `{g_λ h} = Σ ∂h/∂u_j^{(n)} (λ+∂)^n X_ij(λ+∂) (−λ−∂)^m ∂g/∂u_i^{(m)}`
    /// with `X_ij(λ) = {u_i λ u_j}`.
    pub fn master(&self, part: Part, g: &DiffPoly, h: &DiffPoly) -> LambdaPoly {
        let entries = self.entries(part);
        if entries.is_empty() || g.as_constant().is_some() || h.as_constant().is_some() {
            return LambdaPoly::zero();
        }
        let mut s: BTreeMap<u32, LambdaPoly> = BTreeMap::new();
        for v in g.vars() {
            let t = LambdaPoly::constant(g.partial(v)).lambda_plus_d_pow(v.ord);
            let e = s.entry(v.gen).or_default();
            if v.ord % 2 == 1 {
                *e -= &t;
            } else {
                *e += &t;
            }
        }
        let hgens = h.gens();
        let mut t: BTreeMap<u32, LambdaPoly> = BTreeMap::new();
        for (i, si) in s {
            if si.is_zero() {
                continue;
            }
            let mut powers = alloc::vec![si];
            for (&(_, j), x) in entries.range((i, 0)..=(i, u32::MAX)) {
                if !hgens.contains(&j) {
                    continue;
                }
                let tj = t.entry(j).or_default();
                for (k, b) in x.coeffs().iter().enumerate() {
                    if b.is_zero() {
                        continue;
                    }
                    while powers.len() <= k {
                        let next = powers.last().unwrap().lambda_plus_d();
                        powers.push(next);
                    }
                    *tj += &powers[k].mul_poly(b);
                }
            }
        }
        let mut out = LambdaPoly::zero();
        let hvars = h.vars();
        for (j, tj) in t {
            if tj.is_zero() {
                continue;
            }
            let mut powers = alloc::vec![tj];
            for v in hvars.iter().filter(|v| v.gen == j) {
                while powers.len() <= v.ord as usize {
                    let next = powers.last().unwrap().lambda_plus_d();
                    powers.push(next);
                }
                out += &powers[v.ord as usize].mul_poly(&h.partial(*v));
            }
        }
        out
    }

    /// Applies a bracket `P(λ) = {a_λ b}` as the operator
    /// `{a_{λ+∂} b}_→ c = Σ p_k (λ+∂)^k c`.
    pub fn apply_shifted(p: &LambdaPoly, c: &DiffPoly) -> LambdaPoly {
        let mut out = LambdaPoly::zero();
        let mut power = LambdaPoly::constant(c.clone());
        for (k, pk) in p.coeffs().iter().enumerate() {
            if k > 0 {
                power = power.lambda_plus_d();
            }
            if !pk.is_zero() {
                out += &power.mul_poly(pk);
            }
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::Scalar;

    fn one_generator_table() -> BracketTable {
        let mut t = BracketTable::new();
        t.set(
            0,
            0,
            ZBracket {
                h: LambdaPoly::monomial(DiffPoly::one(), 1),
                k: LambdaPoly::zero(),
            },
        );
        t
    }

    #[test]
    fn leibniz_on_one_generator() {
        let t = one_generator_table();
        let u = DiffPoly::gen(0);
        let b = t.master(Part::H, &u, &u.pow(2));
        assert_eq!(b, LambdaPoly::monomial(u.scale(&Scalar::from_int(2)), 1));
    }

    #[test]
    fn sesquilinearity() {
        let t = one_generator_table();
        let u = DiffPoly::gen(0);
        let g = &u.pow(2) + &u.derivative();
        let h = &u * &u.nth_derivative(2);
        let lhs = t.master(Part::H, &g.derivative(), &h);
        let rhs = -&t.master(Part::H, &g, &h).shift(1);
        assert_eq!(lhs, rhs);
        let lhs = t.master(Part::H, &g, &h.derivative());
        let rhs = t.master(Part::H, &g, &h).lambda_plus_d();
        assert_eq!(lhs, rhs);
    }
}
