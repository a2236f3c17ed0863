use alloc::collections::BTreeMap;

use super::{HDecomposition, HierarchyError, LoopElement, LoopGrading};
use crate::diffpoly::DiffPoly;
use crate::lie::LieAlgebra;
use crate::pva::Reduction;
use crate::scalar::Scalar;

/// `q = Σ q^i ⊗ q_i` over a basis `q_i` of the reduced generators with
/// `q^i` the dual basis for `(·|·)`; sits at `z⁰`.
pub fn build_q(red: &Reduction) -> LoopElement {
    let st = red.setup();
    let mut q = LoopElement::zero();
    for &i in red.q_vars() {
        q += &LoopElement::tensor(st.dual(i), 0, &DiffPoly::gen(i as u32));
    }
    q
}

/// `e^{ad u}(∂ + y) − ∂`, keeping only degrees `≤ max`. Every component of
/// `u` must have positive degree, so the series terminates.
pub(crate) fn conjugate(alg: &LieAlgebra, grading: &LoopGrading, u: &LoopElement, y: &LoopElement, max: i32) -> LoopElement {
    let y = y.truncate(grading, max);
    let mut out = y.clone();
    // W_1 = [u, y] − ∂u, W_n = ad u (W_{n−1}); result y + Σ W_n / n!.
    let mut w = &u.bracket(&y, alg) - &u.derivative();
    w = w.truncate(grading, max);
    let mut n: i64 = 1;
    let mut fact = Scalar::one();
    while !w.is_zero() {
        fact = &fact * &Scalar::from_int(n);
        out += &w.scale(&fact.inv().unwrap());
        n += 1;
        w = u.bracket(&w, alg).truncate(grading, max);
    }
    out
}

/// The same series in one pass with the complete `U`. Since `U` has positive
/// degree, `ad U` only raises degrees, so dropping terms above `max` after
/// each step changes nothing below `max`.
fn conjugate_one_pass(alg: &LieAlgebra, grading: &LoopGrading, u: &LoopElement, y: &LoopElement, max: i32) -> LoopElement {
    debug_assert!(u.min_degree(grading).is_none_or(|d| d > 0));
    let mut out = y.truncate(grading, max);
    let mut w = (&u.bracket(y, alg) - &u.derivative()).truncate(grading, max);
    let mut n: i64 = 1;
    let mut fact = Scalar::one();
    while !w.is_zero() {
        fact = &fact * &Scalar::from_int(n);
        out += &w.scale(&fact.inv().unwrap());
        n += 1;
        w = u.bracket(&w, alg).truncate(grading, max);
    }
    out
}

/// Solution of `e^{ad U}(∂ + Λ⊗1 + q) = ∂ + Λ⊗1 + h` with `U ∈ 𝔥⊥_{>0}`,
/// `h ∈ 𝔥_{>−1}`, up to a maximal (doubled) degree of `h`.
#[derive(Clone, Debug)]
pub struct Dressing {
    dec: HDecomposition,
    q: LoopElement,
    max_degree: i32,
    u: BTreeMap<i32, LoopElement>,
    h: BTreeMap<i32, LoopElement>,
}

impl Dressing {
    /// Degree by degree: the degree-`j` part `R_j` of `e^{ad U_{≤j+1}}(∂+Λ+q)`
    /// splits as `h_j + [Λ, U_{j+2}]` (doubled degrees).
    pub fn solve(dec: HDecomposition, q: LoopElement, max_degree: i32) -> Result<Self, HierarchyError> {
        if max_degree < 0 {
            return Err(HierarchyError::WindowTooSmall { needed: 0 });
        }
        let grading = dec.grading().clone();
        if q.min_degree(&grading).is_some_and(|d| d < -1) {
            return Err(HierarchyError::NotHomogeneous { degree: -2 });
        }
        let y = dec.lambda() + &q;
        let mut d = Dressing {
            dec,
            q,
            max_degree,
            u: BTreeMap::new(),
            h: BTreeMap::new(),
        };
        let mut u_sum = LoopElement::zero();
        for j in -1..=max_degree {
            let r = conjugate(d.dec.alg(), &grading, &u_sum, &y, j).part(&grading, j);
            let (hj, uj) = d.dec.split(&r, j)?;
            if !hj.is_zero() {
                d.h.insert(j, hj);
            }
            if !uj.is_zero() {
                u_sum += &uj;
                d.u.insert(j + 2, uj);
            }
        }
        Ok(d)
    }

    pub fn decomposition(&self) -> &HDecomposition {
        &self.dec
    }

    pub fn grading(&self) -> &LoopGrading {
        self.dec.grading()
    }

    pub fn q(&self) -> &LoopElement {
        &self.q
    }

    /// Largest doubled degree of `h` that was solved for.
    pub fn max_degree(&self) -> i32 {
        self.max_degree
    }

    /// `h_j` for doubled degree `j`.
    pub fn h(&self, j: i32) -> LoopElement {
        self.h.get(&j).cloned().unwrap_or_default()
    }

    /// `U_j` for doubled degree `j`.
    pub fn u(&self, j: i32) -> LoopElement {
        self.u.get(&j).cloned().unwrap_or_default()
    }

    pub fn h_total(&self) -> LoopElement {
        let mut t = LoopElement::zero();
        for p in self.h.values() {
            t += p;
        }
        t
    }

    pub fn u_total(&self) -> LoopElement {
        let mut t = LoopElement::zero();
        for p in self.u.values() {
            t += p;
        }
        t
    }

    /// Re-expands `e^{ad U}(∂ + Λ + q)` in one pass with the complete `U`
    /// and returns its difference from `∂ + Λ + Σ h_j` up to the solved
    /// degree; zero means the incremental solve is exact.
    pub fn residual(&self) -> LoopElement {
        let grading = self.dec.grading();
        let y = self.dec.lambda() + &self.q;
        let full = conjugate_one_pass(self.dec.alg(), grading, &self.u_total(), &y, self.max_degree);
        &(&full - self.dec.lambda()) - &self.h_total()
    }

    /// Whether every `h_j` lies in `𝔥_j ⊗ V` and every `U_j` in `𝔥⊥_j ⊗ V`.
    pub fn homogeneity_holds(&self) -> bool {
        let grading = self.dec.grading();
        let member = |x: &LoopElement, j: i32, perp: bool| {
            if x.degrees(grading).iter().any(|&d| d != j) {
                return false;
            }
            let (h, u) = match self.dec.split(x, j) {
                Ok(v) => v,
                Err(_) => return false,
            };
            if perp {
                h.is_zero()
            } else {
                u.is_zero()
            }
        };
        self.h.iter().all(|(&j, x)| member(x, j, false))
            && self.u.iter().all(|(&j, x)| member(x, j, true))
    }
}
