//! Closed forms of the first projected dressing components `πU_j`, `πh_j`
//! for the minimal (`s = e`), short (`s = e`) and isotropic (`s ∈ 𝔩`
//! embeddable) cases, in doubled degrees.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{Hierarchy, LoopElement};
use crate::diffpoly::DiffPoly;
use crate::lie::{GradedSetup, LieError, NilpotentKind, Pairing, Vector};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// A family of closed-form checks.
pub type ClosedForms = fn(&Hierarchy) -> Result<Vec<FormulaCheck>, LieError>;

/// One computed dressing component against its closed form.
#[derive(Clone, Debug)]
pub struct FormulaCheck {
    pub label: String,
    pub computed: LoopElement,
    pub expected: LoopElement,
}

impl FormulaCheck {
    pub fn passed(&self) -> bool {
        self.computed == self.expected
    }
}

struct Ctx<'a> {
    hy: &'a Hierarchy,
    st: &'a GradedSetup,
    xx: Scalar,
}

impl<'a> Ctx<'a> {
    fn new(hy: &'a Hierarchy) -> Self {
        let st = hy.w().reduction().setup();
        Ctx { hy, st, xx: st.xx() }
    }
    fn p(&self, v: &Vector) -> DiffPoly {
        self.hy.w().reduction().poly(v)
    }
    fn br(&self, a: &Vector, b: &Vector) -> Vector {
        self.st.bracket(a, b)
    }
    fn f(&self) -> &Vector {
        self.st.f()
    }
    /// `1 / (k (x|x)^m)`.
    fn inv_xx(&self, k: i64, m: u32) -> Scalar {
        let mut d = Scalar::from_int(k);
        for _ in 0..m {
            d = &d * &self.xx;
        }
        d.inv().expect("(x|x) ≠ 0")
    }
    fn t(&self, v: &Vector, k: i32, p: &DiffPoly) -> LoopElement {
        LoopElement::tensor(v, k, p)
    }
    /// `(v + z w) z^k`.
    fn pair(&self, v: &Vector, w: &Vector, k: i32) -> LoopElement {
        &LoopElement::constant(v, k) + &LoopElement::constant(w, k + 1)
    }
    fn check(&self, out: &mut Vec<FormulaCheck>, label: &str, j: i32, h: bool, expected: LoopElement) {
        let d = self.hy.dressing();
        let computed = if h { d.h(j) } else { d.u(j) };
        out.push(FormulaCheck {
            label: format!("{} ({}_{})", label, if h { "h" } else { "U" }, half(j)),
            computed,
            expected,
        });
    }
    fn basis(&self, i2: i32) -> Vec<Vector> {
        self.st.piece(i2).map(|i| self.st.basis(i)).collect()
    }
    fn form_duals(&self, a: &[Vector]) -> Result<Vec<Vector>, LieError> {
        Ok(self.st.dual_basis(a, a, Pairing::Form)?.1)
    }
}

fn half(j: i32) -> String {
    if j % 2 == 0 {
        format!("{}", j / 2)
    } else {
        format!("{}/2", j)
    }
}

/// Minimal nilpotent, `s = e`: components up to `h_3`.
pub fn minimal(hy: &Hierarchy) -> Result<Vec<FormulaCheck>, LieError> {
    let c = Ctx::new(hy);
    let st = c.st;
    let f = c.f().clone();
    let e = st.e().clone();
    let (a, aup) = hy.w().g0f_duals()?;
    let v = c.basis(1);
    let vup: Vec<Vector> = (0..v.len()).map(|k| st.omega_dual(k).clone()).collect();
    let fv: Vec<DiffPoly> = v.iter().map(|vk| c.p(&c.br(&f, vk))).collect();
    let fp = c.p(&f);
    let mut out = Vec::new();
    c.check(&mut out, "πU_1/2 = 0", 1, false, LoopElement::zero());
    c.check(&mut out, "πU_1 = 0", 2, false, LoopElement::zero());

    let mut h0 = LoopElement::zero();
    for (ai, au) in a.iter().zip(&aup) {
        h0 += &c.t(ai, 0, &c.p(au));
    }
    c.check(&mut out, "πh_0 = Σ a_i⊗a^i", 0, true, h0);

    let mut u3 = LoopElement::zero();
    for k in 0..v.len() {
        u3 += &c.t(&c.br(&f, &vup[k]), -1, &fv[k]);
    }
    c.check(&mut out, "πU_3/2 = Σ[f,v^k]z⁻¹⊗[f,v_k]", 3, false, u3);

    let c4 = c.inv_xx(4, 1);
    c.check(&mut out, "πh_1 = (f+ze)z⁻¹⊗f/4(x|x)", 2, true, c.pair(&f, &e, -1).mul_poly(&fp.scale(&c4)));
    c.check(&mut out, "πU_2 = −xz⁻¹⊗f/4(x|x)", 4, false, c.t(st.x(), -1, &fp.scale(&-&c4)));

    let mut u5 = LoopElement::zero();
    for k in 0..v.len() {
        u5 -= &c.t(&vup[k], -1, &fv[k].derivative());
        for (ai, au) in a.iter().zip(&aup) {
            u5 -= &c.t(&c.br(au, &vup[k]), -1, &(&c.p(ai) * &fv[k]));
        }
    }
    c.check(&mut out, "πU_5/2", 5, false, u5);

    let x = st.x().clone();
    let sharp = |y: &Vector| y - &x.scale(&(&st.form(y, &x) / &c.xx));
    let mut h4 = LoopElement::zero();
    for hh in 0..v.len() {
        for k in 0..v.len() {
            let y = sharp(&c.br(&c.br(&f, &vup[hh]), &vup[k]));
            h4 += &c.t(&y, -1, &(&fv[hh] * &fv[k]).scale(&Scalar::from_ratio(1, 2)));
        }
    }
    c.check(&mut out, "πh_2 = ½Σ[[f,v^h],v^k]♯z⁻¹⊗[f,v_h][f,v_k]", 4, true, h4);

    let f_minus = &LoopElement::constant(&f, -2) - &LoopElement::constant(&e, -1);
    c.check(&mut out, "πU_3 = (f−ze)z⁻²⊗∂f/16(x|x)", 6, false, f_minus.mul_poly(&fp.derivative().scale(&c.inv_xx(16, 1))));

    let mut coeff = (&fp * &fp).scale(&-&c.inv_xx(32, 2));
    let c8 = -&c.inv_xx(8, 1);
    for k in 0..v.len() {
        let fvup = c.br(&f, &vup[k]);
        coeff += &(&c.p(&fvup) * &fv[k].derivative()).scale(&c8);
        for (ai, au) in a.iter().zip(&aup) {
            coeff += &(&(&c.p(&c.br(au, &fvup)) * &c.p(ai)) * &fv[k]).scale(&c8);
        }
    }
    c.check(&mut out, "πh_3", 6, true, c.pair(&f, &e, -2).mul_poly(&coeff));
    Ok(out)
}

/// Short nilpotent, `s = e`: components up to `h_3`.
pub fn short(hy: &Hierarchy) -> Result<Vec<FormulaCheck>, LieError> {
    let c = Ctx::new(hy);
    let st = c.st;
    if st.kind() != NilpotentKind::Short {
        return Err(LieError::WrongKind("short closed forms need a short nilpotent".into()));
    }
    let f = c.f().clone();
    let (a, aup) = hy.w().g0f_duals()?;
    let idx: Vec<usize> = st.piece(-2).collect();
    let u: Vec<Vector> = idx.iter().map(|&i| st.basis(i)).collect();
    let uup: Vec<Vector> = idx.iter().map(|&i| st.dual(i).clone()).collect();
    let up: Vec<DiffPoly> = u.iter().map(|x| c.p(x)).collect();
    let ff = |y: &Vector| c.br(&f, &c.br(&f, y));
    // ((ad f)² ∓ 2z) y z^k
    let shifted = |y: &Vector, k: i32, sign: i64| {
        &LoopElement::constant(&ff(y), k) + &LoopElement::constant(&y.scale(&Scalar::from_int(-2 * sign)), k + 1)
    };
    let mut out = Vec::new();

    let mut h0 = LoopElement::zero();
    for (ai, au) in a.iter().zip(&aup) {
        h0 += &c.t(ai, 0, &c.p(au));
    }
    c.check(&mut out, "πh_0 = Σ a_i⊗a^i", 0, true, h0);
    c.check(&mut out, "πU_1 = 0", 2, false, LoopElement::zero());

    let mut h1 = LoopElement::zero();
    let mut u2 = LoopElement::zero();
    for k in 0..u.len() {
        h1 += &shifted(&uup[k], -1, 1).mul_poly(&up[k].scale(&Scalar::from_ratio(-1, 4)));
        u2 += &c.t(&c.br(&f, &uup[k]), -1, &up[k].scale(&Scalar::from_ratio(1, 4)));
    }
    c.check(&mut out, "πh_1 = −¼Σ((ad f)²−2z)u^k z⁻¹⊗u_k", 2, true, h1);
    c.check(&mut out, "πU_2 = ¼Σ[f,u^k]z⁻¹⊗u_k", 4, false, u2);
    c.check(&mut out, "πh_2 = 0", 4, true, LoopElement::zero());

    let mut u3 = LoopElement::zero();
    let mut h3 = LoopElement::zero();
    for k in 0..u.len() {
        let mut p = -&up[k].derivative();
        for (aj, au) in a.iter().zip(&aup) {
            p += &(&c.p(aj) * &c.p(&c.br(au, &u[k])));
        }
        u3 += &shifted(&uup[k], -2, -1).mul_poly(&p.scale(&Scalar::from_ratio(1, 16)));
        let mut q = DiffPoly::zero();
        for h in 0..u.len() {
            q += &(&c.p(&c.br(&c.br(&f, &uup[h]), &u[k])) * &up[h]);
        }
        h3 += &shifted(&uup[k], -2, 1).mul_poly(&q.scale(&Scalar::from_ratio(1, 32)));
    }
    c.check(&mut out, "πU_3", 6, false, u3);
    c.check(&mut out, "πh_3 = (1/32)Σ((ad f)²−2z)u^k z⁻²⊗Σ[[f,u^h],u_k]u_h", 6, true, h3);
    Ok(out)
}

/// Isotropic variant with `s ∈ 𝔩` embeddable: components up to `h_3/2`.
pub fn isotropic(hy: &Hierarchy) -> Result<Vec<FormulaCheck>, LieError> {
    let c = Ctx::new(hy);
    let st = c.st;
    let f = c.f().clone();
    let e = st.e().clone();
    let s = hy.w().reduction().s().clone();
    let emb = st
        .find_embeddable(&s)
        .ok_or_else(|| LieError::GradeMismatch("s is not embeddable".into()))?;
    let ss = emb.s_star.clone();
    let a = emb.g0s.clone();
    let aup = if a.is_empty() { Vec::new() } else { c.form_duals(&a)? };
    let u = emb.half_s.clone();
    let uup = chi_duals(st, &s, &u)?;
    let sf = |y: &Vector| c.br(&s, &c.br(&f, y));
    let mut out = Vec::new();
    c.check(&mut out, "πU_1/2 = 0", 1, false, LoopElement::zero());
    c.check(&mut out, "πh_−1/2 = 0", -1, true, LoopElement::zero());

    let mut h0 = LoopElement::zero();
    for (ai, au) in a.iter().zip(&aup) {
        h0 += &c.t(ai, 0, &c.p(au));
    }
    c.check(&mut out, "πh_0 = Σ a_i⊗a_i", 0, true, h0);
    let mut u1 = LoopElement::zero();
    for k in 0..u.len() {
        u1 += &c.t(&c.br(&f, &u[k]), -1, &c.p(&sf(&uup[k])));
    }
    c.check(&mut out, "πU_1 = Σ[f,u_k]z⁻¹⊗[s,[f,u_k]]", 2, false, u1);

    let c6 = c.inv_xx(6, 1);
    let ssp = c.p(&ss);
    c.check(&mut out, "πh_1/2 = (f+zs)z⁻¹⊗s*/6(x|x)", 1, true, c.pair(&f, &s, -1).mul_poly(&ssp.scale(&c6)));
    let mut u3 = c.t(st.x(), -1, &ssp.scale(&-&c6));
    for k in 0..u.len() {
        u3 -= &c.t(&sf(&u[k]), -1, &c.p(&c.br(&f, &uup[k])));
    }
    c.check(&mut out, "πU_3/2", 3, false, u3);

    // e + z⁻¹s*
    let es = &LoopElement::constant(&e, 0) + &LoopElement::constant(&ss, -1);
    let mut q = c.p(&f).scale(&c6);
    for k in 0..u.len() {
        q += &(&c.p(&sf(&u[k])) * &c.p(&sf(&uup[k]))).scale(&c.inv_xx(12, 1));
    }
    c.check(&mut out, "πh_1", 2, true, es.mul_poly(&q));

    let mut h3 = LoopElement::zero();
    for (ai, au) in a.iter().zip(&aup) {
        let mut p = DiffPoly::zero();
        for k in 0..u.len() {
            p -= &(&c.p(&c.br(&f, &u[k])) * &c.p(&sf(&c.br(au, &uup[k]))));
        }
        h3 += &c.t(ai, -1, &p);
    }
    c.check(&mut out, "πh_3/2", 3, true, h3);
    Ok(out)
}

/// Dual basis of `u` for `χ(u, v) = ([s,[f,u]] | [s,[f,v]])`.
pub fn chi_duals(st: &GradedSetup, s: &Vector, u: &[Vector]) -> Result<Vec<Vector>, LieError> {
    let n = u.len();
    let img: Vec<Vector> = u.iter().map(|y| st.bracket(s, &st.bracket(st.f(), y))).collect();
    let mut g = Matrix::zeros(n, n);
    for h in 0..n {
        for k in 0..n {
            g[(h, k)] = st.form(&img[h], &img[k]);
        }
    }
    let inv = g.inverse().ok_or(LieError::SingularPairing)?;
    Ok((0..n)
        .map(|k| {
            let mut v = Vector::zeros(st.dim());
            for (j, uj) in u.iter().enumerate() {
                v.add_scaled(&inv[(j, k)], uj);
            }
            v
        })
        .collect())
}
