//! Explicit generators of the W-algebra for minimal and short nilpotents (and
//! for a maximal isotropic `𝔩 ⊂ 𝔤_{1/2}`), the isomorphism `π : W → V(𝔤^f)`
//! and the verification of the closed-form bracket tables.

mod tables;

pub use tables::{Table, TableCheck, TableReport};

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::diffpoly::{Context, DiffPoly};
use crate::lie::{LieError, NilpotentKind, Pairing, Vector};
use crate::pva::{BracketTable, PvaError, Reduction, Variant, ZBracket};
use crate::scalar::Scalar;

/// Which family of generators is built.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum WVariant {
    Minimal,
    Short,
    MinimalIsotropic,
}

/// The generators `L, L̃, φ(a_i), ψ(u_k)` of the W-algebra, as elements of
/// `V(𝔤_{≤1/2})` (or `V(𝔭)`).
///
/// `φ` is indexed by position in `𝔤₀^f`, `ψ` by position in `𝔤_{-1/2}`
/// (minimal) or `𝔤_{-1}` (short).
#[derive(Clone, Debug)]
pub struct WGenerators {
    red: Reduction,
    variant: WVariant,
    l: DiffPoly,
    ltilde: DiffPoly,
    phi: Vec<DiffPoly>,
    psi: Vec<DiffPoly>,
    names: Vec<String>,
    latex: Vec<String>,
}

impl WGenerators {
    /// Builds all generators and checks that each lies in `W`.
    pub fn build(red: Reduction) -> Result<Self, PvaError> {
        let st = red.setup();
        let variant = match (st.kind(), red.variant()) {
            (NilpotentKind::Minimal, Variant::Standard) => WVariant::Minimal,
            (NilpotentKind::Minimal, Variant::Isotropic) => WVariant::MinimalIsotropic,
            (NilpotentKind::Short, _) => WVariant::Short,
        };
        let mut w = WGenerators {
            red,
            variant,
            l: DiffPoly::zero(),
            ltilde: DiffPoly::zero(),
            phi: Vec::new(),
            psi: Vec::new(),
            names: Vec::new(),
            latex: Vec::new(),
        };
        let st = w.red.setup();
        w.phi = st.g0f().map(|i| w.phi_formula(&st.basis(i))).collect();
        w.psi = w.psi_range().map(|i| w.psi_formula(&st.basis(i))).collect();
        w.l = w.virasoro();
        let (a, dual) = w.g0f_duals()?;
        let mut half_sum = DiffPoly::zero();
        for (ai, di) in a.iter().zip(&dual) {
            half_sum += &(&w.phi_of(ai)? * &w.phi_of(di)?);
        }
        w.ltilde = &w.l - &half_sum.scale(&Scalar::from_ratio(1, 2));
        w.default_names();
        let all = w.phi.iter().chain(&w.psi).chain([&w.l, &w.ltilde]);
        for g in all {
            if !w.red.is_in_w(g) {
                return Err(PvaError::NotInW);
            }
        }
        Ok(w)
    }

    pub fn reduction(&self) -> &Reduction {
        &self.red
    }

    pub fn variant(&self) -> WVariant {
        self.variant
    }

    /// The Virasoro element `L`.
    pub fn l(&self) -> &DiffPoly {
        &self.l
    }

    /// `L̃ = π⁻¹(f)` (for a short nilpotent this is `ψ(f)`).
    pub fn ltilde(&self) -> &DiffPoly {
        &self.ltilde
    }

    pub fn phi(&self) -> &[DiffPoly] {
        &self.phi
    }

    pub fn psi(&self) -> &[DiffPoly] {
        &self.psi
    }

    /// Basis indices of the space `ψ` is defined on.
    pub fn psi_range(&self) -> core::ops::Range<usize> {
        let st = self.red.setup();
        match st.kind() {
            NilpotentKind::Minimal => st.piece(-1),
            NilpotentKind::Short => st.piece(-2),
        }
    }

    /// `φ(a)` for any `a ∈ 𝔤₀^f`.
    pub fn phi_of(&self, a: &Vector) -> Result<DiffPoly, LieError> {
        let st = self.red.setup();
        let range = st.g0f();
        self.combine(a, range.clone(), |i| &self.phi[i - range.start], "𝔤₀^f")
    }

    /// `ψ(u)` for any `u` in `𝔤_{-1/2}` (minimal) or `𝔤_{-1}` (short).
    pub fn psi_of(&self, u: &Vector) -> Result<DiffPoly, LieError> {
        let range = self.psi_range();
        self.combine(u, range.clone(), |i| &self.psi[i - range.start], "the domain of ψ")
    }

    fn combine<'a>(
        &'a self,
        v: &Vector,
        range: core::ops::Range<usize>,
        gen: impl Fn(usize) -> &'a DiffPoly,
        what: &str,
    ) -> Result<DiffPoly, LieError> {
        let mut out = DiffPoly::zero();
        for i in v.support() {
            if !range.contains(&i) {
                return Err(LieError::GradeMismatch(format!(
                    "{} is not in {}",
                    self.red.setup().describe(v),
                    what
                )));
            }
            out += &gen(i).scale(&v[i]);
        }
        Ok(out)
    }

    /// Dual bases `{a_i}, {a^i}` of `𝔤₀^f`.
    pub fn g0f_duals(&self) -> Result<(Vec<Vector>, Vec<Vector>), LieError> {
        let st = self.red.setup();
        let a: Vec<Vector> = st.g0f().map(|i| st.basis(i)).collect();
        st.dual_basis(&a, &a, Pairing::Form)
    }

    /// `π⁻¹ : V(𝔤^f) → W`, the differential algebra homomorphism sending
    /// `a ↦ φ(a)`, `u ↦ ψ(u)` and (minimal) `f ↦ L̃`.
    pub fn pi_inverse(&self, p: &DiffPoly) -> DiffPoly {
        let st = self.red.setup();
        let mut images = BTreeMap::new();
        for (k, i) in st.g0f().enumerate() {
            images.insert(i as u32, self.phi[k].clone());
        }
        for (k, i) in self.psi_range().enumerate() {
            images.insert(i as u32, self.psi[k].clone());
        }
        if st.kind() == NilpotentKind::Minimal {
            for i in st.piece(-2) {
                images.insert(i as u32, self.ltilde.clone());
            }
        }
        p.substitute(&images)
    }

    /// `π : W → V(𝔤^f)` (`π_𝔩` for the isotropic variant).
    pub fn pi(&self, p: &DiffPoly) -> DiffPoly {
        self.red.pi(p)
    }

    /// `{g_λ h}_{z,ρ}` for `g, h ∈ W`.
    pub fn bracket(&self, g: &DiffPoly, h: &DiffPoly) -> Result<ZBracket, PvaError> {
        self.red.w_bracket(g, h)
    }

    /// The bracket transported to `V(𝔤^f)`: `π{π⁻¹g_λ π⁻¹h}_{z,ρ}`.
    pub fn gf_bracket(&self, g: &DiffPoly, h: &DiffPoly) -> ZBracket {
        let zb = self
            .red
            .bracket_unchecked(&self.pi_inverse(g), &self.pi_inverse(h));
        zb.map(|p| p.map(|c| self.pi(c)))
    }

    /// The generator table of `W` in the coordinates of `V(𝔤^f)`, so that the
    /// Master Formula on it computes brackets of `W` directly.
    pub fn gf_table(&self) -> BracketTable {
        let gens = self.red.gf_vars();
        let images: Vec<DiffPoly> = gens
            .iter()
            .map(|&i| self.pi_inverse(&DiffPoly::gen(i as u32)))
            .collect();
        let mut t = BracketTable::new();
        for (a, &i) in gens.iter().enumerate() {
            for (b, &j) in gens.iter().enumerate() {
                let zb = self.red.bracket_unchecked(&images[a], &images[b]);
                t.set(i as u32, j as u32, zb.map(|p| p.map(|c| self.pi(c))));
            }
        }
        t
    }

    /// Names of the `V(𝔤^f)` generators by adapted basis index.
    pub fn names(&self) -> &[String] {
        &self.names
    }

    /// Renames a `V(𝔤^f)` generator (text and LaTeX).
    pub fn set_name(&mut self, index: usize, text: &str, latex: &str) {
        self.names[index] = text.into();
        self.latex[index] = latex.into();
    }

    /// Rendering context for `V(𝔤^f)`: `f ↦ Lt`, `a ↦ phi`, `u ↦ psi`.
    pub fn context(&self) -> Context {
        Context::new(self.names.clone(), self.latex.clone())
    }

    fn default_names(&mut self) {
        let st = self.red.setup();
        let n = st.dim();
        let mut names: Vec<String> = (0..n).map(|i| String::from(st.label(i))).collect();
        let mut latex = names.clone();
        let one_phi = st.g0f().len() == 1;
        for i in st.g0f() {
            if one_phi {
                names[i] = "phi".into();
                latex[i] = "\\varphi".into();
            } else {
                names[i] = format!("phi[{}]", st.label(i));
                latex[i] = format!("\\varphi_{{{}}}", st.label(i));
            }
        }
        for i in self.psi_range() {
            names[i] = format!("psi[{}]", st.label(i));
            latex[i] = format!("\\psi_{{{}}}", st.label(i));
        }
        if st.kind() == NilpotentKind::Minimal {
            for i in st.piece(-2) {
                names[i] = "Lt".into();
                latex[i] = "\\widetilde{L}".into();
            }
        }
        self.names = names;
        self.latex = latex;
    }

    fn poly(&self, v: &Vector) -> DiffPoly {
        self.red.poly(v)
    }

    /// `π_𝔭` on vectors for the isotropic variant (identity otherwise).
    fn pi_p(&self, v: &Vector) -> Vector {
        if self.variant != WVariant::MinimalIsotropic {
            return v.clone();
        }
        let keep: BTreeSet<usize> = self.red.q_vars().iter().copied().collect();
        let mut out = v.clone();
        for i in 0..out.dim() {
            if !keep.contains(&i) {
                out[i] = Scalar::zero();
            }
        }
        out
    }

    /// Pairs `(v_k, v^k)` entering the sums: all of `𝔤_{1/2}` with `ω₊`-dual
    /// basis, or `k ∈ L` only for the isotropic variant.
    fn half_pairs(&self) -> Vec<(Vector, Vector)> {
        let st = self.red.setup();
        let range = st.piece(1);
        let count = match self.variant {
            WVariant::MinimalIsotropic => st.lagrangian().unwrap_or(0),
            _ => range.len(),
        };
        range
            .take(count)
            .enumerate()
            .map(|(k, i)| (st.basis(i), st.omega_dual(k).clone()))
            .collect()
    }

    fn phi_formula(&self, a: &Vector) -> DiffPoly {
        let st = self.red.setup();
        let mut p = self.poly(a);
        if st.kind() == NilpotentKind::Minimal {
            let half = Scalar::from_ratio(1, 2);
            for (v, vd) in self.half_pairs() {
                let t = &self.poly(&self.pi_p(&st.bracket(a, &v))) * &self.poly(&vd);
                p += &t.scale(&half);
            }
        }
        p
    }

    fn psi_formula(&self, u: &Vector) -> DiffPoly {
        let st = self.red.setup();
        match st.kind() {
            NilpotentKind::Minimal => {
                let pairs = self.half_pairs();
                let mut p = self.poly(u);
                let third = Scalar::from_ratio(1, 3);
                for (vh, vhd) in &pairs {
                    let uvh = st.bracket(u, vh);
                    for (vk, vkd) in &pairs {
                        let inner = self.pi_p(&st.bracket(&uvh, vk));
                        let t = &(&self.poly(&inner) * &self.poly(vhd)) * &self.poly(vkd);
                        p += &t.scale(&third);
                    }
                    p += &(&self.poly(&uvh) * &self.poly(vhd));
                }
                p += &self.poly(&self.pi_p(&st.bracket(st.e(), u))).derivative();
                p
            }
            NilpotentKind::Short => {
                let mut p = self.poly(u);
                let uk: Vec<Vector> = st.piece(-2).map(|i| st.basis(i)).collect();
                let ud: Vec<Vector> = st.piece(-2).map(|i| st.dual(i).clone()).collect();
                let half = Scalar::from_ratio(-1, 2);
                let eighth = Scalar::from_ratio(-1, 8);
                for (k, ukv) in uk.iter().enumerate() {
                    let t = &self.poly(&st.bracket(u, &ud[k])) * &self.poly(&st.bracket(st.e(), ukv));
                    p += &t.scale(&half);
                    let circ = st.jordan_product(u, ukv).unwrap_or_else(|_| Vector::zeros(st.dim()));
                    let t = &self.poly(&st.bracket(st.f(), &ud[k])) * &self.poly(&st.bracket(st.e(), &circ));
                    p += &t.scale(&eighth);
                }
                p += &self.poly(&st.bracket(st.e(), u)).derivative().scale(&Scalar::from_ratio(1, 2));
                p
            }
        }
    }

    /// `L = f + x′ + ½Σ_{J₀} a_j a^j + Σ v^k[f,v_k] + ½Σ v^k ∂v_k`, with the
    /// sums over `𝔤_{1/2}` restricted to `𝔩` (and no `∂v_k` term) for the
    /// isotropic variant.
    fn virasoro(&self) -> DiffPoly {
        let st = self.red.setup();
        let mut l = &self.poly(st.f()) + &self.poly(st.x()).derivative();
        let g0: Vec<Vector> = st.piece(0).map(|i| st.basis(i)).collect();
        let (_, g0d) = st
            .dual_basis(&g0, &g0, Pairing::Form)
            .expect("the form is nondegenerate on g_0");
        let half = Scalar::from_ratio(1, 2);
        for (a, ad) in g0.iter().zip(&g0d) {
            l += &(&self.poly(a) * &self.poly(ad)).scale(&half);
        }
        for (v, vd) in self.half_pairs() {
            l += &(&self.poly(&vd) * &self.poly(&st.bracket(st.f(), &v)));
            if self.variant == WVariant::Minimal {
                l += &(&self.poly(&vd) * &self.poly(&v).derivative()).scale(&half);
            }
        }
        l
    }
}

#[cfg(test)]
mod tests;
