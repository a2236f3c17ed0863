use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{BracketTable, PvaError, ZBracket};
use crate::diffpoly::{Context, DiffPoly, LambdaPoly};
use crate::lie::{GradedSetup, NilpotentKind, Vector};
use crate::scalar::{Rational, Scalar};

/// Which W-algebra is built: the standard one on `V(𝔤_{≤1/2})` or the one
/// attached to the maximal isotropic `𝔩 ⊂ 𝔤_{1/2}` on `V(𝔭)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Variant {
    Standard,
    Isotropic,
}

/// The affine PVA `V(𝔤)` with `{a_λ b}_z = [a,b] + (a|b)λ + z(s|[a,b])`,
/// the map `ρ` onto the reduced variables and the W-algebra membership test.
///
/// Differential polynomials use the adapted basis index of the setup as
/// generator index, in every coordinate system (`V(𝔤)`, `V(𝔤_{≤1/2})`,
/// `V(𝔭)`, `V(𝔤^f)`).
#[derive(Clone, Debug)]
pub struct Reduction {
    setup: GradedSetup,
    s: Vector,
    variant: Variant,
    q_vars: Vec<usize>,
    annihilators: Vec<usize>,
    affine: BracketTable,
    table: BracketTable,
}

impl Reduction {
    /// The standard reduction; `s` must lie in `𝔤_d` and commute with
    /// `𝔤_{≥1/2}`.
    pub fn new(setup: GradedSetup, s: Vector) -> Result<Self, PvaError> {
        let d = setup.depth2();
        if !s.is_zero() && setup.grade_of(&s) != Some(d) {
            return Err(PvaError::InvalidS(format!("s must lie in g_{}", half(d))));
        }
        let q_vars: Vec<usize> = (0..setup.dim()).filter(|&i| setup.grade2(i) <= 1).collect();
        let annihilators: Vec<usize> = (0..setup.dim()).filter(|&i| setup.grade2(i) >= 1).collect();
        Self::build(setup, s, Variant::Standard, q_vars, annihilators)
    }

    /// The reduction attached to the maximal isotropic subspace recorded in
    /// the setup; `s` must be a homogeneous element of `𝔫 = 𝔩 ⊕ 𝔤_1`.
    pub fn isotropic(setup: GradedSetup, s: Vector) -> Result<Self, PvaError> {
        if setup.kind() != NilpotentKind::Minimal {
            return Err(PvaError::InvalidS("isotropic variant needs a minimal nilpotent".to_string()));
        }
        let k = setup
            .lagrangian()
            .ok_or_else(|| PvaError::InvalidS("no isotropic subspace in the setup".to_string()))?;
        let half_range = setup.piece(1);
        let l: Vec<usize> = half_range.clone().take(k).collect();
        let lprime: Vec<usize> = half_range.skip(k).collect();
        let mut annihilators = l.clone();
        annihilators.extend(setup.piece(2));
        if s.support().any(|i| !annihilators.contains(&i)) || (!s.is_zero() && setup.grade_of(&s).is_none()) {
            return Err(PvaError::InvalidS("s must be a homogeneous element of l ⊕ g_1".to_string()));
        }
        let mut q_vars: Vec<usize> = (0..setup.dim()).filter(|&i| setup.grade2(i) <= 0).collect();
        q_vars.extend(lprime);
        q_vars.sort_unstable();
        Self::build(setup, s, Variant::Isotropic, q_vars, annihilators)
    }

    fn build(
        setup: GradedSetup,
        s: Vector,
        variant: Variant,
        q_vars: Vec<usize>,
        annihilators: Vec<usize>,
    ) -> Result<Self, PvaError> {
        for &a in &annihilators {
            if !setup.bracket(&s, &setup.basis(a)).is_zero() {
                return Err(PvaError::InvalidS(format!(
                    "s does not commute with {}",
                    setup.label(a)
                )));
            }
        }
        let mut r = Reduction {
            setup,
            s,
            variant,
            q_vars,
            annihilators,
            affine: BracketTable::new(),
            table: BracketTable::new(),
        };
        let n = r.setup.dim();
        for i in 0..n {
            for j in 0..n {
                let (a, b) = (r.setup.basis(i), r.setup.basis(j));
                let zb = r.affine_bracket(&a, &b);
                let projected = ZBracket {
                    h: zb.h.map(|p| r.rho(p)),
                    k: zb.k.clone(),
                };
                r.affine.set(i as u32, j as u32, zb);
                r.table.set(i as u32, j as u32, projected);
            }
        }
        Ok(r)
    }

    pub fn setup(&self) -> &GradedSetup {
        &self.setup
    }

    pub fn s(&self) -> &Vector {
        &self.s
    }

    pub fn variant(&self) -> Variant {
        self.variant
    }

    /// Generators of the reduced algebra (`𝔤_{≤1/2}` or `𝔭`).
    pub fn q_vars(&self) -> &[usize] {
        &self.q_vars
    }

    /// Basis of the annihilating subalgebra (`𝔤_{≥1/2}` or `𝔫`).
    pub fn annihilators(&self) -> &[usize] {
        &self.annihilators
    }

    /// Generators of `V(𝔤^f)`.
    pub fn gf_vars(&self) -> Vec<usize> {
        self.setup.gf_indices()
    }

    /// The affine table on `V(𝔤)`.
    pub fn affine_table(&self) -> &BracketTable {
        &self.affine
    }

    /// `ρ` applied to the affine table: the generator brackets of the reduced
    /// algebra (also valid with a first argument outside it).
    pub fn rho_table(&self) -> &BracketTable {
        &self.table
    }

    /// The linear polynomial `Σ v_i u_i`.
    pub fn poly(&self, v: &Vector) -> DiffPoly {
        DiffPoly::linear(&v.0)
    }

    /// `{a_λ b}_z` for `a, b ∈ 𝔤` in `V(𝔤)`.
    pub fn affine_bracket(&self, a: &Vector, b: &Vector) -> ZBracket {
        let ab = self.setup.bracket(a, b);
        let h = LambdaPoly::from_coeffs(alloc::vec![
            self.poly(&ab),
            DiffPoly::constant(self.setup.form(a, b)),
        ]);
        let k = LambdaPoly::constant(DiffPoly::constant(-self.setup.form(&self.s, &ab)));
        ZBracket { h, k }
    }

    /// The differential algebra homomorphism `ρ(a) = π(a) + (f|a)`.
    pub fn rho(&self, p: &DiffPoly) -> DiffPoly {
        let q: BTreeSet<u32> = self.q_vars.iter().map(|&i| i as u32).collect();
        let mut images = BTreeMap::new();
        for g in p.gens() {
            if !q.contains(&g) {
                let c = self.setup.form(self.setup.f(), &self.setup.basis(g as usize));
                images.insert(g, DiffPoly::constant(c));
            }
        }
        if images.is_empty() {
            return p.clone();
        }
        p.substitute(&images)
    }

    /// Whether `p` only involves the reduced generators.
    pub fn in_reduced(&self, p: &DiffPoly) -> bool {
        p.gens().iter().all(|g| self.q_vars.contains(&(*g as usize)))
    }

    /// `a ^ρ_λ g = ρ{a_λ g}_z`; fails if the result depends on z.
    pub fn rho_action(&self, a: &Vector, g: &DiffPoly) -> Result<LambdaPoly, PvaError> {
        let zb = self.table.bracket(&self.poly(a), g);
        if !zb.k.is_zero() {
            return Err(PvaError::ZDependent(format!(
                "{} acts with a z-part",
                self.setup.describe(a)
            )));
        }
        Ok(zb.h)
    }

    /// Membership in the W-algebra: `g` lies in the reduced algebra and is
    /// annihilated by the ρ-action of every annihilator basis vector.
    pub fn is_in_w(&self, g: &DiffPoly) -> bool {
        self.in_reduced(g)
            && self.annihilators.iter().all(|&a| {
                self.rho_action(&self.setup.basis(a), g)
                    .is_ok_and(|r| r.is_zero())
            })
    }

    /// `{g_λ h}_{z,ρ}` for `g, h` in the W-algebra.
    pub fn w_bracket(&self, g: &DiffPoly, h: &DiffPoly) -> Result<ZBracket, PvaError> {
        if !self.is_in_w(g) || !self.is_in_w(h) {
            return Err(PvaError::NotInW);
        }
        Ok(self.table.bracket(g, h))
    }

    /// `ρ{g_λ h}_z` without the membership check.
    pub fn bracket_unchecked(&self, g: &DiffPoly, h: &DiffPoly) -> ZBracket {
        self.table.bracket(g, h)
    }

    /// The quotient map onto `V(𝔤^f)`, killing the other reduced generators.
    pub fn pi(&self, p: &DiffPoly) -> DiffPoly {
        let gf: BTreeSet<u32> = self.gf_vars().iter().map(|&i| i as u32).collect();
        let kill: BTreeSet<u32> = p.gens().into_iter().filter(|g| !gf.contains(g)).collect();
        p.kill(&kill)
    }

    /// Conformal weights `1 − j` of the generators in `𝔤_j`.
    pub fn weights(&self) -> Vec<Rational> {
        (0..self.setup.dim())
            .map(|i| Rational::new((2 - self.setup.grade2(i)).into(), 2.into()))
            .collect()
    }

    /// Rendering context labelling generators by the adapted basis.
    pub fn context(&self) -> Context {
        let labels: Vec<String> = (0..self.setup.dim()).map(|i| self.setup.label(i).to_string()).collect();
        Context::new(labels.clone(), labels)
    }

    /// `(f|s)`, the scalar in the central term of the Virasoro bracket.
    pub fn fs(&self) -> Scalar {
        self.setup.form(self.setup.f(), &self.s)
    }
}

fn half(i2: i32) -> String {
    if i2 % 2 == 0 {
        format!("{}", i2 / 2)
    } else {
        format!("{}/2", i2)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::{build_sl, grade_by_nilpotent, GradingOptions};

    fn sl3() -> Reduction {
        let g = build_sl(3).unwrap();
        let st = grade_by_nilpotent(&g, &g.named("E31"), NilpotentKind::Minimal, &GradingOptions::default())
            .unwrap();
        let e = st.e().clone();
        Reduction::new(st, e).unwrap()
    }

    #[test]
    fn table_one_entries() {
        let r = sl3();
        let st = r.setup();
        let fe = r.affine_bracket(st.f(), st.e());
        let rho_fe = fe.h.map(|p| r.rho(p));
        let expected = LambdaPoly::from_coeffs(alloc::vec![
            r.poly(&st.x().scale(&Scalar::from_int(-2))),
            DiffPoly::constant(Scalar::from_int(2) * &st.xx()),
        ]);
        assert_eq!(rho_fe, expected);
        assert_eq!(st.xx(), Scalar::from_ratio(1, 2));
        assert!(r.affine_bracket(st.e(), st.e()).is_zero());
    }

    #[test]
    fn rho_on_generators() {
        let r = sl3();
        let st = r.setup();
        assert_eq!(r.rho(&r.poly(st.e())), DiffPoly::one());
        assert!(r.rho(&r.poly(st.e()).derivative()).is_zero());
        let u = r.poly(&st.elem("E21"));
        assert_eq!(r.rho(&u), u);
    }

    #[test]
    fn membership_basics() {
        let r = sl3();
        let st = r.setup();
        assert!(r.is_in_w(&DiffPoly::one()));
        assert!(!r.is_in_w(&r.poly(st.x())));
        assert!(!r.is_in_w(&r.poly(st.f())));
    }

    #[test]
    fn rejects_bad_s() {
        let g = build_sl(3).unwrap();
        let st = grade_by_nilpotent(&g, &g.named("E31"), NilpotentKind::Minimal, &GradingOptions::default())
            .unwrap();
        let s = st.elem("E12");
        assert!(matches!(Reduction::new(st, s), Err(PvaError::InvalidS(_))));
    }

    #[test]
    fn affine_axioms_and_negative_control() {
        use crate::pva::{check_pva_axioms, Part};
        use rand_chacha::rand_core::SeedableRng;
        let r = sl3();
        let gens: Vec<u32> = (0..8).collect();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let report = check_pva_axioms(r.affine_table(), &gens, 10, &mut rng);
        assert!(report.passed(), "{:?}", report.violations);
        let mut bad = r.affine_table().clone();
        let entry = bad.get(0, 7);
        assert!(!entry.h.is_zero());
        bad.set(0, 7, ZBracket { h: -&entry.h, k: entry.k });
        let report = check_pva_axioms(&bad, &gens, 0, &mut rng);
        assert!(report.violations.iter().any(|v| v.axiom == "skew-symmetry"));
        let _ = Part::H;
    }
}
