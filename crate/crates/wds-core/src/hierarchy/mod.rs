//! The loop algebra `𝔤((z⁻¹))`, the splitting `𝔥 ⊕ 𝔥⊥` for `ad(f+zs)`, the
//! dressing solver, conserved densities and the generalized
//! Drinfeld–Sokolov hierarchies.
//!
//! Loop degrees are stored doubled so they are integers.

pub mod closed_forms;
mod decomposition;
mod dressing;
mod loop_elem;

pub use decomposition::HDecomposition;
pub use dressing::{build_q, Dressing};
pub use loop_elem::{LoopElement, LoopGrading};

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::diffpoly::DiffPoly;
use crate::pva::{BracketTable, Part, PvaError};
use crate::walgebra::WGenerators;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum HierarchyError {
    #[error("f + zs is not semisimple (slice of doubled degree {degree})")]
    NotSemisimple { degree: i32 },
    #[error("s must be a nonzero homogeneous element of positive degree")]
    InvalidS,
    #[error("element is not homogeneous of doubled degree {degree}")]
    NotHomogeneous { degree: i32 },
    #[error("a(z) is not a homogeneous element of the center of h")]
    InvalidCenter,
    #[error("window too small: solve h up to doubled degree {needed}")]
    WindowTooSmall { needed: i32 },
    #[error("the pairing (a(z)|h(z)) vanishes in the solved window")]
    EmptySeries,
    #[error(transparent)]
    Pva(#[from] PvaError),
}

/// The series `∫g(z) = ∫(a(z)⊗1|h(z)) = Σ ∫g_n z^{N−n}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Densities {
    /// The leading power `N`.
    pub leading: i32,
    /// `g_0, g_1, …` in `V(𝔤^f)` coordinates.
    pub g: Vec<DiffPoly>,
}

/// A failed Lenard–Magri or involution check.
#[derive(Clone, Debug, Default)]
pub struct LenardMagriReport {
    pub checks: usize,
    pub failures: Vec<String>,
}

impl LenardMagriReport {
    pub fn passed(&self) -> bool {
        self.checks > 0 && self.failures.is_empty()
    }

    fn record(&mut self, ok: bool, what: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.failures.push(what());
        }
    }

    pub fn merge(&mut self, other: LenardMagriReport) {
        self.checks += other.checks;
        self.failures.extend(other.failures);
    }
}

/// A W-algebra together with its dressing: everything needed for densities
/// and evolution equations. All polynomials are in `V(𝔤^f)` coordinates,
/// identified with `W` by `π⁻¹`.
#[derive(Clone, Debug)]
pub struct Hierarchy {
    w: WGenerators,
    table: BracketTable,
    dressing: Dressing,
}

impl Hierarchy {
    /// Solves the π-projected dressing up to doubled degree `max_degree`.
    pub fn new(w: WGenerators, max_degree: i32) -> Result<Self, HierarchyError> {
        let red = w.reduction();
        let dec = HDecomposition::new(red.setup(), red.s())?;
        let q = build_q(red).map(|p| red.pi(p));
        let dressing = Dressing::solve(dec, q, max_degree)?;
        let table = w.gf_table();
        Ok(Hierarchy { w, table, dressing })
    }

    pub fn w(&self) -> &WGenerators {
        &self.w
    }

    pub fn table(&self) -> &BracketTable {
        &self.table
    }

    pub fn dressing(&self) -> &Dressing {
        &self.dressing
    }

    /// Generators of `V(𝔤^f)`.
    pub fn generators(&self) -> Vec<DiffPoly> {
        self.w.reduction().gf_vars().iter().map(|&i| DiffPoly::gen(i as u32)).collect()
    }

    /// Coefficients of `∫(a(z)⊗1|h(z))`, from the leading power down to the
    /// last power fully determined by the solved window.
    pub fn densities(&self, a: &LoopElement) -> Result<Densities, HierarchyError> {
        let dec = self.dressing.decomposition();
        let deg_a = dec.central_degree(a)?;
        let z = dec.grading().z();
        let series = a.pairing(&self.dressing.h_total(), dec.alg());
        let leading = *series.keys().next_back().ok_or(HierarchyError::EmptySeries)?;
        // h_j meets z^m exactly when j = −z·m − deg(a).
        let m_min = (-self.dressing.max_degree() - deg_a).div_euclid(z)
            + i32::from((-self.dressing.max_degree() - deg_a).rem_euclid(z) != 0);
        let g = (m_min..=leading)
            .rev()
            .map(|m| series.get(&m).cloned().unwrap_or_default())
            .collect();
        Ok(Densities { leading, g })
    }

    /// The first `count` densities, or the degree needed to get them.
    pub fn densities_up_to(&self, a: &LoopElement, count: usize) -> Result<Densities, HierarchyError> {
        let d = self.densities(a)?;
        if d.g.len() < count {
            let dec = self.dressing.decomposition();
            let deg_a = dec.central_degree(a)?;
            let m = d.leading - count as i32 + 1;
            return Err(HierarchyError::WindowTooSmall {
                needed: -dec.grading().z() * m - deg_a,
            });
        }
        Ok(Densities {
            leading: d.leading,
            g: d.g[..count].to_vec(),
        })
    }

    /// `{g_λ w}|_{λ=0}` for the chosen structure.
    pub fn flow_part(&self, part: Part, g: &DiffPoly, w: &DiffPoly) -> DiffPoly {
        self.table.master(part, g, w).at_zero()
    }

    /// `dw/dt = {g_λ w}_H|_{λ=0}`.
    pub fn flow(&self, g: &DiffPoly, w: &DiffPoly) -> DiffPoly {
        self.flow_part(Part::H, g, w)
    }

    /// Whether `{∫g, ∫h}` vanishes for both structures.
    pub fn in_involution(&self, g: &DiffPoly, h: &DiffPoly) -> bool {
        [Part::H, Part::K]
            .iter()
            .all(|&p| self.flow_part(p, g, h).functional_eq(&DiffPoly::zero()))
    }

    /// `{g_0}_K = 0`, `{g_n}_H = {g_{n+1}}_K` on every generator, and pairwise
    /// involution.
    pub fn lenard_magri(&self, g: &[DiffPoly]) -> LenardMagriReport {
        let mut r = LenardMagriReport::default();
        let ctx = self.w.context();
        for w in self.generators() {
            if let Some(g0) = g.first() {
                let k0 = self.flow_part(Part::K, g0, &w);
                r.record(k0.is_zero(), || format!("{{g0 λ {}}}_K ≠ 0", ctx.text(&w)));
            }
            for n in 0..g.len().saturating_sub(1) {
                let lhs = self.flow_part(Part::H, &g[n], &w);
                let rhs = self.flow_part(Part::K, &g[n + 1], &w);
                r.record(lhs == rhs, || {
                    format!("{{g{} λ {}}}_H ≠ {{g{} λ {}}}_K", n, ctx.text(&w), n + 1, ctx.text(&w))
                });
            }
        }
        r.merge(self.involution(g, g));
        r
    }

    /// Pairwise involution between two families of densities.
    pub fn involution(&self, a: &[DiffPoly], b: &[DiffPoly]) -> LenardMagriReport {
        let mut r = LenardMagriReport::default();
        for (m, gm) in a.iter().enumerate() {
            for (n, gn) in b.iter().enumerate() {
                r.record(self.in_involution(gm, gn), || format!("{{∫g{}, ∫g{}}} ≠ 0", m, n));
            }
        }
        r
    }

    /// Generators central for `K`: the ideal `J_K` they generate is a PVA ideal.
    pub fn k_central(&self) -> Vec<u32> {
        let gens = self.generators();
        let mut out = Vec::new();
        for (i, a) in gens.iter().enumerate() {
            if gens.iter().all(|b| self.table.master(Part::K, a, b).is_zero()) {
                out.push(self.w.reduction().gf_vars()[i] as u32);
            }
        }
        out
    }

    /// `dw/dt_n` for every generator, modulo `J_K` if `reduce` is set.
    pub fn equations(&self, g: &DiffPoly, reduce: bool) -> BTreeMap<u32, DiffPoly> {
        let kill: Vec<u32> = if reduce { self.k_central() } else { Vec::new() };
        let mut out = BTreeMap::new();
        for i in self.w.reduction().gf_vars() {
            let i = i as u32;
            if kill.contains(&i) {
                continue;
            }
            out.insert(i, reduce_mod_jk(&self.flow(g, &DiffPoly::gen(i)), &kill));
        }
        out
    }
}

/// Sets the given generators and all their derivatives to zero.
pub fn reduce_mod_jk(p: &DiffPoly, gens: &[u32]) -> DiffPoly {
    let set: BTreeSet<u32> = gens.iter().copied().collect();
    p.kill(&set)
}
