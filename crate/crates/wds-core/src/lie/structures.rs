use alloc::format;
use alloc::string::ToString;
use alloc::vec::Vec;

use super::{grade_by_nilpotent, GradedSetup, GradingOptions, LieError, NilpotentKind, Vector};
use crate::linalg::{independent_subset, Matrix};
use crate::scalar::Scalar;

/// Bilinear pairings used to build dual bases.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Pairing {
    /// The invariant form `(a|b)`.
    Form,
    /// `ω₊(a,b) = (f|[a,b])` on `𝔤_{1/2}`.
    OmegaPlus,
    /// `ω₋(a,b) = (e|[a,b])` on `𝔤_{-1/2}`.
    OmegaMinus,
}

/// The projections of the graded setup.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Projection {
    /// `a ↦ a♯`, from `𝔤₀` onto `𝔤₀^f` along its orthogonal complement.
    Sharp,
    /// `a ↦ a^⊥`, from `𝔤₀` onto the orthogonal complement of `𝔤₀^f`.
    Perp,
    /// `𝔤 → 𝔤_{≤1/2}` along `𝔤_{≥1}`.
    LeqHalf,
    /// `π: 𝔤_{≤1/2} → 𝔤^f` with kernel `[e, 𝔤_{≤-1/2}]`.
    Pi,
    /// `π_𝔭: 𝔤 → 𝔭 = 𝔩′ ⊕ 𝔤_{≤0}` with kernel `𝔫 = 𝔩 ⊕ 𝔤_1`.
    PiP,
    /// `π_𝔩: 𝔭 → 𝔤^f` with kernel `𝔽x ⊕ 𝔩′`.
    PiL,
}

/// A linear map between coordinate subspaces of the adapted basis.
#[derive(Clone, Debug)]
pub struct SubspaceMap {
    domain: Vec<usize>,
    codomain: Vec<usize>,
    matrix: Matrix,
}

impl SubspaceMap {
    /// The coordinate projection of `domain` onto its subset `codomain`.
    pub fn selection(domain: Vec<usize>, codomain: Vec<usize>) -> Self {
        let mut matrix = Matrix::zeros(codomain.len(), domain.len());
        for (r, c) in codomain.iter().enumerate() {
            let k = domain.iter().position(|d| d == c).expect("codomain ⊂ domain");
            matrix[(r, k)] = Scalar::one();
        }
        SubspaceMap {
            domain,
            codomain,
            matrix,
        }
    }

    pub fn domain(&self) -> &[usize] {
        &self.domain
    }

    pub fn codomain(&self) -> &[usize] {
        &self.codomain
    }

    pub fn matrix(&self) -> &Matrix {
        &self.matrix
    }

    /// Applies the map to a full coordinate vector supported in the domain.
    pub fn apply(&self, v: &Vector) -> Result<Vector, LieError> {
        if let Some(i) = v.support().find(|i| !self.domain.contains(i)) {
            return Err(LieError::GradeMismatch(format!(
                "coordinate {} lies outside the domain",
                i
            )));
        }
        let input: Vec<Scalar> = self.domain.iter().map(|&i| v[i].clone()).collect();
        let out = self.matrix.apply(&input);
        let mut r = Vector::zeros(v.dim());
        for (k, &i) in self.codomain.iter().enumerate() {
            r[i] = out[k].clone();
        }
        Ok(r)
    }

    pub fn compose(&self, inner: &SubspaceMap) -> Option<SubspaceMap> {
        if inner.codomain != self.domain {
            return None;
        }
        Some(SubspaceMap {
            domain: inner.domain.clone(),
            codomain: self.codomain.clone(),
            matrix: self.matrix.mul(&inner.matrix),
        })
    }
}

/// An embeddable `s ∈ 𝔤_{1/2}` with its partner `s* ∈ 𝔤_{-1/2}`,
/// `[s, s*] = 2x`, and the centralizers used by the dressing.
#[derive(Clone, Debug)]
pub struct Embedding {
    pub s: Vector,
    pub s_star: Vector,
    /// Basis of `𝔤₀^s`.
    pub g0s: Vec<Vector>,
    /// Basis of `𝔤_{1/2}^s`.
    pub half_s: Vec<Vector>,
}

impl GradedSetup {
    /// Returns `(a, b*)` where `b*` spans `span(b)` and `pairing(a_h, b*_k) = δ_hk`.
    pub fn dual_basis(
        &self,
        a: &[Vector],
        b: &[Vector],
        pairing: Pairing,
    ) -> Result<(Vec<Vector>, Vec<Vector>), LieError> {
        if a.len() != b.len() {
            return Err(LieError::SingularPairing);
        }
        let n = a.len();
        let mut g = Matrix::zeros(n, n);
        for (h, ah) in a.iter().enumerate() {
            for (m, bm) in b.iter().enumerate() {
                g[(h, m)] = self.pair(pairing, ah, bm);
            }
        }
        let ginv = g.inverse().ok_or(LieError::SingularPairing)?;
        let dual = (0..n)
            .map(|k| {
                let mut v = Vector::zeros(self.dim());
                for (m, bm) in b.iter().enumerate() {
                    v.add_scaled(&ginv[(m, k)], bm);
                }
                v
            })
            .collect();
        Ok((a.to_vec(), dual))
    }

    pub fn pair(&self, pairing: Pairing, a: &Vector, b: &Vector) -> Scalar {
        match pairing {
            Pairing::Form => self.form(a, b),
            Pairing::OmegaPlus => self.omega_plus(a, b),
            Pairing::OmegaMinus => self.omega_minus(a, b),
        }
    }

    fn indices(&self, pred: impl Fn(i32) -> bool) -> Vec<usize> {
        (0..self.dim()).filter(|&i| pred(self.grade2(i))).collect()
    }

    /// Index set of `𝔩` (first part of `𝔤_{1/2}`) and `𝔩′`.
    fn lagrangian_split(&self) -> Result<(Vec<usize>, Vec<usize>), LieError> {
        let k = self
            .lagrangian()
            .ok_or_else(|| LieError::GradeMismatch("no isotropic subspace chosen".to_string()))?;
        let half: Vec<usize> = self.piece(1).collect();
        Ok((half[..k].to_vec(), half[k..].to_vec()))
    }

    pub fn projection(&self, which: Projection) -> Result<SubspaceMap, LieError> {
        let g0: Vec<usize> = self.piece(0).collect();
        let leq_half = self.indices(|g| g <= 1);
        let gf = self.gf_indices();
        Ok(match which {
            Projection::Sharp => SubspaceMap::selection(g0, self.g0f().collect()),
            Projection::Perp => SubspaceMap::selection(g0, self.g0perp().collect()),
            Projection::LeqHalf => SubspaceMap::selection((0..self.dim()).collect(), leq_half),
            Projection::Pi => SubspaceMap::selection(leq_half, gf),
            Projection::PiP => {
                let (_, lp) = self.lagrangian_split()?;
                let mut p = self.indices(|g| g <= 0);
                p.extend(lp);
                SubspaceMap::selection((0..self.dim()).collect(), p)
            }
            Projection::PiL => {
                let (_, lp) = self.lagrangian_split()?;
                let mut p = self.indices(|g| g <= 0);
                p.extend(lp);
                SubspaceMap::selection(p, gf)
            }
        })
    }

    /// Jordan products of a short grading: `a∘b = [[e,a],b]` on `𝔤_{-1}` and
    /// `a*b = [[f,a],b]` on `𝔤_1`.
    pub fn jordan_product(&self, a: &Vector, b: &Vector) -> Result<Vector, LieError> {
        if self.kind() != NilpotentKind::Short {
            return Err(LieError::WrongKind("Jordan product needs a short grading".to_string()));
        }
        let grade = |v: &Vector| {
            if v.is_zero() {
                None
            } else {
                Some(self.grade_of(v).unwrap_or(i32::MAX))
            }
        };
        let g = match (grade(a), grade(b)) {
            (None, None) => return Ok(Vector::zeros(self.dim())),
            (Some(g), None) | (None, Some(g)) => g,
            (Some(g), Some(h)) if g == h => g,
            _ => {
                return Err(LieError::GradeMismatch(
                    "operands in different pieces".to_string(),
                ))
            }
        };
        match g {
            -2 => Ok(self.bracket(&self.bracket(self.e(), a), b)),
            2 => Ok(self.bracket(&self.bracket(self.f(), a), b)),
            _ => Err(LieError::GradeMismatch(
                "Jordan product is defined on 𝔤_{-1} and 𝔤_1".to_string(),
            )),
        }
    }

    /// Kernel of `ad v` restricted to a graded piece.
    pub fn centralizer_in(&self, v: &Vector, i2: i32) -> Vec<Vector> {
        let basis: Vec<Vector> = self.piece(i2).map(|i| self.basis(i)).collect();
        let cols: Vec<Vec<Scalar>> = basis.iter().map(|b| self.bracket(v, b).0).collect();
        if cols.is_empty() {
            return Vec::new();
        }
        Matrix::from_columns(self.dim(), &cols)
            .nullspace()
            .into_iter()
            .map(|c| {
                let mut r = Vector::zeros(self.dim());
                for (k, ck) in c.iter().enumerate() {
                    r.add_scaled(ck, &basis[k]);
                }
                r
            })
            .collect()
    }

    /// Solves `[s, s*] = 2x` for `s* ∈ 𝔤_{-1/2}` and checks the structural
    /// consequences of embeddability; `None` if no solution exists.
    pub fn find_embeddable(&self, s: &Vector) -> Option<Embedding> {
        if self.kind() != NilpotentKind::Minimal || s.is_zero() || self.grade_of(s) != Some(1) {
            return None;
        }
        let n = self.dim();
        let minus: Vec<usize> = self.piece(-1).collect();
        let cols: Vec<Vec<Scalar>> = minus.iter().map(|&i| self.bracket(s, &self.basis(i)).0).collect();
        let two_x = self.x().scale(&Scalar::from_int(2));
        let c = Matrix::from_columns(n, &cols).solve(&two_x.0)?;
        let mut s_star = Vector::zeros(n);
        for (k, &i) in minus.iter().enumerate() {
            s_star.add_scaled(&c[k], &self.basis(i));
        }
        let g0s = self.centralizer_in(s, 0);
        let half_s = self.centralizer_in(s, 1);
        let emb = Embedding {
            s: s.clone(),
            s_star,
            g0s,
            half_s,
        };
        self.check_embedding(&emb).ok()?;
        Some(emb)
    }

    fn check_embedding(&self, emb: &Embedding) -> Result<(), LieError> {
        let fail = |what: &str| Err(LieError::AxiomViolation(format!("embeddable s: {}", what)));
        let (s, f) = (&emb.s, self.f());
        let four_x = self.x().scale(&Scalar::from_int(4));
        let two_star = emb.s_star.scale(&Scalar::from_int(2));
        if self.bracket(&four_x, s) != s.scale(&Scalar::from_int(2))
            || self.bracket(&four_x, &two_star) != two_star.scale(&Scalar::from_int(-2))
        {
            return fail("(2s*, 4x, s) is not an sl2-triple");
        }
        if emb.g0s.iter().any(|a| !self.bracket(f, a).is_zero()) {
            return fail("g0^s is not inside g0^f");
        }
        let rank = |vs: &[Vector]| {
            let cols: Vec<Vec<Scalar>> = vs.iter().map(|v| v.0.clone()).collect();
            independent_subset(&cols).len()
        };
        let k = emb.half_s.len();
        let fu: Vec<Vector> = emb.half_s.iter().map(|u| self.bracket(f, u)).collect();
        let sfu: Vec<Vector> = fu.iter().map(|v| self.bracket(s, v)).collect();
        let ssfu: Vec<Vector> = sfu.iter().map(|v| self.bracket(s, v)).collect();
        if rank(&fu) != k || rank(&sfu) != k || rank(&ssfu) != k {
            return fail("ad f, ad s ad f, (ad s)^2 ad f are not injective on g_{1/2}^s");
        }
        let g0_dim = self.piece(0).len();
        let ims: Vec<Vector> = self.piece(-1).map(|i| self.bracket(s, &self.basis(i))).collect();
        let mut all = emb.g0s.clone();
        all.extend(ims.iter().cloned());
        if rank(&all) != g0_dim
            || emb
                .g0s
                .iter()
                .any(|a| ims.iter().any(|b| !self.form(a, b).is_zero()))
        {
            return fail("g0 != g0^s ⊕ [s, g_{-1/2}] orthogonally");
        }
        let mut e_split = emb.g0s.clone();
        e_split.extend(sfu.iter().cloned());
        if rank(&e_split) != self.g0f().len() {
            return fail("g0^f != g0^s ⊕ [s,[f,g_{1/2}^s]]");
        }
        let mut f_split = ssfu.clone();
        f_split.push(s.clone());
        if rank(&f_split) != self.piece(1).len() {
            return fail("g_{1/2} != [s,[s,[f,g_{1/2}^s]]] ⊕ Fs");
        }
        let mut chi = Matrix::zeros(k, k);
        for h in 0..k {
            for m in 0..k {
                chi[(h, m)] = self.form(&sfu[h], &sfu[m]);
            }
        }
        if chi.rank() != k {
            return fail("χ is degenerate");
        }
        Ok(())
    }

    /// A maximal isotropic complement `𝔩′` of the isotropic `𝔩 ⊂ 𝔤_{1/2}`,
    /// returned as the `ω₊`-dual basis of the given basis of `𝔩`.
    pub fn lagrangian_complement(&self, l: &[Vector]) -> Result<Vec<Vector>, LieError> {
        let half: Vec<Vector> = self.piece(1).map(|i| self.basis(i)).collect();
        if l.len() * 2 != half.len() || l.iter().any(|v| self.grade_of(v).map_or(!v.is_zero(), |g| g != 1)) {
            return Err(LieError::GradeMismatch(
                "𝔩 must be a half-dimensional subspace of g_{1/2}".to_string(),
            ));
        }
        for a in l {
            for b in l {
                if !self.omega_plus(a, b).is_zero() {
                    return Err(LieError::AxiomViolation("𝔩 is not isotropic".to_string()));
                }
            }
        }
        let mut cols: Vec<Vec<Scalar>> = l.iter().map(|v| v.0.clone()).collect();
        cols.extend(half.iter().map(|v| v.0.clone()));
        let picked = independent_subset(&cols);
        if picked.len() != half.len() || picked[..l.len()] != (0..l.len()).collect::<Vec<_>>()[..] {
            return Err(LieError::SingularPairing);
        }
        let comp: Vec<Vector> = picked[l.len()..].iter().map(|&i| half[i - l.len()].clone()).collect();
        let (_, w) = self.dual_basis(l, &comp, Pairing::OmegaPlus)?;
        let k = l.len();
        let mut out = Vec::with_capacity(k);
        for kk in 0..k {
            let mut v = w[kk].clone();
            for (j, lj) in l.iter().enumerate() {
                let c = &self.omega_plus(&w[j], &w[kk]) / &Scalar::from_int(2);
                v.add_scaled(&c, lj);
            }
            out.push(v);
        }
        Ok(out)
    }

    /// Re-grades with `𝔤_{1/2}` based on `l` followed by `l′`
    /// (the `ω₊`-dual basis in a complementary isotropic subspace, computed
    /// if not given). Vectors are in adapted coordinates of `self`.
    pub fn with_isotropic(&self, l: &[Vector], lprime: Option<&[Vector]>) -> Result<GradedSetup, LieError> {
        let lp = match lprime {
            Some(v) => {
                let (_, dual) = self.dual_basis(l, v, Pairing::OmegaPlus)?;
                for a in &dual {
                    for b in &dual {
                        if !self.omega_plus(a, b).is_zero() {
                            return Err(LieError::AxiomViolation("𝔩′ is not isotropic".to_string()));
                        }
                    }
                }
                dual
            }
            None => self.lagrangian_complement(l)?,
        };
        let mut preferred: Vec<Vector> = l.iter().chain(lp.iter()).map(|v| self.unadapt(v)).collect();
        preferred.extend(self.preferred().iter().cloned());
        let opts = GradingOptions { preferred };
        let mut setup = grade_by_nilpotent(self.original(), &self.unadapt(self.f()), self.kind(), &opts)?;
        setup.set_lagrangian(l.len());
        Ok(setup)
    }
}
