use alloc::collections::BTreeMap;
use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;
use core::ops::Range;

use super::{LieAlgebra, LieError, Vector};
use crate::linalg::{independent_subset, Matrix};
use crate::scalar::Scalar;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum NilpotentKind {
    Minimal,
    Short,
}

/// Basis preferences: vectors (in the coordinates of the input algebra) that
/// the adapted basis should use, in order, wherever they fit a graded piece.
#[derive(Clone, Debug, Default)]
pub struct GradingOptions {
    pub preferred: Vec<Vector>,
}

/// An sl₂-triple `{f, 2x, e}` with the ad x eigenspace decomposition.
///
/// The algebra is re-expressed in a basis adapted to the decomposition,
/// ordered `𝔤_{-1}, 𝔤_{-1/2}, 𝔤₀^f, 𝔤₀^⊥, 𝔤_{1/2}, 𝔤_1`, where `𝔤₀^⊥` is
/// the orthogonal complement `[e, 𝔤_{-1}]` of `𝔤₀^f` in `𝔤₀`. Every graded
/// piece is therefore a range of basis indices. Grades are stored doubled so
/// they are integers.
#[derive(Clone, Debug)]
pub struct GradedSetup {
    original: LieAlgebra,
    to_original: Matrix,
    from_original: Matrix,
    alg: LieAlgebra,
    kind: NilpotentKind,
    e: Vector,
    x: Vector,
    f: Vector,
    grades: Vec<i32>,
    pieces: BTreeMap<i32, Range<usize>>,
    g0f: Range<usize>,
    g0perp: Range<usize>,
    form_dual: Vec<Vector>,
    omega_dual: Vec<Vector>,
    preferred: Vec<Vector>,
    lagrangian: Option<usize>,
}

/// Completes `f` to an sl₂-triple, grades the algebra by `ad x` and caches the
/// dual bases.
pub fn grade_by_nilpotent(
    alg: &LieAlgebra,
    f: &Vector,
    kind: NilpotentKind,
    opts: &GradingOptions,
) -> Result<GradedSetup, LieError> {
    let n = alg.dim();
    if f.dim() != n {
        return Err(LieError::InvalidDimension(format!(
            "f has {} coordinates, algebra has dimension {}",
            f.dim(),
            n
        )));
    }
    if f.is_zero() {
        return Err(LieError::NotNilpotent("f = 0".to_string()));
    }
    let (x, e) = complete_triple(alg, f)?;

    let adx = alg.ad(&x);
    let mut eigen: BTreeMap<i32, Vec<Vector>> = BTreeMap::new();
    let mut total = 0;
    for i2 in -4..=4 {
        let mut m = adx.clone();
        let shift = Scalar::from_ratio(i2 as i64, 2);
        for k in 0..n {
            m[(k, k)] = &m[(k, k)] - &shift;
        }
        let ns: Vec<Vector> = m.nullspace().into_iter().map(Vector).collect();
        if !ns.is_empty() {
            total += ns.len();
            eigen.insert(i2, ns);
        }
    }
    if total != n {
        return Err(LieError::WrongKind(
            "ad x has eigenvalues outside [-2, 2] ∩ ½ℤ".to_string(),
        ));
    }
    let dim_of = |i2: i32| eigen.get(&i2).map_or(0, Vec::len);
    match kind {
        NilpotentKind::Minimal => {
            if eigen.keys().any(|&k| k.abs() > 2) || dim_of(2) != 1 || dim_of(-2) != 1 {
                return Err(LieError::WrongKind(format!(
                    "minimal needs eigenvalues in {{-1,-1/2,0,1/2,1}} and dim 𝔤_1 = 1 (found dim {})",
                    dim_of(2)
                )));
            }
        }
        NilpotentKind::Short => {
            if eigen.keys().any(|&k| k != 0 && k != 2 && k != -2) || dim_of(2) == 0 {
                return Err(LieError::WrongKind(
                    "short needs eigenvalues in {-1,0,1}".to_string(),
                ));
            }
        }
    }

    let adf = alg.ad(f);
    let g0 = eigen.get(&0).cloned().unwrap_or_default();
    let g0f: Vec<Vector> = {
        let cols: Vec<Vec<Scalar>> = g0.iter().map(|b| adf.apply(&b.0)).collect();
        let m = Matrix::from_columns(n, &cols);
        m.nullspace()
            .into_iter()
            .map(|c| {
                let mut v = Vector::zeros(n);
                for (k, ck) in c.iter().enumerate() {
                    v.add_scaled(ck, &g0[k]);
                }
                normalize_sign(v)
            })
            .collect()
    };
    let g0perp: Vec<Vector> = match kind {
        NilpotentKind::Minimal => alloc::vec![x.clone()],
        NilpotentKind::Short => {
            let imgs: Vec<Vector> = eigen[&2].iter().map(|b| alg.bracket(f, b)).collect();
            let cols: Vec<Vec<Scalar>> = imgs.iter().map(|v| v.0.clone()).collect();
            independent_subset(&cols)
                .into_iter()
                .map(|k| normalize_sign(imgs[k].clone()))
                .collect()
        }
    };
    if g0f.len() + g0perp.len() != g0.len() {
        return Err(LieError::WrongKind(format!(
            "𝔤₀^f ({}) and its complement ({}) do not fill 𝔤₀ ({})",
            g0f.len(),
            g0perp.len(),
            g0.len()
        )));
    }

    let mut columns: Vec<Vector> = Vec::with_capacity(n);
    let mut pieces = BTreeMap::new();
    let mut grades = Vec::with_capacity(n);
    let mut g0f_range = 0..0;
    let mut g0perp_range = 0..0;
    for (&i2, basis) in &eigen {
        let start = columns.len();
        if i2 == 0 {
            let a = prefer(&g0f, &opts.preferred);
            columns.extend(a);
            g0f_range = start..columns.len();
            let b = prefer(&g0perp, &opts.preferred);
            columns.extend(b);
            g0perp_range = g0f_range.end..columns.len();
        } else {
            columns.extend(prefer(basis, &opts.preferred));
        }
        grades.extend(core::iter::repeat_n(i2, columns.len() - start));
        pieces.insert(i2, start..columns.len());
    }
    let cols: Vec<Vec<Scalar>> = columns.iter().map(|v| v.0.clone()).collect();
    let to_original = Matrix::from_columns(n, &cols);
    let from_original = to_original
        .inverse()
        .ok_or_else(|| LieError::WrongKind("graded pieces are not independent".to_string()))?;
    let labels: Vec<String> = columns
        .iter()
        .map(|v| {
            let supp: Vec<usize> = v.support().collect();
            if supp.len() == 1 && v[supp[0]].is_one() {
                alg.label(supp[0]).to_string()
            } else {
                alg.describe(v)
            }
        })
        .collect();
    let adapted = alg.with_basis(&to_original, labels)?;
    let conv = |v: &Vector| Vector(from_original.apply(&v.0));
    let (e, x, f) = (conv(&e), conv(&x), conv(f));

    let form_inv = adapted
        .form_matrix()
        .inverse()
        .ok_or(LieError::SingularPairing)?;
    let form_dual: Vec<Vector> = (0..n).map(|j| Vector(form_inv.column(j))).collect();

    let mut setup = GradedSetup {
        original: alg.clone(),
        to_original,
        from_original,
        alg: adapted,
        kind,
        e,
        x,
        f,
        grades,
        pieces,
        g0f: g0f_range,
        g0perp: g0perp_range,
        form_dual,
        omega_dual: Vec::new(),
        preferred: opts.preferred.clone(),
        lagrangian: None,
    };
    if kind == NilpotentKind::Minimal {
        let half: Vec<Vector> = setup.piece(1).map(|i| setup.alg.basis(i)).collect();
        let (_, dual) = setup.dual_basis(&half, &half, super::Pairing::OmegaPlus)?;
        setup.omega_dual = dual;
    }
    setup.check()?;
    Ok(setup)
}

/// Solves `[x,f] = −f` with `x ⟂ 𝔤^f` (so `x ∈ [f,𝔤]`), then `[x,e] = e`,
/// `[e,f] = 2x`; free coordinates are set to zero.
fn complete_triple(alg: &LieAlgebra, f: &Vector) -> Result<(Vector, Vector), LieError> {
    let n = alg.dim();
    let adf = alg.ad(f);
    let centralizer = adf.nullspace();
    let b = alg.form_matrix();
    let mut rows: Vec<Vec<Scalar>> = (0..n).map(|i| adf.row(i).to_vec()).collect();
    let mut rhs = f.0.clone();
    for c in &centralizer {
        rows.push(b.apply(c));
        rhs.push(Scalar::zero());
    }
    let x = Matrix::from_rows(n, &rows)
        .solve(&rhs)
        .map(Vector)
        .ok_or_else(|| LieError::NotNilpotent("no x with [x,f] = -f in [f,g]".to_string()))?;
    let adx = alg.ad(&x);
    let mut rows: Vec<Vec<Scalar>> = Vec::with_capacity(2 * n);
    let mut rhs = Vec::with_capacity(2 * n);
    for i in 0..n {
        let mut r = adx.row(i).to_vec();
        r[i] = &r[i] - &Scalar::one();
        rows.push(r);
        rhs.push(Scalar::zero());
    }
    for i in 0..n {
        rows.push(adf.row(i).to_vec());
        rhs.push(Scalar::from_int(-2) * &x[i]);
    }
    let e = Matrix::from_rows(n, &rows)
        .solve(&rhs)
        .map(Vector)
        .ok_or_else(|| LieError::NotNilpotent("no e completing the triple".to_string()))?;
    Ok((x, e))
}

/// Flips the sign so the first nonzero rational coordinate is positive.
fn normalize_sign(v: Vector) -> Vector {
    match v.iter().find(|c| !c.is_zero()) {
        Some(c) if c.is_negative_rational() => -&v,
        _ => v,
    }
}

/// A basis of `span(basis)` starting with the preferred vectors that lie in
/// it.
fn prefer(basis: &[Vector], preferred: &[Vector]) -> Vec<Vector> {
    let base_cols: Vec<Vec<Scalar>> = basis.iter().map(|v| v.0.clone()).collect();
    let rank = base_cols.len();
    let mut chosen: Vec<Vec<Scalar>> = Vec::new();
    for p in preferred {
        if p.dim() != basis.first().map_or(0, Vector::dim) {
            continue;
        }
        let mut test = base_cols.clone();
        test.push(p.0.clone());
        if independent_subset(&test).len() > rank {
            continue;
        }
        let mut cand = chosen.clone();
        cand.push(p.0.clone());
        if independent_subset(&cand).len() == cand.len() {
            chosen = cand;
        }
    }
    for b in &base_cols {
        if chosen.len() == rank {
            break;
        }
        let mut cand = chosen.clone();
        cand.push(b.clone());
        if independent_subset(&cand).len() == cand.len() {
            chosen = cand;
        }
    }
    chosen.into_iter().map(Vector).collect()
}

impl GradedSetup {
    fn check(&self) -> Result<(), LieError> {
        let g = &self.alg;
        let two = Scalar::from_int(2);
        let ok = g.bracket(&self.x, &self.e) == self.e
            && g.bracket(&self.x, &self.f) == -&self.f
            && g.bracket(&self.e, &self.f) == self.x.scale(&two);
        if !ok {
            return Err(LieError::NotNilpotent("sl2 relations fail".to_string()));
        }
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let target = self.grades[i] + self.grades[j];
                if g.basis_bracket(i, j).iter().any(|(k, _)| self.grades[*k] != target) {
                    return Err(LieError::WrongKind(format!(
                        "[{}, {}] is not homogeneous",
                        g.label(i),
                        g.label(j)
                    )));
                }
            }
        }
        if self.xx() != &g.form(&self.e, &self.f) / &two {
            return Err(LieError::AxiomViolation("(x|x) != (e|f)/2".to_string()));
        }
        Ok(())
    }

    /// The algebra in the adapted basis.
    pub fn alg(&self) -> &LieAlgebra {
        &self.alg
    }

    /// The algebra as originally given.
    pub fn original(&self) -> &LieAlgebra {
        &self.original
    }

    pub fn kind(&self) -> NilpotentKind {
        self.kind
    }

    pub fn dim(&self) -> usize {
        self.alg.dim()
    }

    pub fn e(&self) -> &Vector {
        &self.e
    }

    pub fn x(&self) -> &Vector {
        &self.x
    }

    pub fn f(&self) -> &Vector {
        &self.f
    }

    /// `(x|x)`.
    pub fn xx(&self) -> Scalar {
        self.alg.form(&self.x, &self.x)
    }

    /// Twice the ad x eigenvalue of basis vector `i`.
    pub fn grade2(&self, i: usize) -> i32 {
        self.grades[i]
    }

    /// Twice the depth (largest eigenvalue).
    pub fn depth2(&self) -> i32 {
        *self.pieces.keys().next_back().unwrap()
    }

    /// Index range of `𝔤_{i2/2}` (empty if the piece is zero).
    pub fn piece(&self, i2: i32) -> Range<usize> {
        self.pieces.get(&i2).cloned().unwrap_or(0..0)
    }

    pub fn g0f(&self) -> Range<usize> {
        self.g0f.clone()
    }

    pub fn g0perp(&self) -> Range<usize> {
        self.g0perp.clone()
    }

    /// Doubled grade of a homogeneous nonzero vector.
    pub fn grade_of(&self, v: &Vector) -> Option<i32> {
        let mut g = None;
        for i in v.support() {
            match g {
                None => g = Some(self.grades[i]),
                Some(h) if h != self.grades[i] => return None,
                _ => {}
            }
        }
        g
    }

    /// Basis indices of `𝔤^f` in the adapted basis.
    pub fn gf_indices(&self) -> Vec<usize> {
        let mut v: Vec<usize> = self.piece(-2).collect();
        v.extend(self.piece(-1));
        v.extend(self.g0f());
        v
    }

    pub fn basis(&self, i: usize) -> Vector {
        self.alg.basis(i)
    }

    /// Dual basis vector `u^i` with `(u_j|u^i) = δ_ij`.
    pub fn dual(&self, i: usize) -> &Vector {
        &self.form_dual[i]
    }

    /// `ω₊`-dual `v^k` of the basis vector `v_k` of `𝔤_{1/2}` (minimal kind),
    /// indexed by position within the piece.
    pub fn omega_dual(&self, k: usize) -> &Vector {
        &self.omega_dual[k]
    }

    pub fn omega_plus(&self, a: &Vector, b: &Vector) -> Scalar {
        self.alg.form(&self.f, &self.alg.bracket(a, b))
    }

    pub fn omega_minus(&self, a: &Vector, b: &Vector) -> Scalar {
        self.alg.form(&self.e, &self.alg.bracket(a, b))
    }

    pub fn bracket(&self, a: &Vector, b: &Vector) -> Vector {
        self.alg.bracket(a, b)
    }

    pub fn form(&self, a: &Vector, b: &Vector) -> Scalar {
        self.alg.form(a, b)
    }

    pub fn label(&self, i: usize) -> &str {
        self.alg.label(i)
    }

    /// Converts original coordinates to adapted ones.
    pub fn adapt(&self, v: &Vector) -> Vector {
        Vector(self.from_original.apply(&v.0))
    }

    /// Converts adapted coordinates to original ones.
    pub fn unadapt(&self, v: &Vector) -> Vector {
        Vector(self.to_original.apply(&v.0))
    }

    /// Human-readable description in terms of the original basis.
    pub fn describe(&self, v: &Vector) -> String {
        self.original.describe(&self.unadapt(v))
    }

    /// Parses a combination like `E11-2E22+E33` or `1/2*E13+s1*E24` of matrix
    /// units (matrix algebras) or original basis labels; coefficient factors
    /// may be rationals or parameter names joined by `*`.
    pub fn elem(&self, text: &str) -> Vector {
        let orig = parse_combination(&self.original, text)
            .unwrap_or_else(|| panic!("cannot parse Lie algebra element {:?}", text));
        self.adapt(&orig)
    }

    pub(crate) fn preferred(&self) -> &[Vector] {
        &self.preferred
    }

    pub(crate) fn set_lagrangian(&mut self, k: usize) {
        self.lagrangian = Some(k);
    }

    /// Dimension of the maximal isotropic subspace `𝔩` if the setup was built
    /// by [`GradedSetup::with_isotropic`]; `𝔩` is then spanned by the first
    /// basis vectors of `𝔤_{1/2}` and `𝔩′` by the rest.
    pub fn lagrangian(&self) -> Option<usize> {
        self.lagrangian
    }

    /// The dual Coxeter number candidate `κ(x|x)` from the Killing form.
    pub fn killing_xx(&self) -> Scalar {
        self.alg.killing(&self.x, &self.x)
    }
}

impl LieAlgebra {
    /// Parses a combination of basis labels or matrix units, as in
    /// [`GradedSetup::elem`].
    pub fn parse(&self, text: &str) -> Option<Vector> {
        parse_combination(self, text)
    }
}

fn parse_combination(alg: &LieAlgebra, text: &str) -> Option<Vector> {
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for ch in text.chars().filter(|c| !c.is_whitespace()) {
        if (ch == '+' || ch == '-') && !cur.is_empty() {
            terms.push((neg, core::mem::take(&mut cur)));
            neg = ch == '-';
        } else if ch == '-' {
            neg = !neg;
        } else if ch != '+' {
            cur.push(ch);
        }
    }
    if !cur.is_empty() {
        terms.push((neg, cur));
    }
    let n = alg.dim();
    let size = alg.matrix_size();
    let mut matrix = size.map(|s| Matrix::zeros(s, s));
    let mut vec = Vector::zeros(n);
    for (neg, term) in terms {
        let mut factors: Vec<&str> = term.split('*').collect();
        let mut last = factors.pop()?;
        let mut coeff = if neg { Scalar::from_int(-1) } else { Scalar::one() };
        // A leading numeric prefix glued to the name, as in `2E22`.
        let digits = last.find(|c: char| c.is_ascii_alphabetic()).unwrap_or(last.len());
        if digits > 0 {
            coeff = &coeff * &parse_number(&last[..digits])?;
            last = &last[digits..];
        }
        for fct in factors {
            coeff = &coeff
                * &match parse_number(fct) {
                    Some(q) => q,
                    None => Scalar::param(fct),
                };
        }
        if let Some(i) = alg.index_of(last) {
            vec.add_scaled(&coeff, &alg.basis(i));
            continue;
        }
        let m = matrix.as_mut()?;
        let s = size.unwrap();
        let idx = last.strip_prefix('E')?;
        let (i, j) = if s < 10 {
            let b = idx.as_bytes();
            if b.len() != 2 {
                return None;
            }
            ((b[0] - b'1') as usize, (b[1] - b'1') as usize)
        } else {
            let (a, b) = idx.split_once(',')?;
            (a.parse::<usize>().ok()? - 1, b.parse::<usize>().ok()? - 1)
        };
        m[(i, j)] = &m[(i, j)] + &coeff;
    }
    if let Some(m) = matrix {
        let v = alg.from_matrix(&m)?;
        return Some(&v + &vec);
    }
    Some(vec)
}

fn parse_number(s: &str) -> Option<Scalar> {
    match s.split_once('/') {
        Some((a, b)) => Some(Scalar::from_ratio(a.parse().ok()?, b.parse().ok()?)),
        None => s.parse::<i64>().ok().map(Scalar::from_int),
    }
}
