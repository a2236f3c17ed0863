use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use super::{HierarchyError, LoopElement, LoopGrading};
use crate::diffpoly::DiffPoly;
use crate::lie::{GradedSetup, LieAlgebra, Vector};
use crate::linalg::{independent_subset, Matrix};
use crate::scalar::Scalar;

/// Kernel/image data of `ad Λ`, `Λ = f + zs`, on one slice, in coordinates
/// relative to [`LoopGrading::slice`].
#[derive(Clone, Debug)]
struct SliceData {
    basis: Vec<(i32, usize)>,
    next_basis: Vec<(i32, usize)>,
    kernel: Vec<Vec<Scalar>>,
    image: Vec<Vec<Scalar>>,
    /// Basis of `𝔥⊥` one step up (degree + 2), mapped bijectively onto `image`.
    next_perp: Vec<Vec<Scalar>>,
    /// Inverse of `[kernel | ad Λ(next_perp)]`.
    solver: Matrix,
}

/// `(z-power, basis index)`.
type Key = (i32, usize);

/// `𝔤((z⁻¹)) = 𝔥 ⊕ 𝔥⊥` with `𝔥 = ker ad Λ` and `𝔥⊥ = im ad Λ`, slice by
/// slice. Slices of degrees differing by the degree of `z` are related by
/// multiplication by `z`, so one period is computed and stored.
#[derive(Clone, Debug)]
pub struct HDecomposition {
    alg: LieAlgebra,
    grading: LoopGrading,
    lambda: LoopElement,
    base: BTreeMap<i32, SliceData>,
}

impl HDecomposition {
    /// Builds the splitting for `Λ = f + zs`; fails if `Λ` is not semisimple,
    /// i.e. if `ker ad Λ ⊕ im ad Λ` is not the whole slice in some degree.
    pub fn new(setup: &GradedSetup, s: &Vector) -> Result<Self, HierarchyError> {
        let sg = setup
            .grade_of(s)
            .filter(|&g| g > 0)
            .ok_or(HierarchyError::InvalidS)?;
        let grading = LoopGrading::new(setup, sg);
        let mut lambda = LoopElement::constant(setup.f(), 0);
        lambda += &LoopElement::constant(s, 1);
        let mut dec = HDecomposition {
            alg: setup.alg().clone(),
            grading,
            lambda,
            base: BTreeMap::new(),
        };
        for r in 0..dec.grading.z() {
            let data = dec.compute(r)?;
            dec.base.insert(r, data);
        }
        Ok(dec)
    }

    pub fn grading(&self) -> &LoopGrading {
        &self.grading
    }

    pub fn alg(&self) -> &LieAlgebra {
        &self.alg
    }

    /// `Λ = f + zs`.
    pub fn lambda(&self) -> &LoopElement {
        &self.lambda
    }

    /// `ad Λ` as a matrix from the slice of degree `deg` to the one of
    /// degree `deg − 2`.
    fn ad_lambda(&self, deg: i32) -> (Vec<Key>, Vec<Key>, Matrix) {
        let src = self.grading.slice(deg);
        let dst = self.grading.slice(deg - 2);
        let mut m = Matrix::zeros(dst.len(), src.len());
        for (c, &(k, i)) in src.iter().enumerate() {
            let img = self.lambda.bracket(&LoopElement::constant(&Vector::unit(self.grading.dim(), i), k), &self.alg);
            for (&(kk, j), p) in img.terms() {
                let r = dst.iter().position(|&b| b == (kk, j)).expect("ad Λ leaves the slice");
                m[(r, c)] = p.as_constant().expect("Λ has constant coefficients");
            }
        }
        (src, dst, m)
    }

    fn image_basis(m: &Matrix) -> Vec<Vec<Scalar>> {
        let cols: Vec<Vec<Scalar>> = (0..m.cols()).map(|j| m.column(j)).collect();
        independent_subset(&cols).into_iter().map(|j| cols[j].clone()).collect()
    }

    fn compute(&self, deg: i32) -> Result<SliceData, HierarchyError> {
        let (basis, _, a_here) = self.ad_lambda(deg);
        let n = basis.len();
        let kernel = if n == 0 { Vec::new() } else { a_here.nullspace() };
        let (next_basis, _, a_up) = self.ad_lambda(deg + 2);
        let image = if n == 0 { Vec::new() } else { Self::image_basis(&a_up) };
        let (_, _, a_up2) = self.ad_lambda(deg + 4);
        let next_perp = if next_basis.is_empty() { Vec::new() } else { Self::image_basis(&a_up2) };
        let mut cols = kernel.clone();
        for p in &next_perp {
            cols.push(a_up.apply(p));
        }
        if cols.len() != n || kernel.len() + image.len() != n {
            return Err(HierarchyError::NotSemisimple { degree: deg });
        }
        let solver = if n == 0 {
            Matrix::zeros(0, 0)
        } else {
            Matrix::from_columns(n, &cols)
                .inverse()
                .ok_or(HierarchyError::NotSemisimple { degree: deg })?
        };
        Ok(SliceData {
            basis,
            next_basis,
            kernel,
            image,
            next_perp,
            solver,
        })
    }

    /// Base slice data and the `z`-shift taking it to degree `deg`.
    fn data(&self, deg: i32) -> (&SliceData, i32) {
        let z = self.grading.z();
        let r = deg.rem_euclid(z);
        (&self.base[&r], (r - deg) / z)
    }

    fn to_element(basis: &[(i32, usize)], shift: i32, coords: &[Scalar]) -> LoopElement {
        let mut out = LoopElement::zero();
        for (&(k, i), c) in basis.iter().zip(coords) {
            out.add_term(k + shift, i, &DiffPoly::constant(c.clone()));
        }
        out
    }

    /// Basis of `𝔥` in degree `deg`.
    pub fn h_basis(&self, deg: i32) -> Vec<LoopElement> {
        let (d, m) = self.data(deg);
        d.kernel.iter().map(|v| Self::to_element(&d.basis, m, v)).collect()
    }

    /// Basis of `𝔥⊥` in degree `deg`.
    pub fn perp_basis(&self, deg: i32) -> Vec<LoopElement> {
        let (d, m) = self.data(deg);
        d.image.iter().map(|v| Self::to_element(&d.basis, m, v)).collect()
    }

    /// Dimension of the slice of degree `deg`.
    pub fn slice_dim(&self, deg: i32) -> usize {
        self.data(deg).0.basis.len()
    }

    /// Splits a homogeneous element `r` of degree `deg` as `h + [Λ, u]` with
    /// `h ∈ 𝔥_deg ⊗ V` and `u ∈ 𝔥⊥_{deg+2} ⊗ V`.
    pub fn split(&self, r: &LoopElement, deg: i32) -> Result<(LoopElement, LoopElement), HierarchyError> {
        let (d, m) = self.data(deg);
        let n = d.basis.len();
        let mut coords = alloc::vec![DiffPoly::zero(); n];
        for (&(k, i), p) in r.terms() {
            let pos = d
                .basis
                .iter()
                .position(|&(bk, bi)| bk + m == k && bi == i)
                .ok_or(HierarchyError::NotHomogeneous { degree: deg })?;
            coords[pos] = p.clone();
        }
        let mut c = alloc::vec![DiffPoly::zero(); n];
        for (row, cr) in c.iter_mut().enumerate() {
            for (col, x) in coords.iter().enumerate() {
                let a = &d.solver[(row, col)];
                if !a.is_zero() && !x.is_zero() {
                    *cr += &x.scale(a);
                }
            }
        }
        let mut h = LoopElement::zero();
        for (a, v) in d.kernel.iter().enumerate() {
            for (&(k, i), s) in d.basis.iter().zip(v) {
                if !s.is_zero() {
                    h.add_term(k + m, i, &c[a].scale(s));
                }
            }
        }
        let nk = d.kernel.len();
        let mut u = LoopElement::zero();
        for (b, v) in d.next_perp.iter().enumerate() {
            for (&(k, i), s) in d.next_basis.iter().zip(v) {
                if !s.is_zero() {
                    u.add_term(k + m, i, &c[nk + b].scale(s));
                }
            }
        }
        Ok((h, u))
    }

    /// Whether the constant element `a` commutes with `Λ`.
    pub fn in_h(&self, a: &LoopElement) -> bool {
        self.lambda.bracket(a, &self.alg).is_zero()
    }

    /// The part of `Z(𝔥)` in degree `deg`: elements of `𝔥_deg` commuting
    /// with `𝔥` in one full period of degrees (enough by `z`-periodicity).
    pub fn center(&self, deg: i32) -> Vec<LoopElement> {
        let own = self.h_basis(deg);
        if own.is_empty() {
            return Vec::new();
        }
        let mut others = Vec::new();
        for d in 0..self.grading.z() {
            others.extend(self.h_basis(d));
        }
        // Rows: coordinates of [own_a, other] over all (other, output key).
        let mut rows: BTreeMap<(usize, (i32, usize)), Vec<Scalar>> = BTreeMap::new();
        for (a, x) in own.iter().enumerate() {
            for (o, y) in others.iter().enumerate() {
                for (&key, p) in x.bracket(y, &self.alg).terms() {
                    let row = rows
                        .entry((o, key))
                        .or_insert_with(|| alloc::vec![Scalar::zero(); own.len()]);
                    row[a] = p.as_constant().expect("constant elements");
                }
            }
        }
        let rows: Vec<Vec<Scalar>> = rows.into_values().collect();
        let null = if rows.is_empty() {
            (0..own.len())
                .map(|a| (0..own.len()).map(|b| if a == b { Scalar::one() } else { Scalar::zero() }).collect())
                .collect()
        } else {
            Matrix::from_rows(own.len(), &rows).nullspace()
        };
        null.iter()
            .map(|c| {
                let mut e = LoopElement::zero();
                for (ca, x) in c.iter().zip(&own) {
                    e += &x.scale(ca);
                }
                e
            })
            .collect()
    }

    /// Whether `a` is a nonzero homogeneous element of `Z(𝔥)`; returns its degree.
    pub fn central_degree(&self, a: &LoopElement) -> Result<i32, HierarchyError> {
        let degs = a.degrees(&self.grading);
        if degs.len() != 1 || a.terms().any(|(_, p)| p.as_constant().is_none()) {
            return Err(HierarchyError::InvalidCenter);
        }
        let deg = degs[0];
        if !self.in_h(a) {
            return Err(HierarchyError::InvalidCenter);
        }
        for d in 0..self.grading.z() {
            for y in self.h_basis(d) {
                if !a.bracket(&y, &self.alg).is_zero() {
                    return Err(HierarchyError::InvalidCenter);
                }
            }
        }
        Ok(deg)
    }
}
