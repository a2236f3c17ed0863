use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{LieError, Vector};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

/// Sparse structure constants of one basis bracket: `[u_i, u_j] = Σ c·u_k`.
type Sparse = Vec<(usize, Scalar)>;

/// A Lie algebra given by structure constants and a symmetric invariant
/// bilinear form, optionally realized by matrices.
#[derive(Clone, Debug)]
pub struct LieAlgebra {
    name: String,
    labels: Vec<String>,
    brackets: Vec<Vec<Sparse>>,
    form: Matrix,
    matrices: Option<MatrixRep>,
}

/// Defining matrices of the basis together with a coordinate extractor.
#[derive(Clone, Debug)]
struct MatrixRep {
    n: usize,
    basis: Vec<Matrix>,
    /// Entries (row, col) whose values determine the coordinates.
    probe: Vec<(usize, usize)>,
    /// Inverse of the basis restricted to the probe entries.
    extract: Matrix,
}

impl LieAlgebra {
    /// Builds an algebra from structure constants `brackets[i][j]` and the
    /// Gram matrix of the form.
    pub fn from_structure(
        name: &str,
        labels: Vec<String>,
        brackets: Vec<Vec<Vec<(usize, Scalar)>>>,
        form: Matrix,
    ) -> Result<Self, LieError> {
        let dim = labels.len();
        if dim == 0 || brackets.len() != dim || form.rows() != dim || form.cols() != dim {
            return Err(LieError::InvalidDimension(format!(
                "{} labels, {} bracket rows, {}x{} form",
                dim,
                brackets.len(),
                form.rows(),
                form.cols()
            )));
        }
        Ok(LieAlgebra {
            name: name.to_string(),
            labels,
            brackets,
            form,
            matrices: None,
        })
    }

    /// Builds a matrix Lie algebra from basis matrices, with form
    /// `scale · tr(XY)`.
    pub fn from_matrices(
        name: &str,
        labels: Vec<String>,
        basis: Vec<Matrix>,
        scale: Scalar,
    ) -> Result<Self, LieError> {
        let dim = basis.len();
        if dim == 0 || labels.len() != dim {
            return Err(LieError::InvalidDimension(format!("{} matrices", dim)));
        }
        let n = basis[0].rows();
        let rep = MatrixRep::new(n, basis)?;
        let mut brackets = Vec::with_capacity(dim);
        for i in 0..dim {
            let mut row = Vec::with_capacity(dim);
            for j in 0..dim {
                let (a, b) = (&rep.basis[i], &rep.basis[j]);
                let c = commutator(a, b);
                let coords = rep.coords(&c).ok_or_else(|| {
                    LieError::AxiomViolation(format!(
                        "[{}, {}] leaves the span of the basis",
                        labels[i], labels[j]
                    ))
                })?;
                row.push(sparse(&coords));
            }
            brackets.push(row);
        }
        let mut form = Matrix::zeros(dim, dim);
        for i in 0..dim {
            for j in 0..dim {
                form[(i, j)] = &scale * &trace(&rep.basis[i].mul(&rep.basis[j]));
            }
        }
        Ok(LieAlgebra {
            name: name.to_string(),
            labels,
            brackets,
            form,
            matrices: Some(rep),
        })
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn basis(&self, i: usize) -> Vector {
        Vector::unit(self.dim(), i)
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Basis vector with the given label; panics if absent.
    pub fn named(&self, label: &str) -> Vector {
        let i = self
            .index_of(label)
            .unwrap_or_else(|| panic!("no basis element labelled {}", label));
        self.basis(i)
    }

    pub fn basis_bracket(&self, i: usize, j: usize) -> &[(usize, Scalar)] {
        &self.brackets[i][j]
    }

    pub fn form_matrix(&self) -> &Matrix {
        &self.form
    }

    pub fn bracket(&self, a: &Vector, b: &Vector) -> Vector {
        let mut r = Vector::zeros(self.dim());
        for i in a.support() {
            for j in b.support() {
                let ab = &a[i] * &b[j];
                for (k, c) in &self.brackets[i][j] {
                    r[*k] += &(&ab * c);
                }
            }
        }
        r
    }

    pub fn form(&self, a: &Vector, b: &Vector) -> Scalar {
        let mut acc = Scalar::zero();
        for i in a.support() {
            for j in b.support() {
                let g = &self.form[(i, j)];
                if !g.is_zero() {
                    acc += &(&(&a[i] * &b[j]) * g);
                }
            }
        }
        acc
    }

    /// Matrix of `ad a` (column j is `[a, u_j]`).
    pub fn ad(&self, a: &Vector) -> Matrix {
        let cols: Vec<Vec<Scalar>> = (0..self.dim())
            .map(|j| self.bracket(a, &self.basis(j)).0)
            .collect();
        Matrix::from_columns(self.dim(), &cols)
    }

    /// Killing form `tr(ad a ad b)`.
    pub fn killing(&self, a: &Vector, b: &Vector) -> Scalar {
        trace(&self.ad(a).mul(&self.ad(b)))
    }

    /// Exhaustive check of antisymmetry, Jacobi, invariance of the form and
    /// its nondegeneracy.
    pub fn check_axioms(&self) -> Result<(), LieError> {
        let n = self.dim();
        let basis: Vec<Vector> = (0..n).map(|i| self.basis(i)).collect();
        for i in 0..n {
            for j in 0..n {
                let ij = self.bracket(&basis[i], &basis[j]);
                let ji = self.bracket(&basis[j], &basis[i]);
                if !(&ij + &ji).is_zero() {
                    return Err(self.violation("antisymmetry", &[i, j]));
                }
                if self.form[(i, j)] != self.form[(j, i)] {
                    return Err(self.violation("form symmetry", &[i, j]));
                }
            }
        }
        for i in 0..n {
            for j in i + 1..n {
                let ij = self.bracket(&basis[i], &basis[j]);
                for k in j + 1..n {
                    let jk = self.bracket(&basis[j], &basis[k]);
                    let ki = self.bracket(&basis[k], &basis[i]);
                    let s = &(&self.bracket(&ij, &basis[k]) + &self.bracket(&jk, &basis[i]))
                        + &self.bracket(&ki, &basis[j]);
                    if !s.is_zero() {
                        return Err(self.violation("Jacobi identity", &[i, j, k]));
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..n {
                let ij = self.bracket(&basis[i], &basis[j]);
                for k in 0..n {
                    let lhs = self.form(&ij, &basis[k]);
                    let rhs = self.form(&basis[i], &self.bracket(&basis[j], &basis[k]));
                    if lhs != rhs {
                        return Err(self.violation("form invariance", &[i, j, k]));
                    }
                }
            }
        }
        if self.form.rank() < n {
            return Err(LieError::AxiomViolation("degenerate form".to_string()));
        }
        Ok(())
    }

    fn violation(&self, what: &str, idx: &[usize]) -> LieError {
        let names: Vec<&str> = idx.iter().map(|&i| self.labels[i].as_str()).collect();
        LieError::AxiomViolation(format!("{} fails on ({})", what, names.join(", ")))
    }

    /// The same algebra in a new basis; column `m` of `t` holds the old
    /// coordinates of new basis vector `m`.
    pub fn with_basis(&self, t: &Matrix, labels: Vec<String>) -> Result<Self, LieError> {
        let n = self.dim();
        let tinv = t.inverse().ok_or(LieError::SingularPairing)?;
        let newb: Vec<Vector> = (0..n).map(|m| Vector(t.column(m))).collect();
        let mut brackets = Vec::with_capacity(n);
        for a in &newb {
            let mut row = Vec::with_capacity(n);
            for b in &newb {
                let c = tinv.apply(&self.bracket(a, b).0);
                row.push(sparse(&c));
            }
            brackets.push(row);
        }
        let form = t.transpose().mul(&self.form).mul(t);
        let matrices = match &self.matrices {
            None => None,
            Some(rep) => {
                let basis = newb.iter().map(|v| rep.matrix_of(v)).collect();
                Some(MatrixRep::new(rep.n, basis)?)
            }
        };
        Ok(LieAlgebra {
            name: self.name.clone(),
            labels,
            brackets,
            form,
            matrices,
        })
    }

    /// Size of the defining matrices, if the algebra is a matrix algebra.
    pub fn matrix_size(&self) -> Option<usize> {
        self.matrices.as_ref().map(|r| r.n)
    }

    pub fn to_matrix(&self, v: &Vector) -> Option<Matrix> {
        self.matrices.as_ref().map(|r| r.matrix_of(v))
    }

    pub fn from_matrix(&self, m: &Matrix) -> Option<Vector> {
        self.matrices.as_ref().and_then(|r| r.coords(m)).map(Vector)
    }

    /// Human-readable name of a vector: a combination of matrix units `E_ij`
    /// for matrix algebras, otherwise of basis labels.
    pub fn describe(&self, v: &Vector) -> String {
        if let Some(rep) = &self.matrices {
            let m = rep.matrix_of(v);
            let mut terms = Vec::new();
            for i in 0..rep.n {
                for j in 0..rep.n {
                    let c = &m[(i, j)];
                    if !c.is_zero() {
                        let name = if rep.n < 10 {
                            format!("E{}{}", i + 1, j + 1)
                        } else {
                            format!("E{},{}", i + 1, j + 1)
                        };
                        terms.push((c.clone(), name));
                    }
                }
            }
            return combination(&terms);
        }
        let terms: Vec<(Scalar, String)> = v
            .support()
            .map(|i| (v[i].clone(), self.labels[i].clone()))
            .collect();
        combination(&terms)
    }
}

fn combination(terms: &[(Scalar, String)]) -> String {
    if terms.is_empty() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (c, name)) in terms.iter().enumerate() {
        let neg = c.is_negative_rational();
        let a = if neg { -c } else { c.clone() };
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { "-" } else { "+" });
        }
        if !a.is_one() {
            if a.is_atomic() {
                out.push_str(&format!("{}*", a));
            } else {
                out.push_str(&format!("({})*", a));
            }
        }
        out.push_str(name);
    }
    out
}

fn sparse(coords: &[Scalar]) -> Sparse {
    coords
        .iter()
        .enumerate()
        .filter(|(_, c)| !c.is_zero())
        .map(|(k, c)| (k, c.clone()))
        .collect()
}

fn commutator(a: &Matrix, b: &Matrix) -> Matrix {
    let ab = a.mul(b);
    let ba = b.mul(a);
    let mut r = ab;
    for i in 0..r.rows() {
        for j in 0..r.cols() {
            let t = ba[(i, j)].clone();
            r[(i, j)] -= &t;
        }
    }
    r
}

fn trace(m: &Matrix) -> Scalar {
    let mut t = Scalar::zero();
    for i in 0..m.rows() {
        t += &m[(i, i)];
    }
    t
}

impl MatrixRep {
    fn new(n: usize, basis: Vec<Matrix>) -> Result<Self, LieError> {
        let dim = basis.len();
        let flat: Vec<Vec<Scalar>> = basis
            .iter()
            .map(|m| {
                let mut v = Vec::with_capacity(n * n);
                for i in 0..n {
                    for j in 0..n {
                        v.push(m[(i, j)].clone());
                    }
                }
                v
            })
            .collect();
        let big = Matrix::from_columns(n * n, &flat);
        // Independent rows of `big` are the pivot columns of its transpose.
        let (_, rows) = big.transpose().rref();
        if rows.len() < dim {
            return Err(LieError::InvalidDimension(
                "basis matrices are linearly dependent".to_string(),
            ));
        }
        let mut sub = Matrix::zeros(dim, dim);
        for (r, &row) in rows.iter().enumerate() {
            for c in 0..dim {
                sub[(r, c)] = big[(row, c)].clone();
            }
        }
        let extract = sub.inverse().ok_or(LieError::SingularPairing)?;
        let probe = rows.iter().map(|&r| (r / n, r % n)).collect();
        Ok(MatrixRep {
            n,
            basis,
            probe,
            extract,
        })
    }

    fn matrix_of(&self, v: &Vector) -> Matrix {
        let mut m = Matrix::zeros(self.n, self.n);
        for k in v.support() {
            let b = &self.basis[k];
            for i in 0..self.n {
                for j in 0..self.n {
                    if !b[(i, j)].is_zero() {
                        let t = &v[k] * &b[(i, j)];
                        m[(i, j)] += &t;
                    }
                }
            }
        }
        m
    }

    /// Coordinates of a matrix in the basis, or `None` if outside the span.
    fn coords(&self, m: &Matrix) -> Option<Vec<Scalar>> {
        let probe: Vec<Scalar> = self.probe.iter().map(|&(i, j)| m[(i, j)].clone()).collect();
        let c = self.extract.apply(&probe);
        let back = self.matrix_of(&Vector(c.clone()));
        if &back == m {
            Some(c)
        } else {
            None
        }
    }
}
