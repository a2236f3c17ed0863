use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{LieAlgebra, LieError};
use crate::linalg::Matrix;
use crate::scalar::Scalar;

fn unit(n: usize, i: usize, j: usize) -> Matrix {
    let mut m = Matrix::zeros(n, n);
    m[(i, j)] = Scalar::one();
    m
}

fn eij(n: usize, i: usize, j: usize) -> String {
    if n < 10 {
        format!("E{}{}", i + 1, j + 1)
    } else {
        format!("E{},{}", i + 1, j + 1)
    }
}

/// sl_n with basis `E_ij` (i ≠ j, row-major) followed by
/// `H_i = E_ii − E_{i+1,i+1}`, and trace form.
pub fn build_sl(n: usize) -> Result<LieAlgebra, LieError> {
    build_sl_scaled(n, Scalar::one())
}

/// sl_n with form `scale · tr(XY)`; a symbolic scale makes `c = (E_ij|E_ji)` a
/// parameter.
pub fn build_sl_scaled(n: usize, scale: Scalar) -> Result<LieAlgebra, LieError> {
    if n < 2 {
        return Err(LieError::InvalidDimension(format!("sl_{} needs n >= 2", n)));
    }
    let mut labels = Vec::new();
    let mut basis = Vec::new();
    for i in 0..n {
        for j in 0..n {
            if i != j {
                labels.push(eij(n, i, j));
                basis.push(unit(n, i, j));
            }
        }
    }
    for i in 0..n - 1 {
        let mut h = unit(n, i, i);
        h[(i + 1, i + 1)] = Scalar::from_int(-1);
        labels.push(format!("H{}", i + 1));
        basis.push(h);
    }
    LieAlgebra::from_matrices(&format!("sl{}", n), labels, basis, scale)
}

/// sp_n (n = 2m) as block matrices `[[A, B], [C, −Aᵀ]]` with `B`, `C`
/// symmetric, preserving `J = [[0, 1], [−1, 0]]`; trace form.
pub fn build_sp(n: usize) -> Result<LieAlgebra, LieError> {
    if n < 2 || !n.is_multiple_of(2) {
        return Err(LieError::InvalidDimension(format!(
            "sp_{} needs an even n >= 2",
            n
        )));
    }
    let m = n / 2;
    let mut labels = Vec::new();
    let mut basis = Vec::new();
    for i in 0..m {
        for j in 0..m {
            let mut a = unit(n, i, j);
            a[(m + j, m + i)] = Scalar::from_int(-1);
            labels.push(format!("A{}{}", i + 1, j + 1));
            basis.push(a);
        }
    }
    for i in 0..m {
        for j in i..m {
            let mut b = unit(n, i, m + j);
            b[(j, m + i)] = Scalar::one();
            labels.push(format!("B{}{}", i + 1, j + 1));
            basis.push(b);
        }
    }
    for i in 0..m {
        for j in i..m {
            let mut c = unit(n, m + i, j);
            c[(m + j, i)] = Scalar::one();
            labels.push(format!("C{}{}", i + 1, j + 1));
            basis.push(c);
        }
    }
    LieAlgebra::from_matrices(&format!("sp{}", n), labels, basis, Scalar::one())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sl2_relations() {
        let g = build_sl(2).unwrap();
        let (e, f, h) = (g.named("E12"), g.named("E21"), g.named("H1"));
        assert_eq!(g.bracket(&e, &f), h);
        assert_eq!(g.bracket(&h, &e), e.scale(&Scalar::from_int(2)));
        assert_eq!(g.form(&e, &f), Scalar::one());
    }

    #[test]
    fn sl3_trace_form() {
        let g = build_sl(3).unwrap();
        assert_eq!(g.form(&g.named("E13"), &g.named("E31")), Scalar::one());
        assert_eq!(g.dim(), 8);
    }

    #[test]
    fn sl4_axioms() {
        let g = build_sl(4).unwrap();
        assert_eq!(g.dim(), 15);
        g.check_axioms().unwrap();
    }

    #[test]
    fn sp_dimensions_and_axioms() {
        assert_eq!(build_sp(2).unwrap().dim(), 3);
        let g = build_sp(4).unwrap();
        assert_eq!(g.dim(), 10);
        g.check_axioms().unwrap();
        assert!(matches!(build_sp(3), Err(LieError::InvalidDimension(_))));
        assert!(matches!(build_sl(1), Err(LieError::InvalidDimension(_))));
    }

    #[test]
    fn sp2_matches_sl2() {
        let sp = build_sp(2).unwrap();
        let sl = build_sl(2).unwrap();
        // A11 ↦ H1, B11 ↦ E12, C11 ↦ E21
        let map = [("A11", "H1"), ("B11", "E12"), ("C11", "E21")];
        for (a, x) in map {
            for (b, y) in map {
                let lhs = sp.bracket(&sp.named(a), &sp.named(b));
                let rhs = sl.bracket(&sl.named(x), &sl.named(y));
                let lhs_in_sl = map.iter().fold(crate::lie::Vector::zeros(3), |mut acc, (p, q)| {
                    let i = sp.index_of(p).unwrap();
                    acc.add_scaled(&lhs[i], &sl.named(q));
                    acc
                });
                assert_eq!(lhs_in_sl, rhs);
            }
        }
    }

    #[test]
    fn symbolic_scale() {
        let c = Scalar::param("c");
        let g = build_sl_scaled(3, c.clone()).unwrap();
        assert_eq!(g.form(&g.named("E12"), &g.named("E21")), c);
        g.check_axioms().unwrap();
    }
}
