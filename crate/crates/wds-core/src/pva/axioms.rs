use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use rand_core::RngCore;

use super::{BracketTable, Part};
use crate::diffpoly::{BiLambdaPoly, DiffPoly, LambdaPoly, Monomial, Var};
use crate::scalar::Scalar;

/// A failed axiom instance.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub axiom: String,
    pub detail: String,
}

#[derive(Clone, Debug, Default)]
pub struct AxiomReport {
    pub checks: usize,
    pub violations: Vec<Violation>,
}

impl AxiomReport {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    fn record(&mut self, ok: bool, axiom: &str, detail: impl FnOnce() -> String) {
        self.checks += 1;
        if !ok {
            self.violations.push(Violation {
                axiom: axiom.into(),
                detail: detail(),
            });
        }
    }
}

/// A random differential polynomial of degree at most 2 in derivatives of
/// order at most 2 of `gens`, with coefficients in `{−2,−1,1,2}`.
pub fn random_poly<R: RngCore>(rng: &mut R, gens: &[u32]) -> DiffPoly {
    let pick = |rng: &mut R, n: usize| (rng.next_u32() as usize) % n;
    let mut p = DiffPoly::zero();
    let nterms = 1 + pick(rng, 3);
    for _ in 0..nterms {
        let c = [-2, -1, 1, 2][pick(rng, 4)];
        let deg = pick(rng, 3);
        let mut m = Monomial::one();
        for _ in 0..deg {
            let v = Var::new(gens[pick(rng, gens.len())], pick(rng, 3) as u32);
            m = m.mul(&Monomial::var(v));
        }
        p.add_term(Scalar::from_int(c), m);
    }
    p
}

type Br<'a> = dyn Fn(&DiffPoly, &DiffPoly) -> LambdaPoly + 'a;

/// `{a_λ{b_μ c}} − {b_μ{a_λ c}} − {{a_λ b}_{λ+μ} c}`.
pub(crate) fn jacobiator(br: &Br<'_>, a: &DiffPoly, b: &DiffPoly, c: &DiffPoly) -> BiLambdaPoly {
    let one = Scalar::one();
    let minus = Scalar::from_int(-1);
    let mut acc = BiLambdaPoly::zero();
    let bc = br(b, c);
    let parts: Vec<LambdaPoly> = bc.coeffs().iter().map(|cm| br(a, cm)).collect();
    acc.add_mu_expansion(&parts, &one);
    let ac = br(a, c);
    let parts: Vec<LambdaPoly> = ac.coeffs().iter().map(|cl| br(b, cl)).collect();
    acc.add_lambda_expansion(&parts, &minus);
    let ab = br(a, b);
    for (l, el) in ab.coeffs().iter().enumerate() {
        let r = br(el, c);
        for (p, rp) in r.coeffs().iter().enumerate() {
            acc.add_binomial(l, p, &-rp);
        }
    }
    acc
}

fn check_one<R: RngCore>(
    report: &mut AxiomReport,
    name: &str,
    br: &Br<'_>,
    gens: &[u32],
    samples: usize,
    rng: &mut R,
) {
    let u: Vec<DiffPoly> = gens.iter().map(|&g| DiffPoly::gen(g)).collect();
    for (i, a) in u.iter().enumerate() {
        for (j, b) in u.iter().enumerate() {
            let lhs = br(a, b);
            let rhs = -&br(b, a).skew_substitute();
            report.record(lhs == rhs, "skew-symmetry", || {
                format!("{}: generators ({}, {})", name, gens[i], gens[j])
            });
        }
    }
    for (i, a) in u.iter().enumerate() {
        for (j, b) in u.iter().enumerate() {
            for (k, c) in u.iter().enumerate() {
                let jac = jacobiator(br, a, b, c);
                report.record(jac.is_zero(), "Jacobi identity", || {
                    format!("{}: generators ({}, {}, {})", name, gens[i], gens[j], gens[k])
                });
            }
        }
    }
    for case in 0..samples {
        let g = random_poly(rng, gens);
        let h = random_poly(rng, gens);
        let k = random_poly(rng, gens);
        let gh = br(&g, &h);
        let detail = || format!("{}: sample {}", name, case);
        report.record(gh == -&br(&h, &g).skew_substitute(), "skew-symmetry", detail);
        report.record(br(&g.derivative(), &h) == -&gh.shift(1), "sesquilinearity (left)", detail);
        report.record(br(&g, &h.derivative()) == gh.lambda_plus_d(), "sesquilinearity (right)", detail);
        let left = &br(&g, &h).mul_poly(&k) + &br(&g, &k).mul_poly(&h);
        report.record(br(&g, &(&h * &k)) == left, "left Leibniz", detail);
        let right = &BracketTable::apply_shifted(&br(&g, &k), &h)
            + &BracketTable::apply_shifted(&br(&h, &k), &g);
        report.record(br(&(&g * &h), &k) == right, "right Leibniz", detail);
        if case % 4 == 0 {
            report.record(jacobiator(br, &g, &h, &k).is_zero(), "Jacobi identity", detail);
        }
    }
}

/// Exhaustive generator-level skew-symmetry and Jacobi checks plus
/// `samples` random composite checks (skew-symmetry, sesquilinearity, both
/// Leibniz rules and, on every fourth sample, Jacobi), for `H`, `K` and the
/// pencil `H − K`.
pub fn check_pva_axioms<R: RngCore>(
    table: &BracketTable,
    gens: &[u32],
    samples: usize,
    rng: &mut R,
) -> AxiomReport {
    let mut report = AxiomReport::default();
    let h = |a: &DiffPoly, b: &DiffPoly| table.master(Part::H, a, b);
    let k = |a: &DiffPoly, b: &DiffPoly| table.master(Part::K, a, b);
    let pencil = |a: &DiffPoly, b: &DiffPoly| &table.master(Part::H, a, b) - &table.master(Part::K, a, b);
    check_one(&mut report, "H", &h, gens, samples, rng);
    check_one(&mut report, "K", &k, gens, samples, rng);
    check_one(&mut report, "H-K", &pencil, gens, samples, rng);
    report
}
