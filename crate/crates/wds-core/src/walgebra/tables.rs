use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use super::{WGenerators, WVariant};
use crate::diffpoly::{DiffPoly, LambdaPoly};
use crate::lie::{LieError, Vector};
use crate::pva::ZBracket;
use crate::scalar::Scalar;

/// The closed-form tables that can be checked against computed brackets.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Table {
    /// Brackets among `L`, `φ(a)`, `ψ(u)` for a minimal nilpotent, except
    /// `ψ`–`ψ`.
    Table2,
    /// `{ψ(u)_λ ψ(u₁)}` for a minimal nilpotent.
    EqPsiPsiMinimal,
    /// Brackets among `a`, `ψ(u)` for a short nilpotent, except `ψ`–`ψ`.
    Table4,
    /// `{ψ(u)_λ ψ(u₁)}` for a short nilpotent.
    EqPsiPsiShort,
    /// `L = ψ(f) + ½Σa_i a^i` and the brackets of `L` with the generators,
    /// short nilpotent.
    EqLBracketsShort,
    /// `K`-brackets for the isotropic variant with `s ∈ 𝔩` (the `H`-parts
    /// are those of the minimal tables).
    Table5,
}

impl Table {
    pub const ALL: [Table; 6] = [
        Table::Table2,
        Table::EqPsiPsiMinimal,
        Table::Table4,
        Table::EqPsiPsiShort,
        Table::EqLBracketsShort,
        Table::Table5,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Table::Table2 => "table2",
            Table::EqPsiPsiMinimal => "eq_psi_psi_minimal",
            Table::Table4 => "table4",
            Table::EqPsiPsiShort => "eq_psi_psi_short",
            Table::EqLBracketsShort => "eq_L_brackets_short",
            Table::Table5 => "table5",
        }
    }

    pub fn from_name(name: &str) -> Option<Table> {
        Table::ALL.iter().copied().find(|t| t.name() == name)
    }

    /// The tables that apply to a generator family.
    pub fn applicable(variant: WVariant) -> &'static [Table] {
        match variant {
            WVariant::Minimal => &[Table::Table2, Table::EqPsiPsiMinimal],
            WVariant::Short => &[Table::Table4, Table::EqPsiPsiShort, Table::EqLBracketsShort],
            WVariant::MinimalIsotropic => &[Table::Table5],
        }
    }
}

/// One compared entry, both sides projected to `V(𝔤^f)`.
#[derive(Clone, Debug)]
pub struct TableCheck {
    pub label: String,
    pub computed: ZBracket,
    pub expected: ZBracket,
}

impl TableCheck {
    pub fn passed(&self) -> bool {
        self.computed == self.expected
    }
}

#[derive(Clone, Debug, Default)]
pub struct TableReport {
    pub checks: Vec<TableCheck>,
}

impl TableReport {
    pub fn passed(&self) -> bool {
        !self.checks.is_empty() && self.checks.iter().all(TableCheck::passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &TableCheck> {
        self.checks.iter().filter(|c| !c.passed())
    }
}

#[derive(Clone)]
enum Gen {
    L,
    Phi(Vector),
    Psi(Vector),
}

fn lp(coeffs: Vec<DiffPoly>) -> LambdaPoly {
    LambdaPoly::from_coeffs(coeffs)
}

fn c(n: i64, d: i64) -> Scalar {
    Scalar::from_ratio(n, d)
}

/// `(α∂ + βλ) p`.
fn d_lambda(p: &DiffPoly, alpha: &Scalar, beta: &Scalar) -> LambdaPoly {
    lp(alloc::vec![p.derivative().scale(alpha), p.scale(beta)])
}

fn konst(s: Scalar, k: usize) -> LambdaPoly {
    LambdaPoly::monomial(DiffPoly::constant(s), k)
}

impl WGenerators {
    /// Computes every bracket covered by `which` and compares it with the
    /// closed form. Tables that do not apply to this generator family give an
    /// empty (failing) report.
    pub fn verify_table(&self, which: Table) -> Result<TableReport, LieError> {
        let mut report = TableReport::default();
        if !Table::applicable(self.variant).contains(&which) {
            return Ok(report);
        }
        let st = self.red.setup();
        let mut gens: Vec<(String, Gen)> = alloc::vec![(String::from("L"), Gen::L)];
        for i in st.g0f() {
            gens.push((self.names[i].clone(), Gen::Phi(st.basis(i))));
        }
        for i in self.psi_range() {
            gens.push((self.names[i].clone(), Gen::Psi(st.basis(i))));
        }
        if which == Table::EqLBracketsShort {
            let (a, ad) = self.g0f_duals()?;
            let mut rhs = self.psi_of(st.f())?;
            for (ai, di) in a.iter().zip(&ad) {
                rhs += &(&self.poly(ai) * &self.poly(di)).scale(&c(1, 2));
            }
            report.checks.push(TableCheck {
                label: String::from("L = psi(f) + 1/2 sum a_i a^i"),
                computed: ZBracket { h: LambdaPoly::constant(self.l.clone()), k: LambdaPoly::zero() },
                expected: ZBracket { h: LambdaPoly::constant(rhs), k: LambdaPoly::zero() },
            });
        }
        for (na, ga) in &gens {
            for (nb, gb) in &gens {
                let expected = match self.expected(which, ga, gb)? {
                    Some(e) => e,
                    None => continue,
                };
                let computed = self
                    .bracket(&self.gen_poly(ga)?, &self.gen_poly(gb)?)
                    .map_err(|e| LieError::AxiomViolation(format!("{}", e)))?;
                let project = |z: ZBracket| z.map(|p| p.map(|q| self.pi(q)));
                report.checks.push(TableCheck {
                    label: format!("{{{} λ {}}}", na, nb),
                    computed: project(computed),
                    expected: project(expected),
                });
            }
        }
        Ok(report)
    }

    fn gen_poly(&self, g: &Gen) -> Result<DiffPoly, LieError> {
        match g {
            Gen::L => Ok(self.l.clone()),
            Gen::Phi(a) => self.phi_of(a),
            Gen::Psi(u) => self.psi_of(u),
        }
    }

    /// Orthogonal projection `𝔤₀ → 𝔤₀^f`.
    fn sharp(&self, v: &Vector) -> Vector {
        let st = self.red.setup();
        let mut out = Vector::zeros(v.dim());
        for i in st.g0f() {
            out[i] = v[i].clone();
        }
        out
    }

    fn expected(&self, which: Table, a: &Gen, b: &Gen) -> Result<Option<ZBracket>, LieError> {
        let h = match which {
            Table::Table2 => self.table2_h(a, b)?,
            Table::EqPsiPsiMinimal => match (a, b) {
                (Gen::Psi(u), Gen::Psi(u1)) => Some(self.psi_psi_minimal_h(u, u1)?),
                _ => None,
            },
            Table::Table5 => match (a, b) {
                (Gen::Psi(u), Gen::Psi(u1)) => Some(self.psi_psi_minimal_h(u, u1)?),
                _ => self.table2_h(a, b)?,
            },
            Table::Table4 => self.table4_h(a, b)?,
            Table::EqPsiPsiShort => match (a, b) {
                (Gen::Psi(u), Gen::Psi(u1)) => Some(self.psi_psi_short_h(u, u1)?),
                _ => None,
            },
            Table::EqLBracketsShort => match (a, b) {
                (Gen::L, Gen::Phi(x)) => Some(d_lambda(&self.poly(x), &c(1, 1), &c(1, 1))),
                (Gen::L, Gen::Psi(u)) => {
                    let st = self.red.setup();
                    let p = self.psi_of(u)?;
                    let mut r = d_lambda(&p, &c(1, 1), &c(2, 1));
                    r -= &konst(&st.form(st.e(), u) * &c(1, 2), 3);
                    Some(r)
                }
                _ => None,
            },
        };
        let Some(h) = h else { return Ok(None) };
        let k = self.expected_k(which, a, b)?;
        Ok(Some(ZBracket { h, k }))
    }

    fn expected_k(&self, which: Table, a: &Gen, b: &Gen) -> Result<LambdaPoly, LieError> {
        let st = self.red.setup();
        let s = self.red.s();
        let sf = |v: &Vector| st.form(s, v);
        Ok(match which {
            Table::Table2 | Table::EqPsiPsiMinimal => match (a, b) {
                (Gen::L, Gen::L) => konst(&self.red.fs() * &c(-2, 1), 1),
                (Gen::Psi(u), Gen::Psi(u1)) => konst(-sf(&st.bracket(u, u1)), 0),
                _ => LambdaPoly::zero(),
            },
            Table::Table5 => match (a, b) {
                (Gen::L, Gen::Psi(u)) | (Gen::Psi(u), Gen::L) => konst(&sf(u) * &c(-3, 2), 1),
                (Gen::Phi(x), Gen::Psi(u)) => konst(sf(&st.bracket(u, x)), 0),
                (Gen::Psi(u), Gen::Phi(x)) => konst(sf(&st.bracket(x, u)), 0),
                _ => LambdaPoly::zero(),
            },
            Table::Table4 => match (a, b) {
                (Gen::Phi(x), Gen::Psi(u)) => konst(-sf(&st.bracket(x, u)), 0),
                (Gen::Psi(u), Gen::Phi(x)) => konst(-sf(&st.bracket(u, x)), 0),
                _ => LambdaPoly::zero(),
            },
            Table::EqPsiPsiShort => match (a, b) {
                (Gen::Psi(u), Gen::Psi(u1)) => {
                    let e = st.e();
                    let t1 = self.sharp(&st.bracket(&st.bracket(e, u), &st.bracket(s, u1)));
                    let t2 = self.sharp(&st.bracket(&st.bracket(e, u1), &st.bracket(s, u)));
                    let k0 = self.poly(&(&t1 - &t2)).scale(&c(-1, 2));
                    let circ = st.jordan_product(u, u1)?;
                    lp(alloc::vec![k0, DiffPoly::constant(sf(&circ))])
                }
                _ => LambdaPoly::zero(),
            },
            Table::EqLBracketsShort => match (a, b) {
                (Gen::L, Gen::Psi(u)) => konst(-sf(u), 1),
                _ => LambdaPoly::zero(),
            },
        })
    }

    fn table2_h(&self, a: &Gen, b: &Gen) -> Result<Option<LambdaPoly>, LieError> {
        let st = self.red.setup();
        let one = c(1, 1);
        Ok(Some(match (a, b) {
            (Gen::L, Gen::L) => {
                let mut r = d_lambda(&self.l, &one, &c(2, 1));
                r -= &konst(st.xx(), 3);
                r
            }
            (Gen::L, Gen::Phi(x)) => d_lambda(&self.phi_of(x)?, &one, &one),
            (Gen::L, Gen::Psi(u)) => d_lambda(&self.psi_of(u)?, &one, &c(3, 2)),
            (Gen::Phi(x), Gen::L) => LambdaPoly::monomial(self.phi_of(x)?, 1),
            (Gen::Phi(x), Gen::Phi(y)) => {
                let mut r = LambdaPoly::constant(self.phi_of(&st.bracket(x, y))?);
                r += &konst(st.form(x, y), 1);
                r
            }
            (Gen::Phi(x), Gen::Psi(u)) => LambdaPoly::constant(self.psi_of(&st.bracket(x, u))?),
            (Gen::Psi(u), Gen::L) => d_lambda(&self.psi_of(u)?, &c(1, 2), &c(3, 2)),
            (Gen::Psi(u), Gen::Phi(x)) => LambdaPoly::constant(self.psi_of(&st.bracket(u, x))?),
            (Gen::Psi(_), Gen::Psi(_)) => return Ok(None),
        }))
    }

    /// `Σ_k φ([u,v^k]♯)φ([u₁,v_k]♯) + (∂+2λ)φ([u,[e,u₁]]♯)
    /// + ω₋(u,u₁)/(2(x|x)) L̃ − ω₋(u,u₁)λ²`.
    fn psi_psi_minimal_h(&self, u: &Vector, u1: &Vector) -> Result<LambdaPoly, LieError> {
        let st = self.red.setup();
        let mut c0 = DiffPoly::zero();
        for (k, i) in st.piece(1).enumerate() {
            let v = st.basis(i);
            let vd = st.omega_dual(k);
            let x = self.phi_of(&self.sharp(&st.bracket(u, vd)))?;
            let y = self.phi_of(&self.sharp(&st.bracket(u1, &v)))?;
            c0 += &(&x * &y);
        }
        let p = self.phi_of(&self.sharp(&st.bracket(u, &st.bracket(st.e(), u1))))?;
        let mut r = LambdaPoly::constant(c0);
        r += &d_lambda(&p, &c(1, 1), &c(2, 1));
        let om = st.omega_minus(u, u1);
        let coef = &om / &(&st.xx() * &c(2, 1));
        r += &LambdaPoly::constant(self.ltilde.scale(&coef));
        r -= &konst(om, 2);
        Ok(r)
    }

    fn table4_h(&self, a: &Gen, b: &Gen) -> Result<Option<LambdaPoly>, LieError> {
        let st = self.red.setup();
        Ok(Some(match (a, b) {
            (Gen::Phi(x), Gen::Phi(y)) => {
                let mut r = LambdaPoly::constant(self.poly(&st.bracket(x, y)));
                r += &konst(st.form(x, y), 1);
                r
            }
            (Gen::Phi(x), Gen::Psi(u)) => LambdaPoly::constant(self.psi_of(&st.bracket(x, u))?),
            (Gen::Psi(u), Gen::Phi(x)) => LambdaPoly::constant(self.psi_of(&st.bracket(u, x))?),
            _ => return Ok(None),
        }))
    }

    fn psi_psi_short_h(&self, u: &Vector, u1: &Vector) -> Result<LambdaPoly, LieError> {
        let st = self.red.setup();
        let e = st.e();
        let ee = |a: &Vector, b: &Vector| st.bracket(&st.bracket(e, a), &st.bracket(e, b));
        let uk: Vec<Vector> = st.piece(-2).map(|i| st.basis(i)).collect();
        let ud: Vec<Vector> = st.piece(-2).map(|i| st.dual(i).clone()).collect();
        let sh_u: Vec<DiffPoly> = ud.iter().map(|d| self.poly(&self.sharp(&st.bracket(u, d)))).collect();
        let sh_u1: Vec<DiffPoly> = ud.iter().map(|d| self.poly(&self.sharp(&st.bracket(u1, d)))).collect();
        let half = c(1, 2);
        let quarter = c(1, 4);
        let mut c0 = DiffPoly::zero();
        let mut c1 = DiffPoly::zero();
        let mut c2 = DiffPoly::zero();
        let mut c3 = DiffPoly::zero();
        for k in 0..uk.len() {
            let a = &self.psi_of(&st.jordan_product(u, &uk[k])?)? * &sh_u1[k];
            let b = &self.psi_of(&st.jordan_product(u1, &uk[k])?)? * &sh_u[k];
            c0 += &(&a - &b).scale(&half);
            for h in 0..uk.len() {
                let t = &(&self.poly(&ee(&uk[h], &uk[k])) * &sh_u[h]) * &sh_u1[k];
                c0 += &t.scale(&quarter);
            }
            // ¼(∂+2λ)Σ[[e,u],[e,u_k]][u₁,u^k]♯
            let t = &self.poly(&ee(u, &uk[k])) * &sh_u1[k];
            c0 += &t.derivative().scale(&quarter);
            c1 += &t.scale(&half);
            // ¼Σ[[e,u₁],[e,u_k]](∂+λ)[u,u^k]♯
            let a1 = self.poly(&ee(u1, &uk[k]));
            c0 += &(&a1 * &sh_u[k].derivative()).scale(&quarter);
            c1 += &(&a1 * &sh_u[k]).scale(&quarter);
        }
        let p = self.psi_of(&st.jordan_product(u, u1)?)?;
        c0 -= &p.derivative().scale(&half);
        c1 -= &p;
        let cc = self.poly(&ee(u, u1));
        c0 -= &cc.nth_derivative(2).scale(&quarter);
        c1 -= &cc.derivative().scale(&c(3, 4));
        c2 -= &cc.scale(&c(3, 4));
        c3 += &DiffPoly::constant(&st.form(e, &st.jordan_product(u, u1)?) * &quarter);
        Ok(lp(alloc::vec![c0, c1, c2, c3]))
    }
}
