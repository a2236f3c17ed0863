use alloc::format;
use alloc::string::{String, ToString};
use alloc::vec::Vec;

use super::{DiffPoly, LambdaPoly, Monomial, Var};
use crate::scalar::Scalar;

/// Generator names for rendering. Generators without a name print as `u{i}`.
#[derive(Clone, Debug, Default)]
pub struct Context {
    labels: Vec<String>,
    latex: Vec<String>,
}

impl Context {
    pub fn anonymous() -> Self {
        Context::default()
    }

    pub fn new(labels: Vec<String>, latex: Vec<String>) -> Self {
        Context { labels, latex }
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, gen: u32) -> String {
        self.labels
            .get(gen as usize)
            .cloned()
            .unwrap_or_else(|| format!("u{}", gen))
    }

    fn latex_label(&self, gen: u32) -> String {
        self.latex
            .get(gen as usize)
            .cloned()
            .unwrap_or_else(|| format!("u_{{{}}}", gen))
    }

    fn var_text(&self, v: Var) -> String {
        let name = self.label(v.gen);
        match v.ord {
            0 => name,
            1..=3 => format!("{}{}", name, "'".repeat(v.ord as usize)),
            n => format!("{}^({})", name, n),
        }
    }

    fn var_latex(&self, v: Var, e: u32) -> String {
        let name = self.latex_label(v.gen);
        let base = match v.ord {
            0 => name,
            1..=3 => format!("{}{}", name, "'".repeat(v.ord as usize)),
            n => format!("{}^{{({})}}", name, n),
        };
        if e == 1 {
            base
        } else if v.ord == 0 {
            format!("{}^{{{}}}", base, e)
        } else {
            format!("({})^{{{}}}", base, e)
        }
    }

    fn monomial_text(&self, m: &Monomial) -> String {
        let parts: Vec<String> = m
            .factors()
            .iter()
            .map(|(v, e)| {
                let t = self.var_text(*v);
                if *e == 1 {
                    t
                } else {
                    format!("{}^{}", t, e)
                }
            })
            .collect();
        parts.join("*")
    }

    /// Plain-text rendering in deterministic term order.
    pub fn text(&self, p: &DiffPoly) -> String {
        join_terms(p, |c, m| {
            let body = self.monomial_text(m);
            match (m.is_one(), c.is_one()) {
                (true, _) => coeff_text(c),
                (false, true) => body,
                (false, false) => format!("{}*{}", coeff_text(c), body),
            }
        })
    }

    /// LaTeX rendering in deterministic term order.
    pub fn latex(&self, p: &DiffPoly) -> String {
        join_terms(p, |c, m| {
            let body: Vec<String> = m.factors().iter().map(|(v, e)| self.var_latex(*v, *e)).collect();
            let body = body.join(" ");
            let coeff = if c.is_atomic() {
                c.to_latex()
            } else {
                format!("\\left({}\\right)", c.to_latex())
            };
            match (m.is_one(), c.is_one()) {
                (true, _) => c.to_latex(),
                (false, true) => body,
                (false, false) => format!("{} {}", coeff, body),
            }
        })
    }

    pub fn lambda_text(&self, p: &LambdaPoly, symbol: &str) -> String {
        self.lambda_render(p, symbol, |q| self.text(q), false)
    }

    pub fn lambda_latex(&self, p: &LambdaPoly) -> String {
        self.lambda_render(p, "\\lambda", |q| self.latex(q), true)
    }

    fn lambda_render(&self, p: &LambdaPoly, symbol: &str, f: impl Fn(&DiffPoly) -> String, latex: bool) -> String {
        if p.is_zero() {
            return "0".to_string();
        }
        let mut parts = Vec::new();
        for (k, c) in p.coeffs().iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let power = match (k, latex) {
                (0, _) => String::new(),
                (1, _) => symbol.to_string(),
                (k, true) => format!("{}^{{{}}}", symbol, k),
                (k, false) => format!("{}^{}", symbol, k),
            };
            let body = f(c);
            parts.push(if k == 0 {
                body
            } else if c.as_constant().is_some_and(|s| s.is_one()) {
                power
            } else if c.len() == 1 && !body.starts_with('-') {
                format!("{}{}{}", body, if latex { " " } else { "*" }, power)
            } else {
                format!("({}){}{}", body, if latex { " " } else { "*" }, power)
            });
        }
        parts.join(" + ")
    }
}

fn coeff_text(c: &Scalar) -> String {
    if c.is_atomic() {
        c.to_string()
    } else {
        format!("({})", c)
    }
}

fn join_terms(p: &DiffPoly, mut term: impl FnMut(&Scalar, &Monomial) -> String) -> String {
    if p.is_zero() {
        return "0".to_string();
    }
    let mut out = String::new();
    for (k, (m, c)) in p.terms().enumerate() {
        let neg = c.is_negative_rational();
        let a = if neg { -c } else { c.clone() };
        let t = term(&a, m);
        if k == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&t);
    }
    out
}
