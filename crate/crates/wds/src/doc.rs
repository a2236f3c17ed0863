//! The emitted document: titled sections of labelled entries, rendered as
//! text, LaTeX or JSON.

use serde_json::{json, Map, Value};
use wds_core::diffpoly::{Context, DiffPoly};

use crate::config::Format;

#[derive(Clone, Debug)]
pub struct Entry {
    pub label: String,
    pub text: String,
    pub latex: String,
    /// `None` for informational entries.
    pub pass: Option<bool>,
    /// Extra machine-readable fields merged into the JSON object.
    pub data: Map<String, Value>,
}

impl Entry {
    pub fn info(label: impl Into<String>, text: impl Into<String>) -> Self {
        let text = text.into();
        Entry {
            label: label.into(),
            latex: text.clone(),
            text,
            pass: None,
            data: Map::new(),
        }
    }

    pub fn poly(label: impl Into<String>, ctx: &Context, p: &DiffPoly) -> Self {
        let mut e = Entry::info(label, ctx.text(p));
        e.latex = ctx.latex(p);
        e.data.insert("terms".into(), poly_json(ctx, p));
        e
    }

    pub fn check(label: impl Into<String>, text: impl Into<String>, pass: bool) -> Self {
        let mut e = Entry::info(label, text);
        e.pass = Some(pass);
        e
    }

    pub fn with_latex(mut self, latex: impl Into<String>) -> Self {
        self.latex = latex.into();
        self
    }

    pub fn with_pass(mut self, pass: bool) -> Self {
        self.pass = Some(pass);
        self
    }

    pub fn with(mut self, key: &str, value: Value) -> Self {
        self.data.insert(key.into(), value);
        self
    }
}

#[derive(Clone, Debug)]
pub struct Section {
    pub title: String,
    pub entries: Vec<Entry>,
}

impl Section {
    pub fn new(title: impl Into<String>) -> Self {
        Section {
            title: title.into(),
            entries: Vec::new(),
        }
    }

    pub fn push(&mut self, e: Entry) {
        self.entries.push(e);
    }

    pub fn passed(&self) -> bool {
        self.entries.iter().all(|e| e.pass != Some(false))
    }
}

#[derive(Clone, Debug)]
pub struct Document {
    pub command: String,
    pub config: Value,
    pub sections: Vec<Section>,
}

impl Document {
    pub fn passed(&self) -> bool {
        self.sections.iter().all(Section::passed)
    }

    fn counts(&self) -> (usize, usize) {
        let all = self.sections.iter().flat_map(|s| &s.entries);
        let checked: Vec<bool> = all.filter_map(|e| e.pass).collect();
        (checked.iter().filter(|&&p| p).count(), checked.len())
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text(),
            Format::Latex => self.latex(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json()).expect("serializable");
                s.push('\n');
                s
            }
        }
    }

    fn header(&self) -> String {
        let cfg = self.config.as_object().expect("config object");
        let parts: Vec<String> = cfg
            .iter()
            .map(|(k, v)| match v {
                Value::String(s) => format!("{}={}", k, s),
                other => format!("{}={}", k, other),
            })
            .collect();
        format!("wds {} ({})", self.command, parts.join(", "))
    }

    fn summary(&self) -> Option<String> {
        let (ok, total) = self.counts();
        (total > 0).then(|| {
            format!(
                "{}: {}/{} checks passed",
                if ok == total { "PASS" } else { "FAIL" },
                ok,
                total
            )
        })
    }

    fn text(&self) -> String {
        let mut out = format!("# {}\n", self.header());
        for s in &self.sections {
            out.push_str(&format!("\n## {}\n", s.title));
            for e in &s.entries {
                let flag = match e.pass {
                    Some(true) => "[PASS] ",
                    Some(false) => "[FAIL] ",
                    None => "",
                };
                out.push_str(&format!("{}{}: {}\n", flag, e.label, e.text));
            }
        }
        if let Some(s) = self.summary() {
            out.push_str(&format!("\n{}\n", s));
        }
        out
    }

    fn latex(&self) -> String {
        let mut out = format!("% {}\n", self.header());
        for s in &self.sections {
            out.push_str(&format!("\\section*{{{}}}\n\\begin{{itemize}}\n", escape(&s.title)));
            for e in &s.entries {
                let flag = match e.pass {
                    Some(true) => " \\textsc{pass}",
                    Some(false) => " \\textsc{fail}",
                    None => "",
                };
                out.push_str(&format!("  \\item {}: ${}${}\n", escape(&e.label), e.latex, flag));
            }
            out.push_str("\\end{itemize}\n");
        }
        if let Some(s) = self.summary() {
            out.push_str(&format!("% {}\n", s));
        }
        out
    }

    pub fn json(&self) -> Value {
        let sections: Vec<Value> = self
            .sections
            .iter()
            .map(|s| {
                let entries: Vec<Value> = s
                    .entries
                    .iter()
                    .map(|e| {
                        let mut m = e.data.clone();
                        m.insert("label".into(), json!(e.label));
                        m.insert("text".into(), json!(e.text));
                        m.insert("latex".into(), json!(e.latex));
                        if let Some(p) = e.pass {
                            m.insert("pass".into(), json!(p));
                        }
                        Value::Object(m)
                    })
                    .collect();
                json!({ "title": s.title, "passed": s.passed(), "entries": entries })
            })
            .collect();
        let (ok, total) = self.counts();
        json!({
            "command": self.command,
            "config": self.config,
            "sections": sections,
            "passed": self.passed(),
            "checks": { "passed": ok, "total": total },
        })
    }
}

fn escape(s: &str) -> String {
    s.replace('_', "\\_").replace('#', "\\#")
}

/// `[{"coeff": c, "monomial": [[label, order], …]}, …]`, a factor with
/// exponent `e` repeated `e` times.
pub fn poly_json(ctx: &Context, p: &DiffPoly) -> Value {
    let terms: Vec<Value> = p
        .terms()
        .map(|(m, c)| {
            let mut factors = Vec::new();
            for (v, e) in m.factors() {
                for _ in 0..*e {
                    factors.push(json!([ctx.label(v.gen), v.ord]));
                }
            }
            json!({ "coeff": c.to_string(), "monomial": factors })
        })
        .collect();
    Value::Array(terms)
}
