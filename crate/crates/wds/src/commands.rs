use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Value};
use wds_core::diffpoly::{Context, DiffPoly};
use wds_core::hierarchy::{closed_forms, HDecomposition, Hierarchy, HierarchyError, LoopElement};
use wds_core::lie::{build_sl, build_sp, grade_by_nilpotent, GradedSetup, GradingOptions, NilpotentKind, Vector};
use wds_core::pva::{check_pva_axioms, Reduction, ZBracket};
use wds_core::walgebra::{Table, WGenerators, WVariant};

use crate::config::{AChoice, Algebra, RunConfig, SChoice};
use crate::doc::{poly_json, Document, Entry, Section};

#[derive(Debug)]
pub enum RunError {
    /// Invalid input; exit status 2.
    Usage(String),
}

impl std::fmt::Display for RunError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RunError::Usage(m) => f.write_str(m),
        }
    }
}

fn usage(msg: impl Into<String>) -> RunError {
    RunError::Usage(msg.into())
}

const DEFAULT_WINDOW: i32 = 4;

/// The setup, `s` and generators for a validated configuration.
pub struct Built {
    pub cfg: RunConfig,
    pub st: GradedSetup,
    pub s: Vector,
    pub w: WGenerators,
}

fn f_text(cfg: &RunConfig) -> String {
    let sum = |m: usize, term: &dyn Fn(usize) -> String| (1..=m).map(term).collect::<Vec<_>>().join("+");
    match (cfg.algebra, cfg.nilpotent) {
        (Algebra::Sl(n), NilpotentKind::Minimal) => format!("E{}1", n),
        (Algebra::Sl(n), NilpotentKind::Short) => sum(n / 2, &|i| format!("E{}{}", n / 2 + i, i)),
        (Algebra::Sp(_), NilpotentKind::Minimal) => "C11".into(),
        (Algebra::Sp(n), NilpotentKind::Short) => sum(n / 2, &|i| format!("C{}{}", i, i)),
    }
}

fn parse_elem(st: &GradedSetup, text: &str) -> Result<Vector, RunError> {
    st.original()
        .parse(text)
        .map(|v| st.adapt(&v))
        .ok_or_else(|| usage(format!("cannot parse {:?} as an element of {}", text, st.original().name())))
}

pub fn build(cfg: &RunConfig) -> Result<Built, RunError> {
    let g = match cfg.algebra {
        Algebra::Sl(n) => build_sl(n),
        Algebra::Sp(n) => build_sp(n),
    }
    .map_err(|e| usage(e.to_string()))?;
    let f = g.parse(&f_text(cfg)).expect("f is well formed");
    let opts = GradingOptions { preferred: vec![f.clone()] };
    let st = grade_by_nilpotent(&g, &f, cfg.nilpotent, &opts).map_err(|e| usage(e.to_string()))?;
    let (st, red) = match &cfg.s {
        SChoice::Isotropic => {
            let n = match cfg.algebra {
                Algebra::Sl(n) => n,
                Algebra::Sp(_) => unreachable!("rejected by validation"),
            };
            let s_text = format!("E12+E2{}", n);
            let mut l = vec![parse_elem(&st, &s_text)?];
            for j in 3..n {
                l.push(parse_elem(&st, &format!("E1{}", j))?);
            }
            let iso = st.with_isotropic(&l, None).map_err(|e| usage(e.to_string()))?;
            let s = parse_elem(&iso, &s_text)?;
            let red = Reduction::isotropic(iso.clone(), s).map_err(|e| usage(e.to_string()))?;
            (iso, red)
        }
        other => {
            let s = match other {
                SChoice::E => st.e().clone(),
                SChoice::Diag(vals) => {
                    let m = vals.len();
                    let terms: Vec<String> = vals
                        .iter()
                        .enumerate()
                        .map(|(i, v)| match cfg.algebra {
                            Algebra::Sl(_) => format!("{}*E{}{}", v, i + 1, m + i + 1),
                            Algebra::Sp(_) => format!("{}*B{}{}", v, i + 1, i + 1),
                        })
                        .collect();
                    parse_elem(&st, &terms.join("+"))?
                }
                SChoice::Explicit(t) => parse_elem(&st, t)?,
                SChoice::Isotropic => unreachable!(),
            };
            let red = Reduction::new(st.clone(), s).map_err(|e| usage(e.to_string()))?;
            (st, red)
        }
    };
    let s = red.s().clone();
    let w = WGenerators::build(red).map_err(|e| usage(e.to_string()))?;
    Ok(Built {
        cfg: cfg.clone(),
        st,
        s,
        w,
    })
}

/// Solves the dressing in the smallest window that satisfies `demand`,
/// starting from the configured (or default) degree. A configured degree is
/// never enlarged.
fn solve<T>(
    b: &Built,
    min_window: i32,
    demand: impl Fn(&Hierarchy) -> Result<T, HierarchyError>,
) -> Result<(Hierarchy, T), RunError> {
    let mut deg = b.cfg.max_degree.unwrap_or(DEFAULT_WINDOW.max(min_window));
    loop {
        let hy = Hierarchy::new(b.w.clone(), deg).map_err(|e| usage(e.to_string()))?;
        match demand(&hy) {
            Ok(t) => return Ok((hy, t)),
            Err(HierarchyError::WindowTooSmall { needed }) if b.cfg.max_degree.is_none() && needed > deg => {
                deg = needed;
            }
            Err(HierarchyError::WindowTooSmall { needed }) => {
                return Err(usage(format!(
                    "maximal degree {} is too small: at least {} is needed",
                    deg, needed
                )))
            }
            Err(e) => return Err(usage(e.to_string())),
        }
    }
}

fn decomposition(b: &Built) -> Result<HDecomposition, RunError> {
    HDecomposition::new(&b.st, &b.s).map_err(|e| usage(e.to_string()))
}

/// The central elements `a(z)` selected by `--a`.
fn families(b: &Built, which: &AChoice) -> Result<Vec<(String, LoopElement)>, RunError> {
    let dec = decomposition(b)?;
    let mut out = Vec::new();
    let named = |which: &AChoice, out: &mut Vec<(String, LoopElement)>| -> Result<(), RunError> {
        match which {
            AChoice::FPlusZs => out.push(("f+zs".into(), dec.lambda().clone())),
            AChoice::EPlusSStar => {
                let emb = b
                    .st
                    .find_embeddable(&b.s)
                    .ok_or_else(|| usage("s is not embeddable: there is no s* with [s, s*] = 2x"))?;
                let a = &LoopElement::constant(b.st.e(), 0) + &LoopElement::constant(&emb.s_star, -1);
                out.push(("e+z^-1 s*".into(), a));
            }
            _ => {}
        }
        Ok(())
    };
    let z = dec.grading().z();
    let period = |out: &mut Vec<(String, LoopElement)>| {
        for deg in -2..(z - 2) {
            for (k, a) in dec.center(deg).into_iter().enumerate() {
                out.push((format!("Z(h) degree {} #{}", deg, k), a));
            }
        }
    };
    match which {
        AChoice::Center(None) => period(&mut out),
        AChoice::Center(Some(text)) => {
            let (elem, k) = match text.rsplit_once('@') {
                Some((e, k)) => (e, k.trim().parse::<i32>().map_err(|_| usage(format!("bad z-power in {:?}", text)))?),
                None => (text.as_str(), 0),
            };
            let a = LoopElement::constant(&parse_elem(&b.st, elem)?, k);
            dec.central_degree(&a)
                .map_err(|_| usage(format!("{} is not a homogeneous element of the center of h", text)))?;
            out.push((text.clone(), a));
        }
        AChoice::All => {
            named(&AChoice::FPlusZs, &mut out)?;
            if b.cfg.s == SChoice::Isotropic {
                named(&AChoice::EPlusSStar, &mut out)?;
            }
            period(&mut out);
        }
        other => named(other, &mut out)?,
    }
    if out.is_empty() {
        return Err(usage("the selected center is zero: no a(z) to build a hierarchy from"));
    }
    Ok(out)
}

fn config_json(cfg: &RunConfig) -> Value {
    json!({
        "algebra": cfg.algebra.to_string(),
        "nilpotent": match cfg.nilpotent { NilpotentKind::Minimal => "minimal", NilpotentKind::Short => "short" },
        "s": cfg.s.to_string(),
        "a": cfg.a.to_string(),
        "n": cfg.n,
        "max_degree": cfg.max_degree,
        "seed": cfg.seed,
        "samples": cfg.samples,
    })
}

fn zpow(k: i32) -> String {
    match k {
        0 => String::new(),
        1 => " z".into(),
        k => format!(" z^{}", k),
    }
}

/// A basis label, parenthesized when it is a combination.
fn atom(label: &str) -> String {
    if label.chars().all(|c| c.is_alphanumeric() || c == '_') {
        label.to_string()
    } else {
        format!("({})", label)
    }
}

/// Names the variables of `V(g)` by the adapted basis labels.
fn affine_context(st: &GradedSetup) -> Context {
    let labels: Vec<String> = (0..st.dim()).map(|i| atom(st.label(i))).collect();
    Context::new(labels.clone(), labels)
}

fn loop_entry(label: impl Into<String>, st: &GradedSetup, ctx: &Context, e: &LoopElement) -> Entry {
    let mut text = Vec::new();
    let mut latex = Vec::new();
    for (&(k, i), p) in e.terms() {
        let name = atom(st.label(i));
        let zl = match k {
            0 => String::new(),
            1 => " z".into(),
            k => format!(" z^{{{}}}", k),
        };
        match p.as_constant() {
            Some(c) if c.is_one() => {
                text.push(format!("{}{}", name, zpow(k)));
                latex.push(format!("{}{}", name, zl));
            }
            Some(c) => {
                text.push(format!("{}*{}{}", ctx.text(p), name, zpow(k)));
                latex.push(format!("\\left({}\\right) {}{}", c.to_latex(), name, zl));
            }
            None => {
                text.push(format!("{}{} ⊗ ({})", name, zpow(k), ctx.text(p)));
                latex.push(format!("{}{} \\otimes \\left({}\\right)", name, zl, ctx.latex(p)));
            }
        }
    }
    if text.is_empty() {
        return Entry::info(label, "0").with_latex("0");
    }
    Entry::info(label, text.join(" + ")).with_latex(latex.join(" + "))
}

fn zb_entry(label: impl Into<String>, ctx: &Context, zb: &ZBracket) -> Entry {
    let (text, latex) = if zb.k.is_zero() {
        (ctx.lambda_text(&zb.h, "λ"), ctx.lambda_latex(&zb.h))
    } else {
        (
            format!("{} - z({})", ctx.lambda_text(&zb.h, "λ"), ctx.lambda_text(&zb.k, "λ")),
            format!("{} - z\\left({}\\right)", ctx.lambda_latex(&zb.h), ctx.lambda_latex(&zb.k)),
        )
    };
    Entry::info(label, text).with_latex(latex)
}

fn doc(b: &Built, command: &str) -> Document {
    Document {
        command: command.into(),
        config: config_json(&b.cfg),
        sections: Vec::new(),
    }
}

pub fn setup(b: &Built, dump: bool) -> Result<Document, RunError> {
    let st = &b.st;
    let mut d = doc(b, "setup");
    let mut alg = Section::new("Lie algebra");
    alg.push(Entry::info("algebra", st.original().name()));
    alg.push(Entry::info("dimension", st.dim().to_string()));
    alg.push(Entry::info("(x|x)", st.xx().to_string()));
    d.sections.push(alg);

    let mut tri = Section::new("sl2-triple");
    for (name, v) in [("e", st.e()), ("x", st.x()), ("f", st.f())] {
        tri.push(Entry::info(name, st.describe(v)));
    }
    d.sections.push(tri);

    let mut gr = Section::new("grading (ad x eigenvalues, doubled)");
    let depth = st.depth2();
    for i2 in (-depth..=depth).rev() {
        let labels: Vec<&str> = st.piece(i2).map(|i| st.label(i)).collect();
        if !labels.is_empty() {
            gr.push(Entry::info(format!("g[{}]", i2), labels.join(", ")));
        }
    }
    let g0f: Vec<&str> = st.g0f().map(|i| st.label(i)).collect();
    gr.push(Entry::info("g0^f", g0f.join(", ")));
    d.sections.push(gr);

    let dec = decomposition(b)?;
    let mut lp = Section::new("loop algebra");
    lp.push(Entry::info("s", st.describe(&b.s)));
    lp.push(loop_entry("Lambda", st, &Context::anonymous(), dec.lambda()));
    let z = dec.grading().z();
    lp.push(Entry::info("doubled degree of z", (-z).to_string()));
    for deg in 0..z {
        lp.push(
            Entry::info(
                format!("degree {}", deg),
                format!(
                    "dim h = {}, dim h-perp = {}, dim Z(h) = {}",
                    dec.h_basis(deg).len(),
                    dec.perp_basis(deg).len(),
                    dec.center(deg).len()
                ),
            )
            .with("degree", json!(deg)),
        );
    }
    d.sections.push(lp);

    if dump {
        let alg = st.alg();
        let mut sec = Section::new("structure constants (adapted basis)");
        for i in 0..alg.dim() {
            for j in i + 1..alg.dim() {
                let br = alg.basis_bracket(i, j);
                if br.is_empty() {
                    continue;
                }
                let mut v = Vector::zeros(alg.dim());
                for (k, c) in br {
                    v.0[*k] = c.clone();
                }
                let consts: Vec<Value> = br.iter().map(|(k, c)| json!([alg.label(*k), c.to_string()])).collect();
                sec.push(
                    Entry::info(format!("[{}, {}]", alg.label(i), alg.label(j)), alg.describe(&v))
                        .with("constants", Value::Array(consts)),
                );
            }
        }
        d.sections.push(sec);
    }
    Ok(d)
}

fn w_generators(w: &WGenerators) -> Vec<(String, DiffPoly)> {
    let st = w.reduction().setup();
    let names = w.context();
    let mut out = vec![("L".to_string(), w.l().clone())];
    if w.ltilde() != w.l() {
        out.push(("L~".into(), w.ltilde().clone()));
    }
    for (k, i) in st.g0f().enumerate() {
        out.push((names.label(i as u32), w.phi()[k].clone()));
    }
    for (k, i) in w.psi_range().enumerate() {
        out.push((names.label(i as u32), w.psi()[k].clone()));
    }
    out
}

pub fn generators(b: &Built) -> Result<Document, RunError> {
    let w = &b.w;
    let red = w.reduction();
    let (affine, gf) = (affine_context(&b.st), w.context());
    let mut d = doc(b, "generators");
    let mut sec = Section::new("generators of W in V(g_{<=1/2})");
    for (name, p) in w_generators(w) {
        let image = w.pi(&p);
        sec.push(
            Entry::poly(name, &affine, &p)
                .with("pi", poly_json(&gf, &image))
                .with("pi_text", json!(gf.text(&image))),
        );
    }
    d.sections.push(sec);
    let mut coords = Section::new("coordinates of V(g^f)");
    for i in red.gf_vars() {
        coords.push(Entry::info(gf.label(i as u32), b.st.label(i)));
    }
    d.sections.push(coords);
    Ok(d)
}

fn table_sections(w: &WGenerators) -> Result<Vec<Section>, RunError> {
    let ctx = w.context();
    let mut out = Vec::new();
    for &t in Table::applicable(w.variant()) {
        let report = w.verify_table(t).map_err(|e| usage(e.to_string()))?;
        let mut sec = Section::new(format!("table {}", t.name()));
        for c in &report.checks {
            let mut e = zb_entry(c.label.clone(), &ctx, &c.computed).with_pass(c.passed());
            if !c.passed() {
                let exp = zb_entry("", &ctx, &c.expected);
                e.text = format!("{}   (closed form: {})", e.text, exp.text);
                e = e.with("expected", json!(exp.text));
            }
            sec.push(e);
        }
        if report.checks.is_empty() {
            sec.push(Entry::info("entries", "none (no generators of the required type)"));
        }
        out.push(sec);
    }
    Ok(out)
}

pub fn tables(b: &Built) -> Result<Document, RunError> {
    let mut d = doc(b, "tables");
    d.sections = table_sections(&b.w)?;
    Ok(d)
}

fn lm_entry(label: &str, checks: usize, failures: &[String], pass: bool) -> Entry {
    let text = if failures.is_empty() {
        format!("{} checks", checks)
    } else {
        format!("{} checks, failed: {}", checks, failures.join("; "))
    };
    Entry::check(label, text, pass).with("checks", json!(checks))
}

pub fn hierarchy(b: &Built) -> Result<Document, RunError> {
    let fams = families(b, &b.cfg.a)?;
    let count = b.cfg.n + 1;
    let (hy, dens) = solve(b, 0, |hy| {
        fams.iter()
            .map(|(_, a)| hy.densities_up_to(a, count))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let st = &b.st;
    let ctx = hy.w().context();
    let gens = hy.generators();
    let kc = hy.k_central();
    let mut d = doc(b, "hierarchy");
    let mut info = Section::new("dressing");
    info.push(Entry::info("solved up to doubled degree", hy.dressing().max_degree().to_string()));
    let kc_names: Vec<String> = kc.iter().map(|&i| ctx.label(i)).collect();
    info.push(Entry::info("generators of J_K", if kc.is_empty() { "none".into() } else { kc_names.join(", ") }));
    d.sections.push(info);

    for ((label, a), den) in fams.iter().zip(&dens) {
        let mut sec = Section::new(format!("a(z) = {}", label));
        sec.push(loop_entry("a(z)", st, &Context::anonymous(), a));
        sec.push(Entry::info("leading power N", den.leading.to_string()));
        for (j, g) in den.g.iter().enumerate() {
            sec.push(Entry::poly(format!("g_{}", j), &ctx, g).with("time_index", json!(j)));
        }
        for (j, g) in den.g.iter().enumerate() {
            for w in &gens {
                let name = ctx.text(w);
                sec.push(
                    Entry::poly(format!("d{}/dt_{}", name, j), &ctx, &hy.flow(g, w))
                        .with("time_index", json!(j))
                        .with("generator", json!(name)),
                );
            }
        }
        if !kc.is_empty() {
            for (j, g) in den.g.iter().enumerate() {
                for (i, eq) in hy.equations(g, true) {
                    let name = ctx.label(i);
                    sec.push(
                        Entry::poly(format!("d{}/dt_{} mod J_K", name, j), &ctx, &eq)
                            .with("time_index", json!(j))
                            .with("generator", json!(name))
                            .with("reduced", json!(true)),
                    );
                }
            }
        }
        let r = hy.lenard_magri(&den.g);
        sec.push(lm_entry("Lenard-Magri and involution", r.checks, &r.failures, r.passed()));
        d.sections.push(sec);
    }
    Ok(d)
}

pub fn verify_all(b: &Built) -> Result<Document, RunError> {
    let w = &b.w;
    let red = w.reduction();
    let mut d = doc(b, "verify-all");

    let mut mem = Section::new("generators lie in W");
    for (name, p) in w_generators(w) {
        mem.push(Entry::check(name, "rho-invariant", red.is_in_w(&p)));
    }
    d.sections.push(mem);

    d.sections.extend(table_sections(w)?);

    let mut rng = ChaCha8Rng::seed_from_u64(b.cfg.seed);
    let mut ax = Section::new("Poisson vertex algebra axioms");
    let affine = red.affine_table();
    let gf: Vec<u32> = red.gf_vars().iter().map(|&i| i as u32).collect();
    for (name, table, gens) in [("affine", affine.clone(), affine.generators()), ("W", w.gf_table(), gf)] {
        let r = check_pva_axioms(&table, &gens, b.cfg.samples, &mut rng);
        let text = match r.violations.first() {
            None => format!("{} checks", r.checks),
            Some(v) => format!("{} checks, {} violations, first: {} {}", r.checks, r.violations.len(), v.axiom, v.detail),
        };
        ax.push(Entry::check(name, text, r.passed()).with("checks", json!(r.checks)));
    }
    d.sections.push(ax);

    let closed: Option<(closed_forms::ClosedForms, i32)> = match (&b.cfg.s, w.variant()) {
        (SChoice::E, WVariant::Minimal) => Some((closed_forms::minimal, 6)),
        (SChoice::E, WVariant::Short) => Some((closed_forms::short, 6)),
        (SChoice::Isotropic, WVariant::MinimalIsotropic) => Some((closed_forms::isotropic, 4)),
        _ => None,
    };
    let fams = families(b, &AChoice::Center(None))?;
    let (hy, dens) = solve(b, closed.map_or(0, |c| c.1), |hy| {
        fams.iter()
            .map(|(_, a)| hy.densities_up_to(a, 2))
            .collect::<Result<Vec<_>, _>>()
    })?;
    let ctx = hy.w().context();

    let mut dr = Section::new("dressing");
    let dressing = hy.dressing();
    dr.push(Entry::info("solved up to doubled degree", dressing.max_degree().to_string()));
    let res = dressing.residual();
    dr.push(Entry::check("re-expansion residual", if res.is_zero() { "0".into() } else { format!("{} nonzero terms", res.len()) }, res.is_zero()));
    dr.push(Entry::check("h_j in h, U_j in h-perp", "", dressing.homogeneity_holds()));
    d.sections.push(dr);

    if let Some((check, _)) = closed {
        let mut sec = Section::new("closed forms of the dressing");
        for c in check(&hy).map_err(|e| usage(e.to_string()))? {
            let mut e = loop_entry(c.label.clone(), &b.st, &ctx, &c.computed).with_pass(c.passed());
            if !c.passed() {
                let exp = loop_entry("", &b.st, &ctx, &c.expected);
                e.text = format!("{}   (closed form: {})", e.text, exp.text);
            }
            sec.push(e);
        }
        d.sections.push(sec);
    }

    let mut lm = Section::new("Lenard-Magri, all central families");
    for ((label, _), den) in fams.iter().zip(&dens) {
        let r = hy.lenard_magri(&den.g);
        lm.push(lm_entry(label, r.checks, &r.failures, r.passed()));
    }
    for i in 0..dens.len() {
        for j in i + 1..dens.len() {
            let r = hy.involution(&dens[i].g, &dens[j].g);
            lm.push(lm_entry(&format!("{} vs {}", fams[i].0, fams[j].0), r.checks, &r.failures, r.passed()));
        }
    }
    d.sections.push(lm);
    Ok(d)
}
