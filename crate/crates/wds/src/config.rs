use std::fmt;

use clap::{Args, Parser, Subcommand, ValueEnum};
use wds_core::lie::NilpotentKind;

pub const MAX_DEGREE_ENV: &str = "WDS_MAX_DEGREE";

#[derive(Parser, Debug)]
#[command(name = "wds", version, about = "Classical W-algebras and generalized Drinfeld-Sokolov hierarchies")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Grading, sl2-triple, s and the splitting of the loop algebra
    Setup(RunArgs),
    /// Generators of W and their images in V(g^f)
    Generators(RunArgs),
    /// Compute the closed-form bracket tables and compare them entry by entry
    Tables(RunArgs),
    /// Conserved densities, evolution equations and Lenard-Magri checks
    Hierarchy(RunArgs),
    /// Run every verification; the exit status is nonzero on any failure
    VerifyAll(RunArgs),
}

impl Command {
    pub fn parts(&self) -> (&'static str, &RunArgs) {
        match self {
            Command::Setup(a) => ("setup", a),
            Command::Generators(a) => ("generators", a),
            Command::Tables(a) => ("tables", a),
            Command::Hierarchy(a) => ("hierarchy", a),
            Command::VerifyAll(a) => ("verify-all", a),
        }
    }
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Nilpotent {
    Minimal,
    Short,
}

#[derive(ValueEnum, Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Text,
    Latex,
    Json,
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    /// slN (2 <= N <= 9) or spN (N even, 2 <= N <= 8)
    #[arg(long, default_value = "sl3")]
    pub algebra: String,
    #[arg(long, value_enum, default_value_t = Nilpotent::Minimal)]
    pub nilpotent: Nilpotent,
    /// e | isotropic | diag:v1,v2,.. | explicit:<element>, e.g. explicit:E13+2*E24
    #[arg(long, default_value = "e")]
    pub s: String,
    /// f+zs | e+s* | center | center:<element> | all
    #[arg(long, default_value = "f+zs")]
    pub a: String,
    /// Highest flow index t_n
    #[arg(long, default_value_t = 1)]
    pub n: usize,
    /// Doubled loop degree up to which h(z) is solved (default: as needed)
    #[arg(long)]
    pub max_degree: Option<i32>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Seed of the randomized axiom checks
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    /// Random samples per axiom suite
    #[arg(long, default_value_t = 200)]
    pub samples: usize,
    /// setup: also print the structure constants
    #[arg(long)]
    pub dump_setup: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Algebra {
    Sl(usize),
    Sp(usize),
}

impl fmt::Display for Algebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Algebra::Sl(n) => write!(f, "sl{}", n),
            Algebra::Sp(n) => write!(f, "sp{}", n),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum SChoice {
    E,
    Isotropic,
    Diag(Vec<String>),
    Explicit(String),
}

impl fmt::Display for SChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SChoice::E => write!(f, "e"),
            SChoice::Isotropic => write!(f, "isotropic"),
            SChoice::Diag(v) => write!(f, "diag:{}", v.join(",")),
            SChoice::Explicit(t) => write!(f, "explicit:{}", t),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AChoice {
    FPlusZs,
    EPlusSStar,
    Center(Option<String>),
    All,
}

impl fmt::Display for AChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            AChoice::FPlusZs => write!(f, "f+zs"),
            AChoice::EPlusSStar => write!(f, "e+s*"),
            AChoice::Center(None) => write!(f, "center"),
            AChoice::Center(Some(t)) => write!(f, "center:{}", t),
            AChoice::All => write!(f, "all"),
        }
    }
}

/// A validated run configuration.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub algebra: Algebra,
    pub nilpotent: NilpotentKind,
    pub s: SChoice,
    pub a: AChoice,
    pub n: usize,
    pub max_degree: Option<i32>,
    pub format: Format,
    pub seed: u64,
    pub samples: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

fn usage<T>(msg: impl Into<String>) -> Result<T, UsageError> {
    Err(UsageError(msg.into()))
}

fn parse_algebra(text: &str) -> Result<Algebra, UsageError> {
    let t = text.trim().to_ascii_lowercase();
    let (kind, rest) = if let Some(r) = t.strip_prefix("sl") {
        ("sl", r)
    } else if let Some(r) = t.strip_prefix("sp") {
        ("sp", r)
    } else {
        return usage(format!("unknown algebra {:?}: expected slN or spN", text));
    };
    let n: usize = rest
        .parse()
        .map_err(|_| UsageError(format!("unknown algebra {:?}: expected slN or spN", text)))?;
    match kind {
        "sl" if (2..=9).contains(&n) => Ok(Algebra::Sl(n)),
        "sl" => usage(format!("sl{} is not supported: N must be between 2 and 9", n)),
        _ if n.is_multiple_of(2) && (2..=8).contains(&n) => Ok(Algebra::Sp(n)),
        _ => usage(format!("sp{} is not supported: N must be even, between 2 and 8", n)),
    }
}

fn parse_s(text: &str) -> Result<SChoice, UsageError> {
    let t = text.trim();
    if t == "e" {
        return Ok(SChoice::E);
    }
    if t == "isotropic" {
        return Ok(SChoice::Isotropic);
    }
    if let Some(rest) = t.strip_prefix("diag:") {
        let vals: Vec<String> = rest.split(',').map(|v| v.trim().to_string()).collect();
        if vals.iter().any(|v| v.is_empty()) {
            return usage(format!("malformed --s {:?}: expected diag:v1,v2,..", text));
        }
        return Ok(SChoice::Diag(vals));
    }
    if let Some(rest) = t.strip_prefix("explicit:") {
        if rest.trim().is_empty() {
            return usage("--s explicit: needs an element, e.g. explicit:E13+E24");
        }
        return Ok(SChoice::Explicit(rest.trim().to_string()));
    }
    usage(format!("unknown --s {:?}: expected e, isotropic, diag:.. or explicit:..", text))
}

fn parse_a(text: &str) -> Result<AChoice, UsageError> {
    let t = text.trim();
    match t {
        "f+zs" | "f+ze" | "f_plus_ze" => return Ok(AChoice::FPlusZs),
        "e+s*" | "e_plus_s_star" => return Ok(AChoice::EPlusSStar),
        "center" | "center_element" => return Ok(AChoice::Center(None)),
        "all" => return Ok(AChoice::All),
        _ => {}
    }
    for prefix in ["center:", "center_element:"] {
        if let Some(rest) = t.strip_prefix(prefix) {
            return Ok(AChoice::Center(Some(rest.trim().to_string())));
        }
    }
    usage(format!("unknown --a {:?}: expected f+zs, e+s*, center, center:<element> or all", text))
}

impl RunConfig {
    /// Validates the flags; `env_degree` is the value of `WDS_MAX_DEGREE`.
    pub fn from_args(args: &RunArgs, env_degree: Option<&str>) -> Result<Self, UsageError> {
        let algebra = parse_algebra(&args.algebra)?;
        let nilpotent = match args.nilpotent {
            Nilpotent::Minimal => NilpotentKind::Minimal,
            Nilpotent::Short => NilpotentKind::Short,
        };
        let s = parse_s(&args.s)?;
        let a = parse_a(&args.a)?;
        let max_degree = match env_degree {
            Some(v) => Some(v.trim().parse::<i32>().map_err(|_| {
                UsageError(format!("{}={:?} is not an integer", MAX_DEGREE_ENV, v))
            })?),
            None => args.max_degree,
        };
        if max_degree.is_some_and(|d| d < 0) {
            return usage("the maximal degree must be nonnegative");
        }
        let cfg = RunConfig {
            algebra,
            nilpotent,
            s,
            a,
            n: args.n,
            max_degree,
            format: args.format,
            seed: args.seed,
            samples: args.samples,
        };
        cfg.check_combination()?;
        Ok(cfg)
    }

    fn check_combination(&self) -> Result<(), UsageError> {
        let short = self.nilpotent == NilpotentKind::Short;
        match (self.algebra, short) {
            (Algebra::Sl(n), true) if n % 2 != 0 => {
                return usage(format!("sl{} has no short nilpotent: short needs an even N", n));
            }
            (Algebra::Sl(2), false) | (Algebra::Sp(2), false) if self.s == SChoice::Isotropic => {
                return usage(format!("{} minimal: g_1/2 = 0, so there is no isotropic s", self.algebra));
            }
            _ => {}
        }
        match (&self.s, self.algebra) {
            (SChoice::Isotropic, _) if short => {
                usage("an isotropic s needs a minimal nilpotent (a short grading has no g_1/2)")
            }
            (SChoice::Isotropic, Algebra::Sp(n)) => usage(format!(
                "sp{} minimal + isotropic s: no embeddable element exists (no s in g_1/2 has s* with [s, s*] = 2x)",
                n
            )),
            (SChoice::Diag(_), _) if !short => usage("diag:.. describes s in g_1 of a short grading; use --nilpotent short"),
            (SChoice::Diag(v), alg) => {
                let m = match alg {
                    Algebra::Sl(n) | Algebra::Sp(n) => n / 2,
                };
                if v.len() != m {
                    return usage(format!("diag:.. for {} needs {} entries, got {}", alg, m, v.len()));
                }
                self.check_a()
            }
            _ => self.check_a(),
        }
    }

    fn check_a(&self) -> Result<(), UsageError> {
        if self.a == AChoice::EPlusSStar && self.s != SChoice::Isotropic {
            return usage("--a e+s* needs --s isotropic (s* is the partner of an embeddable s)");
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(extra: &[&str]) -> RunArgs {
        let mut argv = vec!["wds", "setup"];
        argv.extend_from_slice(extra);
        match Cli::try_parse_from(argv).unwrap().command {
            Command::Setup(a) => a,
            _ => unreachable!(),
        }
    }

    fn check(extra: &[&str]) -> Result<RunConfig, UsageError> {
        RunConfig::from_args(&args(extra), None)
    }

    #[test]
    fn defaults() {
        let c = check(&[]).unwrap();
        assert_eq!(c.algebra, Algebra::Sl(3));
        assert_eq!(c.nilpotent, NilpotentKind::Minimal);
        assert_eq!(c.s, SChoice::E);
        assert_eq!(c.a, AChoice::FPlusZs);
        assert_eq!((c.n, c.seed, c.samples, c.max_degree), (1, 1, 200, None));
    }

    #[test]
    fn algebra_names() {
        assert_eq!(parse_algebra("SL4"), Ok(Algebra::Sl(4)));
        assert_eq!(parse_algebra("sp6"), Ok(Algebra::Sp(6)));
        for bad in ["sl1", "sl10", "sp3", "so5", "sl", "slx"] {
            assert!(parse_algebra(bad).is_err(), "{}", bad);
        }
    }

    #[test]
    fn s_and_a_spellings() {
        assert_eq!(parse_s("diag:1, s1"), Ok(SChoice::Diag(vec!["1".into(), "s1".into()])));
        assert_eq!(parse_s("explicit:E13"), Ok(SChoice::Explicit("E13".into())));
        assert!(parse_s("diag:1,").is_err());
        assert!(parse_s("explicit:").is_err());
        for a in ["f+zs", "f+ze", "f_plus_ze"] {
            assert_eq!(parse_a(a), Ok(AChoice::FPlusZs));
        }
        assert_eq!(parse_a("e_plus_s_star"), Ok(AChoice::EPlusSStar));
        assert_eq!(parse_a("center_element:E11@1"), Ok(AChoice::Center(Some("E11@1".into()))));
        assert!(parse_a("g").is_err());
    }

    #[test]
    fn invalid_combinations() {
        let err = |extra: &[&str]| check(extra).unwrap_err().0;
        assert!(err(&["--algebra", "sp4", "--s", "isotropic"]).contains("no embeddable element exists"));
        assert!(err(&["--algebra", "sl3", "--nilpotent", "short"]).contains("even"));
        assert!(err(&["--algebra", "sl4", "--nilpotent", "short", "--s", "isotropic"]).contains("minimal"));
        assert!(err(&["--algebra", "sl2", "--s", "isotropic"]).contains("g_1/2 = 0"));
        assert!(err(&["--algebra", "sl4", "--s", "diag:1,2"]).contains("short"));
        assert!(err(&["--algebra", "sl6", "--nilpotent", "short", "--s", "diag:1,2"]).contains("3 entries"));
        assert!(err(&["--a", "e+s*"]).contains("isotropic"));
        assert!(check(&["--algebra", "sl4", "--nilpotent", "short", "--s", "diag:1,2"]).is_ok());
        assert!(check(&["--algebra", "sl4", "--s", "isotropic", "--a", "e+s*"]).is_ok());
    }

    #[test]
    fn environment_overrides_max_degree() {
        let a = args(&["--max-degree", "6"]);
        assert_eq!(RunConfig::from_args(&a, None).unwrap().max_degree, Some(6));
        assert_eq!(RunConfig::from_args(&a, Some("8")).unwrap().max_degree, Some(8));
        assert!(RunConfig::from_args(&a, Some("x")).is_err());
        assert!(RunConfig::from_args(&a, Some("-2")).is_err());
    }
}
