//! Line-oriented configuration files for custom cases and solver problems.
//!
//! ```text
//! # comment
//! [case]
//! name = "telegraph"
//! kernel = "besselj(0, mu*sqrt(x^2-t^2))"
//! [params]
//! mu = 1
//! [operatorA]
//! a = "1"
//! ```
//!
//! Expressions are double-quoted strings; numbers may be bare.

use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use crate::expr::{Expression, Params};
use crate::goursat::{Boundary, GoursatProblem, Seed};
use crate::kernels::{Factorization, TransmutationCase};
use crate::operators::{DifferentialOperator, Form};

#[derive(Debug, Clone, PartialEq, Error)]
#[error("line {line}: {message}")]
pub struct ConfigError {
    pub line: usize,
    pub message: String,
}

impl ConfigError {
    fn new(line: usize, message: impl Into<String>) -> Self {
        Self {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Value {
    Str(String),
    Num(f64),
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Value::Str(s) => write!(f, "\"{s}\""),
            Value::Num(v) => write!(f, "{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
struct Entry {
    value: Value,
    line: usize,
}

const SECTIONS: [&str; 5] = ["case", "params", "operatorA", "operatorB", "solver"];

/// Parsed file: section name → key → entry.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ConfigFile {
    sections: BTreeMap<String, BTreeMap<String, Entry>>,
}

fn parse_value(raw: &str, line: usize) -> Result<Value, ConfigError> {
    if let Some(rest) = raw.strip_prefix('"') {
        let body = rest
            .strip_suffix('"')
            .ok_or_else(|| ConfigError::new(line, "unterminated string"))?;
        if body.contains('"') {
            return Err(ConfigError::new(line, "stray quote inside string"));
        }
        return Ok(Value::Str(body.to_string()));
    }
    raw.parse::<f64>()
        .map(Value::Num)
        .map_err(|_| ConfigError::new(line, format!("expected a number or a quoted expression, found `{raw}`")))
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, ConfigError> {
        let mut out = ConfigFile::default();
        let mut current: Option<String> = None;
        for (idx, raw) in text.lines().enumerate() {
            let line = idx + 1;
            let s = raw.trim();
            if s.is_empty() || s.starts_with('#') || s.starts_with(';') {
                continue;
            }
            if let Some(name) = s.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| ConfigError::new(line, "malformed section header"))?
                    .trim();
                if !SECTIONS.contains(&name) {
                    return Err(ConfigError::new(line, format!("unknown section [{name}]")));
                }
                if out.sections.contains_key(name) {
                    return Err(ConfigError::new(line, format!("duplicate section [{name}]")));
                }
                out.sections.insert(name.to_string(), BTreeMap::new());
                current = Some(name.to_string());
                continue;
            }
            let section = current
                .as_ref()
                .ok_or_else(|| ConfigError::new(line, "entry outside of any section"))?;
            let (key, value) = s
                .split_once('=')
                .ok_or_else(|| ConfigError::new(line, "expected key = value"))?;
            let key = key.trim();
            if key.is_empty() || !key.chars().all(|c| c.is_ascii_alphanumeric() || c == '_') {
                return Err(ConfigError::new(line, format!("invalid key `{key}`")));
            }
            let value = parse_value(value.trim(), line)?;
            let entries = out.sections.get_mut(section).expect("section registered");
            if entries.insert(key.to_string(), Entry { value, line }).is_some() {
                return Err(ConfigError::new(line, format!("duplicate key `{key}`")));
            }
        }
        Ok(out)
    }

    pub fn has_section(&self, name: &str) -> bool {
        self.sections.contains_key(name)
    }

    fn section(&self, name: &str) -> Option<&BTreeMap<String, Entry>> {
        self.sections.get(name)
    }

    /// Rejects keys outside `allowed`.
    fn check_keys(&self, section: &str, allowed: &[&str]) -> Result<(), ConfigError> {
        if let Some(entries) = self.section(section) {
            for (k, e) in entries {
                if !allowed.contains(&k.as_str()) {
                    return Err(ConfigError::new(e.line, format!("unknown key `{k}` in [{section}]")));
                }
            }
        }
        Ok(())
    }

    fn entry(&self, section: &str, key: &str) -> Option<&Entry> {
        self.section(section).and_then(|s| s.get(key))
    }

    fn expr(&self, section: &str, key: &str) -> Result<Option<Expression>, ConfigError> {
        let Some(e) = self.entry(section, key) else {
            return Ok(None);
        };
        let text = match &e.value {
            Value::Str(s) => s.clone(),
            Value::Num(v) => format!("{v:?}"),
        };
        Expression::parse(&text).map(Some).map_err(|err| {
            ConfigError::new(e.line, format!("[{section}] {key}: {err}"))
        })
    }

    fn expr_or(&self, section: &str, key: &str, default: &str) -> Result<Expression, ConfigError> {
        Ok(self
            .expr(section, key)?
            .unwrap_or_else(|| Expression::parse(default).expect("default expression parses")))
    }

    fn require_expr(&self, section: &str, key: &str) -> Result<Expression, ConfigError> {
        self.expr(section, key)?.ok_or_else(|| {
            let line = self.section(section).map_or(0, |s| s.values().map(|e| e.line).min().unwrap_or(0));
            ConfigError::new(line, format!("[{section}] requires `{key}`"))
        })
    }

    fn number(&self, section: &str, key: &str) -> Result<Option<f64>, ConfigError> {
        match self.entry(section, key) {
            None => Ok(None),
            Some(Entry { value: Value::Num(v), .. }) => Ok(Some(*v)),
            Some(Entry { value: Value::Str(s), line }) => s
                .trim()
                .parse()
                .map(Some)
                .map_err(|_| ConfigError::new(*line, format!("[{section}] {key}: expected a number"))),
        }
    }

    fn string(&self, section: &str, key: &str) -> Option<String> {
        self.entry(section, key).map(|e| match &e.value {
            Value::Str(s) => s.clone(),
            Value::Num(v) => v.to_string(),
        })
    }

    /// `[params]` with `overrides` applied on top.
    pub fn params(&self, overrides: &Params) -> Result<Params, ConfigError> {
        let mut p = Params::new();
        if let Some(entries) = self.section("params") {
            for (k, e) in entries {
                match e.value {
                    Value::Num(v) => p.insert(k, v),
                    Value::Str(_) => return Err(ConfigError::new(e.line, format!("parameter `{k}` must be a number"))),
                }
            }
        }
        Ok(p.merged(overrides))
    }
}

const CASE_KEYS: [&str; 13] = [
    "name", "kernel", "norm", "f0", "f1", "lambda", "alpha_w", "beta_w", "smooth", "p_diag", "p_zero", "x_min", "x_max",
];
const OP_KEYS: [&str; 4] = ["a", "b", "c", "h"];
const SOLVER_KEYS: [&str; 14] = [
    "sigma", "b0", "b1", "c0", "c1", "h0", "kappa", "seed_x", "rho", "X", "h", "boundary", "reference", "tolerance",
];

fn operator(cfg: &ConfigFile, section: &str, form: Form, var: crate::expr::Var) -> Result<DifferentialOperator, ConfigError> {
    cfg.check_keys(section, &OP_KEYS)?;
    if !cfg.has_section(section) {
        return Err(ConfigError::new(0, format!("missing section [{section}]")));
    }
    Ok(DifferentialOperator::new(
        form,
        var,
        cfg.expr_or(section, "a", "1")?,
        cfg.expr_or(section, "b", "0")?,
        cfg.expr_or(section, "c", "0")?,
        cfg.number(section, "h")?.unwrap_or(0.0),
    ))
}

/// Builds a user-defined case. Singular exponents must be declared as
/// `alpha_w`, `beta_w`; the smooth factor defaults to `K f0 / ((x−t)^α t^β)`.
pub fn load_case(text: &str, overrides: &Params) -> Result<TransmutationCase, ConfigError> {
    let cfg = ConfigFile::parse(text)?;
    for s in ["case", "params", "operatorA", "operatorB"] {
        if s != "params" && !cfg.has_section(s) {
            return Err(ConfigError::new(0, format!("missing section [{s}]")));
        }
    }
    cfg.check_keys("case", &CASE_KEYS)?;
    if cfg.has_section("solver") {
        return Err(ConfigError::new(cfg.entry_line("solver"), "[solver] is only valid for the solve command"));
    }
    let params = cfg.params(overrides)?;
    let kernel_body = cfg.require_expr("case", "kernel")?;
    let norm_const = cfg.expr_or("case", "norm", "1")?;
    let f0 = cfg.require_expr("case", "f0")?;
    let f1 = cfg.require_expr("case", "f1")?;
    let op_a = operator(&cfg, "operatorA", Form::Divergence, crate::expr::Var::T)?;
    let op_b = operator(&cfg, "operatorB", Form::NonDivergence, crate::expr::Var::X)?;
    let alpha_w = cfg.number("case", "alpha_w")?.unwrap_or(0.0);
    let beta_w = cfg.number("case", "beta_w")?.unwrap_or(0.0);
    let smooth = match cfg.expr("case", "smooth")? {
        Some(s) => s,
        None => {
            let text = format!("({kernel_body})*({f0})/((x-t)^({alpha_w:?})*t^({beta_w:?}))");
            Expression::parse(&text).map_err(|e| ConfigError::new(0, format!("smooth factor: {e}")))?
        }
    };
    let x_range = (
        cfg.number("case", "x_min")?.unwrap_or(0.2),
        cfg.number("case", "x_max")?.unwrap_or(3.0),
    );
    if !(x_range.0 > 0.0 && x_range.1 > x_range.0) {
        return Err(ConfigError::new(0, "[case] needs 0 < x_min < x_max"));
    }
    Ok(TransmutationCase {
        name: cfg.string("case", "name").unwrap_or_else(|| "custom".to_string()),
        kernel: norm_const.times(&kernel_body),
        kernel_body,
        norm_const,
        f0,
        f1,
        op_a,
        op_b,
        lambda: Some(cfg.number("case", "lambda")?.unwrap_or(0.0)),
        rho: 0.0,
        p_diag: cfg.number("case", "p_diag")?.unwrap_or(alpha_w),
        p_zero: cfg.number("case", "p_zero")?.unwrap_or(beta_w),
        factorization: Some(Factorization { alpha_w, beta_w, smooth }),
        spectral: None,
        x_range,
        constraints: Vec::new(),
        provenance: "user-defined case".to_string(),
        notes: Vec::new(),
        params,
    })
}

impl ConfigFile {
    fn entry_line(&self, section: &str) -> usize {
        self.section(section)
            .and_then(|s| s.values().map(|e| e.line).min())
            .unwrap_or(0)
    }
}

/// Solver problem plus optional reference kernel and tolerance.
#[derive(Debug, Clone, PartialEq)]
pub struct SolverSpec {
    pub problem: GoursatProblem,
    pub reference: Option<Expression>,
    pub tolerance: Option<f64>,
}

pub fn load_problem(text: &str, overrides: &Params) -> Result<SolverSpec, ConfigError> {
    let cfg = ConfigFile::parse(text)?;
    if !cfg.has_section("solver") {
        return Err(ConfigError::new(0, "missing section [solver]"));
    }
    cfg.check_keys("solver", &SOLVER_KEYS)?;
    let num = |k: &str, d: f64| cfg.number("solver", k).map(|v| v.unwrap_or(d));
    let x_max = num("X", 1.0)?;
    let h = num("h", 1.0 / 64.0)?;
    let mut problem = GoursatProblem::new(x_max, h);
    problem.sigma = num("sigma", 1.0)?;
    problem.b0 = cfg.expr_or("solver", "b0", "0")?;
    problem.b1 = cfg.expr_or("solver", "b1", "0")?;
    problem.c0 = cfg.expr_or("solver", "c0", "0")?;
    problem.c1 = cfg.expr_or("solver", "c1", "0")?;
    problem.h0 = num("h0", 0.0)?;
    problem.kappa = num("kappa", 1.0)?;
    problem.rho = num("rho", 0.0)?;
    if let Some(x0) = cfg.number("solver", "seed_x")? {
        problem.seed = Seed::At(x0);
    }
    if let Some(b) = cfg.string("solver", "boundary") {
        problem.boundary = Boundary::from_name(&b).ok_or_else(|| {
            ConfigError::new(
                cfg.entry("solver", "boundary").map_or(0, |e| e.line),
                format!("unknown boundary `{b}` (expected neumann, robin or reflect)"),
            )
        })?;
    }
    problem.params = cfg.params(overrides)?;
    Ok(SolverSpec {
        problem,
        reference: cfg.expr("solver", "reference")?,
        tolerance: cfg.number("solver", "tolerance")?,
    })
}
