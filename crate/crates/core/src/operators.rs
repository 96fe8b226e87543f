//! Second-order differential operators in one variable.
//!
//! The t-side operator of a transmutation pair is kept in divergence form
//! `(a f')' + (b f)' + c f`, the x-side one in non-divergence form
//! `a f'' + b f' + c f`. Coefficients are stored exactly as written and the
//! divergence form is expanded only when applied.

use thiserror::Error;

use crate::expr::{EvalError, Expression, Params, Var};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Form {
    /// `a f'' + b f' + c f`
    NonDivergence,
    /// `(a f')' + (b f)' + c f`
    Divergence,
}

impl Form {
    pub fn name(self) -> &'static str {
        match self {
            Form::NonDivergence => "non-divergence",
            Form::Divergence => "divergence",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum OperatorError {
    #[error("at {var}={at}: {source}")]
    Eval {
        var: Var,
        at: f64,
        #[source]
        source: EvalError,
    },
    #[error("leading coefficient vanishes at {var}={at}")]
    ZeroLeading { var: Var, at: f64 },
}

#[derive(Debug, Clone, PartialEq)]
pub struct DifferentialOperator {
    pub form: Form,
    pub var: Var,
    pub a: Expression,
    pub b: Expression,
    pub c: Expression,
    /// Boundary constant of `f'(0) - h f(0) = 0`.
    pub h: f64,
}

/// Value and first two derivatives of a coefficient or test function.
#[derive(Debug, Clone, Copy)]
struct Local {
    v: f64,
    d1: f64,
    d2: f64,
}

impl DifferentialOperator {
    pub fn new(form: Form, var: Var, a: Expression, b: Expression, c: Expression, h: f64) -> Self {
        Self { form, var, a, b, c, h }
    }

    /// Divergence-form operator in `t`.
    pub fn divergence_t(a: Expression, b: Expression, c: Expression) -> Self {
        Self::new(Form::Divergence, Var::T, a, b, c, 0.0)
    }

    /// Non-divergence operator in `x`.
    pub fn non_divergence_x(a: Expression, b: Expression, c: Expression) -> Self {
        Self::new(Form::NonDivergence, Var::X, a, b, c, 0.0)
    }

    fn local(&self, e: &Expression, pt: f64, params: &Params) -> Result<Local, OperatorError> {
        let j = e.eval_jet_in(self.var, pt, params).map_err(|source| OperatorError::Eval {
            var: self.var,
            at: pt,
            source,
        })?;
        let (v, d1, d2) = j.along(self.var);
        Ok(Local { v, d1, d2 })
    }

    /// Evaluates one coefficient at a point.
    pub fn coefficient(&self, which: char, pt: f64, params: &Params) -> Result<f64, OperatorError> {
        let e = match which {
            'a' => &self.a,
            'b' => &self.b,
            _ => &self.c,
        };
        self.local(e, pt, params).map(|l| l.v)
    }

    /// `(op f)(pt)`.
    pub fn apply(&self, f: &Expression, pt: f64, params: &Params) -> Result<f64, OperatorError> {
        let f = self.local(f, pt, params)?;
        let a = self.local(&self.a, pt, params)?;
        let b = self.local(&self.b, pt, params)?;
        let c = self.local(&self.c, pt, params)?;
        Ok(match self.form {
            Form::NonDivergence => a.v * f.d2 + b.v * f.d1 + c.v * f.v,
            Form::Divergence => a.v * f.d2 + (a.d1 + b.v) * f.d1 + (b.d1 + c.v) * f.v,
        })
    }

    /// `a(eps) f'(eps) - h a(eps) f(eps)`, the boundary functional at the left end.
    pub fn boundary_functional(&self, f: &Expression, eps: f64, params: &Params) -> Result<f64, OperatorError> {
        let f = self.local(f, eps, params)?;
        let a = self.local(&self.a, eps, params)?.v;
        Ok(a * f.d1 - self.h * a * f.v)
    }

    /// Fails on the first sample point where the leading coefficient is zero.
    pub fn check_leading(&self, grid: &[f64], params: &Params) -> Result<(), OperatorError> {
        for &pt in grid {
            if self.local(&self.a, pt, params)?.v == 0.0 {
                return Err(OperatorError::ZeroLeading { var: self.var, at: pt });
            }
        }
        Ok(())
    }

    /// Same operator with `c` replaced.
    pub fn with_c(&self, c: Expression) -> Self {
        Self { c, ..self.clone() }
    }

    /// Max and mean over the grid of `|op f - lambda f| / (1 + |lambda f|)`.
    pub fn eigen_residual(&self, f: &Expression, lambda: f64, grid: &[f64], params: &Params) -> ResidualStats {
        let mut stats = ResidualStats::default();
        for &pt in grid {
            let r = self.apply(f, pt, params).and_then(|af| {
                let fv = self.local(f, pt, params)?.v;
                Ok((af - lambda * fv).abs() / (1.0 + (lambda * fv).abs()))
            });
            stats.push(pt, r);
        }
        stats
    }

    pub fn describe(&self) -> String {
        let d = match self.var {
            Var::X => "x",
            Var::T => "t",
        };
        match self.form {
            Form::NonDivergence => format!(
                "({}) f'' + ({}) f' + ({}) f   [in {d}, h = {}]",
                self.a, self.b, self.c, self.h
            ),
            Form::Divergence => format!(
                "(({}) f')' + (({}) f)' + ({}) f   [in {d}, h = {}]",
                self.a, self.b, self.c, self.h
            ),
        }
    }
}

/// Residual statistics over a point set; failed points are listed, not dropped silently.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct ResidualStats {
    pub max: f64,
    pub mean: f64,
    pub count: usize,
    pub failures: Vec<(f64, String)>,
    sum: f64,
}

impl ResidualStats {
    pub fn push<E: std::fmt::Display>(&mut self, pt: f64, r: Result<f64, E>) {
        match r {
            Ok(v) => {
                self.max = self.max.max(v);
                self.sum += v;
                self.count += 1;
                self.mean = self.sum / self.count as f64;
            }
            Err(e) => self.failures.push((pt, e.to_string())),
        }
    }

    pub fn is_clean(&self) -> bool {
        self.failures.is_empty() && self.count > 0
    }
}

/// `n` evenly spaced points on `[lo, hi]`.
pub fn linspace(lo: f64, hi: f64, n: usize) -> Vec<f64> {
    match n {
        0 => Vec::new(),
        1 => vec![0.5 * (lo + hi)],
        _ => (0..n).map(|k| lo + (hi - lo) * k as f64 / (n - 1) as f64).collect(),
    }
}

/// Default sample grid, away from the coefficient poles at zero.
pub fn default_grid() -> Vec<f64> {
    linspace(0.2, 3.0, 29)
}
