//! Gauss–Jacobi quadrature and the transmutation integral.
//!
//! `T f0(x) = ∫₀ˣ K(x,t) f0(t) dt` is computed from the case's factorization
//! `K f0 = norm · (x−t)^α · t^β · smooth(x,t)`. Mapping `t = x(1+s)/2` turns the
//! singular powers into the Jacobi weight `(1−s)^α (1+s)^β`, leaving a smooth
//! integrand for the rule.

use std::f64::consts::PI;

use thiserror::Error;

use crate::kernels::TransmutationCase;
use crate::specfun;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum QuadError {
    #[error("quadrature order must be at least {min}, got {n}")]
    Order { n: usize, min: usize },
    #[error("weight exponents must exceed -1 (alpha = {alpha}, beta = {beta})")]
    Exponent { alpha: f64, beta: f64 },
    #[error("Newton iteration for root {index} of P_{n} did not converge")]
    NonConvergence { n: usize, index: usize },
    #[error("x must be positive, got {0}")]
    NonPositiveX(f64),
    #[error("case `{0}` declares no singular factorization")]
    NoFactorization(String),
    #[error("evaluation failed at x={x}, t={t}: {reason}")]
    Eval { x: f64, t: f64, reason: String },
}

/// Gauss rule for the weight `(1−s)^alpha (1+s)^beta` on `[−1, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct JacobiRule {
    pub order: usize,
    pub alpha: f64,
    pub beta: f64,
    /// Ascending.
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl JacobiRule {
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&s, &w)| w * f(s)).sum()
    }

    /// `∫(1−s)^α(1+s)^β ds = 2^{α+β+1} B(α+1, β+1)`.
    pub fn weight_integral(&self) -> f64 {
        2f64.powf(self.alpha + self.beta + 1.0) * specfun::beta(self.alpha + 1.0, self.beta + 1.0).unwrap_or(f64::NAN)
    }
}

/// `(P_n(s), P_{n−1}(s))` by the three-term recurrence.
fn jacobi_pair(n: usize, a: f64, b: f64, s: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    if n == 0 {
        return (p0, 0.0);
    }
    let mut p1 = 0.5 * (a - b) + 0.5 * (a + b + 2.0) * s;
    for k in 2..=n {
        let k = k as f64;
        let c = 2.0 * k + a + b;
        let num = (c - 1.0) * (c * (c - 2.0) * s + a * a - b * b) * p1 - 2.0 * (k + a - 1.0) * (k + b - 1.0) * c * p0;
        let p2 = num / (2.0 * k * (k + a + b) * (c - 2.0));
        p0 = p1;
        p1 = p2;
    }
    (p1, p0)
}

/// `(P_n, P_n')` at an interior point.
fn jacobi_with_derivative(n: usize, a: f64, b: f64, s: f64) -> (f64, f64) {
    let (p, pm) = jacobi_pair(n, a, b, s);
    let nf = n as f64;
    let c = 2.0 * nf + a + b;
    let dp = (nf * ((a - b) - c * s) * p + 2.0 * (nf + a) * (nf + b) * pm) / (c * (1.0 - s * s));
    (p, dp)
}

/// Nodes by Newton iteration with deflation against the roots already found.
pub fn jacobi_rule(n: usize, alpha: f64, beta: f64) -> Result<JacobiRule, QuadError> {
    if n == 0 {
        return Err(QuadError::Order { n, min: 1 });
    }
    if !(alpha > -1.0 && beta > -1.0) {
        return Err(QuadError::Exponent { alpha, beta });
    }
    let nf = n as f64;
    let mut roots: Vec<f64> = Vec::with_capacity(n);
    for i in 1..=n {
        let theta = PI * (i as f64 + 0.5 * alpha - 0.25) / (nf + 0.5 * (alpha + beta + 1.0));
        let mut s = theta.cos();
        let mut converged = false;
        for _ in 0..100 {
            let (p, dp) = jacobi_with_derivative(n, alpha, beta, s);
            let defl: f64 = roots.iter().map(|r| 1.0 / (s - r)).sum();
            let step = p / (dp - p * defl);
            s -= step;
            if step.abs() <= 1e-15 {
                converged = true;
                break;
            }
        }
        if !converged || !s.is_finite() || s.abs() >= 1.0 {
            return Err(QuadError::NonConvergence { n, index: i });
        }
        roots.push(s);
    }
    roots.sort_by(f64::total_cmp);

    let ln_c = specfun::ln_gamma(nf + alpha + 1.0).unwrap_or(f64::NAN)
        + specfun::ln_gamma(nf + beta + 1.0).unwrap_or(f64::NAN)
        - specfun::ln_gamma(nf + alpha + beta + 1.0).unwrap_or(f64::NAN)
        - specfun::ln_gamma(nf + 1.0).unwrap_or(f64::NAN);
    let c = ln_c.exp() * 2f64.powf(alpha + beta + 1.0);
    let weights = roots
        .iter()
        .map(|&s| {
            let (_, dp) = jacobi_with_derivative(n, alpha, beta, s);
            c / ((1.0 - s * s) * dp * dp)
        })
        .collect();
    Ok(JacobiRule {
        order: n,
        alpha,
        beta,
        nodes: roots,
        weights,
    })
}

/// `∫₀ˣ (x−t)^α t^β g(t) dt` with the rule's exponents.
pub fn integrate_weighted(
    x: f64,
    rule: &JacobiRule,
    mut g: impl FnMut(f64) -> Result<f64, String>,
) -> Result<f64, QuadError> {
    if !(x > 0.0) {
        return Err(QuadError::NonPositiveX(x));
    }
    let mut sum = 0.0;
    for (&s, &w) in rule.nodes.iter().zip(&rule.weights) {
        let t = 0.5 * x * (1.0 + s);
        let v = g(t).map_err(|reason| QuadError::Eval { x, t, reason })?;
        sum += w * v;
    }
    Ok((0.5 * x).powf(rule.alpha + rule.beta + 1.0) * sum)
}

/// Rule matching a case's factorization.
pub fn rule_for(case: &TransmutationCase, n: usize) -> Result<JacobiRule, QuadError> {
    let fz = case
        .factorization
        .as_ref()
        .ok_or_else(|| QuadError::NoFactorization(case.name.clone()))?;
    jacobi_rule(n, fz.alpha_w, fz.beta_w)
}

/// `T f0(x)` using a prebuilt rule from [`rule_for`].
pub fn apply_with_rule(case: &TransmutationCase, x: f64, rule: &JacobiRule) -> Result<f64, QuadError> {
    let fz = case
        .factorization
        .as_ref()
        .ok_or_else(|| QuadError::NoFactorization(case.name.clone()))?;
    let p = &case.params;
    let norm = case
        .norm_const
        .eval_at(x, 0.0, p)
        .map_err(|e| QuadError::Eval { x, t: 0.0, reason: e.to_string() })?;
    let integral = integrate_weighted(x, rule, |t| fz.smooth.eval_at(x, t, p).map_err(|e| e.to_string()))?;
    Ok(norm * integral)
}

pub const MIN_APPLY_ORDER: usize = 8;

/// `T f0(x) = ∫₀ˣ K(x,t) f0(t) dt` with an `n`-point Gauss–Jacobi rule.
pub fn apply_transmutation(case: &TransmutationCase, x: f64, n: usize) -> Result<f64, QuadError> {
    if n < MIN_APPLY_ORDER {
        return Err(QuadError::Order { n, min: MIN_APPLY_ORDER });
    }
    if !(x > 0.0) {
        return Err(QuadError::NonPositiveX(x));
    }
    apply_with_rule(case, x, &rule_for(case, n)?)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ApplyRow {
    pub x: f64,
    pub transformed: f64,
    pub expected: f64,
    /// `|T f0 − f1| / (1 + |f1|)`.
    pub rel_error: f64,
}

pub fn apply_table(case: &TransmutationCase, xs: &[f64], n: usize) -> Result<Vec<ApplyRow>, QuadError> {
    if n < MIN_APPLY_ORDER {
        return Err(QuadError::Order { n, min: MIN_APPLY_ORDER });
    }
    let rule = rule_for(case, n)?;
    xs.iter()
        .map(|&x| {
            if !(x > 0.0) {
                return Err(QuadError::NonPositiveX(x));
            }
            let transformed = apply_with_rule(case, x, &rule)?;
            let expected = case
                .f1
                .eval_at(x, 0.0, &case.params)
                .map_err(|e| QuadError::Eval { x, t: 0.0, reason: e.to_string() })?;
            Ok(ApplyRow {
                x,
                transformed,
                expected,
                rel_error: (transformed - expected).abs() / (1.0 + expected.abs()),
            })
        })
        .collect()
}

/// Largest `|T f0 − f1| / (1 + |f1|)` over `xs`.
pub fn identity_error(case: &TransmutationCase, xs: &[f64], n: usize) -> Result<f64, QuadError> {
    Ok(apply_table(case, xs, n)?.iter().fold(0.0f64, |m, r| m.max(r.rel_error)))
}

/// Sample points for identity checks: 20 points on the working interval.
pub fn identity_xs(case: &TransmutationCase) -> Vec<f64> {
    crate::operators::linspace(case.x_range.0, case.x_range.1.min(3.0), 20)
}
