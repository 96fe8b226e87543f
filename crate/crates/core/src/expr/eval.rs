//! Evaluation of expression trees as plain values or as second-order jets.
//!
//! Both modes share one generic walker. Derivative rules of registry functions
//! are only invoked in jet mode and only when the argument actually varies,
//! so plain evaluation never pays for shifted-order Bessel calls.

use std::ops::{Add, Mul, Neg, Sub};

use super::{BinOp, EvalError, Expression, Func, Jet2, Node, Params, Var};
use crate::specfun::{self, SpecFunError};

/// Variable and parameter bindings for one evaluation.
#[derive(Debug, Clone, Copy)]
pub struct Env<'a> {
    pub x: Option<f64>,
    pub t: Option<f64>,
    pub params: &'a Params,
}

impl<'a> Env<'a> {
    pub fn new(params: &'a Params) -> Self {
        Self {
            x: None,
            t: None,
            params,
        }
    }

    pub fn at(x: f64, t: f64, params: &'a Params) -> Self {
        Self {
            x: Some(x),
            t: Some(t),
            params,
        }
    }

    pub fn with_x(mut self, x: f64) -> Self {
        self.x = Some(x);
        self
    }

    pub fn with_t(mut self, t: f64) -> Self {
        self.t = Some(t);
        self
    }
}

type Derivs = Result<(f64, f64), String>;

trait Scalar: Copy + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self> {
    fn lift(c: f64) -> Self;
    fn variable(var: Var, value: f64) -> Self;
    fn value(&self) -> f64;
    /// Applies a scalar function with value `f`; `derivs` yields `(f', f'')`
    /// and is only called when derivative channels are needed.
    fn chain(self, f: f64, derivs: impl FnOnce() -> Derivs) -> Result<Self, String>;
}

impl Scalar for f64 {
    fn lift(c: f64) -> Self {
        c
    }

    fn variable(_: Var, value: f64) -> Self {
        value
    }

    fn value(&self) -> f64 {
        *self
    }

    fn chain(self, f: f64, _: impl FnOnce() -> Derivs) -> Result<Self, String> {
        Ok(f)
    }
}

impl Scalar for Jet2 {
    fn lift(c: f64) -> Self {
        Jet2::constant(c)
    }

    fn variable(var: Var, value: f64) -> Self {
        match var {
            Var::X => Jet2::var_x(value),
            Var::T => Jet2::var_t(value),
        }
    }

    fn value(&self) -> f64 {
        self.value
    }

    fn chain(self, f: f64, derivs: impl FnOnce() -> Derivs) -> Result<Self, String> {
        if Jet2::is_constant(&self) {
            return Ok(Jet2::constant(f));
        }
        let (d1, d2) = derivs()?;
        if !(d1.is_finite() && d2.is_finite()) {
            return Err("derivative is not finite at this point".into());
        }
        Ok(Jet2::chain(self, f, d1, d2))
    }
}

struct Ctx<'a, S> {
    x: Option<S>,
    t: Option<S>,
    params: &'a Params,
}

fn domain(node: &Node, reason: impl Into<String>) -> EvalError {
    EvalError::Domain {
        node: node.to_string(),
        reason: reason.into(),
    }
}

fn sf(e: SpecFunError) -> String {
    e.to_string()
}

fn finite<S: Scalar>(node: &Node, v: S) -> Result<S, EvalError> {
    if v.value().is_finite() {
        Ok(v)
    } else {
        Err(domain(node, "result is not finite"))
    }
}

fn eval_node<S: Scalar>(node: &Node, ctx: &Ctx<'_, S>) -> Result<S, EvalError> {
    match node {
        Node::Const(c) => Ok(S::lift(*c)),
        Node::Var(v) => {
            let bound = match v {
                Var::X => ctx.x,
                Var::T => ctx.t,
            };
            bound.ok_or_else(|| EvalError::Unbound(v.name().to_string()))
        }
        Node::Param(name) => ctx
            .params
            .get(name)
            .map(S::lift)
            .ok_or_else(|| EvalError::Unbound(name.clone())),
        Node::Neg(inner) => Ok(-eval_node(inner, ctx)?),
        Node::Binary(op, l, r) => {
            let lv = eval_node(l, ctx)?;
            match op {
                BinOp::Add => finite(node, lv + eval_node(r, ctx)?),
                BinOp::Sub => finite(node, lv - eval_node(r, ctx)?),
                BinOp::Mul => finite(node, lv * eval_node(r, ctx)?),
                BinOp::Div => {
                    let rv = eval_node(r, ctx)?;
                    let d = rv.value();
                    if d == 0.0 {
                        return Err(domain(node, "division by zero"));
                    }
                    let inv = rv
                        .chain(1.0 / d, || Ok((-1.0 / (d * d), 2.0 / (d * d * d))))
                        .map_err(|e| domain(node, e))?;
                    finite(node, lv * inv)
                }
                BinOp::Pow => pow(node, lv, r, ctx),
            }
        }
        Node::Call(func, args) => call(node, *func, args, ctx),
    }
}

fn pow<S: Scalar>(node: &Node, base: S, exp_node: &Node, ctx: &Ctx<'_, S>) -> Result<S, EvalError> {
    let exponent = eval_node(exp_node, ctx)?;
    let b = base.value();
    if exp_node.is_var_free() {
        let p = exponent.value();
        if p == p.round() && p.abs() <= 1024.0 {
            let n = p as i32;
            if b == 0.0 && n < 0 {
                return Err(domain(node, "zero raised to a negative power"));
            }
            let f = b.powi(n);
            let nf = n as f64;
            let out = base
                .chain(f, || {
                    let d1 = if n == 0 { 0.0 } else { nf * b.powi(n - 1) };
                    let d2 = if n == 0 || n == 1 { 0.0 } else { nf * (nf - 1.0) * b.powi(n - 2) };
                    Ok((d1, d2))
                })
                .map_err(|e| domain(node, e))?;
            return finite(node, out);
        }
        if b < 0.0 {
            return Err(domain(node, "negative base with non-integer exponent"));
        }
        if b == 0.0 {
            if p <= 0.0 {
                return Err(domain(node, "zero base with non-positive exponent"));
            }
            let out = base
                .chain(0.0, || {
                    if p < 2.0 {
                        Err("power is not twice differentiable at zero base".into())
                    } else {
                        Ok((0.0, 0.0))
                    }
                })
                .map_err(|e| domain(node, e))?;
            return Ok(out);
        }
        let f = b.powf(p);
        let out = base
            .chain(f, || Ok((p * b.powf(p - 1.0), p * (p - 1.0) * b.powf(p - 2.0))))
            .map_err(|e| domain(node, e))?;
        return finite(node, out);
    }
    if b <= 0.0 {
        return Err(domain(node, "variable exponent requires a positive base"));
    }
    let ln = base
        .chain(b.ln(), || Ok((1.0 / b, -1.0 / (b * b))))
        .map_err(|e| domain(node, e))?;
    let prod = exponent * ln;
    let e = prod.value().exp();
    let out = prod.chain(e, || Ok((e, e))).map_err(|err| domain(node, err))?;
    finite(node, out)
}

fn constant_arg<S: Scalar>(node: &Node, arg: &Node, ctx: &Ctx<'_, S>, role: &str) -> Result<f64, EvalError> {
    if !arg.is_var_free() {
        return Err(domain(node, format!("{role} must not depend on x or t")));
    }
    Ok(eval_node(arg, ctx)?.value())
}

fn call<S: Scalar>(node: &Node, func: Func, args: &[Node], ctx: &Ctx<'_, S>) -> Result<S, EvalError> {
    let wrap = |r: Result<S, String>| r.map_err(|e| domain(node, e)).and_then(|v| finite(node, v));
    match func {
        Func::Sin | Func::Cos | Func::Sinh | Func::Cosh | Func::Exp => {
            let z = eval_node(&args[0], ctx)?;
            let u = z.value();
            let (f, d1, d2) = match func {
                Func::Sin => (u.sin(), u.cos(), -u.sin()),
                Func::Cos => (u.cos(), -u.sin(), -u.cos()),
                Func::Sinh => (u.sinh(), u.cosh(), u.sinh()),
                Func::Cosh => (u.cosh(), u.sinh(), u.cosh()),
                _ => (u.exp(), u.exp(), u.exp()),
            };
            wrap(z.chain(f, || Ok((d1, d2))))
        }
        Func::Log => {
            let z = eval_node(&args[0], ctx)?;
            let u = z.value();
            if u <= 0.0 {
                return Err(domain(node, "logarithm of a non-positive number"));
            }
            wrap(z.chain(u.ln(), || Ok((1.0 / u, -1.0 / (u * u)))))
        }
        Func::Sqrt => {
            let z = eval_node(&args[0], ctx)?;
            let u = z.value();
            if u < 0.0 {
                return Err(domain(node, "square root of a negative number"));
            }
            let s = u.sqrt();
            wrap(z.chain(s, || {
                if u == 0.0 {
                    Err("square root is not differentiable at zero".into())
                } else {
                    Ok((0.5 / s, -0.25 / (s * u)))
                }
            }))
        }
        Func::Abs => {
            let z = eval_node(&args[0], ctx)?;
            let u = z.value();
            wrap(z.chain(u.abs(), || {
                if u == 0.0 {
                    Err("abs is not differentiable at zero".into())
                } else {
                    Ok((u.signum(), 0.0))
                }
            }))
        }
        Func::Gamma => {
            let z = eval_node(&args[0], ctx)?;
            let u = z.value();
            let g = specfun::gamma(u).map_err(|e| domain(node, sf(e)))?;
            wrap(z.chain(g, || {
                let psi = specfun::digamma(u).map_err(sf)?;
                let psi1 = specfun::trigamma(u).map_err(sf)?;
                Ok((g * psi, g * (psi * psi + psi1)))
            }))
        }
        Func::Beta => {
            let a = constant_arg(node, &args[0], ctx, "beta arguments")?;
            let b = constant_arg(node, &args[1], ctx, "beta arguments")?;
            let v = specfun::beta(a, b).map_err(|e| domain(node, sf(e)))?;
            finite(node, S::lift(v))
        }
        Func::BesselJ | Func::BesselI => {
            let nu = constant_arg(node, &args[0], ctx, "Bessel order")?;
            let z = eval_node(&args[1], ctx)?;
            let u = z.value();
            let modified = func == Func::BesselI;
            let (plain, shifted): (fn(f64, f64) -> specfun::Result<f64>, fn(f64, f64) -> specfun::Result<f64>) =
                if modified {
                    (specfun::bessel_i, specfun::bessel_i_any_order)
                } else {
                    (specfun::bessel_j, specfun::bessel_j_any_order)
                };
            let f = plain(nu, u).map_err(|e| domain(node, sf(e)))?;
            // J' = (J_{nu-1} - J_{nu+1})/2, J'' = (J_{nu-2} - 2J + J_{nu+2})/4;
            // the modified function uses plus signs throughout.
            let s = if modified { 1.0 } else { -1.0 };
            wrap(z.chain(f, || {
                let m1 = shifted(nu - 1.0, u).map_err(sf)?;
                let p1 = shifted(nu + 1.0, u).map_err(sf)?;
                let m2 = shifted(nu - 2.0, u).map_err(sf)?;
                let p2 = shifted(nu + 2.0, u).map_err(sf)?;
                Ok((0.5 * (m1 + s * p1), 0.25 * (m2 + 2.0 * s * f + p2)))
            }))
        }
        Func::BesselJr | Func::BesselIr => {
            let nu = constant_arg(node, &args[0], ctx, "Bessel order")?;
            let z = eval_node(&args[1], ctx)?;
            let u = z.value();
            let reduced = if func == Func::BesselIr {
                specfun::bessel_i_reduced
            } else {
                specfun::bessel_j_reduced
            };
            let s = if func == Func::BesselIr { 1.0 } else { -1.0 };
            let f = reduced(nu, u).map_err(|e| domain(node, sf(e)))?;
            wrap(z.chain(f, || {
                let r1 = reduced(nu + 1.0, u).map_err(sf)?;
                let r2 = reduced(nu + 2.0, u).map_err(sf)?;
                Ok((s * u * r1, s * r1 + u * u * r2))
            }))
        }
        Func::Gegenbauer => {
            let m = constant_arg(node, &args[0], ctx, "Gegenbauer degree")?;
            if m < 0.0 || m != m.round() || m > u32::MAX as f64 {
                return Err(domain(node, "Gegenbauer degree must be a non-negative integer"));
            }
            let m = m as u32;
            let alpha = constant_arg(node, &args[1], ctx, "Gegenbauer index")?;
            let z = eval_node(&args[2], ctx)?;
            let u = z.value();
            let f = specfun::gegenbauer(m, alpha, u);
            wrap(z.chain(f, || {
                let d1 = if m >= 1 {
                    2.0 * alpha * specfun::gegenbauer(m - 1, alpha + 1.0, u)
                } else {
                    0.0
                };
                let d2 = if m >= 2 {
                    4.0 * alpha * (alpha + 1.0) * specfun::gegenbauer(m - 2, alpha + 2.0, u)
                } else {
                    0.0
                };
                Ok((d1, d2))
            }))
        }
        Func::Hyp1F2 => {
            let a = constant_arg(node, &args[0], ctx, "hypergeometric parameter")?;
            let b1 = constant_arg(node, &args[1], ctx, "hypergeometric parameter")?;
            let b2 = constant_arg(node, &args[2], ctx, "hypergeometric parameter")?;
            let z = eval_node(&args[3], ctx)?;
            let u = z.value();
            let f = specfun::hyp1f2(a, b1, b2, u).map_err(|e| domain(node, sf(e)))?;
            wrap(z.chain(f, || {
                let f1 = specfun::hyp1f2(a + 1.0, b1 + 1.0, b2 + 1.0, u).map_err(sf)?;
                let f2 = specfun::hyp1f2(a + 2.0, b1 + 2.0, b2 + 2.0, u).map_err(sf)?;
                let c1 = a / (b1 * b2);
                let c2 = c1 * (a + 1.0) / ((b1 + 1.0) * (b2 + 1.0));
                Ok((c1 * f1, c2 * f2))
            }))
        }
    }
}

impl Expression {
    /// Plain evaluation against an environment.
    pub fn eval(&self, env: &Env<'_>) -> Result<f64, EvalError> {
        let ctx = Ctx {
            x: env.x,
            t: env.t,
            params: env.params,
        };
        eval_node(self.root(), &ctx)
    }

    /// Evaluation with `x` and `t` taken from the binding map when present.
    pub fn evaluate(&self, bindings: &Params) -> Result<f64, EvalError> {
        let env = Env {
            x: bindings.get("x"),
            t: bindings.get("t"),
            params: bindings,
        };
        self.eval(&env)
    }

    pub fn eval_at(&self, x: f64, t: f64, params: &Params) -> Result<f64, EvalError> {
        self.eval(&Env::at(x, t, params))
    }

    /// Value and exact first and second partials in `x` and `t`.
    pub fn eval_jet(&self, x: f64, t: f64, params: &Params) -> Result<Jet2, EvalError> {
        let ctx = Ctx {
            x: Some(Jet2::var_x(x)),
            t: Some(Jet2::var_t(t)),
            params,
        };
        eval_node(self.root(), &ctx)
    }

    /// Jet of an expression in a single variable; the other variable is unbound.
    pub fn eval_jet_in(&self, var: Var, at: f64, params: &Params) -> Result<Jet2, EvalError> {
        let v = Some(<Jet2 as Scalar>::variable(var, at));
        let ctx = match var {
            Var::X => Ctx { x: v, t: None, params },
            Var::T => Ctx { x: None, t: v, params },
        };
        eval_node(self.root(), &ctx)
    }
}
