//! Kernels from operator pairs by characteristic marching.
//!
//! With constant leading coefficient `a0 = a1 = σ` the hyperbolic condition in
//! characteristic coordinates `u = x + t`, `v = x − t` reads
//!
//! ```text
//! −4σ K_uv = (b0 + b1) K_u + (b1 − b0) K_v + (c1 − c0) K.
//! ```
//!
//! Data: `K(x,x)` from the diagonal ODE `2σ K0' + (b1 − b0) K0 = 0` along
//! `v = 0`, and a Robin-type condition on `t = 0` (the line `u = v`).
//! The lattice is `K[i][j]` at `u = ih`, `v = jh`, so `x = (i+j)h/2`,
//! `t = (i−j)h/2`; the triangle `0 ≤ t ≤ x ≤ X` is `j ≤ i`, `i + j ≤ 2N`.

use std::io::{self, Write};

use thiserror::Error;

use crate::conditions::KernelField;
use crate::expr::{Expression, Jet2, Params, Var};
use crate::quadrature::{jacobi_rule, JacobiRule};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GoursatError {
    #[error("invalid lattice: {0}")]
    Lattice(String),
    #[error("sigma must be +1 or -1, got {0}")]
    Sigma(f64),
    #[error("coefficient {name} must depend only on {var}")]
    WrongVariable { name: &'static str, var: Var },
    #[error("coefficient {name} cannot be evaluated at {var}={at}: {reason}")]
    Coefficient {
        name: &'static str,
        var: Var,
        at: f64,
        reason: String,
    },
    #[error("diagonal blows up at x=0 (exponent {exponent}); use kappa = 0 or seed away from the origin")]
    DiagonalBlowUp { exponent: f64 },
    #[error("boundary variant {0} needs b0 regular at t=0")]
    SingularBoundary(&'static str),
    #[error("non-finite kernel value at lattice point ({i}, {j})")]
    NonFinite { i: usize, j: usize },
    #[error("need at least 3 diagonal samples, got {0}")]
    TooFewSamples(usize),
}

/// Condition imposed on the line `t = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Boundary {
    /// `K_t = 0`; never evaluates `b0` at `t = 0`.
    Neumann,
    /// `σ K_t − (b0(0) + h0 σ) K = 0`; needs regular `b0`.
    Robin,
    /// Even mirror `K(x,−t) = K(x,t)` through a ghost cell.
    Reflect,
}

impl Boundary {
    pub fn name(self) -> &'static str {
        match self {
            Boundary::Neumann => "neumann",
            Boundary::Robin => "robin",
            Boundary::Reflect => "reflect",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        [Boundary::Neumann, Boundary::Robin, Boundary::Reflect]
            .into_iter()
            .find(|b| b.name() == s)
    }
}

/// Where the diagonal normalization `K(x0, x0) = κ` is imposed.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Seed {
    Origin,
    At(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GoursatProblem {
    pub sigma: f64,
    /// Function of `t`.
    pub b0: Expression,
    /// Function of `x`.
    pub b1: Expression,
    /// Function of `t`.
    pub c0: Expression,
    /// Function of `x`.
    pub c1: Expression,
    pub h0: f64,
    pub kappa: f64,
    pub seed: Seed,
    /// Declared pole `b1 − b0 = rho/x + smooth` on the diagonal.
    pub rho: f64,
    pub x_max: f64,
    pub h: f64,
    pub boundary: Boundary,
    pub params: Params,
}

impl GoursatProblem {
    /// `σ = 1`, all coefficients zero, `κ = 1`, Neumann boundary.
    pub fn new(x_max: f64, h: f64) -> Self {
        let zero = Expression::constant(0.0);
        Self {
            sigma: 1.0,
            b0: zero.clone(),
            b1: zero.clone(),
            c0: zero.clone(),
            c1: zero,
            h0: 0.0,
            kappa: 1.0,
            seed: Seed::Origin,
            rho: 0.0,
            x_max,
            h,
            boundary: Boundary::Neumann,
            params: Params::new(),
        }
    }

    /// Telegraph pair `K_tt − K_xx = μ² K` (or `−μ² K` when `modified`).
    pub fn telegraph(mu: f64, x_max: f64, h: f64, modified: bool) -> Self {
        let c1 = if modified { -mu * mu } else { mu * mu };
        Self {
            c1: Expression::constant(c1),
            ..Self::new(x_max, h)
        }
    }

    /// Number of `h` steps spanning `[0, X]`.
    pub fn steps(&self) -> Result<usize, GoursatError> {
        if !(self.x_max > 0.0) || !(self.h > 0.0) {
            return Err(GoursatError::Lattice(format!("X = {} and h = {} must be positive", self.x_max, self.h)));
        }
        let r = self.x_max / self.h;
        if (r - r.round()).abs() > 1e-9 * r.max(1.0) || r.round() < 1.0 {
            return Err(GoursatError::Lattice(format!("X/h = {r} is not a positive integer")));
        }
        Ok(r.round() as usize)
    }

    fn validate(&self) -> Result<(), GoursatError> {
        if self.sigma != 1.0 && self.sigma != -1.0 {
            return Err(GoursatError::Sigma(self.sigma));
        }
        for (name, e, other) in [
            ("b0", &self.b0, Var::X),
            ("c0", &self.c0, Var::X),
            ("b1", &self.b1, Var::T),
            ("c1", &self.c1, Var::T),
        ] {
            if e.uses_var(other) {
                let var = if other == Var::X { Var::T } else { Var::X };
                return Err(GoursatError::WrongVariable { name, var });
            }
        }
        Ok(())
    }
}

fn eval_in(name: &'static str, e: &Expression, var: Var, at: f64, p: &Params) -> Result<f64, GoursatError> {
    let (x, t) = match var {
        Var::X => (at, 0.0),
        Var::T => (0.0, at),
    };
    e.eval_at(x, t, p)
        .ok()
        .filter(|v| v.is_finite())
        .ok_or_else(|| GoursatError::Coefficient {
            name,
            var,
            at,
            reason: e.eval_at(x, t, p).map_or_else(|err| err.to_string(), |v| format!("value {v}")),
        })
}

/// Cumulative `∫ smooth` over consecutive panels with a 32-point Gauss–Legendre rule.
struct Diagonal<'a> {
    p: &'a GoursatProblem,
    gl: JacobiRule,
}

impl<'a> Diagonal<'a> {
    fn new(p: &'a GoursatProblem) -> Self {
        Self {
            p,
            gl: jacobi_rule(32, 0.0, 0.0).expect("Gauss-Legendre rule of order 32"),
        }
    }

    /// `b1(s) − b0(s) − ρ/s`.
    fn smooth(&self, s: f64) -> Result<f64, GoursatError> {
        let p = self.p;
        let b1 = eval_in("b1", &p.b1, Var::X, s, &p.params)?;
        let b0 = eval_in("b0", &p.b0, Var::T, s, &p.params)?;
        Ok(b1 - b0 - p.rho / s)
    }

    fn panel(&self, a: f64, b: f64) -> Result<f64, GoursatError> {
        let (m, r) = (0.5 * (a + b), 0.5 * (b - a));
        let mut acc = 0.0;
        for (&s, &w) in self.gl.nodes.iter().zip(&self.gl.weights) {
            acc += w * self.smooth(m + r * s)?;
        }
        Ok(r * acc)
    }

    fn integral(&self, a: f64, b: f64) -> Result<f64, GoursatError> {
        if a == b {
            return Ok(0.0);
        }
        let panels = ((b - a).abs() / 0.25).ceil().max(1.0) as usize;
        let w = (b - a) / panels as f64;
        (0..panels).try_fold(0.0, |acc, k| Ok(acc + self.panel(a + k as f64 * w, a + (k + 1) as f64 * w)?))
    }

    fn exponent(&self) -> f64 {
        -self.p.rho / (2.0 * self.p.sigma)
    }

    /// Seed point and value of the exponential part there.
    fn anchor(&self) -> Result<f64, GoursatError> {
        match self.p.seed {
            Seed::Origin => {
                if self.exponent() < 0.0 && self.p.kappa != 0.0 {
                    return Err(GoursatError::DiagonalBlowUp { exponent: self.exponent() });
                }
                Ok(0.0)
            }
            Seed::At(x0) if x0 > 0.0 => Ok(x0),
            Seed::At(x0) => Err(GoursatError::Lattice(format!("seed point {x0} must be positive"))),
        }
    }

    /// `K0(x)` given `∫_{x0}^{x} smooth`.
    fn value(&self, x: f64, x0: f64, integral: f64) -> f64 {
        let p = self.p;
        let power = match (self.exponent(), x0) {
            (e, _) if e == 0.0 => 1.0,
            (e, x0) if x0 == 0.0 => x.powf(e),
            (e, x0) => (x / x0).powf(e),
        };
        p.kappa * power * (-integral / (2.0 * p.sigma)).exp()
    }

    /// Values on `x_k = k·dx`, `k = 0..=m`, with one panel per step.
    fn on_lattice(&self, dx: f64, m: usize) -> Result<Vec<f64>, GoursatError> {
        let x0 = self.anchor()?;
        if x0 > 0.0 && self.exponent() < 0.0 && self.p.kappa != 0.0 {
            return Err(GoursatError::DiagonalBlowUp { exponent: self.exponent() });
        }
        let mut cum = vec![0.0; m + 1];
        for k in 1..=m {
            cum[k] = cum[k - 1] + self.panel((k - 1) as f64 * dx, k as f64 * dx)?;
        }
        let shift = if x0 > 0.0 { self.integral(0.0, x0)? } else { 0.0 };
        Ok((0..=m).map(|k| self.value(k as f64 * dx, x0, cum[k] - shift)).collect())
    }
}

/// `K(x,x)` at each `x` in `xs` (all positive unless seeded at the origin).
pub fn diagonal_values(problem: &GoursatProblem, xs: &[f64]) -> Result<Vec<f64>, GoursatError> {
    problem.validate()?;
    let d = Diagonal::new(problem);
    let x0 = d.anchor()?;
    xs.iter()
        .map(|&x| {
            if x < 0.0 || (x == 0.0 && d.exponent() < 0.0) {
                return Err(GoursatError::Lattice(format!("diagonal undefined at x = {x}")));
            }
            Ok(d.value(x, x0, d.integral(x0, x)?))
        })
        .collect()
}

/// Coefficients tabulated on the half-step grid `k·h/2`.
struct Tables {
    /// `b0(t)`, `c0(t)` for `t = k h/2`, `k ∈ [−2N, 2N]` (negative only in full solves).
    b0: Vec<f64>,
    c0: Vec<f64>,
    b1: Vec<f64>,
    c1: Vec<f64>,
    offset: usize,
    /// `b0(0)` when it is finite.
    b0_at_zero: Option<f64>,
}

impl Tables {
    fn build(p: &GoursatProblem, n: usize, negative_t: bool) -> Result<Self, GoursatError> {
        let m = 2 * n;
        let half = 0.5 * p.h;
        let lo = if negative_t { -(m as isize) } else { 1 };
        let offset = m;
        let mut b0 = vec![f64::NAN; 2 * m + 1];
        let mut c0 = vec![f64::NAN; 2 * m + 1];
        for k in lo..=m as isize {
            if k == 0 {
                continue;
            }
            let t = k as f64 * half;
            b0[(k + offset as isize) as usize] = eval_in("b0", &p.b0, Var::T, t, &p.params)?;
            c0[(k + offset as isize) as usize] = eval_in("c0", &p.c0, Var::T, t, &p.params)?;
        }
        let b0_at_zero = eval_in("b0", &p.b0, Var::T, 0.0, &p.params).ok();
        if let Some(v) = b0_at_zero {
            b0[offset] = v;
        }
        c0[offset] = eval_in("c0", &p.c0, Var::T, 0.0, &p.params).unwrap_or(f64::NAN);
        let mut b1 = vec![f64::NAN; m + 1];
        let mut c1 = vec![f64::NAN; m + 1];
        for k in 1..=m {
            let x = k as f64 * half;
            b1[k] = eval_in("b1", &p.b1, Var::X, x, &p.params)?;
            c1[k] = eval_in("c1", &p.c1, Var::X, x, &p.params)?;
        }
        Ok(Self {
            b0,
            c0,
            b1,
            c1,
            offset,
            b0_at_zero,
        })
    }

    /// `(b0 + b1, b1 − b0, c1 − c0)` at `x = kx h/2`, `t = kt h/2`.
    fn at(&self, kx: usize, kt: isize) -> (f64, f64, f64) {
        let it = (kt + self.offset as isize) as usize;
        let (b0, c0) = (self.b0[it], self.c0[it]);
        let (b1, c1) = (self.b1[kx], self.c1[kx]);
        (b0 + b1, b1 - b0, c1 - c0)
    }
}

/// Dense `(2N+1)²` storage; entries outside the solved region are NaN.
#[derive(Debug, Clone, PartialEq)]
struct Lattice {
    m: usize,
    data: Vec<f64>,
}

impl Lattice {
    fn new(m: usize) -> Self {
        Self {
            m,
            data: vec![f64::NAN; (m + 1) * (m + 1)],
        }
    }

    fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * (self.m + 1) + j]
    }

    fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * (self.m + 1) + j] = v;
    }
}

struct Marcher<'a> {
    sigma: f64,
    h: f64,
    tables: &'a Tables,
}

impl Marcher<'_> {
    /// Cell update for `(i, j)` from `w = K(i−1,j)`, `s = K(i,j−1)`, `sw = K(i−1,j−1)`.
    fn cell(&self, i: usize, j: usize, w: f64, s: f64, sw: f64) -> f64 {
        let (bp, bm, dc) = self.tables.at(i + j - 1, i as isize - j as isize);
        let base = w + s - sw;
        let h = self.h;
        let f = |k: f64| {
            let ku = ((k + s) - (w + sw)) / (2.0 * h);
            let kv = ((k + w) - (s + sw)) / (2.0 * h);
            let kavg = 0.25 * (sw + s + w + k);
            -(bp * ku + bm * kv + dc * kavg) / (4.0 * self.sigma)
        };
        let mut k = base;
        for _ in 0..2 {
            k = base + h * h * f(k);
        }
        k
    }
}

/// Kernel values on the characteristic lattice over `0 ≤ t ≤ x ≤ X`.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleGrid {
    pub h: f64,
    /// `X / h`.
    pub n: usize,
    lattice: Lattice,
}

impl TriangleGrid {
    /// Whether `(i, j)` lies in the triangle.
    pub fn contains(&self, i: usize, j: usize) -> bool {
        j <= i && i + j <= 2 * self.n
    }

    pub fn get(&self, i: usize, j: usize) -> Option<f64> {
        self.contains(i, j).then(|| self.lattice.get(i, j))
    }

    pub fn x_of(&self, i: usize, j: usize) -> f64 {
        (i + j) as f64 * self.h / 2.0
    }

    pub fn t_of(&self, i: usize, j: usize) -> f64 {
        (i as f64 - j as f64) * self.h / 2.0
    }

    /// All lattice points as `(i, j, x, t, K)`, row-major by `i` then `j`.
    pub fn points(&self) -> impl Iterator<Item = (usize, usize, f64, f64, f64)> + '_ {
        let m = 2 * self.n;
        (0..=m).flat_map(move |i| {
            (0..=i.min(m - i)).map(move |j| (i, j, self.x_of(i, j), self.t_of(i, j), self.lattice.get(i, j)))
        })
    }

    /// `K(x, x)` at `x = i h/2`, `i = 0..=2N`.
    pub fn diagonal(&self) -> (f64, Vec<f64>) {
        (self.h / 2.0, (0..=2 * self.n).map(|i| self.lattice.get(i, 0)).collect())
    }

    /// CSV with header `x,t,K`.
    pub fn write_csv(&self, out: &mut dyn Write) -> io::Result<()> {
        writeln!(out, "x,t,K")?;
        for (_, _, x, t, k) in self.points() {
            writeln!(out, "{x:.16e},{t:.16e},{k:.16e}")?;
        }
        Ok(())
    }

    pub fn interpolant(&self) -> GridInterpolant<'_> {
        GridInterpolant { grid: self }
    }
}

fn diagonal_on_lattice(problem: &GoursatProblem, n: usize) -> Result<Vec<f64>, GoursatError> {
    Diagonal::new(problem).on_lattice(problem.h / 2.0, 2 * n)
}

/// Marches the triangle by levels `i + j`, interior cells before the `t = 0` point.
pub fn solve(problem: &GoursatProblem) -> Result<TriangleGrid, GoursatError> {
    problem.validate()?;
    let n = problem.steps()?;
    let m = 2 * n;
    let tables = Tables::build(problem, n, false)?;
    let theta = match problem.boundary {
        Boundary::Neumann => 0.0,
        Boundary::Robin | Boundary::Reflect => {
            let b0 = tables
                .b0_at_zero
                .ok_or(GoursatError::SingularBoundary(problem.boundary.name()))?;
            b0 + problem.h0 * problem.sigma
        }
    };
    let mut lat = Lattice::new(m);
    for (i, v) in diagonal_on_lattice(problem, n)?.into_iter().enumerate() {
        lat.set(i, 0, v);
    }
    let mk = Marcher {
        sigma: problem.sigma,
        h: problem.h,
        tables: &tables,
    };
    let (sigma, h) = (problem.sigma, problem.h);
    for s in 1..=m {
        for j in 1..s.div_ceil(2) {
            let i = s - j;
            let v = mk.cell(i, j, lat.get(i - 1, j), lat.get(i, j - 1), lat.get(i - 1, j - 1));
            if !v.is_finite() {
                return Err(GoursatError::NonFinite { i, j });
            }
            lat.set(i, j, v);
        }
        if s % 2 == 0 {
            let i = s / 2;
            let k1 = lat.get(i + 1, i - 1);
            let v = match problem.boundary {
                Boundary::Reflect => {
                    let ghost = lat.get(i, i - 1);
                    mk.cell(i, i, ghost, ghost, lat.get(i - 1, i - 1))
                }
                _ if i == 1 => sigma * k1 / (sigma + h * theta),
                _ => sigma * (4.0 * k1 - lat.get(i + 2, i - 2)) / (3.0 * sigma + 2.0 * h * theta),
            };
            if !v.is_finite() {
                return Err(GoursatError::NonFinite { i, j: i });
            }
            lat.set(i, i, v);
        }
    }
    Ok(TriangleGrid {
        h: problem.h,
        n,
        lattice: lat,
    })
}

/// Solves on the full quadrant `|t| ≤ x ≤ X` with the diagonal data mirrored
/// onto `t = −x`, then restricts to `t ≥ 0`. Used to cross-check the
/// reflecting boundary against an even extension.
pub fn solve_even_extension(problem: &GoursatProblem) -> Result<TriangleGrid, GoursatError> {
    problem.validate()?;
    let n = problem.steps()?;
    let m = 2 * n;
    let tables = Tables::build(problem, n, true)?;
    let mut lat = Lattice::new(m);
    for (i, v) in diagonal_on_lattice(problem, n)?.into_iter().enumerate() {
        lat.set(i, 0, v);
        lat.set(0, i, v);
    }
    let mk = Marcher {
        sigma: problem.sigma,
        h: problem.h,
        tables: &tables,
    };
    for s in 2..=m {
        for j in 1..s {
            let i = s - j;
            let v = mk.cell(i, j, lat.get(i - 1, j), lat.get(i, j - 1), lat.get(i - 1, j - 1));
            if !v.is_finite() {
                return Err(GoursatError::NonFinite { i, j });
            }
            lat.set(i, j, v);
        }
    }
    Ok(TriangleGrid {
        h: problem.h,
        n,
        lattice: lat,
    })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CompareStats {
    pub max: f64,
    /// Root mean square over lattice points.
    pub l2: f64,
    pub count: usize,
    pub failures: usize,
}

/// Error of the grid against a closed-form reference in `x`, `t`.
pub fn compare(grid: &TriangleGrid, reference: &Expression, params: &Params) -> CompareStats {
    let (mut max, mut sq, mut count, mut failures) = (0.0f64, 0.0, 0usize, 0usize);
    for (_, _, x, t, k) in grid.points() {
        match reference.eval_at(x, t, params) {
            Ok(r) if r.is_finite() => {
                let e = (k - r).abs();
                max = max.max(e);
                sq += e * e;
                count += 1;
            }
            _ => failures += 1,
        }
    }
    CompareStats {
        max: if failures > 0 { f64::INFINITY } else { max },
        l2: if count > 0 { (sq / count as f64).sqrt() } else { 0.0 },
        count,
        failures,
    }
}

/// `q(x) = 2 dK(x,x)/dx` from uniform diagonal samples: centered differences
/// inside, second-order one-sided at the ends.
pub fn potential_from_diagonal(values: &[f64], dx: f64) -> Result<Vec<f64>, GoursatError> {
    let n = values.len();
    if n < 3 {
        return Err(GoursatError::TooFewSamples(n));
    }
    let mut q = Vec::with_capacity(n);
    q.push(2.0 * (-3.0 * values[0] + 4.0 * values[1] - values[2]) / (2.0 * dx));
    for k in 1..n - 1 {
        q.push(2.0 * (values[k + 1] - values[k - 1]) / (2.0 * dx));
    }
    q.push(2.0 * (3.0 * values[n - 1] - 4.0 * values[n - 2] + values[n - 3]) / (2.0 * dx));
    Ok(q)
}

/// Tensor-product cubic Lagrange interpolation in `(u, v)`.
///
/// The 4×4 stencil is shifted to stay inside the triangle, so points near the
/// edges are served by one-sided stencils.
pub struct GridInterpolant<'a> {
    grid: &'a TriangleGrid,
}

/// Cubic Lagrange basis on nodes `0,1,2,3` at `s`, with first and second derivatives.
fn lagrange4(s: f64) -> [[f64; 4]; 3] {
    let mut out = [[0.0; 4]; 3];
    for a in 0..4 {
        let others: Vec<f64> = (0..4).filter(|&b| b != a).map(|b| b as f64).collect();
        let denom: f64 = others.iter().map(|&b| a as f64 - b).product();
        let d: Vec<f64> = others.iter().map(|&b| s - b).collect();
        out[0][a] = d[0] * d[1] * d[2] / denom;
        out[1][a] = (d[1] * d[2] + d[0] * d[2] + d[0] * d[1]) / denom;
        out[2][a] = 2.0 * (d[0] + d[1] + d[2]) / denom;
    }
    out
}

impl KernelField for GridInterpolant<'_> {
    fn jet(&self, x: f64, t: f64) -> Result<Jet2, String> {
        let g = self.grid;
        let m = 2 * g.n as isize;
        let (u, v) = ((x + t) / g.h, (x - t) / g.h);
        if !(v >= 0.0 && u >= v && u + v <= m as f64 + 1e-9) {
            return Err(format!("({x}, {t}) lies outside the solved triangle"));
        }
        let mut j0 = (v.floor() as isize - 1).max(0);
        let mut i0 = (u.floor() as isize - 1).max(j0 + 3);
        while i0 + 3 + j0 + 3 > m {
            if i0 > j0 + 3 {
                i0 -= 1;
            } else if j0 > 0 {
                j0 -= 1;
            } else {
                return Err("lattice too coarse for a 4x4 stencil".into());
            }
        }
        let lu = lagrange4(u - i0 as f64);
        let lv = lagrange4(v - j0 as f64);
        let mut d = [[0.0; 3]; 3];
        for a in 0..4 {
            for b in 0..4 {
                let k = g.lattice.get((i0 + a as isize) as usize, (j0 + b as isize) as usize);
                for (p, row) in d.iter_mut().enumerate() {
                    for (q, cell) in row.iter_mut().enumerate() {
                        if p + q <= 2 {
                            *cell += lu[p][a] * lv[q][b] * k;
                        }
                    }
                }
            }
        }
        let h = g.h;
        let (k, ku, kv) = (d[0][0], d[1][0] / h, d[0][1] / h);
        let (kuu, kuv, kvv) = (d[2][0] / (h * h), d[1][1] / (h * h), d[0][2] / (h * h));
        Ok(Jet2 {
            value: k,
            dx: ku + kv,
            dt: ku - kv,
            dxx: kuu + 2.0 * kuv + kvv,
            dxt: kuu - kvv,
            dtt: kuu - 2.0 * kuv + kvv,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::conditions::hyperbolic_residual;
    use crate::operators::{DifferentialOperator, Form};

    fn e(s: &str) -> Expression {
        Expression::parse(s).unwrap()
    }

    #[test]
    fn zero_forcing_gives_unit_kernel() {
        let g = solve(&GoursatProblem::new(1.0, 1.0 / 16.0)).unwrap();
        assert!(g.points().all(|(.., k)| k == 1.0));
        assert_eq!(compare(&g, &e("1"), &Params::new()).max, 0.0);
    }

    #[test]
    fn diagonal_closed_forms() {
        let mut p = GoursatProblem::new(2.0, 0.1);
        let xs = [0.0, 0.3, 1.0, 1.9];
        assert!(diagonal_values(&p, &xs).unwrap().iter().all(|v| (*v - 1.0).abs() < 1e-15));

        p.b1 = e("2*x");
        let got = diagonal_values(&p, &xs).unwrap();
        for (x, g) in xs.iter().zip(got) {
            assert!((g - (-x * x / 2.0f64).exp()).abs() < 1e-14, "{x}: {g}");
        }

        let mut p = GoursatProblem::new(2.0, 0.1);
        p.b1 = e("1/x");
        p.rho = 1.0;
        p.seed = Seed::At(1.0);
        p.kappa = 0.7;
        let got = diagonal_values(&p, &[0.25, 1.0, 1.5]).unwrap();
        for (x, g) in [0.25f64, 1.0, 1.5].iter().zip(got) {
            assert!((g - 0.7 * x.powf(-0.5)).abs() < 1e-14, "{x}: {g}");
        }
        p.seed = Seed::Origin;
        assert!(matches!(diagonal_values(&p, &[1.0]), Err(GoursatError::DiagonalBlowUp { .. })));
    }

    #[test]
    fn telegraph_reproduces_bessel_kernel() {
        let p = GoursatProblem::telegraph(1.0, 2.0, 1.0 / 128.0, false);
        let g = solve(&p).unwrap();
        let s = compare(&g, &e("besselj(0, sqrt(abs(x^2-t^2)))"), &Params::new());
        assert!(s.max <= 1e-3, "{s:?}");
        let p = GoursatProblem::telegraph(1.0, 2.0, 1.0 / 128.0, true);
        let s = compare(&solve(&p).unwrap(), &e("besseli(0, sqrt(abs(x^2-t^2)))"), &Params::new());
        assert!(s.max <= 1e-3, "{s:?}");
    }

    fn telegraph_error(h: f64, boundary: Boundary) -> f64 {
        let mut p = GoursatProblem::telegraph(1.0, 2.0, h, false);
        p.boundary = boundary;
        compare(&solve(&p).unwrap(), &e("besselj(0, sqrt(abs(x^2-t^2)))"), &Params::new()).max
    }

    #[test]
    fn second_order_convergence() {
        for b in [Boundary::Neumann, Boundary::Robin, Boundary::Reflect] {
            let errs: Vec<f64> = [1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0].iter().map(|&h| telegraph_error(h, b)).collect();
            for w in errs.windows(2) {
                let order = (w[0] / w[1]).log2();
                assert!((1.8..=2.2).contains(&order), "{}: {errs:?}", b.name());
            }
        }
    }

    #[test]
    fn reflect_matches_even_extension() {
        let mut p = GoursatProblem::telegraph(1.3, 1.5, 1.0 / 40.0, false);
        p.c0 = e("0.2*t^2");
        p.c1 = e("1.69 + 0.1*x");
        p.boundary = Boundary::Reflect;
        let a = solve(&p).unwrap();
        let b = solve_even_extension(&p).unwrap();
        let worst = a
            .points()
            .zip(b.points())
            .fold(0.0f64, |m, (pa, pb)| m.max((pa.4 - pb.4).abs()));
        assert!(worst <= 1e-12, "{worst}");
    }

    #[test]
    fn robin_with_regular_drift() {
        // K = exp((t−x)/2) solves K_tt − K_xx = K_t + K_x with K(x,x) = 1 and
        // K_t − θK = 0 at t = 0, θ = b0(0) + h0 = 1/2.
        let mut p = GoursatProblem::new(1.0, 1.0 / 64.0);
        p.b0 = e("1");
        p.b1 = e("1");
        p.h0 = -0.5;
        p.boundary = Boundary::Robin;
        let g = solve(&p).unwrap();
        let s = compare(&g, &e("exp((t-x)/2)"), &Params::new());
        assert!(s.max < 1e-4, "{s:?}");
        let op_a = DifferentialOperator::new(Form::Divergence, Var::T, e("1"), e("1"), e("0"), -0.5);
        let op_b = DifferentialOperator::new(Form::NonDivergence, Var::X, e("1"), e("1"), e("0"), 0.0);
        let pts: Vec<(f64, f64)> = (2..8).flat_map(|i| (1..4).map(move |j| (0.1 * i as f64, 0.025 * (i * j) as f64))).collect();
        let r = hyperbolic_residual(&g.interpolant(), &op_a, &op_b, &Params::new(), &pts);
        assert!(r.relative.is_clean() && r.relative.max < 1e-3, "{:?}", r.relative.max);
    }

    #[test]
    fn singular_b0_restricts_boundary_variant() {
        let mut p = GoursatProblem::new(1.0, 1.0 / 16.0);
        p.b0 = e("-1/t");
        p.b1 = e("-1/x");
        p.boundary = Boundary::Robin;
        assert!(matches!(solve(&p), Err(GoursatError::SingularBoundary(_))));
        p.boundary = Boundary::Neumann;
        assert!(solve(&p).is_ok());
    }

    #[test]
    fn invalid_problems() {
        assert!(solve(&GoursatProblem::new(1.0, 0.3)).is_err());
        assert!(solve(&GoursatProblem::new(-1.0, 0.1)).is_err());
        let mut p = GoursatProblem::new(1.0, 0.1);
        p.sigma = 2.0;
        assert!(matches!(solve(&p), Err(GoursatError::Sigma(_))));
        let mut p = GoursatProblem::new(1.0, 0.1);
        p.b0 = e("x");
        assert!(matches!(solve(&p), Err(GoursatError::WrongVariable { .. })));
    }

    #[test]
    fn interpolated_grid_satisfies_hyperbolic_condition() {
        let one = e("1");
        let zero = e("0");
        let op_a = DifferentialOperator::new(Form::Divergence, Var::T, one.clone(), zero.clone(), zero.clone(), 0.0);
        let op_b = DifferentialOperator::new(Form::NonDivergence, Var::X, one, zero, e("1"), 0.0);
        let pts: Vec<(f64, f64)> = (0..6)
            .flat_map(|i| (0..5).map(move |j| (0.5 + 0.23 * i as f64, (0.2 + 0.13 * j as f64) * (0.5 + 0.23 * i as f64))))
            .collect();
        for h in [1.0 / 32.0, 1.0 / 64.0] {
            let g = solve(&GoursatProblem::telegraph(1.0, 2.0, h, false)).unwrap();
            let r = hyperbolic_residual(&g.interpolant(), &op_a, &op_b, &Params::new(), &pts);
            assert!(r.relative.is_clean());
            assert!(r.relative.max <= 10.0 * h * h, "h={h}: {}", r.relative.max);
        }
    }

    #[test]
    fn interpolant_reproduces_cubics_exactly() {
        // K = 1 + x t^2 is cubic in (u, v); build a grid holding it directly.
        let mut g = solve(&GoursatProblem::new(1.0, 1.0 / 16.0)).unwrap();
        let m = 2 * g.n;
        for i in 0..=m {
            for j in 0..=i.min(m - i) {
                let (x, t) = (g.x_of(i, j), g.t_of(i, j));
                g.lattice.set(i, j, 1.0 + x * t * t);
            }
        }
        let j = g.interpolant().jet(0.6, 0.2).unwrap();
        assert!((j.value - (1.0 + 0.6 * 0.04)).abs() < 1e-13);
        assert!((j.dx - 0.04).abs() < 1e-11);
        assert!((j.dt - 2.0 * 0.6 * 0.2).abs() < 1e-11);
        assert!((j.dtt - 1.2).abs() < 1e-9);
        assert!(j.dxx.abs() < 1e-9);
        assert!((j.dxt - 0.4).abs() < 1e-9);
    }

    #[test]
    fn potential_from_diagonal_samples() {
        let dx = 0.05;
        let vals: Vec<f64> = (0..40).map(|k| (k as f64 * dx).powi(2) / 4.0).collect();
        let q = potential_from_diagonal(&vals, dx).unwrap();
        for (k, v) in q.iter().enumerate() {
            assert!((v - k as f64 * dx).abs() < 1e-10, "{k}");
        }
        assert!(potential_from_diagonal(&[2.0; 5], dx).unwrap().iter().all(|v| *v == 0.0));
        assert!(matches!(potential_from_diagonal(&[1.0, 2.0], dx), Err(GoursatError::TooFewSamples(2))));
        let g = solve(&GoursatProblem::telegraph(1.0, 1.0, 1.0 / 32.0, false)).unwrap();
        let (dx, d) = g.diagonal();
        assert!(potential_from_diagonal(&d, dx).unwrap().iter().all(|v| *v == 0.0));
    }

    #[test]
    fn csv_layout() {
        let g = solve(&GoursatProblem::new(0.5, 0.25)).unwrap();
        let mut buf = Vec::new();
        g.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "x,t,K");
        assert_eq!(lines.len(), 1 + g.points().count());
        assert_eq!(lines[1], "0.0000000000000000e0,0.0000000000000000e0,1.0000000000000000e0");
    }
}
