//! Catalog of closed-form transmutation cases.
//!
//! Each case bundles a kernel `K(x,t)`, an input `f0` with its image `f1`,
//! the operator pair `(A, B)` whose intertwining the kernel realizes, and the
//! singular exponents needed to integrate `K f0` accurately.

use std::fmt::Write as _;

use thiserror::Error;

use crate::expr::{Expression, Params, ParseError, Var};
use crate::operators::{DifferentialOperator, Form};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CatalogError {
    #[error("unknown case `{0}`")]
    UnknownCase(String),
    #[error("case `{case}` has no parameter `{param}`")]
    UnknownParam { case: String, param: String },
    #[error("case `{case}`: {constraint} violated")]
    Inadmissible { case: String, constraint: String },
    #[error("invalid expression for {field}: {source}")]
    Expression {
        field: String,
        #[source]
        source: ParseError,
    },
}

/// Factorization `K f0 = norm * (x-t)^alpha_w * t^beta_w * smooth(x,t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct Factorization {
    pub alpha_w: f64,
    pub beta_w: f64,
    pub smooth: Expression,
}

/// Operators with shifted free terms and the eigenvalues they produce:
/// `A' f0 = lambda_a f0` and `B' f1 = lambda_b f1`.
#[derive(Debug, Clone, PartialEq)]
pub struct SpectralVariant {
    pub c0: Expression,
    pub c1: Expression,
    pub lambda_a: f64,
    pub lambda_b: f64,
}

/// One of the six operator coefficients.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Coefficient {
    A0,
    B0,
    C0,
    A1,
    B1,
    C1,
}

impl Coefficient {
    pub const ALL: [Coefficient; 6] = [
        Coefficient::A0,
        Coefficient::B0,
        Coefficient::C0,
        Coefficient::A1,
        Coefficient::B1,
        Coefficient::C1,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Coefficient::A0 => "a0",
            Coefficient::B0 => "b0",
            Coefficient::C0 => "c0",
            Coefficient::A1 => "a1",
            Coefficient::B1 => "b1",
            Coefficient::C1 => "c1",
        }
    }

    pub fn from_name(s: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|c| c.name() == s)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct TransmutationCase {
    pub name: String,
    pub params: Params,
    /// Full kernel, `norm_const * kernel_body`.
    pub kernel: Expression,
    pub kernel_body: Expression,
    pub norm_const: Expression,
    pub f0: Expression,
    pub f1: Expression,
    /// t-side operator, divergence form.
    pub op_a: DifferentialOperator,
    /// x-side operator, non-divergence form.
    pub op_b: DifferentialOperator,
    /// Eigenvalue of the stored (homogeneous) pair.
    pub lambda: Option<f64>,
    /// Weight of the identity part; always zero for first-kind operators.
    pub rho: f64,
    /// `K ~ C (x-t)^p_diag` as `t -> x`.
    pub p_diag: f64,
    /// `K f0 ~ C t^p_zero` as `t -> 0`.
    pub p_zero: f64,
    pub factorization: Option<Factorization>,
    pub spectral: Option<SpectralVariant>,
    /// Working interval for `x` (identity checks, eigen grids).
    pub x_range: (f64, f64),
    pub constraints: Vec<String>,
    pub provenance: String,
    pub notes: Vec<String>,
}

impl TransmutationCase {
    pub fn coefficient(&self, which: Coefficient) -> &Expression {
        match which {
            Coefficient::A0 => &self.op_a.a,
            Coefficient::B0 => &self.op_a.b,
            Coefficient::C0 => &self.op_a.c,
            Coefficient::A1 => &self.op_b.a,
            Coefficient::B1 => &self.op_b.b,
            Coefficient::C1 => &self.op_b.c,
        }
    }

    fn coefficient_mut(&mut self, which: Coefficient) -> &mut Expression {
        match which {
            Coefficient::A0 => &mut self.op_a.a,
            Coefficient::B0 => &mut self.op_a.b,
            Coefficient::C0 => &mut self.op_a.c,
            Coefficient::A1 => &mut self.op_b.a,
            Coefficient::B1 => &mut self.op_b.b,
            Coefficient::C1 => &mut self.op_b.c,
        }
    }

    /// Copy with one coefficient shifted by `delta`; a fault-injection hook.
    pub fn corrupted(&self, which: Coefficient, delta: f64) -> Self {
        let mut out = self.clone();
        let e = out.coefficient(which).plus_constant(delta);
        *out.coefficient_mut(which) = e;
        out.notes.push(format!("{} perturbed by {delta:+}", which.name()));
        out
    }

    /// Copy with the kernel multiplied by `kappa`.
    pub fn with_kernel_scaled(&self, kappa: f64) -> Self {
        let mut out = self.clone();
        out.norm_const = self.norm_const.scaled(kappa);
        out.kernel = out.norm_const.times(&out.kernel_body);
        out
    }

    /// Operators of the spectral variant, if the case has one.
    pub fn spectral_operators(&self) -> Option<(DifferentialOperator, DifferentialOperator, f64, f64)> {
        self.spectral.as_ref().map(|s| {
            (
                self.op_a.with_c(s.c0.clone()),
                self.op_b.with_c(s.c1.clone()),
                s.lambda_a,
                s.lambda_b,
            )
        })
    }
}

type Check = fn(&Params) -> bool;

struct Entry {
    name: &'static str,
    defaults: &'static [(&'static str, f64)],
    constraints: &'static [(&'static str, Check)],
    norm: &'static str,
    body: &'static str,
    f0: &'static str,
    f1: &'static str,
    a0: &'static str,
    b0: &'static str,
    c0: &'static str,
    a1: &'static str,
    b1: &'static str,
    c1: &'static str,
    p_diag: &'static str,
    p_zero: &'static str,
    beta_w: &'static str,
    smooth: &'static str,
    spectral: Option<[&'static str; 4]>,
    x_range: (f64, f64),
    provenance: &'static str,
    notes: &'static [&'static str],
}

fn p(params: &Params, k: &str) -> f64 {
    params.get(k).unwrap_or(f64::NAN)
}

fn is_odd_positive(v: f64) -> bool {
    v > 0.0 && v == v.round() && (v as i64) % 2 == 1
}

static CATALOG: [Entry; 9] = [
    Entry {
        name: "gegenbauer",
        defaults: &[("beta", 2.0), ("lambda", 3.0), ("p", 3.0)],
        constraints: &[
            ("p = 2n+1 (odd positive integer)", |q| is_odd_positive(p(q, "p"))),
            ("Re β > 0", |q| p(q, "beta") > 0.0),
            ("Re(λ−β) > −n", |q| p(q, "lambda") - p(q, "beta") > -(p(q, "p") - 1.0) / 2.0),
        ],
        norm: "1",
        body: "(x^2-t^2)^(beta-1)",
        f0: "t^(2*(lambda-beta)+p-1)*gegenbauer(p, lambda, t)",
        f1: "0.5*beta(lambda-beta, beta)*x^(2*(lambda-1)+p)*gegenbauer(p, lambda-beta, x)",
        a0: "t^2*(t^2-1)",
        b0: "-t*((2*p-4*beta+2*lambda+1)*t^2+2*(2*(beta-lambda)-p))",
        c0: "4*(beta-1)*(beta-lambda-p-1)*t^2+(4*beta*p+2*beta-p*(1+p)-4*(beta-lambda)^2-2*lambda-4*lambda*p)",
        a1: "x^2*(x^2-1)",
        b1: "x*((5-2*(p+beta+lambda))*x^2+2*(p+2*(lambda-1)))",
        c1: "4*(beta-1)*(p+lambda-1)*x^2-(p+2*lambda-2)*(p+2*lambda-1)",
        p_diag: "beta-1",
        p_zero: "2*(lambda-beta)+p",
        beta_w: "2*(lambda-beta)+p-1",
        smooth: "(x+t)^(beta-1)*gegenbauer(p, lambda, t)",
        spectral: None,
        x_range: (0.05, 0.95),
        provenance: "power kernel connecting two Gegenbauer polynomials; both sides are null eigenfunctions of variable-coefficient operators",
        notes: &[
            "the parity index of the printed constraint on lambda-beta is taken as 0 (weakest form)",
            "leading coefficient x^2(x^2-1) vanishes at x = 1; the working interval is (0, 1)",
        ],
    },
    Entry {
        name: "poisson_bessel",
        defaults: &[("nu", 1.0)],
        constraints: &[("ν ≥ 1/2", |q| p(q, "nu") >= 0.5)],
        norm: "1/(2^(nu-1)*sqrt(pi)*gamma(nu+0.5))",
        body: "(x^2-t^2)^(nu-0.5)/x^(nu-0.5)",
        f0: "cos(t)",
        f1: "sqrt(x)*besselj(nu, x)",
        a0: "1",
        b0: "0",
        c0: "1",
        a1: "1",
        b1: "0",
        c1: "1-(nu^2-0.25)/x^2",
        p_diag: "nu-0.5",
        p_zero: "0",
        beta_w: "0",
        smooth: "(x+t)^(nu-0.5)/x^(nu-0.5)*cos(t)",
        spectral: Some(["0", "-(nu^2-0.25)/x^2", "-1", "-1"]),
        x_range: (0.2, 3.0),
        provenance: "Poisson integral representation of the Bessel function (Erdélyi–Kober kernel)",
        notes: &[
            "normalization includes the sqrt(pi) of the integral identity",
            "dropping the unit free terms gives eigenvalue -1 under f'' + ... sign conventions",
        ],
    },
    Entry {
        name: "sonin",
        defaults: &[("mu", 0.5), ("nu", 0.5)],
        constraints: &[("Re(μ) > −1", |q| p(q, "mu") > -1.0), ("Re(ν) > −1", |q| p(q, "nu") > -1.0)],
        norm: "1/(2^nu*gamma(nu+1))",
        body: "(x^2-t^2)^nu/x^nu",
        f0: "t^(mu+1)*besselj(mu, t)",
        f1: "x^(mu+1)*besselj(mu+nu+1, x)",
        a0: "1",
        b0: "-(2*mu+1)/t",
        c0: "1",
        a1: "1",
        b1: "-(2*mu+1)/x",
        c1: "1-nu*(nu+2*mu+2)/x^2",
        p_diag: "nu",
        p_zero: "2*mu+1",
        beta_w: "2*mu+1",
        smooth: "(x+t)^nu/x^nu*besseljr(mu, t)",
        spectral: Some(["0", "-nu*(nu+2*mu+2)/x^2", "-1", "-1"]),
        x_range: (0.2, 3.0),
        provenance: "Sonin's first integral connecting Bessel functions of orders mu and mu+nu+1",
        notes: &[
            "b0 is stored as -(2mu+1)/t (a function of t); c1 carries 1/x^2",
            "dropping the unit free terms gives eigenvalue -1",
        ],
    },
    Entry {
        name: "sine_to_bessel",
        defaults: &[("beta", 1.5), ("omega", 1.0)],
        constraints: &[("Re β > 0", |q| p(q, "beta") > 0.0), ("ω > 0", |q| p(q, "omega") > 0.0)],
        norm: "1",
        body: "t*(x^2-t^2)^(beta-1)",
        f0: "sin(omega*t)",
        f1: "sqrt(pi)/2*x*(2*x/omega)^(beta-0.5)*gamma(beta)*besselj(beta+0.5, omega*x)",
        a0: "1",
        b0: "0",
        c0: "omega^2",
        a1: "1",
        b1: "-2*beta/x",
        c1: "omega^2",
        p_diag: "beta-1",
        p_zero: "2",
        beta_w: "1",
        smooth: "(x+t)^(beta-1)*sin(omega*t)",
        spectral: Some(["0", "0", "-omega^2", "-omega^2"]),
        x_range: (0.2, 3.0),
        provenance: "smooth Erdélyi–Kober kernel taking a sine to a Bessel function of half-integer shifted order",
        notes: &["the omega power of the image is checked at omega = 1 and omega = 2"],
    },
    Entry {
        name: "sinh_cosh",
        defaults: &[("mu", 1.0), ("beta", 0.5)],
        constraints: &[("μ > 0", |q| p(q, "mu") > 0.0)],
        norm: "1",
        body: "sinh(mu*sqrt(x^2-t^2))",
        f0: "cosh(beta*t)",
        f1: "pi/2*mu*x/sqrt(beta^2+mu^2)*besseli(1, sqrt(beta^2+mu^2)*x)",
        a0: "1",
        b0: "0",
        c0: "-beta^2",
        a1: "1",
        b1: "-1/x",
        c1: "-(beta^2+mu^2)",
        p_diag: "0.5",
        p_zero: "0",
        beta_w: "0",
        smooth: "mu*sqrt(x+t)*sqrt(pi/2)*besselir(0.5, mu*sqrt(x^2-t^2))*cosh(beta*t)",
        spectral: Some(["0", "-mu^2", "beta^2", "beta^2"]),
        x_range: (0.2, 3.0),
        provenance: "hyperbolic-sine kernel taking cosh to the modified Bessel function I_1",
        notes: &["K(x,x) = 0, so the diagonal condition holds trivially"],
    },
    Entry {
        name: "lowndes",
        defaults: &[("mu", 1.0), ("nu", 1.0), ("beta", 1.0), ("omega", 1.0)],
        constraints: &[
            ("μ ≥ 0", |q| p(q, "mu") >= 0.0),
            ("ν > 0", |q| p(q, "nu") > 0.0),
            ("β > 0", |q| p(q, "beta") > 0.0),
            ("ω > 0", |q| p(q, "omega") > 0.0),
        ],
        norm: "1",
        body: "(x^2-t^2)^(mu/2)*besselj(mu, beta*sqrt(x^2-t^2))",
        f0: "t^(nu+1)*besselj(nu, omega*t)",
        f1: "beta^mu*omega^nu*x^(mu+nu+1)*(beta^2+omega^2)^(-(mu+nu+1)/2)*besselj(mu+nu+1, sqrt(beta^2+omega^2)*x)",
        a0: "1",
        b0: "-(1+2*nu)/t",
        c0: "omega^2",
        a1: "1",
        b1: "-(1+2*mu+2*nu)/x",
        c1: "beta^2+omega^2",
        p_diag: "mu",
        p_zero: "2*nu+1",
        beta_w: "2*nu+1",
        smooth: "beta^mu*(x+t)^mu*besseljr(mu, beta*sqrt(x^2-t^2))*omega^nu*besseljr(nu, omega*t)",
        spectral: Some(["0", "beta^2", "-omega^2", "-omega^2"]),
        x_range: (0.2, 3.0),
        provenance: "Lowndes operator with Bessel kernel acting on t^(nu+1) J_nu(omega t)",
        notes: &[
            "b0 is stored as -(1+2nu)/t (a function of t)",
            "the general t^gamma f(omega t) operator is fixed to this instance",
        ],
    },
    Entry {
        name: "epd_bessel",
        defaults: &[("nu", 1.0), ("mu", 1.0), ("omega", 1.0)],
        constraints: &[
            ("ν ≥ 0", |q| p(q, "nu") >= 0.0),
            ("μ > 0", |q| p(q, "mu") > 0.0),
            ("ω ≥ 0", |q| p(q, "omega") >= 0.0),
        ],
        norm: "1",
        body: "(x^2-t^2)^(nu/2)*besselj(nu, mu*sqrt(x^2-t^2))",
        f0: "cos(omega*t)",
        f1: "sqrt(pi/2)*x^(nu+0.5)*mu^nu*(omega^2+mu^2)^(-(2*nu+1)/4)*besselj(nu+0.5, x*sqrt(omega^2+mu^2))",
        a0: "1",
        b0: "0",
        c0: "omega^2",
        a1: "1",
        b1: "-2*nu/x",
        c1: "omega^2+mu^2",
        p_diag: "nu",
        p_zero: "0",
        beta_w: "0",
        smooth: "mu^nu*(x+t)^nu*besseljr(nu, mu*sqrt(x^2-t^2))*cos(omega*t)",
        spectral: Some(["0", "0", "-omega^2", "-(omega^2+mu^2)"]),
        x_range: (0.2, 3.0),
        provenance: "Euler–Poisson–Darboux kernel G(x^2-t^2) linking D^2 and the singular Bessel operator",
        notes: &["spectral variant: A = D^2 and B = D^2 - (2nu/x) D with different eigenvalues"],
    },
    Entry {
        name: "vekua_telegraph",
        defaults: &[("mu", 1.0), ("omega", 1.0)],
        constraints: &[("μ > 0", |q| p(q, "mu") > 0.0), ("ω ≥ 0", |q| p(q, "omega") >= 0.0)],
        norm: "1",
        body: "besselj(0, mu*sqrt(x^2-t^2))",
        f0: "cos(omega*t)",
        f1: "sin(x*sqrt(omega^2+mu^2))/sqrt(omega^2+mu^2)",
        a0: "1",
        b0: "0",
        c0: "omega^2",
        a1: "1",
        b1: "0",
        c1: "omega^2+mu^2",
        p_diag: "0",
        p_zero: "0",
        beta_w: "0",
        smooth: "besselj(0, mu*sqrt(x^2-t^2))*cos(omega*t)",
        spectral: Some(["0", "0", "-omega^2", "-(omega^2+mu^2)"]),
        x_range: (0.2, 3.0),
        provenance: "Vekua cosine transform; the kernel solves the telegraph equation",
        notes: &["K(0,0) = 1 with f0(0) = 1: the vertex limit is finite and nonzero (reported as informational)"],
    },
    Entry {
        name: "cosh_1f2",
        defaults: &[("alpha", 1.0), ("beta", 2.0), ("mu", 1.0)],
        constraints: &[("α = 1", |q| p(q, "alpha") == 1.0), ("Re β > 0", |q| p(q, "beta") > 0.0)],
        norm: "1",
        body: "t^(alpha-1)*(x^2-t^2)^(beta-1)",
        f0: "cosh(mu*t)",
        f1: "0.5*x^(alpha+2*beta-2)*beta(alpha/2, beta)*hyp1f2(alpha/2, 0.5, beta+alpha/2, (mu*x/2)^2)",
        a0: "1",
        b0: "0",
        c0: "-mu^2",
        a1: "1",
        b1: "-2*(alpha+beta-2)/x",
        c1: "-mu^2",
        p_diag: "beta-1",
        p_zero: "alpha-1",
        beta_w: "alpha-1",
        smooth: "(x+t)^(beta-1)*cosh(mu*t)",
        spectral: Some(["0", "0", "mu^2", "mu^2"]),
        x_range: (0.2, 3.0),
        provenance: "power kernel taking cosh to a 1F2 hypergeometric series",
        notes: &[
            "operator pair chosen so the kernel solves the hyperbolic equation exactly; the printed third-order relation is not used",
            "image carries the factor x^(alpha+2beta-2)/2",
            "alpha is fixed to 1",
        ],
    },
];

/// Names of all catalog cases, in a fixed order.
pub fn list_cases() -> Vec<&'static str> {
    CATALOG.iter().map(|e| e.name).collect()
}

/// Default parameters of a case.
pub fn default_params(name: &str) -> Result<Params, CatalogError> {
    let entry = find(name)?;
    Ok(entry.defaults.iter().map(|(k, v)| (k.to_string(), *v)).collect())
}

fn find(name: &str) -> Result<&'static Entry, CatalogError> {
    CATALOG
        .iter()
        .find(|e| e.name == name)
        .ok_or_else(|| CatalogError::UnknownCase(name.to_string()))
}

fn parse(field: &str, text: &str) -> Result<Expression, CatalogError> {
    Expression::parse(text).map_err(|source| CatalogError::Expression {
        field: field.to_string(),
        source,
    })
}

fn scalar(field: &str, text: &str, params: &Params) -> Result<f64, CatalogError> {
    parse(field, text)?
        .eval(&crate::expr::Env::new(params))
        .map_err(|e| CatalogError::Inadmissible {
            case: field.to_string(),
            constraint: e.to_string(),
        })
}

/// Builds a case with `overrides` applied on top of its default parameters.
pub fn get_case(name: &str, overrides: &Params) -> Result<TransmutationCase, CatalogError> {
    let entry = find(name)?;
    let mut params = default_params(name)?;
    for (k, v) in overrides.iter() {
        if !params.contains(k) {
            return Err(CatalogError::UnknownParam {
                case: name.to_string(),
                param: k.to_string(),
            });
        }
        params.insert(k, v);
    }
    for (text, ok) in entry.constraints {
        if !ok(&params) {
            return Err(CatalogError::Inadmissible {
                case: name.to_string(),
                constraint: text.to_string(),
            });
        }
    }
    let norm_const = parse("norm_const", entry.norm)?;
    let kernel_body = parse("kernel", entry.body)?;
    let op_a = DifferentialOperator::new(
        Form::Divergence,
        Var::T,
        parse("a0", entry.a0)?,
        parse("b0", entry.b0)?,
        parse("c0", entry.c0)?,
        0.0,
    );
    let op_b = DifferentialOperator::new(
        Form::NonDivergence,
        Var::X,
        parse("a1", entry.a1)?,
        parse("b1", entry.b1)?,
        parse("c1", entry.c1)?,
        0.0,
    );
    let p_diag = scalar("p_diag", entry.p_diag, &params)?;
    let spectral = match entry.spectral {
        Some([c0, c1, la, lb]) => Some(SpectralVariant {
            c0: parse("spectral c0", c0)?,
            c1: parse("spectral c1", c1)?,
            lambda_a: scalar("lambda_a", la, &params)?,
            lambda_b: scalar("lambda_b", lb, &params)?,
        }),
        None => None,
    };
    Ok(TransmutationCase {
        name: entry.name.to_string(),
        kernel: norm_const.times(&kernel_body),
        kernel_body,
        norm_const,
        f0: parse("f0", entry.f0)?,
        f1: parse("f1", entry.f1)?,
        op_a,
        op_b,
        lambda: Some(0.0),
        rho: 0.0,
        p_diag,
        p_zero: scalar("p_zero", entry.p_zero, &params)?,
        factorization: Some(Factorization {
            alpha_w: p_diag,
            beta_w: scalar("beta_w", entry.beta_w, &params)?,
            smooth: parse("smooth factor", entry.smooth)?,
        }),
        spectral,
        x_range: entry.x_range,
        constraints: entry.constraints.iter().map(|(t, _)| t.to_string()).collect(),
        provenance: entry.provenance.to_string(),
        notes: entry.notes.iter().map(|s| s.to_string()).collect(),
        params,
    })
}

/// Human-readable record of a case.
pub fn describe(case: &TransmutationCase) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "case: {}", case.name);
    let _ = writeln!(s, "identity: {}", case.provenance);
    let params: Vec<String> = case.params.iter().map(|(k, v)| format!("{k}={v}")).collect();
    let _ = writeln!(s, "parameters: {}", params.join(", "));
    if !case.constraints.is_empty() {
        let _ = writeln!(s, "constraints: {}", case.constraints.join("; "));
    }
    let _ = writeln!(s, "kernel: K(x,t) = ({}) * {}", case.norm_const, case.kernel_body);
    let _ = writeln!(s, "input: f0(t) = {}", case.f0);
    let _ = writeln!(s, "image: f1(x) = {}", case.f1);
    let _ = writeln!(s, "A = {}", case.op_a.describe());
    let _ = writeln!(s, "B = {}", case.op_b.describe());
    if let Some(l) = case.lambda {
        let _ = writeln!(s, "eigenvalue: {l}");
    }
    if let Some(sp) = &case.spectral {
        let _ = writeln!(
            s,
            "spectral variant: c0 -> {}, c1 -> {}, A f0 = {} f0, B f1 = {} f1",
            sp.c0, sp.c1, sp.lambda_a, sp.lambda_b
        );
    }
    let _ = writeln!(s, "exponents: p_diag = {}, p_zero = {}", case.p_diag, case.p_zero);
    if let Some(fz) = &case.factorization {
        let _ = writeln!(
            s,
            "quadrature weight: (x-t)^{} t^{}, smooth factor {}",
            fz.alpha_w, fz.beta_w, fz.smooth
        );
    }
    let _ = writeln!(s, "x range: ({}, {})", case.x_range.0, case.x_range.1);
    for n in &case.notes {
        let _ = writeln!(s, "note: {n}");
    }
    s
}
