use super::*;

fn p() -> Params {
    Params::new()
}

fn at(s: &str, x: f64, t: f64, params: &Params) -> f64 {
    Expression::parse(s).unwrap().eval_at(x, t, params).unwrap()
}

#[test]
fn grammar_precedence() {
    assert_eq!(at("x^2*(x^2-1)", 2.0, 0.0, &p()), 12.0);
    assert_eq!(at("-x^2", 3.0, 0.0, &p()), -9.0);
    assert_eq!(at("2^3^2", 0.0, 0.0, &p()), 512.0);
    assert_eq!(at("2^-1", 0.0, 0.0, &p()), 0.5);
    assert_eq!(at("8/2/2", 0.0, 0.0, &p()), 2.0);
    assert_eq!(at("1-2-3", 0.0, 0.0, &p()), -4.0);
    assert!((at("(x^2-t^2)^0.5", 1.0, 0.5, &p()) - 0.75f64.sqrt()).abs() < 1e-15);
}

#[test]
fn registry_values() {
    assert_eq!(at("gamma(x)", 5.0, 0.0, &p()), 24.0);
    assert_eq!(at("besselj(0, 0)", 0.0, 0.0, &p()), 1.0);
    let mu = Params::new().with("mu", 1.0);
    assert_eq!(at("sinh(mu*sqrt(x^2-t^2))", 1.0, 1.0, &mu), 0.0);
    // J0(sqrt(0.75)), frozen from mpmath
    let v = at("besselj(0, sqrt(x^2-t^2))", 1.0, 0.5, &p());
    assert!((v - 0.821_108_086_788_707_1).abs() < 1e-12, "{v}");
}

#[test]
fn function_names_double_as_parameters() {
    let params = Params::new().with("beta", 2.0).with("lambda", 3.0);
    assert_eq!(at("beta(lambda-beta, beta)", 0.0, 0.0, &params), 0.5);
}

#[test]
fn parse_errors_carry_offsets() {
    let e = Expression::parse("x + * 2").unwrap_err();
    assert_eq!(e.offset(), 4);
    let e = Expression::parse("foo(x)").unwrap_err();
    assert!(matches!(e, ParseError::UnknownFunction { offset: 0, .. }));
    let e = Expression::parse("besselj(x)").unwrap_err();
    assert!(matches!(e, ParseError::Arity { expected: 2, found: 1, .. }));
    assert_eq!(Expression::parse("   ").unwrap_err(), ParseError::Empty);
    let e = Expression::parse("(x+1").unwrap_err();
    assert_eq!(e.offset(), 4);
    let e = Expression::parse("x $ 1").unwrap_err();
    assert_eq!(e.offset(), 2);
}

#[test]
fn unbound_and_domain_errors() {
    let e = Expression::parse("mu*x").unwrap();
    assert_eq!(e.eval_at(1.0, 0.0, &p()), Err(EvalError::Unbound("mu".into())));
    let e = Expression::parse("x").unwrap();
    assert_eq!(e.eval(&Env::new(&p())), Err(EvalError::Unbound("x".into())));
    for (s, x) in [("log(x)", -1.0), ("sqrt(x)", -1.0), ("x^0.5", -2.0), ("1/x", 0.0), ("x^-1", 0.0)] {
        match Expression::parse(s).unwrap().eval_at(x, 0.0, &p()) {
            Err(EvalError::Domain { .. }) => {}
            other => panic!("{s} at {x}: {other:?}"),
        }
    }
    // Integer exponents accept negative bases.
    assert_eq!(at("x^3", -2.0, 0.0, &p()), -8.0);
    let err = Expression::parse("2*abs(x)").unwrap().eval_jet(0.0, 0.0, &p()).unwrap_err();
    match err {
        EvalError::Domain { node, .. } => assert_eq!(node, "abs(x)"),
        other => panic!("{other:?}"),
    }
}

#[test]
fn evaluate_reads_variables_from_bindings() {
    let b = Params::new().with("x", 2.0).with("t", 1.0).with("k", 3.0);
    assert_eq!(Expression::parse("k*x+t").unwrap().evaluate(&b), Ok(7.0));
}

#[test]
fn jet_examples() {
    let j = Expression::parse("x^2*(x^2-1)").unwrap().eval_jet(2.0, 0.0, &p()).unwrap();
    assert_eq!(j.dx, 28.0);
    assert_eq!(j.dxx, 46.0);
    let j = Expression::parse("(x^2-t^2)^0.5").unwrap().eval_jet(1.0, 0.5, &p()).unwrap();
    assert!((j.dt + 0.5 / 0.75f64.sqrt()).abs() < 1e-15);
    let j = Expression::parse("besselj(0, sqrt(x^2-t^2))").unwrap().eval_jet(1.0, 0.5, &p()).unwrap();
    assert!((j.value - 0.821_108_086_788_707_1).abs() < 1e-12);
}

#[test]
fn printer_output() {
    let cases = [
        ("x^2*(x^2-1)", "x^2.0*(x^2.0-1.0)"),
        ("-x^2", "-x^2.0"),
        ("(-x)^2", "(-x)^2.0"),
        ("a-(b-c)", "a-(b-c)"),
        ("a/(b*c)", "a/(b*c)"),
        ("(2^3)^2", "(2.0^3.0)^2.0"),
        ("2^-x", "2.0^-x"),
        ("besselj(nu, x)", "besselj(nu, x)"),
    ];
    for (src, printed) in cases {
        assert_eq!(Expression::parse(src).unwrap().to_string(), printed, "{src}");
    }
}

#[test]
fn params_parse() {
    let ps = Params::parse_assignments("nu=1, mu=-2.5e-1").unwrap();
    assert_eq!(ps.get("nu"), Some(1.0));
    assert_eq!(ps.get("mu"), Some(-0.25));
    assert!(Params::parse_assignments("nu").is_err());
    assert!(Params::parse_assignments("nu=abc").is_err());
    assert!(Params::parse_assignments("").unwrap().is_empty());
}

mod properties {
    use super::*;
    use proptest::prelude::*;

    fn leaf() -> impl Strategy<Value = Node> {
        prop_oneof![
            (-5.0f64..5.0).prop_map(Node::Const),
            (1u8..20).prop_map(|k| Node::Const(k as f64)),
            Just(Node::Var(Var::X)),
            Just(Node::Var(Var::T)),
            Just(Node::Param("k".into())),
        ]
    }

    fn tree() -> impl Strategy<Value = Node> {
        leaf().prop_recursive(6, 64, 4, |inner| {
            prop_oneof![
                inner.clone().prop_map(|n| Node::Neg(Box::new(n))),
                (inner.clone(), inner.clone(), 0usize..5).prop_map(|(l, r, k)| {
                    let op = [BinOp::Add, BinOp::Sub, BinOp::Mul, BinOp::Div, BinOp::Pow][k];
                    Node::Binary(op, Box::new(l), Box::new(r))
                }),
                (inner.clone(), 0usize..6).prop_map(|(a, k)| {
                    let f = [Func::Sin, Func::Cos, Func::Exp, Func::Sqrt, Func::Abs, Func::Cosh][k];
                    Node::Call(f, vec![a])
                }),
                (inner, 0u8..3).prop_map(|(a, k)| {
                    Node::Call(Func::BesselJ, vec![Node::Const(k as f64), a])
                }),
            ]
        })
    }

    fn same(a: &Result<f64, EvalError>, b: &Result<f64, EvalError>) -> bool {
        match (a, b) {
            (Ok(x), Ok(y)) => x.to_bits() == y.to_bits(),
            (Err(_), Err(_)) => true,
            _ => false,
        }
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(1000))]

        #[test]
        fn print_parse_round_trip(node in tree(), pts in proptest::collection::vec((-3.0f64..3.0, -3.0f64..3.0), 10)) {
            let e = Expression::from_node(node);
            let printed = e.to_string();
            let back = Expression::parse(&printed).unwrap();
            prop_assert_eq!(back.to_string(), printed.clone());
            let params = Params::new().with("k", 0.75);
            for (x, t) in pts {
                let a = e.eval_at(x, t, &params);
                let b = back.eval_at(x, t, &params);
                prop_assert!(same(&a, &b), "{} at ({}, {}): {:?} vs {:?}", printed, x, t, a, b);
            }
        }

        #[test]
        fn jet_value_matches_plain_eval(node in tree(), x in 0.1f64..2.0, t in 0.1f64..2.0) {
            let e = Expression::from_node(node);
            let params = Params::new().with("k", 0.75);
            if let (Ok(v), Ok(j)) = (e.eval_at(x, t, &params), e.eval_jet(x, t, &params)) {
                prop_assert_eq!(v.to_bits(), j.value.to_bits());
            }
        }

        #[test]
        fn leibniz_rule_holds(x in 0.2f64..2.0, t in 0.2f64..2.0) {
            let f = Expression::parse("sin(x*t)+x^3").unwrap();
            let g = Expression::parse("exp(t-x)*cosh(t)").unwrap();
            let params = Params::new();
            let jf = f.eval_jet(x, t, &params).unwrap();
            let jg = g.eval_jet(x, t, &params).unwrap();
            let jp = f.times(&g).eval_jet(x, t, &params).unwrap();
            let expect = jf * jg;
            for (a, b) in [(jp.value, expect.value), (jp.dx, expect.dx), (jp.dt, expect.dt),
                           (jp.dxx, expect.dxx), (jp.dxt, expect.dxt), (jp.dtt, expect.dtt)] {
                prop_assert!((a - b).abs() <= 1e-14 * (1.0 + b.abs()));
            }
        }
    }
}

/// Central differences of the value channel, step 1e-4.
fn fd_check(src: &str, x: f64, t: f64, params: &Params) {
    let e = Expression::parse(src).unwrap();
    let h = 1e-4;
    let v = |x: f64, t: f64| e.eval_at(x, t, params).unwrap();
    let j = e.eval_jet(x, t, params).unwrap();
    let fd = [
        (j.dx, (v(x + h, t) - v(x - h, t)) / (2.0 * h)),
        (j.dt, (v(x, t + h) - v(x, t - h)) / (2.0 * h)),
        (j.dxx, (v(x + h, t) - 2.0 * v(x, t) + v(x - h, t)) / (h * h)),
        (j.dtt, (v(x, t + h) - 2.0 * v(x, t) + v(x, t - h)) / (h * h)),
        (
            j.dxt,
            (v(x + h, t + h) - v(x + h, t - h) - v(x - h, t + h) + v(x - h, t - h)) / (4.0 * h * h),
        ),
    ];
    for (k, (exact, approx)) in fd.iter().enumerate() {
        assert!(
            (exact - approx).abs() <= 1e-6 * (1.0 + exact.abs()),
            "{src} channel {k}: jet {exact} vs fd {approx}"
        );
    }
}

#[test]
fn registry_derivatives_match_finite_differences() {
    let params = Params::new().with("nu", 1.5).with("a", 0.5).with("b1", 1.5).with("b2", 2.0);
    let forms = [
        "sin(x*t)",
        "cos(x-t)",
        "sinh(x*t)",
        "cosh(x+t)",
        "exp(x*t)",
        "log(x+t)",
        "sqrt(x^2+t)",
        "abs(x-t)",
        "gamma(x+t)",
        "besselj(nu, x*t)",
        "besseli(nu, x+t)",
        "besselj(0, x*t)",
        "besseljr(nu, x*t)",
        "besselir(0.5, x-t)",
        "gegenbauer(3, 2.5, x*t)",
        "hyp1f2(a, b1, b2, x*t)",
        "x^t",
        "(x^2-t^2)^(nu-1)",
    ];
    for s in forms {
        fd_check(s, 1.3, 0.7, &params);
    }
}
