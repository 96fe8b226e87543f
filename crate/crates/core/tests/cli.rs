use std::path::PathBuf;

use proptest::prelude::*;
use transmutation::cli::{run, EXIT_FAIL, EXIT_NUMERICAL, EXIT_PASS, EXIT_USAGE};
use transmutation::kernels::{list_cases, Coefficient};

fn call(args: &[String]) -> (i32, String, String) {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("transmutation".to_string()).chain(args.iter().cloned());
    let code = run(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn call_str(args: &[&str]) -> (i32, String, String) {
    call(&args.iter().map(|s| s.to_string()).collect::<Vec<_>>())
}

fn config(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("examples/configs")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("transmutation-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn every_catalog_case_verifies_and_applies() {
    for name in list_cases() {
        let (code, out, err) = call_str(&["verify", "--case", name, "--no-timestamp"]);
        assert_eq!(code, EXIT_PASS, "{name}: {err}");
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        assert_eq!(doc["case"], name);
        assert_eq!(doc["conditions"][0]["id"], "4a");
        assert_eq!(call_str(&["apply", "--case", name]).0, EXIT_PASS, "{name}");
    }
}

#[test]
fn reports_are_byte_identical_without_timestamp() {
    let args = ["verify", "--case", "lowndes", "--params", "nu=2", "--no-timestamp"];
    let (_, a, _) = call_str(&args);
    let (_, b, _) = call_str(&args);
    assert_eq!(a, b);
    let (_, stamped, _) = call_str(&args[..5]);
    let doc: serde_json::Value = serde_json::from_str(&stamped).unwrap();
    assert!(doc["timestamp"].is_u64());
}

#[test]
fn floats_are_written_with_seventeen_digits() {
    let (_, out, _) = call_str(&["apply", "--case", "sinh_cosh", "--x", "0.5", "--format", "json", "--no-timestamp"]);
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    let row = &doc["rows"][0];
    assert_eq!(row["x"].as_f64(), Some(0.5));
    assert!(out.contains("\"x\": 5.0000000000000000e-1"), "{out}");
    let csv = call_str(&["apply", "--case", "sinh_cosh", "--x", "0.5,1", "--format", "csv"]).1;
    assert_eq!(csv.lines().count(), 3);
    assert!(csv.starts_with("x,transformed,expected,rel_error\n"));
}

#[test]
fn out_file_receives_the_report() {
    let path = scratch("verify.json");
    let p = path.to_string_lossy().into_owned();
    let (code, out, _) = call_str(&["verify", "--case", "epd_bessel", "--out", &p, "--no-timestamp"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.is_empty());
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(doc["overall_pass"], true);
    let (code, _, err) = call_str(&["verify", "--case", "epd_bessel", "--out", "/nonexistent/dir/r.json"]);
    assert_eq!(code, EXIT_USAGE, "{err}");
}

#[test]
fn solve_writes_the_lattice() {
    let grid = scratch("grid.csv");
    let g = grid.to_string_lossy().into_owned();
    let (code, out, _) = call_str(&["solve", "--custom", &config("trivial.ini"), "--format", "csv"]);
    assert_eq!(code, EXIT_PASS);
    assert!(out.starts_with("x,t,K\n"));
    let (code, out, _) = call_str(&[
        "solve",
        "--custom",
        &config("telegraph.ini"),
        "--solver-h",
        "0.03125",
        "--format",
        "json",
        "--grid-out",
        &g,
        "--no-timestamp",
    ]);
    assert_eq!(code, EXIT_PASS, "{out}");
    let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
    assert!(doc["max_error"].as_f64().unwrap() < 1e-3);
    let csv = std::fs::read_to_string(&grid).unwrap();
    assert_eq!(csv.lines().count() - 1, doc["points"].as_u64().unwrap() as usize);
    let (code, _, err) = call_str(&["solve", "--custom", &config("telegraph.ini"), "--tol-solver", "1e-9"]);
    assert_eq!(code, EXIT_FAIL, "{err}");
    assert!(err.contains("FAIL"));
}

#[test]
fn custom_case_files() {
    let vekua = config("vekua_custom.ini");
    assert_eq!(call_str(&["verify", "--custom", &vekua, "--no-timestamp"]).0, EXIT_PASS);
    assert_eq!(call_str(&["apply", "--custom", &vekua, "--params", "omega=2"]).0, EXIT_PASS);
    let (code, _, err) = call_str(&["verify", "--custom", &config("broken.ini")]);
    assert_eq!(code, EXIT_USAGE);
    assert!(err.contains("missing section"), "{err}");
    assert_eq!(call_str(&["verify", "--custom", "/no/such/file.ini"]).0, EXIT_USAGE);
}

#[test]
fn non_finite_values_exit_three() {
    let text = std::fs::read_to_string(config("vekua_custom.ini"))
        .unwrap()
        .replace("besselj(0, mu*sqrt(x^2-t^2))", "log(-x-t)");
    let path = scratch("nan.ini");
    std::fs::write(&path, text).unwrap();
    let p = path.to_string_lossy().into_owned();
    assert_eq!(call_str(&["verify", "--custom", &p]).0, EXIT_NUMERICAL);
    assert_eq!(call_str(&["apply", "--custom", &p]).0, EXIT_NUMERICAL);
    let solver = scratch("nan_solver.ini");
    std::fs::write(&solver, "[solver]\nc1 = \"1\"\nX = 1\nh = 0.125\nreference = \"log(x-3)\"\n").unwrap();
    assert_eq!(call_str(&["solve", "--custom", &solver.to_string_lossy()]).0, EXIT_NUMERICAL);
}

#[derive(Debug, Clone)]
enum XSpec {
    Valid(Vec<f64>),
    NonPositive(Vec<f64>),
    TooLarge(Vec<f64>),
}

fn x_spec() -> impl Strategy<Value = XSpec> {
    prop_oneof![
        prop::collection::vec(0.2f64..2.9, 1..4).prop_map(XSpec::Valid),
        (prop::collection::vec(0.2f64..2.9, 0..3), -2.0f64..=0.0).prop_map(|(mut v, bad)| {
            v.push(bad);
            XSpec::NonPositive(v)
        }),
        (prop::collection::vec(0.2f64..2.9, 0..3), 3.01f64..10.0).prop_map(|(mut v, bad)| {
            v.insert(0, bad);
            XSpec::TooLarge(v)
        }),
    ]
}

fn join(xs: &[f64]) -> String {
    xs.iter().map(|x| format!("{x:?}")).collect::<Vec<_>>().join(",")
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    /// Invalid inputs always map to 2; valid apply runs on catalog defaults pass.
    #[test]
    fn apply_exit_codes(
        idx in 0usize..9,
        xs in x_spec(),
        tol in prop_oneof![Just(1e-8), -1.0f64..=0.0],
        unknown_param in proptest::bool::weighted(0.2),
    ) {
        let name = list_cases()[idx];
        let (x, expect_usage) = match &xs {
            XSpec::Valid(v) => (v.clone(), false),
            XSpec::NonPositive(v) | XSpec::TooLarge(v) => (v.clone(), true),
        };
        // Gegenbauer's image is only tabulated on (0, 1).
        let x: Vec<f64> = if name == "gegenbauer" { x.iter().map(|v| if *v > 0.0 && *v <= 3.0 { v / 3.2 } else { *v }).collect() } else { x };
        let mut args = vec!["apply".to_string(), "--case".into(), name.into(), "--x".into(), join(&x), "--tol-identity".into(), format!("{tol:?}")];
        if unknown_param {
            args.extend(["--params".to_string(), "zeta=1".into()]);
        }
        let (code, _, err) = call(&args);
        if expect_usage || tol <= 0.0 || unknown_param {
            prop_assert_eq!(code, EXIT_USAGE, "{}", err);
            prop_assert!(err.starts_with("error:"));
        } else {
            prop_assert_eq!(code, EXIT_PASS, "{}", err);
        }
    }

    /// Any single-coefficient shift of at least 0.1 turns a pass into exit 1.
    #[test]
    fn corruption_exits_one(idx in 0usize..9, which in 0usize..6, delta in prop_oneof![0.1f64..1.0, -1.0f64..-0.1]) {
        let name = list_cases()[idx];
        let coeff = Coefficient::ALL[which].name();
        let (code, out, _) = call(&[
            "verify".into(), "--case".into(), name.into(), "--no-timestamp".into(),
            "--corrupt".into(), format!("{coeff}:{delta:+}"),
        ]);
        prop_assert_eq!(code, EXIT_FAIL);
        let doc: serde_json::Value = serde_json::from_str(&out).unwrap();
        prop_assert_eq!(&doc["overall_pass"], false);
        prop_assert_eq!(&doc["conditions"][0]["pass"], false);
    }

    /// Unknown names and malformed assignments are usage errors, never panics.
    #[test]
    fn garbage_is_a_usage_error(case in "[a-z_]{1,12}", params in "[a-z=,0-9.]{0,12}") {
        let known = list_cases().contains(&case.as_str());
        let (code, _, _) = call(&["verify".into(), "--case".into(), case.clone(), "--params".into(), params.clone()]);
        prop_assert!([EXIT_PASS, EXIT_FAIL, EXIT_USAGE, EXIT_NUMERICAL].contains(&code));
        if !known {
            prop_assert_eq!(code, EXIT_USAGE);
        }
    }
}
