//! Report documents and their serialization.
//!
//! Floats are written with 17 significant digits so that a report round-trips
//! every `f64` exactly; non-finite values become `null`.

use std::collections::BTreeMap;
use std::io;

use serde::Serialize;
use serde_json::ser::{Formatter, PrettyFormatter};

use crate::conditions::{ConditionRecord, VerificationReport};
use crate::quadrature::ApplyRow;

pub const TOOL_VERSION: &str = concat!(env!("CARGO_PKG_NAME"), " ", env!("CARGO_PKG_VERSION"));

struct Sig17<'a>(PrettyFormatter<'a>);

macro_rules! delegate {
    ($($name:ident($($arg:ident: $ty:ty),*);)*) => {
        $(
            fn $name<W: ?Sized + io::Write>(&mut self, w: &mut W $(, $arg: $ty)*) -> io::Result<()> {
                self.0.$name(w $(, $arg)*)
            }
        )*
    };
}

impl Formatter for Sig17<'_> {
    delegate! {
        begin_array();
        end_array();
        begin_array_value(first: bool);
        end_array_value();
        begin_object();
        end_object();
        begin_object_key(first: bool);
        begin_object_value();
        end_object_value();
    }

    fn write_f64<W: ?Sized + io::Write>(&mut self, w: &mut W, value: f64) -> io::Result<()> {
        write!(w, "{value:.16e}")
    }
}

/// Pretty JSON with 17-significant-digit floats and a trailing newline.
pub fn to_json<T: Serialize>(value: &T) -> String {
    let mut buf = Vec::new();
    let mut ser = serde_json::Serializer::with_formatter(&mut buf, Sig17(PrettyFormatter::new()));
    value.serialize(&mut ser).expect("report types serialize infallibly");
    buf.push(b'\n');
    String::from_utf8(buf).expect("serde_json emits UTF-8")
}

#[derive(Debug, Serialize)]
pub struct VerifyDoc<'a> {
    pub case: &'a str,
    pub params: &'a BTreeMap<String, f64>,
    pub conditions: &'a [ConditionRecord],
    pub overall_pass: bool,
    pub tool_version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

impl<'a> VerifyDoc<'a> {
    pub fn new(report: &'a VerificationReport, timestamp: Option<u64>) -> Self {
        Self {
            case: &report.case,
            params: &report.params,
            conditions: &report.conditions,
            overall_pass: report.overall_pass,
            tool_version: TOOL_VERSION,
            timestamp,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct RowDoc {
    pub x: f64,
    pub transformed: f64,
    pub expected: f64,
    pub rel_error: f64,
}

impl From<&ApplyRow> for RowDoc {
    fn from(r: &ApplyRow) -> Self {
        Self {
            x: r.x,
            transformed: r.transformed,
            expected: r.expected,
            rel_error: r.rel_error,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct ApplyDoc<'a> {
    pub case: &'a str,
    pub params: &'a BTreeMap<String, f64>,
    pub quad_order: usize,
    pub rows: Vec<RowDoc>,
    pub max_rel_error: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub tool_version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

#[derive(Debug, Serialize)]
pub struct SolveDoc<'a> {
    pub params: &'a BTreeMap<String, f64>,
    #[serde(rename = "X")]
    pub x_max: f64,
    pub h: f64,
    pub boundary: &'static str,
    pub points: usize,
    /// Absent when no reference kernel was given.
    pub max_error: Option<f64>,
    pub l2_error: Option<f64>,
    pub tolerance: f64,
    pub pass: bool,
    pub tool_version: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timestamp: Option<u64>,
}

pub fn verify_text(report: &VerificationReport) -> String {
    let mut s = format!("case {}\n", report.case);
    for c in &report.conditions {
        let verdict = match (c.pass, c.informational) {
            (true, true) => "pass (informational)",
            (true, false) => "pass",
            (false, _) => "FAIL",
        };
        s.push_str(&format!("{:<16} {:<22} max={:.3e} tol={:.1e}", c.id, verdict, c.max_residual, c.tolerance));
        if let Some(k) = c.decay_slope {
            s.push_str(&format!(" slope={k:.3}"));
        }
        if let Some(l) = c.limit_value {
            s.push_str(&format!(" limit={l:.6e}"));
        }
        s.push('\n');
        for f in c.failures.iter().take(3) {
            s.push_str(&format!("    {f}\n"));
        }
        if c.failures.len() > 3 {
            s.push_str(&format!("    ... {} more\n", c.failures.len() - 3));
        }
    }
    s.push_str(if report.overall_pass { "overall: pass\n" } else { "overall: FAIL\n" });
    s
}

fn opt(v: Option<f64>) -> String {
    v.map(|v| format!("{v:.16e}")).unwrap_or_default()
}

pub fn verify_csv(report: &VerificationReport) -> String {
    let mut s = String::from("id,max_residual,mean_residual,decay_slope,limit_value,tolerance,pass,informational\n");
    for c in &report.conditions {
        s.push_str(&format!(
            "{},{:.16e},{:.16e},{},{},{:.16e},{},{}\n",
            c.id,
            c.max_residual,
            c.mean_residual,
            opt(c.decay_slope),
            opt(c.limit_value),
            c.tolerance,
            c.pass,
            c.informational
        ));
    }
    s
}

/// Human-readable table, values rounded to 7 decimals; use json or csv for
/// full precision.
pub fn apply_text(rows: &[ApplyRow]) -> String {
    let mut s = format!("{:>12} {:>16} {:>16} {:>12}\n", "x", "T f0(x)", "f1(x)", "rel_error");
    for r in rows {
        s.push_str(&format!(
            "{:>12.6} {:>16.7} {:>16.7} {:>12.3e}\n",
            r.x, r.transformed, r.expected, r.rel_error
        ));
    }
    s
}

pub fn apply_csv(rows: &[ApplyRow]) -> String {
    let mut s = String::from("x,transformed,expected,rel_error\n");
    for r in rows {
        s.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e}\n",
            r.x, r.transformed, r.expected, r.rel_error
        ));
    }
    s
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_keep_seventeen_digits() {
        let v = vec![0.1f64, -1.0 / 3.0, 1e-300, f64::NAN];
        let s = to_json(&v);
        assert!(s.contains("1.0000000000000001e-1"), "{s}");
        assert!(s.contains("null"));
        let back: Vec<Option<f64>> = serde_json::from_str(&s).unwrap();
        assert_eq!(back[1], Some(-1.0 / 3.0));
        assert_eq!(back[2], Some(1e-300));
        assert_eq!(back[3], None);
    }
}
