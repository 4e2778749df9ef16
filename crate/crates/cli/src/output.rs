//! Deterministic JSON and CSV rendering.
//!
//! Object keys keep insertion order and floats use the shortest
//! representation that parses back to the same value, so identical results
//! always render to identical bytes.

use pmodulus_core::analysis::{SweepRow, Verdict};
use pmodulus_core::graph::{Exponent, Graph};
use pmodulus_core::solver::ModulusResult;
use serde_json::{json, Map, Value};

use crate::error::CliError;

/// A float as JSON; non-finite values become strings (`"inf"`, `"-inf"`, `"nan"`).
pub fn number(x: f64) -> Value {
    if x.is_finite() {
        json!(x)
    } else {
        Value::String(float_text(x))
    }
}

/// `p` as JSON: a number, or `"inf"`.
pub fn exponent(p: Exponent) -> Value {
    match p {
        Exponent::Finite(p) => json!(p),
        Exponent::Infinity => Value::String("inf".into()),
    }
}

/// Shortest round-trip text; scientific notation outside `[1e-5, 1e16)`.
pub fn float_text(x: f64) -> String {
    if x.is_nan() {
        "nan".into()
    } else if x.is_infinite() {
        if x > 0.0 { "inf" } else { "-inf" }.into()
    } else if x != 0.0 && (x.abs() < 1e-5 || x.abs() >= 1e16) {
        format!("{x:e}")
    } else {
        format!("{x}")
    }
}

/// `p` as CSV text.
pub fn exponent_text(p: Exponent) -> String {
    match p {
        Exponent::Finite(p) => float_text(p),
        Exponent::Infinity => "inf".into(),
    }
}

/// Pretty JSON followed by a newline.
pub fn render_json(v: &Value) -> Result<String, CliError> {
    let mut s = serde_json::to_string_pretty(v).map_err(|e| CliError::Output(e.to_string()))?;
    s.push('\n');
    Ok(s)
}

/// A CSV table with a header row.
pub fn render_csv(header: &[&str], rows: &[Vec<String>]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let fail = |e: csv::Error| CliError::Output(e.to_string());
    w.write_record(header).map_err(fail)?;
    for r in rows {
        w.write_record(r).map_err(fail)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Output(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| CliError::Output(e.to_string()))
}

/// Full JSON record of one solve.
pub fn modulus_record(graph: &Graph, family: Value, result: &ModulusResult, certificate: Option<f64>) -> Value {
    let mut obj = Map::new();
    obj.insert("p".into(), exponent(result.p));
    obj.insert("family".into(), family);
    obj.insert("value".into(), number(result.value));
    obj.insert("primal_upper".into(), number(result.primal_upper));
    obj.insert("dual_lower".into(), number(result.dual_lower));
    obj.insert("gap".into(), number(result.gap));
    obj.insert("iterations".into(), json!(result.iterations));
    if let Some(c) = certificate {
        obj.insert("certificate".into(), number(c));
    }
    let rho: Map<String, Value> = (0..graph.edge_count())
        .map(|e| (graph.edge_key(e), number(result.rho_star.get(e))))
        .collect();
    obj.insert("rho_star".into(), Value::Object(rho));
    let lambda: Map<String, Value> = result
        .active_walks
        .iter()
        .zip(&result.lambda)
        .map(|(w, l)| (w.describe(graph), number(*l)))
        .collect();
    obj.insert("lambda".into(), Value::Object(lambda));
    Value::Object(obj)
}

/// Column names of the sweep table.
pub const SWEEP_COLUMNS: [&str; 7] = ["p", "value", "normalized", "dual_lower", "primal_upper", "gap", "iterations"];

/// One sweep row as CSV fields; a failed row keeps only `p`.
pub fn sweep_fields(row: &SweepRow) -> Vec<String> {
    let mut fields = vec![exponent_text(row.p)];
    match &row.outcome {
        Ok(v) => fields.extend([
            float_text(v.value),
            float_text(v.normalized),
            float_text(v.dual_lower),
            float_text(v.primal_upper),
            float_text(v.gap),
            v.iterations.to_string(),
        ]),
        Err(_) => fields.extend(std::iter::repeat_n(String::new(), SWEEP_COLUMNS.len() - 1)),
    }
    fields
}

/// One sweep row as JSON, verdicts included.
pub fn sweep_record(row: &SweepRow) -> Value {
    let mut obj = Map::new();
    obj.insert("p".into(), exponent(row.p));
    match &row.outcome {
        Ok(v) => {
            obj.insert("value".into(), number(v.value));
            obj.insert("normalized".into(), number(v.normalized));
            obj.insert("dual_lower".into(), number(v.dual_lower));
            obj.insert("primal_upper".into(), number(v.primal_upper));
            obj.insert("gap".into(), number(v.gap));
            obj.insert("iterations".into(), json!(v.iterations));
        }
        Err(e) => {
            obj.insert("error".into(), Value::String(e.to_string()));
        }
    }
    obj.insert("monotone".into(), verdict(row.monotone));
    obj.insert("normalized_monotone".into(), verdict(row.normalized_monotone));
    Value::Object(obj)
}

fn verdict(v: Verdict) -> Value {
    Value::String(
        match v {
            Verdict::Pass => "pass",
            Verdict::Fail => "fail",
            Verdict::NotApplicable => "n/a",
        }
        .into(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn floats_round_trip_through_text() {
        for x in [0.0, 1.0, 0.1, 1.5, 1e-300, 123456.789, 2f64.powi(60), -3e-7] {
            assert_eq!(float_text(x).parse::<f64>().unwrap(), x);
        }
        assert_eq!(float_text(1.5), "1.5");
        assert_eq!(float_text(1e-9), "1e-9");
        assert_eq!(float_text(f64::INFINITY), "inf");
    }

    #[test]
    fn csv_quotes_edge_keys() {
        let s = render_csv(&["edge", "x"], &[vec!["s,t".into(), "1".into()]]).unwrap();
        assert_eq!(s, "edge,x\n\"s,t\",1\n");
    }
}
