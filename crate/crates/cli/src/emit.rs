//! Canonical emission of problem files.
//!
//! Emitted files are valid inputs for the other subcommands and are
//! byte-deterministic: tensors are keyed in a sorted map, components are
//! listed in ascending index order, and every expression is printed in
//! canonical form.

use serde_json::{json, Value};

use jacobi_core::cartan::Multivector;
use jacobi_core::expr::Chart;

fn tensor_value(t: &Multivector) -> Value {
    let comps: Vec<Value> = t
        .components()
        .map(|(idxs, c)| {
            let names: Vec<String> = idxs
                .iter()
                .map(|&i| t.chart().symbol_name(i).to_owned())
                .collect();
            json!([names, c.to_string()])
        })
        .collect();
    json!({
        "type": "multivector",
        "degree": t.degree(),
        "components": comps,
    })
}

fn chart_value(chart: &Chart) -> Value {
    let vars: Vec<String> = chart.vars().map(str::to_owned).collect();
    json!({ "name": chart.name(), "vars": vars })
}

fn finish(v: Value) -> String {
    let mut s = serde_json::to_string_pretty(&v).expect("serializable");
    s.push('\n');
    s
}

/// A Jacobi-pair file (consumable by `check-jacobi`, `homogenize`,
/// `dirac`).
pub fn pair_file(chart: &Chart, lambda: &Multivector, e: &Multivector) -> String {
    finish(json!({
        "chart": chart_value(chart),
        "tensors": {
            "Lambda": tensor_value(lambda),
            "E": tensor_value(e),
        },
        "jacobi": { "lambda": "Lambda", "e": "E" },
    }))
}

/// A homogeneous-Poisson file, pre-wired for `dehomogenize` of `uvar`.
pub fn poisson_file(
    chart: &Chart,
    pi: &Multivector,
    z: &Multivector,
    dehomogenize_var: Option<&str>,
) -> String {
    let mut v = json!({
        "chart": chart_value(chart),
        "tensors": {
            "Pi": tensor_value(pi),
            "Z": tensor_value(z),
        },
        "poisson": { "pi": "Pi", "z": "Z" },
    });
    if let Some(var) = dehomogenize_var {
        v["dehomogenize"] = json!({ "var": var });
    }
    finish(v)
}

/// An assembled split-model file: the pair plus its base transversal.
pub fn split_model_file(
    chart: &Chart,
    lambda: &Multivector,
    e: &Multivector,
    fiber_vars: &[String],
) -> String {
    finish(json!({
        "chart": chart_value(chart),
        "tensors": {
            "Lambda": tensor_value(lambda),
            "E": tensor_value(e),
        },
        "jacobi": { "lambda": "Lambda", "e": "E" },
        "transversal": { "normal_vars": fiber_vars },
    }))
}
