//! Report construction. Machine output is a single-line JSON object with
//! sorted keys, so identical invocations are byte-identical; the human
//! format is an indented rendering of the same tree.

use num_bigint::BigInt;
use num_rational::BigRational;
use serde_json::{json, Map, Value};

use pseudolattice::exceptional::{is_exceptional_sequence, ExceptionalBasis};
use pseudolattice::lattice::{Detection, Minimality, SurfaceCase, SurfaceStructure};
use pseudolattice::mmp::{Classification, CriterionCase, CriterionVerdict, MinimalKind, MinimalModelRun};
use pseudolattice::toric::{AxiomReport, Fan, PolygonReport, ToricSystem};

use crate::io::{json_int, json_int_rows, json_int_vec};

pub fn json_rat(x: &BigRational) -> Value {
    if x.is_integer() {
        Value::String(x.numer().to_string())
    } else {
        Value::String(format!("{}/{}", x.numer(), x.denom()))
    }
}

pub fn json_rat_vec(v: &[BigRational]) -> Value {
    Value::Array(v.iter().map(json_rat).collect())
}

fn json_gram(m: &pseudolattice::IntMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|i| json_int_vec(&m.row(i)))
            .collect(),
    )
}

pub fn report(command: &str, status: &str, result: Value) -> Value {
    json!({
        "command": command,
        "status": status,
        "result": result,
    })
}

pub fn detection_value(det: &Detection, source: &str) -> Value {
    json!({
        "case": match det.case {
            SurfaceCase::Symmetric => "symmetric",
            SurfaceCase::SkewRankTwo => "skew-rank-two",
        },
        "source": source,
        "kernel_rank": det.kernel_rank,
        "candidates": json_int_rows(&det.candidates),
    })
}

pub fn surface_value(s: &SurfaceStructure, basis: Option<&ExceptionalBasis>, bound: u64) -> Value {
    let minimal = match s.minimality(bound) {
        Minimality::Yes => json!({"status": "yes", "witness": Value::Null, "bound": bound}),
        Minimality::No(w) => json!({"status": "no", "witness": json_int_vec(&w), "bound": bound}),
        Minimality::UnknownAtBound(b) => {
            json!({"status": "unknown-at-bound", "witness": Value::Null, "bound": b})
        }
    };
    let defect = match s.defect() {
        Ok(d) => json!({
            "k_squared": json_int(&d.k_squared),
            "ns_rank": d.ns_rank,
            "defect": json_int(&d.defect),
        }),
        Err(_) => Value::Null,
    };
    let basis_value = basis.map(|b| {
        let check = is_exceptional_sequence(s.lattice(), b.vectors());
        let ranks = b.ranks(s);
        let norm: BigInt = ranks.iter().map(|r| r * r).sum();
        json!({
            "exceptional": check.ok(),
            "is_basis": check.is_basis,
            "ranks": json_int_vec(&ranks),
            "norm": json_int(&norm),
        })
    });
    let sig = s.ns_signature();
    json!({
        "ns_rank": s.ns_rank(),
        "ns_gram": json_gram(s.ns_gram()),
        "ns_signature": [sig.positive, sig.negative, sig.zero],
        "canonical_class": json_rat_vec(s.canonical_class()),
        "canonical_integral": s.canonical_integral(),
        "k_squared": json_rat(&s.k_squared()),
        "unimodular": s.is_unimodular(),
        "geometric": s.is_geometric(),
        "minimal": minimal,
        "defect": defect,
        "serre_integral": s.lattice().serre_operator().is_some(),
        "basis": basis_value,
    })
}

pub fn toric_value(
    s: &SurfaceStructure,
    ts: &ToricSystem,
    axioms: &AxiomReport,
    fan: &Fan,
    polygon: &PolygonReport,
    svg_path: Option<&str>,
) -> Value {
    let _ = s;
    let mut a_map = Map::new();
    for ((i, j), v) in &ts.a_table {
        a_map.insert(format!("{i},{j}"), json_int(v));
    }
    let mut n_map = Map::new();
    for ((i, j), v) in &ts.n_table {
        n_map.insert(format!("{i},{j}"), json_int(v));
    }
    json!({
        "ranks": json_int_vec(&ts.ranks),
        "lambdas": ts.lambdas.iter().map(|l| json_rat_vec(l)).collect::<Vec<_>>(),
        "a": Value::Object(a_map),
        "n": Value::Object(n_map),
        "axioms": {
            "adjacent_products": axioms.adjacent_products,
            "distant_orthogonality": axioms.distant_orthogonality,
            "integrality": axioms.integrality,
            "n_integrality": axioms.n_integrality,
            "sum_is_minus_k": axioms.sum_is_minus_k,
            "ranks_coprime": axioms.ranks_coprime,
            "all_pass": axioms.all_pass(),
            "markov_gamma": axioms.markov_gamma.as_ref().map(json_int),
            "failures": axioms.failures,
        },
        "fan": {
            "rays": fan.rays.iter().map(|(x, y)| json!([json_int(x), json_int(y)])).collect::<Vec<_>>(),
            "h": json_int(&fan.h),
            "orientation": fan.orientation,
        },
        "polygon": {
            "hull": polygon.hull.iter().map(|(x, y)| json!([json_int(x), json_int(y)])).collect::<Vec<_>>(),
            "extremal": polygon.extremal,
            "origin_strictly_interior": polygon.origin_strictly_interior,
            "negative_a_containment": polygon
                .negative_a_containment
                .iter()
                .map(|(i, ok)| json!({"index": i, "contained": ok}))
                .collect::<Vec<_>>(),
        },
        "svg": svg_path,
    })
}

pub fn mmp_value(run: &MinimalModelRun, classification: Option<&Classification>, bound: u64) -> Value {
    let steps: Vec<Value> = run
        .steps
        .iter()
        .map(|st| {
            json!({
                "contracted": json_int_vec(&st.contracted),
                "k_dot_e": json_int(&st.k_dot_e),
                "defect_before": st.defect_before.as_ref().map(json_int),
                "defect_after": st.defect_after.as_ref().map(json_int),
            })
        })
        .collect();
    let fs = &run.final_structure;
    let class_value = match classification {
        None => json!({"kind": "unavailable"}),
        Some(c) => match &c.kind {
            MinimalKind::P2 => json!({
                "kind": "P2",
                "k_squared": json_rat(&c.k_squared),
                "expected_k_squared": c.expected_k_squared.as_ref().map(json_int),
                "word": c.word.to_string(),
            }),
            MinimalKind::P1xP1 { c_found } => json!({
                "kind": "P1xP1",
                "c_found": json_int(c_found),
                "k_squared": json_rat(&c.k_squared),
                "expected_k_squared": c.expected_k_squared.as_ref().map(json_int),
                "word": c.word.to_string(),
            }),
            MinimalKind::Unknown { diagnostics } => json!({
                "kind": "unknown",
                "diagnostics": diagnostics,
            }),
        },
    };
    json!({
        "bound": bound,
        "preparation": run.preparation.as_ref().map(|w| w.to_string()),
        "steps": steps,
        "final": {
            "gram": json_gram(fs.lattice().gram()),
            "point": json_int_vec(fs.point()),
            "ns_rank": fs.ns_rank(),
            "k_squared": json_rat(&fs.k_squared()),
            "defect": fs.defect().ok().map(|d| json_int(&d.defect)),
        },
        "classification": class_value,
    })
}

pub fn criterion_value(verdict: &CriterionVerdict) -> Value {
    let (case, case_name) = match verdict.case {
        CriterionCase::P2Case => (1, "P2"),
        CriterionCase::P1xP1Case => (2, "P1xP1"),
        CriterionCase::BlowupCase => (3, "blowup"),
        CriterionCase::NoCase => (0, "none"),
    };
    json!({
        "case": case,
        "case_name": case_name,
        "witnesses": {
            "n": verdict.n,
            "ns_even": verdict.ns_even,
            "k_primitive": verdict.k_primitive,
            "k_divisible_by_three": verdict.k_divisible_by_three,
            "k_divisible_by_two": verdict.k_divisible_by_two,
            "unit_vector": json_int_vec(&verdict.unit_vector),
        },
    })
}

/// Indented human rendering of the report tree.
pub fn render_human(value: &Value) -> String {
    let mut out = String::new();
    render_into(value, 0, &mut out);
    out
}

fn render_into(value: &Value, indent: usize, out: &mut String) {
    let pad = "  ".repeat(indent);
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Object(_) | Value::Array(_) if !is_scalar_array(v) => {
                        out.push_str(&format!("{pad}{k}:\n"));
                        render_into(v, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}{k}: {}\n", scalar_string(v))),
                }
            }
        }
        Value::Array(items) => {
            for item in items {
                match item {
                    Value::Object(_) | Value::Array(_) if !is_scalar_array(item) => {
                        out.push_str(&format!("{pad}-\n"));
                        render_into(item, indent + 1, out);
                    }
                    _ => out.push_str(&format!("{pad}- {}\n", scalar_string(item))),
                }
            }
        }
        _ => out.push_str(&format!("{pad}{}\n", scalar_string(value))),
    }
}

fn is_scalar_array(v: &Value) -> bool {
    match v {
        Value::Array(items) => items
            .iter()
            .all(|i| !matches!(i, Value::Object(_) | Value::Array(_))),
        _ => false,
    }
}

fn scalar_string(v: &Value) -> String {
    match v {
        Value::Null => "null".into(),
        Value::String(s) => s.clone(),
        Value::Array(items) => format!(
            "[{}]",
            items.iter().map(scalar_string).collect::<Vec<_>>().join(", ")
        ),
        other => other.to_string(),
    }
}
