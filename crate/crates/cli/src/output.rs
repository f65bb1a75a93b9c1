//! Report rendering.  The text table and the JSON document carry the same
//! term names and the same exact values; the JSON encodes every number as a
//! string and every rational as {"num", "den"} so nothing is ever squeezed
//! through a float.

use num_bigint::BigInt;
use num_rational::Ratio;
use serde_json::{json, Value};

use torus_class::dataset::SCHEMA_VERSION;
use torus_class::formulas::{ClassNumberReport, TorusKind};
use torus_class::places::Place;

fn ratio_value(r: &Ratio<BigInt>) -> Value {
    json!({ "num": r.numer().to_string(), "den": r.denom().to_string() })
}

fn int_value(n: &BigInt) -> Value {
    json!({ "num": n.to_string(), "den": "1" })
}

fn place_key(p: &Place) -> String {
    p.to_string()
}

pub fn report_json(report: &ClassNumberReport, s_places: &[Place]) -> Value {
    let mut terms = serde_json::Map::new();
    terms.insert("h_L_S".into(), int_value(&report.h_l_s));
    terms.insert("h_K_S".into(), int_value(&report.h_k_s));
    terms.insert("global_H1".into(), int_value(&report.global_h1));
    terms.insert("unit_cohomology".into(), int_value(&report.unit_cohomology));
    if let Some(knot) = &report.knot {
        terms.insert("knot".into(), int_value(knot));
    }
    for term in &report.local_degrees {
        terms.insert(
            format!("local_degree[{}]", place_key(&term.place)),
            int_value(&term.value),
        );
    }
    for term in &report.ramification {
        terms.insert(
            format!("ramification[{}]", place_key(&term.place)),
            int_value(&term.value),
        );
    }
    terms.insert("tamagawa".into(), ratio_value(&report.tamagawa));

    let checks: Vec<Value> = report
        .crosschecks
        .iter()
        .map(|c| {
            json!({
                "name": c.name,
                "closed": c.closed.to_string(),
                "brute": c.brute.to_string(),
                "agree": c.agrees(),
            })
        })
        .collect();

    json!({
        "schema_version": SCHEMA_VERSION,
        "kind": match report.kind { TorusKind::Norm => "norm", TorusKind::Dual => "dual" },
        "label": report.label,
        "group_order": report.group_order,
        "s": s_places.iter().map(place_key).collect::<Vec<_>>(),
        "terms": Value::Object(terms),
        "unit_cohomology_structure": report.unit_cohomology_structure.to_string(),
        "h": ratio_value(&report.class_number),
        "is_integral": report.is_integral(),
        "all_checks_agree": report.all_checks_agree(),
        "crosschecks": checks,
    })
}

pub fn report_text(report: &ClassNumberReport, s_places: &[Place]) -> String {
    let mut out = String::new();
    let s_list: Vec<String> = s_places.iter().map(place_key).collect();
    out.push_str(&format!(
        "{} of {}, S = {{{}}}\n",
        report.kind,
        report.label,
        s_list.join(", ")
    ));
    out.push_str(&format!("  group_order       {}\n", report.group_order));
    out.push_str(&format!("  h_L_S             {}\n", report.h_l_s));
    out.push_str(&format!("  h_K_S             {}\n", report.h_k_s));
    out.push_str(&format!("  global_H1         {}\n", report.global_h1));
    out.push_str(&format!(
        "  unit_cohomology   {}  ({})\n",
        report.unit_cohomology, report.unit_cohomology_structure
    ));
    if let Some(knot) = &report.knot {
        out.push_str(&format!("  knot              {}\n", knot));
    }
    for term in &report.local_degrees {
        out.push_str(&format!(
            "  local_degree[{}]  {}\n",
            place_key(&term.place),
            term.value
        ));
    }
    for term in &report.ramification {
        out.push_str(&format!(
            "  ramification[{}]  {}\n",
            place_key(&term.place),
            term.value
        ));
    }
    out.push_str(&format!("  tamagawa          {}\n", report.tamagawa));
    for c in &report.crosschecks {
        out.push_str(&format!(
            "  check {:<22} closed {} / brute {}  {}\n",
            c.name,
            c.closed,
            c.brute,
            if c.agrees() { "agree" } else { "DISAGREE" }
        ));
    }
    if !report.is_integral() {
        out.push_str("  WARNING: the assembled value is not an integer; the input data is inconsistent\n");
    }
    let h_name = match report.kind {
        TorusKind::Norm => "h_{T,S}",
        TorusKind::Dual => "h_{T',S}",
    };
    out.push_str(&format!("{} = {}\n", h_name, report.class_number));
    out
}
