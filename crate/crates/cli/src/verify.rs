//! The identity corpus behind `torus-class verify`: every closed-form claim
//! the library makes, checked against brute-force cohomology over a family
//! of quadratic fields and the loaded dataset entries.

use num_bigint::BigInt;
use serde_json::{json, Value};

use torus_class::cohomology::tate_cohomology;
use torus_class::dataset::{datum_to_inputs, DatasetIssue, ExtensionDatum};
use torus_class::error::Error;
use torus_class::formulas::{
    dual_torus_class_number, herbrand_identity, norm_torus_class_number, ClassNumberReport,
    TorusInputs,
};
use torus_class::group::{abelianization, FiniteGroup};
use torus_class::module::{standard_module, StandardKind};
use torus_class::quadratic::fields_with_disc_up_to;

/// Finite S-prime candidates tried on top of the archimedean-only case.
const S_PRIMES: [i64; 8] = [2, 3, 5, 7, 11, 13, 17, 19];

pub struct IdentityRow {
    pub name: &'static str,
    pub pass: usize,
    pub total: usize,
    pub skipped: usize,
    pub failures: Vec<String>,
}

impl IdentityRow {
    fn new(name: &'static str) -> IdentityRow {
        IdentityRow {
            name,
            pass: 0,
            total: 0,
            skipped: 0,
            failures: Vec::new(),
        }
    }

    fn record(&mut self, case: &str, ok: bool) {
        self.total += 1;
        if ok {
            self.pass += 1;
        } else {
            self.failures.push(case.to_string());
        }
    }

    pub fn all_pass(&self) -> bool {
        self.failures.is_empty()
    }
}

pub struct VerifySummary {
    pub rows: Vec<IdentityRow>,
}

impl VerifySummary {
    pub fn all_pass(&self) -> bool {
        self.rows.iter().all(|r| r.all_pass())
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for row in &self.rows {
            out.push_str(&format!("{}: {}/{} pass", row.name, row.pass, row.total));
            if row.skipped > 0 {
                out.push_str(&format!(" ({} unsupported cases skipped)", row.skipped));
            }
            out.push('\n');
            for f in &row.failures {
                out.push_str(&format!("  FAIL {}\n", f));
            }
        }
        out.push_str(if self.all_pass() {
            "verify: all identities hold\n"
        } else {
            "verify: FAILURES above\n"
        });
        out
    }

    pub fn render_json(&self) -> Value {
        let rows: Vec<Value> = self
            .rows
            .iter()
            .map(|r| {
                json!({
                    "name": r.name,
                    "pass": r.pass,
                    "total": r.total,
                    "skipped": r.skipped,
                    "failures": r.failures,
                })
            })
            .collect();
        json!({ "rows": rows, "all_pass": self.all_pass() })
    }
}

/// Every report-level invariant in one place: the assembled value is a
/// positive integer and each recorded crosscheck agrees.
fn check_report(
    case: &str,
    report: &ClassNumberReport,
    integrality: &mut IdentityRow,
    local_terms: &mut IdentityRow,
) {
    integrality.record(case, report.is_integral());
    for c in &report.crosschecks {
        local_terms.record(&format!("{} [{}]", case, c.name), c.agrees());
    }
}

fn run_cyclic_case(
    case: &str,
    inputs: &TorusInputs,
    herbrand: &mut IdentityRow,
    consistency: &mut IdentityRow,
    integrality: &mut IdentityRow,
    local_terms: &mut IdentityRow,
) -> Result<(), Error> {
    let (lhs, rhs) = herbrand_identity(inputs)?;
    herbrand.record(case, lhs == rhs);
    let norm = norm_torus_class_number(inputs)?;
    let dual = dual_torus_class_number(inputs)?;
    consistency.record(case, norm.class_number == dual.class_number);
    check_report(&format!("{} norm", case), &norm, integrality, local_terms);
    check_report(&format!("{} dual", case), &dual, integrality, local_terms);
    Ok(())
}

fn global_h1_cases(row: &mut IdentityRow) {
    // the trivial group is excluded: both standard lattices degenerate to
    // the zero module there and the engine refuses them
    let mut groups: Vec<(String, FiniteGroup)> = (2..=8)
        .map(|n| (format!("cyclic:{}", n), FiniteGroup::cyclic(n)))
        .collect();
    groups.push(("klein4".into(), FiniteGroup::klein_four()));
    groups.push(("s3".into(), FiniteGroup::symmetric_3()));
    for (name, g) in groups {
        for (kind, kind_name) in [
            (StandardKind::NormTorus, "norm"),
            (StandardKind::DualTorus, "dual"),
        ] {
            let closed = match kind {
                StandardKind::NormTorus => abelianization(&g).structure.order(),
                _ => BigInt::from(g.order()),
            };
            let case = format!("{} {}", name, kind_name);
            match standard_module(&g, &kind).and_then(|m| tate_cohomology(&m, 1)) {
                Ok(h1) => row.record(&case, h1.order() == closed),
                Err(e) => row.record(&format!("{} ({})", case, e), false),
            }
        }
    }
}

pub fn run_verify(
    disc_bound: u64,
    entries: &[ExtensionDatum],
    issues: &[DatasetIssue],
) -> VerifySummary {
    let mut herbrand = IdentityRow::new("herbrand-identity");
    let mut consistency = IdentityRow::new("cyclic-consistency");
    let mut global_h1 = IdentityRow::new("global-H1");
    let mut local_terms = IdentityRow::new("local-term");
    let mut integrality = IdentityRow::new("integrality");
    let mut dataset_row = IdentityRow::new("dataset");

    global_h1_cases(&mut global_h1);

    for field in fields_with_disc_up_to(disc_bound) {
        let mut s_choices: Vec<Vec<i64>> = vec![Vec::new()];
        s_choices.extend(S_PRIMES.iter().map(|&p| vec![p]));
        for s in s_choices {
            let case = if s.is_empty() {
                format!("{} S=S_inf", field.label())
            } else {
                format!("{} S=S_inf+{:?}", field.label(), s)
            };
            let inputs = match field.torus_inputs(&s, disc_bound) {
                Ok(inputs) => inputs,
                Err(_) => {
                    // the oracle refuses inputs it cannot derive exactly
                    // (non-principal S-primes over real fields, dependent
                    // ideal classes); refusal is not an identity failure
                    herbrand.skipped += 1;
                    consistency.skipped += 1;
                    continue;
                }
            };
            if let Err(e) = run_cyclic_case(
                &case,
                &inputs,
                &mut herbrand,
                &mut consistency,
                &mut integrality,
                &mut local_terms,
            ) {
                herbrand.record(&format!("{} ({})", case, e), false);
            }
        }
    }

    for issue in issues {
        dataset_row.record(&format!("load {}", issue), false);
    }
    for entry in entries {
        let case = format!("dataset {}", entry.label);
        let inputs = match datum_to_inputs(entry, &[]) {
            Ok(inputs) => inputs,
            Err(e) => {
                dataset_row.record(&format!("{} ({})", case, e), false);
                continue;
            }
        };
        if entry.group.is_cyclic() {
            match run_cyclic_case(
                &case,
                &inputs,
                &mut herbrand,
                &mut consistency,
                &mut integrality,
                &mut local_terms,
            ) {
                Ok(()) => dataset_row.record(&case, true),
                Err(e) => dataset_row.record(&format!("{} ({})", case, e), false),
            }
            continue;
        }
        let norm = match (inputs.knot.is_some(), norm_torus_class_number(&inputs)) {
            (true, Ok(report)) => Some(report),
            (true, Err(e)) => {
                dataset_row.record(&format!("{} ({})", case, e), false);
                continue;
            }
            // without a knot number only the dual side is computable
            (false, _) => None,
        };
        match dual_torus_class_number(&inputs) {
            Ok(dual) => {
                let mut ok = dual.is_integral() && dual.all_checks_agree();
                check_report(
                    &format!("{} dual", case),
                    &dual,
                    &mut integrality,
                    &mut local_terms,
                );
                if let Some(norm) = norm {
                    ok = ok && norm.is_integral() && norm.all_checks_agree();
                    check_report(
                        &format!("{} norm", case),
                        &norm,
                        &mut integrality,
                        &mut local_terms,
                    );
                }
                dataset_row.record(&case, ok);
            }
            Err(e) => dataset_row.record(&format!("{} ({})", case, e), false),
        }
    }

    VerifySummary {
        rows: vec![
            herbrand,
            consistency,
            global_h1,
            local_terms,
            integrality,
            dataset_row,
        ],
    }
}
