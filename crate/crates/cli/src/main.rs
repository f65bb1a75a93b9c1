//! `torus-class`: exact class numbers of norm-one tori and their duals over
//! Q, with every closed-form term cross-checked by brute-force cohomology.
//!
//! Exit codes: 0 success, 1 bad input (unusable flags, unknown labels,
//! malformed datasets), 2 the arithmetic itself flagged trouble (a
//! crosscheck disagreed or an assembled class number came out non-integral).

mod output;
mod verify;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use torus_class::dataset::{
    builtin_dataset, datum_to_inputs, merge_entries, parse_dataset, ExtensionDatum,
};
use torus_class::cohomology::tate_cohomology;
use torus_class::error::Error;
use torus_class::formulas::{
    dual_torus_class_number, norm_torus_class_number, ClassNumberReport, TorusInputs, TorusKind,
};
use torus_class::group::FiniteGroup;
use torus_class::module::{standard_module, StandardKind};
use torus_class::quadratic::QuadraticField;

/// Refuse quadratic fields with discriminant beyond this unless overridden.
const DEFAULT_DISC_BOUND: u64 = 1_000_000;
/// Default reach of the `verify` corpus, chosen so a full run stays fast.
const DEFAULT_VERIFY_BOUND: u64 = 500;

#[derive(Parser)]
#[command(
    name = "torus-class",
    version,
    about = "Class numbers of norm-one tori and dual tori of Galois extensions of Q"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Class number of the norm-one torus of an extension
    Norm(ReportArgs),
    /// Class number of the dual of the norm-one torus
    Dual(ReportArgs),
    /// Tate cohomology of a standard module of a finite group
    Cohomology(CohomologyArgs),
    /// Check every closed-form identity against brute force over a corpus
    Verify(VerifyArgs),
    /// Validate a dataset file entry by entry
    DatasetCheck(DatasetCheckArgs),
}

#[derive(Args)]
struct ReportArgs {
    /// Squarefree d for the extension Q(sqrt(d))/Q
    #[arg(long, value_name = "D", allow_negative_numbers = true)]
    quadratic: Option<i64>,
    /// Label of a dataset entry
    #[arg(long, value_name = "LABEL")]
    label: Option<String>,
    /// Finite primes of S, comma separated (the archimedean place is always in S)
    #[arg(long = "S", value_name = "P1,P2,...", value_delimiter = ',')]
    s: Vec<i64>,
    /// Extra dataset file layered over the bundled entries
    #[arg(long, value_name = "PATH")]
    dataset: Option<PathBuf>,
    /// Drop the bundled dataset entries
    #[arg(long)]
    no_dataset: bool,
    /// Emit the report as JSON instead of a table
    #[arg(long)]
    json: bool,
    /// Refuse quadratic fields with |disc| above this bound
    #[arg(long, value_name = "N", default_value_t = DEFAULT_DISC_BOUND)]
    disc_bound: u64,
}

#[derive(Args)]
struct CohomologyArgs {
    /// Group: cyclic:N, klein4, s3, or perm:IMG;IMG;... (each IMG a
    /// comma-separated permutation of 0..n-1 in image notation)
    #[arg(long, value_name = "SPEC")]
    group: String,
    /// Module: trivial, regular, norm, dual
    #[arg(long, value_name = "KIND")]
    module: String,
    /// Tate degree: -1, 0, 1 or 2
    #[arg(long, value_name = "N", allow_negative_numbers = true)]
    degree: i64,
    /// Emit JSON instead of one line of text
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct VerifyArgs {
    /// Run quadratic fields with |disc| up to this bound
    #[arg(long, value_name = "N", default_value_t = DEFAULT_VERIFY_BOUND)]
    disc_bound: u64,
    /// Extra dataset file layered over the bundled entries
    #[arg(long, value_name = "PATH")]
    dataset: Option<PathBuf>,
    /// Drop the bundled dataset entries
    #[arg(long)]
    no_dataset: bool,
    /// Emit the summary as JSON
    #[arg(long)]
    json: bool,
}

#[derive(Args)]
struct DatasetCheckArgs {
    /// Dataset file to validate
    #[arg(long, value_name = "PATH")]
    dataset: PathBuf,
    /// Also recompute both class numbers for every entry and S-choice
    #[arg(long)]
    deep: bool,
}

fn fail(message: impl std::fmt::Display) -> ExitCode {
    eprintln!("error: {}", message);
    ExitCode::from(1)
}

/// Loads the dataset stack a command sees: the bundled entries unless
/// --no-dataset, with --dataset layered on top.  Entry-level issues in the
/// user file are warnings here; commands that need a specific entry fail
/// only if that entry is unusable.
fn load_entries(
    dataset: Option<&Path>,
    no_dataset: bool,
) -> Result<Vec<ExtensionDatum>, Error> {
    let mut entries = if no_dataset { Vec::new() } else { builtin_dataset() };
    if let Some(path) = dataset {
        let text = std::fs::read_to_string(path).map_err(|e| {
            Error::Input(format!("cannot read {}: {}", path.display(), e))
        })?;
        let (extra, issues) = parse_dataset(&text)?;
        for issue in issues {
            eprintln!("warning: {}", issue);
        }
        merge_entries(&mut entries, extra)?;
    }
    Ok(entries)
}

fn resolve_inputs(args: &ReportArgs) -> Result<TorusInputs, Error> {
    match (&args.quadratic, &args.label) {
        (Some(_), Some(_)) => Err(Error::Input(
            "give exactly one of --quadratic and --label, not both".into(),
        )),
        (None, None) => Err(Error::Input(
            "give exactly one of --quadratic and --label".into(),
        )),
        (Some(d), None) => {
            let field = QuadraticField::new(*d)?;
            field.torus_inputs(&args.s, args.disc_bound)
        }
        (None, Some(label)) => {
            if args.no_dataset && args.dataset.is_none() {
                return Err(Error::Input("label requires --dataset".into()));
            }
            let entries = load_entries(args.dataset.as_deref(), args.no_dataset)?;
            let datum = entries
                .iter()
                .find(|e| &e.label == label)
                .ok_or_else(|| {
                    Error::Input(format!("no dataset entry labelled '{}'", label))
                })?;
            datum_to_inputs(datum, &args.s)
        }
    }
}

fn run_report(kind: TorusKind, args: &ReportArgs) -> ExitCode {
    let inputs = match resolve_inputs(args) {
        Ok(inputs) => inputs,
        Err(e) => return fail(e),
    };
    let report: Result<ClassNumberReport, Error> = match kind {
        TorusKind::Norm => norm_torus_class_number(&inputs),
        TorusKind::Dual => dual_torus_class_number(&inputs),
    };
    let report = match report {
        Ok(report) => report,
        Err(e) => return fail(e),
    };
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&output::report_json(&report, &inputs.s_places))
                .expect("report serializes")
        );
    } else {
        print!("{}", output::report_text(&report, &inputs.s_places));
    }
    if !report.all_checks_agree() {
        eprintln!("error: a closed-form term disagrees with its brute-force check");
        return ExitCode::from(2);
    }
    if !report.is_integral() {
        eprintln!("error: the assembled class number is not an integer; input data is inconsistent");
        return ExitCode::from(2);
    }
    ExitCode::SUCCESS
}

fn parse_group(spec: &str) -> Result<FiniteGroup, Error> {
    if let Some(n) = spec.strip_prefix("cyclic:") {
        let n: usize = n
            .parse()
            .map_err(|_| Error::Input(format!("bad cyclic order '{}'", n)))?;
        if n == 0 || n > 64 {
            return Err(Error::Input("cyclic order must be between 1 and 64".into()));
        }
        return Ok(FiniteGroup::cyclic(n));
    }
    if spec == "klein4" {
        return Ok(FiniteGroup::klein_four());
    }
    if spec == "s3" {
        return Ok(FiniteGroup::symmetric_3());
    }
    if let Some(rest) = spec.strip_prefix("perm:") {
        let gens: Result<Vec<Vec<usize>>, Error> = rest
            .split(';')
            .map(|g| {
                g.split(',')
                    .map(|v| {
                        v.trim()
                            .parse::<usize>()
                            .map_err(|_| Error::Input(format!("bad permutation entry '{}'", v)))
                    })
                    .collect()
            })
            .collect();
        let gens = gens?;
        let degree = gens.first().map(|g| g.len()).unwrap_or(0);
        return FiniteGroup::from_permutations(degree, &gens);
    }
    Err(Error::Input(format!(
        "unknown group spec '{}'; use cyclic:N, klein4, s3 or perm:...",
        spec
    )))
}

fn parse_module_kind(name: &str) -> Result<StandardKind, Error> {
    match name {
        "trivial" => Ok(StandardKind::Trivial),
        "regular" => Ok(StandardKind::Regular),
        "norm" => Ok(StandardKind::NormTorus),
        "dual" => Ok(StandardKind::DualTorus),
        other => Err(Error::Input(format!(
            "unknown module kind '{}'; use trivial, regular, norm or dual",
            other
        ))),
    }
}

fn run_cohomology(args: &CohomologyArgs) -> ExitCode {
    let result = parse_group(&args.group)
        .and_then(|g| {
            let kind = parse_module_kind(&args.module)?;
            standard_module(&g, &kind)
        })
        .and_then(|m| tate_cohomology(&m, args.degree));
    match result {
        Ok(h) => {
            if args.json {
                let factors: Vec<String> = h
                    .structure
                    .invariant_factors()
                    .iter()
                    .map(|d| d.to_string())
                    .collect();
                println!(
                    "{}",
                    serde_json::json!({
                        "degree": h.degree,
                        "invariant_factors": factors,
                        "order": h.order().to_string(),
                    })
                );
            } else {
                println!("{} (order {})", h.structure, h.order());
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(e),
    }
}

fn run_verify(args: &VerifyArgs) -> ExitCode {
    // entry-level issues must count as verify failures, so load by hand
    // instead of through load_entries' warning path
    let mut entries = if args.no_dataset { Vec::new() } else { builtin_dataset() };
    let mut issues = Vec::new();
    if let Some(path) = &args.dataset {
        let text = match std::fs::read_to_string(path) {
            Ok(text) => text,
            Err(e) => return fail(format!("cannot read {}: {}", path.display(), e)),
        };
        match parse_dataset(&text) {
            Ok((extra, extra_issues)) => {
                issues.extend(extra_issues);
                if let Err(e) = merge_entries(&mut entries, extra) {
                    return fail(e);
                }
            }
            Err(e) => return fail(e),
        }
    }
    let summary = verify::run_verify(args.disc_bound, &entries, &issues);
    if args.json {
        println!(
            "{}",
            serde_json::to_string_pretty(&summary.render_json()).expect("summary serializes")
        );
    } else {
        print!("{}", summary.render_text());
    }
    if summary.all_pass() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(2)
    }
}

fn run_dataset_check(args: &DatasetCheckArgs) -> ExitCode {
    let text = match std::fs::read_to_string(&args.dataset) {
        Ok(text) => text,
        Err(e) => return fail(format!("cannot read {}: {}", args.dataset.display(), e)),
    };
    let (entries, issues) = match parse_dataset(&text) {
        Ok(parsed) => parsed,
        Err(e) => return fail(e),
    };
    for issue in &issues {
        println!("bad   {}", issue);
    }
    let mut inconsistent = false;
    for entry in &entries {
        if !args.deep {
            println!("ok    {}", entry.label);
            continue;
        }
        let mut s_choices: Vec<Vec<i64>> = vec![Vec::new()];
        s_choices.extend(entry.overrides.iter().map(|ov| ov.s.clone()));
        let mut entry_ok = true;
        for s in s_choices {
            let inputs = match datum_to_inputs(entry, &s) {
                Ok(inputs) => inputs,
                Err(e) => {
                    println!("bad   {}: {}", entry.label, e);
                    entry_ok = false;
                    continue;
                }
            };
            let mut reports = Vec::new();
            match dual_torus_class_number(&inputs) {
                Ok(r) => reports.push(r),
                Err(e) => {
                    println!("bad   {}: {}", entry.label, e);
                    entry_ok = false;
                }
            }
            if inputs.group.is_cyclic() || inputs.knot.is_some() {
                match norm_torus_class_number(&inputs) {
                    Ok(r) => reports.push(r),
                    Err(e) => {
                        println!("bad   {}: {}", entry.label, e);
                        entry_ok = false;
                    }
                }
            }
            for r in reports {
                if !r.all_checks_agree() || !r.is_integral() {
                    println!(
                        "bad   {}: {} report at S={:?} is inconsistent",
                        entry.label, r.kind, s
                    );
                    entry_ok = false;
                    inconsistent = true;
                }
            }
        }
        if entry_ok {
            println!("ok    {}", entry.label);
        }
    }
    println!(
        "{} usable, {} rejected",
        entries.len(),
        issues.len()
    );
    if inconsistent {
        ExitCode::from(2)
    } else if issues.is_empty() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // --help and --version land here too; only real usage errors
            // should exit 1
            use clap::error::ErrorKind;
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match &cli.command {
        Command::Norm(args) => run_report(TorusKind::Norm, args),
        Command::Dual(args) => run_report(TorusKind::Dual, args),
        Command::Cohomology(args) => run_cohomology(args),
        Command::Verify(args) => run_verify(args),
        Command::DatasetCheck(args) => run_dataset_check(args),
    }
}
