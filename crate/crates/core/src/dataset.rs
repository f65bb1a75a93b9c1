//! Tabulated extension data: a JSON schema for describing a Galois extension
//! L/Q together with the arithmetic the class-number formulas consume.
//!
//! A dataset file carries entries that cannot be derived on the fly (unit
//! actions, class numbers, splitting data for non-quadratic fields).  Loading
//! validates each entry in isolation: one bad entry is reported and skipped,
//! the rest of the file still loads.

use num_bigint::BigInt;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::formulas::TorusInputs;
use crate::group::{FiniteGroup, Subgroup};
use crate::mat::IntMat;
use crate::module::GModule;
use crate::places::{Place, PlaceDatum};

pub const SCHEMA_VERSION: u32 = 1;

/// On-disk shape of a dataset file.  Field layout is the schema; the
/// validated types below are what the rest of the crate consumes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawDataset {
    pub schema_version: u32,
    pub entries: Vec<RawEntry>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawEntry {
    pub label: String,
    pub base_field: String,
    /// multiplication table, group[i][j] = i*j, identity is element 0
    pub group: Vec<Vec<usize>>,
    pub class_number_l: u64,
    pub class_number_k: u64,
    pub unit_module: RawModule,
    pub places: Vec<RawPlaceDatum>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub knot_number: Option<u64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub s_class_number_overrides: Option<Vec<RawOverride>>,
}

/// Unit lattice of the extension as matrices for a generating set of the
/// Galois group.  Basis order: free generators first, then the single
/// torsion generator (the chosen root of unity).  matrix[i][j] is the
/// e_i-coordinate of the image of e_j.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawModule {
    pub rank: usize,
    pub torsion: Vec<u64>,
    pub generators: Vec<RawGenerator>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawGenerator {
    pub element: usize,
    pub matrix: Vec<Vec<i64>>,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawPlaceDatum {
    pub place: RawPlace,
    pub decomposition: Vec<usize>,
    pub inertia: Vec<usize>,
}

/// A finite place is its residue characteristic; the archimedean place is
/// the string "infinity".
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum RawPlace {
    Finite(i64),
    Named(String),
}

/// Replacement arithmetic for one choice of finite S-primes: the S-unit
/// module and S-class numbers that take over when S is enlarged beyond the
/// archimedean places.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RawOverride {
    pub s: Vec<i64>,
    pub class_number_l: u64,
    pub class_number_k: u64,
    pub unit_module: RawModule,
}

/// One validated extension, ready to be turned into formula inputs.
#[derive(Clone, Debug)]
pub struct ExtensionDatum {
    pub label: String,
    pub group: FiniteGroup,
    pub class_number_l: BigInt,
    pub class_number_k: BigInt,
    pub units: GModule,
    pub places: Vec<PlaceDatum>,
    pub knot: Option<BigInt>,
    pub overrides: Vec<SClassOverride>,
}

#[derive(Clone, Debug)]
pub struct SClassOverride {
    /// sorted, deduplicated finite primes
    pub s: Vec<i64>,
    pub class_number_l: BigInt,
    pub class_number_k: BigInt,
    pub units: GModule,
}

/// A rejected entry: its label (or position when the label is unusable) and
/// why it was rejected.
#[derive(Clone, Debug)]
pub struct DatasetIssue {
    pub label: String,
    pub message: String,
}

impl std::fmt::Display for DatasetIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "entry '{}': {}", self.label, self.message)
    }
}

fn convert_place(raw: &RawPlace) -> Result<Place, String> {
    match raw {
        RawPlace::Finite(p) if *p >= 2 => Ok(Place::Finite(*p)),
        RawPlace::Finite(p) => Err(format!("finite place {} is not a prime candidate", p)),
        RawPlace::Named(s) if s == "infinity" => Ok(Place::Infinite),
        RawPlace::Named(s) => Err(format!("unknown place name '{}'", s)),
    }
}

fn convert_module(raw: &RawModule, group: &FiniteGroup) -> Result<GModule, String> {
    let dim = raw.rank + raw.torsion.len();
    let mut gens = Vec::with_capacity(raw.generators.len());
    for g in &raw.generators {
        if g.matrix.len() != dim || g.matrix.iter().any(|row| row.len() != dim) {
            return Err(format!(
                "generator matrix for element {} is not {}x{}",
                g.element, dim, dim
            ));
        }
        let mat = IntMat::from_fn(dim, dim, |i, j| BigInt::from(g.matrix[i][j]));
        gens.push((g.element, mat));
    }
    let torsion = raw.torsion.iter().map(|&t| BigInt::from(t)).collect();
    GModule::from_generators(group.clone(), raw.rank, torsion, &gens).map_err(|e| e.to_string())
}

fn convert_entry(raw: &RawEntry) -> Result<ExtensionDatum, String> {
    if raw.base_field != "Q" {
        return Err(format!(
            "base field '{}' is not supported; only Q is",
            raw.base_field
        ));
    }
    let group = FiniteGroup::from_table(&raw.group).map_err(|e| e.to_string())?;
    if raw.class_number_l == 0 || raw.class_number_k == 0 {
        return Err("class numbers must be positive".into());
    }
    let units = convert_module(&raw.unit_module, &group)?;

    let mut places = Vec::with_capacity(raw.places.len());
    for rp in &raw.places {
        let place = convert_place(&rp.place)?;
        let dec = Subgroup::new(&group, rp.decomposition.clone()).map_err(|e| e.to_string())?;
        let ine = Subgroup::new(&group, rp.inertia.clone()).map_err(|e| e.to_string())?;
        places.push(PlaceDatum::new(place, dec, ine).map_err(|e| e.to_string())?);
    }

    let knot = raw.knot_number.map(BigInt::from);
    match &knot {
        Some(k) if *k < BigInt::one() => return Err("knot number must be positive".into()),
        Some(k) if group.is_cyclic() && !k.is_one() => {
            return Err(format!("cyclic extensions have knot number 1, got {}", k));
        }
        _ => {}
    }

    let mut overrides = Vec::new();
    if let Some(raw_overrides) = &raw.s_class_number_overrides {
        for ov in raw_overrides {
            if ov.class_number_l == 0 || ov.class_number_k == 0 {
                return Err("class numbers must be positive".into());
            }
            let mut s = ov.s.clone();
            s.sort_unstable();
            s.dedup();
            if s.is_empty() {
                return Err("an override must name at least one finite prime".into());
            }
            if overrides.iter().any(|o: &SClassOverride| o.s == s) {
                return Err(format!("duplicate override for S = {:?}", s));
            }
            overrides.push(SClassOverride {
                s,
                class_number_l: BigInt::from(ov.class_number_l),
                class_number_k: BigInt::from(ov.class_number_k),
                units: convert_module(&ov.unit_module, &group)?,
            });
        }
    }

    let datum = ExtensionDatum {
        label: raw.label.clone(),
        group,
        class_number_l: BigInt::from(raw.class_number_l),
        class_number_k: BigInt::from(raw.class_number_k),
        units,
        places,
        knot,
        overrides,
    };

    // fail at load, not at first use: the base inputs must already pass the
    // formula-side validation (rank count, place coverage, ...)
    datum_to_inputs(&datum, &[])
        .and_then(|inputs| inputs.validate())
        .map_err(|e| e.to_string())?;
    for ov in &datum.overrides {
        let inputs = datum_to_inputs(&datum, &ov.s).map_err(|e| e.to_string())?;
        inputs.validate().map_err(|e| e.to_string())?;
    }

    Ok(datum)
}

/// Parses a dataset file.  A malformed file or wrong schema version is a
/// hard error; a bad entry becomes an issue and the remaining entries still
/// load.  The first of two entries sharing a label wins.
pub fn parse_dataset(text: &str) -> Result<(Vec<ExtensionDatum>, Vec<DatasetIssue>), Error> {
    let raw: RawDataset =
        serde_json::from_str(text).map_err(|e| Error::DatasetFormat(e.to_string()))?;
    if raw.schema_version != SCHEMA_VERSION {
        return Err(Error::DatasetFormat(format!(
            "schema version {} is not supported; this build reads version {}",
            raw.schema_version, SCHEMA_VERSION
        )));
    }
    let mut entries: Vec<ExtensionDatum> = Vec::new();
    let mut issues = Vec::new();
    for (i, raw_entry) in raw.entries.iter().enumerate() {
        let label = if raw_entry.label.trim().is_empty() {
            format!("#{}", i)
        } else {
            raw_entry.label.clone()
        };
        if raw_entry.label.trim().is_empty() {
            issues.push(DatasetIssue {
                label,
                message: "entry has an empty label".into(),
            });
            continue;
        }
        if entries.iter().any(|e| e.label == raw_entry.label) {
            issues.push(DatasetIssue {
                label,
                message: "duplicate label; keeping the earlier entry".into(),
            });
            continue;
        }
        match convert_entry(raw_entry) {
            Ok(datum) => entries.push(datum),
            Err(message) => issues.push(DatasetIssue { label, message }),
        }
    }
    Ok((entries, issues))
}

/// Adds `extra` entries to `entries`, rejecting duplicate labels across the
/// two sets.  Used to layer a user dataset over the bundled one.
pub fn merge_entries(
    entries: &mut Vec<ExtensionDatum>,
    extra: Vec<ExtensionDatum>,
) -> Result<(), Error> {
    for datum in extra {
        if entries.iter().any(|e| e.label == datum.label) {
            return Err(Error::Dataset {
                entry: datum.label,
                message: "label already present in the loaded dataset".into(),
            });
        }
        entries.push(datum);
    }
    Ok(())
}

pub const BUILTIN_DATASET: &str = include_str!("../data/builtin_dataset.json");

/// The entries bundled with the crate.  The bundle is a compile-time
/// constant, so failing to load it cleanly is a defect, not an input error.
pub fn builtin_dataset() -> Vec<ExtensionDatum> {
    let (entries, issues) = parse_dataset(BUILTIN_DATASET).expect("bundled dataset must parse");
    assert!(
        issues.is_empty(),
        "bundled dataset has invalid entries: {:?}",
        issues
    );
    entries
}

/// Builds formula inputs for the extension with the finite S-primes in `s`
/// (the archimedean place is always included).  An empty `s` uses the base
/// arithmetic; otherwise the entry must carry an override for exactly that
/// set of primes.
pub fn datum_to_inputs(datum: &ExtensionDatum, s: &[i64]) -> Result<TorusInputs, Error> {
    let mut s: Vec<i64> = s.to_vec();
    s.sort_unstable();
    s.dedup();

    let (h_l_s, h_k_s, units) = if s.is_empty() {
        (
            datum.class_number_l.clone(),
            datum.class_number_k.clone(),
            datum.units.clone(),
        )
    } else {
        match datum.overrides.iter().find(|ov| ov.s == s) {
            Some(ov) => (
                ov.class_number_l.clone(),
                ov.class_number_k.clone(),
                ov.units.clone(),
            ),
            None => {
                return Err(Error::Dataset {
                    entry: datum.label.clone(),
                    message: format!(
                        "no S-unit data for the finite primes {:?}; add an s_class_number_overrides block",
                        s
                    ),
                });
            }
        }
    };

    let mut s_places = vec![Place::Infinite];
    s_places.extend(s.into_iter().map(Place::Finite));

    Ok(TorusInputs {
        label: datum.label.clone(),
        group: datum.group.clone(),
        units,
        h_l_s,
        h_k_s,
        places: datum.places.clone(),
        s_places,
        knot: datum.knot.clone(),
    })
}
