//! Class numbers of the norm-one torus of a finite Galois extension L/K
//! and of its dual, assembled from class numbers, S-unit cohomology, and
//! local decomposition data.
//!
//! Every closed-form term that has an independent cohomological description
//! is computed both ways and the pair is recorded; a disagreement means the
//! input data is inconsistent, not that one side wins.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::One;

use crate::abelian::FiniteAbelianGroup;
use crate::cohomology::{
    fixed_points, h1_with_residual_action, herbrand_quotient, tate_cohomology,
};
use crate::error::Error;
use crate::group::{abelianization, subgroup_as_group, FiniteGroup, Subgroup};
use crate::module::{restrict_module, standard_module, GModule, StandardKind};
use crate::places::{Place, PlaceDatum};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum TorusKind {
    /// kernel of the norm map of L/K on multiplicative groups
    Norm,
    /// the torus whose character lattice is dual to the norm-one one
    Dual,
}

impl std::fmt::Display for TorusKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            TorusKind::Norm => write!(f, "norm-one torus"),
            TorusKind::Dual => write!(f, "dual torus"),
        }
    }
}

/// Arithmetic of one extension L/K with a chosen finite place set S of K.
/// S always contains the archimedean places.  `units` is the S'-unit group
/// of L (S' = places over S) as a module over the Galois group, `h_l_s` and
/// `h_k_s` are the S-class numbers of L and K, and `places` carries
/// decomposition data for at least every place of S and every ramified
/// place.  `knot` is the order of the obstruction group measuring the gap
/// between local and global norms; it is 1 for cyclic extensions and must be
/// supplied from outside otherwise.
#[derive(Clone, Debug)]
pub struct TorusInputs {
    pub label: String,
    pub group: FiniteGroup,
    pub units: GModule,
    pub h_l_s: BigInt,
    pub h_k_s: BigInt,
    pub places: Vec<PlaceDatum>,
    pub s_places: Vec<Place>,
    pub knot: Option<BigInt>,
}

impl TorusInputs {
    pub fn datum(&self, place: &Place) -> Option<&PlaceDatum> {
        self.places.iter().find(|d| d.place() == place)
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.h_l_s < BigInt::one() || self.h_k_s < BigInt::one() {
            return Err(Error::Input("class numbers must be positive".into()));
        }
        if self.units.group() != &self.group {
            return Err(Error::GroupMismatch);
        }
        if self.units.torsion().len() != 1 {
            return Err(Error::Input(
                "the unit module must have exactly one torsion factor (the roots of unity)"
                    .into(),
            ));
        }
        for datum in &self.places {
            if datum.decomposition().parent() != &self.group {
                return Err(Error::GroupMismatch);
            }
        }
        for (i, datum) in self.places.iter().enumerate() {
            if self.places[..i].iter().any(|d| d.place() == datum.place()) {
                return Err(Error::Input(format!("duplicate place data for {}", datum.place())));
            }
        }
        if !self.s_places.contains(&Place::Infinite) {
            return Err(Error::Input("S must contain the archimedean place".into()));
        }
        for (i, place) in self.s_places.iter().enumerate() {
            if self.s_places[..i].contains(place) {
                return Err(Error::Input(format!("duplicate S-place {}", place)));
            }
            if self.datum(place).is_none() {
                return Err(Error::Input(format!("missing place data for {}", place)));
            }
        }
        // Dirichlet: rank of the S'-unit lattice is one less than the
        // number of places of L over S
        let n = self.group.order();
        let over_s: usize = self
            .s_places
            .iter()
            .map(|p| n / self.datum(p).unwrap().decomposition().order())
            .sum();
        if self.units.rank() + 1 != over_s {
            return Err(Error::Input(format!(
                "unit module has rank {} but S has {} places of the extension over it",
                self.units.rank(),
                over_s
            )));
        }
        if let Some(k) = &self.knot {
            if k < &BigInt::one() {
                return Err(Error::Input(format!("knot number must be positive, got {}", k)));
            }
        }
        Ok(())
    }
}

fn resolve_knot(group: &FiniteGroup, knot: Option<&BigInt>) -> Result<BigInt, Error> {
    if group.is_cyclic() {
        match knot {
            None => Ok(BigInt::one()),
            Some(k) if k.is_one() => Ok(BigInt::one()),
            Some(k) => Err(Error::Input(format!(
                "cyclic extensions have knot number 1, got {}",
                k
            ))),
        }
    } else {
        match knot {
            Some(k) => Ok(k.clone()),
            None => Err(Error::Input(
                "knot number required for a non-cyclic group".into(),
            )),
        }
    }
}

/// One closed-form term next to its independently computed counterpart.
#[derive(Clone, Debug)]
pub struct Crosscheck {
    pub name: String,
    pub closed: BigInt,
    pub brute: BigInt,
}

impl Crosscheck {
    pub fn agrees(&self) -> bool {
        self.closed == self.brute
    }
}

#[derive(Clone, Debug)]
pub struct LocalTerm {
    pub place: Place,
    pub value: BigInt,
}

#[derive(Debug)]
pub struct ClassNumberReport {
    pub kind: TorusKind,
    pub label: String,
    pub group_order: usize,
    pub h_l_s: BigInt,
    pub h_k_s: BigInt,
    /// order of H^1 of the character lattice; a numerator factor for the
    /// norm-one torus, a recorded invariant only for the dual
    pub global_h1: BigInt,
    /// the S-unit cohomology factor: Tate H^0 for the norm-one torus,
    /// H^1 for the dual
    pub unit_cohomology: BigInt,
    pub unit_cohomology_structure: FiniteAbelianGroup,
    /// denominator factor of the norm-one torus only
    pub knot: Option<BigInt>,
    /// local degrees over v in S (norm-one torus only)
    pub local_degrees: Vec<LocalTerm>,
    /// ramification factors at ramified places outside S
    pub ramification: Vec<LocalTerm>,
    pub tamagawa: Ratio<BigInt>,
    pub class_number: Ratio<BigInt>,
    pub crosschecks: Vec<Crosscheck>,
}

impl ClassNumberReport {
    pub fn is_integral(&self) -> bool {
        self.class_number.is_integer()
    }

    pub fn all_checks_agree(&self) -> bool {
        self.crosschecks.iter().all(|c| c.agrees())
    }
}

/// |H^1(I, M)^{D/I}| for the place's inertia and decomposition groups.
fn local_h1_fixed_order(datum: &PlaceDatum, m: &GModule) -> Result<BigInt, Error> {
    let (d_group, back) = subgroup_as_group(datum.decomposition());
    let restricted = restrict_module(m, datum.decomposition())?;
    let positions: Vec<usize> = datum
        .inertia()
        .elements()
        .iter()
        .map(|e| back.binary_search(e).expect("inertia inside decomposition"))
        .collect();
    let inertia = Subgroup::new(&d_group, positions)?;
    let h1 = h1_with_residual_action(&d_group, &inertia, &restricted)?;
    Ok(fixed_points(&h1)?.order())
}

pub fn norm_torus_class_number(inputs: &TorusInputs) -> Result<ClassNumberReport, Error> {
    inputs.validate()?;
    let g = &inputs.group;
    let ab = abelianization(g);
    let knot = resolve_knot(g, inputs.knot.as_ref())?;
    let characters = standard_module(g, &StandardKind::NormTorus)?;
    let mut crosschecks = Vec::new();

    let global_h1 = ab.structure.order();
    crosschecks.push(Crosscheck {
        name: "global-H1".into(),
        closed: global_h1.clone(),
        brute: tate_cohomology(&characters, 1)?.order(),
    });

    let unit_h = tate_cohomology(&inputs.units, 0)?;

    let mut local_degrees = Vec::new();
    let mut degree_product = BigInt::one();
    for place in &inputs.s_places {
        let datum = inputs.datum(place).expect("validated");
        let value = ab.image_order(datum.decomposition().elements());
        degree_product *= &value;
        local_degrees.push(LocalTerm { place: place.clone(), value });
    }

    let mut ramification = Vec::new();
    let mut ram_product = BigInt::one();
    for datum in &inputs.places {
        if inputs.s_places.contains(datum.place()) || !datum.is_ramified() {
            continue;
        }
        let value = ab.image_order(datum.inertia().elements());
        crosschecks.push(Crosscheck {
            name: format!("local-H1-at-{}", datum.place()),
            closed: value.clone(),
            brute: local_h1_fixed_order(datum, &characters)?,
        });
        ram_product *= &value;
        ramification.push(LocalTerm { place: datum.place().clone(), value });
    }

    let numerator = &inputs.h_l_s * &global_h1 * unit_h.order();
    let denominator = &inputs.h_k_s * &knot * &degree_product * &ram_product;
    Ok(ClassNumberReport {
        kind: TorusKind::Norm,
        label: inputs.label.clone(),
        group_order: g.order(),
        h_l_s: inputs.h_l_s.clone(),
        h_k_s: inputs.h_k_s.clone(),
        global_h1: global_h1.clone(),
        unit_cohomology: unit_h.order(),
        unit_cohomology_structure: unit_h.structure.clone(),
        knot: Some(knot.clone()),
        local_degrees,
        ramification,
        tamagawa: Ratio::new(global_h1, knot),
        class_number: Ratio::new(numerator, denominator),
        crosschecks,
    })
}

pub fn dual_torus_class_number(inputs: &TorusInputs) -> Result<ClassNumberReport, Error> {
    inputs.validate()?;
    let g = &inputs.group;
    let characters = standard_module(g, &StandardKind::DualTorus)?;
    let mut crosschecks = Vec::new();

    let global_h1 = BigInt::from(g.order());
    crosschecks.push(Crosscheck {
        name: "global-H1".into(),
        closed: global_h1.clone(),
        brute: tate_cohomology(&characters, 1)?.order(),
    });

    let unit_h = tate_cohomology(&inputs.units, 1)?;

    let mut ramification = Vec::new();
    let mut ram_product = BigInt::one();
    for datum in &inputs.places {
        if inputs.s_places.contains(datum.place()) || !datum.is_ramified() {
            continue;
        }
        let value = BigInt::from(datum.e());
        crosschecks.push(Crosscheck {
            name: format!("local-H1-at-{}", datum.place()),
            closed: value.clone(),
            brute: local_h1_fixed_order(datum, &characters)?,
        });
        ram_product *= &value;
        ramification.push(LocalTerm { place: datum.place().clone(), value });
    }

    let numerator = &inputs.h_l_s * unit_h.order();
    let denominator = &inputs.h_k_s * &ram_product;
    Ok(ClassNumberReport {
        kind: TorusKind::Dual,
        label: inputs.label.clone(),
        group_order: g.order(),
        h_l_s: inputs.h_l_s.clone(),
        h_k_s: inputs.h_k_s.clone(),
        global_h1: global_h1.clone(),
        unit_cohomology: unit_h.order(),
        unit_cohomology_structure: unit_h.structure.clone(),
        knot: None,
        local_degrees: Vec::new(),
        ramification,
        tamagawa: Ratio::from_integer(global_h1),
        class_number: Ratio::new(numerator, denominator),
        crosschecks,
    })
}

/// Both sides of the cyclic-extension identity: the Herbrand quotient of
/// the S-unit module equals the product of the decomposition group orders
/// over S divided by the group order.
pub fn herbrand_identity(inputs: &TorusInputs) -> Result<(Ratio<BigInt>, Ratio<BigInt>), Error> {
    inputs.validate()?;
    let lhs = herbrand_quotient(&inputs.units)?;
    let mut product = BigInt::one();
    for place in &inputs.s_places {
        let datum = inputs.datum(place).expect("validated");
        product *= BigInt::from(datum.decomposition().order());
    }
    let rhs = Ratio::new(product, BigInt::from(inputs.group.order()));
    Ok((lhs, rhs))
}
