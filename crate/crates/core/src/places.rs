//! Decomposition data attached to a place of the base field.
//!
//! One datum describes a place v of the base together with the decomposition
//! and inertia subgroups of a chosen place above it.  The groups are recorded
//! as subgroups of the full Galois group; different choices above v are
//! conjugate, and every consumer here only uses conjugation-invariant
//! quantities.

use crate::error::Error;
use crate::group::{FiniteGroup, Subgroup};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Place {
    Infinite,
    Finite(i64),
}

impl std::fmt::Display for Place {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Place::Infinite => write!(f, "infinity"),
            Place::Finite(p) => write!(f, "{}", p),
        }
    }
}

#[derive(Clone, Debug)]
pub struct PlaceDatum {
    place: Place,
    decomposition: Subgroup,
    inertia: Subgroup,
    e: usize,
    f: usize,
    g: usize,
}

impl PlaceDatum {
    /// Checks inertia <= decomposition, normality of inertia in the
    /// decomposition group, and derives (e, f, g) from the subgroup orders.
    pub fn new(
        place: Place,
        decomposition: Subgroup,
        inertia: Subgroup,
    ) -> Result<PlaceDatum, Error> {
        if decomposition.parent() != inertia.parent() {
            return Err(Error::GroupMismatch);
        }
        for &x in inertia.elements() {
            if !decomposition.contains(x) {
                return Err(Error::Structure(format!(
                    "inertia is not contained in the decomposition group at {}",
                    place
                )));
            }
        }
        for &d in decomposition.elements() {
            let parent = decomposition.parent();
            for &x in inertia.elements() {
                let conj = parent.mul(parent.mul(d, x), parent.inv(d));
                if !inertia.contains(conj) {
                    return Err(Error::Structure(format!(
                        "inertia is not normal in the decomposition group at {}",
                        place
                    )));
                }
            }
        }
        let e = inertia.order();
        let d_ord = decomposition.order();
        debug_assert_eq!(d_ord % e, 0);
        let f = d_ord / e;
        let g = decomposition.parent().order() / d_ord;
        Ok(PlaceDatum {
            place,
            decomposition,
            inertia,
            e,
            f,
            g,
        })
    }

    pub fn place(&self) -> &Place {
        &self.place
    }

    pub fn decomposition(&self) -> &Subgroup {
        &self.decomposition
    }

    pub fn inertia(&self) -> &Subgroup {
        &self.inertia
    }

    /// Ramification index.
    pub fn e(&self) -> usize {
        self.e
    }

    /// Residue degree (order of Frobenius in D/I).
    pub fn f(&self) -> usize {
        self.f
    }

    /// Number of places above v.
    pub fn g(&self) -> usize {
        self.g
    }

    /// Local degree e*f of the completion above v.
    pub fn local_degree(&self) -> usize {
        self.e * self.f
    }

    pub fn is_ramified(&self) -> bool {
        self.e > 1
    }

    pub fn group(&self) -> &FiniteGroup {
        self.decomposition.parent()
    }
}
