//! Exact invariants of quadratic fields: class groups via binary quadratic
//! forms, fundamental units via continued fractions, splitting data, and
//! S-unit Galois modules.  Everything is integer arithmetic; class numbers
//! are counts of reduced forms or of cycles of them.

pub mod forms;
pub mod pell;
pub mod qint;
pub mod units;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::abelian::FiniteAbelianGroup;
use crate::error::Error;
use crate::formulas::TorusInputs;
use crate::group::{full_subgroup, trivial_subgroup, FiniteGroup};
use crate::places::{Place, PlaceDatum};
use forms::{prime_form, ImaginaryClassGroup, RealClassGroup};
use qint::QInt;
pub use units::{unit_module, UnitModuleDescription};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SplitKind {
    Split,
    Inert,
    Ramified,
}

/// Q(sqrt(d)) for squarefree d, not 0 or 1.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct QuadraticField {
    d: i64,
}

pub fn is_prime_i64(n: i64) -> bool {
    if n < 2 {
        return false;
    }
    if n % 2 == 0 {
        return n == 2;
    }
    let mut f = 3;
    while f * f <= n {
        if n % f == 0 {
            return false;
        }
        f += 2;
    }
    true
}

fn is_squarefree(n: i64) -> bool {
    let mut m = n.abs();
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            m /= p;
            if m % p == 0 {
                return false;
            }
        }
        p += 1;
    }
    true
}

impl QuadraticField {
    pub fn new(d: i64) -> Result<QuadraticField, Error> {
        if d == 0 || d == 1 {
            return Err(Error::Quadratic(format!(
                "d = {} does not define a quadratic field",
                d
            )));
        }
        if !is_squarefree(d) {
            return Err(Error::Quadratic(format!("d = {} is not squarefree", d)));
        }
        Ok(QuadraticField { d })
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn is_imaginary(&self) -> bool {
        self.d < 0
    }

    pub fn discriminant(&self) -> i64 {
        if self.d.rem_euclid(4) == 1 {
            self.d
        } else {
            4 * self.d
        }
    }

    pub fn label(&self) -> String {
        format!("Q(sqrt({}))", self.d)
    }

    pub fn galois_group(&self) -> FiniteGroup {
        FiniteGroup::cyclic(2)
    }

    pub(crate) fn check_rational_prime(&self, p: i64) -> Result<(), Error> {
        if is_prime_i64(p) {
            Ok(())
        } else {
            Err(Error::Input(format!("{} is not a rational prime", p)))
        }
    }

    pub(crate) fn check_disc_bound(&self, bound: u64) -> Result<(), Error> {
        let disc = self.discriminant().unsigned_abs();
        if disc > bound {
            Err(Error::Quadratic(format!(
                "|disc| = {} exceeds the class computation bound {}",
                disc, bound
            )))
        } else {
            Ok(())
        }
    }

    /// Primes dividing the discriminant.
    pub fn ramified_primes(&self) -> Vec<i64> {
        let mut n = self.discriminant().abs();
        let mut out = Vec::new();
        let mut p = 2;
        while p * p <= n {
            if n % p == 0 {
                out.push(p);
                while n % p == 0 {
                    n /= p;
                }
            }
            p += 1;
        }
        if n > 1 {
            out.push(n);
        }
        out
    }

    pub fn split_kind(&self, p: i64) -> Result<SplitKind, Error> {
        self.check_rational_prime(p)?;
        let disc = self.discriminant();
        if disc % p == 0 {
            return Ok(SplitKind::Ramified);
        }
        if p == 2 {
            // disc odd here; split iff disc = 1 mod 8
            return Ok(if disc.rem_euclid(8) == 1 {
                SplitKind::Split
            } else {
                SplitKind::Inert
            });
        }
        // Euler's criterion for the Legendre symbol (disc | p)
        let base = BigInt::from(disc.rem_euclid(p));
        let sym = base.modpow(&BigInt::from((p - 1) / 2), &BigInt::from(p));
        Ok(if sym == BigInt::from(1) {
            SplitKind::Split
        } else {
            SplitKind::Inert
        })
    }

    /// Decomposition data above one place of Q.
    pub fn splitting(&self, place: &Place) -> Result<PlaceDatum, Error> {
        let g = self.galois_group();
        let (dec, ine) = match place {
            Place::Infinite => {
                if self.is_imaginary() {
                    (full_subgroup(&g), full_subgroup(&g))
                } else {
                    (trivial_subgroup(&g), trivial_subgroup(&g))
                }
            }
            Place::Finite(p) => match self.split_kind(*p)? {
                SplitKind::Ramified => (full_subgroup(&g), full_subgroup(&g)),
                SplitKind::Split => (trivial_subgroup(&g), trivial_subgroup(&g)),
                SplitKind::Inert => (full_subgroup(&g), trivial_subgroup(&g)),
            },
        };
        PlaceDatum::new(place.clone(), dec, ine)
    }

    /// Class number and class group, by reduced form enumeration (imaginary)
    /// or cycle counting with the wide quotient (real).
    pub fn class_number(&self, bound: u64) -> Result<(BigInt, FiniteAbelianGroup), Error> {
        self.check_disc_bound(bound)?;
        let disc = BigInt::from(self.discriminant());
        if self.is_imaginary() {
            let ctx = ImaginaryClassGroup::new(&disc)?;
            let s = ctx.structure()?;
            Ok((ctx.h(), s))
        } else {
            let ctx = RealClassGroup::new(&disc)?;
            let s = ctx.wide_structure()?;
            Ok((BigInt::from(ctx.h_wide()), s))
        }
    }

    /// S-class number: the class number divided by the order of the subgroup
    /// generated by the classes of the primes above S.
    pub fn s_class_number(&self, s_primes: &[i64], bound: u64) -> Result<BigInt, Error> {
        let mut s: Vec<i64> = s_primes.to_vec();
        s.sort_unstable();
        s.dedup();
        for &p in &s {
            self.check_rational_prime(p)?;
        }
        if s.is_empty() {
            return Ok(self.class_number(bound)?.0);
        }
        self.check_disc_bound(bound)?;
        let disc = BigInt::from(self.discriminant());
        if self.is_imaginary() {
            let ctx = ImaginaryClassGroup::new(&disc)?;
            let mut gens = Vec::new();
            for &p in &s {
                if self.split_kind(p)? == SplitKind::Inert {
                    continue; // the prime above is p itself
                }
                let f = prime_form(&disc, p).expect("non-inert prime has a prime form");
                gens.push(ctx.class_index(&f)?);
            }
            let sub = if gens.is_empty() { 1 } else { ctx.subgroup_order(&gens) };
            let h = ctx.h();
            debug_assert!((&h % BigInt::from(sub)).is_zero());
            Ok(h / BigInt::from(sub))
        } else {
            let ctx = RealClassGroup::new(&disc)?;
            for &p in &s {
                if self.split_kind(p)? == SplitKind::Inert {
                    continue;
                }
                let f = prime_form(&disc, p).expect("non-inert prime has a prime form");
                let idx = ctx.class_index(&f)?;
                if !ctx.is_wide_principal(idx) {
                    return Err(Error::Quadratic(format!(
                        "the primes above {} are not principal in Q(sqrt({})); \
                         supply h_(L,S) via a dataset entry",
                        p, self.d
                    )));
                }
            }
            Ok(BigInt::from(ctx.h_wide()))
        }
    }

    /// Order of the class of a prime above p, for imaginary fields.
    pub fn ideal_class_order(&self, p: i64, bound: u64) -> Result<u64, Error> {
        if !self.is_imaginary() {
            return Err(Error::Quadratic(
                "ideal class orders via forms are implemented for imaginary fields".into(),
            ));
        }
        self.check_rational_prime(p)?;
        self.check_disc_bound(bound)?;
        if self.split_kind(p)? == SplitKind::Inert {
            return Err(Error::Quadratic(format!(
                "{} is inert in Q(sqrt({})); there is no prime of residue degree one above it",
                p, self.d
            )));
        }
        let disc = BigInt::from(self.discriminant());
        let ctx = ImaginaryClassGroup::new(&disc)?;
        let f = prime_form(&disc, p).expect("non-inert prime has a prime form");
        Ok(ctx.order_of(ctx.class_index(&f)?))
    }

    pub fn fundamental_unit(&self) -> Result<(QInt, i8), Error> {
        pell::fundamental_unit(self.d)
    }

    pub fn unit_module(&self, s_primes: &[i64], bound: u64) -> Result<UnitModuleDescription, Error> {
        units::unit_module(self, s_primes, bound)
    }

    /// Everything the torus class-number formulas need, S being the
    /// archimedean place plus the given primes.  The base field is Q, so
    /// its S-class number is 1 for every S.
    pub fn torus_inputs(&self, s_primes: &[i64], bound: u64) -> Result<TorusInputs, Error> {
        let mut s: Vec<i64> = s_primes.to_vec();
        s.sort_unstable();
        s.dedup();
        let units = self.unit_module(&s, bound)?;
        let h_l_s = self.s_class_number(&s, bound)?;

        let mut finite: Vec<i64> = self.ramified_primes();
        finite.extend_from_slice(&s);
        finite.sort_unstable();
        finite.dedup();
        let mut places = vec![self.splitting(&Place::Infinite)?];
        for p in finite {
            places.push(self.splitting(&Place::Finite(p))?);
        }
        let mut s_places = vec![Place::Infinite];
        s_places.extend(s.iter().map(|&p| Place::Finite(p)));

        Ok(TorusInputs {
            label: self.label(),
            group: self.galois_group(),
            units: units.module,
            h_l_s,
            h_k_s: BigInt::one(),
            places,
            s_places,
            knot: None,
        })
    }
}

/// Squarefree d (other than 0, 1) whose field discriminant is at most the
/// bound in absolute value, ascending by |disc| then d.
pub fn fields_with_disc_up_to(bound: u64) -> Vec<QuadraticField> {
    let mut out = Vec::new();
    let b = bound as i64;
    for ad in 1..=b {
        for d in [ad, -ad] {
            if d == 1 {
                continue;
            }
            if let Ok(f) = QuadraticField::new(d) {
                if f.discriminant().abs() <= b {
                    out.push(f);
                }
            }
        }
    }
    out.sort_by_key(|f| (f.discriminant().abs(), f.d()));
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    const B: u64 = 1_000_000;

    #[test]
    fn field_validation() {
        assert!(QuadraticField::new(12).is_err());
        assert!(QuadraticField::new(0).is_err());
        assert!(QuadraticField::new(1).is_err());
        assert!(QuadraticField::new(-4).is_err());
        assert_eq!(QuadraticField::new(-1).unwrap().discriminant(), -4);
        assert_eq!(QuadraticField::new(-3).unwrap().discriminant(), -3);
        assert_eq!(QuadraticField::new(5).unwrap().discriminant(), 5);
        assert_eq!(QuadraticField::new(2).unwrap().discriminant(), 8);
    }

    #[test]
    fn known_class_numbers() {
        let cases: &[(i64, u64)] = &[
            (-1, 1),
            (-2, 1),
            (-3, 1),
            (-5, 2),
            (-6, 2),
            (-23, 3),
            (-47, 5),
            (-30, 4),
            (2, 1),
            (3, 1),
            (5, 1),
            (10, 2),
            (15, 2),
            (79, 3),
        ];
        for &(d, h) in cases {
            let f = QuadraticField::new(d).unwrap();
            let (got, _) = f.class_number(B).unwrap();
            assert_eq!(got, BigInt::from(h), "h(Q(sqrt({})))", d);
        }
        // class group of Q(sqrt(-30)) is (Z/2)^2, of Q(sqrt(-47)) is Z/5
        let (_, g) = QuadraticField::new(-30).unwrap().class_number(B).unwrap();
        assert_eq!(g.invariant_factors(), &[BigInt::from(2), BigInt::from(2)]);
        let (_, g) = QuadraticField::new(-47).unwrap().class_number(B).unwrap();
        assert_eq!(g.invariant_factors(), &[BigInt::from(5)]);
    }

    #[test]
    fn class_number_bound_is_enforced() {
        let f = QuadraticField::new(-499).unwrap();
        assert!(f.class_number(100).is_err());
        assert!(f.class_number(1996).is_ok());
    }

    #[test]
    fn splitting_data() {
        let f = QuadraticField::new(-1).unwrap(); // disc -4
        let inf = f.splitting(&Place::Infinite).unwrap();
        assert_eq!((inf.e(), inf.f(), inf.g()), (2, 1, 1));
        assert_eq!(inf.local_degree(), 2);
        let p5 = f.splitting(&Place::Finite(5)).unwrap();
        assert_eq!((p5.e(), p5.f(), p5.g()), (1, 1, 2));
        let p3 = f.splitting(&Place::Finite(3)).unwrap();
        assert_eq!((p3.e(), p3.f(), p3.g()), (1, 2, 1));
        let p2 = f.splitting(&Place::Finite(2)).unwrap();
        assert_eq!((p2.e(), p2.f(), p2.g()), (2, 1, 1));
        assert!(f.splitting(&Place::Finite(6)).is_err());

        let f = QuadraticField::new(2).unwrap(); // disc 8
        let inf = f.splitting(&Place::Infinite).unwrap();
        assert_eq!((inf.e(), inf.f(), inf.g()), (1, 1, 2));
        assert_eq!(inf.local_degree(), 1);
        // 8 = 1 mod 7: 7 splits
        assert_eq!(f.split_kind(7).unwrap(), SplitKind::Split);
        assert_eq!(f.split_kind(3).unwrap(), SplitKind::Inert);
        // disc 17 = 1 mod 8: 2 splits
        assert_eq!(
            QuadraticField::new(17).unwrap().split_kind(2).unwrap(),
            SplitKind::Split
        );
        assert_eq!(
            QuadraticField::new(5).unwrap().split_kind(2).unwrap(),
            SplitKind::Inert
        );
    }

    #[test]
    fn s_class_numbers() {
        // the prime above 2 generates the class group of Q(sqrt(-5))
        let f = QuadraticField::new(-5).unwrap();
        assert_eq!(f.s_class_number(&[2], B).unwrap(), BigInt::one());
        assert_eq!(f.s_class_number(&[], B).unwrap(), BigInt::from(2));
        // 11 splits in Q(sqrt(-5)) (disc -20: -20 = 2^2 mod 11, so (disc|11)=1)
        // and its class also has order 2
        assert_eq!(f.ideal_class_order(2, B).unwrap(), 2);
        // inert prime above: class number unchanged
        let h = f.s_class_number(&[13], B).unwrap();
        assert_eq!(h, BigInt::from(2));

        let f = QuadraticField::new(-23).unwrap();
        assert_eq!(f.ideal_class_order(2, B).unwrap(), 3);
        assert_eq!(f.s_class_number(&[2], B).unwrap(), BigInt::one());

        // real: principal S-primes leave h unchanged
        let f = QuadraticField::new(2).unwrap();
        assert_eq!(f.s_class_number(&[7], B).unwrap(), BigInt::one());
        // real with h = 2 and a non-principal prime above 2: unsupported
        let f = QuadraticField::new(10).unwrap();
        assert!(f.s_class_number(&[2], B).is_err());
        // but the inert prime 7 is fine (disc 40: 40 = 5 mod 7, QR? 5^3 = 6 mod 7, inert)
        assert_eq!(f.s_class_number(&[7], B).unwrap(), BigInt::from(2));
    }

    #[test]
    fn ideal_class_order_rejects_inert_and_real() {
        let f = QuadraticField::new(-5).unwrap();
        assert!(f.ideal_class_order(13, B).is_err());
        assert!(QuadraticField::new(2).unwrap().ideal_class_order(7, B).is_err());
    }

    #[test]
    fn torus_class_numbers_for_hand_checked_fields() {
        use crate::formulas::{dual_torus_class_number, norm_torus_class_number};
        use num_rational::Ratio;

        // (d, S, expected norm-one h, expected dual h)
        let cases: &[(i64, &[i64], u64, u64)] = &[
            (-1, &[], 1, 1),
            (-5, &[], 1, 1),
            (2, &[], 1, 1),
            (-47, &[], 5, 5),
            (-1, &[5], 1, 1),
            (-1, &[2], 1, 1),
        ];
        for &(d, s, h_norm, h_dual) in cases {
            let inputs = QuadraticField::new(d).unwrap().torus_inputs(s, B).unwrap();
            let norm = norm_torus_class_number(&inputs).unwrap();
            assert!(norm.all_checks_agree(), "norm checks for d={}", d);
            assert_eq!(
                norm.class_number,
                Ratio::from_integer(BigInt::from(h_norm)),
                "norm-one class number for d={} S={:?}",
                d,
                s
            );
            let dual = dual_torus_class_number(&inputs).unwrap();
            assert!(dual.all_checks_agree(), "dual checks for d={}", d);
            assert_eq!(
                dual.class_number,
                Ratio::from_integer(BigInt::from(h_dual)),
                "dual class number for d={} S={:?}",
                d,
                s
            );
        }
    }

    #[test]
    fn herbrand_identity_on_oracle_inputs() {
        use crate::formulas::herbrand_identity;
        use num_rational::Ratio;

        let half = Ratio::new(BigInt::one(), BigInt::from(2));
        let one = Ratio::from_integer(BigInt::one());
        let cases: &[(i64, &[i64], Ratio<BigInt>)] = &[
            (2, &[], half.clone()),
            (-5, &[], one.clone()),
            (-1, &[5], one.clone()),
            (10, &[], half.clone()),
            (-23, &[2], one.clone()),
        ];
        for (d, s, expected) in cases {
            let inputs = QuadraticField::new(*d).unwrap().torus_inputs(s, B).unwrap();
            let (lhs, rhs) = herbrand_identity(&inputs).unwrap();
            assert_eq!(lhs, rhs, "identity sides for d={} S={:?}", d, s);
            assert_eq!(&lhs, expected, "herbrand quotient for d={} S={:?}", d, s);
        }
    }

    #[test]
    fn corpus_enumeration() {
        let fields = fields_with_disc_up_to(40);
        let ds: Vec<i64> = fields.iter().map(|f| f.d()).collect();
        // |disc| <= 40 allows d = 1 mod 4 up to |d| <= 40 and others to |4d| <= 40
        assert!(ds.contains(&-39) && ds.contains(&37) && ds.contains(&-10) && ds.contains(&10));
        assert!(!ds.contains(&-11) || QuadraticField::new(-11).unwrap().discriminant().abs() <= 40);
        assert!(!ds.contains(&11)); // disc 44 > 40
        for f in &fields {
            assert!(f.discriminant().abs() <= 40);
        }
    }
}
