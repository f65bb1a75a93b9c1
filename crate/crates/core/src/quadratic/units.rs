//! S-unit groups of quadratic fields as explicit modules over Gal(L/Q).
//!
//! The module is written on a basis of free generators followed by one
//! torsion generator.  Free generators are the fundamental unit (real case)
//! and, per finite prime of S, either the prime itself, a generator of a
//! prime above it, or a generator of the smallest principal power of one.
//! Every relation is established by exact arithmetic in the ring of
//! integers; nothing comes from floating point.  Imaginary generators are
//! found by an exhaustive norm-equation scan, real ones by walking the prime
//! form into the principal cycle with the change of variables tracked.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::forms::{prime_form, principal_representation, ImaginaryClassGroup};
use super::pell::fundamental_unit;
use super::qint::{
    half_basis, recognize_pm_power, recognize_torsion, torsion_order, QInt,
};
use super::{QuadraticField, SplitKind};
use crate::error::Error;
use crate::mat::IntMat;
use crate::module::GModule;

#[derive(Debug)]
pub struct UnitModuleDescription {
    pub module: GModule,
    pub generator_labels: Vec<String>,
    pub norm_of_fundamental_unit: Option<i8>,
}

enum GenKind {
    FundamentalUnit,
    Rational,
    /// pi and conj(pi) for a split prime with a principal prime above it;
    /// the two basis slots are consecutive and swapped by conjugation.
    SplitPair,
    /// p together with alpha generating the k-th power of a prime above the
    /// split p; conj(alpha) = p^k / alpha.
    SplitPower(u64),
    /// generator of a self-conjugate principal prime: conj(alpha)/alpha is a
    /// unit, recorded as (-1)^m_tors-ish corrections; m_eps = 0 when
    /// imaginary and m_tors is then an exponent of the torsion generator.
    SelfConjugate { m_eps: i64, m_tors: i64 },
}

struct GenSlot {
    kind: GenKind,
    labels: Vec<String>,
}

/// Exhaustive search for x with N(x) = target > 0 in an imaginary field,
/// scanning the finitely many possible second coordinates.  `avoid_divisor`
/// excludes elements divisible by that rational prime.
fn imaginary_element_of_norm(
    d: i64,
    target: &BigInt,
    avoid_divisor: Option<i64>,
) -> Result<QInt, Error> {
    debug_assert!(d < 0 && target.is_positive());
    let dd = BigInt::from(d);
    let mut y = BigInt::zero();
    loop {
        let candidate = if half_basis(d) {
            // (2x + y)^2 = 4 N + d y^2
            let t = BigInt::from(4) * target + &dd * &y * &y;
            if t.is_negative() {
                break;
            }
            let u = t.sqrt();
            if &u * &u == t && (&u - &y).is_even() {
                let x = (&u - &y) / BigInt::from(2);
                Some(QInt::new(d, x, y.clone()))
            } else {
                None
            }
        } else {
            // x^2 = N + d y^2
            let t = target + &dd * &y * &y;
            if t.is_negative() {
                break;
            }
            let x = t.sqrt();
            if &x * &x == t {
                Some(QInt::new(d, x, y.clone()))
            } else {
                None
            }
        };
        if let Some(z) = candidate {
            let ok = match avoid_divisor {
                Some(p) => !z.divisible_by_int(&BigInt::from(p)),
                None => true,
            };
            if ok {
                debug_assert_eq!(&z.norm(), target);
                return Ok(z);
            }
        }
        y += 1;
    }
    Err(Error::Structure(format!(
        "no element of norm {} in Q(sqrt({})) though the class data promised one",
        target, d
    )))
}

/// Generator of a prime of norm +p or -p above p in a real field, or None
/// when the primes above p are not principal.
fn real_prime_generator(field: &QuadraticField, p: i64) -> Option<QInt> {
    let disc = BigInt::from(field.discriminant());
    let s = disc.sqrt();
    for sign in [1i64, -1] {
        let target = BigInt::from(sign * p);
        if let Some((x, y)) = principal_representation(&disc, &target, &s) {
            let z = QInt::new(field.d(), x, y);
            debug_assert_eq!(z.norm(), target);
            return Some(z);
        }
    }
    None
}

pub fn unit_module(
    field: &QuadraticField,
    s_primes: &[i64],
    bound: u64,
) -> Result<UnitModuleDescription, Error> {
    let d = field.d();
    let imaginary = field.is_imaginary();
    let w = torsion_order(d) as i64;
    let disc = BigInt::from(field.discriminant());

    let mut s: Vec<i64> = s_primes.to_vec();
    s.sort_unstable();
    s.dedup();
    for &p in &s {
        field.check_rational_prime(p)?;
    }
    if !s.is_empty() {
        field.check_disc_bound(bound)?;
    }

    let eps = if imaginary {
        None
    } else {
        Some(fundamental_unit(d)?)
    };

    let im_ctx = if imaginary && !s.is_empty() {
        Some(ImaginaryClassGroup::new(&disc)?)
    } else {
        None
    };

    let mut slots: Vec<GenSlot> = Vec::new();
    if eps.is_some() {
        slots.push(GenSlot {
            kind: GenKind::FundamentalUnit,
            labels: vec!["eps".into()],
        });
    }

    // independence bookkeeping for the imaginary class computation
    let mut prime_class_indices: Vec<usize> = Vec::new();
    let mut class_order_product: u64 = 1;

    for &p in &s {
        let kind = field.split_kind(p)?;
        if kind == SplitKind::Inert {
            slots.push(GenSlot {
                kind: GenKind::Rational,
                labels: vec![format!("{}", p)],
            });
            continue;
        }
        if let Some(ctx) = &im_ctx {
            let f = prime_form(&disc, p).expect("non-inert prime has a prime form");
            let idx = ctx.class_index(&f)?;
            let k = ctx.order_of(idx);
            if k > 1 {
                prime_class_indices.push(idx);
                class_order_product = class_order_product
                    .checked_mul(k)
                    .expect("class order overflow");
            }
            match kind {
                // a generator exists whenever the class order says so, and
                // only its existence enters the conjugation matrix
                SplitKind::Split if k == 1 => {
                    slots.push(GenSlot {
                        kind: GenKind::SplitPair,
                        labels: vec![format!("pi_{}", p), format!("pi_{}_bar", p)],
                    });
                }
                SplitKind::Split => {
                    slots.push(GenSlot {
                        kind: GenKind::SplitPower(k),
                        labels: vec![format!("{}", p), format!("alpha_{}", p)],
                    });
                }
                SplitKind::Ramified if k == 1 => {
                    let alpha = imaginary_element_of_norm(d, &BigInt::from(p), None)?;
                    let u = alpha
                        .conj()
                        .exact_div(&alpha)
                        .expect("conjugate quotient of a ramified generator is a unit");
                    let m = recognize_torsion(&u).ok_or_else(|| {
                        Error::Structure(format!(
                            "conjugate quotient {} is not a torsion unit",
                            u
                        ))
                    })?;
                    slots.push(GenSlot {
                        kind: GenKind::SelfConjugate { m_eps: 0, m_tors: m as i64 },
                        labels: vec![format!("alpha_{}", p)],
                    });
                }
                SplitKind::Ramified => {
                    debug_assert_eq!(k, 2);
                    slots.push(GenSlot {
                        kind: GenKind::Rational,
                        labels: vec![format!("{}", p)],
                    });
                }
                SplitKind::Inert => unreachable!(),
            }
        } else {
            // real field: supported exactly when the primes above p are
            // principal in the wide sense
            let alpha = real_prime_generator(field, p).ok_or_else(|| {
                Error::Quadratic(format!(
                    "the primes above {} are not principal in Q(sqrt({})); \
                     supply the S-data via a dataset entry",
                    p, d
                ))
            })?;
            match kind {
                SplitKind::Split => {
                    let _ = alpha;
                    slots.push(GenSlot {
                        kind: GenKind::SplitPair,
                        labels: vec![format!("pi_{}", p), format!("pi_{}_bar", p)],
                    });
                }
                SplitKind::Ramified => {
                    let u = alpha
                        .conj()
                        .exact_div(&alpha)
                        .expect("conjugate quotient of a ramified generator is a unit");
                    let (e, _) = eps.as_ref().expect("real field has a fundamental unit");
                    let (neg, m_eps) = recognize_pm_power(&u, e).ok_or_else(|| {
                        Error::Structure(format!(
                            "conjugate quotient {} is not +-eps^k within the exponent bound",
                            u
                        ))
                    })?;
                    slots.push(GenSlot {
                        kind: GenKind::SelfConjugate {
                            m_eps,
                            m_tors: if neg { 1 } else { 0 },
                        },
                        labels: vec![format!("alpha_{}", p)],
                    });
                }
                SplitKind::Inert => unreachable!(),
            }
        }
    }

    if let Some(ctx) = &im_ctx {
        if prime_class_indices.len() > 1 {
            let generated = ctx.subgroup_order(&prime_class_indices);
            if generated != class_order_product {
                return Err(Error::Quadratic(format!(
                    "the ideal classes of the S-primes satisfy extra relations \
                     (they generate a subgroup of order {}, expected {}); \
                     this S is unsupported for Q(sqrt({}))",
                    generated, class_order_product, d
                )));
            }
        }
    }

    // lay out basis positions: free generators in slot order, torsion last
    let mut labels: Vec<String> = Vec::new();
    let mut starts: Vec<usize> = Vec::new();
    for slot in &slots {
        starts.push(labels.len());
        labels.extend(slot.labels.iter().cloned());
    }
    let rank = labels.len();
    let dim = rank + 1;
    let t = rank;
    labels.push("zeta".into());

    let eps_pos = slots
        .iter()
        .position(|s| matches!(s.kind, GenKind::FundamentalUnit))
        .map(|i| starts[i]);

    let mut sigma = IntMat::zeros(dim, dim);
    for (slot, &pos) in slots.iter().zip(&starts) {
        match &slot.kind {
            GenKind::FundamentalUnit => {
                // sigma(eps) = N(eps)/eps
                sigma.set(pos, pos, BigInt::from(-1));
                let (_, n) = eps.as_ref().unwrap();
                if *n == -1 {
                    sigma.set(t, pos, BigInt::one());
                }
            }
            GenKind::Rational => {
                sigma.set(pos, pos, BigInt::one());
            }
            GenKind::SplitPair => {
                sigma.set(pos + 1, pos, BigInt::one());
                sigma.set(pos, pos + 1, BigInt::one());
            }
            GenKind::SplitPower(k) => {
                // conj(alpha) = p^k / alpha
                sigma.set(pos, pos, BigInt::one());
                sigma.set(pos, pos + 1, BigInt::from(*k));
                sigma.set(pos + 1, pos + 1, BigInt::from(-1));
            }
            GenKind::SelfConjugate { m_eps, m_tors } => {
                sigma.set(pos, pos, BigInt::one());
                if *m_eps != 0 {
                    let e = eps_pos.expect("eps exponent without a fundamental unit");
                    sigma.set(e, pos, BigInt::from(*m_eps));
                }
                if *m_tors != 0 {
                    sigma.set(t, pos, BigInt::from(*m_tors));
                }
            }
        }
    }
    // sigma(zeta) = zeta^{-1}
    sigma.set(t, t, BigInt::from(-1).mod_floor(&BigInt::from(w)));

    let group = field.galois_group();
    let module = GModule::from_generators(group, rank, vec![BigInt::from(w)], &[(1, sigma)])?;

    // every archimedean or S-place of L contributes one generator, minus one
    let places_of_l = if imaginary { 1 } else { 2 }
        + s.iter()
            .map(|&p| match field.split_kind(p).unwrap() {
                SplitKind::Split => 2,
                _ => 1,
            })
            .sum::<usize>();
    assert_eq!(
        rank,
        places_of_l - 1,
        "unit rank does not match the S-place count"
    );

    Ok(UnitModuleDescription {
        module,
        generator_labels: labels,
        norm_of_fundamental_unit: eps.map(|(_, n)| n),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    const B: u64 = 1_000_000;

    fn umod(d: i64, s: &[i64]) -> UnitModuleDescription {
        unit_module(&QuadraticField::new(d).unwrap(), s, B).unwrap()
    }

    fn col(m: &IntMat, j: usize) -> Vec<i64> {
        (0..m.rows())
            .map(|i| i64::try_from(m.get(i, j)).unwrap())
            .collect()
    }

    #[test]
    fn gaussian_units_no_primes() {
        let u = umod(-1, &[]);
        assert_eq!(u.module.rank(), 0);
        assert_eq!(u.module.torsion(), &[BigInt::from(4)]);
        assert_eq!(u.generator_labels, vec!["zeta"]);
        assert_eq!(u.norm_of_fundamental_unit, None);
        // conjugation inverts i: zeta -> zeta^3
        assert_eq!(col(u.module.action(1), 0), vec![3]);
    }

    #[test]
    fn gaussian_units_with_split_five() {
        let u = umod(-1, &[5]);
        assert_eq!(u.module.rank(), 2);
        assert_eq!(u.generator_labels, vec!["pi_5", "pi_5_bar", "zeta"]);
        let sigma = u.module.action(1);
        assert_eq!(col(sigma, 0), vec![0, 1, 0]);
        assert_eq!(col(sigma, 1), vec![1, 0, 0]);
        assert_eq!(col(sigma, 2), vec![0, 0, 3]);
    }

    #[test]
    fn ramified_two_with_nontrivial_class_gives_rational_slot() {
        // the prime above 2 in Q(sqrt(-5)) has class order 2, so the slot is 2 itself
        let u = umod(-5, &[2]);
        assert_eq!(u.module.rank(), 1);
        assert_eq!(u.generator_labels, vec!["2", "zeta"]);
        let sigma = u.module.action(1);
        assert_eq!(col(sigma, 0), vec![1, 0]);
        assert_eq!(col(sigma, 1), vec![0, 1]);
    }

    #[test]
    fn split_prime_with_class_order_two() {
        // 3 splits in Q(sqrt(-5)); its prime class has order two, so the
        // slots are 3 and a generator alpha of the squared prime
        let u = umod(-5, &[3]);
        assert_eq!(u.generator_labels, vec!["3", "alpha_3", "zeta"]);
        let sigma = u.module.action(1);
        assert_eq!(col(sigma, 0), vec![1, 0, 0]);
        assert_eq!(col(sigma, 1), vec![2, -1, 0]);
        assert_eq!(col(sigma, 2), vec![0, 0, 1]);
    }

    #[test]
    fn principal_ramified_prime_in_gaussians() {
        // (1 + i) generates the prime above 2; sigma multiplies it by -i
        let u = umod(-1, &[2]);
        assert_eq!(u.generator_labels, vec!["alpha_2", "zeta"]);
        let sigma = u.module.action(1);
        assert_eq!(col(sigma, 0), vec![1, 3]);
        assert_eq!(col(sigma, 1), vec![0, 3]);
    }

    #[test]
    fn eisenstein_ramified_three() {
        let u = umod(-3, &[3]);
        assert_eq!(u.generator_labels, vec!["alpha_3", "zeta"]);
        let sigma = u.module.action(1);
        // sigma(alpha)/alpha = zeta^5 for alpha = 1 + omega
        assert_eq!(col(sigma, 0), vec![1, 5]);
        assert_eq!(col(sigma, 1), vec![0, 5]);
    }

    #[test]
    fn real_units_negative_norm() {
        let u = umod(2, &[]);
        assert_eq!(u.module.rank(), 1);
        assert_eq!(u.module.torsion(), &[BigInt::from(2)]);
        assert_eq!(u.generator_labels, vec!["eps", "zeta"]);
        assert_eq!(u.norm_of_fundamental_unit, Some(-1));
        let sigma = u.module.action(1);
        // sigma(eps) = -1/eps
        assert_eq!(col(sigma, 0), vec![-1, 1]);
        assert_eq!(col(sigma, 1), vec![0, 1]);
    }

    #[test]
    fn real_units_positive_norm() {
        let u = umod(3, &[]);
        assert_eq!(u.norm_of_fundamental_unit, Some(1));
        let sigma = u.module.action(1);
        // sigma(eps) = 1/eps, no torsion correction
        assert_eq!(col(sigma, 0), vec![-1, 0]);
    }

    #[test]
    fn ramified_sqrt_two() {
        // the generator found is 2 - sqrt(2) = sqrt(2) / eps, whose
        // conjugate quotient is eps^2
        let u = umod(2, &[2]);
        assert_eq!(u.generator_labels, vec!["eps", "alpha_2", "zeta"]);
        let sigma = u.module.action(1);
        assert_eq!(col(sigma, 1), vec![2, 1, 0]);
    }

    #[test]
    fn ramified_sqrt_five() {
        let u = umod(5, &[5]);
        assert_eq!(u.generator_labels, vec!["eps", "alpha_5", "zeta"]);
        let sigma = u.module.action(1);
        assert_eq!(col(sigma, 1), vec![2, 1, 0]);
    }

    #[test]
    fn real_split_principal_prime() {
        // 7 splits in Q(sqrt 2) and 3 + sqrt 2 has norm 7
        let u = umod(2, &[7]);
        assert_eq!(u.generator_labels, vec!["eps", "pi_7", "pi_7_bar", "zeta"]);
        let sigma = u.module.action(1);
        assert_eq!(col(sigma, 1), vec![0, 0, 1, 0]);
        assert_eq!(col(sigma, 2), vec![0, 1, 0, 0]);
    }

    #[test]
    fn real_inert_prime() {
        let u = umod(2, &[3]);
        assert_eq!(u.generator_labels, vec!["eps", "3", "zeta"]);
        let sigma = u.module.action(1);
        assert_eq!(col(sigma, 1), vec![0, 1, 0]);
    }

    #[test]
    fn nonprincipal_real_prime_is_rejected() {
        let err = unit_module(&QuadraticField::new(10).unwrap(), &[2], B).unwrap_err();
        assert!(err.to_string().contains("dataset"), "{}", err);
    }

    #[test]
    fn dependent_prime_classes_are_rejected() {
        // in Q(sqrt(-5)) the primes above 2 and 3 fall in the same class,
        // so 1 + sqrt(-5) is an S-unit the slot basis would miss
        let err = unit_module(&QuadraticField::new(-5).unwrap(), &[2, 3], B).unwrap_err();
        assert!(err.to_string().contains("extra relations"), "{}", err);
    }

    #[test]
    fn independent_classes_are_accepted() {
        // Q(sqrt(-21)) has class group (Z/2)^2 with 2 and 3 landing in
        // different summands
        let u = umod(-21, &[2, 3]);
        assert_eq!(u.generator_labels, vec!["2", "3", "zeta"]);
    }

    #[test]
    fn inert_imaginary_prime() {
        let u = umod(-1, &[3]);
        assert_eq!(u.generator_labels, vec!["3", "zeta"]);
        let sigma = u.module.action(1);
        assert_eq!(col(sigma, 0), vec![1, 0]);
    }
}
