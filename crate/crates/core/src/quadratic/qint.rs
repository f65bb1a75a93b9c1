//! Exact arithmetic in the ring of integers of Q(sqrt(d)).
//!
//! Elements are written a + b*w over the integral basis {1, w}, where
//! w = sqrt(d) for d = 2, 3 mod 4 and w = (1 + sqrt(d))/2 for d = 1 mod 4.
//! d is carried inside each value so mixed-field operations panic loudly
//! instead of silently computing garbage.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QInt {
    d: i64,
    a: BigInt,
    b: BigInt,
}

pub fn half_basis(d: i64) -> bool {
    d.rem_euclid(4) == 1
}

impl QInt {
    pub fn new(d: i64, a: BigInt, b: BigInt) -> QInt {
        QInt { d, a, b }
    }

    pub fn from_int(d: i64, n: i64) -> QInt {
        QInt { d, a: BigInt::from(n), b: BigInt::zero() }
    }

    pub fn one(d: i64) -> QInt {
        QInt::from_int(d, 1)
    }

    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn a(&self) -> &BigInt {
        &self.a
    }

    pub fn b(&self) -> &BigInt {
        &self.b
    }

    pub fn is_one(&self) -> bool {
        self.a.is_one() && self.b.is_zero()
    }

    pub fn is_neg_one(&self) -> bool {
        self.a == BigInt::from(-1) && self.b.is_zero()
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn neg(&self) -> QInt {
        QInt { d: self.d, a: -&self.a, b: -&self.b }
    }

    pub fn mul(&self, other: &QInt) -> QInt {
        assert_eq!(self.d, other.d, "mixed-field multiplication");
        let (a1, b1, a2, b2) = (&self.a, &self.b, &other.a, &other.b);
        if half_basis(self.d) {
            // w^2 = w + (d-1)/4
            let m = BigInt::from((self.d - 1) / 4);
            QInt {
                d: self.d,
                a: a1 * a2 + b1 * b2 * &m,
                b: a1 * b2 + b1 * a2 + b1 * b2,
            }
        } else {
            // w^2 = d
            QInt {
                d: self.d,
                a: a1 * a2 + b1 * b2 * BigInt::from(self.d),
                b: a1 * b2 + b1 * a2,
            }
        }
    }

    pub fn conj(&self) -> QInt {
        if half_basis(self.d) {
            // w -> 1 - w
            QInt { d: self.d, a: &self.a + &self.b, b: -&self.b }
        } else {
            QInt { d: self.d, a: self.a.clone(), b: -&self.b }
        }
    }

    pub fn norm(&self) -> BigInt {
        let t = self.mul(&self.conj());
        debug_assert!(t.b.is_zero());
        t.a
    }

    /// Exact quotient self/other in the ring of integers, when it exists.
    pub fn exact_div(&self, other: &QInt) -> Option<QInt> {
        assert_eq!(self.d, other.d, "mixed-field division");
        let n = other.norm();
        if n.is_zero() {
            return None;
        }
        let t = self.mul(&other.conj());
        let (qa, ra) = t.a.div_rem(&n);
        let (qb, rb) = t.b.div_rem(&n);
        if ra.is_zero() && rb.is_zero() {
            Some(QInt { d: self.d, a: qa, b: qb })
        } else {
            None
        }
    }

    /// Inverse of a unit (norm +1 or -1).
    pub fn unit_inverse(&self) -> QInt {
        let n = self.norm();
        let c = self.conj();
        if n.is_one() {
            c
        } else {
            assert!(n == BigInt::from(-1), "unit_inverse of a non-unit");
            c.neg()
        }
    }

    pub fn divisible_by_int(&self, n: &BigInt) -> bool {
        !n.is_zero()
            && self.a.is_multiple_of(n)
            && self.b.is_multiple_of(n)
    }
}

impl std::fmt::Display for QInt {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if half_basis(self.d) {
            let two_a_plus_b = BigInt::from(2) * &self.a + &self.b;
            write!(f, "({} + {}*sqrt({}))/2", two_a_plus_b, self.b, self.d)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

/// Order of the torsion unit group of O_{Q(sqrt(d))}.
pub fn torsion_order(d: i64) -> u64 {
    match d {
        -1 => 4,
        -3 => 6,
        _ => 2,
    }
}

/// Canonical generator of the torsion units: i for d = -1, a primitive sixth
/// root for d = -3, and -1 otherwise.
pub fn torsion_generator(d: i64) -> QInt {
    match d {
        -1 => QInt::new(d, BigInt::zero(), BigInt::one()),
        -3 => QInt::new(d, BigInt::zero(), BigInt::one()),
        _ => QInt::from_int(d, -1),
    }
}

/// Writes u as zeta^m for the canonical torsion generator zeta, if it is a
/// torsion unit.
pub fn recognize_torsion(u: &QInt) -> Option<u64> {
    let zeta = torsion_generator(u.d());
    let w = torsion_order(u.d());
    let mut t = QInt::one(u.d());
    for m in 0..w {
        if &t == u {
            return Some(m);
        }
        t = t.mul(&zeta);
    }
    None
}

/// Writes u as (-1)^s * eps^k with |k| bounded, by exact trial
/// multiplication.  Returns (s, k) on success.
pub fn recognize_pm_power(u: &QInt, eps: &QInt) -> Option<(bool, i64)> {
    const CAP: i64 = 64;
    let mut t = QInt::one(u.d());
    for k in 0..=CAP {
        if &t == u {
            return Some((false, k));
        }
        if t.neg() == *u {
            return Some((true, k));
        }
        t = t.mul(eps);
    }
    let inv = eps.unit_inverse();
    let mut t = inv.clone();
    for k in 1..=CAP {
        if &t == u {
            return Some((false, -k));
        }
        if t.neg() == *u {
            return Some((true, -k));
        }
        t = t.mul(&inv);
    }
    None
}
