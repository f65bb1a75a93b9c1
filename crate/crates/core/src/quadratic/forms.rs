//! Binary quadratic forms and form class groups.
//!
//! Negative discriminants use reduced positive-definite forms, one per
//! class.  Positive discriminants use cycles of reduced indefinite forms
//! under the rho neighbour step; a class is a cycle.  Composition is by
//! uniting concordant forms after transporting the second form to a first
//! coefficient coprime to the first form's.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::{BTreeMap, BTreeSet, VecDeque};

use crate::abelian::{structure_from_element_orders, FiniteAbelianGroup};
use crate::error::Error;

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Form {
    pub a: BigInt,
    pub b: BigInt,
    pub c: BigInt,
}

impl Form {
    pub fn new(a: BigInt, b: BigInt, c: BigInt) -> Form {
        Form { a, b, c }
    }

    pub fn from_i64(a: i64, b: i64, c: i64) -> Form {
        Form::new(BigInt::from(a), BigInt::from(b), BigInt::from(c))
    }

    pub fn disc(&self) -> BigInt {
        &self.b * &self.b - BigInt::from(4) * &self.a * &self.c
    }

    pub fn eval(&self, x: &BigInt, y: &BigInt) -> BigInt {
        &self.a * x * x + &self.b * x * y + &self.c * y * y
    }

    pub fn is_primitive(&self) -> bool {
        self.a.gcd(&self.b).gcd(&self.c).is_one()
    }

    /// Class inverse (a, -b, c).
    pub fn inverse(&self) -> Form {
        Form::new(self.a.clone(), -&self.b, self.c.clone())
    }
}

impl std::fmt::Display for Form {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "({}, {}, {})", self.a, self.b, self.c)
    }
}

pub fn principal_form(disc: &BigInt) -> Form {
    let b0 = disc.mod_floor(&BigInt::from(2));
    let c = (&b0 * &b0 - disc) / BigInt::from(4);
    Form::new(BigInt::one(), b0, c)
}

/// Reduction for negative discriminant; requires a > 0.
pub fn reduce_definite(f: &Form) -> Form {
    assert!(f.a.is_positive(), "definite reduction needs a > 0");
    let disc = f.disc();
    let mut a = f.a.clone();
    let mut b = f.b.clone();
    let mut c;
    loop {
        // normalize b into (-a, a]
        let two_a = BigInt::from(2) * &a;
        let r = (&a - &b).mod_floor(&two_a);
        b = &a - r;
        c = (&b * &b - &disc) / (BigInt::from(4) * &a);
        if a > c {
            std::mem::swap(&mut a, &mut c);
            b = -b;
            continue;
        }
        if a == c && b.is_negative() {
            b = -b;
        }
        return Form::new(a, b, c);
    }
}

/// All reduced primitive positive-definite forms of the given negative
/// discriminant, in lexicographic order.
pub fn reduced_definite_forms(disc: &BigInt) -> Vec<Form> {
    assert!(disc.is_negative());
    let mut out = Vec::new();
    let four = BigInt::from(4);
    let mut a = BigInt::one();
    while BigInt::from(3) * &a * &a <= -disc {
        let four_a = &four * &a;
        let mut b = BigInt::one() - &a;
        while b <= a {
            let num = &b * &b - disc;
            let (c, rem) = num.div_rem(&four_a);
            if rem.is_zero() {
                let keep = c >= a && !(c == a && b.is_negative());
                if keep {
                    let f = Form::new(a.clone(), b.clone(), c);
                    if f.is_primitive() {
                        out.push(f);
                    }
                }
            }
            b += 1;
        }
        a += 1;
    }
    out.sort();
    out
}

fn is_reduced_indefinite(f: &Form, disc: &BigInt) -> bool {
    if !f.b.is_positive() || &(&f.b * &f.b) >= disc {
        return false;
    }
    let t = BigInt::from(2) * f.a.abs();
    // need sqrt(disc) - b < 2|a| < sqrt(disc) + b, strict since disc is not a square
    let upper = {
        let s = &t + &f.b;
        &(&s * &s) > disc
    };
    let lower = if t <= f.b {
        true
    } else {
        let s = &t - &f.b;
        &(&s * &s) < disc
    };
    upper && lower
}

/// Neighbour step on indefinite forms: (a, b, c) -> (c, r, (r^2 - D)/(4c))
/// with r = -b mod 2|c| chosen in the standard window.
pub fn rho_step(f: &Form, disc: &BigInt, sqrt_floor: &BigInt) -> Form {
    let ca = f.c.abs();
    assert!(!ca.is_zero());
    let two_ca = BigInt::from(2) * &ca;
    let top = if ca <= *sqrt_floor { sqrt_floor.clone() } else { ca };
    let r = &top - (&top + &f.b).mod_floor(&two_ca);
    let num = &r * &r - disc;
    let den = BigInt::from(4) * &f.c;
    debug_assert!((&num % &den).is_zero());
    Form::new(f.c.clone(), r, num / den)
}

pub fn reduce_indefinite(f: &Form, disc: &BigInt, sqrt_floor: &BigInt) -> Form {
    let mut g = f.clone();
    for _ in 0..100_000 {
        if is_reduced_indefinite(&g, disc) {
            return g;
        }
        g = rho_step(&g, disc, sqrt_floor);
    }
    panic!("indefinite reduction failed to terminate for {}", f);
}

/// All reduced primitive indefinite forms of the given positive non-square
/// discriminant.
pub fn reduced_indefinite_forms(disc: &BigInt, sqrt_floor: &BigInt) -> Vec<Form> {
    assert!(disc.is_positive());
    let mut out = Vec::new();
    let parity = disc.mod_floor(&BigInt::from(2));
    let mut b = parity.clone();
    if b.is_zero() {
        b = BigInt::from(2);
    }
    while b <= *sqrt_floor {
        let m = (disc - &b * &b) / BigInt::from(4);
        let mut u = BigInt::one();
        while &u * &u <= m {
            if (&m % &u).is_zero() {
                let v = &m / &u;
                for (aa, cc) in [
                    (u.clone(), -v.clone()),
                    (-u.clone(), v.clone()),
                    (v.clone(), -u.clone()),
                    (-v.clone(), u.clone()),
                ] {
                    let f = Form::new(aa, b.clone(), cc);
                    if is_reduced_indefinite(&f, disc) && f.is_primitive() && !out.contains(&f) {
                        out.push(f);
                    }
                }
            }
            u += 1;
        }
        b += 2;
    }
    out.sort();
    out
}

/// Gauss composition of primitive forms of one discriminant.  The result is
/// not reduced.
pub fn compose_raw(f1: &Form, f2: &Form) -> Form {
    let disc = f1.disc();
    debug_assert_eq!(disc, f2.disc(), "composition across discriminants");
    // transport f2 to a form whose first coefficient is coprime to a1
    let (x, y) = find_coprime_representation(f2, &f1.a);
    let (g, s, t) = ext_gcd(&x, &y);
    debug_assert!(g.is_one());
    // complete (x, y) to an SL2 matrix [[x, m], [y, n]] with x n - y m = 1
    let n = s;
    let m = -t;
    let a2p = f2.eval(&x, &y);
    let b2p = BigInt::from(2) * &f2.a * &x * &m
        + &f2.b * (&x * &n + &m * &y)
        + BigInt::from(2) * &f2.c * &y * &n;
    debug_assert_eq!(&b2p * &b2p - BigInt::from(4) * &a2p * f2.eval(&m, &n), disc);

    // B = b1 mod 2a1, B = b2p mod 2a2p; the moduli are coprime up to the
    // shared factor 2 and b1, b2p share the parity of the discriminant
    let k = (&b2p - &f1.b) / BigInt::from(2);
    let a2p_abs = a2p.abs();
    let t = if a2p_abs.is_one() {
        BigInt::zero()
    } else {
        let inv = mod_inverse(&f1.a, &a2p_abs);
        (k * inv).mod_floor(&a2p_abs)
    };
    let bb = &f1.b + BigInt::from(2) * &f1.a * &t;
    let a3 = &f1.a * &a2p;
    let num = &bb * &bb - &disc;
    let den = BigInt::from(4) * &a3;
    debug_assert!((&num % &den).is_zero());
    Form::new(a3, bb, num / den)
}

/// Smallest primitive (x, y) in an expanding box with f(x, y) nonzero and
/// coprime to n.
fn find_coprime_representation(f: &Form, n: &BigInt) -> (BigInt, BigInt) {
    let mut bound: i64 = 1;
    loop {
        for xi in -bound..=bound {
            for yi in -bound..=bound {
                if xi.abs() != bound && yi.abs() != bound {
                    continue; // interior already tried
                }
                if num_integer::gcd(xi, yi) != 1 {
                    continue;
                }
                let x = BigInt::from(xi);
                let y = BigInt::from(yi);
                let v = f.eval(&x, &y);
                if !v.is_zero() && v.gcd(n).is_one() {
                    return (x, y);
                }
            }
        }
        bound += 1;
        assert!(bound < 10_000, "no representation coprime to {} found", n);
    }
}

fn ext_gcd(a: &BigInt, b: &BigInt) -> (BigInt, BigInt, BigInt) {
    let e = a.extended_gcd(b);
    (e.gcd, e.x, e.y)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    let (g, x, _) = ext_gcd(&a.mod_floor(m), m);
    assert!(g.is_one(), "mod_inverse of non-unit");
    x.mod_floor(m)
}

fn divisors_sorted(n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut u = 1;
    while u * u <= n {
        if n % u == 0 {
            out.push(u);
            out.push(n / u);
        }
        u += 1;
    }
    out.sort_unstable();
    out.dedup();
    out
}

/// Class group of a negative discriminant, with one reduced form per class.
pub struct ImaginaryClassGroup {
    disc: BigInt,
    forms: Vec<Form>,
    index: BTreeMap<Form, usize>,
    principal: usize,
}

impl ImaginaryClassGroup {
    pub fn new(disc: &BigInt) -> Result<ImaginaryClassGroup, Error> {
        if !disc.is_negative() {
            return Err(Error::Quadratic(format!(
                "expected a negative discriminant, got {}",
                disc
            )));
        }
        let forms = reduced_definite_forms(disc);
        let index: BTreeMap<Form, usize> = forms
            .iter()
            .enumerate()
            .map(|(i, f)| (f.clone(), i))
            .collect();
        let p = reduce_definite(&principal_form(disc));
        let principal = *index
            .get(&p)
            .ok_or_else(|| Error::Quadratic("principal form missing from enumeration".into()))?;
        Ok(ImaginaryClassGroup {
            disc: disc.clone(),
            forms,
            index,
            principal,
        })
    }

    pub fn h(&self) -> BigInt {
        BigInt::from(self.forms.len())
    }

    pub fn forms(&self) -> &[Form] {
        &self.forms
    }

    pub fn principal_index(&self) -> usize {
        self.principal
    }

    pub fn class_index(&self, f: &Form) -> Result<usize, Error> {
        let r = reduce_definite(f);
        self.index.get(&r).copied().ok_or_else(|| {
            Error::Quadratic(format!("form {} is not primitive of discriminant {}", f, self.disc))
        })
    }

    pub fn mul(&self, i: usize, j: usize) -> usize {
        let f = compose_raw(&self.forms[i], &self.forms[j]);
        self.index[&reduce_definite(&f)]
    }

    pub fn pow(&self, i: usize, n: u64) -> usize {
        let mut acc = self.principal;
        let mut base = i;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn order_of(&self, i: usize) -> u64 {
        let h = self.forms.len() as u64;
        for m in divisors_sorted(h) {
            if self.pow(i, m) == self.principal {
                return m;
            }
        }
        unreachable!("element order must divide the group order");
    }

    /// Order of the subgroup generated by the given classes.
    pub fn subgroup_order(&self, gens: &[usize]) -> u64 {
        let mut seen = BTreeSet::new();
        seen.insert(self.principal);
        let mut queue = VecDeque::from([self.principal]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.len() as u64
    }

    pub fn structure(&self) -> Result<FiniteAbelianGroup, Error> {
        let orders: Vec<BigInt> = (0..self.forms.len())
            .map(|i| BigInt::from(self.order_of(i)))
            .collect();
        structure_from_element_orders(&orders)
    }
}

/// Narrow class group of a positive discriminant as rho-cycles of reduced
/// forms, plus the wide quotient by the class of (-1, b, c).
pub struct RealClassGroup {
    disc: BigInt,
    sqrt_floor: BigInt,
    cycles: Vec<Vec<Form>>,
    index: BTreeMap<Form, usize>,
    principal: usize,
    minus: usize,
}

impl RealClassGroup {
    pub fn new(disc: &BigInt) -> Result<RealClassGroup, Error> {
        if !disc.is_positive() {
            return Err(Error::Quadratic(format!(
                "expected a positive discriminant, got {}",
                disc
            )));
        }
        let sqrt_floor = disc.sqrt();
        if &(&sqrt_floor * &sqrt_floor) == disc {
            return Err(Error::Quadratic(format!("discriminant {} is a square", disc)));
        }
        let all = reduced_indefinite_forms(disc, &sqrt_floor);
        let mut index: BTreeMap<Form, usize> = BTreeMap::new();
        let mut cycles: Vec<Vec<Form>> = Vec::new();
        for f in &all {
            if index.contains_key(f) {
                continue;
            }
            let id = cycles.len();
            let mut cyc = Vec::new();
            let mut g = f.clone();
            loop {
                assert!(
                    index.insert(g.clone(), id).is_none(),
                    "rho orbits are not disjoint"
                );
                cyc.push(g.clone());
                g = rho_step(&g, disc, &sqrt_floor);
                if g == *f {
                    break;
                }
            }
            cycles.push(cyc);
        }
        let p = reduce_indefinite(&principal_form(disc), disc, &sqrt_floor);
        let principal = *index
            .get(&p)
            .ok_or_else(|| Error::Quadratic("principal form missing from enumeration".into()))?;
        // class of norm -1 ideals: (-1, b0, (disc - b0^2)/4)
        let parity = disc.mod_floor(&BigInt::from(2));
        let b0 = if sqrt_floor.mod_floor(&BigInt::from(2)) == parity {
            sqrt_floor.clone()
        } else {
            &sqrt_floor - 1
        };
        let c0 = (disc - &b0 * &b0) / BigInt::from(4);
        let mf = Form::new(BigInt::from(-1), b0, c0);
        let mr = reduce_indefinite(&mf, disc, &sqrt_floor);
        let minus = *index
            .get(&mr)
            .ok_or_else(|| Error::Quadratic("(-1, b, c) class missing from enumeration".into()))?;
        Ok(RealClassGroup {
            disc: disc.clone(),
            sqrt_floor,
            cycles,
            index,
            principal,
            minus,
        })
    }

    pub fn h_narrow(&self) -> u64 {
        self.cycles.len() as u64
    }

    /// True when the fundamental unit has norm -1 (the principal and
    /// (-1,b,c) cycles coincide).
    pub fn negative_pell(&self) -> bool {
        self.principal == self.minus
    }

    pub fn h_wide(&self) -> u64 {
        if self.negative_pell() {
            self.h_narrow()
        } else {
            debug_assert_eq!(self.h_narrow() % 2, 0);
            self.h_narrow() / 2
        }
    }

    pub fn principal_index(&self) -> usize {
        self.principal
    }

    pub fn class_index(&self, f: &Form) -> Result<usize, Error> {
        let r = reduce_indefinite(f, &self.disc, &self.sqrt_floor);
        self.index.get(&r).copied().ok_or_else(|| {
            Error::Quadratic(format!("form {} is not primitive of discriminant {}", f, self.disc))
        })
    }

    pub fn narrow_mul(&self, i: usize, j: usize) -> usize {
        let f = compose_raw(&self.cycles[i][0], &self.cycles[j][0]);
        self.index[&reduce_indefinite(&f, &self.disc, &self.sqrt_floor)]
    }

    pub fn narrow_pow(&self, i: usize, n: u64) -> usize {
        let mut acc = self.principal;
        let mut base = i;
        let mut n = n;
        while n > 0 {
            if n & 1 == 1 {
                acc = self.narrow_mul(acc, base);
            }
            base = self.narrow_mul(base, base);
            n >>= 1;
        }
        acc
    }

    pub fn is_wide_principal(&self, i: usize) -> bool {
        i == self.principal || i == self.minus
    }

    fn wide_key(&self, i: usize) -> usize {
        i.min(self.narrow_mul(i, self.minus))
    }

    pub fn wide_order(&self, i: usize) -> u64 {
        for m in divisors_sorted(self.h_wide()) {
            if self.is_wide_principal(self.narrow_pow(i, m)) {
                return m;
            }
        }
        unreachable!("element order must divide the group order");
    }

    pub fn wide_subgroup_order(&self, gens: &[usize]) -> u64 {
        let start = self.wide_key(self.principal);
        let mut seen = BTreeSet::new();
        seen.insert(start);
        let mut queue = VecDeque::from([start]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.wide_key(self.narrow_mul(x, g));
                if seen.insert(y) {
                    queue.push_back(y);
                }
            }
        }
        seen.len() as u64
    }

    pub fn wide_structure(&self) -> Result<FiniteAbelianGroup, Error> {
        let mut reps = BTreeSet::new();
        for i in 0..self.cycles.len() {
            reps.insert(self.wide_key(i));
        }
        let orders: Vec<BigInt> = reps
            .iter()
            .map(|&i| BigInt::from(self.wide_order(i)))
            .collect();
        structure_from_element_orders(&orders)
    }
}

#[derive(Clone, Debug)]
struct M2 {
    a: BigInt,
    b: BigInt,
    c: BigInt,
    d: BigInt,
}

impl M2 {
    fn identity() -> M2 {
        M2 {
            a: BigInt::one(),
            b: BigInt::zero(),
            c: BigInt::zero(),
            d: BigInt::one(),
        }
    }

    fn mul(&self, o: &M2) -> M2 {
        M2 {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    /// Inverse of a determinant-one matrix.
    fn inv(&self) -> M2 {
        debug_assert!((&self.a * &self.d - &self.b * &self.c).is_one());
        M2 {
            a: self.d.clone(),
            b: -&self.b,
            c: -&self.c,
            d: self.a.clone(),
        }
    }

    /// rho acts by the substitution [[0, -1], [1, m]].
    fn rho(m: BigInt) -> M2 {
        M2 {
            a: BigInt::zero(),
            b: BigInt::from(-1),
            c: BigInt::one(),
            d: m,
        }
    }
}

fn rho_step_with_m(f: &Form, disc: &BigInt, sqrt_floor: &BigInt) -> (Form, BigInt) {
    let g = rho_step(f, disc, sqrt_floor);
    let m = (&f.b + &g.b) / (BigInt::from(2) * &f.c);
    debug_assert_eq!(&f.b + &g.b, &m * BigInt::from(2) * &f.c);
    (g, m)
}

fn reduce_indefinite_with_transform(
    f: &Form,
    disc: &BigInt,
    sqrt_floor: &BigInt,
) -> (Form, M2) {
    let mut g = f.clone();
    let mut t = M2::identity();
    for _ in 0..100_000 {
        if is_reduced_indefinite(&g, disc) {
            return (g, t);
        }
        let (next, m) = rho_step_with_m(&g, disc, sqrt_floor);
        t = t.mul(&M2::rho(m));
        g = next;
    }
    panic!("indefinite reduction failed to terminate for {}", f);
}

/// For an indefinite discriminant, finds primitive (x, y) with
/// principal_form(disc)(x, y) = target (a prime up to sign), or None when
/// the class of (target, b, c) is not the principal cycle.  This is exact:
/// the forms of first coefficient target are walked into reduced position
/// and compared against the principal cycle, tracking the SL2 change of
/// variables throughout.
pub fn principal_representation(
    disc: &BigInt,
    target: &BigInt,
    sqrt_floor: &BigInt,
) -> Option<(BigInt, BigInt)> {
    debug_assert!(disc.is_positive());
    let ta = target.abs();
    let four_t = BigInt::from(4) * &ta;
    let parity = disc.mod_floor(&BigInt::from(2));
    let mut b = parity;
    let mut seed = None;
    while b < BigInt::from(2) * &ta {
        let num = &b * &b - disc;
        if (&num % &four_t).is_zero() {
            let c = num / (BigInt::from(4) * target);
            let f = Form::new(target.clone(), b.clone(), c);
            debug_assert_eq!(&f.disc(), disc);
            if f.is_primitive() {
                seed = Some(f);
                break;
            }
        }
        b += 2;
    }
    let g = seed?;
    let (r0, m0) = reduce_indefinite_with_transform(&principal_form(disc), disc, sqrt_floor);
    let (mut cur, mut acc) = reduce_indefinite_with_transform(&g, disc, sqrt_floor);
    let start = cur.clone();
    loop {
        if cur == r0 {
            // g composed with acc equals r0 equals principal composed with m0
            let total = m0.mul(&acc.inv());
            debug_assert_eq!(principal_form(disc).eval(&total.a, &total.c), *target);
            return Some((total.a, total.c));
        }
        let (next, m) = rho_step_with_m(&cur, disc, sqrt_floor);
        acc = acc.mul(&M2::rho(m));
        cur = next;
        if cur == start {
            return None;
        }
    }
}

/// A form (p, b, c) of the given discriminant, when p is not inert.
pub fn prime_form(disc: &BigInt, p: i64) -> Option<Form> {
    let pp = BigInt::from(p);
    let four_p = BigInt::from(4) * &pp;
    let parity = disc.mod_floor(&BigInt::from(2));
    let mut b = parity;
    while b < BigInt::from(2) * &pp {
        let num = &b * &b - disc;
        if (&num % &four_p).is_zero() {
            let f = Form::new(pp.clone(), b.clone(), num / &four_p);
            if f.is_primitive() {
                return Some(f);
            }
        }
        b += 2;
    }
    None
}
