//! Fundamental unit of a real quadratic field by the continued fraction of
//! (P0 + sqrt(D))/Q0 with Q0 = 2, which expands sqrt(d) or (1+sqrt(d))/2
//! depending on d mod 4.  The convergents over one period of the purely
//! periodic tail give the unit; its norm is (-1)^(period length).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use std::collections::HashMap;

use super::qint::{half_basis, QInt};
use crate::error::Error;

fn isqrt64(n: i64) -> i64 {
    debug_assert!(n >= 0);
    let mut s = (n as f64).sqrt() as i64;
    while s > 0 && s * s > n {
        s -= 1;
    }
    while (s + 1) * (s + 1) <= n {
        s += 1;
    }
    s
}

/// Fundamental unit eps > 1 of Q(sqrt(d)) for squarefree d >= 2, together
/// with its norm (+1 or -1).
pub fn fundamental_unit(d: i64) -> Result<(QInt, i8), Error> {
    if d < 2 {
        return Err(Error::Quadratic(format!(
            "fundamental unit is defined for real fields only, got d = {}",
            d
        )));
    }
    let disc: i64 = if half_basis(d) { d } else { 4 * d };
    let s = isqrt64(disc);
    debug_assert!(s * s != disc, "d must be squarefree and > 1");

    // surd state: omega_k = (P_k + sqrt(disc)) / Q_k
    let mut p: i64 = if half_basis(d) { 1 } else { 0 };
    let mut q: i64 = 2;
    let mut seen: HashMap<(i64, i64), usize> = HashMap::new();
    let mut quotients: Vec<i64> = Vec::new();
    let (period_start, period_len) = loop {
        if let Some(&j) = seen.get(&(p, q)) {
            break (j, quotients.len() - j);
        }
        if seen.len() > 4 * (s as usize + 2) * (s as usize + 2) {
            return Err(Error::Quadratic(format!(
                "continued fraction of sqrt({}) failed to become periodic",
                d
            )));
        }
        seen.insert((p, q), quotients.len());
        debug_assert!(q > 0 && (disc - p * p) % q == 0);
        let a = (p + s).div_euclid(q);
        quotients.push(a);
        p = a * q - p;
        q = (disc - p * p) / q;
    };

    // re-derive the state at the start of the period
    let mut pj: i64 = if half_basis(d) { 1 } else { 0 };
    let mut qj: i64 = 2;
    for &a in &quotients[..period_start] {
        pj = a * qj - pj;
        qj = (disc - pj * pj) / qj;
    }

    // convergent denominators over one period of the purely periodic surd
    let mut q_prev = BigInt::zero(); // q_{-1}
    let mut q_curr = BigInt::one(); // q_{-2} shifted: after first step q_0 = 1
    let mut pp = pj;
    let mut qq = qj;
    for _ in 0..period_len {
        let a = (pp + s).div_euclid(qq);
        let next = BigInt::from(a) * &q_prev + &q_curr;
        q_curr = q_prev;
        q_prev = next;
        pp = a * qq - pp;
        qq = (disc - pp * pp) / qq;
    }
    debug_assert_eq!((pp, qq), (pj, qj));
    let (q_last, q_before) = (q_prev, q_curr);

    // eps = q_{l-1} * omega_j + q_{l-2} = (u + v sqrt(disc)) / 2
    let u2 = BigInt::from(2) * (&q_last * BigInt::from(pj) + &q_before * BigInt::from(qj));
    let v2 = BigInt::from(2) * &q_last;
    let (u, ru) = u2.div_rem(&BigInt::from(qj));
    let (v, rv) = v2.div_rem(&BigInt::from(qj));
    assert!(ru.is_zero() && rv.is_zero(), "period convergent not integral");
    assert!(u.is_positive() && v.is_positive());

    let eps = if half_basis(d) {
        // (u + v sqrt(d))/2 = (u - v)/2 + v w
        let (a, r) = (&u - &v).div_rem(&BigInt::from(2));
        assert!(r.is_zero(), "unit not integral in the half basis");
        QInt::new(d, a, v)
    } else {
        // sqrt(disc) = 2 sqrt(d): eps = u/2 + v sqrt(d)
        let (a, r) = u.div_rem(&BigInt::from(2));
        assert!(r.is_zero(), "unit not integral");
        QInt::new(d, a, v)
    };
    let n = eps.norm();
    let norm: i8 = if n.is_one() {
        1
    } else if n == BigInt::from(-1) {
        -1
    } else {
        return Err(Error::Quadratic(format!(
            "continued fraction produced a non-unit for d = {}",
            d
        )));
    };
    debug_assert_eq!(norm == -1, period_len % 2 == 1);
    Ok((eps, norm))
}
