//! Finite abelian groups recorded by their invariant factor chain.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Error;

/// Invariant factors d_1 | d_2 | ... with every d_i >= 2.  The empty chain is
/// the trivial group.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiniteAbelianGroup {
    factors: Vec<BigInt>,
}

impl FiniteAbelianGroup {
    pub fn trivial() -> FiniteAbelianGroup {
        FiniteAbelianGroup { factors: Vec::new() }
    }

    pub fn new(factors: Vec<BigInt>) -> Result<FiniteAbelianGroup, Error> {
        for i in 0..factors.len() {
            if factors[i] < BigInt::from(2) {
                return Err(Error::Structure(format!(
                    "invariant factor {} is {}, must be >= 2",
                    i, factors[i]
                )));
            }
            if i + 1 < factors.len()
                && !num_integer::Integer::is_multiple_of(&factors[i + 1], &factors[i])
            {
                return Err(Error::Structure(format!(
                    "invariant factors violate divisibility: {} does not divide {}",
                    factors[i],
                    factors[i + 1]
                )));
            }
        }
        Ok(FiniteAbelianGroup { factors })
    }

    /// Builds the group from an SNF diagonal, dropping trivial factors.
    /// A zero entry means the quotient has free rank and is rejected.
    pub fn from_diagonal(diag: &[BigInt]) -> Result<FiniteAbelianGroup, Error> {
        let mut factors = Vec::new();
        for d in diag {
            if d.is_zero() {
                return Err(Error::InfiniteQuotient);
            }
            if !d.is_one() {
                factors.push(d.clone());
            }
        }
        FiniteAbelianGroup::new(factors)
    }

    pub fn invariant_factors(&self) -> &[BigInt] {
        &self.factors
    }

    pub fn order(&self) -> BigInt {
        self.factors.iter().fold(BigInt::one(), |acc, d| acc * d)
    }

    pub fn is_trivial(&self) -> bool {
        self.factors.is_empty()
    }
}

/// Recovers the invariant factor chain of a finite abelian group from the
/// multiset of its element orders (one entry per group element, identity
/// included).  The order statistics determine the p-part partitions: the
/// number of elements of order dividing p^k is p^(sum of min(k, part)).
pub fn structure_from_element_orders(orders: &[BigInt]) -> Result<FiniteAbelianGroup, Error> {
    let n = BigInt::from(orders.len());
    if n.is_zero() {
        return Err(Error::Structure("no element orders given".into()));
    }
    if n.is_one() {
        return Ok(FiniteAbelianGroup::trivial());
    }
    let mut primes = Vec::new();
    {
        let mut rest = n.clone();
        let mut p = BigInt::from(2);
        while &p * &p <= rest {
            if num_integer::Integer::is_multiple_of(&rest, &p) {
                primes.push(p.clone());
                while num_integer::Integer::is_multiple_of(&rest, &p) {
                    rest /= &p;
                }
            }
            p += 1;
        }
        if rest > BigInt::one() {
            primes.push(rest);
        }
    }
    // parts_per_prime[i] = partition of the p_i-subgroup, largest part first
    let mut parts_per_prime = Vec::new();
    for p in &primes {
        let mut counts = Vec::new(); // counts[k-1] = #elements of order dividing p^k
        let mut pk = p.clone();
        loop {
            let c: usize = orders
                .iter()
                .filter(|o| num_integer::Integer::is_multiple_of(&pk, *o))
                .count();
            if let Some(&prev) = counts.last() {
                if c == prev {
                    break;
                }
            }
            counts.push(c);
            pk *= p;
        }
        let mut exps = vec![0usize];
        for c in &counts {
            let mut e = 0usize;
            let mut v = BigInt::one();
            while v < BigInt::from(*c) {
                v *= p;
                e += 1;
            }
            if v != BigInt::from(*c) {
                return Err(Error::Structure(format!(
                    "element order statistics are not those of an abelian group at prime {}",
                    p
                )));
            }
            exps.push(e);
        }
        // m_k = #parts >= k; parts of size exactly k number m_k - m_{k+1}
        let mut m = Vec::new();
        for k in 1..exps.len() {
            m.push(exps[k] - exps[k - 1]);
        }
        m.push(0);
        let mut parts = Vec::new();
        for k in (1..m.len()).rev() {
            if m[k - 1] < m[k] {
                return Err(Error::Structure(format!(
                    "element order statistics are not those of an abelian group at prime {}",
                    p
                )));
            }
            for _ in 0..(m[k - 1] - m[k]) {
                parts.push(k);
            }
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        parts_per_prime.push(parts);
    }
    let width = parts_per_prime.iter().map(|p| p.len()).max().unwrap_or(0);
    let mut factors = Vec::new();
    for i in 0..width {
        let mut d = BigInt::one();
        for (p, parts) in primes.iter().zip(&parts_per_prime) {
            if let Some(&e) = parts.get(i) {
                d *= p.pow(e as u32);
            }
        }
        factors.push(d);
    }
    factors.reverse();
    let g = FiniteAbelianGroup::new(factors)?;
    if g.order() != n {
        return Err(Error::Structure(
            "element order statistics do not multiply up to the group order".into(),
        ));
    }
    Ok(g)
}

impl std::fmt::Display for FiniteAbelianGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.factors.is_empty() {
            return write!(f, "trivial");
        }
        let parts: Vec<String> = self.factors.iter().map(|d| format!("Z/{}", d)).collect();
        write!(f, "{}", parts.join(" + "))
    }
}
