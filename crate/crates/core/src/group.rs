//! Finite groups as explicit multiplication tables.
//!
//! Element 0 is always the identity.  Groups built from permutations get a
//! deterministic element order: breadth-first closure from the identity with
//! generators applied in input order.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::abelian::FiniteAbelianGroup;
use crate::error::Error;
use crate::presentation::{subquotient, subquotient_structure, Presentation};

/// Groups beyond this order are rejected up front; the cochain complexes
/// downstream grow like |G|^3 and nothing in scope needs larger inputs.
pub const MAX_GROUP_ORDER: usize = 1024;

#[derive(Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    n: usize,
    table: Vec<usize>,
    inv: Vec<usize>,
}

impl FiniteGroup {
    pub fn from_table(rows: &[Vec<usize>]) -> Result<FiniteGroup, Error> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::Group("empty multiplication table".into()));
        }
        if n > MAX_GROUP_ORDER {
            return Err(Error::Group(format!(
                "order {} exceeds the supported bound {}",
                n, MAX_GROUP_ORDER
            )));
        }
        let mut table = Vec::with_capacity(n * n);
        for row in rows {
            if row.len() != n {
                return Err(Error::Group("multiplication table is not square".into()));
            }
            for &v in row {
                if v >= n {
                    return Err(Error::Group(format!("table entry {} out of range", v)));
                }
                table.push(v);
            }
        }
        for i in 0..n {
            if table[i] != i || table[i * n] != i {
                return Err(Error::Group("element 0 is not a two-sided identity".into()));
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    let ab_c = table[table[a * n + b] * n + c];
                    let a_bc = table[a * n + table[b * n + c]];
                    if ab_c != a_bc {
                        return Err(Error::Group(format!(
                            "associativity fails at ({}, {}, {})",
                            a, b, c
                        )));
                    }
                }
            }
        }
        let mut inv = vec![usize::MAX; n];
        for g in 0..n {
            for h in 0..n {
                if table[g * n + h] == 0 && table[h * n + g] == 0 {
                    inv[g] = h;
                    break;
                }
            }
            if inv[g] == usize::MAX {
                return Err(Error::Group(format!("element {} has no two-sided inverse", g)));
            }
        }
        Ok(FiniteGroup { n, table, inv })
    }

    /// Closure of permutation generators on {0, .., degree-1} under
    /// composition.  (p*q)(i) = p[q[i]]; new elements are discovered
    /// breadth-first as (known element) * (generator), so the element order
    /// and hence the table are deterministic.
    pub fn from_permutations(degree: usize, gens: &[Vec<usize>]) -> Result<FiniteGroup, Error> {
        if degree == 0 {
            return Err(Error::Group("permutation domain is empty".into()));
        }
        for (k, p) in gens.iter().enumerate() {
            if p.len() != degree {
                return Err(Error::Group(format!(
                    "generator {} acts on {} points, expected {}",
                    k,
                    p.len(),
                    degree
                )));
            }
            let mut seen = vec![false; degree];
            for &v in p {
                if v >= degree || seen[v] {
                    return Err(Error::Group(format!("generator {} is not a bijection", k)));
                }
                seen[v] = true;
            }
        }
        let id: Vec<usize> = (0..degree).collect();
        let mut elements: Vec<Vec<usize>> = vec![id.clone()];
        let mut index: std::collections::HashMap<Vec<usize>, usize> = Default::default();
        index.insert(id, 0);
        let mut head = 0;
        while head < elements.len() {
            let cur = elements[head].clone();
            for g in gens {
                let prod: Vec<usize> = (0..degree).map(|i| cur[g[i]]).collect();
                if !index.contains_key(&prod) {
                    if elements.len() >= MAX_GROUP_ORDER {
                        return Err(Error::Group(format!(
                            "closure exceeds the supported order bound {}",
                            MAX_GROUP_ORDER
                        )));
                    }
                    index.insert(prod.clone(), elements.len());
                    elements.push(prod);
                }
            }
            head += 1;
        }
        let n = elements.len();
        let mut rows = vec![vec![0usize; n]; n];
        for a in 0..n {
            for b in 0..n {
                let prod: Vec<usize> = (0..degree).map(|i| elements[a][elements[b][i]]).collect();
                rows[a][b] = index[&prod];
            }
        }
        FiniteGroup::from_table(&rows)
    }

    pub fn cyclic(n: usize) -> FiniteGroup {
        assert!(n >= 1 && n <= MAX_GROUP_ORDER);
        let rows: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        FiniteGroup::from_table(&rows).expect("cyclic table is a group")
    }

    pub fn klein_four() -> FiniteGroup {
        let rows: Vec<Vec<usize>> = (0..4).map(|i| (0..4).map(|j| i ^ j).collect()).collect();
        FiniteGroup::from_table(&rows).expect("klein table is a group")
    }

    pub fn symmetric_3() -> FiniteGroup {
        FiniteGroup::from_permutations(3, &[vec![1, 0, 2], vec![1, 2, 0]])
            .expect("S3 generators are permutations")
    }

    pub fn order(&self) -> usize {
        self.n
    }

    pub fn mul(&self, g: usize, h: usize) -> usize {
        self.table[g * self.n + h]
    }

    pub fn inv(&self, g: usize) -> usize {
        self.inv[g]
    }

    pub fn elements(&self) -> impl Iterator<Item = usize> {
        0..self.n
    }

    pub fn order_of(&self, g: usize) -> usize {
        let mut x = g;
        let mut k = 1;
        while x != 0 {
            x = self.mul(x, g);
            k += 1;
        }
        k
    }

    pub fn is_abelian(&self) -> bool {
        for a in 0..self.n {
            for b in 0..a {
                if self.mul(a, b) != self.mul(b, a) {
                    return false;
                }
            }
        }
        true
    }

    /// Smallest element of full order, if any.
    pub fn cyclic_generator(&self) -> Option<usize> {
        (0..self.n).find(|&g| self.order_of(g) == self.n)
    }

    pub fn is_cyclic(&self) -> bool {
        self.cyclic_generator().is_some()
    }
}

impl std::fmt::Debug for FiniteGroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "FiniteGroup(order {})", self.n)
    }
}

/// A subgroup, stored as the sorted list of its elements in the parent.
#[derive(Clone, PartialEq, Eq)]
pub struct Subgroup {
    parent: FiniteGroup,
    elements: Vec<usize>,
}

impl Subgroup {
    pub fn new(parent: &FiniteGroup, elements: Vec<usize>) -> Result<Subgroup, Error> {
        let mut elems = elements;
        elems.sort_unstable();
        elems.dedup();
        if elems.first() != Some(&0) {
            return Err(Error::Group("subgroup must contain the identity".into()));
        }
        for &a in &elems {
            if a >= parent.order() {
                return Err(Error::Group(format!("element {} out of range", a)));
            }
            if elems.binary_search(&parent.inv(a)).is_err() {
                return Err(Error::Group(format!("subgroup not closed under inverse of {}", a)));
            }
            for &b in &elems {
                if elems.binary_search(&parent.mul(a, b)).is_err() {
                    return Err(Error::Group(format!(
                        "subgroup not closed under product {} * {}",
                        a, b
                    )));
                }
            }
        }
        Ok(Subgroup { parent: parent.clone(), elements: elems })
    }

    pub fn parent(&self) -> &FiniteGroup {
        &self.parent
    }

    pub fn elements(&self) -> &[usize] {
        &self.elements
    }

    pub fn order(&self) -> usize {
        self.elements.len()
    }

    pub fn contains(&self, g: usize) -> bool {
        self.elements.binary_search(&g).is_ok()
    }

    pub fn is_normal(&self) -> bool {
        for g in self.parent.elements() {
            let gi = self.parent.inv(g);
            for &h in &self.elements {
                if !self.contains(self.parent.mul(self.parent.mul(g, h), gi)) {
                    return false;
                }
            }
        }
        true
    }
}

impl std::fmt::Debug for Subgroup {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "Subgroup{:?}", self.elements)
    }
}

pub fn trivial_subgroup(g: &FiniteGroup) -> Subgroup {
    Subgroup::new(g, vec![0]).expect("trivial subgroup")
}

pub fn full_subgroup(g: &FiniteGroup) -> Subgroup {
    Subgroup::new(g, g.elements().collect()).expect("full subgroup")
}

pub fn subgroup_generated(g: &FiniteGroup, gens: &[usize]) -> Result<Subgroup, Error> {
    for &x in gens {
        if x >= g.order() {
            return Err(Error::Group(format!("generator {} out of range", x)));
        }
    }
    let mut seen = vec![false; g.order()];
    seen[0] = true;
    let mut stack: Vec<usize> = vec![0];
    let mut frontier = 0;
    while frontier < stack.len() {
        let cur = stack[frontier];
        frontier += 1;
        for &x in gens {
            let next = g.mul(cur, x);
            if !seen[next] {
                seen[next] = true;
                stack.push(next);
            }
        }
    }
    Subgroup::new(g, stack)
}

/// Every subgroup, found by closing each known subgroup with one extra
/// element.  Sorted by order then element list, so the output is stable.
pub fn all_subgroups(g: &FiniteGroup) -> Vec<Subgroup> {
    let mut seen: std::collections::BTreeSet<Vec<usize>> = Default::default();
    let mut queue: Vec<Vec<usize>> = vec![vec![0]];
    seen.insert(vec![0]);
    let mut head = 0;
    while head < queue.len() {
        let base = queue[head].clone();
        head += 1;
        for x in g.elements() {
            if base.binary_search(&x).is_ok() {
                continue;
            }
            let mut gens = base.clone();
            gens.push(x);
            let h = subgroup_generated(g, &gens).expect("closure of valid elements");
            let key = h.elements().to_vec();
            if seen.insert(key.clone()) {
                queue.push(key);
            }
        }
    }
    let mut subs: Vec<Vec<usize>> = seen.into_iter().collect();
    subs.sort_by_key(|s| (s.len(), s.clone()));
    subs.into_iter().map(|s| Subgroup::new(g, s).expect("validated subgroup")).collect()
}

/// Quotient by a normal subgroup.  Cosets are numbered by their minimal
/// element, so the identity coset is 0.  Also returns element -> coset.
pub fn quotient_group(
    g: &FiniteGroup,
    n: &Subgroup,
) -> Result<(FiniteGroup, Vec<usize>), Error> {
    if n.parent() != g {
        return Err(Error::GroupMismatch);
    }
    if !n.is_normal() {
        return Err(Error::Group("quotient by a non-normal subgroup".into()));
    }
    let mut coset_of = vec![usize::MAX; g.order()];
    let mut reps: Vec<usize> = Vec::new();
    for e in g.elements() {
        if coset_of[e] != usize::MAX {
            continue;
        }
        let id = reps.len();
        reps.push(e);
        for &h in n.elements() {
            coset_of[g.mul(e, h)] = id;
        }
    }
    let k = reps.len();
    let mut rows = vec![vec![0usize; k]; k];
    for a in 0..k {
        for b in 0..k {
            rows[a][b] = coset_of[g.mul(reps[a], reps[b])];
        }
    }
    Ok((FiniteGroup::from_table(&rows)?, coset_of))
}

/// Re-indexes a subgroup as a standalone group.  Returns the group and the
/// map new index -> parent element.
pub fn subgroup_as_group(h: &Subgroup) -> (FiniteGroup, Vec<usize>) {
    let old = h.elements().to_vec();
    let pos = |e: usize| old.binary_search(&e).expect("closed subgroup");
    let k = old.len();
    let mut rows = vec![vec![0usize; k]; k];
    for a in 0..k {
        for b in 0..k {
            rows[a][b] = pos(h.parent().mul(old[a], old[b]));
        }
    }
    let g = FiniteGroup::from_table(&rows).expect("subgroup table is a group");
    (g, old)
}

/// G made abelian: the structure of G/[G,G] plus coordinates of every
/// element's class in invariant-factor form.
pub struct Abelianization {
    pub structure: FiniteAbelianGroup,
    coords: Vec<Vec<BigInt>>,
}

impl Abelianization {
    pub fn coords_of(&self, g: usize) -> &[BigInt] {
        &self.coords[g]
    }

    /// Order of the image in G^ab of the subgroup generated by `elements`.
    pub fn image_order(&self, elements: &[usize]) -> BigInt {
        let factors = self.structure.invariant_factors();
        let ambient = Presentation::with_torsion(0, factors);
        let gens: Vec<Vec<BigInt>> = elements.iter().map(|&e| self.coords[e].clone()).collect();
        subquotient_structure(&ambient, &gens, &[])
            .expect("subgroup of a finite group is finite")
            .order()
    }
}

pub fn abelianization(g: &FiniteGroup) -> Abelianization {
    let mut comms: Vec<usize> = Vec::new();
    for a in g.elements() {
        for b in g.elements() {
            let c = g.mul(g.mul(g.inv(a), g.inv(b)), g.mul(a, b));
            comms.push(c);
        }
    }
    let derived = subgroup_generated(g, &comms).expect("commutators are elements");
    let (q, coset_of) = quotient_group(g, &derived).expect("derived subgroup is normal");
    // Present the abelian quotient on one generator per coset with the table
    // as relations, then read coordinates off the smith form.
    let k = q.order();
    let ambient = Presentation::free(k);
    let basis: Vec<Vec<BigInt>> = (0..k)
        .map(|i| {
            let mut v = vec![BigInt::zero(); k];
            v[i] = BigInt::from(1);
            v
        })
        .collect();
    let mut rels: Vec<Vec<BigInt>> = Vec::new();
    for a in 0..k {
        for b in 0..=a {
            let mut v = vec![BigInt::zero(); k];
            v[a] += 1;
            v[b] += 1;
            v[q.mul(a, b)] -= 1;
            if !v.iter().all(|x| x.is_zero()) {
                rels.push(v);
            }
        }
    }
    let sq = subquotient(&ambient, &basis, &rels).expect("finite quotient of a finite table");
    let coords: Vec<Vec<BigInt>> = (0..g.order())
        .map(|e| sq.coords(&basis[coset_of[e]]).expect("basis vector lies in numerator"))
        .collect();
    Abelianization { structure: sq.structure().clone(), coords }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn s3_closure_has_order_six_and_is_not_abelian() {
        let g = FiniteGroup::symmetric_3();
        assert_eq!(g.order(), 6);
        assert!(!g.is_abelian());
        assert!(!g.is_cyclic());
        for a in g.elements() {
            assert_eq!(g.mul(a, g.inv(a)), 0);
        }
    }

    #[test]
    fn empty_generator_list_gives_trivial_group() {
        let g = FiniteGroup::from_permutations(1, &[]).unwrap();
        assert_eq!(g.order(), 1);
        assert!(FiniteGroup::from_permutations(0, &[]).is_err());
    }

    #[test]
    fn non_bijective_generator_is_rejected() {
        assert!(FiniteGroup::from_permutations(2, &[vec![0, 0]]).is_err());
        assert!(FiniteGroup::from_permutations(2, &[vec![0]]).is_err());
    }

    #[test]
    fn cyclic_group_basics() {
        let g = FiniteGroup::cyclic(6);
        assert!(g.is_abelian());
        assert_eq!(g.cyclic_generator(), Some(1));
        assert_eq!(g.order_of(2), 3);
        assert_eq!(g.inv(1), 5);
    }

    #[test]
    fn bad_tables_are_rejected() {
        // identity not at 0
        assert!(FiniteGroup::from_table(&[vec![1, 0], vec![0, 1]]).is_err());
        // not associative / not a group: 2x2 latin square with wrong identity row
        assert!(FiniteGroup::from_table(&[vec![0, 1], vec![1, 1]]).is_err());
    }

    #[test]
    fn subgroups_of_s3() {
        let g = FiniteGroup::symmetric_3();
        let subs = all_subgroups(&g);
        assert_eq!(subs.len(), 6); // 1, three C2, C3, S3
        let orders: Vec<usize> = subs.iter().map(|s| s.order()).collect();
        assert_eq!(orders, vec![1, 2, 2, 2, 3, 6]);
        let c3 = subs.iter().find(|s| s.order() == 3).unwrap();
        assert!(c3.is_normal());
        let c2 = subs.iter().find(|s| s.order() == 2).unwrap();
        assert!(!c2.is_normal());
    }

    #[test]
    fn quotient_of_s3_by_a3_is_c2() {
        let g = FiniteGroup::symmetric_3();
        let a3_gen = g.elements().find(|&e| g.order_of(e) == 3).unwrap();
        let a3 = subgroup_generated(&g, &[a3_gen]).unwrap();
        let (q, map) = quotient_group(&g, &a3).unwrap();
        assert_eq!(q.order(), 2);
        assert_eq!(map[0], 0);
    }

    #[test]
    fn reindexed_subgroup_is_a_group_with_matching_orders() {
        let g = FiniteGroup::cyclic(6);
        let h = subgroup_generated(&g, &[2]).unwrap();
        let (hg, back) = subgroup_as_group(&h);
        assert_eq!(hg.order(), 3);
        assert_eq!(back[0], 0);
        for i in hg.elements() {
            assert_eq!(g.order_of(back[i]), hg.order_of(i));
        }
    }

    #[test]
    fn abelianization_of_s3_is_z2() {
        let g = FiniteGroup::symmetric_3();
        let ab = abelianization(&g);
        assert_eq!(ab.structure.order(), BigInt::from(2));
        // transpositions map to the generator, 3-cycles to zero
        for e in g.elements() {
            let c = ab.coords_of(e);
            let expect = if g.order_of(e) == 2 { 1 } else { 0 };
            assert_eq!(c[0], BigInt::from(expect), "element {}", e);
        }
        assert_eq!(ab.image_order(&[0]), BigInt::from(1));
    }

    #[test]
    fn abelianization_of_abelian_group_is_itself() {
        let g = FiniteGroup::klein_four();
        let ab = abelianization(&g);
        assert_eq!(ab.structure.order(), BigInt::from(4));
        assert_eq!(
            ab.structure.invariant_factors(),
            &[BigInt::from(2), BigInt::from(2)]
        );
        assert_eq!(ab.image_order(&[0, 1]), BigInt::from(2));
        assert_eq!(ab.image_order(&[1, 2]), BigInt::from(4));
    }
}
