//! G-modules of finite type: a free part, cyclic torsion, and one integer
//! matrix per group element.
//!
//! Coordinates are column vectors with the free part first.  Torsion rows are
//! read modulo their invariant factor; free rows are exact.  A matrix never
//! maps a torsion generator into the free part, since such an image would
//! have infinite order.

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::error::Error;
use crate::group::{subgroup_as_group, FiniteGroup, Subgroup};
use crate::mat::IntMat;
use crate::presentation::Presentation;

#[derive(Clone)]
pub struct GModule {
    group: FiniteGroup,
    rank: usize,
    torsion: Vec<BigInt>,
    action: Vec<IntMat>,
}

impl GModule {
    pub fn new(
        group: FiniteGroup,
        rank: usize,
        torsion: Vec<BigInt>,
        action: Vec<IntMat>,
    ) -> Result<GModule, Error> {
        for (i, d) in torsion.iter().enumerate() {
            if d < &BigInt::from(2) {
                return Err(Error::Module(format!("torsion order {} is {}, must be >= 2", i, d)));
            }
            if i + 1 < torsion.len()
                && !num_integer::Integer::is_multiple_of(&torsion[i + 1], d)
            {
                return Err(Error::Module(format!(
                    "torsion orders are not an invariant factor chain at index {}",
                    i
                )));
            }
        }
        let dim = rank + torsion.len();
        if action.len() != group.order() {
            return Err(Error::Module(format!(
                "{} action matrices for a group of order {}",
                action.len(),
                group.order()
            )));
        }
        let mut m = GModule { group, rank, torsion, action };
        for g in 0..m.action.len() {
            if m.action[g].rows() != dim || m.action[g].cols() != dim {
                return Err(Error::Module(format!("action matrix {} is not {}x{}", g, dim, dim)));
            }
            let a = m.normalize_matrix(&m.action[g]);
            m.action[g] = a;
        }
        m.validate()?;
        Ok(m)
    }

    /// Reduces torsion rows into [0, d); the same endomorphism, canonical
    /// entries.
    fn normalize_matrix(&self, a: &IntMat) -> IntMat {
        IntMat::from_fn(self.dim(), self.dim(), |i, j| {
            let v = a.get(i, j).clone();
            if i < self.rank {
                v
            } else {
                num_integer::Integer::mod_floor(&v, &self.torsion[i - self.rank])
            }
        })
    }

    /// Equality of endomorphisms: exact on free rows, modular on torsion rows.
    fn mats_agree(&self, a: &IntMat, b: &IntMat) -> bool {
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                let diff = a.get(i, j) - b.get(i, j);
                if i < self.rank {
                    if !diff.is_zero() {
                        return false;
                    }
                } else if !num_integer::Integer::is_multiple_of(&diff, &self.torsion[i - self.rank])
                {
                    return false;
                }
            }
        }
        true
    }

    fn validate(&self) -> Result<(), Error> {
        let dim = self.dim();
        let id = IntMat::identity(dim);
        if !self.mats_agree(&self.action[0], &id) {
            return Err(Error::Module("identity element must act as the identity".into()));
        }
        for g in self.group.elements() {
            let a = &self.action[g];
            // torsion generators must land in the torsion part, with image
            // order dividing the generator order
            for j in self.rank..dim {
                let dj = &self.torsion[j - self.rank];
                for i in 0..self.rank {
                    if !a.get(i, j).is_zero() {
                        return Err(Error::Module(format!(
                            "element {} maps torsion generator {} into the free part",
                            g,
                            j - self.rank
                        )));
                    }
                }
                for i in self.rank..dim {
                    let di = &self.torsion[i - self.rank];
                    if !num_integer::Integer::is_multiple_of(&(a.get(i, j) * dj), di) {
                        return Err(Error::Module(format!(
                            "element {} sends a torsion generator of order {} to a class of larger order",
                            g, dj
                        )));
                    }
                }
            }
        }
        for g in self.group.elements() {
            let gi = self.group.inv(g);
            let prod = self.action[g].mul(&self.action[gi]);
            if !self.mats_agree(&prod, &id) {
                return Err(Error::Module(format!("action of element {} is not invertible", g)));
            }
            for h in self.group.elements() {
                let gh = self.group.mul(g, h);
                let prod = self.action[g].mul(&self.action[h]);
                if !self.mats_agree(&prod, &self.action[gh]) {
                    return Err(Error::Module(format!(
                        "action is not a homomorphism at ({}, {})",
                        g, h
                    )));
                }
            }
        }
        Ok(())
    }

    /// Builds the full action from matrices for a generating set, walking the
    /// group breadth-first.  The result is validated like any other module.
    pub fn from_generators(
        group: FiniteGroup,
        rank: usize,
        torsion: Vec<BigInt>,
        generators: &[(usize, IntMat)],
    ) -> Result<GModule, Error> {
        let dim = rank + torsion.len();
        let n = group.order();
        for (g, m) in generators {
            if *g >= n {
                return Err(Error::Module(format!("generator element {} out of range", g)));
            }
            if m.rows() != dim || m.cols() != dim {
                return Err(Error::Module(format!("generator matrix for {} is not {}x{}", g, dim, dim)));
            }
        }
        let mut mats: Vec<Option<IntMat>> = vec![None; n];
        mats[0] = Some(IntMat::identity(dim));
        let mut queue: Vec<usize> = vec![0];
        let mut head = 0;
        while head < queue.len() {
            let cur = queue[head];
            head += 1;
            for (g, gm) in generators {
                let next = group.mul(cur, *g);
                if mats[next].is_none() {
                    let prod = mats[cur].as_ref().unwrap().mul(gm);
                    mats[next] = Some(prod);
                    queue.push(next);
                }
            }
        }
        if mats.iter().any(|m| m.is_none()) {
            return Err(Error::Module("generators do not generate the group".into()));
        }
        let module =
            GModule::new(group, rank, torsion, mats.into_iter().map(|m| m.unwrap()).collect())?;
        for (g, gm) in generators {
            let given = module.normalize_matrix(gm);
            if !module.mats_agree(module.action(*g), &given) {
                return Err(Error::Module(format!(
                    "generator matrix for element {} conflicts with the generated action",
                    g
                )));
            }
        }
        Ok(module)
    }

    pub fn group(&self) -> &FiniteGroup {
        &self.group
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn torsion(&self) -> &[BigInt] {
        &self.torsion
    }

    pub fn dim(&self) -> usize {
        self.rank + self.torsion.len()
    }

    pub fn action(&self, g: usize) -> &IntMat {
        &self.action[g]
    }

    pub fn presentation(&self) -> Presentation {
        Presentation::with_torsion(self.rank, &self.torsion)
    }

    /// Sum of all action matrices.
    pub fn norm_matrix(&self) -> IntMat {
        let dim = self.dim();
        IntMat::from_fn(dim, dim, |i, j| {
            let mut acc = BigInt::zero();
            for g in self.group.elements() {
                acc += self.action[g].get(i, j);
            }
            acc
        })
    }

    /// action(g) - 1.
    pub fn action_minus_id(&self, g: usize) -> IntMat {
        let dim = self.dim();
        IntMat::from_fn(dim, dim, |i, j| {
            let mut v = self.action[g].get(i, j).clone();
            if i == j {
                v -= BigInt::one();
            }
            v
        })
    }

    /// The same module structure with every matrix reduced modulo n: the
    /// quotient M/nM, which is finite of exponent dividing n.
    pub fn quotient_mod(&self, n: &BigInt) -> Result<GModule, Error> {
        if n < &BigInt::from(2) {
            return Err(Error::Module("quotient modulus must be >= 2".into()));
        }
        let mut torsion = Vec::new();
        for d in &self.torsion {
            let g = num_integer::Integer::gcd(d, n);
            if !g.is_one() {
                torsion.push(g);
            }
        }
        for _ in 0..self.rank {
            torsion.push(n.clone());
        }
        torsion.sort();
        // entries: free generators become torsion of order n, old torsion
        // shrinks to gcd(d, n); the matrix entries carry over unchanged
        // because the projection M -> M/nM is coordinatewise.  Dropped
        // factors (gcd 1) lose their rows and columns.
        let keep: Vec<usize> = (0..self.rank)
            .chain((0..self.torsion.len()).filter_map(|i| {
                let g = num_integer::Integer::gcd(&self.torsion[i], n);
                if g.is_one() { None } else { Some(self.rank + i) }
            }))
            .collect();
        // order the kept coordinates to match the sorted torsion list:
        // old free coordinates have order n, old torsion coordinate i has
        // order gcd(d_i, n) | n, so sorting by order keeps a valid chain
        let mut keyed: Vec<(BigInt, usize)> = keep
            .iter()
            .map(|&c| {
                let ord = if c < self.rank {
                    n.clone()
                } else {
                    num_integer::Integer::gcd(&self.torsion[c - self.rank], n)
                };
                (ord, c)
            })
            .collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0).then(a.1.cmp(&b.1)));
        let coords: Vec<usize> = keyed.iter().map(|&(_, c)| c).collect();
        let new_torsion: Vec<BigInt> = keyed.into_iter().map(|(o, _)| o).collect();
        let action: Vec<IntMat> = self
            .action
            .iter()
            .map(|a| {
                IntMat::from_fn(coords.len(), coords.len(), |i, j| a.get(coords[i], coords[j]).clone())
            })
            .collect();
        GModule::new(self.group.clone(), 0, new_torsion, action)
    }
}

impl std::fmt::Debug for GModule {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(
            f,
            "GModule(|G|={}, rank {}, torsion {:?})",
            self.group.order(),
            self.rank,
            self.torsion.iter().map(|d| d.to_string()).collect::<Vec<_>>()
        )
    }
}

/// The classical lattices attached to a group.
#[derive(Clone, Debug)]
pub enum StandardKind {
    /// Z with every element acting as 1.
    Trivial,
    /// Z[G] with left translation.
    Regular,
    /// Z[G]/(sum of all elements): the character lattice of the norm-one
    /// torus.  Basis: classes of the non-identity elements.
    NormTorus,
    /// Kernel of the coefficient-sum map Z[G] -> Z: the character lattice of
    /// the dual torus.  Basis: (g - e) for non-identity g.
    DualTorus,
    /// Z[G/H] for a subgroup H, with left translation on cosets.
    Permutation(Subgroup),
}

pub fn standard_module(group: &FiniteGroup, kind: &StandardKind) -> Result<GModule, Error> {
    let n = group.order();
    match kind {
        StandardKind::Trivial => {
            let action = vec![IntMat::identity(1); n];
            GModule::new(group.clone(), 1, vec![], action)
        }
        StandardKind::Regular => {
            let action: Vec<IntMat> = group
                .elements()
                .map(|g| {
                    let mut a = IntMat::zeros(n, n);
                    for j in 0..n {
                        a.set(group.mul(g, j), j, BigInt::one());
                    }
                    a
                })
                .collect();
            GModule::new(group.clone(), n, vec![], action)
        }
        StandardKind::NormTorus => {
            if n == 1 {
                return Err(Error::Module(
                    "norm-one lattice of the trivial group is the zero module".into(),
                ));
            }
            let dim = n - 1;
            // basis index i <-> element i+1; the identity class equals
            // minus the sum of all basis classes
            let action: Vec<IntMat> = group
                .elements()
                .map(|g| {
                    let mut a = IntMat::zeros(dim, dim);
                    for x in 1..n {
                        let gx = group.mul(g, x);
                        if gx == 0 {
                            for r in 0..dim {
                                a.set(r, x - 1, BigInt::from(-1));
                            }
                        } else {
                            a.set(gx - 1, x - 1, BigInt::one());
                        }
                    }
                    a
                })
                .collect();
            GModule::new(group.clone(), dim, vec![], action)
        }
        StandardKind::DualTorus => {
            if n == 1 {
                return Err(Error::Module(
                    "augmentation lattice of the trivial group is the zero module".into(),
                ));
            }
            let dim = n - 1;
            // basis index i <-> (element i+1) - e;  g(x - e) = (gx - e) - (g - e)
            let action: Vec<IntMat> = group
                .elements()
                .map(|g| {
                    let mut a = IntMat::zeros(dim, dim);
                    for x in 1..n {
                        let gx = group.mul(g, x);
                        if gx != 0 {
                            a.set(gx - 1, x - 1, BigInt::one());
                        }
                        if g != 0 {
                            let v = a.get(g - 1, x - 1) - 1;
                            a.set(g - 1, x - 1, v);
                        }
                    }
                    a
                })
                .collect();
            GModule::new(group.clone(), dim, vec![], action)
        }
        StandardKind::Permutation(h) => {
            if h.parent() != group {
                return Err(Error::GroupMismatch);
            }
            // left cosets ordered by minimal element
            let mut coset_of = vec![usize::MAX; n];
            let mut reps = Vec::new();
            for e in group.elements() {
                if coset_of[e] != usize::MAX {
                    continue;
                }
                let id = reps.len();
                reps.push(e);
                for &x in h.elements() {
                    coset_of[group.mul(e, x)] = id;
                }
            }
            let k = reps.len();
            let action: Vec<IntMat> = group
                .elements()
                .map(|g| {
                    let mut a = IntMat::zeros(k, k);
                    for (c, &r) in reps.iter().enumerate() {
                        a.set(coset_of[group.mul(g, r)], c, BigInt::one());
                    }
                    a
                })
                .collect();
            GModule::new(group.clone(), k, vec![], action)
        }
    }
}

/// The same module seen through a subgroup, re-indexed as a standalone group.
pub fn restrict_module(m: &GModule, h: &Subgroup) -> Result<GModule, Error> {
    if h.parent() != m.group() {
        return Err(Error::GroupMismatch);
    }
    let (hg, back) = subgroup_as_group(h);
    let action: Vec<IntMat> = (0..hg.order()).map(|i| m.action(back[i]).clone()).collect();
    GModule::new(hg, m.rank(), m.torsion().to_vec(), action)
}
