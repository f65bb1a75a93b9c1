//! Finitely generated abelian groups presented as Z^n modulo a relation
//! lattice, and finite subquotients of them.
//!
//! A `Presentation` is ambient data only; the interesting operation is
//! `subquotient`, which takes generating sets for two nested subgroups of the
//! presented group and returns the quotient in invariant-factor form together
//! with enough transform data to map elements to coordinates and back.

use num_bigint::BigInt;
use num_rational::Ratio;
use num_traits::{Signed, Zero};

use crate::abelian::FiniteAbelianGroup;
use crate::error::Error;
use crate::mat::{preimage_basis, snf_with, IntMat, SnfFlags, Solver};

/// Ambient group Z^dim / column-span(relations).
#[derive(Clone, Debug)]
pub struct Presentation {
    dim: usize,
    relations: IntMat,
}

impl Presentation {
    pub fn free(dim: usize) -> Presentation {
        Presentation { dim, relations: IntMat::zeros(dim, 0) }
    }

    /// Z^rank plus one cyclic factor per torsion entry.  Torsion coordinates
    /// sit after the free ones.
    pub fn with_torsion(rank: usize, torsion: &[BigInt]) -> Presentation {
        let dim = rank + torsion.len();
        let cols: Vec<Vec<BigInt>> = torsion
            .iter()
            .enumerate()
            .map(|(i, d)| {
                let mut c = vec![BigInt::zero(); dim];
                c[rank + i] = d.clone();
                c
            })
            .collect();
        Presentation { dim, relations: IntMat::from_cols(dim, &cols) }
    }

    pub fn from_relations(dim: usize, relations: IntMat) -> Presentation {
        assert_eq!(relations.rows(), dim, "relation matrix has wrong height");
        Presentation { dim, relations }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn relations(&self) -> &IntMat {
        &self.relations
    }

    /// Relations for the direct sum of `copies` copies of this presentation.
    pub fn power(&self, copies: usize) -> Presentation {
        let blocks: Vec<&IntMat> = (0..copies).map(|_| &self.relations).collect();
        Presentation { dim: self.dim * copies, relations: IntMat::block_diag(&blocks) }
    }
}

/// A finite quotient W1/W2 of nested lattices R <= W2 <= W1 <= Z^n, where R
/// is the ambient relation lattice.  Keeps the data needed to compute
/// coordinates of elements and to lift generators back to Z^n.
pub struct Subquotient {
    structure: FiniteAbelianGroup,
    lifts: Vec<Vec<BigInt>>,
    basis_solver: Solver,
    basis_rank: usize,
    ux: IntMat,
    diag: Vec<BigInt>,
    kept: Vec<usize>,
    den_solver: Solver,
    den_basis: IntMat,
}

fn lattice_basis(dim: usize, gens: &IntMat) -> IntMat {
    // col-span(gens) = col-span(gens * v); the first `rank` columns of
    // gens * v are a basis because u * gens * v is diagonal.
    let snf = snf_with(gens, SnfFlags::v_only());
    let v = snf.v.as_ref().unwrap();
    let prod = gens.mul(v);
    let cols: Vec<Vec<BigInt>> = (0..snf.rank()).map(|j| prod.col(j)).collect();
    IntMat::from_cols(dim, &cols)
}

pub fn subquotient(
    ambient: &Presentation,
    numerator: &[Vec<BigInt>],
    denominator: &[Vec<BigInt>],
) -> Result<Subquotient, Error> {
    let n = ambient.dim();
    for g in numerator.iter().chain(denominator.iter()) {
        if g.len() != n {
            return Err(Error::Structure(format!(
                "generator has length {}, ambient dimension is {}",
                g.len(),
                n
            )));
        }
    }
    let num_mat = IntMat::from_cols(n, numerator).hstack(ambient.relations());
    let basis = lattice_basis(n, &num_mat);
    let r = basis.cols();
    let basis_solver = Solver::new(&basis);

    // Express denominator generators and ambient relations in the numerator
    // basis; unsolvable columns mean the denominator is not contained.
    let mut den_cols: Vec<Vec<BigInt>> = Vec::new();
    for g in denominator {
        match basis_solver.solve(g) {
            Some(y) => den_cols.push(y),
            None => return Err(Error::NotContained),
        }
    }
    for j in 0..ambient.relations().cols() {
        let rel = ambient.relations().col(j);
        match basis_solver.solve(&rel) {
            Some(y) => den_cols.push(y),
            None => return Err(Error::NotContained),
        }
    }
    let x = IntMat::from_cols(r, &den_cols);
    let snf = snf_with(&x, SnfFlags::all());
    if snf.rank() < r {
        return Err(Error::InfiniteQuotient);
    }
    let mut diag: Vec<BigInt> = Vec::with_capacity(r);
    for i in 0..r {
        diag.push(snf.d.get(i, i).clone());
    }
    let kept: Vec<usize> = (0..r).filter(|&i| diag[i].abs() > BigInt::from(1)).collect();
    let structure = FiniteAbelianGroup::new(kept.iter().map(|&i| diag[i].clone()).collect())?;
    let uinv = snf.uinv.as_ref().unwrap();
    let lifts: Vec<Vec<BigInt>> = kept.iter().map(|&i| basis.mul_vec(&uinv.col(i))).collect();
    let den_mat = IntMat::from_cols(n, denominator).hstack(ambient.relations());
    let den_basis = lattice_basis(n, &den_mat);
    let den_solver = Solver::new(&den_basis);
    Ok(Subquotient {
        structure,
        lifts,
        basis_solver,
        basis_rank: r,
        ux: snf.u.unwrap(),
        diag,
        kept,
        den_solver,
        den_basis,
    })
}

/// Structure of (span(numerator)+R)/(span(denominator)+R) inside the
/// presented group, failing on non-containment or an infinite quotient.
pub fn subquotient_structure(
    ambient: &Presentation,
    numerator: &[Vec<BigInt>],
    denominator: &[Vec<BigInt>],
) -> Result<FiniteAbelianGroup, Error> {
    Ok(subquotient(ambient, numerator, denominator)?.structure().clone())
}

/// |coker f| / |ker f| for the homomorphism f of presented groups given by
/// `map` on generator coordinates.  Fails when f does not send relations
/// into relations or when kernel or cokernel is infinite.
pub fn q_quotient(
    dom: &Presentation,
    cod: &Presentation,
    map: &IntMat,
) -> Result<Ratio<BigInt>, Error> {
    if map.rows() != cod.dim() || map.cols() != dom.dim() {
        return Err(Error::Structure(format!(
            "map is {}x{}, expected {}x{}",
            map.rows(),
            map.cols(),
            cod.dim(),
            dom.dim()
        )));
    }
    let cod_rel_solver = Solver::new(cod.relations());
    for j in 0..dom.relations().cols() {
        let image = map.mul_vec(&dom.relations().col(j));
        if cod_rel_solver.solve(&image).is_none() {
            return Err(Error::Structure(
                "map does not send relations into relations".into(),
            ));
        }
    }
    let kernel_gens = preimage_basis(map, cod.relations());
    let kernel = subquotient_structure(dom, &kernel_gens, &[])?;
    let ambient: Vec<Vec<BigInt>> = (0..cod.dim())
        .map(|i| {
            let mut e = vec![BigInt::zero(); cod.dim()];
            e[i] = BigInt::from(1);
            e
        })
        .collect();
    let image: Vec<Vec<BigInt>> = (0..map.cols()).map(|j| map.col(j)).collect();
    let cokernel = subquotient_structure(cod, &ambient, &image)?;
    Ok(Ratio::new(cokernel.order(), kernel.order()))
}

impl Subquotient {
    pub fn structure(&self) -> &FiniteAbelianGroup {
        &self.structure
    }

    /// Ambient representatives for the invariant-factor generators.
    pub fn generator_lifts(&self) -> &[Vec<BigInt>] {
        &self.lifts
    }

    /// Coordinates of an ambient vector (which must lie in the numerator)
    /// with respect to the invariant factors, normalized to [0, d_i).
    pub fn coords(&self, w: &[BigInt]) -> Result<Vec<BigInt>, Error> {
        let y = self.basis_solver.solve(w).ok_or(Error::NotContained)?;
        debug_assert_eq!(y.len(), self.basis_rank);
        let z = self.ux.mul_vec(&y);
        Ok(self
            .kept
            .iter()
            .map(|&i| num_integer::Integer::mod_floor(&z[i], &self.diag[i]))
            .collect())
    }

    pub fn contains_in_numerator(&self, w: &[BigInt]) -> bool {
        self.basis_solver.solve(w).is_some()
    }

    pub fn contains_in_denominator(&self, w: &[BigInt]) -> bool {
        self.den_solver.solve(w).is_some()
    }

    /// A basis of the denominator lattice (relations included): enough to
    /// test that a map sends the denominator into itself.
    pub fn denominator_probes(&self) -> Vec<Vec<BigInt>> {
        (0..self.den_basis.cols()).map(|j| self.den_basis.col(j)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn vecs(vs: &[&[i64]]) -> Vec<Vec<BigInt>> {
        vs.iter().map(|v| v.iter().map(|&x| BigInt::from(x)).collect()).collect()
    }

    #[test]
    fn full_quotient_by_relations() {
        // Z^2 / <(2,0),(0,4)> = Z/2 + Z/4
        let p = Presentation::free(2);
        let num = vecs(&[&[1, 0], &[0, 1]]);
        let den = vecs(&[&[2, 0], &[0, 4]]);
        let q = subquotient_structure(&p, &num, &den).unwrap();
        assert_eq!(q.invariant_factors(), &[BigInt::from(2), BigInt::from(4)]);
    }

    #[test]
    fn quotient_of_mixed_ambient_by_diagonal_vector() {
        // (Z + Z/4) / <(2, 2)> is finite of order 8
        let p = Presentation::with_torsion(1, &[BigInt::from(4)]);
        let num = vecs(&[&[1, 0], &[0, 1]]);
        let den = vecs(&[&[2, 2]]);
        let q = subquotient_structure(&p, &num, &den).unwrap();
        assert_eq!(q.invariant_factors(), &[BigInt::from(2), BigInt::from(4)]);
        assert_eq!(q.order(), BigInt::from(8));
    }

    #[test]
    fn infinite_quotient_is_an_error() {
        let p = Presentation::free(2);
        let num = vecs(&[&[1, 0], &[0, 1]]);
        let den = vecs(&[&[2, 0]]);
        match subquotient_structure(&p, &num, &den) {
            Err(Error::InfiniteQuotient) => {}
            other => panic!("expected infinite quotient error, got {:?}", other.map(|g| g.to_string())),
        }
    }

    #[test]
    fn containment_is_checked() {
        // denominator (1,0) is not inside numerator 2Z x 0
        let p = Presentation::free(2);
        let num = vecs(&[&[2, 0]]);
        let den = vecs(&[&[1, 0]]);
        match subquotient_structure(&p, &num, &den) {
            Err(Error::NotContained) => {}
            other => panic!("expected containment error, got {:?}", other.map(|g| g.to_string())),
        }
    }

    #[test]
    fn coords_and_lifts_round_trip() {
        // (Z/2 + Z/4) as a quotient of Z^2
        let p = Presentation::with_torsion(0, &[BigInt::from(2), BigInt::from(4)]);
        let num = vecs(&[&[1, 0], &[0, 1]]);
        let sq = subquotient(&p, &num, &[]).unwrap();
        assert_eq!(sq.structure().order(), BigInt::from(8));
        for (i, lift) in sq.generator_lifts().iter().enumerate() {
            let c = sq.coords(lift).unwrap();
            for (j, cj) in c.iter().enumerate() {
                let expect = if i == j { 1 } else { 0 };
                assert_eq!(cj, &BigInt::from(expect), "generator {} coords {:?}", i, c);
            }
        }
    }

    #[test]
    fn subgroup_order_via_empty_denominator() {
        // subgroup of Z/4 + Z/4 generated by (2, 2) has order 2
        let p = Presentation::with_torsion(0, &[BigInt::from(4), BigInt::from(4)]);
        let num = vecs(&[&[2, 2]]);
        let q = subquotient_structure(&p, &num, &[]).unwrap();
        assert_eq!(q.order(), BigInt::from(2));
    }

    fn mat(rows: usize, cols: usize, entries: &[i64]) -> IntMat {
        assert_eq!(entries.len(), rows * cols);
        IntMat::from_fn(rows, cols, |i, j| BigInt::from(entries[i * cols + j]))
    }

    #[test]
    fn q_of_multiplication_by_two_on_mixed_group() {
        // on Z + Z/4, doubling has kernel Z/2 and cokernel Z/2 + Z/2
        let p = Presentation::with_torsion(1, &[BigInt::from(4)]);
        let two = mat(2, 2, &[2, 0, 0, 2]);
        let q = q_quotient(&p, &p, &two).unwrap();
        assert_eq!(q, Ratio::from_integer(BigInt::from(2)));
    }

    #[test]
    fn q_on_finite_groups_is_one() {
        let p = Presentation::with_torsion(0, &[BigInt::from(8)]);
        let two = mat(1, 1, &[2]);
        let q = q_quotient(&p, &p, &two).unwrap();
        assert_eq!(q, Ratio::from_integer(BigInt::from(1)));
        let zero = mat(1, 1, &[0]);
        assert_eq!(q_quotient(&p, &p, &zero).unwrap(), Ratio::from_integer(BigInt::from(1)));
    }

    #[test]
    fn q_of_nonsingular_endomorphism_is_the_determinant() {
        let p = Presentation::free(2);
        let a = mat(2, 2, &[3, 1, 1, 1]); // det 2
        let b = mat(2, 2, &[2, 1, 0, 3]); // det 6
        let qa = q_quotient(&p, &p, &a).unwrap();
        let qb = q_quotient(&p, &p, &b).unwrap();
        assert_eq!(qa, Ratio::from_integer(BigInt::from(2)));
        assert_eq!(qb, Ratio::from_integer(BigInt::from(6)));
        // multiplicativity under composition
        let ba = b.mul(&a);
        assert_eq!(q_quotient(&p, &p, &ba).unwrap(), qa * qb);
    }

    #[test]
    fn q_rejects_maps_that_break_relations() {
        // Z/2 -> Z sending the generator to 1 is not a homomorphism
        let dom = Presentation::with_torsion(0, &[BigInt::from(2)]);
        let cod = Presentation::free(1);
        let one = mat(1, 1, &[1]);
        assert!(q_quotient(&dom, &cod, &one).is_err());
    }

    #[test]
    fn q_rejects_infinite_kernel_or_cokernel() {
        let p = Presentation::free(1);
        let zero = mat(1, 1, &[0]);
        assert!(matches!(q_quotient(&p, &p, &zero), Err(Error::InfiniteQuotient)));
    }
}
