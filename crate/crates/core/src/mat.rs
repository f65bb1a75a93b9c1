//! Dense integer matrices and Smith normal form.
//!
//! Every structural computation in this crate (module presentations, Tate
//! cohomology, class group structure) reduces to exact linear algebra over Z,
//! and this module is the only place elimination happens.  Entries are
//! arbitrary precision; there is no overflow contract anywhere.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Row-major dense matrix over Z.
#[derive(Clone, PartialEq, Eq)]
pub struct IntMat {
    rows: usize,
    cols: usize,
    data: Vec<BigInt>,
}

impl IntMat {
    pub fn zeros(rows: usize, cols: usize) -> IntMat {
        IntMat { rows, cols, data: vec![BigInt::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> IntMat {
        let mut m = IntMat::zeros(n, n);
        for i in 0..n {
            m.set(i, i, BigInt::one());
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> BigInt) -> IntMat {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        IntMat { rows, cols, data }
    }

    /// Convenience constructor used heavily in tests.
    pub fn from_i64(rows: &[&[i64]]) -> IntMat {
        let r = rows.len();
        let c = if r == 0 { 0 } else { rows[0].len() };
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        IntMat::from_fn(r, c, |i, j| BigInt::from(rows[i][j]))
    }

    /// Builds a matrix whose columns are the given vectors.
    pub fn from_cols(dim: usize, cols: &[Vec<BigInt>]) -> IntMat {
        for c in cols {
            assert_eq!(c.len(), dim, "column length mismatch");
        }
        IntMat::from_fn(dim, cols.len(), |i, j| cols[j][i].clone())
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.cols + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: BigInt) {
        self.data[i * self.cols + j] = v;
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(|x| x.is_zero())
    }

    pub fn col(&self, j: usize) -> Vec<BigInt> {
        (0..self.rows).map(|i| self.get(i, j).clone()).collect()
    }

    pub fn mul(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = IntMat::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..other.cols {
                    let b = other.get(k, j);
                    if !b.is_zero() {
                        let cur = out.get(i, j) + a * b;
                        out.set(i, j, cur);
                    }
                }
            }
        }
        out
    }

    pub fn mul_vec(&self, x: &[BigInt]) -> Vec<BigInt> {
        assert_eq!(self.cols, x.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| {
                let mut acc = BigInt::zero();
                for j in 0..self.cols {
                    let a = self.get(i, j);
                    if !a.is_zero() {
                        acc += a * &x[j];
                    }
                }
                acc
            })
            .collect()
    }

    /// [self | other]
    pub fn hstack(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.rows, other.rows, "row mismatch in hstack");
        IntMat::from_fn(self.rows, self.cols + other.cols, |i, j| {
            if j < self.cols { self.get(i, j).clone() } else { other.get(i, j - self.cols).clone() }
        })
    }

    /// [self; other]
    pub fn vstack(&self, other: &IntMat) -> IntMat {
        assert_eq!(self.cols, other.cols, "column mismatch in vstack");
        IntMat::from_fn(self.rows + other.rows, self.cols, |i, j| {
            if i < self.rows { self.get(i, j).clone() } else { other.get(i - self.rows, j).clone() }
        })
    }

    pub fn block_diag(blocks: &[&IntMat]) -> IntMat {
        let rows = blocks.iter().map(|b| b.rows).sum();
        let cols = blocks.iter().map(|b| b.cols).sum();
        let mut out = IntMat::zeros(rows, cols);
        let (mut ro, mut co) = (0, 0);
        for b in blocks {
            for i in 0..b.rows {
                for j in 0..b.cols {
                    if !b.get(i, j).is_zero() {
                        out.set(ro + i, co + j, b.get(i, j).clone());
                    }
                }
            }
            ro += b.rows;
            co += b.cols;
        }
        out
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    fn swap_cols(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for i in 0..self.rows {
            self.data.swap(i * self.cols + a, i * self.cols + b);
        }
    }

    /// row[i] -= q * row[k]
    fn row_sub(&mut self, i: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for j in 0..self.cols {
            let v = self.get(i, j) - q * self.get(k, j);
            self.set(i, j, v);
        }
    }

    /// col[j] -= q * col[k]
    fn col_sub(&mut self, j: usize, k: usize, q: &BigInt) {
        if q.is_zero() {
            return;
        }
        for i in 0..self.rows {
            let v = self.get(i, j) - q * self.get(i, k);
            self.set(i, j, v);
        }
    }

    fn negate_row(&mut self, i: usize) {
        for j in 0..self.cols {
            let v = -self.get(i, j);
            self.set(i, j, v);
        }
    }
}

impl std::fmt::Debug for IntMat {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "IntMat {}x{} [", self.rows, self.cols)?;
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols).map(|j| self.get(i, j).to_string()).collect();
            writeln!(f, "  [{}]", row.join(", "))?;
        }
        write!(f, "]")
    }
}

/// Which transform matrices `snf_with` should accumulate.
#[derive(Clone, Copy)]
pub struct SnfFlags {
    pub u: bool,
    pub uinv: bool,
    pub v: bool,
}

impl SnfFlags {
    pub fn all() -> SnfFlags {
        SnfFlags { u: true, uinv: true, v: true }
    }
    pub fn uv() -> SnfFlags {
        SnfFlags { u: true, uinv: false, v: true }
    }
    pub fn v_only() -> SnfFlags {
        SnfFlags { u: false, uinv: false, v: true }
    }
}

/// Result of `smith_normal_form`: u * a * v = d with u, v unimodular and d
/// diagonal, d[i] | d[i+1], d[i] >= 0.  Transforms are None when not
/// requested; uinv is the exact inverse of u.
pub struct Snf {
    pub d: IntMat,
    pub u: Option<IntMat>,
    pub uinv: Option<IntMat>,
    pub v: Option<IntMat>,
    rank: usize,
}

impl Snf {
    pub fn rank(&self) -> usize {
        self.rank
    }

    /// Diagonal entries, length min(rows, cols).
    pub fn diagonal(&self) -> Vec<BigInt> {
        let n = self.d.rows().min(self.d.cols());
        (0..n).map(|i| self.d.get(i, i).clone()).collect()
    }
}

/// Quotient of x by p rounded to nearest, so |x - q*p| <= |p|/2.
fn div_round(x: &BigInt, p: &BigInt) -> BigInt {
    let (mut q, r) = num_integer::Integer::div_rem(x, p);
    if &r * 2i32 > p.abs() {
        q += p.signum();
    } else if &r * 2i32 <= -p.abs() {
        q -= p.signum();
    }
    q
}

/// Smallest-absolute-value nonzero entry of m restricted to indices >= k,
/// ties broken by lowest row then lowest column.  The fixed pivot rule makes
/// the returned transforms deterministic across runs.
fn find_pivot(m: &IntMat, k: usize) -> Option<(usize, usize)> {
    let mut best: Option<(usize, usize)> = None;
    let mut best_abs = BigInt::zero();
    for i in k..m.rows() {
        for j in k..m.cols() {
            let v = m.get(i, j);
            if v.is_zero() {
                continue;
            }
            let a = v.abs();
            if best.is_none() || a < best_abs {
                best = Some((i, j));
                best_abs = a;
            }
        }
    }
    best
}

pub fn smith_normal_form(a: &IntMat) -> Snf {
    snf_with(a, SnfFlags::uv())
}

/// Smith normal form with selectable transform accumulation.  Kernel
/// computations on large cochain matrices only need v; skipping u there keeps
/// memory proportional to the input.
pub fn snf_with(a: &IntMat, flags: SnfFlags) -> Snf {
    let mut d = a.clone();
    let mut u = flags.u.then(|| IntMat::identity(a.rows()));
    let mut uinv = flags.uinv.then(|| IntMat::identity(a.rows()));
    let mut v = flags.v.then(|| IntMat::identity(a.cols()));
    // Row op row_i -= q*row_k maps u to E*u and uinv to uinv*E^{-1}, which is
    // col_k += q*col_i on uinv.  Swaps and sign flips act on uinv columns.
    macro_rules! row_op {
        ($i:expr, $k:expr, $q:expr) => {
            d.row_sub($i, $k, $q);
            if let Some(u) = u.as_mut() {
                u.row_sub($i, $k, $q);
            }
            if let Some(ui) = uinv.as_mut() {
                let minus_q = -($q).clone();
                ui.col_sub($k, $i, &minus_q);
            }
        };
    }
    let n = a.rows().min(a.cols());
    let mut k = 0;
    while k < n {
        let Some((pi, pj)) = find_pivot(&d, k) else { break };
        d.swap_rows(k, pi);
        if let Some(u) = u.as_mut() {
            u.swap_rows(k, pi);
        }
        if let Some(ui) = uinv.as_mut() {
            ui.swap_cols(k, pi);
        }
        d.swap_cols(k, pj);
        if let Some(v) = v.as_mut() {
            v.swap_cols(k, pj);
        }
        let mut leftover = false;
        for i in k + 1..d.rows() {
            if !d.get(i, k).is_zero() {
                let q = div_round(d.get(i, k), d.get(k, k));
                row_op!(i, k, &q);
                if !d.get(i, k).is_zero() {
                    leftover = true;
                }
            }
        }
        for j in k + 1..d.cols() {
            if !d.get(k, j).is_zero() {
                let q = div_round(d.get(k, j), d.get(k, k));
                d.col_sub(j, k, &q);
                if let Some(v) = v.as_mut() {
                    v.col_sub(j, k, &q);
                }
                if !d.get(k, j).is_zero() {
                    leftover = true;
                }
            }
        }
        if leftover {
            // Remainders are strictly smaller than the pivot; re-pick.
            continue;
        }
        // Row k and column k are clear.  Enforce the divisibility chain: the
        // pivot must divide the whole remaining submatrix before we move on.
        let p = d.get(k, k).clone();
        let mut fixed = true;
        'scan: for i in k + 1..d.rows() {
            for j in k + 1..d.cols() {
                if !num_integer::Integer::is_multiple_of(d.get(i, j), &p) {
                    // row k += row i reintroduces the offending entry in row k
                    let minus_one = -BigInt::one();
                    row_op!(k, i, &minus_one);
                    fixed = false;
                    break 'scan;
                }
            }
        }
        if fixed {
            k += 1;
        }
    }
    let mut rank = 0;
    for i in 0..n {
        if !d.get(i, i).is_zero() {
            if d.get(i, i).is_negative() {
                d.negate_row(i);
                if let Some(u) = u.as_mut() {
                    u.negate_row(i);
                }
                if let Some(ui) = uinv.as_mut() {
                    for r in 0..ui.rows() {
                        let x = -ui.get(r, i);
                        ui.set(r, i, x);
                    }
                }
            }
            rank += 1;
        }
    }
    Snf { d, u, uinv, v, rank }
}

/// Basis of { x : a x = 0 } as columns, via the trailing columns of v.
pub fn kernel_basis(a: &IntMat) -> Vec<Vec<BigInt>> {
    let snf = snf_with(a, SnfFlags::v_only());
    let v = snf.v.as_ref().expect("v requested");
    (snf.rank()..a.cols()).map(|j| v.col(j)).collect()
}

/// Basis of the preimage lattice {x : a x lies in the column span of b}.
///
/// Computed as the first-block projection of ker [a | -b]; when b has no
/// columns this is just the kernel of a.
pub fn preimage_basis(a: &IntMat, b: &IntMat) -> Vec<Vec<BigInt>> {
    assert_eq!(a.rows(), b.rows(), "row mismatch in preimage_basis");
    if b.cols() == 0 {
        return kernel_basis(a);
    }
    let mut neg = b.clone();
    for i in 0..neg.rows() {
        for j in 0..neg.cols() {
            let v = -neg.get(i, j).clone();
            neg.set(i, j, v);
        }
    }
    let stacked = a.hstack(&neg);
    kernel_basis(&stacked)
        .into_iter()
        .map(|k| k[..a.cols()].to_vec())
        .collect()
}

/// Solves a x = b over Z for one or many right-hand sides, reusing one SNF.
pub struct Solver {
    snf: Snf,
}

impl Solver {
    pub fn new(a: &IntMat) -> Solver {
        Solver { snf: snf_with(a, SnfFlags::uv()) }
    }

    pub fn rank(&self) -> usize {
        self.snf.rank()
    }

    /// Some(x) with a x = b, or None when no integer solution exists.
    pub fn solve(&self, b: &[BigInt]) -> Option<Vec<BigInt>> {
        let u = self.snf.u.as_ref().unwrap();
        let v = self.snf.v.as_ref().unwrap();
        assert_eq!(b.len(), u.cols(), "rhs length mismatch");
        let y = u.mul_vec(b);
        let mut z = vec![BigInt::zero(); v.rows()];
        for (i, yi) in y.iter().enumerate() {
            if i < z.len() {
                let di = self.snf.d.get(i, i);
                if di.is_zero() {
                    if !yi.is_zero() {
                        return None;
                    }
                } else {
                    let (q, r) = num_integer::Integer::div_rem(yi, di);
                    if !r.is_zero() {
                        return None;
                    }
                    z[i] = q;
                }
            } else if !yi.is_zero() {
                return None;
            }
        }
        Some(v.mul_vec(&z))
    }
}

/// Determinant by fraction-free (Bareiss) elimination.  Used to certify
/// unimodularity of the SNF transforms in tests and validation paths.
pub fn det(a: &IntMat) -> BigInt {
    assert_eq!(a.rows(), a.cols(), "determinant of a non-square matrix");
    let n = a.rows();
    if n == 0 {
        return BigInt::one();
    }
    let mut m = a.clone();
    let mut sign = 1i32;
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if m.get(k, k).is_zero() {
            let swap = (k + 1..n).find(|&i| !m.get(i, k).is_zero());
            match swap {
                Some(i) => {
                    m.swap_rows(k, i);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m.get(i, j) * m.get(k, k) - m.get(i, k) * m.get(k, j);
                let (q, r) = num_integer::Integer::div_rem(&num, &prev);
                debug_assert!(r.is_zero());
                m.set(i, j, q);
            }
        }
        for i in k + 1..n {
            m.set(i, k, BigInt::zero());
        }
        prev = m.get(k, k).clone();
    }
    let d = m.get(n - 1, n - 1).clone();
    if sign < 0 { -d } else { d }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn check_snf(a: &IntMat) {
        let snf = smith_normal_form(a);
        let u = snf.u.as_ref().unwrap();
        let v = snf.v.as_ref().unwrap();
        assert_eq!(u.mul(a).mul(v), snf.d, "u*a*v != d");
        assert_eq!(det(u).abs(), BigInt::one(), "u not unimodular");
        assert_eq!(det(v).abs(), BigInt::one(), "v not unimodular");
        let diag = snf.diagonal();
        for i in 0..diag.len() {
            assert!(!diag[i].is_negative());
            if i + 1 < diag.len() && !diag[i].is_zero() {
                assert!(
                    diag[i + 1].is_zero() || num_integer::Integer::is_multiple_of(&diag[i + 1], &diag[i]),
                    "no divisibility chain: {:?}",
                    diag
                );
            }
            if diag[i].is_zero() && i + 1 < diag.len() {
                assert!(diag[i + 1].is_zero(), "zero before nonzero in diagonal");
            }
        }
        // off-diagonal must vanish
        for i in 0..snf.d.rows() {
            for j in 0..snf.d.cols() {
                if i != j {
                    assert!(snf.d.get(i, j).is_zero());
                }
            }
        }
    }

    #[test]
    fn snf_2x2_example() {
        let a = IntMat::from_i64(&[&[2, 4], &[6, 8]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.diagonal(), vec![BigInt::from(2), BigInt::from(4)]);
        check_snf(&a);
    }

    #[test]
    fn snf_zero_and_identity() {
        check_snf(&IntMat::zeros(3, 2));
        let snf = smith_normal_form(&IntMat::zeros(3, 2));
        assert_eq!(snf.rank(), 0);
        check_snf(&IntMat::identity(4));
        assert_eq!(smith_normal_form(&IntMat::identity(4)).rank(), 4);
    }

    #[test]
    fn snf_rectangular() {
        let a = IntMat::from_i64(&[&[1, 2, 3], &[4, 5, 6]]);
        check_snf(&a);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.diagonal(), vec![BigInt::from(1), BigInt::from(3)]);
    }

    #[test]
    fn snf_needs_divisibility_fix() {
        // diag(2, 3) has no chain; SNF must produce diag(1, 6)
        let a = IntMat::from_i64(&[&[2, 0], &[0, 3]]);
        let snf = smith_normal_form(&a);
        assert_eq!(snf.diagonal(), vec![BigInt::from(1), BigInt::from(6)]);
        check_snf(&a);
    }

    #[test]
    fn uinv_inverts_u() {
        let a = IntMat::from_i64(&[&[2, 4, 4], &[-6, 6, 12], &[10, 4, 16]]);
        let snf = snf_with(&a, SnfFlags::all());
        let u = snf.u.as_ref().unwrap();
        let ui = snf.uinv.as_ref().unwrap();
        assert_eq!(u.mul(ui), IntMat::identity(3));
        assert_eq!(ui.mul(u), IntMat::identity(3));
    }

    #[test]
    fn kernel_of_projection() {
        let a = IntMat::from_i64(&[&[1, 0, 0], &[0, 1, 0]]);
        let k = kernel_basis(&a);
        assert_eq!(k.len(), 1);
        assert!(a.mul_vec(&k[0]).iter().all(|x| x.is_zero()));
    }

    #[test]
    fn solver_finds_integer_solutions() {
        let a = IntMat::from_i64(&[&[2, 0], &[0, 3]]);
        let s = Solver::new(&a);
        let b = vec![BigInt::from(4), BigInt::from(9)];
        let x = s.solve(&b).unwrap();
        assert_eq!(a.mul_vec(&x), b);
        assert!(s.solve(&[BigInt::from(1), BigInt::from(0)]).is_none());
    }

    #[test]
    fn det_matches_cofactor_on_small_cases() {
        let a = IntMat::from_i64(&[&[3, 7], &[1, -4]]);
        assert_eq!(det(&a), BigInt::from(-19));
        let b = IntMat::from_i64(&[&[1, 2, 3], &[4, 5, 6], &[7, 8, 10]]);
        assert_eq!(det(&b), BigInt::from(-3));
        assert_eq!(det(&IntMat::zeros(2, 2)), BigInt::zero());
    }
}
