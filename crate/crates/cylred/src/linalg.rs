//! Exact linear algebra over the working field and over the integers.
//!
//! Two small matrix kinds live here. `FMat` holds field scalars and supports
//! reduced row echelon form, kernels, rank, and linear solves, all exact.
//! `IMat` holds big integers and supports the row Hermite normal form with a
//! unimodular transform, which is the workhorse for lattice canonicalization
//! and saturated integer kernels.
//!
//! Everything is dense and sized for ambient dimensions in the single
//! digits; no effort is spent on sparsity or pivoting heuristics beyond
//! exactness and deterministic output.

use num::bigint::BigInt;
use num::integer::Integer;
use num::{BigRational, One, Signed, Zero};

use crate::scalar::Scalar;

/// Dense matrix over the quadratic field, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FMat {
    pub nrows: usize,
    pub ncols: usize,
    data: Vec<Scalar>,
}

impl FMat {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        FMat {
            nrows,
            ncols,
            data: vec![Scalar::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = FMat::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = Scalar::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<Scalar>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            data.extend(r);
        }
        FMat { nrows, ncols, data }
    }

    pub fn at(&self, i: usize, j: usize) -> &Scalar {
        &self.data[i * self.ncols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut Scalar {
        &mut self.data[i * self.ncols + j]
    }

    pub fn row(&self, i: usize) -> &[Scalar] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    pub fn rows_vec(&self) -> Vec<Vec<Scalar>> {
        (0..self.nrows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> FMat {
        let mut t = FMat::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn mul_vec(&self, v: &[Scalar]) -> Vec<Scalar> {
        assert_eq!(v.len(), self.ncols);
        (0..self.nrows)
            .map(|i| {
                let mut acc = Scalar::zero();
                for j in 0..self.ncols {
                    acc += &(self.at(i, j) * &v[j]);
                }
                acc
            })
            .collect()
    }

    pub fn matmul(&self, other: &FMat) -> FMat {
        assert_eq!(self.ncols, other.nrows);
        let mut out = FMat::zeros(self.nrows, other.ncols);
        for i in 0..self.nrows {
            for k in 0..self.ncols {
                let lhs = self.at(i, k);
                if lhs.is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    let add = lhs * other.at(k, j);
                    *out.at_mut(i, j) += &add;
                }
            }
        }
        out
    }

    pub fn vstack(&self, other: &FMat) -> FMat {
        assert_eq!(self.ncols, other.ncols);
        let mut data = self.data.clone();
        data.extend(other.data.iter().cloned());
        FMat {
            nrows: self.nrows + other.nrows,
            ncols: self.ncols,
            data,
        }
    }

    /// Reduced row echelon form together with the pivot column list.
    ///
    /// Output is the canonical RREF: pivots are 1, pivot columns strictly
    /// increase, pivot columns are cleared above and below. Deterministic,
    /// so equal row spaces give byte-identical output.
    pub fn rref(&self) -> (FMat, Vec<usize>) {
        let mut m = self.clone();
        let mut pivots = Vec::new();
        let mut r = 0;
        for col in 0..m.ncols {
            if r == m.nrows {
                break;
            }
            let Some(pr) = (r..m.nrows).find(|&i| !m.at(i, col).is_zero()) else {
                continue;
            };
            m.swap_rows(r, pr);
            let inv = m.at(r, col).inv().expect("pivot is nonzero");
            for j in col..m.ncols {
                let v = m.at(r, j) * &inv;
                *m.at_mut(r, j) = v;
            }
            for i in 0..m.nrows {
                if i == r || m.at(i, col).is_zero() {
                    continue;
                }
                let factor = m.at(i, col).clone();
                for j in col..m.ncols {
                    let sub = &factor * m.at(r, j);
                    *m.at_mut(i, j) -= &sub;
                }
            }
            pivots.push(col);
            r += 1;
        }
        (m, pivots)
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.ncols {
            self.data.swap(a * self.ncols + j, b * self.ncols + j);
        }
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of { x : self * x = 0 }, one vector per free column.
    ///
    /// Canonical: free variable set to 1, pivot variables back-substituted,
    /// ordered by free column index.
    pub fn right_kernel(&self) -> Vec<Vec<Scalar>> {
        let (r, pivots) = self.rref();
        let pivot_set: Vec<Option<usize>> = {
            let mut v = vec![None; self.ncols];
            for (row, &col) in pivots.iter().enumerate() {
                v[col] = Some(row);
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.ncols {
            if pivot_set[free].is_some() {
                continue;
            }
            let mut x = vec![Scalar::zero(); self.ncols];
            x[free] = Scalar::one();
            for (&pc, row) in pivots.iter().zip(0..) {
                x[pc] = -r.at(row, free).clone();
            }
            basis.push(x);
        }
        basis
    }

    /// Exact inverse, or None for a singular or non-square matrix.
    pub fn inverse(&self) -> Option<FMat> {
        if self.nrows != self.ncols {
            return None;
        }
        let n = self.nrows;
        let mut aug = FMat::zeros(n, 2 * n);
        for i in 0..n {
            for j in 0..n {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, n + i) = Scalar::one();
        }
        let (r, pivots) = aug.rref();
        if pivots.len() != n || pivots.iter().enumerate().any(|(i, &c)| c != i) {
            return None;
        }
        let mut out = FMat::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                *out.at_mut(i, j) = r.at(i, n + j).clone();
            }
        }
        Some(out)
    }

    /// Float shadow for numeric pipelines.
    pub fn to_f64(&self) -> nalgebra::DMatrix<f64> {
        nalgebra::DMatrix::from_fn(self.nrows, self.ncols, |i, j| self.at(i, j).embed())
    }

    /// One solution of self * x = b with free variables at zero, or None
    /// when the system is inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(b.len(), self.nrows);
        let mut aug = FMat::zeros(self.nrows, self.ncols + 1);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                *aug.at_mut(i, j) = self.at(i, j).clone();
            }
            *aug.at_mut(i, self.ncols) = b[i].clone();
        }
        let (r, pivots) = aug.rref();
        if pivots.contains(&self.ncols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.ncols];
        for (row, &col) in pivots.iter().enumerate() {
            x[col] = r.at(row, self.ncols).clone();
        }
        Some(x)
    }
}

/// Dense matrix of big integers, row major.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IMat {
    pub nrows: usize,
    pub ncols: usize,
    data: Vec<BigInt>,
}

impl IMat {
    pub fn zeros(nrows: usize, ncols: usize) -> Self {
        IMat {
            nrows,
            ncols,
            data: vec![BigInt::zero(); nrows * ncols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = IMat::zeros(n, n);
        for i in 0..n {
            *m.at_mut(i, i) = BigInt::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<BigInt>>) -> Self {
        let nrows = rows.len();
        let ncols = rows.first().map_or(0, |r| r.len());
        let mut data = Vec::with_capacity(nrows * ncols);
        for r in rows {
            assert_eq!(r.len(), ncols, "ragged rows");
            data.extend(r);
        }
        IMat { nrows, ncols, data }
    }

    pub fn at(&self, i: usize, j: usize) -> &BigInt {
        &self.data[i * self.ncols + j]
    }

    pub fn at_mut(&mut self, i: usize, j: usize) -> &mut BigInt {
        &mut self.data[i * self.ncols + j]
    }

    pub fn row(&self, i: usize) -> &[BigInt] {
        &self.data[i * self.ncols..(i + 1) * self.ncols]
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.ncols {
            self.data.swap(a * self.ncols + j, b * self.ncols + j);
        }
    }

    fn row_is_zero(&self, i: usize) -> bool {
        self.row(i).iter().all(|x| x.is_zero())
    }

    /// Row Hermite normal form H = U * self with U unimodular.
    ///
    /// H is the unique row HNF of the row lattice: nonzero rows first with
    /// strictly increasing pivot columns, positive pivots, and entries above
    /// each pivot reduced into [0, pivot). Returned as (H, U).
    pub fn hnf_with_transform(&self) -> (IMat, IMat) {
        let mut h = self.clone();
        let mut u = IMat::identity(self.nrows);
        let mut r = 0;
        for col in 0..h.ncols {
            if r == h.nrows {
                break;
            }
            // sweep the column below r down to a single gcd entry
            loop {
                let mut nonzero: Vec<usize> =
                    (r..h.nrows).filter(|&i| !h.at(i, col).is_zero()).collect();
                if nonzero.is_empty() {
                    break;
                }
                if nonzero.len() == 1 {
                    h.swap_rows(r, nonzero[0]);
                    u.swap_rows(r, nonzero[0]);
                    break;
                }
                // combine the two smallest in absolute value to keep growth down
                nonzero.sort_by_key(|&i| h.at(i, col).abs());
                let (i, j) = (nonzero[0], nonzero[1]);
                let a = h.at(i, col).clone();
                let b = h.at(j, col).clone();
                let e = a.extended_gcd(&b);
                // rows (i, j) <- (x*row_i + y*row_j, -(b/g)*row_i + (a/g)*row_j)
                let (g, x, y) = (e.gcd, e.x, e.y);
                let bg = &b / &g;
                let ag = &a / &g;
                combine_rows(&mut h, i, j, &x, &y, &(-&bg), &ag);
                combine_rows(&mut u, i, j, &x, &y, &(-&bg), &ag);
            }
            if h.at(r, col).is_zero() {
                continue;
            }
            if h.at(r, col).is_negative() {
                negate_row(&mut h, r);
                negate_row(&mut u, r);
            }
            // reduce entries above the pivot into [0, pivot)
            let pivot = h.at(r, col).clone();
            for i in 0..r {
                let q = h.at(i, col).div_floor(&pivot);
                if q.is_zero() {
                    continue;
                }
                sub_scaled_row(&mut h, i, r, &q);
                sub_scaled_row(&mut u, i, r, &q);
            }
            r += 1;
        }
        (h, u)
    }

    /// Basis of { z integer vector : self * z = 0 }.
    ///
    /// The result spans every integer solution (the lattice is saturated by
    /// construction, being the integer points of a rational subspace).
    pub fn integer_right_kernel(&self) -> Vec<Vec<BigInt>> {
        let t = self.transpose();
        let (h, u) = t.hnf_with_transform();
        (0..t.nrows)
            .filter(|&i| h.row_is_zero(i))
            .map(|i| u.row(i).to_vec())
            .collect()
    }

    pub fn transpose(&self) -> IMat {
        let mut t = IMat::zeros(self.ncols, self.nrows);
        for i in 0..self.nrows {
            for j in 0..self.ncols {
                *t.at_mut(j, i) = self.at(i, j).clone();
            }
        }
        t
    }

    pub fn nonzero_rows(&self) -> Vec<Vec<BigInt>> {
        (0..self.nrows)
            .filter(|&i| !self.row_is_zero(i))
            .map(|i| self.row(i).to_vec())
            .collect()
    }
}

/// rows (i, j) <- (p*row_i + q*row_j, r*row_i + s*row_j); caller keeps
/// p*s - q*r = ±1 so the transform stays invertible over the integers
fn combine_rows(m: &mut IMat, i: usize, j: usize, p: &BigInt, q: &BigInt, r: &BigInt, s: &BigInt) {
    for col in 0..m.ncols {
        let a = m.at(i, col).clone();
        let b = m.at(j, col).clone();
        *m.at_mut(i, col) = p * &a + q * &b;
        *m.at_mut(j, col) = r * &a + s * &b;
    }
}

fn negate_row(m: &mut IMat, i: usize) {
    for col in 0..m.ncols {
        let v = -m.at(i, col).clone();
        *m.at_mut(i, col) = v;
    }
}

fn sub_scaled_row(m: &mut IMat, dst: usize, src: usize, q: &BigInt) {
    for col in 0..m.ncols {
        let v = m.at(dst, col) - q * m.at(src, col);
        *m.at_mut(dst, col) = v;
    }
}

/// Canonical HNF basis of the lattice generated by rational row vectors.
///
/// Scales by the common denominator, takes the row HNF, and scales back;
/// HNF commutes with scalar scaling, so the result does not depend on the
/// denominator chosen.
pub fn rational_lattice_hnf(rows: &[Vec<BigRational>]) -> Vec<Vec<BigRational>> {
    if rows.is_empty() {
        return Vec::new();
    }
    let mut lcm = BigInt::one();
    for r in rows {
        for x in r {
            lcm = lcm.lcm(x.denom());
        }
    }
    let int_rows: Vec<Vec<BigInt>> = rows
        .iter()
        .map(|r| {
            r.iter()
                .map(|x| x.numer() * (&lcm / x.denom()))
                .collect()
        })
        .collect();
    let (h, _) = IMat::from_rows(int_rows).hnf_with_transform();
    h.nonzero_rows()
        .into_iter()
        .map(|r| {
            r.into_iter()
                .map(|x| BigRational::new(x, lcm.clone()))
                .collect()
        })
        .collect()
}

/// Least common multiple of all denominators in a rational matrix.
pub fn common_denominator(rows: &[Vec<BigRational>]) -> BigInt {
    let mut lcm = BigInt::one();
    for r in rows {
        for x in r {
            lcm = lcm.lcm(x.denom());
        }
    }
    lcm
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::FieldSpec;

    fn sc(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    fn sqrt2_plus(a: i64, b: i64) -> Scalar {
        Scalar::new(
            BigRational::from_integer(a.into()),
            BigRational::from_integer(b.into()),
            FieldSpec::new(2).unwrap(),
        )
    }

    #[test]
    fn rref_canonicalizes_row_space() {
        // two generating sets of the same plane give the same RREF
        let m1 = FMat::from_rows(vec![
            vec![sc(2), sc(0), sc(2)],
            vec![sc(0), sc(3), sc(3)],
        ]);
        let m2 = FMat::from_rows(vec![
            vec![sc(2), sc(3), sc(5)],
            vec![sc(4), sc(3), sc(7)],
        ]);
        assert_eq!(m1.rref().0, m2.rref().0);
        assert_eq!(m1.rref().1, vec![0, 1]);
    }

    #[test]
    fn kernel_annihilates() {
        let m = FMat::from_rows(vec![
            vec![sc(1), sc(2), sc(3)],
            vec![sc(2), sc(4), sc(6)],
        ]);
        let k = m.right_kernel();
        assert_eq!(k.len(), 2);
        for v in &k {
            assert!(m.mul_vec(v).iter().all(|x| x.is_zero()));
        }
    }

    #[test]
    fn kernel_with_irrational_entries() {
        // row (1, sqrt2): kernel is spanned by (-sqrt2, 1)
        let m = FMat::from_rows(vec![vec![sc(1), sqrt2_plus(0, 1)]]);
        let k = m.right_kernel();
        assert_eq!(k.len(), 1);
        assert_eq!(k[0][0], sqrt2_plus(0, -1));
        assert_eq!(k[0][1], sc(1));
    }

    #[test]
    fn solve_consistent_and_inconsistent() {
        let m = FMat::from_rows(vec![
            vec![sc(1), sc(1)],
            vec![sc(2), sc(2)],
        ]);
        assert_eq!(m.solve(&[sc(3), sc(6)]), Some(vec![sc(3), sc(0)]));
        assert_eq!(m.solve(&[sc(3), sc(5)]), None);
    }

    #[test]
    fn hnf_is_canonical_for_equal_lattices() {
        // {(2,0),(1,1)} and {(1,1),(3,1)} generate the same lattice
        let a = IMat::from_rows(vec![
            vec![BigInt::from(2), BigInt::from(0)],
            vec![BigInt::from(1), BigInt::from(1)],
        ]);
        let b = IMat::from_rows(vec![
            vec![BigInt::from(1), BigInt::from(1)],
            vec![BigInt::from(3), BigInt::from(1)],
        ]);
        let (ha, ua) = a.hnf_with_transform();
        let (hb, _) = b.hnf_with_transform();
        assert_eq!(ha.nonzero_rows(), hb.nonzero_rows());
        // transform really maps the input to the normal form
        let mut check = IMat::zeros(ua.nrows, a.ncols);
        for i in 0..ua.nrows {
            for j in 0..a.ncols {
                let mut acc = BigInt::zero();
                for k in 0..a.nrows {
                    acc += ua.at(i, k) * a.at(k, j);
                }
                *check.at_mut(i, j) = acc;
            }
        }
        assert_eq!(check, ha);
    }

    #[test]
    fn hnf_shape() {
        let m = IMat::from_rows(vec![
            vec![BigInt::from(4), BigInt::from(6)],
            vec![BigInt::from(6), BigInt::from(4)],
        ]);
        let (h, _) = m.hnf_with_transform();
        // pivots positive, above-pivot entries reduced
        assert_eq!(h.at(0, 0), &BigInt::from(2));
        assert!(h.at(1, 0).is_zero());
        assert!(h.at(1, 1) > &BigInt::zero());
        assert!(h.at(0, 1) < h.at(1, 1) && !h.at(0, 1).is_negative());
    }

    #[test]
    fn integer_kernel_is_saturated() {
        // kernel of (2 4) over the integers is generated by (2,-1), not (4,-2)
        let m = IMat::from_rows(vec![vec![BigInt::from(2), BigInt::from(4)]]);
        let k = m.integer_right_kernel();
        assert_eq!(k.len(), 1);
        let v = &k[0];
        let g = v[0].gcd(&v[1]);
        assert!(g.is_one());
        let pairing = &v[0] * BigInt::from(2) + &v[1] * BigInt::from(4);
        assert!(pairing.is_zero());
    }

    #[test]
    fn rational_lattice_hnf_denominator_free() {
        // 1/2 * Z^2 expressed two ways
        let l1 = vec![
            vec![BigRational::new(1.into(), 2.into()), BigRational::zero()],
            vec![BigRational::zero(), BigRational::new(1.into(), 2.into())],
        ];
        let l2 = vec![
            vec![BigRational::new(1.into(), 2.into()), BigRational::new(1.into(), 2.into())],
            vec![BigRational::zero(), BigRational::new(1.into(), 2.into())],
            vec![BigRational::new(3.into(), 2.into()), BigRational::new(1.into(), 2.into())],
        ];
        assert_eq!(rational_lattice_hnf(&l1), rational_lattice_hnf(&l2));
    }
}
