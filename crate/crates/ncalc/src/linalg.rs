//! Exact dense linear algebra over the rationals.
//!
//! Everything here is plain Gaussian elimination; matrices at desk scale
//! (a few thousand rows at worst) keep this comfortably fast.

use crate::scalar::Rational;
use num_traits::{One, Zero};

pub type Vector = Vec<Rational>;

/// Row-major dense matrix over Q.
#[derive(Clone, Debug, PartialEq)]
pub struct Matrix {
    pub rows: Vec<Vector>,
    pub ncols: usize,
}

impl Matrix {
    pub fn zero(nrows: usize, ncols: usize) -> Self {
        Matrix {
            rows: vec![vec![Rational::zero(); ncols]; nrows],
            ncols,
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Matrix::zero(n, n);
        for i in 0..n {
            m.rows[i][i] = Rational::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vector>, ncols: usize) -> Self {
        debug_assert!(rows.iter().all(|r| r.len() == ncols));
        Matrix { rows, ncols }
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = Matrix::zero(self.ncols, self.nrows());
        for (i, row) in self.rows.iter().enumerate() {
            for (j, v) in row.iter().enumerate() {
                t.rows[j][i] = v.clone();
            }
        }
        t
    }

    pub fn mat_mul(&self, other: &Matrix) -> Matrix {
        assert_eq!(self.ncols, other.nrows());
        let mut out = Matrix::zero(self.nrows(), other.ncols);
        for i in 0..self.nrows() {
            for (k, aik) in self.rows[i].iter().enumerate() {
                if aik.is_zero() {
                    continue;
                }
                for j in 0..other.ncols {
                    let v = aik * &other.rows[k][j];
                    if !v.is_zero() {
                        out.rows[i][j] += v;
                    }
                }
            }
        }
        out
    }

    pub fn apply(&self, v: &[Rational]) -> Vector {
        assert_eq!(self.ncols, v.len());
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(Rational::zero(), |acc, (a, b)| acc + a * b)
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        Echelon::from_rows(self.rows.clone(), self.ncols).rank()
    }

    /// Basis of the right kernel (solutions of `A x = 0`).
    pub fn kernel_basis(&self) -> Vec<Vector> {
        let ech = Echelon::from_rows(self.rows.clone(), self.ncols);
        let pivots = &ech.pivot_cols;
        let is_pivot: Vec<bool> = {
            let mut v = vec![false; self.ncols];
            for &p in pivots {
                v[p] = true;
            }
            v
        };
        let mut basis = Vec::new();
        for free in 0..self.ncols {
            if is_pivot[free] {
                continue;
            }
            let mut x = vec![Rational::zero(); self.ncols];
            x[free] = Rational::one();
            // back-substitute: rows are in rref
            for (r, &p) in ech.pivot_cols.iter().enumerate() {
                x[p] = -ech.rows[r][free].clone();
            }
            basis.push(x);
        }
        basis
    }

    /// Solves `A x = b`; returns one solution if consistent.
    pub fn solve(&self, b: &[Rational]) -> Option<Vector> {
        assert_eq!(self.nrows(), b.len());
        let mut aug_rows = Vec::with_capacity(self.nrows());
        for (row, bv) in self.rows.iter().zip(b) {
            let mut r = row.clone();
            r.push(bv.clone());
            aug_rows.push(r);
        }
        let ech = Echelon::from_rows(aug_rows, self.ncols + 1);
        // inconsistent iff pivot in the last column
        if ech.pivot_cols.contains(&self.ncols) {
            return None;
        }
        let mut x = vec![Rational::zero(); self.ncols];
        for (r, &p) in ech.pivot_cols.iter().enumerate() {
            x[p] = ech.rows[r][self.ncols].clone();
        }
        Some(x)
    }

    /// Exact inverse of a square matrix, if invertible.
    pub fn inverse(&self) -> Option<Matrix> {
        let n = self.nrows();
        if n != self.ncols {
            return None;
        }
        let mut aug_rows = Vec::with_capacity(n);
        for (i, row) in self.rows.iter().enumerate() {
            let mut r = row.clone();
            r.extend((0..n).map(|j| {
                if i == j {
                    Rational::one()
                } else {
                    Rational::zero()
                }
            }));
            aug_rows.push(r);
        }
        let ech = Echelon::from_rows(aug_rows, 2 * n);
        if ech.rank() < n || ech.pivot_cols[..n] != (0..n).collect::<Vec<_>>()[..] {
            return None;
        }
        let rows = ech.rows[..n]
            .iter()
            .map(|r| r[n..].to_vec())
            .collect();
        Some(Matrix::from_rows(rows, n))
    }
}

/// Reduced row echelon form with pivot bookkeeping.
///
/// Also serves as a subspace handle: `reduce` computes the canonical coset
/// representative of a vector modulo the row span.
#[derive(Clone, Debug)]
pub struct Echelon {
    pub rows: Vec<Vector>,
    pub pivot_cols: Vec<usize>,
    pub ncols: usize,
}

impl Echelon {
    pub fn empty(ncols: usize) -> Self {
        Echelon {
            rows: Vec::new(),
            pivot_cols: Vec::new(),
            ncols,
        }
    }

    pub fn from_rows(rows: Vec<Vector>, ncols: usize) -> Self {
        let mut e = Echelon::empty(ncols);
        for row in rows {
            e.insert(row);
        }
        e
    }

    pub fn rank(&self) -> usize {
        self.rows.len()
    }

    /// Inserts a row, maintaining rref.  Returns true if the row enlarged
    /// the span.
    pub fn insert(&mut self, row: Vector) -> bool {
        debug_assert_eq!(row.len(), self.ncols);
        let mut row = self.reduce(row);
        let pivot = match row.iter().position(|v| !v.is_zero()) {
            Some(p) => p,
            None => return false,
        };
        let inv = row[pivot].recip();
        for v in row.iter_mut() {
            if !v.is_zero() {
                *v *= &inv;
            }
        }
        // clear this column in the existing rows
        for r in self.rows.iter_mut() {
            let c = r[pivot].clone();
            if !c.is_zero() {
                for (rv, nv) in r.iter_mut().zip(&row) {
                    if !nv.is_zero() {
                        *rv -= &c * nv;
                    }
                }
            }
        }
        // keep rows ordered by pivot column
        let at = self
            .pivot_cols
            .iter()
            .position(|&p| p > pivot)
            .unwrap_or(self.rows.len());
        self.rows.insert(at, row);
        self.pivot_cols.insert(at, pivot);
        true
    }

    /// Canonical representative of `v` modulo the row span.
    pub fn reduce(&self, mut v: Vector) -> Vector {
        for (r, &p) in self.rows.iter().zip(&self.pivot_cols) {
            let c = v[p].clone();
            if !c.is_zero() {
                for (vv, rv) in v.iter_mut().zip(r) {
                    if !rv.is_zero() {
                        *vv -= &c * rv;
                    }
                }
            }
        }
        v
    }

    pub fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v.to_vec()).iter().all(|x| x.is_zero())
    }
}

/// dim(ker d_n) etc. bookkeeping for a two-step complex piece
/// `U --f--> V --g--> W`: returns dim ker(g) - rank(f), asserting g∘f = 0
/// is the caller's responsibility.
pub fn homology_dim(f: &Matrix, g: &Matrix) -> usize {
    let dim_v = g.ncols;
    assert_eq!(f.nrows(), dim_v);
    let ker = dim_v - g.rank();
    let im = f.rank();
    assert!(ker >= im, "not a complex: rank(f)={} > dim ker(g)={}", im, ker);
    ker - im
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    fn m(rows: Vec<Vec<i64>>) -> Matrix {
        let ncols = rows[0].len();
        Matrix::from_rows(
            rows.into_iter()
                .map(|r| r.into_iter().map(rat).collect())
                .collect(),
            ncols,
        )
    }

    #[test]
    fn rank_and_kernel() {
        let a = m(vec![vec![1, 2, 3], vec![2, 4, 6], vec![1, 1, 1]]);
        assert_eq!(a.rank(), 2);
        let ker = a.kernel_basis();
        assert_eq!(ker.len(), 1);
        for k in &ker {
            assert!(a.apply(k).iter().all(|v| v.is_zero()));
        }
    }

    #[test]
    fn solve_and_inverse() {
        let a = m(vec![vec![2, 1], vec![1, 1]]);
        let x = a.solve(&[rat(3), rat(2)]).unwrap();
        assert_eq!(a.apply(&x), vec![rat(3), rat(2)]);
        let inv = a.inverse().unwrap();
        assert_eq!(a.mat_mul(&inv), Matrix::identity(2));

        let sing = m(vec![vec![1, 2], vec![2, 4]]);
        assert!(sing.inverse().is_none());
        assert!(sing.solve(&[rat(0), rat(1)]).is_none());
    }

    #[test]
    fn echelon_reduction() {
        let mut e = Echelon::empty(3);
        assert!(e.insert(vec![rat(1), rat(1), rat(0)]));
        assert!(e.insert(vec![rat(0), rat(2), rat(2)]));
        assert!(!e.insert(vec![rat(1), rat(-1), rat(-2)]));
        assert!(e.contains(&[rat(2), rat(0), rat(-2)]));
        let r = e.reduce(vec![rat(0), rat(0), rat(1)]);
        assert_eq!(r, vec![rat(0), rat(0), rat(1)]);
    }
}
