//! Exact dense matrices over a commutative ring.
//!
//! Rank and kernel computations run over `Scalar` (a field); determinants use
//! fraction-free Bareiss elimination and therefore also work over `Poly`.
//! Skew matrices additionally get an exact Pfaffian, which is the cheap route
//! to nondegeneracy of a 2-form (`det = Pf^2`).

use std::collections::HashMap;
use std::fmt;
use std::ops::{Index, IndexMut};

use crate::error::{Error, Result};
use crate::scalar::{RingElem, Scalar};

#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Matrix<T> {
    rows: usize,
    cols: usize,
    data: Vec<T>,
}

impl<T: RingElem> Matrix<T> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix {
            rows,
            cols,
            data: vec![T::ring_zero(); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = T::ring_one();
        }
        m
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> T) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        Matrix { rows, cols, data }
    }

    pub fn from_rows(rows: Vec<Vec<T>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix {
            rows: r,
            cols: c,
            data: rows.into_iter().flatten().collect(),
        }
    }

    pub fn nrows(&self) -> usize {
        self.rows
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[T] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn transpose(&self) -> Self {
        Matrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map<U: RingElem>(&self, f: impl Fn(&T) -> U) -> Matrix<U> {
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(f).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.ring_add(b))
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Matrix {
            rows: self.rows,
            cols: self.cols,
            data: self
                .data
                .iter()
                .zip(&other.data)
                .map(|(a, b)| a.ring_sub(b))
                .collect(),
        }
    }

    pub fn neg(&self) -> Self {
        self.map(|x| x.ring_neg())
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "inner dimensions differ");
        Matrix::from_fn(self.rows, other.cols, |i, j| {
            let mut acc = T::ring_zero();
            for k in 0..self.cols {
                acc = acc.ring_add(&self[(i, k)].ring_mul(&other[(k, j)]));
            }
            acc
        })
    }

    /// `AB - BA`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.matmul(other).sub(&other.matmul(self))
    }

    pub fn apply(&self, vec: &[T]) -> Vec<T> {
        assert_eq!(self.cols, vec.len());
        (0..self.rows)
            .map(|i| {
                let mut acc = T::ring_zero();
                for j in 0..self.cols {
                    acc = acc.ring_add(&self[(i, j)].ring_mul(&vec[j]));
                }
                acc
            })
            .collect()
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(RingElem::is_ring_zero)
    }

    pub fn trace(&self) -> T {
        assert!(self.is_square());
        let mut acc = T::ring_zero();
        for i in 0..self.rows {
            acc = acc.ring_add(&self[(i, i)]);
        }
        acc
    }

    fn swap_rows(&mut self, a: usize, b: usize) {
        if a == b {
            return;
        }
        for j in 0..self.cols {
            self.data.swap(a * self.cols + j, b * self.cols + j);
        }
    }

    /// Exact determinant by fraction-free (Bareiss) elimination with row
    /// pivoting. Every intermediate entry is a minor of the input, so the
    /// divisions below are exact even over a polynomial ring.
    pub fn det(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        if n == 0 {
            return Ok(T::ring_one());
        }
        if n == 1 {
            return Ok(self[(0, 0)].clone());
        }
        let mut m = self.clone();
        let mut negated = false;
        let mut prev = T::ring_one();
        for k in 0..n - 1 {
            if m[(k, k)].is_ring_zero() {
                match (k + 1..n).find(|&r| !m[(r, k)].is_ring_zero()) {
                    Some(r) => {
                        m.swap_rows(k, r);
                        negated = !negated;
                    }
                    None => return Ok(T::ring_zero()),
                }
            }
            for i in k + 1..n {
                for j in k + 1..n {
                    let num = m[(k, k)]
                        .ring_mul(&m[(i, j)])
                        .ring_sub(&m[(i, k)].ring_mul(&m[(k, j)]));
                    m[(i, j)] = num
                        .ring_exact_div(&prev)
                        .expect("Bareiss division must be exact");
                }
                m[(i, k)] = T::ring_zero();
            }
            prev = m[(k, k)].clone();
        }
        let d = m[(n - 1, n - 1)].clone();
        Ok(if negated { d.ring_neg() } else { d })
    }

    /// Exact Pfaffian of a skew-symmetric matrix via expansion along the
    /// first active row, memoized on the set of active indices.
    pub fn pfaffian(&self) -> Result<T> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        assert!(n <= 32, "pfaffian bitmask limited to 32 indices");
        if n % 2 == 1 {
            return Ok(T::ring_zero());
        }
        let mut memo: HashMap<u32, T> = HashMap::new();
        let full: u32 = if n == 32 { u32::MAX } else { (1u32 << n) - 1 };
        Ok(self.pf_rec(full, &mut memo))
    }

    fn pf_rec(&self, active: u32, memo: &mut HashMap<u32, T>) -> T {
        if active == 0 {
            return T::ring_one();
        }
        if let Some(v) = memo.get(&active) {
            return v.clone();
        }
        let i0 = active.trailing_zeros() as usize;
        let rest = active & !(1 << i0);
        let mut acc = T::ring_zero();
        let mut pos = 0u32;
        let mut bits = rest;
        while bits != 0 {
            let j = bits.trailing_zeros() as usize;
            bits &= bits - 1;
            let a = &self[(i0, j)];
            if !a.is_ring_zero() {
                let sub = self.pf_rec(rest & !(1 << j), memo);
                let term = a.ring_mul(&sub);
                acc = if pos % 2 == 0 {
                    acc.ring_add(&term)
                } else {
                    acc.ring_sub(&term)
                };
            }
            pos += 1;
        }
        memo.insert(active, acc.clone());
        acc
    }
}

impl Matrix<Scalar> {
    /// Reduced row echelon form; returns `(rref, rank, pivot columns)`.
    pub fn rref(&self) -> (Matrix<Scalar>, usize, Vec<usize>) {
        let mut m = self.clone();
        let (rows, cols) = (m.rows, m.cols);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..cols {
            if r == rows {
                break;
            }
            let Some(p) = (r..rows).find(|&i| !m[(i, c)].is_zero()) else {
                continue;
            };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().unwrap();
            for j in c..cols {
                m[(r, j)] = &m[(r, j)] * &inv;
            }
            for i in 0..rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in c..cols {
                        let delta = &f * &m[(r, j)];
                        m[(i, j)] -= delta;
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, r, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1
    }

    /// Rank together with an exact basis of the right kernel.
    /// `rank + kernel.len() == cols` always.
    pub fn rank_kernel(&self) -> (usize, Vec<Vec<Scalar>>) {
        let (rr, rank, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        let mut basis = Vec::with_capacity(free.len());
        for &f in &free {
            let mut vec = vec![Scalar::zero(); self.cols];
            vec[f] = Scalar::one();
            for (row, &p) in pivots.iter().enumerate() {
                vec[p] = -&rr[(row, f)];
            }
            basis.push(vec);
        }
        (rank, basis)
    }

    /// One exact solution of `A x = b`, or `None` when inconsistent.
    pub fn solve(&self, b: &[Scalar]) -> Option<Vec<Scalar>> {
        assert_eq!(self.rows, b.len());
        let aug = Matrix::from_fn(self.rows, self.cols + 1, |i, j| {
            if j < self.cols {
                self[(i, j)].clone()
            } else {
                b[i].clone()
            }
        });
        let (rr, _, pivots) = aug.rref();
        if pivots.contains(&self.cols) {
            return None;
        }
        let mut x = vec![Scalar::zero(); self.cols];
        for (row, &p) in pivots.iter().enumerate() {
            x[p] = rr[(row, self.cols)].clone();
        }
        Some(x)
    }

    pub fn inverse(&self) -> Result<Matrix<Scalar>> {
        if !self.is_square() {
            return Err(Error::NonSquare {
                rows: self.rows,
                cols: self.cols,
            });
        }
        let n = self.rows;
        let aug = Matrix::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                Scalar::one()
            } else {
                Scalar::zero()
            }
        });
        let (rr, rank, _) = aug.rref();
        if rank < n {
            return Err(Error::SingularMatrix);
        }
        Ok(Matrix::from_fn(n, n, |i, j| rr[(i, j + n)].clone()))
    }

    /// Nilpotency certified exactly: some power up to `nrows` vanishes.
    pub fn is_nilpotent(&self) -> bool {
        assert!(self.is_square());
        let mut p = self.clone();
        for _ in 0..self.rows {
            if p.is_zero() {
                return true;
            }
            p = p.matmul(self);
        }
        p.is_zero()
    }
}

impl<T> Index<(usize, usize)> for Matrix<T> {
    type Output = T;
    fn index(&self, (i, j): (usize, usize)) -> &T {
        &self.data[i * self.cols + j]
    }
}

impl<T> IndexMut<(usize, usize)> for Matrix<T> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut T {
        &mut self.data[i * self.cols + j]
    }
}

impl<T: fmt::Display> fmt::Display for Matrix<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 0..self.rows {
            let row: Vec<String> = (0..self.cols)
                .map(|j| self.data[i * self.cols + j].to_string())
                .collect();
            writeln!(f, "[{}]", row.join(", "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{c, v};
    use crate::poly::Poly;
    use proptest::prelude::*;

    fn si(n: i64) -> Scalar {
        Scalar::from_int(n)
    }

    #[test]
    fn identity_rank_and_det() {
        let id: Matrix<Scalar> = Matrix::identity(3);
        let (rank, kernel) = id.rank_kernel();
        assert_eq!(rank, 3);
        assert!(kernel.is_empty());
        assert_eq!(id.det().unwrap(), Scalar::one());
    }

    #[test]
    fn zero_matrix_kernel() {
        let z: Matrix<Scalar> = Matrix::zeros(2, 4);
        let (rank, kernel) = z.rank_kernel();
        assert_eq!(rank, 0);
        assert_eq!(kernel.len(), 4);
    }

    #[test]
    fn skew_two_by_two_det() {
        let cc = v("c");
        let m = Matrix::from_rows(vec![
            vec![Poly::zero(), cc.clone()],
            vec![-&cc, Poly::zero()],
        ]);
        assert_eq!(m.det().unwrap(), &cc * &cc);
        assert_eq!(m.pfaffian().unwrap(), cc);
    }

    #[test]
    fn odd_rank_skew_det_vanishes() {
        // Degenerate 2-form on a 4-dim space with a 1-dim radical:
        // rank-2 skew matrix, zero determinant.
        let mut m: Matrix<Scalar> = Matrix::zeros(4, 4);
        m[(0, 1)] = si(1);
        m[(1, 0)] = si(-1);
        assert_eq!(m.det().unwrap(), Scalar::zero());
        assert_eq!(m.pfaffian().unwrap(), Scalar::zero());
    }

    #[test]
    fn poly_det_bareiss_matches_cofactor() {
        let m = Matrix::from_rows(vec![
            vec![v("a"), v("b"), c(1)],
            vec![c(0), v("a"), v("b")],
            vec![c(2), c(0), v("a")],
        ]);
        // Cofactor expansion by hand: a(a^2) - b(-2b) + 1(-2a)
        let expected = &(&v("a") * &(&v("a") * &v("a"))) + &(&(c(2) * v("b")) * &v("b"))
            - (c(2) * v("a"));
        assert_eq!(m.det().unwrap(), expected);
    }

    #[test]
    fn solve_and_inverse() {
        let m = Matrix::from_rows(vec![vec![si(2), si(1)], vec![si(1), si(1)]]);
        let x = m.solve(&[si(3), si(2)]).unwrap();
        assert_eq!(x, vec![si(1), si(1)]);
        let inv = m.inverse().unwrap();
        assert_eq!(m.matmul(&inv), Matrix::identity(2));
    }

    #[test]
    fn pfaffian_squares_to_det() {
        let entries = [(0usize, 1usize, 2i64), (0, 2, -1), (0, 3, 3), (1, 2, 5), (1, 3, -2), (2, 3, 1)];
        let mut m: Matrix<Scalar> = Matrix::zeros(4, 4);
        for &(i, j, val) in &entries {
            m[(i, j)] = si(val);
            m[(j, i)] = si(-val);
        }
        let pf = m.pfaffian().unwrap();
        assert_eq!(&pf * &pf, m.det().unwrap());
    }

    proptest! {
        #[test]
        fn det_nonzero_iff_full_rank(vals in proptest::collection::vec(-4i64..=4, 16)) {
            let m = Matrix::from_fn(4, 4, |i, j| si(vals[4 * i + j]));
            let (rank, kernel) = m.rank_kernel();
            let d = m.det().unwrap();
            prop_assert_eq!(rank + kernel.len(), 4);
            prop_assert_eq!(!d.is_zero(), rank == 4);
            for k in kernel {
                let image = m.apply(&k);
                prop_assert!(image.iter().all(Scalar::is_zero));
            }
        }
    }
}
