//! Lie algebras as sparse structure-constant tables.
//!
//! A `Table<T>` stores the coefficients `C_{i,j}^k` of `[X_i, X_j] = sum_k
//! C_{i,j}^k X_k` for `i < j` only; antisymmetry is implicit. Over `Scalar`
//! this is a concrete algebra with central series, filiform predicate,
//! characteristic sequence, quotients and base change. Over `Poly` the same
//! table carries a parametrized family, and `check_jacobi` returns the
//! residual polynomials, which is exactly the Jacobi ideal generator list the
//! generator module consumes.

use std::collections::BTreeMap;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::scalar::{RingElem, Scalar};

#[derive(Clone, PartialEq, Debug)]
pub struct Table<T: RingElem> {
    dim: usize,
    coeffs: BTreeMap<(usize, usize, usize), T>,
}

/// Concrete algebra over exact rationals.
pub type StructureTable = Table<Scalar>;
/// Parametrized family of algebras.
pub type PolyTable = Table<Poly>;

/// One failing Jacobi triple with its residual vector.
#[derive(Clone, Debug)]
pub struct JacobiFailure<T: RingElem> {
    pub triple: (usize, usize, usize),
    pub residual: Vec<T>,
}

/// Decreasing Jordan block sizes of a nilpotent `ad x` acting on the whole
/// algebra; parts sum to the dimension.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Serialize)]
pub struct CharSeq(pub Vec<usize>);

impl fmt::Display for CharSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(usize::to_string).collect();
        write!(f, "({})", parts.join(", "))
    }
}

impl<T: RingElem> Table<T> {
    pub fn new(dim: usize) -> Self {
        Table {
            dim,
            coeffs: BTreeMap::new(),
        }
    }

    /// The model filiform algebra `L_n`: `[X_0, X_i] = X_{i+1}` and nothing
    /// else.
    pub fn model(dim: usize) -> Self {
        let mut t = Table::new(dim);
        for i in 1..dim.saturating_sub(1) {
            t.set(0, i, i + 1, T::ring_one());
        }
        t
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    /// Set `C_{i,j}^k`; `i > j` is stored as the negated `(j, i)` entry.
    pub fn set(&mut self, i: usize, j: usize, k: usize, value: T) {
        assert!(i < self.dim && j < self.dim && k < self.dim, "index out of range");
        assert!(i != j, "diagonal bracket must stay zero");
        let (key, val) = if i < j {
            ((i, j, k), value)
        } else {
            ((j, i, k), value.ring_neg())
        };
        if val.is_ring_zero() {
            self.coeffs.remove(&key);
        } else {
            self.coeffs.insert(key, val);
        }
    }

    pub fn add_to(&mut self, i: usize, j: usize, k: usize, value: T) {
        let cur = self.get(i, j, k);
        self.set(i, j, k, cur.ring_add(&value));
    }

    pub fn get(&self, i: usize, j: usize, k: usize) -> T {
        if i == j {
            return T::ring_zero();
        }
        if i < j {
            self.coeffs.get(&(i, j, k)).cloned().unwrap_or_else(T::ring_zero)
        } else {
            self.coeffs
                .get(&(j, i, k))
                .map(|v| v.ring_neg())
                .unwrap_or_else(T::ring_zero)
        }
    }

    /// Stored entries, `i < j` only.
    pub fn entries(&self) -> impl Iterator<Item = (&(usize, usize, usize), &T)> {
        self.coeffs.iter()
    }

    pub fn is_abelian(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// `[X_i, X_j]` as a dense coordinate vector.
    pub fn bracket_basis(&self, i: usize, j: usize) -> Vec<T> {
        let mut out = vec![T::ring_zero(); self.dim];
        if i == j {
            return out;
        }
        let (a, b, flip) = if i < j { (i, j, false) } else { (j, i, true) };
        for (&(p, q, k), c) in self.coeffs.range((a, b, 0)..=(a, b, self.dim)) {
            debug_assert!((p, q) == (a, b));
            out[k] = if flip { c.ring_neg() } else { c.clone() };
        }
        out
    }

    /// Bilinear antisymmetric extension of the table.
    pub fn bracket(&self, x: &[T], y: &[T]) -> Result<Vec<T>> {
        if x.len() != self.dim || y.len() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: if x.len() != self.dim { x.len() } else { y.len() },
            });
        }
        let mut out = vec![T::ring_zero(); self.dim];
        for (&(i, j, k), c) in &self.coeffs {
            // c * (x_i y_j - x_j y_i)
            let cross = x[i]
                .ring_mul(&y[j])
                .ring_sub(&x[j].ring_mul(&y[i]));
            if !cross.is_ring_zero() {
                out[k] = out[k].ring_add(&c.ring_mul(&cross));
            }
        }
        Ok(out)
    }

    /// Matrix of `ad X_i` (columns are `[X_i, X_j]`).
    pub fn ad_basis(&self, i: usize) -> Matrix<T> {
        let cols: Vec<Vec<T>> = (0..self.dim).map(|j| self.bracket_basis(i, j)).collect();
        Matrix::from_fn(self.dim, self.dim, |r, c| cols[c][r].clone())
    }

    pub fn ad_vector(&self, x: &[T]) -> Result<Matrix<T>> {
        let mut cols = Vec::with_capacity(self.dim);
        for j in 0..self.dim {
            let mut e = vec![T::ring_zero(); self.dim];
            e[j] = T::ring_one();
            cols.push(self.bracket(x, &e)?);
        }
        Ok(Matrix::from_fn(self.dim, self.dim, |r, c| cols[c][r].clone()))
    }

    /// Jacobi residuals `[[X_i,X_j],X_k] + [[X_j,X_k],X_i] + [[X_k,X_i],X_j]`
    /// for all `i < j < k`; empty means the table is a Lie bracket. Over
    /// `Poly` the nonzero residual entries generate the Jacobi ideal.
    pub fn check_jacobi(&self) -> Vec<JacobiFailure<T>> {
        let mut failures = Vec::new();
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                for k in j + 1..self.dim {
                    let r = self.jacobi_residual(i, j, k);
                    if r.iter().any(|x| !x.is_ring_zero()) {
                        failures.push(JacobiFailure {
                            triple: (i, j, k),
                            residual: r,
                        });
                    }
                }
            }
        }
        failures
    }

    pub fn jacobi_ok(&self) -> bool {
        self.check_jacobi().is_empty()
    }

    /// `J(X_i, X_j, X_k)` as a coordinate vector.
    pub fn jacobi_residual(&self, i: usize, j: usize, k: usize) -> Vec<T> {
        let mut out = vec![T::ring_zero(); self.dim];
        let accumulate = |a: usize, b: usize, c: usize, out: &mut Vec<T>| {
            // [[X_a, X_b], X_c]
            let inner = self.bracket_basis(a, b);
            for (m, coeff) in inner.iter().enumerate() {
                if coeff.is_ring_zero() {
                    continue;
                }
                let outer = self.bracket_basis(m, c);
                for (s, val) in outer.iter().enumerate() {
                    if !val.is_ring_zero() {
                        out[s] = out[s].ring_add(&coeff.ring_mul(val));
                    }
                }
            }
        };
        accumulate(i, j, k, &mut out);
        accumulate(j, k, i, &mut out);
        accumulate(k, i, j, &mut out);
        out
    }
}

impl Table<Scalar> {
    pub fn to_poly(&self) -> PolyTable {
        let mut t = Table::new(self.dim);
        for (&(i, j, k), c) in &self.coeffs {
            t.set(i, j, k, Poly::constant(c.clone()));
        }
        t
    }

    /// Row basis of the span of a set of vectors.
    fn span_basis(vectors: &[Vec<Scalar>], dim: usize) -> Vec<Vec<Scalar>> {
        if vectors.is_empty() {
            return Vec::new();
        }
        let m = Matrix::from_rows(vectors.to_vec());
        let (rr, rank, _) = m.rref();
        let mut rows = Vec::with_capacity(rank);
        for i in 0..rank {
            rows.push((0..dim).map(|j| rr[(i, j)].clone()).collect());
        }
        rows
    }

    /// Dimensions of the descending central series `C^0 = g`,
    /// `C^{i+1} = [g, C^i]`, listed until the series stabilizes.
    pub fn descending_series_dims(&self) -> Vec<usize> {
        let mut dims = vec![self.dim];
        let mut current: Vec<Vec<Scalar>> = (0..self.dim)
            .map(|i| basis_vector(self.dim, i))
            .collect();
        loop {
            let mut products = Vec::new();
            for i in 0..self.dim {
                let e = basis_vector(self.dim, i);
                for v in &current {
                    products.push(self.bracket(&e, v).unwrap());
                }
            }
            let next = Self::span_basis(&products, self.dim);
            let d = next.len();
            if d == *dims.last().unwrap() {
                break;
            }
            dims.push(d);
            current = next;
            if d == 0 {
                break;
            }
        }
        dims
    }

    /// Dimensions of the ascending central series `C_0 = 0`,
    /// `C_{i+1} = {x : [x, g] in C_i}`, until stabilization.
    pub fn ascending_series_dims(&self) -> Vec<usize> {
        let mut dims = vec![0usize];
        let mut basis: Vec<Vec<Scalar>> = Vec::new();
        loop {
            let next = self.ascending_step(&basis);
            let d = next.len();
            if d == *dims.last().unwrap() {
                break;
            }
            dims.push(d);
            basis = next;
            if d == self.dim {
                break;
            }
        }
        dims
    }

    /// `{x : [x, g] subset of span(current)}` as a row basis.
    fn ascending_step(&self, current: &[Vec<Scalar>]) -> Vec<Vec<Scalar>> {
        let n = self.dim;
        // Annihilator of span(current): kernel of the row matrix.
        let ann: Vec<Vec<Scalar>> = if current.is_empty() {
            (0..n).map(|i| basis_vector(n, i)).collect()
        } else {
            Matrix::from_rows(current.to_vec()).rank_kernel().1
        };
        // x in C_{next} iff z . [x, e_j] = 0 for every j and every z in ann.
        let mut rows = Vec::new();
        for j in 0..n {
            let adj = self.ad_basis(j);
            for z in &ann {
                // row = -z^T ad_{e_j}; sign is irrelevant for the kernel
                let row: Vec<Scalar> = (0..n)
                    .map(|c| {
                        let mut acc = Scalar::zero();
                        for r in 0..n {
                            acc += &z[r] * &adj[(r, c)];
                        }
                        acc
                    })
                    .collect();
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
        if rows.is_empty() {
            return (0..n).map(|i| basis_vector(n, i)).collect();
        }
        let kernel = Matrix::from_rows(rows).rank_kernel().1;
        Self::span_basis(&kernel, n)
    }

    /// Row basis of the ascending term `C_i g`.
    pub fn ascending_term(&self, i: usize) -> Vec<Vec<Scalar>> {
        let mut basis = Vec::new();
        for _ in 0..i {
            let next = self.ascending_step(&basis);
            if next.len() == basis.len() {
                return basis;
            }
            basis = next;
        }
        basis
    }

    /// Row basis of the descending term `C^i g`.
    pub fn descending_term(&self, i: usize) -> Vec<Vec<Scalar>> {
        let mut current: Vec<Vec<Scalar>> = (0..self.dim)
            .map(|k| basis_vector(self.dim, k))
            .collect();
        for _ in 0..i {
            let mut products = Vec::new();
            for a in 0..self.dim {
                let e = basis_vector(self.dim, a);
                for vec in &current {
                    products.push(self.bracket(&e, vec).unwrap());
                }
            }
            current = Self::span_basis(&products, self.dim);
            if current.is_empty() {
                break;
            }
        }
        current
    }

    /// Least `i` with `C^i g = 0`, or `None` when the algebra is not
    /// nilpotent.
    pub fn nilindex(&self) -> Option<usize> {
        let dims = self.descending_series_dims();
        if *dims.last().unwrap() == 0 {
            Some(dims.len() - 1)
        } else {
            None
        }
    }

    /// `dim C_i g = i` for `0 <= i <= n - 2`.
    pub fn is_filiform(&self) -> bool {
        if self.dim < 2 {
            return true;
        }
        let dims = self.ascending_series_dims();
        for i in 0..=self.dim - 2 {
            let d = dims.get(i).copied().unwrap_or(*dims.last().unwrap());
            if d != i {
                return false;
            }
        }
        true
    }

    /// Jordan block sizes of the nilpotent operator `ad x` on the whole
    /// algebra, decreasing. The filiform model with `x = X_0` gives
    /// `(n-1, 1)`.
    pub fn characteristic_sequence(&self, x: &[Scalar]) -> Result<CharSeq> {
        let a = self.ad_vector(x)?;
        if !a.is_nilpotent() {
            return Err(Error::NotNilpotent);
        }
        let n = self.dim;
        // ranks of successive powers
        let mut ranks = vec![n];
        let mut p = a.clone();
        loop {
            let r = p.rank();
            ranks.push(r);
            if r == 0 {
                break;
            }
            p = p.matmul(&a);
        }
        // blocks of size >= k: ranks[k-1] - ranks[k]
        let mut parts = Vec::new();
        for k in 1..ranks.len() {
            let ge_k = ranks[k - 1] - ranks[k];
            let ge_k1 = if k + 1 < ranks.len() {
                ranks[k] - ranks[k + 1]
            } else {
                0
            };
            for _ in 0..ge_k.saturating_sub(ge_k1) {
                parts.push(k);
            }
        }
        parts.sort_unstable_by(|a, b| b.cmp(a));
        Ok(CharSeq(parts))
    }

    /// Characteristic sequence of the algebra: lexicographic maximum of
    /// `c(x)` over a finite probe set (basis vectors outside the derived
    /// algebra plus small rational combinations). This is a certified lower
    /// bound for the paper's supremum; it is exact whenever it reaches
    /// `(n-1, 1)`, which is the filiform case.
    pub fn characteristic_sequence_max(&self) -> Result<CharSeq> {
        let n = self.dim;
        let derived = self.descending_term(1);
        let derived_rank = derived.len();
        let in_derived = |v: &[Scalar]| -> bool {
            if derived_rank == 0 {
                return v.iter().all(Scalar::is_zero);
            }
            let mut rows = derived.clone();
            rows.push(v.to_vec());
            Matrix::from_rows(rows).rank() == derived_rank
        };
        let mut probes: Vec<Vec<Scalar>> = Vec::new();
        for i in 0..n {
            probes.push(basis_vector(n, i));
        }
        for i in 1..n {
            for lam in [1i64, -1, 2] {
                let mut v = basis_vector(n, 0);
                v[i] = Scalar::from_int(lam);
                probes.push(v);
            }
        }
        // a few dense probes on a fixed grid
        for s in 0..4i64 {
            let mut v = basis_vector(n, 0);
            for i in 1..n {
                v[i] = Scalar::from_int(((s + i as i64) % 3) - 1);
            }
            probes.push(v);
        }
        let mut best: Option<CharSeq> = None;
        for x in probes {
            if in_derived(&x) {
                continue;
            }
            if let Ok(seq) = self.characteristic_sequence(&x) {
                if best.as_ref().map_or(true, |b| seq > *b) {
                    best = Some(seq);
                }
            }
        }
        best.ok_or(Error::NotNilpotent)
    }

    /// Exact basis of the center.
    pub fn center_basis(&self) -> Vec<Vec<Scalar>> {
        let n = self.dim;
        let mut rows = Vec::new();
        for j in 0..n {
            let adj = self.ad_basis(j);
            for r in 0..n {
                let row: Vec<Scalar> = (0..n).map(|c| adj[(r, c)].clone()).collect();
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
        if rows.is_empty() {
            return (0..n).map(|i| basis_vector(n, i)).collect();
        }
        Self::span_basis(&Matrix::from_rows(rows).rank_kernel().1, n)
    }

    /// Quotient by the center, which must be spanned by the trailing basis
    /// vectors. For every filiform table in a Vergne basis the center is
    /// exactly `<X_{n-1}>` and the quotient keeps the Vergne alignment.
    pub fn quotient_by_center(&self) -> Result<StructureTable> {
        let center = self.center_basis();
        let z = center.len();
        let keep = self.dim - z;
        for t in keep..self.dim {
            for j in 0..self.dim {
                if self.bracket_basis(t, j).iter().any(|x| !x.is_zero()) {
                    return Err(Error::CenterNotTrailing(t));
                }
            }
        }
        let mut out = Table::new(keep);
        for (&(i, j, k), c) in &self.coeffs {
            if i < keep && j < keep && k < keep {
                out.set(i, j, k, c.clone());
            }
        }
        Ok(out)
    }

    /// Transport the bracket along an invertible `P` whose columns are the
    /// new basis vectors: `[x, y]' = P^{-1} [P x, P y]`.
    pub fn change_basis(&self, p: &Matrix<Scalar>) -> Result<StructureTable> {
        if p.nrows() != self.dim || p.ncols() != self.dim {
            return Err(Error::DimensionMismatch {
                expected: self.dim,
                got: p.nrows(),
            });
        }
        let pinv = p.inverse()?;
        let cols: Vec<Vec<Scalar>> = (0..self.dim)
            .map(|j| (0..self.dim).map(|i| p[(i, j)].clone()).collect())
            .collect();
        let mut out = Table::new(self.dim);
        for i in 0..self.dim {
            for j in i + 1..self.dim {
                let br = self.bracket(&cols[i], &cols[j])?;
                let new = pinv.apply(&br);
                for (k, val) in new.into_iter().enumerate() {
                    if !val.is_zero() {
                        out.set(i, j, k, val);
                    }
                }
            }
        }
        Ok(out)
    }

    pub fn to_json(&self, params: Option<&BTreeMap<String, Scalar>>) -> serde_json::Value {
        let mut pairs: BTreeMap<(usize, usize), BTreeMap<String, String>> = BTreeMap::new();
        for (&(i, j, k), c) in &self.coeffs {
            pairs
                .entry((i, j))
                .or_default()
                .insert(k.to_string(), c.to_string());
        }
        let brackets: Vec<serde_json::Value> = pairs
            .into_iter()
            .map(|((i, j), coeffs)| {
                serde_json::json!({ "i": i, "j": j, "coeffs": coeffs })
            })
            .collect();
        let mut obj = serde_json::json!({ "dim": self.dim, "brackets": brackets });
        if let Some(p) = params {
            let pm: BTreeMap<String, String> =
                p.iter().map(|(k, v)| (k.clone(), v.to_string())).collect();
            obj["params"] = serde_json::json!(pm);
        }
        obj
    }

    pub fn from_json(value: &serde_json::Value) -> Result<StructureTable> {
        #[derive(Deserialize)]
        struct BracketJson {
            i: usize,
            j: usize,
            coeffs: BTreeMap<String, String>,
        }
        #[derive(Deserialize)]
        struct AlgebraJson {
            dim: usize,
            brackets: Vec<BracketJson>,
        }
        let parsed: AlgebraJson = serde_json::from_value(value.clone())?;
        let mut table = Table::new(parsed.dim);
        for b in parsed.brackets {
            if b.i >= b.j {
                return Err(Error::Malformed(format!(
                    "bracket must have i < j, got ({}, {})",
                    b.i, b.j
                )));
            }
            if b.j >= parsed.dim {
                return Err(Error::IndexOutOfRange {
                    index: b.j,
                    dim: parsed.dim,
                });
            }
            for (ks, cs) in b.coeffs {
                let k: usize = ks
                    .parse()
                    .map_err(|_| Error::Malformed(format!("bad basis index `{ks}`")))?;
                if k >= parsed.dim {
                    return Err(Error::IndexOutOfRange {
                        index: k,
                        dim: parsed.dim,
                    });
                }
                let c: Scalar = cs.parse()?;
                table.set(b.i, b.j, k, c);
            }
        }
        Ok(table)
    }
}

impl Table<Poly> {
    /// Evaluate every coefficient at a rational point.
    pub fn eval(&self, assignment: &BTreeMap<String, Scalar>) -> Result<StructureTable> {
        let mut out = Table::new(self.dim);
        for (&(i, j, k), c) in &self.coeffs {
            let val = c.eval(assignment)?;
            if !val.is_zero() {
                out.set(i, j, k, val);
            }
        }
        Ok(out)
    }

    /// Substitute polynomials for parameters in every coefficient.
    pub fn substitute(&self, map: &BTreeMap<String, Poly>) -> PolyTable {
        let mut out = Table::new(self.dim);
        for (&(i, j, k), c) in &self.coeffs {
            let val = c.substitute(map);
            if !val.is_zero() {
                out.set(i, j, k, val);
            }
        }
        out
    }
}

pub fn basis_vector(dim: usize, i: usize) -> Vec<Scalar> {
    let mut v = vec![Scalar::zero(); dim];
    v[i] = Scalar::one();
    v
}

/// Subspace equality via rank comparison of stacked row bases.
pub fn equal_span(a: &[Vec<Scalar>], b: &[Vec<Scalar>]) -> bool {
    if a.is_empty() && b.is_empty() {
        return true;
    }
    if a.is_empty() || b.is_empty() {
        return false;
    }
    let ra = Matrix::from_rows(a.to_vec()).rank();
    let rb = Matrix::from_rows(b.to_vec()).rank();
    if ra != rb {
        return false;
    }
    let mut all = a.to_vec();
    all.extend(b.to_vec());
    Matrix::from_rows(all).rank() == ra
}

#[cfg(test)]
mod tests {
    use super::*;

    fn heisenberg() -> StructureTable {
        let mut t = Table::new(3);
        t.set(0, 1, 2, Scalar::one());
        t
    }

    #[test]
    fn heisenberg_is_a_lie_algebra() {
        let t = heisenberg();
        assert!(t.jacobi_ok());
        assert!(t.is_filiform());
        assert_eq!(t.nilindex(), Some(2));
    }

    #[test]
    fn bracket_of_vector_with_itself_vanishes() {
        let t = Table::<Scalar>::model(9);
        let x: Vec<Scalar> = (0..9).map(|i| Scalar::from_int(i as i64 - 4)).collect();
        let out = t.bracket(&x, &x).unwrap();
        assert!(out.iter().all(Scalar::is_zero));
    }

    #[test]
    fn model_bracket_spine() {
        // [X_0, X_3] = X_4 in L_9.
        let t = Table::<Scalar>::model(9);
        let out = t.bracket(&basis_vector(9, 0), &basis_vector(9, 3)).unwrap();
        assert_eq!(out, basis_vector(9, 4));
    }

    #[test]
    fn model_l9_central_series() {
        let t = Table::<Scalar>::model(9);
        assert_eq!(
            t.descending_series_dims(),
            vec![9, 7, 6, 5, 4, 3, 2, 1, 0]
        );
        assert_eq!(t.nilindex(), Some(8));
        assert!(t.is_filiform());
    }

    #[test]
    fn abelian_series_and_filiform() {
        let t = Table::<Scalar>::new(4);
        assert_eq!(t.descending_series_dims(), vec![4, 0]);
        assert_eq!(t.nilindex(), Some(1));
        assert!(!t.is_filiform());
        assert_eq!(t.center_basis().len(), 4);
    }

    #[test]
    fn central_series_duality_on_model() {
        // C_i g = C^{n-i-1} g for filiform algebras.
        let t = Table::<Scalar>::model(8);
        for i in 0..8 {
            let asc = t.ascending_term(i);
            let desc = t.descending_term(8 - i - 1);
            assert!(equal_span(&asc, &desc), "duality fails at i = {i}");
        }
    }

    #[test]
    fn model_characteristic_sequence() {
        let t = Table::<Scalar>::model(9);
        let seq = t.characteristic_sequence(&basis_vector(9, 0)).unwrap();
        assert_eq!(seq, CharSeq(vec![8, 1]));
        assert_eq!(t.characteristic_sequence_max().unwrap(), CharSeq(vec![8, 1]));
    }

    #[test]
    fn abelian_characteristic_sequence() {
        let t = Table::<Scalar>::new(3);
        let seq = t.characteristic_sequence(&basis_vector(3, 0)).unwrap();
        assert_eq!(seq, CharSeq(vec![1, 1, 1]));
    }

    #[test]
    fn filiform_center_is_last_vector() {
        let t = Table::<Scalar>::model(7);
        let c = t.center_basis();
        assert_eq!(c.len(), 1);
        assert_eq!(c[0], basis_vector(7, 6));
    }

    #[test]
    fn quotient_of_heisenberg() {
        let q = heisenberg().quotient_by_center().unwrap();
        assert_eq!(q.dim(), 2);
        assert!(q.is_abelian());
    }

    #[test]
    fn change_basis_identity_and_scaling() {
        let t = Table::<Scalar>::model(5);
        let id = Matrix::identity(5);
        assert_eq!(t.change_basis(&id).unwrap(), t);
        // P = 2 I rescales every coefficient by 2.
        let two = Matrix::from_fn(5, 5, |i, j| {
            if i == j {
                Scalar::from_int(2)
            } else {
                Scalar::zero()
            }
        });
        let scaled = t.change_basis(&two).unwrap();
        assert_eq!(scaled.get(0, 1, 2), Scalar::from_int(2));
    }

    #[test]
    fn change_basis_round_trip() {
        let t = Table::<Scalar>::model(6);
        let mut p = Matrix::identity(6);
        p[(0, 3)] = Scalar::ratio(1, 2);
        p[(2, 5)] = Scalar::from_int(-3);
        p[(1, 4)] = Scalar::from_int(2);
        let back = t
            .change_basis(&p)
            .unwrap()
            .change_basis(&p.inverse().unwrap())
            .unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn json_round_trip_and_validation() {
        let t = heisenberg();
        let json = t.to_json(None);
        let back = Table::from_json(&json).unwrap();
        assert_eq!(back, t);

        let bad = serde_json::json!({
            "dim": 9,
            "brackets": [{"i": 0, "j": 1, "coeffs": {"9": "1"}}]
        });
        assert!(matches!(
            Table::from_json(&bad),
            Err(Error::IndexOutOfRange { index: 9, dim: 9 })
        ));
    }
}
