//! Chevalley-Eilenberg exterior calculus on the dual of a structure table.
//!
//! `ExtElement` is a sparse exterior-algebra element over the dual basis
//! `{w_0, ..., w_{n-1}}`. The degree-1 differential is `dw(X, Y) =
//! -w([X, Y])`; closedness of a 2-form is the cyclic-sum condition. Contact
//! detection runs two independent routes: full wedge expansion of
//! `w ^ (dw)^p` (primary) and the rank of the induced form on a complement
//! of a transverse vector (cross-check). Symplectic detection searches the
//! exact closed-form space, first at seeded random rational points, then by
//! symbolic Pfaffian expansion, so a negative answer is a proof and never a
//! sampling artifact.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lie::{StructureTable, Table};
use crate::matrix::Matrix;
use crate::poly::Poly;
use crate::rng;
use crate::scalar::{RingElem, Scalar};

/// Sparse exterior-algebra element of a fixed homogeneous degree.
#[derive(Clone, PartialEq, Debug)]
pub struct ExtElement<T: RingElem> {
    dim: usize,
    degree: usize,
    terms: BTreeMap<Vec<usize>, T>,
}

pub type ExtScalar = ExtElement<Scalar>;
pub type ExtPoly = ExtElement<Poly>;

impl<T: RingElem> ExtElement<T> {
    pub fn zero(dim: usize, degree: usize) -> Self {
        ExtElement {
            dim,
            degree,
            terms: BTreeMap::new(),
        }
    }

    /// The dual basis 1-form `w_i`.
    pub fn one_form(dim: usize, i: usize) -> Self {
        let mut e = Self::zero(dim, 1);
        e.set(vec![i], T::ring_one());
        e
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Vec<usize>, &T)> {
        self.terms.iter()
    }

    /// Set the coefficient of a strictly increasing index tuple.
    pub fn set(&mut self, key: Vec<usize>, value: T) {
        assert_eq!(key.len(), self.degree, "tuple length must match degree");
        assert!(key.windows(2).all(|w| w[0] < w[1]), "indices must increase");
        assert!(key.iter().all(|&i| i < self.dim), "index out of range");
        if value.is_ring_zero() {
            self.terms.remove(&key);
        } else {
            self.terms.insert(key, value);
        }
    }

    pub fn coefficient(&self, key: &[usize]) -> T {
        self.terms.get(key).cloned().unwrap_or_else(T::ring_zero)
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim);
        assert!(self.is_zero() || other.is_zero() || self.degree == other.degree);
        let mut out = self.clone();
        for (k, v) in &other.terms {
            let cur = out.coefficient(k);
            out.set(k.clone(), cur.ring_add(v));
        }
        out
    }

    pub fn scale(&self, c: &T) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (k, v) in &self.terms {
            out.set(k.clone(), v.ring_mul(c));
        }
        out
    }

    pub fn neg(&self) -> Self {
        let mut out = Self::zero(self.dim, self.degree);
        for (k, v) in &self.terms {
            out.set(k.clone(), v.ring_neg());
        }
        out
    }

    /// Exterior product with exact shuffle signs.
    pub fn wedge(&self, other: &Self) -> Self {
        assert_eq!(self.dim, other.dim, "mismatched ambient dimension");
        let mut out = Self::zero(self.dim, self.degree + other.degree);
        for (ka, va) in &self.terms {
            for (kb, vb) in &other.terms {
                if let Some((key, sign_neg)) = merge_tuples(ka, kb) {
                    let prod = va.ring_mul(vb);
                    let prod = if sign_neg { prod.ring_neg() } else { prod };
                    let cur = out.coefficient(&key);
                    out.set(key, cur.ring_add(&prod));
                }
            }
        }
        out
    }

    pub fn wedge_power(&self, p: usize) -> Self {
        let mut acc = ExtElement {
            dim: self.dim,
            degree: 0,
            terms: BTreeMap::from([(Vec::new(), T::ring_one())]),
        };
        for _ in 0..p {
            acc = acc.wedge(self);
        }
        acc
    }

    /// Evaluate a 1-form on a vector.
    pub fn pair_vector(&self, x: &[T]) -> T {
        assert_eq!(self.degree, 1);
        let mut acc = T::ring_zero();
        for (k, v) in &self.terms {
            acc = acc.ring_add(&v.ring_mul(&x[k[0]]));
        }
        acc
    }

    /// Evaluate a 2-form on a pair of basis vectors.
    pub fn pair_basis(&self, a: usize, b: usize) -> T {
        assert_eq!(self.degree, 2);
        if a == b {
            return T::ring_zero();
        }
        if a < b {
            self.coefficient(&[a, b])
        } else {
            self.coefficient(&[b, a]).ring_neg()
        }
    }

    /// Skew Gram matrix `[theta(X_i, X_j)]` of a 2-form.
    pub fn gram(&self) -> Matrix<T> {
        assert_eq!(self.degree, 2);
        Matrix::from_fn(self.dim, self.dim, |i, j| self.pair_basis(i, j))
    }

    pub fn to_json(&self) -> serde_json::Value {
        let terms: BTreeMap<String, String> = self
            .terms
            .iter()
            .map(|(k, v)| {
                let key = k
                    .iter()
                    .map(usize::to_string)
                    .collect::<Vec<_>>()
                    .join(",");
                (key, v.to_string())
            })
            .collect();
        serde_json::json!({ "degree": self.degree, "terms": terms })
    }
}

impl ExtElement<Scalar> {
    pub fn from_json(value: &serde_json::Value, dim: usize) -> Result<Self> {
        let degree = value
            .get("degree")
            .and_then(serde_json::Value::as_u64)
            .ok_or_else(|| Error::Malformed("form needs a `degree` field".into()))?
            as usize;
        let mut out = Self::zero(dim, degree);
        let terms = value
            .get("terms")
            .and_then(serde_json::Value::as_object)
            .ok_or_else(|| Error::Malformed("form needs a `terms` object".into()))?;
        for (key, val) in terms {
            let tuple: Vec<usize> = key
                .split(',')
                .map(|t| {
                    t.trim()
                        .parse::<usize>()
                        .map_err(|_| Error::Malformed(format!("bad index tuple `{key}`")))
                })
                .collect::<Result<_>>()?;
            if tuple.len() != degree {
                return Err(Error::WrongDegree {
                    expected: degree,
                    got: tuple.len(),
                });
            }
            for &i in &tuple {
                if i >= dim {
                    return Err(Error::IndexOutOfRange { index: i, dim });
                }
            }
            if !tuple.windows(2).all(|w| w[0] < w[1]) {
                return Err(Error::Malformed(format!(
                    "index tuple `{key}` is not strictly increasing"
                )));
            }
            let c: Scalar = val
                .as_str()
                .ok_or_else(|| Error::Malformed("coefficients must be strings".into()))?
                .parse()?;
            out.set(tuple, c);
        }
        Ok(out)
    }

    pub fn to_poly(&self) -> ExtPoly {
        let mut out = ExtElement::zero(self.dim, self.degree);
        for (k, v) in &self.terms {
            out.set(k.clone(), Poly::constant(v.clone()));
        }
        out
    }
}

/// Merge two strictly increasing tuples; `None` on a repeated index,
/// otherwise the merged tuple and whether the shuffle sign is negative.
fn merge_tuples(a: &[usize], b: &[usize]) -> Option<(Vec<usize>, bool)> {
    let mut out = Vec::with_capacity(a.len() + b.len());
    let mut inversions = 0usize;
    let (mut i, mut j) = (0, 0);
    while i < a.len() && j < b.len() {
        if a[i] == b[j] {
            return None;
        }
        if a[i] < b[j] {
            out.push(a[i]);
            i += 1;
        } else {
            // b[j] jumps over the remaining entries of a
            inversions += a.len() - i;
            out.push(b[j]);
            j += 1;
        }
    }
    out.extend_from_slice(&a[i..]);
    out.extend_from_slice(&b[j..]);
    Some((out, inversions % 2 == 1))
}

/// `dw = -sum_{i<j} w([X_i, X_j]) w_i ^ w_j` for a 1-form.
pub fn d_one_form<T: RingElem>(table: &Table<T>, omega: &ExtElement<T>) -> Result<ExtElement<T>> {
    if omega.degree() != 1 {
        return Err(Error::WrongDegree {
            expected: 1,
            got: omega.degree(),
        });
    }
    let n = table.dim();
    let mut out = ExtElement::zero(n, 2);
    for i in 0..n {
        for j in i + 1..n {
            let br = table.bracket_basis(i, j);
            let val = omega.pair_vector(&br);
            if !val.is_ring_zero() {
                out.set(vec![i, j], val.ring_neg());
            }
        }
    }
    Ok(out)
}

/// Cyclic-sum closedness residuals of a 2-form: for each `i < j < k` the
/// value `theta([X_i,X_j],X_k) + theta([X_j,X_k],X_i) + theta([X_k,X_i],X_j)`.
pub fn closedness_residuals<T: RingElem>(
    table: &Table<T>,
    theta: &ExtElement<T>,
) -> Result<Vec<((usize, usize, usize), T)>> {
    if theta.degree() != 2 {
        return Err(Error::WrongDegree {
            expected: 2,
            got: theta.degree(),
        });
    }
    let n = table.dim();
    let pair_with = |br: &[T], c: usize| -> T {
        let mut acc = T::ring_zero();
        for (m, coeff) in br.iter().enumerate() {
            if !coeff.is_ring_zero() {
                acc = acc.ring_add(&coeff.ring_mul(&theta.pair_basis(m, c)));
            }
        }
        acc
    };
    let mut failures = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut r = pair_with(&table.bracket_basis(i, j), k);
                r = r.ring_add(&pair_with(&table.bracket_basis(j, k), i));
                r = r.ring_add(&pair_with(&table.bracket_basis(k, i), j));
                if !r.is_ring_zero() {
                    failures.push(((i, j, k), r));
                }
            }
        }
    }
    Ok(failures)
}

pub fn is_closed_two_form<T: RingElem>(table: &Table<T>, theta: &ExtElement<T>) -> Result<bool> {
    Ok(closedness_residuals(table, theta)?.is_empty())
}

/// Exact basis of the space of closed 2-forms.
pub fn closed_two_form_basis(table: &StructureTable) -> Vec<ExtScalar> {
    let n = table.dim();
    let pairs: Vec<(usize, usize)> = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .collect();
    let col_of = |a: usize, b: usize| pairs.iter().position(|&p| p == (a, b)).unwrap();
    let mut rows = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            for k in j + 1..n {
                let mut row = vec![Scalar::zero(); pairs.len()];
                let add = |br: Vec<Scalar>, c: usize, row: &mut Vec<Scalar>| {
                    for (m, coeff) in br.into_iter().enumerate() {
                        if coeff.is_zero() || m == c {
                            continue;
                        }
                        let (a, b, neg) = if m < c { (m, c, false) } else { (c, m, true) };
                        let idx = col_of(a, b);
                        row[idx] += if neg { -coeff } else { coeff };
                    }
                };
                add(table.bracket_basis(i, j), k, &mut row);
                add(table.bracket_basis(j, k), i, &mut row);
                add(table.bracket_basis(k, i), j, &mut row);
                if row.iter().any(|x| !x.is_zero()) {
                    rows.push(row);
                }
            }
        }
    }
    let kernel = if rows.is_empty() {
        Matrix::<Scalar>::zeros(1, pairs.len()).rank_kernel().1
    } else {
        Matrix::from_rows(rows).rank_kernel().1
    };
    kernel
        .into_iter()
        .map(|coords| {
            let mut form = ExtElement::zero(n, 2);
            for (idx, c) in coords.into_iter().enumerate() {
                if !c.is_zero() {
                    form.set(vec![pairs[idx].0, pairs[idx].1], c);
                }
            }
            form
        })
        .collect()
}

/// Contact test by full exterior expansion: `w ^ (dw)^p != 0`.
pub fn is_contact_form<T: RingElem>(table: &Table<T>, omega: &ExtElement<T>) -> Result<bool> {
    let n = table.dim();
    if n % 2 == 0 {
        return Err(Error::NotOddDimension(n));
    }
    let p = (n - 1) / 2;
    let dw = d_one_form(table, omega)?;
    let top = omega.wedge(&dw.wedge_power(p));
    Ok(!top.is_zero())
}

/// Independent contact oracle: rank of `dw` restricted to a complement of a
/// vector transverse to `ker w` must be `2p` (checked by an exact Pfaffian).
pub fn is_contact_form_rank(table: &StructureTable, omega: &ExtScalar) -> Result<bool> {
    let n = table.dim();
    if n % 2 == 0 {
        return Err(Error::NotOddDimension(n));
    }
    if omega.degree() != 1 {
        return Err(Error::WrongDegree {
            expected: 1,
            got: omega.degree(),
        });
    }
    let values: Vec<Scalar> = (0..n).map(|i| omega.coefficient(&[i])).collect();
    let Some(m) = (0..n).find(|&i| !values[i].is_zero()) else {
        return Ok(false);
    };
    let dw = d_one_form(table, omega)?;
    // Basis of ker w: v_i = X_i - (w(X_i)/w(X_m)) X_m for i != m.
    let inv = values[m].inv().unwrap();
    let kernel: Vec<Vec<Scalar>> = (0..n)
        .filter(|&i| i != m)
        .map(|i| {
            let mut v = vec![Scalar::zero(); n];
            v[i] = Scalar::one();
            v[m] = -&(&values[i] * &inv);
            v
        })
        .collect();
    let gram = dw.gram();
    let restricted = Matrix::from_fn(n - 1, n - 1, |a, b| {
        let image = gram.apply(&kernel[b]);
        let mut acc = Scalar::zero();
        for r in 0..n {
            acc += &kernel[a][r] * &image[r];
        }
        acc
    });
    Ok(!restricted.pfaffian()?.is_zero())
}

/// A filiform odd-dimensional algebra is contact iff `w_{2p}` is contact.
pub fn is_contact_algebra(table: &StructureTable) -> Result<bool> {
    let n = table.dim();
    if n % 2 == 0 {
        return Err(Error::NotOddDimension(n));
    }
    if !table.is_filiform() {
        return Err(Error::NotFiliform);
    }
    is_contact_form(table, &ExtElement::one_form(n, n - 1))
}

/// Outcome of the symplectic search: either an exact witness or a proof of
/// refusal (the Pfaffian vanishes identically on the closed-form space).
#[derive(Clone, Debug)]
pub struct SymplecticOutcome {
    pub symplectic: bool,
    pub witness: Option<ExtScalar>,
    /// Set when the answer is `false`: why no witness can exist.
    pub refutation: Option<String>,
    pub random_points_tried: usize,
}

/// Search the closed 2-form space for a nondegenerate element.
///
/// Random rational points come first (fast generic path); if none works the
/// Pfaffian of the symbolic Gram matrix over the space coordinates decides:
/// identically zero refutes existence, otherwise a deterministic
/// variable-by-variable descent pins an exact witness.
pub fn symplectic_exists(table: &StructureTable, seed: u64) -> Result<SymplecticOutcome> {
    let n = table.dim();
    if n % 2 == 1 {
        return Err(Error::NotEvenDimension(n));
    }
    let basis = closed_two_form_basis(table);
    let d = basis.len();
    if d == 0 {
        return Ok(SymplecticOutcome {
            symplectic: false,
            witness: None,
            refutation: Some("no nonzero closed 2-forms".into()),
            random_points_tried: 0,
        });
    }
    let combine = |coords: &[Scalar]| -> ExtScalar {
        let mut theta = ExtElement::zero(n, 2);
        for (b, c) in basis.iter().zip(coords) {
            theta = theta.add(&b.scale(c));
        }
        theta
    };
    let mut generator = rng::rng(seed);
    const RANDOM_TRIES: usize = 50;
    for t in 0..RANDOM_TRIES {
        let coords: Vec<Scalar> = (0..d)
            .map(|_| rng::small_rational(&mut generator, 3))
            .collect();
        let theta = combine(&coords);
        if !theta.gram().pfaffian()?.is_zero() {
            return Ok(SymplecticOutcome {
                symplectic: true,
                witness: Some(theta),
                refutation: None,
                random_points_tried: t + 1,
            });
        }
    }
    // Symbolic fallback: Pfaffian as a polynomial in the space coordinates.
    let var_names: Vec<String> = (0..d).map(|l| format!("x{l}")).collect();
    let mut gram_poly: Matrix<Poly> = Matrix::zeros(n, n);
    for (l, b) in basis.iter().enumerate() {
        let x = Poly::var(&var_names[l]);
        let g = b.gram();
        for i in 0..n {
            for j in 0..n {
                if !g[(i, j)].is_zero() {
                    let add = Poly::constant(g[(i, j)].clone()).ring_mul(&x);
                    gram_poly[(i, j)] = gram_poly[(i, j)].ring_add(&add);
                }
            }
        }
    }
    let mut pf = gram_poly.pfaffian()?;
    if pf.is_zero() {
        return Ok(SymplecticOutcome {
            symplectic: false,
            witness: None,
            refutation: Some(
                "Pfaffian of the Gram matrix vanishes identically on the closed-form space".into(),
            ),
            random_points_tried: RANDOM_TRIES,
        });
    }
    // Deterministic descent: the Pfaffian has degree <= n/2 in each variable,
    // so among n/2 + 1 candidate values one keeps it nonzero.
    let mut coords = vec![Scalar::zero(); d];
    for (l, name) in var_names.iter().enumerate() {
        if !pf.variables().contains(name) {
            continue;
        }
        let mut candidates = vec![0i64];
        for v in 1..=(n as i64 / 2 + 1) {
            candidates.push(v);
            candidates.push(-v);
        }
        let mut placed = false;
        for cand in candidates {
            let sub = BTreeMap::from([(name.clone(), Poly::from_int(cand))]);
            let next = pf.substitute(&sub);
            if !next.is_zero() {
                coords[l] = Scalar::from_int(cand);
                pf = next;
                placed = true;
                break;
            }
        }
        assert!(placed, "descent must find a non-vanishing value");
    }
    let theta = combine(&coords);
    debug_assert!(!theta.gram().pfaffian()?.is_zero());
    Ok(SymplecticOutcome {
        symplectic: true,
        witness: Some(theta),
        refutation: None,
        random_points_tried: RANDOM_TRIES,
    })
}

/// One-dimensional central extension `g_theta = g + K Z` with
/// `[X, Y]_ext = [X, Y] + theta(X, Y) Z`; `Z` is appended as `X_{2p}`.
pub fn central_extension(table: &StructureTable, theta: &ExtScalar) -> Result<StructureTable> {
    if !is_closed_two_form(table, theta)? {
        return Err(Error::FormNotClosed);
    }
    let n = table.dim();
    let mut out = Table::new(n + 1);
    for (&(i, j, k), c) in table.entries() {
        out.set(i, j, k, c.clone());
    }
    for i in 0..n {
        for j in i + 1..n {
            let val = theta.pair_basis(i, j);
            if !val.is_zero() {
                out.set(i, j, n, val);
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lie::basis_vector;

    fn w(dim: usize, i: usize) -> ExtScalar {
        ExtElement::one_form(dim, i)
    }

    #[test]
    fn d_on_abelian_vanishes() {
        let t = Table::<Scalar>::new(4);
        for i in 0..4 {
            assert!(d_one_form(&t, &w(4, i)).unwrap().is_zero());
        }
    }

    #[test]
    fn model_l9_top_differential() {
        // Only [X_0, X_7] hits X_8, so dw_8 = -w_0 ^ w_7.
        let t = Table::<Scalar>::model(9);
        let dw = d_one_form(&t, &w(9, 8)).unwrap();
        let mut expected = ExtElement::zero(9, 2);
        expected.set(vec![0, 7], Scalar::from_int(-1));
        assert_eq!(dw, expected);
    }

    #[test]
    fn wedge_kills_repeats() {
        let a = w(4, 0).wedge(&w(4, 1));
        assert!(a.wedge(&w(4, 0)).is_zero());
    }

    #[test]
    fn wedge_square_of_sum() {
        // (w0^w1 + w2^w3)^2 = 2 w0^w1^w2^w3.
        let s = w(4, 0).wedge(&w(4, 1)).add(&w(4, 2).wedge(&w(4, 3)));
        let sq = s.wedge_power(2);
        assert_eq!(sq.coefficient(&[0, 1, 2, 3]), Scalar::from_int(2));
        assert_eq!(sq.terms().count(), 1);
    }

    #[test]
    fn wedge_signs() {
        // w1 ^ w0 = -w0 ^ w1.
        let a = w(3, 1).wedge(&w(3, 0));
        assert_eq!(a.coefficient(&[0, 1]), Scalar::from_int(-1));
    }

    #[test]
    fn d_squared_is_zero_on_model() {
        let t = Table::<Scalar>::model(8);
        for i in 0..8 {
            let dw = d_one_form(&t, &w(8, i)).unwrap();
            assert!(is_closed_two_form(&t, &dw).unwrap(), "d^2 w_{i} != 0");
        }
    }

    #[test]
    fn abelian_closed_space_is_everything() {
        let t = Table::<Scalar>::new(4);
        assert_eq!(closed_two_form_basis(&t).len(), 6);
    }

    #[test]
    fn model_omega_top_is_not_contact() {
        // dw_{2p} has rank 2 on the model, far from contact.
        for n in [5usize, 7, 9] {
            let t = Table::<Scalar>::model(n);
            assert!(!is_contact_form(&t, &w(n, n - 1)).unwrap());
            assert!(!is_contact_form_rank(&t, &w(n, n - 1)).unwrap());
        }
    }

    #[test]
    fn contact_rejects_even_dimension() {
        let t = Table::<Scalar>::model(8);
        assert!(matches!(
            is_contact_form(&t, &w(8, 7)),
            Err(Error::NotOddDimension(8))
        ));
    }

    #[test]
    fn dim2_abelian_is_symplectic() {
        let t = Table::<Scalar>::new(2);
        let out = symplectic_exists(&t, 0).unwrap();
        assert!(out.symplectic);
        let theta = out.witness.unwrap();
        assert!(!theta.pair_basis(0, 1).is_zero());
    }

    #[test]
    fn heisenberg_from_extension() {
        let t = Table::<Scalar>::new(2);
        let theta = w(2, 0).wedge(&w(2, 1));
        let ext = central_extension(&t, &theta).unwrap();
        assert_eq!(ext.dim(), 3);
        assert_eq!(
            ext.bracket(&basis_vector(3, 0), &basis_vector(3, 1))
                .unwrap(),
            basis_vector(3, 2)
        );
        // Round trip through the center.
        assert_eq!(ext.quotient_by_center().unwrap(), t);
    }

    #[test]
    fn extension_requires_closed_form() {
        let t = Table::<Scalar>::model(4);
        // w1 ^ w3 is not closed on L_4: d(w1^w3) picks up [X_0, X_2] = X_3.
        let theta = w(4, 1).wedge(&w(4, 3));
        assert!(matches!(
            central_extension(&t, &theta),
            Err(Error::FormNotClosed)
        ));
    }

    #[test]
    fn form_json_round_trip() {
        let theta = w(8, 0)
            .wedge(&w(8, 7))
            .add(&w(8, 2).wedge(&w(8, 5)).scale(&Scalar::ratio(-2, 3)));
        let json = theta.to_json();
        let back = ExtElement::from_json(&json, 8).unwrap();
        assert_eq!(back, theta);
    }
}
