//! The named parametrized families in dimensions 8-11, the contact models,
//! the symplectic quotient families, and the general odd-dimensional model.
//!
//! Patterns are transcribed from the printed bracket tables; the symplectic
//! families are produced programmatically as central quotients of the odd
//! contact families one dimension up, which is also how the printed tables
//! were obtained. A parallel derivation of the same families from the shift
//! recursion lives in [`crate::vergnegen`]; the test suite checks the two
//! routes agree coefficient for coefficient.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::lie::{PolyTable, StructureTable, Table};
use crate::poly::{c, v, Poly};
use crate::rng;
use crate::scalar::{RingElem, Scalar};
use crate::vergnegen;

/// A named family: bracket pattern with polynomial coefficients in the
/// declared parameters, constraint polynomials, and alias definitions for
/// the alternative parameter names the source tables use.
#[derive(Clone, Debug)]
pub struct FamilyDescriptor {
    pub id: String,
    pub dim: usize,
    pub params: Vec<String>,
    pattern: BTreeMap<(usize, usize), Vec<(usize, Poly)>>,
    pub constraints: Vec<Poly>,
    pub aliases: BTreeMap<String, Poly>,
    /// Whether the pattern is linear homogeneous in the parameters, which is
    /// what the restricted-cohomology cochain space needs.
    pub cochain_capable: bool,
}

pub const FAMILY_IDS: [&str; 15] = [
    "modelL", "fil8", "fil8c1", "fil8c2", "t1alpha", "t2t8", "fil9", "t9", "contact9", "sympl8",
    "fil10", "fil11", "contact11", "sympl10", "model2p1",
];

/// Linear combination of parameters with integer coefficients.
fn lin(terms: &[(i64, &str)]) -> Poly {
    terms
        .iter()
        .fold(Poly::zero(), |acc, (k, name)| acc + c(*k) * v(name))
}

fn pattern_params(pattern: &BTreeMap<(usize, usize), Vec<(usize, Poly)>>) -> Vec<String> {
    let mut names: Vec<String> = Vec::new();
    for comps in pattern.values() {
        for (_, p) in comps {
            for name in p.variables() {
                if !names.contains(name) {
                    names.push(name.clone());
                }
            }
        }
    }
    names.sort_by(|a, b| {
        let na: usize = a.trim_start_matches(char::is_alphabetic).parse().unwrap_or(0);
        let nb: usize = b.trim_start_matches(char::is_alphabetic).parse().unwrap_or(0);
        na.cmp(&nb).then(a.cmp(b))
    });
    names
}

impl FamilyDescriptor {
    fn new(
        id: &str,
        dim: usize,
        pattern: BTreeMap<(usize, usize), Vec<(usize, Poly)>>,
        constraints: Vec<Poly>,
    ) -> Self {
        let params = pattern_params(&pattern);
        let cochain_capable = pattern
            .values()
            .flatten()
            .all(|(_, p)| p.linear_in(&params).map_or(false, |(_, cst)| cst.is_zero()));
        FamilyDescriptor {
            id: id.to_string(),
            dim,
            params,
            pattern,
            constraints,
            aliases: BTreeMap::new(),
            cochain_capable,
        }
    }

    /// The pattern as a symbolic structure table (spine included).
    pub fn symbolic_table(&self) -> PolyTable {
        let mut t = Table::model(self.dim);
        for (&(i, j), comps) in &self.pattern {
            for (k, p) in comps {
                if !p.is_zero() {
                    t.set(i, j, *k, p.clone());
                }
            }
        }
        t
    }

    pub fn full_assignment(
        &self,
        params: &BTreeMap<String, Scalar>,
    ) -> Result<BTreeMap<String, Scalar>> {
        for name in params.keys() {
            if !self.params.contains(name) {
                return Err(Error::UnknownParameter {
                    family: self.id.clone(),
                    param: name.clone(),
                });
            }
        }
        let mut full = params.clone();
        for name in &self.params {
            full.entry(name.clone()).or_insert_with(Scalar::zero);
        }
        Ok(full)
    }

    /// Evaluate every constraint at the point (unspecified parameters
    /// default to zero).
    pub fn constraint_values(
        &self,
        params: &BTreeMap<String, Scalar>,
    ) -> Result<Vec<(Poly, Scalar)>> {
        let full = self.full_assignment(params)?;
        self.constraints
            .iter()
            .map(|p| Ok((p.clone(), p.eval(&full)?)))
            .collect()
    }

    /// Build the table without checking constraints or the Jacobi identity;
    /// the raw pattern instance.
    pub fn instantiate_unchecked(
        &self,
        params: &BTreeMap<String, Scalar>,
    ) -> Result<StructureTable> {
        let full = self.full_assignment(params)?;
        self.symbolic_table().eval(&full)
    }

    /// Instantiate at a rational point: constraints must vanish exactly, and
    /// the result is verified to be a filiform Lie algebra.
    pub fn instantiate(&self, params: &BTreeMap<String, Scalar>) -> Result<StructureTable> {
        for (poly, value) in self.constraint_values(params)? {
            if !value.is_zero() {
                return Err(Error::ConstraintViolated {
                    family: self.id.clone(),
                    poly: poly.to_string(),
                    value: value.to_string(),
                });
            }
        }
        let table = self.instantiate_unchecked(params)?;
        debug_assert!(table.jacobi_ok(), "constraint-satisfying point must be Jacobi");
        debug_assert!(table.is_filiform());
        Ok(table)
    }

    /// The cochain pattern of the restricted deformation complex: the same
    /// pattern with parameters `a_i` renamed to coordinates `u_i`.
    pub fn cochain_pattern(&self) -> Result<(Vec<String>, BTreeMap<(usize, usize, usize), Poly>)> {
        if !self.cochain_capable {
            return Err(Error::NoCochainPattern(self.id.clone()));
        }
        let rename: BTreeMap<String, Poly> = self
            .params
            .iter()
            .map(|name| {
                let u = format!("u{}", name.trim_start_matches(char::is_alphabetic));
                (name.clone(), Poly::var(&u))
            })
            .collect();
        let coords: Vec<String> = self
            .params
            .iter()
            .map(|name| format!("u{}", name.trim_start_matches(char::is_alphabetic)))
            .collect();
        let mut slots = BTreeMap::new();
        for (&(i, j), comps) in &self.pattern {
            for (k, p) in comps {
                let q = p.substitute(&rename);
                if !q.is_zero() {
                    slots.insert((i, j, *k), q);
                }
            }
        }
        Ok((coords, slots))
    }

    /// Product-of-top-antidiagonal test for odd dimensions: the instance is
    /// contact iff `C_{1,n-3}^{n-1} * C_{2,n-4}^{n-1} * ... != 0`.
    pub fn contact_shortcut(&self, params: &BTreeMap<String, Scalar>) -> Result<bool> {
        let n = self.dim;
        if n % 2 == 0 {
            return Err(Error::NotOddDimension(n));
        }
        let table = self.instantiate_unchecked(params)?;
        let p = (n - 1) / 2;
        let mut product = Scalar::one();
        for i in 1..p {
            product *= table.get(i, n - 2 - i, n - 1);
        }
        Ok(!product.is_zero())
    }
}

fn fil8() -> FamilyDescriptor {
    let mut p = BTreeMap::new();
    p.insert((2, 5), vec![(7, v("a1"))]);
    p.insert((1, 5), vec![(6, v("a1")), (7, v("a2"))]);
    p.insert((3, 4), vec![(7, -v("a1"))]);
    p.insert((2, 4), vec![(7, v("a4"))]);
    p.insert(
        (1, 4),
        vec![(5, v("a1")), (6, lin(&[(1, "a2"), (1, "a4")])), (7, v("a5"))],
    );
    p.insert((2, 3), vec![(6, v("a4")), (7, v("a6"))]);
    p.insert(
        (1, 3),
        vec![
            (4, v("a1")),
            (5, lin(&[(1, "a2"), (2, "a4")])),
            (6, lin(&[(1, "a5"), (1, "a6")])),
            (7, v("a7")),
        ],
    );
    p.insert(
        (1, 2),
        vec![
            (3, v("a1")),
            (4, lin(&[(1, "a2"), (2, "a4")])),
            (5, lin(&[(1, "a5"), (1, "a6")])),
            (6, v("a7")),
            (7, v("a8")),
        ],
    );
    let constraint = v("a1") * lin(&[(5, "a4"), (2, "a2")]);
    FamilyDescriptor::new("fil8", 8, p, vec![constraint])
}

fn fil8c1() -> FamilyDescriptor {
    let mut p = BTreeMap::new();
    p.insert((1, 5), vec![(7, v("a2"))]);
    p.insert((2, 4), vec![(7, v("a4"))]);
    p.insert((1, 4), vec![(6, lin(&[(1, "a2"), (1, "a4")])), (7, v("a5"))]);
    p.insert((2, 3), vec![(6, v("a4")), (7, v("a6"))]);
    p.insert(
        (1, 3),
        vec![
            (5, lin(&[(1, "a2"), (2, "a4")])),
            (6, lin(&[(1, "a5"), (1, "a6")])),
            (7, v("a7")),
        ],
    );
    p.insert(
        (1, 2),
        vec![
            (4, lin(&[(1, "a2"), (2, "a4")])),
            (5, lin(&[(1, "a5"), (1, "a6")])),
            (6, v("a7")),
            (7, v("a8")),
        ],
    );
    FamilyDescriptor::new("fil8c1", 8, p, Vec::new())
}

fn fil8c2() -> FamilyDescriptor {
    let mut p = BTreeMap::new();
    let q = |num: i64, den: i64, name: &str| Poly::constant(Scalar::ratio(num, den)) * v(name);
    p.insert((2, 5), vec![(7, v("a1"))]);
    p.insert((1, 5), vec![(6, v("a1")), (7, v("a2"))]);
    p.insert((3, 4), vec![(7, -v("a1"))]);
    p.insert((2, 4), vec![(7, q(-2, 5, "a2"))]);
    p.insert((1, 4), vec![(5, v("a1")), (6, q(3, 5, "a2")), (7, v("a5"))]);
    p.insert((2, 3), vec![(6, q(-2, 5, "a2")), (7, v("a6"))]);
    p.insert(
        (1, 3),
        vec![
            (4, v("a1")),
            (5, q(1, 5, "a2")),
            (6, lin(&[(1, "a5"), (1, "a6")])),
            (7, v("a7")),
        ],
    );
    p.insert(
        (1, 2),
        vec![
            (3, v("a1")),
            (4, q(1, 5, "a2")),
            (5, lin(&[(1, "a5"), (1, "a6")])),
            (6, v("a7")),
            (7, v("a8")),
        ],
    );
    FamilyDescriptor::new("fil8c2", 8, p, Vec::new())
}

fn t1alpha() -> FamilyDescriptor {
    let mut p = BTreeMap::new();
    p.insert((1, 5), vec![(7, v("alpha"))]);
    p.insert((2, 4), vec![(7, c(1))]);
    p.insert((1, 4), vec![(6, v("alpha") + c(1)), (7, c(1))]);
    p.insert((2, 3), vec![(6, c(1))]);
    p.insert((1, 3), vec![(5, v("alpha") + c(2)), (6, c(1))]);
    p.insert((1, 2), vec![(4, v("alpha") + c(2)), (5, c(1))]);
    let mut d = FamilyDescriptor::new("t1alpha", 8, p, Vec::new());
    d.params = vec!["alpha".to_string()];
    d
}

fn t2t8() -> FamilyDescriptor {
    let mut p = BTreeMap::new();
    let r = |num: i64, den: i64| Poly::constant(Scalar::ratio(num, den));
    p.insert((2, 5), vec![(7, c(1))]);
    p.insert((1, 5), vec![(6, c(1)), (7, c(1))]);
    p.insert((3, 4), vec![(7, c(-1))]);
    p.insert((2, 4), vec![(7, r(-2, 5))]);
    p.insert((1, 4), vec![(5, c(1)), (6, r(3, 5)), (7, v("t"))]);
    p.insert((2, 3), vec![(6, r(-2, 5)), (7, -v("t"))]);
    p.insert((1, 3), vec![(4, c(1)), (5, r(1, 5))]);
    p.insert((1, 2), vec![(3, c(1)), (4, r(1, 5))]);
    let mut d = FamilyDescriptor::new("t2t8", 8, p, Vec::new());
    d.params = vec!["t".to_string()];
    d
}

fn fil9() -> FamilyDescriptor {
    let mut p = BTreeMap::new();
    p.insert((1, 6), vec![(8, v("a2"))]);
    p.insert((2, 5), vec![(8, v("a4"))]);
    p.insert((1, 5), vec![(7, lin(&[(1, "a2"), (1, "a4")])), (8, v("a5"))]);
    p.insert((3, 4), vec![(8, v("a6"))]);
    p.insert((2, 4), vec![(7, lin(&[(1, "a4"), (1, "a6")])), (8, v("a7"))]);
    p.insert(
        (1, 4),
        vec![
            (6, lin(&[(1, "a2"), (2, "a4"), (1, "a6")])),
            (7, lin(&[(1, "a5"), (1, "a7")])),
            (8, v("a8")),
        ],
    );
    p.insert(
        (2, 3),
        vec![(6, lin(&[(1, "a4"), (1, "a6")])), (7, v("a7")), (8, v("a9"))],
    );
    p.insert(
        (1, 3),
        vec![
            (5, lin(&[(1, "a2"), (3, "a4"), (2, "a6")])),
            (6, lin(&[(1, "a5"), (2, "a7")])),
            (7, lin(&[(1, "a8"), (1, "a9")])),
            (8, v("a10")),
        ],
    );
    p.insert(
        (1, 2),
        vec![
            (4, lin(&[(1, "a2"), (3, "a4"), (2, "a6")])),
            (5, lin(&[(1, "a5"), (2, "a7")])),
            (6, lin(&[(1, "a8"), (1, "a9")])),
            (7, v("a10")),
            (8, v("a11")),
        ],
    );
    FamilyDescriptor::new("fil9", 9, p, vec![fil9_constraint()])
}

/// `-3 a4^2 + 2 a6^2 + 2 a2 a6 + a4 a6`, the single dim-9 Jacobi condition.
pub fn fil9_constraint() -> Poly {
    c(-3) * v("a4") * v("a4")
        + c(2) * v("a6") * v("a6")
        + c(2) * v("a2") * v("a6")
        + v("a4") * v("a6")
}

fn contact9() -> FamilyDescriptor {
    let keep = ["a2", "a4", "a6"];
    let base = fil9();
    let zero_map: BTreeMap<String, Poly> = base
        .params
        .iter()
        .filter(|n| !keep.contains(&n.as_str()))
        .map(|n| (n.clone(), Poly::zero()))
        .collect();
    let pattern = substitute_pattern(&base.pattern, &zero_map);
    let mut d = FamilyDescriptor::new("contact9", 9, pattern, vec![fil9_constraint()]);
    d.cochain_capable = false;
    d
}

/// Theorem-24 family: `a2 = (3t^2 - t - 2)/2, a4 = t, a5 = a6 = 1, a8 = u`,
/// the rest zero. The dim-9 constraint holds identically in `t`.
fn t9() -> FamilyDescriptor {
    let base = fil9();
    let half = Poly::constant(Scalar::ratio(1, 2));
    let a2 = half * (c(3) * v("t") * v("t") - v("t") - c(2));
    let map: BTreeMap<String, Poly> = [
        ("a2".to_string(), a2),
        ("a4".to_string(), v("t")),
        ("a5".to_string(), Poly::one()),
        ("a6".to_string(), Poly::one()),
        ("a7".to_string(), Poly::zero()),
        ("a8".to_string(), v("u")),
        ("a9".to_string(), Poly::zero()),
        ("a10".to_string(), Poly::zero()),
        ("a11".to_string(), Poly::zero()),
    ]
    .into();
    let pattern = substitute_pattern(&base.pattern, &map);
    let mut d = FamilyDescriptor::new("t9", 9, pattern, Vec::new());
    d.params = vec!["t".to_string(), "u".to_string()];
    d.cochain_capable = false;
    d
}

fn fil10() -> FamilyDescriptor {
    let mut p = BTreeMap::new();
    p.insert((2, 7), vec![(9, v("a1"))]);
    p.insert((1, 7), vec![(8, v("a1")), (9, v("a2"))]);
    p.insert((3, 6), vec![(9, -v("a1"))]);
    p.insert((2, 6), vec![(9, v("a4"))]);
    p.insert(
        (1, 6),
        vec![(7, v("a1")), (8, lin(&[(1, "a2"), (1, "a4")])), (9, v("a5"))],
    );
    p.insert((4, 5), vec![(9, v("a1"))]);
    p.insert((3, 5), vec![(9, v("a7"))]);
    p.insert((2, 5), vec![(8, lin(&[(1, "a4"), (1, "a7")])), (9, v("a8"))]);
    p.insert(
        (1, 5),
        vec![
            (6, v("a1")),
            (7, lin(&[(1, "a2"), (2, "a4"), (1, "a7")])),
            (8, lin(&[(1, "a5"), (1, "a8")])),
            (9, v("a9")),
        ],
    );
    p.insert((3, 4), vec![(8, v("a7")), (9, v("a10"))]);
    p.insert(
        (2, 4),
        vec![
            (7, lin(&[(1, "a4"), (2, "a7")])),
            (8, lin(&[(1, "a8"), (1, "a10")])),
            (9, v("a11")),
        ],
    );
    p.insert(
        (1, 4),
        vec![
            (5, v("a1")),
            (6, lin(&[(1, "a2"), (3, "a4"), (3, "a7")])),
            (7, lin(&[(1, "a5"), (2, "a8"), (1, "a10")])),
            (8, lin(&[(1, "a9"), (1, "a11")])),
            (9, v("a12")),
        ],
    );
    p.insert(
        (2, 3),
        vec![
            (6, lin(&[(1, "a4"), (2, "a7")])),
            (7, lin(&[(1, "a8"), (1, "a10")])),
            (8, v("a11")),
            (9, v("a13")),
        ],
    );
    p.insert(
        (1, 3),
        vec![
            (4, v("a1")),
            (5, lin(&[(1, "a2"), (4, "a4"), (5, "a7")])),
            (6, lin(&[(1, "a5"), (3, "a8"), (2, "a10")])),
            (7, lin(&[(1, "a9"), (2, "a11")])),
            (8, lin(&[(1, "a12"), (1, "a13")])),
            (9, v("a14")),
        ],
    );
    p.insert(
        (1, 2),
        vec![
            (3, v("a1")),
            (4, lin(&[(1, "a2"), (4, "a4"), (5, "a7")])),
            (5, lin(&[(1, "a5"), (3, "a8"), (2, "a10")])),
            (6, lin(&[(1, "a9"), (2, "a11")])),
            (7, lin(&[(1, "a12"), (1, "a13")])),
            (8, v("a14")),
            (9, v("a15")),
        ],
    );
    FamilyDescriptor::new("fil10", 10, p, fil10_constraints())
}

/// The three printed dim-10 Jacobi conditions.
pub fn fil10_constraints() -> Vec<Poly> {
    let c1 = v("a1") * lin(&[(2, "a2"), (7, "a4"), (7, "a7")]);
    let c2 = c(3) * v("a4") * v("a4") + c(3) * v("a4") * v("a7") - c(2) * v("a2") * v("a7");
    let c3 = v("a1") * lin(&[(2, "a9"), (5, "a11")]) - c(2) * v("a2") * v("a10")
        + v("a4") * lin(&[(7, "a8"), (-2, "a10")])
        + v("a7") * lin(&[(-3, "a5"), (2, "a8"), (-7, "a10")]);
    vec![c1, c2, c3]
}

fn fil11() -> FamilyDescriptor {
    let mut p = BTreeMap::new();
    p.insert((1, 8), vec![(10, v("a2"))]);
    p.insert((2, 7), vec![(10, v("a4"))]);
    p.insert((1, 7), vec![(9, lin(&[(1, "a2"), (1, "a4")])), (10, v("a5"))]);
    p.insert((3, 6), vec![(10, v("a7"))]);
    p.insert((2, 6), vec![(9, lin(&[(1, "a4"), (1, "a7")])), (10, v("a8"))]);
    p.insert(
        (1, 6),
        vec![
            (8, lin(&[(1, "a2"), (2, "a4"), (1, "a7")])),
            (9, lin(&[(1, "a5"), (1, "a8")])),
            (10, v("a9")),
        ],
    );
    p.insert((4, 5), vec![(10, v("a10"))]);
    p.insert(
        (3, 5),
        vec![(9, lin(&[(1, "a7"), (1, "a10")])), (10, v("a11"))],
    );
    p.insert(
        (2, 5),
        vec![
            (8, lin(&[(1, "a4"), (2, "a7"), (1, "a10")])),
            (9, lin(&[(1, "a8"), (1, "a11")])),
            (10, v("a12")),
        ],
    );
    p.insert(
        (1, 5),
        vec![
            (7, lin(&[(1, "a2"), (3, "a4"), (3, "a7"), (1, "a10")])),
            (8, lin(&[(1, "a5"), (2, "a8"), (1, "a11")])),
            (9, lin(&[(1, "a9"), (1, "a12")])),
            (10, v("a13")),
        ],
    );
    p.insert(
        (3, 4),
        vec![
            (8, lin(&[(1, "a7"), (1, "a10")])),
            (9, v("a11")),
            (10, v("a14")),
        ],
    );
    p.insert(
        (2, 4),
        vec![
            (7, lin(&[(1, "a4"), (3, "a7"), (2, "a10")])),
            (8, lin(&[(1, "a8"), (2, "a11")])),
            (9, lin(&[(1, "a12"), (1, "a14")])),
            (10, v("a15")),
        ],
    );
    p.insert(
        (1, 4),
        vec![
            (6, lin(&[(1, "a2"), (4, "a4"), (6, "a7"), (3, "a10")])),
            (7, lin(&[(1, "a5"), (3, "a8"), (3, "a11")])),
            (8, lin(&[(1, "a9"), (2, "a12"), (1, "a14")])),
            (9, lin(&[(1, "a13"), (1, "a15")])),
            (10, v("a16")),
        ],
    );
    p.insert(
        (2, 3),
        vec![
            (6, lin(&[(1, "a4"), (3, "a7"), (2, "a10")])),
            (7, lin(&[(1, "a8"), (2, "a11")])),
            (8, lin(&[(1, "a12"), (1, "a14")])),
            (9, v("a15")),
            (10, v("a17")),
        ],
    );
    p.insert(
        (1, 3),
        vec![
            (5, lin(&[(1, "a2"), (5, "a4"), (9, "a7"), (5, "a10")])),
            (6, lin(&[(1, "a5"), (4, "a8"), (5, "a11")])),
            (7, lin(&[(1, "a9"), (3, "a12"), (2, "a14")])),
            (8, lin(&[(1, "a13"), (2, "a15")])),
            (9, lin(&[(1, "a16"), (1, "a17")])),
            (10, v("a18")),
        ],
    );
    p.insert(
        (1, 2),
        vec![
            (4, lin(&[(1, "a2"), (5, "a4"), (9, "a7"), (5, "a10")])),
            (5, lin(&[(1, "a5"), (4, "a8"), (5, "a11")])),
            (6, lin(&[(1, "a9"), (3, "a12"), (2, "a14")])),
            (7, lin(&[(1, "a13"), (2, "a15")])),
            (8, lin(&[(1, "a16"), (1, "a17")])),
            (9, v("a18")),
            (10, v("a19")),
        ],
    );
    let mut d = FamilyDescriptor::new("fil11", 11, p, fil11_constraints());
    d.aliases = z_aliases();
    d
}

/// The `z_i` reparametrization of the dim-11 constants.
pub fn z_aliases() -> BTreeMap<String, Poly> {
    [
        ("z1", lin(&[(1, "a2"), (1, "a4")])),
        ("z2", lin(&[(1, "a4"), (1, "a7")])),
        ("z3", lin(&[(1, "a7"), (1, "a10")])),
        ("z4", v("a10")),
        ("z5", lin(&[(1, "a5"), (1, "a11")])),
        ("z6", lin(&[(1, "a8"), (1, "a11")])),
        ("z7", v("a11")),
        ("z8", lin(&[(1, "a9"), (1, "a12")])),
        ("z9", lin(&[(1, "a12"), (1, "a14")])),
        ("z10", v("a14")),
    ]
    .into_iter()
    .map(|(k, p)| (k.to_string(), p))
    .collect()
}

/// The four dim-11 Jacobi conditions, written in the `z` variables.
pub fn fil11_constraints_z() -> Vec<Poly> {
    let j1 = c(3) * v("z2") * v("z2") + c(3) * v("z2") * v("z3") - c(2) * v("z1") * v("z3");
    let j2 = v("z7") * lin(&[(2, "z1"), (2, "z2"), (1, "z3")])
        + v("z3") * lin(&[(3, "z5"), (1, "z6")])
        - c(7) * v("z2") * v("z6");
    let j3 = v("z4") * lin(&[(2, "z1"), (7, "z2"), (7, "z3")])
        - c(2) * v("z3") * lin(&[(2, "z2"), (1, "z3")]);
    let j4 = v("z4") * lin(&[(2, "z8"), (5, "z9")])
        - v("z10") * lin(&[(2, "z1"), (9, "z2"), (12, "z3")])
        - v("z7") * (lin(&[(3, "z5"), (7, "z6")]) - v("z7"))
        + c(4) * v("z6") * v("z6")
        - c(2) * v("z3") * lin(&[(2, "z8"), (7, "z9")])
        + c(8) * v("z9") * lin(&[(1, "z2"), (2, "z3")]);
    vec![j1, j2, j3, j4]
}

/// The dim-11 conditions expressed in the `a` parameters.
pub fn fil11_constraints() -> Vec<Poly> {
    let alias = z_aliases();
    fil11_constraints_z()
        .into_iter()
        .map(|p| p.substitute(&alias))
        .collect()
}

fn contact11() -> FamilyDescriptor {
    let keep = ["a2", "a4", "a7", "a10"];
    let base = fil11();
    let zero_map: BTreeMap<String, Poly> = base
        .params
        .iter()
        .filter(|n| !keep.contains(&n.as_str()))
        .map(|n| (n.clone(), Poly::zero()))
        .collect();
    let pattern = substitute_pattern(&base.pattern, &zero_map);
    // Only J1 and J3 survive setting the tail parameters to zero.
    let constraints: Vec<Poly> = fil11_constraints()
        .into_iter()
        .map(|p| p.substitute(&zero_map))
        .filter(|p| !p.is_zero())
        .collect();
    let mut d = FamilyDescriptor::new("contact11", 11, pattern, constraints);
    d.aliases = z_aliases();
    d.cochain_capable = false;
    d
}

/// Central quotient of a pattern: drop the top basis vector.
fn quotient_pattern(
    pattern: &BTreeMap<(usize, usize), Vec<(usize, Poly)>>,
    top: usize,
) -> BTreeMap<(usize, usize), Vec<(usize, Poly)>> {
    let mut out = BTreeMap::new();
    for (&(i, j), comps) in pattern {
        if j >= top {
            continue;
        }
        let kept: Vec<(usize, Poly)> = comps.iter().filter(|(k, _)| *k < top).cloned().collect();
        if !kept.is_empty() {
            out.insert((i, j), kept);
        }
    }
    out
}

fn substitute_pattern(
    pattern: &BTreeMap<(usize, usize), Vec<(usize, Poly)>>,
    map: &BTreeMap<String, Poly>,
) -> BTreeMap<(usize, usize), Vec<(usize, Poly)>> {
    let mut out = BTreeMap::new();
    for (&(i, j), comps) in pattern {
        let subbed: Vec<(usize, Poly)> = comps
            .iter()
            .map(|(k, p)| (*k, p.substitute(map)))
            .filter(|(_, p)| !p.is_zero())
            .collect();
        if !subbed.is_empty() {
            out.insert((i, j), subbed);
        }
    }
    out
}

/// Quotient of the dim-9 family by its center: the symplectic dim-8 family,
/// still parametrized by the dim-9 constants, with the `b` aliases.
fn sympl8() -> FamilyDescriptor {
    let base = fil9();
    let pattern = quotient_pattern(&base.pattern, 8);
    let mut d = FamilyDescriptor::new("sympl8", 8, pattern, vec![fil9_constraint()]);
    d.aliases = [
        ("b2", lin(&[(1, "a2"), (1, "a4")])),
        ("b4", lin(&[(1, "a4"), (1, "a6")])),
        ("b5", lin(&[(1, "a5"), (1, "a7")])),
        ("b6", v("a7")),
        ("b7", lin(&[(1, "a8"), (1, "a9")])),
        ("b8", v("a10")),
    ]
    .into_iter()
    .map(|(k, p)| (k.to_string(), p))
    .collect();
    // a6 does not survive into the pattern but parametrizes the constraint
    if !d.params.contains(&"a6".to_string()) {
        d.params.push("a6".to_string());
    }
    d
}

/// Quotient of the dim-11 family by its center: the symplectic dim-10
/// family. Constraints are the two printed conditions.
fn sympl10() -> FamilyDescriptor {
    let base = fil11();
    let pattern = quotient_pattern(&base.pattern, 10);
    let all = fil11_constraints();
    let mut d =
        FamilyDescriptor::new("sympl10", 10, pattern, vec![all[0].clone(), all[1].clone()]);
    d.aliases = z_aliases();
    d
}

fn model_l(dim: usize) -> Result<FamilyDescriptor> {
    if dim < 3 {
        return Err(Error::BadDimension {
            family: "modelL".into(),
            dim,
        });
    }
    Ok(FamilyDescriptor::new(
        "modelL",
        dim,
        BTreeMap::new(),
        Vec::new(),
    ))
}

/// The general `(2p+1)`-dimensional contact model: only the antidiagonal
/// constants `a_{i,2p-1-i}` are free; constraints are its exact Jacobi
/// residual polynomials from the generator.
fn model_2p1(dim: usize) -> Result<FamilyDescriptor> {
    if dim % 2 == 0 || dim < 5 {
        return Err(Error::BadDimension {
            family: "model2p1".into(),
            dim,
        });
    }
    let g = vergnegen::contact_model(dim);
    let mut pattern: BTreeMap<(usize, usize), Vec<(usize, Poly)>> = BTreeMap::new();
    for (&(i, j, k), p) in g.table.entries() {
        if i == 0 {
            continue;
        }
        pattern.entry((i, j)).or_default().push((k, p.clone()));
    }
    let mut constraints: Vec<Poly> = Vec::new();
    for eq in vergnegen::jacobi_ideal(&g) {
        for (_, p) in &eq.components {
            let m = p.monic();
            if !constraints.contains(&m) {
                constraints.push(m);
            }
        }
    }
    let mut d = FamilyDescriptor::new("model2p1", dim, pattern, constraints);
    d.params = g.params;
    Ok(d)
}

/// Look up a family by id; `dim` is required for the dimension-generic ones.
pub fn descriptor(id: &str, dim: Option<usize>) -> Result<FamilyDescriptor> {
    let fixed = |d: FamilyDescriptor| -> Result<FamilyDescriptor> {
        if let Some(n) = dim {
            if n != d.dim {
                return Err(Error::BadDimension {
                    family: d.id.clone(),
                    dim: n,
                });
            }
        }
        Ok(d)
    };
    match id {
        "fil8" => fixed(fil8()),
        "fil8c1" => fixed(fil8c1()),
        "fil8c2" => fixed(fil8c2()),
        "t1alpha" => fixed(t1alpha()),
        "t2t8" => fixed(t2t8()),
        "fil9" => fixed(fil9()),
        "t9" => fixed(t9()),
        "contact9" => fixed(contact9()),
        "sympl8" => fixed(sympl8()),
        "fil10" => fixed(fil10()),
        "fil11" => fixed(fil11()),
        "contact11" => fixed(contact11()),
        "sympl10" => fixed(sympl10()),
        "modelL" => model_l(dim.ok_or_else(|| Error::DimensionRequired("modelL".into()))?),
        "model2p1" => model_2p1(dim.ok_or_else(|| Error::DimensionRequired("model2p1".into()))?),
        _ => Err(Error::UnknownFamily(id.to_string())),
    }
}

/// The alternating instance of the general model
/// (`a_{i,2p-1-i} = (-1)^{i+1} lambda`).
pub fn model_2p1_alternating(dim: usize, lambda: Scalar) -> Result<StructureTable> {
    let d = descriptor("model2p1", Some(dim))?;
    let p = (dim - 1) / 2;
    let mut params = BTreeMap::new();
    for i in 1..p {
        let name = vergnegen::canonical_param(i, dim - 2 - i);
        let sign = if i % 2 == 1 { 1 } else { -1 };
        params.insert(name, &Scalar::from_int(sign) * &lambda);
    }
    d.instantiate(&params)
}

/// Membership of a parameter point in the printed algebraic components.
#[derive(Clone, Debug)]
pub struct ComponentMembership {
    pub name: String,
    pub defining: Vec<Poly>,
    pub member: bool,
}

pub fn component_of(
    variety: &str,
    params: &BTreeMap<String, Scalar>,
) -> Result<Vec<ComponentMembership>> {
    let components: Vec<(String, Vec<Poly>)> = match variety {
        "fil8" => vec![
            ("Fil8(1)".into(), vec![v("a1")]),
            ("Fil8(2)".into(), vec![lin(&[(5, "a4"), (2, "a2")])]),
        ],
        "fil10" => {
            let full = fil10_constraints();
            // component 2 keeps a1 free; the printed "a_1, a_2 = 0" is read
            // as a_2 = 0 (a_1 = 0 would duplicate component 1)
            let a1_zero: BTreeMap<String, Poly> =
                [("a1".to_string(), Poly::zero())].into_iter().collect();
            vec![
                (
                    "Fil10(1)".into(),
                    vec![v("a1"), full[1].clone(), full[2].substitute(&a1_zero)],
                ),
                (
                    "Fil10(2)".into(),
                    vec![
                        v("a2"),
                        lin(&[(1, "a4"), (1, "a7")]),
                        v("a1") * lin(&[(2, "a9"), (5, "a11")])
                            + v("a4") * lin(&[(3, "a5"), (5, "a8"), (5, "a10")]),
                    ],
                ),
                (
                    "Fil10(3)".into(),
                    vec![
                        lin(&[(1, "a2"), (2, "a4")]),
                        lin(&[(3, "a4"), (7, "a7")]),
                        v("a1") * lin(&[(2, "a9"), (5, "a11")])
                            + v("a4")
                                * (Poly::constant(Scalar::ratio(9, 7)) * v("a5")
                                    + Poly::constant(Scalar::ratio(43, 7)) * v("a8")
                                    + c(5) * v("a10")),
                    ],
                ),
            ]
        }
        other => return Err(Error::UnknownFamily(other.to_string())),
    };
    let family = if variety == "fil8" { fil8() } else { fil10() };
    let full = family.full_assignment(params)?;
    components
        .into_iter()
        .map(|(name, defining)| {
            let member = defining
                .iter()
                .map(|p| p.eval(&full))
                .collect::<Result<Vec<_>>>()?
                .iter()
                .all(Scalar::is_zero);
            Ok(ComponentMembership {
                name,
                defining,
                member,
            })
        })
        .collect()
}

/// One classification representative: the parameter tuple (with the free
/// scalar lambda substituted) and its verified table.
#[derive(Clone, Debug)]
pub struct Representative {
    pub label: String,
    pub lambda: Option<Scalar>,
    pub params: BTreeMap<String, Scalar>,
    pub table: StructureTable,
}

/// Classification representatives of the two dim-8 components. Tuples with a
/// free scalar are sampled at lambda in {0, 1, 2, -1}.
pub fn representatives(list_id: &str) -> Result<Vec<Representative>> {
    const LAMBDA: &str = "L";
    let (family, names, tuples): (FamilyDescriptor, [&str; 6], Vec<[&str; 6]>) = match list_id {
        "fil8c1" => (
            fil8c1(),
            ["a2", "a4", "a5", "a6", "a7", "a8"],
            vec![
                [LAMBDA, "1", "-1", "1", "0", "0"],
                [LAMBDA, "1", "0", "0", "0", "0"],
                ["-2", "1", "1", "0", "0", "0"],
                ["1", "0", "-1", "1", LAMBDA, "0"],
                ["0", "0", LAMBDA, "1", "1", "0"],
                ["0", "0", LAMBDA, "1", "0", "0"],
                [LAMBDA, "0", "0", "0", "1", "1"],
                ["1", "0", "0", "0", "1", "0"],
                ["1", "0", "0", "0", "0", "1"],
                ["1", "0", "0", "0", "0", "0"],
                ["0", "0", "1", "0", "1", "0"],
                ["0", "0", "1", "0", "0", "0"],
                ["0", "0", "0", "0", "1", "0"],
                ["0", "0", "0", "0", "0", "1"],
                ["0", "0", "0", "0", "0", "0"],
            ],
        ),
        "fil8c2" => (
            fil8c2(),
            ["a1", "a2", "a5", "a6", "a7", "a8"],
            vec![
                ["1", "0", "0", "0", "0", "0"],
                ["1", "0", "0", "0", "1", "0"],
                ["1", "0", "1", "0", LAMBDA, "0"],
                ["1", "1", LAMBDA, "-2", "0", "0"],
            ],
        ),
        other => return Err(Error::UnknownFamily(other.to_string())),
    };
    let lambda_samples = [0i64, 1, 2, -1];
    let mut out = Vec::new();
    for tuple in tuples {
        let has_lambda = tuple.contains(&LAMBDA);
        let samples: Vec<Option<Scalar>> = if has_lambda {
            lambda_samples
                .iter()
                .map(|&l| Some(Scalar::from_int(l)))
                .collect()
        } else {
            vec![None]
        };
        for lam in samples {
            let mut params = BTreeMap::new();
            for (name, text) in names.iter().zip(tuple.iter()) {
                let value = if *text == LAMBDA {
                    lam.clone().unwrap()
                } else {
                    text.parse::<Scalar>().unwrap()
                };
                if !value.is_zero() {
                    params.insert(name.to_string(), value);
                }
            }
            let table = family.instantiate(&params)?;
            out.push(Representative {
                label: format!("({})", tuple.join(", ")),
                lambda: lam,
                params,
                table,
            });
        }
    }
    Ok(out)
}

/// Seeded random constraint-satisfying points of a family. Points cover
/// both the contact side (antidiagonal constants nonzero) and the
/// degenerate side, so equivalence tests see both verdicts.
pub fn sample_points(id: &str, seed: u64, count: usize) -> Result<Vec<BTreeMap<String, Scalar>>> {
    let mut generator = rng::rng(seed);
    let mut out: Vec<BTreeMap<String, Scalar>> = Vec::new();
    match id {
        "fil8c1" | "fil8c2" | "t1alpha" | "t2t8" | "t9" => {
            let d = descriptor(id, None)?;
            while out.len() < count {
                let mut p = BTreeMap::new();
                for name in &d.params {
                    p.insert(name.clone(), rng::small_rational(&mut generator, 3));
                }
                out.push(p);
            }
        }
        "fil8" => {
            while out.len() < count {
                let mut p = BTreeMap::new();
                for name in ["a5", "a6", "a7", "a8"] {
                    p.insert(name.to_string(), rng::small_rational(&mut generator, 3));
                }
                if out.len() % 2 == 0 {
                    // component 1: a1 = 0
                    p.insert("a2".into(), rng::small_rational(&mut generator, 3));
                    p.insert("a4".into(), rng::small_rational(&mut generator, 3));
                } else {
                    // component 2: 5 a4 + 2 a2 = 0
                    let a2 = rng::small_rational(&mut generator, 3);
                    let a4 = &Scalar::ratio(-2, 5) * &a2;
                    p.insert("a1".into(), rng::small_nonzero_rational(&mut generator, 3));
                    p.insert("a2".into(), a2);
                    p.insert("a4".into(), a4);
                }
                out.push(p);
            }
        }
        "fil9" | "contact9" | "sympl8" => {
            let tail: &[&str] = match id {
                "fil9" => &["a5", "a7", "a8", "a9", "a10", "a11"],
                "sympl8" => &["a5", "a7", "a8", "a9", "a10"],
                _ => &[],
            };
            while out.len() < count {
                let mut p = BTreeMap::new();
                for name in tail {
                    p.insert(name.to_string(), rng::small_rational(&mut generator, 3));
                }
                if out.len() % 4 == 3 {
                    // degenerate stratum a6 = 0 forces a4 = 0
                    p.insert("a2".into(), rng::small_nonzero_rational(&mut generator, 3));
                } else {
                    let a6 = rng::small_nonzero_rational(&mut generator, 3);
                    let a4 = if out.len() % 4 == 2 {
                        Scalar::zero()
                    } else {
                        rng::small_rational(&mut generator, 3)
                    };
                    let a2 = solve_fil9_a2(&a4, &a6);
                    p.insert("a2".into(), a2);
                    p.insert("a4".into(), a4);
                    p.insert("a6".into(), a6);
                }
                out.push(p);
            }
        }
        "fil11" | "contact11" | "sympl10" => {
            let with_tail = id != "contact11";
            while out.len() < count {
                let degenerate = out.len() % 4 == 3;
                let sample = sample_dim11_point(&mut generator, degenerate, with_tail, id);
                if let Some(p) = sample {
                    out.push(p);
                }
            }
        }
        other => return Err(Error::UnknownFamily(other.to_string())),
    }
    Ok(out)
}

/// One constraint-satisfying dim-11 point via the `z` parametrization:
/// `J1` solved for `z1`, `J3` for `z4`, `J2` for `z5`, `J4` for `z8`.
fn sample_dim11_point(
    generator: &mut rand_chacha::ChaCha8Rng,
    degenerate: bool,
    with_tail: bool,
    id: &str,
) -> Option<BTreeMap<String, Scalar>> {
    let two = Scalar::from_int(2);
    let mut p: BTreeMap<String, Scalar> = BTreeMap::new();
    let (z1, z2, z3, z4);
    if degenerate {
        // z2 = z3 = z4 = 0 satisfies J1 and J3 with z1 free
        z1 = rng::small_nonzero_rational(generator, 3);
        z2 = Scalar::zero();
        z3 = Scalar::zero();
        z4 = Scalar::zero();
    } else {
        z2 = rng::small_nonzero_rational(generator, 3);
        z3 = rng::small_nonzero_rational(generator, 3);
        z1 = (&(&Scalar::from_int(3) * &z2) * &(&z2 + &z3)) / (&two * &z3);
        let denom = &(&two * &z1) + &(&Scalar::from_int(7) * &(&z2 + &z3));
        if denom.is_zero() {
            return None;
        }
        z4 = (&(&two * &z3) * &(&(&two * &z2) + &z3)) / denom;
    }
    p.insert("a10".into(), z4.clone());
    p.insert("a7".into(), &z3 - &z4);
    p.insert("a4".into(), &(&z2 - &z3) + &z4);
    p.insert("a2".into(), &(&z1 - &z2) + &(&z3 - &z4));
    if with_tail {
        let z6 = rng::small_rational(generator, 2);
        let z7 = if degenerate {
            Scalar::zero()
        } else {
            rng::small_rational(generator, 2)
        };
        // J2: z7 (2z1 + 2z2 + z3) + z3 (3z5 + z6) - 7 z2 z6 = 0
        let z5 = if z3.is_zero() {
            // degenerate branch has z2 = z3 = 0, z7 = 0: J2 vanishes
            rng::small_rational(generator, 2)
        } else {
            let num = &(&(&Scalar::from_int(7) * &z2) * &z6)
                - &(&z7 * &(&(&two * &(&z1 + &z2)) + &z3));
            let num = &num - &(&z3 * &z6);
            num / (&Scalar::from_int(3) * &z3)
        };
        let z9 = rng::small_rational(generator, 2);
        // J4: z4 (2z8 + 5z9) - z10 (2z1 + 9z2 + 12z3) - z7 (3z5 + 7z6 - z7)
        //     + 4 z6^2 - 2 z3 (2z8 + 7z9) + 8 z9 (z2 + 2z3) = 0
        let coeff_z8 = &(&two * &z4) - &(&Scalar::from_int(4) * &z3);
        let (z8, z10);
        if coeff_z8.is_zero() {
            if !degenerate {
                return None;
            }
            // z2 = z3 = z4 = z7 = 0: J4 = -2 z1 z10 + 4 z6^2
            z8 = rng::small_rational(generator, 2);
            z10 = (&(&two * &(&z6 * &z6))) * &z1.inv().unwrap();
        } else {
            z10 = rng::small_rational(generator, 2);
            let mut rhs = &z10
                * &(&(&(&two * &z1) + &(&Scalar::from_int(9) * &z2))
                    + &(&Scalar::from_int(12) * &z3));
            rhs += &z7 * &(&(&(&Scalar::from_int(3) * &z5) + &(&Scalar::from_int(7) * &z6)) - &z7);
            rhs -= &Scalar::from_int(4) * &(&z6 * &z6);
            rhs -= &(&Scalar::from_int(8) * &z9) * &(&z2 + &(&two * &z3));
            rhs += &(&two * &z3) * &(&Scalar::from_int(7) * &z9);
            rhs -= &(&Scalar::from_int(5) * &z4) * &z9;
            z8 = &rhs * &coeff_z8.inv().unwrap();
        }
        p.insert("a11".into(), z7.clone());
        p.insert("a8".into(), &z6 - &z7);
        p.insert("a5".into(), &z5 - &z7);
        p.insert("a14".into(), z10.clone());
        p.insert("a12".into(), &z9 - &z10);
        p.insert("a9".into(), &(&z8 - &z9) + &z10);
        for name in ["a13", "a15", "a16", "a17", "a18", "a19"] {
            if id == "sympl10" && name == "a19" {
                continue;
            }
            p.insert(name.to_string(), rng::small_rational(generator, 2));
        }
    }
    Some(p)
}

/// Solve the dim-9 constraint for `a2` given `a4` and `a6 != 0`:
/// `a2 = (3 a4^2 - 2 a6^2 - a4 a6) / (2 a6)`.
pub fn solve_fil9_a2(a4: &Scalar, a6: &Scalar) -> Scalar {
    let num = &(&(&Scalar::from_int(3) * &(a4 * a4)) - &(&Scalar::from_int(2) * &(a6 * a6)))
        - &(a4 * a6);
    num / (&Scalar::from_int(2) * a6)
}
