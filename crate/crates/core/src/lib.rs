//! Exact-arithmetic toolkit for filiform nilpotent Lie algebras.
//!
//! The crate is organized around a handful of exact carriers — rationals,
//! sparse multivariate polynomials, matrices, structure-constant tables and
//! exterior-algebra elements — and the operations the theory needs on top of
//! them:
//!
//! - [`lie`]: brackets, Jacobi verification, central series, the filiform
//!   predicate, characteristic sequences, quotients and base change;
//! - [`forms`]: the Chevalley-Eilenberg `d`, wedge products, contact and
//!   symplectic detection, central extensions;
//! - [`families`]: the named parametrized families in dimensions 8-11 plus
//!   the general odd-dimensional contact model, with constraint checking,
//!   component membership and classification representatives;
//! - [`vergnegen`]: derivation of the generic filiform bracket from the
//!   shift recursion, Jacobi ideal generation, weight-graded reduction and
//!   the equation-counting formulas;
//! - [`cohomology`]: restricted deformation cohomology (cocycles within a
//!   family pattern modulo coboundaries landing in it) and linear
//!   deformation checks;
//! - [`affine`]: left-symmetric products, adjoint-type construction from an
//!   `L_1` matrix, the symplectic-to-affine construction and completeness.
//!
//! Everything is exact: no floats anywhere, all predicates decide by
//! rational arithmetic.

pub mod affine;
pub mod cohomology;
pub mod error;
pub mod families;
pub mod forms;
pub mod lie;
pub mod matrix;
pub mod poly;
pub mod rng;
pub mod scalar;
pub mod vergnegen;

pub use error::{Error, Result};
pub use lie::{CharSeq, PolyTable, StructureTable, Table};
pub use matrix::Matrix;
pub use poly::Poly;
pub use scalar::{RingElem, Scalar};
