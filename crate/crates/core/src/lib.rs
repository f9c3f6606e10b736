//! Exact equivariant K-theory of the even-dimensional complex quadric.
//!
//! The crate builds the integral GKM graph of the quadric `Q_{2n}` under its
//! effective `T^{n+1}`-action, constructs the generator classes `M_v`,
//! `M_v^{-1}` and the Thom classes `Delta_P`, checks the four relation
//! families among them, and writes any K-class uniquely over a free
//! `R(T^{n+1})`-basis of `2n + 2` classes.
//!
//! Everything is computed with arbitrary-precision integers; there are no
//! tolerances anywhere.

pub mod cli;
pub mod decompose;
pub mod error;
pub mod exec;
pub mod format;
pub mod gkm;
pub mod lattice;
pub mod laurent;
pub mod quadric;
pub mod relations;
pub mod selfcheck;

pub use decompose::{CanonicalBasis, Decomposition};
pub use error::{Error, Result};
pub use exec::Strategy;
pub use gkm::{Connection, GkmGraph, VertexMap};
pub use laurent::{ExponentVector, LatticeQuotient, LaurentPolynomial};
pub use quadric::{AdmissibleSubset, QuadricContext};
pub use relations::{GeneratorTable, RelationKind, VerifyOptions, VerifyReport};
