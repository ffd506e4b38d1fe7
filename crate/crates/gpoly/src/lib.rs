//! Exact topological graph polynomials.
//!
//! This crate computes, over arbitrary-precision rationals, the graph
//! polynomials that govern the parametric representation of quantum field
//! theory: the Tutte polynomial and its multivariate relatives, the first and
//! second Symanzik polynomials together with their harmonic-regulated
//! generalizations, the Bollobás-Riordan family on ribbon graphs, and the
//! noncommutative (Moyal) Symanzik polynomials.
//!
//! Every polynomial is computable by at least two independent routes (subset
//! expansion, deletion/contraction recursion, exact linear-algebra oracles)
//! and the routes are required to agree exactly — that agreement is the
//! correctness strategy of the whole crate.
//!
//! The building blocks:
//!
//! * [`poly`] — the exact multivariate polynomial ring [`MPoly`] over
//!   `BigRational` with typed variable [`Atom`]s, plus [`MomentumForm`] for
//!   bilinear expressions in external momenta.
//! * [`graph`] — multigraphs with oriented edges, vertex weights and flags;
//!   contraction, deletion, subset enumeration.
//! * [`ribbon`] — ribbon graphs (combinatorial maps), boundary traversal,
//!   genus, duality, double contraction of nice crossings.
//! * [`classical`] — Tutte, multivariate Tutte, forest, Symanzik and
//!   categorified polynomials.
//! * [`matrix`] — symbolic determinants, Pfaffians and adjugates used as
//!   independent oracles.
//! * [`br`] — Bollobás-Riordan polynomials and the flagged boundary
//!   polynomial Ξ.
//! * [`nc`] — the Moyal-space polynomials U*, 𝒳*, 𝒴*.
//! * [`gpg`] — the `.gpg` graph-file format.
//! * [`check`] — the cross-method identity suites exposed by the CLI.

pub mod poly;
pub mod graph;
pub mod ribbon;
pub mod classical;
pub mod matrix;
pub mod br;
pub mod nc;
pub mod gpg;
pub mod random;
pub mod check;
pub mod fixtures;

mod error;

pub use error::{Error, Result};
pub use graph::{EdgeId, EdgeKind, FlagId, Graph, Limits, SubsetFamily, VertexId};
pub use poly::{Atom, MPoly, MomentumForm, Rat};
pub use ribbon::{Boundary, End, RibbonGraph, Slot};
