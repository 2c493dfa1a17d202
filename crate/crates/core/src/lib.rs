//! Exact computations around infinitesimal Alexander invariants.
//!
//! The crate is organized bottom-up:
//!
//! * [`exact_linalg`]: sparse exact linear algebra over Q and Q(ζ_m).
//! * [`free_lie`]: free Lie algebras in the Lyndon basis.
//! * [`quad_lie`]: quadratic Lie algebras `L(V)/ideal(R)` and their
//!   infinitesimal Alexander invariant computed by brute force.
//! * [`alex_module`]: free presentations over `Sym(V)`, the maps δ₃, ∇ and
//!   ∇̄, and degree-wise cokernels.
//! * [`rep_semisimple`]: explicit representations of `sp(2g)` and `sl(n)`.
//! * [`johnson`]: the graded module `C ⊕ coker(q)` for small genus.
//! * [`fox_alex`]: Fox calculus and characteristic-variety point tests.
//! * [`nilpotent_transport`]: unipotent modules and the log/exp transport.
//! * [`cli`]: the `alexinv` command line front end.

pub mod alex_module;
pub mod budget;
pub mod cli;
pub mod combinatorics;
pub mod error;
pub mod exact_linalg;
pub mod fox_alex;
pub mod free_lie;
pub mod johnson;
pub mod nilpotent_transport;
pub mod quad_lie;
pub mod rep_semisimple;

pub use error::{Error, Result};
pub use exact_linalg::{CyclotomicScalar, Field, Rational, RationalMatrix, RationalVec, SparseMatrix, SparseVec};
