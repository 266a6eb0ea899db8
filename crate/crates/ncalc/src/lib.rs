//! ncalc: an exact-arithmetic engine for the calculus of noncommutative
//! geometry at desk scale.
//!
//! The crate computes with noncommutative differential forms and the
//! Karoubi-de Rham complex, Hochschild homology and cohomology with their
//! Gerstenhaber structure, Moyal-Weyl star products and Weyl algebras,
//! necklace (noncommutative symplectic) brackets, representation functors
//! for free algebras, Weil algebras with Chern-Weil and Chern-Simons
//! classes, and Chern characters of idempotents and invertibles.  Every
//! computation is over exact rationals (optionally with a central formal
//! parameter or a dual-number direction); there are no floats.
//!
//! Start with the `examples/` directory of the repository: each example is
//! a runnable tour of one capability.  The `ncalc` binary exposes the same
//! functionality behind subcommands, including a `verify` runner that
//! exercises the identity suites.

pub mod error;
pub mod scalar;
pub mod word;
pub mod linalg;
pub mod structure;
pub mod multipoly;
pub mod cyclic;
pub mod based;
pub mod forms;
pub mod hochschild;
pub mod star;
pub mod rep;
pub mod chern_weil;
pub mod ktheory;
pub mod parser;
pub mod suite;

pub use error::NcalcError;
pub use scalar::{DualScalar, Rational, TPoly};
pub use word::{FreePoly, Word};
