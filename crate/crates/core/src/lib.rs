//! Exact computations in the Motzkin monoid.
//!
//! * [`diagram`]: diagrams, gluing, generators and idempotency tests.
//! * [`cells`]: Green's cells, Gram matrices, truncations, representation
//!   gaps and connectedness.
//! * [`linalg`]: exact ranks of 0/1 matrices over the rationals and prime
//!   fields.
//! * [`combinatorics`]: Motzkin numbers, cell sizes and the asymptotic
//!   trend curves.
//! * [`stickel`]: a toy two-party key exchange over the monoid.
//!
//! The companion guide lives in `book/`; every Rust snippet in it is
//! compiled and run as a doctest of this crate.

mod dsu;

pub mod cells;
pub mod combinatorics;
pub mod diagram;
pub mod linalg;
pub mod stickel;

pub use cells::{CellDecomposition, GramMatrix, TruncatedMonoid};
pub use combinatorics::{BigCount, LogValue};
pub use diagram::{CompositionResult, Diagram, GeneratorKind, HalfDiagram};
pub use linalg::{FieldSpec, Matrix01};

#[cfg(doctest)]
mod book {
    #[doc = include_str!("../../../book/src/diagrams.md")]
    mod diagrams {}
    #[doc = include_str!("../../../book/src/cells.md")]
    mod cells {}
    #[doc = include_str!("../../../book/src/gram.md")]
    mod gram {}
    #[doc = include_str!("../../../book/src/counting.md")]
    mod counting {}
    #[doc = include_str!("../../../book/src/bounds.md")]
    mod bounds {}
    #[doc = include_str!("../../../book/src/stickel.md")]
    mod stickel {}
}
