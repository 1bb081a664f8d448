//! Exact arithmetic for the Kronecker structure of matrix pencils.
//!
//! A matrix pencil is a degree-1 matrix polynomial `L(λ) = λB + A` with
//! `A, B` of size `m×n`. Under strict equivalence `(A, B) ↦ (PAQ, PBQ)` the
//! complete invariant is the Kronecker canonical form: Jordan blocks at
//! finite and infinite eigenvalues plus right/left singular blocks. This
//! crate works with that invariant symbolically (integer partitions and
//! eigenvalue maps) and concretely (dense matrices over Gaussian rationals),
//! and decides the classical dominance-order questions about it:
//!
//! - does a pencil lie in the closure of the *orbit* of another
//!   ([`closure::orbit_closure_contains`]),
//! - does it lie in the closure of the *bundle* of another, i.e. the same
//!   question with eigenvalue values quantified away and coalescence allowed
//!   ([`closure::bundle_closure_contains`]),
//! - what does the full bundle hierarchy of a given size look like
//!   ([`hierarchy::hasse`]).
//!
//! Everything is exact: scalars are complex numbers with rational real and
//! imaginary parts, ranks come from Gaussian elimination over that field,
//! and there are no tolerance knobs anywhere.
//!
//! The [`verify`] module bundles the self-check suites that exercise the
//! rank/coalescence machinery on explicitly realized pencils; they are also
//! reachable through the `pencil-strata` CLI.
//!
//! With the default `parallel` feature the bulk operations (pairwise
//! hierarchy tests, verification batches) run on rayon; disabling the
//! feature falls back to equivalent sequential loops.

pub mod closure;
pub mod exact;
pub mod hierarchy;
mod par;
pub mod partitions;
pub mod realize;
pub mod structure;
pub mod verify;

pub use closure::{CoalesceTarget, CoalescenceAssignment};
pub use exact::{ExactMatrix, ExplicitPencil, GaussianRational};
pub use hierarchy::HierarchyGraph;
pub use partitions::Partition;
pub use structure::{BundleSignature, Eigenvalue, PencilStructure};

use thiserror::Error;

/// Errors shared by all modules of the crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed textual input; `pos` is a byte offset into the input.
    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },
    /// A structure violates the Kronecker counting identities.
    #[error("invalid structure: {0}")]
    InvalidStructure(String),
    /// Two operands of a closure test have different sizes.
    #[error("size mismatch: {0}x{1} vs {2}x{3}")]
    SizeMismatch(usize, usize, usize, usize),
    /// A symbolic eigenvalue appeared where a concrete value is required.
    #[error("symbolic eigenvalue @{0} not allowed here")]
    SymbolicEigenvalue(String),
    /// The infinite eigenvalue appeared where only finite ones are allowed.
    #[error("infinite eigenvalue not allowed here: {0}")]
    InfiniteEigenvalue(String),
    /// An eigenvalue was referenced that the structure does not have.
    #[error("unknown eigenvalue {0}")]
    UnknownEigenvalue(String),
    /// Two distinct coalescence classes were assigned the same value.
    #[error("coalescence targets collide at {0}")]
    TargetCollision(String),
    /// A coalescence assignment does not cover the whole spectrum.
    #[error("assignment incomplete: {0}")]
    IncompleteAssignment(String),
    /// Coupled block matrices require pairwise distinct expansion points.
    #[error("repeated expansion point {0}")]
    RepeatedPoint(String),
    /// A displaced or target eigenvalue collides with an untouched one.
    #[error("eigenvalue collision: {0}")]
    EigenvalueCollision(String),
    /// Weyr extraction produced data violating its own invariants.
    #[error("inconsistent Weyr data: {0}")]
    WeyrExtraction(String),
    /// Structures passed to the matrix wrapper must encode `λI − A`.
    #[error("not a matrix-like structure: {0}")]
    NotMatrixLike(String),
    /// An exhaustive search would not finish in reasonable time.
    #[error("search space too large: {0}")]
    SearchTooLarge(String),
}

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;
