//! Exact solver and certificate verifier for Tverberg, rainbow Tverberg and
//! plus-minus Tverberg partitions of rational point configurations.
//!
//! A plus-minus partition of points `a(v_0), …, a(v_N)` in `R^d` with a
//! distinguished face `μ` consists of `r` disjoint blocks whose affine hulls
//! share a point `b`, with affine coefficients that are `≤ 0` on `μ` and
//! `≥ 0` elsewhere. The [`pipeline`] finds one by separating `a(μ)` from the
//! rest with a hyperplane, lifting every point onto a hyperplane of `R^{d+1}`
//! through a projective transformation, running an ordinary (or rainbow)
//! Tverberg search there, and pulling the convex coefficients back.
//!
//! All arithmetic is exact.

pub mod arith;
pub mod io;
pub mod linalg;
pub mod lp;
pub mod model;
pub mod pipeline;
pub mod random;
pub mod separation;
pub mod solver;
pub mod verify;

pub use arith::{format_scalar, parse_scalar, Point, Scalar};
pub use io::{parse_certificate, parse_configuration, serialize_certificate, serialize_configuration, FormatError};
pub use model::{Coloring, Configuration, Face, Mode, PlusMinusCertificate, TverbergPartition};
pub use pipeline::{corollary_coloring, plus_minus_partition, run_corollary, PipelineError, SolveMode};
pub use separation::{Hyperplane, LiftedConfiguration};
pub use verify::{oracle_enumerate, verify_certificate, RejectReason, Verdict};
