//! Exact toolkit for non-trivial t-intersecting families of subspaces over GF(q).
//!
//! * [`qnum`]: Gaussian binomials and every closed-form size and bound.
//! * [`gfq`]: finite fields, canonical subspaces, Grassmannian enumeration.
//! * [`families`]: the three constructions and structural predicates.
//! * [`harness`]: verification campaigns and reports.
//! * [`cli`]: the `qgrass` command line.

pub mod cli;
pub mod families;
pub mod gfq;
pub mod harness;
pub mod qnum;

pub use gfq::{Field, Subspace};
pub use qnum::ExactInt;
