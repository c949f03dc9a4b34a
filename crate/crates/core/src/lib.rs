//! Exact-arithmetic calculus of surface-like pseudolattices.
//!
//! A pseudolattice is a free abelian group of finite rank with a
//! nondegenerate integer bilinear form that is in general neither symmetric
//! nor skew. This crate detects surface-like structures (a distinguished
//! point-like vector), computes their invariants (Neron-Severi lattice,
//! canonical class, defect), mutates exceptional bases and descends their
//! norm, builds toric systems with their rank-2 fans, runs the contraction
//! minimal model program, and decides the numerical existence criterion for
//! exceptional bases.
//!
//! Vectors are coordinate columns: `chi(v, w) = v^T X w` where
//! `X[i][j] = chi(b_i, b_j)`. All arithmetic is exact.

pub mod exceptional;
pub mod lattice;
pub mod linalg;
pub mod mmp;
pub mod models;
pub mod toric;

pub use lattice::{Pseudolattice, SurfaceStructure};
pub use linalg::{IntMatrix, RatVector};
