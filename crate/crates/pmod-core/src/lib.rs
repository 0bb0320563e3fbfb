//! Exact-arithmetic persistence modules.
//!
//! This crate implements persistence modules in two interchangeable models —
//! diagrams over (ℝ, ≤) and over (ℕ, ≤), the latter equivalent to graded
//! `𝕜[t]`-modules — together with the functors that connect them and
//! verifiable certificates for the interleavings those functors induce.
//!
//! Everything is exact: indices are arbitrary-precision rationals and
//! coefficients live in a prime field, so interleaving verdicts are reliable
//! at cell boundaries.
//!
//! The main pieces:
//!
//! * [`rational`], [`field`], [`matrix`] — the exact arithmetic kernel.
//! * [`module`] — [`module::TameModule`], evaluation, structure maps, the
//!   shift and pixelization endofunctors, canonical forms and rank tables.
//! * [`barcode`] — interval decomposition in both directions.
//! * [`graded`] — graded `𝕜[t]`-presentations and the equivalence with
//!   natural persistence modules.
//! * [`bridge`] — the discretization/realification functors between real
//!   and natural modules and their composites.
//! * [`interleave`] — ε-shifted module maps, strong/weak certificate
//!   verification, canonical certificate constructions, weak-to-strong
//!   promotion, and independent oracles (bottleneck distance, brute-force
//!   search).
//! * [`mod@format`] — bit-exact line-oriented text formats for every artifact.
//! * [`generate`] — deterministic seeded instance generators.

pub mod barcode;
pub mod bridge;
pub mod error;
pub mod field;
pub mod format;
pub mod generate;
pub mod graded;
pub mod interleave;
pub mod matrix;
pub mod module;
pub mod rational;

pub use barcode::{decompose, from_barcode, Barcode};
pub use error::{Error, Result};
pub use field::FieldElement;
pub use matrix::Matrix;
pub use module::{IndexKind, RankTable, TameModule};
pub use rational::{Extended, Rational};
