//! Montgomery-curve x-only elliptic curve arithmetic over odd-characteristic
//! fields.
//!
//! The library provides the full x-line toolchain on curves
//! `B*y^2 = x*(x^2 + A*x + 1)`:
//!
//! * [`modarith`]: arbitrary-precision residue arithmetic over prime fields
//!   and composite rings, with exact operation counting;
//! * [`curve`]: curve parameters, the affine group law, 4-torsion
//!   classification, the Suyama family, and conversions to short Weierstrass
//!   and twisted Edwards models;
//! * [`xline`]: projective `(X : Z)` pseudo-addition and pseudo-doubling,
//!   plus extended variants that tolerate degenerate differences;
//! * [`ladder`]: the Montgomery ladder (reference and branch-free uniform
//!   forms), constant-time conditional swap, Okeya-Sakurai y-recovery, and
//!   x-only Diffie-Hellman on named curves;
//! * [`chains`]: Euclidean differential addition chains (the binary PRAC
//!   family) and a chain-length statistics harness;
//! * [`ecm`]: stage-1 elliptic curve factoring over `Z/NZ`;
//! * [`oracle`]: slow, independent reference implementations used by the
//!   test suite (exhaustive point enumeration, subgroup structure, x-lifting).
//!
//! Scalar multiplication comes in two flavors with different contracts: the
//! uniform ladder performs an operation sequence that depends only on the
//! scalar's bit length and is the only entry point meant for secret scalars,
//! while the Euclidean chains are shorter on average but variable-time and
//! reserved for public scalars (ECM, verification-style workloads).
//!
//! With the default `parallel` feature, ECM curve attempts and statistics
//! campaigns fan out over a rayon pool; disabling the feature falls back to
//! sequential execution with bit-identical results.

pub mod chains;
pub mod curve;
pub mod ecm;
pub mod ladder;
pub mod modarith;
pub mod oracle;
pub mod xline;

pub use modarith::{Element, Error, Modulus, OpCount};
