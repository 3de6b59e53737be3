//! Numerical diagnostics for the moment problem.
//!
//! Given a density with a smooth tail and a slowly growing shift `φ`, the
//! crate checks whether the tail ratio `f(x + φ(x)) / f(x)` stays below 1.
//! When it does and `φ` passes a regularity certificate, the moments grow at
//! most like `c^n (n log n)^n`, which makes the distribution determined by its
//! moments. The modules are:
//!
//! * [`density`], [`expr`]: catalog densities and user expressions as log-kernels;
//! * [`phi`]: shift families, the inverse of `x + φ(x)`, and the certificate;
//! * [`tail`]: windowed sups of the three tail ratios and their verdicts;
//! * [`moments`], [`quadrature`], [`logspace`]: log-space moment tables;
//! * [`carleman`]: Carleman partial sums and a growth diagnosis;
//! * [`proofs`]: numerical checks of every inequality in the argument;
//! * [`report`]: the end-to-end analysis and its text and JSON renderings.

pub mod carleman;
pub mod density;
pub mod expr;
pub mod logspace;
pub mod moments;
pub mod phi;
pub mod proofs;
pub mod quadrature;
pub mod report;
pub mod tail;
