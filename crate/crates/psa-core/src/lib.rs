//! Pseudospectral abscissa of matrices and analytic matrix-valued functions.
//!
//! The crate estimates the rightmost point of the ε-pseudospectrum either from
//! eigenvalue perturbation theory (first and second order) or by fixed-point
//! iterations over rank-one perturbations, and provides brute-force and
//! criss-cross reference computations to check the results.

pub mod numkernel;
pub mod nep;
pub mod approx;
pub mod fixedpoint;
pub mod oracle;
pub mod problems;
