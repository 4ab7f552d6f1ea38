//! Exact symbolic computation of the N-curvature `D^N` of a deformed
//! q-differential `D = d + a`.
//!
//! Everything is computed over the universal coefficient ring ℤ[q]; the
//! "q is a primitive N-th root of unity" setting is modelled by reducing
//! modulo the cyclotomic polynomial Φ_N.
//!
//! The crate is organised bottom-up:
//!
//! - [`cyclo`]: polynomials in q, q-numbers, Gaussian binomials, Φ_N.
//! - [`paths`]: composition vectors and the weighted path graph whose path
//!   sums give the coefficients of the expansion.
//! - [`freealg`]: the free operator algebra generated by `d` and the
//!   multiplications by `d^j(a)`, with q-Leibniz normal ordering. This is the
//!   brute-force oracle for everything else.
//! - [`curvature`]: the assembled expansions and the cross-validation suite.
//! - [`render`] and [`cli`]: text, LaTeX and JSON emitters and the `qcurv`
//!   command line front end.

pub mod cli;
pub mod curvature;
pub mod cyclo;
mod error;
pub mod freealg;
pub mod paths;
pub mod render;

pub use error::{Error, Result};
