//! Exact symbolic calculus for differential operators on the 1|1 superline.
//!
//! The superline carries one even coordinate `x` and one odd coordinate `xi`,
//! together with the odd derivative `D = d/dxi + xi*d/dx`, so that `D^2` is the
//! ordinary derivative in `x`. This crate implements, with exact rational
//! arithmetic throughout:
//!
//! - [`funcring`]: the coefficient ring — Grassmann algebra over a fraction
//!   field of exponential polynomials in `x`, with the derivatives `D` and
//!   `d/dx` and the parity involution;
//! - [`superop`]: operators `a_m D^m + ... + a_0`, composition, two-sided
//!   division with remainder, and factorization into first-order operators;
//! - [`kernel`]: kernel bases of constant-coefficient operators, kernel
//!   certification, expansion in a basis and eigenvector search;
//! - [`darboux`]: Darboux transformations via the intertwining relation
//!   `M L0 = L1 M`, elementary (first-order) steps, chain composition, and the
//!   factorization of an arbitrary transformation into elementary steps;
//! - [`io`]: an expression parser, canonical printer, JSON codec and the CLI.

pub mod darboux;
pub mod funcring;
pub mod io;
pub mod kernel;
pub mod superop;

pub(crate) mod linalg;
pub(crate) mod roots;
