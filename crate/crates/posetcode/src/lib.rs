//! Evaluation codes in poset metrics.
//!
//! The library builds linear codes from spaces of univariate polynomials (or
//! genus-0 rational functions) evaluated through Hasse hyperderivatives, and
//! analyzes them in the NRT chain metric and in bottleneck poset metrics:
//!
//! * [`gf`] - exact arithmetic in GF(p^m) and characteristic-aware binomials,
//! * [`poly`] - polynomials, hyperderivatives, Taylor coefficients, vanishing orders,
//! * [`poset`] - chain unions C(s,r), bottleneck posets U(s,r,b), weight functions,
//! * [`codes`] - constrained evaluation codes, exhaustive weight enumeration,
//!   minimum distance, Singleton/MDS reports, metric comparison, parameter sweeps,
//! * [`agcodes`] - divisors on the projective line, Riemann-Roch spaces, Laurent
//!   expansions, the matrix evaluation map, and the MDS inequality checker,
//! * [`example`] - the reference worked example and its golden table.

pub mod agcodes;
pub mod codes;
mod error;
pub mod example;
pub mod gf;
mod linalg;
pub mod poly;
pub mod poset;

pub use error::{Error, Result};

/// Default cap on exhaustive codeword enumeration.
pub const DEFAULT_BUDGET: u64 = 500_000;
