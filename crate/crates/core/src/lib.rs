//! Fundamental solutions of homogeneous elliptic operators with constant
//! coefficients, evaluated as distributions on Gaussian-type test functions.
//!
//! Two independent routes are provided. [`pairing`] evaluates the closed
//! form ⟨𝔖, f⟩ directly in polar coordinates, with a logarithmic correction
//! when the degree reaches the dimension. [`continuation`] evaluates the
//! holomorphic family ⟨𝔭(z−1), f⟩ and extracts its Laurent coefficients at
//! z = 0, whose constant term is again a fundamental solution.
//!
//! ```
//! use fundsol::{pair, HomogeneousSymbol, RunConfig, TestFunction};
//!
//! let laplacian = HomogeneousSymbol::laplacian(3).unwrap();
//! let f = TestFunction::gaussian(3, 1.0).unwrap();
//! let config = RunConfig { sphere_level: 2, ..RunConfig::default() };
//! let value = pair(&laplacian, &f, &config).unwrap().value;
//! assert!((value.re - 1.0).abs() < 1e-10);
//! ```

// Negated comparisons are used on purpose so that NaN inputs are rejected.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod config;
pub mod continuation;
pub mod error;
pub mod pairing;
pub mod parallel;
pub mod poly;
pub mod quadrature;
pub mod schwartz;
pub mod special;
pub mod symbols;

pub use config::RunConfig;
pub use continuation::{
    g_amplitude, g_derivative, laurent, laurent_default, pole_scan, pz_pairing,
    verify_delta_limit, verify_null_relations, ContinuationKernel, DeltaReport, LaurentExpansion,
    NullReport, PoleReport,
};
pub use error::{Error, Result};
pub use pairing::{
    constant_c, constant_d, pair, pair_subcritical, pair_supercritical, pair_value, potential_at,
    spherical_average, spherical_average_derivative, Branch, PairingResult,
};
pub use parallel::Execution;
pub use poly::Polynomial;
pub use quadrature::{radial_rule, sphere_rule, RadialRule, SphereRule};
pub use schwartz::{GaussTerm, TestFunction};
pub use symbols::{parse_polynomial, parse_symbol, HomogeneousSymbol, SymbolForm};
