//! Numerical toolkit for the anisotropic one-component regularity
//! criteria of the 3-D incompressible Navier-Stokes equations.
//!
//! The library measures mixed Lebesgue norms of velocity fields on a
//! periodic box, validates the exponent algebra of each criterion
//! (including the interpolation-lemma parameter selections and their
//! identity system), numerically exercises the underlying anisotropic
//! inequalities on seeded test ensembles, and monitors the criterion
//! quantities along trajectories of a desk-scale pseudo-spectral solver.
//!
//! The analysis it mirrors lives on all of R^3; here everything is
//! computed on the torus [0,L1) x [0,L2) x [0,L3), so inequality
//! constants may differ from their whole-space counterparts. Every file
//! report carries that notice in its header.
//!
//! ```
//! use nsreg_core::{check_spec, mixed_norm, CriterionSpec, Field, Grid3, MixedNormSpec};
//!
//! // The quasi-critical check derives the horizontal and time exponents
//! // and lands exactly on the critical scaling sum.
//! let report = check_spec(&CriterionSpec::t13(2.0, 3.5));
//! assert!(report.admissible);
//! assert!((report.derived_beta.unwrap() - 8.0 / 3.0).abs() < 1e-14);
//! assert!((report.scaling_sum.unwrap() - 2.0).abs() < 1e-14);
//!
//! // Mixed norm of sin(x3) with inner exponent 2 and outer exponent 4
//! // on the standard box: pi * sqrt(2).
//! let grid = Grid3::cubic(16)?;
//! let f = Field::scalar_from_fn(grid, |_, _, x3| x3.sin())?;
//! let value = mixed_norm(&f, &MixedNormSpec::new(2.0, 4.0)?)?;
//! assert!((value - std::f64::consts::PI * 2.0_f64.sqrt()).abs() < 1e-12);
//! # Ok::<(), nsreg_core::Error>(())
//! ```

// Admissibility conditions are written as negated comparisons on
// purpose: NaN must classify as a violation, which `!(a <= b)` gives and
// `a > b` does not.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod criteria;
pub mod error;
pub mod fft;
pub mod field;
pub mod grid;
pub mod lab;
pub mod monitor;
pub mod norms;
pub mod ops;
pub mod solver;

pub use criteria::{
    check_spec, derive_lemma_params, epsilon_family, lemma_identity_residuals, scaling_sum,
    AdmissibilityReport, CriterionSpec, EpsilonFamily, LemmaContext, LemmaParams, Theorem,
};
pub use error::{Error, Result};
pub use field::{Field, Representation};
pub use grid::{Axis, Grid3};
pub use norms::{lp_norm, mixed_norm, time_lebesgue, MixedNormSpec, ScalarSeries};

/// Notice carried in the header of every file report: the analysis is
/// posed on R^3, the toolkit computes on a periodic box.
pub const DOMAIN_NOTICE: &str =
    "domain: periodic box (torus) surrogate for R^3; all norms are taken over the box";
