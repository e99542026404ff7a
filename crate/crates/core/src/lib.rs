//! Numerical companion for Dirac–Sobolev and Dirac–Hardy inequalities in
//! `L¹`: gamma matrices in any dimension, the Loss–Yau zero mode and its
//! cutoffs, strong and weak Lebesgue (quasi-)norms, Riesz-potential
//! convolutions, and the experiments built on them.
//!
//! ```
//! use weak_dirac::{fields, measure, QuadratureSpec};
//!
//! let psi = fields::loss_yau(3)?;
//! let quad = QuadratureSpec::default();
//! // ψ is not in L^{3/2}, but it is in weak L^{3/2}.
//! assert!(measure::lp_norm(&psi, 1.5, &quad)?.is_infinite());
//! let weak = measure::weak_norm(&psi, 1.5, &quad)?;
//! assert!((weak.value - (4.0 * std::f64::consts::PI / 3.0).powf(2.0 / 3.0)).abs() < 1e-9);
//! # Ok::<(), weak_dirac::Error>(())
//! ```

// `!(x > 0.0)` deliberately rejects NaN along with non-positive values.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod clifford;
pub mod error;
pub mod fields;
pub mod lab;
pub mod measure;
pub mod quadrature;

pub use clifford::{build_gamma_set, GammaSet};
pub use error::{Error, Result};
pub use fields::{CutoffWindow, SpinorField};
pub use quadrature::{QuadratureSpec, VectorNorm};
