//! Angular resolution limit (ARL) of two closely spaced far-field sources on
//! a linear, possibly non-uniform, sensor array.
//!
//! The ARL is the spacing δ between the electrical angles ν = k sin θ of the
//! two sources that equals the standard deviation of its own estimate,
//! δ² = CRB(δ). This crate evaluates it two ways:
//!
//! * [`arl::closed_form_arl`]: the explicit expressions obtained by
//!   linearizing the coupling term η around δ = 0;
//! * [`smith_solver::numeric_arl`]: a bracketing root search on the exact
//!   equation.
//!
//! ```
//! use arl_core::{arl, geometry::ArrayGeometry, signals::{make_pair, Scenario}};
//! use num_complex::Complex64;
//!
//! let geometry = ArrayGeometry::ula(6, 1.0).unwrap();
//! let sources = make_pair(100, 1.0, 1.0, Complex64::new(0.0, 0.0)).unwrap();
//! let scenario = Scenario::new(geometry, sources, 1.0).unwrap();
//! let r = arl::closed_form_arl(&scenario).unwrap();
//! assert!((r.delta - (1.0f64 / 5500.0).sqrt()).abs() < 1e-15);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod arl;
pub mod crb;
pub mod error;
pub mod experiments;
pub mod geometry;
pub mod signals;
pub mod smith_solver;

pub use error::{Error, Result};
