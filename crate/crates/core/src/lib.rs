//! One-dimensional rope mechanics for climber falls.
//!
//! The crate covers the closed-form peak-force bound and the constant-tension
//! rope that attains it, an event-driven fall simulator (single rope, rope over
//! a frictional carabiner, hysteretic ropes), convexification of sampled
//! energies, and a pattern search that recovers the optimal rope numerically.
//!
//! ```
//! use ropesim::analysis::{lower_bound_b0, Scenario};
//!
//! let s = Scenario::new(80.0, 9.8, 10.0, 1.0, 5.0).unwrap();
//! assert!((lower_bound_b0(&s) - 4704.0).abs() < 1e-9);
//! ```

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod analysis;
pub mod cli;
pub mod config;
pub mod constitutive;
pub mod design;
pub mod dynamics;
pub mod error;
pub mod io;
pub mod plot;

pub use error::{Error, Result};
