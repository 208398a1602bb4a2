//! Singular perturbation toolkit for the Robertson kinetics model.
//!
//! The crate is `no_std` (with `alloc`) and purely computational: vector fields,
//! a stiff integrator, parameter- and phase-space blow-up charts, singular orbit
//! construction and the comparison machinery (Hausdorff distances, convergence
//! studies). File formats, the command line and parallel sweeps live in the
//! `robertson` companion crate.
#![cfg_attr(not(test), no_std)]

extern crate alloc;

pub mod analysis;
pub mod charts;
pub mod error;
pub mod hausdorff;
pub mod linalg;
pub mod model;
pub mod orbits;
pub mod param_geometry;
pub mod solver;

pub mod fit;
mod math;

pub use error::{Error, Result};
pub use hausdorff::{hausdorff, Point2};
pub use model::{FullState, RateConstants, ReducedState, ScaledParams};
pub use param_geometry::{classify, Regime, RegimeConfig};
pub use solver::{integrate, EventSpec, SolverSettings, Trajectory};
