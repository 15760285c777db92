//! Unified quasi-incompressible Navier-Stokes Cahn-Hilliard toolkit.
//!
//! The crate covers the pointwise algebra of binary mixtures ([`mixture`]),
//! periodic grid fields ([`fields`]), free energies and chemical potentials
//! for four order-parameter/measure choices ([`energy`]), constitutive laws
//! ([`constitutive`]), a volume-averaged-velocity time stepper with v-form and
//! Lowengrub-Truskinovsky residual certification ([`solver`]), and a seeded
//! identity audit ([`audit`]).
//!
//! Each capability has a runnable example:
//!
//! ```text
//! cargo run --release --example mixture_algebra
//! cargo run --release --example chemical_potentials
//! cargo run --release --example pressure_transforms
//! cargo run --release --example spinodal
//! cargo run --release --example model_h_reduction
//! cargo run --release --example formulation_residuals
//! cargo run --release --example identity_audit
//! cargo run --release --example snapshot_roundtrip
//! ```

pub mod audit;
pub mod cli;
pub mod config;
pub mod constitutive;
pub mod energy;
mod error;
pub mod fields;
pub mod linalg;
pub mod mixture;
pub mod scenario;
pub mod snapshot;
pub mod solver;

pub use error::{Error, Result};
pub use fields::{Grid, ScalarField, TensorField, VectorField};
pub use mixture::{make_constants, MixtureConstants};
