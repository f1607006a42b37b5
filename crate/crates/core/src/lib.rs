//! Dynamics of a two-level atom crossing two single-mode cavities whose order
//! is selected by a control qubit.
//!
//! The crate has two independent evaluation paths:
//!
//! * [`analytic`] evaluates the closed-form resonant Jaynes-Cummings amplitudes
//!   for both traversal orders and the post-selected switch states built from
//!   them.
//! * [`oracle`] builds truncated Fock-space propagators from the dressed-state
//!   decomposition, runs the piecewise schedule for both control branches,
//!   and applies the recombining Hadamard and the control measurement.
//!
//! [`observables`] turns states from either path into probabilities,
//! reduced cavity density matrices, linear entropies and atomic inversions.
//!
//! Everything is `no_std` + `alloc`; file formats and the command line live in
//! the `ico-cqed` crate.
#![no_std]

extern crate alloc;

pub mod analytic;
mod error;
pub mod observables;
pub mod oracle;
pub mod params;
pub mod state;

pub use error::{Error, Result};
pub use num_complex::Complex64;
pub use params::SystemParams;
pub use state::{AtomFieldKet, AtomLevel, Control, FieldKet, FullKet, Ket, PureState};

/// Version of this crate, recorded in output metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
