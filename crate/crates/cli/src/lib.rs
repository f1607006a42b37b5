//! Sweeps, figure presets, state files and oracle verification on top of
//! [`ico_cqed_core`].

mod error;
pub mod presets;
pub mod serial;
pub mod sweep;
pub mod verify;

pub use error::{SweepError, UsageError};

/// Version of this crate, recorded in sidecar metadata.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
