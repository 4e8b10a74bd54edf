//! Bell nonlocality, steering and broadcasting analysis for two-qubit states.
//!
//! States are carried in Bloch canonical form ([`Bloch2Q`]: local Bloch
//! vectors plus the 3×3 correlation matrix) and converted to dense 4×4
//! density matrices ([`Density4`]) when spectra are needed.
//!
//! - [`criteria`]: Horodecki CHSH value, CJWR steering functionals, an LHS
//!   sufficient criterion and PPT negativity.
//! - [`cloning`]: Buzek–Hillery cloner parameters, the closed-form Bloch maps
//!   they induce, named state families and the no-broadcasting bound checks.
//! - [`oracle`]: explicit cloning isometries built from machine-vector Gram
//!   matrices, full simulation of the broadcasting circuit and reduction to
//!   every output pair. It shares no code path with the closed-form maps.
//! - [`verify`]: randomized theorem suites used by the CLI and the
//!   acceptance tests.

#![forbid(unsafe_code)]

pub mod bloch;
pub mod cloning;
pub mod criteria;
mod error;
pub mod linalg;
pub mod multiq;
pub mod oracle;
pub mod sampling;
pub mod state_file;
pub mod tolerance;
pub mod verify;

pub use bloch::{from_density, to_density, validate, Bloch2Q, Density4, Validity};
pub use cloning::{BroadcastOutcome, ClonerFamily, ClonerSpec, Criterion};
pub use criteria::{MeasSettings, NonlocalityReport};
pub use error::{Error, Result};
pub use multiq::{Label, MultiQState};

pub use nalgebra::Complex;
/// Double-precision complex scalar used throughout.
pub type C64 = Complex<f64>;
