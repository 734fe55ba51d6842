//! Simulation library for coherently controlled (quantum-switch) charging and
//! stabilization of qubit batteries.
//!
//! The crate is organized bottom-up:
//!
//! - [`qops`]: dense complex operators, density matrices, partial traces.
//! - [`channels`]: CPTP maps as Kraus sets; dilation and Lindblad extraction.
//! - [`switch`]: the two-process quantum switch and control measurement.
//! - [`unitary`]: the static unitary charger-pair protocol and its closed forms.
//! - [`gibbs`]: the thermal-mediator charging protocol, f/g/h comparison.
//! - [`stabilizer`]: switch-based rescue of a dissipating charged battery.

pub mod channels;
pub mod error;
pub mod gibbs;
pub mod qops;
pub mod stabilizer;
pub mod switch;
pub mod tol;
pub mod unitary;

pub use channels::{KrausChannel, LindbladSpec};
pub use error::{Error, Result};
pub use gibbs::GibbsSpec;
pub use qops::{fidelity, partial_trace, DensityMatrix, Operator};
pub use stabilizer::StabilizerSpec;
pub use switch::{ControlState, SwitchOutcome};
pub use unitary::{ChargerSpec, UnitaryProtocol};
