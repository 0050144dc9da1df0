//! Simulation and analysis toolkit for entanglement-enhanced positioning and
//! clock synchronization.
//!
//! The crate is organised by concern:
//!
//! * [`spectrum`] – Gaussian spectral models and the arrival-time width Δτ.
//! * [`states`] – the five pulse-state families and their closed-form
//!   accuracies under photon loss, the gain function Λ and region maps.
//! * [`losschannel`] – density-matrix level check of the loss model
//!   (Kraus operators, beam splitter, post-loss structure on a frequency grid).
//! * [`montecarlo`] – seeded, parallel simulation of experimental runs.
//! * [`protocol`] – discrete-event simulation of the two crypto-positioning
//!   protocols with loss and an eavesdropper.
//!
//! Times are dimensionless throughout; Δτ carries the unit.

pub mod error;
pub mod losschannel;
pub mod math;
pub mod montecarlo;
pub mod protocol;
pub mod rng;
pub mod spectrum;
pub mod states;
pub mod stats;

pub use error::{QposError, Result};
pub use spectrum::{GroupSpectrum, SpectrumModel};
pub use states::{AccuracyReport, StateFamily};
