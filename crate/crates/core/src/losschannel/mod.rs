//! Density-matrix level model of a lossy channel.
//!
//! A channel of efficiency η is a beam splitter of transmissivity η whose
//! second input is vacuum and whose second output is discarded. On a single
//! bosonic mode truncated to `dim` Fock levels this is the Kraus map
//! ρ ↦ Σₙ Vₙ ρ Vₙ†, with ⟨m−n|Vₙ|m⟩ = sqrt(C(m,n)) η^((m−n)/2) (1−η)^(n/2).
//!
//! [`beam_splitter_check`] builds the beam-splitter unitary by matrix
//! exponential and compares its partial trace against the Kraus map.
//! [`grid`] applies the map to entangled and unentangled multi-channel
//! states on a discretised frequency grid.

mod beam_splitter;
mod density;
mod expm;
pub mod grid;
mod kraus;

pub use beam_splitter::{beam_splitter_channel, beam_splitter_check, beam_splitter_deviation};
pub use density::{CMatrix, DensityMatrix};
pub use expm::matrix_exp;
pub use grid::{post_loss_entangled, post_loss_unentangled, FrequencyGrid};
pub use kraus::{apply_loss, kraus_operators, KrausSet};
