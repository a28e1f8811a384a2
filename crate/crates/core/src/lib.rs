//! Learn Hamiltonian dynamics from trajectory data with a parameter-cognizant
//! energy network, then predict dynamics and the transition to chaos at
//! parameter values never seen in training.

pub mod error;
pub mod seeds;
pub mod network;
pub mod systems;

pub use error::{Error, Result};
pub use systems::{
    integrate, poincare_section, CrossingDirection, PhaseState, PhaseVelocity, SystemField,
    SystemKind, SystemSpec, Trajectory, VectorField,
};
