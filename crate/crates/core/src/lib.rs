//! Statevector simulator for adaptive VQE with parabolic line-search
//! optimizers, three excitation pools and exact cost accounting.

pub mod adapt;
pub mod cli;
pub mod error;
pub mod exact;
pub mod optimize;
pub mod pauli;
pub mod pools;
pub mod state;

pub use error::{Error, Result};
