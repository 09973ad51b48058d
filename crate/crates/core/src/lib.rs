//! Fourier-mode verification toolkit for thermoelastic laminated Timoshenko
//! systems on the whole line.

pub mod dynamics;
pub mod envelope;
pub mod error;
pub mod fullline;
pub mod lyapunov;
pub mod model;
pub mod quadrature;

pub use error::{Error, Result};
