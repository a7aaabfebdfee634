//! Spectral solvers and diagnostics for the semiclassical Hartree equation
//!
//! `i eps u_t + eps^2/2 Lap u = |x|^2/2 u + eps^alpha (|x|^-gamma * |u|^2) u - eps^beta |u|^(2 sigma) u`
//!
//! The crate is generic over the floating point type through [`Real`]; the
//! `*64` aliases below are what the harness uses.

pub mod asymptotics;
pub mod error;
pub mod fft;
pub mod field;
pub mod grid;
pub mod io;
pub mod kernels;
pub mod observables;
pub mod profiles;
pub mod propagators;
pub mod quadrature;
pub mod scalar;
pub mod scattering;
pub mod spectral;
pub mod wigner;

pub use error::{HartreeError, Result};
pub use field::Field;
pub use grid::{make_grid, Grid};
pub use scalar::Real;

pub use num_complex::Complex;

pub type Grid64 = Grid<f64>;
pub type Field64 = Field<f64>;
pub type Grid32 = Grid<f32>;
pub type Field32 = Field<f32>;
pub type C64 = Complex<f64>;
