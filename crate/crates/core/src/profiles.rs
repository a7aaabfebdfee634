//! Named initial profiles.

use num_complex::Complex;

use crate::error::{HartreeError, Result};
use crate::field::Field;
use crate::grid::Grid;
use crate::scalar::{cst, Real};

/// Initial data shipped with the harness. Each profile is `eps`-independent.
#[derive(Debug, Clone, PartialEq)]
pub enum Profile {
    /// `amplitude pi^{-n/4} exp(-|x|^2 / 2)` (unit mass when `amplitude = 1`).
    Gaussian { amplitude: f64 },
    /// `amplitude prod_a (pi w_a)^{-1/4} exp(-x_a^2 / (2 w_a))`.
    Anisotropic { amplitude: f64, widths: Vec<f64> },
    /// `amplitude (1 + c |x|^2) pi^{-n/4} exp(-|x|^2 / 2)`, real with a sign-changing factor when `c < 0`.
    Modulated { amplitude: f64, coefficient: f64 },
    /// `amplitude c_n exp(-|x|)`, unit mass when `amplitude = 1`. Its Fourier transform decays
    /// only algebraically, so phase-space tails stay visible at every `eps`.
    Exponential { amplitude: f64 },
}

impl Profile {
    pub fn name(&self) -> &'static str {
        match self {
            Profile::Gaussian { .. } => "gaussian",
            Profile::Anisotropic { .. } => "anisotropic",
            Profile::Modulated { .. } => "modulated",
            Profile::Exponential { .. } => "exponential",
        }
    }

    /// Parses `gaussian`, `anisotropic`, `modulated`, `exponential`; shape parameters are filled in by the caller.
    pub fn from_name(name: &str, amplitude: f64, widths: &[f64], coefficient: f64) -> Result<Self> {
        match name {
            "gaussian" => Ok(Profile::Gaussian { amplitude }),
            "anisotropic" => Ok(Profile::Anisotropic { amplitude, widths: widths.to_vec() }),
            "modulated" => Ok(Profile::Modulated { amplitude, coefficient }),
            "exponential" => Ok(Profile::Exponential { amplitude }),
            _ => Err(HartreeError::InvalidParameter(format!("unknown profile '{name}'"))),
        }
    }

    pub fn eval(&self, x: &[f64]) -> f64 {
        let n = x.len() as f64;
        let r2: f64 = x.iter().map(|v| v * v).sum();
        let pi = std::f64::consts::PI;
        match self {
            Profile::Gaussian { amplitude } => amplitude * pi.powf(-n / 4.0) * (-r2 / 2.0).exp(),
            Profile::Anisotropic { amplitude, widths } => {
                x.iter().enumerate().fold(*amplitude, |acc, (a, &v)| {
                    let w = widths.get(a).copied().unwrap_or(1.0);
                    acc * (pi * w).powf(-0.25) * (-v * v / (2.0 * w)).exp()
                })
            }
            Profile::Modulated { amplitude, coefficient } => {
                amplitude * (1.0 + coefficient * r2) * pi.powf(-n / 4.0) * (-r2 / 2.0).exp()
            }
            Profile::Exponential { amplitude } => {
                // int exp(-2|x|) dx = |S^{n-1}| (n-1)! / 2^n
                let mass = match x.len() {
                    1 => 1.0,
                    2 => pi / 2.0,
                    _ => pi,
                };
                amplitude * mass.powf(-0.5) * (-r2.sqrt()).exp()
            }
        }
    }

    /// Samples `V(t) f = (cos t)^{-n/2} f(x / cos t) exp(-i |x|^2 tan t / (2 eps))` directly from the
    /// formula, for `|t| < pi/2`.
    pub fn sample_wkb<T: Real>(&self, grid: &Grid<T>, epsilon: T, t: f64) -> Result<Field<T>> {
        if !(t.abs() < std::f64::consts::FRAC_PI_2) {
            return Err(HartreeError::InvalidParameter(format!("t = {t} must lie strictly between -pi/2 and pi/2")));
        }
        let (c, tan) = (t.cos(), t.tan());
        let eps = crate::scalar::f64_of(epsilon);
        let n = grid.dim() as i32;
        Ok(Field::from_fn(*grid, epsilon, |x| {
            let xs: Vec<f64> = x.iter().map(|&v| crate::scalar::f64_of(v)).collect();
            let y: Vec<f64> = xs.iter().map(|v| v / c).collect();
            let r2: f64 = xs.iter().map(|v| v * v).sum();
            let z = Complex::from_polar(c.powi(-n).sqrt() * self.eval(&y), -r2 * tan / (2.0 * eps));
            Complex::new(cst(z.re), cst(z.im))
        })
        .with_time(epsilon * T::zero() + cst(t)))
    }

    /// Samples the profile on `grid`, tagging it with `epsilon`.
    pub fn sample<T: Real>(&self, grid: &Grid<T>, epsilon: T) -> Field<T> {
        Field::from_fn(*grid, epsilon, |x| {
            let xs: Vec<f64> = x.iter().map(|&v| crate::scalar::f64_of(v)).collect();
            Complex::new(cst(self.eval(&xs)), T::zero())
        })
    }
}
