//! Fourier multipliers for the Hartree convolution `|x|^-gamma * rho` and the local power term.

use num_complex::Complex;
use statrs::function::gamma::gamma as gamma_fn;

use crate::error::{HartreeError, Result};
use crate::fft::FftNd;
use crate::field::Field;
use crate::grid::Grid;
use crate::quadrature::gauss_legendre;
use crate::scalar::{cst, f64_of, Real};

/// Treatment of the `xi = 0` mode of the periodic continuum multiplier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ZeroMode {
    /// Drop the mean: the potential is defined up to a constant.
    Zero,
    /// Use the integral of `|x|^-gamma` over the periodic cell.
    CellAverage,
}

/// How the convolution is discretised.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum KernelKind {
    /// Continuum multiplier `c |xi|^(gamma - n)` on the periodic lattice. Periodic images
    /// of the density contribute.
    Continuum(ZeroMode),
    /// Free-space convolution for densities supported in the half box: the kernel is
    /// split into a short-range part handled by its exact transform and a smooth long-range
    /// part truncated to the cell.
    Isolated,
}

impl Default for KernelKind {
    fn default() -> Self {
        KernelKind::Isolated
    }
}

/// Precomputed Hartree multiplier for one grid.
#[derive(Debug, Clone)]
pub struct Kernel<T: Real> {
    pub grid: Grid<T>,
    pub gamma: f64,
    pub kind: KernelKind,
    /// Multiplier acting on unnormalised DFT coefficients, FFT ordering.
    multiplier: Vec<T>,
}

/// `int exp(-i x.xi) |x|^-gamma dx = A |xi|^(gamma - n)`; returns `A`.
pub fn riesz_constant(n: usize, gamma: f64) -> f64 {
    let nf = n as f64;
    std::f64::consts::PI.powf(nf / 2.0) * 2f64.powf(nf - gamma) * gamma_fn((nf - gamma) / 2.0) / gamma_fn(gamma / 2.0)
}

/// `int_{[-L, L]^n} |x|^-gamma dx`.
pub fn box_integral(n: usize, gamma: f64, l: f64) -> f64 {
    let nf = n as f64;
    let (x, w) = gauss_legendre(48);
    let face = match n {
        1 => 1.0,
        2 => x.iter().zip(&w).map(|(&b, &wb)| wb * (1.0 + b * b).powf(-gamma / 2.0)).sum(),
        _ => {
            let mut s = 0.0;
            for (&b1, &w1) in x.iter().zip(&w) {
                for (&b2, &w2) in x.iter().zip(&w) {
                    s += w1 * w2 * (1.0 + b1 * b1 + b2 * b2).powf(-gamma / 2.0);
                }
            }
            s
        }
    };
    2.0 * nf * l.powf(nf - gamma) / (nf - gamma) * face
}

/// `e^{-z} sum_k z^k / Gamma(a + k + 1)`, i.e. `P(a, z) / z^a`.
fn scaled_lower_gamma(a: f64, z: f64) -> f64 {
    let mut term = 1.0 / gamma_fn(a + 1.0);
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= z / (a + k);
        sum += term;
        if (k > z && term < 1e-17 * sum) || k > 2000.0 {
            break;
        }
        k += 1.0;
    }
    (-z).exp() * sum
}

/// Ewald splitting parameter for a cell of half width `l`.
fn split_parameter(l: f64) -> f64 {
    36.0 / (l * l)
}

/// Long-range part `|x|^-gamma P(gamma/2, s0 |x|^2)`, smooth at the origin.
pub fn long_range_kernel(gamma: f64, s0: f64, r: f64) -> f64 {
    let a = gamma / 2.0;
    s0.powf(a) * scaled_lower_gamma(a, s0 * r * r)
}

/// Transform of the short-range part `|x|^-gamma Q(gamma/2, s0 |x|^2)`.
pub fn short_range_multiplier(n: usize, gamma: f64, s0: f64, xi: f64) -> f64 {
    let b = (n as f64 - gamma) / 2.0;
    let amp = riesz_constant(n, gamma);
    let w = xi * xi / (4.0 * s0);
    if w <= 45.0 {
        amp * (4.0 * s0).powf(-b) * scaled_lower_gamma(b, w)
    } else {
        amp * xi.abs().powf(gamma - n as f64)
    }
}

/// Builds the Hartree multiplier for `grid`. Requires `0 < gamma < n`.
pub fn build_kernel<T: Real>(grid: &Grid<T>, gamma: f64, kind: KernelKind) -> Result<Kernel<T>> {
    let n = grid.dim();
    if !(gamma > 0.0 && gamma < n as f64) {
        return Err(HartreeError::InvalidParameter(format!("gamma = {gamma} must lie in (0, {n})")));
    }
    let k2: Vec<f64> = grid.wavenumber_squared().into_iter().map(f64_of).collect();
    let l = f64_of(grid.half_extent());
    let multiplier: Vec<f64> = match kind {
        KernelKind::Continuum(zero) => {
            let amp = riesz_constant(n, gamma);
            let p = (gamma - n as f64) / 2.0;
            k2.iter()
                .map(|&q| {
                    if q == 0.0 {
                        match zero {
                            ZeroMode::Zero => 0.0,
                            ZeroMode::CellAverage => box_integral(n, gamma, l),
                        }
                    } else {
                        amp * q.powf(p)
                    }
                })
                .collect()
        }
        KernelKind::Isolated => {
            let s0 = split_parameter(l);
            let pts = grid.points();
            let dx = f64_of(grid.spacing());
            let offs: Vec<f64> = (0..pts)
                .map(|d| if d < pts / 2 { d as f64 * dx } else { (d as f64 - pts as f64) * dx })
                .collect();
            let mut lr: Vec<Complex<T>> = (0..grid.len())
                .map(|i| {
                    let m = grid.unravel(i);
                    let r2: f64 = (0..n).map(|a| offs[m[a]] * offs[m[a]]).sum();
                    Complex::new(cst(long_range_kernel(gamma, s0, r2.sqrt())), T::zero())
                })
                .collect();
            FftNd::new(grid).forward(&mut lr);
            let vol = dx.powi(n as i32);
            k2.iter()
                .zip(&lr)
                .map(|(&q, c)| short_range_multiplier(n, gamma, s0, q.sqrt()) + vol * f64_of(c.re))
                .collect()
        }
    };
    Ok(Kernel { grid: *grid, gamma, kind, multiplier: multiplier.into_iter().map(cst).collect() })
}

impl<T: Real> Kernel<T> {
    /// Multiplier on unnormalised DFT coefficients, FFT ordering.
    pub fn multiplier(&self) -> &[T] {
        &self.multiplier
    }

    /// Convolution of a real density with the kernel, plus the largest imaginary residue.
    pub fn convolve_with_residue(&self, density: &[T]) -> (Vec<T>, T) {
        let mut data: Vec<Complex<T>> = density.iter().map(|&r| Complex::new(r, T::zero())).collect();
        FftNd::new(&self.grid).apply_real_multiplier(&mut data, &self.multiplier);
        let resid = data.iter().fold(T::zero(), |m, v| m.max(v.im.abs()));
        (data.into_iter().map(|v| v.re).collect(), resid)
    }

    pub fn convolve(&self, density: &[T]) -> Vec<T> {
        self.convolve_with_residue(density).0
    }
}

/// `V = |x|^-gamma * |u|^2` sampled on the grid.
pub fn hartree_potential<T: Real>(kernel: &Kernel<T>, u: &Field<T>) -> Result<Vec<T>> {
    kernel.grid.check_same(&u.grid)?;
    Ok(kernel.convolve(&u.density()))
}

/// `|u|^(2 sigma)` sampled on the grid. Requires `sigma > 0`.
pub fn local_power_potential<T: Real>(u: &Field<T>, sigma: T) -> Result<Vec<T>> {
    if !(sigma > T::zero()) {
        return Err(HartreeError::InvalidParameter(format!("sigma = {sigma} must be positive")));
    }
    Ok(u.values.iter().map(|v| v.norm_sqr().powf(sigma)).collect())
}

/// Checks `sigma` against the mass-subcritical range `(0, 2/n)` used by the combined equation.
pub fn check_sigma(sigma: f64, dim: usize) -> Result<()> {
    if sigma > 0.0 && sigma < 2.0 / dim as f64 {
        Ok(())
    } else {
        Err(HartreeError::InvalidParameter(format!("sigma = {sigma} outside (0, {})", 2.0 / dim as f64)))
    }
}
