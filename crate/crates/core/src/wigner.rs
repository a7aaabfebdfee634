//! Semiclassical Wigner transform on a coarsened position lattice.
//!
//! `W(x, xi) = (2 pi)^-n int u(x - eps v/2) conj(u(x + eps v/2)) exp(i xi.v) dv`.
//! Substituting `s = eps v / 2` the integrand only needs `u` on the half lattice
//! `x_j + (dx/2) {0,1}^n`, obtained from spectral half-cell shifts; the transform in
//! `s` then resolves `|xi| < eps pi / dx`.

use std::io::Write;

use num_complex::Complex;
use rustfft::FftDirection;

use crate::error::{HartreeError, Result};
use crate::field::Field;
use crate::io::fmt_g17;
use crate::scalar::{cst, f64_of, Real};
use crate::spectral::spectral_shift;

/// Largest number of phase-space samples a slice may hold.
pub const MAX_WIGNER_SAMPLES: usize = 1 << 26;

/// Wigner function sampled on `positions x frequencies`, row-major (position slowest).
#[derive(Debug, Clone)]
pub struct WignerSlice<T: Real> {
    pub dim: usize,
    /// Retained position coordinates along one axis (identical on every axis).
    pub x_axis: Vec<T>,
    /// Frequency coordinates along one axis (identical on every axis).
    pub xi_axis: Vec<T>,
    pub values: Vec<T>,
}

impl<T: Real> WignerSlice<T> {
    pub fn positions(&self) -> usize {
        self.x_axis.len().pow(self.dim as u32)
    }

    pub fn frequencies(&self) -> usize {
        self.xi_axis.len().pow(self.dim as u32)
    }

    fn coords(axis: &[T], dim: usize, mut idx: usize) -> [T; 3] {
        let mut out = [T::zero(); 3];
        for a in (0..dim).rev() {
            out[a] = axis[idx % axis.len()];
            idx /= axis.len();
        }
        out
    }

    /// Position of the `i`-th retained point.
    pub fn x_at(&self, i: usize) -> [T; 3] {
        Self::coords(&self.x_axis, self.dim, i)
    }

    /// Frequency of the `k`-th sample.
    pub fn xi_at(&self, k: usize) -> [T; 3] {
        Self::coords(&self.xi_axis, self.dim, k)
    }

    /// Phase-space cell volume `(dx_coarse d xi)^n`.
    pub fn cell(&self) -> T {
        let dxc = if self.x_axis.len() > 1 { self.x_axis[1] - self.x_axis[0] } else { T::one() };
        let dxi = self.xi_axis[1] - self.xi_axis[0];
        (dxc * dxi).powi(self.dim as i32)
    }

    /// `int W(x, xi) d xi` at each retained position.
    pub fn position_marginal(&self) -> Vec<T> {
        let nf = self.frequencies();
        let dxi = (self.xi_axis[1] - self.xi_axis[0]).powi(self.dim as i32);
        self.values.chunks(nf).map(|row| row.iter().fold(T::zero(), |a, &b| a + b) * dxi).collect()
    }

    /// Writes `x..., xi..., w` rows with 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> Result<()> {
        let mut header: Vec<String> = (0..self.dim).map(|a| format!("x{a}")).collect();
        header.extend((0..self.dim).map(|a| format!("xi{a}")));
        header.push("w".into());
        writeln!(out, "{}", header.join(","))?;
        let nf = self.frequencies();
        for i in 0..self.positions() {
            let x = self.x_at(i);
            for k in 0..nf {
                let xi = self.xi_at(k);
                let mut row: Vec<String> = (0..self.dim).map(|a| fmt_g17(f64_of(x[a]))).collect();
                row.extend((0..self.dim).map(|a| fmt_g17(f64_of(xi[a]))));
                row.push(fmt_g17(f64_of(self.values[i * nf + k])));
                writeln!(out, "{}", row.join(","))?;
            }
        }
        Ok(())
    }
}

/// Wigner transform of `u`, keeping every `coarsen_x`-th position per axis.
pub fn wigner_transform<T: Real>(u: &Field<T>, coarsen_x: usize) -> Result<WignerSlice<T>> {
    let g = u.grid;
    let n = g.points();
    let dim = g.dim();
    if coarsen_x == 0 || n % coarsen_x != 0 {
        return Err(HartreeError::InvalidParameter(format!("coarsening {coarsen_x} must divide {n}")));
    }
    let nx = n / coarsen_x;
    let m = 2 * n;
    let total = nx.pow(dim as u32).saturating_mul(m.pow(dim as u32));
    if total > MAX_WIGNER_SAMPLES {
        return Err(HartreeError::InvalidParameter(format!(
            "{total} phase-space samples exceed the limit {MAX_WIGNER_SAMPLES}; increase coarsen_x"
        )));
    }
    let dx = g.spacing();
    let half = dx / cst(2.0);
    // shifted[b] holds u(x + (dx/2) b) for b in {0,1}^dim (bit a <-> axis a).
    let shifted: Vec<Field<T>> = (0..1usize << dim)
        .map(|b| {
            let a: Vec<T> = (0..dim).map(|ax| if b >> ax & 1 == 1 { -half } else { T::zero() }).collect();
            if b == 0 {
                u.clone()
            } else {
                spectral_shift(u, &a)
            }
        })
        .collect();
    // Value at half-lattice multi-index h (position -L + h dx/2); zero outside the box so that
    // periodic images do not pair up near the edges.
    let sample = |h: &[i64]| -> Complex<T> {
        let mut b = 0usize;
        let mut j = [0usize; 3];
        for a in 0..dim {
            let r = h[a];
            if r < 0 || r >= 2 * n as i64 {
                return Complex::default();
            }
            if r % 2 == 1 {
                b |= 1 << a;
            }
            j[a] = (r / 2) as usize;
        }
        shifted[b].values[g.ravel(&j)]
    };
    let plan = T::fft_plan(m, FftDirection::Inverse);
    let coeff = (dx / (cst::<T>(2.0) * T::PI() * u.epsilon)).powi(dim as i32);
    let nf = m.pow(dim as u32);
    let mut values = Vec::with_capacity(total);
    let mut buf = vec![Complex::<T>::default(); nf];
    let mut col = vec![Complex::<T>::default(); m];
    let xi_step = u.epsilon * T::PI() / (cst::<T>(n as f64) * dx);
    for ip in 0..nx.pow(dim as u32) {
        let mut xi_idx = [0i64; 3];
        let mut rem = ip;
        for a in (0..dim).rev() {
            xi_idx[a] = ((rem % nx) * coarsen_x) as i64;
            rem /= nx;
        }
        for (q, slot) in buf.iter_mut().enumerate() {
            // q enumerates s-offsets in FFT order: j = q_a if q_a < n else q_a - 2n.
            let mut r = q;
            let mut lo = [0i64; 3];
            let mut hi = [0i64; 3];
            for a in (0..dim).rev() {
                let qa = (r % m) as i64;
                r /= m;
                let j = if qa < n as i64 { qa } else { qa - m as i64 };
                lo[a] = 2 * xi_idx[a] - j;
                hi[a] = 2 * xi_idx[a] + j;
            }
            *slot = sample(&lo[..dim]) * sample(&hi[..dim]).conj();
        }
        // Inverse DFT along each axis of the (2N)^dim block.
        for a in 0..dim {
            let inner = m.pow((dim - 1 - a) as u32);
            let outer = nf / (m * inner);
            for o in 0..outer {
                for c in 0..inner {
                    for i in 0..m {
                        col[i] = buf[o * m * inner + i * inner + c];
                    }
                    plan.process(&mut col);
                    for i in 0..m {
                        buf[o * m * inner + i * inner + c] = col[i];
                    }
                }
            }
        }
        // Reorder to centred frequencies.
        for k in 0..nf {
            let mut r = k;
            let mut src = 0usize;
            let mut mul = 1usize;
            for _ in 0..dim {
                let kc = r % m;
                r /= m;
                src += ((kc + n) % m) * mul;
                mul *= m;
            }
            values.push(buf[src].re * coeff);
        }
    }
    let x_axis = (0..nx).map(|i| g.coord(i * coarsen_x)).collect();
    let xi_axis = (0..m).map(|k| cst::<T>(k as f64 - n as f64) * xi_step).collect();
    Ok(WignerSlice { dim, x_axis, xi_axis, values })
}

/// Smallest distance of `t` to an odd multiple of `pi/2` below which the concentration
/// line `xi = -x tan t` is not used.
pub const FOCUS_EXCLUSION: f64 = 0.05;

/// Fraction of `int |W|` within `|xi + x tan t| <= band`, the neighbourhood of the
/// Lagrangian line of the harmonic flow started from `xi = 0`.
pub fn concentration_metric<T: Real>(w: &WignerSlice<T>, t: T, band: T) -> Result<T> {
    let tf = f64_of(t);
    let pi = std::f64::consts::PI;
    let dist = ((tf - pi / 2.0).rem_euclid(pi)).min(pi - (tf - pi / 2.0).rem_euclid(pi));
    if dist < FOCUS_EXCLUSION {
        return Err(HartreeError::ExcludedWindow(format!("t = {tf} is within {FOCUS_EXCLUSION} of a focus")));
    }
    let tan = t.tan();
    let nf = w.frequencies();
    let mut inside = T::zero();
    let mut total = T::zero();
    for i in 0..w.positions() {
        let x = w.x_at(i);
        for k in 0..nf {
            let xi = w.xi_at(k);
            let d2 = (0..w.dim).fold(T::zero(), |s, a| s + (xi[a] + x[a] * tan).powi(2));
            let v = w.values[i * nf + k].abs();
            total = total + v;
            if d2 <= band * band {
                inside = inside + v;
            }
        }
    }
    Ok(if total > T::zero() { inside / total } else { T::zero() })
}
