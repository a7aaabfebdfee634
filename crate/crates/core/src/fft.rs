//! Multidimensional FFTs, the continuum-normalised Fourier transform, and
//! chirp-z evaluation of Fourier sums on arbitrary uniform lattices.

use std::sync::Arc;

use num_complex::Complex;
use rustfft::{Fft, FftDirection};

use crate::error::{HartreeError, Result};
use crate::field::Field;
use crate::grid::Grid;
use crate::scalar::{cst, f64_of, Real};

const LINE_BATCH: usize = 16;

/// Unnormalised n-d FFT over a cubic row-major array.
pub struct FftNd<T: Real> {
    dim: usize,
    points: usize,
    forward: Arc<dyn Fft<T>>,
    inverse: Arc<dyn Fft<T>>,
}

impl<T: Real> FftNd<T> {
    pub fn new(grid: &Grid<T>) -> Self {
        Self::with_shape(grid.dim(), grid.points())
    }

    pub fn with_shape(dim: usize, points: usize) -> Self {
        FftNd {
            dim,
            points,
            forward: T::fft_plan(points, FftDirection::Forward),
            inverse: T::fft_plan(points, FftDirection::Inverse),
        }
    }

    /// In-place forward DFT, `sum_j u_j exp(-2 pi i j k / N)` along every axis.
    pub fn forward(&self, data: &mut [Complex<T>]) {
        let plan = self.forward.clone();
        for a in 0..self.dim {
            self.axis_pass(data, a, &*plan);
        }
    }

    /// In-place inverse DFT without the `1/N^n` factor.
    pub fn inverse(&self, data: &mut [Complex<T>]) {
        let plan = self.inverse.clone();
        for a in 0..self.dim {
            self.axis_pass(data, a, &*plan);
        }
    }

    /// Applies a diagonal Fourier multiplier given in internal FFT ordering:
    /// `u <- IDFT(m * DFT(u))`, normalised.
    pub fn apply_multiplier(&self, data: &mut [Complex<T>], multiplier: &[Complex<T>]) {
        self.forward(data);
        let norm = T::one() / cst(data.len() as f64);
        data.iter_mut().zip(multiplier).for_each(|(v, m)| *v = *v * m.scale(norm));
        self.inverse(data);
    }

    /// Same as [`apply_multiplier`](Self::apply_multiplier) for a real multiplier.
    pub fn apply_real_multiplier(&self, data: &mut [Complex<T>], multiplier: &[T]) {
        self.forward(data);
        let norm = T::one() / cst(data.len() as f64);
        data.iter_mut().zip(multiplier).for_each(|(v, &m)| *v = v.scale(m * norm));
        self.inverse(data);
    }

    fn axis_pass(&self, data: &mut [Complex<T>], axis: usize, plan: &dyn Fft<T>) {
        let n = self.points;
        let inner = n.pow((self.dim - 1 - axis) as u32);
        let mut scratch = vec![Complex::default(); plan.get_inplace_scratch_len()];
        if inner == 1 {
            plan.process_with_scratch(data, &mut scratch);
            return;
        }
        let outer = data.len() / (n * inner);
        let mut buf = vec![Complex::default(); LINE_BATCH * n];
        for o in 0..outer {
            let base = o * n * inner;
            let mut c0 = 0;
            while c0 < inner {
                let bn = LINE_BATCH.min(inner - c0);
                for i in 0..n {
                    let row = base + i * inner + c0;
                    for b in 0..bn {
                        buf[b * n + i] = data[row + b];
                    }
                }
                plan.process_with_scratch(&mut buf[..bn * n], &mut scratch);
                for i in 0..n {
                    let row = base + i * inner + c0;
                    for b in 0..bn {
                        data[row + b] = buf[b * n + i];
                    }
                }
                c0 += bn;
            }
        }
    }
}

/// Applies `f` to every line along `axis`; `f` receives the line and must fill the output slice.
pub fn map_axis<T: Real, F>(grid: &Grid<T>, data: &mut [Complex<T>], axis: usize, mut f: F)
where
    F: FnMut(&[Complex<T>], &mut [Complex<T>]),
{
    let n = grid.points();
    let inner = n.pow((grid.dim() - 1 - axis) as u32);
    let outer = data.len() / (n * inner);
    let mut line = vec![Complex::default(); n];
    let mut out = vec![Complex::default(); n];
    for o in 0..outer {
        for c in 0..inner {
            let base = o * n * inner + c;
            for i in 0..n {
                line[i] = data[base + i * inner];
            }
            f(&line, &mut out);
            for i in 0..n {
                data[base + i * inner] = out[i];
            }
        }
    }
}

/// `(-1)^(j_0 + ... + j_{n-1})` for each flat index.
fn checkerboard<T: Real>(grid: &Grid<T>) -> Vec<T> {
    (0..grid.len())
        .map(|i| {
            let m = grid.unravel(i);
            let s: usize = m.iter().take(grid.dim()).sum();
            if s % 2 == 0 {
                T::one()
            } else {
                -T::one()
            }
        })
        .collect()
}

/// Continuum-normalised Fourier transform `(2 pi)^{-n/2} int exp(-i x.xi) u(x) dx`
/// evaluated on the centred frequency lattice. The result lives on `grid.dual()`.
pub fn fourier_forward<T: Real>(u: &Field<T>) -> Field<T> {
    let g = u.grid;
    let signs = checkerboard(&g);
    let mut data: Vec<Complex<T>> = u.values.iter().zip(&signs).map(|(v, &s)| v.scale(s)).collect();
    FftNd::new(&g).forward(&mut data);
    let scale = (g.spacing() / (cst::<T>(2.0) * T::PI()).sqrt()).powi(g.dim() as i32);
    data.iter_mut().zip(&signs).for_each(|(v, &s)| *v = v.scale(s * scale));
    Field { grid: g.dual(), values: data, epsilon: u.epsilon, time: u.time }
}

/// Inverse of [`fourier_forward`]: takes samples on the centred frequency lattice.
pub fn fourier_inverse<T: Real>(v: &Field<T>) -> Field<T> {
    let dg = v.grid;
    let g = dg.dual();
    let signs = checkerboard(&g);
    let mut data: Vec<Complex<T>> = v.values.iter().zip(&signs).map(|(x, &s)| x.scale(s)).collect();
    FftNd::new(&g).inverse(&mut data);
    let scale = (dg.spacing() / (cst::<T>(2.0) * T::PI()).sqrt()).powi(g.dim() as i32);
    data.iter_mut().zip(&signs).for_each(|(x, &s)| *x = x.scale(s * scale));
    Field { grid: g, values: data, epsilon: v.epsilon, time: v.time }
}

/// Evaluates `y_m = sum_k c_k exp(i s (k0 + k dk)(y0 + m h))` for `m < m_out`
/// with Bluestein's chirp-z algorithm. `s` is `+1` or `-1`. Phases are formed in f64.
pub fn exp_sum_uniform<T: Real>(
    c: &[Complex<T>],
    k0: f64,
    dk: f64,
    y0: f64,
    h: f64,
    m_out: usize,
    s: f64,
) -> Vec<Complex<T>> {
    let kn = c.len();
    let w = s * dk * h;
    let p = (kn + m_out - 1).next_power_of_two();
    let chirp = |l: f64| -> Complex<f64> {
        let th = 0.5 * w * l * l;
        Complex::new(th.cos(), th.sin())
    };
    let to_t = |z: Complex<f64>| Complex::new(cst::<T>(z.re), cst::<T>(z.im));
    let mut a = vec![Complex::<T>::default(); p];
    for k in 0..kn {
        let kf = k as f64;
        let pre = Complex::new(0.0, s * kf * dk * y0).exp() * chirp(kf);
        a[k] = c[k] * to_t(pre);
    }
    let mut b = vec![Complex::<T>::default(); p];
    for l in 0..m_out {
        b[l] = to_t(chirp(l as f64).conj());
    }
    for l in 1..kn {
        b[p - l] = to_t(chirp(l as f64).conj());
    }
    let fwd = T::fft_plan(p, FftDirection::Forward);
    let inv = T::fft_plan(p, FftDirection::Inverse);
    fwd.process(&mut a);
    fwd.process(&mut b);
    let norm = T::one() / cst(p as f64);
    for (x, y) in a.iter_mut().zip(&b) {
        *x = *x * y.scale(norm);
    }
    inv.process(&mut a);
    (0..m_out)
        .map(|m| {
            let mf = m as f64;
            let post = chirp(mf) * Complex::new(0.0, s * k0 * (y0 + mf * h)).exp();
            a[m] * to_t(post)
        })
        .collect()
}

/// Uniform target lattice `y_m = start + m step`, identical on every axis.
#[derive(Debug, Clone, Copy)]
pub struct Lattice {
    pub start: f64,
    pub step: f64,
}

impl Lattice {
    /// Lattice of the points `x / c` for the grid coordinates `x`.
    pub fn dilated<T: Real>(grid: &Grid<T>, c: f64) -> Self {
        Lattice { start: f64_of(grid.coord(0)) / c, step: f64_of(grid.spacing()) / c }
    }

    /// Lattice of the grid coordinates shifted by `a`.
    pub fn shifted<T: Real>(grid: &Grid<T>, a: f64) -> Self {
        Lattice { start: f64_of(grid.coord(0)) + a, step: f64_of(grid.spacing()) }
    }

    pub fn of_grid<T: Real>(grid: &Grid<T>) -> Self {
        Lattice { start: f64_of(grid.coord(0)), step: f64_of(grid.spacing()) }
    }
}

/// Evaluates the trigonometric interpolant of `u` at the tensor lattice
/// `target` (with `u.grid.points()` points per axis). Points outside `[-L, L]`
/// are set to zero instead of being wrapped periodically.
pub fn interp_eval<T: Real>(u: &Field<T>, target: Lattice) -> Vec<Complex<T>> {
    let g = u.grid;
    let n = g.points();
    let l = f64_of(g.half_extent());
    let dxi = f64_of(g.dual_spacing());
    let x0 = f64_of(g.coord(0));
    let fwd = T::fft_plan(n, FftDirection::Forward);
    let norm: T = T::one() / cst(n as f64);
    let mut data = u.values.clone();
    for a in 0..g.dim() {
        map_axis(&g, &mut data, a, |line, out| {
            let mut spec = line.to_vec();
            fwd.process(&mut spec);
            spec.rotate_left(n / 2);
            let vals = exp_sum_uniform(&spec, -(n as f64 / 2.0) * dxi, dxi, target.start - x0, target.step, n, 1.0);
            for (m, o) in out.iter_mut().enumerate() {
                let y = target.start + m as f64 * target.step;
                *o = if y.abs() > l * (1.0 + 1e-12) { Complex::default() } else { vals[m].scale(norm) };
            }
        });
    }
    data
}

/// Evaluates the continuum Fourier transform of `u` at the tensor lattice `target`
/// of frequencies. Frequencies beyond the resolved band `pi / dx` are set to zero.
pub fn fourier_eval<T: Real>(u: &Field<T>, target: Lattice) -> Vec<Complex<T>> {
    let g = u.grid;
    let n = g.points();
    let dx = f64_of(g.spacing());
    let x0 = f64_of(g.coord(0));
    let band = f64_of(g.nyquist());
    let scale: T = cst(dx / (2.0 * std::f64::consts::PI).sqrt());
    let mut data = u.values.clone();
    for a in 0..g.dim() {
        map_axis(&g, &mut data, a, |line, out| {
            let vals = exp_sum_uniform(line, x0, dx, target.start, target.step, n, -1.0);
            for (m, o) in out.iter_mut().enumerate() {
                let xi = target.start + m as f64 * target.step;
                *o = if xi.abs() > band { Complex::default() } else { vals[m].scale(scale) };
            }
        });
    }
    data
}

/// Moves `u` onto another grid of the same dimension by evaluating its trigonometric
/// interpolant at the new grid points. Target points outside the source box are zero.
pub fn resample<T: Real>(u: &Field<T>, target: &Grid<T>) -> Result<Field<T>> {
    let g = u.grid;
    if target.dim() != g.dim() {
        return Err(HartreeError::GridMismatch("resampling across dimensions".into()));
    }
    let n = g.points();
    let m = target.points();
    let l = f64_of(g.half_extent());
    let dxi = f64_of(g.dual_spacing());
    let x0 = f64_of(g.coord(0));
    let y0 = f64_of(target.coord(0));
    let h = f64_of(target.spacing());
    let fwd = T::fft_plan(n, FftDirection::Forward);
    let norm: T = T::one() / cst(n as f64);
    let mut shape = vec![n; g.dim()];
    let mut data = u.values.clone();
    for a in 0..g.dim() {
        let inner: usize = shape[a + 1..].iter().product();
        let outer: usize = shape[..a].iter().product();
        let mut out = vec![Complex::default(); outer * m * inner];
        let mut line = vec![Complex::default(); n];
        for o in 0..outer {
            for c in 0..inner {
                for i in 0..n {
                    line[i] = data[o * n * inner + i * inner + c];
                }
                fwd.process(&mut line);
                line.rotate_left(n / 2);
                let vals = exp_sum_uniform(&line, -(n as f64 / 2.0) * dxi, dxi, y0 - x0, h, m, 1.0);
                for (k, v) in vals.into_iter().enumerate() {
                    let y = y0 + k as f64 * h;
                    out[o * m * inner + k * inner + c] =
                        if y.abs() > l * (1.0 + 1e-12) { Complex::default() } else { v.scale(norm) };
                }
            }
        }
        shape[a] = m;
        data = out;
    }
    Ok(Field { grid: *target, values: data, epsilon: u.epsilon, time: u.time })
}

/// Embeds (or crops) a centred array with `from` points per axis into one with `to` points per axis.
pub fn embed_centered<T: Real>(values: &[Complex<T>], dim: usize, from: usize, to: usize) -> Vec<Complex<T>> {
    let total = to.pow(dim as u32);
    let mut out = vec![Complex::default(); total];
    let off_from = from as isize / 2;
    let off_to = to as isize / 2;
    for (i, o) in out.iter_mut().enumerate() {
        let mut idx = i;
        let mut src = 0usize;
        let mut inside = true;
        let mut mul = 1usize;
        let mut parts = [0isize; 3];
        for a in (0..dim).rev() {
            parts[a] = (idx % to) as isize - off_to + off_from;
            idx /= to;
        }
        for a in (0..dim).rev() {
            if parts[a] < 0 || parts[a] >= from as isize {
                inside = false;
                break;
            }
            src += parts[a] as usize * mul;
            mul *= from;
        }
        if inside {
            *o = values[src];
        }
    }
    out
}

/// Zero-pads a field to `points` per axis at the same spacing (larger box).
pub fn zero_pad_field<T: Real>(u: &Field<T>, points: usize) -> Field<T> {
    let g = u.grid;
    let scale = cst::<T>(points as f64 / g.points() as f64);
    let big = Grid::new(g.dim(), points, g.half_extent() * scale).expect("padded grid");
    let vals = embed_centered(&u.values, g.dim(), g.points(), points);
    Field { grid: big, values: vals, epsilon: u.epsilon, time: u.time }
}
