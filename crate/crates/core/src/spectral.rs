//! Inner products, norms, spectral derivatives and translations, and the Galilean gauge boost.

use num_complex::Complex;

use crate::error::{HartreeError, Result};
use crate::fft::FftNd;
use crate::field::Field;
use crate::grid::Grid;
use crate::scalar::{cis, cst, Real};

/// `<u, v> = int conj(u) v dx`.
pub fn inner_product<T: Real>(u: &Field<T>, v: &Field<T>) -> Result<Complex<T>> {
    u.grid.check_same(&v.grid)?;
    let s = u.values.iter().zip(&v.values).fold(Complex::new(T::zero(), T::zero()), |acc, (a, b)| acc + a.conj() * b);
    Ok(s.scale(u.grid.cell_volume()))
}

/// Discrete `L^p` norm with quadrature weight `dx^n`; `p = inf` gives the maximum modulus.
pub fn lp_norm<T: Real>(u: &Field<T>, p: T) -> T {
    if p.is_infinite() {
        return u.values.iter().fold(T::zero(), |m, v| m.max(v.norm()));
    }
    let s = u.values.iter().fold(T::zero(), |acc, v| acc + v.norm().powf(p));
    (s * u.grid.cell_volume()).powf(T::one() / p)
}

/// `L^2` norm.
pub fn l2_norm<T: Real>(u: &Field<T>) -> T {
    let s = u.values.iter().fold(T::zero(), |acc, v| acc + v.norm_sqr());
    (s * u.grid.cell_volume()).sqrt()
}

/// `||u - v||_2`.
pub fn l2_distance<T: Real>(u: &Field<T>, v: &Field<T>) -> Result<T> {
    u.grid.check_same(&v.grid)?;
    let s = u.values.iter().zip(&v.values).fold(T::zero(), |acc, (a, b)| acc + (a - b).norm_sqr());
    Ok((s * u.grid.cell_volume()).sqrt())
}

/// Per-axis wavenumber multipliers `i xi_a` in FFT ordering, Nyquist mode zeroed.
fn derivative_multiplier<T: Real>(grid: &Grid<T>, axis: usize) -> Vec<Complex<T>> {
    let n = grid.points();
    (0..grid.len())
        .map(|i| {
            let j = grid.unravel(i)[axis];
            if j == n / 2 {
                Complex::new(T::zero(), T::zero())
            } else {
                Complex::new(T::zero(), grid.fft_wavenumber(j))
            }
        })
        .collect()
}

/// Spectral gradient, one field per axis.
pub fn gradient<T: Real>(u: &Field<T>) -> Vec<Field<T>> {
    let fft = FftNd::new(&u.grid);
    let mut spec = u.values.clone();
    fft.forward(&mut spec);
    let norm = T::one() / cst(spec.len() as f64);
    (0..u.grid.dim())
        .map(|a| {
            let m = derivative_multiplier(&u.grid, a);
            let mut d: Vec<Complex<T>> = spec.iter().zip(&m).map(|(s, k)| s * k.scale(norm)).collect();
            fft.inverse(&mut d);
            u.like(d)
        })
        .collect()
}

/// `||grad u||_2`.
pub fn gradient_norm<T: Real>(u: &Field<T>) -> T {
    let g = u.grid;
    let mut spec = u.values.clone();
    FftNd::new(&g).forward(&mut spec);
    let k2 = g.wavenumber_squared();
    let s = spec.iter().zip(&k2).fold(T::zero(), |acc, (v, &k)| acc + v.norm_sqr() * k);
    // Parseval for the unnormalised DFT: sum |u|^2 = sum |U|^2 / N^n.
    (s * g.cell_volume() / cst(g.len() as f64)).sqrt()
}

/// `|| |x| u ||_2`.
pub fn position_norm<T: Real>(u: &Field<T>) -> T {
    let r2 = u.grid.radius_squared();
    let s = u.values.iter().zip(&r2).fold(T::zero(), |acc, (v, &r)| acc + v.norm_sqr() * r);
    (s * u.grid.cell_volume()).sqrt()
}

/// `||u||_Sigma = ||u||_2 + ||x u||_2 + ||grad u||_2`.
pub fn sigma_norm<T: Real>(u: &Field<T>) -> T {
    l2_norm(u) + position_norm(u) + gradient_norm(u)
}

/// Translation `u(x - a)` by a Fourier phase; exact for band-limited periodic data.
pub fn spectral_shift<T: Real>(u: &Field<T>, a: &[T]) -> Field<T> {
    let g = u.grid;
    let n = g.points();
    let mult: Vec<Complex<T>> = (0..g.len())
        .map(|i| {
            let m = g.unravel(i);
            let mut ph = T::zero();
            for ax in 0..g.dim() {
                if m[ax] != n / 2 {
                    ph = ph - g.fft_wavenumber(m[ax]) * a[ax];
                }
            }
            cis(ph)
        })
        .collect();
    let mut data = u.values.clone();
    FftNd::new(&g).apply_multiplier(&mut data, &mult);
    u.like(data)
}

fn check_boost<T: Real>(u: &Field<T>, xi0: &[T]) -> Result<()> {
    if xi0.len() != u.grid.dim() {
        return Err(HartreeError::InvalidParameter(format!("boost has {} components, grid has {}", xi0.len(), u.grid.dim())));
    }
    let band = u.grid.nyquist();
    let speed = xi0.iter().fold(T::zero(), |m, &v| m.max(v.abs()));
    if speed / u.epsilon >= band {
        return Err(HartreeError::BandViolation(format!(
            "|xi0|/eps = {} exceeds the resolved wavenumber {}",
            speed / u.epsilon,
            band
        )));
    }
    Ok(())
}

fn boost_phase<T: Real>(grid: &Grid<T>, xi0: &[T], t: T, eps: T, shift_half: T) -> Vec<T> {
    let (s, c) = t.sin_cos();
    (0..grid.len())
        .map(|i| {
            let x = grid.position(i);
            let mut ph = T::zero();
            for a in 0..grid.dim() {
                ph = ph + (x[a] - shift_half * xi0[a] * s) * xi0[a] * c / eps;
            }
            ph
        })
        .collect()
}

/// Galilean boost of the harmonic flow:
/// `u(x - xi0 sin t) exp(i (x - xi0 sin t / 2).xi0 cos t / eps)`.
/// Errors when `|xi0| / eps` is not below the grid's resolved wavenumber.
pub fn gauge_boost<T: Real>(u: &Field<T>, xi0: &[T], t: T) -> Result<Field<T>> {
    check_boost(u, xi0)?;
    let s = t.sin();
    let a: Vec<T> = xi0.iter().map(|&v| v * s).collect();
    let mut out = spectral_shift(u, &a);
    out.mul_phase(&boost_phase(&u.grid, xi0, t, u.epsilon, cst(0.5)));
    Ok(out)
}

/// Inverse of [`gauge_boost`] for the same `xi0` and `t`.
pub fn gauge_boost_inverse<T: Real>(u: &Field<T>, xi0: &[T], t: T) -> Result<Field<T>> {
    check_boost(u, xi0)?;
    let s = t.sin();
    let mut tmp = u.clone();
    let neg: Vec<T> = boost_phase(&u.grid, xi0, t, u.epsilon, cst(0.5)).into_iter().map(|p| -p).collect();
    tmp.mul_phase(&neg);
    let a: Vec<T> = xi0.iter().map(|&v| -v * s).collect();
    Ok(spectral_shift(&tmp, &a))
}

/// Fraction of `L^2` mass outside the box `|x_a| < fraction * L` (per coordinate).
pub fn mass_outside<T: Real>(u: &Field<T>, fraction: T) -> T {
    let g = u.grid;
    let cut = fraction * g.half_extent();
    let mut out = T::zero();
    let mut tot = T::zero();
    for (i, v) in u.values.iter().enumerate() {
        let x = g.position(i);
        let m = v.norm_sqr();
        tot = tot + m;
        if x.iter().take(g.dim()).any(|c| c.abs() >= cut) {
            out = out + m;
        }
    }
    if tot > T::zero() {
        out / tot
    } else {
        T::zero()
    }
}

/// Fraction of spectral mass at wavenumbers `|xi_a| >= fraction * pi / dx` (per coordinate).
pub fn spectral_mass_outside<T: Real>(u: &Field<T>, fraction: T) -> T {
    let g = u.grid;
    let mut spec = u.values.clone();
    FftNd::new(&g).forward(&mut spec);
    let cut = fraction * g.nyquist();
    let mut out = T::zero();
    let mut tot = T::zero();
    for (i, v) in spec.iter().enumerate() {
        let m = g.unravel(i);
        let w = v.norm_sqr();
        tot = tot + w;
        if (0..g.dim()).any(|a| g.fft_wavenumber(m[a]).abs() >= cut) {
            out = out + w;
        }
    }
    if tot > T::zero() {
        out / tot
    } else {
        T::zero()
    }
}

fn tail_radius<T: Real>(weights: Vec<(T, T)>, tol: T) -> T {
    // weights: (radius, mass); smallest radius with relative mass beyond it <= tol.
    let mut w = weights;
    w.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap_or(std::cmp::Ordering::Equal));
    let total = w.iter().fold(T::zero(), |s, p| s + p.1);
    if !(total > T::zero()) {
        return T::zero();
    }
    let mut acc = T::zero();
    for (r, m) in &w {
        acc = acc + *m;
        if acc > tol * total {
            return *r;
        }
    }
    T::zero()
}

/// Smallest `R` such that the relative mass with `max_a |x_a| >= R` is at most `tol`.
pub fn position_radius<T: Real>(u: &Field<T>, tol: T) -> T {
    let g = u.grid;
    tail_radius(
        u.values
            .iter()
            .enumerate()
            .map(|(i, v)| {
                let x = g.position(i);
                (x.iter().take(g.dim()).fold(T::zero(), |m, c| m.max(c.abs())), v.norm_sqr())
            })
            .collect(),
        tol,
    )
}

/// Smallest `K` such that the relative spectral mass with `max_a |xi_a| >= K` is at most `tol`.
pub fn wavenumber_radius<T: Real>(u: &Field<T>, tol: T) -> T {
    let g = u.grid;
    let mut spec = u.values.clone();
    FftNd::new(&g).forward(&mut spec);
    tail_radius(
        spec.iter()
            .enumerate()
            .map(|(i, v)| {
                let m = g.unravel(i);
                ((0..g.dim()).fold(T::zero(), |acc, a| acc.max(g.fft_wavenumber(m[a]).abs())), v.norm_sqr())
            })
            .collect(),
        tol,
    )
}
