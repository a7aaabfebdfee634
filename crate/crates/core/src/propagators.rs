//! Exact linear propagators and the Strang split-step integrator.
//!
//! All propagators act on `i eps u_t = -eps^2/2 Lap u + W u`. For the harmonic problem
//! `W = |x|^2/2 + eps^alpha V_H - eps^beta |u|^(2 sigma)`; the scattering problem uses
//! `eps = 1` and drops the harmonic term.

use std::collections::HashMap;

use num_complex::Complex;

use crate::error::{HartreeError, Result};
use crate::fft::FftNd;
use crate::field::Field;
use crate::grid::Grid;
use crate::kernels::{build_kernel, check_sigma, Kernel, KernelKind};
use crate::scalar::{cis, cst, f64_of, Real};
use crate::spectral::{mass_outside, spectral_mass_outside};

/// Couplings below this are treated as exactly zero (the nonlinear term cannot change
/// any sample at double precision over the time spans used here).
const NEGLIGIBLE_COUPLING: f64 = 1e-30;

/// Parameters of the harmonic Hartree problem and its time step.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverConfig<T: Real> {
    pub epsilon: T,
    pub dt: T,
    /// Hartree scaling exponent `alpha`; `None` disables the Hartree term.
    pub alpha: Option<T>,
    pub gamma: f64,
    pub kernel: KernelKind,
    /// Local term `eps^beta |u|^(2 sigma) u`; `beta` and `sigma` are set together.
    pub beta: Option<T>,
    pub sigma: Option<T>,
}

impl<T: Real> SolverConfig<T> {
    /// Hartree-only configuration.
    pub fn hartree(epsilon: T, dt: T, alpha: T, gamma: f64) -> Self {
        SolverConfig { epsilon, dt, alpha: Some(alpha), gamma, kernel: KernelKind::default(), beta: None, sigma: None }
    }

    /// Linear configuration (no nonlinear term).
    pub fn linear(epsilon: T, dt: T) -> Self {
        SolverConfig { epsilon, dt, alpha: None, gamma: 1.0, kernel: KernelKind::default(), beta: None, sigma: None }
    }

    pub fn with_local(mut self, beta: T, sigma: T) -> Self {
        self.beta = Some(beta);
        self.sigma = Some(sigma);
        self
    }

    /// Checks `dt <= eps / 4`, positivity, and that `beta` and `sigma` come together.
    pub fn validate(&self, dim: usize) -> Result<()> {
        if !(self.epsilon > T::zero()) {
            return Err(HartreeError::InvalidParameter("epsilon must be positive".into()));
        }
        if !(self.dt > T::zero()) || self.dt > self.epsilon / cst(4.0) {
            return Err(HartreeError::InvalidParameter(format!(
                "dt = {} must lie in (0, eps/4 = {}]",
                self.dt,
                self.epsilon / cst(4.0)
            )));
        }
        match (self.beta, self.sigma) {
            (Some(_), Some(s)) => check_sigma(f64_of(s), dim)?,
            (None, None) => {}
            _ => return Err(HartreeError::InvalidParameter("beta and sigma must be set together".into())),
        }
        if self.alpha.is_some() && !(self.gamma > 0.0 && self.gamma < dim as f64) {
            return Err(HartreeError::InvalidParameter(format!("gamma = {} outside (0, {dim})", self.gamma)));
        }
        Ok(())
    }

    pub fn hartree_coupling(&self) -> T {
        self.alpha.map_or(T::zero(), |a| self.epsilon.powf(a))
    }

    pub fn local_coupling(&self) -> T {
        self.beta.map_or(T::zero(), |b| self.epsilon.powf(b))
    }
}

/// Split-step integrator with cached kernel and Fourier multipliers.
pub struct Integrator<T: Real> {
    pub grid: Grid<T>,
    pub epsilon: T,
    pub dt: T,
    harmonic: Option<Vec<T>>,
    kernel: Option<Kernel<T>>,
    hartree_coupling: T,
    local: Option<(T, T)>,
    fft: FftNd<T>,
    k2: Vec<T>,
    kinetic_cache: HashMap<u64, Vec<Complex<T>>>,
    /// Guard: largest admissible relative mass near the box edge / band edge at snapshots.
    pub resolution_tolerance: Option<T>,
}

impl<T: Real> Integrator<T> {
    /// Integrator for the harmonic problem.
    pub fn new(grid: &Grid<T>, cfg: &SolverConfig<T>) -> Result<Self> {
        cfg.validate(grid.dim())?;
        let hc = cfg.hartree_coupling();
        let kernel = if cfg.alpha.is_some() && f64_of(hc) > NEGLIGIBLE_COUPLING {
            Some(build_kernel(grid, cfg.gamma, cfg.kernel)?)
        } else {
            None
        };
        let local = match (cfg.beta, cfg.sigma) {
            (Some(_), Some(s)) if f64_of(cfg.local_coupling()) > NEGLIGIBLE_COUPLING => Some((cfg.local_coupling(), s)),
            _ => None,
        };
        let harmonic = grid.radius_squared().into_iter().map(|r| r / cst(2.0)).collect();
        Ok(Integrator {
            grid: *grid,
            epsilon: cfg.epsilon,
            dt: cfg.dt,
            harmonic: Some(harmonic),
            kernel,
            hartree_coupling: hc,
            local,
            fft: FftNd::new(grid),
            k2: grid.wavenumber_squared(),
            kinetic_cache: HashMap::new(),
            resolution_tolerance: None,
        })
    }

    /// Integrator for `i psi_t = -Lap psi / 2 + (|x|^-gamma * |psi|^2) psi` (no trap, `eps = 1`).
    pub fn unconfined_hartree(grid: &Grid<T>, gamma: f64, coupling: T, dt: T, kind: KernelKind) -> Result<Self> {
        if !(dt > T::zero()) {
            return Err(HartreeError::InvalidParameter("dt must be positive".into()));
        }
        Ok(Integrator {
            grid: *grid,
            epsilon: T::one(),
            dt,
            harmonic: None,
            kernel: Some(build_kernel(grid, gamma, kind)?),
            hartree_coupling: coupling,
            local: None,
            fft: FftNd::new(grid),
            k2: grid.wavenumber_squared(),
            kinetic_cache: HashMap::new(),
            resolution_tolerance: None,
        })
    }

    pub fn kernel(&self) -> Option<&Kernel<T>> {
        self.kernel.as_ref()
    }

    pub fn hartree_coupling(&self) -> T {
        self.hartree_coupling
    }

    pub fn local_term(&self) -> Option<(T, T)> {
        self.local
    }

    pub fn has_trap(&self) -> bool {
        self.harmonic.is_some()
    }

    pub fn is_linear(&self) -> bool {
        self.kernel.is_none() && self.local.is_none()
    }

    /// Hartree potential `V_H = K * |u|^2` (zero when disabled).
    pub fn hartree_field(&self, u: &Field<T>) -> Vec<T> {
        match &self.kernel {
            Some(k) => k.convolve(&u.density()),
            None => vec![T::zero(); u.len()],
        }
    }

    /// Total potential `W(u)` multiplying `u` in the equation.
    pub fn potential(&self, u: &Field<T>) -> Vec<T> {
        let mut w = match &self.harmonic {
            Some(h) => h.clone(),
            None => vec![T::zero(); u.len()],
        };
        if let Some(k) = &self.kernel {
            let v = k.convolve(&u.density());
            w.iter_mut().zip(&v).for_each(|(a, &b)| *a = *a + self.hartree_coupling * b);
        }
        if let Some((c, s)) = self.local {
            w.iter_mut().zip(&u.values).for_each(|(a, z)| *a = *a - c * z.norm_sqr().powf(s));
        }
        w
    }

    fn apply_potential(&self, u: &mut Field<T>, w: &[T], h: T) {
        let f = -h / self.epsilon;
        u.values.iter_mut().zip(w).for_each(|(v, &p)| *v = *v * cis(f * p));
    }

    fn kinetic_multiplier(&mut self, h: T) -> &Vec<Complex<T>> {
        let key = f64_of(h).to_bits();
        let eps = self.epsilon;
        let k2 = &self.k2;
        self.kinetic_cache
            .entry(key)
            .or_insert_with(|| k2.iter().map(|&k| cis(-h * eps * k / cst(2.0))).collect())
    }

    /// Exact flow of the kinetic part over time `h`.
    pub fn apply_kinetic(&mut self, u: &mut Field<T>, h: T) {
        if self.kinetic_cache.len() > 8 {
            self.kinetic_cache.clear();
        }
        let m = self.kinetic_multiplier(h).clone();
        self.fft.apply_multiplier(&mut u.values, &m);
    }

    /// One Strang step `P(h/2) K(h) P(h/2)`, the second half using the updated density.
    pub fn step(&mut self, u: &mut Field<T>, h: T) {
        let w = self.potential(u);
        self.apply_potential(u, &w, h / cst(2.0));
        self.apply_kinetic(u, h);
        let w = self.potential(u);
        self.apply_potential(u, &w, h / cst(2.0));
        u.time = u.time + h;
    }

    fn check_resolved(&self, u: &Field<T>) -> Result<()> {
        u.check_finite(&format!("state at t = {}", u.time))?;
        if let Some(tol) = self.resolution_tolerance {
            let edge = mass_outside(u, cst(0.95));
            let band = spectral_mass_outside(u, cst(2.0 / 3.0));
            if edge > tol || band > tol {
                return Err(HartreeError::Unresolved(format!(
                    "t = {}: boundary mass {edge:e}, mass beyond 2/3 of the band {band:e} (tolerance {tol:e})",
                    u.time
                )));
            }
        }
        Ok(())
    }

    /// Integrates from `u0.time` to `u0.time + t_end`, returning copies of the state at each
    /// requested snapshot offset. Steps are shortened so snapshot times are hit exactly.
    pub fn evolve(&mut self, u0: &Field<T>, t_end: T, snapshots: &[T]) -> Result<Vec<Field<T>>> {
        self.grid.check_same(&u0.grid)?;
        if t_end < T::zero() {
            return Err(HartreeError::InvalidParameter("t_end must be non-negative".into()));
        }
        for w in snapshots.windows(2) {
            if w[1] < w[0] {
                return Err(HartreeError::InvalidParameter("snapshot times must be non-decreasing".into()));
            }
        }
        if snapshots.iter().any(|&s| s < T::zero() || s > t_end) {
            return Err(HartreeError::InvalidParameter("snapshot times must lie in [0, t_end]".into()));
        }
        let t0 = u0.time;
        let mut stops: Vec<T> = snapshots.to_vec();
        if stops.last().map_or(true, |&l| l < t_end) {
            stops.push(t_end);
        }
        let tiny = self.dt * cst(1e-9);
        let mut u = u0.clone();
        let mut out = Vec::with_capacity(snapshots.len());
        let mut elapsed = T::zero();
        let mut si = 0;
        let mut steps_since_check = 0usize;
        for &stop in &stops {
            // Steps of this segment.
            let mut hs = Vec::new();
            let mut t = elapsed;
            while stop - t > tiny {
                let h = if stop - t > self.dt + tiny { self.dt } else { stop - t };
                hs.push(h);
                t = t + h;
            }
            if !hs.is_empty() {
                let mut w = self.potential(&u);
                self.apply_potential(&mut u, &w, hs[0] / cst(2.0));
                for i in 0..hs.len() {
                    self.apply_kinetic(&mut u, hs[i]);
                    w = self.potential(&u);
                    let next = if i + 1 < hs.len() { hs[i + 1] } else { T::zero() };
                    self.apply_potential(&mut u, &w, (hs[i] + next) / cst(2.0));
                    steps_since_check += 1;
                    if steps_since_check >= 200 {
                        steps_since_check = 0;
                        u.check_finite(&format!("state near t = {}", t0 + elapsed))?;
                    }
                }
            }
            elapsed = stop;
            u.time = t0 + stop;
            while si < snapshots.len() && (snapshots[si] - stop).abs() <= tiny {
                self.check_resolved(&u)?;
                out.push(u.clone());
                si += 1;
            }
        }
        if out.is_empty() {
            self.check_resolved(&u)?;
        }
        Ok(out)
    }

    /// Integrates and returns only the final state.
    pub fn evolve_to(&mut self, u0: &Field<T>, t_end: T) -> Result<Field<T>> {
        Ok(self.evolve(u0, t_end, &[t_end])?.pop().expect("final snapshot"))
    }
}

/// One Strang step of size `cfg.dt`.
pub fn strang_step<T: Real>(u: &Field<T>, integrator: &mut Integrator<T>) -> Field<T> {
    let mut v = u.clone();
    let h = integrator.dt;
    integrator.step(&mut v, h);
    v
}

/// Integrates the harmonic problem and returns the requested snapshots.
pub fn evolve<T: Real>(f: &Field<T>, cfg: &SolverConfig<T>, t_end: T, snapshots: &[T]) -> Result<Vec<Field<T>>> {
    let mut integ = Integrator::new(&f.grid, cfg)?;
    integ.evolve(f, t_end, snapshots)
}

/// Free Schroedinger group `exp(i t Lap / 2)` (`eps = 1`), multiplier `exp(-i t |xi|^2 / 2)`.
pub fn free_apply<T: Real>(u: &Field<T>, t: T) -> Field<T> {
    let g = u.grid;
    let m: Vec<Complex<T>> = g.wavenumber_squared().into_iter().map(|k| cis(-t * k / cst(2.0))).collect();
    let mut v = u.values.clone();
    FftNd::new(&g).apply_multiplier(&mut v, &m);
    let mut out = u.like(v);
    out.time = u.time + t;
    out
}

/// Relative mass tolerated near the box edge and band edge by [`mehler_apply`].
pub const MEHLER_RESOLUTION_TOLERANCE: f64 = 1e-8;

/// Exact harmonic propagator `exp(-i t (-eps^2 Lap + |x|^2) / (2 eps))`.
///
/// Uses `U(t) = U(pi)^k U(r)` with `U(pi) phi = exp(-i n pi / 2) phi(-x)` applied exactly on
/// the lattice, and the factorisation
/// `U(r) = exp(-i tan(r/2) |x|^2 / (2 eps)) exp(-i sin(r) eps |xi|^2 / 2) exp(-i tan(r/2) |x|^2 / (2 eps))`
/// for the remainder, split into sub-steps of at most `pi/8`.
pub fn mehler_apply<T: Real>(u: &Field<T>, t: T) -> Result<Field<T>> {
    let g = u.grid;
    let tol: T = cst(MEHLER_RESOLUTION_TOLERANCE);
    let edge = mass_outside(u, cst(0.95));
    let band = spectral_mass_outside(u, cst(0.95));
    if edge > tol || band > tol {
        return Err(HartreeError::Unresolved(format!(
            "harmonic propagator input has boundary mass {edge:e} and band-edge mass {band:e}"
        )));
    }
    let tf = f64_of(t);
    let pi = std::f64::consts::PI;
    let k = (tf / pi + 0.5).floor();
    let r = tf - k * pi;
    let n = g.dim() as f64;
    let mut v = u.clone();
    let ki = k as i64;
    if ki.rem_euclid(2) == 1 {
        v = v.reflect();
    }
    v.scale(cis(cst(-k * n * pi / 2.0)));
    if r.abs() > 0.0 {
        let m = (r.abs() / (pi / 8.0)).ceil().max(1.0);
        let rs = r / m;
        let eps = f64_of(u.epsilon);
        let a = (rs / 2.0).tan();
        let chirp: Vec<Complex<T>> =
            g.radius_squared().into_iter().map(|x2| cis(cst(-a * f64_of(x2) / (2.0 * eps)))).collect();
        let kin: Vec<Complex<T>> =
            g.wavenumber_squared().into_iter().map(|q| cis(cst(-rs.sin() * eps * f64_of(q) / 2.0))).collect();
        let fft = FftNd::new(&g);
        let mut first = true;
        for _ in 0..m as usize {
            if first {
                v.values.iter_mut().zip(&chirp).for_each(|(x, c)| *x = *x * c);
                first = false;
            } else {
                // The trailing chirp of the previous sub-step merges with this leading one.
                v.values.iter_mut().zip(&chirp).for_each(|(x, c)| *x = *x * c * c);
            }
            fft.apply_multiplier(&mut v.values, &kin);
        }
        v.values.iter_mut().zip(&chirp).for_each(|(x, c)| *x = *x * c);
    }
    v.time = u.time + t;
    Ok(v)
}
