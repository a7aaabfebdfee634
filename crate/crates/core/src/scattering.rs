//! Scattering operator `S: psi_- -> psi_+` of `i psi_t + Lap psi / 2 = (|x|^-gamma * |psi|^2) psi`.
//!
//! `psi_+` is extracted at a finite horizon as `U(-T) psi(T)` with `psi(-T) = U(-T) psi_-`,
//! and the horizon is doubled until consecutive extractions agree. Beyond a fixed inner
//! window the flow is integrated through the lens transform `s = -1/t`, `xi = x/t`.

use std::io::Write;

use crate::error::{HartreeError, Result};
use crate::fft::{fourier_eval, fourier_forward, fourier_inverse, resample, Lattice};
use crate::field::Field;
use crate::grid::Grid;
use crate::io::fmt_g17;
use crate::kernels::{build_kernel, hartree_potential, KernelKind};
use crate::propagators::{free_apply, Integrator};
use crate::scalar::{cst, Real};
use crate::spectral::{l2_distance, mass_outside, position_radius, sigma_norm, wavenumber_radius};

type F64 = Field<f64>;

/// Parameters of a scattering computation (the semiclassical parameter is 1 here).
#[derive(Debug, Clone, PartialEq)]
pub struct ScatteringJob {
    pub gamma: f64,
    /// First horizon `T`; doubled until converged.
    pub horizon: f64,
    pub dt: f64,
    /// Bound on `||psi_-||_Sigma` enforced when `gamma <= 4/3`.
    pub small_data_norm: f64,
    /// Absolute `L^2` tolerance on the certificate.
    pub tolerance: f64,
    /// Number of horizon doublings allowed after the first horizon.
    pub max_doublings: usize,
    /// Largest number of points per axis a working grid may use.
    pub max_points: usize,
    /// Relative boundary mass tolerated at `+T`.
    pub boundary_tolerance: f64,
    pub kernel: KernelKind,
    /// Half-length of the time window integrated on a physical box; outside it the
    /// pseudo-conformal form is used.
    pub inner_horizon: f64,
}

impl ScatteringJob {
    pub fn new(gamma: f64) -> Self {
        ScatteringJob {
            gamma,
            horizon: 4.0,
            dt: 0.05,
            small_data_norm: 0.3,
            tolerance: 1e-3,
            max_doublings: 3,
            max_points: 1024,
            boundary_tolerance: 1e-8,
            kernel: KernelKind::Isolated,
            inner_horizon: 2.0,
        }
    }

    pub fn validate(&self, psi_minus: &F64) -> Result<()> {
        let n = psi_minus.grid.dim() as f64;
        if !(self.gamma > 1.0 && self.gamma < n.min(4.0)) {
            return Err(HartreeError::InvalidParameter(format!("gamma = {} outside (1, min(4, {n}))", self.gamma)));
        }
        if !(self.horizon > 0.0 && self.dt > 0.0 && self.tolerance > 0.0) {
            return Err(HartreeError::InvalidParameter("horizon, dt and tolerance must be positive".into()));
        }
        if self.gamma <= 4.0 / 3.0 {
            let s = sigma_norm(psi_minus);
            if s > self.small_data_norm {
                return Err(HartreeError::InvalidParameter(format!(
                    "||psi_-||_Sigma = {s} exceeds the small-data bound {} required for gamma <= 4/3",
                    self.small_data_norm
                )));
            }
        }
        Ok(())
    }
}

/// Outcome of [`scattering_compute`].
#[derive(Debug, Clone)]
pub struct ScatteringResult {
    /// `psi_+` on the grid of `psi_-`.
    pub psi_plus: F64,
    /// `||psi_+(T) - psi_+(2T)||_2` for the last pair of horizons.
    pub certificate: f64,
    pub horizon_used: f64,
    pub converged: bool,
    /// `(T, certificate)` for every pair of horizons tried.
    pub log: Vec<(f64, f64)>,
}

impl ScatteringResult {
    /// Writes the `T,certificate` convergence log.
    pub fn write_log<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "T,certificate")?;
        for (t, c) in &self.log {
            writeln!(w, "{},{}", fmt_g17(*t), fmt_g17(*c))?;
        }
        Ok(())
    }
}

/// Working-grid geometry for the inner segment: same spacing as `psi_-`, box large enough
/// to contain the free spreading up to time `t`.
fn working_grid(dx: f64, rx: f64, k: f64, t: f64, min_points: usize) -> (usize, f64) {
    let l_needed = 1.1 * (rx + k * t) + 2.0;
    let pts = ((2.0 * l_needed / dx).ceil() as usize).next_power_of_two().max(min_points).max(16);
    (pts, pts as f64 * dx / 2.0)
}

/// Propagates `phi(-t) = U(t) psi(-t)` to `phi(t) = U(-t) psi(t)` with the physical flow on a
/// box that contains the dispersion over `[-t, t]`. The result is resampled onto `phi`'s grid.
fn inner_segment(phi: &F64, job: &ScatteringJob, t: f64) -> Result<F64> {
    let g0 = phi.grid;
    let rx = position_radius(phi, 1e-14);
    let k = wavenumber_radius(phi, 1e-14);
    let (mut pts, mut l) = working_grid(g0.spacing(), rx, k, t, g0.points());
    loop {
        if pts > job.max_points {
            return Err(HartreeError::Unresolved(format!(
                "inner segment [-{t}, {t}] needs more than {} points per axis",
                job.max_points
            )));
        }
        let grid = Grid::new(g0.dim(), pts, l)?;
        let mut psi = free_apply(&resample(phi, &grid)?, -t);
        psi.time = -t;
        let mut integ = Integrator::unconfined_hartree(&grid, job.gamma, 1.0, job.dt, job.kernel)?;
        let end = integ.evolve_to(&psi, 2.0 * t)?;
        if mass_outside(&end, 0.95) > job.boundary_tolerance {
            pts *= 2;
            l *= 2.0;
            continue;
        }
        return resample(&free_apply(&end, -t), &g0);
    }
}

fn lens_chirp(g: &Grid<f64>, t: f64) -> Vec<f64> {
    g.radius_squared().into_iter().map(|r| r / (2.0 * t)).collect()
}

/// `w = F(exp(i |y|^2 / 2t) phi)`, so that `psi(t) = U(t) phi` equals
/// `(it)^{-n/2} exp(i |x|^2 / 2t) w(x / t)`.
fn to_lens(phi: &F64, t: f64) -> F64 {
    let mut m = phi.clone();
    m.mul_phase(&lens_chirp(&phi.grid, t));
    fourier_forward(&m)
}

fn from_lens(w: &F64, t: f64) -> F64 {
    let mut phi = fourier_inverse(w);
    let c = lens_chirp(&phi.grid, -t);
    phi.mul_phase(&c);
    phi
}

/// Lens steps per unit of `job.dt`.
const LENS_REFINEMENT: f64 = 2.0;

/// Integrates `i w_s = -Lap w / 2 + |s|^{gamma - 2} (|xi|^-gamma * |w|^2) w` for `s` from
/// `s0` to `s1 > s0` (same sign), which is the flow written in `s = -1/t`, `xi = x/t`.
fn lens_evolve(w: &F64, s0: f64, s1: f64, job: &ScatteringJob) -> Result<F64> {
    let kernel = build_kernel(&w.grid, job.gamma, job.kernel)?;
    let steps = ((s1 - s0) * LENS_REFINEMENT / job.dt).ceil().max(1.0) as usize;
    let h = (s1 - s0) / steps as f64;
    let p = job.gamma - 1.0;
    let weight = |a: f64, b: f64| (b.abs().powf(p) - a.abs().powf(p)).abs() / p;
    let kick = |u: &mut F64, c: f64| -> Result<()> {
        let v = hartree_potential(&kernel, u)?;
        let phase: Vec<f64> = v.iter().map(|x| -c * x).collect();
        u.mul_phase(&phase);
        Ok(())
    };
    let mut u = w.clone();
    for j in 0..steps {
        let a = s0 + j as f64 * h;
        let m = a + 0.5 * h;
        kick(&mut u, weight(a, m))?;
        u = free_apply(&u, h);
        kick(&mut u, weight(m, m + 0.5 * h))?;
    }
    u.check_finite("lens evolution")?;
    Ok(u)
}

/// Smallest switch time at which the lens chirp is resolved on `g` with a 2/3 margin.
fn switch_time(job: &ScatteringJob, g: &Grid<f64>) -> f64 {
    job.inner_horizon.max(1.5 * g.half_extent() * g.spacing() / std::f64::consts::PI)
}

/// `psi_+` extracted at horizon `t`, returned on the grid of `psi_minus`.
///
/// Up to `|t| = t1` the flow is integrated on a physical box; beyond it the pseudo-conformal
/// form is integrated on a fixed grid, so the cost does not grow with `t`.
pub fn scattering_at_horizon(psi_minus: &F64, job: &ScatteringJob, t: f64) -> Result<F64> {
    let g0 = psi_minus.grid;
    let mut yg = g0;
    loop {
        if yg.points() > job.max_points {
            return Err(HartreeError::Unresolved(format!(
                "lens grid needs more than {} points per axis",
                job.max_points
            )));
        }
        let t1 = switch_time(job, &yg);
        let phi = if yg.same_as(&g0) { psi_minus.clone() } else { resample(psi_minus, &yg)? };
        if t <= t1 {
            let mut out = inner_segment(&phi, job, t)?;
            if !yg.same_as(&g0) {
                out = resample(&out, &g0)?;
            }
            out.time = 0.0;
            return Ok(out);
        }
        let w = lens_evolve(&to_lens(&phi, -t), 1.0 / t, 1.0 / t1, job)?;
        let mut edge_x = false;
        let mut edge_xi = mass_outside(&w, 0.95) > job.boundary_tolerance;
        let before = from_lens(&w, -t1);
        edge_x |= mass_outside(&before, 0.95) > job.boundary_tolerance;
        let after = inner_segment(&before, job, t1)?;
        let w = lens_evolve(&to_lens(&after, t1), -1.0 / t1, -1.0 / t, job)?;
        edge_xi |= mass_outside(&w, 0.95) > job.boundary_tolerance;
        let plus = from_lens(&w, t);
        edge_x |= mass_outside(&plus, 0.95) > job.boundary_tolerance;
        if edge_x || edge_xi {
            // Position edge: same spacing, twice the box. Frequency edge: same box, half the spacing.
            let l = if edge_x { 2.0 * yg.half_extent() } else { yg.half_extent() };
            yg = Grid::new(g0.dim(), 2 * yg.points(), l)?;
            continue;
        }
        let mut out = if yg.same_as(&g0) { plus } else { resample(&plus, &g0)? };
        out.grid = g0;
        out.time = 0.0;
        return Ok(out);
    }
}

/// Computes `S psi_-` by horizon doubling; errors if the certificate does not reach
/// `job.tolerance` within `job.max_doublings` doublings.
pub fn scattering_compute(psi_minus: &F64, job: &ScatteringJob) -> Result<ScatteringResult> {
    job.validate(psi_minus)?;
    let mut t = job.horizon;
    let mut prev = scattering_at_horizon(psi_minus, job, t)?;
    let mut log = Vec::new();
    for _ in 0..=job.max_doublings {
        let next = scattering_at_horizon(psi_minus, job, 2.0 * t)?;
        let cert = l2_distance(&prev, &next)?;
        log.push((t, cert));
        if cert <= job.tolerance {
            return Ok(ScatteringResult { psi_plus: next, certificate: cert, horizon_used: 2.0 * t, converged: true, log });
        }
        prev = next;
        t *= 2.0;
    }
    Err(HartreeError::NotConverged(format!(
        "certificate {:e} above {:e} at horizon {}",
        log.last().map_or(f64::NAN, |p| p.1),
        job.tolerance,
        t
    )))
}

/// `S^k psi`, each application certified.
pub fn s_iterate(input: &F64, k: usize, job: &ScatteringJob) -> Result<F64> {
    if k == 0 {
        return Err(HartreeError::InvalidParameter("k must be at least 1".into()));
    }
    let mut psi = input.clone();
    for _ in 0..k {
        psi = scattering_compute(&psi, job)?.psi_plus;
    }
    Ok(psi)
}

/// Handle used by focus predictions: applies `F S F^{-1}` to profiles given on any grid.
#[derive(Debug, Clone)]
pub struct ScatteringOperator {
    pub job: ScatteringJob,
}

impl ScatteringOperator {
    pub fn new(job: ScatteringJob) -> Self {
        ScatteringOperator { job }
    }

    /// Working grid for `F^{-1} phi`: position extent from the spectrum of `phi`, spacing
    /// from its spatial extent.
    fn scattering_grid<T: Real>(&self, phi: &Field<T>) -> Result<Grid<f64>> {
        let p = phi.cast::<f64>();
        let rx = position_radius(&p, 1e-14).max(1.0);
        let k = wavenumber_radius(&p, 1e-14).max(1.0);
        let dx = std::f64::consts::PI / (1.5 * rx);
        let l = 1.2 * k + 2.0;
        let pts = ((2.0 * l / dx).ceil() as usize).next_power_of_two().max(32);
        Grid::new(phi.grid.dim(), pts, pts as f64 * dx / 2.0)
    }

    /// `F S F^{-1} phi`, with the scattering step certified.
    pub fn conjugated_apply<T: Real>(&self, phi: &Field<T>) -> Result<Field<T>> {
        Ok(self.conjugated_apply_with_result(phi)?.0)
    }

    /// As [`conjugated_apply`](Self::conjugated_apply), also returning the scattering result.
    pub fn conjugated_apply_with_result<T: Real>(&self, phi: &Field<T>) -> Result<(Field<T>, ScatteringResult)> {
        let w = self.scattering_grid(phi)?;
        let p = phi.cast::<f64>();
        // F^{-1} phi (y) = F phi (-y).
        let fhat = fourier_eval(&p, Lattice::of_grid(&w));
        let psi_minus = Field { grid: w, values: fhat, epsilon: 1.0, time: 0.0 }.reflect();
        let res = scattering_compute(&psi_minus, &self.job)?;
        if !res.converged {
            return Err(HartreeError::NotConverged("scattering certificate missing".into()));
        }
        let back = fourier_eval(&res.psi_plus, Lattice::of_grid(&phi.grid.cast::<f64>()));
        let mut out: Field<T> = Field { grid: phi.grid.cast(), values: back, epsilon: 1.0, time: 0.0 }.cast();
        out.grid = phi.grid;
        out.epsilon = phi.epsilon;
        out.time = phi.time;
        let _ = cst::<T>(0.0);
        Ok((out, res))
    }
}
