//! Leading-order profiles: the dilation `V(t)`, WKB profiles with the Hartree phase `g`,
//! focus profiles, long-range phases and Maslov phase extraction.

use crate::error::{HartreeError, Result};
use crate::fft::{fourier_eval, interp_eval, Lattice};
use crate::field::Field;
use crate::kernels::{build_kernel, KernelKind};
use crate::quadrature::adaptive_gk;
use crate::scalar::{cis, cst, f64_of, Real};
use crate::scattering::ScatteringOperator;
use crate::spectral::{gradient_norm, inner_product, l2_norm};

const PI: f64 = std::f64::consts::PI;

/// Half width of the excluded window around each focus for outer profiles.
pub const FOCUS_WINDOW: f64 = 0.05;

/// Distance from `t` to the nearest odd multiple of `pi/2`.
pub fn distance_to_focus(t: f64) -> f64 {
    let r = (t - PI / 2.0).rem_euclid(PI);
    r.min(PI - r)
}

fn check_window(t: f64) -> Result<()> {
    if distance_to_focus(t) < FOCUS_WINDOW {
        Err(HartreeError::ExcludedWindow(format!("t = {t} lies within {FOCUS_WINDOW} of a focus")))
    } else {
        Ok(())
    }
}

/// Number of foci crossed on `[0, t]` (t >= 0).
fn foci_crossed(t: f64) -> i64 {
    (t / PI + 0.5).floor() as i64
}

/// `int_0^{pi/2 - w} cos^-gamma` on the regular part, and the singular end by
/// `tau = pi/2 - s^p` with `p = 1/(1 - gamma)`, which makes the integrand bounded.
fn quarter_integral(gamma: f64, r: f64, tol: f64) -> f64 {
    // r in [0, pi/2].
    let split = PI / 2.0 - 0.5;
    let f = |tau: f64| tau.cos().powf(-gamma);
    if r <= split {
        return adaptive_gk(f, 0.0, r, tol);
    }
    let p = 1.0 / (1.0 - gamma);
    let g = |s: f64| {
        let sp = s.powf(p);
        if sp == 0.0 {
            p
        } else {
            p * (sp / sp.sin()).powf(gamma)
        }
    };
    let s_lo = (PI / 2.0 - r).max(0.0).powf(1.0 / p);
    let s_hi = 0.5f64.powf(1.0 / p);
    adaptive_gk(f, 0.0, split, tol / 2.0) + adaptive_gk(g, s_lo, s_hi, tol / 2.0)
}

/// `I(t) = int_0^t |cos tau|^-gamma d tau` for `0 <= gamma < 1` (odd in `t`).
pub fn time_integral(gamma: f64, t: f64) -> f64 {
    assert!((0.0..1.0).contains(&gamma), "time integral needs 0 <= gamma < 1");
    if t < 0.0 {
        return -time_integral(gamma, -t);
    }
    let tol = 1e-13;
    let half = quarter_integral(gamma, PI / 2.0, tol);
    let k = (t / PI).floor();
    let r = t - k * PI;
    let part = if r <= PI / 2.0 { quarter_integral(gamma, r, tol) } else { 2.0 * half - quarter_integral(gamma, PI - r, tol) };
    2.0 * half * k + part
}

/// `P = |x|^-gamma * |f|^2` together with `gamma`; `g(t, x) = -P(x) I(t)`.
#[derive(Debug, Clone)]
pub struct PhaseTable<T: Real> {
    pub gamma: f64,
    pub potential: Vec<T>,
}

impl<T: Real> PhaseTable<T> {
    pub fn new(f: &Field<T>, gamma: f64, kind: KernelKind) -> Result<Self> {
        let k = build_kernel(&f.grid, gamma, kind)?;
        Ok(PhaseTable { gamma, potential: k.convolve(&f.density()) })
    }

    /// Table with `P = 0` (no phase correction).
    pub fn zero(f: &Field<T>, gamma: f64) -> Self {
        PhaseTable { gamma, potential: vec![T::zero(); f.len()] }
    }

    pub fn time_integral(&self, t: f64) -> f64 {
        time_integral(self.gamma, t)
    }
}

/// `g(t, .) = -P I(t)`; refuses `gamma >= 1`, where the integral diverges at the focus.
pub fn g_phase<T: Real>(table: &PhaseTable<T>, t: T) -> Result<Vec<T>> {
    if !(table.gamma < 1.0) {
        return Err(HartreeError::InvalidParameter(format!(
            "gamma = {} >= 1: the phase diverges at the focus; use the long-range phase",
            table.gamma
        )));
    }
    let i: T = cst(time_integral(table.gamma, f64_of(t)));
    Ok(table.potential.iter().map(|&p| -p * i).collect())
}

/// `V(t) phi = e^{-i m n pi/2} |cos t|^{-n/2} phi(x / cos t) exp(-i |x|^2 tan t / (2 eps))`
/// with `m` the number of foci crossed. The dilation is evaluated spectrally.
pub fn vprofile_apply<T: Real>(phi: &Field<T>, t: T) -> Result<Field<T>> {
    let tf = f64_of(t);
    if tf < 0.0 {
        return Err(HartreeError::InvalidParameter("t must be non-negative".into()));
    }
    check_window(tf)?;
    let g = phi.grid;
    let n = g.dim() as f64;
    let c = tf.cos();
    let eps = f64_of(phi.epsilon);
    let dilated = if tf == 0.0 { phi.values.clone() } else { interp_eval(phi, Lattice::dilated(&g, c)) };
    let amp = cis::<T>(cst(-(foci_crossed(tf) as f64) * n * PI / 2.0)).scale(cst(c.abs().powf(-n / 2.0)));
    let tan = tf.tan();
    let r2 = g.radius_squared();
    let vals = dilated
        .into_iter()
        .zip(&r2)
        .map(|(v, &x2)| v * amp * cis(cst::<T>(-f64_of(x2) * tan / (2.0 * eps))))
        .collect();
    let mut out = phi.like(vals);
    out.time = t;
    Ok(out)
}

/// `V(t) (f e^{i g(t)})`, the WKB prediction with the Hartree phase.
pub fn wkb_profile<T: Real>(f: &Field<T>, table: &PhaseTable<T>, t: T) -> Result<Field<T>> {
    let g = g_phase(table, t)?;
    let mut a = f.clone();
    a.mul_phase(&g);
    vprofile_apply(&a, t)
}

/// `2 |eps tan t|^{1/2} ||phi||_{H^1}` with `||phi||_{H^1}^2 = ||phi||^2 + ||grad phi||^2`.
pub fn wkb_error_bound<T: Real>(phi: &Field<T>, t: T) -> T {
    let h1 = (l2_norm(phi).powi(2) + gradient_norm(phi).powi(2)).sqrt();
    cst::<T>(2.0) * (phi.epsilon * t.tan()).abs().sqrt() * h1
}

/// Prediction at the focus `t = pi/2 + k pi`:
/// `U(pi/2 + k pi) phi_k = e^{-i n pi/4} e^{-i k n pi/2} eps^{-n/2} (F phi_k)((-1)^k x / eps)`
/// with `phi_0 = f e^{i g(pi/2)}` (or `f` without a table) and `phi_{j+1} = F S F^{-1} phi_j`.
/// Each application of `S` must come with a convergence certificate.
pub fn focus_profile<T: Real>(
    f: &Field<T>,
    table: Option<&PhaseTable<T>>,
    scattering: Option<&ScatteringOperator>,
    k: i64,
    epsilon: T,
) -> Result<Field<T>> {
    if k < 0 {
        return Err(HartreeError::InvalidParameter("focus index must be non-negative".into()));
    }
    let mut phi = f.clone();
    phi.epsilon = epsilon;
    if let Some(tab) = table {
        let g = g_phase(tab, cst(PI / 2.0))?;
        phi.mul_phase(&g);
    }
    for _ in 0..k {
        if let Some(s) = scattering {
            phi = s.conjugated_apply(&phi)?;
        }
    }
    let g = phi.grid;
    let n = g.dim() as f64;
    let eps = f64_of(epsilon);
    let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
    let vals = fourier_eval(&phi, Lattice::dilated(&g, sign * eps));
    let ph = cis::<T>(cst(-n * PI / 4.0 - k as f64 * n * PI / 2.0)).scale(cst(eps.powf(-n / 2.0)));
    let mut out = phi.like(vals.into_iter().map(|v| v * ph).collect());
    out.time = cst(PI / 2.0 + k as f64 * PI);
    Ok(out)
}

/// Long-range (`gamma = 1`) phase. Before the focus: `g = (|x|^-1 * |f|^2) log(cos t / eps)`,
/// requiring `cos t > 0`. After the focus, with the outgoing profile `p` supplied:
/// `h = -(|x|^-1 * |p|^2) log(|cos t| / eps)`. Exploratory diagnostic.
pub fn longrange_phase<T: Real>(f: &Field<T>, t: T, epsilon: T, after_focus_profile: Option<&Field<T>>) -> Result<Vec<T>> {
    let tf = f64_of(t);
    let c = tf.cos();
    let eps = f64_of(epsilon);
    let (source, sign) = if tf < PI / 2.0 {
        (f, 1.0)
    } else {
        match after_focus_profile {
            Some(p) => (p, -1.0),
            None => return Err(HartreeError::InvalidParameter("after the focus an outgoing profile is required".into())),
        }
    };
    let arg = c.abs() / eps;
    if !(arg > 0.0) || (tf < PI / 2.0 && c <= 0.0) {
        return Err(HartreeError::InvalidParameter(format!("log argument {arg} must be positive")));
    }
    let kernel = build_kernel(&source.grid, 1.0, KernelKind::Isolated)?;
    let p = kernel.convolve(&source.density());
    let l: T = cst(sign * arg.ln());
    Ok(p.into_iter().map(|v| v * l).collect())
}

/// `arg <reference, u>` in `(-pi, pi]`. Requires the moduli to agree to 20% in relative `L^2`.
pub fn maslov_extract<T: Real>(u: &Field<T>, reference: &Field<T>) -> Result<T> {
    u.grid.check_same(&reference.grid)?;
    let rn = l2_norm(reference);
    if !(rn > T::zero()) {
        return Err(HartreeError::Incomparable("reference has zero norm".into()));
    }
    let d = u
        .values
        .iter()
        .zip(&reference.values)
        .fold(T::zero(), |a, (x, y)| a + (x.norm() - y.norm()).powi(2));
    let rel = (d * u.grid.cell_volume()).sqrt() / rn;
    if rel > cst(0.2) {
        return Err(HartreeError::Incomparable(format!("relative modulus distance {rel} exceeds 0.2")));
    }
    let ip = inner_product(reference, u)?;
    if ip.norm() <= cst::<T>(1e-3) * rn * l2_norm(u) {
        return Err(HartreeError::Incomparable("state is orthogonal to the reference".into()));
    }
    Ok(ip.arg())
}

/// Wraps an angle difference into `(-pi, pi]`.
pub fn wrap_angle(x: f64) -> f64 {
    let r = (x + PI).rem_euclid(2.0 * PI) - PI;
    if r == -PI {
        PI
    } else {
        r
    }
}

