//! Conserved quantities, the vector fields `J` and `H`, and the modified Sobolev monitor.

use num_complex::Complex;

use crate::error::Result;
use crate::field::Field;
use crate::propagators::Integrator;
use crate::scalar::{cst, Real};
use crate::spectral::{gradient, gradient_norm, l2_norm, lp_norm, position_norm};

/// `||u||_2^2`.
pub fn mass<T: Real>(u: &Field<T>) -> T {
    l2_norm(u).powi(2)
}

/// Energy
/// `1/2 ||eps grad u||^2 + 1/2 ||x u||^2 + eps^alpha/2 int V_H |u|^2 - eps^beta/(sigma+1) int |u|^(2 sigma + 2)`,
/// with the terms present in `integrator`.
pub fn energy<T: Real>(u: &Field<T>, integrator: &Integrator<T>) -> Result<T> {
    integrator.grid.check_same(&u.grid)?;
    let half = cst::<T>(0.5);
    let eps = u.epsilon;
    let mut e = half * (eps * gradient_norm(u)).powi(2);
    if integrator.has_trap() {
        e = e + half * position_norm(u).powi(2);
    }
    let vol = u.grid.cell_volume();
    let rho = u.density();
    if integrator.kernel().is_some() {
        let v = integrator.hartree_field(u);
        let s = v.iter().zip(&rho).fold(T::zero(), |acc, (&a, &b)| acc + a * b);
        e = e + half * integrator.hartree_coupling() * s * vol;
    }
    if let Some((c, sigma)) = integrator.local_term() {
        let s = rho.iter().fold(T::zero(), |acc, &r| acc + r.powf(sigma + T::one()));
        e = e - c / (sigma + T::one()) * s * vol;
    }
    Ok(e)
}

/// Which of the two vector fields to apply.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JhKind {
    /// `J(t) = x sin t / eps - i cos t grad`.
    J,
    /// `H(t) = x cos t + i eps sin t grad`.
    H,
}

/// Applies `J(t)` or `H(t)` componentwise; one field per axis.
pub fn jh_apply<T: Real>(u: &Field<T>, t: T, kind: JhKind) -> Vec<Field<T>> {
    let g = u.grid;
    let (s, c) = t.sin_cos();
    let eps = u.epsilon;
    let grads = gradient(u);
    grads
        .into_iter()
        .enumerate()
        .map(|(a, d)| {
            let vals = d
                .values
                .iter()
                .zip(&u.values)
                .enumerate()
                .map(|(i, (dv, uv))| {
                    let x = g.position(i)[a];
                    match kind {
                        JhKind::J => uv.scale(x * s / eps) + dv * Complex::new(T::zero(), -c),
                        JhKind::H => uv.scale(x * c) + dv * Complex::new(T::zero(), eps * s),
                    }
                })
                .collect();
            u.like(vals)
        })
        .collect()
}

/// `( sum_a ||A_a u||^2 )^(1/2)` for `A = J(t)` or `H(t)`.
pub fn jh_norm<T: Real>(u: &Field<T>, t: T, kind: JhKind) -> T {
    jh_apply(u, t, kind).iter().fold(T::zero(), |acc, f| acc + l2_norm(f).powi(2)).sqrt()
}

/// Ratio `||u||_4 / ( |cos t|^-delta ||u||_2^(1-delta) ||J(t) u||_2^delta )` with `delta = n/4`.
/// Gagliardo-Nirenberg keeps this bounded independently of `eps` and `t`.
pub fn sobolev_monitor<T: Real>(u: &Field<T>, t: T) -> T {
    let delta = cst::<T>(u.grid.dim() as f64 / 4.0);
    let l4 = lp_norm(u, cst(4.0));
    let denom = t.cos().abs().powf(-delta) * l2_norm(u).powf(T::one() - delta) * jh_norm(u, t, JhKind::J).powf(delta);
    l4 / denom
}
