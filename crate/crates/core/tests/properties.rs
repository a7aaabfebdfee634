use hartree_core::fft::{fourier_forward, fourier_inverse};
use hartree_core::kernels::{build_kernel, hartree_potential, KernelKind, ZeroMode};
use hartree_core::propagators::{mehler_apply, Integrator, SolverConfig};
use hartree_core::spectral::*;
use hartree_core::{make_grid, Complex, Field64};
use proptest::prelude::*;

fn bump(dim: usize, n: usize, l: f64, eps: f64, c: [f64; 3], w: f64, k: [f64; 3]) -> Field64 {
    let g = make_grid(dim, n, l).unwrap();
    Field64::from_fn(g, eps, |x| {
        let r2: f64 = (0..dim).map(|a| (x[a] - c[a]).powi(2)).sum();
        let ph: f64 = (0..dim).map(|a| x[a] * k[a]).sum();
        Complex::from_polar((-r2 / (2.0 * w * w)).exp(), ph)
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn fourier_is_unitary_and_invertible(dim in 1usize..=2, cx in -1.0f64..1.0, w in 0.6f64..1.5, k in -3.0f64..3.0) {
        let u = bump(dim, 64, 8.0, 1.0, [cx, -cx, 0.0], w, [k, 0.5 * k, 0.0]);
        let v = fourier_forward(&u);
        prop_assert!((l2_norm(&v) - l2_norm(&u)).abs() < 1e-12 * l2_norm(&u));
        let back = fourier_inverse(&v);
        prop_assert!(l2_distance(&back, &u).unwrap() < 1e-12);
    }

    #[test]
    fn gauge_boost_is_isometric_and_invertible(xi in -0.8f64..0.8, t in -3.0f64..3.0) {
        let u = bump(2, 64, 8.0, 0.25, [0.3, -0.2, 0.0], 1.0, [0.0; 3]);
        let b = gauge_boost(&u, &[xi, -0.5 * xi], t).unwrap();
        prop_assert!((l2_norm(&b) - l2_norm(&u)).abs() < 1e-12);
        let back = gauge_boost_inverse(&b, &[xi, -0.5 * xi], t).unwrap();
        prop_assert!(l2_distance(&back, &u).unwrap() < 1e-10);
    }

    #[test]
    fn hartree_potential_is_homogeneous_and_translation_covariant(a in 0.2f64..3.0, shift in -4i32..4, gamma in 0.3f64..1.7) {
        let g = make_grid(2, 64, 10.0).unwrap();
        let kernel = build_kernel(&g, gamma, KernelKind::Isolated).unwrap();
        let u = bump(2, 64, 10.0, 1.0, [0.0; 3], 1.0, [0.0; 3]);
        let v = hartree_potential(&kernel, &u).unwrap();
        let va = hartree_potential(&kernel, &u.scaled(Complex::new(a, 0.0))).unwrap();
        for (p, q) in v.iter().zip(&va) {
            prop_assert!((q - a * a * p).abs() < 1e-12 * (1.0 + q.abs()));
        }
        // Lattice shift of the density shifts the potential.
        let dx = g.spacing();
        let s = shift as f64 * dx;
        let us = bump(2, 64, 10.0, 1.0, [s, 0.0, 0.0], 1.0, [0.0; 3]);
        let vs = hartree_potential(&kernel, &us).unwrap();
        let n = g.points();
        for j0 in 16..48 {
            for j1 in 16..48 {
                let src = g.ravel(&[(j0 as i64 - shift as i64).rem_euclid(n as i64) as usize, j1, 0]);
                let dst = g.ravel(&[j0, j1, 0]);
                prop_assert!((vs[dst] - v[src]).abs() < 1e-9, "{} {}", vs[dst], v[src]);
            }
        }
    }

    #[test]
    fn strang_step_conserves_mass(gamma in 0.3f64..1.7, k in -2.0f64..2.0) {
        let eps = 0.25;
        let u = bump(2, 32, 6.0, eps, [0.5, 0.0, 0.0], 0.8, [k, 0.0, 0.0]);
        let mut integ = Integrator::new(&u.grid, &SolverConfig::hartree(eps, 0.01, 1.0, gamma)).unwrap();
        let v = integ.evolve_to(&u, 0.3).unwrap();
        prop_assert!((l2_norm(&v) - l2_norm(&u)).abs() < 1e-12);
    }

    #[test]
    fn mehler_is_unitary(t in 0.0f64..6.0) {
        let u = bump(1, 128, 6.0, 0.25, [0.4, 0.0, 0.0], 0.5, [1.0, 0.0, 0.0]);
        prop_assert!((l2_norm(&mehler_apply(&u, t).unwrap()) - l2_norm(&u)).abs() < 1e-12);
    }
}

#[test]
fn continuum_kernel_is_nonnegative_and_isolated_kernel_is_real() {
    for gamma in [0.5, 1.0, 1.5] {
        let g = make_grid::<f64>(2, 32, 6.0).unwrap();
        for kind in [KernelKind::Continuum(ZeroMode::Zero), KernelKind::Continuum(ZeroMode::CellAverage)] {
            let k = build_kernel(&g, gamma, kind).unwrap();
            assert!(k.multiplier().iter().all(|&m| m >= 0.0));
        }
        let k = build_kernel(&g, gamma, KernelKind::Isolated).unwrap();
        let rho: Vec<f64> = g.radius_squared().into_iter().map(|r: f64| (-r).exp()).collect();
        let (_, residue) = k.convolve_with_residue(&rho);
        assert!(residue < 1e-12, "{residue}");
    }
}

#[test]
fn gauge_boost_commutes_with_the_linear_flow() {
    let eps = 1.0 / 8.0;
    let g = make_grid(2, 512, 8.0).unwrap();
    let f = hartree_core::profiles::Profile::Modulated { amplitude: 1.0, coefficient: 0.3 }.sample(&g, eps);
    let xi0 = [0.7, -0.4];
    for t in [0.4, 1.1, 2.0] {
        let lhs = mehler_apply(&gauge_boost(&f, &xi0, 0.0).unwrap(), t).unwrap();
        let rhs = gauge_boost(&mehler_apply(&f, t).unwrap(), &xi0, t).unwrap();
        let d = l2_distance(&lhs, &rhs).unwrap();
        assert!(d < 1e-7, "t = {t}: {d}");
    }
    // A boost whose carrier exceeds the band is refused.
    assert!(gauge_boost(&f, &[40.0 * eps * std::f64::consts::PI / g.spacing(), 0.0], 0.0).is_err());
}
