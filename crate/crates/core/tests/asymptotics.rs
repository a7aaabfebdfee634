use hartree_core::asymptotics::*;
use hartree_core::fft::{fourier_eval, Lattice};
use hartree_core::kernels::KernelKind;
use hartree_core::profiles::Profile;
use hartree_core::propagators::mehler_apply;
use hartree_core::spectral::{l2_distance, l2_norm};
use hartree_core::{make_grid, Complex, Field64};
use statrs::function::beta::{beta, beta_reg};

const PI: f64 = std::f64::consts::PI;

/// `int_0^t cos^-gamma` for `t <= pi/2` through the regularised incomplete beta function.
fn beta_oracle(gamma: f64, t: f64) -> f64 {
    let (a, b) = (0.5, (1.0 - gamma) / 2.0);
    if t <= PI / 4.0 {
        0.5 * beta(a, b) * beta_reg(a, b, t.sin().powi(2))
    } else {
        // Complementary form avoids cancellation in 1 - sin^2 near the focus.
        0.5 * beta(a, b) * (1.0 - beta_reg(b, a, t.cos().powi(2)))
    }
}

#[test]
fn time_integral_against_incomplete_beta() {
    for &g in &[0.1, 0.5, 0.75, 0.9] {
        for &t in &[0.1, PI / 4.0, 1.2, 1.5, PI / 2.0 - 1e-6, PI / 2.0] {
            let a = time_integral(g, t);
            let b = beta_oracle(g, t);
            assert!((a - b).abs() < 1e-8 * b.max(1.0), "gamma {g} t {t}: {a} vs {b}");
        }
        // Symmetry across the focus and periodicity.
        let h = time_integral(g, PI / 2.0);
        assert!((time_integral(g, PI) - 2.0 * h).abs() < 1e-10);
        assert!((time_integral(g, 2.0) - (2.0 * h - beta_oracle(g, PI - 2.0))).abs() < 1e-8);
        assert!((time_integral(g, PI + 0.3) - 2.0 * h - beta_oracle(g, 0.3)).abs() < 1e-8);
    }
    assert_eq!(time_integral(0.5, 0.0), 0.0);
    assert!((time_integral(0.0, 1.3) - 1.3).abs() < 1e-13);
}

fn setup() -> (Field64, f64) {
    let eps = 1.0 / 32.0;
    let g = make_grid(2, 512, 5.0).unwrap();
    (Profile::Gaussian { amplitude: 1.0 }.sample(&g, eps), eps)
}

#[test]
fn vprofile_is_an_isometry_and_close_to_the_propagator() {
    let (f, _) = setup();
    assert!(vprofile_apply(&f, PI / 2.0 + 0.01).is_err());
    let v0 = vprofile_apply(&f, 0.0).unwrap();
    assert!(l2_distance(&v0, &f).unwrap() < 1e-14);
    for &t in &[PI / 4.0, 2.0, 3.0] {
        let v = vprofile_apply(&f, t).unwrap();
        assert!((l2_norm(&v) - l2_norm(&f)).abs() < 1e-10);
        let u = mehler_apply(&f, t).unwrap();
        let d = l2_distance(&u, &v).unwrap();
        assert!(d <= wkb_error_bound(&f, t), "t {t}: {d}");
    }
}

#[test]
fn g_phase_and_wkb_profile() {
    let (f, _) = setup();
    let tab = PhaseTable::new(&f, 0.5, KernelKind::Isolated).unwrap();
    assert!(g_phase(&tab, 0.0).unwrap().iter().all(|&v| v == 0.0));
    let t = PI / 4.0;
    let w = wkb_profile(&f, &tab, t).unwrap();
    let v = vprofile_apply(&f, t).unwrap();
    for (a, b) in w.values.iter().zip(&v.values) {
        assert!((a.norm() - b.norm()).abs() < 1e-9, "{} {}", a.norm(), b.norm());
    }
    let zero = PhaseTable::zero(&f, 0.5);
    assert_eq!(wkb_profile(&f, &zero, t).unwrap(), v);
    let strong = PhaseTable::new(&f, 1.0, KernelKind::Isolated).unwrap();
    assert!(g_phase(&strong, t).is_err());
}

#[test]
fn linear_focus_profile_matches_the_propagator() {
    let eps = 1.0 / 16.0;
    let g = make_grid(2, 512, 6.0).unwrap();
    let f = Profile::Gaussian { amplitude: 1.0 }.sample(&g, eps);
    let u = mehler_apply(&f, PI / 2.0).unwrap();
    let p = focus_profile(&f, None, None, 0, eps).unwrap();
    let d = l2_distance(&u, &p).unwrap();
    assert!(d < 1e-8, "{d}");
    let tab = PhaseTable::new(&f, 0.5, KernelKind::Isolated).unwrap();
    let q = focus_profile(&f, Some(&tab), None, 0, eps).unwrap();
    let mut fg = f.clone();
    fg.mul_phase(&g_phase(&tab, PI / 2.0).unwrap());
    let direct = fourier_eval(&fg, Lattice::dilated(&f.grid, eps));
    for (a, b) in q.values.iter().zip(&direct) {
        assert!((a.norm() - b.norm() / eps).abs() < 1e-10);
    }
}

#[test]
fn maslov_phase_and_errors() {
    let g = make_grid(2, 64, 6.0).unwrap();
    let f = Profile::Gaussian { amplitude: 1.0 }.sample(&g, 0.25);
    let u = f.scaled(Complex::new(0.0, 0.7f64).exp());
    assert!((maslov_extract(&u, &f).unwrap() - 0.7).abs() < 1e-14);
    let odd = Field64::from_fn(g, 0.25, |x| Complex::new(x[0] * (-(x[0] * x[0] + x[1] * x[1]) / 2.0).exp(), 0.0));
    let even = Field64::from_fn(g, 0.25, |x| Complex::new(x[0].abs() * (-(x[0] * x[0] + x[1] * x[1]) / 2.0).exp(), 0.0));
    assert!(maslov_extract(&odd, &even).is_err());
    assert!(maslov_extract(&f, &f.scaled(Complex::new(3.0, 0.0))).is_err());
    let v = mehler_apply(&f, PI).unwrap();
    let th = maslov_extract(&v, &f.reflect()).unwrap();
    assert!(wrap_angle(th + PI).abs() < 1e-10);
}

#[test]
fn long_range_phase_identities() {
    let g = make_grid(2, 64, 8.0).unwrap();
    let f = Profile::Gaussian { amplitude: 1.0 }.sample(&g, 0.1);
    let t = (0.1f64).acos();
    let z: Vec<f64> = longrange_phase(&f, t, 0.1, None).unwrap();
    assert!(z.iter().all(|v| v.abs() < 1e-12));
    let a = longrange_phase(&f, 0.5, 0.1, None).unwrap();
    let b = longrange_phase(&f, 0.5, 0.05, None).unwrap();
    let p = longrange_phase(&f, 0.5, 0.5f64.cos() / std::f64::consts::E, None).unwrap();
    for i in 0..a.len() {
        assert!((b[i] - a[i] - p[i] * 2f64.ln()).abs() < 1e-10);
    }
    assert!(longrange_phase(&f, 2.0, 0.1, None).is_err());
    assert!(longrange_phase(&f, 2.0, 0.1, Some(&f)).is_ok());
}
