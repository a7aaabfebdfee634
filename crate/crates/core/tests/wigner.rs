use hartree_core::asymptotics::vprofile_apply;
use hartree_core::profiles::Profile;
use hartree_core::wigner::*;
use hartree_core::{make_grid, Complex, Field64};

const PI: f64 = std::f64::consts::PI;

fn coherent_1d(eps: f64, points: usize, l: f64) -> Field64 {
    let g = make_grid(1, points, l).unwrap();
    Field64::from_fn(g, eps, |x| Complex::new((PI * eps).powf(-0.25) * (-x[0] * x[0] / (2.0 * eps)).exp(), 0.0))
}

#[test]
fn gaussian_wigner_in_closed_form() {
    let eps = 0.25;
    let u = coherent_1d(eps, 64, 4.0);
    let w = wigner_transform(&u, 4).unwrap();
    let nf = w.frequencies();
    let mut worst: f64 = 0.0;
    for i in 0..w.positions() {
        let x = w.x_at(i)[0];
        for k in 0..nf {
            let xi = w.xi_at(k)[0];
            let exact = (-(x * x + xi * xi) / eps).exp() / (PI * eps);
            worst = worst.max((w.values[i * nf + k] - exact).abs());
        }
    }
    assert!(worst < 1e-6, "{worst}");
}

#[test]
fn marginal_matches_density_in_one_and_two_dimensions() {
    let g1 = make_grid(1, 64, 5.0).unwrap();
    let u1 = Profile::Modulated { amplitude: 1.0, coefficient: -0.6 }.sample(&g1, 0.2);
    let g2 = make_grid(2, 16, 3.0).unwrap();
    let u2 = Field64::from_fn(g2, 0.5, |x| Complex::new((-(x[0] * x[0] + x[1] * x[1])).exp(), 0.3 * x[0] * (-(x[0] * x[0] + x[1] * x[1])).exp()));
    for (u, c) in [(u1, 2usize), (u2, 4usize)] {
        let w = wigner_transform(&u, c).unwrap();
        let marg = w.position_marginal();
        for (i, m) in marg.iter().enumerate() {
            let mut idx = [0usize; 3];
            let mut r = i;
            for a in (0..u.grid.dim()).rev() {
                idx[a] = (r % (u.grid.points() / c)) * c;
                r /= u.grid.points() / c;
            }
            let rho = u.values[u.grid.ravel(&idx)].norm_sqr();
            assert!((m - rho).abs() < 1e-6, "{m} vs {rho}");
        }
    }
}

#[test]
fn modulation_shifts_the_frequency() {
    let eps = 0.25;
    let u = coherent_1d(eps, 64, 5.0);
    let dxi = eps * PI / (64.0 * u.grid.spacing());
    let xi0 = 3.0 * dxi;
    let v = Field64::from_fn(u.grid, eps, |x| Complex::new(0.0, x[0] * xi0 / eps).exp()) ;
    let mv = u.like(u.values.iter().zip(&v.values).map(|(a, b)| a * b).collect());
    let w = wigner_transform(&u, 8).unwrap();
    let wm = wigner_transform(&mv, 8).unwrap();
    let nf = w.frequencies();
    for i in 0..w.positions() {
        for k in 3..nf {
            assert!((wm.values[i * nf + k] - w.values[i * nf + k - 3]).abs() < 1e-8);
        }
    }
}

#[test]
fn wkb_state_concentrates_on_the_lagrangian_line() {
    let t = PI / 4.0;
    let mut last = 0.0;
    for &eps in &[1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0] {
        let g = make_grid(1, ((22.4 / eps) as usize).next_power_of_two(), 7.0).unwrap();
        let p = Profile::Exponential { amplitude: 1.0 };
        let u = p.sample_wkb(&g, eps, t).unwrap();
        let w = wigner_transform(&u, 4).unwrap();
        let c = concentration_metric(&w, t, 3.0 * eps.sqrt()).unwrap();
        assert!(c > last + 1e-3, "{c} vs {last}");
        last = c;
    }
    assert!(last > 0.95);
    // The line has slope -tan t: the mirrored band captures much less.
    let g = make_grid(1, 256, 7.0).unwrap();
    let u = Profile::Gaussian { amplitude: 1.0 }.sample_wkb(&g, 1.0 / 16.0, t).unwrap();
    let w = wigner_transform(&u, 4).unwrap();
    assert!(concentration_metric(&w, t, 0.75).unwrap() > 0.999);
    assert!(concentration_metric(&w, -t, 0.75).unwrap() < 0.5);
    assert!(concentration_metric(&w, PI / 2.0 + 0.01, 0.3).is_err());
}

#[test]
fn analytic_wkb_sample_matches_the_profile_operator() {
    let g = make_grid(2, 256, 8.0).unwrap();
    let eps = 1.0 / 8.0;
    let p = Profile::Modulated { amplitude: 1.0, coefficient: -0.4 };
    let direct = p.sample_wkb(&g, eps, 0.7).unwrap();
    let via = vprofile_apply(&p.sample(&g, eps), 0.7).unwrap();
    let d = hartree_core::spectral::l2_distance(&direct, &via).unwrap();
    assert!(d < 1e-8, "{d}");
    assert!(p.sample_wkb(&g, eps, 1.6).is_err());
}

#[test]
fn csv_export_has_the_documented_columns() {
    let u = coherent_1d(0.5, 16, 3.0);
    let w = wigner_transform(&u, 8).unwrap();
    let mut buf = Vec::new();
    w.write_csv(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "x0,xi0,w");
    assert_eq!(lines.count(), w.values.len());
}

#[test]
fn oversized_slices_are_refused() {
    let g = make_grid(2, 256, 5.0).unwrap();
    let u = Profile::Gaussian { amplitude: 1.0 }.sample(&g, 0.1);
    assert!(wigner_transform(&u, 1).is_err());
    assert!(wigner_transform(&u, 3).is_err());
}
