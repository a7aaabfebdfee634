use hartree_core::profiles::Profile;
use hartree_core::scattering::*;
use hartree_core::spectral::{l2_distance, l2_norm, sigma_norm};
use hartree_core::{make_grid, Complex, Field64};

fn data(amplitude: f64) -> Field64 {
    let g = make_grid(2, 64, 8.0).unwrap();
    Profile::Gaussian { amplitude }.sample(&g, 1.0)
}

#[test]
fn lens_stage_agrees_with_direct_integration() {
    let psi = data(1.0);
    let mut job = ScatteringJob::new(1.5);
    job.dt = 0.02;
    let t0 = std::time::Instant::now();
    let lens = scattering_at_horizon(&psi, &job, 4.0).unwrap();
    let t_lens = t0.elapsed();
    job.inner_horizon = 10.0;
    let direct = scattering_at_horizon(&psi, &job, 4.0).unwrap();
    let d = l2_distance(&lens, &direct).unwrap();
    let effect = l2_distance(&direct, &psi).unwrap();
    eprintln!("lens {t_lens:?} total {:?} diff {d:e} effect {effect:e}", t0.elapsed());
    assert!(d < 1e-3 * effect);
}

#[test]
fn small_data_scattering_converges_and_preserves_mass() {
    let psi = data(0.1);
    assert!((sigma_norm(&psi) - 0.3).abs() < 1e-6);
    let job = ScatteringJob::new(1.5);
    let t0 = std::time::Instant::now();
    let res = scattering_compute(&psi, &job).unwrap();
    eprintln!("{:?} {:?} {:?}", res.log, res.horizon_used, t0.elapsed());
    assert!(res.converged && res.certificate <= 1e-3);
    assert!((l2_norm(&res.psi_plus) - l2_norm(&psi)).abs() < 1e-6);
    eprintln!("|S psi - psi| = {}", l2_distance(&res.psi_plus, &psi).unwrap());
}

fn data_3d(amplitude: f64) -> Field64 {
    let g = make_grid(3, 16, 5.0).unwrap();
    Profile::Gaussian { amplitude }.sample(&g, 1.0)
}

fn job_3d() -> ScatteringJob {
    let mut job = ScatteringJob::new(2.5);
    job.inner_horizon = 0.5;
    job.horizon = 4.0;
    job.dt = 0.1;
    job.tolerance = 3e-5;
    job.max_doublings = 3;
    job
}

#[test]
fn certificate_halves_and_radial_data_stay_radial_in_three_dimensions() {
    let psi = data_3d(0.1);
    let t0 = std::time::Instant::now();
    let res = scattering_compute(&psi, &job_3d()).unwrap();
    eprintln!("3d log {:?} {:?}", res.log, t0.elapsed());
    for w in res.log.windows(2) {
        assert!(w[1].1 <= 0.5 * w[0].1, "{:?}", res.log);
    }
    let u = &res.psi_plus;
    let g = u.grid;
    let n = g.points();
    let mut worst: f64 = 0.0;
    for i in 0..u.len() {
        let j = g.unravel(i);
        // Axis permutation and reflection about the grid centre (index n/2 is x = 0).
        let perm = g.ravel(&[j[1], j[2], j[0]]);
        let refl = g.ravel(&[(n - j[0]) % n, j[1], j[2]]);
        worst = worst.max((u.values[i] - u.values[perm]).norm()).max((u.values[i] - u.values[refl]).norm());
    }
    assert!(worst < 1e-8, "{worst}");
}

#[test]
fn gauge_equivariance_and_born_exponent() {
    let job = ScatteringJob::new(1.5);
    let psi = data(0.1);
    let theta = 0.7;
    let rot = Complex::from_polar(1.0, theta);
    let a = scattering_compute(&psi, &job).unwrap().psi_plus;
    let b = scattering_compute(&psi.scaled(rot), &job).unwrap().psi_plus;
    assert!(l2_distance(&b, &a.scaled(rot)).unwrap() < 1e-8);
    let lambdas = [0.025, 0.05, 0.1];
    let dev: Vec<f64> = lambdas
        .iter()
        .map(|&l| {
            let p = data(l);
            l2_distance(&scattering_compute(&p, &job).unwrap().psi_plus, &p).unwrap()
        })
        .collect();
    let slope = (dev[2] / dev[0]).ln() / (lambdas[2] / lambdas[0]).ln();
    eprintln!("born deviations {dev:?} slope {slope}");
    assert!((slope - 3.0).abs() < 0.3);
}

#[test]
fn zero_data_and_iterates() {
    let job = ScatteringJob::new(1.5);
    let zero = data(0.0);
    let res = scattering_compute(&zero, &job).unwrap();
    assert_eq!(l2_norm(&res.psi_plus), 0.0);
    assert!(s_iterate(&zero, 0, &job).is_err());
    let tiny = data(0.05);
    let one = s_iterate(&tiny, 1, &job).unwrap();
    let two = s_iterate(&tiny, 2, &job).unwrap();
    let d1 = l2_distance(&one, &tiny).unwrap();
    assert!(l2_distance(&two, &tiny).unwrap() <= 2.0 * d1 + 2.0 * job.tolerance);
    let mut big = ScatteringJob::new(1.2);
    big.small_data_norm = 0.3;
    assert!(scattering_compute(&data(1.0), &big).is_err());
    assert!(scattering_compute(&data(0.05), &ScatteringJob::new(2.5)).is_err());
}

#[test]
fn convergence_log_is_written_as_csv() {
    let res = scattering_compute(&data(0.1), &ScatteringJob::new(1.5)).unwrap();
    let mut buf = Vec::new();
    res.write_log(&mut buf).unwrap();
    let text = String::from_utf8(buf).unwrap();
    assert!(text.starts_with("T,certificate\n"));
    assert_eq!(text.lines().count(), res.log.len() + 1);
}
