//! Experiment drivers: single runs, epsilon sweeps, scattering, Wigner concentration and
//! classification. Sweep points run in a worker pool; results are collected in epsilon order
//! and written by the caller, so identical configurations give identical files.

use std::f64::consts::PI;
use std::path::Path;

use hartree_core::asymptotics::{focus_profile, maslov_extract, vprofile_apply, wkb_profile, wrap_angle, PhaseTable};
use hartree_core::fft::resample;
use hartree_core::io::{load_hfld1, save_hfld1, write_dat};
use hartree_core::observables::{energy, jh_norm, mass, JhKind};
use hartree_core::profiles::Profile;
use hartree_core::propagators::{mehler_apply, Integrator, SolverConfig};
use hartree_core::scattering::{scattering_compute, ScatteringOperator, ScatteringResult};
use hartree_core::spectral::{l2_distance, l2_norm, sigma_norm};
use hartree_core::wigner::{concentration_metric, wigner_transform};
use hartree_core::{make_grid, Field64, Grid64, HartreeError, Result};
use rayon::prelude::*;

use crate::classify::{classify_regime, Exponent, RegimeLabel};
use crate::config::{Comparator, ExperimentKind, ProfileSpec, RunConfig};
use crate::fit::{fit_slope, loglog_fit, MAX_REPORTED_RESIDUAL, MIN_POINTS};
use crate::output::save_csv;

/// Times closer than this to a focus `pi/2 + k pi` count as that focus.
const FOCUS_MATCH: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq)]
pub struct ErrorRow {
    pub epsilon: f64,
    pub time: f64,
    pub comparator: Comparator,
    pub l2: f64,
    pub j: f64,
    pub h: f64,
    pub rel_l2: f64,
    /// `ok`, or `failed: <reason>` with NaN errors.
    pub status: String,
}

impl ErrorRow {
    pub fn ok(&self) -> bool {
        self.status == "ok"
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConservationRow {
    pub epsilon: f64,
    pub time: f64,
    pub mass: f64,
    pub mass_drift: f64,
    pub energy: f64,
    pub energy_rel_drift: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MaslovRow {
    pub epsilon: f64,
    pub time: f64,
    pub phase: f64,
    pub expected: f64,
    pub error: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SlopeRow {
    pub comparator: Comparator,
    /// `None` for the supremum over the requested times.
    pub time: Option<f64>,
    pub measure: &'static str,
    pub slope: f64,
    pub residual: f64,
    pub points: usize,
    pub reported: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WignerRow {
    pub epsilon: f64,
    pub time: f64,
    pub band: f64,
    pub fraction: f64,
    pub status: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BornRow {
    pub amplitude: f64,
    pub sigma_norm: f64,
    pub deviation: f64,
    pub certificate: f64,
}

/// Everything a single run or a sweep produces.
#[derive(Debug, Clone, Default)]
pub struct SweepResult {
    pub epsilons: Vec<f64>,
    pub errors: Vec<ErrorRow>,
    pub conservation: Vec<ConservationRow>,
    pub maslov: Vec<MaslovRow>,
    pub slopes: Vec<SlopeRow>,
    /// Epsilons whose run failed as a whole, with the reason.
    pub failures: Vec<(f64, String)>,
    /// Final snapshots per successful epsilon, in `times` order.
    pub snapshots: Vec<(f64, Vec<Field64>)>,
}

impl SweepResult {
    /// Rows for one comparator at one time, in epsilon order.
    pub fn rows(&self, comparator: Comparator, time: f64) -> Vec<&ErrorRow> {
        self.errors.iter().filter(|r| r.comparator == comparator && r.time == time).collect()
    }

    pub fn slope(&self, comparator: Comparator, time: Option<f64>, measure: &str) -> Option<&SlopeRow> {
        self.slopes.iter().find(|s| s.comparator == comparator && s.time == time && s.measure == measure)
    }
}

pub struct ScatterOutcome {
    pub psi_minus: Field64,
    pub result: ScatteringResult,
    pub born: Vec<BornRow>,
    /// Fitted exponent of the deviation against the amplitude, when there are two or more.
    pub born_exponent: Option<f64>,
}

/// Result of [`run_experiment`].
pub enum Outcome {
    Sweep(SweepResult),
    Scatter(ScatterOutcome),
    Wigner(Vec<WignerRow>),
    Classify(RegimeLabel),
}

/// Grid used for `eps`.
pub fn grid_for(cfg: &RunConfig, eps: f64) -> Result<Grid64> {
    make_grid(cfg.grid.dim, cfg.grid.points_for(eps), cfg.grid.half_extent)
}

/// Initial datum on the grid for `eps`.
pub fn initial_datum(cfg: &RunConfig, eps: f64) -> Result<Field64> {
    match &cfg.profile {
        ProfileSpec::Analytic(p) => Ok(p.sample(&grid_for(cfg, eps)?, eps)),
        ProfileSpec::File(path) => {
            let mut f: Field64 = load_hfld1(path)?;
            f.epsilon = eps;
            f.time = 0.0;
            Ok(f)
        }
    }
}

fn solver_config(cfg: &RunConfig, eps: f64) -> SolverConfig<f64> {
    let mut s = match &cfg.hartree {
        Some(h) => {
            let mut s = SolverConfig::hartree(eps, cfg.dt, h.alpha.value(), h.gamma.value());
            s.kernel = h.kernel;
            s
        }
        None => SolverConfig::linear(eps, cfg.dt),
    };
    if let Some(l) = &cfg.local {
        s = s.with_local(l.beta.value(), l.sigma.value());
    }
    s
}

/// `Some(k)` when `t = pi/2 + k pi` for an integer `k >= 0`.
pub fn focus_index(t: f64) -> Option<i64> {
    let k = ((t - PI / 2.0) / PI).round();
    (k >= 0.0 && (t - PI / 2.0 - k * PI).abs() <= FOCUS_MATCH).then_some(k as i64)
}

/// Number of foci strictly before `t`.
fn foci_before(t: f64) -> usize {
    if t <= PI / 2.0 + FOCUS_MATCH {
        0
    } else {
        ((t - PI / 2.0 - FOCUS_MATCH) / PI).floor() as usize + 1
    }
}

/// Profiles `phi_0 = f`, `phi_{j+1} = F S F^{-1} phi_j`, computed once on the profile's own
/// `eps`-free grid and resampled per epsilon.
struct ProfileChain {
    steps: Vec<Field64>,
}

impl ProfileChain {
    fn build(cfg: &RunConfig, count: usize) -> Result<Self> {
        let spec = cfg
            .scatter
            .as_ref()
            .ok_or_else(|| HartreeError::InvalidParameter("the scattered comparator needs scatter.* settings".into()))?;
        let base = match &cfg.profile {
            ProfileSpec::Analytic(p) => p.sample(&make_grid(cfg.grid.dim, spec.points, spec.half_extent)?, 1.0),
            ProfileSpec::File(path) => load_hfld1(path)?,
        };
        let op = ScatteringOperator::new(spec.job.clone());
        let mut steps = vec![base];
        for _ in 0..count {
            let next = op.conjugated_apply(steps.last().unwrap())?;
            steps.push(next);
        }
        Ok(ProfileChain { steps })
    }

    fn on(&self, j: usize, grid: &Grid64, eps: f64) -> Result<Field64> {
        let mut out = resample(&self.steps[j], grid)?;
        out.epsilon = eps;
        out.time = 0.0;
        Ok(out)
    }
}

struct Shared {
    chain: Option<ProfileChain>,
}

fn prediction(
    shared: &Shared,
    f: &Field64,
    table: &Option<PhaseTable<f64>>,
    comparator: Comparator,
    t: f64,
) -> Result<Field64> {
    let eps = f.epsilon;
    match comparator {
        Comparator::Linear => mehler_apply(f, t),
        Comparator::Wkb => {
            let tab = table
                .as_ref()
                .ok_or_else(|| HartreeError::InvalidParameter("the wkb comparator needs a Hartree term".into()))?;
            wkb_profile(f, tab, t)
        }
        Comparator::Wkb0 => vprofile_apply(f, t),
        Comparator::Focus => {
            let k = focus_index(t).ok_or_else(|| HartreeError::InvalidParameter(format!("t = {t} is not a focus")))?;
            focus_profile(f, table.as_ref(), None, k, eps)
        }
        Comparator::Scattered | Comparator::Identity => {
            let m = foci_before(t);
            let phi = match (comparator, &shared.chain) {
                (Comparator::Scattered, Some(chain)) => {
                    let j = focus_index(t).map_or(m, |k| k as usize);
                    chain.on(j, &f.grid, eps)?
                }
                (Comparator::Scattered, None) => unreachable!("chain is built when requested"),
                _ => f.clone(),
            };
            match focus_index(t) {
                Some(k) => focus_profile(&phi, None, None, k, eps),
                None => vprofile_apply(&phi, t),
            }
        }
        Comparator::Maslov => Err(HartreeError::InvalidParameter("maslov has no field prediction".into())),
    }
}

fn table_for(cfg: &RunConfig, f: &Field64) -> Result<Option<PhaseTable<f64>>> {
    match &cfg.hartree {
        // The phase g enters at leading order only when alpha = 1; it is defined for gamma < 1.
        Some(h) if h.alpha.equals(&Exponent::from(1)) && h.gamma.value() < 1.0 => {
            Ok(Some(PhaseTable::new(f, h.gamma.value(), h.kernel)?))
        }
        Some(h) => Ok(Some(PhaseTable::zero(f, h.gamma.value()))),
        None => Ok(None),
    }
}

struct EpsOutcome {
    errors: Vec<ErrorRow>,
    conservation: Vec<ConservationRow>,
    maslov: Vec<MaslovRow>,
    snapshots: Vec<Field64>,
}

fn failed_row(epsilon: f64, time: f64, comparator: Comparator, why: &str) -> ErrorRow {
    ErrorRow {
        epsilon,
        time,
        comparator,
        l2: f64::NAN,
        j: f64::NAN,
        h: f64::NAN,
        rel_l2: f64::NAN,
        status: format!("failed: {}", why.replace(',', ";").replace('\n', " ")),
    }
}

fn run_epsilon(cfg: &RunConfig, shared: &Shared, eps: f64) -> Result<EpsOutcome> {
    let f = initial_datum(cfg, eps)?;
    let scfg = solver_config(cfg, eps);
    let mut integ = Integrator::new(&f.grid, &scfg)?;
    integ.resolution_tolerance = cfg.resolution_tolerance;
    let mut times = cfg.times.clone();
    times.sort_by(f64::total_cmp);
    times.dedup();
    let t_end = times.last().copied().unwrap_or(0.0);
    let snaps = integ.evolve(&f, t_end, &times)?;
    let m0 = mass(&f);
    let e0 = energy(&f, &integ)?;
    let table = table_for(cfg, &f)?;
    let n = f.grid.dim() as f64;
    let mut out = EpsOutcome { errors: Vec::new(), conservation: Vec::new(), maslov: Vec::new(), snapshots: Vec::new() };
    for (&t, u) in times.iter().zip(&snaps) {
        let e = energy(u, &integ)?;
        out.conservation.push(ConservationRow {
            epsilon: eps,
            time: t,
            mass: mass(u),
            mass_drift: (mass(u) - m0).abs(),
            energy: e,
            energy_rel_drift: ((e - e0) / e0).abs(),
        });
        for &c in &cfg.comparators {
            if c == Comparator::Maslov {
                let k = (t / PI).round();
                if k >= 1.0 && (t - k * PI).abs() <= FOCUS_MATCH {
                    match maslov_extract(u, &f) {
                        Ok(phase) => {
                            let expected = wrap_angle(-n * k * PI / 2.0);
                            out.maslov.push(MaslovRow {
                                epsilon: eps,
                                time: t,
                                phase,
                                expected,
                                error: wrap_angle(phase - expected).abs(),
                            });
                        }
                        Err(err) => out.errors.push(failed_row(eps, t, c, &err.to_string())),
                    }
                }
                continue;
            }
            match prediction(shared, &f, &table, c, t) {
                Ok(v) => {
                    let d = u.sub(&v)?;
                    let l2 = l2_norm(&d);
                    out.errors.push(ErrorRow {
                        epsilon: eps,
                        time: t,
                        comparator: c,
                        l2,
                        j: jh_norm(&d, t, JhKind::J),
                        h: jh_norm(&d, t, JhKind::H),
                        rel_l2: l2 / l2_norm(&v),
                        status: "ok".into(),
                    });
                }
                Err(err) => out.errors.push(failed_row(eps, t, c, &err.to_string())),
            }
        }
    }
    out.snapshots = snaps;
    Ok(out)
}

const MEASURES: [&str; 4] = ["l2", "rel_l2", "j", "h"];

fn measure(r: &ErrorRow, m: &str) -> f64 {
    match m {
        "l2" => r.l2,
        "rel_l2" => r.rel_l2,
        "j" => r.j,
        _ => r.h,
    }
}

fn fit_rows(comparator: Comparator, time: Option<f64>, eps: &[f64], rows: &[Vec<f64>]) -> Vec<SlopeRow> {
    let mut out = Vec::new();
    for (mi, m) in MEASURES.iter().enumerate() {
        let pairs: Vec<(f64, f64)> =
            eps.iter().zip(rows).map(|(&e, r)| (e, r[mi])).filter(|(_, v)| *v > 0.0 && v.is_finite()).collect();
        if pairs.len() < MIN_POINTS {
            continue;
        }
        let (xs, ys): (Vec<f64>, Vec<f64>) = pairs.into_iter().unzip();
        if let Ok((slope, residual)) = fit_slope(&xs, &ys) {
            out.push(SlopeRow {
                comparator,
                time,
                measure: m,
                slope,
                residual,
                points: xs.len(),
                reported: residual <= MAX_REPORTED_RESIDUAL,
            });
        }
    }
    out
}

/// Slopes per comparator and time, and of the supremum over the requested times.
fn slopes(cfg: &RunConfig, result: &SweepResult) -> Vec<SlopeRow> {
    let mut out = Vec::new();
    let mut times = cfg.times.clone();
    times.sort_by(f64::total_cmp);
    times.dedup();
    for &c in &cfg.comparators {
        if c == Comparator::Maslov {
            continue;
        }
        let mut sup: Vec<(f64, Vec<f64>)> = Vec::new();
        for &t in &times {
            let rows = result.rows(c, t);
            let ok: Vec<&&ErrorRow> = rows.iter().filter(|r| r.ok()).collect();
            let eps: Vec<f64> = ok.iter().map(|r| r.epsilon).collect();
            let vals: Vec<Vec<f64>> = ok.iter().map(|r| MEASURES.iter().map(|m| measure(r, m)).collect()).collect();
            out.extend(fit_rows(c, Some(t), &eps, &vals));
            for (e, v) in eps.iter().zip(vals) {
                match sup.iter_mut().find(|(x, _)| x == e) {
                    Some((_, s)) => s.iter_mut().zip(&v).for_each(|(a, b)| *a = a.max(*b)),
                    None => sup.push((*e, v)),
                }
            }
        }
        // The supremum only uses epsilons with every time available.
        let complete: Vec<(f64, Vec<f64>)> = sup
            .into_iter()
            .filter(|(e, _)| times.iter().all(|&t| result.rows(c, t).iter().any(|r| r.epsilon == *e && r.ok())))
            .collect();
        if times.len() > 1 {
            let (eps, vals): (Vec<f64>, Vec<Vec<f64>>) = complete.into_iter().unzip();
            out.extend(fit_rows(c, None, &eps, &vals));
        }
    }
    out
}

fn build_shared(cfg: &RunConfig) -> Result<Shared> {
    let chain = if cfg.comparators.contains(&Comparator::Scattered) {
        let count = cfg.times.iter().map(|&t| focus_index(t).map_or(foci_before(t), |k| k as usize)).max().unwrap_or(0);
        Some(ProfileChain::build(cfg, count)?)
    } else {
        None
    };
    Ok(Shared { chain })
}

fn pool(threads: usize) -> Result<rayon::ThreadPool> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build()
        .map_err(|e| HartreeError::InvalidParameter(format!("thread pool: {e}")))
}

/// Runs every epsilon of `cfg` (one for a single run) with per-epsilon failure isolation.
pub fn run_sweep(cfg: &RunConfig, threads: usize) -> Result<SweepResult> {
    let shared = build_shared(cfg)?;
    let outcomes: Vec<Result<EpsOutcome>> =
        pool(threads)?.install(|| cfg.epsilons.par_iter().map(|&e| run_epsilon(cfg, &shared, e)).collect());
    let mut result = SweepResult { epsilons: cfg.epsilons.clone(), ..Default::default() };
    for (&eps, o) in cfg.epsilons.iter().zip(outcomes) {
        match o {
            Ok(o) => {
                result.errors.extend(o.errors);
                result.conservation.extend(o.conservation);
                result.maslov.extend(o.maslov);
                result.snapshots.push((eps, o.snapshots));
            }
            Err(err) => {
                let why = err.to_string();
                for &t in &cfg.times {
                    for &c in &cfg.comparators {
                        result.errors.push(failed_row(eps, t, c, &why));
                    }
                }
                result.failures.push((eps, why));
            }
        }
    }
    result.slopes = slopes(cfg, &result);
    Ok(result)
}

/// `psi_-` for a scattering run: the configured profile at semiclassical parameter 1.
pub fn scattering_datum(cfg: &RunConfig, amplitude_scale: f64) -> Result<Field64> {
    let spec = cfg.scatter.as_ref().ok_or_else(|| HartreeError::InvalidParameter("missing scatter.* settings".into()))?;
    let f = match &cfg.profile {
        ProfileSpec::Analytic(p) => p.sample(&make_grid(cfg.grid.dim, spec.points, spec.half_extent)?, 1.0),
        ProfileSpec::File(path) => load_hfld1(path)?,
    };
    Ok(f.scaled(num_complex::Complex::new(amplitude_scale, 0.0)))
}

/// Scattering of the configured datum plus the small-data amplitude family.
pub fn run_scatter(cfg: &RunConfig, threads: usize) -> Result<ScatterOutcome> {
    let spec = cfg.scatter.as_ref().ok_or_else(|| HartreeError::InvalidParameter("missing scatter.* settings".into()))?;
    let psi_minus = scattering_datum(cfg, 1.0)?;
    let result = scattering_compute(&psi_minus, &spec.job)?;
    let born: Vec<Result<BornRow>> = pool(threads)?.install(|| {
        spec.amplitudes
            .par_iter()
            .map(|&a| {
                // Amplitudes are absolute: the profile is rescaled to amplitude a.
                let base_amp = match &cfg.profile {
                    ProfileSpec::Analytic(p) => profile_amplitude(p),
                    ProfileSpec::File(_) => 1.0,
                };
                let psi = scattering_datum(cfg, a / base_amp)?;
                let r = scattering_compute(&psi, &spec.job)?;
                Ok(BornRow {
                    amplitude: a,
                    sigma_norm: sigma_norm(&psi),
                    deviation: l2_distance(&r.psi_plus, &psi)?,
                    certificate: r.certificate,
                })
            })
            .collect()
    });
    let born: Vec<BornRow> = born.into_iter().collect::<Result<_>>()?;
    let born_exponent = if born.len() >= 2 {
        let a: Vec<f64> = born.iter().map(|b| b.amplitude).collect();
        let d: Vec<f64> = born.iter().map(|b| b.deviation).collect();
        Some(loglog_fit(&a, &d)?.0)
    } else {
        None
    };
    Ok(ScatterOutcome { psi_minus, result, born, born_exponent })
}

fn profile_amplitude(p: &Profile) -> f64 {
    match p {
        Profile::Gaussian { amplitude }
        | Profile::Anisotropic { amplitude, .. }
        | Profile::Modulated { amplitude, .. }
        | Profile::Exponential { amplitude } => *amplitude,
    }
}

/// WKB state `V(t) f` on the grid for `eps`; sampled from the formula for analytic profiles
/// before the first focus.
pub fn wkb_state(cfg: &RunConfig, eps: f64, t: f64) -> Result<Field64> {
    match &cfg.profile {
        ProfileSpec::Analytic(p) if t.abs() < PI / 2.0 => p.sample_wkb(&grid_for(cfg, eps)?, eps, t),
        _ => vprofile_apply(&initial_datum(cfg, eps)?, t),
    }
}

/// Fraction of `|W|` near the Lagrangian line for each epsilon, in epsilon order.
pub fn run_wigner(cfg: &RunConfig, threads: usize, slices: Option<&Path>) -> Result<Vec<WignerRow>> {
    let w = &cfg.wigner;
    let rows: Vec<WignerRow> = pool(threads)?.install(|| {
        cfg.epsilons
            .par_iter()
            .enumerate()
            .map(|(i, &eps)| {
                let band = w.band * eps.sqrt();
                let run = || -> Result<f64> {
                    let u = wkb_state(cfg, eps, w.time)?;
                    let slice = wigner_transform(&u, w.coarsen)?;
                    if let Some(dir) = slices {
                        let file = std::fs::File::create(dir.join(format!("wigner_{i}.csv")))?;
                        slice.write_csv(std::io::BufWriter::new(file))?;
                    }
                    concentration_metric(&slice, w.time, band)
                };
                match run() {
                    Ok(fraction) => WignerRow { epsilon: eps, time: w.time, band, fraction, status: "ok".into() },
                    Err(e) => WignerRow {
                        epsilon: eps,
                        time: w.time,
                        band,
                        fraction: f64::NAN,
                        status: format!("failed: {}", e.to_string().replace(',', ";")),
                    },
                }
            })
            .collect()
    });
    Ok(rows)
}

/// Regime of the configured exponents.
pub fn run_classify(cfg: &RunConfig) -> Result<RegimeLabel> {
    let h = cfg.hartree.as_ref().ok_or_else(|| HartreeError::InvalidParameter("classify needs hartree.alpha and hartree.gamma".into()))?;
    let (beta, sigma) = match &cfg.local {
        Some(l) => (Some(l.beta), Some(l.sigma)),
        None => (None, None),
    };
    classify_regime(h.alpha, h.gamma, beta, sigma, cfg.grid.dim)
}

/// Runs the configured experiment and writes its artifacts to `out`.
pub fn run_experiment(cfg: &RunConfig, out: &Path, threads: usize) -> Result<Outcome> {
    std::fs::create_dir_all(out)?;
    match cfg.kind {
        ExperimentKind::Single | ExperimentKind::Sweep => {
            let r = run_sweep(cfg, threads)?;
            save_csv(&r.errors, &out.join("errors.csv"))?;
            save_csv(&r.conservation, &out.join("conservation.csv"))?;
            if cfg.epsilons.len() > 1 {
                save_csv(&r.slopes, &out.join("slopes.csv"))?;
            }
            if cfg.comparators.contains(&Comparator::Maslov) {
                save_csv(&r.maslov, &out.join("maslov.csv"))?;
            }
            let mut times = cfg.times.clone();
            times.sort_by(f64::total_cmp);
            times.dedup();
            for (i, (_, snaps)) in r.snapshots.iter().enumerate() {
                for (j, u) in snaps.iter().enumerate() {
                    if cfg.write_snapshots {
                        save_hfld1(u, out.join(format!("u_e{i}_t{j}.hfld")))?;
                    }
                    if cfg.write_dat {
                        let file = std::fs::File::create(out.join(format!("u_e{i}_t{j}.dat")))?;
                        write_dat(u, std::io::BufWriter::new(file))?;
                    }
                }
            }
            Ok(Outcome::Sweep(r))
        }
        ExperimentKind::Scatter => {
            let s = run_scatter(cfg, threads)?;
            save_hfld1(&s.result.psi_plus, out.join("psi_plus.hfld"))?;
            let file = std::fs::File::create(out.join("scattering_log.csv"))?;
            s.result.write_log(std::io::BufWriter::new(file))?;
            if !s.born.is_empty() {
                save_csv(&s.born, &out.join("born.csv"))?;
            }
            let spec = cfg.scatter.as_ref().expect("checked by run_scatter");
            let summary = format!(
                "gamma,small_data_norm,sigma_norm,norm_minus,norm_plus,certificate,horizon_used,converged,born_exponent\n{},{},{},{},{},{},{},{},{}\n",
                hartree_core::io::fmt_g17(spec.job.gamma),
                hartree_core::io::fmt_g17(spec.job.small_data_norm),
                hartree_core::io::fmt_g17(sigma_norm(&s.psi_minus)),
                hartree_core::io::fmt_g17(l2_norm(&s.psi_minus)),
                hartree_core::io::fmt_g17(l2_norm(&s.result.psi_plus)),
                hartree_core::io::fmt_g17(s.result.certificate),
                hartree_core::io::fmt_g17(s.result.horizon_used),
                s.result.converged,
                s.born_exponent.map_or("nan".into(), hartree_core::io::fmt_g17),
            );
            std::fs::write(out.join("scatter.csv"), summary)?;
            Ok(Outcome::Scatter(s))
        }
        ExperimentKind::Wigner => {
            let rows = run_wigner(cfg, threads, cfg.write_snapshots.then_some(out))?;
            save_csv(&rows, &out.join("wigner.csv"))?;
            Ok(Outcome::Wigner(rows))
        }
        ExperimentKind::Classify => {
            let label = run_classify(cfg)?;
            std::fs::write(out.join("classify.txt"), format!("{label}\n"))?;
            Ok(Outcome::Classify(label))
        }
    }
}
