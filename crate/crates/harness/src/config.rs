//! Run configuration: flat `key = value` lines with `#` comments and namespaced keys.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use hartree_core::kernels::{KernelKind, ZeroMode};
use hartree_core::profiles::Profile;
use hartree_core::scattering::ScatteringJob;
use hartree_core::{HartreeError, Result};

use crate::classify::Exponent;

/// Every key the parser accepts.
pub const KNOWN_KEYS: &[&str] = &[
    "experiment.kind",
    "experiment.comparators",
    "experiment.times",
    "grid.dim",
    "grid.points",
    "grid.half_extent",
    "grid.dx_over_epsilon",
    "solver.epsilon",
    "solver.dt",
    "solver.resolution_tolerance",
    "sweep.epsilons",
    "hartree.alpha",
    "hartree.gamma",
    "hartree.kernel",
    "xalpha.beta",
    "xalpha.sigma",
    "profile.name",
    "profile.amplitude",
    "profile.coefficient",
    "profile.widths",
    "profile.path",
    "scatter.gamma",
    "scatter.horizon",
    "scatter.dt",
    "scatter.tolerance",
    "scatter.small_data_norm",
    "scatter.max_doublings",
    "scatter.max_points",
    "scatter.inner_horizon",
    "scatter.points",
    "scatter.half_extent",
    "scatter.amplitudes",
    "wigner.time",
    "wigner.coarsen",
    "wigner.band",
    "output.snapshots",
    "output.dat",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExperimentKind {
    Single,
    Sweep,
    Scatter,
    Wigner,
    Classify,
}

impl ExperimentKind {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "single" => ExperimentKind::Single,
            "sweep" => ExperimentKind::Sweep,
            "scatter" => ExperimentKind::Scatter,
            "wigner" => ExperimentKind::Wigner,
            "classify" => ExperimentKind::Classify,
            _ => return Err(HartreeError::Format(format!("unknown experiment kind '{s}'"))),
        })
    }
}

/// Reference solution an evolved state is compared with.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Comparator {
    /// Exact linear flow of the initial datum.
    Linear,
    /// WKB profile with the Hartree phase `g`.
    Wkb,
    /// WKB profile with `g = 0`.
    Wkb0,
    /// Focus prediction with the phase `g(pi/2)` when the WKB stage is nonlinear.
    Focus,
    /// Profile prediction through the computed scattering operator at every crossed focus.
    Scattered,
    /// As `Scattered` with `S` replaced by the identity.
    Identity,
    /// Phase of the state against the initial datum (meaningful at `t = k pi`).
    Maslov,
}

impl Comparator {
    pub fn parse(s: &str) -> Result<Self> {
        Ok(match s {
            "linear" => Comparator::Linear,
            "wkb" => Comparator::Wkb,
            "wkb0" => Comparator::Wkb0,
            "focus" => Comparator::Focus,
            "scattered" => Comparator::Scattered,
            "identity" => Comparator::Identity,
            "maslov" => Comparator::Maslov,
            _ => return Err(HartreeError::Format(format!("unknown comparator '{s}'"))),
        })
    }

    pub fn name(&self) -> &'static str {
        match self {
            Comparator::Linear => "linear",
            Comparator::Wkb => "wkb",
            Comparator::Wkb0 => "wkb0",
            Comparator::Focus => "focus",
            Comparator::Scattered => "scattered",
            Comparator::Identity => "identity",
            Comparator::Maslov => "maslov",
        }
    }
}

/// Grid geometry. Without `points` the count is chosen per `eps` as the smallest power of
/// two with `dx <= dx_over_epsilon * eps`.
#[derive(Debug, Clone, PartialEq)]
pub struct GridSpec {
    pub dim: usize,
    pub points: Option<usize>,
    pub half_extent: f64,
    pub dx_over_epsilon: f64,
}

impl GridSpec {
    pub fn points_for(&self, epsilon: f64) -> usize {
        self.points.unwrap_or_else(|| {
            let n = (2.0 * self.half_extent / (self.dx_over_epsilon * epsilon)).ceil() as usize;
            n.next_power_of_two().max(16)
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ProfileSpec {
    Analytic(Profile),
    File(PathBuf),
}

#[derive(Debug, Clone, PartialEq)]
pub struct HartreeSpec {
    pub alpha: Exponent,
    pub gamma: Exponent,
    pub kernel: KernelKind,
}

#[derive(Debug, Clone, PartialEq)]
pub struct LocalSpec {
    pub beta: Exponent,
    pub sigma: Exponent,
}

#[derive(Debug, Clone, PartialEq)]
pub struct WignerSpec {
    pub time: f64,
    pub coarsen: usize,
    /// Band half-width in units of `eps^{1/2}`.
    pub band: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ScatterSpec {
    pub job: ScatteringJob,
    /// Grid for `psi_-` (semiclassical parameter 1).
    pub points: usize,
    pub half_extent: f64,
    /// Amplitude family for the small-data exponent.
    pub amplitudes: Vec<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunConfig {
    pub kind: ExperimentKind,
    pub comparators: Vec<Comparator>,
    pub times: Vec<f64>,
    pub grid: GridSpec,
    pub epsilons: Vec<f64>,
    pub dt: f64,
    pub resolution_tolerance: Option<f64>,
    pub hartree: Option<HartreeSpec>,
    pub local: Option<LocalSpec>,
    pub profile: ProfileSpec,
    pub scatter: Option<ScatterSpec>,
    pub wigner: WignerSpec,
    pub write_snapshots: bool,
    pub write_dat: bool,
}

/// Parses a real: a float, `p/q`, or a multiple of `pi` such as `pi`, `3pi/4`, `0.5*pi`, `-pi/2`.
pub fn parse_real(s: &str) -> Result<f64> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let bad = || HartreeError::Format(format!("cannot parse number '{s}'"));
    let num = |x: &str| -> Result<f64> {
        match x {
            "" | "+" => Ok(1.0),
            "-" => Ok(-1.0),
            _ => x.parse::<f64>().map_err(|_| bad()),
        }
    };
    let (head, den) = match t.rsplit_once('/') {
        Some((h, d)) => (h.to_string(), d.parse::<f64>().map_err(|_| bad())?),
        None => (t.clone(), 1.0),
    };
    let v = if let Some(coef) = head.strip_suffix("pi") {
        num(coef.strip_suffix('*').unwrap_or(coef))? * std::f64::consts::PI
    } else {
        head.parse::<f64>().map_err(|_| bad())?
    };
    let out = v / den;
    if out.is_finite() {
        Ok(out)
    } else {
        Err(bad())
    }
}

fn parse_list<T>(s: &str, f: impl Fn(&str) -> Result<T>) -> Result<Vec<T>> {
    s.split(',').map(str::trim).filter(|x| !x.is_empty()).map(f).collect()
}

fn parse_bool(s: &str) -> Result<bool> {
    match s {
        "true" | "yes" | "1" => Ok(true),
        "false" | "no" | "0" => Ok(false),
        _ => Err(HartreeError::Format(format!("expected a boolean, got '{s}'"))),
    }
}

fn parse_kernel(s: &str) -> Result<KernelKind> {
    Ok(match s {
        "isolated" => KernelKind::Isolated,
        "continuum" => KernelKind::Continuum(ZeroMode::Zero),
        "continuum_average" => KernelKind::Continuum(ZeroMode::CellAverage),
        _ => return Err(HartreeError::Format(format!("unknown kernel '{s}'"))),
    })
}

/// Raw `key -> (value, line)` map with syntax and key checks.
pub fn parse_pairs(text: &str) -> Result<BTreeMap<String, (String, usize)>> {
    let mut out = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line_no = i + 1;
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| HartreeError::Format(format!("line {line_no}: expected 'key = value'")))?;
        let (k, v) = (k.trim(), v.trim());
        if !KNOWN_KEYS.contains(&k) {
            return Err(HartreeError::Format(format!("line {line_no}: unknown key '{k}'")));
        }
        if v.is_empty() {
            return Err(HartreeError::Format(format!("line {line_no}: key '{k}' has no value")));
        }
        if let Some((_, first)) = out.insert(k.to_string(), (v.to_string(), line_no)) {
            return Err(HartreeError::Format(format!("line {line_no}: key '{k}' repeats line {first}")));
        }
    }
    Ok(out)
}

struct Reader {
    pairs: BTreeMap<String, (String, usize)>,
}

impl Reader {
    fn get<T>(&self, key: &str, f: impl Fn(&str) -> Result<T>) -> Result<Option<T>> {
        match self.pairs.get(key) {
            None => Ok(None),
            Some((v, line)) => f(v).map(Some).map_err(|e| HartreeError::Format(format!("line {line}: {key}: {e}"))),
        }
    }

    fn or<T>(&self, key: &str, default: T, f: impl Fn(&str) -> Result<T>) -> Result<T> {
        Ok(self.get(key, f)?.unwrap_or(default))
    }

    fn has_prefix(&self, prefix: &str) -> bool {
        self.pairs.keys().any(|k| k.starts_with(prefix))
    }
}

fn uint(s: &str) -> Result<usize> {
    s.parse().map_err(|_| HartreeError::Format(format!("expected a non-negative integer, got '{s}'")))
}

impl RunConfig {
    /// Parses configuration text; `kind` overrides `experiment.kind` when given.
    pub fn parse(text: &str, kind: Option<ExperimentKind>) -> Result<Self> {
        let r = Reader { pairs: parse_pairs(text)? };
        let kind = match (kind, r.get("experiment.kind", ExperimentKind::parse)?) {
            (Some(k), _) | (None, Some(k)) => k,
            (None, None) => return Err(HartreeError::Format("experiment.kind is required".into())),
        };
        let dim = r.or("grid.dim", 2, uint)?;
        let grid = GridSpec {
            dim,
            points: r.get("grid.points", uint)?,
            half_extent: r.or("grid.half_extent", 5.0, parse_real)?,
            dx_over_epsilon: r.or("grid.dx_over_epsilon", 0.625, parse_real)?,
        };
        let epsilons = match (r.get("sweep.epsilons", |s| parse_list(s, parse_real))?, r.get("solver.epsilon", parse_real)?) {
            (Some(l), _) => l,
            (None, Some(e)) => vec![e],
            (None, None) => vec![1.0 / 8.0, 1.0 / 16.0, 1.0 / 32.0, 1.0 / 64.0],
        };
        if epsilons.iter().any(|e| !(*e > 0.0)) {
            return Err(HartreeError::Format("epsilons must be positive".into()));
        }
        let hartree = if r.has_prefix("hartree.") {
            let alpha = r.get("hartree.alpha", |s| s.parse::<Exponent>())?;
            let gamma = r.get("hartree.gamma", |s| s.parse::<Exponent>())?;
            match (alpha, gamma) {
                (Some(alpha), Some(gamma)) => Some(HartreeSpec {
                    alpha,
                    gamma,
                    kernel: r.or("hartree.kernel", KernelKind::Isolated, parse_kernel)?,
                }),
                _ => return Err(HartreeError::Format("hartree.alpha and hartree.gamma must be given together".into())),
            }
        } else {
            None
        };
        let local = match (r.get("xalpha.beta", |s| s.parse::<Exponent>())?, r.get("xalpha.sigma", |s| s.parse::<Exponent>())?) {
            (Some(beta), Some(sigma)) => Some(LocalSpec { beta, sigma }),
            (None, None) => None,
            _ => return Err(HartreeError::Format("xalpha.beta and xalpha.sigma must be given together".into())),
        };
        let amplitude = r.or("profile.amplitude", 1.0, parse_real)?;
        let profile = match r.get("profile.path", |s| Ok(PathBuf::from(s)))? {
            Some(p) => ProfileSpec::File(p),
            None => {
                let name = r.or("profile.name", "gaussian".to_string(), |s| Ok(s.to_string()))?;
                let widths = r.or("profile.widths", vec![1.0; dim], |s| parse_list(s, parse_real))?;
                let coefficient = r.or("profile.coefficient", 0.5, parse_real)?;
                ProfileSpec::Analytic(Profile::from_name(&name, amplitude, &widths, coefficient)?)
            }
        };
        let scatter = if r.has_prefix("scatter.") || kind == ExperimentKind::Scatter {
            let gamma = match r.get("scatter.gamma", parse_real)? {
                Some(g) => g,
                None => hartree
                    .as_ref()
                    .map(|h| h.gamma.value())
                    .ok_or_else(|| HartreeError::Format("scatter.gamma (or hartree.gamma) is required".into()))?,
            };
            let mut job = ScatteringJob::new(gamma);
            job.horizon = r.or("scatter.horizon", job.horizon, parse_real)?;
            job.dt = r.or("scatter.dt", job.dt, parse_real)?;
            job.tolerance = r.or("scatter.tolerance", job.tolerance, parse_real)?;
            job.small_data_norm = r.or("scatter.small_data_norm", job.small_data_norm, parse_real)?;
            job.max_doublings = r.or("scatter.max_doublings", job.max_doublings, uint)?;
            job.max_points = r.or("scatter.max_points", job.max_points, uint)?;
            job.inner_horizon = r.or("scatter.inner_horizon", job.inner_horizon, parse_real)?;
            if let Some(h) = &hartree {
                job.kernel = h.kernel;
            }
            Some(ScatterSpec {
                job,
                points: r.or("scatter.points", 64, uint)?,
                half_extent: r.or("scatter.half_extent", 8.0, parse_real)?,
                amplitudes: r.or("scatter.amplitudes", Vec::new(), |s| parse_list(s, parse_real))?,
            })
        } else {
            None
        };
        let wigner = WignerSpec {
            time: r.or("wigner.time", std::f64::consts::FRAC_PI_4, parse_real)?,
            coarsen: r.or("wigner.coarsen", 4, uint)?,
            band: r.or("wigner.band", 3.0, parse_real)?,
        };
        let cfg = RunConfig {
            kind,
            comparators: r.or("experiment.comparators", Vec::new(), |s| parse_list(s, Comparator::parse))?,
            times: r.or("experiment.times", vec![std::f64::consts::FRAC_PI_4], |s| parse_list(s, parse_real))?,
            grid,
            epsilons,
            dt: r.or("solver.dt", 1e-3, parse_real)?,
            resolution_tolerance: r.get("solver.resolution_tolerance", parse_real)?,
            hartree,
            local,
            profile,
            scatter,
            wigner,
            write_snapshots: r.or("output.snapshots", false, parse_bool)?,
            write_dat: r.or("output.dat", false, parse_bool)?,
        };
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path, kind: Option<ExperimentKind>) -> Result<Self> {
        let text = std::fs::read_to_string(path)?;
        Self::parse(&text, kind)
    }

    fn validate(&self) -> Result<()> {
        if !(1..=3).contains(&self.grid.dim) {
            return Err(HartreeError::Format(format!("grid.dim = {} must be 1, 2 or 3", self.grid.dim)));
        }
        if self.times.iter().any(|t| !(*t >= 0.0)) {
            return Err(HartreeError::Format("experiment.times must be non-negative".into()));
        }
        if !(self.dt > 0.0) {
            return Err(HartreeError::Format("solver.dt must be positive".into()));
        }
        if matches!(self.kind, ExperimentKind::Single | ExperimentKind::Sweep) && self.comparators.is_empty() {
            return Err(HartreeError::Format("experiment.comparators is required for runs and sweeps".into()));
        }
        if self.kind == ExperimentKind::Single && self.epsilons.len() != 1 {
            return Err(HartreeError::Format("a single run takes exactly one epsilon".into()));
        }
        Ok(())
    }

    /// Largest requested time.
    pub fn t_end(&self) -> f64 {
        self.times.iter().copied().fold(0.0, f64::max)
    }
}
