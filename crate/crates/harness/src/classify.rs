//! Regime classification: which of the WKB and focus stages feel the nonlinearity.
//!
//! Hartree only: nonlinear WKB iff `alpha = 1`, nonlinear focus iff `alpha = gamma`.
//! With a local power term the two tables are superposed: nonlinear WKB iff `alpha = 1`
//! or `beta = 1`, nonlinear focus iff `alpha = gamma` or `beta = sigma n`.

use std::fmt;
use std::str::FromStr;

use hartree_core::{HartreeError, Result};
use num_rational::Ratio;
use num_traits::{ToPrimitive, Zero};

/// Tolerance of the criticality tests when one side is not an exact rational.
pub const EQUALITY_TOLERANCE: f64 = 1e-12;

/// An exponent, exact when given as a rational.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Exponent {
    Exact(Ratio<i64>),
    Approx(f64),
}

impl Exponent {
    pub fn value(&self) -> f64 {
        match self {
            Exponent::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Exponent::Approx(x) => *x,
        }
    }

    fn times(&self, n: i64) -> Exponent {
        match self {
            Exponent::Exact(r) => Exponent::Exact(r * n),
            Exponent::Approx(x) => Exponent::Approx(x * n as f64),
        }
    }

    /// Equality, exact for two rationals and within [`EQUALITY_TOLERANCE`] (relative to
    /// `max(1, |a|, |b|)`) otherwise.
    pub fn equals(&self, other: &Exponent) -> bool {
        match (self, other) {
            (Exponent::Exact(a), Exponent::Exact(b)) => a == b,
            _ => {
                let (a, b) = (self.value(), other.value());
                (a - b).abs() <= EQUALITY_TOLERANCE * 1f64.max(a.abs()).max(b.abs())
            }
        }
    }

    /// `self < other`, with ties decided by [`equals`](Self::equals).
    pub fn less_than(&self, other: &Exponent) -> bool {
        !self.equals(other) && self.value() < other.value()
    }
}

impl From<f64> for Exponent {
    fn from(x: f64) -> Self {
        Exponent::Approx(x)
    }
}

impl From<Ratio<i64>> for Exponent {
    fn from(r: Ratio<i64>) -> Self {
        Exponent::Exact(r)
    }
}

impl From<i64> for Exponent {
    fn from(n: i64) -> Self {
        Exponent::Exact(Ratio::from_integer(n))
    }
}

impl FromStr for Exponent {
    type Err = HartreeError;

    /// `p/q` and plain decimals (`1.25`, `-3`) parse exactly; anything else with an exponent
    /// or more than 18 digits is read as a float.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let bad = || HartreeError::InvalidParameter(format!("cannot parse exponent '{s}'"));
        if let Some((p, q)) = s.split_once('/') {
            let p: i64 = p.trim().parse().map_err(|_| bad())?;
            let q: i64 = q.trim().parse().map_err(|_| bad())?;
            if q.is_zero() {
                return Err(bad());
            }
            return Ok(Exponent::Exact(Ratio::new(p, q)));
        }
        let (neg, body) = match s.strip_prefix('-') {
            Some(b) => (true, b),
            None => (false, s.strip_prefix('+').unwrap_or(s)),
        };
        let (int, frac) = body.split_once('.').unwrap_or((body, ""));
        let digits_ok = !(int.is_empty() && frac.is_empty())
            && int.chars().chain(frac.chars()).all(|c| c.is_ascii_digit())
            && int.len() + frac.len() <= 18;
        if digits_ok {
            let num: i64 = format!("{int}{frac}").parse().map_err(|_| bad())?;
            let den = 10i64.pow(frac.len() as u32);
            let r = Ratio::new(num, den);
            return Ok(Exponent::Exact(if neg { -r } else { r }));
        }
        let x: f64 = s.parse().map_err(|_| bad())?;
        if !x.is_finite() {
            return Err(bad());
        }
        Ok(Exponent::Approx(x))
    }
}

impl fmt::Display for Exponent {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Exponent::Exact(r) if *r.denom() == 1 => write!(f, "{}", r.numer()),
            Exponent::Exact(r) => write!(f, "{}/{}", r.numer(), r.denom()),
            Exponent::Approx(x) => write!(f, "{x}"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Stage {
    Linear,
    Nonlinear,
}

/// Effect of the nonlinearity away from the focus (`wkb`) and at the focus (`focus`).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RegimeLabel {
    pub wkb: Stage,
    pub focus: Stage,
}

impl fmt::Display for RegimeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let w = match self.wkb {
            Stage::Linear => "Linear",
            Stage::Nonlinear => "Nonlinear",
        };
        let c = match self.focus {
            Stage::Linear => "linear",
            Stage::Nonlinear => "nonlinear",
        };
        write!(f, "{w} WKB, {c} focus")
    }
}

/// Classifies `(alpha, gamma)` with an optional local term `(beta, sigma)` in dimension `n`.
///
/// Requires `alpha >= 1`, `gamma > 0`, `alpha >= gamma`; with a local term also `beta >= 1`,
/// `0 < sigma < 2/n` and `beta >= sigma n`. Exponents below their critical value are not
/// covered by the tables and are rejected.
pub fn classify_regime(
    alpha: Exponent,
    gamma: Exponent,
    beta: Option<Exponent>,
    sigma: Option<Exponent>,
    n: usize,
) -> Result<RegimeLabel> {
    let one = Exponent::from(1);
    let zero = Exponent::from(0);
    let invalid = |m: String| Err(HartreeError::InvalidParameter(m));
    if n == 0 {
        return invalid("dimension must be at least 1".into());
    }
    if alpha.less_than(&one) {
        return invalid(format!("alpha = {alpha} must be at least 1"));
    }
    if !zero.less_than(&gamma) {
        return invalid(format!("gamma = {gamma} must be positive"));
    }
    if alpha.less_than(&gamma) {
        return invalid(format!("alpha = {alpha} below gamma = {gamma} is supercritical and not classified"));
    }
    let mut wkb = alpha.equals(&one);
    let mut focus = alpha.equals(&gamma);
    match (beta, sigma) {
        (None, None) => {}
        (Some(b), Some(s)) => {
            let two_over_n = Exponent::Exact(Ratio::new(2, n as i64));
            if !(zero.less_than(&s) && s.less_than(&two_over_n)) {
                return invalid(format!("sigma = {s} outside (0, 2/{n})"));
            }
            if b.less_than(&one) {
                return invalid(format!("beta = {b} must be at least 1"));
            }
            let sn = s.times(n as i64);
            if b.less_than(&sn) {
                return invalid(format!("beta = {b} below sigma n = {sn} is supercritical and not classified"));
            }
            wkb |= b.equals(&one);
            focus |= b.equals(&sn);
        }
        _ => return invalid("beta and sigma must be given together".into()),
    }
    let stage = |nl: bool| if nl { Stage::Nonlinear } else { Stage::Linear };
    Ok(RegimeLabel { wkb: stage(wkb), focus: stage(focus) })
}
