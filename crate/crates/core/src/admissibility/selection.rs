//! Choice of the integrability order `k in A_set` and the exponent windows
//! `sigma`, `gamma`, `beta` that close the density upper bound.

use serde::Serialize;

use super::curves::alpha2_minus;
use super::rational::{a_set_successor, RationalQ};
use crate::{Error, Result};

/// Search lattice for `A_set` members `1 + s/(2k+1)`.
pub const LATTICE_S_MAX: u64 = 1000;
pub const LATTICE_K_MAX: u64 = 1000;

/// Numerator bound for a search above `threshold`: at least
/// [`LATTICE_S_MAX`], and large enough that every denominator of the
/// lattice still reaches past the threshold as `alpha -> 1-`.
pub fn lattice_s_max(threshold: f64) -> u64 {
    let reach = ((threshold - 1.0).max(0.0) * (2 * LATTICE_K_MAX + 1) as f64).ceil() as u64 + 1;
    LATTICE_S_MAX.max(reach)
}

/// A named inequality evaluated as `rhs - lhs`; positive when it holds.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Residual {
    pub inequality: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct KSelection {
    pub k: RationalQ,
    pub k0: f64,
    pub residuals: Vec<Residual>,
}

impl KSelection {
    pub fn k_value(&self) -> f64 {
        self.k.to_f64()
    }

    pub fn all_positive(&self) -> bool {
        self.residuals.iter().all(|r| r.value > 0.0)
    }
}

/// Open interval certificate `(lo, hi)` with a midpoint witness.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ParamWindow {
    pub lo: f64,
    pub hi: f64,
    pub satisfied: bool,
    pub witness: Option<f64>,
}

impl ParamWindow {
    pub fn new(lo: f64, hi: f64) -> Self {
        let satisfied = lo < hi;
        let witness = satisfied.then_some(0.5 * (lo + hi));
        Self { lo, hi, satisfied, witness }
    }

    pub fn contains(&self, value: f64) -> bool {
        self.lo < value && value < self.hi
    }
}

fn residual(inequality: &str, value: f64) -> Residual {
    Residual { inequality: inequality.to_string(), value }
}

fn critical_order(alpha: f64) -> f64 {
    1.0 / (2.0 * (1.0 - alpha))
}

/// `1 - 1/(2k) - alpha`, written so that `1 - alpha` (exact for
/// `alpha >= 1/2`) is not swamped by rounding when `k` is large.
fn upper_margin(alpha: f64, k: f64) -> f64 {
    (1.0 - alpha) - 0.5 / k
}

fn residuals_2d(alpha: f64, k: f64) -> Result<Vec<Residual>> {
    Ok(vec![
        residual("k > 1", k - 1.0),
        residual("1-(k*sqrt(2k-1)-2k+1)/(k^2-2k+1) < alpha", alpha - alpha2_minus(k)?),
        residual("alpha < 1-1/(2k)", upper_margin(alpha, k)),
    ])
}

/// Two-dimensional order selection: the first lattice member of `A_set`
/// above `k0 = 1/(2(1-alpha))` with
/// `1-(k sqrt(2k-1)-2k+1)/(k^2-2k+1) < alpha < 1 - 1/(2k)`.
pub fn select_k_2d(alpha: f64) -> Result<KSelection> {
    if !(alpha > 0.5 && alpha < 1.0) {
        return Err(Error::Precondition { bound: "1/2 < alpha < 1".into(), value: alpha });
    }
    let k0 = critical_order(alpha);
    // The admissible k form an interval (k0, n2(alpha)), so only members
    // right above k0 are worth trying.
    first_satisfying(k0, k0, |k| residuals_2d(alpha, k))?.map_err(|k| {
        Error::SearchExhausted(format!("the 2D window at alpha = {alpha} (first member above k0 = {k0} is {k})"))
    })
}

/// Members tried above the threshold before giving up.
const CANDIDATES: usize = 8;

/// The first lattice member above `threshold` whose residuals are all
/// positive, or the first member tried when none of [`CANDIDATES`] is.
///
/// `k0` is rounded, so the first member above it can coincide with the
/// exact `k0` and fail `alpha < 1 - 1/(2k)` by a zero margin; the next
/// member then works.
fn first_satisfying(
    threshold: f64,
    k0: f64,
    residuals: impl Fn(f64) -> Result<Vec<Residual>>,
) -> Result<std::result::Result<KSelection, RationalQ>> {
    let s_max = lattice_s_max(threshold);
    let mut below = threshold;
    let mut first = None;
    for _ in 0..CANDIDATES {
        let Some(k) = a_set_successor(below, s_max, LATTICE_K_MAX) else { break };
        first.get_or_insert(k);
        let selection = KSelection { k, k0, residuals: residuals(k.to_f64())? };
        if selection.all_positive() {
            return Ok(Ok(selection));
        }
        below = k.to_f64().next_up();
    }
    match first {
        Some(k) => Ok(Err(k)),
        None => Err(Error::SearchExhausted(format!("no lattice member above {threshold}"))),
    }
}

fn residuals_3d(alpha: f64, gamma: f64, k: f64) -> Vec<Residual> {
    vec![
        residual("k > 3", k - 3.0),
        residual("(4k+3)/(4k+6) < alpha", 3.0 / (4.0 * k + 6.0) - (1.0 - alpha)),
        residual("alpha < 1-1/(2k)", upper_margin(alpha, k)),
        residual("4/3 < gamma", gamma - 4.0 / 3.0),
        residual("gamma < 3alpha-1+alpha/(2k)", 3.0 * alpha - 1.0 + alpha / (2.0 * k) - gamma),
    ]
}

/// Three-dimensional order selection with `k > 3`,
/// `(4k+3)/(4k+6) < alpha < 1 - 1/(2k)` and `4/3 < gamma < 3alpha-1+alpha/(2k)`.
pub fn select_k_3d(alpha: f64, gamma: f64) -> Result<KSelection> {
    if !(alpha > 5.0 / 6.0 && alpha < 1.0) {
        return Err(Error::Precondition { bound: "5/6 < alpha < 1".into(), value: alpha });
    }
    let gamma_hi = 4.0 * alpha - 1.0 - alpha * alpha;
    if !(gamma > 4.0 / 3.0) {
        return Err(Error::Precondition { bound: "4/3 < gamma".into(), value: gamma });
    }
    if !(gamma < gamma_hi) {
        return Err(Error::Precondition {
            bound: format!("gamma < 4alpha-1-alpha^2 = {gamma_hi}"),
            value: gamma,
        });
    }
    let k0 = critical_order(alpha);
    // k0 > 3 follows from alpha > 5/6; the explicit max keeps k > 3 even
    // when rounding puts k0 at 3.
    first_satisfying(k0.max(3.0), k0, |k| Ok(residuals_3d(alpha, gamma, k)))?.map_err(|k| {
        Error::SearchExhausted(format!(
            "the 3D window at alpha = {alpha}, gamma = {gamma} (first member above k0 = {k0} is {k})"
        ))
    })
}

/// `(2k+2-(2k+3)alpha)/k < sigma < 1/(2k)`.
pub fn sigma_window(alpha: f64, k: f64) -> ParamWindow {
    ParamWindow::new((2.0 * k + 2.0 - (2.0 * k + 3.0) * alpha) / k, 1.0 / (2.0 * k))
}

/// `alpha - alpha/(2k) + sigma < gamma < 3alpha - 1 + (alpha-1)/(2k) + sigma`.
pub fn gamma_window(alpha: f64, k: f64, sigma: f64) -> ParamWindow {
    ParamWindow::new(
        alpha - alpha / (2.0 * k) + sigma,
        3.0 * alpha - 1.0 + (alpha - 1.0) / (2.0 * k) + sigma,
    )
}

/// Range of `beta` with `sigma < beta`, the bounds
/// `max{0, alpha-1+1/(2k)} < beta < min{2alpha-1, (3alpha-2)(1-1/k)}`, and
/// `beta < (3alpha-2)(1-1/(2k))`.
pub fn beta_window(alpha: f64, k: f64, sigma: f64) -> ParamWindow {
    let lo = [0.0, alpha - 1.0 + 1.0 / (2.0 * k), sigma].into_iter().fold(f64::MIN, f64::max);
    let hi = [
        2.0 * alpha - 1.0,
        (3.0 * alpha - 2.0) * (1.0 - 1.0 / k),
        (3.0 * alpha - 2.0) * (1.0 - 1.0 / (2.0 * k)),
    ]
    .into_iter()
    .fold(f64::MAX, f64::min);
    ParamWindow::new(lo, hi)
}

/// The `sigma` window narrowed to values for which [`gamma_window`]
/// contains the given `gamma`.
///
/// Solving the two `gamma` inequalities for `sigma` gives
/// `gamma - 3alpha + 1 - (alpha-1)/(2k) < sigma < gamma - alpha + alpha/(2k)`.
pub fn sigma_window_for_gamma(alpha: f64, k: f64, gamma: f64) -> ParamWindow {
    let base = sigma_window(alpha, k);
    let lo = base.lo.max(gamma - 3.0 * alpha + 1.0 - (alpha - 1.0) / (2.0 * k));
    let hi = base.hi.min(gamma - alpha + alpha / (2.0 * k));
    ParamWindow::new(lo, hi)
}

/// Full chain for a three-dimensional `(alpha, gamma)`.
#[derive(Debug, Clone, Serialize)]
pub struct WindowChain {
    pub selection: KSelection,
    pub sigma: ParamWindow,
    pub sigma_for_gamma: ParamWindow,
    pub gamma: ParamWindow,
    pub beta: ParamWindow,
}

pub fn window_chain(alpha: f64, gamma: f64) -> Result<WindowChain> {
    let selection = select_k_3d(alpha, gamma)?;
    let k = selection.k_value();
    let sigma = sigma_window(alpha, k);
    let sigma_for_gamma = sigma_window_for_gamma(alpha, k, gamma);
    let chosen = sigma_for_gamma.witness.or(sigma.witness).unwrap_or(sigma.lo);
    Ok(WindowChain {
        gamma: gamma_window(alpha, k, chosen),
        beta: beta_window(alpha, k, chosen),
        selection,
        sigma,
        sigma_for_gamma,
    })
}
