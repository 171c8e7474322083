//! Parameter admissibility: the set `A_set`, the threshold curves, the
//! choice of integrability order `k`, the exponent windows, and the
//! hypotheses of the four global-existence regimes.

mod curves;
mod mdense;
mod rational;
mod selection;

pub use curves::{
    alpha2_minus, alpha2_plus, alpha3_minus, alpha3_plus, auxiliary_h, n2, n3, BRACKET_HI,
    BRACKET_LO, ROOT_RTOL,
};
pub use mdense::mdense_epsilon;
pub use rational::{a_set_contains, a_set_lattice, a_set_successor, RationalQ};
pub use selection::{
    beta_window, gamma_window, lattice_s_max, select_k_2d, select_k_3d, sigma_window,
    sigma_window_for_gamma, window_chain, KSelection, ParamWindow, Residual, WindowChain,
    LATTICE_K_MAX, LATTICE_S_MAX,
};

use serde::{Deserialize, Serialize};

/// Physical exponents and setting of a run.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExponentPair {
    pub alpha: f64,
    pub gamma: f64,
    #[serde(rename = "dim")]
    pub n: usize,
    pub kappa: i32,
}

/// The global-existence regimes covered by the solver's diagnostics.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Regime {
    /// `N = 2`, `1/2 < alpha < 1`, `gamma > 2 - alpha`.
    Planar,
    /// `N = 3`, `5/6 < alpha < 1`, `4/3 < gamma < 4alpha - 1 - alpha^2`.
    Spherical,
    /// `N = 2`, `alpha = 1`, `gamma > 1`.
    PlanarLinear,
    /// `N = 3`, `alpha = 1`, `4/3 < gamma < 3`.
    SphericalLinear,
}

/// One failed hypothesis: the bound as text, the offending value, and the
/// signed margin (negative means violated by that much).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Violation {
    pub hypothesis: String,
    pub value: f64,
    pub margin: f64,
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{} violated (value {}, margin {:.6e})", self.hypothesis, self.value, self.margin)
    }
}

const ALPHA_ONE_TOL: f64 = 1e-12;

impl ExponentPair {
    pub fn alpha_is_one(&self) -> bool {
        (self.alpha - 1.0).abs() <= ALPHA_ONE_TOL
    }

    /// The regime whose `(N, alpha)` range contains this pair, regardless
    /// of `gamma`.
    pub fn regime(&self) -> Option<Regime> {
        match self.n {
            2 if self.alpha_is_one() => Some(Regime::PlanarLinear),
            2 if self.alpha > 0.5 && self.alpha < 1.0 => Some(Regime::Planar),
            3 if self.alpha_is_one() => Some(Regime::SphericalLinear),
            3 if self.alpha > 5.0 / 6.0 && self.alpha < 1.0 => Some(Regime::Spherical),
            _ => None,
        }
    }
}

fn lower(out: &mut Vec<Violation>, hypothesis: &str, value: f64, bound: f64) {
    if !(value > bound) {
        out.push(Violation { hypothesis: hypothesis.into(), value, margin: value - bound });
    }
}

fn upper(out: &mut Vec<Violation>, hypothesis: &str, value: f64, bound: f64) {
    if !(value < bound) {
        out.push(Violation { hypothesis: hypothesis.into(), value, margin: bound - value });
    }
}

/// Hypotheses of the matching regime that `p` fails; empty when admissible.
pub fn validate_params(p: &ExponentPair) -> Vec<Violation> {
    let mut out = Vec::new();
    if p.n != 2 && p.n != 3 {
        out.push(Violation { hypothesis: "N in {2, 3}".into(), value: p.n as f64, margin: f64::NAN });
    }
    if p.kappa != 1 && p.kappa != -1 {
        out.push(Violation { hypothesis: "kappa in {-1, +1}".into(), value: p.kappa as f64, margin: f64::NAN });
    }
    if !out.is_empty() {
        return out;
    }
    let (a, g) = (p.alpha, p.gamma);
    match p.regime() {
        Some(Regime::Planar) => lower(&mut out, "gamma > 2 - alpha", g, 2.0 - a),
        Some(Regime::Spherical) => {
            lower(&mut out, "4/3 < gamma", g, 4.0 / 3.0);
            upper(&mut out, "gamma < 4alpha - 1 - alpha^2", g, 4.0 * a - 1.0 - a * a);
        }
        Some(Regime::PlanarLinear) => lower(&mut out, "gamma > 1", g, 1.0),
        Some(Regime::SphericalLinear) => {
            lower(&mut out, "4/3 < gamma", g, 4.0 / 3.0);
            upper(&mut out, "gamma < 3", g, 3.0);
        }
        None if p.n == 2 => {
            lower(&mut out, "1/2 < alpha", a, 0.5);
            upper(&mut out, "alpha <= 1", a, 1.0 + ALPHA_ONE_TOL);
        }
        None => {
            lower(&mut out, "5/6 < alpha", a, 5.0 / 6.0);
            upper(&mut out, "alpha <= 1", a, 1.0 + ALPHA_ONE_TOL);
        }
    }
    // Gaseous stars in three dimensions need gamma > 4/3 for the basic
    // energy estimate; both N = 3 regimes already demand it.
    if p.n == 3 && p.kappa == 1 && !out.iter().any(|v| v.hypothesis == "4/3 < gamma") {
        lower(&mut out, "4/3 < gamma", g, 4.0 / 3.0);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pair(n: usize, alpha: f64, gamma: f64, kappa: i32) -> ExponentPair {
        ExponentPair { alpha, gamma, n, kappa }
    }

    #[test]
    fn spherical_plasma_is_admissible() {
        assert!((4.0 * 0.9 - 1.0 - 0.81f64 - 1.79).abs() < 1e-12);
        assert!(validate_params(&pair(3, 0.9, 1.5, -1)).is_empty());
    }

    #[test]
    fn planar_linear_any_kappa() {
        assert!(validate_params(&pair(2, 1.0, 1.1, 1)).is_empty());
        assert!(validate_params(&pair(2, 1.0, 1.1, -1)).is_empty());
    }

    #[test]
    fn spherical_linear_gamma_ceiling() {
        let v = validate_params(&pair(3, 1.0, 3.5, 1));
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].hypothesis, "gamma < 3");
        assert!((v[0].margin + 0.5).abs() < 1e-15);
    }

    #[test]
    fn gamma_below_one() {
        let v = validate_params(&pair(2, 1.0, 0.9, 1));
        assert_eq!(v[0].hypothesis, "gamma > 1");
    }

    #[test]
    fn alpha_out_of_range() {
        let v = validate_params(&pair(3, 0.55, 1.5, -1));
        assert_eq!(v[0].hypothesis, "5/6 < alpha");
        let v = validate_params(&pair(2, 0.75, 1.2, 1));
        assert_eq!(v[0].hypothesis, "gamma > 2 - alpha");
        assert!(validate_params(&pair(2, 0.75, 1.3, 1)).is_empty());
    }

    #[test]
    fn structural_violations() {
        assert_eq!(validate_params(&pair(4, 0.9, 1.5, 1)).len(), 1);
        assert_eq!(validate_params(&pair(3, 0.9, 1.5, 0)).len(), 1);
    }
}
