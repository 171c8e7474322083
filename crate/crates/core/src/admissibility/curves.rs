//! Threshold curves `alpha_{N,±}(n)` and their inverses `n_N(alpha)`.
//!
//! The curves are evaluated in rationalised form: for `N = 2`
//! `1 - (n*sqrt(2n-1) - 2n + 1)/(n-1)^2 = n/(n + sqrt(2n-1))`, and for
//! `N = 3` the numerator `sqrt(D) - 6n + 3` equals
//! `8 (n-1)^2 (2n-1) / (sqrt(D) + 6n - 3)` with `D = 4n(4n^2-n-1)+1`.
//! Both forms are free of the `0/0` cancellation at `n -> 1+`.

use crate::{Error, Result};

/// Lower end of the bisection bracket (just above the pole at `n = 1`).
pub const BRACKET_LO: f64 = 1.0 + 1e-9;
/// Upper end of the bisection bracket.
pub const BRACKET_HI: f64 = 1e12;
/// Relative tolerance on the root.
pub const ROOT_RTOL: f64 = 1e-13;

const DOMAIN_TOL: f64 = 1e-12;

fn check_order(n: f64) -> Result<()> {
    if !(n > 1.0 + DOMAIN_TOL) || !n.is_finite() {
        return Err(Error::Precondition { bound: "n > 1".into(), value: n });
    }
    Ok(())
}

pub fn alpha2_minus(n: f64) -> Result<f64> {
    check_order(n)?;
    Ok(n / (n + (2.0 * n - 1.0).sqrt()))
}

pub fn alpha2_plus(n: f64) -> Result<f64> {
    check_order(n)?;
    let root = (2.0 * n - 1.0).sqrt();
    Ok(n * (n + root) / ((n - 1.0) * (n - 1.0)))
}

fn discriminant3(n: f64) -> f64 {
    4.0 * n * (4.0 * n * n - n - 1.0) + 1.0
}

pub fn alpha3_minus(n: f64) -> Result<f64> {
    check_order(n)?;
    let root = discriminant3(n).sqrt();
    Ok(1.0 - 2.0 * (2.0 * n - 1.0) / (root + 6.0 * n - 3.0))
}

pub fn alpha3_plus(n: f64) -> Result<f64> {
    check_order(n)?;
    let root = discriminant3(n).sqrt();
    Ok(1.0 + (root + 6.0 * n - 3.0) / (4.0 * (n - 1.0) * (n - 1.0)))
}

/// `h(a) = (a sqrt(2a-1) - 2a + 1)/(a-1)^2 - 1/(2a)`, positive on `(1, ∞)`.
///
/// Positivity of `h` at `k0 = 1/(2(1-alpha))` is what places `k0` strictly
/// inside the two-dimensional selection window.
pub fn auxiliary_h(a: f64) -> Result<f64> {
    check_order(a)?;
    let root = (2.0 * a - 1.0).sqrt();
    Ok(root / (a + root) - 1.0 / (2.0 * a))
}

/// Bisection for `f(n) = target` on `[BRACKET_LO, BRACKET_HI]`, with `f`
/// monotone (`increasing` selects the direction).
fn invert_monotone(f: impl Fn(f64) -> f64, target: f64, increasing: bool) -> Result<f64> {
    let g = |n: f64| if increasing { f(n) - target } else { target - f(n) };
    let (mut lo, mut hi) = (BRACKET_LO, BRACKET_HI);
    let (g_lo, g_hi) = (g(lo), g(hi));
    if g_lo > 0.0 || g_hi < 0.0 {
        return Err(Error::Precondition {
            bound: format!("alpha within the curve's range on [{BRACKET_LO}, {BRACKET_HI:e}]"),
            value: target,
        });
    }
    for _ in 0..400 {
        // Geometric midpoint: the bracket spans twelve decades.
        let mid = if hi / lo > 4.0 { (lo * hi).sqrt() } else { 0.5 * (lo + hi) };
        if g(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= ROOT_RTOL * lo {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn threshold_order(
    alpha: f64,
    lower_limit: f64,
    minus: fn(f64) -> Result<f64>,
    plus: fn(f64) -> Result<f64>,
    bound: &str,
) -> Result<f64> {
    if !(alpha > lower_limit) || !alpha.is_finite() {
        return Err(Error::Precondition { bound: bound.into(), value: alpha });
    }
    if alpha == 1.0 {
        return Ok(f64::INFINITY);
    }
    if alpha < 1.0 {
        invert_monotone(|n| minus(n).unwrap_or(lower_limit), alpha, true)
    } else {
        invert_monotone(|n| plus(n).unwrap_or(f64::INFINITY), alpha, false)
    }
}

/// `n_2(alpha)`: root of `alpha_{2,-}(n) = alpha` for `alpha in (1/2, 1)`,
/// `+inf` at `alpha = 1`, root of `alpha_{2,+}(n) = alpha` above 1.
pub fn n2(alpha: f64) -> Result<f64> {
    threshold_order(alpha, 0.5, alpha2_minus, alpha2_plus, "alpha > 1/2")
}

/// `n_3(alpha)`, the three-dimensional analogue of [`n2`] on `(2/3, ∞)`.
pub fn n3(alpha: f64) -> Result<f64> {
    threshold_order(alpha, 2.0 / 3.0, alpha3_minus, alpha3_plus, "alpha > 2/3")
}

#[cfg(test)]
mod tests {
    use super::*;

    // Literal textbook forms, used as an independent oracle away from n = 1.
    fn a2m_literal(n: f64) -> f64 {
        1.0 - (n * (2.0 * n - 1.0).sqrt() - 2.0 * n + 1.0) / (n * n - 2.0 * n + 1.0)
    }
    fn a2p_literal(n: f64) -> f64 {
        1.0 + (n * (2.0 * n - 1.0).sqrt() + 2.0 * n - 1.0) / (n * n - 2.0 * n + 1.0)
    }
    fn a3m_literal(n: f64) -> f64 {
        1.0 - (discriminant3(n).sqrt() - 6.0 * n + 3.0) / (4.0 * n * n - 8.0 * n + 4.0)
    }
    fn a3p_literal(n: f64) -> f64 {
        1.0 + (discriminant3(n).sqrt() + 6.0 * n - 3.0) / (4.0 * n * n - 8.0 * n + 4.0)
    }

    #[test]
    fn agrees_with_literal_formulas() {
        for &n in &[1.5, 2.0, 3.0, 7.25, 40.0, 1e3] {
            assert!((alpha2_minus(n).unwrap() - a2m_literal(n)).abs() < 1e-13);
            assert!((alpha2_plus(n).unwrap() - a2p_literal(n)).abs() < 1e-12 * a2p_literal(n));
            assert!((alpha3_minus(n).unwrap() - a3m_literal(n)).abs() < 1e-13);
            assert!((alpha3_plus(n).unwrap() - a3p_literal(n)).abs() < 1e-12 * a3p_literal(n));
        }
    }

    #[test]
    fn value_at_two() {
        let expected = 4.0 - 2.0 * 3f64.sqrt();
        assert!((alpha2_minus(2.0).unwrap() - expected).abs() < 1e-15);
        assert!((expected - 0.5359).abs() < 1e-4);
    }

    #[test]
    fn limits() {
        assert!((alpha2_minus(1.0 + 1e-9).unwrap() - 0.5).abs() < 1e-4);
        assert!((alpha3_minus(1.0 + 1e-9).unwrap() - 2.0 / 3.0).abs() < 1e-4);
        assert!((alpha2_minus(1e14).unwrap() - 1.0).abs() < 1e-6);
        assert!((alpha2_plus(1e14).unwrap() - 1.0).abs() < 1e-6);
        assert!((alpha3_minus(1e14).unwrap() - 1.0).abs() < 1e-6);
        assert!((alpha3_plus(1e14).unwrap() - 1.0).abs() < 1e-6);
        assert!(alpha2_plus(1.0 + 1e-6).unwrap() > 1e11);
    }

    #[test]
    fn rejects_degenerate_orders() {
        assert!(alpha2_minus(1.0).is_err());
        assert!(alpha3_plus(0.5).is_err());
        assert!(auxiliary_h(1.0).is_err());
    }

    #[test]
    fn inverse_special_values() {
        assert_eq!(n2(1.0).unwrap(), f64::INFINITY);
        assert_eq!(n3(1.0).unwrap(), f64::INFINITY);
        let n = n2(alpha2_minus(2.0).unwrap()).unwrap();
        assert!((n - 2.0).abs() < 1e-11);
        let n = n3(alpha3_minus(3.0).unwrap()).unwrap();
        assert!((n - 3.0).abs() < 1e-10);
        let n = n2(0.9).unwrap();
        assert!((alpha2_minus(n).unwrap() - 0.9).abs() <= 1e-12);
        assert!(n2(0.5).is_err());
        assert!(n3(0.6).is_err());
    }

    #[test]
    fn inverse_above_one() {
        for &alpha in &[1.01, 1.5, 3.0, 10.0] {
            let n = n2(alpha).unwrap();
            assert!((alpha2_plus(n).unwrap() - alpha).abs() <= 1e-12 * alpha);
            let n = n3(alpha).unwrap();
            assert!((alpha3_plus(n).unwrap() - alpha).abs() <= 1e-12 * alpha);
        }
    }

    #[test]
    fn monotone_on_log_grid() {
        let grid: Vec<f64> = (0..=2400).map(|i| 1.0 + 1e-6 * 10f64.powf(i as f64 / 200.0)).collect();
        for pair in grid.windows(2) {
            let (a, b) = (pair[0], pair[1]);
            assert!(alpha2_minus(a).unwrap() < alpha2_minus(b).unwrap(), "a2- at {a}");
            assert!(alpha3_minus(a).unwrap() < alpha3_minus(b).unwrap(), "a3- at {a}");
            assert!(alpha2_plus(a).unwrap() > alpha2_plus(b).unwrap(), "a2+ at {a}");
            assert!(alpha3_plus(a).unwrap() > alpha3_plus(b).unwrap(), "a3+ at {a}");
        }
    }

    #[test]
    fn auxiliary_positive() {
        for i in 1..=20_000 {
            let a = 1.0 + (1e4 - 1.0) * (i as f64 / 20_000.0).powi(3);
            assert!(auxiliary_h(a).unwrap() > 0.0, "h({a})");
        }
    }
}
