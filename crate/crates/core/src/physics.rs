//! Constitutive laws and the semi-discrete right-hand sides.
//!
//! Stencils are two-point differences on the staggered grid. With
//! `D_i = (r_{i+1}^{N-1} u_{i+1} - r_i^{N-1} u_i) / dx` the discrete
//! continuity equation is `v_tau = D` for `v = 1/rho`, so `sum v dx` is
//! conserved by telescoping and `r_j` moves exactly with `u_j`.

use serde::{Deserialize, Serialize};

use crate::admissibility::ExponentPair;
use crate::state::FluidState;
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Coefficients {
    pub alpha: f64,
    pub gamma: f64,
    pub kappa: f64,
    pub dim: usize,
    pub rho_bar: f64,
}

impl Coefficients {
    pub fn new(alpha: f64, gamma: f64, kappa: f64, dim: usize, rho_bar: f64) -> Result<Self> {
        if dim != 2 && dim != 3 {
            return Err(Error::InvalidArgument(format!("dimension must be 2 or 3, got {dim}")));
        }
        if !(rho_bar > 0.0) || !rho_bar.is_finite() {
            return Err(Error::InvalidArgument(format!("rho_bar must be positive, got {rho_bar}")));
        }
        if !alpha.is_finite() || !gamma.is_finite() || !kappa.is_finite() {
            return Err(Error::InvalidArgument("non-finite coefficient".into()));
        }
        Ok(Self { alpha, gamma, kappa, dim, rho_bar })
    }

    pub fn from_pair(pair: &ExponentPair, rho_bar: f64) -> Result<Self> {
        Self::new(pair.alpha, pair.gamma, pair.kappa as f64, pair.n, rho_bar)
    }

    pub fn pressure(&self, rho: f64) -> Result<f64> {
        positive(rho).map(|d| d.powf(self.gamma))
    }

    pub fn mu(&self, rho: f64) -> Result<f64> {
        positive(rho).map(|d| d.powf(self.alpha))
    }

    pub fn lambda_(&self, rho: f64) -> Result<f64> {
        positive(rho).map(|d| (self.alpha - 1.0) * d.powf(self.alpha))
    }
}

fn positive(rho: f64) -> Result<f64> {
    if rho > 0.0 {
        Ok(rho)
    } else {
        Err(Error::NonPositiveDensity { index: 0, value: rho })
    }
}

/// `r^{N-1}` and `r^{N-2}` without `powf`.
fn rpow(r: f64, dim: usize) -> (f64, f64) {
    if dim == 2 {
        (r, 1.0)
    } else {
        (r * r, r)
    }
}

/// Radial potential gradient `kappa (x - rho_bar r^N / N) / r^{N-1}`,
/// taken as 0 at the origin. The momentum source is its negative.
pub fn potential_gradient(x: f64, r: f64, dim: usize, kappa: f64, rho_bar: f64) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    let (rn1, _) = rpow(r, dim);
    kappa * (x - rho_bar * rn1 * r / dim as f64) / rn1
}

/// Gravitational/electric source `-kappa x / r^{N-1} + kappa rho_bar r / N` at every node.
pub fn source_terms(state: &FluidState, c: &Coefficients) -> Vec<f64> {
    (0..state.grid.nodes())
        .map(|j| -potential_gradient(state.grid.node_x(j), state.r[j], c.dim, c.kappa, c.rho_bar))
        .collect()
}

/// Cell divergence `D_i` of `r^{N-1} u`.
pub fn cell_divergence(state: &FluidState) -> Vec<f64> {
    let dx = state.dx();
    let flux: Vec<f64> = state.r.iter().zip(&state.u).map(|(&r, &u)| rpow(r, state.dim).0 * u).collect();
    flux.windows(2).map(|w| (w[1] - w[0]) / dx).collect()
}

/// `d rho_i / d tau = -rho_i^2 D_i`.
pub fn continuity_rhs(state: &FluidState, _c: &Coefficients) -> Vec<f64> {
    cell_divergence(state).iter().zip(&state.rho).map(|(d, r)| -r * r * d).collect()
}

/// `d v_i / d tau = D_i`; the form actually integrated.
pub fn specific_volume_rhs(state: &FluidState) -> Vec<f64> {
    cell_divergence(state)
}

/// Momentum right-hand side split into the viscous divergence and everything else.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentumParts {
    pub viscous: Vec<f64>,
    /// Pressure, cross and source terms.
    pub explicit: Vec<f64>,
}

impl MomentumParts {
    pub fn total(&self) -> Vec<f64> {
        self.viscous.iter().zip(&self.explicit).map(|(a, b)| a + b).collect()
    }
}

pub fn momentum_parts(state: &FluidState, c: &Coefficients) -> MomentumParts {
    let m = state.cells();
    let dx = state.dx();
    let div = cell_divergence(state);
    let flux: Vec<f64> = state.rho.iter().zip(&div).map(|(&d, &dv)| d.powf(1.0 + c.alpha) * dv).collect();
    let p: Vec<f64> = state.rho.iter().map(|d| d.powf(c.gamma)).collect();
    let q: Vec<f64> = state.rho.iter().map(|d| d.powf(c.alpha)).collect();
    let src = source_terms(state, c);
    let nm1 = (c.dim - 1) as f64;

    let mut viscous = vec![0.0; m + 1];
    let mut explicit = vec![0.0; m + 1];
    for j in 1..m {
        let (rn1, rn2) = rpow(state.r[j], c.dim);
        viscous[j] = c.alpha * rn1 * (flux[j] - flux[j - 1]) / dx;
        let pressure = -rn1 * (p[j] - p[j - 1]) / dx;
        let cross = -nm1 * state.u[j] * rn2 * (q[j] - q[j - 1]) / dx;
        explicit[j] = pressure + cross + src[j];
    }
    MomentumParts { viscous, explicit }
}

/// `d u_j / d tau`; zero at the pinned boundary nodes.
pub fn momentum_rhs(state: &FluidState, c: &Coefficients) -> Vec<f64> {
    momentum_parts(state, c).total()
}

/// Nodal difference `(f_j - f_{j-1})/dx` of a cell quantity, one-sided
/// (from the last two cells) at the outer node and zero at the origin.
fn node_gradient(cells: &[f64], dx: f64) -> Vec<f64> {
    let m = cells.len();
    let mut g = vec![0.0; m + 1];
    for j in 1..m {
        g[j] = (cells[j] - cells[j - 1]) / dx;
    }
    g[m] = (cells[m - 1] - cells[m - 2]) / dx;
    g
}

/// `w = u + r^{N-1} (rho^alpha)_x`.
pub fn effective_velocity(state: &FluidState, c: &Coefficients) -> Vec<f64> {
    let q: Vec<f64> = state.rho.iter().map(|d| d.powf(c.alpha)).collect();
    let g = node_gradient(&q, state.dx());
    (0..state.grid.nodes()).map(|j| state.u[j] + rpow(state.r[j], c.dim).0 * g[j]).collect()
}

/// `w_tau = -r^{N-1}(rho^gamma)_x + source`, with the stencils of [`effective_velocity`].
pub fn w_rhs(state: &FluidState, c: &Coefficients) -> Vec<f64> {
    let p: Vec<f64> = state.rho.iter().map(|d| d.powf(c.gamma)).collect();
    let g = node_gradient(&p, state.dx());
    let src = source_terms(state, c);
    (0..state.grid.nodes()).map(|j| -rpow(state.r[j], c.dim).0 * g[j] + src[j]).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn coeffs(dim: usize, kappa: f64) -> Coefficients {
        Coefficients::new(0.9, 1.5, kappa, dim, 1.0).unwrap()
    }

    fn smooth_state(dim: usize, m: usize) -> FluidState {
        let rho: Vec<f64> =
            (0..m).map(|i| 1.0 + 0.3 * (std::f64::consts::PI * (i as f64 + 0.5) / m as f64).cos()).collect();
        let mut u: Vec<f64> = (0..=m).map(|j| 0.2 * (std::f64::consts::PI * j as f64 / m as f64).sin()).collect();
        u[m] = 0.0;
        FluidState::new(dim, rho, u, 0.0).unwrap()
    }

    #[test]
    fn laws_at_unit_density() {
        let c = coeffs(3, 1.0);
        assert_eq!(c.pressure(1.0).unwrap(), 1.0);
        assert_eq!(c.mu(1.0).unwrap(), 1.0);
        assert!((c.lambda_(1.0).unwrap() - (0.9 - 1.0)).abs() < 1e-15);
        assert!(c.pressure(0.0).is_err());
        assert!(c.mu(-1.0).is_err());
    }

    #[test]
    fn bd_relation_holds() {
        for alpha in [0.55, 0.9, 1.0, 1.3] {
            let c = Coefficients::new(alpha, 1.5, 1.0, 3, 1.0).unwrap();
            for k in 0..=60 {
                let rho = 10f64.powf(-3.0 + k as f64 * 0.1);
                let dmu = alpha * rho.powf(alpha - 1.0);
                let residual = c.lambda_(rho).unwrap() - (rho * dmu - c.mu(rho).unwrap());
                assert!(residual.abs() <= 1e-12 * c.mu(rho).unwrap(), "alpha {alpha} rho {rho}");
            }
        }
        let c = Coefficients::new(1.0, 1.5, 1.0, 2, 1.0).unwrap();
        assert_eq!(c.lambda_(7.0).unwrap(), 0.0);
    }

    #[test]
    fn rest_has_no_density_change() {
        let s = FluidState::uniform(3, 16, 1.3).unwrap();
        assert!(continuity_rhs(&s, &coeffs(3, 1.0)).iter().all(|&v| v == 0.0));
    }

    #[test]
    fn uniform_expansion() {
        // u = c r, rho = rho_c, N = 3: D_i = 3 c rho_c^{-1} exactly on the recursion.
        let (cst, rho_c) = (0.4, 1.7);
        let mut s = FluidState::uniform(3, 32, rho_c).unwrap();
        s.u = s.r.iter().map(|r| cst * r).collect();
        for v in continuity_rhs(&s, &coeffs(3, 1.0)) {
            assert!((v + 3.0 * cst * rho_c).abs() < 1e-12, "{v}");
        }
    }

    #[test]
    fn converging_flow_compresses() {
        let mut s = FluidState::uniform(2, 8, 1.0).unwrap();
        s.u[4] = -0.1;
        let rhs = continuity_rhs(&s, &coeffs(2, 1.0));
        assert!(rhs[3] > 0.0);
    }

    #[test]
    fn steady_state_exact() {
        for dim in [2, 3] {
            for kappa in [-1.0, 1.0] {
                let s = FluidState::uniform(dim, 64, 1.0).unwrap();
                let rhs = momentum_rhs(&s, &coeffs(dim, kappa));
                assert!(rhs.iter().all(|v| v.abs() < 1e-14), "{rhs:?}");
                assert!(w_rhs(&s, &coeffs(dim, kappa)).iter().all(|v| v.abs() < 1e-14));
            }
        }
    }

    #[test]
    fn pressure_pushes_outward_at_step_down() {
        let rho: Vec<f64> = (0..16).map(|i| if i < 8 { 2.0 } else { 1.0 }).collect();
        let s = FluidState::new(3, rho, vec![0.0; 17], 0.0).unwrap();
        let c = Coefficients::new(0.9, 1.5, 0.0, 3, 1.0).unwrap();
        assert!(momentum_rhs(&s, &c)[8] > 0.0);
    }

    #[test]
    fn boundary_nodes_pinned() {
        let s = smooth_state(3, 20);
        let rhs = momentum_rhs(&s, &coeffs(3, 1.0));
        assert_eq!(rhs[0], 0.0);
        assert_eq!(rhs[20], 0.0);
    }

    #[test]
    fn effective_velocity_signs() {
        let mut s = FluidState::uniform(3, 10, 2.0).unwrap();
        s.u[3] = 0.5;
        assert_eq!(effective_velocity(&s, &coeffs(3, 1.0)), s.u);

        let rho: Vec<f64> = (0..10).map(|i| 3.0 - 0.2 * i as f64).collect();
        let s = FluidState::new(2, rho, vec![0.0; 11], 0.0).unwrap();
        let w = effective_velocity(&s, &coeffs(2, 1.0));
        assert!(w[1..10].iter().all(|&v| v < 0.0));
    }

    #[test]
    fn w_source_linear_in_kappa() {
        let s = smooth_state(3, 24);
        let c0 = Coefficients::new(0.9, 1.5, 0.0, 3, 1.2).unwrap();
        let cp = Coefficients { kappa: 1.0, ..c0 };
        let cm = Coefficients { kappa: -1.0, ..c0 };
        let (w0, wp, wm) = (w_rhs(&s, &c0), w_rhs(&s, &cp), w_rhs(&s, &cm));
        for j in 0..=24 {
            assert!(((wp[j] - w0[j]) + (wm[j] - w0[j])).abs() < 1e-12);
        }
    }

    #[test]
    fn w_rhs_matches_chain_rule() {
        // d/dtau of the defined w, by central differences in tau of
        // (v, u) advanced along their own right-hand sides, equals w_rhs
        // at interior nodes.
        let c = coeffs(3, -1.0);
        let s = smooth_state(3, 40);
        let h = 1e-5;
        let shifted = |sign: f64| {
            let dv = specific_volume_rhs(&s);
            let du = momentum_rhs(&s, &c);
            let rho: Vec<f64> = s.rho.iter().zip(&dv).map(|(d, g)| 1.0 / (1.0 / d + sign * h * g)).collect();
            let u: Vec<f64> = s.u.iter().zip(&du).map(|(a, b)| a + sign * h * b).collect();
            effective_velocity(&FluidState::new(3, rho, u, 0.0).unwrap(), &c)
        };
        let (wp, wm) = (shifted(1.0), shifted(-1.0));
        let target = w_rhs(&s, &c);
        for j in 1..40 {
            let fd = (wp[j] - wm[j]) / (2.0 * h);
            assert!((fd - target[j]).abs() < 1e-5 * (1.0 + target[j].abs()), "node {j}: {fd} vs {}", target[j]);
        }
    }

    #[test]
    fn volume_rhs_telescopes() {
        let s = smooth_state(2, 33);
        let total: f64 = specific_volume_rhs(&s).iter().sum::<f64>() * s.dx();
        assert!(total.abs() < 1e-14);
        let c = coeffs(2, 1.0);
        let via_rho: f64 =
            continuity_rhs(&s, &c).iter().zip(&s.rho).map(|(g, d)| -g / (d * d)).sum::<f64>() * s.dx();
        assert!(via_rho.abs() < 1e-14);
    }
}
