//! Discrete estimate functionals evaluated on a single state.

use serde::{Deserialize, Serialize};

use crate::physics::{cell_divergence, effective_velocity, source_terms, Coefficients};
use crate::state::FluidState;
use crate::{Error, Result};

fn rn1(r: f64, dim: usize) -> f64 {
    if dim == 2 {
        r
    } else {
        r * r
    }
}

/// `sum_j 1/2 u_j^2` against the nodal trapezoid weights.
pub fn kinetic_energy(state: &FluidState) -> f64 {
    state.u.iter().zip(state.grid.node_weights()).map(|(u, w)| 0.5 * u * u * w).sum()
}

/// `sum_i rho_i^{gamma-1}/(gamma-1) dx`, or `sum_i ln rho_i dx` when `gamma = 1`.
pub fn internal_energy(state: &FluidState, c: &Coefficients) -> f64 {
    let dx = state.dx();
    if (c.gamma - 1.0).abs() < 1e-14 {
        return state.rho.iter().map(|d| d.ln() * dx).sum();
    }
    state.rho.iter().map(|d| d.powf(c.gamma - 1.0) / (c.gamma - 1.0) * dx).sum()
}

/// Kinetic plus internal energy.
///
/// The kinetic part uses node values with trapezoid weights; with that
/// choice the semi-discrete energy identity (see [`energy_dissipation_rate`])
/// holds exactly and `lp_norm(u, 2) = 2 K`.
pub fn basic_energy(state: &FluidState, c: &Coefficients) -> f64 {
    kinetic_energy(state) + internal_energy(state, c)
}

/// `kappa int x/r dx` (three dimensions), the potential part of the energy.
pub fn poisson_energy(state: &FluidState, c: &Coefficients) -> f64 {
    let w = state.grid.node_weights();
    (1..state.grid.nodes()).map(|j| c.kappa * state.grid.node_x(j) / state.r[j] * w[j]).sum()
}

/// Energy dissipated by the scheme: the viscous part
/// `alpha sum rho^{1+alpha} D^2 dx` plus the cross-term work
/// `(N-1) sum u_j^2 r_j^{N-2} (rho_j^alpha - rho_{j-1}^alpha)`.
///
/// Together with [`source_power`] this closes
/// `dE/dtau = -energy_dissipation_rate + source_power` exactly.
pub fn energy_dissipation_rate(state: &FluidState, c: &Coefficients) -> f64 {
    viscous_dissipation(state, c) + cross_work(state, c)
}

pub fn viscous_dissipation(state: &FluidState, c: &Coefficients) -> f64 {
    let dx = state.dx();
    cell_divergence(state).iter().zip(&state.rho).map(|(d, r)| c.alpha * r.powf(1.0 + c.alpha) * d * d * dx).sum()
}

pub fn cross_work(state: &FluidState, c: &Coefficients) -> f64 {
    let q: Vec<f64> = state.rho.iter().map(|d| d.powf(c.alpha)).collect();
    let nm1 = (c.dim - 1) as f64;
    (1..state.cells())
        .map(|j| {
            let rn2 = if c.dim == 2 { 1.0 } else { state.r[j] };
            nm1 * state.u[j] * state.u[j] * rn2 * (q[j] - q[j - 1])
        })
        .sum()
}

/// `sum_j u_j g_j dx` with `g` the potential source.
pub fn source_power(state: &FluidState, c: &Coefficients) -> f64 {
    let dx = state.dx();
    source_terms(state, c).iter().zip(&state.u).map(|(g, u)| g * u * dx).sum()
}

/// `int (rho^{alpha-1} u^2/r^2 + rho^{1+alpha} (r^{N-1} u_x)^2) dx`.
///
/// The gradient part lives on cells with the midpoint radius; the `u/r`
/// part on nodes with averaged densities, using `u_1/r_1` at the origin.
pub fn basic_dissipation(state: &FluidState, c: &Coefficients) -> f64 {
    let dx = state.dx();
    let m = state.cells();
    let mid = state.cell_mid_radii();
    let cell: f64 = (0..m)
        .map(|i| {
            let g = rn1(mid[i], c.dim) * (state.u[i + 1] - state.u[i]) / dx;
            state.rho[i].powf(1.0 + c.alpha) * g * g * dx
        })
        .sum();
    let rho_node = state.node_density();
    let w = state.grid.node_weights();
    let node: f64 = (0..=m)
        .map(|j| {
            let ratio = if j == 0 { state.u[1] / state.r[1] } else { state.u[j] / state.r[j] };
            rho_node[j].powf(c.alpha - 1.0) * ratio * ratio * w[j]
        })
        .sum();
    cell + node
}

/// `1/2 int w^2 dx` with the nodal trapezoid weights.
pub fn bd_entropy(state: &FluidState, c: &Coefficients) -> f64 {
    effective_velocity(state, c).iter().zip(state.grid.node_weights()).map(|(w, k)| 0.5 * w * w * k).sum()
}

/// `int (r^{N-1} (rho^{(gamma+alpha)/2})_x)^2 dx`, nodal trapezoid; the
/// outer node uses the one-sided difference and the origin contributes 0.
pub fn bd_dissipation(state: &FluidState, c: &Coefficients) -> f64 {
    let dx = state.dx();
    let m = state.cells();
    let s: Vec<f64> = state.rho.iter().map(|d| d.powf(0.5 * (c.gamma + c.alpha))).collect();
    let w = state.grid.node_weights();
    (1..=m)
        .map(|j| {
            let diff = if j == m { s[m - 1] - s[m - 2] } else { s[j] - s[j - 1] };
            let g = rn1(state.r[j], c.dim) * diff / dx;
            g * g * w[j]
        })
        .sum()
}

/// `sup rho^{alpha-1/2} r^e` with `e = xi` (N = 2) or `1/2 + xi` (N = 3).
///
/// Density is piecewise constant, so the supremum over a cell sits at its
/// outer radius.
pub fn weighted_density_norm(state: &FluidState, c: &Coefficients, xi: f64) -> f64 {
    let e = if c.dim == 2 { xi } else { 0.5 + xi };
    (0..state.cells())
        .map(|i| state.rho[i].powf(c.alpha - 0.5) * state.r[i + 1].powf(e))
        .fold(0.0, f64::max)
}

/// Which `x <= C r^e` relation to monitor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum XrKind {
    /// `e = N (gamma - 1) / gamma`.
    Energy,
    /// `e = 3 (1 - 1/(6 alpha - 3))`, three dimensions only.
    Bd,
}

impl XrKind {
    pub fn name(self) -> &'static str {
        match self {
            XrKind::Energy => "energy",
            XrKind::Bd => "bd",
        }
    }

    /// Exponent for the given coefficients, or `None` when the relation
    /// does not apply (wrong dimension or a nonpositive exponent).
    pub fn exponent(self, c: &Coefficients) -> Option<f64> {
        let e = match self {
            XrKind::Energy => c.dim as f64 * (c.gamma - 1.0) / c.gamma,
            XrKind::Bd if c.dim == 3 && c.alpha > 2.0 / 3.0 => 3.0 * (1.0 - 1.0 / (6.0 * c.alpha - 3.0)),
            XrKind::Bd => return None,
        };
        (e > 0.0).then_some(e)
    }
}

/// `max_{j >= 1} x_j / r_j^e`.
pub fn xr_relation_constant(state: &FluidState, exponent: f64) -> f64 {
    (1..state.grid.nodes()).map(|j| state.grid.node_x(j) / state.r[j].powf(exponent)).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LpWeight {
    /// `dx`, nodal trapezoid.
    Lagrangian,
    /// `rho r^{N-1} dr`, nodal trapezoid in `r` with node densities.
    Eulerian,
}

pub fn node_weights(state: &FluidState, weight: LpWeight) -> Vec<f64> {
    match weight {
        LpWeight::Lagrangian => state.grid.node_weights(),
        LpWeight::Eulerian => {
            let m = state.cells();
            let rho = state.node_density();
            (0..=m)
                .map(|j| {
                    let lo = if j == 0 { state.r[0] } else { state.r[j - 1] };
                    let hi = if j == m { state.r[m] } else { state.r[j + 1] };
                    rho[j] * rn1(state.r[j], state.dim) * 0.5 * (hi - lo)
                })
                .collect()
        }
    }
}

/// `int |f|^p` against the given node weights, for any real `p > 0`.
pub fn lp_integral(field: &[f64], weights: &[f64], p: f64) -> f64 {
    field.iter().zip(weights).map(|(f, w)| f.abs().powf(p) * w).sum()
}

/// Raw integral `int f^{2n}` (no root taken).
pub fn lp_norm(state: &FluidState, field: &[f64], order: u32, weight: LpWeight) -> Result<f64> {
    if order < 2 || !order.is_multiple_of(2) {
        return Err(Error::InvalidArgument(format!("order must be even and at least 2, got {order}")));
    }
    if field.len() != state.grid.nodes() {
        return Err(Error::InvalidArgument("field must live on the nodes".into()));
    }
    let w = node_weights(state, weight);
    Ok(field.iter().zip(&w).map(|(f, w)| f.powi(order as i32) * w).sum())
}

/// Largest nodal density difference quotient.
pub fn grad_rho_max(state: &FluidState) -> f64 {
    let dx = state.dx();
    state.rho.windows(2).map(|w| (w[1] - w[0]).abs() / dx).fold(0.0, f64::max)
}

/// Largest cell velocity difference quotient.
pub fn grad_u_max(state: &FluidState) -> f64 {
    let dx = state.dx();
    state.u.windows(2).map(|w| (w[1] - w[0]).abs() / dx).fold(0.0, f64::max)
}
