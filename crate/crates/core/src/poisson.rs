//! Potential reconstruction from the density.
//!
//! In radial symmetry the Poisson equation has the first integral
//! `r^{N-1} phi_r = kappa int_0^r (rho - rho_bar) s^{N-1} ds`, which in
//! mass coordinates is `kappa (x - rho_bar r^N / N)`. The momentum source
//! is evaluated through the same function, so the two agree bit for bit.

use serde::{Deserialize, Serialize};

use crate::physics::{potential_gradient, Coefficients};
use crate::state::FluidState;
use crate::{Error, Result};

/// Default bound on `|phi_r(R)|`.
pub const COMPATIBILITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PotentialField {
    pub phi: Vec<f64>,
    pub phi_r: Vec<f64>,
    /// Volume-weighted mean of `phi` left after normalization.
    pub mean_residual: f64,
    pub rho_bar: f64,
}

pub fn solve_phi(state: &FluidState, c: &Coefficients) -> Result<PotentialField> {
    solve_phi_with_tolerance(state, c, COMPATIBILITY_TOL)
}

pub fn solve_phi_with_tolerance(state: &FluidState, c: &Coefficients, tolerance: f64) -> Result<PotentialField> {
    let m = state.cells();
    let phi_r: Vec<f64> = (0..=m)
        .map(|j| potential_gradient(state.grid.node_x(j), state.r[j], c.dim, c.kappa, c.rho_bar))
        .collect();
    if !(phi_r[m].abs() <= tolerance) {
        return Err(Error::Compatibility { residual: phi_r[m], tolerance });
    }

    let mut phi = vec![0.0; m + 1];
    for j in 1..=m {
        phi[j] = phi[j - 1] + 0.5 * (phi_r[j] + phi_r[j - 1]) * (state.r[j] - state.r[j - 1]);
    }
    let volumes = state.cell_volumes();
    let total: f64 = volumes.iter().sum();
    let weighted_mean = |phi: &[f64]| {
        phi.windows(2).zip(&volumes).map(|(w, dv)| 0.5 * (w[0] + w[1]) * dv).sum::<f64>() / total
    };
    let shift = weighted_mean(&phi);
    phi.iter_mut().for_each(|p| *p -= shift);
    let mean_residual = weighted_mean(&phi);
    Ok(PotentialField { phi, phi_r, mean_residual, rho_bar: c.rho_bar })
}

/// Surface measure of the unit sphere in the radial reduction: `2 pi` or `4 pi`.
pub fn sphere_measure(dim: usize) -> f64 {
    if dim == 2 {
        2.0 * std::f64::consts::PI
    } else {
        4.0 * std::f64::consts::PI
    }
}

/// `||grad Phi||_{L^2}` over the ball, trapezoid in each cell volume.
pub fn phi_grad_l2(state: &FluidState, field: &PotentialField) -> f64 {
    let sum: f64 = field
        .phi_r
        .windows(2)
        .zip(state.cell_volumes())
        .map(|(w, dv)| 0.5 * (w[0] * w[0] + w[1] * w[1]) * dv)
        .sum();
    (sphere_measure(state.dim) * sum).sqrt()
}

/// `||rho - rho_bar||_{L^p}` over the ball.
pub fn density_deviation_norm(state: &FluidState, rho_bar: f64, p: f64) -> f64 {
    let sum: f64 =
        state.rho.iter().zip(state.cell_volumes()).map(|(d, dv)| (d - rho_bar).abs().powf(p) * dv).sum();
    (sphere_measure(state.dim) * sum).powf(1.0 / p)
}

/// `(||grad Phi||^2, ||rho - rho_bar||_{L^{6/5}} ||grad Phi||)` in three dimensions.
pub fn phi_energy_check(state: &FluidState, field: &PotentialField) -> Result<(f64, f64)> {
    if state.dim != 3 {
        return Err(Error::InvalidArgument("the L^{6/5} potential bound is three-dimensional".into()));
    }
    let grad = phi_grad_l2(state, field);
    Ok((grad * grad, density_deviation_norm(state, field.rho_bar, 1.2) * grad))
}

/// Largest cell residual of the mass-coordinate form
/// `(r^{N-1} phi_r)_x = kappa (1 - rho_bar / rho)`.
pub fn elliptic_residual(state: &FluidState, field: &PotentialField, c: &Coefficients) -> f64 {
    let dx = state.dx();
    let flux: Vec<f64> =
        field.phi_r.iter().zip(&state.r).map(|(g, r)| g * r.powi(c.dim as i32 - 1)).collect();
    flux.windows(2)
        .zip(&state.rho)
        .map(|(w, d)| ((w[1] - w[0]) / dx - c.kappa * (1.0 - c.rho_bar / d)).abs())
        .fold(0.0, f64::max)
}
