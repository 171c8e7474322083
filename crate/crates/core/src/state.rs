//! Uniform mass grid on `[0, 1]` and the staggered fluid state.
//!
//! Density lives on cells, velocity and radius on nodes. Radii are not an
//! independent unknown: they follow from the density through the mass
//! recursion `r_{j+1}^N = r_j^N + N dx / rho_j`.

use serde::{Deserialize, Serialize};

use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MassGrid {
    cells: usize,
}

impl MassGrid {
    pub fn new(cells: usize) -> Result<Self> {
        if cells < 2 {
            return Err(Error::InvalidArgument(format!("need at least 2 cells, got {cells}")));
        }
        Ok(Self { cells })
    }

    pub fn cells(&self) -> usize {
        self.cells
    }

    pub fn nodes(&self) -> usize {
        self.cells + 1
    }

    pub fn dx(&self) -> f64 {
        1.0 / self.cells as f64
    }

    /// Node coordinate `x_j = j/M`; exact at both ends.
    pub fn node_x(&self, j: usize) -> f64 {
        j as f64 / self.cells as f64
    }

    pub fn cell_center(&self, i: usize) -> f64 {
        (i as f64 + 0.5) / self.cells as f64
    }

    /// Trapezoid weights on the nodes; they sum to one.
    pub fn node_weights(&self) -> Vec<f64> {
        let dx = self.dx();
        let mut w = vec![dx; self.nodes()];
        w[0] = 0.5 * dx;
        w[self.cells] = 0.5 * dx;
        w
    }
}

/// `r_0 = 0`, `r_{j+1}^N = r_j^N + N dx / rho_j`.
pub fn radius_from_density(rho: &[f64], dim: usize) -> Result<Vec<f64>> {
    check_dim(dim)?;
    if let Some((index, &value)) = rho.iter().enumerate().find(|(_, &v)| !(v > 0.0)) {
        return Err(Error::NonPositiveDensity { index, value });
    }
    let dx = 1.0 / rho.len() as f64;
    Ok(radius_from_volume_increments(rho.iter().map(|&d| dim as f64 * dx / d), dim, rho.len()))
}

/// Radii from the increments of `r^N`.
pub(crate) fn radius_from_volume_increments(
    increments: impl Iterator<Item = f64>,
    dim: usize,
    cells: usize,
) -> Vec<f64> {
    let mut r = Vec::with_capacity(cells + 1);
    r.push(0.0);
    let mut acc = 0.0;
    for inc in increments {
        acc += inc;
        r.push(root_n(acc, dim));
    }
    r
}

pub(crate) fn root_n(value: f64, dim: usize) -> f64 {
    if dim == 2 {
        value.sqrt()
    } else {
        value.cbrt()
    }
}

pub(crate) fn check_dim(dim: usize) -> Result<()> {
    if dim == 2 || dim == 3 {
        Ok(())
    } else {
        Err(Error::InvalidArgument(format!("dimension must be 2 or 3, got {dim}")))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FluidState {
    pub dim: usize,
    pub grid: MassGrid,
    /// Cell densities, `rho_i > 0`.
    pub rho: Vec<f64>,
    /// Node velocities, `u_0 = u_M = 0`.
    pub u: Vec<f64>,
    /// Node radii, `r_0 = 0`, strictly increasing.
    pub r: Vec<f64>,
    pub tau: f64,
    /// Effective velocity advanced by its own transport equation, carried
    /// alongside the state to cross-check the definition `u + r^{N-1}(rho^alpha)_x`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub w_tracked: Option<Vec<f64>>,
    /// Radii advanced by `r_tau = u`, kept only to measure drift from the
    /// recursion.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub r_tracked: Option<Vec<f64>>,
}

impl FluidState {
    /// Builds a state and its radii; rejects nonpositive density and
    /// nonzero boundary velocity.
    pub fn new(dim: usize, rho: Vec<f64>, u: Vec<f64>, tau: f64) -> Result<Self> {
        let grid = MassGrid::new(rho.len())?;
        if u.len() != grid.nodes() {
            return Err(Error::InvalidArgument(format!(
                "velocity has {} nodes, grid has {}",
                u.len(),
                grid.nodes()
            )));
        }
        if u[0] != 0.0 || u[grid.cells()] != 0.0 {
            return Err(Error::InvalidArgument("boundary velocity must vanish".into()));
        }
        if let Some((j, _)) = u.iter().enumerate().find(|(_, v)| !v.is_finite()) {
            return Err(Error::InvalidArgument(format!("non-finite velocity at node {j}")));
        }
        let r = radius_from_density(&rho, dim)?;
        Ok(Self { dim, grid, rho, u, r, tau, w_tracked: None, r_tracked: None })
    }

    /// Uniform density at rest.
    pub fn uniform(dim: usize, cells: usize, density: f64) -> Result<Self> {
        Self::new(dim, vec![density; cells], vec![0.0; cells + 1], 0.0)
    }

    pub fn cells(&self) -> usize {
        self.grid.cells()
    }

    pub fn dx(&self) -> f64 {
        self.grid.dx()
    }

    pub fn outer_radius(&self) -> f64 {
        self.r[self.cells()]
    }

    /// Recomputes radii from the current density.
    pub fn refresh_radii(&mut self) -> Result<()> {
        self.r = radius_from_density(&self.rho, self.dim)?;
        Ok(())
    }

    /// Exact cell volumes `(r_{i+1}^N - r_i^N)/N` (unit-sphere measure omitted).
    pub fn cell_volumes(&self) -> Vec<f64> {
        let n = self.dim as i32;
        self.r.windows(2).map(|w| (w[1].powi(n) - w[0].powi(n)) / n as f64).collect()
    }

    pub fn cell_mid_radii(&self) -> Vec<f64> {
        self.r.windows(2).map(|w| 0.5 * (w[0] + w[1])).collect()
    }

    /// Node densities for reporting: averages of the adjacent cells, with
    /// the end nodes copying their only neighbour.
    pub fn node_density(&self) -> Vec<f64> {
        let m = self.cells();
        let mut out = Vec::with_capacity(m + 1);
        out.push(self.rho[0]);
        out.extend(self.rho.windows(2).map(|w| 0.5 * (w[0] + w[1])));
        out.push(self.rho[m - 1]);
        out
    }

    pub fn rho_max(&self) -> f64 {
        self.rho.iter().copied().fold(f64::MIN, f64::max)
    }

    pub fn rho_min(&self) -> f64 {
        self.rho.iter().copied().fold(f64::MAX, f64::min)
    }
}

/// `sum_i dx / rho_i`, the total specific volume (equal to `R^N / N`).
pub fn specific_volume_integral(state: &FluidState) -> f64 {
    let dx = state.dx();
    state.rho.iter().map(|&d| dx / d).sum()
}

/// Background density `rho_bar = 1 / sum_i dx/rho_i`; with it the total
/// mass matches `rho_bar` times the volume, so the potential is solvable.
pub fn background_density(state: &FluidState) -> f64 {
    1.0 / specific_volume_integral(state)
}

/// Samples of `(r, rho(r), u(r))` at the node radii.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EulerianProfile {
    pub r: Vec<f64>,
    pub rho: Vec<f64>,
    pub u: Vec<f64>,
}

pub fn to_eulerian(state: &FluidState) -> EulerianProfile {
    EulerianProfile { r: state.r.clone(), rho: state.node_density(), u: state.u.clone() }
}
