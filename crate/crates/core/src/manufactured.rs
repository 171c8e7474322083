//! Manufactured solution for convergence studies.
//!
//! Specific volume `v = 1 + a(tau) cos(pi x)` gives the Eulerian radius
//! `r^N = N X` with `X = x + a sin(pi x)/pi` and velocity
//! `u = X_tau / r^{N-1}`. Continuity then holds exactly, so only the
//! momentum equation needs a defect term. The mean of `v` is one, hence
//! `rho_bar = 1`.

use std::f64::consts::PI;

use crate::physics::Coefficients;
use crate::solver::{step_forced, Scheme, StepperConfig};
use crate::state::{FluidState, MassGrid};
use crate::Result;

/// `a(tau) = a0 + a1 sin(omega tau)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ManufacturedSolution {
    pub coeffs: Coefficients,
    pub a0: f64,
    pub a1: f64,
    pub omega: f64,
}

/// Errors at the final time: discrete `L^2` norms over nodes (`u`) and cells (`v`).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConvergenceSample {
    pub cells: usize,
    pub dt: f64,
    pub steps: u64,
    pub u_error: f64,
    pub v_error: f64,
}

impl ManufacturedSolution {
    pub fn new(coeffs: Coefficients) -> Self {
        Self { coeffs: Coefficients { rho_bar: 1.0, ..coeffs }, a0: 0.2, a1: 0.1, omega: 3.0 }
    }

    fn a(&self, tau: f64) -> (f64, f64, f64) {
        let (s, c) = (self.omega * tau).sin_cos();
        (self.a0 + self.a1 * s, self.a1 * self.omega * c, -self.a1 * self.omega * self.omega * s)
    }

    /// `X(x, tau) = x + a sin(pi x)/pi`.
    pub fn mass_radius(&self, x: f64, tau: f64) -> f64 {
        x + self.a(tau).0 * (PI * x).sin() / PI
    }

    pub fn radius(&self, x: f64, tau: f64) -> f64 {
        let n = self.coeffs.dim as f64;
        (n * self.mass_radius(x, tau)).powf(1.0 / n)
    }

    pub fn specific_volume(&self, x: f64, tau: f64) -> f64 {
        1.0 + self.a(tau).0 * (PI * x).cos()
    }

    pub fn velocity(&self, x: f64, tau: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let r = self.radius(x, tau);
        self.a(tau).1 * (PI * x).sin() / PI / r.powi(self.coeffs.dim as i32 - 1)
    }

    /// Momentum defect: the left side of the momentum equation minus its
    /// right side, evaluated on the exact solution.
    pub fn momentum_defect(&self, x: f64, tau: f64) -> f64 {
        if x <= 0.0 {
            return 0.0;
        }
        let c = &self.coeffs;
        let nm1 = (c.dim - 1) as f64;
        let (a, da, dda) = self.a(tau);
        let (sx, cx) = (PI * x).sin_cos();
        let r = self.radius(x, tau);
        let rn1 = r.powi(c.dim as i32 - 1);
        let rn2 = r.powi(c.dim as i32 - 2);
        let v = 1.0 + a * cx;
        let rho = 1.0 / v;
        let rho_x = a * PI * sx / (v * v);
        let u = da * sx / PI / rn1;

        let u_tau = dda * sx / PI / rn1 - nm1 * u * u / r;
        let pressure = rn1 * c.gamma * rho.powf(c.gamma - 1.0) * rho_x;
        let div = da * cx;
        let div_x = -da * PI * sx;
        let viscous = c.alpha
            * rn1
            * ((1.0 + c.alpha) * rho.powf(c.alpha) * rho_x * div + rho.powf(1.0 + c.alpha) * div_x);
        let cross = nm1 * u * rn2 * c.alpha * rho.powf(c.alpha - 1.0) * rho_x;
        let source = c.kappa * x / rn1 - c.kappa * c.rho_bar * r / c.dim as f64;
        u_tau + pressure - viscous + cross + source
    }

    /// Exact cell averages of `v` and node values of `u` at `tau`.
    pub fn state(&self, grid: MassGrid, tau: f64) -> Result<FluidState> {
        let m = grid.cells();
        let dx = grid.dx();
        let rho: Vec<f64> = (0..m)
            .map(|i| dx / (self.mass_radius(grid.node_x(i + 1), tau) - self.mass_radius(grid.node_x(i), tau)))
            .collect();
        let mut u: Vec<f64> = (0..=m).map(|j| self.velocity(grid.node_x(j), tau)).collect();
        u[0] = 0.0;
        u[m] = 0.0;
        let mut s = FluidState::new(self.coeffs.dim, rho, u, tau)?;
        s.tau = tau;
        Ok(s)
    }

    /// Runs the forced explicit scheme to `t_end` with `dt = dt_factor dx^2`
    /// (rounded so the steps land on `t_end`).
    pub fn solve(&self, cells: usize, t_end: f64, dt_factor: f64) -> Result<ConvergenceSample> {
        let grid = MassGrid::new(cells)?;
        let steps = (t_end / (dt_factor * grid.dx() * grid.dx())).ceil().max(1.0) as u64;
        let dt = t_end / steps as f64;
        let config = StepperConfig::new(Scheme::ExplicitSsp2, t_end);
        let xs: Vec<f64> = (0..=cells).map(|j| grid.node_x(j)).collect();
        let forcing = |tau: f64| xs.iter().map(|&x| self.momentum_defect(x, tau)).collect::<Vec<f64>>();
        let mut state = self.state(grid, 0.0)?;
        for k in 0..steps {
            state = step_forced(&state, &self.coeffs, dt, &config, Some(&forcing))?;
            state.tau = (k + 1) as f64 * dt;
        }
        let exact = self.state(grid, t_end)?;
        let dx = grid.dx();
        let u_error = state.u.iter().zip(&exact.u).map(|(a, b)| (a - b).powi(2) * dx).sum::<f64>().sqrt();
        let v_error = state
            .rho
            .iter()
            .zip(&exact.rho)
            .map(|(a, b)| (1.0 / a - 1.0 / b).powi(2) * dx)
            .sum::<f64>()
            .sqrt();
        Ok(ConvergenceSample { cells, dt, steps, u_error, v_error })
    }
}

/// Observed orders `log2(e_k / e_{k+1})` between successive refinements.
pub fn observed_orders(errors: &[f64]) -> Vec<f64> {
    errors.windows(2).map(|w| (w[0] / w[1]).log2()).collect()
}
