//! Time integration of the Lagrangian system.
//!
//! The integrated unknowns are the specific volume `v = 1/rho` on cells and
//! the velocity `u` on nodes. Radii are rebuilt from the density recursion
//! after every stage, which keeps the mass identity and the steady-state
//! cancellation of the source exact.

mod blowup;
mod checkpoint;
mod tridiag;

use serde::{Deserialize, Serialize};

pub use blowup::{detect_blowup, BlowupCause, BlowupReport, BlowupThresholds};
pub use checkpoint::{checkpoint_from_str, checkpoint_to_string, read_checkpoint, write_checkpoint};
pub use tridiag::solve_tridiagonal;

use crate::diagnostics::{
    energy_balance_residual, energy_dissipation_rate, evaluate, source_power, update_ledger, DiagnosticsOptions,
    DiagnosticsRecord, DiagnosticsSink, EstimateLedger, RecordContext,
};
use crate::physics::{cell_divergence, effective_velocity, momentum_parts, w_rhs, Coefficients};
use crate::state::{radius_from_density, FluidState};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Scheme {
    /// Two-stage strong-stability-preserving Runge–Kutta (Heun).
    ExplicitSsp2,
    /// Viscous divergence by the theta method, the rest forward Euler.
    SemiImplicitViscous,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepperConfig {
    pub scheme: Scheme,
    #[serde(default = "default_cfl")]
    pub cfl_safety: f64,
    #[serde(default = "default_dt_min")]
    pub dt_min: f64,
    #[serde(default = "default_dt_max")]
    pub dt_max: f64,
    pub t_end: f64,
    #[serde(default = "default_theta")]
    pub viscous_theta: f64,
    /// Overrides the adaptive step when set.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fixed_dt: Option<f64>,
    #[serde(default)]
    pub thresholds: BlowupThresholds,
    /// Also advance `r_tau = u` and report its drift from the recursion.
    #[serde(default)]
    pub integrate_radius: bool,
    /// Also advance the effective velocity by its own equation.
    #[serde(default)]
    pub track_w: bool,
}

fn default_theta() -> f64 {
    1.0
}

fn default_cfl() -> f64 {
    0.4
}

fn default_dt_min() -> f64 {
    1e-14
}

fn default_dt_max() -> f64 {
    1e-2
}

impl StepperConfig {
    pub fn new(scheme: Scheme, t_end: f64) -> Self {
        Self {
            scheme,
            cfl_safety: default_cfl(),
            dt_min: default_dt_min(),
            dt_max: default_dt_max(),
            t_end,
            viscous_theta: 1.0,
            fixed_dt: None,
            thresholds: BlowupThresholds::default(),
            integrate_radius: false,
            track_w: false,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: String| Err(Error::InvalidArgument(m));
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return bad(format!("cfl_safety must lie in (0, 1], got {}", self.cfl_safety));
        }
        if !(self.dt_min > 0.0 && self.dt_min <= self.dt_max) {
            return bad(format!("need 0 < dt_min <= dt_max, got {} and {}", self.dt_min, self.dt_max));
        }
        if !(self.t_end >= 0.0) || !self.t_end.is_finite() {
            return bad(format!("t_end must be finite and nonnegative, got {}", self.t_end));
        }
        if !(0.5..=1.0).contains(&self.viscous_theta) {
            return bad(format!("viscous_theta must lie in [0.5, 1], got {}", self.viscous_theta));
        }
        if let Some(dt) = self.fixed_dt {
            if !(dt > 0.0) {
                return bad(format!("fixed_dt must be positive, got {dt}"));
            }
        }
        if !(self.thresholds.floor > 0.0 && self.thresholds.floor < self.thresholds.ceiling) {
            return bad("blow-up thresholds need 0 < floor < ceiling".into());
        }
        Ok(())
    }
}

/// `cfl_safety` times the smallest per-cell bound, capped at `dt_max`.
///
/// The acoustic bound is `dx / (rho r^{N-1} c_s)` with `c_s^2 = gamma
/// rho^{gamma-1}`; the explicit scheme adds the viscous bound
/// `dx^2 / (2 alpha rho^{1+alpha} r^{2(N-1)})`. Radii are taken at the
/// outer node of each cell.
pub fn stable_dt(state: &FluidState, c: &Coefficients, config: &StepperConfig) -> Result<f64> {
    let dx = state.dx();
    let mut bound = f64::INFINITY;
    for (i, &d) in state.rho.iter().enumerate() {
        let rn1 = state.r[i + 1].powi(c.dim as i32 - 1);
        let sound = (c.gamma * d.powf(c.gamma - 1.0)).sqrt();
        bound = bound.min(dx / (d * rn1 * sound));
        if config.scheme == Scheme::ExplicitSsp2 && c.alpha > 0.0 {
            bound = bound.min(dx * dx / (2.0 * c.alpha * d.powf(1.0 + c.alpha) * rn1 * rn1));
        }
    }
    let dt = config.cfl_safety * bound;
    if !(dt >= config.dt_min) {
        return Err(Error::DtCollapse { dt, dt_min: config.dt_min });
    }
    Ok(dt.min(config.dt_max))
}

/// Nodal forcing `f(tau)` added to the momentum equation.
pub type Forcing<'a> = dyn Fn(f64) -> Vec<f64> + 'a;

pub fn step(state: &FluidState, c: &Coefficients, dt: f64, config: &StepperConfig) -> Result<FluidState> {
    step_forced(state, c, dt, config, None)
}

/// One step of the configured scheme, with an optional momentum forcing.
pub fn step_forced(
    state: &FluidState,
    c: &Coefficients,
    dt: f64,
    config: &StepperConfig,
    forcing: Option<&Forcing>,
) -> Result<FluidState> {
    if !(dt > 0.0) {
        return Err(Error::InvalidArgument(format!("dt must be positive, got {dt}")));
    }
    match config.scheme {
        Scheme::ExplicitSsp2 => step_ssp2(state, c, dt, forcing),
        Scheme::SemiImplicitViscous => step_semi_implicit(state, c, dt, config.viscous_theta, forcing),
    }
}

struct Rates {
    dv: Vec<f64>,
    du: Vec<f64>,
    dw: Option<Vec<f64>>,
}

fn rates(state: &FluidState, c: &Coefficients, forcing: Option<&Forcing>) -> Rates {
    let mut du = momentum_parts(state, c).total();
    add_forcing(&mut du, forcing, state.tau);
    Rates { dv: cell_divergence(state), du, dw: state.w_tracked.as_ref().map(|_| w_rhs(state, c)) }
}

fn add_forcing(du: &mut [f64], forcing: Option<&Forcing>, tau: f64) {
    if let Some(f) = forcing {
        let m = du.len() - 1;
        for (j, g) in f(tau).into_iter().enumerate().take(m).skip(1) {
            du[j] += g;
        }
    }
}

fn axpy(a: f64, x: &[f64], y: &[f64], h: f64) -> Vec<f64> {
    x.iter().zip(y).map(|(xi, yi)| a * xi + h * yi).collect()
}

/// Builds the state for new `(v, u)`, pinning the boundary velocity and
/// rebuilding radii.
fn assemble(template: &FluidState, v: &[f64], mut u: Vec<f64>, tau: f64) -> Result<FluidState> {
    let m = u.len() - 1;
    u[0] = 0.0;
    u[m] = 0.0;
    let rho: Vec<f64> = v.iter().map(|v| 1.0 / v).collect();
    if let Some((index, &value)) = v.iter().enumerate().find(|(_, v)| !(**v > 0.0) || !v.is_finite()) {
        return Err(Error::NonPositiveDensity { index, value: if value.is_finite() { 1.0 / value } else { f64::NAN } });
    }
    let r = radius_from_density(&rho, template.dim)?;
    Ok(FluidState {
        dim: template.dim,
        grid: template.grid,
        rho,
        u,
        r,
        tau,
        w_tracked: None,
        r_tracked: None,
    })
}

fn step_ssp2(s0: &FluidState, c: &Coefficients, dt: f64, forcing: Option<&Forcing>) -> Result<FluidState> {
    let v0: Vec<f64> = s0.rho.iter().map(|d| 1.0 / d).collect();
    let k0 = rates(s0, c, forcing);
    let v1 = axpy(1.0, &v0, &k0.dv, dt);
    let mut s1 = assemble(s0, &v1, axpy(1.0, &s0.u, &k0.du, dt), s0.tau + dt)?;
    s1.w_tracked = s0.w_tracked.as_ref().zip(k0.dw.as_ref()).map(|(w, dw)| axpy(1.0, w, dw, dt));
    s1.r_tracked = s0.r_tracked.as_ref().map(|r| axpy(1.0, r, &s0.u, dt));

    let k1 = rates(&s1, c, forcing);
    let half = |a: &[f64], b: &[f64], db: &[f64]| -> Vec<f64> {
        a.iter().zip(b).zip(db).map(|((a, b), d)| 0.5 * a + 0.5 * (b + dt * d)).collect()
    };
    let v2 = half(&v0, &v1, &k1.dv);
    let mut s2 = assemble(s0, &v2, half(&s0.u, &s1.u, &k1.du), s0.tau + dt)?;
    s2.w_tracked = match (&s0.w_tracked, &s1.w_tracked, &k1.dw) {
        (Some(w0), Some(w1), Some(dw1)) => Some(half(w0, w1, dw1)),
        _ => None,
    };
    s2.r_tracked = match (&s0.r_tracked, &s1.r_tracked) {
        (Some(r0), Some(r1)) => Some(half(r0, r1, &s1.u)),
        _ => None,
    };
    Ok(s2)
}

/// Bands of the viscous operator `(V u)_j = alpha R_j (a_j D_j - a_{j-1} D_{j-1}) / dx`
/// on the interior nodes, with `R = r^{N-1}`, `a = rho^{1+alpha}`.
fn viscous_bands(state: &FluidState, c: &Coefficients) -> (Vec<f64>, Vec<f64>, Vec<f64>) {
    let m = state.cells();
    let dx2 = state.dx() * state.dx();
    let big_r: Vec<f64> = state.r.iter().map(|r| r.powi(c.dim as i32 - 1)).collect();
    let a: Vec<f64> = state.rho.iter().map(|d| d.powf(1.0 + c.alpha)).collect();
    let n = m - 1;
    let (mut lower, mut diag, mut upper) = (vec![0.0; n], vec![0.0; n], vec![0.0; n]);
    for k in 0..n {
        let j = k + 1;
        let scale = c.alpha * big_r[j] / dx2;
        lower[k] = scale * a[j - 1] * big_r[j - 1];
        diag[k] = -scale * (a[j] + a[j - 1]) * big_r[j];
        upper[k] = scale * a[j] * big_r[j + 1];
    }
    (lower, diag, upper)
}

fn step_semi_implicit(
    s0: &FluidState,
    c: &Coefficients,
    dt: f64,
    theta: f64,
    forcing: Option<&Forcing>,
) -> Result<FluidState> {
    let m = s0.cells();
    let parts = momentum_parts(s0, c);
    let mut explicit = parts.explicit;
    add_forcing(&mut explicit, forcing, s0.tau);

    // (I - theta dt V) u* = u + dt E + (1 - theta) dt V u.
    let (lower, diag, upper) = viscous_bands(s0, c);
    let rhs: Vec<f64> =
        (1..m).map(|j| s0.u[j] + dt * explicit[j] + (1.0 - theta) * dt * parts.viscous[j]).collect();
    let lo: Vec<f64> = lower.iter().map(|v| -theta * dt * v).collect();
    let di: Vec<f64> = diag.iter().map(|v| 1.0 - theta * dt * v).collect();
    let up: Vec<f64> = upper.iter().map(|v| -theta * dt * v).collect();
    let interior = solve_tridiagonal(&lo, &di, &up, &rhs)?;
    let mut u = vec![0.0; m + 1];
    u[1..m].copy_from_slice(&interior);

    // Continuity with the new velocity on the old radii.
    let provisional = FluidState { u: u.clone(), ..s0.clone() };
    let dv = cell_divergence(&provisional);
    let v: Vec<f64> = s0.rho.iter().zip(&dv).map(|(d, g)| 1.0 / d + dt * g).collect();
    let mut s1 = assemble(s0, &v, u, s0.tau + dt)?;
    s1.w_tracked = s0.w_tracked.as_ref().map(|w| axpy(1.0, w, &w_rhs(s0, c), dt));
    s1.r_tracked = s0.r_tracked.as_ref().map(|r| axpy(1.0, r, &s1.u, dt));
    Ok(s1)
}

/// When to emit a record; the initial and final states are always emitted.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Cadence {
    /// Every this many steps (0 disables the step trigger).
    #[serde(default = "default_every_steps")]
    pub every_steps: u64,
    /// Whenever `tau` crosses a multiple of this interval.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub every_tau: Option<f64>,
}

fn default_every_steps() -> u64 {
    1
}

impl Default for Cadence {
    fn default() -> Self {
        Self { every_steps: 1, every_tau: None }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunOutcome {
    pub final_state: FluidState,
    pub report: BlowupReport,
    pub ledger: EstimateLedger,
    pub steps: u64,
    pub records: u64,
}

/// Advances `initial` to `config.t_end`, streaming records to `sink`.
///
/// Numerical collapse (non-finite values, density leaving the thresholds,
/// step-size collapse) ends the run with a triggered report rather than an
/// error. Sink failures abort with [`Error::Sink`].
pub fn run(
    initial: &FluidState,
    c: &Coefficients,
    config: &StepperConfig,
    cadence: &Cadence,
    options: &DiagnosticsOptions,
    sink: &mut dyn DiagnosticsSink,
) -> Result<RunOutcome> {
    config.validate()?;
    let mut state = initial.clone();
    if config.track_w && state.w_tracked.is_none() {
        state.w_tracked = Some(effective_velocity(&state, c));
    }
    if config.integrate_radius && state.r_tracked.is_none() {
        state.r_tracked = Some(state.r.clone());
    }
    let mut outcome = RunOutcome {
        final_state: state.clone(),
        report: BlowupReport::none(),
        ledger: EstimateLedger::default(),
        steps: 0,
        records: 0,
    };
    if config.t_end <= state.tau {
        return Ok(outcome);
    }

    let report = detect_blowup(&state, &config.thresholds);
    let mut ctx = RecordContext::initial(&state);
    let mut previous: Option<DiagnosticsRecord> = None;
    let mut emit = |state: &FluidState, ctx: &mut RecordContext, outcome: &mut RunOutcome| -> Result<()> {
        ctx.r_t = ctx.r_t.max(state.rho_max() + 1.0);
        ctx.v_t = ctx.v_t.max(1.0 / state.rho_min() + 1.0);
        let mut record = evaluate(state, c, options, ctx);
        if let Some(prev) = &previous {
            record.energy_balance_residual = energy_balance_residual(prev, &record);
        }
        sink.emit(&record).map_err(Error::Sink)?;
        outcome.ledger = update_ledger(std::mem::take(&mut outcome.ledger), &record);
        outcome.records += 1;
        previous = Some(record);
        Ok(())
    };
    emit(&state, &mut ctx, &mut outcome)?;
    if report.triggered {
        outcome.report = report;
        sink.flush().map_err(Error::Sink)?;
        return Ok(outcome);
    }

    let t_end = config.t_end;
    let mut next_tau_mark = cadence.every_tau.map(|h| state.tau + h);
    while state.tau < t_end {
        let remaining = t_end - state.tau;
        let dt = match config.fixed_dt {
            Some(dt) => dt,
            None => match stable_dt(&state, c, config) {
                Ok(dt) => dt,
                Err(Error::DtCollapse { .. }) => {
                    outcome.report = BlowupReport::at(BlowupCause::DtCollapse, state.tau, None);
                    break;
                }
                Err(e) => return Err(e),
            },
        };
        // Absorb a sliver of remaining time into this step rather than
        // taking a tiny final one.
        let last = dt >= remaining * (1.0 - 1e-12);
        let dt = if last { remaining } else { dt };

        let dissipation = energy_dissipation_rate(&state, c);
        let source = source_power(&state, c);
        let next = match step(&state, c, dt, config) {
            Ok(s) => s,
            Err(Error::NonPositiveDensity { index, value }) => {
                let cause = if value.is_nan() { BlowupCause::NonFinite } else { BlowupCause::VacuumFloor };
                outcome.report = BlowupReport::at(cause, state.tau + dt, Some(index));
                break;
            }
            Err(e) => return Err(e),
        };
        state = next;
        if last {
            state.tau = t_end;
        }
        outcome.steps += 1;
        ctx.step = outcome.steps;
        ctx.dt = dt;
        ctx.dissipation_integral += dt * dissipation;
        ctx.source_integral += dt * source;

        let report = detect_blowup(&state, &config.thresholds);
        let done = state.tau >= t_end || report.triggered;
        let by_steps = cadence.every_steps > 0 && outcome.steps.is_multiple_of(cadence.every_steps);
        let by_tau = match (next_tau_mark.as_mut(), cadence.every_tau) {
            (Some(mark), Some(h)) if state.tau >= *mark => {
                while *mark <= state.tau {
                    *mark += h;
                }
                true
            }
            _ => false,
        };
        if by_steps || by_tau || done {
            emit(&state, &mut ctx, &mut outcome)?;
        }
        if report.triggered {
            outcome.report = report;
            break;
        }
    }
    sink.flush().map_err(Error::Sink)?;
    outcome.final_state = state;
    Ok(outcome)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagnostics::NullSink;

    fn coeffs(dim: usize, kappa: f64) -> Coefficients {
        Coefficients::new(0.9, 1.5, kappa, dim, 1.0).unwrap()
    }

    #[test]
    fn acoustic_bound_at_unit_density() {
        let c = Coefficients::new(0.9, 2.0, 1.0, 3, 1.0).unwrap();
        let s = FluidState::uniform(3, 64, 1.0).unwrap();
        let mut cfg = StepperConfig::new(Scheme::SemiImplicitViscous, 1.0);
        cfg.cfl_safety = 1.0;
        cfg.dt_max = 1.0;
        let expected = s.dx() / (2f64.sqrt() * s.outer_radius().powi(2));
        assert!((stable_dt(&s, &c, &cfg).unwrap() - expected).abs() < 1e-15);
    }

    #[test]
    fn bounds_scale_with_resolution() {
        let c = coeffs(3, 1.0);
        let mut cfg = StepperConfig::new(Scheme::SemiImplicitViscous, 1.0);
        cfg.dt_max = 1.0;
        let a = stable_dt(&FluidState::uniform(3, 64, 1.0).unwrap(), &c, &cfg).unwrap();
        let b = stable_dt(&FluidState::uniform(3, 128, 1.0).unwrap(), &c, &cfg).unwrap();
        assert!((a / b - 2.0).abs() < 1e-12);
        cfg.scheme = Scheme::ExplicitSsp2;
        let a = stable_dt(&FluidState::uniform(3, 64, 1.0).unwrap(), &c, &cfg).unwrap();
        let b = stable_dt(&FluidState::uniform(3, 128, 1.0).unwrap(), &c, &cfg).unwrap();
        assert!((a / b - 4.0).abs() < 1e-12);
    }

    #[test]
    fn semi_implicit_ignores_viscosity_at_high_density() {
        let c = coeffs(3, 1.0);
        let s = FluidState::uniform(3, 64, 1e4).unwrap();
        let mut cfg = StepperConfig::new(Scheme::SemiImplicitViscous, 1.0);
        cfg.dt_max = 1.0;
        let dx = s.dx();
        let sound = (1.5 * 1e4f64.powf(0.5)).sqrt();
        let expected = cfg.cfl_safety * dx / (1e4 * s.outer_radius().powi(2) * sound);
        assert!((stable_dt(&s, &c, &cfg).unwrap() - expected).abs() < 1e-12 * expected);
        cfg.scheme = Scheme::ExplicitSsp2;
        assert!(stable_dt(&s, &c, &cfg).unwrap() < expected);
    }

    #[test]
    fn collapse_reported() {
        let c = coeffs(3, 1.0);
        let s = FluidState::uniform(3, 64, 1.0).unwrap();
        let mut cfg = StepperConfig::new(Scheme::ExplicitSsp2, 1.0);
        cfg.dt_min = 1.0;
        cfg.dt_max = 2.0;
        assert!(matches!(stable_dt(&s, &c, &cfg), Err(Error::DtCollapse { .. })));
    }

    #[test]
    fn steady_state_is_fixed() {
        for scheme in [Scheme::ExplicitSsp2, Scheme::SemiImplicitViscous] {
            for dim in [2, 3] {
                let c = coeffs(dim, -1.0);
                let s = FluidState::uniform(dim, 32, 1.0).unwrap();
                // Any step for the implicit scheme; the explicit one only
                // stays quiet inside its stability bound.
                let cfg = StepperConfig::new(scheme, 1.0);
                let dt = if scheme == Scheme::ExplicitSsp2 { stable_dt(&s, &c, &cfg).unwrap() } else { 0.5 };
                let next = step(&s, &c, dt, &cfg).unwrap();
                let umax = next.u.iter().fold(0.0f64, |a, u| a.max(u.abs()));
                assert!(umax < 1e-14, "{scheme:?} {dim} {umax}");
                assert!(next.rho.iter().all(|d| (d - 1.0).abs() < 1e-14));
            }
        }
    }

    #[test]
    fn ssp2_differs_from_euler_at_second_order() {
        // The two schemes agree to O(dt^2) per step: halving dt quarters the gap.
        let c = coeffs(3, 1.0);
        let rho: Vec<f64> = (0..32).map(|i| 1.0 + 0.2 * (i as f64 * 0.2).cos()).collect();
        let mut s = FluidState::new(3, rho, vec![0.0; 33], 0.0).unwrap();
        let rb = crate::state::background_density(&s);
        let c = Coefficients { rho_bar: rb, ..c };
        s.u = (0..=32).map(|j| 0.1 * (std::f64::consts::PI * j as f64 / 32.0).sin()).collect();
        s.u[32] = 0.0;
        let gap = |dt: f64| {
            let a = step(&s, &c, dt, &StepperConfig::new(Scheme::ExplicitSsp2, 1.0)).unwrap();
            let mut euler = StepperConfig::new(Scheme::SemiImplicitViscous, 1.0);
            euler.viscous_theta = 0.5;
            // theta = 1/2 still differs at O(dt^2) from Heun; forward Euler
            // is recovered by a direct update below.
            let _ = euler;
            let du = momentum_parts(&s, &c).total();
            a.u.iter().zip(&s.u).zip(&du).map(|((a, u), d)| (a - (u + dt * d)).abs()).fold(0.0, f64::max)
        };
        let (g1, g2) = (gap(1e-4), gap(5e-5));
        assert!((g1 / g2 - 4.0).abs() < 0.2, "{}", g1 / g2);
    }

    #[test]
    fn zero_end_time_returns_initial() {
        let s = FluidState::uniform(3, 16, 1.0).unwrap();
        let mut sink: Vec<DiagnosticsRecord> = Vec::new();
        let cfg = StepperConfig::new(Scheme::SemiImplicitViscous, 0.0);
        let out = run(&s, &coeffs(3, 1.0), &cfg, &Cadence::default(), &DiagnosticsOptions::default(), &mut sink)
            .unwrap();
        assert!(sink.is_empty());
        assert_eq!(out.final_state, s);
        assert_eq!(out.steps, 0);
    }

    #[test]
    fn steady_run_stays_put() {
        let s = FluidState::uniform(3, 32, 1.0).unwrap();
        let mut cfg = StepperConfig::new(Scheme::SemiImplicitViscous, 10.0);
        cfg.dt_max = 0.05;
        let out =
            run(&s, &coeffs(3, 1.0), &cfg, &Cadence { every_steps: 50, every_tau: None }, &DiagnosticsOptions::default(), &mut NullSink)
                .unwrap();
        assert!(!out.report.triggered);
        assert_eq!(out.final_state.tau, 10.0);
        assert!(out.final_state.u.iter().all(|u| u.abs() < 1e-12));
        assert!(out.final_state.rho.iter().all(|d| (d - 1.0).abs() < 1e-12));
        assert_eq!((out.ledger.r_t, out.ledger.v_t), (2.0, 2.0));
    }

    #[test]
    fn collapse_becomes_report() {
        let s = FluidState::uniform(3, 16, 1.0).unwrap();
        let mut cfg = StepperConfig::new(Scheme::ExplicitSsp2, 1.0);
        cfg.dt_min = 0.5;
        cfg.dt_max = 1.0;
        let out = run(&s, &coeffs(3, 1.0), &cfg, &Cadence::default(), &DiagnosticsOptions::default(), &mut NullSink)
            .unwrap();
        assert_eq!(out.report.cause, Some(BlowupCause::DtCollapse));
    }

    #[test]
    fn radius_tracking_drift_is_small() {
        let rho: Vec<f64> = (0..64).map(|i| 1.0 + 0.3 * (i as f64 / 10.0).sin()).collect();
        let mut s = FluidState::new(3, rho, vec![0.0; 65], 0.0).unwrap();
        let c = Coefficients { rho_bar: crate::state::background_density(&s), ..coeffs(3, -1.0) };
        s.tau = 0.0;
        let mut cfg = StepperConfig::new(Scheme::ExplicitSsp2, 0.05);
        cfg.integrate_radius = true;
        let mut sink = Vec::new();
        let out = run(&s, &c, &cfg, &Cadence::default(), &DiagnosticsOptions::default(), &mut sink).unwrap();
        let drift = sink.last().unwrap().radius_drift.unwrap();
        assert!(drift > 0.0 && drift < 1e-4, "{drift}");
        assert!(out.final_state.r_tracked.is_some());
    }
}
