//! Estimate functionals, per-step records, the running ledger and sinks.

mod functionals;
mod ledger;
mod sink;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

pub use functionals::*;
pub use ledger::{merge_ledgers, update_ledger, EstimateLedger};
pub use sink::{flatten_record, CsvSink, DiagnosticsSink, NdjsonSink, NullSink};

use crate::admissibility::window_chain;
use crate::physics::{effective_velocity, Coefficients};
use crate::poisson::{phi_energy_check, phi_grad_l2, solve_phi_with_tolerance};
use crate::state::{specific_volume_integral, FluidState};

/// Exponents for the high-moment ratio `int rho |u|^{2k} / R_T^{2 k sigma}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MomentSpec {
    pub k: f64,
    pub sigma: f64,
}

impl MomentSpec {
    /// Selected order and the `sigma` witness of the window chain, when the
    /// coefficients lie in the three-dimensional `alpha < 1` region.
    pub fn from_coefficients(c: &Coefficients) -> Option<Self> {
        if c.dim != 3 || c.alpha >= 1.0 {
            return None;
        }
        let chain = window_chain(c.alpha, c.gamma).ok()?;
        let sigma = chain.sigma_for_gamma.witness.or(chain.sigma.witness)?;
        Some(Self { k: chain.selection.k_value(), sigma })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsOptions {
    /// Small exponent of the weighted density norm.
    #[serde(default = "default_xi")]
    pub xi: f64,
    /// Even orders `2n` for `lp_u` and `lp_w`.
    #[serde(default = "default_orders")]
    pub lp_orders: Vec<u32>,
    #[serde(default)]
    pub moment: Option<MomentSpec>,
}

fn default_xi() -> f64 {
    1e-2
}

fn default_orders() -> Vec<u32> {
    vec![2, 4, 8]
}

impl Default for DiagnosticsOptions {
    fn default() -> Self {
        Self { xi: default_xi(), lp_orders: default_orders(), moment: None }
    }
}

/// One row of the diagnostics stream.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiagnosticsRecord {
    pub step: u64,
    pub tau: f64,
    pub dt: f64,
    pub energy: f64,
    pub kinetic_energy: f64,
    /// `kappa int x/r dx`, three dimensions only.
    pub poisson_energy: Option<f64>,
    /// The weighted gradient functional bounded by the energy estimate.
    pub dissipation_rate: f64,
    /// Exact energy loss rate of the semi-discrete scheme.
    pub energy_dissipation_rate: f64,
    pub source_power: f64,
    /// `int_0^tau energy_dissipation_rate`, left-point rule per step.
    pub dissipation_integral: f64,
    /// `int_0^tau source_power`, left-point rule per step.
    pub source_integral: f64,
    pub energy_balance_residual: f64,
    pub bd_entropy: f64,
    pub bd_dissipation_rate: f64,
    pub weighted_density_norm: f64,
    pub xr_constants: BTreeMap<String, f64>,
    pub lp_u: BTreeMap<String, f64>,
    pub lp_w: BTreeMap<String, f64>,
    pub rho_max: f64,
    pub rho_min: f64,
    pub v_integral: f64,
    pub v_drift: f64,
    pub phi_grad_l2: f64,
    /// `||grad Phi||^2 / (||rho - rho_bar||_{6/5} ||grad Phi||)`, three dimensions.
    pub phi_energy_ratio: Option<f64>,
    pub grad_rho_max: f64,
    pub grad_u_max: f64,
    pub r_t: f64,
    pub v_t: f64,
    pub high_moment_ratio: Option<f64>,
    pub radius_drift: Option<f64>,
    pub w_tracking_error: Option<f64>,
}

/// Run-level quantities a record needs besides the state.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RecordContext {
    pub step: u64,
    pub dt: f64,
    pub dissipation_integral: f64,
    pub source_integral: f64,
    pub v_integral_initial: f64,
    pub r_t: f64,
    pub v_t: f64,
}

impl RecordContext {
    pub fn initial(state: &FluidState) -> Self {
        Self {
            step: 0,
            dt: 0.0,
            dissipation_integral: 0.0,
            source_integral: 0.0,
            v_integral_initial: specific_volume_integral(state),
            r_t: state.rho_max() + 1.0,
            v_t: 1.0 / state.rho_min() + 1.0,
        }
    }
}

pub fn evaluate(
    state: &FluidState,
    c: &Coefficients,
    options: &DiagnosticsOptions,
    ctx: &RecordContext,
) -> DiagnosticsRecord {
    let kinetic = kinetic_energy(state);
    let w = effective_velocity(state, c);

    let mut xr_constants = BTreeMap::new();
    for kind in [XrKind::Energy, XrKind::Bd] {
        if let Some(e) = kind.exponent(c) {
            xr_constants.insert(kind.name().to_string(), xr_relation_constant(state, e));
        }
    }
    let weights = state.grid.node_weights();
    let mut lp_u = BTreeMap::new();
    let mut lp_w = BTreeMap::new();
    for &order in &options.lp_orders {
        lp_u.insert(order.to_string(), lp_integral(&state.u, &weights, order as f64));
        lp_w.insert(order.to_string(), lp_integral(&w, &weights, order as f64));
    }

    // The state's own background density makes the potential solvable by
    // construction; diagnostics never reject it.
    let field = solve_phi_with_tolerance(state, c, f64::INFINITY).ok();
    let phi_grad = field.as_ref().map_or(f64::NAN, |f| phi_grad_l2(state, f));
    let phi_energy_ratio = field
        .as_ref()
        .and_then(|f| phi_energy_check(state, f).ok())
        .map(|(lhs, rhs)| if rhs > 0.0 { lhs / rhs } else { 0.0 });

    let v_integral = specific_volume_integral(state);
    let high_moment_ratio = options.moment.map(|m| {
        // int rho |u|^{2k} r^{N-1} dr is the mass integral of |u|^{2k}.
        lp_integral(&state.u, &weights, 2.0 * m.k) / ctx.r_t.powf(2.0 * m.k * m.sigma)
    });
    let radius_drift = state
        .r_tracked
        .as_ref()
        .map(|rt| rt.iter().zip(&state.r).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max));
    let w_tracking_error = state.w_tracked.as_ref().map(|wt| interior_l2_difference(&w, wt, state.dx()));

    DiagnosticsRecord {
        step: ctx.step,
        tau: state.tau,
        dt: ctx.dt,
        energy: kinetic + internal_energy(state, c),
        kinetic_energy: kinetic,
        poisson_energy: (c.dim == 3).then(|| poisson_energy(state, c)),
        dissipation_rate: basic_dissipation(state, c),
        energy_dissipation_rate: energy_dissipation_rate(state, c),
        source_power: source_power(state, c),
        dissipation_integral: ctx.dissipation_integral,
        source_integral: ctx.source_integral,
        energy_balance_residual: 0.0,
        bd_entropy: 0.5 * lp_integral(&w, &weights, 2.0),
        bd_dissipation_rate: bd_dissipation(state, c),
        weighted_density_norm: weighted_density_norm(state, c, options.xi),
        xr_constants,
        lp_u,
        lp_w,
        rho_max: state.rho_max(),
        rho_min: state.rho_min(),
        v_integral,
        v_drift: (v_integral - ctx.v_integral_initial).abs() / ctx.v_integral_initial,
        phi_grad_l2: phi_grad,
        phi_energy_ratio,
        grad_rho_max: grad_rho_max(state),
        grad_u_max: grad_u_max(state),
        r_t: ctx.r_t,
        v_t: ctx.v_t,
        high_moment_ratio,
        radius_drift,
        w_tracking_error,
    }
}

/// `sqrt(sum_{0<j<M} (a_j - b_j)^2 dx)`.
pub fn interior_l2_difference(a: &[f64], b: &[f64], dx: f64) -> f64 {
    let n = a.len().min(b.len());
    (1..n.saturating_sub(1)).map(|j| (a[j] - b[j]).powi(2) * dx).sum::<f64>().sqrt()
}

/// `|(E_next - E_prev)/dtau + (I_D,next - I_D,prev)/dtau - (I_S,next - I_S,prev)/dtau|`.
///
/// The cumulative integrals use the left-point rule, so on a smooth run the
/// residual is first order in the step.
pub fn energy_balance_residual(prev: &DiagnosticsRecord, next: &DiagnosticsRecord) -> f64 {
    let dtau = next.tau - prev.tau;
    if dtau <= 0.0 {
        return 0.0;
    }
    ((next.energy - prev.energy) + (next.dissipation_integral - prev.dissipation_integral)
        - (next.source_integral - prev.source_integral))
        .abs()
        / dtau
}
