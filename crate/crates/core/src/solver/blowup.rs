//! Blow-up detection.

use serde::{Deserialize, Serialize};

use crate::state::FluidState;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupThresholds {
    pub ceiling: f64,
    pub floor: f64,
}

impl Default for BlowupThresholds {
    fn default() -> Self {
        Self { ceiling: 1e8, floor: 1e-8 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum BlowupCause {
    DensityCeiling,
    VacuumFloor,
    NonFinite,
    DtCollapse,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BlowupReport {
    pub triggered: bool,
    pub cause: Option<BlowupCause>,
    pub time: Option<f64>,
    /// Cell index for density causes, node index for velocity.
    pub location: Option<usize>,
}

impl BlowupReport {
    pub fn none() -> Self {
        Self { triggered: false, cause: None, time: None, location: None }
    }

    pub fn at(cause: BlowupCause, time: f64, location: Option<usize>) -> Self {
        Self { triggered: true, cause: Some(cause), time: Some(time), location }
    }
}

/// First offending cell in index order, then non-finite velocities.
pub fn detect_blowup(state: &FluidState, thresholds: &BlowupThresholds) -> BlowupReport {
    for (i, &d) in state.rho.iter().enumerate() {
        let cause = if !d.is_finite() {
            BlowupCause::NonFinite
        } else if d > thresholds.ceiling {
            BlowupCause::DensityCeiling
        } else if d < thresholds.floor {
            BlowupCause::VacuumFloor
        } else {
            continue;
        };
        return BlowupReport::at(cause, state.tau, Some(i));
    }
    if let Some(j) = state.u.iter().position(|u| !u.is_finite()) {
        return BlowupReport::at(BlowupCause::NonFinite, state.tau, Some(j));
    }
    BlowupReport::none()
}
