//! TOML run configuration.
//!
//! ```toml
//! label = "plasma-bump"
//!
//! [physics]
//! alpha = 0.9
//! gamma = 1.5
//! dim = 3
//! kappa = -1
//!
//! [grid]
//! cells = 128
//!
//! [initial]
//! kind = "gaussian-bump"
//! amplitude = 5.0
//! rho_min = 0.5
//!
//! [stepper]
//! scheme = "semi-implicit-viscous"
//! t_end = 1.0
//!
//! [output]
//! dir = "out"
//! ```

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use nsp_core::admissibility::ExponentPair;
use nsp_core::diagnostics::DiagnosticsOptions;
use nsp_core::initial::{InitialDataSpec, Profile};
use nsp_core::solver::{Cadence, StepperConfig};

use crate::{io_err, CliError};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    /// Free-form tag copied into the report; runs carry no randomness.
    #[serde(default)]
    pub label: String,
    /// Run even when the exponents fail their regime's hypotheses.
    #[serde(default)]
    pub allow_inadmissible: bool,
    pub physics: ExponentPair,
    pub grid: GridConfig,
    pub initial: InitialDataSpec,
    pub stepper: StepperConfig,
    #[serde(default)]
    pub cadence: Cadence,
    #[serde(default)]
    pub diagnostics: DiagnosticsOptions,
    pub output: OutputConfig,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridConfig {
    pub cells: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub dir: PathBuf,
}

impl RunConfig {
    /// Parses and validates; errors name the offending line when the key
    /// appears in `text`.
    pub fn parse(text: &str) -> Result<Self, CliError> {
        let config: RunConfig = toml::from_str(text).map_err(|e| CliError::Config(e.to_string()))?;
        config.validate(text)?;
        Ok(config)
    }

    /// Reads `path` and resolves relative paths against its directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        let mut config = Self::parse(&text).map_err(|e| match e {
            CliError::Config(m) => CliError::Config(format!("{}: {m}", path.display())),
            other => other,
        })?;
        config.resolve_paths(path.parent().unwrap_or(Path::new(".")));
        Ok(config)
    }

    pub fn resolve_paths(&mut self, base: &Path) {
        if self.output.dir.is_relative() {
            self.output.dir = base.join(&self.output.dir);
        }
        if let Profile::Tabulated { path } = &mut self.initial.profile {
            if path.is_relative() {
                *path = base.join(&*path);
            }
        }
    }

    /// Canonical text: every field spelled out, fixed table order.
    pub fn to_canonical(&self) -> String {
        toml::to_string(self).expect("run config serializes to TOML")
    }

    fn validate(&self, text: &str) -> Result<(), CliError> {
        let s = &self.stepper;
        let t = &s.thresholds;
        let checks: [(&str, &str, bool, String); 11] = [
            ("grid", "cells", self.grid.cells >= 2, format!("need at least 2 cells, got {}", self.grid.cells)),
            ("physics", "dim", matches!(self.physics.n, 2 | 3), format!("dim must be 2 or 3, got {}", self.physics.n)),
            ("physics", "kappa", self.physics.kappa.abs() == 1, format!("kappa must be -1 or 1, got {}", self.physics.kappa)),
            ("physics", "alpha", self.physics.alpha > 0.0, format!("alpha must be positive, got {}", self.physics.alpha)),
            ("physics", "gamma", self.physics.gamma > 0.0, format!("gamma must be positive, got {}", self.physics.gamma)),
            ("initial", "rho_min", self.initial.rho_min > 0.0, format!("rho_min must be positive, got {}", self.initial.rho_min)),
            ("stepper", "cfl_safety", s.cfl_safety > 0.0 && s.cfl_safety <= 1.0, format!("cfl_safety must lie in (0, 1], got {}", s.cfl_safety)),
            ("stepper", "dt_min", s.dt_min > 0.0 && s.dt_min <= s.dt_max, format!("need 0 < dt_min <= dt_max, got {} and {}", s.dt_min, s.dt_max)),
            ("stepper", "t_end", s.t_end.is_finite() && s.t_end >= 0.0, format!("t_end must be finite and nonnegative, got {}", s.t_end)),
            ("stepper", "viscous_theta", (0.5..=1.0).contains(&s.viscous_theta), format!("viscous_theta must lie in [0.5, 1], got {}", s.viscous_theta)),
            ("stepper.thresholds", "floor", t.floor > 0.0 && t.floor < t.ceiling, "blow-up thresholds need 0 < floor < ceiling".to_string()),
        ];
        for (table, key, ok, message) in checks {
            if !ok {
                return Err(anchored(text, table, key, &message));
            }
        }
        if let Some(dt) = s.fixed_dt {
            if !(dt > 0.0) {
                return Err(anchored(text, "stepper", "fixed_dt", &format!("fixed_dt must be positive, got {dt}")));
            }
        }
        if let Some(h) = self.cadence.every_tau {
            if !(h > 0.0) {
                return Err(anchored(text, "cadence", "every_tau", &format!("every_tau must be positive, got {h}")));
            }
        }
        if self.diagnostics.lp_orders.iter().any(|&p| p == 0 || !p.is_multiple_of(2)) {
            return Err(anchored(text, "diagnostics", "lp_orders", "lp_orders must be positive even integers"));
        }
        // Anything the checks above missed.
        s.validate().map_err(|e| CliError::Config(e.to_string()))
    }
}

fn anchored(text: &str, table: &str, key: &str, message: &str) -> CliError {
    match find_key_line(text, table, key) {
        Some(line) => CliError::Config(format!("line {line}: [{table}] {key}: {message}")),
        None => CliError::Config(format!("[{table}] {key}: {message}")),
    }
}

/// 1-based line of `key = ...` inside `[table]`, if written out.
pub fn find_key_line(text: &str, table: &str, key: &str) -> Option<usize> {
    let mut current = String::new();
    for (i, raw) in text.lines().enumerate() {
        let line = raw.trim();
        if let Some(header) = line.strip_prefix('[').and_then(|l| l.strip_suffix(']')) {
            current = header.trim().to_string();
            continue;
        }
        if current == table {
            if let Some((k, _)) = line.split_once('=') {
                if k.trim() == key {
                    return Some(i + 1);
                }
            }
        }
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;

    pub(crate) const STEADY: &str = r#"
label = "steady"

[physics]
alpha = 0.9
gamma = 1.5
dim = 3
kappa = -1

[grid]
cells = 32

[initial]
kind = "constant"
value = 1.0
rho_min = 0.5

[stepper]
scheme = "explicit-ssp2"
t_end = 0.01

[output]
dir = "out"
"#;

    #[test]
    fn parses_with_defaults() {
        let c = RunConfig::parse(STEADY).unwrap();
        assert_eq!(c.grid.cells, 32);
        assert_eq!(c.stepper.cfl_safety, 0.4);
        assert_eq!(c.cadence.every_steps, 1);
        assert_eq!(c.diagnostics.lp_orders, vec![2, 4, 8]);
        assert!(!c.allow_inadmissible);
    }

    #[test]
    fn canonical_form_is_a_fixed_point() {
        let c = RunConfig::parse(STEADY).unwrap();
        let once = c.to_canonical();
        let back = RunConfig::parse(&once).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.to_canonical(), once);
    }

    #[test]
    fn semantic_errors_are_line_anchored() {
        let bad = STEADY.replace("cells = 32", "cells = 1");
        let msg = RunConfig::parse(&bad).unwrap_err().to_string();
        assert!(msg.contains("line 11") && msg.contains("cells"), "{msg}");
    }

    #[test]
    fn syntax_errors_carry_a_position() {
        let bad = STEADY.replace("gamma = 1.5", "gamma = ");
        let msg = RunConfig::parse(&bad).unwrap_err().to_string();
        assert!(msg.contains("line 6"), "{msg}");
    }

    #[test]
    fn unknown_keys_are_rejected() {
        let bad = format!("colour = 3\n{STEADY}");
        assert!(RunConfig::parse(&bad).is_err());
    }

    #[test]
    fn relative_paths_follow_the_config_file() {
        let mut c = RunConfig::parse(STEADY).unwrap();
        c.resolve_paths(Path::new("/data/runs"));
        assert_eq!(c.output.dir, Path::new("/data/runs/out"));
    }
}
