//! A single run: initial data, time integration, and the three output files.

use std::fs::{self, File};
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use serde::Serialize;

use nsp_core::admissibility::{validate_params, Regime, Violation};
use nsp_core::diagnostics::{DiagnosticsSink, EstimateLedger, MomentSpec, NdjsonSink};
use nsp_core::initial::make_initial;
use nsp_core::physics::Coefficients;
use nsp_core::solver::{run, write_checkpoint, BlowupReport};
use nsp_core::state::{background_density, MassGrid};

use crate::{io_err, CliError, RunConfig, Status};

pub const DIAGNOSTICS_FILE: &str = "diagnostics.ndjson";
pub const CHECKPOINT_FILE: &str = "final_state.chk";
pub const REPORT_FILE: &str = "report.json";

#[derive(Debug, Clone, Serialize)]
pub struct Admissibility {
    pub admissible: bool,
    pub overridden: bool,
    pub regime: Option<Regime>,
    pub violations: Vec<Violation>,
}

impl Admissibility {
    pub fn of(config: &RunConfig) -> Self {
        let violations = validate_params(&config.physics);
        Self {
            admissible: violations.is_empty(),
            overridden: !violations.is_empty() && config.allow_inadmissible,
            regime: config.physics.regime(),
            violations,
        }
    }

    pub fn summary(&self) -> String {
        self.violations.iter().map(|v| v.to_string()).collect::<Vec<_>>().join("; ")
    }
}

/// Contents of `report.json`.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub label: String,
    pub status: &'static str,
    pub blowup: BlowupReport,
    pub steps: u64,
    pub records: u64,
    pub final_tau: f64,
    pub admissibility: Admissibility,
    pub ledger: EstimateLedger,
}

impl RunReport {
    pub fn status(&self) -> Status {
        if self.blowup.triggered {
            Status::Blowup
        } else {
            Status::Completed
        }
    }
}

/// Runs `config` into `config.output.dir`.
///
/// Config-stage failures (inadmissible exponents without the override,
/// initial data violating its floor) return before anything is written.
pub fn execute(config: &RunConfig) -> Result<RunReport, CliError> {
    let admissibility = Admissibility::of(config);
    if !admissibility.admissible && !config.allow_inadmissible {
        return Err(CliError::Inadmissible(admissibility.summary()));
    }
    let grid = MassGrid::new(config.grid.cells).map_err(|e| CliError::Config(format!("grid: {e}")))?;
    let initial = make_initial(&config.initial, grid, config.physics.n)
        .map_err(|e| CliError::Config(format!("initial data: {e}")))?;
    let coeffs = Coefficients::from_pair(&config.physics, background_density(&initial))
        .map_err(|e| CliError::Config(format!("physics: {e}")))?;
    let mut options = config.diagnostics.clone();
    if options.moment.is_none() {
        options.moment = MomentSpec::from_coefficients(&coeffs);
    }

    let dir = &config.output.dir;
    fs::create_dir_all(dir).map_err(io_err(dir))?;
    let diag_path = dir.join(DIAGNOSTICS_FILE);
    let file = File::create(&diag_path).map_err(io_err(&diag_path))?;
    let mut sink = NdjsonSink::new(BufWriter::new(file));
    let outcome = run(&initial, &coeffs, &config.stepper, &config.cadence, &options, &mut sink);
    // Keep whatever was streamed even if the run itself failed.
    sink.flush().map_err(io_err(&diag_path))?;
    let outcome = outcome?;

    write_checkpoint(&outcome.final_state, &dir.join(CHECKPOINT_FILE))?;
    let report = RunReport {
        label: config.label.clone(),
        status: if outcome.report.triggered { "blowup" } else { "completed" },
        blowup: outcome.report,
        steps: outcome.steps,
        records: outcome.records,
        final_tau: outcome.final_state.tau,
        admissibility,
        ledger: outcome.ledger,
    };
    write_json(&dir.join(REPORT_FILE), &report)?;
    Ok(report)
}

pub(crate) fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<(), CliError> {
    let mut text = serde_json::to_string_pretty(value).expect("report serializes");
    text.push('\n');
    fs::write(path, text).map_err(io_err(path))
}

/// `nsp run <config> [--out DIR]`.
pub fn cmd_run(config_path: &Path, out: Option<PathBuf>) -> Result<Status, CliError> {
    let mut config = RunConfig::load(config_path)?;
    if let Some(dir) = out {
        config.output.dir = dir;
    }
    let report = execute(&config)?;
    if report.blowup.triggered {
        eprintln!(
            "blow-up ({:?}) at tau = {:?} after {} steps",
            report.blowup.cause, report.blowup.time, report.steps
        );
    }
    Ok(report.status())
}
