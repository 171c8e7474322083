//! Cartesian parameter sweeps over dotted config keys.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use rayon::prelude::*;

use crate::run::{execute, Admissibility, RunReport};
use crate::{io_err, CliError, RunConfig, Status};

pub const SUMMARY_FILE: &str = "sweep_summary.csv";
pub const MAX_AXES: usize = 3;

/// `key=lo:hi:n`, `n` evenly spaced values including both ends.
#[derive(Debug, Clone, PartialEq)]
pub struct Axis {
    pub key: String,
    pub lo: f64,
    pub hi: f64,
    pub n: usize,
}

impl FromStr for Axis {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let bad = || format!("axis '{s}' is not of the form key=lo:hi:n");
        let (key, range) = s.split_once('=').ok_or_else(bad)?;
        let parts: Vec<&str> = range.split(':').collect();
        let [lo, hi, n] = parts[..] else { return Err(bad()) };
        let lo: f64 = lo.trim().parse().map_err(|_| bad())?;
        let hi: f64 = hi.trim().parse().map_err(|_| bad())?;
        let n: usize = n.trim().parse().map_err(|_| bad())?;
        if key.trim().is_empty() || n == 0 || !lo.is_finite() || !hi.is_finite() {
            return Err(bad());
        }
        Ok(Axis { key: key.trim().to_string(), lo, hi, n })
    }
}

impl Axis {
    pub fn values(&self) -> Vec<f64> {
        if self.n == 1 {
            return vec![self.lo];
        }
        // The lerp form returns both ends exactly.
        (0..self.n)
            .map(|i| {
                let t = i as f64 / (self.n - 1) as f64;
                self.lo * (1.0 - t) + self.hi * t
            })
            .collect()
    }
}

/// All grid points, last axis fastest.
pub fn cartesian(axes: &[Axis]) -> Vec<Vec<f64>> {
    axes.iter().fold(vec![Vec::new()], |acc, axis| {
        let values = axis.values();
        acc.iter()
            .flat_map(|prefix| {
                values.iter().map(move |&v| {
                    let mut p = prefix.clone();
                    p.push(v);
                    p
                })
            })
            .collect()
    })
}

/// Sets a dotted key, keeping integers integral (`grid.cells`, `physics.dim`).
fn set_dotted(table: &mut toml::Table, key: &str, value: f64) -> Result<(), CliError> {
    let mut parts: Vec<&str> = key.split('.').collect();
    let leaf = parts.pop().expect("split yields at least one part");
    let mut node = table;
    for part in parts {
        node = node
            .entry(part)
            .or_insert_with(|| toml::Value::Table(toml::Table::new()))
            .as_table_mut()
            .ok_or_else(|| CliError::Config(format!("axis key '{key}': '{part}' is not a table")))?;
    }
    let v = match node.get(leaf) {
        Some(toml::Value::Integer(_)) => toml::Value::Integer(value.round() as i64),
        _ => toml::Value::Float(value),
    };
    node.insert(leaf.to_string(), v);
    Ok(())
}

/// The config for one sweep point, written into `<base>/run_XXXX`.
pub fn point_config(base: &toml::Table, axes: &[Axis], values: &[f64], config_dir: &Path, index: usize) -> Result<RunConfig, CliError> {
    let mut table = base.clone();
    for (axis, &v) in axes.iter().zip(values) {
        set_dotted(&mut table, &axis.key, v)?;
    }
    let text = toml::to_string(&table).map_err(|e| CliError::Config(e.to_string()))?;
    let mut config = RunConfig::parse(&text)?;
    config.resolve_paths(config_dir);
    config.output.dir = config.output.dir.join(format!("run_{index:04}"));
    if config.label.is_empty() {
        config.label = format!("run_{index:04}");
    } else {
        config.label = format!("{}/run_{index:04}", config.label);
    }
    Ok(config)
}

#[derive(Debug)]
pub struct PointResult {
    pub index: usize,
    pub values: Vec<f64>,
    pub admissibility: Option<Admissibility>,
    pub outcome: Result<RunReport, CliError>,
}

#[derive(Debug)]
pub struct SweepOutcome {
    pub summary: PathBuf,
    pub points: Vec<PointResult>,
}

impl SweepOutcome {
    /// Nonzero only when some point failed at the config stage.
    pub fn status(&self) -> Status {
        let config_failure = self.points.iter().any(|p| matches!(&p.outcome, Err(e) if e.is_config_stage()));
        if config_failure {
            Status::Failed
        } else {
            Status::Completed
        }
    }
}

/// Worker count from `NSP_THREADS`, when set to a positive integer.
pub fn threads_from_env() -> Option<usize> {
    std::env::var("NSP_THREADS").ok()?.trim().parse().ok().filter(|&n| n > 0)
}

pub fn sweep(config_path: &Path, axes: &[Axis], threads: Option<usize>) -> Result<SweepOutcome, CliError> {
    if axes.is_empty() || axes.len() > MAX_AXES {
        return Err(CliError::Config(format!("need 1 to {MAX_AXES} axes, got {}", axes.len())));
    }
    let text = fs::read_to_string(config_path).map_err(io_err(config_path))?;
    // The base must be a valid run on its own.
    let mut base_config = RunConfig::parse(&text)?;
    let config_dir = config_path.parent().unwrap_or(Path::new("."));
    base_config.resolve_paths(config_dir);
    let base: toml::Table = text.parse().map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;

    let grid = cartesian(axes);
    let run_point = |(index, values): (usize, &Vec<f64>)| {
        let config = point_config(&base, axes, values, config_dir, index);
        let admissibility = config.as_ref().ok().map(Admissibility::of);
        let outcome = config.and_then(|c| execute(&c));
        PointResult { index, values: values.clone(), admissibility, outcome }
    };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if let Some(n) = threads {
        builder = builder.num_threads(n);
    }
    let pool = builder.build().map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
    let points: Vec<PointResult> = pool.install(|| grid.par_iter().enumerate().map(run_point).collect());

    let out = &base_config.output.dir;
    fs::create_dir_all(out).map_err(io_err(out))?;
    let summary = out.join(SUMMARY_FILE);
    write_summary(&summary, axes, &points)?;
    Ok(SweepOutcome { summary, points })
}

fn write_summary(path: &Path, axes: &[Axis], points: &[PointResult]) -> Result<(), CliError> {
    let suprema: BTreeSet<&String> = points
        .iter()
        .filter_map(|p| p.outcome.as_ref().ok())
        .flat_map(|r| r.ledger.suprema.keys())
        .collect();
    let csv_err = |e: csv::Error| CliError::Io { path: path.to_path_buf(), source: e.into() };
    let mut w = csv::Writer::from_path(path).map_err(csv_err)?;
    let mut header: Vec<String> = vec!["run".into()];
    header.extend(axes.iter().map(|a| a.key.clone()));
    header.extend(["admissible", "violations", "status", "cause", "steps", "final_tau", "r_t", "v_t"].map(String::from));
    header.extend(suprema.iter().map(|k| format!("sup.{k}")));
    w.write_record(&header).map_err(csv_err)?;

    for p in points {
        let mut row = vec![format!("run_{:04}", p.index)];
        row.extend(p.values.iter().map(|v| v.to_string()));
        match &p.admissibility {
            Some(a) => row.extend([a.admissible.to_string(), a.summary()]),
            None => row.extend([String::new(), String::new()]),
        }
        match &p.outcome {
            Ok(r) => {
                let cause = r.blowup.cause.map(|c| format!("{c:?}")).unwrap_or_default();
                row.extend([r.status.to_string(), cause, r.steps.to_string(), r.final_tau.to_string()]);
                row.extend([r.ledger.r_t.to_string(), r.ledger.v_t.to_string()]);
                row.extend(suprema.iter().map(|k| r.ledger.suprema.get(*k).map(|v| v.to_string()).unwrap_or_default()));
            }
            Err(e) => {
                let status = if e.is_config_stage() { "config-error" } else { "error" };
                row.extend([status.to_string(), e.to_string()]);
                row.extend(std::iter::repeat_n(String::new(), 4 + suprema.len()));
            }
        }
        w.write_record(&row).map_err(csv_err)?;
    }
    w.flush().map_err(io_err(path))
}

/// `nsp sweep <config> --axis ...`.
pub fn cmd_sweep(config_path: &Path, axes: &[Axis]) -> Result<Status, CliError> {
    let outcome = sweep(config_path, axes, threads_from_env())?;
    for p in &outcome.points {
        if let Err(e) = &p.outcome {
            eprintln!("run_{:04}: {e}", p.index);
        }
    }
    Ok(outcome.status())
}
