//! `nsp plot`: time-series SVGs (and optionally a gnuplot script) from a
//! run's diagnostics stream.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;
use std::fs;
use std::path::{Path, PathBuf};

use serde_json::Value;

use crate::run::DIAGNOSTICS_FILE;
use crate::svg::{line_chart, Series};
use crate::{io_err, CliError, Status};

/// Flattens one NDJSON record to dotted numeric fields; `null` becomes NaN.
pub fn flatten(value: &Value, prefix: &str, out: &mut BTreeMap<String, f64>) {
    let key = |k: &str| if prefix.is_empty() { k.to_string() } else { format!("{prefix}.{k}") };
    match value {
        Value::Object(map) => {
            for (k, v) in map {
                match v {
                    Value::Object(_) => flatten(v, &key(k), out),
                    Value::Number(n) => {
                        out.insert(key(k), n.as_f64().unwrap_or(f64::NAN));
                    }
                    Value::Null => {
                        out.insert(key(k), f64::NAN);
                    }
                    _ => {}
                }
            }
        }
        Value::Number(n) if !prefix.is_empty() => {
            out.insert(prefix.to_string(), n.as_f64().unwrap_or(f64::NAN));
        }
        _ => {}
    }
}

pub fn read_records(dir: &Path) -> Result<Vec<BTreeMap<String, f64>>, CliError> {
    let path = dir.join(DIAGNOSTICS_FILE);
    let text = fs::read_to_string(&path).map_err(io_err(&path))?;
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            let v: Value = serde_json::from_str(l)
                .map_err(|e| CliError::Plot(format!("{}:{}: {e}", path.display(), i + 1)))?;
            let mut row = BTreeMap::new();
            flatten(&v, "", &mut row);
            Ok(row)
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct PlotFiles {
    pub svg: PathBuf,
    pub gnuplot: Option<PathBuf>,
}

/// One SVG of all `fields` against `tau`, named after the fields.
pub fn plot(dir: &Path, fields: &[String], gnuplot: bool) -> Result<PlotFiles, CliError> {
    if fields.is_empty() {
        return Err(CliError::Plot("no fields requested".into()));
    }
    let records = read_records(dir)?;
    if records.is_empty() {
        return Err(CliError::Plot(format!("{} has no records", dir.join(DIAGNOSTICS_FILE).display())));
    }
    let available: BTreeSet<&String> = records.iter().flat_map(|r| r.keys()).collect();
    let unknown: Vec<&String> = fields.iter().filter(|f| !available.contains(f)).collect();
    if !unknown.is_empty() {
        let names: Vec<&str> = available.iter().map(|s| s.as_str()).collect();
        let unknown: Vec<&str> = unknown.iter().map(|s| s.as_str()).collect();
        return Err(CliError::Plot(format!(
            "unknown field(s) {}; available fields: {}",
            unknown.join(", "),
            names.join(", ")
        )));
    }

    let tau = |r: &BTreeMap<String, f64>| r.get("tau").copied().unwrap_or(f64::NAN);
    let series: Vec<Series> = fields
        .iter()
        .map(|f| Series {
            name: f.clone(),
            points: records.iter().map(|r| (tau(r), r.get(f).copied().unwrap_or(f64::NAN))).collect(),
        })
        .collect();
    let stem = fields.join("+");
    let svg_path = dir.join(format!("{stem}.svg"));
    fs::write(&svg_path, line_chart(&fields.join(", "), "tau", &series)).map_err(io_err(&svg_path))?;

    let gnuplot = if gnuplot {
        let gp_path = dir.join(format!("{stem}.gp"));
        fs::write(&gp_path, gnuplot_script(&stem, &series)).map_err(io_err(&gp_path))?;
        Some(gp_path)
    } else {
        None
    };
    Ok(PlotFiles { svg: svg_path, gnuplot })
}

/// Script with the data inlined, rendering `<stem>.png`.
fn gnuplot_script(stem: &str, series: &[Series]) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "set terminal pngcairo size 1000,600");
    let _ = writeln!(s, "set output '{stem}.png'");
    let _ = writeln!(s, "set xlabel 'tau'");
    let _ = writeln!(s, "set key outside");
    let _ = writeln!(s, "set grid");
    for (i, series) in series.iter().enumerate() {
        let _ = writeln!(s, "$d{i} << EOD");
        for &(x, y) in &series.points {
            // gnuplot skips "NaN" rows.
            let _ = writeln!(s, "{x:.17e} {}", if y.is_finite() { format!("{y:.17e}") } else { "NaN".into() });
        }
        let _ = writeln!(s, "EOD");
    }
    let plots: Vec<String> =
        series.iter().enumerate().map(|(i, se)| format!("$d{i} using 1:2 with lines title '{}'", se.name)).collect();
    let _ = writeln!(s, "plot {}", plots.join(", \\\n     "));
    s
}

/// `nsp plot <dir> --fields f1,f2 [--gnuplot]`.
pub fn cmd_plot(dir: &Path, fields: &[String], gnuplot: bool) -> Result<Status, CliError> {
    let files = plot(dir, fields, gnuplot)?;
    crate::print_stdout(&files.svg.display().to_string());
    if let Some(gp) = files.gnuplot {
        crate::print_stdout(&gp.display().to_string());
    }
    Ok(Status::Completed)
}
