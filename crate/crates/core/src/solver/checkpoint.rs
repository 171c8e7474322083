//! Text checkpoints of `(N, M, tau, rho, u)`.
//!
//! Values are written with 17 significant digits, which round-trips every
//! `f64` exactly.

use std::fmt::Write as _;
use std::path::Path;

use crate::state::FluidState;
use crate::{Error, Result};

const HEADER: &str = "nsp-checkpoint 1";

pub fn checkpoint_to_string(state: &FluidState) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    let _ = writeln!(out, "dim {}", state.dim);
    let _ = writeln!(out, "cells {}", state.cells());
    let _ = writeln!(out, "tau {:.16e}", state.tau);
    let _ = writeln!(out, "rho");
    for v in &state.rho {
        let _ = writeln!(out, "{v:.16e}");
    }
    let _ = writeln!(out, "u");
    for v in &state.u {
        let _ = writeln!(out, "{v:.16e}");
    }
    out
}

pub fn checkpoint_from_str(text: &str) -> Result<FluidState> {
    let bad = |msg: String| Error::Checkpoint(msg);
    let lines: Vec<&str> = text.lines().map(str::trim).filter(|l| !l.is_empty()).collect();
    let line = |k: usize| lines.get(k).copied().ok_or_else(|| bad("truncated checkpoint".into()));
    if line(0)? != HEADER {
        return Err(bad("missing or unsupported format header".into()));
    }
    let field = |k: usize, name: &str| -> Result<&str> {
        let l = line(k)?;
        l.strip_prefix(name).map(str::trim).ok_or_else(|| bad(format!("expected {name:?}, got {l:?}")))
    };
    let dim: usize = field(1, "dim ")?.parse().map_err(|_| bad("bad dim".into()))?;
    let cells: usize = field(2, "cells ")?.parse().map_err(|_| bad("bad cell count".into()))?;
    let tau: f64 = field(3, "tau ")?.parse().map_err(|_| bad("bad tau".into()))?;
    let numbers = |from: usize, count: usize| -> Result<Vec<f64>> {
        (from..from + count).map(|k| line(k)?.parse().map_err(|_| bad(format!("bad number on data line {k}")))).collect()
    };
    if line(4)? != "rho" {
        return Err(bad("malformed rho section".into()));
    }
    let rho = numbers(5, cells)?;
    if line(5 + cells)? != "u" {
        return Err(bad("malformed u section".into()));
    }
    let u = numbers(6 + cells, cells + 1)?;
    FluidState::new(dim, rho, u, tau)
}

pub fn write_checkpoint(state: &FluidState, path: &Path) -> Result<()> {
    std::fs::write(path, checkpoint_to_string(state))?;
    Ok(())
}

pub fn read_checkpoint(path: &Path) -> Result<FluidState> {
    checkpoint_from_str(&std::fs::read_to_string(path)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trip_is_bit_exact() {
        let rho: Vec<f64> = (0..37).map(|i| 1.0 / 3.0 + (i as f64 * 0.7).sin().abs() + 1e-300).collect();
        let mut u: Vec<f64> = (0..38).map(|j| (j as f64).sqrt() * std::f64::consts::PI * 1e-7).collect();
        u[0] = 0.0;
        u[37] = 0.0;
        let s = FluidState::new(3, rho, u, 0.123_456_789_012_345_68).unwrap();
        let back = checkpoint_from_str(&checkpoint_to_string(&s)).unwrap();
        assert_eq!(back.rho.iter().map(|v| v.to_bits()).collect::<Vec<_>>(), s.rho.iter().map(|v| v.to_bits()).collect::<Vec<_>>());
        assert_eq!(back.u, s.u);
        assert_eq!(back.tau.to_bits(), s.tau.to_bits());
        assert_eq!(back.r, s.r);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(checkpoint_from_str("hello").is_err());
        let s = FluidState::uniform(2, 4, 1.0).unwrap();
        let text = checkpoint_to_string(&s);
        let truncated: String = text.lines().take(8).collect::<Vec<_>>().join("\n");
        assert!(checkpoint_from_str(&truncated).is_err());
    }
}
