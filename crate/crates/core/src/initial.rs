//! Initial-data generators.
//!
//! A profile is a density shape `f(xi)` on the Eulerian radius fraction
//! `xi = r / R`. The outer radius `R` is chosen so the total mass is one,
//! which keeps the prescribed density values intact (floors and peaks are
//! not rescaled). Cell densities are exact cell-volume averages of the
//! profile, so the mass recursion reproduces the mass-node radii.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::quadrature::gauss5;
use crate::state::{check_dim, FluidState, MassGrid};
use crate::{Error, Result};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Profile {
    Constant {
        value: f64,
    },
    /// `base + (amplitude - base) exp(-((xi - center)/width)^2)`.
    GaussianBump {
        #[serde(default = "one")]
        base: f64,
        amplitude: f64,
        #[serde(default)]
        center: f64,
        #[serde(default = "default_width")]
        width: f64,
    },
    /// `sum_k c_k xi^k`.
    Polynomial { coefficients: Vec<f64> },
    /// Two-column file; the header names the abscissa (`r` or `x`).
    Tabulated { path: PathBuf },
}

fn one() -> f64 {
    1.0
}

fn default_width() -> f64 {
    0.3
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InitialDataSpec {
    #[serde(flatten)]
    pub profile: Profile,
    /// Lower bound every generated density must respect.
    pub rho_min: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub rho_max: Option<f64>,
    /// `u0(x) = A sin(pi x)`.
    #[serde(default)]
    pub velocity_amplitude: f64,
}

impl InitialDataSpec {
    pub fn constant(value: f64) -> Self {
        Self { profile: Profile::Constant { value }, rho_min: value.min(1.0) * 0.5, rho_max: None, velocity_amplitude: 0.0 }
    }

    pub fn gaussian_bump(amplitude: f64, rho_min: f64) -> Self {
        Self {
            profile: Profile::GaussianBump { base: 1.0, amplitude, center: 0.0, width: default_width() },
            rho_min,
            rho_max: None,
            velocity_amplitude: 0.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Abscissa {
    R,
    X,
}

/// A parsed tabulated profile, abscissa strictly increasing.
#[derive(Debug, Clone, PartialEq)]
pub struct Table {
    pub abscissa: Abscissa,
    pub points: Vec<(f64, f64)>,
}

impl Table {
    pub fn parse(text: &str) -> Result<Self> {
        let mut abscissa = None;
        let mut points = Vec::new();
        for (lineno, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let cols: Vec<&str> = line.split_whitespace().collect();
            if cols.len() != 2 {
                return Err(Error::InitialData(format!("line {}: expected two columns", lineno + 1)));
            }
            if abscissa.is_none() {
                abscissa = Some(match cols[0].to_ascii_lowercase().as_str() {
                    "r" => Abscissa::R,
                    "x" => Abscissa::X,
                    other => {
                        return Err(Error::InitialData(format!(
                            "line {}: header must name the abscissa r or x, got {other:?}",
                            lineno + 1
                        )))
                    }
                });
                continue;
            }
            let parse = |s: &str| {
                s.parse::<f64>()
                    .map_err(|_| Error::InitialData(format!("line {}: bad number {s:?}", lineno + 1)))
            };
            points.push((parse(cols[0])?, parse(cols[1])?));
        }
        let abscissa = abscissa.ok_or_else(|| Error::InitialData("empty table".into()))?;
        if points.len() < 2 {
            return Err(Error::InitialData("table needs at least two rows".into()));
        }
        if points.windows(2).any(|w| !(w[1].0 > w[0].0)) {
            return Err(Error::InitialData("abscissa must be strictly increasing".into()));
        }
        if points[0].0 < 0.0 {
            return Err(Error::InitialData("abscissa must be nonnegative".into()));
        }
        Ok(Self { abscissa, points })
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::parse(&std::fs::read_to_string(path)?)
    }

    /// Piecewise-linear interpolation on the abscissa rescaled to `[0, 1]`,
    /// constant beyond the ends.
    fn eval_fraction(&self, t: f64) -> f64 {
        let (a0, _) = self.points[0];
        let (a1, _) = self.points[self.points.len() - 1];
        let s = if self.abscissa == Abscissa::X { t } else { t * a1 };
        let s = s.clamp(a0, a1);
        let k = self.points.partition_point(|p| p.0 <= s).clamp(1, self.points.len() - 1);
        let (xa, ya) = self.points[k - 1];
        let (xb, yb) = self.points[k];
        ya + (yb - ya) * (s - xa) / (xb - xa)
    }
}

enum Shape {
    Analytic(Profile),
    Table(Table),
}

impl Shape {
    fn eval(&self, xi: f64) -> f64 {
        match self {
            Shape::Analytic(Profile::Constant { value }) => *value,
            Shape::Analytic(Profile::GaussianBump { base, amplitude, center, width }) => {
                base + (amplitude - base) * (-((xi - center) / width).powi(2)).exp()
            }
            Shape::Analytic(Profile::Polynomial { coefficients }) => {
                coefficients.iter().rev().fold(0.0, |acc, c| acc * xi + c)
            }
            Shape::Analytic(Profile::Tabulated { .. }) => unreachable!("tables are loaded first"),
            Shape::Table(t) => t.eval_fraction(xi),
        }
    }

    /// Break points of the shape inside `(0, 1)`, used to keep quadrature
    /// panels from straddling kinks.
    fn kinks(&self) -> Vec<f64> {
        match self {
            Shape::Table(t) => {
                let last = t.points[t.points.len() - 1].0;
                let scale = if t.abscissa == Abscissa::X { 1.0 } else { last };
                t.points.iter().map(|p| p.0 / scale).filter(|&s| s > 0.0 && s < 1.0).collect()
            }
            _ => Vec::new(),
        }
    }
}

/// Builds the initial state on `grid` in dimension `dim`.
pub fn make_initial(spec: &InitialDataSpec, grid: MassGrid, dim: usize) -> Result<FluidState> {
    check_dim(dim)?;
    if !(spec.rho_min > 0.0) {
        return Err(Error::InitialData(format!("floor rho_min must be positive, got {}", spec.rho_min)));
    }
    if let Some(ceiling) = spec.rho_max {
        if !(ceiling >= spec.rho_min) {
            return Err(Error::InitialData(format!("ceiling {ceiling} below floor {}", spec.rho_min)));
        }
    }
    let shape = match &spec.profile {
        Profile::Tabulated { path } => Shape::Table(Table::read(path)?),
        Profile::GaussianBump { width, .. } if !(*width > 0.0) => {
            return Err(Error::InitialData(format!("bump width must be positive, got {width}")))
        }
        other => Shape::Analytic(other.clone()),
    };
    if let Shape::Table(t) = &shape {
        if let Some(&(a, v)) = t.points.iter().find(|p| !(p.1 >= spec.rho_min)) {
            return Err(Error::InitialData(format!(
                "tabulated density {v} at abscissa {a} is below the floor {}",
                spec.rho_min
            )));
        }
    }

    // Cell averages can hide a dip toward vacuum on coarse grids, so the
    // profile itself must respect the floor too.
    if let Shape::Analytic(_) = &shape {
        const SAMPLES: usize = 4096;
        if let Some((xi, v)) = (0..=SAMPLES)
            .map(|i| i as f64 / SAMPLES as f64)
            .map(|xi| (xi, shape.eval(xi)))
            .find(|&(_, v)| !(v >= spec.rho_min))
        {
            return Err(Error::InitialData(format!("profile value {v} at r/R = {xi} is below the floor {}", spec.rho_min)));
        }
    }

    let m = grid.cells();
    let rho = match &shape {
        Shape::Table(t) if t.abscissa == Abscissa::X => lagrangian_cells(t, grid),
        _ => eulerian_cells(&shape, grid, dim)?,
    };
    for (i, &d) in rho.iter().enumerate() {
        if !(d >= spec.rho_min * (1.0 - 1e-12)) {
            return Err(Error::InitialData(format!(
                "density {d} in cell {i} violates the floor {}",
                spec.rho_min
            )));
        }
        if let Some(ceiling) = spec.rho_max {
            if d > ceiling * (1.0 + 1e-12) {
                return Err(Error::InitialData(format!("density {d} in cell {i} exceeds the ceiling {ceiling}")));
            }
        }
    }
    let mut u: Vec<f64> =
        (0..=m).map(|j| spec.velocity_amplitude * (std::f64::consts::PI * grid.node_x(j)).sin()).collect();
    u[0] = 0.0;
    u[m] = 0.0;
    FluidState::new(dim, rho, u, 0.0)
}

/// Cell averages over mass of a table given directly in `x`.
fn lagrangian_cells(t: &Table, grid: MassGrid) -> Vec<f64> {
    let dx = grid.dx();
    // v = 1/rho averaged over the cell keeps the specific volume exact.
    (0..grid.cells())
        .map(|i| {
            let a = grid.node_x(i);
            let v = gauss5(a, a + dx, |x| 1.0 / t.eval_fraction(x)) / dx;
            1.0 / v
        })
        .collect()
}

/// Cell densities from mass nodes located by inverting the cumulative
/// mass `F(xi) = int_0^xi f(s) s^{N-1} ds`.
fn eulerian_cells(shape: &Shape, grid: MassGrid, dim: usize) -> Result<Vec<f64>> {
    let n = dim as i32;
    let density = |xi: f64| shape.eval(xi);
    let integrand = |s: f64| density(s) * s.powi(n - 1);

    let panels = (8 * grid.cells()).max(4096);
    let mut edges: Vec<f64> = (0..=panels).map(|p| p as f64 / panels as f64).collect();
    edges.extend(shape.kinks());
    edges.sort_by(f64::total_cmp);
    edges.dedup();
    let mut cumulative = Vec::with_capacity(edges.len());
    cumulative.push(0.0);
    for w in edges.windows(2) {
        let last = *cumulative.last().unwrap();
        cumulative.push(last + gauss5(w[0], w[1], integrand));
    }
    if let Some(xi) = edges.iter().copied().find(|&xi| !(density(xi) > 0.0)) {
        return Err(Error::InitialData(format!("profile is not positive at r/R = {xi}")));
    }
    let total = *cumulative.last().unwrap();
    // R^N F(1) = 1.
    let radius_pow = 1.0 / total;

    let m = grid.cells();
    let mut r_pow = Vec::with_capacity(m + 1);
    r_pow.push(0.0);
    for j in 1..m {
        let target = total * grid.node_x(j);
        let seg = cumulative.partition_point(|&c| c <= target).clamp(1, edges.len() - 1) - 1;
        let xi = invert_segment(edges[seg], edges[seg + 1], cumulative[seg], target, &integrand, &density, n);
        r_pow.push(radius_pow * xi.powi(n));
    }
    r_pow.push(radius_pow);

    let dx = grid.dx();
    Ok(r_pow.windows(2).map(|w| n as f64 * dx / (w[1] - w[0])).collect())
}

/// Solves `base + int_a^xi g = target` for `xi` in `[a, b]` by safeguarded Newton.
fn invert_segment(
    a: f64,
    b: f64,
    base: f64,
    target: f64,
    integrand: &impl Fn(f64) -> f64,
    density: &impl Fn(f64) -> f64,
    n: i32,
) -> f64 {
    let (mut lo, mut hi) = (a, b);
    let mut xi = 0.5 * (a + b);
    for _ in 0..100 {
        let f = base + gauss5(a, xi, integrand) - target;
        if f == 0.0 || hi - lo <= 4.0 * f64::EPSILON * hi {
            break;
        }
        if f > 0.0 {
            hi = xi;
        } else {
            lo = xi;
        }
        let slope = density(xi) * xi.powi(n - 1);
        let newton = xi - f / slope;
        xi = if slope > 0.0 && newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
    }
    xi
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::specific_volume_integral;

    fn grid(m: usize) -> MassGrid {
        MassGrid::new(m).unwrap()
    }

    #[test]
    fn constant_unit() {
        for dim in [2, 3] {
            let s = make_initial(&InitialDataSpec::constant(1.0), grid(32), dim).unwrap();
            assert!(s.rho.iter().all(|&d| (d - 1.0).abs() < 1e-12));
            assert!(s.u.iter().all(|&v| v == 0.0));
        }
    }

    #[test]
    fn constant_other_value_keeps_value() {
        let s = make_initial(&InitialDataSpec::constant(2.0), grid(16), 3).unwrap();
        assert!(s.rho.iter().all(|&d| (d - 2.0).abs() < 1e-12));
        assert!((s.outer_radius() - 1.5f64.cbrt()).abs() < 1e-12);
    }

    #[test]
    fn gaussian_bump_floor_and_peak() {
        for dim in [2, 3] {
            let s = make_initial(&InitialDataSpec::gaussian_bump(5.0, 0.1), grid(128), dim).unwrap();
            assert!(s.rho_min() >= 0.1);
            // The innermost cell averages the bump over a ball, which
            // rounds the peak down; the gap closes under refinement.
            assert!(s.rho_max() <= 5.0 && s.rho_max() > 4.5, "{}", s.rho_max());
            let mass: f64 = s.rho.iter().zip(s.cell_volumes()).map(|(d, v)| d * v).sum();
            assert!((mass - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn bump_peak_recovered_under_refinement() {
        let peak = |m| make_initial(&InitialDataSpec::gaussian_bump(5.0, 0.1), grid(m), 3).unwrap().rho_max();
        let (a, b) = (peak(128), peak(2048));
        assert!(5.0 - b < 0.5 * (5.0 - a), "{a} {b}");
    }

    #[test]
    fn bump_matches_profile_at_nodes() {
        // The generated density, viewed as a function of r/R, is the
        // cell-volume average of the profile.
        let spec = InitialDataSpec::gaussian_bump(3.0, 0.5);
        let s = make_initial(&spec, grid(256), 3).unwrap();
        let big_r = s.outer_radius();
        let mid = s.cell_mid_radii();
        let f = |xi: f64| 1.0 + 2.0 * (-(xi / 0.3f64).powi(2)).exp();
        // Near the origin a cell spans a wide range of r; compare further out.
        for i in (18..256).step_by(17) {
            assert!((s.rho[i] - f(mid[i] / big_r)).abs() < 2e-3, "cell {i}");
        }
    }

    #[test]
    fn polynomial_profile() {
        let spec = InitialDataSpec {
            profile: Profile::Polynomial { coefficients: vec![2.0, 0.0, -1.0] },
            rho_min: 0.5,
            rho_max: Some(2.0),
            velocity_amplitude: 0.0,
        };
        let s = make_initial(&spec, grid(64), 2).unwrap();
        // Mass: R^2 int_0^1 (2 - xi^2) xi dxi = R^2 (1 - 1/4) = 1.
        assert!((s.outer_radius() - (4.0f64 / 3.0).sqrt()).abs() < 1e-12);
    }

    #[test]
    fn velocity_vanishes_at_ends() {
        let mut spec = InitialDataSpec::constant(1.0);
        spec.velocity_amplitude = 0.7;
        let s = make_initial(&spec, grid(20), 3).unwrap();
        assert_eq!(s.u[0], 0.0);
        assert_eq!(s.u[20], 0.0);
        assert!((s.u[10] - 0.7).abs() < 1e-15);
    }

    #[test]
    fn floor_violation_rejected() {
        let spec = InitialDataSpec {
            profile: Profile::Polynomial { coefficients: vec![1.0, -0.95] },
            rho_min: 0.1,
            rho_max: None,
            velocity_amplitude: 0.0,
        };
        assert!(matches!(make_initial(&spec, grid(64), 3), Err(Error::InitialData(_))));
    }

    #[test]
    fn tabulated_negative_entry_rejected() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("p.txt");
        std::fs::write(&path, "# profile\nr rho\n0 1\n0.5 -0.2\n1 1\n").unwrap();
        let spec = InitialDataSpec {
            profile: Profile::Tabulated { path },
            rho_min: 0.01,
            rho_max: None,
            velocity_amplitude: 0.0,
        };
        assert!(matches!(make_initial(&spec, grid(16), 3), Err(Error::InitialData(_))));
    }

    #[test]
    fn coarse_grid_does_not_hide_a_dip() {
        // The innermost ball averages the dip well above the floor at M = 16.
        let spec = InitialDataSpec { profile: Profile::GaussianBump { base: 1.0, amplitude: 0.01, center: 0.0, width: 0.3 }, ..InitialDataSpec::gaussian_bump(1.0, 0.5) };
        let err = make_initial(&spec, grid(16), 3).unwrap_err();
        assert!(err.to_string().contains("r/R = 0"), "{err}");
    }

    #[test]
    fn tabulated_r_and_x() {
        let dir = tempfile::tempdir().unwrap();
        let pr = dir.path().join("r.txt");
        std::fs::write(&pr, "r rho  # header\n0 2\n1 2\n2 2\n").unwrap();
        let px = dir.path().join("x.txt");
        std::fs::write(&px, "x rho\n0 1\n1 3\n").unwrap();
        let spec = |path| InitialDataSpec { profile: Profile::Tabulated { path }, rho_min: 0.5, rho_max: None, velocity_amplitude: 0.0 };
        let s = make_initial(&spec(pr), grid(16), 3).unwrap();
        assert!(s.rho.iter().all(|&d| (d - 2.0).abs() < 1e-12));
        let s = make_initial(&spec(px), grid(64), 3).unwrap();
        // Exact int_0^1 dx/(1+2x) = ln(3)/2.
        assert!((specific_volume_integral(&s) - 3f64.ln() / 2.0).abs() < 1e-10);
    }

    #[test]
    fn table_header_required() {
        assert!(Table::parse("0 1\n1 1\n").is_err());
        assert!(Table::parse("r rho\n0 1\n0 1\n").is_err());
        assert!(Table::parse("r rho\n0 1\n").is_err());
        let t = Table::parse("# c\nx rho\n0 1\n1 2 # tail\n").unwrap();
        assert_eq!(t.abscissa, Abscissa::X);
        assert_eq!(t.points, vec![(0.0, 1.0), (1.0, 2.0)]);
    }

    #[test]
    fn initial_data_serde_roundtrip() {
        let spec = InitialDataSpec::gaussian_bump(5.0, 0.1);
        let text = serde_json::to_string(&spec).unwrap();
        assert!(text.contains("\"kind\":\"gaussian-bump\""));
        let back: InitialDataSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(back, spec);
    }
}
