//! Refinement studies against closed-form solutions.

use nsp_core::diagnostics::{energy_balance_residual, DiagnosticsOptions};
use nsp_core::initial::{make_initial, InitialDataSpec};
use nsp_core::manufactured::{observed_orders, ManufacturedSolution};
use nsp_core::physics::Coefficients;
use nsp_core::solver::{run, stable_dt, Cadence, Scheme, StepperConfig};
use nsp_core::state::{background_density, MassGrid};

#[test]
fn manufactured_solution_second_order() {
    for dim in [2, 3] {
        let mms = ManufacturedSolution::new(Coefficients::new(0.9, 1.5, -1.0, dim, 1.0).unwrap());
        let samples: Vec<_> = [32, 64, 128].iter().map(|&m| mms.solve(m, 0.005, 1.0 / 16.0).unwrap()).collect();
        let u: Vec<f64> = samples.iter().map(|s| s.u_error).collect();
        let v: Vec<f64> = samples.iter().map(|s| s.v_error).collect();
        for order in observed_orders(&u).into_iter().chain(observed_orders(&v)) {
            assert!((1.8..=2.2).contains(&order), "dim {dim}: {order}");
        }
    }
}

#[test]
fn energy_residual_is_first_order_in_dt() {
    let s = make_initial(&InitialDataSpec::gaussian_bump(3.0, 0.1), MassGrid::new(32).unwrap(), 3).unwrap();
    let c = Coefficients::new(0.9, 1.5, -1.0, 3, background_density(&s)).unwrap();
    let base = stable_dt(&s, &c, &StepperConfig::new(Scheme::ExplicitSsp2, 1.0)).unwrap();
    let residual = |dt: f64| {
        let mut cfg = StepperConfig::new(Scheme::ExplicitSsp2, 0.02);
        cfg.fixed_dt = Some(dt);
        let mut sink = Vec::new();
        let cadence = Cadence { every_steps: 0, every_tau: None };
        run(&s, &c, &cfg, &cadence, &DiagnosticsOptions::default(), &mut sink).unwrap();
        energy_balance_residual(&sink[0], sink.last().unwrap())
    };
    let (a, b) = (residual(base), residual(base / 2.0));
    assert!((1.7..=2.3).contains(&(a / b)), "{}", a / b);
}
