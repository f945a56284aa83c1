//! Coercive lower bound on `E_n` with estimated Gagliardo-Nirenberg constants.

use std::f64::consts::PI;

use kgs::dynamics::{run, DataSpec, IntegratorConfig, Model, RunConfig, Stepper};
use kgs::observables::GnConstants;
use kgs::spectral::norms::l2_norm_sq;
use kgs::suites::coercivity;
use kgs::{Grid, GridSpec, Mode, RegLevel};

fn main() -> kgs::Result<()> {
    let grid = Grid::new(GridSpec::cube(2, 32, PI)?)?;
    let gn = GnConstants::estimate(&grid, 256, 0)?;
    println!("GN constants: C_p {:.4} (p {:.3}), C_q {:.4} (q {:.3})", gn.c_p, gn.p, gn.c_q, gn.q);
    let n = RegLevel::Finite(16);
    let cfg = IntegratorConfig::lawson(1.0 / 128.0);
    let stepper = Stepper::new(Model::new(&grid, n, cfg.rule()), cfg)?;
    let s0 = DataSpec::default().build(&grid, 0)?.regularize(n, Mode::Strong);
    let phi = l2_norm_sq(&s0.u).sqrt();
    let recs = run(&stepper, s0, &RunConfig::new(1.0, 8))?.records();
    let rep = coercivity(&recs, phi, &gn)?;
    println!("min slack {:.4e} at t = {:.3}, passed {}", rep.worst.slack, rep.worst.t, rep.passed);
    Ok(())
}
