//! Picard fixed point of the Duhamel formulation against the stepper.

use std::f64::consts::PI;

use kgs::dynamics::{DataSpec, IntegratorConfig, Model, PicardConfig, Stepper};
use kgs::suites::oracle_compare;
use kgs::{Grid, GridSpec, Mode, RegLevel};

fn main() -> kgs::Result<()> {
    let grid = Grid::new(GridSpec::cube(1, 64, PI)?)?;
    let n = RegLevel::Finite(16);
    let cfg = IntegratorConfig::lawson(1e-3);
    let stepper = Stepper::new(Model::new(&grid, n, cfg.rule()), cfg)?;
    let s0 = DataSpec::default().build(&grid, 0)?.regularize(n, Mode::Strong);
    let rep = oracle_compare(&stepper, &s0, &PicardConfig::new(0.5, 100, 1e-13), 1e-6)?;
    println!("sweeps {}  last increment {:.2e}  sup L2 distance {:.2e}", rep.sweeps, rep.increment, rep.sup_l2);
    Ok(())
}
