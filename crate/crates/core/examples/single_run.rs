//! One regularized run with the default bump data, printing a few samples.

use std::f64::consts::PI;

use kgs::dynamics::{run, DataSpec, IntegratorConfig, Model, RunConfig, Stepper};
use kgs::{Grid, GridSpec, Mode, RegLevel};

fn main() -> kgs::Result<()> {
    let grid = Grid::new(GridSpec::cube(1, 128, PI)?)?;
    let n = RegLevel::Finite(16);
    let cfg = IntegratorConfig::lawson(1e-3);
    let stepper = Stepper::new(Model::new(&grid, n, cfg.rule()), cfg)?;
    let s0 = DataSpec::default().build(&grid, 0)?.regularize(n, Mode::Strong);
    let traj = run(&stepper, s0, &RunConfig::new(1.0, 200))?;
    println!("{:>6} {:>14} {:>14} {:>14}", "t", "Q", "E_n", "|u|_H2");
    for r in traj.records() {
        println!("{:>6.3} {:>14.10} {:>14.10} {:>14.6}", r.t, r.q, r.en, r.h2_u);
    }
    Ok(())
}
