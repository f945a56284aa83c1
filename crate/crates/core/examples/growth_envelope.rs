//! Fitted growth exponent of the high norms of the unregularized flow.

use std::f64::consts::PI;

use kgs::dynamics::{run, DataSpec, IntegratorConfig, Model, RunConfig, Stepper};
use kgs::suites::envelope;
use kgs::{Grid, GridSpec, Mode, RegLevel};

fn main() -> kgs::Result<()> {
    for (dim, m, horizon) in [(1usize, 128usize, 10.0), (2, 32, 2.0)] {
        let grid = Grid::new(GridSpec::cube(dim, m, PI)?)?;
        let n = RegLevel::Infinite;
        let cfg = IntegratorConfig::lawson(1.0 / 128.0);
        let stepper = Stepper::new(Model::new(&grid, n, cfg.rule()), cfg)?;
        let s0 = DataSpec::default().build(&grid, 0)?.regularize(n, Mode::Strong);
        let recs = run(&stepper, s0, &RunConfig::new(horizon, 8))?.records();
        let rep = envelope(&recs, dim, 0.2)?;
        println!(
            "N={dim}: fitted {:.3}, bound {:.3}, passed {}",
            rep.model.fitted_exponent, rep.model.theorem_exponent, rep.passed
        );
    }
    Ok(())
}
