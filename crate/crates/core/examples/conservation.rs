//! Drift of `Q` and `E_n` under step halving.

use std::f64::consts::PI;

use kgs::dynamics::{DataSpec, IntegratorConfig, Model, Stepper};
use kgs::suites::{drift_ladder, halving_orders};
use kgs::{Grid, GridSpec, Mode, RegLevel};

fn main() -> kgs::Result<()> {
    let grid = Grid::new(GridSpec::cube(1, 128, PI)?)?;
    let n = RegLevel::Finite(16);
    let cfg = IntegratorConfig::lawson(1.0 / 32.0);
    let stepper = Stepper::new(Model::new(&grid, n, cfg.rule()), cfg)?;
    let s0 = DataSpec::default().build(&grid, 0)?.regularize(n, Mode::Strong);
    let dts = [1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0, 1.0 / 256.0];
    let ladder = drift_ladder(&stepper, &s0, 1.0, &dts)?;
    let orders = halving_orders(&ladder.iter().map(|d| d.en).collect::<Vec<_>>());
    for (i, d) in ladder.iter().enumerate() {
        let order = if i == 0 { None } else { orders[i - 1] };
        println!("dt {:<10} dQ {:.3e}  dE_n {:.3e}  order {:?}", d.dt, d.q, d.en, order);
    }
    Ok(())
}
