//! Checkpoint a run halfway, resume it, and compare with the uninterrupted run.

use std::f64::consts::PI;

use kgs::dynamics::{evolve, DataSpec, IntegratorConfig, Model, Stepper};
use kgs::io::{read_checkpoint, write_checkpoint, Checkpoint};
use kgs::{Grid, GridSpec, Mode, RegLevel};

fn main() -> kgs::Result<()> {
    let grid = Grid::new(GridSpec::cube(1, 64, PI)?)?;
    let n = RegLevel::Finite(16);
    let dt = 1.0 / 256.0;
    let cfg = IntegratorConfig::lawson(dt);
    let stepper = Stepper::new(Model::new(&grid, n, cfg.rule()), cfg)?;
    let s0 = DataSpec::default().build(&grid, 0)?.regularize(n, Mode::Strong);

    let full = evolve(&stepper, s0.clone(), 1.0)?;
    let half = evolve(&stepper, s0, 0.5)?;
    let path = std::env::temp_dir().join("kgs_example.kgs");
    write_checkpoint(&path, &Checkpoint { level: n, step: 128, state: half })?;
    let cp = read_checkpoint(&path)?;
    let resumed = evolve(&stepper, cp.state, 1.0)?;
    std::fs::remove_file(&path)?;
    println!("max |u_full - u_resumed| = {:.2e}", full.u.max_abs_diff(&resumed.u));
    Ok(())
}
