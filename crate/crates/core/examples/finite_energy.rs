//! Finite-energy family: `J_n` data, unsmoothed nonlinearity, `L^p` growth check.

use std::f64::consts::PI;

use kgs::convergence::{finite_energy_mode, FamilyPlan};
use kgs::dynamics::{DataSpec, IntegratorConfig};
use kgs::{Error, Grid, GridSpec, Mode};

fn main() -> kgs::Result<()> {
    let grid = Grid::new(GridSpec::cube(2, 32, PI)?)?;
    let plan = FamilyPlan {
        levels: vec![8, 16, 32, 64],
        data: DataSpec::default().build(&grid, 0)?,
        horizon: 0.5,
        sample_every: 8,
        integrator: IntegratorConfig::lawson(1.0 / 128.0),
        mode: Mode::FiniteEnergy,
        reference: false,
    };
    let rep = finite_energy_mode(&plan).map_err(Error::from)?;
    for p in &rep.diff.pairs {
        println!("n {:>3} m {:>3}  weak {:.3e}", p.n, p.m, p.weak);
    }
    for (p, r) in &rep.p_ratio.ratios {
        println!("p {p:>4}: ratio {r:.4}");
    }
    println!("p-ratio slope {:.3}, passed {}", rep.p_ratio.slope, rep.p_ratio.passed);
    Ok(())
}
