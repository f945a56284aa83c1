//! Differences between consecutive members of the regularized family.

use std::f64::consts::PI;

use kgs::convergence::{family_run, FamilyPlan};
use kgs::dynamics::{DataSpec, IntegratorConfig};
use kgs::{Error, Grid, GridSpec, Mode};

fn main() -> kgs::Result<()> {
    let grid = Grid::new(GridSpec::cube(1, 64, PI)?)?;
    let plan = FamilyPlan {
        levels: vec![8, 16, 32, 64, 128],
        data: DataSpec::default().build(&grid, 0)?,
        horizon: 1.0,
        sample_every: 8,
        integrator: IntegratorConfig::lawson(1.0 / 128.0),
        mode: Mode::Strong,
        reference: true,
    };
    let res = family_run(&plan).map_err(Error::from)?;
    for p in &res.report.pairs {
        println!("n {:>4} m {:>4}  strong {:.3e}  weak {:.3e}", p.n, p.m, p.strong, p.weak);
    }
    if let Some(fit) = res.report.weak_rate {
        println!("weak rate {:.3}", fit.rate);
    }
    Ok(())
}
