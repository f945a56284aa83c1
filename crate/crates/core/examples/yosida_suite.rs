//! Operator inequalities of the Yosida family, clean and with a planted fault.

use std::f64::consts::PI;

use kgs::convergence::{yosida_property_suite, YosidaSuiteConfig};
use kgs::{Grid, GridSpec};

fn main() -> kgs::Result<()> {
    let grid = Grid::new(GridSpec::cube(2, 64, PI)?)?;
    let levels: Vec<u64> = (0..=12).map(|i| 1 << i).collect();
    for fault in [0.0, 1e-3] {
        let mut cfg = YosidaSuiteConfig::new(100, 7);
        cfg.fault = fault;
        let rep = yosida_property_suite(&grid, &levels, &cfg)?;
        println!("fault {fault:e}: passed {} ({} violations)", rep.passed, rep.violations());
        for s in &rep.inequalities {
            println!("  {:<12} worst ratio {:.6}", s.name, s.worst.map_or(0.0, |w| w.ratio));
        }
    }
    Ok(())
}
