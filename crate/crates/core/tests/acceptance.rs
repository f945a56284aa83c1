//! The eight acceptance criteria at their pinned tolerances. Runs without
//! the libtest harness so every criterion prints one status line.

use std::f64::consts::PI;
use std::fs;
use std::process::Command;
use std::sync::Arc;
use std::time::{Duration, Instant};

use kgs::convergence::{family_run, yosida_property_suite, FamilyPlan, YosidaSuiteConfig};
use kgs::dynamics::{run, DataSpec, IntegratorConfig, Model, RunConfig, Stepper};
use kgs::io::csv::read_series;
use kgs::observables::GnConstants;
use kgs::spectral::norms::l2_norm_sq;
use kgs::suites::{self, Drift};
use kgs::{Grid, GridSpec, Mode, RegLevel, Result};

struct Verdict {
    passed: bool,
    detail: String,
}

fn grid(dim: usize, m: usize) -> Arc<Grid> {
    Grid::new(GridSpec::cube(dim, m, PI).unwrap()).unwrap()
}

fn stepper(g: &Arc<Grid>, n: RegLevel, dt: f64) -> Stepper {
    let cfg = IntegratorConfig::lawson(dt);
    Stepper::new(Model::new(g, n, cfg.rule()), cfg).unwrap()
}

fn initial(g: &Arc<Grid>, n: RegLevel) -> kgs::State {
    DataSpec::default().build(g, 0).unwrap().regularize(n, Mode::Strong)
}

/// Exact operator inequalities over 1000 random fields.
fn yosida() -> Result<Verdict> {
    let g1 = grid(1, 256);
    let all: Vec<u64> = (1..=1024).collect();
    let r1 = yosida_property_suite(&g1, &all, &YosidaSuiteConfig::new(500, 1))?;
    let g2 = grid(2, 256);
    let geometric: Vec<u64> = (0..=10).map(|i| 1 << i).collect();
    let r2 = yosida_property_suite(&g2, &geometric, &YosidaSuiteConfig::new(500, 2))?;
    let worst = |r: &kgs::convergence::YosidaReport| {
        r.inequalities
            .iter()
            .map(|s| format!("{}={:.4}", s.name, s.worst.map_or(0.0, |w| w.ratio)))
            .collect::<Vec<_>>()
            .join(" ")
    };
    Ok(Verdict {
        passed: r1.passed && r2.passed,
        detail: format!(
            "violations N=1: {} N=2: {}; worst N=1 [{}] N=2 [{}]",
            r1.violations(),
            r2.violations(),
            worst(&r1),
            worst(&r2)
        ),
    })
}

/// Relative drifts of `Q` and `E_n`, and their contraction under halving.
fn conservation() -> Result<Verdict> {
    let g = grid(1, 256);
    let n = RegLevel::Finite(16);
    let s0 = initial(&g, n);
    let st = stepper(&g, n, 1e-3);
    let d = Drift::of(1e-3, &run(&st, s0.clone(), &RunConfig::new(1.0, 1))?.records());
    let ladder = suites::drift_ladder(&st, &s0, 1.0, &[1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0])?;
    let en: Vec<f64> = ladder.iter().map(|d| d.en).collect();
    let orders = suites::halving_orders(&en);
    let contracts = orders.iter().all(|o| o.is_some_and(|o| (3.5..=4.5).contains(&o)));
    Ok(Verdict {
        passed: d.q <= 1e-8 && d.en <= 1e-6 && contracts,
        detail: format!(
            "dQ={:.2e} dEn={:.2e} at dt=1e-3; En drift ladder {:?} log2 ratios {:?}",
            d.q,
            d.en,
            en.iter().map(|x| format!("{x:.2e}")).collect::<Vec<_>>(),
            orders.iter().map(|o| o.map(|o| (o * 100.0).round() / 100.0)).collect::<Vec<_>>()
        ),
    })
}

/// Centered-difference `F_n'` against the analytic right side.
fn second_energy() -> Result<Verdict> {
    let g = grid(1, 128);
    let n = RegLevel::Finite(16);
    let st = stepper(&g, n, 1.0 / 32.0);
    let r = suites::second_energy_ladder(&st, &initial(&g, n), 0.5, &[1.0 / 32.0, 1.0 / 64.0, 1.0 / 128.0], 2.0, 0.3)?;
    Ok(Verdict {
        passed: r.passed,
        detail: format!(
            "order {:.3}; mismatches {:?}",
            r.order,
            r.checks.iter().map(|c| format!("{:.2e}", c.max_mismatch)).collect::<Vec<_>>()
        ),
    })
}

/// Sup-in-time weak-norm Cauchy rate over `n` in 8..128.
fn cauchy() -> Result<Verdict> {
    let mut passed = true;
    let mut detail = Vec::new();
    for (dim, m, dt) in [(1usize, 128usize, 1.0 / 128.0), (2, 128, 1.0 / 64.0)] {
        let g = grid(dim, m);
        let plan = FamilyPlan {
            levels: vec![8, 16, 32, 64, 128],
            data: DataSpec::default().build(&g, 0)?,
            horizon: 1.0,
            sample_every: 4,
            integrator: IntegratorConfig::lawson(dt),
            mode: Mode::Strong,
            reference: false,
        };
        let res = family_run(&plan).map_err(kgs::Error::from)?;
        let fit = res.report.weak_rate;
        let rate = fit.map_or(f64::NAN, |f| f.rate);
        passed &= rate >= 0.35;
        detail.push(format!(
            "N={dim} M={m}: rate {rate:.3} (95% CI {:.2}..{:.2})",
            fit.and_then(|f| f.ci_low).unwrap_or(f64::NAN),
            fit.and_then(|f| f.ci_high).unwrap_or(f64::NAN)
        ));
    }
    Ok(Verdict {
        passed,
        detail: detail.join("; "),
    })
}

/// Picard fixed point against the stepper on `T = 0.1`.
fn oracle() -> Result<Verdict> {
    let g = grid(1, 64);
    let mut worst = 0.0f64;
    for n in [RegLevel::Finite(16), RegLevel::Infinite] {
        let st = stepper(&g, n, 1e-4);
        let p = kgs::dynamics::PicardConfig::new(0.1, 200, 1e-14);
        let r = suites::oracle_compare(&st, &initial(&g, n), &p, 1e-6)?;
        worst = worst.max(r.sup_l2);
    }
    Ok(Verdict {
        passed: worst <= 1e-6,
        detail: format!("sup L2 distance {worst:.2e} (n = 16 and inf)"),
    })
}

/// Fitted growth exponents of the `H2 + H2 + H1` triple.
fn envelopes() -> Result<Verdict> {
    let mut passed = true;
    let mut detail = Vec::new();
    for (dim, m, dt, horizon, every, slack) in [
        (1usize, 128usize, 1.0 / 128.0, 10.0, 8usize, 0.2),
        (2, 64, 1.0 / 128.0, 5.0, 8, 0.2),
        (3, 32, 1.0 / 64.0, 2.0, 4, 0.3),
    ] {
        let g = grid(dim, m);
        let st = stepper(&g, RegLevel::Infinite, dt);
        let recs = run(&st, initial(&g, RegLevel::Infinite), &RunConfig::new(horizon, every))?.records();
        let r = suites::envelope(&recs, dim, slack)?;
        passed &= r.passed;
        detail.push(format!(
            "N={dim}: {:.3} <= {:.3}",
            r.model.fitted_exponent,
            r.model.theorem_exponent + slack
        ));
    }
    Ok(Verdict {
        passed,
        detail: detail.join("; "),
    })
}

/// Coercive lower bound on `E_n` at every sample of a `T = 1` run.
fn coercivity() -> Result<Verdict> {
    let mut passed = true;
    let mut detail = Vec::new();
    for (dim, m, dt) in [(1usize, 128usize, 1.0 / 256.0), (2, 64, 1.0 / 128.0)] {
        let g = grid(dim, m);
        let n = RegLevel::Finite(16);
        let s0 = initial(&g, n);
        let recs = run(&stepper(&g, n, dt), s0.clone(), &RunConfig::new(1.0, 4))?.records();
        let gn = GnConstants::estimate(&g, 256, 5)?;
        let r = suites::coercivity(&recs, l2_norm_sq(&s0.u).sqrt(), &gn)?;
        passed &= r.passed;
        detail.push(format!("N={dim}: min slack {:.3e} over {} samples", r.worst.slack, r.samples));
    }
    Ok(Verdict {
        passed,
        detail: detail.join("; "),
    })
}

/// Byte-identical artifacts across reruns and thread counts, and resume.
fn determinism() -> Result<Verdict> {
    let dir = tempfile::tempdir()?;
    let cfg = dir.path().join("c.toml");
    fs::write(
        &cfg,
        "horizon = 0.5\nsample_every = 16\ncheckpoint_every = 2\n[grid]\ndim = 2\nmodes = 32\n\
         [integrator]\ndt = 0.001953125\n[data]\nfamily = \"rough\"\n[converge]\nn_list = [4, 8, 16, 32]\nmin_rate = 0.0\n",
    )?;
    let kgs = |args: &[&str]| -> i32 {
        Command::new(env!("CARGO_BIN_EXE_kgs"))
            .args(args)
            .output()
            .map(|o| o.status.code().unwrap_or(-1))
            .unwrap_or(-1)
    };
    let c = cfg.to_str().unwrap();
    let mut codes = Vec::new();
    let mut series = Vec::new();
    let mut diffs = Vec::new();
    for (i, threads) in ["1", "1", "3"].iter().enumerate() {
        let out = dir.path().join(format!("run{i}"));
        codes.push(kgs(&["run", "--config", c, "--out", out.to_str().unwrap(), "--threads", threads]));
        series.push(fs::read(out.join("series.csv"))?);
        let conv = dir.path().join(format!("conv{i}"));
        codes.push(kgs(&["converge", "--config", c, "--out", conv.to_str().unwrap(), "--threads", threads]));
        diffs.push(fs::read(conv.join("diffs.csv"))?);
    }
    let same = series.windows(2).all(|w| w[0] == w[1]) && diffs.windows(2).all(|w| w[0] == w[1]);

    let full = dir.path().join("run0");
    let resumed = dir.path().join("resumed");
    let cp = full.join("checkpoints/step_000000128.kgs");
    codes.push(kgs(&[
        "run", "--config", c, "--out", resumed.to_str().unwrap(), "--resume", cp.to_str().unwrap(),
    ]));
    let a = *read_series(&full.join("series.csv"))?.last().unwrap();
    let b = *read_series(&resumed.join("series.csv"))?.last().unwrap();
    let gap = a
        .values()
        .iter()
        .zip(b.values())
        .map(|(x, y)| (x - y).abs() / x.abs().max(1.0))
        .fold(0.0, f64::max);
    Ok(Verdict {
        passed: same && gap <= 1e-12 && codes.iter().all(|&c| c == 0),
        detail: format!("identical artifacts: {same}; resume gap {gap:.1e}; exit codes {codes:?}"),
    })
}

fn main() {
    type Check = fn() -> Result<Verdict>;
    let criteria: [(&str, Check, u64); 8] = [
        ("operator inequalities", yosida, 10),
        ("conservation", conservation, 30),
        ("second-energy rate", second_energy, 60),
        ("Cauchy rate", cauchy, 300),
        ("Picard oracle", oracle, 60),
        ("growth envelopes", envelopes, 600),
        ("coercivity", coercivity, 60),
        ("determinism and resume", determinism, 60),
    ];
    let mut failures = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let t = Instant::now();
        let v = check();
        let el = t.elapsed();
        let in_time = el <= Duration::from_secs(*budget);
        let (ok, detail) = match v {
            Ok(v) => (v.passed && in_time, v.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        if !ok {
            failures += 1;
        }
        println!(
            "criterion {} {:<24} {}  {} [{:.1}s / {}s]",
            i + 1,
            name,
            if ok { "PASS" } else { "FAIL" },
            detail,
            el.as_secs_f64(),
            budget
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}
