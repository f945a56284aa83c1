//! Command-line front end: `run`, `converge`, `verify` and `oracle`.
//!
//! Exit codes: 0 pass, 1 validation, 2 numerical failure, 3 property violation.

use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use crate::convergence::{
    family_run, finite_energy_mode, yosida_property_suite, DiffReport, FamilyPlan, YosidaSuiteConfig,
};
use crate::dynamics::{run_with, InitialData, Model, RunConfig, Sample, State, Stepper};
use crate::error::{Error, Result};
use crate::io::checkpoint::{read_checkpoint, write_checkpoint, Checkpoint};
use crate::io::csv::{write_table, SeriesWriter};
use crate::io::svg::{Plot, Scale, Series};
use crate::io::{write_json, ExperimentConfig, ManifestBuilder, Suite};
use crate::observables::{GnConstants, ObsRecord};
use crate::reg::{Mode, RegLevel};
use crate::spectral::norms::l2_norm_sq;
use crate::suites;

pub const EXIT_PASS: i32 = 0;
pub const EXIT_VALIDATION: i32 = 1;
pub const EXIT_NUMERICAL: i32 = 2;
pub const EXIT_PROPERTY: i32 = 3;

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::BlowUp { .. } | Error::HorizonTooLarge { .. } => EXIT_NUMERICAL,
        Error::PropertyViolation(_) => EXIT_PROPERTY,
        _ => EXIT_VALIDATION,
    }
}

#[derive(Debug, Parser)]
#[command(name = "kgs", version, about = "Regularized Klein-Gordon-Schrodinger experiments")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Default)]
pub struct Common {
    /// TOML experiment file; defaults apply when omitted.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Output directory (overrides `out` in the config).
    #[arg(long, value_name = "DIR")]
    pub out: Option<PathBuf>,
    /// Overrides `seed` in the config.
    #[arg(long, value_name = "U64")]
    pub seed: Option<u64>,
    /// Worker threads; results do not depend on it.
    #[arg(long, value_name = "K")]
    pub threads: Option<usize>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Single trajectory with series, summary, plot and checkpoints.
    Run {
        #[command(flatten)]
        common: Common,
        /// Continue from a checkpoint written by an earlier run.
        #[arg(long, value_name = "PATH")]
        resume: Option<PathBuf>,
    },
    /// Family over `converge.n_list` with Cauchy-rate fit.
    Converge {
        #[command(flatten)]
        common: Common,
    },
    /// Property suites listed in `verify.suites`.
    Verify {
        #[command(flatten)]
        common: Common,
    },
    /// Picard fixed point against the time stepper.
    Oracle {
        #[command(flatten)]
        common: Common,
    },
}

/// Result of a command: exit code plus the JSON summary in the manifest.
#[derive(Debug, Clone)]
pub struct Outcome {
    pub code: i32,
    pub summary: Value,
}

impl Outcome {
    fn new(passed: bool, fail_code: i32, summary: Value) -> Outcome {
        Outcome {
            code: if passed { EXIT_PASS } else { fail_code },
            summary,
        }
    }
}

/// Config file (or defaults) with command-line overrides applied.
pub fn resolve_config(common: &Common) -> Result<ExperimentConfig> {
    let mut cfg = match &common.config {
        Some(p) => ExperimentConfig::load(p)?,
        None => ExperimentConfig::default(),
    };
    if let Some(s) = common.seed {
        cfg.seed = s;
    }
    if let Some(o) = &common.out {
        cfg.out = o.clone();
    }
    if common.threads == Some(0) {
        return Err(Error::config("--threads", "must be >= 1"));
    }
    cfg.validate()?;
    Ok(cfg)
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_VALIDATION } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let (name, common) = match &cli.command {
        Command::Run { common, .. } => ("run", common),
        Command::Converge { common } => ("converge", common),
        Command::Verify { common } => ("verify", common),
        Command::Oracle { common } => ("oracle", common),
    };
    if let Some(k) = common.threads.filter(|&k| k > 0) {
        // A second global build fails harmlessly when the pool already exists.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(k).build_global();
    }
    let result = resolve_config(common).and_then(|cfg| {
        let out = cfg.out.clone();
        execute(name, &cfg, &out, |manifest| match &cli.command {
            Command::Run { resume, .. } => cmd_run(&cfg, &out, resume.as_deref(), manifest),
            Command::Converge { .. } => cmd_converge(&cfg, &out, manifest),
            Command::Verify { .. } => cmd_verify(&cfg, &out, manifest),
            Command::Oracle { .. } => cmd_oracle(&cfg, &out, manifest),
        })
    });
    match result {
        Ok(o) => {
            if o.code != EXIT_PASS {
                eprintln!("kgs {name}: failed (exit {})", o.code);
            }
            o.code
        }
        Err(e) => {
            eprintln!("kgs {name}: error: {e}");
            exit_code(&e)
        }
    }
}

/// Creates `out`, writes the resolved config, runs `body`, then the manifest.
pub fn execute(
    name: &str,
    cfg: &ExperimentConfig,
    out: &Path,
    body: impl FnOnce(&mut ManifestBuilder) -> Result<Outcome>,
) -> Result<Outcome> {
    fs::create_dir_all(out)?;
    let mut manifest = ManifestBuilder::start(name, cfg.hash(), cfg.seed);
    fs::write(out.join("config.toml"), cfg.to_toml())?;
    manifest.add_file("config.toml");
    let (outcome, err) = match body(&mut manifest) {
        Ok(o) => (o, None),
        Err(e) => (
            Outcome {
                code: exit_code(&e),
                summary: json!({ "error": e.to_string() }),
            },
            Some(e),
        ),
    };
    let m = manifest.finish(outcome.code == EXIT_PASS, outcome.code, outcome.summary.clone());
    write_json(&out.join("manifest.json"), &m)?;
    match err {
        Some(e) => Err(e),
        None => Ok(outcome),
    }
}

fn data_for(cfg: &ExperimentConfig) -> Result<InitialData> {
    cfg.data.build(&cfg.grid()?, cfg.seed)
}

fn stepper_at(cfg: &ExperimentConfig, data: &InitialData, n: RegLevel) -> Result<Stepper> {
    let model = Model::new(data.grid(), cfg.mode.coupling_level(n), cfg.integrator.rule());
    Stepper::new(model, cfg.integrator)
}

fn checkpoint_name(step: u64) -> String {
    format!("checkpoints/step_{step:09}.kgs")
}

fn energy_plot(records: &[ObsRecord]) -> String {
    let e: Vec<(f64, f64)> = records.iter().map(|r| (r.t, r.e)).collect();
    let en: Vec<(f64, f64)> = records.iter().map(|r| (r.t, r.en)).collect();
    let q: Vec<(f64, f64)> = records.iter().map(|r| (r.t, r.q)).collect();
    Plot {
        title: "Invariants",
        x_label: "t",
        y_label: "value",
        x_scale: Scale::Linear,
        y_scale: Scale::Linear,
        series: vec![
            Series { label: "E", points: &e },
            Series { label: "E_n", points: &en },
            Series { label: "Q", points: &q },
        ],
    }
    .render()
}

#[derive(Debug, Serialize)]
struct RunSummary {
    level: RegLevel,
    mode: Mode,
    start_t: f64,
    start_step: u64,
    samples: usize,
    blow_up: Option<String>,
    drift: suites::Drift,
    energy_drift: f64,
    envelope: Option<suites::EnvelopeReport>,
    last: Option<ObsRecord>,
    checkpoints: Vec<String>,
}

/// Single trajectory. With `resume`, starts from the checkpoint and writes
/// the series from the checkpoint time on.
pub fn cmd_run(cfg: &ExperimentConfig, out: &Path, resume: Option<&Path>, manifest: &mut ManifestBuilder) -> Result<Outcome> {
    let data = data_for(cfg)?;
    let (initial, start_step) = match resume {
        None => (data.regularize(cfg.n, cfg.mode), 0),
        Some(p) => {
            let cp = read_checkpoint(p)?;
            if cp.level != cfg.n || !cp.state.grid().same_as(data.grid()) {
                return Err(Error::Checkpoint(format!(
                    "{} does not match the configured grid and level n = {}",
                    p.display(),
                    cfg.n
                )));
            }
            if cp.step % cfg.sample_every as u64 != 0 {
                return Err(Error::Checkpoint("checkpoint step is off the sampling cadence".into()));
            }
            (cp.state, cp.step)
        }
    };
    let stepper = stepper_at(cfg, &data, cfg.n)?;
    if cfg.checkpoint_every > 0 {
        fs::create_dir_all(out.join("checkpoints"))?;
    }
    let mut writer = SeriesWriter::create(&out.join("series.csv"))?;
    manifest.add_file("series.csv");
    let mut checkpoints = Vec::new();
    let mut sample_index = 0usize;
    let start_t = initial.t;
    let run_cfg = RunConfig::new(cfg.horizon, cfg.sample_every);
    let level = cfg.n;
    let every = cfg.checkpoint_every;
    let hook = |s: &Sample, state: &State| -> Result<()> {
        writer.push(&s.record)?;
        let step = start_step + s.step as u64;
        if every > 0 && sample_index % every == 0 && (sample_index > 0 || resume.is_none()) {
            let name = checkpoint_name(step);
            write_checkpoint(
                &out.join(&name),
                &Checkpoint {
                    level,
                    step,
                    state: state.clone(),
                },
            )?;
            checkpoints.push(name);
        }
        sample_index += 1;
        Ok(())
    };
    let (records, failure) = match run_with(&stepper, initial, &run_cfg, hook) {
        Ok(t) => (t.records(), None),
        Err(f) => (f.partial.records(), Some(f.error)),
    };
    for c in &checkpoints {
        manifest.add_file(c);
    }
    let blow_up = match failure {
        None => None,
        Some(e @ Error::BlowUp { .. }) => Some(e.to_string()),
        Some(e) => return Err(e),
    };
    fs::write(out.join("energy.svg"), energy_plot(&records))?;
    manifest.add_file("energy.svg");
    let dt = cfg.integrator.dt;
    let envelope = if resume.is_none() && blow_up.is_none() {
        suites::envelope(&records, data.grid().dim(), cfg.verify.envelope_slack).ok()
    } else {
        None
    };
    let summary = RunSummary {
        level,
        mode: cfg.mode,
        start_t,
        start_step,
        samples: records.len(),
        blow_up: blow_up.clone(),
        drift: suites::Drift::of(dt, &records),
        energy_drift: suites::relative_drift(&records, |r| r.e),
        envelope,
        last: records.last().copied(),
        checkpoints,
    };
    write_json(&out.join("summary.json"), &summary)?;
    manifest.add_file("summary.json");
    let summary = serde_json::to_value(&summary)?;
    Ok(Outcome::new(blow_up.is_none(), EXIT_NUMERICAL, summary))
}

const DIFF_COLUMNS: [&str; 6] = ["n", "m", "strong", "weak", "strong_t0", "weak_t0"];

fn write_diffs(out: &Path, report: &DiffReport, manifest: &mut ManifestBuilder) -> Result<()> {
    let rows: Vec<Vec<f64>> = report
        .pairs
        .iter()
        .map(|p| vec![p.n as f64, p.m as f64, p.strong, p.weak, p.strong_t0, p.weak_t0])
        .collect();
    write_table(&out.join("diffs.csv"), &DIFF_COLUMNS, &rows)?;
    manifest.add_file("diffs.csv");
    let strong: Vec<(f64, f64)> = report.pairs.iter().map(|p| (p.n as f64, p.strong)).collect();
    let weak: Vec<(f64, f64)> = report.pairs.iter().map(|p| (p.n as f64, p.weak)).collect();
    let svg = Plot {
        title: "Consecutive-level differences",
        x_label: "n",
        y_label: "sup-in-time distance",
        x_scale: Scale::Log,
        y_scale: Scale::Log,
        series: vec![
            Series { label: "H1+H1+L2", points: &strong },
            Series { label: "L2+L2+H-1", points: &weak },
        ],
    }
    .render();
    fs::write(out.join("diffs.svg"), svg)?;
    manifest.add_file("diffs.svg");
    Ok(())
}

pub fn family_plan(cfg: &ExperimentConfig) -> Result<FamilyPlan> {
    Ok(FamilyPlan {
        levels: cfg.converge.n_list.clone(),
        data: data_for(cfg)?,
        horizon: cfg.horizon,
        sample_every: cfg.sample_every,
        integrator: cfg.integrator,
        mode: cfg.mode,
        reference: cfg.converge.reference,
    })
}

/// Family run; passes iff the weak-norm rate reaches `converge.min_rate`
/// (and, in finite-energy mode, the `L^p` ratio check passes).
pub fn cmd_converge(cfg: &ExperimentConfig, out: &Path, manifest: &mut ManifestBuilder) -> Result<Outcome> {
    let plan = family_plan(cfg)?;
    let result = match cfg.mode {
        Mode::Strong => family_run(&plan).map(|r| (r.report, None)),
        Mode::FiniteEnergy => finite_energy_mode(&plan).map(|r| (r.diff, Some(r.p_ratio))),
    };
    let (report, p_ratio) = match result {
        Ok(r) => r,
        Err(f) => {
            let summary = json!({
                "failed_level": f.level,
                "error": f.error.to_string(),
                "partial": f.partial,
            });
            write_json(&out.join("report.json"), &summary)?;
            manifest.add_file("report.json");
            if let Some(p) = &f.partial {
                write_diffs(out, p, manifest)?;
            }
            let code = match exit_code(&f.error) {
                EXIT_VALIDATION => EXIT_VALIDATION,
                _ => EXIT_NUMERICAL,
            };
            return Ok(Outcome { code, summary });
        }
    };
    write_diffs(out, &report, manifest)?;
    let rate = report.weak_rate.map(|r| r.rate);
    let rate_ok = rate.is_some_and(|r| r >= cfg.converge.min_rate);
    let p_ok = p_ratio.as_ref().is_none_or(|p| p.passed);
    let summary = json!({
        "report": report,
        "p_ratio": p_ratio,
        "min_rate": cfg.converge.min_rate,
        "weak_rate": rate,
        "passed": rate_ok && p_ok,
    });
    write_json(&out.join("report.json"), &summary)?;
    manifest.add_file("report.json");
    Ok(Outcome::new(rate_ok && p_ok, EXIT_PROPERTY, summary))
}

/// Runs the selected suites; passes iff every one passes.
pub fn cmd_verify(cfg: &ExperimentConfig, out: &Path, manifest: &mut ManifestBuilder) -> Result<Outcome> {
    let v = &cfg.verify;
    if v.suites.is_empty() {
        return Err(Error::config("verify.suites", "suite selection is empty"));
    }
    if v.suites.contains(&Suite::SecondEnergy) {
        cfg.validate_ladder()?;
    }
    let data = data_for(cfg)?;
    let grid = data.grid().clone();
    let initial = data.regularize(cfg.n, cfg.mode);
    let stepper = stepper_at(cfg, &data, cfg.n)?;
    let needs_run = v.suites.iter().any(|s| matches!(s, Suite::Conservation | Suite::Coercivity));
    let records = if needs_run {
        crate::dynamics::run(&stepper, initial.clone(), &RunConfig::new(cfg.horizon, cfg.sample_every))?.records()
    } else {
        Vec::new()
    };

    let mut results = serde_json::Map::new();
    let mut all = true;
    for suite in &v.suites {
        let (key, passed, value) = match suite {
            Suite::Yosida => {
                let levels: Vec<u64> = (1..=v.max_level).collect();
                let mut yc = YosidaSuiteConfig::new(v.fields, cfg.seed);
                yc.fault = v.fault;
                let r = yosida_property_suite(&grid, &levels, &yc)?;
                ("yosida", r.passed, serde_json::to_value(&r)?)
            }
            Suite::Conservation => {
                let r = suites::conservation(&records, cfg.integrator.dt, v.q_drift, v.en_drift);
                ("conservation", r.passed, serde_json::to_value(&r)?)
            }
            Suite::SecondEnergy => {
                let r = suites::second_energy_ladder(
                    &stepper,
                    &initial,
                    v.ladder_horizon,
                    &v.ladder_dts,
                    v.rate_order,
                    v.rate_order_tol,
                )?;
                ("second-energy", r.passed, serde_json::to_value(&r)?)
            }
            Suite::Envelope => {
                let unreg = stepper_at(cfg, &data, RegLevel::Infinite)?;
                let recs = crate::dynamics::run(
                    &unreg,
                    data.regularize(RegLevel::Infinite, cfg.mode),
                    &RunConfig::new(cfg.horizon, cfg.sample_every),
                )?
                .records();
                let r = suites::envelope(&recs, grid.dim(), v.envelope_slack)?;
                ("envelope", r.passed, serde_json::to_value(&r)?)
            }
            Suite::Coercivity => {
                let gn = GnConstants::estimate(&grid, v.gn_ensemble, cfg.seed)?;
                let phi_l2 = l2_norm_sq(&initial.u).sqrt();
                let r = suites::coercivity(&records, phi_l2, &gn)?;
                ("coercivity", r.passed, serde_json::to_value(&r)?)
            }
        };
        all &= passed;
        results.insert(key.to_string(), json!({ "passed": passed, "report": value }));
    }
    let summary = json!({ "passed": all, "suites": results });
    write_json(&out.join("verify.json"), &summary)?;
    manifest.add_file("verify.json");
    Ok(Outcome::new(all, EXIT_PROPERTY, summary))
}

/// Picard fixed point against the stepper on the Picard nodes.
pub fn cmd_oracle(cfg: &ExperimentConfig, out: &Path, manifest: &mut ManifestBuilder) -> Result<Outcome> {
    let data = data_for(cfg)?;
    let mut model = Model::new(data.grid(), cfg.mode.coupling_level(cfg.n), cfg.integrator.rule());
    if !cfg.oracle.coupling {
        model = model.decoupled();
    }
    let stepper = Stepper::new(model, cfg.integrator)?;
    let initial = data.regularize(cfg.n, cfg.mode);
    let r = suites::oracle_compare(&stepper, &initial, &cfg.picard()?, cfg.oracle.agreement)?;
    let summary = serde_json::to_value(&r)?;
    write_json(&out.join("oracle.json"), &r)?;
    manifest.add_file("oracle.json");
    Ok(Outcome::new(r.passed, EXIT_PROPERTY, summary))
}
