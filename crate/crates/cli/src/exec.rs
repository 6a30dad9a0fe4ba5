//! Executes a parsed configuration and writes the run artifacts.

use std::fs::File;
use std::io::BufWriter;
use std::path::{Path, PathBuf};

use anyhow::Context;
use serde::Serialize;
use symhyp::lxf::{run, EnergyMonitor, Monitor, TotalsMonitor};
use symhyp::output::{write_trace, NdjsonLog};
use symhyp::MatrixField;

use crate::checks::{dynamic_check, static_check, viscous_limit_rows, write_verdicts, RunContext, Status, Verdict};
use crate::config::{CheckSpec, Profile, RunConfig};
use crate::initial::initial_field;
use crate::model::{build_model, Model, ModelKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Mode {
    /// Checks and time integration.
    Run,
    /// Checks that need no time integration.
    Check,
}

pub struct Options {
    pub mode: Mode,
    pub output_dir: PathBuf,
    /// Directory against which relative data paths resolve.
    pub base_dir: PathBuf,
    pub seed: u64,
    pub threads: usize,
}

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Serialize)]
struct Entry<'a> {
    section: &'a str,
    key: &'a str,
    value: &'a str,
}

#[derive(Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
enum LogEvent<'a> {
    Config {
        mode: Mode,
        model: &'a str,
        seed: u64,
        threads: usize,
        entries: Vec<Entry<'a>>,
    },
    Check(&'a Verdict),
    Error { message: String },
    Finished { exit_code: i32, passed: usize, failed: usize, skipped: usize },
}

pub struct Outcome {
    pub exit_code: i32,
    pub verdicts: Vec<Verdict>,
    pub error: Option<String>,
}

/// Runs everything the configuration asks for. Failures after the log is open are
/// recorded as a terminal error event; artifacts written so far are kept.
pub fn execute(cfg: &RunConfig, opts: &Options) -> anyhow::Result<Outcome> {
    std::fs::create_dir_all(&opts.output_dir)
        .with_context(|| format!("cannot create output directory {}", opts.output_dir.display()))?;
    let mut log = NdjsonLog::create(&opts.output_dir.join("run.ndjson"))?;
    log.append(&LogEvent::Config {
        mode: opts.mode,
        model: cfg.model.name(),
        seed: opts.seed,
        threads: opts.threads,
        entries: cfg
            .echo
            .iter()
            .map(|(s, k, v)| Entry {
                section: s,
                key: k,
                value: v,
            })
            .collect(),
    })?;

    let mut verdicts = Vec::new();
    let result = run_checks(cfg, opts, &mut log, &mut verdicts);
    let error = result.err().map(|e| format!("{e:#}"));
    if let Some(message) = &error {
        log.append(&LogEvent::Error { message: message.clone() })?;
    }
    write_verdicts(&opts.output_dir.join("verdicts.csv"), &verdicts)?;
    let count = |s: Status| verdicts.iter().filter(|v| v.status == s).count();
    let (passed, failed, skipped) = (count(Status::Pass), count(Status::Fail), count(Status::Skipped));
    let exit_code = if error.is_some() {
        EXIT_ERROR
    } else if failed > 0 {
        EXIT_CHECK_FAILED
    } else {
        EXIT_PASS
    };
    log.append(&LogEvent::Finished {
        exit_code,
        passed,
        failed,
        skipped,
    })?;
    Ok(Outcome {
        exit_code,
        verdicts,
        error,
    })
}

fn record(log: &mut NdjsonLog<BufWriter<File>>, verdicts: &mut Vec<Verdict>, rows: Vec<Verdict>) -> anyhow::Result<()> {
    for v in rows {
        log.append(&LogEvent::Check(&v))?;
        verdicts.push(v);
    }
    Ok(())
}

fn run_checks(cfg: &RunConfig, opts: &Options, log: &mut NdjsonLog<BufWriter<File>>, verdicts: &mut Vec<Verdict>) -> anyhow::Result<()> {
    let model = build_model(&cfg.model)?;
    for check in &cfg.checks {
        if let Some(rows) = static_check(&model, check, opts.seed)? {
            record(log, verdicts, rows)?;
        }
    }
    let dynamic: Vec<&CheckSpec> = cfg
        .checks
        .iter()
        .filter(|c| c.is_dynamic() || matches!(c, CheckSpec::Riemann { .. }))
        .collect();
    if opts.mode == Mode::Check {
        let skipped = dynamic.iter().filter(|c| c.is_dynamic()).map(|c| Verdict::skipped(c.name())).collect();
        return record(log, verdicts, skipped);
    }

    if let (Some(scheme), Some(grid), Some(init)) = (&cfg.scheme, &cfg.grid, &cfg.initial) {
        let evo = model.evolution().context("this model has no time evolution")?;
        let initial = initial_field(&cfg.model, grid, init, &opts.base_dir)?;
        let monitors = monitors_for(&model, initial.m)?;
        let refs: Vec<&dyn Monitor> = monitors.iter().map(|m| m.as_ref()).collect();
        let trace = run(evo, &initial, scheme, &refs)?;
        for event in &trace.events {
            log.append(event)?;
        }
        write_trace(&trace, &opts.output_dir).context("cannot write trace")?;
        if let Some(failure) = &trace.failure {
            return Err(failure.clone()).context(format!("run stopped after {} steps", trace.steps));
        }
        let step_position = match &init.profile {
            Profile::Step { position, .. } => *position,
            _ => 0.0,
        };
        let ctx = RunContext {
            config: scheme,
            initial: &initial,
            trace: &trace,
            step_position,
        };
        for check in dynamic.iter().filter(|c| !matches!(c, CheckSpec::ViscousLimit { .. })) {
            let rows = dynamic_check(&model, check, &ctx)?;
            record(log, verdicts, rows)?;
        }
    } else if let Some(c) = dynamic.iter().find(|c| c.is_dynamic() && !matches!(c, CheckSpec::ViscousLimit { .. })) {
        anyhow::bail!("check `{}` needs [scheme], [grid] and [initial] sections", c.name());
    }

    for check in &cfg.checks {
        if let CheckSpec::ViscousLimit { eps, t, u_left, u_right } = check {
            let grid = cfg.grid.as_ref().context("check `viscous_limit` needs a [grid] section")?;
            let safety = cfg.scheme.as_ref().map_or(0.9, |s| s.cfl_safety);
            let rows = viscous_limit_rows(&model, grid, safety, eps, *t, *u_left, *u_right)?;
            record(log, verdicts, rows)?;
        }
    }
    Ok(())
}

fn monitors_for(model: &Model, m: usize) -> anyhow::Result<Vec<Box<dyn Monitor>>> {
    let mut out: Vec<Box<dyn Monitor>> = vec![Box::new(TotalsMonitor { m })];
    if let Some(q) = model.energy_weight()? {
        out.push(Box::new(EnergyMonitor {
            q: MatrixField::constant(q),
        }));
    }
    if let ModelKind::System { constraints, .. } = &model.kind {
        for c in constraints {
            out.push(Box::new(c.clone()));
        }
    }
    Ok(out)
}

/// `[output] dir` relative to the working directory, or `out` when absent.
pub fn default_output_dir(cfg: &RunConfig) -> PathBuf {
    cfg.output_dir.clone().unwrap_or_else(|| PathBuf::from("out"))
}

pub fn base_dir_of(config_path: &Path) -> PathBuf {
    config_path.parent().map(Path::to_path_buf).unwrap_or_default()
}
