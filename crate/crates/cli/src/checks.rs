//! Named diagnostics and their verdict rows. Every tolerance comes from the library.

use anyhow::{bail, Context};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use symhyp::energy::{energy_growth_bound, lxf_support_margin, support_test, CONE_SLOPE_SAFETY};
use symhyp::entropy::{entropy_pair_residual, hessian_symmetrizer, FD_TOLERANCE_FACTOR, PAIR_RESIDUAL_TOL};
use symhyp::linalg::{PD_TOL, SYMMETRY_TOL};
use symhyp::lxf::{SchemeConfig, Trace};
use symhyp::models::CONSTRAINT_GROWTH_LIMIT;
use symhyp::shocks::{
    self, entropy_admissible, riemann_scalar, rh_consistency, rh_residual, shock_detect, shock_speed_tolerance,
    track_rightmost_shock, viscous_limit_compare, RiemannKind, DEFAULT_SHOCK_THRESHOLD, ENTROPY_TOL,
};
use symhyp::system::is_sh;
use symhyp::GridField;

use crate::config::{CheckSpec, GridSpec};
use crate::initial::empty_grid;
use crate::model::{Model, ModelKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn as_str(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Skipped => "skipped",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub name: String,
    pub status: Status,
    pub value: Option<f64>,
    pub tolerance: Option<f64>,
}

impl Verdict {
    fn new(name: impl Into<String>, passed: bool, value: f64, tolerance: Option<f64>) -> Self {
        Verdict {
            name: name.into(),
            status: if passed { Status::Pass } else { Status::Fail },
            value: Some(value),
            tolerance,
        }
    }

    /// `value ≤ tolerance`.
    fn bounded(name: impl Into<String>, value: f64, tolerance: f64) -> Self {
        Verdict::new(name, value <= tolerance, value, Some(tolerance))
    }

    pub fn skipped(name: impl Into<String>) -> Self {
        Verdict {
            name: name.into(),
            status: Status::Skipped,
            value: None,
            tolerance: None,
        }
    }
}

/// Everything a check may read after a time integration.
pub struct RunContext<'a> {
    pub config: &'a SchemeConfig,
    pub initial: &'a GridField,
    pub trace: &'a Trace,
    /// Location of the initial discontinuity for Riemann data.
    pub step_position: f64,
}

fn need_law<'a>(model: &'a Model, check: &str) -> anyhow::Result<&'a symhyp::ConservationLaw> {
    model
        .law()
        .with_context(|| format!("check `{check}` needs a conservation law, not model `{}`", model.spec.name()))
}

/// Checks that need no time integration. `None` for dynamic checks.
pub fn static_check(model: &Model, check: &CheckSpec, seed: u64) -> anyhow::Result<Option<Vec<Verdict>>> {
    let rows = match check {
        CheckSpec::IsSh { samples } => {
            let sys = model
                .quasilinear()
                .with_context(|| format!("model `{}` has no evolution form", model.spec.name()))?;
            let verdict = is_sh(&sys, &model.state_samples(*samples))?;
            let worst = verdict.residuals.iter().copied().fold(0.0, f64::max);
            vec![Verdict::new("is_sh", verdict.holds(), worst, Some(SYMMETRY_TOL))]
        }
        CheckSpec::EntropyPair { samples } => {
            let law = need_law(model, "entropy_pair")?;
            let ModelKind::Law { pair: Some(pair), .. } = &model.kind else {
                bail!("model `{}` ships no entropy pair", model.spec.name());
            };
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let b = &law.state_box;
            let states: Vec<Vec<f64>> = (0..*samples)
                .map(|_| b.lower.iter().zip(&b.upper).map(|(lo, hi)| rng.gen_range(*lo..=*hi)).collect())
                .collect();
            let tol = if pair.has_exact_derivatives() {
                PAIR_RESIDUAL_TOL
            } else {
                PAIR_RESIDUAL_TOL * FD_TOLERANCE_FACTOR
            };
            let residual = entropy_pair_residual(law, pair, &states)?;
            let report = hessian_symmetrizer(law, pair, &states)?;
            let worst = report.verdict.residuals.iter().copied().fold(0.0, f64::max);
            vec![
                Verdict::bounded("entropy_pair.residual", residual, tol),
                Verdict::new("entropy_pair.hessian_symmetrizer", report.verdict.holds(), worst, Some(SYMMETRY_TOL)),
            ]
        }
        CheckSpec::Riemann { u_left, u_right } => riemann_rows(model, *u_left, *u_right)?,
        CheckSpec::Certificate => {
            let ModelKind::Tricomi(t) = &model.kind else {
                bail!("check `certificate` needs the tricomi model");
            };
            let c = &t.certificate;
            vec![Verdict::new("certificate", c.positive, c.min_pivot, Some(PD_TOL))]
        }
        _ => return Ok(None),
    };
    Ok(Some(rows))
}

fn riemann_rows(model: &Model, u_l: f64, u_r: f64) -> anyhow::Result<Vec<Verdict>> {
    let law = need_law(model, "riemann")?;
    let ModelKind::Law { pair: Some(pair), .. } = &model.kind else {
        bail!("model `{}` ships no entropy pair", model.spec.name());
    };
    let sol = riemann_scalar(law, u_l, u_r)?;
    if sol.kind == RiemannKind::Constant {
        return Ok(vec![Verdict::new("riemann.constant", true, 0.0, None)]);
    }
    let c = shocks::rh_speed(law, u_l, u_r)?;
    let residual = rh_residual(law, &[u_l], &[u_r], c)?[0].abs();
    let verdict = entropy_admissible(law, pair, &[u_l], &[u_r], c)?;
    let speed_row = Verdict::new("riemann.rh_speed", residual <= ENTROPY_TOL, c, None);
    Ok(match sol.kind {
        RiemannKind::Shock { .. } => vec![
            speed_row,
            Verdict::new("riemann.entropy_production", verdict.admissible, verdict.production, Some(ENTROPY_TOL)),
        ],
        // Rarefaction data: the discontinuous weak solution must be rejected.
        _ => vec![
            speed_row,
            Verdict::new("riemann.expansion_shock_rejected", !verdict.admissible, verdict.production, Some(ENTROPY_TOL)),
        ],
    })
}

/// Checks evaluated on a completed run.
pub fn dynamic_check(model: &Model, check: &CheckSpec, ctx: &RunContext) -> anyhow::Result<Vec<Verdict>> {
    let trace = ctx.trace;
    let h = ctx.initial.min_h();
    Ok(match check {
        CheckSpec::Energy => {
            let series = trace.monitor("energy").with_context(|| {
                format!("check `energy` needs a linear model, not `{}`", model.spec.name())
            })?;
            let e = series.column(0);
            let worst = e.iter().copied().fold(0.0, f64::max);
            vec![Verdict::bounded("energy", worst, e[0] * energy_growth_bound(trace.k))]
        }
        CheckSpec::Constraints => {
            let ModelKind::System { constraints, .. } = &model.kind else {
                bail!("model `{}` has no constraint monitors", model.spec.name());
            };
            if constraints.is_empty() {
                bail!("model `{}` has no constraint monitors", model.spec.name());
            }
            constraints
                .iter()
                .map(|c| {
                    let r = trace.monitor(&c.name).expect("constraint monitors are always recorded").column(0);
                    let worst = r.iter().copied().fold(0.0, f64::max);
                    Verdict::bounded(format!("constraints.{}", c.name), worst, CONSTRAINT_GROWTH_LIMIT * r[0])
                })
                .collect()
        }
        CheckSpec::Support { radius } => {
            let evo = model.evolution().expect("dynamic checks run after an evolution");
            let a_star = evo.max_speed(ctx.initial, 0.0)?;
            let margin = lxf_support_margin(ctx.initial.n(), h, trace.k, a_star, trace.steps);
            let verdict = support_test(&trace.snapshots, *radius, a_star * CONE_SLOPE_SAFETY, margin, 0.0);
            vec![Verdict::new("support", verdict.passed, verdict.max_outside, Some(0.0))]
        }
        CheckSpec::Rh { component, threshold, t_min } => {
            let law = need_law(model, "rh")?;
            let t_end = ctx.config.t_end;
            let t_min = t_min.unwrap_or(0.25 * t_end);
            let tol = shock_speed_tolerance(h, t_end);
            match track_rightmost_shock(&trace.snapshots, *component, *threshold, t_min, 3)? {
                None => vec![Verdict::new("rh", false, f64::NAN, Some(tol))],
                Some(track) => vec![Verdict::bounded("rh", rh_consistency(law, &track)?, tol)],
            }
        }
        CheckSpec::Riemann { u_left, u_right } => {
            let law = need_law(model, "riemann")?;
            let sol = riemann_scalar(law, *u_left, *u_right)?;
            let RiemannKind::Shock { speed } = sol.kind else {
                return Ok(Vec::new());
            };
            let t = trace.t;
            let expected = ctx.step_position + speed * t;
            let tol = shock_speed_tolerance(h, t) * t;
            let found = shock_detect(&trace.final_state, 0, DEFAULT_SHOCK_THRESHOLD)?
                .into_iter()
                .map(|s| (s.position - expected).abs())
                .fold(f64::INFINITY, f64::min);
            vec![Verdict::bounded("riemann.shock_position", found, tol)]
        }
        _ => Vec::new(),
    })
}

/// Runs the viscous scheme for each `ε` (largest first); the distance to the entropy
/// solution must decrease strictly and stay below the distance to the expansion shock.
pub fn viscous_limit_rows(
    model: &Model,
    grid: &GridSpec,
    cfl_safety: f64,
    eps: &[f64],
    t: f64,
    u_l: f64,
    u_r: f64,
) -> anyhow::Result<Vec<Verdict>> {
    let law = need_law(model, "viscous_limit")?;
    let layout = empty_grid(grid, 1)?;
    let mut eps = eps.to_vec();
    eps.sort_by(|a, b| b.total_cmp(a));
    let rows = viscous_limit_compare(law, u_l, u_r, &eps, &layout, t, cfl_safety)?;
    let mut out = Vec::new();
    let mut previous: Option<f64> = None;
    for row in rows {
        let decreasing = previous.is_none_or(|p| row.to_entropy_solution < p);
        let separated = row.to_expansion_shock.is_none_or(|d| d >= row.to_entropy_solution);
        out.push(Verdict::new(
            format!("viscous_limit.eps={}", symhyp::output::format_float(row.eps)),
            decreasing && separated,
            row.to_entropy_solution,
            previous,
        ));
        previous = Some(row.to_entropy_solution);
    }
    Ok(out)
}

pub fn write_verdicts(path: &std::path::Path, verdicts: &[Verdict]) -> anyhow::Result<()> {
    let mut w = csv::Writer::from_path(path).with_context(|| format!("cannot write {}", path.display()))?;
    w.write_record(["name", "status", "value", "tolerance"])?;
    let fmt = |v: Option<f64>| v.map(symhyp::output::format_float).unwrap_or_default();
    for v in verdicts {
        w.write_record([v.name.clone(), v.status.as_str().to_string(), fmt(v.value), fmt(v.tolerance)])?;
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::config::ModelSpec;
    use crate::model::build_model;

    fn burgers() -> Model {
        build_model(&ModelSpec::Burgers { u_min: -2.0, u_max: 2.0 }).unwrap()
    }

    #[test]
    fn burgers_riemann_rows() {
        let rows = static_check(&burgers(), &CheckSpec::Riemann { u_left: 1.0, u_right: 0.0 }, 0)
            .unwrap()
            .unwrap();
        assert_eq!(rows[0].name, "riemann.rh_speed");
        assert_eq!(rows[0].value, Some(0.5));
        assert_eq!(rows[0].status, Status::Pass);
        assert!((rows[1].value.unwrap() + 1.0 / 6.0).abs() < 1e-12);
        assert_eq!(rows[1].status, Status::Pass);
    }

    #[test]
    fn rarefaction_rejects_the_expansion_shock() {
        let rows = static_check(&burgers(), &CheckSpec::Riemann { u_left: 0.0, u_right: 1.0 }, 0)
            .unwrap()
            .unwrap();
        assert_eq!(rows[1].name, "riemann.expansion_shock_rejected");
        assert!((rows[1].value.unwrap() - 1.0 / 6.0).abs() < 1e-12);
        assert_eq!(rows[1].status, Status::Pass);
    }

    #[test]
    fn entropy_pair_rows_pass() {
        let rows = static_check(&burgers(), &CheckSpec::EntropyPair { samples: 20 }, 7).unwrap().unwrap();
        assert!(rows.iter().all(|r| r.status == Status::Pass), "{rows:?}");
    }

    #[test]
    fn tricomi_certificate_row() {
        let model = build_model(&ModelSpec::Tricomi { lambda: 0.0, y_bound: 1.0 }).unwrap();
        let rows = static_check(&model, &CheckSpec::Certificate, 0).unwrap().unwrap();
        assert_eq!(rows[0].status, Status::Fail);
    }

    #[test]
    fn dynamic_checks_are_not_static() {
        assert!(static_check(&burgers(), &CheckSpec::Energy, 0).unwrap().is_none());
    }

    #[test]
    fn verdict_csv_round_trips_floats() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("v.csv");
        write_verdicts(&path, &[Verdict::bounded("x", 0.1 + 0.2, 1e-12), Verdict::skipped("y")]).unwrap();
        let text = std::fs::read_to_string(&path).unwrap();
        assert_eq!(text, "name,status,value,tolerance\nx,fail,0.30000000000000004,1e-12\ny,skipped,,\n");
    }
}
