//! Lax-Friedrichs time stepping on cell-centred grids.
//!
//! One step replaces every cell by the average of its `2n` axis neighbours and adds
//! `k` times the centred-difference right-hand side:
//! `u' = (1/2n) Σ_j (u(x + h e_j) + u(x − h e_j)) + k · RHS(u)`.
//! For a conservation law in one dimension [`viscous_step`] instead adds an
//! explicit `ε ∂_xx u` term to the centred flux difference.

use nalgebra::{DMatrix, DVector};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::energy::{spacetime, LinearSystem};
use crate::error::{Error, Result};
use crate::field::StateCheck;
use crate::grid::GridField;
use crate::law::ConservationLaw;
use crate::system::{max_abs_speed, SystemDef};

/// Relative slack on the CFL comparison so that `λ a* = bound` survives rounding in `a*`.
const CFL_SLACK: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SchemeConfig {
    /// Mesh ratio `k / h` (with `h` the smallest spacing).
    pub lambda: f64,
    pub cfl_safety: f64,
    pub t_end: f64,
    /// Monitors are evaluated every `output_stride` steps and at the final step.
    pub output_stride: usize,
    /// Snapshots are kept every `snapshot_stride` steps; 0 keeps only the first and last.
    pub snapshot_stride: usize,
    /// Artificial viscosity `ε`; a positive value selects [`viscous_step`].
    pub viscosity: f64,
}

impl SchemeConfig {
    pub fn new(lambda: f64, t_end: f64) -> Self {
        SchemeConfig {
            lambda,
            cfl_safety: 0.9,
            t_end,
            output_stride: 1,
            snapshot_stride: 0,
            viscosity: 0.0,
        }
    }

    pub fn with_cfl_safety(mut self, safety: f64) -> Self {
        self.cfl_safety = safety;
        self
    }

    pub fn with_strides(mut self, output: usize, snapshot: usize) -> Self {
        self.output_stride = output;
        self.snapshot_stride = snapshot;
        self
    }

    pub fn with_viscosity(mut self, eps: f64) -> Self {
        self.viscosity = eps;
        self
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |name: &str, reason: &str| {
            Err(Error::InvalidParameter {
                name: name.into(),
                reason: reason.into(),
            })
        };
        if !(self.lambda > 0.0 && self.lambda.is_finite()) {
            return bad("lambda", "must be positive and finite");
        }
        if !(self.cfl_safety > 0.0 && self.cfl_safety <= 1.0) {
            return bad("cfl_safety", "must lie in (0, 1]");
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return bad("t_end", "must be non-negative and finite");
        }
        if self.output_stride == 0 {
            return bad("output_stride", "must be at least 1");
        }
        if !(self.viscosity >= 0.0 && self.viscosity.is_finite()) {
            return bad("viscosity", "must be non-negative and finite");
        }
        Ok(())
    }
}

/// Anything that supplies the right-hand side of `∂_t u = RHS(u)` on a grid.
pub trait Evolution: Sync {
    fn dim(&self) -> usize;
    fn components(&self) -> usize;
    /// Bound on `|characteristic speed|` over the cells of `state`.
    fn max_speed(&self, state: &GridField, t: f64) -> Result<f64>;
    /// Centred-difference right-hand side, `m` entries per cell.
    fn rhs(&self, state: &GridField, t: f64) -> Result<Vec<f64>>;
    fn admissibility(&self) -> Option<&StateCheck> {
        None
    }
    fn conservation_law(&self) -> Option<&ConservationLaw> {
        None
    }
}

/// Fails on the first cell (lexicographic order) rejected by `check`.
pub fn check_admissible(state: &GridField, check: &StateCheck) -> Result<()> {
    for c in 0..state.cells() {
        if let Err(reason) = check.check(state.cell(c)) {
            return Err(Error::StateOutsideBox {
                cell: c,
                position: state.center(c),
                reason,
            });
        }
    }
    Ok(())
}

/// Runs `f` on every cell in parallel; on failure reports the lowest failing cell.
fn per_cell<F>(state: &GridField, width: usize, f: F) -> Result<Vec<f64>>
where
    F: Fn(usize, &mut [f64]) -> Result<()> + Sync,
{
    let mut out = vec![0.0; state.cells() * width];
    let failed = out
        .par_chunks_mut(width)
        .enumerate()
        .try_for_each(|(c, slot)| f(c, slot))
        .is_err();
    if failed {
        let mut scratch = vec![0.0; width];
        for c in 0..state.cells() {
            f(c, &mut scratch)?;
        }
    }
    Ok(out)
}

fn centred_gradients(state: &GridField, c: usize) -> Vec<DVector<f64>> {
    (0..state.n())
        .map(|j| {
            let plus = state.cell(state.neighbor(c, j, true));
            let minus = state.cell(state.neighbor(c, j, false));
            DVector::from_iterator(state.m, plus.iter().zip(minus).map(|(p, q)| (p - q) / (2.0 * state.h[j])))
        })
        .collect()
}

impl Evolution for SystemDef {
    fn dim(&self) -> usize {
        self.n
    }

    fn components(&self) -> usize {
        self.m
    }

    fn max_speed(&self, state: &GridField, t: f64) -> Result<f64> {
        let constant = self.coeff.iter().all(|c| c.as_constant().is_some())
            && self.symmetrizer.as_ref().is_none_or(|s| s.as_constant().is_some());
        let cells = if constant { 1 } else { state.cells() };
        let mut best: f64 = 0.0;
        for c in 0..cells {
            best = best.max(max_abs_speed(self, &spacetime(t, &state.center(c)), state.cell(c))?);
        }
        Ok(best)
    }

    fn rhs(&self, state: &GridField, t: f64) -> Result<Vec<f64>> {
        let m0_inverse: Option<DMatrix<f64>> = match self.coeff[0].as_constant() {
            Some(m0) => Some(m0.clone().try_inverse().ok_or_else(|| Error::Singular {
                context: "time coefficient M0".into(),
            })?),
            None => None,
        };
        per_cell(state, self.m, |c, slot| {
            let x = spacetime(t, &state.center(c));
            let u = state.cell(c);
            let grads = centred_gradients(state, c);
            let value = match &m0_inverse {
                Some(inv) => {
                    let mut r = self.source.evaluate(&x, u)?;
                    for (j, g) in grads.iter().enumerate() {
                        match self.coeff[j + 1].as_constant() {
                            Some(mj) => r -= mj * g,
                            None => r -= self.coeff[j + 1].evaluate(&x, u)? * g,
                        }
                    }
                    inv * r
                }
                None => self.time_derivative(&x, u, &grads)?,
            };
            slot.copy_from_slice(value.as_slice());
            Ok(())
        })
    }

    fn admissibility(&self) -> Option<&StateCheck> {
        self.admissible.as_ref()
    }
}

impl ConservationLaw {
    /// Flux table `f^j(u)` for every cell: `n · m` entries per cell, axis-major.
    fn flux_table(&self, state: &GridField) -> Result<Vec<f64>> {
        let (n, m) = (self.n, self.m);
        per_cell(state, n * m, |c, slot| {
            for j in 0..n {
                slot[j * m..(j + 1) * m].copy_from_slice(&self.flux(j, state.cell(c)));
            }
            Ok(())
        })
    }
}

impl Evolution for ConservationLaw {
    fn dim(&self) -> usize {
        self.n
    }

    fn components(&self) -> usize {
        self.m
    }

    fn max_speed(&self, state: &GridField, _t: f64) -> Result<f64> {
        let speeds = per_cell(state, 1, |c, slot| {
            slot[0] = ConservationLaw::max_speed(self, state.cell(c));
            Ok(())
        })?;
        Ok(speeds.into_iter().fold(0.0, f64::max))
    }

    fn rhs(&self, state: &GridField, t: f64) -> Result<Vec<f64>> {
        let (n, m) = (self.n, self.m);
        let table = self.flux_table(state)?;
        per_cell(state, m, |c, slot| {
            if self.source.is_zero() {
                slot.fill(0.0);
            } else {
                let s = self.source.evaluate(&spacetime(t, &state.center(c)), state.cell(c))?;
                slot.copy_from_slice(s.as_slice());
            }
            for j in 0..n {
                let plus = &table[state.neighbor(c, j, true) * n * m + j * m..][..m];
                let minus = &table[state.neighbor(c, j, false) * n * m + j * m..][..m];
                for a in 0..m {
                    slot[a] -= (plus[a] - minus[a]) / (2.0 * state.h[j]);
                }
            }
            Ok(())
        })
    }

    fn admissibility(&self) -> Option<&StateCheck> {
        self.admissible.as_ref()
    }

    fn conservation_law(&self) -> Option<&ConservationLaw> {
        Some(self)
    }
}

/// A linear system is stepped through its quasi-linear form, built once.
pub struct LinearEvolution {
    pub system: SystemDef,
}

impl LinearSystem {
    pub fn evolution(&self) -> LinearEvolution {
        LinearEvolution {
            system: self.to_system(),
        }
    }
}

impl Evolution for LinearEvolution {
    fn dim(&self) -> usize {
        self.system.n
    }

    fn components(&self) -> usize {
        self.system.m
    }

    fn max_speed(&self, state: &GridField, t: f64) -> Result<f64> {
        self.system.max_speed(state, t)
    }

    fn rhs(&self, state: &GridField, t: f64) -> Result<Vec<f64>> {
        self.system.rhs(state, t)
    }
}

fn check_layout(evo: &dyn Evolution, state: &GridField) -> Result<()> {
    crate::error::check_len("grid dimension", evo.dim(), state.n())?;
    crate::error::check_len("state components", evo.components(), state.m)
}

/// One Lax-Friedrichs step of size `k` from time `t`.
pub fn lxf_step(evo: &dyn Evolution, state: &GridField, t: f64, k: f64) -> Result<GridField> {
    check_layout(evo, state)?;
    let rhs = evo.rhs(state, t)?;
    let n = state.n();
    let m = state.m;
    let weight = 1.0 / (2 * n) as f64;
    let data = per_cell(state, m, |c, slot| {
        slot.fill(0.0);
        for j in 0..n {
            for forward in [true, false] {
                for (s, v) in slot.iter_mut().zip(state.cell(state.neighbor(c, j, forward))) {
                    *s += v;
                }
            }
        }
        for (a, s) in slot.iter_mut().enumerate() {
            *s = weight * *s + k * rhs[c * m + a];
        }
        Ok(())
    })?;
    finish_step(evo, state.with_data(data)?, t + k)
}

/// One step of `u_t + f(u)_x = ε u_xx + N` with centred differences (one space dimension).
pub fn viscous_step(law: &ConservationLaw, state: &GridField, t: f64, k: f64, eps: f64) -> Result<GridField> {
    check_layout(law, state)?;
    if law.n != 1 {
        return Err(Error::InvalidParameter {
            name: "viscosity".into(),
            reason: "the viscous scheme is one-dimensional".into(),
        });
    }
    let m = law.m;
    let h = state.h[0];
    let table = law.flux_table(state)?;
    let data = per_cell(state, m, |c, slot| {
        let (l, r) = (state.neighbor(c, 0, false), state.neighbor(c, 0, true));
        let (ul, u, ur) = (state.cell(l), state.cell(c), state.cell(r));
        let source = if law.source.is_zero() {
            None
        } else {
            Some(law.source.evaluate(&spacetime(t, &state.center(c)), u)?)
        };
        for a in 0..m {
            slot[a] = u[a] - k / (2.0 * h) * (table[r * m + a] - table[l * m + a])
                + eps * k / (h * h) * (ur[a] - 2.0 * u[a] + ul[a])
                + source.as_ref().map_or(0.0, |s| k * s[a]);
        }
        Ok(())
    })?;
    finish_step(law, state.with_data(data)?, t + k)
}

fn finish_step(evo: &dyn Evolution, next: GridField, t: f64) -> Result<GridField> {
    next.check_finite(t)?;
    if let Some(check) = evo.admissibility() {
        check_admissible(&next, check)?;
    }
    Ok(next)
}

/// Observables recorded along a run.
pub trait Monitor: Sync {
    fn name(&self) -> String;
    fn columns(&self) -> Vec<String>;
    fn evaluate(&self, t: f64, state: &GridField) -> Result<Vec<f64>>;
}

/// Componentwise `Σ u · cell volume` for states with `m` components.
pub struct TotalsMonitor {
    pub m: usize,
}

impl Monitor for TotalsMonitor {
    fn name(&self) -> String {
        "totals".into()
    }

    fn columns(&self) -> Vec<String> {
        (1..=self.m).map(|a| format!("u{a}")).collect()
    }

    fn evaluate(&self, _t: f64, state: &GridField) -> Result<Vec<f64>> {
        let vol = state.cell_volume();
        Ok(state.totals().into_iter().map(|s| s * vol).collect())
    }
}

/// The energy `Σ uᵀ Q u · cell volume` for a fixed weight field.
pub struct EnergyMonitor {
    pub q: crate::field::MatrixField,
}

impl Monitor for EnergyMonitor {
    fn name(&self) -> String {
        "energy".into()
    }

    fn columns(&self) -> Vec<String> {
        vec!["energy".into()]
    }

    fn evaluate(&self, t: f64, state: &GridField) -> Result<Vec<f64>> {
        Ok(vec![crate::energy::energy(state, &self.q, t)?])
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Snapshot {
    pub step: usize,
    pub t: f64,
    pub field: GridField,
}

#[derive(Debug, Clone, PartialEq)]
pub struct MonitorSeries {
    pub name: String,
    pub columns: Vec<String>,
    /// `(step, t, values)`
    pub rows: Vec<(usize, f64, Vec<f64>)>,
}

impl MonitorSeries {
    /// Column `i` over time.
    pub fn column(&self, i: usize) -> Vec<f64> {
        self.rows.iter().map(|(_, _, v)| v[i]).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "event", rename_all = "snake_case")]
pub enum RunEvent {
    Scheme {
        lambda: f64,
        k: f64,
        t_end: f64,
        steps: usize,
        viscosity: f64,
    },
    StabilityCheck {
        max_speed: f64,
        cfl_number: f64,
        bound: f64,
        passed: bool,
    },
    StepFailed {
        step: usize,
        t: f64,
        message: String,
    },
    Completed {
        steps: usize,
        t: f64,
    },
}

#[derive(Debug, Clone)]
pub struct Trace {
    pub snapshots: Vec<Snapshot>,
    pub monitors: Vec<MonitorSeries>,
    pub events: Vec<RunEvent>,
    pub k: f64,
    /// Number of completed steps.
    pub steps: usize,
    pub t: f64,
    pub final_state: GridField,
    /// The error that stopped the run, if any; everything above is the partial trace.
    pub failure: Option<Error>,
}

impl Trace {
    pub fn monitor(&self, name: &str) -> Option<&MonitorSeries> {
        self.monitors.iter().find(|s| s.name == name)
    }

    pub fn into_result(self) -> Result<Trace> {
        match self.failure.clone() {
            Some(e) => Err(e),
            None => Ok(self),
        }
    }
}

/// Number of steps of size `k` to reach `t_end`; the last one is shortened to land on it.
pub fn step_count(t_end: f64, k: f64) -> usize {
    if t_end <= 0.0 {
        0
    } else {
        ((t_end / k) - 1e-9).ceil().max(1.0) as usize
    }
}

/// Checks `λ a* ≤ safety / n` and, with viscosity, `k ≤ safety h² / (2ε)`.
pub fn stability_check(evo: &dyn Evolution, state: &GridField, config: &SchemeConfig) -> Result<RunEvent> {
    let a_star = evo.max_speed(state, 0.0)?;
    let n = state.n() as f64;
    let bound = config.cfl_safety / n;
    let cfl_number = config.lambda * a_star;
    let mut passed = cfl_number <= bound * (1.0 + CFL_SLACK);
    if config.viscosity > 0.0 {
        let h = state.min_h();
        passed &= config.lambda * h <= config.cfl_safety * h * h / (2.0 * config.viscosity) * (1.0 + CFL_SLACK);
    }
    Ok(RunEvent::StabilityCheck {
        max_speed: a_star,
        cfl_number,
        bound,
        passed,
    })
}

/// Evolves `initial` to `config.t_end`.
///
/// Configuration and layout errors are returned directly; failures during stepping
/// (non-finite values, inadmissible states) end the run and are stored in
/// [`Trace::failure`] with the partial trace.
pub fn run(evo: &dyn Evolution, initial: &GridField, config: &SchemeConfig, monitors: &[&dyn Monitor]) -> Result<Trace> {
    config.validate()?;
    check_layout(evo, initial)?;
    initial.check_finite(0.0)?;
    if let Some(check) = evo.admissibility() {
        check_admissible(initial, check)?;
    }
    let law = if config.viscosity > 0.0 {
        Some(evo.conservation_law().ok_or_else(|| Error::InvalidParameter {
            name: "viscosity".into(),
            reason: "the viscous scheme needs a conservation law".into(),
        })?)
    } else {
        None
    };

    let k = config.lambda * initial.min_h();
    let total = step_count(config.t_end, k);
    let mut events = vec![RunEvent::Scheme {
        lambda: config.lambda,
        k,
        t_end: config.t_end,
        steps: total,
        viscosity: config.viscosity,
    }];
    let check = stability_check(evo, initial, config)?;
    let passed = matches!(check, RunEvent::StabilityCheck { passed: true, .. });
    let detail = format!("{check:?}");
    events.push(check);
    if !passed {
        return Err(Error::Unstable { detail });
    }

    let mut series: Vec<MonitorSeries> = monitors
        .iter()
        .map(|mon| MonitorSeries {
            name: mon.name(),
            columns: mon.columns(),
            rows: Vec::new(),
        })
        .collect();
    let record = |series: &mut Vec<MonitorSeries>, step: usize, t: f64, state: &GridField| -> Result<()> {
        for (s, mon) in series.iter_mut().zip(monitors) {
            s.rows.push((step, t, mon.evaluate(t, state)?));
        }
        Ok(())
    };
    record(&mut series, 0, 0.0, initial)?;

    let mut snapshots = vec![Snapshot {
        step: 0,
        t: 0.0,
        field: initial.clone(),
    }];
    let mut state = initial.clone();
    let mut t = 0.0;
    let mut failure = None;
    let mut done = 0;
    for s in 1..=total {
        let t_prev = (s - 1) as f64 * k;
        let (dt, t_next) = if s == total {
            (config.t_end - t_prev, config.t_end)
        } else {
            (k, s as f64 * k)
        };
        let stepped = match law {
            Some(law) => viscous_step(law, &state, t_prev, dt, config.viscosity),
            None => lxf_step(evo, &state, t_prev, dt),
        };
        let next = match stepped.and_then(|next| {
            if s % config.output_stride == 0 || s == total {
                record(&mut series, s, t_next, &next)?;
            }
            Ok(next)
        }) {
            Ok(next) => next,
            Err(e) => {
                events.push(RunEvent::StepFailed {
                    step: s,
                    t: t_next,
                    message: e.to_string(),
                });
                failure = Some(e);
                break;
            }
        };
        state = next;
        t = t_next;
        done = s;
        if s == total || (config.snapshot_stride > 0 && s % config.snapshot_stride == 0) {
            snapshots.push(Snapshot {
                step: s,
                t,
                field: state.clone(),
            });
        }
    }
    if failure.is_none() {
        events.push(RunEvent::Completed { steps: done, t });
    }
    Ok(Trace {
        snapshots,
        monitors: series,
        events,
        k,
        steps: done,
        t,
        final_state: state,
        failure,
    })
}
