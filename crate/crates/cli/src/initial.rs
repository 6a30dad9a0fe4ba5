//! Initial fields from `[grid]` and `[initial]`.

use std::f64::consts::PI;
use std::path::Path;

use anyhow::{bail, Context};
use symhyp::models::euler::conservative;
use symhyp::GridField;

use crate::config::{GridSpec, InitialSpec, ModelSpec, Profile};

pub fn empty_grid(spec: &GridSpec, m: usize) -> symhyp::Result<GridField> {
    let n = spec.cells.len();
    let h: Vec<f64> = (0..n).map(|j| (spec.upper[j] - spec.lower[j]) / spec.cells[j] as f64).collect();
    let origin: Vec<f64> = (0..n).map(|j| spec.lower[j] + 0.5 * h[j]).collect();
    GridField::new(spec.cells.clone(), h, origin, m, spec.boundary.clone())
}

/// `(1 − (r/R)²)²` inside the ball of radius `R`, zero outside.
pub fn bump(r: f64, radius: f64) -> f64 {
    let s = r / radius;
    if s < 1.0 {
        (1.0 - s * s).powi(2)
    } else {
        0.0
    }
}

/// `base_dir` resolves relative paths of tabulated data.
pub fn initial_field(model: &ModelSpec, grid: &GridSpec, initial: &InitialSpec, base_dir: &Path) -> anyhow::Result<GridField> {
    let (_, m) = model.layout().context("this model has no evolved state")?;
    let layout = empty_grid(grid, m)?;
    let mut field = match &initial.profile {
        Profile::Constant { value } => layout.with_fill(|_| value.clone())?,
        Profile::Step { left, right, position, axis } => {
            layout.with_fill(|x| if x[*axis] < *position { left.clone() } else { right.clone() })?
        }
        Profile::Bump {
            center,
            radius,
            amplitude,
            background,
        } => layout.with_fill(|x| {
            let r = x.iter().zip(center).map(|(a, c)| (a - c).powi(2)).sum::<f64>().sqrt();
            let b = bump(r, *radius);
            background.iter().zip(amplitude).map(|(bg, a)| bg + a * b).collect()
        })?,
        Profile::PlaneWave {
            offset,
            amplitude,
            wavenumber,
        } => layout.with_fill(|x| {
            let phase = 2.0 * PI * x.iter().zip(wavenumber).map(|(a, k)| a * k).sum::<f64>();
            offset.iter().zip(amplitude).map(|(o, a)| o + a * phase.sin()).collect()
        })?,
        Profile::Tabulated { file } => {
            let path = if file.is_absolute() { file.clone() } else { base_dir.join(file) };
            tabulated(&layout, &path)?
        }
    };
    if initial.primitive {
        let ModelSpec::EulerCons { gamma } = model else {
            bail!("`variables = primitive` is only available for euler_cons");
        };
        for c in 0..field.cells() {
            let w = field.cell(c);
            let u = conservative([w[0], w[1], w[2]], *gamma);
            field.cell_mut(c).copy_from_slice(&u);
        }
    }
    Ok(field)
}

/// One row per cell in storage order (axis 0 fastest). A row holds either the `m`
/// state values or the `n` coordinates followed by them. Rows whose first entry is
/// not a number are treated as headers.
fn tabulated(layout: &GridField, path: &Path) -> anyhow::Result<GridField> {
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(false)
        .flexible(true)
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_path(path)
        .with_context(|| format!("cannot read tabulated data {}", path.display()))?;
    let (n, m) = (layout.n(), layout.m);
    let mut data = Vec::with_capacity(layout.data.len());
    let mut rows = 0;
    for (i, record) in reader.records().enumerate() {
        let record = record.with_context(|| format!("{}: malformed row {}", path.display(), i + 1))?;
        let first = record.get(0).unwrap_or("");
        if first.parse::<f64>().is_err() && rows == 0 {
            continue;
        }
        let values: Vec<f64> = record
            .iter()
            .map(|s| s.parse::<f64>())
            .collect::<Result<_, _>>()
            .with_context(|| format!("{}: row {} is not numeric", path.display(), i + 1))?;
        let state = match values.len() {
            l if l == m => &values[..],
            l if l == n + m => &values[n..],
            l => bail!("{}: row {} has {l} values, expected {m} or {}", path.display(), i + 1, n + m),
        };
        data.extend_from_slice(state);
        rows += 1;
    }
    if rows != layout.cells() {
        bail!("{}: {rows} rows for a grid of {} cells", path.display(), layout.cells());
    }
    Ok(layout.with_data(data)?)
}
