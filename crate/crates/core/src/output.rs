//! Plain-text serialization of traces: CSV tables and an ndjson event log.
//!
//! Floats are written in shortest round-trip form, so identical runs give
//! byte-identical files.

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::Path;

use serde::Serialize;

use crate::grid::GridField;
use crate::lxf::{MonitorSeries, Snapshot, Trace};

/// Shortest representation that parses back to the same `f64`.
pub fn format_float(v: f64) -> String {
    format!("{v:?}")
}

fn join(values: impl IntoIterator<Item = f64>) -> String {
    values.into_iter().map(format_float).collect::<Vec<_>>().join(",")
}

const AXES: [&str; 3] = ["x", "y", "z"];

/// Columns `x[,y[,z]],u1..um`, one row per cell in storage order.
pub fn write_field_csv<W: Write>(field: &GridField, mut out: W) -> io::Result<()> {
    let mut header: Vec<String> = AXES[..field.n()].iter().map(|s| s.to_string()).collect();
    header.extend((1..=field.m).map(|a| format!("u{a}")));
    writeln!(out, "{}", header.join(","))?;
    for c in 0..field.cells() {
        let row = field.center(c).into_iter().chain(field.cell(c).iter().copied());
        writeln!(out, "{}", join(row))?;
    }
    out.flush()
}

/// Columns `step,t,<monitor columns>`.
pub fn write_monitor_csv<W: Write>(series: &MonitorSeries, mut out: W) -> io::Result<()> {
    writeln!(out, "step,t,{}", series.columns.join(","))?;
    for (step, t, values) in &series.rows {
        writeln!(out, "{step},{},{}", format_float(*t), join(values.iter().copied()))?;
    }
    out.flush()
}

pub fn snapshot_file_name(snap: &Snapshot) -> String {
    format!("step_{:08}.csv", snap.step)
}

/// Writes `snapshots/step_NNNNNNNN.csv` and `monitors/<name>.csv` under `dir`.
pub fn write_trace(trace: &Trace, dir: &Path) -> io::Result<()> {
    let snaps = dir.join("snapshots");
    fs::create_dir_all(&snaps)?;
    for snap in &trace.snapshots {
        write_field_csv(&snap.field, BufWriter::new(File::create(snaps.join(snapshot_file_name(snap)))?))?;
    }
    let mons = dir.join("monitors");
    fs::create_dir_all(&mons)?;
    for series in &trace.monitors {
        write_monitor_csv(series, BufWriter::new(File::create(mons.join(format!("{}.csv", series.name)))?))?;
    }
    Ok(())
}

/// Append-only newline-delimited JSON log.
pub struct NdjsonLog<W: Write> {
    out: W,
}

impl NdjsonLog<BufWriter<File>> {
    pub fn create(path: &Path) -> io::Result<Self> {
        Ok(NdjsonLog::new(BufWriter::new(File::create(path)?)))
    }
}

impl<W: Write> NdjsonLog<W> {
    pub fn new(out: W) -> Self {
        NdjsonLog { out }
    }

    pub fn append<T: Serialize>(&mut self, event: &T) -> io::Result<()> {
        serde_json::to_writer(&mut self.out, event)?;
        self.out.write_all(b"\n")?;
        self.out.flush()
    }

    pub fn into_inner(self) -> W {
        self.out
    }
}
