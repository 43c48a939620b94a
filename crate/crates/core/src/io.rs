//! CSV ingestion of labeled trajectories and CSV emission of results.
//!
//! The canonical input is long format with header `id,label,t,value`, one
//! observation per row. Wide format (`id,label,<t_1>,...,<t_m>`, where each
//! time column header is the numeric time point) is accepted as well. Numbers
//! are written with Rust's shortest round-trip formatting, so emitting and
//! re-reading a sample reproduces it exactly.

use std::collections::HashMap;
use std::io::{Read, Write};
use std::path::Path;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::functional::{resample, Grid, LabeledSample, Trajectory};
use crate::harness::{ConsistencyRow, SplitResult};
use crate::roc::{AucEstimate, RocCurve};
use crate::sim::{CoverageReport, ViolinRow};

/// One subject's observations as read from a file, before gridding.
#[derive(Debug, Clone, PartialEq)]
pub struct RawCurve {
    pub id: String,
    /// `None` when the label cell is empty (allowed for data to be scored).
    pub label: Option<u8>,
    pub t: Vec<f64>,
    pub values: Vec<f64>,
    /// Line of the first row of this id.
    pub line: u64,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct IngestOptions {
    /// Resample every id onto this many equispaced points spanning the
    /// intersection of the observed ranges. Required when ids disagree on
    /// their time points.
    pub resample_to: Option<usize>,
    /// Read wide format instead of long format.
    pub wide: bool,
}

/// Per-id summary produced during ingestion.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdDiagnostic {
    pub id: String,
    pub label: u8,
    pub points: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub resampled: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Ingested {
    pub sample: LabeledSample,
    pub diagnostics: Vec<IdDiagnostic>,
}

fn loc(source: &str, line: u64) -> String {
    format!("{source}:{line}")
}

fn parse_number(cell: &str, what: &str, source: &str, line: u64, id: &str) -> Result<f64> {
    let v: f64 = cell
        .parse()
        .map_err(|_| Error::parse(loc(source, line), format!("id '{id}': {what} '{cell}' is not a number")))?;
    if !v.is_finite() {
        return Err(Error::parse(
            loc(source, line),
            format!("id '{id}': {what} '{cell}' is not finite"),
        ));
    }
    Ok(v)
}

fn parse_label(cell: &str, source: &str, line: u64, id: &str) -> Result<Option<u8>> {
    match cell {
        "" => Ok(None),
        "0" => Ok(Some(0)),
        "1" => Ok(Some(1)),
        other => Err(Error::parse(
            loc(source, line),
            format!("id '{id}': label '{other}' is not 0 or 1"),
        )),
    }
}

fn column(headers: &csv::StringRecord, name: &str, source: &str) -> Result<usize> {
    headers
        .iter()
        .position(|h| h.eq_ignore_ascii_case(name))
        .ok_or_else(|| Error::parse(loc(source, 1), format!("missing column '{name}'")))
}

fn csv_reader<R: Read>(reader: R) -> csv::Reader<R> {
    csv::ReaderBuilder::new()
        .trim(csv::Trim::All)
        .comment(Some(b'#'))
        .from_reader(reader)
}

fn record_error(e: csv::Error, source: &str) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    Error::parse(loc(source, line), e.to_string())
}

struct Collector {
    curves: Vec<RawCurve>,
    index: HashMap<String, usize>,
}

impl Collector {
    fn new() -> Self {
        Collector {
            curves: Vec::new(),
            index: HashMap::new(),
        }
    }

    fn entry(&mut self, id: &str, label: Option<u8>, line: u64, source: &str) -> Result<&mut RawCurve> {
        match self.index.get(id) {
            Some(&k) => {
                let c = &mut self.curves[k];
                if c.label != label {
                    return Err(Error::parse(
                        loc(source, line),
                        format!(
                            "id '{id}' has inconsistent labels ({} at line {}, {} here)",
                            show_label(c.label),
                            c.line,
                            show_label(label)
                        ),
                    ));
                }
                Ok(c)
            }
            None => {
                self.index.insert(id.to_string(), self.curves.len());
                self.curves.push(RawCurve {
                    id: id.to_string(),
                    label,
                    t: Vec::new(),
                    values: Vec::new(),
                    line,
                });
                Ok(self.curves.last_mut().expect("just pushed"))
            }
        }
    }
}

fn show_label(l: Option<u8>) -> String {
    l.map_or_else(|| "empty".to_string(), |v| v.to_string())
}

fn read_long<R: Read>(reader: R, source: &str) -> Result<Vec<RawCurve>> {
    let mut rdr = csv_reader(reader);
    let headers = rdr.headers().map_err(|e| record_error(e, source))?.clone();
    let (ci, cl, ct, cv) = (
        column(&headers, "id", source)?,
        column(&headers, "label", source)?,
        column(&headers, "t", source)?,
        column(&headers, "value", source)?,
    );
    let mut out = Collector::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| record_error(e, source))?;
        let line = rec.position().map_or(0, |p| p.line());
        let id = &rec[ci];
        if id.is_empty() {
            return Err(Error::parse(loc(source, line), "empty id"));
        }
        let label = parse_label(&rec[cl], source, line, id)?;
        let t = parse_number(&rec[ct], "t", source, line, id)?;
        let v = parse_number(&rec[cv], "value", source, line, id)?;
        let curve = out.entry(id, label, line, source)?;
        if let Some(&prev) = curve.t.last() {
            if t <= prev {
                return Err(Error::parse(
                    loc(source, line),
                    format!("id '{id}': t = {t} does not increase (previous {prev})"),
                ));
            }
        }
        curve.t.push(t);
        curve.values.push(v);
    }
    Ok(out.curves)
}

fn read_wide<R: Read>(reader: R, source: &str) -> Result<Vec<RawCurve>> {
    let mut rdr = csv_reader(reader);
    let headers = rdr.headers().map_err(|e| record_error(e, source))?.clone();
    let (ci, cl) = (column(&headers, "id", source)?, column(&headers, "label", source)?);
    let mut times = Vec::new();
    let mut cols = Vec::new();
    for (k, h) in headers.iter().enumerate() {
        if k == ci || k == cl {
            continue;
        }
        let t = h
            .parse::<f64>()
            .ok()
            .filter(|t| t.is_finite())
            .ok_or_else(|| Error::parse(loc(source, 1), format!("wide column header '{h}' is not a time point")))?;
        if times.last().is_some_and(|&p| t <= p) {
            return Err(Error::parse(
                loc(source, 1),
                format!("time column '{h}' does not increase"),
            ));
        }
        times.push(t);
        cols.push(k);
    }
    let mut out = Collector::new();
    for rec in rdr.records() {
        let rec = rec.map_err(|e| record_error(e, source))?;
        let line = rec.position().map_or(0, |p| p.line());
        let id = &rec[ci];
        if id.is_empty() {
            return Err(Error::parse(loc(source, line), "empty id"));
        }
        if out.index.contains_key(id) {
            return Err(Error::parse(
                loc(source, line),
                format!("id '{id}' appears on more than one row"),
            ));
        }
        let label = parse_label(&rec[cl], source, line, id)?;
        let values = cols
            .iter()
            .map(|&k| parse_number(&rec[k], "value", source, line, id))
            .collect::<Result<Vec<_>>>()?;
        let curve = out.entry(id, label, line, source)?;
        curve.t = times.clone();
        curve.values = values;
    }
    Ok(out.curves)
}

/// Reads raw curves from any reader; `source` names it in error messages.
pub fn read_curves_from<R: Read>(reader: R, source: &str, wide: bool) -> Result<Vec<RawCurve>> {
    let curves = if wide {
        read_wide(reader, source)?
    } else {
        read_long(reader, source)?
    };
    if curves.is_empty() {
        return Err(Error::InsufficientData(format!("{source}: no trajectories")));
    }
    for c in &curves {
        if c.t.len() < 2 {
            return Err(Error::parse(
                loc(source, c.line),
                format!("id '{}' has {} observation(s), need at least 2", c.id, c.t.len()),
            ));
        }
    }
    Ok(curves)
}

pub fn read_curves(path: impl AsRef<Path>, wide: bool) -> Result<Vec<RawCurve>> {
    let path = path.as_ref();
    let file = std::fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_curves_from(std::io::BufReader::new(file), &path.display().to_string(), wide)
}

/// Grid shared by `curves`: their own time points when all agree, otherwise
/// (or whenever `resample_to` is set) an equispaced grid over the
/// intersection of the observed ranges.
pub fn common_grid(curves: &[RawCurve], resample_to: Option<usize>) -> Result<Arc<Grid>> {
    let first = curves
        .first()
        .ok_or_else(|| Error::InsufficientData("no trajectories".into()))?;
    match resample_to {
        None => {
            if let Some(c) = curves.iter().find(|c| c.t != first.t) {
                return Err(Error::Dimension(format!(
                    "ids '{}' and '{}' are observed at different time points; resample to a common grid",
                    first.id, c.id
                )));
            }
            Ok(Arc::new(Grid::new(first.t.clone())?))
        }
        Some(m) => {
            let lo = curves.iter().map(|c| c.t[0]).fold(f64::NEG_INFINITY, f64::max);
            let hi = curves.iter().map(|c| c.t[c.t.len() - 1]).fold(f64::INFINITY, f64::min);
            if lo >= hi {
                return Err(Error::Range(format!(
                    "observed ranges do not overlap (intersection [{lo}, {hi}])"
                )));
            }
            Ok(Arc::new(Grid::uniform(lo, hi, m)?))
        }
    }
}

/// Places a raw curve on `grid`, interpolating linearly unless its own time
/// points already coincide with the grid.
pub fn curve_onto(curve: &RawCurve, grid: &Arc<Grid>) -> Result<Trajectory> {
    if curve.t == grid.points() {
        return Trajectory::new(grid.clone(), curve.values.clone());
    }
    let own = Trajectory::new(Arc::new(Grid::new(curve.t.clone())?), curve.values.clone())?;
    resample(&own, grid).map_err(|e| match e {
        Error::Range(m) => Error::Range(format!("id '{}': {m}", curve.id)),
        other => other,
    })
}

/// Builds a labeled sample from raw curves; every id needs a label and both
/// classes must be present.
pub fn sample_from_curves(curves: &[RawCurve], resample_to: Option<usize>) -> Result<Ingested> {
    let grid = common_grid(curves, resample_to)?;
    let mut trajectories = Vec::with_capacity(curves.len());
    let mut labels = Vec::with_capacity(curves.len());
    let mut ids = Vec::with_capacity(curves.len());
    let mut diagnostics = Vec::with_capacity(curves.len());
    for c in curves {
        let label = c
            .label
            .ok_or_else(|| Error::Class(format!("id '{}' (line {}) has no label", c.id, c.line)))?;
        trajectories.push(curve_onto(c, &grid)?);
        labels.push(label);
        ids.push(c.id.clone());
        diagnostics.push(IdDiagnostic {
            id: c.id.clone(),
            label,
            points: c.t.len(),
            t_min: c.t[0],
            t_max: c.t[c.t.len() - 1],
            resampled: c.t != grid.points(),
        });
    }
    for class in [0u8, 1] {
        if !labels.contains(&class) {
            return Err(Error::Class(format!("no trajectories of class {class}")));
        }
    }
    let sample = LabeledSample::with_ids(trajectories, labels, ids)?;
    Ok(Ingested { sample, diagnostics })
}

/// Reads a labeled sample from a CSV file.
pub fn ingest_csv(path: impl AsRef<Path>, options: &IngestOptions) -> Result<Ingested> {
    let curves = read_curves(path, options.wide)?;
    sample_from_curves(&curves, options.resample_to)
}

fn create(path: &Path) -> Result<csv::Writer<std::fs::File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    csv::Writer::from_path(path).map_err(|e| csv_write_error(path, e))
}

fn csv_write_error(path: &Path, e: csv::Error) -> Error {
    match e.into_kind() {
        csv::ErrorKind::Io(io) => Error::io(path, io),
        other => Error::io(path, std::io::Error::other(format!("{other:?}"))),
    }
}

/// Writes serializable rows (one struct per row, header from field names).
pub fn write_rows<S: Serialize>(path: impl AsRef<Path>, rows: &[S]) -> Result<()> {
    let path = path.as_ref();
    let mut w = create(path)?;
    for r in rows {
        w.serialize(r).map_err(|e| csv_write_error(path, e))?;
    }
    w.flush().map_err(|e| Error::io(path, e))
}

/// Writes a sample in long format (`id,label,t,value`).
pub fn write_sample_csv(sample: &LabeledSample, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = create(path)?;
    let err = |e| csv_write_error(path, e);
    w.write_record(["id", "label", "t", "value"]).map_err(err)?;
    let t = sample.grid().points();
    for ((f, l), id) in sample.trajectories().iter().zip(sample.labels()).zip(sample.ids()) {
        let label = l.to_string();
        for (tk, v) in t.iter().zip(f.values()) {
            w.write_record([id.as_str(), &label, &tk.to_string(), &v.to_string()])
                .map_err(err)?;
        }
    }
    w.flush().map_err(|e| Error::io(path, e))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RocRow {
    pub p: f64,
    pub sensitivity: f64,
}

pub fn write_roc_csv(roc: &RocCurve, path: impl AsRef<Path>) -> Result<()> {
    let rows: Vec<RocRow> = roc
        .p
        .iter()
        .zip(&roc.sensitivity)
        .map(|(&p, &sensitivity)| RocRow { p, sensitivity })
        .collect();
    write_rows(path, &rows)
}

/// One AUC summary line. `raw_auc` is the directed AUC before any
/// orientation flip (equal to `auc` for PBC).
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AucRow {
    pub criterion: String,
    pub auc: f64,
    pub var: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub level: f64,
    pub nc0: usize,
    pub nc1: usize,
    pub raw_auc: f64,
}

impl AucRow {
    pub fn new(criterion: impl Into<String>, est: &AucEstimate, raw_auc: f64) -> Self {
        AucRow {
            criterion: criterion.into(),
            auc: est.auc,
            var: est.variance,
            ci_low: est.ci_low,
            ci_high: est.ci_high,
            level: est.level,
            nc0: est.nc0,
            nc1: est.nc1,
            raw_auc,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ReplicateRow {
    pub rep: usize,
    pub auc: f64,
    pub ci_low: f64,
    pub ci_high: f64,
    pub ns0: usize,
    pub ns1: usize,
    pub nc0: usize,
    pub nc1: usize,
}

pub fn write_replicates_csv(results: &[SplitResult], path: impl AsRef<Path>) -> Result<()> {
    let rows: Vec<ReplicateRow> = results
        .iter()
        .enumerate()
        .map(|(rep, r)| ReplicateRow {
            rep,
            auc: r.auc.auc,
            ci_low: r.auc.ci_low,
            ci_high: r.auc.ci_high,
            ns0: r.train_counts.0,
            ns1: r.train_counts.1,
            nc0: r.test_counts.0,
            nc1: r.test_counts.1,
        })
        .collect();
    write_rows(path, &rows)
}

pub fn write_violin_csv(rows: &[ViolinRow], path: impl AsRef<Path>) -> Result<()> {
    write_rows(path, rows)
}

pub fn write_coverage_csv(rows: &[CoverageReport], path: impl AsRef<Path>) -> Result<()> {
    write_rows(path, rows)
}

pub fn write_consistency_csv(rows: &[ConsistencyRow], path: impl AsRef<Path>) -> Result<()> {
    write_rows(path, rows)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ScoreRow {
    pub id: String,
    pub score: f64,
    pub label_hat: u8,
}

pub fn write_scores_csv(rows: &[ScoreRow], path: impl AsRef<Path>) -> Result<()> {
    write_rows(path, rows)
}

/// Writes `text` to `path`, creating parent directories.
pub fn write_text(path: impl AsRef<Path>, text: &str) -> Result<()> {
    let path = path.as_ref();
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    }
    let mut f = std::fs::File::create(path).map_err(|e| Error::io(path, e))?;
    f.write_all(text.as_bytes()).map_err(|e| Error::io(path, e))
}
