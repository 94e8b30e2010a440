use std::fmt;
use std::path::Path;

use serde::{Deserialize, Serialize};

use super::config::ReportFormat;
use crate::{Error, Result};

/// One reported quantity.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Cell {
    Value(f64),
    /// The quantity is not defined for this domain or function.
    Unsupported(String),
    /// The computation raised an error.
    Failed(String),
}

impl Cell {
    pub fn value(&self) -> Option<f64> {
        match self {
            Cell::Value(v) => Some(*v),
            _ => None,
        }
    }

    /// Error to cell: unsupported domains stay distinguishable from failures.
    pub fn from_error(e: &Error) -> Self {
        match e {
            Error::UnsupportedDomain(m) => Cell::Unsupported(m.clone()),
            e => Cell::Failed(e.to_string()),
        }
    }

    pub fn from_result(r: &Result<f64>) -> Self {
        match r {
            Ok(v) => Cell::Value(*v),
            Err(e) => Cell::from_error(e),
        }
    }

    /// `a / b` with unsupported and failed inputs propagated.
    pub fn ratio(a: &Cell, b: &Cell) -> Cell {
        match (a, b) {
            (Cell::Value(x), Cell::Value(y)) => Cell::Value(x / y),
            (Cell::Failed(m), _) | (_, Cell::Failed(m)) => Cell::Failed(m.clone()),
            (Cell::Unsupported(m), _) | (_, Cell::Unsupported(m)) => Cell::Unsupported(m.clone()),
        }
    }
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Cell::Value(v) => write!(f, "{v:e}"),
            Cell::Unsupported(_) => write!(f, "unsupported"),
            Cell::Failed(_) => write!(f, "failed"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Unsupported,
}

impl fmt::Display for Status {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
            Status::Unsupported => "unsupported",
        })
    }
}

/// A bracket check on one column of a row: `lo ≤ row[column] ≤ hi`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Flag {
    pub name: String,
    pub column: String,
    pub lo: Option<f64>,
    pub hi: Option<f64>,
    pub status: Status,
}

impl Flag {
    /// Status of the bracket applied to `cell`.
    pub fn evaluate(cell: &Cell, lo: Option<f64>, hi: Option<f64>) -> Status {
        match cell {
            Cell::Value(v) => {
                let ok = v.is_finite() && lo.map_or(true, |l| *v >= l) && hi.map_or(true, |h| *v <= h);
                if ok {
                    Status::Pass
                } else {
                    Status::Fail
                }
            }
            Cell::Unsupported(_) => Status::Unsupported,
            Cell::Failed(_) => Status::Fail,
        }
    }
}

/// One line of an experiment report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportRow {
    pub experiment: String,
    pub id: String,
    pub domain: String,
    pub parameter: Option<f64>,
    pub function: String,
    pub p: Option<f64>,
    pub n: Option<usize>,
    pub columns: Vec<(String, Cell)>,
    pub flags: Vec<Flag>,
}

impl ReportRow {
    pub fn new(experiment: &str, id: impl Into<String>) -> Self {
        Self {
            experiment: experiment.into(),
            id: id.into(),
            domain: String::new(),
            parameter: None,
            function: String::new(),
            p: None,
            n: None,
            columns: Vec::new(),
            flags: Vec::new(),
        }
    }

    pub fn get(&self, column: &str) -> Option<&Cell> {
        self.columns.iter().find(|(k, _)| k == column).map(|(_, c)| c)
    }

    pub fn value(&self, column: &str) -> Option<f64> {
        self.get(column).and_then(Cell::value)
    }

    /// Sets (or replaces) a column.
    pub fn set(&mut self, column: &str, cell: Cell) -> &mut Self {
        match self.columns.iter_mut().find(|(k, _)| k == column) {
            Some(slot) => slot.1 = cell,
            None => self.columns.push((column.to_string(), cell)),
        }
        self
    }

    pub fn set_value(&mut self, column: &str, v: f64) -> &mut Self {
        self.set(column, Cell::Value(v))
    }

    /// Adds a flag named `name` checking `column` against `[lo, hi]`.
    pub fn flag(&mut self, name: &str, column: &str, lo: Option<f64>, hi: Option<f64>) -> Status {
        let cell = self
            .get(column)
            .cloned()
            .unwrap_or_else(|| Cell::Failed(format!("no column {column}")));
        let status = Flag::evaluate(&cell, lo, hi);
        self.flags.push(Flag {
            name: name.into(),
            column: column.into(),
            lo,
            hi,
            status,
        });
        status
    }

    /// Re-derives every flag status from the row's columns.
    pub fn recompute_flags(&mut self) {
        for i in 0..self.flags.len() {
            let f = &self.flags[i];
            let cell = self.get(&f.column).cloned().unwrap_or(Cell::Failed(String::new()));
            self.flags[i].status = Flag::evaluate(&cell, f.lo, f.hi);
        }
    }
}

/// Counts of flag outcomes over a report.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct FlagSummary {
    pub pass: usize,
    pub fail: usize,
    pub unsupported: usize,
}

impl FlagSummary {
    pub fn of(rows: &[ReportRow]) -> Self {
        let mut s = Self::default();
        for f in rows.iter().flat_map(|r| &r.flags) {
            match f.status {
                Status::Pass => s.pass += 1,
                Status::Fail => s.fail += 1,
                Status::Unsupported => s.unsupported += 1,
            }
        }
        s
    }

    /// Every flag that could be evaluated passed.
    pub fn all_pass(&self) -> bool {
        self.fail == 0
    }
}

const LEADING: [&str; 7] = ["experiment", "id", "domain", "parameter", "function", "p", "n"];

fn union_names<'a>(rows: &'a [ReportRow], f: impl Fn(&'a ReportRow) -> Vec<&'a str>) -> Vec<&'a str> {
    let mut out: Vec<&str> = Vec::new();
    for r in rows {
        for name in f(r) {
            if !out.contains(&name) {
                out.push(name);
            }
        }
    }
    out
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// CSV text: the fixed leading columns, every data column in order of first
/// appearance, then one `flag:<name>` column per flag name.
pub fn to_csv(rows: &[ReportRow]) -> Result<String> {
    let cols = union_names(rows, |r| r.columns.iter().map(|(k, _)| k.as_str()).collect());
    let flags = union_names(rows, |r| r.flags.iter().map(|f| f.name.as_str()).collect());
    let mut w = csv::Writer::from_writer(Vec::new());
    let csv_err = |e: csv::Error| Error::Csv {
        path: "<report>".into(),
        source: e,
    };
    let header: Vec<String> = LEADING
        .iter()
        .map(|s| s.to_string())
        .chain(cols.iter().map(|s| s.to_string()))
        .chain(flags.iter().map(|s| format!("flag:{s}")))
        .collect();
    w.write_record(&header).map_err(csv_err)?;
    for r in rows {
        let mut rec = vec![
            r.experiment.clone(),
            r.id.clone(),
            r.domain.clone(),
            opt(r.parameter),
            r.function.clone(),
            opt(r.p),
            opt(r.n),
        ];
        rec.extend(cols.iter().map(|c| r.get(c).map(|x| x.to_string()).unwrap_or_default()));
        rec.extend(
            flags
                .iter()
                .map(|name| r.flags.iter().find(|f| f.name == *name).map(|f| f.status.to_string()).unwrap_or_default()),
        );
        w.write_record(&rec).map_err(csv_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::Parse(e.to_string()))?;
    String::from_utf8(bytes).map_err(|e| Error::Parse(e.to_string()))
}

pub fn to_json(rows: &[ReportRow]) -> Result<String> {
    Ok(serde_json::to_string_pretty(rows)?)
}

pub fn from_json(text: &str) -> Result<Vec<ReportRow>> {
    Ok(serde_json::from_str(text)?)
}

/// Writes `rows` to `dir/<stem>.<ext>` in each format; returns the paths.
/// SVG output writes one plot per entry of `plots`.
pub fn emit_report(
    rows: &[ReportRow],
    formats: &[ReportFormat],
    dir: &Path,
    stem: &str,
    plots: &[&str],
) -> Result<Vec<std::path::PathBuf>> {
    std::fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    let mut out = Vec::new();
    let mut write = |path: std::path::PathBuf, text: String| -> Result<()> {
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        out.push(path);
        Ok(())
    };
    for f in formats {
        match f {
            ReportFormat::Csv => write(dir.join(format!("{stem}.csv")), to_csv(rows)?)?,
            ReportFormat::Json => write(dir.join(format!("{stem}.json")), to_json(rows)?)?,
            ReportFormat::Svg => {
                for col in plots {
                    if let Some(svg) = super::svg::plot_column(rows, col) {
                        write(dir.join(format!("{stem}_{col}.svg")), svg)?;
                    }
                }
            }
        }
    }
    Ok(out)
}
