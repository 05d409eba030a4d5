use std::fmt::Write as _;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::Result;
use crate::eval::{svg_line_plot, Series};

/// One row per value of the experiment axis, one column per metric.
#[derive(Clone, Debug, PartialEq)]
pub struct ExperimentReport {
    pub kind: String,
    pub axis: String,
    pub columns: Vec<String>,
    pub rows: Vec<ReportRow>,
    pub runtime_secs: f64,
    pub seeds: Vec<u64>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct ReportRow {
    pub axis_value: String,
    pub values: Vec<Option<f64>>,
}

#[derive(Serialize, Deserialize)]
struct ReportInfo {
    kind: String,
    axis: String,
    columns: Vec<String>,
    rows: usize,
    runtime_secs: f64,
    seeds: Vec<u64>,
}

impl ExperimentReport {
    pub fn new(kind: &str, axis: &str, columns: &[&str]) -> Self {
        Self {
            kind: kind.into(),
            axis: axis.into(),
            columns: columns.iter().map(|c| c.to_string()).collect(),
            rows: Vec::new(),
            runtime_secs: 0.0,
            seeds: Vec::new(),
        }
    }

    pub fn push(&mut self, axis_value: impl Into<String>, values: Vec<Option<f64>>) {
        assert_eq!(values.len(), self.columns.len(), "row width must match the columns");
        self.rows.push(ReportRow {
            axis_value: axis_value.into(),
            values,
        });
    }

    pub fn row(&self, axis_value: &str) -> Option<&ReportRow> {
        self.rows.iter().find(|r| r.axis_value == axis_value)
    }

    pub fn value(&self, axis_value: &str, column: &str) -> Option<f64> {
        let c = self.columns.iter().position(|name| name == column)?;
        self.row(axis_value)?.values[c]
    }

    /// Header `axis,column...`; missing values are empty fields.
    pub fn to_csv(&self) -> String {
        let mut s = self.axis.clone();
        for c in &self.columns {
            s.push(',');
            s.push_str(c);
        }
        s.push('\n');
        for r in &self.rows {
            s.push_str(&r.axis_value);
            for v in &r.values {
                s.push(',');
                if let Some(v) = v {
                    let _ = write!(s, "{v}");
                }
            }
            s.push('\n');
        }
        s
    }

    /// Line plot of every column against the axis. Numeric axis values are
    /// used as x coordinates, otherwise rows are spaced evenly.
    pub fn to_svg(&self) -> String {
        let numeric: Option<Vec<f64>> = self.rows.iter().map(|r| r.axis_value.parse().ok()).collect();
        let xs = numeric.unwrap_or_else(|| (0..self.rows.len()).map(|i| i as f64).collect());
        let series: Vec<Series> = self
            .columns
            .iter()
            .enumerate()
            .map(|(c, name)| Series {
                name: name.clone(),
                points: self
                    .rows
                    .iter()
                    .zip(&xs)
                    .filter_map(|(r, &x)| r.values[c].map(|y| (x, y)))
                    .collect(),
            })
            .collect();
        let axis = if xs.iter().zip(&self.rows).all(|(x, r)| r.axis_value.parse::<f64>().ok() == Some(*x)) {
            self.axis.clone()
        } else {
            let names: Vec<&str> = self.rows.iter().map(|r| r.axis_value.as_str()).collect();
            format!("{} (0..{}: {})", self.axis, self.rows.len().saturating_sub(1), names.join(", "))
        };
        svg_line_plot(&self.kind, &axis, "value", &series)
    }

    /// Writes `<stem>.csv`, `<stem>.svg` and a `<stem>.toml` record of the
    /// kind, runtime and seeds.
    pub fn write(&self, dir: &Path, stem: &str) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        std::fs::write(dir.join(format!("{stem}.csv")), self.to_csv())?;
        std::fs::write(dir.join(format!("{stem}.svg")), self.to_svg())?;
        let info = ReportInfo {
            kind: self.kind.clone(),
            axis: self.axis.clone(),
            columns: self.columns.clone(),
            rows: self.rows.len(),
            runtime_secs: self.runtime_secs,
            seeds: self.seeds.clone(),
        };
        std::fs::write(dir.join(format!("{stem}.toml")), toml::to_string(&info)?)?;
        Ok(())
    }
}
