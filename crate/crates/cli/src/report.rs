//! The run report and its files: `<name>-report.json` plus one
//! `<name>-<table>.csv` per table.

use std::path::{Path, PathBuf};

use nearrep_core::prefcore::{NearRepresentation, Table, ViolationReport};
use serde::Serialize;

use crate::error::{CliError, Result};
use crate::scenario::Scenario;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    /// A hypothesis of the bound does not hold on the sample.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Verdict {
    pub check: String,
    pub status: Status,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub distance: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub bound: Option<f64>,
    pub detail: String,
}

/// What was run: a scenario file or a pinned builtin.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Source {
    Scenario(Box<Scenario>),
    Builtin {
        name: String,
        parameters: serde_json::Value,
    },
}

#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub name: String,
    pub source: Source,
    pub violations: Vec<ViolationReport>,
    pub representations: Vec<NearRepresentation>,
    pub verdicts: Vec<Verdict>,
    pub notes: Vec<String>,
    pub samples_evaluated: usize,
    pub wall_clock_seconds: f64,
    /// File names of the CSV side-files.
    pub tables: Vec<String>,
    #[serde(skip)]
    pub table_data: Vec<(String, Table)>,
}

impl RunReport {
    pub fn new(name: &str, source: Source) -> Self {
        Self {
            name: name.to_string(),
            source,
            violations: Vec::new(),
            representations: Vec::new(),
            verdicts: Vec::new(),
            notes: Vec::new(),
            samples_evaluated: 0,
            wall_clock_seconds: 0.0,
            tables: Vec::new(),
            table_data: Vec::new(),
        }
    }

    pub fn violation(&mut self, v: ViolationReport) -> f64 {
        self.samples_evaluated += v.samples_evaluated;
        let value = v.value;
        self.violations.push(v);
        value
    }

    pub fn representation(&mut self, check: &str, rep: NearRepresentation) {
        self.samples_evaluated += rep.points_checked;
        self.verdicts.push(Verdict {
            check: check.to_string(),
            status: Status::Pass,
            distance: Some(rep.achieved_distance),
            bound: Some(rep.bound),
            detail: format!(
                "sup distance {} within {} on {} points",
                rep.achieved_distance, rep.bound, rep.points_checked
            ),
        });
        self.representations.push(rep);
    }

    pub fn verdict(&mut self, check: &str, status: Status, detail: impl Into<String>) {
        self.verdicts.push(Verdict {
            check: check.to_string(),
            status,
            distance: None,
            bound: None,
            detail: detail.into(),
        });
    }

    /// Pass iff `distance <= bound`.
    pub fn compare(&mut self, check: &str, distance: f64, bound: f64, detail: impl Into<String>) {
        self.verdicts.push(Verdict {
            check: check.to_string(),
            status: if distance <= bound {
                Status::Pass
            } else {
                Status::Fail
            },
            distance: Some(distance),
            bound: Some(bound),
            detail: detail.into(),
        });
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn table(&mut self, name: &str, table: Table) {
        self.tables.push(format!("{}-{name}.csv", self.name));
        self.table_data.push((name.to_string(), table));
    }

    pub fn failed(&self) -> bool {
        self.verdicts.iter().any(|v| v.status == Status::Fail)
    }

    pub fn verdict_named(&self, check: &str) -> Option<&Verdict> {
        self.verdicts.iter().find(|v| v.check == check)
    }

    /// Writes the JSON report and, unless `tables` is false, the CSVs.
    /// Returns the paths written.
    pub fn write(&self, dir: &Path, tables: bool) -> Result<Vec<PathBuf>> {
        let io = |path: &Path| {
            let path = path.to_path_buf();
            move |source| CliError::Write { path, source }
        };
        std::fs::create_dir_all(dir).map_err(io(dir))?;
        let mut written = Vec::new();
        let path = dir.join(format!("{}-report.json", self.name));
        let json = serde_json::to_string_pretty(self).expect("reports always serialize");
        std::fs::write(&path, json + "\n").map_err(io(&path))?;
        written.push(path);
        if tables {
            for (file, (_, table)) in self.tables.iter().zip(&self.table_data) {
                let path = dir.join(file);
                table.write_file(&path).map_err(io(&path))?;
                written.push(path);
            }
        }
        Ok(written)
    }

    /// One line per verdict, for the terminal.
    pub fn summary(&self) -> String {
        let mut s = String::new();
        for v in &self.verdicts {
            let tag = match v.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
                Status::NotApplicable => "N/A ",
            };
            s.push_str(&format!("{tag} {}: {}: {}\n", self.name, v.check, v.detail));
        }
        s
    }
}
