use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;
use vosa_core::qseries::PuiseuxSeries;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

#[derive(Clone, Debug, Serialize)]
pub struct Check {
    pub name: String,
    pub reference: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, reference: &str, ok: bool, detail: impl Into<String>) -> Self {
        Check { name: name.into(), reference: reference.to_string(), status: if ok { Status::Pass } else { Status::Fail }, detail: detail.into() }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct SeriesTerm {
    pub exp: String,
    pub coeff: Vec<String>,
}

/// An enumerated series, kept both as its text table and as JSON terms.
#[derive(Clone, Debug, Serialize)]
pub struct SeriesTable {
    #[serde(skip)]
    pub text: String,
    pub terms: Vec<SeriesTerm>,
}

impl SeriesTable {
    pub fn new(s: &PuiseuxSeries) -> Self {
        let terms = s
            .terms()
            .map(|(e, c)| SeriesTerm { exp: e.to_string(), coeff: c.coords().iter().map(|r| r.to_string()).collect() })
            .collect();
        SeriesTable { text: s.to_text(), terms }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub version: String,
    pub config: serde_json::Value,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub status: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub series: BTreeMap<String, SeriesTable>,
}

impl Report {
    pub fn new(config: serde_json::Value, mut checks: Vec<Check>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        Report { version: env!("CARGO_PKG_VERSION").to_string(), config, checks, status: None, series: BTreeMap::new() }
    }

    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == Status::Pass)
    }

    /// Keys come out sorted since serde_json maps are ordered.
    pub fn to_json(&self) -> String {
        let v = serde_json::to_value(self).expect("report serializes");
        serde_json::to_string_pretty(&v).expect("value serializes") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (name, t) in &self.series {
            let _ = write!(s, "{}\n{}\n", name, t.text);
        }
        if let Some(st) = &self.status {
            let _ = writeln!(s, "status: {}", st);
        }
        for c in &self.checks {
            let tag = match c.status {
                Status::Pass => "PASS",
                Status::Fail => "FAIL",
            };
            let _ = writeln!(s, "{} {}: {}", tag, c.name, c.detail);
        }
        s
    }
}
