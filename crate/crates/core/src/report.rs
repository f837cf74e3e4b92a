//! Verification reports: one record per identity, sorted by id, with a
//! JSON and a plain-text rendering.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skipped,
}

impl Status {
    pub fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped => "SKIP",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub id: String,
    /// The identity in formula form.
    pub anchor: String,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    /// Lowest λ-order at which the two sides differ.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failing_order: Option<usize>,
    /// The difference at that order, exact.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub failing_coefficient: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Counts {
    pub pass: usize,
    pub fail: usize,
    pub skipped: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub scene: String,
    pub seed: u64,
    pub order: usize,
    pub records: Vec<Record>,
    pub summary: Counts,
}

impl Report {
    pub fn new(scene: &str, seed: u64, order: usize) -> Self {
        Report { scene: scene.to_string(), seed, order, records: Vec::new(), summary: Counts::default() }
    }

    pub fn push(&mut self, r: Record) {
        self.records.push(r);
        self.finish();
    }

    pub fn extend(&mut self, rs: impl IntoIterator<Item = Record>) {
        self.records.extend(rs);
        self.finish();
    }

    /// Sorts by id and recomputes the summary.
    fn finish(&mut self) {
        self.records.sort_by(|a, b| a.id.cmp(&b.id));
        self.summary = self.counts();
    }

    pub fn counts(&self) -> Counts {
        let mut c = Counts::default();
        for r in &self.records {
            match r.status {
                Status::Pass => c.pass += 1,
                Status::Fail => c.fail += 1,
                Status::Skipped => c.skipped += 1,
            }
        }
        c
    }

    pub fn any_failed(&self) -> bool {
        self.records.iter().any(|r| r.status == Status::Fail)
    }

    pub fn get(&self, id: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.id == id)
    }

    /// Drops runtimes so the report depends only on scene and seed.
    pub fn without_timings(&self) -> Report {
        let mut r = self.clone();
        for rec in &mut r.records {
            rec.runtime_ms = None;
        }
        r
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl Format {
    pub fn parse(s: &str) -> Result<Format> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            _ => Err(Error::Config(format!("unknown format `{s}`"))),
        }
    }
}

pub fn emit_report(report: &Report, format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(report).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => emit_text(report),
    }
}

fn emit_text(report: &Report) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "scene {} seed {} order {}", report.scene, report.seed, report.order);
    for r in &report.records {
        let _ = write!(s, "{} {} :: {}", r.status.label(), r.id, r.anchor);
        if let Some(o) = r.failing_order {
            let _ = write!(s, " :: first failing order {o}");
        }
        if let Some(c) = &r.failing_coefficient {
            let _ = write!(s, " :: coefficient {c}");
        }
        if let Some(d) = &r.detail {
            let _ = write!(s, " :: {d}");
        }
        if let Some(t) = r.runtime_ms {
            let _ = write!(s, " :: {t} ms");
        }
        s.push('\n');
    }
    let c = report.summary;
    let _ = writeln!(s, "summary: {} pass, {} fail, {} skipped", c.pass, c.fail, c.skipped);
    s
}

/// Reads the status counts back from a text report.
pub fn parse_text_summary(text: &str) -> Result<Counts> {
    let line = text
        .lines()
        .rev()
        .find(|l| l.starts_with("summary:"))
        .ok_or_else(|| Error::Config("no summary line".into()))?;
    let nums: Vec<usize> = line
        .trim_start_matches("summary:")
        .split(',')
        .map(|p| p.split_whitespace().next().and_then(|n| n.parse().ok()))
        .collect::<Option<Vec<_>>>()
        .ok_or_else(|| Error::Config(format!("malformed summary `{line}`")))?;
    match nums[..] {
        [pass, fail, skipped] => Ok(Counts { pass, fail, skipped }),
        _ => Err(Error::Config(format!("malformed summary `{line}`"))),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rec(id: &str, status: Status) -> Record {
        Record {
            id: id.into(),
            anchor: "a = b".into(),
            status,
            detail: None,
            failing_order: (status == Status::Fail).then_some(2),
            failing_coefficient: (status == Status::Fail).then(|| "3/2*q".into()),
            runtime_ms: None,
        }
    }

    #[test]
    fn empty_report_is_valid() {
        let r = Report::new("empty", 0, 2);
        let j = emit_report(&r, Format::Json);
        let back: Report = serde_json::from_str(&j).unwrap();
        assert_eq!(back, r);
        assert_eq!(parse_text_summary(&emit_report(&r, Format::Text)).unwrap(), Counts::default());
    }

    #[test]
    fn sorted_and_round_trip() {
        let mut r = Report::new("s", 7, 3);
        r.extend([rec("z.last", Status::Pass), rec("a.first", Status::Fail), rec("m.mid", Status::Skipped)]);
        assert_eq!(r.records[0].id, "a.first");
        assert_eq!(r.records[0].failing_order, Some(2));
        assert!(r.any_failed());
        let j = emit_report(&r, Format::Json);
        let back: Report = serde_json::from_str(&j).unwrap();
        let text = emit_report(&back, Format::Text);
        assert_eq!(parse_text_summary(&text).unwrap(), r.counts());
        assert!(text.contains("FAIL a.first :: a = b :: first failing order 2 :: coefficient 3/2*q"));
    }
}
