//! Run reports: one entry per (instance, theorem, direction), emitted as
//! JSON, CSV or a plain table.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::Value;

use crate::error::{CliResult, Outcome};

pub const SCHEMA: u32 = 1;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum EntryVerdict {
    Pass,
    Fail,
    /// Failure that the instance declares as expected.
    ExpectedFail,
    Vacuous,
    Skipped,
    Inconclusive,
}

impl EntryVerdict {
    pub fn as_str(self) -> &'static str {
        match self {
            EntryVerdict::Pass => "pass",
            EntryVerdict::Fail => "fail",
            EntryVerdict::ExpectedFail => "expected-fail",
            EntryVerdict::Vacuous => "vacuous",
            EntryVerdict::Skipped => "skipped",
            EntryVerdict::Inconclusive => "inconclusive",
        }
    }

    pub fn of(passed: bool) -> Self {
        if passed {
            EntryVerdict::Pass
        } else {
            EntryVerdict::Fail
        }
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct Entry {
    pub instance: String,
    pub theorem: String,
    pub direction: String,
    pub verdict: EntryVerdict,
    pub margin: Option<f64>,
    pub detail: Value,
    /// Wall-clock time; kept out of JSON so reports stay byte-identical.
    #[serde(skip)]
    pub runtime_ms: f64,
}

impl Entry {
    pub fn new(instance: &str, theorem: &str, direction: &str, verdict: EntryVerdict, margin: f64) -> Self {
        Entry {
            instance: instance.into(),
            theorem: theorem.into(),
            direction: direction.into(),
            verdict,
            margin: margin.is_finite().then_some(margin),
            detail: Value::Null,
            runtime_ms: 0.0,
        }
    }

    pub fn with_detail<T: Serialize>(mut self, detail: &T) -> Self {
        self.detail = serde_json::to_value(detail).unwrap_or(Value::Null);
        self
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Summary {
    pub total: usize,
    pub passed: usize,
    pub failed: usize,
    pub expected_failures: usize,
    pub vacuous: usize,
    pub skipped: usize,
    pub inconclusive: usize,
}

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub command: String,
    pub seed: u64,
    pub tolerance: f64,
    pub summary: Summary,
    pub entries: Vec<Entry>,
}

impl Report {
    pub fn new(command: &str, seed: u64, tolerance: f64, mut entries: Vec<Entry>) -> Self {
        entries.sort_by(|a, b| (&a.instance, &a.theorem, &a.direction).cmp(&(&b.instance, &b.theorem, &b.direction)));
        let mut s = Summary { total: entries.len(), ..Default::default() };
        for e in &entries {
            match e.verdict {
                EntryVerdict::Pass => s.passed += 1,
                EntryVerdict::Fail => s.failed += 1,
                EntryVerdict::ExpectedFail => s.expected_failures += 1,
                EntryVerdict::Vacuous => s.vacuous += 1,
                EntryVerdict::Skipped => s.skipped += 1,
                EntryVerdict::Inconclusive => s.inconclusive += 1,
            }
        }
        Report { schema: SCHEMA, command: command.into(), seed, tolerance, summary: s, entries }
    }

    pub fn outcome(&self) -> Outcome {
        if self.summary.failed > 0 {
            Outcome::Failure
        } else if self.summary.inconclusive > 0 {
            Outcome::Inconclusive
        } else {
            Outcome::Pass
        }
    }

    pub fn to_json(&self) -> CliResult<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn to_csv(&self) -> CliResult<String> {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["instance", "theorem", "direction", "verdict", "margin", "runtime_ms"])?;
        for e in &self.entries {
            w.write_record([
                e.instance.as_str(),
                e.theorem.as_str(),
                e.direction.as_str(),
                e.verdict.as_str(),
                &e.margin.map(|m| format!("{m:.6e}")).unwrap_or_default(),
                &format!("{:.3}", e.runtime_ms),
            ])?;
        }
        let bytes = w.into_inner().map_err(|e| std::io::Error::other(e.to_string()))?;
        Ok(String::from_utf8_lossy(&bytes).into_owned())
    }

    pub fn to_table(&self) -> String {
        let headers = ["instance", "theorem", "direction", "verdict", "margin"];
        let rows: Vec<[String; 5]> = self
            .entries
            .iter()
            .map(|e| {
                [
                    e.instance.clone(),
                    e.theorem.clone(),
                    e.direction.clone(),
                    e.verdict.as_str().to_string(),
                    e.margin.map(|m| format!("{m:.3e}")).unwrap_or_else(|| "-".into()),
                ]
            })
            .collect();
        let mut widths = headers.map(str::len);
        for r in &rows {
            for (w, c) in widths.iter_mut().zip(r) {
                *w = (*w).max(c.chars().count());
            }
        }
        let mut out = String::new();
        let line = |out: &mut String, cells: &[&str]| {
            let parts: Vec<String> = cells.iter().zip(widths).map(|(c, w)| format!("{c:<w$}")).collect();
            let _ = writeln!(out, "{}", parts.join("  ").trim_end());
        };
        line(&mut out, &headers);
        for r in &rows {
            let cells: Vec<&str> = r.iter().map(String::as_str).collect();
            line(&mut out, &cells);
        }
        let s = &self.summary;
        let _ = writeln!(
            out,
            "\n{} entries: {} pass, {} fail, {} expected-fail, {} vacuous, {} skipped, {} inconclusive",
            s.total, s.passed, s.failed, s.expected_failures, s.vacuous, s.skipped, s.inconclusive
        );
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sample() -> Report {
        let mut a = Entry::new("b", "SS", "(1)=>(2)", EntryVerdict::Pass, 0.5);
        a.runtime_ms = 12.0;
        let b = Entry::new("a", "GNS", "reproduction", EntryVerdict::ExpectedFail, f64::INFINITY);
        Report::new("verify ss", 7, 1e-9, vec![a, b])
    }

    #[test]
    fn entries_are_sorted_and_json_skips_runtime() {
        let r = sample();
        assert_eq!(r.entries[0].instance, "a");
        let json = r.to_json().unwrap();
        assert!(json.contains("\"schema\": 1"));
        assert!(!json.contains("runtime_ms"));
        assert!(json.contains("\"margin\": null"));
        assert_eq!(r.outcome(), Outcome::Pass);
    }

    #[test]
    fn csv_has_fixed_columns() {
        let csv = sample().to_csv().unwrap();
        let mut lines = csv.lines();
        assert_eq!(lines.next().unwrap(), "instance,theorem,direction,verdict,margin,runtime_ms");
        assert!(lines.next().unwrap().starts_with("a,GNS,reproduction,expected-fail,,"));
    }

    #[test]
    fn failures_beat_inconclusive() {
        let e = vec![Entry::new("x", "t", "d", EntryVerdict::Inconclusive, 0.0), Entry::new("y", "t", "d", EntryVerdict::Fail, 0.0)];
        assert_eq!(Report::new("c", 0, 0.0, e).outcome(), Outcome::Failure);
        let table = sample().to_table();
        assert!(table.starts_with("instance"));
    }
}
