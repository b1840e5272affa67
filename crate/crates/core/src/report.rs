//! Uniform check records shared by every verification route.

use std::collections::BTreeMap;
use std::fmt::Display;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
}

/// One checked claim: which check, on which generator or symbol, the residual
/// that was computed (`"0"` when it vanished) and the verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckRecord {
    pub check: String,
    pub generator: String,
    pub residual: String,
    pub status: Status,
}

impl CheckRecord {
    pub fn new(check: &str, generator: impl Display, residual: impl Display, pass: bool) -> Self {
        CheckRecord {
            check: check.to_string(),
            generator: generator.to_string(),
            residual: residual.to_string(),
            status: if pass { Status::Pass } else { Status::Fail },
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct Report {
    pub records: Vec<CheckRecord>,
}

impl Report {
    pub fn new() -> Self {
        Report::default()
    }

    pub fn push(&mut self, r: CheckRecord) {
        self.records.push(r);
    }

    /// Records a check whose residual must be the zero object.
    pub fn zero(&mut self, check: &str, generator: impl Display, residual: impl Display, is_zero: bool) {
        self.push(CheckRecord::new(check, generator, residual, is_zero));
    }

    pub fn extend(&mut self, other: Report) {
        self.records.extend(other.records);
    }

    pub fn passed(&self) -> bool {
        self.records.iter().all(CheckRecord::passed)
    }

    pub fn first_failure(&self) -> Option<&CheckRecord> {
        self.records.iter().find(|r| !r.passed())
    }

    pub fn len(&self) -> usize {
        self.records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.records.is_empty()
    }

    /// `check -> (passed, failed)` in first-seen order of check names.
    pub fn summary(&self) -> Vec<(String, usize, usize)> {
        let mut order = Vec::new();
        let mut counts: BTreeMap<&str, (usize, usize)> = BTreeMap::new();
        for r in &self.records {
            let e = counts.entry(&r.check).or_insert_with(|| {
                order.push(r.check.clone());
                (0, 0)
            });
            if r.passed() {
                e.0 += 1;
            } else {
                e.1 += 1;
            }
        }
        order
            .into_iter()
            .map(|c| {
                let (p, f) = counts[c.as_str()];
                (c, p, f)
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn summary_and_failure() {
        let mut r = Report::new();
        r.zero("a", "g1", 0, true);
        r.zero("b", "g2", "x(1)", false);
        r.zero("a", "g3", 0, true);
        assert!(!r.passed());
        assert_eq!(r.first_failure().unwrap().generator, "g2");
        assert_eq!(r.summary(), vec![("a".into(), 2, 0), ("b".into(), 0, 1)]);
        let v = serde_json::to_value(&r.records[1]).unwrap();
        assert_eq!(v["status"], "fail");
    }
}
