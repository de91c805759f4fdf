use super::series::Classification;
use serde::Serialize;
use std::collections::BTreeMap;

/// One truncation level of a sweep.
#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub truncation: usize,
    pub value: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CriterionReport {
    pub criterion: String,
    pub parameters: BTreeMap<String, f64>,
    pub points: Vec<SweepPoint>,
    pub fitted: Option<f64>,
    pub classification: Classification,
    /// Name of the rule that produced the classification.
    pub rule: String,
    pub tolerances: BTreeMap<String, f64>,
    pub notes: Vec<String>,
}

impl CriterionReport {
    pub fn new(criterion: impl Into<String>, classification: Classification, rule: impl Into<String>) -> Self {
        CriterionReport {
            criterion: criterion.into(),
            parameters: BTreeMap::new(),
            points: Vec::new(),
            fitted: None,
            classification,
            rule: rule.into(),
            tolerances: BTreeMap::new(),
            notes: Vec::new(),
        }
    }

    pub fn param(mut self, key: &str, v: f64) -> Self {
        self.parameters.insert(key.to_string(), v);
        self
    }

    pub fn tolerance(mut self, key: &str, v: f64) -> Self {
        self.tolerances.insert(key.to_string(), v);
        self
    }

    pub fn with_points(mut self, pts: impl IntoIterator<Item = (usize, f64)>) -> Self {
        self.points = pts.into_iter().map(|(truncation, value)| SweepPoint { truncation, value }).collect();
        self
    }

    pub fn note(mut self, s: impl Into<String>) -> Self {
        self.notes.push(s.into());
        self
    }
}
