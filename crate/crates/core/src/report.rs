//! Structured experiment output.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Labeled {
    pub label: String,
    pub value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioEntry {
    pub label: String,
    pub observed: f64,
    pub bound: f64,
    pub ratio: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Flag {
    pub name: String,
    pub passed: bool,
    /// Hypothesis checks are reported but do not fail the run.
    pub asserted: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentReport {
    pub experiment: String,
    pub form_id: String,
    pub seed: Option<u64>,
    pub params: BTreeMap<String, f64>,
    pub observed: Vec<Labeled>,
    pub bounds: Vec<Labeled>,
    pub ratios: Vec<RatioEntry>,
    pub flags: Vec<Flag>,
}

impl ExperimentReport {
    pub fn new(experiment: &str, form_id: &str) -> Self {
        ExperimentReport {
            experiment: experiment.into(),
            form_id: form_id.into(),
            seed: None,
            params: BTreeMap::new(),
            observed: Vec::new(),
            bounds: Vec::new(),
            ratios: Vec::new(),
            flags: Vec::new(),
        }
    }

    pub fn with_seed(mut self, seed: Option<u64>) -> Self {
        self.seed = seed;
        self
    }

    pub fn param(&mut self, name: &str, value: f64) -> &mut Self {
        self.params.insert(name.into(), value);
        self
    }

    pub fn observe(&mut self, label: &str, value: f64) -> &mut Self {
        self.observed.push(Labeled { label: label.into(), value });
        self
    }

    pub fn bound(&mut self, label: &str, value: f64) -> &mut Self {
        self.bounds.push(Labeled { label: label.into(), value });
        self
    }

    /// Records `observed / bound`; a zero bound with zero observation gives ratio 0.
    pub fn ratio(&mut self, label: &str, observed: f64, bound: f64) -> f64 {
        let ratio = if observed == 0.0 { 0.0 } else { observed / bound };
        self.ratios.push(RatioEntry { label: label.into(), observed, bound, ratio });
        ratio
    }

    pub fn assert_flag(&mut self, name: &str, passed: bool) -> &mut Self {
        self.flags.push(Flag { name: name.into(), passed, asserted: true });
        self
    }

    pub fn hypothesis_flag(&mut self, name: &str, passed: bool) -> &mut Self {
        self.flags.push(Flag { name: name.into(), passed, asserted: false });
        self
    }

    pub fn observed_value(&self, label: &str) -> Option<f64> {
        self.observed.iter().find(|o| o.label == label).map(|o| o.value)
    }

    pub fn ratio_value(&self, label: &str) -> Option<f64> {
        self.ratios.iter().find(|r| r.label == label).map(|r| r.ratio)
    }

    pub fn flag(&self, name: &str) -> Option<bool> {
        self.flags.iter().find(|f| f.name == name).map(|f| f.passed)
    }

    /// True when every asserted flag passed.
    pub fn passed(&self) -> bool {
        self.flags.iter().filter(|f| f.asserted).all(|f| f.passed)
    }

    /// One CSV row per ratio entry: `experiment,form,params,label,observed,bound,ratio`.
    pub fn csv_rows(&self) -> Vec<String> {
        let params: Vec<String> = self.params.iter().map(|(k, v)| format!("{k}={v:e}")).collect();
        let params = params.join(";");
        self.ratios
            .iter()
            .map(|r| {
                format!(
                    "{},{},{},{},{:.17e},{:.17e},{:.17e}",
                    self.experiment, self.form_id, params, r.label, r.observed, r.bound, r.ratio
                )
            })
            .collect()
    }

    pub const CSV_HEADER: &'static str = "experiment,form,params,label,observed,bound,ratio";
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn ratio_and_flags() {
        let mut r = ExperimentReport::new("demo", "all-ones:2");
        assert_eq!(r.ratio("x", 3.0, 4.0), 0.75);
        assert_eq!(r.ratio("zero", 0.0, 0.0), 0.0);
        r.hypothesis_flag("h", false).assert_flag("a", true);
        assert!(r.passed());
        r.assert_flag("b", false);
        assert!(!r.passed());
        assert_eq!(r.csv_rows().len(), 2);
    }
}
