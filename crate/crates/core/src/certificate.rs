//! The report produced by every pipeline.

use std::collections::BTreeMap;

use serde::Serialize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CheckStatus {
    Pass,
    Fail,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: CheckStatus,
    pub data: serde_json::Value,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Conclusion {
    /// Number of fiberings, when it is pinned down exactly.
    pub fib: Option<u32>,
    pub statement: String,
    pub notes: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FiberingCertificate {
    pub manifold: String,
    pub checks: Vec<Check>,
    /// Geometric facts taken as input rather than computed.
    pub axioms: Vec<String>,
    pub dims: BTreeMap<String, u64>,
    pub conclusion: Option<Conclusion>,
}

impl FiberingCertificate {
    pub fn new(manifold: impl Into<String>) -> Self {
        FiberingCertificate {
            manifold: manifold.into(),
            checks: Vec::new(),
            axioms: Vec::new(),
            dims: BTreeMap::new(),
            conclusion: None,
        }
    }

    pub fn check(&mut self, name: impl Into<String>, passed: bool, data: serde_json::Value) -> bool {
        self.checks.push(Check {
            name: name.into(),
            status: if passed { CheckStatus::Pass } else { CheckStatus::Fail },
            data,
        });
        passed
    }

    pub fn axiom(&mut self, text: impl Into<String>) {
        self.axioms.push(text.into());
    }

    pub fn dim(&mut self, name: impl Into<String>, value: u64) {
        self.dims.insert(name.into(), value);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.status == CheckStatus::Pass)
    }

    pub fn failed_checks(&self) -> Vec<&str> {
        self.checks
            .iter()
            .filter(|c| c.status == CheckStatus::Fail)
            .map(|c| c.name.as_str())
            .collect()
    }

    pub fn find_check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Sets the conclusion, or drops it if any check failed.
    pub fn conclude(&mut self, conclusion: Conclusion) {
        self.conclusion = if self.all_passed() { Some(conclusion) } else { None };
    }

    /// True when every check passed and a conclusion was drawn.
    pub fn is_certified(&self) -> bool {
        self.all_passed() && self.conclusion.is_some()
    }

    pub fn fib(&self) -> Option<u32> {
        self.conclusion.as_ref().and_then(|c| c.fib)
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::to_value(self).expect("certificate serializes")
    }
}
