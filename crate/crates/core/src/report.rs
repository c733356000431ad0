//! Structured check results shared by the verification routines.

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CheckItem {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

impl CheckItem {
    pub fn new(name: impl Into<String>, passed: bool, detail: impl Into<String>) -> Self {
        CheckItem { name: name.into(), passed, detail: detail.into() }
    }
}

/// Names and details of the failed items.
pub fn failures(items: &[CheckItem]) -> Vec<String> {
    items.iter().filter(|c| !c.passed).map(|c| format!("{}: {}", c.name, c.detail)).collect()
}
