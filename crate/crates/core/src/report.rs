//! One-line-per-check reports shared by the verification commands.

use serde::Serialize;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CheckLine {
    pub check: String,
    pub ok: bool,
    pub detail: String,
}

impl CheckLine {
    pub fn new(check: impl Into<String>, ok: bool, detail: impl Into<String>) -> Self {
        CheckLine {
            check: check.into(),
            ok,
            detail: detail.into(),
        }
    }
}

impl std::fmt::Display for CheckLine {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let tag = if self.ok { "ok  " } else { "FAIL" };
        write!(f, "{tag} {}: {}", self.check, self.detail)
    }
}
