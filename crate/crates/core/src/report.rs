//! Outcome of a single identity check.

use crate::diffalg::Rde;
use std::fmt;
use std::time::Instant;

#[derive(Clone, Debug, PartialEq)]
pub struct VerificationCheck {
    pub name: String,
    pub passed: bool,
    /// First nonzero residual, rendered, when the check failed.
    pub residual: Option<String>,
    /// Free-form note such as a resolved convention.
    pub detail: Option<String>,
    pub elapsed_ms: u64,
}

impl VerificationCheck {
    pub fn new(name: impl Into<String>, passed: bool, start: Instant) -> Self {
        VerificationCheck {
            name: name.into(),
            passed,
            residual: None,
            detail: None,
            elapsed_ms: start.elapsed().as_millis() as u64,
        }
    }

    /// Passes iff every residual is exactly zero.
    pub fn from_residuals<'a>(name: impl Into<String>, residuals: impl IntoIterator<Item = &'a Rde>, start: Instant) -> Self {
        let first = residuals.into_iter().find(|r| !r.is_zero());
        let mut c = VerificationCheck::new(name, first.is_none(), start);
        c.residual = first.map(|r| r.to_string());
        c
    }

    /// Passes iff every labelled residual is zero; reports the first failure.
    pub fn from_labelled(name: impl Into<String>, parts: &[(&str, Rde)], start: Instant) -> Self {
        let failed = parts.iter().find(|(_, r)| !r.is_zero());
        let mut c = VerificationCheck::new(name, failed.is_none(), start);
        c.residual = failed.map(|(label, r)| format!("{label}: {r}"));
        c
    }

    /// A check that could not be carried out counts as failed.
    pub fn errored(name: impl Into<String>, err: &crate::KernelError, start: Instant) -> Self {
        let mut c = VerificationCheck::new(name, false, start);
        c.residual = Some(format!("error: {err}"));
        c
    }

    pub fn with_residual(mut self, residual: impl Into<String>) -> Self {
        self.residual = Some(residual.into());
        self
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Self {
        self.detail = Some(detail.into());
        self
    }

    /// Conjunction of sub-checks under a new name; the first failing residual wins.
    pub fn all(name: impl Into<String>, parts: &[VerificationCheck], start: Instant) -> Self {
        let failed = parts.iter().find(|p| !p.passed);
        let mut c = VerificationCheck::new(name, failed.is_none(), start);
        if let Some(f) = failed {
            c.residual = Some(format!("{}: {}", f.name, f.residual.as_deref().unwrap_or("failed")));
        }
        let details: Vec<String> = parts.iter().filter_map(|p| p.detail.clone()).collect();
        if !details.is_empty() {
            c.detail = Some(details.join("; "));
        }
        c
    }
}

impl fmt::Display for VerificationCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", if self.passed { "PASS" } else { "FAIL" }, self.name)?;
        if let Some(r) = &self.residual {
            write!(f, " (residual: {r})")?;
        }
        Ok(())
    }
}
