//! Named numerical verification results.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::algebra::C64;

/// One verification: compares `lhs` with `rhs` under absolute and relative tolerances.
///
/// Equalities use `abs_err = |lhs − rhs|`. Upper bounds `lhs ≤ rhs` use
/// `abs_err = max(0, re lhs − re rhs)`. Defects compare a nonnegative quantity with 0.
/// In every case `pass ⇔ abs_err ≤ tol_abs ∨ rel_err ≤ tol_rel`, and NaN never passes.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub claim: String,
    pub scenario: String,
    pub kind: CheckKind,
    pub lhs: C64,
    pub rhs: C64,
    pub abs_err: f64,
    pub rel_err: f64,
    pub tol_abs: f64,
    pub tol_rel: f64,
    pub pass: bool,
    pub notes: String,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CheckKind {
    Equality,
    UpperBound,
    Defect,
}

impl CheckReport {
    fn build(name: &str, claim: &str, kind: CheckKind, lhs: C64, rhs: C64, abs_err: f64, scale: f64, tol_abs: f64, tol_rel: f64) -> Self {
        let rel_err = if abs_err == 0.0 {
            0.0
        } else if scale > 0.0 {
            abs_err / scale
        } else {
            f64::INFINITY
        };
        let pass = !abs_err.is_nan() && (abs_err <= tol_abs || rel_err <= tol_rel);
        Self {
            name: name.to_string(),
            claim: claim.to_string(),
            scenario: String::new(),
            kind,
            lhs,
            rhs,
            abs_err,
            rel_err,
            tol_abs,
            tol_rel,
            pass,
            notes: String::new(),
        }
    }

    /// `lhs = rhs`; relative error is taken against `|rhs|`.
    pub fn equality(name: &str, claim: &str, lhs: C64, rhs: C64, tol_abs: f64, tol_rel: f64) -> Self {
        let abs_err = (lhs - rhs).norm();
        Self::build(name, claim, CheckKind::Equality, lhs, rhs, abs_err, rhs.norm(), tol_abs, tol_rel)
    }

    pub fn equality_re(name: &str, claim: &str, lhs: f64, rhs: f64, tol_abs: f64, tol_rel: f64) -> Self {
        Self::equality(name, claim, C64::new(lhs, 0.0), C64::new(rhs, 0.0), tol_abs, tol_rel)
    }

    /// `lhs ≤ rhs`; relative slack is taken against `|rhs|`.
    pub fn upper_bound(name: &str, claim: &str, lhs: f64, rhs: f64, tol_abs: f64, tol_rel: f64) -> Self {
        let abs_err = if lhs.is_nan() || rhs.is_nan() { f64::NAN } else { (lhs - rhs).max(0.0) };
        Self::build(
            name,
            claim,
            CheckKind::UpperBound,
            C64::new(lhs, 0.0),
            C64::new(rhs, 0.0),
            abs_err,
            rhs.abs(),
            tol_abs,
            tol_rel,
        )
    }

    /// A nonnegative defect that should vanish; `scale` turns it into a relative error.
    pub fn defect(name: &str, claim: &str, defect: f64, scale: f64, tol_abs: f64, tol_rel: f64) -> Self {
        Self::build(
            name,
            claim,
            CheckKind::Defect,
            C64::new(defect, 0.0),
            C64::new(0.0, 0.0),
            defect.abs(),
            scale.abs(),
            tol_abs,
            tol_rel,
        )
    }

    pub fn in_scenario(mut self, scenario: &str) -> Self {
        self.scenario = scenario.to_string();
        self
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        let note = note.into();
        if self.notes.is_empty() {
            self.notes = note;
        } else {
            self.notes = format!("{}; {note}", self.notes);
        }
        self
    }

    /// A report that fails unconditionally, used when a check could not be evaluated.
    pub fn failed(name: &str, claim: &str, reason: impl Into<String>) -> Self {
        let mut r = Self::build(
            name,
            claim,
            CheckKind::Defect,
            C64::new(f64::NAN, 0.0),
            C64::new(0.0, 0.0),
            f64::NAN,
            0.0,
            0.0,
            0.0,
        );
        r.notes = reason.into();
        r
    }
}

fn fmt_c(z: C64) -> String {
    if z.im == 0.0 {
        format!("{:.12e}", z.re)
    } else {
        format!("{:.12e}{:+.12e}i", z.re, z.im)
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} [{}] lhs={} rhs={} abs_err={:.3e} rel_err={:.3e} tol=({:.1e} abs, {:.1e} rel)",
            if self.pass { "PASS" } else { "FAIL" },
            self.name,
            self.claim,
            fmt_c(self.lhs),
            fmt_c(self.rhs),
            self.abs_err,
            self.rel_err,
            self.tol_abs,
            self.tol_rel,
        )?;
        if !self.notes.is_empty() {
            write!(f, " ({})", self.notes)?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_rule() {
        assert!(CheckReport::equality_re("a", "c", 1.0, 1.0 + 1e-12, 0.0, 1e-9).pass);
        assert!(!CheckReport::equality_re("a", "c", 1.0, 1.1, 1e-3, 1e-3).pass);
        assert!(CheckReport::equality_re("a", "c", 1e-14, 0.0, 1e-12, 0.0).pass);
        assert!(!CheckReport::equality_re("a", "c", f64::NAN, 0.0, 1.0, 1.0).pass);
    }

    #[test]
    fn upper_bound_has_zero_error_below_rhs() {
        let r = CheckReport::upper_bound("b", "c", 0.5, 1.0, 0.0, 0.0);
        assert!(r.pass);
        assert_eq!(r.abs_err, 0.0);
        let r = CheckReport::upper_bound("b", "c", 1.0 + 1e-10, 1.0, 0.0, 1e-9);
        assert!(r.pass);
        let r = CheckReport::upper_bound("b", "c", 1.1, 1.0, 0.0, 1e-9);
        assert!(!r.pass);
    }

    #[test]
    fn failed_report_never_passes() {
        assert!(!CheckReport::failed("x", "y", "no data").pass);
    }
}
