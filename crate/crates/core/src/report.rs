use serde::{Deserialize, Serialize};

/// One checked inequality `lhs <= rhs`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundCheck {
    pub id: String,
    pub lhs: f64,
    pub rhs: f64,
    /// Absolute slack granted to the comparison, `1e-9 (1 + |rhs|)`.
    pub tolerance: f64,
    pub holds: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl BoundCheck {
    pub fn le(id: impl Into<String>, lhs: f64, rhs: f64) -> Self {
        let tolerance = 1e-9 * (1.0 + rhs.abs());
        Self {
            id: id.into(),
            lhs,
            rhs,
            tolerance,
            holds: lhs <= rhs + tolerance,
            note: None,
        }
    }

    /// A boolean condition, encoded as `[violated] <= 0`.
    pub fn condition(id: impl Into<String>, ok: bool) -> Self {
        Self::le(id, if ok { 0.0 } else { 1.0 }, 0.0)
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = Some(note.into());
        self
    }
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct BoundReport {
    pub checks: Vec<BoundCheck>,
}

impl BoundReport {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }

    pub fn failures(&self) -> impl Iterator<Item = &BoundCheck> {
        self.checks.iter().filter(|c| !c.holds)
    }

    pub fn get(&self, id: &str) -> Option<&BoundCheck> {
        self.checks.iter().find(|c| c.id == id)
    }

    pub fn extend(&mut self, other: BoundReport) {
        self.checks.extend(other.checks);
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tolerance_scales_with_rhs() {
        assert!(BoundCheck::le("a", 1.0 + 1e-10, 1.0).holds);
        assert!(!BoundCheck::le("a", 1.0 + 1e-8, 1.0).holds);
        assert!(BoundCheck::le("a", 1e6 + 1e-4, 1e6).holds);
        assert!(!BoundCheck::le("a", f64::NAN, 1.0).holds);
        assert!(BoundCheck::condition("c", true).holds);
        assert!(!BoundCheck::condition("c", false).holds);
    }
}
