//! Audit reports: named inequality instances with exact sides.

use num::BigInt;

use crate::geom::radical::RadicalSum;
use crate::Rat;

/// One side of an audited (in)equality.
#[derive(Clone, Debug)]
pub enum AuditValue {
    Rat(Rat),
    Int(BigInt),
    Count(u64),
    Radical(RadicalSum),
    Float(f64),
    Text(String),
}

impl AuditValue {
    pub fn to_f64(&self) -> f64 {
        use crate::scalar::Scalar;
        match self {
            AuditValue::Rat(r) => r.to_f64(),
            AuditValue::Int(i) => i.to_string().parse().unwrap_or(f64::NAN),
            AuditValue::Count(c) => *c as f64,
            AuditValue::Radical(r) => r.to_f64(),
            AuditValue::Float(f) => *f,
            AuditValue::Text(_) => f64::NAN,
        }
    }
}

#[derive(Clone, Debug)]
pub struct AuditRow {
    pub check: String,
    pub lhs: AuditValue,
    pub rhs: AuditValue,
    pub satisfied: bool,
    pub context: String,
}

/// Ordered list of audit rows; `all_satisfied` is the audit verdict.
#[derive(Clone, Debug, Default)]
pub struct AuditReport {
    pub rows: Vec<AuditRow>,
}

impl AuditReport {
    pub fn new() -> Self {
        AuditReport::default()
    }

    pub fn push(
        &mut self,
        check: impl Into<String>,
        lhs: AuditValue,
        rhs: AuditValue,
        satisfied: bool,
        context: impl Into<String>,
    ) {
        self.rows.push(AuditRow {
            check: check.into(),
            lhs,
            rhs,
            satisfied,
            context: context.into(),
        });
    }

    pub fn all_satisfied(&self) -> bool {
        self.rows.iter().all(|r| r.satisfied)
    }

    pub fn row(&self, check: &str) -> Option<&AuditRow> {
        self.rows.iter().find(|r| r.check == check)
    }

    pub fn merge(&mut self, other: AuditReport) {
        self.rows.extend(other.rows);
    }
}
