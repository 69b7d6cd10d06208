use std::cmp::Ordering;
use std::fmt;

use num_bigint::BigInt;
use serde::{Deserialize, Serialize};

use crate::qnum::margin;

/// Grid coordinates of a record; unused axes are omitted.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Point {
    pub q: u64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub k: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub t: Option<i64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub c: Option<i64>,
}

impl Point {
    pub fn q(q: u64) -> Point {
        Point { q, ..Point::default() }
    }

    pub fn nkt(q: u64, n: i64, k: i64, t: i64) -> Point {
        Point { q, n: Some(n), k: Some(k), t: Some(t), c: None }
    }

    pub fn with_c(mut self, c: i64) -> Point {
        self.c = Some(c);
        self
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Skip,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum SkipReason {
    OutOfHypothesis,
    OverBudget,
    UnsupportedQ,
}

impl fmt::Display for SkipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SkipReason::OutOfHypothesis => "out-of-hypothesis",
            SkipReason::OverBudget => "over-budget",
            SkipReason::UnsupportedQ => "unsupported-q",
        })
    }
}

/// A claimed relation `lhs REL rhs`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Rel {
    Lt,
    Le,
    Eq,
    Ge,
    Gt,
}

impl Rel {
    pub fn symbol(self) -> &'static str {
        match self {
            Rel::Lt => "<",
            Rel::Le => "<=",
            Rel::Eq => "=",
            Rel::Ge => ">=",
            Rel::Gt => ">",
        }
    }

    pub fn holds(self, o: Ordering) -> bool {
        match self {
            Rel::Lt => o == Ordering::Less,
            Rel::Le => o != Ordering::Greater,
            Rel::Eq => o == Ordering::Equal,
            Rel::Ge => o != Ordering::Less,
            Rel::Gt => o == Ordering::Greater,
        }
    }
}

fn sign(o: Ordering) -> &'static str {
    match o {
        Ordering::Less => "<",
        Ordering::Equal => "=",
        Ordering::Greater => ">",
    }
}

/// One verified (or skipped) claim.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub check: String,
    #[serde(flatten)]
    pub point: Point,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
    pub expected: String,
    pub actual: String,
    /// `lhs - rhs` for relation checks.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub margin: Option<String>,
    pub status: Status,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reason: Option<SkipReason>,
    pub ms: u64,
}

impl CheckRecord {
    fn new(
        check: &str,
        point: Point,
        detail: Option<String>,
        expected: String,
        actual: String,
        pass: bool,
    ) -> CheckRecord {
        CheckRecord {
            check: check.to_string(),
            point,
            detail,
            expected,
            actual,
            margin: None,
            status: if pass { Status::Pass } else { Status::Fail },
            reason: None,
            ms: 0,
        }
    }

    /// Exact equality of an expected and an observed integer.
    pub fn exact(check: &str, point: Point, expected: &BigInt, actual: &BigInt) -> CheckRecord {
        CheckRecord::new(check, point, None, expected.to_string(), actual.to_string(), expected == actual)
    }

    /// `lhs REL rhs` by exact subtraction.
    pub fn relation(check: &str, point: Point, lhs: &BigInt, rel: Rel, rhs: &BigInt) -> CheckRecord {
        let (d, o) = margin(lhs, rhs);
        let mut r = CheckRecord::new(check, point, None, rel.symbol().into(), sign(o).into(), rel.holds(o));
        r.margin = Some(d.to_string());
        r
    }

    pub fn flag(check: &str, point: Point, expected: bool, actual: bool) -> CheckRecord {
        CheckRecord::new(check, point, None, expected.to_string(), actual.to_string(), expected == actual)
    }

    /// Free-form equality on rendered values.
    pub fn matches(check: &str, point: Point, expected: String, actual: String) -> CheckRecord {
        let pass = expected == actual;
        CheckRecord::new(check, point, None, expected, actual, pass)
    }

    /// A check that could not run; `actual` is empty.
    pub fn failed(check: &str, point: Point, expected: String, error: String) -> CheckRecord {
        CheckRecord::new(check, point, None, expected, format!("error: {error}"), false)
    }

    pub fn skip(check: &str, point: Point, reason: SkipReason) -> CheckRecord {
        CheckRecord {
            check: check.to_string(),
            point,
            detail: None,
            expected: String::new(),
            actual: String::new(),
            margin: None,
            status: Status::Skip,
            reason: Some(reason),
            ms: 0,
        }
    }

    pub fn detail(mut self, d: impl Into<String>) -> CheckRecord {
        self.detail = Some(d.into());
        self
    }

    pub fn ms(mut self, ms: u64) -> CheckRecord {
        self.ms = ms;
        self
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }
}
