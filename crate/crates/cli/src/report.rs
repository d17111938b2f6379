//! JSON verification reports.

use exact_series::residual::{ResidualReport, Verdict};
use exact_series::Scalar;
use serde::Serialize;

pub const SCHEMA: &str = "exactseries.report/1";

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct EquationReport {
    pub name: String,
    pub verdict: &'static str,
    /// Per-axis inclusive bound; `null` on an axis the residual does not limit.
    pub trustworthy_order: Vec<Option<i64>>,
    pub max_abs: String,
    pub first_nonzero: Option<Vec<usize>>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub schema: &'static str,
    pub kind: String,
    pub backend: &'static str,
    pub verdict: &'static str,
    pub equations: Vec<EquationReport>,
}

pub fn verdict_name(v: Verdict) -> &'static str {
    match v {
        Verdict::Pass => "pass",
        Verdict::Fail => "fail",
        Verdict::Inconclusive => "inconclusive",
    }
}

/// Fail dominates, then inconclusive.
pub fn combine(vs: impl IntoIterator<Item = Verdict>) -> Verdict {
    vs.into_iter().fold(Verdict::Pass, |acc, v| match (acc, v) {
        (Verdict::Fail, _) | (_, Verdict::Fail) => Verdict::Fail,
        (Verdict::Inconclusive, _) | (_, Verdict::Inconclusive) => Verdict::Inconclusive,
        _ => Verdict::Pass,
    })
}

impl EquationReport {
    pub fn new<T: Scalar>(name: &str, r: &ResidualReport<T>) -> Self {
        Self {
            name: name.to_string(),
            verdict: verdict_name(r.verdict()),
            trustworthy_order: r.trustworthy_order.bounds(),
            max_abs: r.max_abs_within_trustworthy.to_text(),
            first_nonzero: r.first_nonzero(),
        }
    }
}

impl VerifyReport {
    pub fn new<'a, T: Scalar + 'a>(kind: &str, reports: impl IntoIterator<Item = (&'a str, &'a ResidualReport<T>)>) -> Self {
        let mut verdicts = Vec::new();
        let equations = reports
            .into_iter()
            .map(|(name, r)| {
                verdicts.push(r.verdict());
                EquationReport::new(name, r)
            })
            .collect();
        Self {
            schema: SCHEMA,
            kind: kind.to_string(),
            backend: T::BACKEND.name(),
            verdict: verdict_name(combine(verdicts)),
            equations,
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == "pass"
    }
}
