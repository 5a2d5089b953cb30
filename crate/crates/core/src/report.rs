//! Check results and JSON reports.
//!
//! Residues are rendered as decimal strings, reals as shortest round-trip
//! decimals (`{:e}` for differences and error estimates). Records are sorted
//! by instance id, so a report depends only on its configuration.

use serde_json::{json, Value};

use crate::error::{Error, Result};
use crate::numeric::ApproxReal;
use crate::relations::{Family, Params, RelationInstance, ValueSpace};

pub const TOOL_VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Status {
    Pass,
    Fail,
}

impl Status {
    pub fn name(self) -> &'static str {
        match self {
            Status::Pass => "pass",
            Status::Fail => "fail",
        }
    }
}

/// Failing prime with both side residues.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Witness {
    pub p: u64,
    pub lhs: u64,
    pub rhs: u64,
}

#[derive(Clone, Debug, PartialEq)]
pub enum Outcome {
    Real {
        lhs: ApproxReal,
        rhs: ApproxReal,
        difference: f64,
        tolerance: f64,
    },
    Modular {
        primes: Vec<u64>,
        witnesses: Vec<Witness>,
    },
}

#[derive(Clone, Debug, PartialEq)]
pub struct CheckResult {
    pub id: String,
    pub family: Family,
    pub params: Params,
    pub space: ValueSpace,
    pub lhs_expr: String,
    pub rhs_expr: String,
    pub outcome: Outcome,
    pub status: Status,
}

impl CheckResult {
    pub(crate) fn new(inst: &RelationInstance, outcome: Outcome) -> Self {
        let pass = match &outcome {
            Outcome::Real {
                difference,
                tolerance,
                ..
            } => difference.abs() <= *tolerance,
            Outcome::Modular { witnesses, .. } => witnesses.is_empty(),
        };
        CheckResult {
            id: inst.id(),
            family: inst.family,
            params: inst.params.clone(),
            space: inst.space,
            lhs_expr: inst.lhs.to_string(),
            rhs_expr: inst.rhs.to_string(),
            outcome,
            status: if pass { Status::Pass } else { Status::Fail },
        }
    }

    pub fn passed(&self) -> bool {
        self.status == Status::Pass
    }

    pub fn to_json(&self) -> Value {
        let (lhs, rhs, evidence) = match &self.outcome {
            Outcome::Real {
                lhs,
                rhs,
                difference,
                tolerance,
            } => (
                json!({"expr": self.lhs_expr, "value": real(lhs.value), "err": sci(lhs.err)}),
                json!({"expr": self.rhs_expr, "value": real(rhs.value), "err": sci(rhs.err)}),
                json!({"difference": sci(*difference), "tolerance": sci(*tolerance)}),
            ),
            Outcome::Modular { primes, witnesses } => {
                let witness: Vec<Value> = witnesses
                    .iter()
                    .map(|w| json!({"p": w.p.to_string(), "lhs": w.lhs.to_string(), "rhs": w.rhs.to_string()}))
                    .collect();
                (
                    json!({"expr": self.lhs_expr}),
                    json!({"expr": self.rhs_expr}),
                    json!({
                        "primes_checked": primes.len(),
                        "pmin": primes.first().map(u64::to_string),
                        "pmax": primes.last().map(u64::to_string),
                        "witness": witness,
                    }),
                )
            }
        };
        json!({
            "id": self.id,
            "family": self.family.name(),
            "params": self.params.to_json(),
            "space": self.space.name(),
            "lhs": lhs,
            "rhs": rhs,
            "difference_or_witness": evidence,
            "status": self.status.name(),
        })
    }

    /// One-line summary for terminal output.
    pub fn line(&self) -> String {
        let detail = match &self.outcome {
            Outcome::Real {
                difference,
                tolerance,
                ..
            } => format!("|diff| = {:.3e} (tol {:.1e})", difference.abs(), tolerance),
            Outcome::Modular { primes, witnesses } => match witnesses.first() {
                None => format!("{} primes", primes.len()),
                Some(w) => format!("fails at p = {} ({} vs {})", w.p, w.lhs, w.rhs),
            },
        };
        format!(
            "{} {} {}",
            self.status.name().to_uppercase(),
            self.id,
            detail
        )
    }
}

fn real(x: f64) -> String {
    format!("{x}")
}

fn sci(x: f64) -> String {
    format!("{x:e}")
}

#[derive(Clone, Debug)]
pub struct Report {
    pub config: Value,
    pub results: Vec<CheckResult>,
}

impl Report {
    /// Sorts by instance id and rejects duplicate ids.
    pub fn new(config: Value, mut results: Vec<CheckResult>) -> Result<Self> {
        results.sort_by(|a, b| a.id.cmp(&b.id));
        if let Some(w) = results.windows(2).find(|w| w[0].id == w[1].id) {
            return Err(Error::config(format!("duplicate instance id {}", w[0].id)));
        }
        Ok(Report { config, results })
    }

    pub fn passed(&self) -> usize {
        self.results.iter().filter(|r| r.passed()).count()
    }

    pub fn failed(&self) -> usize {
        self.results.len() - self.passed()
    }

    pub fn all_passed(&self) -> bool {
        self.failed() == 0
    }

    pub fn to_json(&self) -> Value {
        json!({
            "version": TOOL_VERSION,
            "config": self.config,
            "results": self.results.iter().map(CheckResult::to_json).collect::<Vec<_>>(),
            "summary": {
                "total": self.results.len(),
                "passed": self.passed(),
                "failed": self.failed(),
            },
        })
    }

    pub fn render(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_json()).expect("report is valid JSON");
        text.push('\n');
        text
    }
}
