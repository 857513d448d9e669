//! Report model shared by all subcommands, with text and JSON renderings.
//! Both renderings carry the same numbers; field order is fixed.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use brst_core::brst::{CohomologyCell, HilbertCertificate};
use brst_core::derham::PoincarePolynomial;
use serde::Serialize;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Pass,
    Fail,
    Assumed,
    Skipped,
}

impl Status {
    pub fn from_bool(ok: bool) -> Self {
        if ok {
            Status::Pass
        } else {
            Status::Fail
        }
    }

    fn label(self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Assumed => "ASSUMED",
            Status::Skipped => "SKIPPED",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub status: Status,
    pub detail: String,
}

impl Check {
    pub fn new(name: &str, status: Status, detail: impl Into<String>) -> Self {
        Self { name: name.to_string(), status, detail: detail.into() }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub table: String,
    pub weight: Vec<i64>,
    pub ghost_degree: i64,
    pub bound: i64,
    pub dim: usize,
    pub stable: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<usize>,
}

impl TableRow {
    pub fn from_cell(table: &str, c: &CohomologyCell, expected: Option<usize>) -> Self {
        Self {
            table: table.to_string(),
            weight: c.weight.clone(),
            ghost_degree: c.ghost_degree,
            bound: c.bound,
            dim: c.dim,
            stable: c.stable,
            expected,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Predicted {
    pub source: String,
    pub coefficients: Vec<u64>,
    pub factored: String,
    pub at_one: u64,
    pub palindromic: bool,
}

impl Predicted {
    pub fn new(source: &str, p: &PoincarePolynomial) -> Self {
        Self {
            source: source.to_string(),
            coefficients: p.coefficients().to_vec(),
            factored: p.render_factored(),
            at_one: p.eval_at_one(),
            palindromic: p.is_palindromic(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Hilbert {
    pub computed: Vec<i128>,
    pub expected: Vec<i128>,
    pub first_failure: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub dimension_target: Option<i64>,
}

impl Hilbert {
    pub fn new(c: &HilbertCertificate, dimension_target: Option<i64>) -> Self {
        Self {
            computed: c.computed.clone(),
            expected: c.expected.clone(),
            first_failure: c.first_failure,
            dimension_target,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Mismatch {
    pub table: String,
    pub weight: Vec<i64>,
    pub ghost_degree: i64,
    pub bound: i64,
    pub got: usize,
    pub expected: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Mismatch,
    ValidationFailure,
}

impl Verdict {
    pub fn exit_code(self) -> u8 {
        match self {
            Verdict::Pass => 0,
            Verdict::Mismatch => 1,
            Verdict::ValidationFailure => 2,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Report {
    pub command: String,
    pub setup_echo: BTreeMap<String, String>,
    pub checks: Vec<Check>,
    pub tables: Vec<TableRow>,
    pub predicted: Vec<Predicted>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub hilbert: Option<Hilbert>,
    pub mismatches: Vec<Mismatch>,
    pub notices: Vec<String>,
    pub verdict: Verdict,
}

impl Report {
    pub fn new(command: &str, setup_echo: BTreeMap<String, String>) -> Self {
        Self {
            command: command.to_string(),
            setup_echo,
            checks: Vec::new(),
            tables: Vec::new(),
            predicted: Vec::new(),
            hilbert: None,
            mismatches: Vec::new(),
            notices: Vec::new(),
            verdict: Verdict::Pass,
        }
    }

    pub fn check(&mut self, name: &str, status: Status, detail: impl Into<String>) {
        self.checks.push(Check::new(name, status, detail));
    }

    /// `Mismatch` if any check failed or any cell disagreed, else `Pass`;
    /// a recorded validation failure is kept.
    pub fn finish(&mut self) {
        if self.verdict == Verdict::ValidationFailure {
            return;
        }
        let failed = self.checks.iter().any(|c| c.status == Status::Fail);
        self.verdict = if failed || !self.mismatches.is_empty() { Verdict::Mismatch } else { Verdict::Pass };
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "command: {}", self.command);
        for (k, v) in &self.setup_echo {
            let _ = writeln!(s, "setup.{k}: {v}");
        }
        for c in &self.checks {
            let _ = writeln!(s, "check {}: {} {}", c.name, c.status.label(), c.detail);
        }
        for p in &self.predicted {
            let _ = writeln!(
                s,
                "predicted {}: {:?} = {} (at t=1: {}, palindromic: {})",
                p.source, p.coefficients, p.factored, p.at_one, p.palindromic
            );
        }
        if let Some(h) = &self.hilbert {
            let _ = writeln!(s, "hilbert computed: {:?}", h.computed);
            let _ = writeln!(s, "hilbert expected: {:?}", h.expected);
            match h.first_failure {
                Some(k) => {
                    let _ = writeln!(s, "hilbert first failure: degree {k}");
                }
                None => {
                    let _ = writeln!(s, "hilbert first failure: none");
                }
            }
            if let Some(t) = h.dimension_target {
                let _ = writeln!(s, "hilbert dimension target: {t}");
            }
        }
        for r in &self.tables {
            let _ = write!(
                s,
                "table {} weight={:?} n={} k={} dim={} stable={}",
                r.table, r.weight, r.ghost_degree, r.bound, r.dim, r.stable
            );
            if let Some(e) = r.expected {
                let _ = write!(s, " expected={e}");
            }
            s.push('\n');
        }
        for m in &self.mismatches {
            let _ = writeln!(
                s,
                "mismatch {} weight={:?} n={} k={} got={} expected={}",
                m.table, m.weight, m.ghost_degree, m.bound, m.got, m.expected
            );
        }
        for n in &self.notices {
            let _ = writeln!(s, "notice: {n}");
        }
        let verdict = match self.verdict {
            Verdict::Pass => "pass",
            Verdict::Mismatch => "mismatch",
            Verdict::ValidationFailure => "validation-failure",
        };
        let _ = writeln!(s, "verdict: {verdict}");
        s
    }
}
