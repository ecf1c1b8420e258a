//! Seeded verification campaigns and their reports.
//!
//! A campaign evaluates a list of suites. Each suite draws `samples`
//! independent samples (sample `i` of suite `s` uses its own generator
//! derived from the seed, `s` and `i`) and records one [`Check`] per
//! verified relation. Samples run in parallel; reports are assembled in
//! sample order, so identical campaigns produce identical bytes.

mod suites;

use std::fmt::Write as _;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::exterior::KForm;

pub const SUITE_NAMES: [&str; 8] = ["appendixA", "appendixB", "thmC1", "propD1", "corD2", "dhym", "product", "torus"];

/// Failing inputs kept per suite.
pub const WITNESS_CAP: usize = 5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Suite {
    /// Hodge star identities in dimensions 6, 7, 8.
    AppendixA,
    /// G2 identities, projections, wedge injectivity.
    AppendixB,
    /// Closed-form Hodge dual of the induced structure on solutions.
    ThmC1,
    /// Decomposed residual against the direct one.
    PropD1,
    /// Norm bounds on solutions.
    CorD2,
    /// Kähler radius/angle identities and the symbol bound.
    Dhym,
    /// dDT on the product against dHYM with phase one.
    Product,
    /// Harmonic dimensions and adjoint identity on the flat torus.
    Torus,
}

impl Suite {
    pub const ALL: [Suite; 8] = [
        Suite::AppendixA,
        Suite::AppendixB,
        Suite::ThmC1,
        Suite::PropD1,
        Suite::CorD2,
        Suite::Dhym,
        Suite::Product,
        Suite::Torus,
    ];

    pub fn name(self) -> &'static str {
        SUITE_NAMES[Suite::ALL.iter().position(|&s| s == self).unwrap()]
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SUITE_NAMES
            .iter()
            .position(|&n| n == s)
            .map(|i| Suite::ALL[i])
            .ok_or_else(|| Error::UnknownSuite(s.to_string()))
    }
}

/// Parse a list of suite names; an empty list selects every suite.
pub fn parse_suites<S: AsRef<str>>(names: &[S]) -> Result<Vec<Suite>> {
    if names.is_empty() {
        return Ok(Suite::ALL.to_vec());
    }
    names.iter().map(|n| n.as_ref().parse()).collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct Campaign {
    pub seed: u64,
    pub samples: usize,
    /// Bound for identities that hold to rounding.
    pub tol_rel: f64,
    /// Bound for comparisons between independent pipelines.
    pub tol_identity: f64,
    pub suites: Vec<Suite>,
    /// Largest Fourier cutoff of the torus suite; all cutoffs from 1 up are run.
    pub torus_cutoff: usize,
}

impl Default for Campaign {
    fn default() -> Self {
        Self { seed: 0, samples: 1000, tol_rel: 1e-9, tol_identity: 1e-8, suites: Suite::ALL.to_vec(), torus_cutoff: 3 }
    }
}

/// One verified relation on one sample. It passes when `residual` is
/// finite and at most `limit`.
#[derive(Clone, Debug)]
pub struct Check {
    pub name: &'static str,
    pub residual: f64,
    pub limit: f64,
    pub inputs: Vec<KForm>,
}

impl Check {
    pub fn new(name: &'static str, residual: f64, limit: f64) -> Self {
        Self { name, residual, limit, inputs: Vec::new() }
    }

    pub fn with_inputs(mut self, inputs: &[&KForm]) -> Self {
        self.inputs = inputs.iter().map(|f| (*f).clone()).collect();
        self
    }

    /// A boolean condition, recorded as residual 0 or 1.
    pub fn condition(name: &'static str, ok: bool) -> Self {
        Self::new(name, if ok { 0.0 } else { 1.0 }, 0.0)
    }

    pub fn passed(&self) -> bool {
        self.residual.is_finite() && self.residual <= self.limit
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Witness {
    /// `None` for checks that do not depend on a sample.
    pub sample: Option<u64>,
    pub check: String,
    pub residual: f64,
    pub inputs: Vec<KForm>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Report {
    pub suite: String,
    pub passed: usize,
    pub failed: usize,
    pub worst_residual: f64,
    pub witnesses: Vec<Witness>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub summary: Option<serde_json::Value>,
}

impl Report {
    fn from_checks(
        suite: Suite,
        fixed: Vec<Check>,
        per_sample: Vec<Vec<Check>>,
        summary: Option<serde_json::Value>,
    ) -> Self {
        let mut report = Report {
            suite: suite.name().to_string(),
            passed: 0,
            failed: 0,
            worst_residual: 0.0,
            witnesses: Vec::new(),
            summary,
        };
        let tagged = std::iter::once((None, fixed))
            .chain(per_sample.into_iter().enumerate().map(|(i, c)| (Some(i as u64), c)));
        for (sample, checks) in tagged {
            for c in checks {
                // NaN counts as worst.
                let r = if c.residual.is_nan() { f64::INFINITY } else { c.residual };
                report.worst_residual = report.worst_residual.max(r);
                if c.passed() {
                    report.passed += 1;
                } else {
                    report.failed += 1;
                    if report.witnesses.len() < WITNESS_CAP {
                        report.witnesses.push(Witness {
                            sample,
                            check: c.name.to_string(),
                            residual: c.residual,
                            inputs: c.inputs,
                        });
                    }
                }
            }
        }
        report
    }

    pub fn ok(&self) -> bool {
        self.failed == 0
    }
}

/// Context handed to every sample of a suite.
pub(crate) struct SuiteContext<'a> {
    pub campaign: &'a Campaign,
    pub suite: Suite,
}

impl SuiteContext<'_> {
    pub fn rng(&self, index: u64) -> crate::sampling::SampleRng {
        crate::sampling::sample_rng(self.campaign.seed, self.suite.name(), index)
    }
}

fn run_suite(campaign: &Campaign, suite: Suite) -> Report {
    let ctx = SuiteContext { campaign, suite };
    let setup = suites::setup(&ctx);
    let sample = setup.sample;
    let per_sample: Vec<Vec<Check>> =
        (0..campaign.samples as u64).into_par_iter().map(|i| sample(&ctx, i)).collect();
    Report::from_checks(suite, setup.fixed, per_sample, setup.summary)
}

/// Execute every suite of the campaign; reports come back in the order the
/// suites were requested.
pub fn run(campaign: &Campaign) -> Vec<Report> {
    campaign.suites.par_iter().map(|&s| run_suite(campaign, s)).collect()
}

pub fn all_passed(reports: &[Report]) -> bool {
    reports.iter().all(Report::ok)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Text,
}

impl FromStr for Format {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "json" => Ok(Format::Json),
            "text" => Ok(Format::Text),
            other => Err(Error::Contract(format!("unknown format '{other}', expected json or text"))),
        }
    }
}

/// Render reports. JSON is an array of report objects; text is one line
/// per suite followed by its witnesses.
pub fn emit(reports: &[Report], format: Format) -> String {
    match format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(reports).expect("reports serialise");
            s.push('\n');
            s
        }
        Format::Text => {
            let mut out = String::new();
            for r in reports {
                let status = if r.ok() { "PASS" } else { "FAIL" };
                let _ = writeln!(
                    out,
                    "{:<10} {status}  passed={} failed={} worst_residual={:.3e}",
                    r.suite, r.passed, r.failed, r.worst_residual
                );
                for w in &r.witnesses {
                    let at = w.sample.map_or_else(|| "fixed".to_string(), |i| format!("sample {i}"));
                    let _ = writeln!(out, "    {at} {}: residual {:.3e}", w.check, w.residual);
                }
                if let Some(summary) = &r.summary {
                    let _ = writeln!(out, "    {summary}");
                }
            }
            let failed = reports.iter().filter(|r| !r.ok()).count();
            let _ = writeln!(out, "{} suites, {} failed", reports.len(), failed);
            out
        }
    }
}
