use std::fmt::Write as _;

use serde::Serialize;

use crate::config::RunConfig;
use crate::error::Result;
use crate::innerfn::PathProfile;

pub const SCHEMA: &str = "slitdisk-report/1";

/// The part of the argument a check supports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Anchor {
    /// Thinness of the factorial sequence and the product bounds behind it.
    ThinnessCriterion,
    /// Finitely many preimages on the segment, infinitely many in the disk.
    SegmentArgumentCount,
    /// Finite off-axis zero sets through a product with monotone argument.
    FiniteProductVariant,
    /// The inner part of `phi` is a single Möbius factor.
    InnerPartArgument,
    /// Replacing `1/n!` by any thin sequence on `[0, 1)`.
    ThinGeneralization,
}

impl Anchor {
    pub fn tag(&self) -> &'static str {
        match self {
            Anchor::ThinnessCriterion => "thinness-criterion",
            Anchor::SegmentArgumentCount => "segment-argument-count",
            Anchor::FiniteProductVariant => "finite-product-variant",
            Anchor::InnerPartArgument => "inner-part-argument",
            Anchor::ThinGeneralization => "thin-generalization",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Value {
    pub label: String,
    pub value: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub anchor: Anchor,
    pub values: Vec<Value>,
    pub threshold: f64,
    pub pass: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Check {
    pub fn new(name: impl Into<String>, anchor: Anchor, threshold: f64) -> Self {
        Self { name: name.into(), anchor, values: Vec::new(), threshold, pass: false, error: None }
    }

    pub fn value(mut self, label: impl Into<String>, value: f64) -> Self {
        self.values.push(Value { label: label.into(), value });
        self
    }

    pub fn push(&mut self, label: impl Into<String>, value: f64) {
        self.values.push(Value { label: label.into(), value });
    }

    pub fn with_pass(mut self, pass: bool) -> Self {
        self.pass = pass;
        self
    }

    /// Runs `body`; an error is recorded and fails the check.
    pub fn run(name: impl Into<String>, anchor: Anchor, threshold: f64, body: impl FnOnce(&mut Check) -> Result<bool>) -> Self {
        let mut check = Check::new(name, anchor, threshold);
        match body(&mut check) {
            Ok(pass) => check.pass = pass,
            Err(e) => {
                check.pass = false;
                check.error = Some(e.to_string());
            }
        }
        check
    }
}

/// A labelled path profile for the CSV export.
#[derive(Clone, Debug, PartialEq)]
pub struct Profile {
    pub label: String,
    pub profile: PathProfile,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct VerificationReport {
    pub schema: &'static str,
    pub seed: u64,
    pub config: RunConfig,
    pub checks: Vec<Check>,
    pub pass: bool,
    #[serde(skip)]
    pub profiles: Vec<Profile>,
}

impl VerificationReport {
    /// Merges checks in name order so the result is independent of the order
    /// they finished in.
    pub fn new(config: &RunConfig, mut checks: Vec<Check>, mut profiles: Vec<Profile>) -> Self {
        checks.sort_by(|a, b| a.name.cmp(&b.name));
        profiles.sort_by(|a, b| a.label.cmp(&b.label));
        let pass = !checks.is_empty() && checks.iter().all(|c| c.pass);
        Self { schema: SCHEMA, seed: config.seed, config: config.clone(), checks, pass, profiles }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("profile,eps,theta,modulus,arg\n");
        for p in &self.profiles {
            p.profile.to_csv_rows(&p.label, &mut out);
        }
        out
    }

    pub fn to_table(&self) -> String {
        let width = self.checks.iter().map(|c| c.name.len()).max().unwrap_or(4).max(4);
        let mut out = String::new();
        writeln!(out, "{:<width$}  {:<22}  {:<4}  {:>10}  values", "name", "anchor", "pass", "threshold").unwrap();
        for c in &self.checks {
            let values = c
                .values
                .iter()
                .take(4)
                .map(|v| format!("{}={:.6e}", v.label, v.value))
                .collect::<Vec<_>>()
                .join(" ");
            let more = if c.values.len() > 4 { format!(" (+{})", c.values.len() - 4) } else { String::new() };
            let err = c.error.as_deref().map(|e| format!(" error: {e}")).unwrap_or_default();
            writeln!(
                out,
                "{:<width$}  {:<22}  {:<4}  {:>10.3e}  {values}{more}{err}",
                c.name,
                c.anchor.tag(),
                if c.pass { "ok" } else { "FAIL" },
                c.threshold
            )
            .unwrap();
        }
        writeln!(
            out,
            "{} of {} checks passed (seed {})",
            self.checks.iter().filter(|c| c.pass).count(),
            self.checks.len(),
            self.seed
        )
        .unwrap();
        out
    }
}
