//! Versioned JSON certificates.
//!
//! Everything except the `timing` object is a pure function of the request,
//! so re-running a request reproduces the certificate byte for byte once
//! `timing` is removed.

use std::collections::BTreeMap;

use ctp_core::families::CheckOutcome;
use ctp_core::tp::{LogConvexity, TPReport};
use ctp_core::Registry;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

/// Schema identifier written into every certificate.
pub const SCHEMA_VERSION: &str = "ctp-certificate/1";

/// What was asked for, with every polynomial in canonical text form.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Request {
    pub command: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty", default)]
    pub params: BTreeMap<String, String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub selector: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub matrix: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub size: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub order: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub log_convexity_level: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub nmax: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub max_minors: Option<u64>,
}

/// A failing minor, embedded verbatim.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct WitnessRecord {
    pub rows: Vec<usize>,
    pub cols: Vec<usize>,
    pub minor: String,
    pub offending_term: String,
}

/// One level of an iterated log-convexity check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LevelRecord {
    pub level: usize,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness_index: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub witness_value: Option<String>,
}

/// The payload of a verdict.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum VerdictBody {
    TpReport {
        order_checked: usize,
        size: usize,
        minors_checked: u64,
        #[serde(skip_serializing_if = "Option::is_none", default)]
        witness: Option<WitnessRecord>,
    },
    LogConvexity {
        requested: usize,
        highest_passing: usize,
        levels: Vec<LevelRecord>,
    },
    Identity {
        detail: String,
    },
}

/// A named check result.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Verdict {
    pub name: String,
    pub passed: bool,
    /// False for checks against literal transcriptions that are known to fail.
    pub expected: bool,
    #[serde(flatten)]
    pub body: VerdictBody,
}

impl Verdict {
    pub fn from_tp(name: &str, reg: &Registry, r: &TPReport) -> Self {
        Verdict {
            name: name.to_string(),
            passed: r.passed(),
            expected: true,
            body: VerdictBody::TpReport {
                order_checked: r.order_checked,
                size: r.size,
                minors_checked: r.minors_checked,
                witness: r.witness.as_ref().map(|w| WitnessRecord {
                    rows: w.rows.clone(),
                    cols: w.cols.clone(),
                    minor: reg.format(&w.minor),
                    offending_term: reg.format(&w.offending_term),
                }),
            },
        }
    }

    pub fn from_log_convexity(name: &str, reg: &Registry, lc: &LogConvexity) -> Self {
        Verdict {
            name: name.to_string(),
            passed: lc.passed(),
            expected: true,
            body: VerdictBody::LogConvexity {
                requested: lc.requested,
                highest_passing: lc.highest_passing,
                levels: lc
                    .levels
                    .iter()
                    .map(|l| LevelRecord {
                        level: l.level,
                        passed: l.passed,
                        witness_index: l.witness.as_ref().map(|w| w.0),
                        witness_value: l.witness.as_ref().map(|w| reg.format(&w.1)),
                    })
                    .collect(),
            },
        }
    }

    pub fn from_outcome(o: &CheckOutcome) -> Self {
        Verdict {
            name: o.name.clone(),
            passed: o.passed,
            expected: o.expected,
            body: VerdictBody::Identity {
                detail: o.detail.clone(),
            },
        }
    }
}

/// Wall-clock information; the only nondeterministic part of a certificate.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Timing {
    pub elapsed_ms: f64,
    pub workers: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub version: String,
    pub request: Request,
    /// The resolved input sequence, when the command checks a sequence.
    #[serde(skip_serializing_if = "Vec::is_empty", default)]
    pub input: Vec<String>,
    /// SHA-256 of the canonical JSON of `request` and `input`.
    pub input_sha256: String,
    pub passed: bool,
    pub verdicts: Vec<Verdict>,
    pub timing: Timing,
}

/// SHA-256 over the canonical serialization of the request and input.
pub fn input_hash(request: &Request, input: &[String]) -> String {
    let canonical = serde_json::to_string(&(request, input)).expect("request serializes");
    hex::encode(Sha256::digest(canonical.as_bytes()))
}

impl Certificate {
    pub fn new(request: Request, input: Vec<String>, verdicts: Vec<Verdict>, timing: Timing) -> Self {
        let input_sha256 = input_hash(&request, &input);
        let passed = verdicts.iter().all(|v| v.passed);
        Certificate {
            version: SCHEMA_VERSION.to_string(),
            request,
            input,
            input_sha256,
            passed,
            verdicts,
            timing,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("certificate serializes");
        s.push('\n');
        s
    }

    /// The certificate without its timing object, as canonical JSON.
    pub fn deterministic_json(&self) -> String {
        let mut v = serde_json::to_value(self).expect("certificate serializes");
        if let Some(obj) = v.as_object_mut() {
            obj.remove("timing");
        }
        serde_json::to_string(&v).expect("value serializes")
    }
}
