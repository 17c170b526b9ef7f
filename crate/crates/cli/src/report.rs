//! The JSON document written for every invocation.

use std::collections::BTreeMap;
use std::fmt::Display;

use serde::Serialize;
use serde_json::Value;
use ultrametric::report::Certificate;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Outcome {
    Pass,
    Fail,
    Error,
}

impl Outcome {
    pub fn exit_code(self) -> i32 {
        match self {
            Outcome::Pass => 0,
            Outcome::Fail => 1,
            Outcome::Error => 2,
        }
    }
}

/// Field order is the serialization order; maps are sorted by key.
#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs: BTreeMap<String, String>,
    pub outcome: Outcome,
    pub certificates: Vec<Certificate>,
    pub result: BTreeMap<String, Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl Report {
    pub fn new(command: String) -> Self {
        Report {
            command,
            inputs: BTreeMap::new(),
            outcome: Outcome::Error,
            certificates: Vec::new(),
            result: BTreeMap::new(),
            error: None,
        }
    }

    pub fn input(&mut self, key: &str, value: impl Display) {
        self.inputs.insert(key.to_string(), value.to_string());
    }

    pub fn result(&mut self, key: &str, value: impl Into<Value>) {
        self.result.insert(key.to_string(), value.into());
    }

    pub fn text(&mut self, key: &str, value: impl Display) {
        self.result(key, value.to_string());
    }

    pub fn certify(&mut self, c: Certificate) {
        self.certificates.push(c);
    }

    /// `rendered` parsed back and compared with the original.
    pub fn round_trip(&mut self, what: &str, rendered: &str, back_equal: bool) {
        self.certify(Certificate::new(&format!("report/round-trip/{what}"), rendered, "reparses to", rendered, back_equal));
    }

    /// Sets the outcome from the certificates, or from `err`.
    pub fn finish(&mut self, err: Option<String>) {
        self.outcome = match err {
            Some(e) => {
                self.error = Some(e);
                Outcome::Error
            }
            None if self.certificates.is_empty() => {
                self.error = Some("no certificate was produced".into());
                Outcome::Error
            }
            None if self.certificates.iter().all(|c| c.holds) => Outcome::Pass,
            None => Outcome::Fail,
        };
    }
}
