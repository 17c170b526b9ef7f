//! Certificates: one checked claim with both sides rendered exactly.

use std::fmt::Display;

use serde::Serialize;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Certificate {
    pub claim: String,
    pub lhs: String,
    pub rhs: String,
    pub relation: String,
    pub holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<String>,
}

impl Certificate {
    pub fn new(claim: &str, lhs: impl Display, relation: &str, rhs: impl Display, holds: bool) -> Self {
        Certificate {
            claim: claim.to_string(),
            lhs: lhs.to_string(),
            rhs: rhs.to_string(),
            relation: relation.to_string(),
            holds,
            witness: None,
        }
    }

    pub fn with_witness(mut self, w: impl Display) -> Self {
        self.witness = Some(w.to_string());
        self
    }
}
