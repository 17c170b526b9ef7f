//! Exact ultrametric analysis over `Q_p` and its pure Eisenstein tower.

pub mod ballcalc;
pub mod counterexample;
pub mod eisenstein;
pub mod error;
pub mod gen;
pub mod harness;
pub mod linalg;
pub mod padic;
pub mod polynomial;
pub mod report;
pub mod scalar;
pub mod seqmodel;
mod text;
pub mod valcore;

pub use error::{Error, Result};
pub use padic::{PadicNumber, Qp};
pub use scalar::Scalar;
pub use valcore::{NormValue, Radius, ValBound, Valuation};
