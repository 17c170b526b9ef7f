//! The scalar interface shared by `Q_p` and the Eisenstein tower, so that
//! polynomials, linear algebra and sequence models are written once.

use std::fmt::{Debug, Display};

use num_rational::BigRational;

use crate::error::Result;
use crate::padic::PadicNumber;
use crate::valcore::{NormValue, ValBound};

pub trait Scalar: Clone + Debug + Display {
    fn prime(&self) -> u64;
    fn zero_like(&self) -> Self;
    fn one_like(&self) -> Self;
    fn from_rational_like(&self, q: &BigRational) -> Self;
    fn try_add(&self, other: &Self) -> Result<Self>;
    fn try_sub(&self, other: &Self) -> Result<Self>;
    fn try_mul(&self, other: &Self) -> Result<Self>;
    fn try_div(&self, other: &Self) -> Result<Self>;
    fn negate(&self) -> Self;
    fn val_bound(&self) -> ValBound;
    /// Residue class in the residue field `F_p` of an integral element.
    fn residue(&self) -> Result<u64>;
    /// True when no known digit is nonzero.
    fn is_zero_at_precision(&self) -> bool;

    fn norm(&self) -> Result<NormValue> {
        Ok(NormValue::new(self.prime(), self.val_bound().certified("scalar")?))
    }
}

impl Scalar for PadicNumber {
    fn prime(&self) -> u64 {
        PadicNumber::prime(self)
    }
    fn zero_like(&self) -> Self {
        PadicNumber::zero(self.prime(), self.cap())
    }
    fn one_like(&self) -> Self {
        PadicNumber::one(self.prime(), self.cap())
    }
    fn from_rational_like(&self, q: &BigRational) -> Self {
        PadicNumber::from_rational(self.prime(), q, self.cap())
    }
    fn try_add(&self, other: &Self) -> Result<Self> {
        PadicNumber::try_add(self, other)
    }
    fn try_sub(&self, other: &Self) -> Result<Self> {
        PadicNumber::try_sub(self, other)
    }
    fn try_mul(&self, other: &Self) -> Result<Self> {
        PadicNumber::try_mul(self, other)
    }
    fn try_div(&self, other: &Self) -> Result<Self> {
        PadicNumber::try_div(self, other)
    }
    fn negate(&self) -> Self {
        -self
    }
    fn val_bound(&self) -> ValBound {
        PadicNumber::val_bound(self)
    }
    fn residue(&self) -> Result<u64> {
        PadicNumber::residue(self)
    }
    fn is_zero_at_precision(&self) -> bool {
        PadicNumber::is_zero_at_precision(self)
    }
}
