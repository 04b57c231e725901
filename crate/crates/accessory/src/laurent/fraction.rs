use std::fmt;

use serde::Serialize;

use super::LaurentPoly;
use crate::error::{Error, Result};

/// An element `num / den` of Q(t).
///
/// Fractions are never reduced; two fractions are equal when their
/// cross-products agree.
#[derive(Clone, Serialize)]
pub struct RationalFraction {
    num: LaurentPoly,
    den: LaurentPoly,
}

impl RationalFraction {
    pub fn new(num: LaurentPoly, den: LaurentPoly) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        Ok(RationalFraction { num, den })
    }

    pub fn from_poly(p: LaurentPoly) -> Self {
        RationalFraction { num: p, den: LaurentPoly::one() }
    }

    pub fn zero() -> Self {
        Self::from_poly(LaurentPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(LaurentPoly::one())
    }

    pub fn num(&self) -> &LaurentPoly {
        &self.num
    }

    pub fn den(&self) -> &LaurentPoly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, other: &RationalFraction) -> RationalFraction {
        if self.den == other.den {
            return RationalFraction { num: &self.num + &other.num, den: self.den.clone() };
        }
        RationalFraction {
            num: &(&self.num * &other.den) + &(&other.num * &self.den),
            den: &self.den * &other.den,
        }
    }

    pub fn sub(&self, other: &RationalFraction) -> RationalFraction {
        self.add(&other.neg())
    }

    pub fn neg(&self) -> RationalFraction {
        RationalFraction { num: -&self.num, den: self.den.clone() }
    }

    pub fn mul(&self, other: &RationalFraction) -> RationalFraction {
        RationalFraction { num: &self.num * &other.num, den: &self.den * &other.den }
    }

    pub fn mul_poly(&self, p: &LaurentPoly) -> RationalFraction {
        RationalFraction { num: &self.num * p, den: self.den.clone() }
    }

    pub fn invert(&self) -> Result<RationalFraction> {
        RationalFraction::new(self.den.clone(), self.num.clone())
    }

    pub fn involute(&self) -> RationalFraction {
        RationalFraction { num: self.num.involute(), den: self.den.involute() }
    }

    /// Whether the fraction lies in Z[t, t⁻¹], i.e. whether `den` divides
    /// `num` exactly.
    pub fn is_integral(&self) -> bool {
        self.num.div_exact(&self.den).is_some()
    }

    /// The Laurent polynomial equal to this fraction, if there is one.
    pub fn to_laurent(&self) -> Option<LaurentPoly> {
        self.num.div_exact(&self.den)
    }

    /// Cancels the fraction down when the denominator is a unit or divides
    /// the numerator; otherwise returns it unchanged.
    pub fn simplify(&self) -> RationalFraction {
        self.to_laurent().map_or_else(|| self.clone(), RationalFraction::from_poly)
    }
}

impl PartialEq for RationalFraction {
    fn eq(&self, other: &Self) -> bool {
        &self.num * &other.den == &other.num * &self.den
    }
}

impl Eq for RationalFraction {}

impl fmt::Debug for RationalFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFraction({self})")
    }
}

impl fmt::Display for RationalFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            return write!(f, "{}", self.num);
        }
        write!(f, "({}) / ({})", self.num, self.den)
    }
}
