use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, AddAssign, Mul, MulAssign, Neg, Sub, SubAssign};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::de::{self, MapAccess, Visitor};
use serde::ser::SerializeMap;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An element of Z[t, t⁻¹].
///
/// Coefficients live in a map keyed by exponent. A zero coefficient is never
/// stored, so the zero polynomial is the empty map and structural equality is
/// polynomial equality.
#[derive(Clone, Default, PartialEq, Eq, Hash)]
pub struct LaurentPoly {
    coeffs: BTreeMap<i64, BigInt>,
}

impl LaurentPoly {
    pub fn zero() -> Self {
        LaurentPoly::default()
    }

    pub fn one() -> Self {
        LaurentPoly::constant(1)
    }

    /// The indeterminate `t`.
    pub fn t() -> Self {
        LaurentPoly::monomial(1, 1)
    }

    /// `z = (1 - t)(1 - t⁻¹) = 2 - t - t⁻¹`.
    pub fn z() -> Self {
        LaurentPoly::from_terms([(-1, -1), (0, 2), (1, -1)])
    }

    pub fn constant(c: impl Into<BigInt>) -> Self {
        LaurentPoly::monomial(0, c)
    }

    /// `c · t^exp`.
    pub fn monomial(exp: i64, c: impl Into<BigInt>) -> Self {
        let c = c.into();
        let mut coeffs = BTreeMap::new();
        if !c.is_zero() {
            coeffs.insert(exp, c);
        }
        LaurentPoly { coeffs }
    }

    /// Builds a polynomial from `(exponent, coefficient)` pairs. Repeated
    /// exponents are summed.
    pub fn from_terms<C: Into<BigInt>>(terms: impl IntoIterator<Item = (i64, C)>) -> Self {
        let mut coeffs: BTreeMap<i64, BigInt> = BTreeMap::new();
        for (e, c) in terms {
            *coeffs.entry(e).or_default() += c.into();
        }
        coeffs.retain(|_, c| !c.is_zero());
        LaurentPoly { coeffs }
    }

    /// Builds `Σ coeffs[i] · t^(low + i)`.
    ///
    /// ```
    /// use accessory::laurent::LaurentPoly;
    /// let p = LaurentPoly::from_dense(-1, &[-1, 1, -1]);
    /// assert_eq!(p.to_string(), "-t + 1 - t^-1");
    /// ```
    pub fn from_dense(low: i64, coeffs: &[i64]) -> Self {
        LaurentPoly::from_terms(coeffs.iter().enumerate().map(|(i, &c)| (low + i as i64, c)))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.get(&0).is_some_and(|c| c.is_one())
    }

    /// Number of nonzero terms.
    pub fn len(&self) -> usize {
        self.coeffs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn coeff(&self, exp: i64) -> BigInt {
        self.coeffs.get(&exp).cloned().unwrap_or_default()
    }

    /// Nonzero terms in increasing exponent order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (i64, &BigInt)> + '_ {
        self.coeffs.iter().map(|(&e, c)| (e, c))
    }

    pub fn min_exp(&self) -> Option<i64> {
        self.coeffs.keys().next().copied()
    }

    pub fn max_exp(&self) -> Option<i64> {
        self.coeffs.keys().next_back().copied()
    }

    /// The ring involution `t ↦ t⁻¹`.
    pub fn involute(&self) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, c)| (-e, c.clone())).collect(),
        }
    }

    /// Multiplication by `t^k`.
    pub fn shift(&self, k: i64) -> Self {
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, c)| (e + k, c.clone())).collect(),
        }
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return LaurentPoly::zero();
        }
        LaurentPoly {
            coeffs: self.coeffs.iter().map(|(&e, x)| (e, x * c)).collect(),
        }
    }

    /// Exact value at `t = n` for `n = ±1`; other points are rejected because
    /// `t⁻¹` is not an integer there.
    pub fn eval_int(&self, n: i64) -> Result<BigInt> {
        match n {
            1 => Ok(self.coeffs.values().sum()),
            -1 => Ok(self
                .coeffs
                .iter()
                .map(|(e, c)| if e.is_odd() { -c } else { c.clone() })
                .sum()),
            _ => Err(Error::Domain(format!(
                "Laurent polynomials are only evaluated at t = 1 or t = -1, not t = {n}"
            ))),
        }
    }

    /// The representative of `{±t^k · self}` whose lowest exponent is 0 and
    /// whose lowest coefficient is positive.
    ///
    /// ```
    /// use accessory::laurent::LaurentPoly;
    /// let trefoil = LaurentPoly::from_dense(-1, &[-1, 1, -1]);
    /// assert_eq!(trefoil.normalize_unit(), LaurentPoly::from_dense(0, &[1, -1, 1]));
    /// ```
    pub fn normalize_unit(&self) -> Self {
        let Some((&low, lead)) = self.coeffs.iter().next() else {
            return LaurentPoly::zero();
        };
        let negate = lead.is_negative();
        LaurentPoly {
            coeffs: self
                .coeffs
                .iter()
                .map(|(&e, c)| (e - low, if negate { -c } else { c.clone() }))
                .collect(),
        }
    }

    pub fn equal_up_to_unit(&self, other: &LaurentPoly) -> bool {
        self.normalize_unit() == other.normalize_unit()
    }

    /// True for `±t^k`.
    pub fn is_unit(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs.values().next().unwrap().abs().is_one()
    }

    /// Returns `q` with `q · divisor = self`, or `None` when no Laurent
    /// polynomial with integer coefficients does that.
    pub fn div_exact(&self, divisor: &LaurentPoly) -> Option<LaurentPoly> {
        let d_low = divisor.min_exp()?;
        let Some(n_low) = self.min_exp() else {
            return Some(LaurentPoly::zero());
        };
        if divisor.len() == 1 {
            let (_, dc) = divisor.terms().next().unwrap();
            let mut coeffs = BTreeMap::new();
            for (e, c) in self.terms() {
                let (q, r) = c.div_rem(dc);
                if !r.is_zero() {
                    return None;
                }
                coeffs.insert(e - d_low, q);
            }
            return Some(LaurentPoly { coeffs });
        }
        let num = self.dense_from(n_low);
        let den = divisor.dense_from(d_low);
        if num.len() < den.len() {
            return None;
        }
        let dd = den.len() - 1;
        let lead = &den[dd];
        let mut rem = num;
        let mut quot = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..quot.len()).rev() {
            let c = &rem[i + dd];
            if c.is_zero() {
                continue;
            }
            let (q, r) = c.div_rem(lead);
            if !r.is_zero() {
                return None;
            }
            for (j, dj) in den.iter().enumerate() {
                if !dj.is_zero() {
                    rem[i + j] -= &q * dj;
                }
            }
            quot[i] = q;
        }
        if rem.iter().any(|c| !c.is_zero()) {
            return None;
        }
        Some(LaurentPoly::from_dense_big(n_low - d_low, quot))
    }

    fn dense_from(&self, low: i64) -> Vec<BigInt> {
        let high = self.max_exp().unwrap_or(low);
        let mut v = vec![BigInt::zero(); (high - low + 1) as usize];
        for (e, c) in self.terms() {
            v[(e - low) as usize] = c.clone();
        }
        v
    }

    fn from_dense_big(low: i64, coeffs: Vec<BigInt>) -> Self {
        LaurentPoly {
            coeffs: coeffs
                .into_iter()
                .enumerate()
                .filter(|(_, c)| !c.is_zero())
                .map(|(i, c)| (low + i as i64, c))
                .collect(),
        }
    }

    fn add_scaled(&mut self, other: &LaurentPoly, negate: bool) {
        for (&e, c) in &other.coeffs {
            let entry = self.coeffs.entry(e).or_default();
            if negate {
                *entry -= c;
            } else {
                *entry += c;
            }
            if entry.is_zero() {
                self.coeffs.remove(&e);
            }
        }
    }

    fn product(&self, other: &LaurentPoly) -> LaurentPoly {
        let (Some(a_low), Some(b_low)) = (self.min_exp(), other.min_exp()) else {
            return LaurentPoly::zero();
        };
        if self.len() == 1 || other.len() == 1 {
            let (mono, poly) = if self.len() == 1 { (self, other) } else { (other, self) };
            let (e, c) = mono.terms().next().unwrap();
            return poly.scale(c).shift(e);
        }
        let span = (self.max_exp().unwrap() - a_low) + (other.max_exp().unwrap() - b_low) + 1;
        let mut acc = vec![BigInt::zero(); span as usize];
        for (ea, ca) in self.terms() {
            for (eb, cb) in other.terms() {
                acc[((ea - a_low) + (eb - b_low)) as usize] += ca * cb;
            }
        }
        LaurentPoly::from_dense_big(a_low + b_low, acc)
    }
}

impl fmt::Debug for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentPoly({self})")
    }
}

/// Highest exponent first, e.g. `t^2 - 3t + 1 - 2t^-1`.
impl fmt::Display for LaurentPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (i, (&e, c)) in self.coeffs.iter().rev().enumerate() {
            let mag = c.abs();
            match (i, c.is_negative()) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            if e == 0 {
                write!(f, "{mag}")?;
                continue;
            }
            if !mag.is_one() {
                write!(f, "{mag}")?;
            }
            match e {
                1 => f.write_str("t")?,
                _ => write!(f, "t^{e}")?,
            }
        }
        Ok(())
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident, $body:expr) => {
        impl $trait<&LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                let f: fn(&LaurentPoly, &LaurentPoly) -> LaurentPoly = $body;
                f(self, rhs)
            }
        }
        impl $trait<LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                (&self).$method(&rhs)
            }
        }
        impl $trait<&LaurentPoly> for LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: &LaurentPoly) -> LaurentPoly {
                (&self).$method(rhs)
            }
        }
        impl $trait<LaurentPoly> for &LaurentPoly {
            type Output = LaurentPoly;
            fn $method(self, rhs: LaurentPoly) -> LaurentPoly {
                self.$method(&rhs)
            }
        }
    };
}

forward_binop!(Add, add, |a, b| {
    let mut out = a.clone();
    out.add_scaled(b, false);
    out
});
forward_binop!(Sub, sub, |a, b| {
    let mut out = a.clone();
    out.add_scaled(b, true);
    out
});
forward_binop!(Mul, mul, |a, b| a.product(b));

impl AddAssign<&LaurentPoly> for LaurentPoly {
    fn add_assign(&mut self, rhs: &LaurentPoly) {
        self.add_scaled(rhs, false);
    }
}

impl AddAssign for LaurentPoly {
    fn add_assign(&mut self, rhs: LaurentPoly) {
        self.add_scaled(&rhs, false);
    }
}

impl SubAssign<&LaurentPoly> for LaurentPoly {
    fn sub_assign(&mut self, rhs: &LaurentPoly) {
        self.add_scaled(rhs, true);
    }
}

impl SubAssign for LaurentPoly {
    fn sub_assign(&mut self, rhs: LaurentPoly) {
        self.add_scaled(&rhs, true);
    }
}

impl MulAssign<&LaurentPoly> for LaurentPoly {
    fn mul_assign(&mut self, rhs: &LaurentPoly) {
        *self = self.product(rhs);
    }
}

impl Neg for LaurentPoly {
    type Output = LaurentPoly;
    fn neg(mut self) -> LaurentPoly {
        for c in self.coeffs.values_mut() {
            *c = -std::mem::take(c);
        }
        self
    }
}

impl Neg for &LaurentPoly {
    type Output = LaurentPoly;
    fn neg(self) -> LaurentPoly {
        -self.clone()
    }
}

impl Zero for LaurentPoly {
    fn zero() -> Self {
        LaurentPoly::zero()
    }
    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl One for LaurentPoly {
    fn one() -> Self {
        LaurentPoly::one()
    }
}

impl std::iter::Sum for LaurentPoly {
    fn sum<I: Iterator<Item = LaurentPoly>>(iter: I) -> Self {
        iter.fold(LaurentPoly::zero(), |acc, p| acc + p)
    }
}

impl From<i64> for LaurentPoly {
    fn from(c: i64) -> Self {
        LaurentPoly::constant(c)
    }
}

impl From<BigInt> for LaurentPoly {
    fn from(c: BigInt) -> Self {
        LaurentPoly::constant(c)
    }
}

// JSON form: {"-1": -1, "0": 1, "1": -1}. Coefficients that do not fit in an
// i64 are written as decimal strings so that no precision is lost.
impl Serialize for LaurentPoly {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        let mut map = serializer.serialize_map(Some(self.coeffs.len()))?;
        for (e, c) in &self.coeffs {
            match c.to_i64() {
                Some(small) => map.serialize_entry(&e.to_string(), &small)?,
                None => map.serialize_entry(&e.to_string(), &c.to_string())?,
            }
        }
        map.end()
    }
}

#[derive(Deserialize)]
#[serde(untagged)]
enum JsonCoeff {
    Int(i64),
    Big(String),
}

impl<'de> Deserialize<'de> for LaurentPoly {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct PolyVisitor;

        impl<'de> Visitor<'de> for PolyVisitor {
            type Value = LaurentPoly;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("an object mapping exponent strings to integer coefficients")
            }

            fn visit_map<A: MapAccess<'de>>(self, mut access: A) -> Result<LaurentPoly, A::Error> {
                let mut terms = Vec::new();
                while let Some((key, value)) = access.next_entry::<String, JsonCoeff>()? {
                    let exp: i64 = key
                        .trim()
                        .parse()
                        .map_err(|_| de::Error::custom(format!("bad exponent {key:?}")))?;
                    let coeff = match value {
                        JsonCoeff::Int(c) => BigInt::from(c),
                        JsonCoeff::Big(s) => s
                            .parse::<BigInt>()
                            .map_err(|_| de::Error::custom(format!("bad coefficient {s:?}")))?,
                    };
                    terms.push((exp, coeff));
                }
                Ok(LaurentPoly::from_terms(terms))
            }
        }

        deserializer.deserialize_map(PolyVisitor)
    }
}
