//! Truncated Laurent series over F_q, i.e. elements of the complete field
//! F_q((t)) known modulo O(t^N).
//!
//! Every series carries its own absolute precision `N`. Binary operations
//! return the largest precision that is guaranteed correct:
//!
//! * add/sub: `min(N_a, N_b)`
//! * mul: `min(v_a + N_b, v_b + N_a)`
//! * inverse of a series of valuation `m`: `N - 2m`
//! * Frobenius: `p * N`
//!
//! A series whose known coefficients all vanish is *zero to precision*; it is
//! never treated as exact zero and its valuation is reported as
//! [`SeriesValuation::BelowPrecision`].

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::finite_field::{Field, Fq, FqElem};
use crate::value::Value;

/// Precision used when none is given.
pub const DEFAULT_PREC: i64 = 64;

/// The valuation of a truncated series.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum SeriesValuation {
    Finite(i64),
    /// All known coefficients vanish: the valuation is at least N.
    BelowPrecision(i64),
}

impl SeriesValuation {
    pub fn finite(&self) -> Option<i64> {
        match *self {
            SeriesValuation::Finite(v) => Some(v),
            SeriesValuation::BelowPrecision(_) => None,
        }
    }

    /// A lower bound for the true valuation.
    pub fn lower_bound(&self) -> i64 {
        match *self {
            SeriesValuation::Finite(v) | SeriesValuation::BelowPrecision(v) => v,
        }
    }

    pub fn to_value(&self) -> Option<Value> {
        self.finite().map(Value::int)
    }
}

impl fmt::Display for SeriesValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SeriesValuation::Finite(v) => write!(f, "{v}"),
            SeriesValuation::BelowPrecision(n) => write!(f, ">={n}"),
        }
    }
}

impl Serialize for SeriesValuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            SeriesValuation::Finite(v) => s.serialize_i64(*v),
            other => s.serialize_str(&other.to_string()),
        }
    }
}

/// Σ_{k ≥ v0} a_k t^k + O(t^prec).
#[derive(Clone, PartialEq, Eq)]
pub struct LaurentSeries {
    field: Field,
    /// Valuation offset; equals `prec` in the zero-to-precision state.
    v0: i64,
    /// Coefficients of t^{v0}, t^{v0+1}, ..., t^{prec-1}; leading entry nonzero.
    coeffs: Vec<Fq>,
    prec: i64,
}

#[allow(clippy::should_implement_trait)]
impl LaurentSeries {
    /// Builds a series from raw coefficients starting at t^{v0}; drops
    /// leading zeros and everything at or beyond t^prec.
    pub(crate) fn from_raw(field: &Field, v0: i64, mut coeffs: Vec<Fq>, prec: i64) -> Self {
        let known = (prec - v0).max(0) as usize;
        coeffs.truncate(known);
        // canonical form: no trailing zeros either, so derived equality is
        // equality of known coefficients
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        let lead = coeffs.iter().position(|c| !c.is_zero());
        match lead {
            None => LaurentSeries::zero(field, prec),
            Some(k) => {
                coeffs.drain(..k);
                LaurentSeries {
                    field: field.clone(),
                    v0: v0 + k as i64,
                    coeffs,
                    prec,
                }
            }
        }
    }

    /// 0 + O(t^prec).
    pub fn zero(field: &Field, prec: i64) -> Self {
        LaurentSeries {
            field: field.clone(),
            v0: prec,
            coeffs: Vec::new(),
            prec,
        }
    }

    pub fn from_coeffs(field: &Field, v0: i64, coeffs: &[FqElem], prec: i64) -> Result<Self> {
        if coeffs.iter().any(|c| c.field() != field) {
            return Err(Error::FieldMismatch);
        }
        Ok(Self::from_raw(
            field,
            v0,
            coeffs.iter().map(|c| c.raw()).collect(),
            prec,
        ))
    }

    /// c * t^k + O(t^prec).
    pub fn monomial(c: &FqElem, k: i64, prec: i64) -> Self {
        Self::from_raw(c.field(), k, vec![c.raw()], prec)
    }

    pub fn constant(c: &FqElem, prec: i64) -> Self {
        Self::monomial(c, 0, prec)
    }

    pub fn one(field: &Field, prec: i64) -> Self {
        Self::constant(&field.one(), prec)
    }

    pub fn t(field: &Field, prec: i64) -> Self {
        Self::monomial(&field.one(), 1, prec)
    }

    /// Parses `t^-2 + 2*t^0 + t^3 + O(t^8)`; without an O-term the literal is
    /// expanded to `default_prec`.
    pub fn parse(field: &Field, literal: &str, default_prec: i64) -> Result<Self> {
        crate::literal::parse_series(field, literal, default_prec)
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub fn prec(&self) -> i64 {
        self.prec
    }

    pub fn is_zero_to_precision(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn valuation(&self) -> SeriesValuation {
        if self.coeffs.is_empty() {
            SeriesValuation::BelowPrecision(self.prec)
        } else {
            SeriesValuation::Finite(self.v0)
        }
    }

    /// Coefficient of t^k, or `None` when k is at or beyond the precision.
    pub fn coeff(&self, k: i64) -> Option<FqElem> {
        (k < self.prec).then(|| self.field.wrap(self.raw_coeff(k)))
    }

    pub(crate) fn raw_coeff(&self, k: i64) -> Fq {
        if k < self.v0 || k >= self.prec {
            return Fq::ZERO;
        }
        self.coeffs.get((k - self.v0) as usize).copied().unwrap_or(Fq::ZERO)
    }

    /// Coefficient at the valuation, if the series is not zero to precision.
    pub fn leading_coeff(&self) -> Option<FqElem> {
        self.coeffs.first().map(|&c| self.field.wrap(c))
    }

    /// Nonzero terms (exponent, coefficient), ascending.
    pub fn terms(&self) -> impl Iterator<Item = (i64, FqElem)> + '_ {
        self.coeffs
            .iter()
            .enumerate()
            .filter(|(_, c)| !c.is_zero())
            .map(|(i, &c)| (self.v0 + i as i64, self.field.wrap(c)))
    }

    fn same_field(&self, other: &Self) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    /// Lowers the precision to `min(prec, self.prec)`.
    pub fn truncate(&self, prec: i64) -> Self {
        let prec = prec.min(self.prec);
        Self::from_raw(&self.field, self.v0, self.coeffs.clone(), prec)
    }

    pub fn neg(&self) -> Self {
        let f = &self.field;
        LaurentSeries {
            field: f.clone(),
            v0: self.v0,
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
            prec: self.prec,
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let f = &self.field;
        let prec = self.prec.min(other.prec);
        let start = self.v0.min(other.v0).min(prec);
        let coeffs = (start..prec)
            .map(|k| f.add(self.raw_coeff(k), other.raw_coeff(k)))
            .collect();
        Ok(Self::from_raw(f, start, coeffs, prec))
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        let f = &self.field;
        let prec = (self.v0 + other.prec).min(other.v0 + self.prec);
        if self.coeffs.is_empty() || other.coeffs.is_empty() {
            return Ok(Self::zero(f, prec));
        }
        let v = self.v0 + other.v0;
        let len = (prec - v).max(0) as usize;
        let mut r = vec![Fq::ZERO; len];
        for (i, &a) in self.coeffs.iter().enumerate().take(len) {
            if a.is_zero() {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate().take(len - i) {
                if !b.is_zero() {
                    r[i + j] = f.add(r[i + j], f.mul(a, b));
                }
            }
        }
        Ok(Self::from_raw(f, v, r, prec))
    }

    /// Multiplication by an exact constant.
    pub fn scale(&self, c: &FqElem) -> Result<Self> {
        if c.field() != &self.field {
            return Err(Error::FieldMismatch);
        }
        let f = &self.field;
        let coeffs = self.coeffs.iter().map(|&x| f.mul(x, c.raw())).collect();
        Ok(Self::from_raw(f, self.v0, coeffs, self.prec))
    }

    /// Multiplication by t^k.
    pub fn shift(&self, k: i64) -> Self {
        LaurentSeries {
            field: self.field.clone(),
            v0: self.v0 + k,
            coeffs: self.coeffs.clone(),
            prec: self.prec + k,
        }
    }

    /// 1/s by the geometric-series recurrence on the unit part.
    pub fn inv(&self) -> Result<Self> {
        if self.coeffs.is_empty() {
            return Err(Error::DivisionByZeroToPrecision(self.prec));
        }
        let f = &self.field;
        let m = self.v0;
        let len = (self.prec - m) as usize;
        let u0_inv = f.inv(self.coeffs[0]).expect("leading coefficient is nonzero");
        let mut c = Vec::with_capacity(len);
        c.push(u0_inv);
        for k in 1..len {
            let mut acc = Fq::ZERO;
            for j in 1..=k.min(self.coeffs.len() - 1) {
                let uj = self.coeffs[j];
                if !uj.is_zero() {
                    acc = f.add(acc, f.mul(uj, c[k - j]));
                }
            }
            c.push(f.neg(f.mul(u0_inv, acc)));
        }
        Ok(Self::from_raw(f, -m, c, self.prec - 2 * m))
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.same_field(other)?;
        self.mul(&other.inv()?)
    }

    /// s^p, computed coefficient-wise.
    pub fn frobenius(&self) -> Self {
        let f = &self.field;
        let p = f.characteristic() as i64;
        if self.coeffs.is_empty() {
            return Self::zero(f, p * self.prec);
        }
        let len = (self.coeffs.len() - 1) * p as usize + 1;
        let mut r = vec![Fq::ZERO; len];
        for (i, &c) in self.coeffs.iter().enumerate() {
            r[i * p as usize] = f.frobenius(c);
        }
        Self::from_raw(f, p * self.v0, r, p * self.prec)
    }

    /// Integer power k >= 1 by repeated multiplication.
    pub fn pow(&self, k: u32) -> Result<Self> {
        if k == 0 {
            return Err(Error::InvalidArgument("series power needs k >= 1".into()));
        }
        let mut acc = self.clone();
        for _ in 1..k {
            acc = acc.mul(self)?;
        }
        Ok(acc)
    }

    /// Residue class of an element of valuation >= 0.
    pub fn residue(&self) -> Result<FqElem> {
        match self.valuation() {
            SeriesValuation::Finite(v) if v < 0 => Err(Error::NegativeValuation(v)),
            SeriesValuation::Finite(_) => Ok(self.field.wrap(self.raw_coeff(0))),
            SeriesValuation::BelowPrecision(n) if n >= 1 => Ok(self.field.zero()),
            SeriesValuation::BelowPrecision(n) => Err(Error::PrecisionExhausted(format!(
                "residue of 0 + O(t^{n}) is undetermined"
            ))),
        }
    }

    /// True when the two series agree up to their common precision.
    pub fn eq_to_precision(&self, other: &Self) -> bool {
        self.sub(other).map(|d| d.is_zero_to_precision()).unwrap_or(false)
    }
}

impl fmt::Display for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let field = &self.field;
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let k = self.v0 + i as i64;
            if c == field.raw_one() {
                write!(f, "t^{k}")?;
            } else {
                write!(f, "{}*t^{k}", field.raw_coeff_literal(c))?;
            }
        }
        if first {
            f.write_str("0")?;
        }
        write!(f, " + O(t^{})", self.prec)
    }
}

/// Serializes as the display literal, which re-parses to an equal series.
impl Serialize for LaurentSeries {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Debug for LaurentSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "LaurentSeries({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s(field: &Field, lit: &str) -> LaurentSeries {
        LaurentSeries::parse(field, lit, DEFAULT_PREC).unwrap()
    }

    #[test]
    fn valuation_examples() {
        let f = Field::prime(2).unwrap();
        assert_eq!(s(&f, "t^-1 + 1 + O(t^8)").valuation(), SeriesValuation::Finite(-1));
        assert_eq!(s(&f, "0 + O(t^8)").valuation(), SeriesValuation::BelowPrecision(8));
        assert_eq!(s(&f, "t^3 + t^5 + O(t^10)").valuation(), SeriesValuation::Finite(3));
    }

    #[test]
    fn arithmetic_examples() {
        let f3 = Field::prime(3).unwrap();
        let prod = s(&f3, "1 + t + O(t^5)").mul(&s(&f3, "1 - t + O(t^5)")).unwrap();
        assert_eq!(prod, s(&f3, "1 + 2*t^2 + O(t^5)"));

        let f2 = Field::prime(2).unwrap();
        let inv = s(&f2, "1 + t + O(t^4)").inv().unwrap();
        assert_eq!(inv.to_string(), "t^0 + t^1 + t^2 + t^3 + O(t^4)");

        let a = s(&f2, "t^-1 + t^2 + O(t^6)");
        assert_eq!(a.add(&LaurentSeries::zero(&f2, 6)).unwrap(), a);
    }

    #[test]
    fn precision_rules() {
        let f = Field::prime(5).unwrap();
        let a = s(&f, "t^2 + t^3 + O(t^10)");
        let b = s(&f, "t^-1 + 1 + O(t^6)");
        assert_eq!(a.add(&b).unwrap().prec(), 6);
        assert_eq!(a.mul(&b).unwrap().prec(), (2 + 6));
        assert_eq!(b.inv().unwrap().prec(), 6 + 2);
        assert_eq!(a.inv().unwrap().prec(), 10 - 4);
        assert_eq!(a.frobenius().prec(), 50);
    }

    #[test]
    fn zero_to_precision_is_not_invertible() {
        let f = Field::prime(2).unwrap();
        assert_eq!(
            LaurentSeries::zero(&f, 8).inv(),
            Err(Error::DivisionByZeroToPrecision(8))
        );
    }

    #[test]
    fn frobenius_examples() {
        let f2 = Field::prime(2).unwrap();
        let x = s(&f2, "t + t^2 + O(t^8)").frobenius();
        assert_eq!(x, s(&f2, "t^2 + t^4 + O(t^16)"));
        let f3 = Field::prime(3).unwrap();
        assert_eq!(s(&f3, "2*t + O(t^8)").frobenius(), s(&f3, "2*t^3 + O(t^24)"));
        assert!(LaurentSeries::zero(&f3, 8).frobenius().is_zero_to_precision());
    }

    #[test]
    fn residue_examples() {
        let f2 = Field::prime(2).unwrap();
        assert!(s(&f2, "1 + t + O(t^5)").residue().unwrap().is_one());
        assert!(s(&f2, "t + O(t^5)").residue().unwrap().is_zero());
        assert_eq!(s(&f2, "t^-2 + O(t^5)").residue(), Err(Error::NegativeValuation(-2)));
        let f4 = Field::new(2, 2).unwrap();
        assert_eq!(s(&f4, "u + t*u + O(t^3)").residue().unwrap().to_string(), "u");
    }

    #[test]
    fn literal_round_trip() {
        let f4 = Field::new(2, 2).unwrap();
        let a = s(&f4, "u*t^-2 + (u+1)*t + t^3 + O(t^8)");
        assert_eq!(a.to_string(), "u*t^-2 + (u+1)*t^1 + t^3 + O(t^8)");
        assert_eq!(s(&f4, &a.to_string()), a);
        let z = LaurentSeries::zero(&f4, 8);
        assert_eq!(z.to_string(), "0 + O(t^8)");
        assert_eq!(s(&f4, &z.to_string()), z);
    }
}
