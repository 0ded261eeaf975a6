//! The rational function field F_q(t) with its t-adic valuation.

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::finite_field::{Field, Fq, FqElem};
use crate::laurent::LaurentSeries;
use crate::poly::Poly;
use crate::value::Value;

/// num/den with gcd(num, den) = 1 and den monic; zero is 0/1.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct RatFunc {
    num: Poly,
    den: Poly,
}

#[allow(clippy::should_implement_trait)]
impl RatFunc {
    pub fn new(num: Poly, den: Poly) -> Result<RatFunc> {
        if num.field() != den.field() {
            return Err(Error::FieldMismatch);
        }
        if den.is_zero() {
            return Err(Error::DivisionByZero);
        }
        if num.is_zero() {
            return Ok(RatFunc::zero(num.field()));
        }
        let g = num.gcd(&den)?;
        let (num, den) = if g.is_one() {
            (num, den)
        } else {
            (num.div_exact(&g)?, den.div_exact(&g)?)
        };
        let lead_inv = den.lead().expect("nonzero").inv()?;
        Ok(RatFunc {
            num: num.scale(&lead_inv)?,
            den: den.scale(&lead_inv)?,
        })
    }

    pub fn from_poly(p: Poly) -> RatFunc {
        let den = Poly::one(p.field());
        RatFunc { num: p, den }
    }

    pub fn zero(field: &Field) -> RatFunc {
        RatFunc::from_poly(Poly::zero(field))
    }

    pub fn one(field: &Field) -> RatFunc {
        RatFunc::from_poly(Poly::one(field))
    }

    pub fn constant(c: FqElem) -> RatFunc {
        RatFunc::from_poly(Poly::constant(&c))
    }

    pub fn t(field: &Field) -> RatFunc {
        RatFunc::from_poly(Poly::t(field))
    }

    /// c * t^k for any integer k.
    pub fn monomial(c: &FqElem, k: i64) -> RatFunc {
        let f = c.field();
        if c.is_zero() {
            return RatFunc::zero(f);
        }
        if k >= 0 {
            RatFunc::from_poly(Poly::monomial(c, k as usize))
        } else {
            RatFunc {
                num: Poly::constant(c),
                den: Poly::monomial(&f.one(), (-k) as usize),
            }
        }
    }

    /// Parses `poly [/ poly]`, e.g. `(t^2+1)/(t^3)`.
    pub fn parse(field: &Field, literal: &str) -> Result<RatFunc> {
        crate::literal::parse_rational(field, literal)
    }

    pub fn field(&self) -> &Field {
        self.num.field()
    }

    pub fn num(&self) -> &Poly {
        &self.num
    }

    pub fn den(&self) -> &Poly {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.num.is_one() && self.den.is_one()
    }

    /// The element as a constant of F_q, if it is one.
    pub fn as_constant(&self) -> Option<FqElem> {
        (self.den.is_one() && self.num.degree().unwrap_or(0) == 0).then(|| self.num.coeff(0))
    }

    pub fn add(&self, other: &RatFunc) -> Result<RatFunc> {
        if self.den == other.den {
            return RatFunc::new(self.num.add(&other.num)?, self.den.clone());
        }
        let num = self.num.mul(&other.den)?.add(&other.num.mul(&self.den)?)?;
        RatFunc::new(num, self.den.mul(&other.den)?)
    }

    pub fn neg(&self) -> RatFunc {
        RatFunc {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn sub(&self, other: &RatFunc) -> Result<RatFunc> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &RatFunc) -> Result<RatFunc> {
        if self.is_zero() || other.is_zero() {
            if self.field() != other.field() {
                return Err(Error::FieldMismatch);
            }
            return Ok(RatFunc::zero(self.field()));
        }
        // cross-cancel first to keep the intermediate degrees small
        let g1 = self.num.gcd(&other.den)?;
        let g2 = other.num.gcd(&self.den)?;
        let num = self.num.div_exact(&g1)?.mul(&other.num.div_exact(&g2)?)?;
        let den = self.den.div_exact(&g2)?.mul(&other.den.div_exact(&g1)?)?;
        let lead_inv = den.lead().expect("nonzero").inv()?;
        Ok(RatFunc {
            num: num.scale(&lead_inv)?,
            den: den.scale(&lead_inv)?,
        })
    }

    pub fn inv(&self) -> Result<RatFunc> {
        if self.is_zero() {
            return Err(Error::DivisionByZero);
        }
        RatFunc::new(self.den.clone(), self.num.clone())
    }

    pub fn div(&self, other: &RatFunc) -> Result<RatFunc> {
        self.mul(&other.inv()?)
    }

    pub fn scale(&self, c: &FqElem) -> Result<RatFunc> {
        if c.is_zero() {
            return Ok(RatFunc::zero(self.field()));
        }
        Ok(RatFunc {
            num: self.num.scale(c)?,
            den: self.den.clone(),
        })
    }

    pub fn pow(&self, e: i64) -> Result<RatFunc> {
        let base = if e < 0 { self.inv()? } else { self.clone() };
        let k = e.unsigned_abs();
        Ok(RatFunc {
            num: base.num.pow(k)?,
            den: base.den.pow(k)?,
        })
    }

    /// Exact p-th power; numerator and denominator stay coprime and monic.
    pub fn frobenius(&self) -> Result<RatFunc> {
        Ok(RatFunc {
            num: self.num.frobenius()?,
            den: self.den.frobenius()?,
        })
    }

    /// x^p - x.
    pub fn artin_schreier(&self) -> Result<RatFunc> {
        self.frobenius()?.sub(self)
    }

    /// ord_t(num) - ord_t(den); `None` for zero.
    pub fn ord(&self) -> Option<i64> {
        let a = self.num.ord_t()? as i64;
        let b = self.den.ord_t().expect("den is nonzero") as i64;
        Some(a - b)
    }

    /// The t-adic valuation.
    pub fn tadic_val(&self) -> Result<Value> {
        self.ord().map(Value::int).ok_or(Error::ZeroHasNoValuation)
    }

    /// Coefficient of t^{ord} in the t-adic expansion.
    pub fn leading_tadic_coeff(&self) -> Option<FqElem> {
        let a = self.num.ord_t()?;
        let b = self.den.ord_t().expect("den is nonzero");
        self.num.coeff(a).div(&self.den.coeff(b)).ok()
    }

    /// Laurent expansion at t = 0 to O(t^prec).
    pub fn expand(&self, prec: i64) -> LaurentSeries {
        let f = self.field();
        let Some(v) = self.ord() else {
            return LaurentSeries::zero(f, prec);
        };
        if v >= prec {
            return LaurentSeries::zero(f, prec);
        }
        let a = self.num.ord_t().unwrap();
        let b = self.den.ord_t().unwrap();
        let n = &self.num.raw_coeffs()[a..];
        let d = &self.den.raw_coeffs()[b..];
        let d0_inv = f.inv(d[0]).expect("nonzero constant term");
        let len = (prec - v) as usize;
        let mut c: Vec<Fq> = Vec::with_capacity(len);
        for k in 0..len {
            let mut acc = n.get(k).copied().unwrap_or(Fq::ZERO);
            for j in 1..=k.min(d.len() - 1) {
                if !d[j].is_zero() {
                    acc = f.sub(acc, f.mul(d[j], c[k - j]));
                }
            }
            c.push(f.mul(acc, d0_inv));
        }
        LaurentSeries::from_raw(f, v, c, prec)
    }
}

impl fmt::Display for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/({})", self.num, self.den)
        }
    }
}

impl Serialize for RatFunc {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl fmt::Debug for RatFunc {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RatFunc({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::laurent::SeriesValuation;

    fn r(f: &Field, s: &str) -> RatFunc {
        RatFunc::parse(f, s).unwrap()
    }

    #[test]
    fn arithmetic_examples() {
        let f2 = Field::prime(2).unwrap();
        let sum = r(&f2, "t/(t+1)").add(&r(&f2, "1/(t+1)")).unwrap();
        assert!(sum.is_one());

        let f3 = Field::prime(3).unwrap();
        let x = r(&f3, "t^2+1");
        assert!(x.mul(&x.inv().unwrap()).unwrap().is_one());
        assert_eq!(x.add(&RatFunc::zero(&f3)).unwrap(), x);
        assert_eq!(RatFunc::zero(&f3).inv(), Err(Error::DivisionByZero));
    }

    #[test]
    fn normal_form_printing() {
        let f3 = Field::prime(3).unwrap();
        let x = r(&f3, "(2*t^2+2)/(2*t^3)");
        assert_eq!(x.to_string(), "(t^2+1)/(t^3)");
        assert_eq!(r(&f3, &x.to_string()), x);
        assert_eq!(r(&f3, "(t^2-1)/(t-1)").to_string(), "t+1");
    }

    #[test]
    fn tadic_valuation_examples() {
        let f = Field::prime(5).unwrap();
        assert_eq!(r(&f, "t^2/(1+t)").tadic_val(), Ok(Value::int(2)));
        assert_eq!(r(&f, "(1+t)/t").tadic_val(), Ok(Value::int(-1)));
        assert_eq!(r(&f, "1").tadic_val(), Ok(Value::int(0)));
        assert_eq!(RatFunc::zero(&f).tadic_val(), Err(Error::ZeroHasNoValuation));
    }

    #[test]
    fn expansion_examples() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(
            r(&f2, "1/(1+t)").expand(5).to_string(),
            "t^0 + t^1 + t^2 + t^3 + t^4 + O(t^5)"
        );
        let f3 = Field::prime(3).unwrap();
        assert_eq!(
            r(&f3, "1/(1-t)").expand(4).to_string(),
            "t^0 + t^1 + t^2 + t^3 + O(t^4)"
        );
        let t = RatFunc::t(&f3).expand(9);
        assert_eq!(t.valuation(), SeriesValuation::Finite(1));
        assert_eq!(t.prec(), 9);
        assert!(RatFunc::zero(&f3).expand(7).is_zero_to_precision());
    }

    #[test]
    fn frobenius_examples() {
        let f2 = Field::prime(2).unwrap();
        assert_eq!(r(&f2, "t+1").frobenius().unwrap(), r(&f2, "t^2+1"));
        let f3 = Field::prime(3).unwrap();
        assert_eq!(r(&f3, "t").frobenius().unwrap(), r(&f3, "t^3"));
        assert_eq!(r(&f3, "t^3").frobenius().unwrap(), r(&f3, "t^9"));
        assert_eq!(r(&f3, "1/t").frobenius().unwrap(), r(&f3, "1/t^3"));
    }
}
