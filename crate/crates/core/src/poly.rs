//! Dense univariate polynomials over F_q in the indeterminate `t`.

use std::fmt;

use crate::error::{Error, Result};
use crate::finite_field::{Field, Fq, FqElem};

/// Largest degree any polynomial result may have.
pub const DEGREE_CAP: usize = 16384;

/// A polynomial in `t` with ascending, trimmed coefficients.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Fq>,
}

fn check_cap(len: usize) -> Result<()> {
    if len > DEGREE_CAP + 1 {
        Err(Error::DegreeCapExceeded(len - 1))
    } else {
        Ok(())
    }
}

#[allow(clippy::should_implement_trait)]
impl Poly {
    pub(crate) fn from_raw(field: &Field, mut coeffs: Vec<Fq>) -> Poly {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly {
            field: field.clone(),
            coeffs,
        }
    }

    pub fn zero(field: &Field) -> Poly {
        Poly {
            field: field.clone(),
            coeffs: Vec::new(),
        }
    }

    pub fn one(field: &Field) -> Poly {
        Poly::constant(&field.one())
    }

    pub fn constant(c: &FqElem) -> Poly {
        Poly::from_raw(c.field(), vec![c.raw()])
    }

    /// c * t^k.
    pub fn monomial(c: &FqElem, k: usize) -> Poly {
        let mut coeffs = vec![Fq::ZERO; k + 1];
        coeffs[k] = c.raw();
        Poly::from_raw(c.field(), coeffs)
    }

    pub fn t(field: &Field) -> Poly {
        Poly::monomial(&field.one(), 1)
    }

    pub fn from_coeffs(field: &Field, coeffs: &[FqElem]) -> Result<Poly> {
        if coeffs.iter().any(|c| c.field() != field) {
            return Err(Error::FieldMismatch);
        }
        Ok(Poly::from_raw(field, coeffs.iter().map(|c| c.raw()).collect()))
    }

    pub fn field(&self) -> &Field {
        &self.field
    }

    pub(crate) fn raw_coeffs(&self) -> &[Fq] {
        &self.coeffs
    }

    pub fn coeffs(&self) -> Vec<FqElem> {
        self.coeffs.iter().map(|&c| self.field.wrap(c)).collect()
    }

    pub fn coeff(&self, i: usize) -> FqElem {
        self.field.wrap(self.coeffs.get(i).copied().unwrap_or(Fq::ZERO))
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0] == self.field.raw_one()
    }

    /// `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<FqElem> {
        self.coeffs.last().map(|&c| self.field.wrap(c))
    }

    /// Multiplicity of t as a factor; `None` for zero.
    pub fn ord_t(&self) -> Option<usize> {
        self.coeffs.iter().position(|c| !c.is_zero())
    }

    fn same_field(&self, other: &Poly) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        let f = &self.field;
        let (long, short) = if self.coeffs.len() >= other.coeffs.len() {
            (&self.coeffs, &other.coeffs)
        } else {
            (&other.coeffs, &self.coeffs)
        };
        let mut r = long.clone();
        for (x, &y) in r.iter_mut().zip(short) {
            *x = f.add(*x, y);
        }
        Ok(Poly::from_raw(f, r))
    }

    pub fn neg(&self) -> Poly {
        let f = &self.field;
        Poly {
            field: f.clone(),
            coeffs: self.coeffs.iter().map(|&c| f.neg(c)).collect(),
        }
    }

    pub fn sub(&self, other: &Poly) -> Result<Poly> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        if self.is_zero() || other.is_zero() {
            return Ok(Poly::zero(&self.field));
        }
        let len = self.coeffs.len() + other.coeffs.len() - 1;
        check_cap(len)?;
        let f = &self.field;
        let mut r = vec![Fq::ZERO; len];
        // iterate over the sparser operand on the outside
        let (a, b) = if self.nonzero_terms() <= other.nonzero_terms() {
            (&self.coeffs, &other.coeffs)
        } else {
            (&other.coeffs, &self.coeffs)
        };
        for (i, &x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                if !y.is_zero() {
                    r[i + j] = f.add(r[i + j], f.mul(x, y));
                }
            }
        }
        Ok(Poly::from_raw(f, r))
    }

    fn nonzero_terms(&self) -> usize {
        self.coeffs.iter().filter(|c| !c.is_zero()).count()
    }

    pub fn scale(&self, c: &FqElem) -> Result<Poly> {
        if c.field() != &self.field {
            return Err(Error::FieldMismatch);
        }
        let f = &self.field;
        Ok(Poly::from_raw(
            f,
            self.coeffs.iter().map(|&x| f.mul(x, c.raw())).collect(),
        ))
    }

    pub fn pow(&self, mut e: u64) -> Result<Poly> {
        let mut acc = Poly::one(&self.field);
        let mut base = self.clone();
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base)?;
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc)
    }

    /// Quotient and remainder of Euclidean division.
    pub fn divrem(&self, divisor: &Poly) -> Result<(Poly, Poly)> {
        self.same_field(divisor)?;
        let db = divisor.degree().ok_or(Error::DivisionByZero)?;
        let f = &self.field;
        if self.coeffs.len() <= db {
            return Ok((Poly::zero(f), self.clone()));
        }
        let lead_inv = f.inv(divisor.coeffs[db]).expect("trimmed lead is nonzero");
        let mut r = self.coeffs.clone();
        let mut q = vec![Fq::ZERO; r.len() - db];
        for k in (0..q.len()).rev() {
            let c = r[k + db];
            if c.is_zero() {
                continue;
            }
            let c = f.mul(c, lead_inv);
            q[k] = c;
            for (j, &d) in divisor.coeffs.iter().enumerate() {
                if !d.is_zero() {
                    r[k + j] = f.sub(r[k + j], f.mul(c, d));
                }
            }
        }
        r.truncate(db);
        Ok((Poly::from_raw(f, q), Poly::from_raw(f, r)))
    }

    /// Exact division; errors if `divisor` does not divide `self`.
    pub fn div_exact(&self, divisor: &Poly) -> Result<Poly> {
        let (q, r) = self.divrem(divisor)?;
        if !r.is_zero() {
            return Err(Error::InternalConsistency("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            None => self.clone(),
            Some(l) => self.scale(&l.inv().expect("nonzero lead")).expect("same field"),
        }
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, other: &Poly) -> Result<Poly> {
        self.same_field(other)?;
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.divrem(&b)?.1;
            a = b;
            b = r;
        }
        Ok(a.monic())
    }

    pub fn derivative(&self) -> Poly {
        let f = &self.field;
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| f.scale_int(c, i as u64))
            .collect();
        Poly::from_raw(f, coeffs)
    }

    /// p-th power, computed coefficient-wise: Σ c_i t^i -> Σ c_i^p t^{ip}.
    pub fn frobenius(&self) -> Result<Poly> {
        let f = &self.field;
        let p = f.characteristic() as usize;
        if self.is_zero() {
            return Ok(self.clone());
        }
        let len = (self.coeffs.len() - 1) * p + 1;
        check_cap(len)?;
        let mut r = vec![Fq::ZERO; len];
        for (i, &c) in self.coeffs.iter().enumerate() {
            r[i * p] = f.frobenius(c);
        }
        Ok(Poly::from_raw(f, r))
    }

    /// The q with q^p = self, if self is a p-th power.
    pub fn pth_root(&self) -> Option<Poly> {
        let f = &self.field;
        let p = f.characteristic() as usize;
        if self.coeffs.iter().enumerate().any(|(i, c)| i % p != 0 && !c.is_zero()) {
            return None;
        }
        let r = self.coeffs.iter().step_by(p).map(|&c| f.pth_root(c)).collect();
        Some(Poly::from_raw(f, r))
    }

    /// self / t^k, dropping nothing: requires t^k | self.
    pub fn shift_down(&self, k: usize) -> Poly {
        debug_assert!(self.coeffs.iter().take(k).all(|c| c.is_zero()));
        Poly::from_raw(&self.field, self.coeffs.iter().skip(k).copied().collect())
    }

    /// self * t^k.
    pub fn shift_up(&self, k: usize) -> Result<Poly> {
        if self.is_zero() {
            return Ok(self.clone());
        }
        check_cap(self.coeffs.len() + k)?;
        let mut r = vec![Fq::ZERO; k];
        r.extend_from_slice(&self.coeffs);
        Ok(Poly::from_raw(&self.field, r))
    }

    pub fn eval(&self, x: &FqElem) -> Result<FqElem> {
        if x.field() != &self.field {
            return Err(Error::FieldMismatch);
        }
        let f = &self.field;
        let v = self
            .coeffs
            .iter()
            .rev()
            .fold(Fq::ZERO, |acc, &c| f.add(f.mul(acc, x.raw()), c));
        Ok(f.wrap(v))
    }

    /// Square-free decomposition of a monic polynomial in characteristic p:
    /// pairs (g, m) with g square-free, pairwise coprime, and self = Π g^m.
    pub fn squarefree_decomposition(&self) -> Result<Vec<(Poly, u64)>> {
        let f = &self.field;
        let p = f.characteristic();
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return Ok(out);
        }
        let a = self.monic();
        let mut c = a.gcd(&a.derivative())?;
        let mut w = a.div_exact(&c)?;
        let mut i = 1u64;
        while !w.is_one() {
            let y = w.gcd(&c)?;
            let z = w.div_exact(&y)?;
            if !z.is_one() {
                out.push((z, i));
            }
            i += 1;
            w = y;
            c = c.div_exact(&w)?;
        }
        if !c.is_one() {
            let root = c
                .pth_root()
                .ok_or_else(|| Error::InternalConsistency("derivative-free part is not a p-th power".into()))?;
            for (g, m) in root.squarefree_decomposition()? {
                out.push((g, m * p));
            }
        }
        Ok(out)
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::literal::poly_literal(self))
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(field: &Field, cs: &[i64]) -> Poly {
        let cs: Vec<FqElem> = cs.iter().map(|&c| field.from_int(c)).collect();
        Poly::from_coeffs(field, &cs).unwrap()
    }

    #[test]
    fn division_identity() {
        let f = Field::prime(5).unwrap();
        let a = poly(&f, &[1, 2, 3, 4, 1, 3]);
        let b = poly(&f, &[2, 0, 1]);
        let (q, r) = a.divrem(&b).unwrap();
        assert_eq!(q.mul(&b).unwrap().add(&r).unwrap(), a);
        assert!(r.degree().unwrap_or(0) < 2);
        assert_eq!(a.divrem(&Poly::zero(&f)), Err(Error::DivisionByZero));
    }

    #[test]
    fn gcd_is_monic() {
        let f = Field::prime(3).unwrap();
        let x1 = poly(&f, &[1, 1]);
        let a = x1.mul(&poly(&f, &[1, 0, 1])).unwrap().scale(&f.from_int(2)).unwrap();
        let b = x1.mul(&poly(&f, &[1, 2])).unwrap();
        assert_eq!(a.gcd(&b).unwrap(), x1);
    }

    #[test]
    fn frobenius_and_root() {
        let f = Field::prime(2).unwrap();
        let a = poly(&f, &[1, 1]);
        assert_eq!(a.frobenius().unwrap().to_string(), "t^2+1");
        assert_eq!(a.frobenius().unwrap().pth_root().unwrap(), a);
        assert!(a.pth_root().is_none());
    }

    #[test]
    fn cap_is_enforced() {
        let f = Field::prime(2).unwrap();
        let big = Poly::monomial(&f.one(), DEGREE_CAP);
        assert!(matches!(big.mul(&Poly::t(&f)), Err(Error::DegreeCapExceeded(_))));
    }

    #[test]
    fn squarefree_decomposition_char_p() {
        let f = Field::prime(3).unwrap();
        let t1 = poly(&f, &[1, 1]); // t+1
        let t = Poly::t(&f);
        // t * (t+1)^3 * (t^2+1)^2
        let irr = poly(&f, &[1, 0, 1]);
        let a = t.mul(&t1.pow(3).unwrap()).unwrap().mul(&irr.pow(2).unwrap()).unwrap();
        let mut d = a.squarefree_decomposition().unwrap();
        d.sort_by_key(|(_, m)| *m);
        assert_eq!(d, vec![(t, 1), (irr, 2), (t1, 3)]);
    }
}
