//! Exact arithmetic in F_p and F_{p^n}.
//!
//! A [`Field`] is a shared, immutable description of F_q = F_p[u]/(m(u)).
//! Elements ([`FqElem`]) carry their field and refuse to mix with elements
//! of another field. Internally the heavier containers (polynomials, series)
//! store the raw coefficient vectors and keep a single `Field` handle.

use std::fmt;
use std::hash::{Hash, Hasher};
use std::ops::Deref;
use std::sync::Arc;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg;

/// Largest supported extension degree.
pub const MAX_DEGREE: usize = 8;
/// Upper bound on the characteristic.
pub const MAX_CHARACTERISTIC: u64 = 1 << 31;

/// Coefficients of an element over the power basis 1, u, ..., u^{n-1}.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default, PartialOrd, Ord, Debug)]
pub(crate) struct Fq(pub(crate) [u32; MAX_DEGREE]);

impl Fq {
    pub(crate) const ZERO: Fq = Fq([0; MAX_DEGREE]);

    #[inline]
    pub(crate) fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

/// Description of F_{p^n}: the characteristic, the degree and (for n > 1)
/// the monic irreducible modulus, coefficients in ascending order.
#[derive(Debug, PartialEq, Eq, Hash)]
pub struct FieldDesc {
    p: u64,
    n: usize,
    modulus: Vec<u64>,
}

/// Shared handle to a [`FieldDesc`].
#[derive(Clone, Debug)]
pub struct Field(Arc<FieldDesc>);

impl Deref for Field {
    type Target = FieldDesc;

    fn deref(&self) -> &FieldDesc {
        &self.0
    }
}

impl PartialEq for Field {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || *self.0 == *other.0
    }
}

impl Eq for Field {}

impl Hash for Field {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

fn check_characteristic(p: u64) -> Result<()> {
    if p > MAX_CHARACTERISTIC {
        return Err(Error::CharacteristicTooLarge(p));
    }
    if !is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    Ok(())
}

impl Field {
    /// The prime field F_p.
    pub fn prime(p: u64) -> Result<Field> {
        check_characteristic(p)?;
        Ok(Field(Arc::new(FieldDesc {
            p,
            n: 1,
            modulus: Vec::new(),
        })))
    }

    /// F_{p^n} with the lexicographically least monic irreducible modulus,
    /// ordering candidates by their coefficients from u^{n-1} down to u^0.
    pub fn new(p: u64, n: usize) -> Result<Field> {
        check_characteristic(p)?;
        if n == 0 || n > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(n));
        }
        if n == 1 {
            return Field::prime(p);
        }
        let mut lower = vec![0u64; n];
        loop {
            let mut m = lower.clone();
            m.push(1);
            if fp_poly::is_irreducible(&m, p) {
                return Field::with_modulus(p, &m);
            }
            // odometer with u^0 running fastest
            let mut i = 0;
            loop {
                lower[i] += 1;
                if lower[i] < p {
                    break;
                }
                lower[i] = 0;
                i += 1;
                if i == n {
                    return Err(Error::InternalConsistency(format!(
                        "no irreducible polynomial of degree {n} over F_{p}"
                    )));
                }
            }
        }
    }

    /// F_p[u]/(modulus) for a user-supplied monic modulus (ascending
    /// coefficients, length n + 1). A degree-1 modulus yields F_p.
    pub fn with_modulus(p: u64, modulus: &[u64]) -> Result<Field> {
        check_characteristic(p)?;
        let m: Vec<u64> = modulus.iter().map(|c| c % p).collect();
        let m = fp_poly::trimmed(m);
        if m.len() < 2 || *m.last().unwrap() != 1 || m.len() != modulus.len() {
            return Err(Error::ModulusNotMonic);
        }
        let n = m.len() - 1;
        if n > MAX_DEGREE {
            return Err(Error::UnsupportedDegree(n));
        }
        if n == 1 {
            return Field::prime(p);
        }
        if !fp_poly::is_irreducible(&m, p) {
            return Err(Error::ReducibleModulus(fp_poly::literal(&m)));
        }
        Ok(Field(Arc::new(FieldDesc { p, n, modulus: m })))
    }

    /// Parses a modulus written as a polynomial in `u`, e.g. `u^2+u+1`.
    pub fn with_modulus_literal(p: u64, literal: &str) -> Result<Field> {
        let coeffs = crate::literal::parse_prime_poly(literal, p, 'u')?;
        Field::with_modulus(p, &coeffs)
    }

    pub(crate) fn wrap(&self, raw: Fq) -> FqElem {
        FqElem {
            field: self.clone(),
            raw,
        }
    }

    pub fn zero(&self) -> FqElem {
        self.wrap(Fq::ZERO)
    }

    pub fn one(&self) -> FqElem {
        self.wrap(self.raw_one())
    }

    /// Image of an integer under Z -> F_p -> F_q.
    pub fn from_int(&self, v: i64) -> FqElem {
        self.wrap(self.raw_from_int(v))
    }

    /// The class of `u`; only exists for n > 1.
    pub fn generator(&self) -> Result<FqElem> {
        if self.n == 1 {
            return Err(Error::InvalidArgument("the prime field has no generator u".into()));
        }
        let mut raw = Fq::ZERO;
        raw.0[1] = 1;
        Ok(self.wrap(raw))
    }

    /// Element with the given coefficients over 1, u, ..., u^{n-1}.
    pub fn element(&self, coeffs: &[u64]) -> Result<FqElem> {
        if coeffs.len() > self.n {
            return Err(Error::InvalidArgument(format!(
                "{} coefficients for a degree-{} field",
                coeffs.len(),
                self.n
            )));
        }
        let mut raw = Fq::ZERO;
        for (slot, &c) in raw.0.iter_mut().zip(coeffs) {
            *slot = (c % self.p) as u32;
        }
        Ok(self.wrap(raw))
    }

    /// All elements, ordered by the integer sum c_i p^i. Only for fields with
    /// at most 2^20 elements.
    pub fn elements(&self) -> Result<Vec<FqElem>> {
        let q = self
            .order()
            .filter(|&q| q <= 1 << 20)
            .ok_or_else(|| Error::InvalidArgument("field too large to enumerate".into()))?;
        Ok((0..q).map(|k| self.wrap(self.raw_from_index(k))).collect())
    }

    /// 0, 1, ..., p - 1 as elements of F_q. Only for p <= 2^16.
    pub fn prime_field_elements(&self) -> Result<Vec<FqElem>> {
        if self.p > 1 << 16 {
            return Err(Error::InvalidArgument(format!(
                "cannot enumerate the {} constants of F_{}",
                self.p, self.p
            )));
        }
        Ok((0..self.p).map(|c| self.from_int(c as i64)).collect())
    }

    pub fn random<R: Rng + ?Sized>(&self, rng: &mut R) -> FqElem {
        let mut raw = Fq::ZERO;
        for slot in raw.0.iter_mut().take(self.n) {
            *slot = rng.gen_range(0..self.p) as u32;
        }
        self.wrap(raw)
    }

    pub fn random_nonzero<R: Rng + ?Sized>(&self, rng: &mut R) -> FqElem {
        loop {
            let x = self.random(rng);
            if !x.is_zero() {
                return x;
            }
        }
    }

    /// Parses an element literal: a decimal integer for the prime field, a
    /// polynomial in `u` otherwise.
    pub fn parse_element(&self, literal: &str) -> Result<FqElem> {
        crate::literal::parse_fq(self, literal)
    }
}

impl FieldDesc {
    pub fn characteristic(&self) -> u64 {
        self.p
    }

    pub fn degree(&self) -> usize {
        self.n
    }

    /// Ascending modulus coefficients, `None` for the prime field.
    pub fn modulus(&self) -> Option<&[u64]> {
        (self.n > 1).then_some(self.modulus.as_slice())
    }

    pub fn modulus_literal(&self) -> Option<String> {
        self.modulus().map(fp_poly::literal)
    }

    /// q = p^n when it fits in a u64.
    pub fn order(&self) -> Option<u64> {
        let mut q: u64 = 1;
        for _ in 0..self.n {
            q = q.checked_mul(self.p)?;
        }
        Some(q)
    }

    pub(crate) fn raw_one(&self) -> Fq {
        let mut r = Fq::ZERO;
        r.0[0] = 1;
        r
    }

    pub(crate) fn raw_from_int(&self, v: i64) -> Fq {
        let mut r = Fq::ZERO;
        r.0[0] = v.rem_euclid(self.p as i64) as u32;
        r
    }

    fn raw_from_index(&self, mut k: u64) -> Fq {
        let mut r = Fq::ZERO;
        for slot in r.0.iter_mut().take(self.n) {
            *slot = (k % self.p) as u32;
            k /= self.p;
        }
        r
    }

    pub(crate) fn raw_index(&self, a: Fq) -> u128 {
        a.0[..self.n]
            .iter()
            .rev()
            .fold(0u128, |acc, &c| acc * self.p as u128 + c as u128)
    }

    #[inline]
    pub(crate) fn add(&self, a: Fq, b: Fq) -> Fq {
        let mut r = Fq::ZERO;
        for i in 0..self.n {
            let s = a.0[i] as u64 + b.0[i] as u64;
            r.0[i] = if s >= self.p { s - self.p } else { s } as u32;
        }
        r
    }

    #[inline]
    pub(crate) fn sub(&self, a: Fq, b: Fq) -> Fq {
        let mut r = Fq::ZERO;
        for i in 0..self.n {
            let s = a.0[i] as u64 + self.p - b.0[i] as u64;
            r.0[i] = if s >= self.p { s - self.p } else { s } as u32;
        }
        r
    }

    #[inline]
    pub(crate) fn neg(&self, a: Fq) -> Fq {
        self.sub(Fq::ZERO, a)
    }

    #[inline]
    pub(crate) fn mul(&self, a: Fq, b: Fq) -> Fq {
        let p = self.p;
        let n = self.n;
        if n == 1 {
            let mut r = Fq::ZERO;
            r.0[0] = (a.0[0] as u64 * b.0[0] as u64 % p) as u32;
            return r;
        }
        let mut prod = [0u64; 2 * MAX_DEGREE - 1];
        for i in 0..n {
            let ai = a.0[i] as u64;
            if ai == 0 {
                continue;
            }
            for j in 0..n {
                prod[i + j] = (prod[i + j] + ai * b.0[j] as u64) % p;
            }
        }
        // u^n = -(m_0 + m_1 u + ... + m_{n-1} u^{n-1})
        for k in (n..2 * n - 1).rev() {
            let c = prod[k];
            if c == 0 {
                continue;
            }
            prod[k] = 0;
            for j in 0..n {
                prod[k - n + j] = (prod[k - n + j] + (p - c) * self.modulus[j]) % p;
            }
        }
        let mut r = Fq::ZERO;
        for i in 0..n {
            r.0[i] = prod[i] as u32;
        }
        r
    }

    pub(crate) fn scale_int(&self, a: Fq, k: u64) -> Fq {
        let k = k % self.p;
        let mut r = Fq::ZERO;
        for i in 0..self.n {
            r.0[i] = (a.0[i] as u64 * k % self.p) as u32;
        }
        r
    }

    pub(crate) fn inv(&self, a: Fq) -> Option<Fq> {
        if a.is_zero() {
            return None;
        }
        if self.n == 1 {
            let mut r = Fq::ZERO;
            r.0[0] = linalg::inv_mod(a.0[0] as u64, self.p) as u32;
            return Some(r);
        }
        let poly: Vec<u64> = a.0[..self.n].iter().map(|&c| c as u64).collect();
        let inv = fp_poly::inverse_mod(&poly, &self.modulus, self.p)?;
        let mut r = Fq::ZERO;
        for (slot, c) in r.0.iter_mut().zip(inv) {
            *slot = c as u32;
        }
        Some(r)
    }

    pub(crate) fn pow(&self, mut base: Fq, mut exp: u64) -> Fq {
        let mut acc = self.raw_one();
        while exp > 0 {
            if exp & 1 == 1 {
                acc = self.mul(acc, base);
            }
            base = self.mul(base, base);
            exp >>= 1;
        }
        acc
    }

    #[inline]
    pub(crate) fn frobenius(&self, a: Fq) -> Fq {
        if self.n == 1 {
            a
        } else {
            self.pow(a, self.p)
        }
    }

    pub(crate) fn pth_root(&self, a: Fq) -> Fq {
        (1..self.n).fold(a, |x, _| self.frobenius(x))
    }

    pub(crate) fn trace(&self, a: Fq) -> Fq {
        let mut acc = a;
        let mut x = a;
        for _ in 1..self.n {
            x = self.frobenius(x);
            acc = self.add(acc, x);
        }
        acc
    }

    fn basis(&self, i: usize) -> Fq {
        let mut r = Fq::ZERO;
        r.0[i] = 1;
        r
    }

    pub(crate) fn to_vec(&self, a: Fq) -> Vec<u64> {
        a.0[..self.n].iter().map(|&c| c as u64).collect()
    }

    pub(crate) fn fq_from_vec(&self, v: &[u64]) -> Fq {
        let mut r = Fq::ZERO;
        for (slot, &c) in r.0.iter_mut().zip(v) {
            *slot = (c % self.p) as u32;
        }
        r
    }

    /// Matrix of y -> y^p - y over the basis 1, u, ..., u^{n-1}, as rows.
    fn artin_schreier_matrix(&self) -> Vec<Vec<u64>> {
        let n = self.n;
        let cols: Vec<Vec<u64>> = (0..n)
            .map(|j| {
                let e = self.basis(j);
                self.to_vec(self.sub(self.frobenius(e), e))
            })
            .collect();
        (0..n).map(|i| (0..n).map(|j| cols[j][i]).collect()).collect()
    }

    /// One solution of y^p - y = c in F_q, if any.
    pub(crate) fn as_solve(&self, c: Fq) -> Option<Fq> {
        let rows = self.artin_schreier_matrix();
        let sol = linalg::solve(&rows, &self.to_vec(c), self.n, self.p)?;
        Some(self.fq_from_vec(&sol))
    }

    pub(crate) fn fmt_raw(&self, a: Fq, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.n == 1 {
            return write!(f, "{}", a.0[0]);
        }
        let mut first = true;
        for i in (0..self.n).rev() {
            let c = a.0[i];
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("u")?,
                (1, c) => write!(f, "{c}*u")?,
                (i, 1) => write!(f, "u^{i}")?,
                (i, c) => write!(f, "{c}*u^{i}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }

    pub(crate) fn raw_literal(&self, a: Fq) -> String {
        struct L<'a>(&'a FieldDesc, Fq);
        impl fmt::Display for L<'_> {
            fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                self.0.fmt_raw(self.1, f)
            }
        }
        L(self, a).to_string()
    }

    /// Literal usable as a coefficient inside a larger expression: wrapped in
    /// parentheses when it is a sum.
    pub(crate) fn raw_coeff_literal(&self, a: Fq) -> String {
        let s = self.raw_literal(a);
        if s.contains('+') {
            format!("({s})")
        } else {
            s
        }
    }
}

/// An element of F_q.
#[derive(Clone)]
pub struct FqElem {
    field: Field,
    raw: Fq,
}

impl PartialEq for FqElem {
    fn eq(&self, other: &Self) -> bool {
        self.raw == other.raw && self.field == other.field
    }
}

impl Eq for FqElem {}

impl Hash for FqElem {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.raw.hash(state)
    }
}

impl fmt::Display for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.field.fmt_raw(self.raw, f)
    }
}

impl fmt::Debug for FqElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "FqElem({self})")
    }
}

/// Outcome of solving y^p - y = c in the residue field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ResidueSolutions {
    /// All p solutions, ordered by coefficient index.
    Solvable(Vec<FqElem>),
    Unsolvable,
}

#[allow(clippy::should_implement_trait)]
impl FqElem {
    pub fn field(&self) -> &Field {
        &self.field
    }

    pub(crate) fn raw(&self) -> Fq {
        self.raw
    }

    pub fn is_zero(&self) -> bool {
        self.raw.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.raw == self.field.raw_one()
    }

    /// Coefficients over 1, u, ..., u^{n-1}.
    pub fn coeffs(&self) -> Vec<u64> {
        self.field.to_vec(self.raw)
    }

    /// The value in 0..p when the element lies in the prime field.
    pub fn as_prime(&self) -> Option<u64> {
        self.raw.0[1..].iter().all(|&c| c == 0).then_some(self.raw.0[0] as u64)
    }

    fn same_field(&self, other: &FqElem) -> Result<()> {
        if self.field == other.field {
            Ok(())
        } else {
            Err(Error::FieldMismatch)
        }
    }

    pub fn add(&self, other: &FqElem) -> Result<FqElem> {
        self.same_field(other)?;
        Ok(self.field.wrap(self.field.add(self.raw, other.raw)))
    }

    pub fn sub(&self, other: &FqElem) -> Result<FqElem> {
        self.same_field(other)?;
        Ok(self.field.wrap(self.field.sub(self.raw, other.raw)))
    }

    pub fn mul(&self, other: &FqElem) -> Result<FqElem> {
        self.same_field(other)?;
        Ok(self.field.wrap(self.field.mul(self.raw, other.raw)))
    }

    pub fn div(&self, other: &FqElem) -> Result<FqElem> {
        self.same_field(other)?;
        let inv = self.field.inv(other.raw).ok_or(Error::DivisionByZero)?;
        Ok(self.field.wrap(self.field.mul(self.raw, inv)))
    }

    pub fn neg(&self) -> FqElem {
        self.field.wrap(self.field.neg(self.raw))
    }

    pub fn inv(&self) -> Result<FqElem> {
        let inv = self.field.inv(self.raw).ok_or(Error::DivisionByZero)?;
        Ok(self.field.wrap(inv))
    }

    /// Integer power; negative exponents invert first.
    pub fn pow(&self, exp: i64) -> Result<FqElem> {
        let base = if exp < 0 { self.inv()?.raw } else { self.raw };
        Ok(self.field.wrap(self.field.pow(base, exp.unsigned_abs())))
    }

    /// x -> x^p.
    pub fn frobenius(&self) -> FqElem {
        self.field.wrap(self.field.frobenius(self.raw))
    }

    /// The unique y with y^p = x, i.e. Frobenius applied n - 1 times.
    pub fn pth_root(&self) -> FqElem {
        self.field.wrap(self.field.pth_root(self.raw))
    }

    /// x + x^p + ... + x^{p^{n-1}}, an element of the prime field.
    pub fn trace_to_prime(&self) -> FqElem {
        self.field.wrap(self.field.trace(self.raw))
    }

    /// All y with y^p - y = self. Solvable exactly when the trace vanishes.
    pub fn as_solve_residue(&self) -> ResidueSolutions {
        let Some(y0) = self.field.as_solve(self.raw) else {
            return ResidueSolutions::Unsolvable;
        };
        let p = self.field.p;
        let mut sols: Vec<Fq> = (0..p)
            .map(|k| self.field.add(y0, self.field.raw_from_int(k as i64)))
            .collect();
        sols.sort_by_key(|&s| self.field.raw_index(s));
        ResidueSolutions::Solvable(sols.into_iter().map(|s| self.field.wrap(s)).collect())
    }
}

/// Polynomials over F_p as ascending coefficient vectors. Only what the
/// field constructors need: irreducibility and modular inverses.
mod fp_poly {
    use crate::linalg::inv_mod;

    pub(super) fn trimmed(mut a: Vec<u64>) -> Vec<u64> {
        while a.last() == Some(&0) {
            a.pop();
        }
        a
    }

    pub(super) fn literal(m: &[u64]) -> String {
        let mut terms = Vec::new();
        for (i, &c) in m.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            terms.push(match (i, c) {
                (0, c) => format!("{c}"),
                (1, 1) => "u".to_string(),
                (1, c) => format!("{c}*u"),
                (i, 1) => format!("u^{i}"),
                (i, c) => format!("{c}*u^{i}"),
            });
        }
        if terms.is_empty() {
            "0".into()
        } else {
            terms.join("+")
        }
    }

    fn sub(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let len = a.len().max(b.len());
        let r = (0..len)
            .map(|i| {
                let x = a.get(i).copied().unwrap_or(0);
                let y = b.get(i).copied().unwrap_or(0);
                (x + p - y) % p
            })
            .collect();
        trimmed(r)
    }

    fn mul(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        if a.is_empty() || b.is_empty() {
            return Vec::new();
        }
        let mut r = vec![0; a.len() + b.len() - 1];
        for (i, &x) in a.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (j, &y) in b.iter().enumerate() {
                r[i + j] = (r[i + j] + x * y) % p;
            }
        }
        trimmed(r)
    }

    /// (quotient, remainder); `b` must be nonzero.
    fn divrem(a: &[u64], b: &[u64], p: u64) -> (Vec<u64>, Vec<u64>) {
        let mut r = trimmed(a.to_vec());
        let db = b.len() - 1;
        let lead_inv = inv_mod(b[db], p);
        if r.len() < b.len() {
            return (Vec::new(), r);
        }
        let mut q = vec![0; r.len() - db];
        while r.len() >= b.len() {
            let k = r.len() - b.len();
            let c = r[r.len() - 1] * lead_inv % p;
            q[k] = c;
            for (j, &bj) in b.iter().enumerate() {
                r[k + j] = (r[k + j] + p - c * bj % p) % p;
            }
            r = trimmed(r);
        }
        (trimmed(q), r)
    }

    fn rem(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        divrem(a, b, p).1
    }

    fn gcd(a: &[u64], b: &[u64], p: u64) -> Vec<u64> {
        let mut x = trimmed(a.to_vec());
        let mut y = trimmed(b.to_vec());
        while !y.is_empty() {
            let r = rem(&x, &y, p);
            x = y;
            y = r;
        }
        x
    }

    fn pow_mod(base: &[u64], mut exp: u64, m: &[u64], p: u64) -> Vec<u64> {
        let mut acc = vec![1];
        let mut b = rem(base, m, p);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = rem(&mul(&acc, &b, p), m, p);
            }
            b = rem(&mul(&b, &b, p), m, p);
            exp >>= 1;
        }
        acc
    }

    /// Rabin's test: m of degree n is irreducible iff u^{p^n} = u mod m and
    /// gcd(u^{p^{n/r}} - u, m) = 1 for every prime r | n.
    pub(super) fn is_irreducible(m: &[u64], p: u64) -> bool {
        let n = m.len() - 1;
        if n == 1 {
            return true;
        }
        let x = vec![0, 1];
        let mut frob_powers = Vec::with_capacity(n + 1);
        let mut h = x.clone();
        frob_powers.push(h.clone());
        for _ in 0..n {
            h = pow_mod(&h, p, m, p);
            frob_powers.push(h.clone());
        }
        if sub(&frob_powers[n], &x, p) != Vec::<u64>::new() {
            return false;
        }
        let prime_divisors = (2..=n).filter(|&r| n.is_multiple_of(r) && (2..r).all(|d| r % d != 0));
        for r in prime_divisors {
            let g = gcd(m, &sub(&frob_powers[n / r], &x, p), p);
            if g.len() > 1 {
                return false;
            }
        }
        true
    }

    /// s with s * a = 1 mod m, or None if a is not invertible.
    pub(super) fn inverse_mod(a: &[u64], m: &[u64], p: u64) -> Option<Vec<u64>> {
        let mut r0 = m.to_vec();
        let mut r1 = trimmed(a.to_vec());
        let mut s0: Vec<u64> = Vec::new();
        let mut s1: Vec<u64> = vec![1];
        while !r1.is_empty() {
            let (q, r) = divrem(&r0, &r1, p);
            let s = sub(&s0, &mul(&q, &s1, p), p);
            r0 = r1;
            r1 = r;
            s0 = s1;
            s1 = s;
        }
        if r0.len() != 1 {
            return None;
        }
        let c = inv_mod(r0[0], p);
        Some(rem(&s0.iter().map(|&x| x * c % p).collect::<Vec<_>>(), m, p))
    }

    #[cfg(test)]
    mod tests {
        use super::*;

        #[test]
        fn rabin_known_cases() {
            assert!(is_irreducible(&[1, 1, 1], 2));
            assert!(!is_irreducible(&[1, 0, 1], 2)); // (u+1)^2
            assert!(is_irreducible(&[1, 1, 0, 1], 2));
            assert!(is_irreducible(&[1, 0, 1], 3));
            assert!(!is_irreducible(&[1, 0, 0, 0, 1], 3)); // u^4+1 = (u^2+u+2)(u^2+2u+2)
            assert!(!is_irreducible(&[1, 0, 1, 0, 1], 2)); // (u^2+u+1)^2
        }
    }
}
