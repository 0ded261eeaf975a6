//! Artin–Schreier polynomials P(X) = X^p - X - b.
//!
//! Root finding in F_q((t)) (Frobenius iteration and general Newton/Hensel
//! lifting), reduction of b to a normal form modulo {y^p - y}, the exact
//! decision "is b = x^p - x for some x in F_q(t)", and the classification of
//! the degree-p extension by its invariants (e, f, g, d).

use std::fmt;
use std::str::FromStr;

use serde::ser::{SerializeMap, SerializeStruct};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::finite_field::{Field, FqElem, ResidueSolutions};
use crate::laurent::{LaurentSeries, SeriesValuation};
use crate::linalg;
use crate::literal::x_poly_literal;
use crate::poly::Poly;
use crate::rational::RatFunc;
use crate::value::Value;

/// Which valued field the element lives in.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Base {
    /// The complete field F_q((t)), elements known to O(t^N).
    Complete,
    /// The rational function field F_q(t) with the t-adic valuation.
    Rational,
}

impl fmt::Display for Base {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Base::Complete => "complete",
            Base::Rational => "rational",
        })
    }
}

impl FromStr for Base {
    type Err = Error;

    fn from_str(s: &str) -> Result<Base> {
        match s {
            "complete" => Ok(Base::Complete),
            "rational" => Ok(Base::Rational),
            _ => Err(Error::Parse(format!("unknown base {s:?}"))),
        }
    }
}

impl Serialize for Base {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// An element of either base field.
#[derive(Clone, PartialEq, Eq)]
pub enum Element {
    Series(LaurentSeries),
    Rational(RatFunc),
}

/// t-adic order of an [`Element`].
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Order {
    Exact(i64),
    /// Exact zero (rational base only).
    Zero,
    /// Zero to precision O(t^N).
    AtLeast(i64),
}

#[allow(clippy::should_implement_trait)]
impl Element {
    /// Parses a literal; series without an O-term are expanded to `prec`.
    pub fn parse(field: &Field, base: Base, literal: &str, prec: i64) -> Result<Element> {
        Ok(match base {
            Base::Complete => Element::Series(LaurentSeries::parse(field, literal, prec)?),
            Base::Rational => Element::Rational(RatFunc::parse(field, literal)?),
        })
    }

    pub fn base(&self) -> Base {
        match self {
            Element::Series(_) => Base::Complete,
            Element::Rational(_) => Base::Rational,
        }
    }

    pub fn field(&self) -> &Field {
        match self {
            Element::Series(s) => s.field(),
            Element::Rational(r) => r.field(),
        }
    }

    pub fn order(&self) -> Order {
        match self {
            Element::Series(s) => match s.valuation() {
                SeriesValuation::Finite(v) => Order::Exact(v),
                SeriesValuation::BelowPrecision(n) => Order::AtLeast(n),
            },
            Element::Rational(r) => r.ord().map_or(Order::Zero, Order::Exact),
        }
    }

    /// Coefficient of t^{order}.
    pub fn leading(&self) -> Option<FqElem> {
        match self {
            Element::Series(s) => s.leading_coeff(),
            Element::Rational(r) => r.leading_tadic_coeff(),
        }
    }

    /// `c * t^k` in the same base (and at the same precision).
    pub fn monomial_like(&self, c: &FqElem, k: i64) -> Element {
        match self {
            Element::Series(s) => Element::Series(LaurentSeries::monomial(c, k, s.prec())),
            Element::Rational(_) => Element::Rational(RatFunc::monomial(c, k)),
        }
    }

    pub fn zero_like(&self) -> Element {
        self.monomial_like(&self.field().zero(), 0)
    }

    pub fn add(&self, other: &Element) -> Result<Element> {
        match (self, other) {
            (Element::Series(a), Element::Series(b)) => Ok(Element::Series(a.add(b)?)),
            (Element::Rational(a), Element::Rational(b)) => Ok(Element::Rational(a.add(b)?)),
            _ => Err(mixed()),
        }
    }

    pub fn sub(&self, other: &Element) -> Result<Element> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Element) -> Result<Element> {
        match (self, other) {
            (Element::Series(a), Element::Series(b)) => Ok(Element::Series(a.mul(b)?)),
            (Element::Rational(a), Element::Rational(b)) => Ok(Element::Rational(a.mul(b)?)),
            _ => Err(mixed()),
        }
    }

    pub fn neg(&self) -> Element {
        match self {
            Element::Series(s) => Element::Series(s.neg()),
            Element::Rational(r) => Element::Rational(r.neg()),
        }
    }

    pub fn scale(&self, c: &FqElem) -> Result<Element> {
        Ok(match self {
            Element::Series(s) => Element::Series(s.scale(c)?),
            Element::Rational(r) => Element::Rational(r.scale(c)?),
        })
    }

    pub fn frobenius(&self) -> Result<Element> {
        Ok(match self {
            Element::Series(s) => Element::Series(s.frobenius()),
            Element::Rational(r) => Element::Rational(r.frobenius()?),
        })
    }

    /// x^p - x.
    pub fn artin_schreier(&self) -> Result<Element> {
        self.frobenius()?.sub(self)
    }

    /// The image in F_q((t)) to O(t^prec).
    pub fn expand(&self, prec: i64) -> LaurentSeries {
        match self {
            Element::Series(s) => s.truncate(prec),
            Element::Rational(r) => r.expand(prec),
        }
    }

    pub fn as_series(&self) -> Option<&LaurentSeries> {
        match self {
            Element::Series(s) => Some(s),
            Element::Rational(_) => None,
        }
    }

    pub fn as_rational(&self) -> Option<&RatFunc> {
        match self {
            Element::Rational(r) => Some(r),
            Element::Series(_) => None,
        }
    }
}

fn mixed() -> Error {
    Error::InvalidArgument("operands come from different base fields".into())
}

impl fmt::Display for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Series(s) => write!(f, "{s}"),
            Element::Rational(r) => write!(f, "{r}"),
        }
    }
}

impl fmt::Debug for Element {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Element::Series(s) => write!(f, "{s:?}"),
            Element::Rational(r) => write!(f, "{r:?}"),
        }
    }
}

impl Serialize for Element {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

// ---------------------------------------------------------------------------
// roots in the complete field

/// The p roots of X^p - X - b for v(b) >= 1, ordered by their constant term.
///
/// Iterates x -> x^p - b from 0 (Newton's step, since P' = -1) until the
/// update vanishes to precision.
pub fn as_solve_complete(b: &LaurentSeries) -> Result<Vec<LaurentSeries>> {
    match b.valuation() {
        SeriesValuation::Finite(v) if v < 1 => return Err(Error::ValuationNotPositive(v.to_string())),
        SeriesValuation::BelowPrecision(n) if n < 1 => return Err(Error::ValuationNotPositive(format!(">={n}"))),
        _ => {}
    }
    let field = b.field();
    let prec = b.prec();
    let mut x = LaurentSeries::zero(field, prec);
    // the valuation of the update grows at least p-fold per step
    for _ in 0..=64 {
        let next = x.frobenius().sub(b)?;
        let done = next.sub(&x)?.valuation().lower_bound() >= prec;
        x = next;
        if done {
            return field
                .prime_field_elements()?
                .iter()
                .map(|c| x.add(&LaurentSeries::constant(c, prec)))
                .collect();
        }
    }
    Err(Error::PrecisionExhausted("Frobenius iteration did not settle".into()))
}

/// Output of [`hensel_lift`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HenselLift {
    pub root: LaurentSeries,
    /// v(P(x_k)) for every Newton iterate, ending at or above the precision.
    pub history: Vec<SeriesValuation>,
}

fn eval_series(coeffs: &[LaurentSeries], x: &LaurentSeries) -> Result<LaurentSeries> {
    let mut acc = coeffs.last().expect("nonempty").clone();
    for c in coeffs.iter().rev().skip(1) {
        acc = acc.mul(x)?.add(c)?;
    }
    Ok(acc)
}

/// Lifts a simple root `alpha` of the residual polynomial to a root of
/// `P = Σ coeffs[i] X^i` in F_q[[t]] by Newton iteration.
pub fn hensel_lift(coeffs: &[LaurentSeries], alpha: &FqElem) -> Result<HenselLift> {
    if coeffs.is_empty() {
        return Err(Error::InvalidArgument("empty polynomial".into()));
    }
    let field = alpha.field();
    let mut residues = Vec::with_capacity(coeffs.len());
    for c in coeffs {
        if c.field() != field {
            return Err(Error::FieldMismatch);
        }
        residues.push(c.residue().map_err(|e| match e {
            Error::NegativeValuation(_) => Error::NonIntegralCoefficients,
            e => e,
        })?);
    }
    let pbar = Poly::from_coeffs(field, &residues)?;
    if !pbar.eval(alpha)?.is_zero() || pbar.derivative().eval(alpha)?.is_zero() {
        return Err(Error::NotASimpleResidualRoot(alpha.to_string()));
    }
    let target = coeffs.iter().map(|c| c.prec()).min().expect("nonempty");
    let deriv: Vec<LaurentSeries> = coeffs
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale(&field.from_int(i as i64)))
        .collect::<Result<_>>()?;

    let mut x = LaurentSeries::constant(alpha, target);
    let mut history = Vec::new();
    for _ in 0..=64 {
        let px = eval_series(coeffs, &x)?;
        let v = px.valuation();
        history.push(v);
        if v.lower_bound() >= target {
            return Ok(HenselLift {
                root: x.truncate(target),
                history,
            });
        }
        let dx = eval_series(&deriv, &x)?;
        x = x.sub(&px.div(&dx)?)?.truncate(target);
    }
    Err(Error::PrecisionExhausted("Newton iteration did not converge".into()))
}

// ---------------------------------------------------------------------------
// reduction

/// Reduces b modulo {y^p - y}: returns `(reduced, y)` with
/// `reduced = b - (y^p - y)` and `reduced` in normal form: v > 0, or v < 0
/// with p ∤ v, or v = 0 with a residue of nonzero trace.
pub fn as_reduce(b: &Element) -> Result<(Element, Element)> {
    let p = b.field().characteristic() as i64;
    let mut r = b.clone();
    let mut shift = b.zero_like();
    let prec = match b {
        Element::Series(s) => s.prec(),
        Element::Rational(_) => 1,
    };
    let start = match b.order() {
        Order::Exact(v) => v.abs(),
        _ => 0,
    };
    for _ in 0..=(start + prec.abs() + 1) {
        match r.order() {
            Order::Zero => return Ok((r, shift)),
            Order::AtLeast(n) if n >= 1 => return Ok((r, shift)),
            Order::AtLeast(n) => {
                return Err(Error::PrecisionExhausted(format!(
                    "reduction of {b} left 0 + O(t^{n}) with no normal form"
                )))
            }
            Order::Exact(v) if v > 0 => return Ok((r, shift)),
            Order::Exact(v) if v < 0 => {
                if v % p != 0 {
                    return Ok((r, shift));
                }
                let c = r.leading().expect("nonzero").pth_root();
                let u = r.monomial_like(&c, v / p);
                r = r.sub(&u.artin_schreier()?)?;
                shift = shift.add(&u)?;
            }
            Order::Exact(_) => {
                let c = r.leading().expect("nonzero");
                match c.as_solve_residue() {
                    ResidueSolutions::Unsolvable => return Ok((r, shift)),
                    ResidueSolutions::Solvable(ys) => {
                        // y^p - y = c exactly, so subtract the constant c
                        r = r.sub(&r.monomial_like(&c, 0))?;
                        shift = shift.add(&r.monomial_like(&ys[0], 0))?;
                    }
                }
            }
        }
    }
    Err(Error::PrecisionExhausted(format!("reduction of {b} did not terminate")))
}

// ---------------------------------------------------------------------------
// membership in {x^p - x : x in F_q(t)}

/// Why b is not of the form x^p - x in F_q(t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Certificate {
    /// b has a finite pole of order not divisible by p along `place`
    /// (a squarefree factor of the denominator).
    PoleOrder { place: Poly, order: u64 },
    /// Pole orders are fine but no proper fraction R/E with
    /// R^p - R E^{p-1} equal to the proper part of b exists.
    PrincipalPart { denominator_root: Poly },
    /// The polynomial part reduces to degree `degree` with p ∤ degree.
    Degree { degree: usize },
    /// The polynomial part reduces to a constant whose trace is nonzero.
    ResidueTrace { constant: FqElem, trace: FqElem },
}

impl Serialize for Certificate {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        match self {
            Certificate::PoleOrder { place, order } => {
                m.serialize_entry("kind", "pole_order")?;
                m.serialize_entry("place", &place.to_string())?;
                m.serialize_entry("order", order)?;
            }
            Certificate::PrincipalPart { denominator_root } => {
                m.serialize_entry("kind", "principal_part")?;
                m.serialize_entry("denominator_root", &denominator_root.to_string())?;
            }
            Certificate::Degree { degree } => {
                m.serialize_entry("kind", "degree")?;
                m.serialize_entry("degree", degree)?;
            }
            Certificate::ResidueTrace { constant, trace } => {
                m.serialize_entry("kind", "residue_trace")?;
                m.serialize_entry("constant", &constant.to_string())?;
                m.serialize_entry("trace", &trace.to_string())?;
            }
        }
        m.end()
    }
}

impl fmt::Display for Certificate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Certificate::PoleOrder { place, order } => {
                write!(f, "pole of order {order} at the place {place}, not divisible by p")
            }
            Certificate::PrincipalPart { denominator_root } => {
                write!(
                    f,
                    "principal part over ({denominator_root})^p is not of the form x^p - x"
                )
            }
            Certificate::Degree { degree } => {
                write!(f, "polynomial part reduces to degree {degree}, not a multiple of p")
            }
            Certificate::ResidueTrace { constant, trace } => {
                write!(f, "constant {constant} has trace {trace} != 0")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Membership {
    /// `x` is one solution; all of them are x + c, c in F_p.
    Solvable {
        x: RatFunc,
    },
    NotSolvable {
        certificate: Certificate,
    },
}

impl Membership {
    pub fn is_solvable(&self) -> bool {
        matches!(self, Membership::Solvable { .. })
    }

    /// All p solutions when solvable.
    pub fn solutions(&self) -> Result<Vec<RatFunc>> {
        match self {
            Membership::Solvable { x } => x
                .field()
                .prime_field_elements()?
                .into_iter()
                .map(|c| x.add(&RatFunc::constant(c)))
                .collect(),
            Membership::NotSolvable { .. } => Ok(Vec::new()),
        }
    }
}

impl Serialize for Membership {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        match self {
            Membership::Solvable { .. } => {
                m.serialize_entry("verdict", "solvable")?;
                let sols: Vec<String> = self
                    .solutions()
                    .map_err(serde::ser::Error::custom)?
                    .iter()
                    .map(|x| x.to_string())
                    .collect();
                m.serialize_entry("solutions", &sols)?;
            }
            Membership::NotSolvable { certificate } => {
                m.serialize_entry("verdict", "not_solvable")?;
                m.serialize_entry("certificate", certificate)?;
            }
        }
        m.end()
    }
}

/// Decides whether b = x^p - x has a solution x in F_q(t).
///
/// A solution must have denominator E with E^p = den(b). Writing
/// x = Q + R/E (deg R < deg E) splits the equation into a polynomial part,
/// solved top-down, and a proper part, which is an F_p-linear system.
pub fn membership_rational(b: &RatFunc) -> Result<Membership> {
    let field = b.field();
    let p = field.characteristic();
    if b.is_zero() {
        return Ok(Membership::Solvable {
            x: RatFunc::zero(field),
        });
    }
    let den = b.den();
    let Some(e) = den.pth_root() else {
        let parts = den.squarefree_decomposition()?;
        let (place, order) = parts.into_iter().find(|(_, m)| m % p != 0).ok_or_else(|| {
            Error::InternalConsistency(format!(
                "{den} has no p-th root yet all multiplicities are multiples of p"
            ))
        })?;
        return Ok(Membership::NotSolvable {
            certificate: Certificate::PoleOrder { place, order },
        });
    };
    let (q0, a1) = b.num().divrem(den)?;

    let r = match solve_proper_part(&e, &a1)? {
        Some(r) => r,
        None => {
            return Ok(Membership::NotSolvable {
                certificate: Certificate::PrincipalPart { denominator_root: e },
            })
        }
    };

    // polynomial part, highest degree first
    let mut c = q0;
    let mut q = Poly::zero(field);
    while let Some(d) = c.degree().filter(|&d| d >= 1) {
        if !(d as u64).is_multiple_of(p) {
            return Ok(Membership::NotSolvable {
                certificate: Certificate::Degree { degree: d },
            });
        }
        let m = Poly::monomial(&c.lead().expect("nonzero").pth_root(), d / p as usize);
        c = c.sub(&m.frobenius()?.sub(&m)?)?;
        q = q.add(&m)?;
    }
    let c0 = c.coeff(0);
    match c0.as_solve_residue() {
        ResidueSolutions::Unsolvable => {
            let trace = c0.trace_to_prime();
            return Ok(Membership::NotSolvable {
                certificate: Certificate::ResidueTrace { constant: c0, trace },
            });
        }
        ResidueSolutions::Solvable(ys) => q = q.add(&Poly::constant(&ys[0]))?,
    }

    let x = RatFunc::from_poly(q).add(&RatFunc::new(r, e)?)?;
    if &x.artin_schreier()? != b {
        return Err(Error::InternalConsistency(format!(
            "membership solution {x} does not satisfy x^p - x = {b}"
        )));
    }
    Ok(Membership::Solvable { x })
}

/// Finds R with deg R < deg E and R^p - R E^{p-1} = target, if any.
fn solve_proper_part(e: &Poly, target: &Poly) -> Result<Option<Poly>> {
    let field = e.field();
    let p = field.characteristic();
    let n = field.degree();
    let k = e.degree().expect("nonzero");
    if k == 0 {
        return Ok(target.is_zero().then(|| Poly::zero(field)));
    }
    let e_pow = e.pow(p - 1)?;
    let rows_len = p as usize * k * n;
    let unknowns = k * n;
    let basis: Vec<FqElem> = (0..n)
        .map(|l| {
            let mut v = vec![0u64; n];
            v[l] = 1;
            field.element(&v)
        })
        .collect::<Result<_>>()?;
    let flatten = |poly: &Poly| -> Vec<u64> {
        let mut out = vec![0u64; rows_len];
        for (i, c) in poly.coeffs().iter().enumerate() {
            for (l, x) in c.coeffs().into_iter().enumerate() {
                out[i * n + l] = x;
            }
        }
        out
    };
    let mut columns = Vec::with_capacity(unknowns);
    for j in 0..k {
        for beta in &basis {
            let r = Poly::monomial(beta, j);
            columns.push(flatten(&r.frobenius()?.sub(&r.mul(&e_pow)?)?));
        }
    }
    let rows: Vec<Vec<u64>> = (0..rows_len)
        .map(|i| columns.iter().map(|col| col[i]).collect())
        .collect();
    let Some(sol) = linalg::solve(&rows, &flatten(target), unknowns, p) else {
        return Ok(None);
    };
    let coeffs: Vec<FqElem> = sol.chunks(n).map(|ch| field.element(ch)).collect::<Result<_>>()?;
    Ok(Some(Poly::from_coeffs(field, &coeffs)?))
}

// ---------------------------------------------------------------------------
// classification

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum ExtensionKind {
    Split,
    Ramified,
    Residual,
    Immediate,
}

impl fmt::Display for ExtensionKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

impl Serialize for ExtensionKind {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

/// One extension of the valuation, induced by embedding a into F_q((t)).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Embedding {
    pub index: usize,
    pub root: LaurentSeries,
    pub valuation_of_root: SeriesValuation,
}

/// A polynomial Q(X) whose value at a separates two embeddings.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Distinguisher {
    pub embeddings: (usize, usize),
    /// Ascending coefficients of Q.
    pub element: Vec<RatFunc>,
    pub valuations: (SeriesValuation, SeriesValuation),
}

impl Serialize for Distinguisher {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Distinguisher", 3)?;
        st.serialize_field("embeddings", &[self.embeddings.0, self.embeddings.1])?;
        st.serialize_field("element", &x_poly_literal(&self.element))?;
        st.serialize_field("valuations", &[self.valuations.0, self.valuations.1])?;
        st.end()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Evidence {
    Split {
        roots: Vec<Element>,
    },
    Ramified {
        /// -v(reduced_b).
        pole_order: i64,
        /// v(a - shift) = v(reduced_b) / p.
        root_valuation: Value,
        /// t^{t_exponent} (a - shift)^{root_exponent} has valuation 1/p.
        t_exponent: i64,
        root_exponent: i64,
    },
    Residual {
        residue: FqElem,
        residue_trace: FqElem,
    },
    Immediate {
        embeddings: Vec<Embedding>,
        distinguishing: Vec<Distinguisher>,
    },
}

impl Serialize for Evidence {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        match self {
            Evidence::Split { roots } => m.serialize_entry("roots", roots)?,
            Evidence::Ramified {
                pole_order,
                root_valuation,
                t_exponent,
                root_exponent,
            } => {
                m.serialize_entry("pole_order", pole_order)?;
                m.serialize_entry("root_valuation", root_valuation)?;
                m.serialize_entry("uniformizer", &[t_exponent, root_exponent])?;
            }
            Evidence::Residual { residue, residue_trace } => {
                m.serialize_entry("residue", &residue.to_string())?;
                m.serialize_entry("residue_trace", &residue_trace.to_string())?;
            }
            Evidence::Immediate {
                embeddings,
                distinguishing,
            } => {
                m.serialize_entry("embeddings", embeddings)?;
                m.serialize_entry("distinguishing", distinguishing)?;
            }
        }
        m.end()
    }
}

/// Classification of K(a)/K with a^p - a = b.
///
/// A split polynomial is reported as (e, f, g, d) = (1, 1, p, 1): p places
/// of degree one, so e·f·g·d = p holds for every report.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtensionReport {
    pub kind: ExtensionKind,
    pub e: u64,
    pub f: u64,
    pub g: u64,
    pub d: u64,
    pub reduced_b: Element,
    pub shift: Element,
    pub evidence: Evidence,
}

impl ExtensionReport {
    pub fn invariants(&self) -> (u64, u64, u64, u64) {
        (self.e, self.f, self.g, self.d)
    }

    /// e·f·g·d.
    pub fn degree(&self) -> u64 {
        self.e * self.f * self.g * self.d
    }
}

impl Serialize for ExtensionReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("ExtensionReport", 8)?;
        st.serialize_field("kind", &self.kind)?;
        st.serialize_field("e", &self.e)?;
        st.serialize_field("f", &self.f)?;
        st.serialize_field("g", &self.g)?;
        st.serialize_field("d", &self.d)?;
        st.serialize_field("reduced_b", &self.reduced_b)?;
        st.serialize_field("shift", &self.shift)?;
        st.serialize_field("evidence", &self.evidence)?;
        st.end()
    }
}

/// Classifies the extension defined by X^p - X - b. `prec` is the working
/// precision for completion roots when b is rational.
pub fn classify_extension(b: &Element, prec: i64) -> Result<ExtensionReport> {
    let field = b.field().clone();
    let p = field.characteristic();
    let (reduced_b, shift) = as_reduce(b)?;
    let report = |kind, (e, f, g, d), evidence| ExtensionReport {
        kind,
        e,
        f,
        g,
        d,
        reduced_b: reduced_b.clone(),
        shift: shift.clone(),
        evidence,
    };
    match reduced_b.order() {
        Order::Exact(v) if v < 0 => {
            let m = -v;
            let pi = p as i64;
            let m_inv = linalg::inv_mod(m.rem_euclid(pi) as u64, p) as i64;
            let beta = (pi - m_inv) % pi;
            let alpha = (1 + beta * m) / pi;
            Ok(report(
                ExtensionKind::Ramified,
                (p, 1, 1, 1),
                Evidence::Ramified {
                    pole_order: m,
                    root_valuation: Value::frac(v, p),
                    t_exponent: alpha,
                    root_exponent: beta,
                },
            ))
        }
        Order::Exact(0) => {
            let residue = reduced_b.leading().expect("nonzero");
            let residue_trace = residue.trace_to_prime();
            Ok(report(
                ExtensionKind::Residual,
                (1, p, 1, 1),
                Evidence::Residual { residue, residue_trace },
            ))
        }
        _ => match b {
            Element::Series(_) => {
                let roots = as_solve_complete(reduced_b.as_series().expect("series"))?
                    .into_iter()
                    .map(|r| shift.add(&Element::Series(r)))
                    .collect::<Result<_>>()?;
                Ok(report(ExtensionKind::Split, (1, 1, p, 1), Evidence::Split { roots }))
            }
            Element::Rational(rb) => match membership_rational(rb)? {
                m @ Membership::Solvable { .. } => {
                    let roots = m.solutions()?.into_iter().map(Element::Rational).collect();
                    Ok(report(ExtensionKind::Split, (1, 1, p, 1), Evidence::Split { roots }))
                }
                Membership::NotSolvable { .. } => {
                    let (embeddings, distinguishing, g) = immediate_evidence(&reduced_b, &shift, prec)?;
                    if g != p {
                        return Err(Error::InternalConsistency(format!(
                            "immediate extension with g = {g} would need defect p/g over F_q(t)"
                        )));
                    }
                    Ok(report(
                        ExtensionKind::Immediate,
                        (1, 1, g, p / g),
                        Evidence::Immediate {
                            embeddings,
                            distinguishing,
                        },
                    ))
                }
            },
        },
    }
}

/// True when the two valuations are certainly different.
fn separated(a: SeriesValuation, b: SeriesValuation) -> bool {
    use SeriesValuation::*;
    match (a, b) {
        (Finite(x), Finite(y)) => x != y,
        (Finite(x), BelowPrecision(n)) | (BelowPrecision(n), Finite(x)) => n > x,
        _ => false,
    }
}

/// Truncation Σ_{k<m} c_k t^k of a series, as an exact rational function.
fn truncation(s: &LaurentSeries, m: i64) -> RatFunc {
    let field = s.field();
    let mut acc = RatFunc::zero(field);
    for (k, c) in s.terms().take_while(|(k, _)| *k < m) {
        acc = acc.add(&RatFunc::monomial(&c, k)).expect("same field");
    }
    acc
}

/// Completion roots, their valuations, and a separating element for every
/// pair of embeddings that can be told apart. Returns the number of
/// distinct induced valuations as the last component.
fn immediate_evidence(
    reduced: &Element,
    shift: &Element,
    prec: i64,
) -> Result<(Vec<Embedding>, Vec<Distinguisher>, u64)> {
    let field = reduced.field();
    let shift_s = shift.expand(prec);
    let roots: Vec<LaurentSeries> = as_solve_complete(&reduced.expand(prec))?
        .iter()
        .map(|r| shift_s.add(r))
        .collect::<Result<_>>()?;
    let p = roots.len();
    let embeddings: Vec<Embedding> = roots
        .iter()
        .enumerate()
        .map(|(index, r)| Embedding {
            index,
            root: r.clone(),
            valuation_of_root: r.valuation(),
        })
        .collect();

    // powers a^k for the basis search
    let mut powers: Vec<Vec<LaurentSeries>> = Vec::with_capacity(p);
    for r in &roots {
        let mut pw = vec![LaurentSeries::one(field, prec)];
        for k in 1..p {
            pw.push(pw[k - 1].mul(r)?);
        }
        powers.push(pw);
    }

    let mut parent: Vec<usize> = (0..p).collect();
    fn find(parent: &mut [usize], i: usize) -> usize {
        let mut i = i;
        while parent[i] != i {
            parent[i] = parent[parent[i]];
            i = parent[i];
        }
        i
    }
    let mut distinguishing = Vec::new();
    for i in 0..p {
        for j in i + 1..p {
            let mut found = None;
            for k in 1..p {
                let (a, b) = (powers[i][k].valuation(), powers[j][k].valuation());
                if separated(a, b) {
                    let mut element = vec![RatFunc::zero(field); k + 1];
                    element[k] = RatFunc::one(field);
                    found = Some((element, (a, b)));
                    break;
                }
            }
            if found.is_none() {
                let start = roots[i].valuation().lower_bound().min(0);
                for m in start + 1..=prec {
                    let r = truncation(&roots[i], m);
                    let rs = r.expand(prec);
                    let (a, b) = (roots[i].sub(&rs)?.valuation(), roots[j].sub(&rs)?.valuation());
                    if separated(a, b) {
                        found = Some((vec![r.neg(), RatFunc::one(field)], (a, b)));
                        break;
                    }
                }
            }
            match found {
                Some((element, valuations)) => distinguishing.push(Distinguisher {
                    embeddings: (i, j),
                    element,
                    valuations,
                }),
                None => {
                    let (ri, rj) = (find(&mut parent, i), find(&mut parent, j));
                    parent[ri] = rj;
                }
            }
        }
    }
    let g = (0..p).filter(|&i| find(&mut parent, i) == i).count() as u64;
    Ok((embeddings, distinguishing, g))
}

// ---------------------------------------------------------------------------
// valuation on the extension

/// Valuation of Q(a) for Q of degree < p.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExtValuation {
    /// The unique extension (ramified and residual cases).
    Unique(Value),
    /// One value per embedding (immediate case).
    PerEmbedding(Vec<SeriesValuation>),
}

impl Serialize for ExtValuation {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            ExtValuation::Unique(v) => v.serialize(s),
            ExtValuation::PerEmbedding(vs) => vs.serialize(s),
        }
    }
}

impl fmt::Display for ExtValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtValuation::Unique(v) => write!(f, "{v}"),
            ExtValuation::PerEmbedding(vs) => {
                let parts: Vec<String> = vs.iter().map(|v| v.to_string()).collect();
                write!(f, "({})", parts.join(", "))
            }
        }
    }
}

/// Coefficients of Q(Y + s) from those of Q(X).
fn taylor_shift(q: &[Element], s: &Element) -> Result<Vec<Element>> {
    let zero = s.zero_like();
    let mut acc: Vec<Element> = Vec::new();
    for c in q.iter().rev() {
        let mut next = vec![zero.clone(); acc.len() + 1];
        for (i, a) in acc.iter().enumerate() {
            next[i + 1] = next[i + 1].add(a)?;
            next[i] = next[i].add(&a.mul(s)?)?;
        }
        next[0] = next[0].add(c)?;
        acc = next;
    }
    Ok(acc)
}

/// v(Q(a)) on K(a) for the extension described by `report`, where
/// `q` holds the ascending coefficients of Q.
pub fn extension_valuation(q: &[Element], report: &ExtensionReport) -> Result<ExtValuation> {
    let p = report.reduced_b.field().characteristic() as usize;
    if q.len() > p {
        return Err(Error::InvalidArgument(format!("Q must have degree < p = {p}")));
    }
    if q.iter().any(|c| c.base() != report.reduced_b.base()) {
        return Err(mixed());
    }
    match &report.evidence {
        Evidence::Split { .. } => Err(Error::SplitExtensionHasNoCanonicalValuation),
        Evidence::Immediate { embeddings, .. } => {
            let prec = embeddings.first().map(|e| e.root.prec()).unwrap_or(0);
            let field = report.reduced_b.field();
            let mut vals = Vec::with_capacity(embeddings.len());
            for emb in embeddings {
                let mut acc = LaurentSeries::zero(field, prec);
                for c in q.iter().rev() {
                    acc = acc.mul(&emb.root)?.add(&c.expand(prec))?;
                }
                vals.push(acc.valuation());
            }
            if !vals.is_empty() && vals.iter().all(|v| v.finite().is_none()) {
                return Err(Error::PrecisionExhausted(
                    "Q(a) vanishes to precision on every embedding".into(),
                ));
            }
            Ok(ExtValuation::PerEmbedding(vals))
        }
        Evidence::Ramified { root_valuation, .. } => unique_valuation(q, report, *root_valuation),
        Evidence::Residual { .. } => unique_valuation(q, report, Value::int(0)),
    }
}

/// min_i v(q̃_i) + i·w(Y) for Q(Y + shift) = Σ q̃_i Y^i; the minimum is
/// attained by a single term in the ramified and residual cases.
fn unique_valuation(q: &[Element], report: &ExtensionReport, w: Value) -> Result<ExtValuation> {
    let shifted = taylor_shift(q, &report.shift)?;
    let mut exact: Option<Value> = None;
    let mut bounds = Vec::new();
    for (i, c) in shifted.iter().enumerate() {
        let iw = w.scale(i as i64);
        match c.order() {
            Order::Zero => {}
            Order::Exact(v) => {
                let val = Value::int(v).add(iw);
                exact = Some(exact.map_or(val, |m| m.min(val)));
            }
            Order::AtLeast(n) => bounds.push(Value::int(n).add(iw)),
        }
    }
    match exact {
        Some(m) if bounds.iter().all(|b| *b > m) => Ok(ExtValuation::Unique(m)),
        Some(_) => Err(Error::PrecisionExhausted(
            "coefficient precision too low to fix the minimum".into(),
        )),
        None if bounds.is_empty() => Ok(ExtValuation::Unique(Value::Infinity)),
        None => Err(Error::PrecisionExhausted("Q(a) vanishes to precision".into())),
    }
}
