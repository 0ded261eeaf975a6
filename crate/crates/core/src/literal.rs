//! Text syntax for field elements, rational functions and truncated series.
//!
//! One small expression grammar serves every literal:
//!
//! ```text
//! expr   := ["+"|"-"] term (("+"|"-") term)* ["+" "O(t^" int ")"]
//! term   := power (("*"|"/")? power)*
//! power  := atom ["^" ["-"] int]
//! atom   := int | "t" | "u" | "(" expr ")"
//! ```
//!
//! Juxtaposition multiplies, so `2t^3` and `2*t^3` are the same term. The
//! printers in this crate only emit the explicit form.

use crate::error::{Error, Result};
use crate::finite_field::{Field, FqElem};
use crate::laurent::LaurentSeries;
use crate::poly::Poly;
use crate::rational::RatFunc;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(String),
    Var(char),
    Order,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
}

fn tokenize(s: &str) -> Result<Vec<Tok>> {
    let mut out = Vec::new();
    let mut chars = s.chars().peekable();
    while let Some(&c) = chars.peek() {
        match c {
            c if c.is_whitespace() => {
                chars.next();
            }
            '0'..='9' => {
                let mut digits = String::new();
                while let Some(&d) = chars.peek() {
                    if d.is_ascii_digit() {
                        digits.push(d);
                        chars.next();
                    } else {
                        break;
                    }
                }
                out.push(Tok::Int(digits));
            }
            't' | 'u' | 'X' => {
                out.push(Tok::Var(c));
                chars.next();
            }
            'O' => {
                out.push(Tok::Order);
                chars.next();
            }
            '+' | '-' | '*' | '/' | '^' | '(' | ')' => {
                out.push(match c {
                    '+' => Tok::Plus,
                    '-' => Tok::Minus,
                    '*' => Tok::Star,
                    '/' => Tok::Slash,
                    '^' => Tok::Caret,
                    '(' => Tok::LParen,
                    _ => Tok::RParen,
                });
                chars.next();
            }
            other => return Err(Error::Parse(format!("unexpected character {other:?} in {s:?}"))),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Expr {
    Int(String),
    Var(char),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>),
    Pow(Box<Expr>, i64),
}

struct Parser<'a> {
    toks: Vec<Tok>,
    pos: usize,
    src: &'a str,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Result<Self> {
        Ok(Parser {
            toks: tokenize(src)?,
            pos: 0,
            src,
        })
    }

    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos)
    }

    fn next(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).cloned();
        self.pos += 1;
        t
    }

    fn err<T>(&self, what: &str) -> Result<T> {
        Err(Error::Parse(format!("{what} in {:?}", self.src)))
    }

    fn expect(&mut self, tok: Tok) -> Result<()> {
        match self.next() {
            Some(t) if t == tok => Ok(()),
            _ => self.err(&format!("expected {tok:?}")),
        }
    }

    /// Parses the whole input; returns the expression (absent for a bare
    /// `O(t^N)`) and the order term if present.
    fn top(&mut self) -> Result<(Option<Expr>, Option<i64>)> {
        if self.peek() == Some(&Tok::Order) {
            let n = self.order_term()?;
            return self.finish(None, Some(n));
        }
        let mut lhs = match self.peek() {
            Some(Tok::Minus) => {
                self.next();
                Expr::Neg(Box::new(self.term()?))
            }
            Some(Tok::Plus) => {
                self.next();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    if self.peek() == Some(&Tok::Order) {
                        let n = self.order_term()?;
                        return self.finish(Some(lhs), Some(n));
                    }
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.next();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return self.finish(Some(lhs), None),
            }
        }
    }

    fn finish(&self, e: Option<Expr>, n: Option<i64>) -> Result<(Option<Expr>, Option<i64>)> {
        if self.pos != self.toks.len() {
            return self.err("trailing input");
        }
        Ok((e, n))
    }

    fn order_term(&mut self) -> Result<i64> {
        self.expect(Tok::Order)?;
        self.expect(Tok::LParen)?;
        self.expect(Tok::Var('t'))?;
        self.expect(Tok::Caret)?;
        let n = self.signed_int()?;
        self.expect(Tok::RParen)?;
        Ok(n)
    }

    fn signed_int(&mut self) -> Result<i64> {
        let neg = match self.peek() {
            Some(Tok::Minus) => {
                self.next();
                true
            }
            Some(Tok::Plus) => {
                self.next();
                false
            }
            _ => false,
        };
        match self.next() {
            Some(Tok::Int(d)) => {
                let v: i64 = d
                    .parse()
                    .map_err(|_| Error::Parse(format!("exponent {d} out of range")))?;
                Ok(if neg { -v } else { v })
            }
            _ => self.err("expected an integer exponent"),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut lhs = match self.peek() {
            Some(Tok::Minus) => {
                self.next();
                Expr::Neg(Box::new(self.term()?))
            }
            Some(Tok::Plus) => {
                self.next();
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.next();
                    lhs = Expr::Add(Box::new(lhs), Box::new(self.term()?));
                }
                Some(Tok::Minus) => {
                    self.next();
                    lhs = Expr::Sub(Box::new(lhs), Box::new(self.term()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut lhs = self.power()?;
        loop {
            match self.peek() {
                Some(Tok::Star) => {
                    self.next();
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                Some(Tok::Slash) => {
                    self.next();
                    lhs = Expr::Div(Box::new(lhs), Box::new(self.power()?));
                }
                Some(Tok::Int(_)) | Some(Tok::Var(_)) | Some(Tok::LParen) => {
                    lhs = Expr::Mul(Box::new(lhs), Box::new(self.power()?));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if self.peek() == Some(&Tok::Caret) {
            self.next();
            let e = self.signed_int()?;
            return Ok(Expr::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Expr> {
        match self.next() {
            Some(Tok::Int(d)) => Ok(Expr::Int(d)),
            Some(Tok::Var(c)) => Ok(Expr::Var(c)),
            Some(Tok::LParen) => {
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            _ => self.err("expected a number, a variable or '('"),
        }
    }
}

fn digits_mod(d: &str, p: u64) -> i64 {
    d.bytes().fold(0u64, |acc, b| (acc * 10 + (b - b'0') as u64) % p) as i64
}

/// Evaluation into some ring of the expression tree.
trait Target {
    type V;
    fn int(&self, digits: &str) -> Result<Self::V>;
    fn var(&self, c: char) -> Result<Self::V>;
    fn add(&self, a: Self::V, b: Self::V) -> Result<Self::V>;
    fn sub(&self, a: Self::V, b: Self::V) -> Result<Self::V>;
    fn mul(&self, a: Self::V, b: Self::V) -> Result<Self::V>;
    fn div(&self, a: Self::V, b: Self::V) -> Result<Self::V>;
    fn neg(&self, a: Self::V) -> Result<Self::V>;
    fn pow(&self, a: Self::V, e: i64) -> Result<Self::V>;

    fn eval(&self, e: &Expr) -> Result<Self::V> {
        match e {
            Expr::Int(d) => self.int(d),
            Expr::Var(c) => self.var(*c),
            Expr::Neg(a) => {
                let a = self.eval(a)?;
                self.neg(a)
            }
            Expr::Add(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                self.add(a, b)
            }
            Expr::Sub(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                self.sub(a, b)
            }
            Expr::Mul(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                self.mul(a, b)
            }
            Expr::Div(a, b) => {
                let (a, b) = (self.eval(a)?, self.eval(b)?);
                self.div(a, b)
            }
            Expr::Pow(a, k) => {
                let a = self.eval(a)?;
                self.pow(a, *k)
            }
        }
    }
}

struct FqTarget<'a>(&'a Field);

impl Target for FqTarget<'_> {
    type V = FqElem;
    fn int(&self, d: &str) -> Result<FqElem> {
        Ok(self.0.from_int(digits_mod(d, self.0.characteristic())))
    }
    fn var(&self, c: char) -> Result<FqElem> {
        match c {
            'u' => self.0.generator(),
            c => Err(Error::Parse(format!("variable {c} is not a field constant"))),
        }
    }
    fn add(&self, a: FqElem, b: FqElem) -> Result<FqElem> {
        a.add(&b)
    }
    fn sub(&self, a: FqElem, b: FqElem) -> Result<FqElem> {
        a.sub(&b)
    }
    fn mul(&self, a: FqElem, b: FqElem) -> Result<FqElem> {
        a.mul(&b)
    }
    fn div(&self, a: FqElem, b: FqElem) -> Result<FqElem> {
        a.div(&b)
    }
    fn neg(&self, a: FqElem) -> Result<FqElem> {
        Ok(a.neg())
    }
    fn pow(&self, a: FqElem, e: i64) -> Result<FqElem> {
        a.pow(e)
    }
}

/// Rational functions in `t`; `var` names the indeterminate and `u` (when
/// `var` is not `u`) is the field generator.
struct RatTarget<'a> {
    field: &'a Field,
    var: char,
}

impl Target for RatTarget<'_> {
    type V = RatFunc;
    fn int(&self, d: &str) -> Result<RatFunc> {
        Ok(RatFunc::constant(
            self.field.from_int(digits_mod(d, self.field.characteristic())),
        ))
    }
    fn var(&self, c: char) -> Result<RatFunc> {
        if c == self.var {
            Ok(RatFunc::t(self.field))
        } else if c == 'u' {
            Ok(RatFunc::constant(self.field.generator()?))
        } else {
            Err(Error::Parse(format!("unexpected variable {c}")))
        }
    }
    fn add(&self, a: RatFunc, b: RatFunc) -> Result<RatFunc> {
        a.add(&b)
    }
    fn sub(&self, a: RatFunc, b: RatFunc) -> Result<RatFunc> {
        a.sub(&b)
    }
    fn mul(&self, a: RatFunc, b: RatFunc) -> Result<RatFunc> {
        a.mul(&b)
    }
    fn div(&self, a: RatFunc, b: RatFunc) -> Result<RatFunc> {
        a.div(&b)
    }
    fn neg(&self, a: RatFunc) -> Result<RatFunc> {
        Ok(a.neg())
    }
    fn pow(&self, a: RatFunc, e: i64) -> Result<RatFunc> {
        a.pow(e)
    }
}

fn no_order(src: &str, n: Option<i64>) -> Result<()> {
    match n {
        Some(_) => Err(Error::Parse(format!("unexpected O(t^N) term in {src:?}"))),
        None => Ok(()),
    }
}

pub(crate) fn parse_fq(field: &Field, s: &str) -> Result<FqElem> {
    let (e, n) = Parser::new(s)?.top()?;
    no_order(s, n)?;
    FqTarget(field).eval(&e.expect("an expression is present without O-term"))
}

/// Parses a polynomial in `var` over F_p into ascending coefficients.
pub(crate) fn parse_prime_poly(s: &str, p: u64, var: char) -> Result<Vec<u64>> {
    let field = Field::prime(p)?;
    let (e, n) = Parser::new(s)?.top()?;
    no_order(s, n)?;
    let r = RatTarget { field: &field, var }.eval(&e.expect("expression present"))?;
    if !r.den().is_one() {
        return Err(Error::Parse(format!("{s:?} is not a polynomial")));
    }
    Ok(r.num().coeffs().iter().map(|c| c.as_prime().unwrap_or(0)).collect())
}

pub(crate) fn parse_rational(field: &Field, s: &str) -> Result<RatFunc> {
    let (e, n) = Parser::new(s)?.top()?;
    no_order(s, n)?;
    RatTarget { field, var: 't' }.eval(&e.expect("expression present"))
}

/// Parses a series literal. Without an `O(t^N)` term the element is
/// expanded to `default_prec`.
pub(crate) fn parse_series(field: &Field, s: &str, default_prec: i64) -> Result<LaurentSeries> {
    let (e, n) = Parser::new(s)?.top()?;
    let prec = n.unwrap_or(default_prec);
    match e {
        None => Ok(LaurentSeries::zero(field, prec)),
        Some(e) => {
            let r = RatTarget { field, var: 't' }.eval(&e)?;
            Ok(r.expand(prec))
        }
    }
}

/// Parses a polynomial in `X` whose coefficients are rational functions in
/// `t`, e.g. `X^2 + t*X + 1/t`. Returns ascending coefficients.
pub fn parse_x_poly(field: &Field, s: &str) -> Result<Vec<RatFunc>> {
    let (e, n) = Parser::new(s)?.top()?;
    no_order(s, n)?;
    let e = e.expect("expression present");
    XTarget { field }.eval(&e)
}

/// Polynomials in X with rational-function coefficients; division only by
/// X-free expressions.
struct XTarget<'a> {
    field: &'a Field,
}

impl XTarget<'_> {
    fn trim(mut v: Vec<RatFunc>) -> Vec<RatFunc> {
        while v.last().is_some_and(|c| c.is_zero()) {
            v.pop();
        }
        v
    }
}

impl Target for XTarget<'_> {
    type V = Vec<RatFunc>;
    fn int(&self, d: &str) -> Result<Self::V> {
        let c = RatTarget {
            field: self.field,
            var: 't',
        }
        .int(d)?;
        Ok(Self::trim(vec![c]))
    }
    fn var(&self, c: char) -> Result<Self::V> {
        if c == 'X' {
            Ok(vec![RatFunc::zero(self.field), RatFunc::one(self.field)])
        } else {
            Ok(Self::trim(vec![RatTarget {
                field: self.field,
                var: 't',
            }
            .var(c)?]))
        }
    }
    fn add(&self, a: Self::V, b: Self::V) -> Result<Self::V> {
        let len = a.len().max(b.len());
        let zero = RatFunc::zero(self.field);
        let r = (0..len)
            .map(|i| a.get(i).unwrap_or(&zero).add(b.get(i).unwrap_or(&zero)))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self::trim(r))
    }
    fn sub(&self, a: Self::V, b: Self::V) -> Result<Self::V> {
        let nb = self.neg(b)?;
        self.add(a, nb)
    }
    fn mul(&self, a: Self::V, b: Self::V) -> Result<Self::V> {
        if a.is_empty() || b.is_empty() {
            return Ok(Vec::new());
        }
        let mut r = vec![RatFunc::zero(self.field); a.len() + b.len() - 1];
        for (i, x) in a.iter().enumerate() {
            for (j, y) in b.iter().enumerate() {
                r[i + j] = r[i + j].add(&x.mul(y)?)?;
            }
        }
        Ok(Self::trim(r))
    }
    fn div(&self, a: Self::V, b: Self::V) -> Result<Self::V> {
        if b.len() != 1 {
            return Err(Error::Parse("division by an expression involving X".into()));
        }
        a.iter().map(|c| c.div(&b[0])).collect()
    }
    fn neg(&self, a: Self::V) -> Result<Self::V> {
        Ok(a.iter().map(|c| c.neg()).collect())
    }
    fn pow(&self, a: Self::V, e: i64) -> Result<Self::V> {
        if e < 0 {
            if a.len() != 1 {
                return Err(Error::Parse("negative power of an expression involving X".into()));
            }
            return Ok(vec![a[0].pow(e)?]);
        }
        let mut acc = vec![RatFunc::one(self.field)];
        for _ in 0..e {
            acc = self.mul(acc, a.clone())?;
        }
        Ok(acc)
    }
}

/// Prints `Σ c_i X^i` with literal coefficients, highest degree first.
pub fn x_poly_literal(coeffs: &[RatFunc]) -> String {
    let mut terms = Vec::new();
    for (i, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let lit = c.to_string();
        // the constant term is a summand and never needs brackets
        let coeff = if i > 0 && lit.contains(['+', '-', '/']) {
            format!("({lit})")
        } else {
            lit
        };
        terms.push(match (i, coeff.as_str()) {
            (0, _) => coeff.clone(),
            (1, "1") => "X".to_string(),
            (1, _) => format!("{coeff}*X"),
            (i, "1") => format!("X^{i}"),
            (i, _) => format!("{coeff}*X^{i}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

/// Renders a dense polynomial in `t`, highest degree first.
pub(crate) fn poly_literal(p: &Poly) -> String {
    let field = p.field();
    let mut terms = Vec::new();
    for (i, &c) in p.raw_coeffs().iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let one = c == field.raw_one();
        let coeff = field.raw_coeff_literal(c);
        terms.push(match (i, one) {
            (0, _) => field.raw_literal(c),
            (1, true) => "t".to_string(),
            (1, false) => format!("{coeff}*t"),
            (i, true) => format!("t^{i}"),
            (i, false) => format!("{coeff}*t^{i}"),
        });
    }
    if terms.is_empty() {
        "0".into()
    } else {
        terms.join("+")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn tokenizer_rejects_garbage() {
        let f = Field::prime(2).unwrap();
        assert!(matches!(parse_rational(&f, "t & 1"), Err(Error::Parse(_))));
        assert!(matches!(parse_rational(&f, "(t+1"), Err(Error::Parse(_))));
        assert!(matches!(parse_rational(&f, "t +"), Err(Error::Parse(_))));
    }

    #[test]
    fn element_literals() {
        let f4 = Field::new(2, 2).unwrap();
        assert_eq!(parse_fq(&f4, "u^2").unwrap().to_string(), "u+1");
        assert_eq!(parse_fq(&f4, "u*u + 1").unwrap().to_string(), "u");
        let f7 = Field::prime(7).unwrap();
        assert_eq!(parse_fq(&f7, "-1").unwrap().to_string(), "6");
        assert_eq!(parse_fq(&f7, "100000000000000000000").unwrap(), f7.from_int(2));
        assert!(parse_fq(&f7, "t").is_err());
        assert!(parse_fq(&f7, "u").is_err());
    }

    #[test]
    fn implicit_multiplication() {
        let f3 = Field::prime(3).unwrap();
        assert_eq!(
            parse_rational(&f3, "2t^3").unwrap(),
            parse_rational(&f3, "2*t^3").unwrap()
        );
    }

    #[test]
    fn x_polynomials() {
        let f2 = Field::prime(2).unwrap();
        let q = parse_x_poly(&f2, "X^2 + X + t").unwrap();
        assert_eq!(q.len(), 3);
        assert_eq!(x_poly_literal(&q), "X^2+X+t");
        let q = parse_x_poly(&f2, "(t+1)*X + 1/t").unwrap();
        assert_eq!(x_poly_literal(&q), "(t+1)*X+(1)/(t)");
        assert_eq!(parse_x_poly(&f2, &x_poly_literal(&q)).unwrap(), q);
    }

    #[test]
    fn prime_poly_modulus() {
        assert_eq!(parse_prime_poly("u^2+u+1", 2, 'u').unwrap(), vec![1, 1, 1]);
        assert_eq!(parse_prime_poly("u^3 - u - 1", 3, 'u').unwrap(), vec![2, 2, 0, 1]);
    }
}
