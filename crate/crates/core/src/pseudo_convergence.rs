//! Pseudo-convergent sequences in F_q(t) built from Artin–Schreier data.
//!
//! For b with v(b) >= 1 that is not of the form x^p - x, the partial sums
//! a_i = -(b + b^p + ... + b^{p^i}) satisfy P(a_i) = -b^{p^{i+1}} for
//! P = X^p - X - b. They form a pseudo-convergent sequence without a limit in
//! F_q(t); this module checks that, tracks valuations of polynomials along
//! it, and verifies that no polynomial of degree below p has ultimately
//! increasing valuations.

use rand::seq::SliceRandom;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::artin_schreier::{
    self, as_reduce, membership_rational, Element, Evidence, ExtensionReport, Membership, Order,
};
use crate::error::{Error, Result};
use crate::finite_field::Field;
use crate::literal::x_poly_literal;
use crate::parallel::{item_rng, map_indexed, Execution};
use crate::rational::RatFunc;
use crate::sample;
use crate::value::Value;

/// A finite prefix a_0, ..., a_n of a sequence in F_q(t).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PCPrefix {
    pub field: Field,
    pub elems: Vec<RatFunc>,
    /// gamma[i] = v(a_{i+1} - a_i); `None` when the two agree.
    pub gamma: Vec<Option<i64>>,
    /// The b of P = X^p - X - b, for generated prefixes.
    pub b: Option<RatFunc>,
}

fn val(x: &RatFunc) -> Value {
    x.ord().map_or(Value::Infinity, Value::int)
}

impl PCPrefix {
    pub fn new(field: &Field, elems: Vec<RatFunc>) -> Result<PCPrefix> {
        if elems.iter().any(|e| e.field() != field) {
            return Err(Error::FieldMismatch);
        }
        let gamma = elems
            .windows(2)
            .map(|w| Ok(w[1].sub(&w[0])?.ord()))
            .collect::<Result<_>>()?;
        Ok(PCPrefix {
            field: field.clone(),
            elems,
            gamma,
            b: None,
        })
    }

    pub fn len(&self) -> usize {
        self.elems.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elems.is_empty()
    }

    /// v(P(a_i)) for the generating polynomial, when known.
    pub fn p_values(&self) -> Result<Option<Vec<Value>>> {
        let Some(b) = &self.b else { return Ok(None) };
        let vals = self
            .elems
            .iter()
            .map(|a| Ok(val(&a.artin_schreier()?.sub(b)?)))
            .collect::<Result<_>>()?;
        Ok(Some(vals))
    }

    /// `{index, element, gamma, vP}` rows for dumps.
    pub fn rows(&self) -> Result<Vec<PrefixRow>> {
        let vp = self.p_values()?;
        Ok(self
            .elems
            .iter()
            .enumerate()
            .map(|(i, a)| PrefixRow {
                index: i,
                element: a.to_string(),
                gamma: self.gamma.get(i).map(|g| g.map_or(Value::Infinity, Value::int)),
                v_p: vp.as_ref().map(|v| v[i]),
            })
            .collect())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PrefixRow {
    pub index: usize,
    pub element: String,
    pub gamma: Option<Value>,
    #[serde(rename = "vP")]
    pub v_p: Option<Value>,
}

/// Checks v(a_β - a_α) < v(a_γ - a_β) for all α < β < γ, and separately that
/// the consecutive differences have strictly increasing valuations. The two
/// checks must agree.
pub fn is_pseudo_convergent(prefix: &PCPrefix) -> Result<bool> {
    let n = prefix.len();
    if n < 3 {
        return Err(Error::TooShort(n));
    }
    let consecutive = prefix.gamma.iter().all(Option::is_some) && prefix.gamma.windows(2).all(|w| w[0] < w[1]);

    let mut diff = vec![vec![None; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            diff[i][j] = prefix.elems[j].sub(&prefix.elems[i])?.ord();
        }
    }
    let mut triples = true;
    'outer: for a in 0..n {
        for b in a + 1..n {
            for c in b + 1..n {
                let ok = match (diff[a][b], diff[b][c]) {
                    (Some(x), Some(y)) => x < y,
                    _ => false,
                };
                if !ok {
                    triples = false;
                    break 'outer;
                }
            }
        }
    }
    if triples != consecutive {
        return Err(Error::InternalConsistency(format!(
            "triple check ({triples}) and consecutive check ({consecutive}) disagree"
        )));
    }
    Ok(triples)
}

/// a_i = -Σ_{k<=i} b^{p^k} for i = 0..=n.
pub fn step2_generate(b: &RatFunc, n: usize) -> Result<PCPrefix> {
    let v = b.ord().ok_or_else(|| Error::SolvableB(b.to_string()))?;
    if v < 1 {
        return Err(Error::ValuationNotPositive(v.to_string()));
    }
    if membership_rational(b)?.is_solvable() {
        return Err(Error::SolvableB(b.to_string()));
    }
    let field = b.field();
    let mut elems = Vec::with_capacity(n + 1);
    let mut term = b.clone();
    let mut acc = RatFunc::zero(field);
    for i in 0..=n {
        if i > 0 {
            term = term.frobenius()?;
        }
        acc = acc.sub(&term)?;
        elems.push(acc.clone());
    }
    let mut prefix = PCPrefix::new(field, elems)?;
    prefix.b = Some(b.clone());
    Ok(prefix)
}

/// Values of v(x^p - x - b) collected while probing the set C.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CSetProbe {
    /// Along x = y + a_i, where (b - (y^p - y)) is reduced and a_i are its
    /// partial sums; empty when the reduced element has v <= 0.
    pub partial_sums: Vec<Value>,
    /// Running maxima of `partial_sums`, or the single value v(b - (y^p - y))
    /// when there are no partial sums.
    pub maxima: Vec<Value>,
    /// Values at random x; kept apart from the maxima.
    pub samples: Vec<Value>,
    /// A solution of x^p - x = b, where v is infinite.
    pub unbounded_at: Option<String>,
}

/// v(x^p - x - b) for each x; infinite where x is a solution.
pub fn c_set_values(b: &RatFunc, xs: &[RatFunc]) -> Result<Vec<Value>> {
    xs.iter().map(|x| Ok(val(&x.artin_schreier()?.sub(b)?))).collect()
}

/// Probes C = {v(x^p - x - b) : x in F_q(t)} along the partial sums up to
/// `depth` plus `samples` random points.
pub fn c_set_probe(b: &RatFunc, depth: usize, samples: usize, seed: u64) -> Result<CSetProbe> {
    let field = b.field();
    let (reduced, shift) = as_reduce(&Element::Rational(b.clone()))?;
    let reduced = reduced.as_rational().expect("rational").clone();
    let shift = shift.as_rational().expect("rational").clone();
    let p_of = |x: &RatFunc| -> Result<Value> { Ok(val(&x.artin_schreier()?.sub(b)?)) };

    let mut partial_sums = Vec::new();
    if reduced.ord().is_some_and(|v| v >= 1) {
        let mut term = reduced.clone();
        let mut acc = shift.clone();
        for i in 0..=depth {
            if i > 0 {
                term = term.frobenius()?;
            }
            acc = acc.sub(&term)?;
            partial_sums.push(p_of(&acc)?);
        }
    }
    let maxima = if partial_sums.is_empty() {
        vec![val(&reduced)]
    } else {
        partial_sums
            .iter()
            .scan(None::<Value>, |m, &v| {
                let next = m.map_or(v, |m: Value| m.max(v));
                *m = Some(next);
                Some(next)
            })
            .collect()
    };
    let mut rng = item_rng(seed, 0);
    let samples = (0..samples)
        .map(|_| p_of(&sample::ratfunc(field, 3, 2, &mut rng)))
        .collect::<Result<_>>()?;
    let unbounded_at = match membership_rational(b)? {
        Membership::Solvable { x } => Some(x.to_string()),
        Membership::NotSolvable { .. } => None,
    };
    Ok(CSetProbe {
        partial_sums,
        maxima,
        samples,
        unbounded_at,
    })
}

/// Behaviour of a valuation trace at the end of a prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Trend {
    /// The trace is constant from `stable_from` to the end.
    Stabilized {
        value: Value,
        stable_from: usize,
    },
    /// Strictly increasing over (at least) the last three entries.
    Increasing {
        from: usize,
    },
    NotStabilized,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StabilizationReport {
    pub trace: Vec<Value>,
    pub trend: Trend,
}

impl StabilizationReport {
    pub fn from_trace(trace: Vec<Value>) -> StabilizationReport {
        let n = trace.len();
        let trend = if n >= 2 && trace[n - 1] == trace[n - 2] {
            let last = trace[n - 1];
            let from = (0..n).rev().take_while(|&i| trace[i] == last).last().expect("n >= 2");
            Trend::Stabilized {
                value: last,
                stable_from: from,
            }
        } else if n == 1 {
            Trend::Stabilized {
                value: trace[0],
                stable_from: 0,
            }
        } else {
            let mut from = n.saturating_sub(1);
            while from > 0 && trace[from - 1] < trace[from] {
                from -= 1;
            }
            if n >= 3 && n - from >= 3 {
                Trend::Increasing { from }
            } else {
                Trend::NotStabilized
            }
        };
        StabilizationReport { trace, trend }
    }

    pub fn value(&self) -> Option<Value> {
        match self.trend {
            Trend::Stabilized { value, .. } => Some(value),
            _ => None,
        }
    }
}

impl Serialize for StabilizationReport {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(None)?;
        match &self.trend {
            Trend::Stabilized { value, stable_from } => {
                m.serialize_entry("verdict", "stabilized")?;
                m.serialize_entry("value", value)?;
                m.serialize_entry("stable_from", stable_from)?;
            }
            Trend::Increasing { from } => {
                m.serialize_entry("verdict", "increasing")?;
                m.serialize_entry("from", from)?;
            }
            Trend::NotStabilized => m.serialize_entry("verdict", "not_stabilized")?,
        }
        m.serialize_entry("trace", &self.trace)?;
        m.end()
    }
}

fn eval(q: &[RatFunc], x: &RatFunc) -> Result<RatFunc> {
    let mut acc = RatFunc::zero(x.field());
    for c in q.iter().rev() {
        acc = acc.mul(x)?.add(c)?;
    }
    Ok(acc)
}

/// v(Q(a_ρ)) along the prefix for any polynomial Q (ascending coefficients).
pub fn valuation_trace(q: &[RatFunc], prefix: &PCPrefix) -> Result<StabilizationReport> {
    let trace = prefix
        .elems
        .iter()
        .map(|a| Ok(val(&eval(q, a)?)))
        .collect::<Result<_>>()?;
    Ok(StabilizationReport::from_trace(trace))
}

/// The ultimate value of v(Q(a_ρ)) for Q of degree < p.
pub fn ultimate_val(q: &[RatFunc], prefix: &PCPrefix) -> Result<StabilizationReport> {
    let p = prefix.field.characteristic() as usize;
    if q.len() > p {
        return Err(Error::InvalidArgument(format!("Q must have degree < p = {p}")));
    }
    valuation_trace(q, prefix)
}

/// Coefficients drawn for random polynomials.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoeffPool {
    pub elems: Vec<RatFunc>,
}

impl CoeffPool {
    /// Constants of F_p together with t, t + 1 and 1/t.
    pub fn standard(field: &Field) -> Result<CoeffPool> {
        let mut elems: Vec<RatFunc> = field
            .prime_field_elements()?
            .into_iter()
            .map(RatFunc::constant)
            .collect();
        for lit in ["t", "t+1", "1/t"] {
            elems.push(RatFunc::parse(field, lit)?);
        }
        Ok(CoeffPool { elems })
    }

    /// A polynomial of exact degree `degree` (leading coefficient nonzero).
    pub fn draw<R: rand::Rng + ?Sized>(&self, degree: usize, rng: &mut R) -> Vec<RatFunc> {
        let nonzero: Vec<&RatFunc> = self.elems.iter().filter(|c| !c.is_zero()).collect();
        let mut q: Vec<RatFunc> = (0..degree)
            .map(|_| self.elems.choose(rng).expect("nonempty").clone())
            .collect();
        q.push((*nonzero.choose(rng).expect("pool has a nonzero element")).clone());
        q
    }
}

/// A sampled polynomial with its trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TraceDump {
    pub polynomial: String,
    pub degree: usize,
    pub report: StabilizationReport,
    /// Ultimate value of Q'(a_ρ), when it stabilizes.
    pub delta_prime: Option<Value>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct DegreeSummary {
    pub degree: usize,
    pub trials: usize,
    pub stabilized: usize,
    pub increasing: usize,
    pub inconclusive: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckReport {
    pub passed: bool,
    pub per_degree: Vec<DegreeSummary>,
    /// Degree < p polynomials whose trace is increasing at the end.
    pub counterexamples: Vec<TraceDump>,
    /// Traces that neither stabilized nor increased.
    pub inconclusive: Vec<TraceDump>,
    /// The trace of P = X^p - X - b itself.
    pub generator: StabilizationReport,
    pub generator_increasing: bool,
}

fn derivative(q: &[RatFunc]) -> Result<Vec<RatFunc>> {
    q.iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.scale(&c.field().from_int(i as i64)))
        .collect()
}

/// Samples `trials` polynomials of each degree 1..p-1 and checks that none
/// has ultimately increasing valuations along the prefix, while P does.
pub fn min_degree_check(
    prefix: &PCPrefix,
    pool: &CoeffPool,
    trials: usize,
    seed: u64,
    mode: Execution,
) -> Result<CheckReport> {
    let field = &prefix.field;
    let p = field.characteristic() as usize;
    let b = prefix
        .b
        .as_ref()
        .ok_or_else(|| Error::InvalidArgument("prefix has no generating polynomial".into()))?;

    let degrees = p - 1;
    let results: Vec<Result<TraceDump>> = map_indexed(degrees * trials, mode, |k| {
        let degree = k / trials + 1;
        let mut rng = item_rng(seed, k as u64);
        let q = pool.draw(degree, &mut rng);
        let report = valuation_trace(&q, prefix)?;
        let delta_prime = valuation_trace(&derivative(&q)?, prefix)?.value();
        Ok(TraceDump {
            polynomial: x_poly_literal(&q),
            degree,
            report,
            delta_prime,
        })
    });

    let mut per_degree: Vec<DegreeSummary> = (1..=degrees)
        .map(|degree| DegreeSummary {
            degree,
            trials,
            ..Default::default()
        })
        .collect();
    let mut counterexamples = Vec::new();
    let mut inconclusive = Vec::new();
    for r in results {
        let dump = r?;
        let summary = &mut per_degree[dump.degree - 1];
        match dump.report.trend {
            Trend::Stabilized { .. } => summary.stabilized += 1,
            Trend::Increasing { .. } => {
                summary.increasing += 1;
                counterexamples.push(dump);
            }
            Trend::NotStabilized => {
                summary.inconclusive += 1;
                inconclusive.push(dump);
            }
        }
    }

    let mut gen = vec![b.neg(), RatFunc::one(field).neg()];
    gen.resize(p + 1, RatFunc::zero(field));
    gen[p] = RatFunc::one(field);
    let generator = valuation_trace(&gen, prefix)?;
    let generator_increasing = matches!(generator.trend, Trend::Increasing { .. });
    Ok(CheckReport {
        passed: counterexamples.is_empty() && inconclusive.is_empty() && generator_increasing,
        per_degree,
        counterexamples,
        inconclusive,
        generator,
        generator_increasing,
    })
}

/// One row of the valuation table on K(a).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TableRow {
    pub polynomial: String,
    pub value: Value,
    pub stable_from: usize,
}

/// Ultimate values for the basis 1, X, ..., X^{p-1} followed by `extra`.
pub fn pc_valuation_table(prefix: &PCPrefix, extra: &[Vec<RatFunc>]) -> Result<Vec<TableRow>> {
    let field = &prefix.field;
    let p = field.characteristic() as usize;
    let basis = (0..p).map(|k| {
        let mut q = vec![RatFunc::zero(field); k + 1];
        q[k] = RatFunc::one(field);
        q
    });
    basis
        .chain(extra.iter().cloned())
        .map(|q| {
            let rep = ultimate_val(&q, prefix)?;
            let polynomial = x_poly_literal(&q);
            match rep.trend {
                Trend::Stabilized { value, stable_from } => Ok(TableRow {
                    polynomial,
                    value,
                    stable_from,
                }),
                _ => Err(Error::NotStabilized(polynomial)),
            }
        })
        .collect()
}

/// The embedding whose root is the limit of the prefix: the one closest to
/// the last element.
pub fn matching_embedding(prefix: &PCPrefix, report: &ExtensionReport) -> Result<usize> {
    let Evidence::Immediate { embeddings, .. } = &report.evidence else {
        return Err(Error::InvalidArgument("report is not immediate".into()));
    };
    let last = prefix.elems.last().ok_or(Error::TooShort(0))?;
    let mut best = None;
    for emb in embeddings {
        let d = emb.root.sub(&last.expand(emb.root.prec()))?.valuation().lower_bound();
        if best.is_none_or(|(_, bd)| d > bd) {
            best = Some((emb.index, d));
        }
    }
    best.map(|(i, _)| i)
        .ok_or(Error::InvalidArgument("no embeddings".into()))
}

/// Convenience: the extension report for b over F_q(t).
pub fn rational_report(b: &RatFunc, prec: i64) -> Result<ExtensionReport> {
    artin_schreier::classify_extension(&Element::Rational(b.clone()), prec)
}

/// v(b - (y^p - y)) after reduction, as an [`Order`].
pub fn reduced_order(b: &RatFunc) -> Result<Order> {
    Ok(as_reduce(&Element::Rational(b.clone()))?.0.order())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rat(f: &Field, s: &str) -> RatFunc {
        RatFunc::parse(f, s).unwrap()
    }

    #[test]
    fn generated_sequence_examples() {
        let f2 = Field::prime(2).unwrap();
        let pre = step2_generate(&rat(&f2, "t"), 3).unwrap();
        assert_eq!(pre.elems[3], rat(&f2, "t+t^2+t^4+t^8"));
        let vp: Vec<_> = pre.p_values().unwrap().unwrap();
        assert_eq!(vp, [2, 4, 8, 16].map(Value::int));
        assert!(is_pseudo_convergent(&pre).unwrap());

        let f3 = Field::prime(3).unwrap();
        let pre = step2_generate(&rat(&f3, "t"), 2).unwrap();
        assert_eq!(pre.elems[2], rat(&f3, "2*t+2*t^3+2*t^9"));
        assert_eq!(pre.p_values().unwrap().unwrap(), [3, 9, 27].map(Value::int));

        let pre = step2_generate(&rat(&f2, "t^2"), 2).unwrap();
        assert_eq!(pre.gamma, vec![Some(4), Some(8)]);

        assert!(matches!(
            step2_generate(&rat(&f2, "t^2+t"), 2),
            Err(Error::SolvableB(_))
        ));
        assert!(matches!(
            step2_generate(&rat(&f2, "1/t"), 2),
            Err(Error::ValuationNotPositive(_))
        ));
    }

    #[test]
    fn pseudo_convergence_checks() {
        let f3 = Field::prime(3).unwrap();
        let alt: Vec<RatFunc> = (0..5)
            .map(|i| rat(&f3, &format!("{}*t^{i}", if i % 2 == 0 { 1 } else { 2 })))
            .collect();
        let partial: Vec<RatFunc> = alt
            .iter()
            .scan(RatFunc::zero(&f3), |acc, x| {
                *acc = acc.add(x).unwrap();
                Some(acc.clone())
            })
            .collect();
        assert!(is_pseudo_convergent(&PCPrefix::new(&f3, partial).unwrap()).unwrap());

        let constant = PCPrefix::new(&f3, vec![rat(&f3, "t"); 4]).unwrap();
        assert!(!is_pseudo_convergent(&constant).unwrap());
        let short = PCPrefix::new(&f3, vec![rat(&f3, "t"); 2]).unwrap();
        assert_eq!(is_pseudo_convergent(&short), Err(Error::TooShort(2)));
    }

    #[test]
    fn probe_maxima_grow() {
        let f2 = Field::prime(2).unwrap();
        let probe = c_set_probe(&rat(&f2, "t"), 4, 5, 0).unwrap();
        assert_eq!(probe.maxima, [2, 4, 8, 16, 32].map(Value::int));
        assert!(probe.unbounded_at.is_none());

        // x -> x + y carries the probe for t onto the one for t + y^2 - y
        let y = rat(&f2, "1/(t+1)");
        let shifted = y.artin_schreier().unwrap().add(&rat(&f2, "t")).unwrap();
        let pre = step2_generate(&rat(&f2, "t"), 4).unwrap();
        let moved: Vec<RatFunc> = pre.elems.iter().map(|a| a.add(&y).unwrap()).collect();
        assert_eq!(c_set_values(&shifted, &moved).unwrap(), probe.partial_sums);

        let solvable = c_set_probe(&y.artin_schreier().unwrap(), 2, 0, 0).unwrap();
        assert!(solvable.unbounded_at.is_some());
    }

    #[test]
    fn ultimate_values() {
        let f2 = Field::prime(2).unwrap();
        let pre = step2_generate(&rat(&f2, "t"), 5).unwrap();
        let x = vec![RatFunc::zero(&f2), RatFunc::one(&f2)];
        assert_eq!(
            ultimate_val(&x, &pre).unwrap().trend,
            Trend::Stabilized {
                value: Value::int(1),
                stable_from: 0
            }
        );
        let x1 = vec![RatFunc::one(&f2), RatFunc::one(&f2)];
        assert_eq!(ultimate_val(&x1, &pre).unwrap().value(), Some(Value::int(0)));
        let c = vec![rat(&f2, "t^3")];
        assert_eq!(ultimate_val(&c, &pre).unwrap().value(), Some(Value::int(3)));

        let q = vec![pre.elems[3].neg(), RatFunc::one(&f2)];
        let rep = ultimate_val(&q, &pre).unwrap();
        assert_eq!(
            rep.trend,
            Trend::Stabilized {
                value: Value::int(16),
                stable_from: 4
            }
        );
    }

    #[test]
    fn min_degree_small() {
        let f3 = Field::prime(3).unwrap();
        let pre = step2_generate(&rat(&f3, "t"), 5).unwrap();
        let pool = CoeffPool::standard(&f3).unwrap();
        let rep = min_degree_check(&pre, &pool, 20, 0, Execution::Sequential).unwrap();
        assert!(rep.passed, "{rep:?}");
        assert_eq!(rep, min_degree_check(&pre, &pool, 20, 0, Execution::Parallel).unwrap());
    }

    #[test]
    fn valuation_table_matches_embedding() {
        let f2 = Field::prime(2).unwrap();
        let b = rat(&f2, "t");
        let pre = step2_generate(&b, 5).unwrap();
        let table = pc_valuation_table(&pre, &[]).unwrap();
        assert_eq!(table[0].value, Value::int(0));
        assert_eq!(table[1].value, Value::int(1));
        let rep = rational_report(&b, 64).unwrap();
        assert_eq!(matching_embedding(&pre, &rep).unwrap(), 0);
    }
}
