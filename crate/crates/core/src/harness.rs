//! End-to-end drivers: criterion scans, the theorem demonstration and
//! corpus generation. Everything here is deterministic given the
//! [`FieldSpec`] (including its seed).

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::io::Write;

use rand::Rng;
use serde::ser::SerializeMap;
use serde::{Serialize, Serializer};

use crate::artin_schreier::{
    as_reduce, as_solve_complete, classify_extension, extension_valuation, membership_rational, Base, Certificate,
    Element, ExtValuation, ExtensionKind, ExtensionReport, Membership, Order,
};
use crate::error::{Error, Result};
use crate::finite_field::Field;
use crate::laurent::{LaurentSeries, SeriesValuation};
use crate::literal::x_poly_literal;
use crate::parallel::{item_rng, map_indexed, Execution};
use crate::pseudo_convergence::{
    c_set_probe, is_pseudo_convergent, matching_embedding, min_degree_check, pc_valuation_table, step2_generate,
    CheckReport, CoeffPool, PrefixRow, TableRow,
};
use crate::rational::RatFunc;
use crate::sample;
use crate::value::Value;

/// Field, base, precision and seed of a run.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FieldSpec {
    pub p: u64,
    pub n: usize,
    /// Modulus literal in `u`, e.g. `u^2+u+1`; lexicographically least
    /// irreducible when absent.
    pub modulus: Option<String>,
    pub base: Base,
    pub prec: i64,
    pub seed: u64,
}

impl FieldSpec {
    pub fn new(p: u64, base: Base) -> FieldSpec {
        FieldSpec {
            p,
            n: 1,
            modulus: None,
            base,
            prec: crate::laurent::DEFAULT_PREC,
            seed: 0,
        }
    }

    pub fn field(&self) -> Result<Field> {
        if self.prec < 8 {
            return Err(Error::InvalidArgument(format!(
                "precision must be at least 8 (got {})",
                self.prec
            )));
        }
        match &self.modulus {
            Some(m) => {
                let f = Field::with_modulus_literal(self.p, m)?;
                if f.degree() != self.n && self.n != 1 {
                    return Err(Error::InvalidArgument(format!(
                        "modulus {m} has degree {} but n = {}",
                        f.degree(),
                        self.n
                    )));
                }
                Ok(f)
            }
            None if self.n == 1 => Field::prime(self.p),
            None => Field::new(self.p, self.n),
        }
    }
}

impl Serialize for FieldSpec {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let modulus = self.field().ok().and_then(|f| f.modulus_literal());
        let mut m = s.serialize_map(Some(6))?;
        m.serialize_entry("p", &self.p)?;
        m.serialize_entry(
            "n",
            &modulus
                .as_ref()
                .map_or(self.n, |_| self.field().map_or(self.n, |f| f.degree())),
        )?;
        m.serialize_entry("modulus", &modulus)?;
        m.serialize_entry("base", &self.base)?;
        m.serialize_entry("prec", &self.prec)?;
        m.serialize_entry("seed", &self.seed)?;
        m.end()
    }
}

// ---------------------------------------------------------------------------
// criterion scan

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub b: String,
    pub certificate: Certificate,
}

/// Outcome of testing M_v ⊆ {x^p - x} on a sample.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TheoremVerdict {
    pub field: FieldSpec,
    pub criterion_holds_on_sample: bool,
    pub sample_size: usize,
    pub failures: Vec<String>,
    pub witness_b: Option<Witness>,
    pub nonunique_extension: Option<ExtensionReport>,
}

/// Checks every condition on the roots of X^p - X - b in F_q((t)).
pub fn check_complete_roots(b: &LaurentSeries) -> Result<Option<String>> {
    let p = b.field().characteristic() as usize;
    let prec = b.prec();
    let roots = as_solve_complete(b)?;
    if roots.len() != p {
        return Ok(Some(format!("{} roots instead of {p}", roots.len())));
    }
    for x in &roots {
        let r = x.frobenius().sub(x)?.sub(b)?;
        if r.valuation().lower_bound() < prec {
            return Ok(Some(format!("v(x^p - x - b) = {} < {prec} for x = {x}", r.valuation())));
        }
    }
    for (i, x) in roots.iter().enumerate() {
        for y in &roots[i + 1..] {
            let d = x.sub(y)?;
            let in_fp = d.valuation().lower_bound() >= 0 && d.terms().all(|(k, c)| k == 0 && c.as_prime().is_some());
            if !in_fp {
                return Ok(Some(format!("roots {x} and {y} differ by a non-constant")));
            }
        }
    }
    Ok(None)
}

/// The k-th element of {t·c(t)}: by degree, then lexicographically in the
/// coefficient indices. Starts with t, 2t, ..., then t^2, ...
fn enumerate_maximal_ideal(field: &Field, k: usize) -> Result<RatFunc> {
    let q = field
        .order()
        .ok_or_else(|| Error::InvalidArgument("field too large to enumerate".into()))? as u128;
    let elems = field.elements()?;
    let mut k = k as u128;
    let mut deg = 1u32;
    loop {
        // polynomials of exact degree `deg` with zero constant term
        let count = (q - 1) * q.pow(deg - 1);
        if k < count {
            break;
        }
        k -= count;
        deg += 1;
    }
    let mut cs = vec![field.zero(); deg as usize + 1];
    cs[deg as usize] = elems[1 + (k / q.pow(deg - 1)) as usize].clone();
    let mut rest = k % q.pow(deg - 1);
    for i in (1..deg as usize).rev() {
        cs[i] = elems[(rest / q.pow(i as u32 - 1)) as usize].clone();
        rest %= q.pow(i as u32 - 1);
    }
    Ok(RatFunc::from_poly(crate::poly::Poly::from_coeffs(field, &cs)?))
}

/// Tests the criterion on `samples` elements of the maximal ideal.
///
/// Complete base: random b with v(b) >= 1, each of which must be solvable.
/// Rational base: a fixed enumeration starting at b = t; the first b that
/// is not x^p - x becomes the witness, together with its immediate report.
pub fn criterion_scan(spec: &FieldSpec, samples: usize, mode: Execution) -> Result<TheoremVerdict> {
    let field = spec.field()?;
    match spec.base {
        Base::Complete => {
            let failures: Vec<Option<String>> = map_indexed(samples, mode, |i| {
                let mut rng = item_rng(spec.seed, i as u64);
                let b = sample::maximal_ideal_series(&field, spec.prec, &mut rng);
                match check_complete_roots(&b) {
                    Ok(None) => None,
                    Ok(Some(msg)) => Some(format!("b = {b}: {msg}")),
                    Err(e) => Some(format!("b = {b}: {e}")),
                }
            });
            let failures: Vec<String> = failures.into_iter().flatten().collect();
            Ok(TheoremVerdict {
                field: spec.clone(),
                criterion_holds_on_sample: failures.is_empty(),
                sample_size: samples,
                failures,
                witness_b: None,
                nonunique_extension: None,
            })
        }
        Base::Rational => {
            let mut scanned = 0;
            for k in 0..samples {
                let b = enumerate_maximal_ideal(&field, k)?;
                scanned += 1;
                if let Membership::NotSolvable { certificate } = membership_rational(&b)? {
                    let report = classify_extension(&Element::Rational(b.clone()), spec.prec)?;
                    if report.kind != ExtensionKind::Immediate {
                        return Err(Error::InternalConsistency(format!(
                            "b = {b} is not x^p - x but its extension is {}",
                            report.kind
                        )));
                    }
                    return Ok(TheoremVerdict {
                        field: spec.clone(),
                        criterion_holds_on_sample: false,
                        sample_size: scanned,
                        failures: Vec::new(),
                        witness_b: Some(Witness {
                            b: b.to_string(),
                            certificate,
                        }),
                        nonunique_extension: Some(report),
                    });
                }
            }
            Ok(TheoremVerdict {
                field: spec.clone(),
                criterion_holds_on_sample: true,
                sample_size: scanned,
                failures: Vec::new(),
                witness_b: None,
                nonunique_extension: None,
            })
        }
    }
}

// ---------------------------------------------------------------------------
// demo

/// Membership verdict in either base.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DemoMembership {
    Rational(Membership),
    /// Over F_q((t)): b is x^p - x iff its reduction has positive valuation.
    Complete {
        solvable: bool,
    },
}

impl Serialize for DemoMembership {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            DemoMembership::Rational(m) => m.serialize(s),
            DemoMembership::Complete { solvable } => {
                let mut m = s.serialize_map(Some(1))?;
                m.serialize_entry("verdict", if *solvable { "solvable" } else { "not_solvable" })?;
                m.end()
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct EmbeddingComparison {
    pub polynomial: String,
    pub table_value: Value,
    pub per_embedding: Vec<SeriesValuation>,
    pub agrees: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CheckSummary {
    pub passed: bool,
    pub trials_per_degree: usize,
    pub counterexamples: usize,
    pub inconclusive: usize,
    pub generator_increasing: bool,
}

impl CheckSummary {
    fn of(r: &CheckReport, trials: usize) -> CheckSummary {
        CheckSummary {
            passed: r.passed,
            trials_per_degree: trials,
            counterexamples: r.counterexamples.len(),
            inconclusive: r.inconclusive.len(),
            generator_increasing: r.generator_increasing,
        }
    }
}

/// The pseudo-convergent part of a demo for non-solvable b with v(b) >= 1.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceSection {
    pub prefix: Vec<PrefixRow>,
    pub gamma: Vec<Value>,
    #[serde(rename = "vP")]
    pub v_p: Vec<Value>,
    pub pseudo_convergent: bool,
    pub c_set_maxima: Vec<Value>,
    pub min_degree: CheckSummary,
    pub valuation_table: Vec<TableRow>,
    pub matching_embedding: usize,
    pub embedding_comparison: Vec<EmbeddingComparison>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DemoReport {
    pub field: FieldSpec,
    pub b: String,
    pub membership: DemoMembership,
    pub classification: ExtensionReport,
    /// v(a) on the extension, absent when the polynomial splits.
    pub valuation_of_root: Option<ExtValuation>,
    pub sequence: Option<SequenceSection>,
}

/// Trials per degree used by the demo's minimal-degree check.
pub const DEMO_TRIALS: usize = 200;
/// Random polynomials compared against the valuation table in the demo.
pub const DEMO_RANDOM_Q: usize = 10;

/// Longest prefix index n <= 6 whose last element stays of moderate degree.
fn demo_prefix_len(b: &RatFunc, p: u64) -> usize {
    let size = [b.num().degree().unwrap_or(0), b.den().degree().unwrap_or(0), 1]
        .into_iter()
        .max()
        .unwrap() as u64;
    let mut n = 2;
    while n < 6 && p.pow(n as u32 + 2) * size <= 4096 {
        n += 1;
    }
    n
}

/// Runs everything the library knows about b in the given field.
pub fn theorem_demo(b_literal: &str, spec: &FieldSpec, mode: Execution) -> Result<DemoReport> {
    let field = spec.field()?;
    let b = Element::parse(&field, spec.base, b_literal, spec.prec)?;
    let membership = match &b {
        Element::Rational(r) => DemoMembership::Rational(membership_rational(r)?),
        Element::Series(_) => {
            let (reduced, _) = as_reduce(&b)?;
            let solvable = matches!(reduced.order(), Order::Zero | Order::AtLeast(_))
                || matches!(reduced.order(), Order::Exact(v) if v > 0);
            DemoMembership::Complete { solvable }
        }
    };
    let classification = classify_extension(&b, spec.prec)?;
    let x = vec![b.zero_like(), b.monomial_like(&field.one(), 0)];
    let valuation_of_root = match classification.kind {
        ExtensionKind::Split => None,
        _ => Some(extension_valuation(&x, &classification)?),
    };

    let mut sequence = None;
    if let (Element::Rational(rb), DemoMembership::Rational(Membership::NotSolvable { .. })) = (&b, &membership) {
        if rb.ord().is_some_and(|v| v >= 1) {
            sequence = Some(sequence_section(rb, spec, &classification, mode)?);
        }
    }
    Ok(DemoReport {
        field: spec.clone(),
        b: b.to_string(),
        membership,
        classification,
        valuation_of_root,
        sequence,
    })
}

fn sequence_section(
    b: &RatFunc,
    spec: &FieldSpec,
    report: &ExtensionReport,
    mode: Execution,
) -> Result<SequenceSection> {
    let field = b.field();
    let p = field.characteristic();
    let n = demo_prefix_len(b, p);
    let prefix = step2_generate(b, n)?;
    let rows = prefix.rows()?;
    let gamma = rows.iter().filter_map(|r| r.gamma).collect();
    let v_p = rows.iter().filter_map(|r| r.v_p).collect();
    let pseudo_convergent = is_pseudo_convergent(&prefix)?;
    let c_set_maxima = c_set_probe(b, n, 0, spec.seed)?.maxima;
    let pool = CoeffPool::standard(field)?;
    let check = min_degree_check(&prefix, &pool, DEMO_TRIALS, spec.seed, mode)?;

    let mut rng = item_rng(spec.seed, u64::MAX);
    let extra: Vec<Vec<RatFunc>> = (0..DEMO_RANDOM_Q)
        .map(|_| {
            let d = rng.gen_range(0..p as usize);
            pool.draw(d, &mut rng)
        })
        .collect();
    let valuation_table = pc_valuation_table(&prefix, &extra)?;
    let matching = matching_embedding(&prefix, report)?;

    let basis = (0..p as usize).map(|k| {
        let mut q = vec![RatFunc::zero(field); k + 1];
        q[k] = RatFunc::one(field);
        q
    });
    let mut embedding_comparison = Vec::new();
    for (q, row) in basis.chain(extra).zip(&valuation_table) {
        let qe: Vec<Element> = q.iter().cloned().map(Element::Rational).collect();
        let ExtValuation::PerEmbedding(per) = extension_valuation(&qe, report)? else {
            return Err(Error::InternalConsistency("immediate report without embeddings".into()));
        };
        let agrees = per[matching].to_value() == Some(row.value);
        embedding_comparison.push(EmbeddingComparison {
            polynomial: x_poly_literal(&q),
            table_value: row.value,
            per_embedding: per,
            agrees,
        });
    }
    Ok(SequenceSection {
        prefix: rows,
        gamma,
        v_p,
        pseudo_convergent,
        c_set_maxima,
        min_degree: CheckSummary::of(&check, DEMO_TRIALS),
        valuation_table,
        matching_embedding: matching,
        embedding_comparison,
    })
}

fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(T::to_string).collect::<Vec<_>>().join(", ")
}

impl DemoReport {
    /// Human-readable rendering, one fact per line.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let c = &self.classification;
        let field = self.field.field().ok();
        let q = field
            .as_ref()
            .and_then(|f| f.order())
            .map_or("?".into(), |q| q.to_string());
        let base = match self.field.base {
            Base::Complete => format!("F_{q}((t)), precision {}", self.field.prec),
            Base::Rational => format!("F_{q}(t)"),
        };
        let _ = writeln!(out, "field        {base}");
        let _ = writeln!(out, "b            {}", self.b);
        let verdict = match &self.membership {
            DemoMembership::Rational(Membership::Solvable { x }) => format!("b = x^p - x with x = {x}"),
            DemoMembership::Rational(Membership::NotSolvable { certificate }) => {
                format!("b is not x^p - x: {certificate}")
            }
            DemoMembership::Complete { solvable: true } => "b = x^p - x in the completion".into(),
            DemoMembership::Complete { solvable: false } => "b is not x^p - x in the completion".into(),
        };
        let _ = writeln!(out, "membership   {verdict}");
        let _ = writeln!(
            out,
            "extension    {} (e, f, g, d) = ({}, {}, {}, {})",
            c.kind, c.e, c.f, c.g, c.d
        );
        let _ = writeln!(out, "reduced b    {}", c.reduced_b);
        let _ = writeln!(out, "shift        {}", c.shift);
        match &c.evidence {
            crate::artin_schreier::Evidence::Split { roots } => {
                for r in roots {
                    let _ = writeln!(out, "root         {r}");
                }
            }
            crate::artin_schreier::Evidence::Immediate {
                embeddings,
                distinguishing,
            } => {
                for e in embeddings {
                    let _ = writeln!(
                        out,
                        "embedding {}  a -> {}  v(a) = {}",
                        e.index, e.root, e.valuation_of_root
                    );
                }
                for d in distinguishing {
                    let _ = writeln!(
                        out,
                        "separates {} and {}: {} with valuations ({}, {})",
                        d.embeddings.0,
                        d.embeddings.1,
                        x_poly_literal(&d.element),
                        d.valuations.0,
                        d.valuations.1
                    );
                }
            }
            _ => {}
        }
        if let Some(v) = &self.valuation_of_root {
            let _ = writeln!(out, "v(a)         {v}");
        }
        if let Some(s) = &self.sequence {
            let _ = writeln!(
                out,
                "sequence     a_i = -(b + b^p + ... + b^(p^i)), pseudo-convergent: {}",
                s.pseudo_convergent
            );
            for r in &s.prefix {
                let _ = writeln!(
                    out,
                    "  a_{:<3} v(P(a_i)) = {:<6} {}",
                    r.index,
                    r.v_p.map_or("-".into(), |v| v.to_string()),
                    r.element
                );
            }
            let _ = writeln!(out, "gamma        {}", join(&s.gamma));
            let _ = writeln!(out, "C maxima     {}", join(&s.c_set_maxima));
            let m = &s.min_degree;
            let _ = writeln!(
                out,
                "degree < p   {} trials/degree, {} counterexamples, {} inconclusive, P increasing: {}",
                m.trials_per_degree, m.counterexamples, m.inconclusive, m.generator_increasing
            );
            let _ = writeln!(out, "limit        embedding {}", s.matching_embedding);
            for cmp in &s.embedding_comparison {
                let _ = writeln!(
                    out,
                    "  v({}) = {}  per embedding ({})  {}",
                    cmp.polynomial,
                    cmp.table_value,
                    join(&cmp.per_embedding),
                    if cmp.agrees { "ok" } else { "MISMATCH" }
                );
            }
        }
        out
    }

    /// Invariant failures inside the report.
    pub fn violations(&self) -> Vec<String> {
        let mut v = Vec::new();
        let c = &self.classification;
        let p = self.field.p;
        if c.degree() != p {
            v.push(format!("e*f*g*d = {} != {p}", c.degree()));
        }
        if let Some(s) = &self.sequence {
            if !s.pseudo_convergent {
                v.push("generated prefix is not pseudo-convergent".into());
            }
            if !s.min_degree.passed {
                v.push("minimal-degree check failed".into());
            }
            if s.embedding_comparison.iter().any(|c| !c.agrees) {
                v.push("valuation table disagrees with the limit embedding".into());
            }
        }
        v
    }
}

// ---------------------------------------------------------------------------
// corpus

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stratum {
    /// v < 0 with p ∤ v.
    PoleCoprime,
    /// v < 0 with p | v.
    PoleDivisible,
    /// v = 0.
    Unit,
    /// v > 0.
    Ideal,
}

impl Stratum {
    pub const ALL: [Stratum; 4] = [
        Stratum::PoleCoprime,
        Stratum::PoleDivisible,
        Stratum::Unit,
        Stratum::Ideal,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Stratum::PoleCoprime => "pole_coprime",
            Stratum::PoleDivisible => "pole_divisible",
            Stratum::Unit => "unit",
            Stratum::Ideal => "ideal",
        }
    }

    fn valuation<R: Rng + ?Sized>(self, p: i64, rng: &mut R) -> i64 {
        match self {
            Stratum::PoleCoprime => loop {
                let v = -rng.gen_range(1..=2 * p + 1);
                if v % p != 0 {
                    return v;
                }
            },
            Stratum::PoleDivisible => -p * rng.gen_range(1..=2),
            Stratum::Unit => 0,
            Stratum::Ideal => rng.gen_range(1..=4),
        }
    }
}

/// One classified corpus element.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusItem {
    pub index: usize,
    pub stratum: Stratum,
    pub b: String,
    pub report: Option<ExtensionReport>,
    pub violations: Vec<String>,
}

impl Serialize for CorpusItem {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        let mut m = s.serialize_map(Some(5))?;
        m.serialize_entry("index", &self.index)?;
        m.serialize_entry("stratum", self.stratum.name())?;
        m.serialize_entry("b", &self.b)?;
        m.serialize_entry("report", &self.report)?;
        m.serialize_entry("violations", &self.violations)?;
        m.end()
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize)]
pub struct CorpusSummary {
    pub count: usize,
    pub kinds: BTreeMap<String, usize>,
    pub violations: usize,
    pub failing_items: Vec<usize>,
}

fn random_element<R: Rng + ?Sized>(field: &Field, base: Base, v: i64, prec: i64, rng: &mut R) -> Element {
    match base {
        Base::Complete => Element::Series(sample::series_with_valuation(field, v, prec, rng)),
        Base::Rational => Element::Rational(sample::ratfunc_with_valuation(field, v, 2, rng)),
    }
}

/// Classifies one item and checks e·f·g·d = p, invariance under
/// b -> b + (y^p - y) and under b -> c·b for c in F_p*.
pub fn corpus_item(spec: &FieldSpec, field: &Field, index: usize) -> CorpusItem {
    let p = field.characteristic();
    let mut rng = item_rng(spec.seed, index as u64);
    let stratum = Stratum::ALL[index % 4];
    let v = stratum.valuation(p as i64, &mut rng);
    let b = random_element(field, spec.base, v, spec.prec, &mut rng);
    let mut violations = Vec::new();

    let report = match classify_extension(&b, spec.prec) {
        Ok(r) => r,
        Err(e) => {
            return CorpusItem {
                index,
                stratum,
                b: b.to_string(),
                report: None,
                violations: vec![format!("classify: {e}")],
            }
        }
    };
    if report.degree() != p {
        violations.push(format!("e*f*g*d = {} != p = {p}", report.degree()));
    }

    let yv = rng.gen_range(-2..=2);
    let y = random_element(field, spec.base, yv, spec.prec, &mut rng);
    let shifted = y.artin_schreier().and_then(|w| b.add(&w));
    match shifted.and_then(|b2| classify_extension(&b2, spec.prec)) {
        Ok(r2) if (r2.kind, r2.invariants()) == (report.kind, report.invariants()) => {}
        Ok(r2) => violations.push(format!(
            "class invariance: y = {y} gives {} {:?}",
            r2.kind,
            r2.invariants()
        )),
        Err(e) => violations.push(format!("class invariance: y = {y}: {e}")),
    }

    let c = field.from_int(rng.gen_range(1..p as i64));
    match b.scale(&c).and_then(|cb| classify_extension(&cb, spec.prec)) {
        Ok(r3) if (r3.kind, r3.invariants()) == (report.kind, report.invariants()) => {}
        Ok(r3) => violations.push(format!(
            "scaling invariance: c = {c} gives {} {:?}",
            r3.kind,
            r3.invariants()
        )),
        Err(e) => violations.push(format!("scaling invariance: c = {c}: {e}")),
    }
    CorpusItem {
        index,
        stratum,
        b: b.to_string(),
        report: Some(report),
        violations,
    }
}

/// Generates and classifies `count` elements, writing one JSON object per
/// line to `out` in index order.
pub fn corpus_run<W: Write>(spec: &FieldSpec, count: usize, mode: Execution, out: &mut W) -> Result<CorpusSummary> {
    let field = spec.field()?;
    let items = map_indexed(count, mode, |i| corpus_item(spec, &field, i));
    let mut summary = CorpusSummary {
        count,
        ..Default::default()
    };
    for item in &items {
        let line = serde_json::to_string(item).map_err(|e| Error::Io(e.to_string()))?;
        writeln!(out, "{line}")?;
        if let Some(r) = &item.report {
            *summary.kinds.entry(r.kind.to_string()).or_default() += 1;
        }
        if !item.violations.is_empty() {
            summary.violations += item.violations.len();
            summary.failing_items.push(item.index);
        }
    }
    out.flush()?;
    Ok(summary)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn enumeration_starts_with_t() {
        let f3 = Field::prime(3).unwrap();
        let first: Vec<String> = (0..5)
            .map(|k| enumerate_maximal_ideal(&f3, k).unwrap().to_string())
            .collect();
        assert_eq!(first, ["t", "2*t", "t^2", "t^2+t", "t^2+2*t"]);
    }

    #[test]
    fn rational_scan_finds_t() {
        for p in [2, 3] {
            let spec = FieldSpec::new(p, Base::Rational);
            let v = criterion_scan(&spec, 10, Execution::Sequential).unwrap();
            assert!(!v.criterion_holds_on_sample);
            assert_eq!(v.witness_b.as_ref().unwrap().b, "t");
            assert_eq!(v.nonunique_extension.as_ref().unwrap().g, p);
        }
    }

    #[test]
    fn complete_scan_holds() {
        let spec = FieldSpec::new(2, Base::Complete);
        let v = criterion_scan(&spec, 20, Execution::Parallel).unwrap();
        assert!(v.criterion_holds_on_sample, "{:?}", v.failures);
        assert!(v.witness_b.is_none() && v.nonunique_extension.is_none());
    }

    #[test]
    fn demo_examples() {
        let spec = FieldSpec::new(3, Base::Complete);
        let d = theorem_demo("t^-1", &spec, Execution::Sequential).unwrap();
        assert_eq!(d.classification.invariants(), (3, 1, 1, 1));
        assert_eq!(d.valuation_of_root, Some(ExtValuation::Unique(Value::frac(-1, 3))));

        let spec = FieldSpec::new(2, Base::Complete);
        let d = theorem_demo("0", &spec, Execution::Sequential).unwrap();
        assert_eq!(d.classification.kind, ExtensionKind::Split);

        let spec = FieldSpec::new(2, Base::Rational);
        let d = theorem_demo("t", &spec, Execution::Sequential).unwrap();
        assert!(d.violations().is_empty(), "{:?}", d.violations());
        let s = d.sequence.unwrap();
        assert_eq!(s.gamma, [2, 4, 8, 16, 32, 64].map(Value::int));
    }

    #[test]
    fn corpus_is_clean_and_ordered() {
        let spec = FieldSpec::new(3, Base::Rational);
        let mut buf = Vec::new();
        let s = corpus_run(&spec, 24, Execution::Parallel, &mut buf).unwrap();
        assert_eq!(s.violations, 0, "{}", String::from_utf8_lossy(&buf));
        assert!(s.kinds.get("Immediate").copied().unwrap_or(0) >= 1);
        let mut buf2 = Vec::new();
        corpus_run(&spec, 24, Execution::Sequential, &mut buf2).unwrap();
        assert_eq!(buf, buf2);

        let mut empty = Vec::new();
        assert_eq!(corpus_run(&spec, 0, Execution::Parallel, &mut empty).unwrap().count, 0);
        assert!(empty.is_empty());
    }
}
