//! Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any
//! failure. Runs without the libtest harness so the report stays readable.

use std::collections::HashSet;
use std::process::{Command, ExitCode};
use std::time::{Duration, Instant};

use cvf_core::artin_schreier::{
    as_solve_complete, classify_extension, extension_valuation, membership_rational, Base, Element, Evidence,
    ExtValuation, ExtensionKind, Membership,
};
use cvf_core::harness::check_complete_roots;
use cvf_core::parallel::{item_rng, Execution};
use cvf_core::pseudo_convergence::{
    c_set_probe, is_pseudo_convergent, matching_embedding, min_degree_check, pc_valuation_table, step2_generate,
    CoeffPool,
};
use cvf_core::{sample, Field, FqElem, LaurentSeries, Poly, RatFunc, SeriesValuation, Value};
use rand::Rng;

type Check = Result<String, String>;
type Criterion = (&'static str, fn() -> Check, Duration);

const PREC: i64 = 64;

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

fn err<E: std::fmt::Display>(e: E) -> String {
    e.to_string()
}

fn forward_direction() -> Check {
    let mut n = 0;
    for p in [2u64, 3, 5] {
        let f = Field::prime(p).map_err(err)?;
        let mut rng = item_rng(1, p);
        for _ in 0..100 {
            let b = sample::maximal_ideal_series(&f, PREC, &mut rng);
            if let Some(why) = check_complete_roots(&b).map_err(err)? {
                return Err(format!("p = {p}, b = {b}: {why}"));
            }
            n += 1;
        }
    }
    Ok(format!("{n} elements, p roots each, residual >= O(t^{PREC})"))
}

fn telescoping() -> Check {
    let f = Field::prime(2).map_err(err)?;
    let b = LaurentSeries::parse(&f, "t", PREC).map_err(err)?;
    let roots = as_solve_complete(&b).map_err(err)?;
    let mut closed = LaurentSeries::zero(&f, PREC);
    let mut bp = b.clone();
    while bp.valuation().lower_bound() < PREC {
        closed = closed.sub(&bp).map_err(err)?;
        bp = bp.frobenius();
    }
    let literal = LaurentSeries::parse(&f, "t+t^2+t^4+t^8+t^16+t^32+O(t^64)", PREC).map_err(err)?;
    ensure(closed == literal, || format!("closed form {closed} != {literal}"))?;
    ensure(roots.contains(&closed), || format!("roots {roots:?} miss {closed}"))?;
    Ok(format!("root = {closed}"))
}

fn classifier_table() -> Check {
    let f2 = Field::prime(2).map_err(err)?;
    let mut rows = 0;
    for p in [2u64, 3, 5] {
        let f = Field::prime(p).map_err(err)?;
        let t_minus_p = format!("t^-{p}");
        let cases = [
            ("t", Base::Complete, ExtensionKind::Split, (1, 1, p, 1)),
            ("t^-1", Base::Complete, ExtensionKind::Ramified, (p, 1, 1, 1)),
            (
                t_minus_p.as_str(),
                Base::Complete,
                ExtensionKind::Ramified,
                (p, 1, 1, 1),
            ),
            ("t", Base::Rational, ExtensionKind::Immediate, (1, 1, p, 1)),
        ];
        for (lit, base, kind, inv) in cases {
            let el = Element::parse(&f, base, lit, PREC).map_err(err)?;
            let r = classify_extension(&el, PREC).map_err(err)?;
            ensure(r.kind == kind && r.invariants() == inv, || {
                format!("p = {p}, ({lit}, {base}): {} {:?}", r.kind, r.invariants())
            })?;
            ensure(r.degree() == p, || format!("p = {p}, {lit}: e*f*g*d = {}", r.degree()))?;
            if lit == t_minus_p {
                let Evidence::Ramified { pole_order, .. } = r.evidence else {
                    return Err("no ramified evidence".into());
                };
                ensure(pole_order == 1, || {
                    format!("p = {p}: t^-p reduces to pole order {pole_order}")
                })?;
            }
            rows += 1;
        }
    }
    let one = Element::parse(&f2, Base::Complete, "1", PREC).map_err(err)?;
    let r = classify_extension(&one, PREC).map_err(err)?;
    ensure(
        r.kind == ExtensionKind::Residual && r.invariants() == (1, 2, 1, 1),
        || format!("1 over F_2((t)): {} {:?}", r.kind, r.invariants()),
    )?;
    Ok(format!("{} rows exact", rows + 1))
}

fn class_invariance() -> Check {
    let mut checked = 0;
    for p in [2u64, 3, 5] {
        let f = Field::prime(p).map_err(err)?;
        for base in [Base::Complete, Base::Rational] {
            let mut rng = item_rng(4, p * 2 + (base == Base::Rational) as u64);
            let draw = |v: i64, rng: &mut dyn rand::RngCore| match base {
                Base::Complete => Element::Series(sample::series_with_valuation(&f, v, 48, rng)),
                Base::Rational => Element::Rational(sample::ratfunc_with_valuation(&f, v, 2, rng)),
            };
            for i in 0..300 {
                let vb = rng.gen_range(-7..5);
                let b = draw(vb, &mut rng);
                let r = classify_extension(&b, 48).map_err(err)?;
                let other = if i < 200 {
                    let vy = rng.gen_range(-3..3);
                    let y = draw(vy, &mut rng);
                    b.add(&y.artin_schreier().map_err(err)?).map_err(err)?
                } else {
                    b.scale(&f.from_int(rng.gen_range(1..p as i64))).map_err(err)?
                };
                let r2 = classify_extension(&other, 48).map_err(err)?;
                ensure((r.kind, r.invariants()) == (r2.kind, r2.invariants()), || {
                    format!("p = {p}, {base}: {b} is {} but {other} is {}", r.kind, r2.kind)
                })?;
                checked += 1;
            }
        }
    }
    Ok(format!("{checked} pairs, zero violations"))
}

/// All x = N/D with deg N, deg D <= 3 and D monic.
fn small_rationals(f: &Field) -> Result<Vec<RatFunc>, String> {
    let els = f.elements().map_err(err)?;
    let q = els.len();
    let polys = |len: usize| -> Vec<Vec<FqElem>> {
        (0..q.pow(len as u32))
            .map(|mut k| {
                (0..len)
                    .map(|_| {
                        let c = els[k % q].clone();
                        k /= q;
                        c
                    })
                    .collect()
            })
            .collect()
    };
    let mut out = Vec::new();
    for n in polys(4) {
        let n = Poly::from_coeffs(f, &n).map_err(err)?;
        for d in 0..=3 {
            for mut cs in polys(d) {
                cs.push(f.one());
                let d = Poly::from_coeffs(f, &cs).map_err(err)?;
                out.push(RatFunc::new(n.clone(), d).map_err(err)?);
            }
        }
    }
    Ok(out)
}

fn membership_oracle() -> Check {
    let mut stats = Vec::new();
    for p in [2u64, 3] {
        let f = Field::prime(p).map_err(err)?;
        let xs = small_rationals(&f)?;
        let image: HashSet<RatFunc> = xs
            .iter()
            .map(|x| x.artin_schreier())
            .collect::<Result<_, _>>()
            .map_err(err)?;
        let mut rng = item_rng(5, p);
        let mut corpus: Vec<RatFunc> = (0..100)
            .map(|_| xs[rng.gen_range(0..xs.len())].artin_schreier())
            .collect::<Result<_, _>>()
            .map_err(err)?;
        corpus.extend((0..100).map(|_| sample::ratfunc(&f, 3, 3, &mut rng)));
        let (mut yes, mut no) = (0, 0);
        for b in &corpus {
            let m = membership_rational(b).map_err(err)?;
            match &m {
                Membership::Solvable { x } => {
                    ensure(x.artin_schreier().map_err(err)? == *b, || {
                        format!("bad witness {x} for {b}")
                    })?;
                    yes += 1;
                }
                Membership::NotSolvable { .. } => no += 1,
            }
            // x of small height: solvable in F_p(t) iff some x in the enumeration works,
            // since every solution differs from it by a constant
            let decided_small = match &m {
                Membership::Solvable { x } => x.num().degree().unwrap_or(0) <= 3 && x.den().degree().unwrap_or(0) <= 3,
                Membership::NotSolvable { .. } => false,
            };
            ensure(decided_small == image.contains(b), || {
                format!("p = {p}: oracle and decision differ on {b}")
            })?;
        }
        ensure(yes > 0 && no > 0, || {
            format!("p = {p}: corpus is one-sided ({yes} solvable, {no} not)")
        })?;
        stats.push(format!("F_{p}: {yes} solvable / {no} certified"));
    }
    Ok(stats.join(", "))
}

fn sequence_exactness() -> Check {
    let f = Field::prime(2).map_err(err)?;
    let b = RatFunc::t(&f);
    let pre = step2_generate(&b, 6).map_err(err)?;
    let vp = pre.p_values().map_err(err)?.ok_or("no P values")?;
    for i in 0..=6 {
        let expected = 1i64 << (i + 1);
        ensure(vp[i] == Value::int(expected), || {
            format!("v(P(a_{i})) = {} != {expected}", vp[i])
        })?;
        if i < 6 {
            ensure(pre.gamma[i] == Some(expected), || {
                format!("gamma_{i} = {:?} != {expected}", pre.gamma[i])
            })?;
        }
    }
    let tail = pre.elems[6].sub(&pre.elems[5]).map_err(err)?.ord();
    ensure(tail == Some(64), || format!("v(a_6 - a_5) = {tail:?}"))?;
    ensure(is_pseudo_convergent(&pre).map_err(err)?, || {
        "not pseudo-convergent".into()
    })?;
    let probe = c_set_probe(&b, 6, 32, 0).map_err(err)?;
    ensure(probe.maxima.windows(2).all(|w| w[0] < w[1]), || {
        format!("C maxima {:?}", probe.maxima)
    })?;
    ensure(probe.unbounded_at.is_none(), || "C unbounded".into())?;
    Ok(format!(
        "gamma = 2..64, C maxima {}",
        probe
            .maxima
            .iter()
            .map(|v| v.to_string())
            .collect::<Vec<_>>()
            .join(" < ")
    ))
}

fn minimal_degree() -> Check {
    let mut out = Vec::new();
    for p in [2u64, 3] {
        let f = Field::prime(p).map_err(err)?;
        let pre = step2_generate(&RatFunc::t(&f), 7).map_err(err)?;
        let pool = CoeffPool::standard(&f).map_err(err)?;
        let rep = min_degree_check(&pre, &pool, 200, 7, Execution::Parallel).map_err(err)?;
        ensure(rep.counterexamples.is_empty(), || {
            format!(
                "p = {p}: {} counterexamples, first {}",
                rep.counterexamples.len(),
                rep.counterexamples[0].polynomial
            )
        })?;
        ensure(rep.inconclusive.is_empty(), || {
            format!("p = {p}: {} inconclusive", rep.inconclusive.len())
        })?;
        ensure(rep.generator_increasing, || format!("p = {p}: P not increasing"))?;
        let stab: usize = rep.per_degree.iter().map(|d| d.stabilized).sum();
        ensure(stab == 200 * (p as usize - 1), || format!("p = {p}: {stab} stabilized"))?;
        out.push(format!("p = {p}: {stab} stabilized"));
    }
    Ok(out.join(", "))
}

fn table_consistency() -> Check {
    let mut out = Vec::new();
    for p in [2u64, 3] {
        let f = Field::prime(p).map_err(err)?;
        let b = RatFunc::t(&f);
        let pre = step2_generate(&b, 7).map_err(err)?;
        let report = classify_extension(&Element::Rational(b), PREC).map_err(err)?;
        let k = matching_embedding(&pre, &report).map_err(err)?;
        let pool = CoeffPool::standard(&f).map_err(err)?;
        let mut rng = item_rng(8, p);
        let extra: Vec<Vec<RatFunc>> = (0..50)
            .map(|_| pool.draw(rng.gen_range(0..p as usize), &mut rng))
            .collect();
        let table = pc_valuation_table(&pre, &extra).map_err(err)?;
        let basis = (0..p as usize).map(|d| {
            let mut q = vec![RatFunc::zero(&f); d + 1];
            q[d] = RatFunc::one(&f);
            q
        });
        let mut rows = 0;
        for (q, row) in basis.chain(extra).zip(&table) {
            let qe: Vec<Element> = q.into_iter().map(Element::Rational).collect();
            let ExtValuation::PerEmbedding(vals) = extension_valuation(&qe, &report).map_err(err)? else {
                return Err("expected per-embedding valuations".into());
            };
            ensure(vals[k].to_value() == Some(row.value), || {
                format!(
                    "p = {p}: v({}) = {} along the sequence, {} at embedding {k}",
                    row.polynomial, row.value, vals[k]
                )
            })?;
            rows += 1;
        }
        if p == 2 {
            let x = vec![
                Element::Rational(RatFunc::zero(&f)),
                Element::Rational(RatFunc::one(&f)),
            ];
            let ExtValuation::PerEmbedding(vals) = extension_valuation(&x, &report).map_err(err)? else {
                return Err("expected per-embedding valuations".into());
            };
            let pair = vals.clone();
            ensure(pair == [SeriesValuation::Finite(1), SeriesValuation::Finite(0)], || {
                format!("v(X) = {pair:?}")
            })?;
            ensure(report.g == 2, || format!("g = {}", report.g))?;
        }
        out.push(format!("p = {p}: {rows} rows"));
    }
    Ok(out.join(", ") + "; v(X) = (1, 0) for p = 2")
}

fn determinism() -> Check {
    let run = || -> Result<Vec<u8>, String> {
        let out = Command::new(env!("CARGO_BIN_EXE_cvf"))
            .args(["demo", "t", "--p", "2", "--base", "rational", "--json"])
            .env_remove("CVF_PREC")
            .output()
            .map_err(err)?;
        ensure(out.status.success(), || {
            format!("exit {:?}: {}", out.status.code(), String::from_utf8_lossy(&out.stderr))
        })?;
        Ok(out.stdout)
    };
    let a = run()?;
    let b = run()?;
    ensure(!a.is_empty() && a == b, || "outputs differ".into())?;
    Ok(format!("{} identical bytes", a.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 9] = [
        ("forward direction", forward_direction, Duration::from_secs(10)),
        ("telescoping oracle", telescoping, Duration::from_secs(10)),
        ("classifier table", classifier_table, Duration::from_secs(10)),
        ("class invariance", class_invariance, Duration::from_secs(10)),
        ("membership oracle", membership_oracle, Duration::from_secs(60)),
        ("sequence exactness", sequence_exactness, Duration::from_secs(10)),
        ("minimal degree", minimal_degree, Duration::from_secs(10)),
        ("table vs embedding", table_consistency, Duration::from_secs(10)),
        ("determinism", determinism, Duration::from_secs(10)),
    ];
    // budgets assume an optimized build; debug builds only report them
    let enforce_budget = !cfg!(debug_assertions);
    let mut failed = 0;
    for (i, (name, check, budget)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let mut res = check();
        let took = start.elapsed();
        if enforce_budget && took > *budget {
            if let Ok(m) = res {
                res = Err(format!("{m}; over budget {budget:?}"));
            }
        }
        match res {
            Ok(m) => println!("PASS {} {name}: {m} ({:.2}s)", i + 1, took.as_secs_f64()),
            Err(m) => {
                failed += 1;
                println!("FAIL {} {name}: {m} ({:.2}s)", i + 1, took.as_secs_f64());
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
