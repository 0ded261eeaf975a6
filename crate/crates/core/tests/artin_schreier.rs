use std::collections::HashSet;

use cvf_core::artin_schreier::{
    as_reduce, as_solve_complete, classify_extension, extension_valuation, hensel_lift, membership_rational, Base,
    Element, Evidence, ExtValuation, ExtensionKind, Membership,
};
use cvf_core::harness::{corpus_run, FieldSpec};
use cvf_core::parallel::{item_rng, Execution};
use cvf_core::{sample, Field, LaurentSeries, Poly, RatFunc, SeriesValuation};
use proptest::prelude::*;
use rand::Rng;

/// All x = N/D with deg N, deg D <= 3 and D monic.
fn small_rationals(f: &Field) -> Vec<RatFunc> {
    let els = f.elements().unwrap();
    let q = els.len();
    let polys = |len: usize| -> Vec<Vec<cvf_core::FqElem>> {
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
    let nums = polys(4);
    let mut dens = Vec::new();
    for d in 0..=3 {
        for mut cs in polys(d) {
            cs.push(f.one());
            dens.push(Poly::from_coeffs(f, &cs).unwrap());
        }
    }
    let mut out = Vec::new();
    for n in &nums {
        let n = Poly::from_coeffs(f, n).unwrap();
        for d in &dens {
            out.push(RatFunc::new(n.clone(), d.clone()).unwrap());
        }
    }
    out
}

#[test]
fn membership_agrees_with_brute_force_oracle() {
    for p in [2, 3] {
        let f = Field::prime(p).unwrap();
        let xs = small_rationals(&f);
        let image: HashSet<RatFunc> = xs.iter().map(|x| x.artin_schreier().unwrap()).collect();

        let mut rng = item_rng(11, p);
        let mut corpus: Vec<RatFunc> = (0..100)
            .map(|_| xs[rng.gen_range(0..xs.len())].artin_schreier().unwrap())
            .collect();
        corpus.extend((0..100).map(|_| sample::ratfunc(&f, 6, 6, &mut rng)));
        corpus.extend(
            ["t", "1/t", "1/(t+1)", "t^2", "1"]
                .iter()
                .map(|s| RatFunc::parse(&f, s).unwrap()),
        );

        for b in &corpus {
            let m = membership_rational(b).unwrap();
            if image.contains(b) {
                assert!(m.is_solvable(), "oracle solves {b}, decision says {m:?}");
            }
            match &m {
                Membership::Solvable { x } => {
                    assert_eq!(&x.artin_schreier().unwrap(), b);
                    let small = x.num().degree().unwrap_or(0) <= 3 && x.den().degree().unwrap_or(0) <= 3;
                    if small {
                        assert!(image.contains(b));
                    }
                    assert_eq!(m.solutions().unwrap().len() as u64, p);
                }
                Membership::NotSolvable { .. } => assert!(!image.contains(b)),
            }
        }
    }
}

#[test]
fn t_is_not_solvable_for_small_x() {
    for p in [2, 3] {
        let f = Field::prime(p).unwrap();
        let t = RatFunc::t(&f);
        assert!(small_rationals(&f).iter().all(|x| x.artin_schreier().unwrap() != t));
        assert!(!membership_rational(&t).unwrap().is_solvable());
    }
}

#[test]
fn membership_over_extension_residue_field() {
    let f4 = Field::new(2, 2).unwrap();
    let u = f4.generator().unwrap();
    // u has trace 1 over F_2, so the constant u is not y^2 - y
    assert!(!membership_rational(&RatFunc::constant(u.clone()))
        .unwrap()
        .is_solvable());
    let y = RatFunc::parse(&f4, "u/(t^2+u*t+1) + u*t").unwrap();
    let b = y.artin_schreier().unwrap();
    let sols = membership_rational(&b).unwrap().solutions().unwrap();
    assert!(sols.contains(&y));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn forward_direction(seed in any::<u64>(), which in 0usize..4) {
        let f = [Field::prime(2), Field::prime(3), Field::prime(5), Field::new(3, 2)][which].clone().unwrap();
        let p = f.characteristic() as usize;
        let mut rng = item_rng(seed, 0);
        let b = sample::maximal_ideal_series(&f, 40, &mut rng);
        let roots = as_solve_complete(&b).unwrap();
        prop_assert_eq!(roots.len(), p);
        for x in &roots {
            prop_assert!(x.frobenius().sub(x).unwrap().sub(&b).unwrap().valuation().lower_bound() >= 40);
            let d = x.sub(&roots[0]).unwrap();
            prop_assert!(d.terms().all(|(k, c)| k == 0 && c.as_prime().is_some()));
        }
        // Newton lifting from the residue 0 finds the same root
        let one = LaurentSeries::one(&f, 40);
        let mut poly = vec![b.neg(), one.neg()];
        poly.resize(p + 1, LaurentSeries::zero(&f, 40));
        poly[p] = one;
        let lift = hensel_lift(&poly, &f.zero()).unwrap();
        prop_assert_eq!(&lift.root, &roots[0]);
    }

    #[test]
    fn class_and_scaling_invariance(seed in any::<u64>(), which in 0usize..3, rational in any::<bool>(), vb in -7i64..5, vy in -3i64..3) {
        let f = Field::prime([2, 3, 5][which]).unwrap();
        let p = f.characteristic();
        let mut rng = item_rng(seed, 1);
        let (b, y) = if rational {
            (Element::Rational(sample::ratfunc_with_valuation(&f, vb, 2, &mut rng)),
             Element::Rational(sample::ratfunc_with_valuation(&f, vy, 2, &mut rng)))
        } else {
            (Element::Series(sample::series_with_valuation(&f, vb, 48, &mut rng)),
             Element::Series(sample::series_with_valuation(&f, vy, 48, &mut rng)))
        };
        let r = classify_extension(&b, 48).unwrap();
        prop_assert_eq!(r.degree(), p);
        let shifted = b.add(&y.artin_schreier().unwrap()).unwrap();
        let r2 = classify_extension(&shifted, 48).unwrap();
        prop_assert_eq!((r.kind, r.invariants()), (r2.kind, r2.invariants()));
        let c = f.from_int(rng.gen_range(1..p as i64));
        let r3 = classify_extension(&b.scale(&c).unwrap(), 48).unwrap();
        prop_assert_eq!((r.kind, r.invariants()), (r3.kind, r3.invariants()));
    }

    #[test]
    fn reduction_is_a_class_representative(seed in any::<u64>(), which in 0usize..3, v in -9i64..4) {
        let f = Field::prime([2, 3, 5][which]).unwrap();
        let p = f.characteristic() as i64;
        let mut rng = item_rng(seed, 2);
        let b = Element::Rational(sample::ratfunc_with_valuation(&f, v, 3, &mut rng));
        let (r, y) = as_reduce(&b).unwrap();
        prop_assert_eq!(r.clone(), b.sub(&y.artin_schreier().unwrap()).unwrap());
        match r.as_rational().unwrap().ord() {
            None => {}
            Some(w) if w > 0 => {}
            Some(w) if w < 0 => prop_assert!(w % p != 0),
            Some(_) => prop_assert!(!r.leading().unwrap().trace_to_prime().is_zero()),
        }
    }
}

#[test]
fn fundamental_equality_on_corpora() {
    for p in [2, 3, 5] {
        for base in [Base::Complete, Base::Rational] {
            let mut spec = FieldSpec::new(p, base);
            spec.prec = 48;
            let mut sink = Vec::new();
            let s = corpus_run(&spec, 500, Execution::Parallel, &mut sink).unwrap();
            assert_eq!(s.violations, 0, "p = {p}, {base}: items {:?}", s.failing_items);
            assert_eq!(sink.iter().filter(|&&c| c == b'\n').count(), 500);
            if base == Base::Rational {
                assert!(s.kinds.get("Immediate").copied().unwrap_or(0) >= 1);
            }
        }
    }
}

/// For a completion root a and any d: v(d^p - d - b) = v(a - d) when
/// v(a - d) > 0 and p·v(a - d) when v(a - d) < 0.
#[test]
fn step_one_identity_on_immediate_instances() {
    let prec = 64;
    for p in [2u64, 3, 5] {
        let f = Field::prime(p).unwrap();
        for lit in ["t", "t^2+t^3", "t/(1+t)"] {
            let b = RatFunc::parse(&f, lit).unwrap();
            let rep = classify_extension(&Element::Rational(b.clone()), prec).unwrap();
            assert_eq!(rep.kind, ExtensionKind::Immediate, "{lit}");
            let Evidence::Immediate { embeddings, .. } = &rep.evidence else {
                unreachable!()
            };
            let mut rng = item_rng(p, 7);
            for _ in 0..20 {
                let d = sample::ratfunc(&f, 4, 2, &mut rng);
                let lhs = d.artin_schreier().unwrap().sub(&b).unwrap().expand(prec);
                for e in embeddings {
                    let ad = e.root.sub(&d.expand(prec)).unwrap().valuation();
                    let SeriesValuation::Finite(w) = ad else { continue };
                    let expected = if w > 0 {
                        w
                    } else if w < 0 {
                        p as i64 * w
                    } else {
                        continue;
                    };
                    if expected < prec - 2 * p as i64 * w.abs() {
                        assert_eq!(lhs.valuation(), SeriesValuation::Finite(expected), "b = {lit}, d = {d}");
                    }
                }
            }
        }
    }
}

#[test]
fn immediate_valuations_differ_across_embeddings() {
    for p in [2u64, 3, 5] {
        let f = Field::prime(p).unwrap();
        let rep = classify_extension(&Element::Rational(RatFunc::t(&f)), 64).unwrap();
        assert_eq!(rep.invariants(), (1, 1, p, 1));
        let x = vec![
            Element::Rational(RatFunc::zero(&f)),
            Element::Rational(RatFunc::one(&f)),
        ];
        let ExtValuation::PerEmbedding(vals) = extension_valuation(&x, &rep).unwrap() else {
            panic!()
        };
        assert_eq!(vals[0], SeriesValuation::Finite(1));
        assert!(vals[1..].iter().all(|v| *v == SeriesValuation::Finite(0)));
        let Evidence::Immediate { distinguishing, .. } = &rep.evidence else {
            panic!()
        };
        assert_eq!(distinguishing.len() as u64, p * (p - 1) / 2);
    }
}
