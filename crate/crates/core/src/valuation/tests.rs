use proptest::prelude::*;

use super::*;
use crate::ordgroup::{SmallKind, Smallness};
use crate::scalars::{int, rat, Constants};

fn padic(p: u64) -> PAdicQ {
    PAdicQ::new(p).unwrap()
}

fn qpoly(xs: &[i64]) -> Poly<Rational> {
    Poly::new(xs.iter().map(|&x| int(x)).collect())
}

fn sqrt2() -> Scalar {
    Constants::builtin().scalar("sqrt2").unwrap()
}

fn delta(xs: &[Scalar]) -> Delta {
    Delta::Finite(SlotVector::dense(xs.iter().cloned()))
}

fn marked(k: &impl ValuedField, xs: &[Scalar], cut: usize, m: i64) -> Delta {
    let s = k.hull().index().segment(0, Cut::Count(cut)).unwrap();
    Delta::Finite(SlotVector::dense(xs.iter().cloned()).with_marker(s, Scalar::from_int(m)))
}

fn big(xs: &[i64]) -> Vec<BigInt> {
    xs.iter().map(|&x| BigInt::from(x)).collect()
}

fn fin(m: i64, g: &[i64]) -> ExtendedValue {
    ExtendedValue::Finite { m, g: big(g) }
}

fn same<F: ValuedField>(k: &F, d: &Delta, x: &ExtendedValue, y: &ExtendedValue) -> bool {
    match d {
        Delta::Infinity => x == y,
        Delta::Finite(d) => compare_values(&k.hull(), d, x, y).unwrap() == Ordering::Equal,
    }
}

#[test]
fn field_values() {
    let k = padic(3);
    assert_eq!(k.value(&int(18)), Some(big(&[2])));
    assert_eq!(k.value(&int(10)), Some(big(&[0])));
    assert_eq!(k.value(&rat(5, 27)), Some(big(&[-3])));
    assert_eq!(k.value(&int(0)), None);
    let l = LexCompositeQt::new(3).unwrap();
    let t = RatFunc::t();
    let c = RatFunc::rational(int(9)) * t.pow(2) + t.pow(3);
    assert_eq!(l.value(&c), Some(big(&[2, 2])));
    let frac = (RatFunc::rational(int(1)) / (RatFunc::rational(int(3)) * t.clone())).unwrap();
    assert_eq!(l.value(&frac), Some(big(&[-1, -1])));
    assert!(PAdicQ::new(9).is_err());
}

#[test]
fn depth_zero_examples() {
    let k = padic(3);
    let f = qpoly(&[9, 0, 1]);
    let w = DepthZero::new(&k, int(0), delta(&[Scalar::from_rational(rat(1, 2))])).unwrap();
    assert_eq!(dz_eval(&k, &w, &f).unwrap(), fin(2, &[0]));
    let w = DepthZero::new(&k, int(1), Delta::Infinity).unwrap();
    assert_eq!(dz_eval(&k, &w, &f).unwrap(), fin(0, &[0]));
    let w = DepthZero::new(&k, int(3), Delta::Infinity).unwrap();
    assert_eq!(dz_eval(&k, &w, &qpoly(&[-3, 1])).unwrap(), ExtendedValue::Infinity);
}

#[test]
fn boundary_valuations() {
    let k = padic(3);
    let f = qpoly(&[9, 0, 1]);
    assert_eq!(omega_minus_infinity(&k, &int(0), &f), Some((-2, big(&[0]))));
    assert_eq!(omega_minus_infinity(&k, &int(5), &f), Some((-2, big(&[0]))));
    assert_eq!(omega_minus_infinity(&k, &int(0), &qpoly(&[9])), Some((0, big(&[2]))));
    assert_eq!(omega_minus_infinity(&k, &int(0), &Poly::zero()), None);

    let minus_inf = Delta::Finite(k.hull().minus_infinity());
    let w = DepthZero::new(&k, int(0), minus_inf).unwrap();
    assert_eq!(dz_eval(&k, &w, &f).unwrap(), fin(2, &[0]));

    let g = &qpoly(&[0, 0, 1]) * &qpoly(&[-1, 1]);
    assert_eq!(omega_inf_minus(&k, &int(1), &g), Some((1, big(&[0]))));
    assert_eq!(omega_inf_minus(&k, &int(0), &f), Some((0, big(&[2]))));
    let inf_minus = Delta::Finite(k.hull().infinity_minus());
    for (a, h) in [(int(1), g), (int(0), f)] {
        let w = DepthZero::new(&k, a.clone(), inf_minus.clone()).unwrap();
        let (m, v) = omega_inf_minus(&k, &a, &h).unwrap();
        assert_eq!(dz_eval(&k, &w, &h).unwrap(), ExtendedValue::Finite { m, g: v });
    }
}

#[test]
fn equality_examples() {
    let k = padic(3);
    let one = delta(&[Scalar::from_int(1)]);
    assert!(dz_equal(&k, &int(0), &one, &int(3), &one).unwrap());
    assert!(!dz_equal(&k, &int(0), &one, &int(1), &one).unwrap());
    assert!(dz_equal(&k, &int(2), &Delta::Infinity, &int(2), &Delta::Infinity).unwrap());
    assert!(!dz_equal(&k, &int(2), &Delta::Infinity, &int(5), &Delta::Infinity).unwrap());
}

#[test]
fn equivalence_examples() {
    let k = padic(3);
    let d = delta(&[sqrt2()]);
    let junk = marked(&k, &[sqrt2()], 1, 5);
    assert!(dz_equivalent(&k, &int(4), &d, &int(4), &junk).unwrap());
    assert!(!dz_equal(&k, &int(4), &d, &int(4), &junk).unwrap());
    assert!(dz_equivalent(&k, &int(0), &d, &int(9), &junk).unwrap());
    assert!(!dz_equivalent(&k, &int(0), &d, &int(3), &junk).unwrap());

    let one = delta(&[Scalar::from_int(1)]);
    assert!(dz_equivalent(&k, &int(0), &one, &int(3), &one).unwrap());
    assert!(dz_equal(&k, &int(0), &one, &int(3), &one).unwrap());

    let minus = marked(&k, &[Scalar::from_int(1)], 1, -1);
    let plus = marked(&k, &[Scalar::from_int(1)], 1, 1);
    assert!(!dz_equivalent(&k, &int(0), &minus, &int(0), &plus).unwrap());
    let minus3 = marked(&k, &[Scalar::from_int(1)], 1, -3);
    assert!(dz_equivalent(&k, &int(0), &minus, &int(3), &minus3).unwrap());
}

#[test]
fn value_groups() {
    let k = padic(3);
    let r = value_group_check(&k, &delta(&[Scalar::from_rational(rat(1, 2))])).unwrap();
    assert_eq!(r.verdict, Smallness::Small(SmallKind::Commensurable));
    let r = value_group_check(&k, &delta(&[sqrt2()])).unwrap();
    assert_eq!(r.verdict, Smallness::Small(SmallKind::PreservesRank));
    assert_eq!(r.rational_rank_quotient, 1);
    let l = LexCompositeQt::new(3).unwrap();
    let r = value_group_check(&l, &marked(&l, &[Scalar::zero()], 1, 1)).unwrap();
    assert_eq!(r.verdict, Smallness::Small(SmallKind::IncreasesRankByOne));
    assert!(value_group_check(&k, &Delta::Infinity).is_err());
}

#[test]
fn ball_generic_point() {
    let k = padic(11);
    let f = &qpoly(&[0, 0, 1]) + &Poly::constant(int(1331));
    let d = SlotVector::dense([Scalar::from_int(1)]);
    let r = ball_inf_check(&k, &int(0), &d, &f, 50, 7).unwrap();
    match &r {
        BallReport::Generic { mu, witness, witness_value, violations, .. } => {
            assert_eq!(*mu, 2);
            assert_eq!(k.order(witness), Some(1));
            assert_eq!(*witness_value, Some(2));
            assert_eq!(*violations, 0);
        }
        other => panic!("unexpected report {other:?}"),
    }
    assert!(r.passed());

    for d in 0..4 {
        let dv = SlotVector::dense([Scalar::from_int(d)]);
        let r = ball_inf_check(&k, &int(5), &dv, &qpoly(&[-5, 1]), 10, 1).unwrap();
        assert!(matches!(r, BallReport::Generic { mu, witness_value: Some(w), .. } if mu == d && w == d));
    }

    let deg12 = Poly::monomial(int(1), 12);
    assert!(matches!(ball_inf_check(&k, &int(0), &d, &deg12, 5, 1), Err(Error::Precondition(_))));
}

#[test]
fn ball_irrational_probes() {
    let k = padic(3);
    let f = &qpoly(&[0, 0, 1]) - &Poly::constant(k.power(10));
    let d = SlotVector::dense([sqrt2()]);
    let r = ball_inf_check(&k, &int(0), &d, &f, 0, 0).unwrap();
    match &r {
        BallReport::Probes { dominant, epsilon, probes, skipped } => {
            assert_eq!(*dominant, 2);
            assert_eq!(*epsilon, Some(int(5)));
            assert!(!skipped);
            let got: Vec<(i64, Option<i64>)> = probes.iter().map(|p| (p.rho, p.actual)).collect();
            assert_eq!(got, vec![(2, Some(4)), (3, Some(6)), (4, Some(8))]);
        }
        other => panic!("unexpected report {other:?}"),
    }
    assert!(r.passed());
    let tight = &qpoly(&[0, 0, 1]) - &Poly::constant(k.power(3));
    let r = ball_inf_check(&k, &int(0), &d, &tight, 0, 0).unwrap();
    assert!(matches!(r, BallReport::Probes { skipped: true, .. }));
}

fn arb_qcoeff(p: i64) -> impl Strategy<Value = Rational> {
    (-6i64..7, 0u32..3, prop::bool::weighted(0.15)).prop_map(move |(n, e, inv)| {
        let x = int(n * p.pow(e));
        if inv && n != 0 {
            x.recip()
        } else {
            x
        }
    })
}

fn arb_qpoly(p: i64) -> impl Strategy<Value = Poly<Rational>> {
    prop::collection::vec(arb_qcoeff(p), 1..5).prop_map(Poly::new)
}

fn arb_tcoeff(p: i64) -> impl Strategy<Value = RatFunc> {
    (prop::collection::vec(arb_qcoeff(p), 1..3), 0u32..2, prop::bool::weighted(0.2)).prop_map(|(cs, sh, div)| {
        let base = RatFunc::from_poly(Poly::new(cs)) * RatFunc::t().pow(sh);
        if div {
            (base / (RatFunc::t() + RatFunc::rational(int(1)))).unwrap()
        } else {
            base
        }
    })
}

fn arb_tpoly(p: i64) -> impl Strategy<Value = Poly<RatFunc>> {
    prop::collection::vec(arb_tcoeff(p), 1..4).prop_map(Poly::new)
}

fn padic_deltas(k: &PAdicQ) -> Vec<Delta> {
    vec![
        delta(&[Scalar::from_rational(rat(1, 2))]),
        delta(&[sqrt2()]),
        marked(k, &[Scalar::from_int(1)], 1, -1),
        Delta::Finite(k.hull().minus_infinity()),
        Delta::Finite(k.hull().infinity_minus()),
    ]
}

fn lex_deltas(k: &LexCompositeQt) -> Vec<Delta> {
    vec![
        delta(&[Scalar::from_int(1), Scalar::from_rational(rat(-2, 3))]),
        delta(&[Scalar::from_int(0), sqrt2()]),
        marked(k, &[Scalar::from_int(0)], 1, 1),
    ]
}

fn check_axioms<F: ValuedField>(k: &F, a: &F::Elem, d: &Delta, f: &Poly<F::Elem>, g: &Poly<F::Elem>) {
    let w = DepthZero::new(k, a.clone(), d.clone()).unwrap();
    let (vf, vg) = (dz_eval(k, &w, f).unwrap(), dz_eval(k, &w, g).unwrap());
    let vfg = dz_eval(k, &w, &(f * g)).unwrap();
    assert!(same(k, d, &vfg, &vf.add(&vg)), "{vfg:?} vs {vf:?} + {vg:?}");
    let vs = dz_eval(k, &w, &(f + g)).unwrap();
    if let Delta::Finite(d) = d {
        let hull = k.hull();
        let lo = if compare_values(&hull, d, &vf, &vg).unwrap().is_le() { vf } else { vg };
        assert!(compare_values(&hull, d, &vs, &lo).unwrap().is_ge());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn padic_axioms(f in arb_qpoly(3), g in arb_qpoly(3), a in arb_qcoeff(3)) {
        let k = padic(3);
        for d in padic_deltas(&k) {
            check_axioms(&k, &a, &d, &f, &g);
        }
    }

    #[test]
    fn lex_axioms(f in arb_tpoly(3), g in arb_tpoly(3), a in arb_tcoeff(3)) {
        let k = LexCompositeQt::new(3).unwrap();
        for d in lex_deltas(&k) {
            check_axioms(&k, &a, &d, &f, &g);
        }
        prop_assert!(value_group_check(&k, &Delta::Finite(k.hull().minus_infinity())).unwrap().is_small());
    }

    #[test]
    fn taylor_expansion_matches_evaluation(f in arb_tpoly(5), a in arb_tcoeff(5)) {
        let e = f.taylor(&a);
        prop_assert_eq!(Poly::from_expansion(&a, &e), f);
    }

    /// Paths from a and b agree exactly up to v(a - b).
    #[test]
    fn paths_merge_below_distance(a in -30i64..30, b in -30i64..30, d in -2i64..5, m in prop::option::of(prop::sample::select(vec![-1i64, 1]))) {
        let k = padic(3);
        let base = [Scalar::from_int(d)];
        let dl = match m {
            None => delta(&base),
            Some(m) => marked(&k, &base, 1, m),
        };
        let Delta::Finite(dv) = &dl else { unreachable!() };
        let hull = k.hull();
        let equal = dz_equal(&k, &int(a), &dl, &int(b), &dl).unwrap();
        let expected = match k.order(&int(b - a)) {
            None => true,
            Some(v) => hull.compare(&SlotVector::dense([Scalar::from_int(v)]), dv).unwrap().is_ge(),
        };
        prop_assert_eq!(equal, expected);
        let wa = DepthZero::new(&k, int(a), dl.clone()).unwrap();
        let wb = DepthZero::new(&k, int(b), dl.clone()).unwrap();
        let linear = qpoly(&[-a, 1]);
        let agree = dz_eval(&k, &wa, &linear).unwrap() == dz_eval(&k, &wb, &linear).unwrap()
            || same(&k, &dl, &dz_eval(&k, &wa, &linear).unwrap(), &dz_eval(&k, &wb, &linear).unwrap());
        prop_assert_eq!(agree, equal);
    }

    #[test]
    fn depth_zero_paths_are_ordered(a in -20i64..20, x in -3i64..4, y in -3i64..4, s in 1usize..4) {
        let k = padic(5);
        let hull = k.hull();
        let lo = [Scalar::from_int(x.min(y))];
        let hi = [Scalar::from_int(x.max(y) + 1)];
        let ds = [
            Delta::Finite(hull.minus_infinity()),
            marked(&k, &lo, 1, -1),
            delta(&lo),
            delta(&[Scalar::from_int(x.min(y)) + sqrt2().scale(&rat(1, 100))]),
            delta(&hi),
            marked(&k, &hi, 1, 1),
            Delta::Finite(hull.infinity_minus()),
        ];
        let f = Poly::from_expansion(&int(a), &[vec![int(0); s], vec![int(1)]].concat());
        let vals: Vec<SlotVector> = ds
            .iter()
            .map(|d| {
                let w = DepthZero::new(&k, int(a), d.clone()).unwrap();
                let Delta::Finite(dv) = d else { unreachable!() };
                dz_eval(&k, &w, &f).unwrap().to_slot(dv).unwrap()
            })
            .collect();
        for pair in vals.windows(2) {
            prop_assert!(hull.compare(&pair[0], &pair[1]).unwrap().is_le());
        }
    }
}

/// Exhaustive function comparison over a coefficient set containing a unit of
/// each sign, for a,b in a window of Z and integral radii.
#[test]
fn equality_is_function_equality() {
    let k = padic(5);
    let coeffs = [-1i64, 0, 1, 5, 25];
    let mut corpus = Vec::new();
    for i in 0..coeffs.len().pow(3) {
        let cs: Vec<i64> = (0..3).map(|j| coeffs[(i / coeffs.len().pow(j)) % coeffs.len()]).collect();
        corpus.push(qpoly(&cs));
    }
    for d in 0..3 {
        let dl = delta(&[Scalar::from_int(d)]);
        for a in 0..10 {
            let wa = DepthZero::new(&k, int(a), dl.clone()).unwrap();
            let va: Vec<_> = corpus.iter().map(|f| dz_eval(&k, &wa, f).unwrap()).collect();
            for b in 0..10 {
                let wb = DepthZero::new(&k, int(b), dl.clone()).unwrap();
                let agree = corpus.iter().zip(&va).all(|(f, x)| same(&k, &dl, &dz_eval(&k, &wb, f).unwrap(), x));
                assert_eq!(dz_equal(&k, &int(a), &dl, &int(b), &dl).unwrap(), agree, "a={a} b={b} d={d}");
            }
        }
    }
}
