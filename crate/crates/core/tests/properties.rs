//! Property tests over the registered domains and their operation batteries.

use proptest::prelude::*;

use semistar_core::domain::{Domain, LocalizeAt, Overring};
use semistar_core::field::{FieldElem, Q};
use semistar_core::function_rings::{kr_membership, na_membership, content, KrMode, NaMode, Poly, RationalFunction};
use semistar_core::lattice::Lattice;
use semistar_core::module::Module;
use semistar_core::pmd::{pmd_decide, star_invertible, PmdStatus};
use semistar_core::sample::ideal_pool;
use semistar_core::semistar::{compare_ops, quasi_star_maximals, tilde, Comparison, QuasiMaxStatus, SemistarOp};
use semistar_core::spec::{self, InstanceDoc};
use semistar_core::Error;

fn domains() -> Vec<Domain> {
    vec![
        Domain::integers(),
        Domain::localized_integers(&[2, 3]).unwrap(),
        Domain::quadratic_order(-1, 3).unwrap(),
        Domain::quadratic_order(-1, 1).unwrap(),
        Domain::localized_order(-1, 3, &LocalizeAt::Prime { p: 3, index: 0 }).unwrap(),
    ]
}

/// Every constructor that yields a nontrivial operation on `d`.
fn battery(d: &Domain) -> Vec<SemistarOp> {
    let mut ops = vec![
        SemistarOp::identity(d).unwrap(),
        SemistarOp::v(d).unwrap(),
        SemistarOp::t(d).unwrap(),
        SemistarOp::b(d).unwrap(),
    ];
    for p in [2, 3, 5] {
        for q in d.primes_above(p).unwrap() {
            ops.push(SemistarOp::spectral(d, std::slice::from_ref(&q)).unwrap());
            ops.push(SemistarOp::valuation_family(d, &[d.dvr_at(q.point).unwrap()]).unwrap());
            let loc = Overring::new(d, &d.localize(std::slice::from_ref(&q)).unwrap()).unwrap();
            ops.push(SemistarOp::overring_family(d, std::slice::from_ref(&loc)).unwrap());
            ops.push(SemistarOp::restricted(&SemistarOp::v(&loc.target).unwrap(), &loc).unwrap());
        }
    }
    let closure = d.integral_closure().unwrap();
    if closure != *d {
        let t = Overring::new(d, &closure).unwrap();
        ops.push(SemistarOp::overring_family(d, std::slice::from_ref(&t)).unwrap());
    }
    ops
}

fn elem(d: &Domain, a: i64, b: i64, den: i64) -> FieldElem {
    let b = if d.tag().dim() == 1 { 0 } else { b };
    FieldElem::new(d.tag(), Q::new(a.into(), den.into()), Q::new(b.into(), den.into())).unwrap()
}

fn gens() -> impl Strategy<Value = Vec<(i64, i64, i64)>> {
    prop::collection::vec((-30i64..=30, -30i64..=30, 1i64..=6), 1..=3)
}

fn ideal(d: &Domain, g: &[(i64, i64, i64)]) -> Option<Module> {
    let xs: Vec<FieldElem> = g.iter().map(|&(a, b, den)| elem(d, a, b, den)).filter(|x| !x.is_zero()).collect();
    if xs.is_empty() {
        return None;
    }
    Some(d.ideal(&xs).unwrap())
}

fn nonzero(d: &Domain, (a, b, den): (i64, i64, i64)) -> Option<FieldElem> {
    let x = elem(d, a, b, den);
    (!x.is_zero()).then_some(x)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn hnf_is_canonical(g in gens(), perm in 0usize..6, di in 0usize..5) {
        let d = &domains()[di];
        let xs: Vec<FieldElem> = g.iter().map(|&(a, b, den)| elem(d, a, b, den)).filter(|x| !x.is_zero()).collect();
        prop_assume!(!xs.is_empty());
        let mut ys = xs.clone();
        let k = perm % ys.len();
        ys.rotate_left(k);
        ys.push(xs[0] + xs[xs.len() - 1]);
        prop_assert_eq!(d.ideal(&xs).unwrap(), d.ideal(&ys).unwrap());
        let m = d.ideal(&xs).unwrap();
        let again = Lattice::parse(d.tag().dim(), &m.lattice().unwrap().text()).unwrap();
        prop_assert_eq!(&again, m.lattice().unwrap());
    }

    #[test]
    fn colon_duality(g in gens(), h in gens(), di in 0usize..5) {
        let d = &domains()[di];
        let (Some(e), Some(f)) = (ideal(d, &g), ideal(d, &h)) else { return Ok(()) };
        let fe = f.colon(&e).unwrap().unwrap();
        prop_assert!(f.contains(&e.product(&fe).unwrap()).unwrap());
        let inv = d.ring().colon(&e).unwrap().unwrap();
        let vv = d.ring().colon(&inv).unwrap().unwrap();
        let vvv = d.ring().colon(&vv).unwrap().unwrap();
        prop_assert_eq!(vvv, inv);
        prop_assert!(vv.contains(&e).unwrap());
    }

    #[test]
    fn closure_axioms(g in gens(), h in gens(), x in (-20i64..=20, -20i64..=20, 1i64..=5), di in 0usize..5) {
        let d = &domains()[di];
        let (Some(e), Some(f)) = (ideal(d, &g), ideal(d, &h)) else { return Ok(()) };
        let Some(x) = nonzero(d, x) else { return Ok(()) };
        let ef = e.sum(&f).unwrap();
        for op in battery(d) {
            let ce = op.closure(&e).unwrap();
            prop_assert!(ce.contains(&e).unwrap(), "{} not extensive", op);
            prop_assert_eq!(op.closure(&ce).unwrap(), ce.clone(), "{} not idempotent", op);
            prop_assert!(op.closure(&ef).unwrap().contains(&ce).unwrap(), "{} not monotone", op);
            prop_assert_eq!(op.closure(&e.scale(&x).unwrap()).unwrap(), ce.scale(&x).unwrap(), "{} not homogeneous", op);
        }
    }

    #[test]
    fn order_of_operations(g in gens(), di in 0usize..5) {
        let d = &domains()[di];
        let Some(e) = ideal(d, &g) else { return Ok(()) };
        let ops = battery(d);
        let one = SemistarOp::identity(d).unwrap();
        for op in &ops {
            // d ≤ ⋆ and the composite criterion for ≤
            prop_assert_eq!(op.closure(&one.closure(&e).unwrap()).unwrap(), op.closure(&e).unwrap());
        }
        let pool = vec![e.clone()];
        for a in &ops {
            for b in &ops {
                let le = matches!(compare_ops(a, b, &pool).unwrap().verdict, Comparison::Le | Comparison::Eq);
                let composite = b.closure(&a.closure(&e).unwrap()).unwrap() == b.closure(&e).unwrap();
                prop_assert_eq!(le, composite, "{} vs {}", a, b);
            }
        }
    }

    #[test]
    fn spectral_and_family_localization(g in gens(), h in gens(), di in 0usize..5) {
        let d = &domains()[di];
        let (Some(e), Some(f)) = (ideal(d, &g), ideal(d, &h)) else { return Ok(()) };
        for p in [2, 3, 5] {
            for q in d.primes_above(p).unwrap() {
                let s = SemistarOp::spectral(d, std::slice::from_ref(&q)).unwrap();
                let meet = e.intersect(&f).unwrap();
                prop_assert_eq!(s.closure(&meet).unwrap(), s.closure(&e).unwrap().intersect(&s.closure(&f).unwrap()).unwrap());
                let dq = d.localize(std::slice::from_ref(&q)).unwrap();
                let loc = |m: &Module| m.product(dq.ring()).unwrap();
                prop_assert_eq!(loc(&s.closure(&e).unwrap()), loc(&e));
                let t = Overring::new(d, &dq).unwrap();
                let fam = SemistarOp::overring_family(d, std::slice::from_ref(&t)).unwrap();
                prop_assert_eq!(loc(&fam.closure(&e).unwrap()), loc(&e));
            }
        }
    }

    #[test]
    fn tilde_is_below_and_idempotent(g in gens(), di in 0usize..5) {
        let d = &domains()[di];
        let Some(e) = ideal(d, &g) else { return Ok(()) };
        for op in battery(d) {
            match tilde(&op) {
                Ok(t) => {
                    prop_assert!(op.closure(&e).unwrap().contains(&t.closure(&e).unwrap()).unwrap());
                    let tt = tilde(&t).unwrap();
                    prop_assert_eq!(tt.closure(&e).unwrap(), t.closure(&e).unwrap());
                }
                Err(Error::TildeUnsupported) => {
                    prop_assert!(quasi_star_maximals(&op).unwrap().status != QuasiMaxStatus::Enumerated);
                }
                Err(other) => prop_assert!(false, "{other}"),
            }
        }
    }

    #[test]
    fn invertibility_routes_agree(g in gens(), di in 0usize..5) {
        let d = &domains()[di];
        let Some(i) = ideal(d, &g) else { return Ok(()) };
        for op in battery(d) {
            // RoutesDisagree would surface as an error here
            let r = star_invertible(&op, &i).unwrap();
            for (_, v) in &r.routes {
                if let Some(v) = v {
                    prop_assert_eq!(*v, r.invertible);
                }
            }
        }
    }

    #[test]
    fn gauss_lemma_at_dvrs(f in prop::collection::vec((-12i64..=12, -12i64..=12), 1..=4),
                           g in prop::collection::vec((-12i64..=12, -12i64..=12), 1..=4),
                           di in 0usize..5) {
        let d = &domains()[di];
        let pf = Poly::new(d.tag(), f.iter().map(|&(a, b)| elem(d, a, b, 1)).collect());
        let pg = Poly::new(d.tag(), g.iter().map(|&(a, b)| elem(d, a, b, 1)).collect());
        prop_assume!(!pf.is_zero() && !pg.is_zero());
        for p in [2, 3, 5] {
            for q in d.primes_above(p).unwrap() {
                let w = d.dvr_at(q.point).unwrap();
                let lhs = pf.mul(&pg).min_val(&w).unwrap();
                prop_assert_eq!(lhs, pf.min_val(&w).unwrap() + pg.min_val(&w).unwrap());
            }
        }
    }

    #[test]
    fn nagata_saturation_and_kronecker_containment(
        f in prop::collection::vec((-9i64..=9, 0i64..=0), 1..=3),
        g in prop::collection::vec((-9i64..=9, 0i64..=0), 1..=3),
    ) {
        let d = Domain::localized_integers(&[2, 3]).unwrap();
        let pf = Poly::new(d.tag(), f.iter().map(|&(a, b)| elem(&d, a, b, 1)).collect());
        let pg = Poly::new(d.tag(), g.iter().map(|&(a, b)| elem(&d, a, b, 1)).collect());
        prop_assume!(!pf.is_zero() && !pg.is_zero());
        let one = Poly::constant(FieldElem::one(d.tag()));
        let op = SemistarOp::identity(&d).unwrap();
        let top = op.closure_of_domain().unwrap();
        let certified = |h: &Poly| op.closure(&content(h, &d).unwrap()).unwrap() == top;
        let prod = pf.mul(&pg);
        if certified(&pf) && certified(&pg) {
            prop_assert!(certified(&prod));
        }
        // 1/h ∈ Na exactly when h is in the saturated set
        let inv = |h: &Poly| na_membership(&op, &RationalFunction::new(one.clone(), h.clone()).unwrap(), NaMode::Local).unwrap();
        if inv(&prod).is_yes() {
            prop_assert!(inv(&pf).is_yes() && inv(&pg).is_yes());
        }
        let b = SemistarOp::b(&d).unwrap();
        let u = RationalFunction::new(pf.clone(), pg.clone()).unwrap();
        if na_membership(&b, &u, NaMode::Local).unwrap().is_yes() {
            prop_assert!(kr_membership(&b, &u, KrMode::ValuationExact).unwrap().is_yes());
        }
    }
}

#[test]
fn pmd_verdict_is_monotone_over_the_battery() {
    for d in domains() {
        let ops = battery(&d);
        let pool = ideal_pool(&d, 60, 11).unwrap();
        let verdicts: Vec<PmdStatus> = ops.iter().map(|op| pmd_decide(op).unwrap().status()).collect();
        for (i, a) in ops.iter().enumerate() {
            if verdicts[i] != PmdStatus::Yes {
                continue;
            }
            for (j, b) in ops.iter().enumerate() {
                let v = compare_ops(a, b, &pool).unwrap().verdict;
                if matches!(v, Comparison::Le | Comparison::Eq) {
                    assert_ne!(verdicts[j], PmdStatus::No, "{a} ≤ {b} on {d}");
                }
            }
        }
    }
}

#[test]
fn pmd_agrees_with_its_tilde() {
    for d in domains() {
        for op in battery(&d) {
            if let Ok(t) = tilde(&op) {
                let (a, b) = (pmd_decide(&op).unwrap().status(), pmd_decide(&t).unwrap().status());
                if a != PmdStatus::Unknown && b != PmdStatus::Unknown {
                    assert_eq!(a, b, "{op} on {d}");
                }
            }
        }
    }
}

#[test]
fn primes_partition_and_closure_is_idempotent() {
    for d in domains() {
        for p in [2, 3, 5, 7] {
            let ps = d.primes_above(p).unwrap();
            let pd = d.ring().scale(&FieldElem::int(d.tag(), p)).unwrap();
            let mut prod = d.ring().clone();
            for q in &ps {
                assert!(q.under.contains(&pd).unwrap());
                prod = prod.product(&q.under).unwrap().product(&q.under).unwrap();
            }
            if !ps.is_empty() {
                assert!(pd.contains(&prod).unwrap(), "{d} at {p}");
            }
            for q in &ps {
                assert_eq!(d.is_valuation_at(q).unwrap(), !q.contains_conductor);
            }
        }
        let c = d.integral_closure().unwrap();
        assert_eq!(c.integral_closure().unwrap(), c);
        assert!(c.certs().is_integrally_closed.is_yes());
    }
}

#[test]
fn spec_round_trip_is_idempotent() {
    let text = include_str!("../../cli/suites/paper-examples.json");
    let v: serde_json::Value = serde_json::from_str(text).unwrap();
    for e in v["entries"].as_array().unwrap() {
        if let Some(inst) = e.get("instance") {
            let doc: InstanceDoc = spec::parse(&inst.to_string()).unwrap();
            let once = spec::print(&doc);
            let again: InstanceDoc = spec::parse(&once).unwrap();
            assert_eq!(spec::print(&again), once);
            spec::build_instance(&again).unwrap();
        }
    }
}
