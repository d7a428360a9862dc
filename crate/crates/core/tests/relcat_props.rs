use proptest::prelude::*;
use relcon::relcat::{FiniteRelation, LabelList};

fn labels(prefix: &str, n: usize) -> LabelList {
    LabelList::new((0..n).map(|i| format!("{prefix}{i}"))).unwrap()
}

fn rel(a: &LabelList, b: &LabelList, mask: u64) -> FiniteRelation {
    FiniteRelation::from_mask(a.clone(), b.clone(), mask)
}

fn mask_for(n: usize, m: usize) -> impl Strategy<Value = u64> {
    0..1u64 << (n * m)
}

/// Sizes of four label lists and masks for the three relations between them,
/// plus a second mask per relation for order checks.
fn chain(max: usize) -> impl Strategy<Value = (Vec<usize>, Vec<u64>, Vec<u64>)> {
    prop::collection::vec(0..=max, 4).prop_flat_map(|s| {
        let masks = (
            mask_for(s[0], s[1]),
            mask_for(s[1], s[2]),
            mask_for(s[2], s[3]),
        );
        let extra = (
            mask_for(s[0], s[1]),
            mask_for(s[1], s[2]),
            mask_for(s[2], s[3]),
        );
        (Just(s), masks, extra).prop_map(|(s, m, e)| (s, vec![m.0, m.1, m.2], vec![e.0, e.1, e.2]))
    })
}

fn objects(s: &[usize]) -> Vec<LabelList> {
    s.iter()
        .enumerate()
        .map(|(i, &n)| labels(&format!("x{i}_"), n))
        .collect()
}

#[test]
fn category_laws_exhaustive_small() {
    for n in 0..=2 {
        for m in 0..=2 {
            for k in 0..=2 {
                let (a, b, c) = (labels("a", n), labels("b", m), labels("c", k));
                let ts = FiniteRelation::all_relations(&a, &b);
                let us = FiniteRelation::all_relations(&b, &c);
                for t in &ts {
                    assert_eq!(&t.compose(&FiniteRelation::identity(a.clone())).unwrap(), t);
                    assert_eq!(&FiniteRelation::identity(b.clone()).compose(t).unwrap(), t);
                    for u in &us {
                        for v in FiniteRelation::all_relations(&c, &a) {
                            let left = v.compose(&u.compose(t).unwrap()).unwrap();
                            let right = v.compose(u).unwrap().compose(t).unwrap();
                            assert_eq!(left, right);
                        }
                    }
                }
            }
        }
    }
}

#[test]
fn identities_exhaustive_up_to_three() {
    for n in 0..=3 {
        for m in 0..=3 {
            let (a, b) = (labels("a", n), labels("b", m));
            for t in FiniteRelation::all_relations(&a, &b) {
                assert_eq!(t.compose(&FiniteRelation::identity(a.clone())).unwrap(), t);
                assert_eq!(FiniteRelation::identity(b.clone()).compose(&t).unwrap(), t);
            }
        }
    }
}

#[test]
fn snake_equations_for_cup_and_cap() {
    for n in 0..=3 {
        let a = labels("a", n);
        let id = FiniteRelation::identity(a.clone());
        let unit_id = FiniteRelation::identity(LabelList::unit());
        let cup = FiniteRelation::cup(&a).unwrap();
        let cap = FiniteRelation::cap(&a).unwrap();
        // a -> a*1 -> a*(a*a) = (a*a)*a -> 1*a -> a, with strict units.
        let first = cap
            .tensor_product(&id)
            .unwrap()
            .compose(&id.tensor_product(&cup).unwrap())
            .unwrap();
        let second = id
            .tensor_product(&cap)
            .unwrap()
            .compose(&cup.tensor_product(&id).unwrap())
            .unwrap();
        assert_eq!(first.relabel(a.clone(), a.clone()).unwrap(), id);
        assert_eq!(second.relabel(a.clone(), a.clone()).unwrap(), id);
        assert_eq!(unit_id.tensor_product(&id).unwrap(), id);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn associativity_and_identity((s, m, _) in chain(4)) {
        let o = objects(&s);
        let t = rel(&o[0], &o[1], m[0]);
        let u = rel(&o[1], &o[2], m[1]);
        let v = rel(&o[2], &o[3], m[2]);
        prop_assert_eq!(
            v.compose(&u.compose(&t).unwrap()).unwrap(),
            v.compose(&u).unwrap().compose(&t).unwrap()
        );
        prop_assert_eq!(&t.compose(&FiniteRelation::identity(o[0].clone())).unwrap(), &t);
        prop_assert_eq!(&FiniteRelation::identity(o[1].clone()).compose(&t).unwrap(), &t);
    }

    #[test]
    fn converse_is_a_dagger((s, m, _) in chain(4)) {
        let o = objects(&s);
        let t = rel(&o[0], &o[1], m[0]);
        let u = rel(&o[1], &o[2], m[1]);
        prop_assert_eq!(
            u.compose(&t).unwrap().converse(),
            t.converse().compose(&u.converse()).unwrap()
        );
        prop_assert_eq!(&t.converse().converse(), &t);
    }

    #[test]
    fn tensors_are_functorial(
        (s, m, _) in chain(2),
        (s2, m2, _) in chain(2),
    ) {
        let (o, p) = (objects(&s), objects(&s2));
        let (t, u) = (rel(&o[0], &o[1], m[0]), rel(&o[1], &o[2], m[1]));
        let p: Vec<LabelList> = p
            .iter()
            .enumerate()
            .map(|(i, l)| labels(&format!("y{i}_"), l.len()))
            .collect();
        let (t2, u2) = (rel(&p[0], &p[1], m2[0]), rel(&p[1], &p[2], m2[1]));
        prop_assert_eq!(
            u.tensor_disjoint(&u2).unwrap().compose(&t.tensor_disjoint(&t2).unwrap()).unwrap(),
            u.compose(&t).unwrap().tensor_disjoint(&u2.compose(&t2).unwrap()).unwrap()
        );
        prop_assert_eq!(
            u.tensor_product(&u2).unwrap().compose(&t.tensor_product(&t2).unwrap()).unwrap(),
            u.compose(&t).unwrap().tensor_product(&u2.compose(&t2).unwrap()).unwrap()
        );
    }

    #[test]
    fn order_is_compatible((s, m, e) in chain(3)) {
        let o = objects(&s);
        let t = rel(&o[0], &o[1], m[0]);
        let u = rel(&o[1], &o[2], m[1]);
        // Weaker versions by joining in extra pairs.
        let t2 = rel(&o[0], &o[1], m[0] | e[0]);
        let u2 = rel(&o[1], &o[2], m[1] | e[1]);
        prop_assert!(t.leq(&t2).unwrap() && u.leq(&u2).unwrap());
        prop_assert!(u.compose(&t).unwrap().leq(&u2.compose(&t2).unwrap()).unwrap());
        prop_assert!(t.tensor_disjoint(&u).unwrap().leq(&t2.tensor_disjoint(&u2).unwrap()).unwrap());
        prop_assert!(t.tensor_product(&u).unwrap().leq(&t2.tensor_product(&u2).unwrap()).unwrap());
    }

    #[test]
    fn meet_is_the_greatest_lower_bound(
        (n, m, a, b, r) in (0..=4usize, 0..=4usize).prop_flat_map(|(n, m)| {
            (Just(n), Just(m), mask_for(n, m), mask_for(n, m), mask_for(n, m))
        })
    ) {
        let (x, y) = (labels("a", n), labels("b", m));
        let (t, s, rho) = (rel(&x, &y, a), rel(&x, &y, b), rel(&x, &y, r));
        let meet = t.meet(&s).unwrap();
        prop_assert!(meet.leq(&t).unwrap() && meet.leq(&s).unwrap());
        if rho.leq(&t).unwrap() && rho.leq(&s).unwrap() {
            prop_assert!(rho.leq(&meet).unwrap());
        }
        prop_assert_eq!(meet.mask(), a & b);
    }

    #[test]
    fn relations_are_meets_of_generators(
        (n, m, a) in (0..=4usize, 0..=4usize).prop_flat_map(|(n, m)| (Just(n), Just(m), mask_for(n, m)))
    ) {
        let t = rel(&labels("a", n), &labels("b", m), a);
        prop_assert_eq!(t.from_generators(), t);
    }
}
