use proptest::prelude::*;
use relcon::cspcat::{CspProblem, FinFunction};
use relcon::funcrel::{PartitionedFinSet, PartitionedFunction};
use relcon::gen;
use relcon::io::Json;
use relcon::monoidrel::{FiniteMonoid, MonoidLabeling};
use relcon::rational::Rational;
use relcon::relcat::{FiniteRelation, LabelList};
use relcon::sectorial::{BlockMatrix, SectorSpace};

use num_traits::{One, Zero};

fn labels(prefix: &str, n: usize) -> LabelList {
    LabelList::new((0..n).map(|i| format!("{prefix}{i}"))).unwrap()
}

/// On spaces with every sector of dimension one, the sectorial check agrees
/// with the reading through zero projections, for every 0/1 matrix.
#[test]
fn relational_reading_equals_sectorial_on_01_matrices() {
    for n in 1..=3 {
        for m in 1..=3 {
            let a = SectorSpace::unit_dims(&labels("a", n));
            let b = SectorSpace::unit_dims(&labels("b", m));
            let rels = FiniteRelation::all_relations(a.labels(), b.labels());
            for bits in 0u32..1 << (n * m) {
                let entries = (0..n * m)
                    .map(|i| {
                        if bits >> i & 1 == 1 {
                            Rational::one()
                        } else {
                            Rational::zero()
                        }
                    })
                    .collect();
                let f = BlockMatrix::from_rows(a.clone(), b.clone(), entries).unwrap();
                for tau in &rels {
                    assert_eq!(
                        f.check_sectorial(tau).unwrap(),
                        f.check_relational_biproduct(tau).unwrap(),
                        "{f:?} under {tau}"
                    );
                }
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn sectorial_laxity_direct(seed: u64) {
        let mut rng = gen::rng(seed);
        let a = gen::sector_space(&mut rng, "a", 3, 2);
        let b = gen::sector_space(&mut rng, "b", 3, 2);
        let c = gen::sector_space(&mut rng, "c", 3, 2);
        let (tau, f) = gen::sectorial_pair(&mut rng, &a, &b);
        let (sigma, g) = gen::sectorial_pair(&mut rng, &b, &c);
        let h = g.compose(&f).unwrap();
        prop_assert!(h.check_sectorial(&sigma.compose(&tau).unwrap()).unwrap());
        prop_assert!(h.support_relation().leq(&sigma.compose(&tau).unwrap()).unwrap());
    }

    #[test]
    fn sectorial_monoidal_laxity(seed: u64) {
        let mut rng = gen::rng(seed);
        let a = gen::sector_space(&mut rng, "a", 2, 2);
        let b = gen::sector_space(&mut rng, "b", 2, 2);
        let c = gen::sector_space(&mut rng, "c", 2, 2);
        let d = gen::sector_space(&mut rng, "d", 2, 2);
        let (tau, f) = gen::sectorial_pair(&mut rng, &a, &b);
        let (sigma, g) = gen::sectorial_pair(&mut rng, &c, &d);
        let sum = f.direct_sum(&g).unwrap();
        prop_assert!(sum.check_sectorial(&tau.tensor_disjoint(&sigma).unwrap()).unwrap());
        let kron = f.tensor(&g).unwrap();
        prop_assert!(kron.check_sectorial(&tau.tensor_product(&sigma).unwrap()).unwrap());
    }

    #[test]
    fn sectorial_meets_and_transpose(seed: u64) {
        let mut rng = gen::rng(seed);
        let a = gen::sector_space(&mut rng, "a", 3, 2);
        let b = gen::sector_space(&mut rng, "b", 3, 2);
        let f = gen::block_matrix(&mut rng, &a, &b);
        let tau = gen::relation(&mut rng, a.labels(), b.labels());
        let sigma = gen::relation(&mut rng, a.labels(), b.labels());
        let meet = tau.meet(&sigma).unwrap();
        prop_assert_eq!(
            f.check_sectorial(&meet).unwrap(),
            f.check_sectorial(&tau).unwrap() && f.check_sectorial(&sigma).unwrap()
        );
        prop_assert_eq!(
            f.transpose().check_sectorial(&tau.converse()).unwrap(),
            f.check_sectorial(&tau).unwrap()
        );
    }

    #[test]
    fn signalling_implies_atomic(seed: u64) {
        let mut rng = gen::rng(seed);
        let (_, f) = gen::constrained_channel(&mut rng, 3, 2);
        let tau = gen::relation(&mut rng, f.dom().labels(), f.cod().labels());
        if f.check_signalling(&tau).unwrap() {
            prop_assert!(f.check_signalling_atomic(&tau).unwrap());
        }
    }

    #[test]
    fn signalling_laxity_and_order(seed: u64) {
        let mut rng = gen::rng(seed);
        let x = gen::factor_space(&mut rng, "x", 2, 3);
        let y = gen::factor_space(&mut rng, "y", 2, 3);
        let z = gen::factor_space(&mut rng, "z", 2, 2);
        let t1 = gen::relation(&mut rng, x.labels(), y.labels());
        let t2 = gen::relation(&mut rng, y.labels(), z.labels());
        let f = gen::local_channel(&mut rng, &x, &y, &t1);
        let g = gen::local_channel(&mut rng, &y, &z, &t2);
        prop_assert!(f.check_signalling(&t1).unwrap() && g.check_signalling(&t2).unwrap());
        prop_assert!(g.compose(&f).unwrap().check_signalling(&t2.compose(&t1).unwrap()).unwrap());

        let w = gen::factor_space(&mut rng, "w", 1, 2);
        let t3 = gen::relation(&mut rng, z.labels(), w.labels());
        let h = gen::local_channel(&mut rng, &z, &w, &t3);
        prop_assert!(f.tensor(&h).unwrap().check_signalling(&t1.tensor_disjoint(&t3).unwrap()).unwrap());

        let weaker = gen::weaker_relation(&mut rng, &t1);
        prop_assert!(f.check_signalling(&weaker).unwrap());
    }

    #[test]
    fn funcrel_monotone_and_local(seed: u64) {
        let mut rng = gen::rng(seed);
        let a = gen::partitioned_set(&mut rng, "a", 3, 2);
        let b = gen::partitioned_set(&mut rng, "b", 3, 2);
        let f = PartitionedFunction::new(
            a.clone(),
            b.clone(),
            (0..a.total()).map(|_| rand::Rng::gen_range(&mut rng, 0..b.total())).collect(),
        )
        .unwrap();
        let tau = gen::relation(&mut rng, a.labels(), b.labels());
        let weaker = gen::weaker_relation(&mut rng, &tau);
        let holds = f.check_funcrel(&tau).unwrap();
        if holds {
            prop_assert!(f.check_funcrel(&weaker).unwrap());
        }
        // Restrict to each element on its own: a one-block domain holding
        // just that element, and the relation's row for its block.
        let local = (0..a.total()).all(|x| {
            let i = a.block_of(x);
            let name = &a.labels().labels()[i];
            let single = PartitionedFinSet::new([(name.as_str(), 1)]).unwrap();
            let g = PartitionedFunction::new(single.clone(), b.clone(), vec![f.apply(x)]).unwrap();
            let row = FiniteRelation::new(
                single.labels().clone(),
                b.labels().clone(),
                tau.related_set(i).unwrap().into_iter().map(|j| (0, j)),
            )
            .unwrap();
            g.check_funcrel(&row).unwrap()
        });
        prop_assert_eq!(holds, local);
        prop_assert!(PartitionedFunction::identity(a.clone())
            .check_funcrel(&FiniteRelation::identity(a.labels().clone()))
            .unwrap());
    }

    #[test]
    fn monoid_constraints_are_antitone(seed: u64, order in 1..=4usize) {
        let mut rng = gen::rng(seed);
        let monoids = FiniteMonoid::all_of_order(order);
        let m = &monoids[rand::Rng::gen_range(&mut rng, 0..monoids.len())];
        let s = rand::Rng::gen_range(&mut rng, 1..=3usize);
        let set = labels("s", s);
        let assignment = (0..s).map(|_| rand::Rng::gen_range(&mut rng, 0..order)).collect();
        let lab = MonoidLabeling::new(set.clone(), assignment, m).unwrap();
        let small = gen::relation(&mut rng, &set, &set);
        let big = gen::weaker_relation(&mut rng, &small);
        let l_small = m.constraint_set(&small, &lab).unwrap();
        let l_big = m.constraint_set(&big, &lab).unwrap();
        prop_assert!(l_big.is_subset(&l_small));
    }

    #[test]
    fn csp_extra_constraints_keep_composites_valid(seed: u64) {
        let mut rng = gen::rng(seed);
        let (n1, n2, n3) = (
            rand::Rng::gen_range(&mut rng, 1..=3usize),
            rand::Rng::gen_range(&mut rng, 1..=3usize),
            rand::Rng::gen_range(&mut rng, 1..=3usize),
        );
        let (c1, f) = gen::csp_pair(&mut rng, n1, n2, 2, 2);
        let (c2, g) = gen::csp_pair(&mut rng, n2, n3, 2, 2);
        let extra = gen::csp_problem(&mut rng, n1, n2, 2, 2);
        let bigger = CspProblem::new(
            n1,
            n2,
            c1.constraints().iter().chain(extra.constraints()).cloned(),
        )
        .unwrap();
        let h = g.compose(&f).unwrap();
        prop_assert!(c2.compose(&c1).unwrap().satisfies(&h).unwrap());
        if bigger.satisfies(&f).unwrap() {
            prop_assert!(c2.compose(&bigger).unwrap().satisfies(&h).unwrap());
        }
        prop_assert!(bigger.leq(&c1).unwrap());
    }

    #[test]
    fn documents_round_trip(seed: u64) {
        let mut rng = gen::rng(seed);
        let a = gen::sector_space(&mut rng, "a", 3, 2);
        let b = gen::sector_space(&mut rng, "b", 3, 2);
        let tau = gen::relation(&mut rng, a.labels(), b.labels());
        prop_assert_eq!(&FiniteRelation::from_json(&tau.to_json()).unwrap(), &tau);
        let f = gen::block_matrix(&mut rng, &a, &b);
        prop_assert_eq!(&BlockMatrix::from_json(&f.to_json()).unwrap(), &f);
        let (_, ch) = gen::constrained_channel(&mut rng, 3, 2);
        prop_assert_eq!(&relcon::signalling::StochChannel::from_json(&ch.to_json()).unwrap(), &ch);
        let p = gen::partitioned_set(&mut rng, "p", 3, 2);
        let q = gen::partitioned_set(&mut rng, "q", 3, 2);
        let (_, pf) = gen::funcrel_pair(&mut rng, &p, &q);
        prop_assert_eq!(&PartitionedFunction::from_json(&pf.to_json()).unwrap(), &pf);
        let (c, h) = gen::csp_pair(&mut rng, 3, 2, 2, 2);
        prop_assert_eq!(&CspProblem::from_json(&c.to_json()).unwrap(), &c);
        prop_assert_eq!(&FinFunction::from_json(&h.to_json()).unwrap(), &h);
        for m in FiniteMonoid::all_of_order(rand::Rng::gen_range(&mut rng, 1..=3usize)) {
            prop_assert_eq!(&FiniteMonoid::from_json(&m.to_json()).unwrap(), &m);
        }
    }
}
