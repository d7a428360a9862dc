//! Randomized checks of the structure a constrained category inherits:
//! associativity, identities, interchange, dagger contravariance, snakes and
//! certificate soundness, run on certified pairs of each encoding.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::constrained::{
    ConstrainedCategory, Csp, Encoding, FinSet, FuncRel, MonoidEncoding, MonoidObject, Pair,
    SectorTensor, Sectorial, Signalling,
};
use crate::cspcat::{CspProblem, FinFunction};
use crate::error::Result;
use crate::funcrel::{PartitionedFinSet, PartitionedFunction};
use crate::gen::{self, Rng8};
use crate::monoidrel::{Element, FiniteMonoid, MonoidLabeling};
use crate::relcat::{FiniteRelation, LabelList};
use crate::sectorial::{BlockMatrix, SectorSpace};
use crate::signalling::{FactorSpace, StochChannel};

pub const LAWS: [&str; 6] = [
    "associativity",
    "identity",
    "interchange",
    "dagger",
    "snake",
    "soundness",
];

/// Cases and failures per law.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct LawCount {
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

pub type LawTally = BTreeMap<&'static str, LawCount>;

fn record(
    tally: &mut LawTally,
    law: &'static str,
    ok: Result<bool>,
    detail: impl FnOnce() -> String,
) {
    let entry = tally.entry(law).or_default();
    entry.cases += 1;
    let failure = match ok {
        Ok(true) => return,
        Ok(false) => detail(),
        Err(e) => format!("{}: {e}", detail()),
    };
    entry.failures += 1;
    entry.first_failure.get_or_insert(failure);
}

/// Random certified-pair material for one encoding.
pub trait PairSource<E: Encoding> {
    fn object(&mut self, rng: &mut Rng8) -> E::Object;

    /// A constraint and a morphism satisfying it.
    fn pair(
        &mut self,
        rng: &mut Rng8,
        a: &E::Object,
        b: &E::Object,
    ) -> (E::Constraint, E::Morphism);

    /// A constraint above `c`.
    fn weaker(&mut self, rng: &mut Rng8, c: &E::Constraint) -> E::Constraint;
}

fn certified<E: Encoding, S: PairSource<E>>(
    cat: &ConstrainedCategory<E>,
    src: &mut S,
    rng: &mut Rng8,
    a: &E::Object,
    b: &E::Object,
) -> Result<Pair<E>> {
    let (c, f) = src.pair(rng, a, b);
    cat.pair(c, f)
}

/// Runs `trials` rounds of every law the encoding supports.
pub fn run_laws<E: Encoding, S: PairSource<E>>(
    cat: &ConstrainedCategory<E>,
    src: &mut S,
    rng: &mut Rng8,
    trials: usize,
    tally: &mut LawTally,
) {
    let enc = cat.encoding();
    let st = enc.structures();
    for trial in 0..trials {
        let at = |law: &str| format!("{} {law}, trial {trial}", enc.name());
        let objs: Vec<E::Object> = (0..4).map(|_| src.object(rng)).collect();
        let made: Result<Vec<Pair<E>>> = (0..3)
            .map(|i| certified(cat, src, rng, &objs[i], &objs[i + 1]))
            .collect();
        let ps = match made {
            Ok(ps) => ps,
            Err(e) => {
                record(tally, "soundness", Err(e), || at("generator"));
                continue;
            }
        };
        let (p, q, r) = (&ps[0], &ps[1], &ps[2]);
        let mut derived = Vec::new();

        let assoc = (|| {
            let left = cat.compose(r, &cat.compose(q, p)?)?;
            let right = cat.compose(&cat.compose(r, q)?, p)?;
            let ok = if st.lax_associativity {
                left.morphism() == right.morphism()
                    && enc.leq(right.constraint(), left.constraint())?
            } else {
                left == right
            };
            derived.push(left);
            derived.push(right);
            Ok(ok)
        })();
        record(tally, "associativity", assoc, || at("associativity"));

        if st.identity {
            let ok = (|| {
                let (a, b) = cat.boundary(p);
                let left = cat.compose(&cat.identity(&b)?, p)?;
                let right = cat.compose(p, &cat.identity(&a)?)?;
                Ok(&left == p && &right == p)
            })();
            record(tally, "identity", ok, || at("identity"));
        }

        if st.tensor {
            let ok = (|| {
                let a2 = src.object(rng);
                let b2 = src.object(rng);
                let c2 = src.object(rng);
                let p2 = certified(cat, src, rng, &a2, &b2)?;
                let q2 = certified(cat, src, rng, &b2, &c2)?;
                let lhs = cat.compose(&cat.tensor(q, &q2)?, &cat.tensor(p, &p2)?)?;
                let rhs = cat.tensor(&cat.compose(q, p)?, &cat.compose(&q2, &p2)?)?;
                let unit = cat.identity(&enc.unit()?)?;
                let units = cat.tensor(p, &unit)? == *p && cat.tensor(&unit, p)? == *p;
                let ok = lhs == rhs && units;
                derived.push(lhs);
                derived.push(rhs);
                Ok(ok)
            })();
            record(tally, "interchange", ok, || at("interchange"));
        }

        if st.dagger {
            let ok = (|| {
                let lhs = cat.dagger(&cat.compose(q, p)?)?;
                let rhs = cat.compose(&cat.dagger(p)?, &cat.dagger(q)?)?;
                let involution = cat.dagger(&cat.dagger(p)?)? == *p;
                let ok = lhs == rhs && involution;
                derived.push(lhs);
                derived.push(rhs);
                Ok(ok)
            })();
            record(tally, "dagger", ok, || at("dagger"));
        }

        if st.compact {
            let ok = (|| {
                let a = cat.boundary(p).0;
                let id = cat.identity(&a)?;
                let cup = cat.cup(&a)?;
                let cap = cat.dagger(&cup)?;
                let first = cat.compose(&cat.tensor(&id, &cap)?, &cat.tensor(&cup, &id)?)?;
                let second = cat.compose(&cat.tensor(&cap, &id)?, &cat.tensor(&id, &cup)?)?;
                let ok = first == id && second == id;
                derived.push(cup);
                derived.push(cap);
                Ok(ok)
            })();
            record(tally, "snake", ok, || at("snake"));
        }

        let weaker = src.weaker(rng, p.constraint());
        match cat.relax(p, weaker) {
            Ok(x) => derived.push(x),
            Err(e) => record(tally, "soundness", Err(e), || at("relax")),
        }
        for x in &derived {
            record(tally, "soundness", cat.verify(x), || at("soundness"));
        }
    }
}

pub struct SectorialSource {
    pub max_sectors: usize,
    pub max_dim: usize,
}

impl PairSource<Sectorial> for SectorialSource {
    fn object(&mut self, rng: &mut Rng8) -> SectorSpace {
        // Fresh labels per object keep direct sums collision-free.
        let prefix = format!("s{}_", rng.gen_range(0..1_000_000));
        gen::sector_space(rng, &prefix, self.max_sectors, self.max_dim)
    }

    fn pair(
        &mut self,
        rng: &mut Rng8,
        a: &SectorSpace,
        b: &SectorSpace,
    ) -> (FiniteRelation, BlockMatrix) {
        gen::sectorial_pair(rng, a, b)
    }

    fn weaker(&mut self, rng: &mut Rng8, c: &FiniteRelation) -> FiniteRelation {
        gen::weaker_relation(rng, c)
    }
}

pub struct SignallingSource {
    pub max_factors: usize,
    pub max_card: usize,
}

impl PairSource<Signalling> for SignallingSource {
    fn object(&mut self, rng: &mut Rng8) -> FactorSpace {
        let prefix = format!("f{}_", rng.gen_range(0..1_000_000));
        gen::factor_space(rng, &prefix, self.max_factors, self.max_card)
    }

    fn pair(
        &mut self,
        rng: &mut Rng8,
        a: &FactorSpace,
        b: &FactorSpace,
    ) -> (FiniteRelation, StochChannel) {
        let tau = gen::relation(rng, a.labels(), b.labels());
        let f = gen::local_channel(rng, a, b, &tau);
        (tau, f)
    }

    fn weaker(&mut self, rng: &mut Rng8, c: &FiniteRelation) -> FiniteRelation {
        gen::weaker_relation(rng, c)
    }
}

pub struct FuncRelSource {
    pub max_blocks: usize,
    pub max_size: usize,
}

impl PairSource<FuncRel> for FuncRelSource {
    fn object(&mut self, rng: &mut Rng8) -> PartitionedFinSet {
        let prefix = format!("b{}_", rng.gen_range(0..1_000_000));
        gen::partitioned_set(rng, &prefix, self.max_blocks, self.max_size)
    }

    fn pair(
        &mut self,
        rng: &mut Rng8,
        a: &PartitionedFinSet,
        b: &PartitionedFinSet,
    ) -> (FiniteRelation, PartitionedFunction) {
        gen::funcrel_pair(rng, a, b)
    }

    fn weaker(&mut self, rng: &mut Rng8, c: &FiniteRelation) -> FiniteRelation {
        gen::weaker_relation(rng, c)
    }
}

pub struct MonoidSource {
    pub monoid: FiniteMonoid,
    pub labeling: MonoidLabeling,
}

impl PairSource<MonoidEncoding> for MonoidSource {
    fn object(&mut self, _rng: &mut Rng8) -> MonoidObject {
        MonoidObject(self.labeling.set().clone())
    }

    fn pair(
        &mut self,
        rng: &mut Rng8,
        _a: &MonoidObject,
        _b: &MonoidObject,
    ) -> (FiniteRelation, Element) {
        let s = self.labeling.set();
        loop {
            let tau = gen::relation(rng, s, s);
            let allowed: Vec<Element> = self
                .monoid
                .constraint_set(&tau, &self.labeling)
                .expect("endorelation")
                .into_iter()
                .collect();
            if let Some(&m) = allowed.choose(rng) {
                return (tau, m);
            }
        }
    }

    /// Fewer pairs, fewer conditions.
    fn weaker(&mut self, rng: &mut Rng8, c: &FiniteRelation) -> FiniteRelation {
        c.meet(&gen::relation(rng, c.src(), c.dst()))
            .expect("same boundary")
    }
}

pub struct CspSource {
    pub max_size: usize,
    pub max_arity: usize,
    pub max_constraints: usize,
}

impl PairSource<Csp> for CspSource {
    fn object(&mut self, rng: &mut Rng8) -> FinSet {
        FinSet(rng.gen_range(1..=self.max_size))
    }

    fn pair(&mut self, rng: &mut Rng8, a: &FinSet, b: &FinSet) -> (CspProblem, FinFunction) {
        gen::csp_pair(rng, a.0, b.0, self.max_arity, self.max_constraints)
    }

    /// Drops a random subset of the constraints.
    fn weaker(&mut self, rng: &mut Rng8, c: &CspProblem) -> CspProblem {
        let kept: Vec<_> = c
            .constraints()
            .iter()
            .filter(|_| rng.gen_bool(0.5))
            .cloned()
            .collect();
        CspProblem::new(c.dom(), c.cod(), kept).expect("subset of a valid problem")
    }
}

/// Every encoding, `trials` rounds each; tallies are keyed `law/encoding`.
pub fn all_laws(rng: &mut Rng8, trials: usize) -> BTreeMap<String, LawCount> {
    let mut out = BTreeMap::new();
    let mut absorb = |name: &str, tally: LawTally| {
        for (law, count) in tally {
            let e: &mut LawCount = out.entry(format!("{law}/{name}")).or_default();
            e.cases += count.cases;
            e.failures += count.failures;
            if e.first_failure.is_none() {
                e.first_failure = count.first_failure;
            }
        }
    };

    let mut t = LawTally::new();
    let cat = ConstrainedCategory::new(Sectorial {
        tensor: SectorTensor::DirectSum,
    })
    .with_recheck(true);
    run_laws(
        &cat,
        &mut SectorialSource {
            max_sectors: 3,
            max_dim: 2,
        },
        rng,
        trials,
        &mut t,
    );
    absorb("sectorial", t);

    let mut t = LawTally::new();
    let cat = ConstrainedCategory::new(Sectorial {
        tensor: SectorTensor::Kronecker,
    })
    .with_recheck(true);
    run_laws(
        &cat,
        &mut SectorialSource {
            max_sectors: 2,
            max_dim: 2,
        },
        rng,
        trials,
        &mut t,
    );
    absorb("sectorial-kron", t);

    let mut t = LawTally::new();
    let cat = ConstrainedCategory::new(Signalling).with_recheck(true);
    run_laws(
        &cat,
        &mut SignallingSource {
            max_factors: 2,
            max_card: 2,
        },
        rng,
        trials,
        &mut t,
    );
    absorb("signalling", t);

    let mut t = LawTally::new();
    let cat = ConstrainedCategory::new(FuncRel).with_recheck(true);
    run_laws(
        &cat,
        &mut FuncRelSource {
            max_blocks: 3,
            max_size: 2,
        },
        rng,
        trials,
        &mut t,
    );
    absorb("funcrel", t);

    // Ten random labelled monoids share the trials.
    let mut t = LawTally::new();
    let monoids: Vec<FiniteMonoid> = (1..=4).flat_map(FiniteMonoid::all_of_order).collect();
    let rounds = 10;
    for round in 0..rounds {
        let monoid = monoids.choose(rng).expect("nonempty").clone();
        let n = rng.gen_range(1..=3);
        let set = LabelList::new((1..=n).map(|i| format!("s{i}"))).unwrap();
        let assignment = (0..n).map(|_| rng.gen_range(0..monoid.size())).collect();
        let labeling = MonoidLabeling::new(set, assignment, &monoid).unwrap();
        let cat = ConstrainedCategory::new(MonoidEncoding {
            monoid: monoid.clone(),
            labeling: labeling.clone(),
        })
        .with_recheck(true);
        let share = trials / rounds + usize::from(round < trials % rounds);
        run_laws(
            &cat,
            &mut MonoidSource { monoid, labeling },
            rng,
            share,
            &mut t,
        );
    }
    absorb("monoid", t);

    let mut t = LawTally::new();
    let cat = ConstrainedCategory::new(Csp).with_recheck(true);
    run_laws(
        &cat,
        &mut CspSource {
            max_size: 3,
            max_arity: 2,
            max_constraints: 2,
        },
        rng,
        trials,
        &mut t,
    );
    absorb("csp", t);
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_run_is_clean() {
        let mut rng = gen::rng(5);
        let out = all_laws(&mut rng, 30);
        for (k, c) in &out {
            assert_eq!(c.failures, 0, "{k}: {:?}", c.first_failure);
        }
        assert!(out.contains_key("snake/sectorial-kron"));
        assert!(out.contains_key("dagger/sectorial"));
        assert!(!out.contains_key("identity/csp"));
        assert!(!out.contains_key("interchange/monoid"));
    }
}
