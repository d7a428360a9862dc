//! Seeded random instances for the oracle suites and the law harness.
//!
//! Every generator draws from a caller-supplied [`ChaCha8Rng`], so a suite is
//! reproducible from its seed alone.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::cspcat::{CspConstraint, CspProblem, FinFunction, Tuple};
use crate::funcrel::{PartitionedFinSet, PartitionedFunction};
use crate::rational::{int, ratio, Rational};
use crate::relcat::{FiniteRelation, LabelList};
use crate::sectorial::{BlockMatrix, SectorSpace};
use crate::signalling::{
    discard, parity_constraints, parity_counterexample, prepare_uniform, FactorSet, FactorSpace,
    StochChannel,
};

pub type Rng8 = ChaCha8Rng;

pub fn rng(seed: u64) -> Rng8 {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Numerator in `-3..=3`, denominator in `1..=3`.
pub fn small_rational(rng: &mut Rng8) -> Rational {
    ratio(rng.gen_range(-3..=3), rng.gen_range(1..=3))
}

pub fn nonzero_rational(rng: &mut Rng8) -> Rational {
    let n = rng.gen_range(1..=3) * if rng.gen_bool(0.5) { 1 } else { -1 };
    ratio(n, rng.gen_range(1..=3))
}

fn labelled(prefix: &str, sizes: Vec<usize>) -> Vec<(String, usize)> {
    sizes
        .into_iter()
        .enumerate()
        .map(|(i, d)| (format!("{prefix}{}", i + 1), d))
        .collect()
}

fn sizes(rng: &mut Rng8, min_len: usize, max_len: usize, max_size: usize) -> Vec<usize> {
    let n = rng.gen_range(min_len..=max_len);
    (0..n).map(|_| rng.gen_range(1..=max_size)).collect()
}

/// Each pair independently with probability one half.
pub fn relation(rng: &mut Rng8, src: &LabelList, dst: &LabelList) -> FiniteRelation {
    let pairs: Vec<(usize, usize)> = (0..src.len())
        .flat_map(|i| (0..dst.len()).map(move |j| (i, j)))
        .filter(|_| rng.gen_bool(0.5))
        .collect();
    FiniteRelation::new(src.clone(), dst.clone(), pairs).expect("in range")
}

/// `tau` joined with a random relation.
pub fn weaker_relation(rng: &mut Rng8, tau: &FiniteRelation) -> FiniteRelation {
    tau.join(&relation(rng, tau.src(), tau.dst()))
        .expect("same boundary")
}

pub fn sector_space(
    rng: &mut Rng8,
    prefix: &str,
    max_sectors: usize,
    max_dim: usize,
) -> SectorSpace {
    SectorSpace::new(labelled(prefix, sizes(rng, 1, max_sectors, max_dim))).expect("valid")
}

/// Zero outside `tau`; inside, each block is zero with probability one
/// quarter and otherwise filled with small rationals.
pub fn block_matrix_within(
    rng: &mut Rng8,
    tau: &FiniteRelation,
    dom: &SectorSpace,
    cod: &SectorSpace,
) -> BlockMatrix {
    let mut entries = vec![int(0); cod.total_dim() * dom.total_dim()];
    for (k, l) in tau.pairs() {
        if rng.gen_bool(0.25) {
            continue;
        }
        for r in cod.range(l) {
            for c in dom.range(k) {
                entries[r * dom.total_dim() + c] = small_rational(rng);
            }
        }
    }
    BlockMatrix::from_rows(dom.clone(), cod.clone(), entries).expect("shape")
}

/// A matrix with random zero blocks.
pub fn block_matrix(rng: &mut Rng8, dom: &SectorSpace, cod: &SectorSpace) -> BlockMatrix {
    let tau = relation(rng, dom.labels(), cod.labels());
    block_matrix_within(rng, &tau, dom, cod)
}

/// Every entry nonzero.
pub fn full_support_matrix(rng: &mut Rng8, dom: &SectorSpace, cod: &SectorSpace) -> BlockMatrix {
    let entries = (0..cod.total_dim() * dom.total_dim())
        .map(|_| nonzero_rational(rng))
        .collect();
    BlockMatrix::from_rows(dom.clone(), cod.clone(), entries).expect("shape")
}

/// A random relation and a matrix satisfying it.
pub fn sectorial_pair(
    rng: &mut Rng8,
    dom: &SectorSpace,
    cod: &SectorSpace,
) -> (FiniteRelation, BlockMatrix) {
    let tau = relation(rng, dom.labels(), cod.labels());
    let f = block_matrix_within(rng, &tau, dom, cod);
    (tau, f)
}

pub fn factor_space(
    rng: &mut Rng8,
    prefix: &str,
    max_factors: usize,
    max_card: usize,
) -> FactorSpace {
    FactorSpace::new(labelled(prefix, sizes(rng, 1, max_factors, max_card))).expect("valid")
}

/// A random distribution on `n` points with weights in `0..=3`.
pub fn distribution(rng: &mut Rng8, n: usize) -> Vec<Rational> {
    let mut w: Vec<i64> = (0..n).map(|_| rng.gen_range(0..=3)).collect();
    if w.iter().all(|&x| x == 0) {
        w[rng.gen_range(0..n)] = 1;
    }
    let total: i64 = w.iter().sum();
    w.into_iter().map(|x| ratio(x, total)).collect()
}

/// Outputs are independent given the input, and output `j` reads only the
/// inputs related to it by `tau`.
pub fn local_channel(
    rng: &mut Rng8,
    dom: &FactorSpace,
    cod: &FactorSpace,
    tau: &FiniteRelation,
) -> StochChannel {
    let tables: Vec<(Vec<usize>, Vec<Vec<Rational>>)> = (0..cod.len())
        .map(|j| {
            let sources: Vec<usize> = tau.sources_of(j).expect("in range").into_iter().collect();
            let contexts: usize = sources.iter().map(|&i| dom.card(i)).product();
            let rows = (0..contexts)
                .map(|_| distribution(rng, cod.card(j)))
                .collect();
            (sources, rows)
        })
        .collect();
    StochChannel::from_fn(dom.clone(), cod.clone(), |x, y| {
        tables
            .iter()
            .enumerate()
            .fold(int(1), |acc, (j, (sources, rows))| {
                let ctx = sources.iter().fold(0, |c, &i| c * dom.card(i) + x[i]);
                acc * &rows[ctx][y[j]]
            })
    })
    .expect("product of distributions")
}

/// `A:2 → B1:2 ⊗ B2:2`, copying the bit; constrained by the full relation.
pub fn copy_gadget() -> (FiniteRelation, StochChannel) {
    let dom = FactorSpace::new([("A", 2)]).unwrap();
    let cod = FactorSpace::new([("B1", 2), ("B2", 2)]).unwrap();
    let f = StochChannel::deterministic(dom.clone(), cod.clone(), |x| vec![x[0], x[0]]).unwrap();
    (
        FiniteRelation::full(dom.labels().clone(), cod.labels().clone()),
        f,
    )
}

/// The parity channel under one of its two single-arrow constraints, or the copy gadget.
pub fn gadget(rng: &mut Rng8) -> (FiniteRelation, StochChannel) {
    let (s1, s2) = parity_constraints();
    match rng.gen_range(0..3) {
        0 => (s1, parity_counterexample()),
        1 => (s2, parity_counterexample()),
        _ => copy_gadget(),
    }
}

/// A channel together with a relation it satisfies: a local channel, a
/// composite of two, a local channel tensored with a gadget, or a gadget
/// fed by a local channel.
pub fn constrained_channel(
    rng: &mut Rng8,
    max_factors: usize,
    max_card: usize,
) -> (FiniteRelation, StochChannel) {
    let local = |rng: &mut Rng8, dom: &FactorSpace, cod: &FactorSpace| {
        let tau = relation(rng, dom.labels(), cod.labels());
        let f = local_channel(rng, dom, cod, &tau);
        (tau, f)
    };
    let x = factor_space(rng, "x", max_factors, max_card);
    match rng.gen_range(0..4) {
        0 => {
            let y = factor_space(rng, "y", max_factors, max_card);
            local(rng, &x, &y)
        }
        1 => {
            let y = factor_space(rng, "y", max_factors, max_card);
            let z = factor_space(rng, "z", max_factors, max_card);
            let (t1, f) = local(rng, &x, &y);
            let (t2, g) = local(rng, &y, &z);
            (t2.compose(&t1).unwrap(), g.compose(&f).unwrap())
        }
        2 => {
            let y = factor_space(rng, "y", max_factors.saturating_sub(1).max(1), max_card);
            let (t, f) = local(rng, &x, &y);
            let (tg, g) = gadget(rng);
            (t.tensor_disjoint(&tg).unwrap(), f.tensor(&g).unwrap())
        }
        _ => {
            let a = FactorSpace::new([("A", 2)]).unwrap();
            let (t, f) = local(rng, &x, &a);
            let (tg, g) = gadget(rng);
            (tg.compose(&t).unwrap(), g.compose(&f).unwrap())
        }
    }
}

/// A word in the time-symmetric generators and the relation obtained by
/// composing the generators' relations.
#[derive(Debug, Clone)]
pub struct Word {
    pub channel: StochChannel,
    pub relation: FiniteRelation,
    pub steps: Vec<String>,
}

/// Generators: permutations of the wires, bijections on one factor's values,
/// discarding a set of factors and preparing a new uniform factor. Spaces
/// never exceed `max_factors` factors of size at most `max_card`.
pub fn timesym_word(rng: &mut Rng8, max_factors: usize, max_card: usize, max_len: usize) -> Word {
    let start = factor_space(rng, "w", max_factors, max_card);
    let mut fresh = start.len();
    let mut channel = StochChannel::identity(start.clone());
    let mut relation = FiniteRelation::identity(start.labels().clone());
    let mut steps = Vec::new();
    for _ in 0..rng.gen_range(1..=max_len) {
        let space = channel.cod().clone();
        let n = space.len();
        let (g, r, step) = match rng.gen_range(0..4) {
            0 if n >= 2 => {
                let mut perm: Vec<usize> = (0..n).collect();
                perm.shuffle(rng);
                let cod =
                    FactorSpace::new(perm.iter().map(|&i| space.factors()[i].clone())).unwrap();
                let g = StochChannel::deterministic(space.clone(), cod.clone(), |x| {
                    perm.iter().map(|&i| x[i]).collect()
                })
                .unwrap();
                let r = FiniteRelation::new(
                    space.labels().clone(),
                    cod.labels().clone(),
                    perm.iter().enumerate().map(|(j, &i)| (i, j)),
                )
                .unwrap();
                (g, r, format!("permute {perm:?}"))
            }
            1 if n >= 1 => {
                let i = rng.gen_range(0..n);
                let mut values: Vec<usize> = (0..space.card(i)).collect();
                values.shuffle(rng);
                let g = StochChannel::deterministic(space.clone(), space.clone(), |x| {
                    let mut y = x.to_vec();
                    y[i] = values[x[i]];
                    y
                })
                .unwrap();
                let r = FiniteRelation::identity(space.labels().clone());
                (g, r, format!("relabel factor {i} by {values:?}"))
            }
            2 if n >= 1 => {
                let s: FactorSet = (0..n).filter(|_| rng.gen_bool(0.5)).collect();
                let g = discard(&space, &s).unwrap();
                let kept: Vec<usize> = (0..n).filter(|i| !s.contains(i)).collect();
                let r = FiniteRelation::new(
                    space.labels().clone(),
                    g.cod().labels().clone(),
                    kept.iter().enumerate().map(|(j, &i)| (i, j)),
                )
                .unwrap();
                (g, r, format!("discard {s:?}"))
            }
            _ if n < max_factors => {
                fresh += 1;
                let p = rng.gen_range(0..=n);
                let mut factors = space.factors().to_vec();
                factors.insert(p, (format!("w{fresh}"), rng.gen_range(1..=max_card)));
                let cod = FactorSpace::new(factors).unwrap();
                let g = prepare_uniform(&cod, &FactorSet::from([p])).unwrap();
                let r = FiniteRelation::new(
                    space.labels().clone(),
                    cod.labels().clone(),
                    (0..n).map(|i| (i, if i < p { i } else { i + 1 })),
                )
                .unwrap();
                (g, r, format!("prepare uniform at {p}"))
            }
            _ => continue,
        };
        channel = g.compose(&channel).unwrap();
        relation = r.compose(&relation).unwrap();
        steps.push(step);
    }
    Word {
        channel,
        relation,
        steps,
    }
}

pub fn partitioned_set(
    rng: &mut Rng8,
    prefix: &str,
    max_blocks: usize,
    max_size: usize,
) -> PartitionedFinSet {
    PartitionedFinSet::new(labelled(prefix, sizes(rng, 1, max_blocks, max_size))).expect("valid")
}

/// A relation relating every domain block to something, and a function satisfying it.
pub fn funcrel_pair(
    rng: &mut Rng8,
    dom: &PartitionedFinSet,
    cod: &PartitionedFinSet,
) -> (FiniteRelation, PartitionedFunction) {
    let mut pairs: Vec<(usize, usize)> =
        relation(rng, dom.labels(), cod.labels()).pairs().collect();
    for i in 0..dom.num_blocks() {
        if !pairs.iter().any(|&(a, _)| a == i) {
            pairs.push((i, rng.gen_range(0..cod.num_blocks())));
        }
    }
    let tau = FiniteRelation::new(dom.labels().clone(), cod.labels().clone(), pairs).unwrap();
    let map = (0..dom.total())
        .map(|x| {
            let targets: Vec<usize> = tau
                .related_set(dom.block_of(x))
                .unwrap()
                .into_iter()
                .collect();
            let b = *targets.choose(rng).unwrap();
            *cod.elements(b).collect::<Vec<_>>().choose(rng).unwrap()
        })
        .collect();
    (
        tau,
        PartitionedFunction::new(dom.clone(), cod.clone(), map).unwrap(),
    )
}

pub fn fin_function(rng: &mut Rng8, dom: usize, cod: usize) -> FinFunction {
    FinFunction::new(cod, (0..dom).map(|_| rng.gen_range(0..cod)).collect()).expect("in range")
}

fn tuple(rng: &mut Rng8, n: usize, k: usize) -> Tuple {
    (0..k).map(|_| rng.gen_range(0..n)).collect()
}

/// Up to `max_constraints` random constraints of arity `1..=max_arity`.
pub fn csp_problem(
    rng: &mut Rng8,
    dom: usize,
    cod: usize,
    max_arity: usize,
    max_constraints: usize,
) -> CspProblem {
    let cs: Vec<CspConstraint> = (0..rng.gen_range(0..=max_constraints))
        .map(|_| {
            let k = rng.gen_range(1..=max_arity);
            let allowed: Vec<Tuple> = (0..cod.pow(k as u32))
                .filter(|_| rng.gen_bool(0.5))
                .map(|code| {
                    let mut t = vec![0; k];
                    let mut c = code;
                    for slot in t.iter_mut().rev() {
                        *slot = c % cod;
                        c /= cod;
                    }
                    t
                })
                .collect();
            CspConstraint::new(tuple(rng, dom, k), allowed).unwrap()
        })
        .collect();
    CspProblem::new(dom, cod, cs).unwrap()
}

/// A random function and a problem it solves.
pub fn csp_pair(
    rng: &mut Rng8,
    dom: usize,
    cod: usize,
    max_arity: usize,
    max_constraints: usize,
) -> (CspProblem, FinFunction) {
    let f = fin_function(rng, dom, cod);
    let base = csp_problem(rng, dom, cod, max_arity, max_constraints);
    let cs = base.constraints().iter().map(|c| {
        let image: Tuple = c.scope().iter().map(|&x| f.apply(x)).collect();
        let mut allowed: Vec<Tuple> = c.allowed().iter().cloned().collect();
        allowed.push(image);
        CspConstraint::new(c.scope().to_vec(), allowed).unwrap()
    });
    (
        CspProblem::new(dom, cod, cs.collect::<Vec<_>>()).unwrap(),
        f,
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generated_pairs_satisfy_their_constraints() {
        let mut r = rng(7);
        for _ in 0..200 {
            let a = sector_space(&mut r, "a", 3, 2);
            let b = sector_space(&mut r, "b", 3, 2);
            let (tau, f) = sectorial_pair(&mut r, &a, &b);
            assert!(f.check_sectorial(&tau).unwrap());

            let (tau, f) = constrained_channel(&mut r, 3, 2);
            assert!(f.check_signalling(&tau).unwrap(), "{tau}");

            let x = partitioned_set(&mut r, "x", 3, 2);
            let y = partitioned_set(&mut r, "y", 3, 2);
            let (tau, f) = funcrel_pair(&mut r, &x, &y);
            assert!(f.check_funcrel(&tau).unwrap());

            let (c, f) = csp_pair(&mut r, 3, 2, 2, 3);
            assert!(c.satisfies(&f).unwrap());
        }
    }

    #[test]
    fn words_stay_within_bounds() {
        let mut r = rng(11);
        for _ in 0..200 {
            let w = timesym_word(&mut r, 3, 2, 5);
            assert!(w.channel.dom().len() <= 3 && w.channel.cod().len() <= 3);
            assert_eq!(w.relation.src(), w.channel.dom().labels());
            assert_eq!(w.relation.dst(), w.channel.cod().labels());
            assert!(w.channel.is_uniform_preserving());
        }
    }

    #[test]
    fn seeds_reproduce() {
        let draw = |seed| {
            let mut r = rng(seed);
            timesym_word(&mut r, 3, 2, 5).steps
        };
        assert_eq!(draw(3), draw(3));
    }
}
