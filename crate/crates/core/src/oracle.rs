//! Exhaustive and seeded-random oracle suites.
//!
//! Each suite plans its work up front and refuses to run when the number of
//! cases exceeds the configured cap ([`Error::Explosion`]). Random draws come
//! from [`DEFAULT_SEED`] unless another seed is given, so reports are
//! reproducible. The large sweeps use bitmask encodings; each suite also
//! cross-checks those encodings against the library's own checkers on a
//! random sample.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::Rng;
use serde::Serialize;

use crate::cspcat::{all_tuples, CspConstraint, CspProblem, FinFunction};
use crate::error::{Error, Result};
use crate::funcrel::{
    oracle_intersectability, oracle_laxity, oracle_laxity_boxwise, PartitionedFinSet,
};
use crate::gen::{self, Rng8};
use crate::laws;
use crate::monoidrel::{FiniteMonoid, MonoidLabeling};
use crate::relcat::{FiniteRelation, LabelList};
use crate::signalling::{
    parity_constraints, parity_counterexample, FactorSet, FactorSpace, StochChannel,
};

pub const DEFAULT_SEED: u64 = 20_240_601;
pub const DEFAULT_CAP: u128 = 100_000_000;
pub const HARD_LIMIT: u128 = 10_000_000_000;

pub const SUITES: [&str; 7] = [
    "laxity",
    "intersectability",
    "atomicity",
    "timesym",
    "csp",
    "monoid",
    "laws",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct OracleConfig {
    /// Upper bound on the number of cases a suite may plan.
    pub cap: u128,
    pub seed: u64,
    /// Suite-specific size bound; `None` picks the suite default.
    pub size: Option<usize>,
}

impl Default for OracleConfig {
    fn default() -> Self {
        Self {
            cap: DEFAULT_CAP,
            seed: DEFAULT_SEED,
            size: None,
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Section {
    pub name: String,
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub passed: bool,
    pub cases: u64,
    pub failures: u64,
    pub first_failure: Option<String>,
    /// A failure the suite is designed to find, reported rather than counted.
    pub expected_witness: Option<String>,
    pub sections: Vec<Section>,
}

impl SuiteReport {
    fn new(suite: &str, seed: u64) -> Self {
        Self {
            suite: suite.to_string(),
            seed,
            passed: true,
            ..Self::default()
        }
    }

    fn add(&mut self, s: Section) {
        self.cases += s.cases;
        self.failures += s.failures;
        if self.first_failure.is_none() {
            self.first_failure = s.first_failure.as_ref().map(|f| format!("{}: {f}", s.name));
        }
        self.passed &= s.failures == 0;
        self.sections.push(s);
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain data")
    }

    pub fn to_text(&self) -> String {
        let mut out = format!(
            "{} (seed {}): {} cases, {} failures, {}\n",
            self.suite,
            self.seed,
            self.cases,
            self.failures,
            if self.passed { "PASS" } else { "FAIL" }
        );
        for s in &self.sections {
            out += &format!("  {}: {} cases, {} failures\n", s.name, s.cases, s.failures);
        }
        if let Some(w) = &self.expected_witness {
            out += &format!("  expected witness: {w}\n");
        }
        if let Some(f) = &self.first_failure {
            out += &format!("  first failure: {f}\n");
        }
        out
    }
}

impl Section {
    fn new(name: impl Into<String>) -> Self {
        Self {
            name: name.into(),
            ..Self::default()
        }
    }

    fn check(&mut self, ok: Result<bool>, detail: impl FnOnce() -> String) {
        self.cases += 1;
        let failure = match ok {
            Ok(true) => return,
            Ok(false) => detail(),
            Err(e) => format!("{}: {e}", detail()),
        };
        self.failures += 1;
        self.first_failure.get_or_insert(failure);
    }
}

fn budget(planned: u128, cfg: &OracleConfig) -> Result<()> {
    if cfg.cap > HARD_LIMIT {
        return Err(Error::Explosion {
            size: cfg.cap,
            cap: HARD_LIMIT,
        });
    }
    if planned > cfg.cap {
        return Err(Error::Explosion {
            size: planned,
            cap: cfg.cap,
        });
    }
    Ok(())
}

fn size_in(cfg: &OracleConfig, default: usize, max: usize) -> Result<usize> {
    let s = cfg.size.unwrap_or(default);
    if s == 0 || s > max {
        return Err(Error::Invalid(format!(
            "size must be between 1 and {max}, got {s}"
        )));
    }
    Ok(s)
}

pub fn run_suite(name: &str, cfg: &OracleConfig) -> Result<SuiteReport> {
    match name {
        "laxity" => laxity(cfg),
        "intersectability" => intersectability(cfg),
        "atomicity" => atomicity(cfg),
        "timesym" => timesym(cfg),
        "csp" => csp(cfg),
        "monoid" => monoid(cfg),
        "laws" => laws_suite(cfg),
        other => Err(Error::Invalid(format!(
            "unknown suite `{other}`; expected one of {}",
            SUITES.join(", ")
        ))),
    }
}

fn labels(prefix: &str, n: usize) -> LabelList {
    LabelList::new((1..=n).map(|i| format!("{prefix}{i}"))).expect("distinct")
}

fn blocks_from_sizes(prefix: &str, sizes: &[usize]) -> PartitionedFinSet {
    PartitionedFinSet::new(
        sizes
            .iter()
            .enumerate()
            .map(|(i, &s)| (format!("{prefix}{}", i + 1), s)),
    )
    .expect("valid")
}

/// Every block-size vector with `k` blocks of size 1 or 2.
fn size_vectors(k: usize) -> Vec<Vec<usize>> {
    (0..1usize << k)
        .map(|m| (0..k).map(|i| 1 + (m >> i & 1)).collect())
        .collect()
}

/// Relation masks composed through [`FiniteRelation::compose`]:
/// `table[t * 2^(kb*kc) + u]` is the mask of `u ∘ t`.
fn compose_table(ka: usize, kb: usize, kc: usize) -> Vec<u64> {
    let (a, b, c) = (labels("a", ka), labels("b", kb), labels("c", kc));
    let ts = FiniteRelation::all_relations(&a, &b);
    let us = FiniteRelation::all_relations(&b, &c);
    let mut out = Vec::with_capacity(ts.len() * us.len());
    for t in &ts {
        for u in &us {
            out.push(u.compose(t).expect("composable").mask());
        }
    }
    out
}

fn element_masks(sizes: &[usize]) -> (Vec<u32>, Vec<usize>) {
    let mut masks = Vec::new();
    let mut block_of = Vec::new();
    let mut next = 0;
    for (b, &s) in sizes.iter().enumerate() {
        masks.push(((1u32 << s) - 1) << next);
        block_of.extend(std::iter::repeat_n(b, s));
        next += s;
    }
    (masks, block_of)
}

/// Union of the element masks of the blocks related to `row` by `mask`.
fn row_elements(mask: u64, row: usize, width: usize, elems: &[u32]) -> u32 {
    (0..width)
        .filter(|&j| mask >> (row * width + j) & 1 == 1)
        .fold(0, |acc, j| acc | elems[j])
}

/// The funcrel laxity containment for one case, element by element:
/// every element reachable in two allowed steps from a block must be
/// allowed by the composite. Vacuous when either side allows no function.
fn funcrel_case(
    ka: usize,
    tau_rows: &[u32],
    b_block_of: &[usize],
    sigma_rows: &[u32],
    comp_rows: &[u32],
) -> bool {
    if tau_rows[..ka].contains(&0) || sigma_rows.contains(&0) {
        return true;
    }
    (0..ka).all(|i| {
        let mut reach = 0;
        let mut ys = tau_rows[i];
        while ys != 0 {
            let y = ys.trailing_zeros() as usize;
            ys &= ys - 1;
            reach |= sigma_rows[b_block_of[y]];
        }
        reach & !comp_rows[i] == 0
    })
}

fn funcrel_laxity_cases(max_blocks: usize) -> u128 {
    let mut n = 0u128;
    for ka in 0..=max_blocks {
        for kb in 0..=max_blocks {
            for kc in 0..=max_blocks {
                n += (1u128 << (ka + kb + kc)) << (ka * kb + kb * kc);
            }
        }
    }
    n
}

/// Every partitioned set with at most `max_blocks` blocks of size 1 or 2,
/// every `τ: A → B` and `σ: B → C`.
fn funcrel_laxity_sweep(max_blocks: usize) -> Section {
    let mut sec = Section::new(format!("funcrel exhaustive, blocks <= {max_blocks}"));
    for ka in 0..=max_blocks {
        for kb in 0..=max_blocks {
            for kc in 0..=max_blocks {
                let table = compose_table(ka, kb, kc);
                let nt = 1usize << (ka * kb);
                let nu = 1usize << (kb * kc);
                let nc = 1usize << (ka * kc);
                for sc in size_vectors(kc) {
                    let (c_elems, _) = element_masks(&sc);
                    let comp_rows: Vec<Vec<u32>> = (0..nc)
                        .map(|m| {
                            (0..ka)
                                .map(|i| row_elements(m as u64, i, kc, &c_elems))
                                .collect()
                        })
                        .collect();
                    let sigma_rows: Vec<Vec<u32>> = (0..nu)
                        .map(|u| {
                            (0..kb)
                                .map(|j| row_elements(u as u64, j, kc, &c_elems))
                                .collect()
                        })
                        .collect();
                    for sb in size_vectors(kb) {
                        let (b_elems, b_block_of) = element_masks(&sb);
                        let tau_rows: Vec<Vec<u32>> = (0..nt)
                            .map(|t| {
                                (0..ka)
                                    .map(|i| row_elements(t as u64, i, kb, &b_elems))
                                    .collect()
                            })
                            .collect();
                        for sa in size_vectors(ka) {
                            for t in 0..nt {
                                for u in 0..nu {
                                    let comp = table[t * nu + u] as usize;
                                    let ok = funcrel_case(
                                        ka,
                                        &tau_rows[t],
                                        &b_block_of,
                                        &sigma_rows[u],
                                        &comp_rows[comp],
                                    );
                                    sec.check(Ok(ok), || {
                                        format!("A {sa:?}, B {sb:?}, C {sc:?}, tau mask {t}, sigma mask {u}")
                                    });
                                }
                            }
                        }
                    }
                }
            }
        }
    }
    sec
}

/// The bitmask sweep agrees with the set-based oracles on random cases.
fn funcrel_laxity_crosscheck(rng: &mut Rng8, trials: usize, cap: u128) -> Section {
    let mut sec = Section::new("funcrel cross-check against brute force");
    for _ in 0..trials {
        let sizes = |rng: &mut Rng8| -> Vec<usize> {
            let k = rng.gen_range(0..=2);
            (0..k).map(|_| rng.gen_range(1..=2)).collect()
        };
        let (sa, sb, sc) = (sizes(rng), sizes(rng), sizes(rng));
        let (a, b, c) = (
            blocks_from_sizes("a", &sa),
            blocks_from_sizes("b", &sb),
            blocks_from_sizes("c", &sc),
        );
        let tau = gen::relation(rng, a.labels(), b.labels());
        let sigma = gen::relation(rng, b.labels(), c.labels());
        let ok = (|| {
            let (b_elems, b_block_of) = element_masks(&sb);
            let (c_elems, _) = element_masks(&sc);
            let comp = sigma.compose(&tau)?.mask();
            let tau_rows: Vec<u32> = (0..sa.len())
                .map(|i| row_elements(tau.mask(), i, sb.len(), &b_elems))
                .collect();
            let sigma_rows: Vec<u32> = (0..sb.len())
                .map(|j| row_elements(sigma.mask(), j, sc.len(), &c_elems))
                .collect();
            let comp_rows: Vec<u32> = (0..sa.len())
                .map(|i| row_elements(comp, i, sc.len(), &c_elems))
                .collect();
            let fast = funcrel_case(sa.len(), &tau_rows, &b_block_of, &sigma_rows, &comp_rows);
            let boxwise = oracle_laxity_boxwise(&a, &b, &c, &tau, &sigma)?;
            let brute = oracle_laxity(&a, &b, &c, &tau, &sigma, cap)?;
            Ok(fast && boxwise && brute)
        })();
        sec.check(ok, || format!("{tau} then {sigma} on {sa:?} {sb:?} {sc:?}"));
    }
    sec
}

/// `support(g ∘ f) ≤ support(g) ∘ support(f)`.
pub fn sectorial_laxity(rng: &mut Rng8, trials: usize) -> Section {
    let mut sec = Section::new("sectorial support laxity");
    for _ in 0..trials {
        let a = gen::sector_space(rng, "a", 3, 2);
        let b = gen::sector_space(rng, "b", 3, 2);
        let c = gen::sector_space(rng, "c", 3, 2);
        let f = gen::block_matrix(rng, &a, &b);
        let g = gen::block_matrix(rng, &b, &c);
        let ok = (|| {
            let composite = g.support_relation().compose(&f.support_relation())?;
            g.compose(&f)?.support_relation().leq(&composite)
        })();
        sec.check(ok, || format!("f = {f:?}, g = {g:?}"));
    }
    sec
}

fn signalling_laxity(rng: &mut Rng8, trials: usize) -> Section {
    let mut sec = Section::new("signalling composite constraints");
    for _ in 0..trials {
        let x = gen::factor_space(rng, "x", 2, 2);
        let y = gen::factor_space(rng, "y", 3, 2);
        let z = gen::factor_space(rng, "z", 2, 2);
        let t1 = gen::relation(rng, x.labels(), y.labels());
        let t2 = gen::relation(rng, y.labels(), z.labels());
        let f = gen::local_channel(rng, &x, &y, &t1);
        let g = gen::local_channel(rng, &y, &z, &t2);
        let ok = (|| {
            let h = g.compose(&f)?;
            Ok(f.check_signalling(&t1)?
                && g.check_signalling(&t2)?
                && h.check_signalling(&t2.compose(&t1)?)?)
        })();
        sec.check(ok, || format!("{t1} then {t2}"));
    }
    sec
}

pub const LAXITY_RANDOM_TRIALS: usize = 1000;

pub fn laxity(cfg: &OracleConfig) -> Result<SuiteReport> {
    let blocks = size_in(cfg, 2, 3)?;
    let cross = 300;
    budget(
        funcrel_laxity_cases(blocks) + cross as u128 + 2 * LAXITY_RANDOM_TRIALS as u128,
        cfg,
    )?;
    let mut rng = gen::rng(cfg.seed);
    let mut rep = SuiteReport::new("laxity", cfg.seed);
    rep.add(funcrel_laxity_sweep(blocks));
    rep.add(funcrel_laxity_crosscheck(&mut rng, cross, cfg.cap));
    rep.add(sectorial_laxity(&mut rng, LAXITY_RANDOM_TRIALS));
    rep.add(signalling_laxity(&mut rng, LAXITY_RANDOM_TRIALS / 4));
    Ok(rep)
}

/// `f ⊨ τ ∧ σ ⇔ f ⊨ τ and f ⊨ σ`, with the meet also checked by the
/// independent projector route.
pub fn sectorial_intersectability(rng: &mut Rng8, trials: usize) -> Section {
    let mut sec = Section::new("sectorial meets");
    for _ in 0..trials {
        let a = gen::sector_space(rng, "a", 3, 2);
        let b = gen::sector_space(rng, "b", 3, 2);
        let f = gen::block_matrix(rng, &a, &b);
        let tau = gen::relation(rng, a.labels(), b.labels());
        let sigma = gen::relation(rng, a.labels(), b.labels());
        let ok = (|| {
            let meet = tau.meet(&sigma)?;
            let both = f.check_sectorial(&tau)? && f.check_sectorial(&sigma)?;
            let m = f.check_sectorial(&meet)?;
            Ok(m == both && f.check_relational_biproduct(&meet)? == m)
        })();
        sec.check(ok, || format!("{tau} and {sigma} on {f:?}"));
    }
    sec
}

fn funcrel_intersectability(rng: &mut Rng8, random_trials: usize, cap: u128) -> Vec<Section> {
    let mut exhaustive = Section::new("funcrel exhaustive, blocks <= 2");
    for ka in 0..=2 {
        for kb in 0..=2 {
            for sa in size_vectors(ka) {
                for sb in size_vectors(kb) {
                    let (a, b) = (blocks_from_sizes("a", &sa), blocks_from_sizes("b", &sb));
                    let rels = FiniteRelation::all_relations(a.labels(), b.labels());
                    for tau in &rels {
                        for sigma in &rels {
                            exhaustive
                                .check(oracle_intersectability(&a, &b, tau, sigma, cap), || {
                                    format!("{tau} and {sigma} on {sa:?} -> {sb:?}")
                                });
                        }
                    }
                }
            }
        }
    }
    let mut random = Section::new("funcrel random, blocks <= 3");
    for _ in 0..random_trials {
        let a = gen::partitioned_set(rng, "a", 3, 2);
        let b = gen::partitioned_set(rng, "b", 3, 2);
        let tau = gen::relation(rng, a.labels(), b.labels());
        let sigma = gen::relation(rng, a.labels(), b.labels());
        random.check(oracle_intersectability(&a, &b, &tau, &sigma, cap), || {
            format!("{tau} and {sigma} on {a} -> {b}")
        });
    }
    vec![exhaustive, random]
}

fn funcrel_intersectability_cases() -> u128 {
    let mut n = 0u128;
    for ka in 0..=2 {
        for kb in 0..=2 {
            n += (1u128 << (ka + kb)) << (2 * ka * kb);
        }
    }
    n
}

/// The parity channel satisfies both single-arrow constraints but not their meet.
pub fn parity_witness() -> Result<(bool, Option<String>)> {
    let f = parity_counterexample();
    let (s1, s2) = parity_constraints();
    let meet = s1.meet(&s2)?;
    let witness = f.signalling_violation(&meet)?.map(|v| v.to_string());
    let reproduced = f.check_signalling(&s1)? && f.check_signalling(&s2)? && witness.is_some();
    Ok((reproduced, witness))
}

pub fn intersectability(cfg: &OracleConfig) -> Result<SuiteReport> {
    let trials = 1000;
    budget(
        funcrel_intersectability_cases() + 2 * trials as u128 + 1,
        cfg,
    )?;
    let mut rng = gen::rng(cfg.seed);
    let mut rep = SuiteReport::new("intersectability", cfg.seed);
    rep.add(sectorial_intersectability(&mut rng, trials));
    for s in funcrel_intersectability(&mut rng, trials, cfg.cap) {
        rep.add(s);
    }
    let mut sec = Section::new("signalling counterexample reproduced");
    let (reproduced, witness) = parity_witness()?;
    sec.check(Ok(reproduced), || {
        "parity channel did not separate the meet".into()
    });
    rep.add(sec);
    rep.expected_witness = witness.map(|w| format!("parity channel under meet(s1, s2): {w}"));
    Ok(rep)
}

/// Channels from [`gen::constrained_channel`]: signalling holds, implies the
/// atomic check, and domain atomicity holds for every set of outputs.
pub fn domain_atomicity(rng: &mut Rng8, channels: usize) -> Section {
    let mut sec = Section::new("domain atomicity, every output set");
    for n in 0..channels {
        let (tau, f) = gen::constrained_channel(rng, 3, 2);
        sec.check(
            (|| Ok(f.check_signalling(&tau)? && f.check_signalling_atomic(&tau)?))(),
            || format!("channel {n}: generated pair not signalling-compatible under {tau}"),
        );
        let k = f.cod().len();
        for bits in 0..1usize << k {
            let t: FactorSet = (0..k).filter(|j| bits >> j & 1 == 1).collect();
            sec.check(f.check_domain_atomicity(&tau, &t), || {
                format!("channel {n} under {tau}, outputs {t:?}")
            });
        }
    }
    sec
}

pub fn atomicity(cfg: &OracleConfig) -> Result<SuiteReport> {
    let channels = 500;
    budget(channels as u128 * 9, cfg)?;
    let mut rng = gen::rng(cfg.seed);
    let mut rep = SuiteReport::new("atomicity", cfg.seed);
    rep.add(domain_atomicity(&mut rng, channels));
    let mut gap = Section::new("atomic check is weaker than the full check");
    let f = parity_counterexample();
    let (s1, s2) = parity_constraints();
    let meet = s1.meet(&s2)?;
    gap.check(
        (|| Ok(f.check_signalling_atomic(&meet)? && !f.check_signalling(&meet)?))(),
        || "parity channel".into(),
    );
    rep.add(gap);
    Ok(rep)
}

fn agree(f: &StochChannel, tau: &FiniteRelation) -> Result<(bool, bool, bool)> {
    Ok((
        f.check_signalling(tau)?,
        f.check_cosignalling(tau)?,
        f.check_signalling_atomic(tau)?,
    ))
}

/// On random time-symmetric words: the three checks agree on the derived
/// relation (and hold there), and agree on every relation for the first
/// `all_relations_for` words.
pub fn timesym_agreement(rng: &mut Rng8, words: usize, all_relations_for: usize) -> Vec<Section> {
    let mut derived = Section::new("derived relation");
    let mut every = Section::new("every relation on the boundary");
    for n in 0..words {
        let w = gen::timesym_word(rng, 3, 2, 5);
        derived.check(
            agree(&w.channel, &w.relation).map(|r| r == (true, true, true)),
            || format!("word {n} {:?} under {}", w.steps, w.relation),
        );
        if n < all_relations_for {
            for tau in
                FiniteRelation::all_relations(w.channel.dom().labels(), w.channel.cod().labels())
            {
                every.check(
                    agree(&w.channel, &tau).map(|(s, c, a)| s == c && c == a),
                    || format!("word {n} {:?} under {tau}", w.steps),
                );
            }
        }
    }
    vec![derived, every]
}

/// CNOT on two bits satisfies `{(a,1),(a,2),(b,2)}` forwards but not backwards.
pub fn cnot_discrepancy() -> Result<(bool, bool)> {
    let bits = FactorSpace::new([("a", 2), ("b", 2)])?;
    let out = FactorSpace::new([("c", 2), ("d", 2)])?;
    let f = StochChannel::deterministic(bits.clone(), out.clone(), |x| vec![x[0], x[0] ^ x[1]])?;
    let tau = FiniteRelation::new(
        bits.labels().clone(),
        out.labels().clone(),
        [(0, 0), (0, 1), (1, 1)],
    )?;
    Ok((f.check_signalling(&tau)?, f.check_cosignalling(&tau)?))
}

pub fn timesym(cfg: &OracleConfig) -> Result<SuiteReport> {
    let (words, full) = (500, 100);
    budget(words as u128 + full as u128 * 512, cfg)?;
    let mut rng = gen::rng(cfg.seed);
    let mut rep = SuiteReport::new("timesym", cfg.seed);
    for s in timesym_agreement(&mut rng, words, full) {
        rep.add(s);
    }
    if let Ok((true, false)) = cnot_discrepancy() {
        rep.expected_witness = Some(
            "CNOT (outside the generators) passes the forward check and fails the backward one"
                .into(),
        );
    }
    Ok(rep)
}

/// Bitmask CSP machinery for sizes up to 3 and arities up to 2.
mod fastcsp {
    use super::*;

    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub struct Con {
        pub arity: usize,
        /// Scope as a base-`dom` code, first variable most significant.
        pub scope: usize,
        /// Bit `t` set iff the tuple with base-`cod` code `t` is allowed.
        pub allowed: u32,
    }

    fn code(digits: &[usize], base: usize) -> usize {
        digits.iter().fold(0, |c, &d| c * base + d)
    }

    fn digits(mut c: usize, base: usize, len: usize) -> Vec<usize> {
        let mut out = vec![0; len];
        for slot in out.iter_mut().rev() {
            *slot = c % base;
            c /= base;
        }
        out
    }

    /// All constraints `dom → cod` with arity in `arities`, in a fixed order.
    pub fn universe(dom: usize, cod: usize, arities: &[usize]) -> Vec<Con> {
        let mut out = Vec::new();
        for &k in arities {
            let tuples = cod.pow(k as u32);
            for scope in 0..dom.pow(k as u32) {
                for allowed in 0..1u32 << tuples {
                    out.push(Con {
                        arity: k,
                        scope,
                        allowed,
                    });
                }
            }
        }
        out
    }

    /// Satisfying functions of one constraint, as a mask over function codes.
    pub fn sat(c: &Con, dom: usize, cod: usize) -> u32 {
        let mut m = 0;
        for f in 0..cod.pow(dom as u32) {
            let fd = digits(f, cod, dom);
            let image: Vec<usize> = digits(c.scope, dom, c.arity)
                .iter()
                .map(|&x| fd[x])
                .collect();
            if c.allowed >> code(&image, cod) & 1 == 1 {
                m |= 1 << f;
            }
        }
        m
    }

    /// `table[g * |fs| + f]` is the code of `g ∘ f`.
    pub fn compose_table(n1: usize, n2: usize, n3: usize) -> Vec<usize> {
        let nf = n2.pow(n1 as u32);
        let ng = n3.pow(n2 as u32);
        let mut out = vec![0; nf * ng];
        for g in 0..ng {
            let gd = digits(g, n3, n2);
            for f in 0..nf {
                let h: Vec<usize> = digits(f, n2, n1).iter().map(|&y| gd[y]).collect();
                out[g * nf + f] = code(&h, n3);
            }
        }
        out
    }

    /// `C2 ∘ C1` per the composition rule.
    pub fn compose(c2: &[Con], c1: &[Con]) -> Vec<Con> {
        let mut out = Vec::new();
        for a in c1 {
            for sigma in c2.iter().filter(|c| c.arity == a.arity) {
                let covered = (0..32).filter(|m| a.allowed >> m & 1 == 1).all(|m| {
                    c2.iter()
                        .any(|c| c.arity == a.arity && c.scope == m && c.allowed == sigma.allowed)
                });
                if covered {
                    out.push(Con {
                        arity: a.arity,
                        scope: a.scope,
                        allowed: sigma.allowed,
                    });
                }
            }
        }
        out
    }

    pub fn to_problem(cs: &[Con], dom: usize, cod: usize) -> CspProblem {
        let cons = cs.iter().map(|c| {
            let allowed = (0..cod.pow(c.arity as u32))
                .filter(|t| c.allowed >> t & 1 == 1)
                .map(|t| digits(t, cod, c.arity));
            CspConstraint::new(digits(c.scope, dom, c.arity), allowed).expect("valid")
        });
        CspProblem::new(dom, cod, cons.collect::<Vec<_>>()).expect("in range")
    }

    pub fn function(code: usize, dom: usize, cod: usize) -> FinFunction {
        FinFunction::new(cod, digits(code, cod, dom)).expect("in range")
    }
}

/// Index sets of at most two distinct constraints.
fn small_subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    std::iter::once(Vec::new())
        .chain((0..n).map(|i| vec![i]))
        .chain((0..n).flat_map(move |i| (i + 1..n).map(move |j| vec![i, j])))
}

fn subset_count(n: usize) -> u128 {
    let n = n as u128;
    1 + n + n * n.saturating_sub(1) / 2
}

struct CspScope {
    sizes: Vec<usize>,
    arities: Vec<usize>,
}

impl CspScope {
    fn triples(&self) -> impl Iterator<Item = (usize, usize, usize)> + '_ {
        let s = &self.sizes;
        s.iter().flat_map(move |&a| {
            s.iter()
                .flat_map(move |&b| s.iter().map(move |&c| (a, b, c)))
        })
    }

    fn cases(&self) -> u128 {
        self.triples()
            .map(|(a, b, c)| {
                subset_count(fastcsp::universe(a, b, &self.arities).len())
                    * subset_count(fastcsp::universe(b, c, &self.arities).len())
            })
            .sum()
    }
}

/// Checks `g ∘ f ⊨ C2 ∘ C1` for every `f ⊨ C1`, `g ⊨ C2`.
fn csp_laxity_case(
    c1: &[fastcsp::Con],
    c2: &[fastcsp::Con],
    sat1: u32,
    sat2: u32,
    table: &[usize],
    (n1, _n2, n3): (usize, usize, usize),
    nf: usize,
) -> bool {
    let composite = fastcsp::compose(c2, c1);
    let all = if n3.pow(n1 as u32) == 32 {
        u32::MAX
    } else {
        (1u32 << n3.pow(n1 as u32)) - 1
    };
    let sat = composite
        .iter()
        .fold(all, |m, c| m & fastcsp::sat(c, n1, n3));
    let mut fs = sat1;
    while fs != 0 {
        let f = fs.trailing_zeros() as usize;
        fs &= fs - 1;
        let mut gs = sat2;
        while gs != 0 {
            let g = gs.trailing_zeros() as usize;
            gs &= gs - 1;
            if sat >> table[g * nf + f] & 1 == 0 {
                return false;
            }
        }
    }
    true
}

fn problem_sat(sats: &[u32], idx: &[usize], all: u32) -> u32 {
    idx.iter().fold(all, |m, &i| m & sats[i])
}

fn csp_exhaustive(scope: &CspScope, name: &str) -> Section {
    let mut sec = Section::new(name);
    for (n1, n2, n3) in scope.triples() {
        let u1 = fastcsp::universe(n1, n2, &scope.arities);
        let u2 = fastcsp::universe(n2, n3, &scope.arities);
        let s1: Vec<u32> = u1.iter().map(|c| fastcsp::sat(c, n1, n2)).collect();
        let s2: Vec<u32> = u2.iter().map(|c| fastcsp::sat(c, n2, n3)).collect();
        let all1 = (1u32 << n2.pow(n1 as u32)) - 1;
        let all2 = (1u32 << n3.pow(n2 as u32)) - 1;
        let table = fastcsp::compose_table(n1, n2, n3);
        let nf = n2.pow(n1 as u32);
        let p2: Vec<(Vec<fastcsp::Con>, u32)> = small_subsets(u2.len())
            .map(|idx| {
                let cs: Vec<_> = idx.iter().map(|&i| u2[i]).collect();
                let sat = problem_sat(&s2, &idx, all2);
                (cs, sat)
            })
            .collect();
        for idx1 in small_subsets(u1.len()) {
            let c1: Vec<_> = idx1.iter().map(|&i| u1[i]).collect();
            let sat1 = problem_sat(&s1, &idx1, all1);
            for (c2, sat2) in &p2 {
                let ok = csp_laxity_case(&c1, c2, sat1, *sat2, &table, (n1, n2, n3), nf);
                sec.check(Ok(ok), || {
                    format!("sizes {n1},{n2},{n3}: C1 {c1:?}, C2 {c2:?}")
                });
            }
        }
    }
    sec
}

fn random_cons(rng: &mut Rng8, universe: &[fastcsp::Con]) -> Vec<fastcsp::Con> {
    let k = rng.gen_range(0..=2);
    let mut cs: Vec<fastcsp::Con> = universe.choose_multiple(rng, k).copied().collect();
    cs.dedup();
    cs
}

fn csp_random(rng: &mut Rng8, trials: usize) -> Section {
    let mut sec = Section::new("random, sizes <= 3, arity <= 2");
    let mut cache: BTreeMap<(usize, usize), Vec<fastcsp::Con>> = BTreeMap::new();
    for _ in 0..trials {
        let (n1, n2, n3) = (
            rng.gen_range(1..=3),
            rng.gen_range(1..=3),
            rng.gen_range(1..=3),
        );
        let u1 = cache
            .entry((n1, n2))
            .or_insert_with(|| fastcsp::universe(n1, n2, &[1, 2]))
            .clone();
        let u2 = cache
            .entry((n2, n3))
            .or_insert_with(|| fastcsp::universe(n2, n3, &[1, 2]))
            .clone();
        let c1 = random_cons(rng, &u1);
        let c2 = random_cons(rng, &u2);
        let all1 = (1u32 << n2.pow(n1 as u32)) - 1;
        let all2 = (1u32 << n3.pow(n2 as u32)) - 1;
        let sat1 = c1.iter().fold(all1, |m, c| m & fastcsp::sat(c, n1, n2));
        let sat2 = c2.iter().fold(all2, |m, c| m & fastcsp::sat(c, n2, n3));
        let table = fastcsp::compose_table(n1, n2, n3);
        let ok = csp_laxity_case(
            &c1,
            &c2,
            sat1,
            sat2,
            &table,
            (n1, n2, n3),
            n2.pow(n1 as u32),
        );
        sec.check(Ok(ok), || {
            format!("sizes {n1},{n2},{n3}: C1 {c1:?}, C2 {c2:?}")
        });
    }
    sec
}

/// The bitmask composite and satisfaction sets match [`CspProblem`].
fn csp_crosscheck(rng: &mut Rng8, trials: usize) -> Section {
    let mut sec = Section::new("bitmask encoding against CspProblem");
    for _ in 0..trials {
        let (n1, n2, n3) = (
            rng.gen_range(1..=3),
            rng.gen_range(1..=3),
            rng.gen_range(1..=3),
        );
        let c1 = random_cons(rng, &fastcsp::universe(n1, n2, &[1, 2]));
        let c2 = random_cons(rng, &fastcsp::universe(n2, n3, &[1, 2]));
        let ok = (|| {
            let (p1, p2) = (
                fastcsp::to_problem(&c1, n1, n2),
                fastcsp::to_problem(&c2, n2, n3),
            );
            let composite = p2.compose(&p1)?;
            let fast = fastcsp::to_problem(&fastcsp::compose(&c2, &c1), n1, n3);
            if composite != fast {
                return Ok(false);
            }
            for c in &c1 {
                let sat = fastcsp::sat(c, n1, n2);
                let single = fastcsp::to_problem(&[*c], n1, n2);
                for (code, f) in FinFunction::all(n1, n2).iter().enumerate() {
                    if single.satisfies(f)? != (sat >> code & 1 == 1)
                        || fastcsp::function(code, n1, n2) != *f
                    {
                        return Ok(false);
                    }
                }
            }
            Ok(true)
        })();
        sec.check(ok, || format!("sizes {n1},{n2},{n3}: C1 {c1:?}, C2 {c2:?}"));
    }
    sec
}

pub const CSP_RANDOM_TRIALS: usize = 100_000;

pub fn csp(cfg: &OracleConfig) -> Result<SuiteReport> {
    let size = size_in(cfg, 3, 3)?;
    let unary = CspScope {
        sizes: (1..=size).collect(),
        arities: vec![1],
    };
    let binary = CspScope {
        sizes: (1..=size.min(2)).collect(),
        arities: vec![1, 2],
    };
    let random = if size == 3 { CSP_RANDOM_TRIALS } else { 0 };
    let cross = 2000;
    budget(
        unary.cases() + binary.cases() + random as u128 + cross as u128,
        cfg,
    )?;
    let mut rng = gen::rng(cfg.seed);
    let mut rep = SuiteReport::new("csp", cfg.seed);
    rep.add(csp_crosscheck(&mut rng, cross));
    rep.add(csp_exhaustive(
        &unary,
        &format!("exhaustive, sizes <= {size}, arity 1"),
    ));
    rep.add(csp_exhaustive(
        &binary,
        &format!("exhaustive, sizes <= {}, arity <= 2", size.min(2)),
    ));
    if random > 0 {
        rep.add(csp_random(&mut rng, random));
    }
    // Sanity: the all-tuples helper lists `n^k` tuples.
    debug_assert_eq!(all_tuples(3, 2).len(), 9);
    Ok(rep)
}

/// Monoid compositionality over every labelled monoid with identity `0`
/// of order at most `max_order` and every labelled set of size at most
/// `max_set`: `L(τ) · L(λ) ⊆ L(τ ∘ λ)`.
pub fn monoid_compositionality(max_order: usize, max_set: usize) -> Section {
    let mut sec = Section::new(format!("orders <= {max_order}, |S| <= {max_set}"));
    for s in 1..=max_set {
        let set = labels("s", s);
        let rels = FiniteRelation::all_relations(&set, &set);
        let nr = rels.len();
        let mut comp = vec![0u16; nr * nr];
        for (t, tau) in rels.iter().enumerate() {
            for (l, lam) in rels.iter().enumerate() {
                comp[t * nr + l] = tau.compose(lam).expect("endorelations").mask() as u16;
            }
        }
        let singles: Vec<FiniteRelation> = (0..s * s)
            .map(|b| FiniteRelation::from_mask(set.clone(), set.clone(), 1 << b))
            .collect();
        for n in 1..=max_order {
            for m in FiniteMonoid::all_of_order(n) {
                let mut prod = vec![0u16; 1 << (2 * n)];
                for a in 0..1usize << n {
                    for b in 0..1usize << n {
                        let mut p = 0u16;
                        for x in (0..n).filter(|x| a >> x & 1 == 1) {
                            for y in (0..n).filter(|y| b >> y & 1 == 1) {
                                p |= 1 << m.mul(x, y);
                            }
                        }
                        prod[a << n | b] = p;
                    }
                }
                let all: u16 = (1 << n) - 1;
                for code in 0..n.pow(s as u32) {
                    let assignment: Vec<usize> =
                        (0..s).map(|i| code / n.pow(i as u32) % n).collect();
                    let lab =
                        MonoidLabeling::new(set.clone(), assignment.clone(), &m).expect("in range");
                    let single: Vec<u16> = singles
                        .iter()
                        .map(|r| {
                            m.constraint_set(r, &lab)
                                .expect("endorelation")
                                .into_iter()
                                .fold(0, |acc, e| acc | 1 << e)
                        })
                        .collect();
                    // L(τ) is the intersection over its pairs.
                    let ls: Vec<u16> = (0..nr)
                        .map(|t| {
                            (0..s * s)
                                .filter(|b| t >> b & 1 == 1)
                                .fold(all, |acc, b| acc & single[b])
                        })
                        .collect();
                    let mut failures = 0u64;
                    let mut first = None;
                    for t in 0..nr {
                        let lt = (ls[t] as usize) << n;
                        for l in 0..nr {
                            let p = prod[lt | ls[l] as usize];
                            if p & !ls[comp[t * nr + l] as usize] != 0 {
                                failures += 1;
                                first.get_or_insert((t, l));
                            }
                        }
                    }
                    sec.cases += (nr * nr) as u64;
                    sec.failures += failures;
                    if let (Some((t, l)), None) = (first, &sec.first_failure) {
                        sec.first_failure = Some(format!(
                            "monoid {:?}, labels {assignment:?}: {} then {}",
                            m.table(),
                            rels[l],
                            rels[t]
                        ));
                    }
                }
            }
        }
    }
    sec
}

/// The intersection formula for `L(τ)` used by the sweep matches the direct
/// definition on random relations.
fn monoid_crosscheck(rng: &mut Rng8, trials: usize) -> Section {
    let mut sec = Section::new("pairwise intersection against constraint_set");
    let monoids: Vec<FiniteMonoid> = (1..=4).flat_map(FiniteMonoid::all_of_order).collect();
    for _ in 0..trials {
        let m = monoids.choose(rng).expect("nonempty").clone();
        let s = rng.gen_range(1..=3);
        let set = labels("s", s);
        let assignment = (0..s).map(|_| rng.gen_range(0..m.size())).collect();
        let lab = MonoidLabeling::new(set.clone(), assignment, &m).expect("in range");
        let tau = gen::relation(rng, &set, &set);
        let ok = (|| {
            let direct = m.constraint_set(&tau, &lab)?;
            let mut inter: std::collections::BTreeSet<usize> = (0..m.size()).collect();
            for (x, y) in tau.pairs() {
                let single = FiniteRelation::new(set.clone(), set.clone(), [(x, y)])?;
                let l = m.constraint_set(&single, &lab)?;
                inter = inter.intersection(&l).copied().collect();
            }
            Ok(direct == inter)
        })();
        sec.check(ok, || format!("{tau} on {:?}", m.table()));
    }
    sec
}

pub fn monoid_cases(max_order: usize, max_set: usize) -> u128 {
    let mut n = 0u128;
    for s in 1..=max_set {
        let pairs = 1u128 << (2 * s * s);
        for k in 1..=max_order {
            n += FiniteMonoid::all_of_order(k).len() as u128 * (k as u128).pow(s as u32) * pairs;
        }
    }
    n
}

pub fn monoid(cfg: &OracleConfig) -> Result<SuiteReport> {
    let order = size_in(cfg, 3, 4)?;
    let cross = 500;
    budget(monoid_cases(order, 3) + cross as u128, cfg)?;
    let mut rng = gen::rng(cfg.seed);
    let mut rep = SuiteReport::new("monoid", cfg.seed);
    rep.add(monoid_crosscheck(&mut rng, cross));
    rep.add(monoid_compositionality(order, 3));
    Ok(rep)
}

pub fn laws_suite(cfg: &OracleConfig) -> Result<SuiteReport> {
    let trials = 1000;
    budget(trials as u128 * 6 * 6, cfg)?;
    let mut rng = gen::rng(cfg.seed);
    let mut rep = SuiteReport::new("laws", cfg.seed);
    for (name, c) in laws::all_laws(&mut rng, trials) {
        rep.add(Section {
            name,
            cases: c.cases,
            failures: c.failures,
            first_failure: c.first_failure,
        });
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn funcrel_case_counts() {
        // Block counts 0..=1: every (ka, kb, kc) in {0,1}^3.
        let n = funcrel_laxity_cases(1);
        let sec = funcrel_laxity_sweep(1);
        assert_eq!(sec.cases as u128, n);
        assert_eq!(sec.failures, 0);
    }

    #[test]
    fn caps_are_enforced() {
        let cfg = OracleConfig {
            cap: 10,
            ..OracleConfig::default()
        };
        assert!(matches!(laxity(&cfg), Err(Error::Explosion { .. })));
        let cfg = OracleConfig {
            cap: HARD_LIMIT + 1,
            ..OracleConfig::default()
        };
        assert!(matches!(csp(&cfg), Err(Error::Explosion { .. })));
        assert!(run_suite("nope", &OracleConfig::default()).is_err());
    }

    #[test]
    fn small_csp_scope() {
        let cfg = OracleConfig {
            size: Some(2),
            ..OracleConfig::default()
        };
        let rep = csp(&cfg).unwrap();
        assert!(rep.passed, "{:?}", rep.first_failure);
    }

    #[test]
    fn a_broken_containment_is_caught() {
        // Pretend the composite is empty: any nonvacuous case must fail.
        let (b_elems, b_block_of) = element_masks(&[1]);
        let (c_elems, _) = element_masks(&[1]);
        let tau_rows = [row_elements(1, 0, 1, &b_elems)];
        let sigma_rows = [row_elements(1, 0, 1, &c_elems)];
        assert!(!funcrel_case(1, &tau_rows, &b_block_of, &sigma_rows, &[0]));
    }

    #[test]
    fn cnot_is_outside_time_symmetry() {
        assert_eq!(cnot_discrepancy().unwrap(), (true, false));
    }

    #[test]
    fn monoid_small_orders() {
        let sec = monoid_compositionality(3, 2);
        assert_eq!(sec.failures, 0, "{:?}", sec.first_failure);
        assert_eq!(sec.cases as u128, monoid_cases(3, 2));
    }
}
