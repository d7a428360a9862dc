//! Acceptance criteria, one line each. Runs without the libtest harness so
//! the output stays in order; exits nonzero if any criterion fails.

use std::process::ExitCode;
use std::time::{Duration, Instant};

use relcon::oracle::{self, OracleConfig, SuiteReport, DEFAULT_SEED, HARD_LIMIT};
use relcon::relcat::{FiniteRelation, LabelList};
use relcon::signalling::{parity_constraints, parity_counterexample};
use relcon::{gen, Result};

/// Wall-clock limits per criterion, in order.
const LIMITS_SECS: [u64; 11] = [1, 1, 10, 10, 60, 5, 30, 60, 60, 60, 30];

/// Random-trial counts the criteria ask for.
const INTERSECT_TRIALS: usize = 1000;
const LAXITY_TRIALS: usize = 1000;
const ATOMICITY_CHANNELS: usize = 500;
const LAW_TRIALS: usize = 1000;
const TIMESYM_WORDS: usize = 500;
const MAX_GENERATOR_SIDE: usize = 4;

type Criterion = (&'static str, fn() -> Result<Outcome>);

struct Outcome {
    ok: bool,
    detail: String,
}

fn outcome(ok: bool, detail: impl Into<String>) -> Result<Outcome> {
    Ok(Outcome {
        ok,
        detail: detail.into(),
    })
}

fn from_report(rep: &SuiteReport) -> Result<Outcome> {
    let detail = match &rep.first_failure {
        Some(f) => format!("{} cases, {} failures; first: {f}", rep.cases, rep.failures),
        None => format!("{} cases, 0 failures", rep.cases),
    };
    outcome(rep.passed, detail)
}

fn from_sections(secs: &[oracle::Section]) -> Result<Outcome> {
    let cases: u64 = secs.iter().map(|s| s.cases).sum();
    let failures: u64 = secs.iter().map(|s| s.failures).sum();
    let first = secs.iter().find_map(|s| s.first_failure.clone());
    let detail = match first {
        Some(f) => format!("{cases} cases, {failures} failures; first: {f}"),
        None => format!("{cases} cases, 0 failures"),
    };
    outcome(failures == 0 && cases > 0, detail)
}

fn big(size: usize) -> OracleConfig {
    OracleConfig {
        cap: HARD_LIMIT,
        seed: DEFAULT_SEED,
        size: Some(size),
    }
}

fn counterexample() -> Result<Outcome> {
    let f = parity_counterexample();
    let (s1, s2) = parity_constraints();
    let meet = s1.meet(&s2)?;
    let (a, b, m) = (
        f.check_signalling(&s1)?,
        f.check_signalling(&s2)?,
        f.check_signalling(&meet)?,
    );
    let witness = f
        .signalling_violation(&meet)?
        .map(|v| v.to_string())
        .unwrap_or_default();
    outcome(a && b && !m, format!("s1 {a}, s2 {b}, meet {m}; {witness}"))
}

fn atomic_gap() -> Result<Outcome> {
    let f = parity_counterexample();
    let (s1, s2) = parity_constraints();
    let meet = s1.meet(&s2)?;
    let (atomic, full) = (
        f.check_signalling_atomic(&meet)?,
        f.check_signalling(&meet)?,
    );
    outcome(atomic && !full, format!("atomic {atomic}, full {full}"))
}

fn intersectability() -> Result<Outcome> {
    let mut rng = gen::rng(DEFAULT_SEED);
    from_sections(&[oracle::sectorial_intersectability(
        &mut rng,
        INTERSECT_TRIALS,
    )])
}

fn sectorial_laxity() -> Result<Outcome> {
    let mut rng = gen::rng(DEFAULT_SEED);
    from_sections(&[oracle::sectorial_laxity(&mut rng, LAXITY_TRIALS)])
}

fn funcrel_exhaustive() -> Result<Outcome> {
    from_report(&oracle::laxity(&big(3))?)
}

/// Every relation up to 4x4 is the meet of the generators omitting its
/// missing pairs; each generator misses exactly one pair. The meet is also
/// recomputed on masks.
fn generators() -> Result<Outcome> {
    let mut cases = 0u64;
    let mut bad = None;
    for n in 0..=MAX_GENERATOR_SIDE {
        for m in 0..=MAX_GENERATOR_SIDE {
            let a = LabelList::new((0..n).map(|i| format!("a{i}")))?;
            let b = LabelList::new((0..m).map(|j| format!("b{j}")))?;
            let full: u64 = (1u64 << (n * m)) - 1;
            let gens = FiniteRelation::meet_generators(&a, &b);
            let gen_masks: Vec<u64> = gens.iter().map(FiniteRelation::mask).collect();
            let shapes_ok =
                gens.len() == n * m && gen_masks.iter().all(|g| (full & !g).count_ones() == 1);
            for tau in FiniteRelation::all_relations(&a, &b) {
                cases += 1;
                let missing = full & !tau.mask();
                let by_mask = gen_masks
                    .iter()
                    .filter(|&&g| missing & !g != 0)
                    .fold(full, |acc, g| acc & g);
                if !(shapes_ok && by_mask == tau.mask() && tau.from_generators() == tau) {
                    bad.get_or_insert_with(|| format!("{n}x{m}: {tau}"));
                }
            }
        }
    }
    match bad {
        Some(b) => outcome(false, format!("{cases} relations; first failure {b}")),
        None => outcome(true, format!("{cases} relations, 0 failures")),
    }
}

fn domain_atomicity() -> Result<Outcome> {
    let mut rng = gen::rng(DEFAULT_SEED);
    from_sections(&[oracle::domain_atomicity(&mut rng, ATOMICITY_CHANNELS)])
}

fn csp() -> Result<Outcome> {
    from_report(&oracle::csp(&big(3))?)
}

fn monoid() -> Result<Outcome> {
    from_report(&oracle::monoid(&big(4))?)
}

fn laws() -> Result<Outcome> {
    let mut rng = gen::rng(DEFAULT_SEED);
    let counts = relcon::laws::all_laws(&mut rng, LAW_TRIALS);
    let failed: Vec<_> = counts.iter().filter(|(_, c)| c.failures > 0).collect();
    // Each supported law must have run at least LAW_TRIALS times per encoding.
    let short: Vec<_> = counts
        .iter()
        .filter(|(_, c)| c.cases < LAW_TRIALS as u64)
        .map(|(k, _)| k.as_str())
        .collect();
    let total: u64 = counts.values().map(|c| c.cases).sum();
    let detail = match failed.first() {
        Some((k, c)) => format!("{k}: {}", c.first_failure.clone().unwrap_or_default()),
        None if !short.is_empty() => format!("too few trials: {short:?}"),
        None => format!(
            "{} law/encoding pairs, {total} cases, 0 failures",
            counts.len()
        ),
    };
    outcome(failed.is_empty() && short.is_empty(), detail)
}

fn timesym() -> Result<Outcome> {
    let mut rng = gen::rng(DEFAULT_SEED);
    from_sections(&oracle::timesym_agreement(&mut rng, TIMESYM_WORDS, 0)[..1])
}

fn main() -> ExitCode {
    let criteria: [Criterion; 11] = [
        ("parity counterexample", counterexample),
        ("atomic-vs-full gap", atomic_gap),
        ("sectorial intersectability", intersectability),
        ("sectorial laxity", sectorial_laxity),
        ("funcrel exhaustive laxity", funcrel_exhaustive),
        ("meet-generator completeness", generators),
        ("domain atomicity", domain_atomicity),
        ("csp laxity", csp),
        ("monoid compositionality", monoid),
        ("constrained-category laws", laws),
        ("time-symmetric agreement", timesym),
    ];
    let mut all_ok = true;
    for (i, ((name, run), limit)) in criteria.iter().zip(LIMITS_SECS).enumerate() {
        let start = Instant::now();
        let result = run();
        let took = start.elapsed();
        let (ok, detail) = match result {
            Ok(o) => (o.ok, o.detail),
            Err(e) => (false, format!("error: {e}")),
        };
        let in_time = took <= Duration::from_secs(limit);
        let pass = ok && in_time;
        all_ok &= pass;
        println!(
            "criterion {:>2} {:<28} {} ({:.2}s / {limit}s) {detail}",
            i + 1,
            name,
            if pass { "PASS" } else { "FAIL" },
            took.as_secs_f64(),
        );
    }
    if all_ok {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
