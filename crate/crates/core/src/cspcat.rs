//! Set-based constraint satisfaction problems as morphisms.
//!
//! A problem `V → D` is a set of constraints `(k, x ∈ V^k, ρ ⊆ D^k)`; a
//! function `f: V → D` solves it when `(f(x_1), .., f(x_k)) ∈ ρ` for each.
//! Problems compose by
//!
//! ```text
//! (k, a, σ) ∈ C2 ∘ C1  ⇔  ∃ (k, a, ρ) ∈ C1. ∀ m ∈ ρ. (k, m, σ) ∈ C2
//! ```
//!
//! where `σ` ranges over the allowed sets listed in `C2`. Only constraints of
//! equal arity interact; mismatched pairs are counted, not composed.

use std::collections::{BTreeMap, BTreeSet};

use crate::error::{check_index, Error, Result};
use crate::witness::Violation;

pub type Tuple = Vec<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CspConstraint {
    scope: Tuple,
    allowed: BTreeSet<Tuple>,
}

impl CspConstraint {
    pub fn new(scope: Tuple, allowed: impl IntoIterator<Item = Tuple>) -> Result<Self> {
        if scope.is_empty() {
            return Err(Error::Invalid("constraint arity must be at least 1".into()));
        }
        let allowed: BTreeSet<Tuple> = allowed.into_iter().collect();
        if let Some(t) = allowed.iter().find(|t| t.len() != scope.len()) {
            return Err(Error::Invalid(format!(
                "allowed tuple {t:?} does not have arity {}",
                scope.len()
            )));
        }
        Ok(Self { scope, allowed })
    }

    pub fn arity(&self) -> usize {
        self.scope.len()
    }

    pub fn scope(&self) -> &[usize] {
        &self.scope
    }

    pub fn allowed(&self) -> &BTreeSet<Tuple> {
        &self.allowed
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct CspProblem {
    dom: usize,
    cod: usize,
    constraints: BTreeSet<CspConstraint>,
}

impl CspProblem {
    pub fn new(
        dom: usize,
        cod: usize,
        constraints: impl IntoIterator<Item = CspConstraint>,
    ) -> Result<Self> {
        let constraints: BTreeSet<_> = constraints.into_iter().collect();
        for c in &constraints {
            for &x in c.scope() {
                check_index(x, dom)?;
            }
            for t in c.allowed() {
                for &v in t {
                    check_index(v, cod)?;
                }
            }
        }
        Ok(Self {
            dom,
            cod,
            constraints,
        })
    }

    pub fn empty(dom: usize, cod: usize) -> Self {
        Self {
            dom,
            cod,
            constraints: BTreeSet::new(),
        }
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn constraints(&self) -> &BTreeSet<CspConstraint> {
        &self.constraints
    }

    pub fn len(&self) -> usize {
        self.constraints.len()
    }

    pub fn is_empty(&self) -> bool {
        self.constraints.is_empty()
    }

    /// Every listed constraint of `weaker` is also listed here, so every
    /// solution of `self` solves `weaker`.
    pub fn leq(&self, weaker: &CspProblem) -> Result<bool> {
        if (self.dom, self.cod) != (weaker.dom, weaker.cod) {
            return Err(Error::BoundaryMismatch(format!(
                "problems {} -> {} and {} -> {}",
                self.dom, self.cod, weaker.dom, weaker.cod
            )));
        }
        Ok(weaker.constraints.is_subset(&self.constraints))
    }

    pub fn violation(&self, f: &FinFunction) -> Result<Option<Violation>> {
        if f.dom != self.dom || f.cod != self.cod {
            return Err(Error::BoundaryMismatch(format!(
                "function {} -> {} against problem {} -> {}",
                f.dom, f.cod, self.dom, self.cod
            )));
        }
        Ok(self.constraints.iter().enumerate().find_map(|(index, c)| {
            let image: Tuple = c.scope().iter().map(|&x| f.apply(x)).collect();
            (!c.allowed().contains(&image)).then_some(Violation::Csp { index })
        }))
    }

    pub fn satisfies(&self, f: &FinFunction) -> Result<bool> {
        Ok(self.violation(f)?.is_none())
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &CspProblem) -> Result<CspProblem> {
        Ok(self.compose_report(first)?.0)
    }

    /// `self ∘ first`, plus the number of constraint pairs skipped because
    /// their arities differ.
    pub fn compose_report(&self, first: &CspProblem) -> Result<(CspProblem, usize)> {
        if first.cod != self.dom {
            return Err(Error::BoundaryMismatch(format!(
                "composition: {} vs {}",
                first.cod, self.dom
            )));
        }
        let mut bodies: BTreeMap<usize, BTreeSet<&BTreeSet<Tuple>>> = BTreeMap::new();
        for c in &self.constraints {
            bodies.entry(c.arity()).or_default().insert(c.allowed());
        }
        let mut out = BTreeSet::new();
        let mut skipped = 0;
        for c1 in &first.constraints {
            skipped += self
                .constraints
                .iter()
                .filter(|c2| c2.arity() != c1.arity())
                .count();
            let Some(candidates) = bodies.get(&c1.arity()) else {
                continue;
            };
            for &sigma in candidates {
                let covered = c1.allowed().iter().all(|m| {
                    self.constraints
                        .iter()
                        .any(|c2| c2.scope() == m.as_slice() && c2.allowed() == sigma)
                });
                if covered {
                    out.insert(CspConstraint {
                        scope: c1.scope.clone(),
                        allowed: sigma.clone(),
                    });
                }
            }
        }
        Ok((
            CspProblem {
                dom: first.dom,
                cod: self.cod,
                constraints: out,
            },
            skipped,
        ))
    }
}

/// A total function `{0..dom} → {0..cod}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FinFunction {
    dom: usize,
    cod: usize,
    map: Vec<usize>,
}

impl FinFunction {
    pub fn new(cod: usize, map: Vec<usize>) -> Result<Self> {
        for &y in &map {
            check_index(y, cod)?;
        }
        Ok(Self {
            dom: map.len(),
            cod,
            map,
        })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            dom: n,
            cod: n,
            map: (0..n).collect(),
        }
    }

    pub fn dom(&self) -> usize {
        self.dom
    }

    pub fn cod(&self) -> usize {
        self.cod
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &FinFunction) -> Result<FinFunction> {
        if first.cod != self.dom {
            return Err(Error::BoundaryMismatch(format!(
                "composition: {} vs {}",
                first.cod, self.dom
            )));
        }
        Ok(FinFunction {
            dom: first.dom,
            cod: self.cod,
            map: first.map.iter().map(|&y| self.map[y]).collect(),
        })
    }

    /// All `cod^dom` functions, lexicographic.
    pub fn all(dom: usize, cod: usize) -> Vec<FinFunction> {
        let count = cod.pow(dom as u32);
        (0..count)
            .map(|mut code| {
                let mut map = vec![0; dom];
                for slot in map.iter_mut().rev() {
                    *slot = code % cod;
                    code /= cod;
                }
                FinFunction { dom, cod, map }
            })
            .collect()
    }
}

/// All tuples in `{0..n}^k`, lexicographic.
pub fn all_tuples(n: usize, k: usize) -> Vec<Tuple> {
    FinFunction::all(k, n).into_iter().map(|f| f.map).collect()
}

/// Every constraint `V → D` with arity in `1..=max_arity`.
pub fn all_constraints(dom: usize, cod: usize, max_arity: usize) -> Vec<CspConstraint> {
    let mut out = Vec::new();
    for k in 1..=max_arity {
        let tuples = all_tuples(cod, k);
        assert!(tuples.len() < 20, "allowed-set universe too large");
        for scope in all_tuples(dom, k) {
            for mask in 0u32..1 << tuples.len() {
                let allowed = tuples
                    .iter()
                    .enumerate()
                    .filter(|(b, _)| mask >> b & 1 == 1)
                    .map(|(_, t)| t.clone())
                    .collect();
                out.push(CspConstraint {
                    scope: scope.clone(),
                    allowed,
                });
            }
        }
    }
    out
}

/// Every problem built from at most `max_constraints` distinct members of `universe`.
pub fn all_problems(
    dom: usize,
    cod: usize,
    universe: &[CspConstraint],
    max_constraints: usize,
) -> Vec<CspProblem> {
    let mut out = vec![CspProblem::empty(dom, cod)];
    let mut frontier: Vec<(usize, BTreeSet<CspConstraint>)> = vec![(0, BTreeSet::new())];
    for _ in 0..max_constraints {
        let mut next = Vec::new();
        for (start, set) in &frontier {
            for (i, c) in universe.iter().enumerate().skip(*start) {
                let mut s = set.clone();
                s.insert(c.clone());
                out.push(CspProblem {
                    dom,
                    cod,
                    constraints: s.clone(),
                });
                next.push((i + 1, s));
            }
        }
        frontier = next;
    }
    out
}
