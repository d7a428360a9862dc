//! Relational constraints on a finite monoid.
//!
//! Given a labelling `f: S → M` and an endorelation `τ` on `S`, an element
//! `m` is allowed when for every `x ~ y` in `τ` some `m'` has
//! `f(y)·m = m'·f(x)`. Products are written left to right: `table[a][b]` is `a·b`.

use std::collections::BTreeSet;

use crate::error::{check_index, Error, Result};
use crate::relcat::{FiniteRelation, LabelList};
use crate::witness::Violation;

pub type Element = usize;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteMonoid {
    size: usize,
    table: Vec<Element>,
    identity: Element,
}

impl FiniteMonoid {
    /// Checks ranges, the identity laws and associativity (exhaustively).
    pub fn new(size: usize, table: Vec<Element>, identity: Element) -> Result<Self> {
        if size == 0 {
            return Err(Error::Invalid("a monoid has at least one element".into()));
        }
        if table.len() != size * size {
            return Err(Error::ShapeMismatch(format!(
                "table has {} entries, expected {}",
                table.len(),
                size * size
            )));
        }
        check_index(identity, size)?;
        for &v in &table {
            check_index(v, size)?;
        }
        let m = Self {
            size,
            table,
            identity,
        };
        for a in 0..size {
            if m.mul(identity, a) != a || m.mul(a, identity) != a {
                return Err(Error::Invalid(format!(
                    "{identity} is not an identity for {a}"
                )));
            }
        }
        if let Some((a, b, c)) = m.associativity_failure() {
            return Err(Error::Invalid(format!("({a}*{b})*{c} != {a}*({b}*{c})")));
        }
        Ok(m)
    }

    fn associativity_failure(&self) -> Option<(Element, Element, Element)> {
        let n = self.size;
        for a in 0..n {
            for b in 0..n {
                let ab = self.mul(a, b);
                for c in 0..n {
                    if self.mul(ab, c) != self.mul(a, self.mul(b, c)) {
                        return Some((a, b, c));
                    }
                }
            }
        }
        None
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn identity(&self) -> Element {
        self.identity
    }

    pub fn table(&self) -> &[Element] {
        &self.table
    }

    pub fn mul(&self, a: Element, b: Element) -> Element {
        self.table[a * self.size + b]
    }

    pub fn is_group(&self) -> bool {
        (0..self.size).all(|a| (0..self.size).any(|b| self.mul(a, b) == self.identity))
    }

    /// Is there an `m'` with `m'·x = target`?
    fn left_divides(&self, target: Element, x: Element) -> bool {
        (0..self.size).any(|mp| self.mul(mp, x) == target)
    }

    /// Every monoid on `{0, .., n-1}` with identity `0`, as labelled tables.
    pub fn all_of_order(n: usize) -> Vec<FiniteMonoid> {
        if n == 0 {
            return Vec::new();
        }
        let free = (n - 1) * (n - 1);
        let count = n.pow(free as u32);
        let mut out = Vec::new();
        let mut table = vec![0; n * n];
        for a in 0..n {
            table[a] = a;
            table[a * n] = a;
        }
        for code in 0..count {
            let mut c = code;
            for a in 1..n {
                for b in 1..n {
                    table[a * n + b] = c % n;
                    c /= n;
                }
            }
            let m = FiniteMonoid {
                size: n,
                table: table.clone(),
                identity: 0,
            };
            if m.associativity_failure().is_none() {
                out.push(m);
            }
        }
        out
    }
}

/// The function `f: S → M`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct MonoidLabeling {
    set: LabelList,
    assignment: Vec<Element>,
}

impl MonoidLabeling {
    pub fn new(set: LabelList, assignment: Vec<Element>, monoid: &FiniteMonoid) -> Result<Self> {
        if assignment.len() != set.len() {
            return Err(Error::ShapeMismatch(format!(
                "{} labels but {} assignments",
                set.len(),
                assignment.len()
            )));
        }
        for &e in &assignment {
            check_index(e, monoid.size())?;
        }
        Ok(Self { set, assignment })
    }

    pub fn set(&self) -> &LabelList {
        &self.set
    }

    pub fn assignment(&self) -> &[Element] {
        &self.assignment
    }

    pub fn apply(&self, x: usize) -> Element {
        self.assignment[x]
    }
}

fn require_endo(tau: &FiniteRelation, lab: &MonoidLabeling) -> Result<()> {
    if tau.src() != lab.set() || tau.dst() != lab.set() {
        return Err(Error::BoundaryMismatch(format!(
            "relation {} -> {} is not an endorelation on {}",
            tau.src(),
            tau.dst(),
            lab.set()
        )));
    }
    Ok(())
}

impl FiniteMonoid {
    pub fn monoid_violation(
        &self,
        m: Element,
        tau: &FiniteRelation,
        lab: &MonoidLabeling,
    ) -> Result<Option<Violation>> {
        require_endo(tau, lab)?;
        check_index(m, self.size)?;
        Ok(tau.pairs().find_map(|(x, y)| {
            let target = self.mul(lab.apply(y), m);
            (!self.left_divides(target, lab.apply(x))).then(|| Violation::Monoid {
                x: lab.set().name(x),
                y: lab.set().name(y),
                element: m,
            })
        }))
    }

    /// For every `x ~ y`: some `m'` has `f(y)·m = m'·f(x)`.
    pub fn check_monoid_constraint(
        &self,
        m: Element,
        tau: &FiniteRelation,
        lab: &MonoidLabeling,
    ) -> Result<bool> {
        Ok(self.monoid_violation(m, tau, lab)?.is_none())
    }

    /// `L(τ)`, by sweeping all elements.
    pub fn constraint_set(
        &self,
        tau: &FiniteRelation,
        lab: &MonoidLabeling,
    ) -> Result<BTreeSet<Element>> {
        let mut out = BTreeSet::new();
        for m in 0..self.size {
            if self.check_monoid_constraint(m, tau, lab)? {
                out.insert(m);
            }
        }
        Ok(out)
    }
}
