//! Functions between block-partitioned finite sets, constrained by relations
//! between the blocks: `f ∈ L(τ)` iff every element of block `i` lands in a
//! block of `τ_i`.
//!
//! The enumeration oracles here realize `L(τ)` extensionally. They refuse,
//! rather than truncate, when the search space exceeds the configured cap.

use crate::error::{check_index, Error, Result};
use crate::relcat::{FiniteRelation, LabelList};
use crate::witness::Violation;

pub const DEFAULT_CAP: u128 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct PartitionedFinSet {
    blocks: Vec<(String, usize)>,
    labels: LabelList,
    block_of: Vec<usize>,
}

impl PartitionedFinSet {
    pub fn new<I, S>(blocks: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let blocks: Vec<(String, usize)> = blocks.into_iter().map(|(l, n)| (l.into(), n)).collect();
        if let Some((l, _)) = blocks.iter().find(|(_, n)| *n == 0) {
            return Err(Error::Invalid(format!("block `{l}` is empty")));
        }
        let labels = LabelList::new(blocks.iter().map(|(l, _)| l.clone()))?;
        let block_of = blocks
            .iter()
            .enumerate()
            .flat_map(|(b, (_, n))| std::iter::repeat_n(b, *n))
            .collect();
        Ok(Self {
            blocks,
            labels,
            block_of,
        })
    }

    /// Blocks named by `labels`, each holding one element.
    pub fn singletons(labels: &LabelList) -> Self {
        Self::new(labels.labels().iter().map(|l| (l.clone(), 1))).expect("distinct labels")
    }

    pub fn blocks(&self) -> &[(String, usize)] {
        &self.blocks
    }

    pub fn labels(&self) -> &LabelList {
        &self.labels
    }

    pub fn num_blocks(&self) -> usize {
        self.blocks.len()
    }

    pub fn total(&self) -> usize {
        self.block_of.len()
    }

    pub fn block_of(&self, x: usize) -> usize {
        self.block_of[x]
    }

    /// Elements of block `b`.
    pub fn elements(&self, b: usize) -> impl Iterator<Item = usize> + '_ {
        (0..self.total()).filter(move |&x| self.block_of[x] == b)
    }

    pub fn disjoint_union(&self, other: &PartitionedFinSet) -> Result<PartitionedFinSet> {
        PartitionedFinSet::new(self.blocks.iter().chain(&other.blocks).cloned())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PartitionedFunction {
    map: Vec<usize>,
    dom: PartitionedFinSet,
    cod: PartitionedFinSet,
}

impl PartialOrd for PartitionedFinSet {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PartitionedFinSet {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.blocks.cmp(&other.blocks)
    }
}

impl PartitionedFunction {
    pub fn new(dom: PartitionedFinSet, cod: PartitionedFinSet, map: Vec<usize>) -> Result<Self> {
        if map.len() != dom.total() {
            return Err(Error::ShapeMismatch(format!(
                "map has {} entries, domain has {} elements",
                map.len(),
                dom.total()
            )));
        }
        for &y in &map {
            check_index(y, cod.total())?;
        }
        Ok(Self { map, dom, cod })
    }

    pub fn identity(set: PartitionedFinSet) -> Self {
        Self {
            map: (0..set.total()).collect(),
            dom: set.clone(),
            cod: set,
        }
    }

    pub fn dom(&self) -> &PartitionedFinSet {
        &self.dom
    }

    pub fn cod(&self) -> &PartitionedFinSet {
        &self.cod
    }

    pub fn map(&self) -> &[usize] {
        &self.map
    }

    pub fn apply(&self, x: usize) -> usize {
        self.map[x]
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &PartitionedFunction) -> Result<PartitionedFunction> {
        if first.cod != self.dom {
            return Err(Error::BoundaryMismatch(format!(
                "composition: {} vs {}",
                first.cod.labels(),
                self.dom.labels()
            )));
        }
        Ok(PartitionedFunction {
            map: first.map.iter().map(|&y| self.map[y]).collect(),
            dom: first.dom.clone(),
            cod: self.cod.clone(),
        })
    }

    /// Coproduct of functions; blocks concatenate.
    pub fn tensor(&self, other: &PartitionedFunction) -> Result<PartitionedFunction> {
        let shift = self.cod.total();
        Ok(PartitionedFunction {
            map: self
                .map
                .iter()
                .copied()
                .chain(other.map.iter().map(|&y| y + shift))
                .collect(),
            dom: self.dom.disjoint_union(&other.dom)?,
            cod: self.cod.disjoint_union(&other.cod)?,
        })
    }

    /// Block-level image: `(i, j)` iff some element of block `i` lands in block `j`.
    pub fn support_relation(&self) -> FiniteRelation {
        FiniteRelation::new(
            self.dom.labels().clone(),
            self.cod.labels().clone(),
            (0..self.dom.total()).map(|x| (self.dom.block_of(x), self.cod.block_of(self.map[x]))),
        )
        .expect("in range")
    }

    fn require_boundary(&self, tau: &FiniteRelation) -> Result<()> {
        if tau.src() != self.dom.labels() || tau.dst() != self.cod.labels() {
            return Err(Error::BoundaryMismatch(format!(
                "relation {} -> {} against function {} -> {}",
                tau.src(),
                tau.dst(),
                self.dom.labels(),
                self.cod.labels()
            )));
        }
        Ok(())
    }

    pub fn funcrel_violation(&self, tau: &FiniteRelation) -> Result<Option<Violation>> {
        self.require_boundary(tau)?;
        Ok((0..self.dom.total()).find_map(|x| {
            let (i, j) = (self.dom.block_of(x), self.cod.block_of(self.map[x]));
            (!tau.contains(i, j)).then(|| Violation::Element {
                element: x,
                block: self.dom.labels().name(i),
                image_block: self.cod.labels().name(j),
            })
        }))
    }

    /// Every element of block `i` maps into a block of `τ_i`.
    pub fn check_funcrel(&self, tau: &FiniteRelation) -> Result<bool> {
        Ok(self.funcrel_violation(tau)?.is_none())
    }
}

fn function_count(dom: &PartitionedFinSet, cod: &PartitionedFinSet) -> u128 {
    (cod.total() as u128)
        .checked_pow(dom.total() as u32)
        .unwrap_or(u128::MAX)
}

fn require_under_cap(size: u128, cap: u128) -> Result<()> {
    if size > cap {
        Err(Error::Explosion { size, cap })
    } else {
        Ok(())
    }
}

/// Every function `dom → cod`, in lexicographic order of the image array.
pub fn all_functions(
    dom: &PartitionedFinSet,
    cod: &PartitionedFinSet,
    cap: u128,
) -> Result<Vec<PartitionedFunction>> {
    require_under_cap(function_count(dom, cod), cap)?;
    let (n, m) = (dom.total(), cod.total());
    if m == 0 && n > 0 {
        return Ok(Vec::new());
    }
    let mut out = Vec::new();
    let mut map = vec![0; n];
    loop {
        out.push(PartitionedFunction {
            map: map.clone(),
            dom: dom.clone(),
            cod: cod.clone(),
        });
        // Odometer increment, last position fastest.
        let mut pos = n;
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            map[pos] += 1;
            if map[pos] < m {
                break;
            }
            map[pos] = 0;
        }
    }
}

/// `L(τ)` extensionally.
pub fn enumerate_satisfying(
    dom: &PartitionedFinSet,
    cod: &PartitionedFinSet,
    tau: &FiniteRelation,
    cap: u128,
) -> Result<Vec<PartitionedFunction>> {
    let all = all_functions(dom, cod, cap)?;
    let mut out = Vec::new();
    for f in all {
        if f.check_funcrel(tau)? {
            out.push(f);
        }
    }
    Ok(out)
}

/// `{ g ∘ f | f ∈ L(τ), g ∈ L(σ) } ⊆ L(σ ∘ τ)`, by enumerating every pair.
pub fn oracle_laxity(
    a: &PartitionedFinSet,
    b: &PartitionedFinSet,
    c: &PartitionedFinSet,
    tau: &FiniteRelation,
    sigma: &FiniteRelation,
    cap: u128,
) -> Result<bool> {
    let composite = sigma.compose(tau)?;
    let fs = enumerate_satisfying(a, b, tau, cap)?;
    let gs = enumerate_satisfying(b, c, sigma, cap)?;
    require_under_cap((fs.len() as u128) * (gs.len() as u128), cap)?;
    for f in &fs {
        for g in &gs {
            if !g.compose(f)?.check_funcrel(&composite)? {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// The same containment as [`oracle_laxity`], decided without enumerating
/// pairs. `L(τ)` is a product over domain elements of the allowed images,
/// so the set `{ (g ∘ f)(x) }` is exactly the two-step reachable set from `x`
/// whenever both `L(τ)` and `L(σ)` are nonempty (and the containment is
/// vacuous otherwise). `L(σ ∘ τ)` is also a product, so containment reduces
/// to a per-element check.
pub fn oracle_laxity_boxwise(
    a: &PartitionedFinSet,
    b: &PartitionedFinSet,
    c: &PartitionedFinSet,
    tau: &FiniteRelation,
    sigma: &FiniteRelation,
) -> Result<bool> {
    require_relation(a, b, tau)?;
    require_relation(b, c, sigma)?;
    let composite = sigma.compose(tau)?;
    let nonempty = |dom: &PartitionedFinSet, r: &FiniteRelation| {
        (0..dom.total()).all(|x| !r.related_set(dom.block_of(x)).unwrap().is_empty())
    };
    if !nonempty(a, tau) || !nonempty(b, sigma) {
        return Ok(true);
    }
    for x in 0..a.total() {
        let i = a.block_of(x);
        for y in (0..b.total()).filter(|&y| tau.contains(i, b.block_of(y))) {
            let j = b.block_of(y);
            for z in (0..c.total()).filter(|&z| sigma.contains(j, c.block_of(z))) {
                if !composite.contains(i, c.block_of(z)) {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

/// `L(τ ∧ σ) = L(τ) ∩ L(σ)`, comparing the two sets of functions.
pub fn oracle_intersectability(
    dom: &PartitionedFinSet,
    cod: &PartitionedFinSet,
    tau: &FiniteRelation,
    sigma: &FiniteRelation,
    cap: u128,
) -> Result<bool> {
    let meet = tau.meet(sigma)?;
    let all = all_functions(dom, cod, cap)?;
    let mut meet_side = Vec::new();
    let mut cap_side = Vec::new();
    for f in &all {
        if f.check_funcrel(&meet)? {
            meet_side.push(f);
        }
        if f.check_funcrel(tau)? && f.check_funcrel(sigma)? {
            cap_side.push(f);
        }
    }
    Ok(meet_side == cap_side)
}

fn require_relation(
    dom: &PartitionedFinSet,
    cod: &PartitionedFinSet,
    r: &FiniteRelation,
) -> Result<()> {
    if r.src() != dom.labels() || r.dst() != cod.labels() {
        return Err(Error::BoundaryMismatch(format!(
            "relation {} -> {} against sets {} -> {}",
            r.src(),
            r.dst(),
            dom.labels(),
            cod.labels()
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ps(b: &[(&str, usize)]) -> PartitionedFinSet {
        PartitionedFinSet::new(b.iter().copied()).unwrap()
    }

    fn rel(d: &PartitionedFinSet, c: &PartitionedFinSet, p: &[(usize, usize)]) -> FiniteRelation {
        FiniteRelation::new(d.labels().clone(), c.labels().clone(), p.iter().copied()).unwrap()
    }

    #[test]
    fn identity_satisfies_identity() {
        let s = ps(&[("a", 2), ("b", 1)]);
        let id = PartitionedFunction::identity(s.clone());
        assert!(id
            .check_funcrel(&FiniteRelation::identity(s.labels().clone()))
            .unwrap());
    }

    #[test]
    fn singleton_blocks_follow_the_relation() {
        // f(x_i) = y_{π(i)} satisfies τ iff every (i, π(i)) ∈ τ.
        let x = ps(&[("x1", 1), ("x2", 1)]);
        let y = ps(&[("y1", 1), ("y2", 1)]);
        let tau = rel(&x, &y, &[(0, 1), (1, 1)]);
        for (map, ok) in [(vec![1, 1], true), (vec![0, 1], false), (vec![1, 0], false)] {
            let f = PartitionedFunction::new(x.clone(), y.clone(), map).unwrap();
            assert_eq!(f.check_funcrel(&tau).unwrap(), ok);
        }
    }

    #[test]
    fn split_block_fails_narrow_relation() {
        let x = ps(&[("x", 2)]);
        let y = ps(&[("y1", 1), ("y2", 1)]);
        let f = PartitionedFunction::new(x.clone(), y.clone(), vec![0, 1]).unwrap();
        assert!(!f.check_funcrel(&rel(&x, &y, &[(0, 0)])).unwrap());
        assert!(f.check_funcrel(&rel(&x, &y, &[(0, 0), (0, 1)])).unwrap());
        let v = f
            .funcrel_violation(&rel(&x, &y, &[(0, 0)]))
            .unwrap()
            .unwrap();
        assert_eq!(v.to_string(), "element 1 of block x is sent into block y2");
    }

    #[test]
    fn enumeration_counts() {
        let x = ps(&[("a", 2), ("b", 1)]);
        let y = ps(&[("c", 1), ("d", 2)]);
        let full = FiniteRelation::full(x.labels().clone(), y.labels().clone());
        assert_eq!(
            enumerate_satisfying(&x, &y, &full, DEFAULT_CAP)
                .unwrap()
                .len(),
            27
        );
        let empty = FiniteRelation::empty(x.labels().clone(), y.labels().clone());
        assert!(enumerate_satisfying(&x, &y, &empty, DEFAULT_CAP)
            .unwrap()
            .is_empty());
        let s2 = ps(&[("p", 1), ("q", 1)]);
        let t2 = ps(&[("r", 1), ("s", 1)]);
        let id_like = rel(&s2, &t2, &[(0, 0), (1, 1)]);
        let sat = enumerate_satisfying(&s2, &t2, &id_like, DEFAULT_CAP).unwrap();
        assert_eq!(sat.len(), 1);
        assert_eq!(sat[0].map(), &[0, 1]);
    }

    #[test]
    fn enumeration_is_lexicographic() {
        let x = ps(&[("a", 2)]);
        let y = ps(&[("b", 2)]);
        let maps: Vec<Vec<usize>> = all_functions(&x, &y, DEFAULT_CAP)
            .unwrap()
            .into_iter()
            .map(|f| f.map().to_vec())
            .collect();
        assert_eq!(maps, vec![vec![0, 0], vec![0, 1], vec![1, 0], vec![1, 1]]);
    }

    #[test]
    fn cap_is_a_hard_error() {
        let x = ps(&[("a", 5)]);
        let y = ps(&[("b", 5)]);
        let full = FiniteRelation::full(x.labels().clone(), y.labels().clone());
        assert_eq!(
            enumerate_satisfying(&x, &y, &full, 1000).unwrap_err(),
            Error::Explosion {
                size: 3125,
                cap: 1000
            }
        );
    }

    #[test]
    fn oracle_edge_cases() {
        let a = ps(&[("a", 2)]);
        let b = ps(&[("b1", 1), ("b2", 1)]);
        let id = FiniteRelation::identity(b.labels().clone());
        let full = FiniteRelation::full(a.labels().clone(), b.labels().clone());
        let empty = FiniteRelation::empty(a.labels().clone(), b.labels().clone());
        assert!(oracle_laxity(&a, &b, &b, &full, &id, DEFAULT_CAP).unwrap());
        assert!(oracle_laxity(&a, &b, &b, &empty, &id, DEFAULT_CAP).unwrap());
        assert!(oracle_laxity(&b, &b, &b, &id, &id, DEFAULT_CAP).unwrap());
        assert!(oracle_intersectability(&a, &b, &full, &full, DEFAULT_CAP).unwrap());
        assert!(oracle_intersectability(&a, &b, &full, &empty, DEFAULT_CAP).unwrap());
    }

    #[test]
    fn compose_and_tensor() {
        let a = ps(&[("a", 2)]);
        let b = ps(&[("b", 3)]);
        let f = PartitionedFunction::new(a.clone(), b.clone(), vec![2, 0]).unwrap();
        let g = PartitionedFunction::new(b.clone(), a.clone(), vec![1, 1, 0]).unwrap();
        assert_eq!(g.compose(&f).unwrap().map(), &[0, 1]);
        assert!(f.compose(&f).is_err());
        let t = f.tensor(&g).unwrap();
        assert_eq!(t.map(), &[2, 0, 4, 4, 3]);
        assert_eq!(t.dom().labels().labels(), &["a", "b"]);
    }
}
