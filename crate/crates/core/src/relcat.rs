//! The category of finite relations between label lists.
//!
//! This is the constraint category used throughout the crate. Objects are
//! ordered lists of distinct labels and morphisms are relations between the
//! index sets of two lists. Boundaries are matched by labels (names *and*
//! order), never by cardinality alone.
//!
//! Two monoidal structures are provided and callers choose between them:
//!
//! * [`FiniteRelation::tensor_disjoint`] concatenates label lists (unit: the
//!   empty list). This is the structure used by signalling constraints and
//!   function constraints.
//! * [`FiniteRelation::tensor_product`] takes cartesian products of label
//!   lists (unit: [`LabelList::unit`], the list holding one empty label).
//!   Indices are flattened row-major with the first factor most significant,
//!   and the pair `(a, b)` is labelled `a*b`. The empty label is dropped when
//!   joining, which makes the unit strict and keeps associativity strict on
//!   labels.

use std::collections::BTreeSet;
use std::fmt;

use crate::error::{check_index, Error, Result};

/// Separator used for product labels.
pub const PRODUCT_SEPARATOR: char = '*';

#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct LabelList(Vec<String>);

impl LabelList {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        let mut seen = BTreeSet::new();
        for l in &labels {
            if !seen.insert(l.as_str()) {
                return Err(Error::LabelCollision(l.clone()));
            }
        }
        Ok(Self(labels))
    }

    /// The empty list, unit of [`FiniteRelation::tensor_disjoint`].
    pub fn empty() -> Self {
        Self(Vec::new())
    }

    /// The single-element list `[""]`, unit of [`FiniteRelation::tensor_product`].
    pub fn unit() -> Self {
        Self(vec![String::new()])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.0
    }

    pub fn get(&self, i: usize) -> Option<&str> {
        self.0.get(i).map(String::as_str)
    }

    pub fn position(&self, label: &str) -> Option<usize> {
        self.0.iter().position(|l| l == label)
    }

    pub fn concat(&self, other: &LabelList) -> Result<LabelList> {
        LabelList::new(self.0.iter().chain(other.0.iter()).cloned())
    }

    pub fn product(&self, other: &LabelList) -> Result<LabelList> {
        let mut out = Vec::with_capacity(self.len() * other.len());
        for a in &self.0 {
            for b in &other.0 {
                out.push(product_label(a, b));
            }
        }
        LabelList::new(out)
    }

    /// Display name of index `i`, for messages.
    pub(crate) fn name(&self, i: usize) -> String {
        match self.0.get(i) {
            Some(l) if l.is_empty() => "I".to_string(),
            Some(l) => l.clone(),
            None => format!("#{i}"),
        }
    }
}

pub fn product_label(a: &str, b: &str) -> String {
    match (a.is_empty(), b.is_empty()) {
        (true, _) => b.to_string(),
        (_, true) => a.to_string(),
        _ => format!("{a}{PRODUCT_SEPARATOR}{b}"),
    }
}

impl fmt::Display for LabelList {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}]", self.0.join(", "))
    }
}

/// A relation between two label lists, stored as a canonically ordered set
/// of `(src index, dst index)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct FiniteRelation {
    src: LabelList,
    dst: LabelList,
    pairs: BTreeSet<(usize, usize)>,
}

fn require_same(what: &str, a: &LabelList, b: &LabelList) -> Result<()> {
    if a == b {
        Ok(())
    } else {
        Err(Error::BoundaryMismatch(format!("{what}: {a} vs {b}")))
    }
}

impl FiniteRelation {
    pub fn new<I>(src: LabelList, dst: LabelList, pairs: I) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let pairs: BTreeSet<_> = pairs.into_iter().collect();
        for &(i, j) in &pairs {
            check_index(i, src.len())?;
            check_index(j, dst.len())?;
        }
        Ok(Self { src, dst, pairs })
    }

    pub fn empty(src: LabelList, dst: LabelList) -> Self {
        Self {
            src,
            dst,
            pairs: BTreeSet::new(),
        }
    }

    pub fn full(src: LabelList, dst: LabelList) -> Self {
        let pairs = (0..src.len())
            .flat_map(|i| (0..dst.len()).map(move |j| (i, j)))
            .collect();
        Self { src, dst, pairs }
    }

    pub fn identity(obj: LabelList) -> Self {
        let pairs = (0..obj.len()).map(|i| (i, i)).collect();
        Self {
            src: obj.clone(),
            dst: obj,
            pairs,
        }
    }

    /// Builds a relation from a boolean matrix with one row per source index.
    pub fn from_bool_matrix(src: LabelList, dst: LabelList, m: &[Vec<bool>]) -> Result<Self> {
        if m.len() != src.len() || m.iter().any(|row| row.len() != dst.len()) {
            return Err(Error::ShapeMismatch(format!(
                "boolean matrix does not have shape {}x{}",
                src.len(),
                dst.len()
            )));
        }
        let pairs = m.iter().enumerate().flat_map(|(i, row)| {
            row.iter()
                .enumerate()
                .filter(|(_, &b)| b)
                .map(move |(j, _)| (i, j))
        });
        Self::new(src, dst, pairs)
    }

    pub fn src(&self) -> &LabelList {
        &self.src
    }

    pub fn dst(&self) -> &LabelList {
        &self.dst
    }

    pub fn pairs(&self) -> impl ExactSizeIterator<Item = (usize, usize)> + '_ {
        self.pairs.iter().copied()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn contains(&self, i: usize, j: usize) -> bool {
        self.pairs.contains(&(i, j))
    }

    pub fn to_bool_matrix(&self) -> Vec<Vec<bool>> {
        let mut m = vec![vec![false; self.dst.len()]; self.src.len()];
        for &(i, j) in &self.pairs {
            m[i][j] = true;
        }
        m
    }

    /// Same pairs, new boundary labels of the same sizes.
    pub fn relabel(&self, src: LabelList, dst: LabelList) -> Result<Self> {
        if src.len() != self.src.len() || dst.len() != self.dst.len() {
            return Err(Error::ShapeMismatch(
                "relabelling must preserve list lengths".into(),
            ));
        }
        Ok(Self {
            src,
            dst,
            pairs: self.pairs.clone(),
        })
    }

    /// `self ∘ first`: relates `i` to `k` when some `j` has `i ~ j` in `first`
    /// and `j ~ k` in `self`.
    pub fn compose(&self, first: &FiniteRelation) -> Result<FiniteRelation> {
        require_same("composition", &first.dst, &self.src)?;
        let a = first.to_bool_matrix();
        let b = self.to_bool_matrix();
        let mut pairs = BTreeSet::new();
        for (i, row) in a.iter().enumerate() {
            for k in 0..self.dst.len() {
                if row.iter().zip(&b).any(|(&ij, jrow)| ij && jrow[k]) {
                    pairs.insert((i, k));
                }
            }
        }
        Ok(FiniteRelation {
            src: first.src.clone(),
            dst: self.dst.clone(),
            pairs,
        })
    }

    /// The relational converse (dagger).
    pub fn converse(&self) -> FiniteRelation {
        FiniteRelation {
            src: self.dst.clone(),
            dst: self.src.clone(),
            pairs: self.pairs.iter().map(|&(i, j)| (j, i)).collect(),
        }
    }

    /// Disjoint-union tensor: concatenated boundaries, `other` shifted past `self`.
    pub fn tensor_disjoint(&self, other: &FiniteRelation) -> Result<FiniteRelation> {
        let src = self.src.concat(&other.src)?;
        let dst = self.dst.concat(&other.dst)?;
        let (di, dj) = (self.src.len(), self.dst.len());
        let pairs = self
            .pairs
            .iter()
            .copied()
            .chain(other.pairs.iter().map(|&(i, j)| (i + di, j + dj)))
            .collect();
        Ok(FiniteRelation { src, dst, pairs })
    }

    /// Cartesian-product tensor, flattened row-major.
    pub fn tensor_product(&self, other: &FiniteRelation) -> Result<FiniteRelation> {
        let src = self.src.product(&other.src)?;
        let dst = self.dst.product(&other.dst)?;
        let (ns, nd) = (other.src.len(), other.dst.len());
        let mut pairs = BTreeSet::new();
        for &(i, j) in &self.pairs {
            for &(k, l) in &other.pairs {
                pairs.insert((i * ns + k, j * nd + l));
            }
        }
        Ok(FiniteRelation { src, dst, pairs })
    }

    pub fn meet(&self, other: &FiniteRelation) -> Result<FiniteRelation> {
        self.same_boundary(other)?;
        Ok(FiniteRelation {
            src: self.src.clone(),
            dst: self.dst.clone(),
            pairs: self.pairs.intersection(&other.pairs).copied().collect(),
        })
    }

    pub fn join(&self, other: &FiniteRelation) -> Result<FiniteRelation> {
        self.same_boundary(other)?;
        Ok(FiniteRelation {
            src: self.src.clone(),
            dst: self.dst.clone(),
            pairs: self.pairs.union(&other.pairs).copied().collect(),
        })
    }

    /// The 2-cell order: inclusion of pair sets.
    pub fn leq(&self, other: &FiniteRelation) -> Result<bool> {
        self.same_boundary(other)?;
        Ok(self.pairs.is_subset(&other.pairs))
    }

    pub fn same_boundary(&self, other: &FiniteRelation) -> Result<()> {
        require_same("source", &self.src, &other.src)?;
        require_same("target", &self.dst, &other.dst)
    }

    /// `τ_i`, the targets related to `i`.
    pub fn related_set(&self, i: usize) -> Result<BTreeSet<usize>> {
        check_index(i, self.src.len())?;
        Ok(self
            .pairs
            .range((i, 0)..(i + 1, 0))
            .map(|&(_, j)| j)
            .collect())
    }

    /// `{ i | τ_i ⊆ targets }`.
    pub fn pre_image(&self, targets: &BTreeSet<usize>) -> Result<BTreeSet<usize>> {
        for &j in targets {
            check_index(j, self.dst.len())?;
        }
        Ok((0..self.src.len())
            .filter(|&i| {
                self.pairs
                    .range((i, 0)..(i + 1, 0))
                    .all(|(_, j)| targets.contains(j))
            })
            .collect())
    }

    /// The sources related to `j` (`τ†_j`).
    pub fn sources_of(&self, j: usize) -> Result<BTreeSet<usize>> {
        check_index(j, self.dst.len())?;
        Ok(self
            .pairs
            .iter()
            .filter(|&&(_, jj)| jj == j)
            .map(|&(i, _)| i)
            .collect())
    }

    /// The full relation minus one pair, for every pair in lexicographic order.
    pub fn meet_generators(src: &LabelList, dst: &LabelList) -> Vec<FiniteRelation> {
        let full = FiniteRelation::full(src.clone(), dst.clone());
        full.pairs
            .iter()
            .map(|p| {
                let mut g = full.clone();
                g.pairs.remove(p);
                g
            })
            .collect()
    }

    /// Meet of the generators that omit a pair absent from `self`; equals `self`.
    pub fn from_generators(&self) -> FiniteRelation {
        let full = FiniteRelation::full(self.src.clone(), self.dst.clone());
        let pairs = full.pairs.iter().filter(|p| !self.pairs.contains(p)).fold(
            full.pairs.clone(),
            |acc, omitted| {
                // The generator for `omitted`, met with the running result.
                let mut g = full.pairs.clone();
                g.remove(omitted);
                acc.intersection(&g).copied().collect()
            },
        );
        FiniteRelation { pairs, ..full }
    }

    /// Every relation `src → dst`, ordered by [`FiniteRelation::mask`].
    ///
    /// Panics if `src.len() * dst.len() > 20`.
    pub fn all_relations(src: &LabelList, dst: &LabelList) -> Vec<FiniteRelation> {
        let bits = src.len() * dst.len();
        assert!(bits <= 20, "too many relations to enumerate");
        (0u64..1 << bits)
            .map(|mask| Self::from_mask(src.clone(), dst.clone(), mask))
            .collect()
    }

    /// Bit `i * dst.len() + j` is set iff `(i, j)` is a pair. Needs at most 64 pairs.
    pub fn mask(&self) -> u64 {
        assert!(self.src.len() * self.dst.len() <= 64);
        self.pairs
            .iter()
            .fold(0, |m, &(i, j)| m | 1 << (i * self.dst.len() + j))
    }

    pub fn from_mask(src: LabelList, dst: LabelList, mask: u64) -> FiniteRelation {
        let m = dst.len();
        let pairs = (0..src.len() * m)
            .filter(|b| mask >> b & 1 == 1)
            .map(|b| (b / m, b % m))
            .collect();
        FiniteRelation { src, dst, pairs }
    }

    /// `[unit] → A × A`, relating the unit to every diagonal pair `(a, a)`.
    pub fn cup(a: &LabelList) -> Result<FiniteRelation> {
        let n = a.len();
        FiniteRelation::new(
            LabelList::unit(),
            a.product(a)?,
            (0..n).map(|i| (0, i * n + i)),
        )
    }

    /// `A × A → [unit]`, the converse of [`FiniteRelation::cup`].
    pub fn cap(a: &LabelList) -> Result<FiniteRelation> {
        Ok(Self::cup(a)?.converse())
    }
}

impl fmt::Display for FiniteRelation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let arrows: Vec<String> = self
            .pairs
            .iter()
            .map(|&(i, j)| format!("{}->{}", self.src.name(i), self.dst.name(j)))
            .collect();
        write!(f, "{} -> {} {{{}}}", self.src, self.dst, arrows.join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ll(v: &[&str]) -> LabelList {
        LabelList::new(v.iter().copied()).unwrap()
    }

    fn rel(src: &[&str], dst: &[&str], pairs: &[(usize, usize)]) -> FiniteRelation {
        FiniteRelation::new(ll(src), ll(dst), pairs.iter().copied()).unwrap()
    }

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn label_lists_reject_duplicates() {
        assert_eq!(
            LabelList::new(["a", "b", "a"]),
            Err(Error::LabelCollision("a".into()))
        );
    }

    #[test]
    fn compose_worked_example() {
        // Oracle: enumerate every path i -> j -> k by hand.
        // τ = {(1,1),(1,2),(2,2)}, σ = {(1,1),(2,3)}; paths 1->1->1, 1->2->3, 2->2->3.
        let tau = rel(&["a1", "a2"], &["b1", "b2"], &[(0, 0), (0, 1), (1, 1)]);
        let sigma = rel(&["b1", "b2"], &["c1", "c2", "c3"], &[(0, 0), (1, 2)]);
        let got = sigma.compose(&tau).unwrap();
        assert_eq!(
            got,
            rel(
                &["a1", "a2"],
                &["c1", "c2", "c3"],
                &[(0, 0), (0, 2), (1, 2)]
            )
        );
    }

    #[test]
    fn compose_identity_and_empty() {
        let tau = rel(&["a", "b"], &["x"], &[(1, 0)]);
        let id = FiniteRelation::identity(ll(&["x"]));
        assert_eq!(id.compose(&tau).unwrap(), tau);
        let empty = FiniteRelation::empty(ll(&["x"]), ll(&["y", "z"]));
        assert!(empty.compose(&tau).unwrap().is_empty());
    }

    #[test]
    fn compose_checks_labels_not_sizes() {
        let tau = rel(&["a"], &["b"], &[(0, 0)]);
        let sigma = rel(&["c"], &["d"], &[(0, 0)]);
        assert!(matches!(
            sigma.compose(&tau),
            Err(Error::BoundaryMismatch(_))
        ));
    }

    #[test]
    fn converse_flips() {
        let tau = rel(&["a"], &["b1", "b2"], &[(0, 1)]);
        assert_eq!(tau.converse(), rel(&["b1", "b2"], &["a"], &[(1, 0)]));
        let id = FiniteRelation::identity(ll(&["p", "q"]));
        assert_eq!(id.converse(), id);
    }

    #[test]
    fn tensor_disjoint_shifts_indices() {
        let a = rel(&["a"], &["b"], &[(0, 0)]);
        let c = rel(&["c"], &["d1", "d2"], &[(0, 1)]);
        assert_eq!(
            a.tensor_disjoint(&c).unwrap(),
            rel(&["a", "c"], &["b", "d1", "d2"], &[(0, 0), (1, 2)])
        );
        let unit = FiniteRelation::empty(LabelList::empty(), LabelList::empty());
        assert_eq!(a.tensor_disjoint(&unit).unwrap(), a);
        assert!(matches!(
            a.tensor_disjoint(&a),
            Err(Error::LabelCollision(_))
        ));
    }

    #[test]
    fn tensor_product_row_major() {
        // {(1,1),(1,2)} × {(2,1)}: product pairs ((1,2),(1,1)) and ((1,2),(2,1)).
        // With factor sizes 1x2 and 2x1, (i,k) -> i*2+k and (j,l) -> j*1+l.
        let t = rel(&["a"], &["b1", "b2"], &[(0, 0), (0, 1)]);
        let s = rel(&["c1", "c2"], &["d"], &[(1, 0)]);
        let p = t.tensor_product(&s).unwrap();
        assert_eq!(p.src().labels(), &["a*c1", "a*c2"]);
        assert_eq!(p.dst().labels(), &["b1*d", "b2*d"]);
        assert_eq!(p.pairs().collect::<Vec<_>>(), vec![(1, 0), (1, 1)]);
    }

    #[test]
    fn tensor_product_unit_is_strict() {
        let t = rel(&["a", "b"], &["c"], &[(1, 0)]);
        let unit = FiniteRelation::identity(LabelList::unit());
        assert_eq!(t.tensor_product(&unit).unwrap(), t);
        assert_eq!(unit.tensor_product(&t).unwrap(), t);
        let id = FiniteRelation::identity(ll(&["x", "y"]));
        let id2 = FiniteRelation::identity(ll(&["u", "v"]));
        assert_eq!(
            id.tensor_product(&id2).unwrap(),
            FiniteRelation::identity(ll(&["x*u", "x*v", "y*u", "y*v"]))
        );
    }

    #[test]
    fn meet_and_leq() {
        let src = ll(&["A"]);
        let dst = ll(&["B1", "B2"]);
        let full = FiniteRelation::full(src.clone(), dst.clone());
        let sigma1 = rel(&["A"], &["B1", "B2"], &[(0, 1)]);
        let sigma2 = rel(&["A"], &["B1", "B2"], &[(0, 0)]);
        assert_eq!(sigma1.meet(&sigma1).unwrap(), sigma1);
        assert_eq!(sigma1.meet(&full).unwrap(), sigma1);
        let m = sigma1.meet(&sigma2).unwrap();
        assert!(m.related_set(0).unwrap().is_empty());
        assert!(sigma1.leq(&sigma1).unwrap());
        assert!(FiniteRelation::empty(src, dst).leq(&sigma1).unwrap());
        assert!(!full.leq(&sigma1).unwrap());
        assert!(sigma1.leq(&rel(&["A"], &["B1", "X"], &[])).is_err());
    }

    #[test]
    fn generators() {
        let g = FiniteRelation::meet_generators(&ll(&["a"]), &ll(&["b"]));
        assert_eq!(g, vec![FiniteRelation::empty(ll(&["a"]), ll(&["b"]))]);
        let g = FiniteRelation::meet_generators(&ll(&["a1", "a2"]), &ll(&["b"]));
        assert_eq!(
            g,
            vec![
                rel(&["a1", "a2"], &["b"], &[(1, 0)]),
                rel(&["a1", "a2"], &["b"], &[(0, 0)])
            ]
        );
        let tau = rel(&["a1", "a2"], &["b1", "b2", "b3"], &[(0, 2), (1, 0)]);
        assert_eq!(tau.from_generators(), tau);
    }

    #[test]
    fn related_and_pre_image() {
        let tau = rel(&["a1", "a2"], &["b1", "b2"], &[(0, 0), (0, 1), (1, 1)]);
        assert_eq!(tau.pre_image(&set(&[1])).unwrap(), set(&[1]));
        assert_eq!(tau.pre_image(&set(&[0, 1])).unwrap(), set(&[0, 1]));
        let id = FiniteRelation::identity(ll(&["x", "y", "z"]));
        assert_eq!(id.pre_image(&set(&[0])).unwrap(), set(&[0]));
        assert_eq!(id.related_set(1).unwrap(), set(&[1]));
        assert!(tau.related_set(2).is_err());
        assert!(tau.pre_image(&set(&[5])).is_err());
        let sigma1 = rel(&["A"], &["B1", "B2"], &[(0, 1)]);
        assert_eq!(sigma1.related_set(0).unwrap(), set(&[1]));
        assert_eq!(sigma1.sources_of(1).unwrap(), set(&[0]));
    }

    #[test]
    fn cup_cap_and_snake() {
        let one = ll(&["a"]);
        assert_eq!(FiniteRelation::cup(&one).unwrap().len(), 1);
        for n in 0..=4 {
            let names: Vec<String> = (0..n).map(|i| format!("a{i}")).collect();
            let a = LabelList::new(names).unwrap();
            let id = FiniteRelation::identity(a.clone());
            let cup = FiniteRelation::cup(&a).unwrap();
            let cap = FiniteRelation::cap(&a).unwrap();
            let left = id.tensor_product(&cup).unwrap();
            let right = cap.tensor_product(&id).unwrap();
            assert_eq!(right.compose(&left).unwrap(), id, "snake on {n} labels");
            let left = cup.tensor_product(&id).unwrap();
            let right = id.tensor_product(&cap).unwrap();
            assert_eq!(
                right.compose(&left).unwrap(),
                id,
                "other snake on {n} labels"
            );
            let circle = cap.compose(&cup).unwrap();
            assert_eq!(circle.len(), usize::from(n > 0));
        }
    }

    #[test]
    fn empty_lists_are_objects() {
        let e = LabelList::empty();
        let id = FiniteRelation::identity(e.clone());
        assert!(id.is_empty());
        assert_eq!(id, FiniteRelation::full(e.clone(), e.clone()));
        assert_eq!(id.compose(&id).unwrap(), id);
        assert!(FiniteRelation::meet_generators(&e, &ll(&["x"])).is_empty());
    }

    #[test]
    fn display_uses_labels() {
        let tau = rel(&["a"], &["b"], &[(0, 0)]);
        assert_eq!(tau.to_string(), "[a] -> [b] {a->b}");
    }
}
