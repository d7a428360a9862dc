//! Block matrices between sector-partitioned spaces and sectorial constraints.
//!
//! A relation `λ` between the sector labels of two spaces allows a matrix
//! `f` when every block `(l, k)` with `(k, l) ∉ λ` is exactly zero. Scalars
//! are exact rationals; a zero-pattern check does not depend on the field.
//!
//! Tensor products order the basis of `A ⊗ B` sector-major: sector pairs
//! `(k, k')` in row-major order, and inside each pair the basis vectors
//! `(u, v)` in row-major order. This keeps each product sector contiguous and
//! matches [`FiniteRelation::tensor_product`] on the sector labels.

use num_traits::Zero;

use crate::error::{check_index, Error, Result};
use crate::matrix::RatMatrix;
use crate::rational::{one, Rational};
use crate::relcat::{product_label, FiniteRelation, LabelList};
use crate::witness::Violation;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct SectorSpace {
    sectors: Vec<(String, usize)>,
    labels: LabelList,
    offsets: Vec<usize>,
}

impl SectorSpace {
    pub fn new<I, S>(sectors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let sectors: Vec<(String, usize)> =
            sectors.into_iter().map(|(l, d)| (l.into(), d)).collect();
        if let Some((l, _)) = sectors.iter().find(|(_, d)| *d == 0) {
            return Err(Error::Invalid(format!("sector `{l}` has dimension 0")));
        }
        let labels = LabelList::new(sectors.iter().map(|(l, _)| l.clone()))?;
        let mut offsets = Vec::with_capacity(sectors.len() + 1);
        let mut acc = 0;
        offsets.push(0);
        for (_, d) in &sectors {
            acc += d;
            offsets.push(acc);
        }
        Ok(Self {
            sectors,
            labels,
            offsets,
        })
    }

    /// One sector per label, each of dimension 1.
    pub fn unit_dims(labels: &LabelList) -> Self {
        Self::new(labels.labels().iter().map(|l| (l.clone(), 1))).expect("labels are distinct")
    }

    /// The space with no sectors, unit of the direct sum.
    pub fn zero() -> Self {
        Self::new(Vec::<(String, usize)>::new()).unwrap()
    }

    /// The one-dimensional space `[("", 1)]`, unit of the tensor product.
    pub fn unit() -> Self {
        Self::new([("", 1)]).unwrap()
    }

    pub fn sectors(&self) -> &[(String, usize)] {
        &self.sectors
    }

    pub fn labels(&self) -> &LabelList {
        &self.labels
    }

    pub fn num_sectors(&self) -> usize {
        self.sectors.len()
    }

    pub fn dim(&self, k: usize) -> usize {
        self.sectors[k].1
    }

    pub fn total_dim(&self) -> usize {
        *self.offsets.last().unwrap()
    }

    /// Basis indices belonging to sector `k`.
    pub fn range(&self, k: usize) -> std::ops::Range<usize> {
        self.offsets[k]..self.offsets[k + 1]
    }

    /// Sector containing basis index `u`.
    pub fn sector_of(&self, u: usize) -> usize {
        self.offsets.partition_point(|&o| o <= u) - 1
    }

    pub fn direct_sum(&self, other: &SectorSpace) -> Result<SectorSpace> {
        SectorSpace::new(self.sectors.iter().chain(&other.sectors).cloned())
    }

    pub fn tensor(&self, other: &SectorSpace) -> Result<SectorSpace> {
        let mut out = Vec::new();
        for (a, da) in &self.sectors {
            for (b, db) in &other.sectors {
                out.push((product_label(a, b), da * db));
            }
        }
        SectorSpace::new(out)
    }

    /// Position of `u ⊗ v` in the sector-major basis of `self ⊗ other`.
    pub fn tensor_index(&self, other: &SectorSpace, u: usize, v: usize) -> usize {
        let (k, kk) = (self.sector_of(u), other.sector_of(v));
        let pair = k * other.num_sectors() + kk;
        let before: usize = (0..pair)
            .map(|p| self.dim(p / other.num_sectors()) * other.dim(p % other.num_sectors()))
            .sum();
        let (lu, lv) = (u - self.offsets[k], v - other.offsets[kk]);
        before + lu * other.dim(kk) + lv
    }
}

/// A linear map `dom → cod` as a dense `cod.total_dim × dom.total_dim` matrix.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct BlockMatrix {
    dom: SectorSpace,
    cod: SectorSpace,
    entries: RatMatrix,
}

impl BlockMatrix {
    pub fn new(dom: SectorSpace, cod: SectorSpace, entries: RatMatrix) -> Result<Self> {
        if entries.rows() != cod.total_dim() || entries.cols() != dom.total_dim() {
            return Err(Error::ShapeMismatch(format!(
                "matrix is {}x{} but spaces need {}x{}",
                entries.rows(),
                entries.cols(),
                cod.total_dim(),
                dom.total_dim()
            )));
        }
        Ok(Self { dom, cod, entries })
    }

    /// Row-major entries.
    pub fn from_rows(dom: SectorSpace, cod: SectorSpace, entries: Vec<Rational>) -> Result<Self> {
        let m = RatMatrix::from_vec(cod.total_dim(), dom.total_dim(), entries)?;
        Self::new(dom, cod, m)
    }

    pub fn identity(space: SectorSpace) -> Self {
        let n = space.total_dim();
        Self {
            dom: space.clone(),
            cod: space,
            entries: RatMatrix::identity(n),
        }
    }

    pub fn zero(dom: SectorSpace, cod: SectorSpace) -> Self {
        let entries = RatMatrix::zeros(cod.total_dim(), dom.total_dim());
        Self { dom, cod, entries }
    }

    pub fn dom(&self) -> &SectorSpace {
        &self.dom
    }

    pub fn cod(&self) -> &SectorSpace {
        &self.cod
    }

    pub fn entries(&self) -> &RatMatrix {
        &self.entries
    }

    pub fn get(&self, r: usize, c: usize) -> &Rational {
        self.entries.get(r, c)
    }

    /// First nonzero entry of block `(l, k)`, i.e. `p^l ∘ f ∘ i^k`, as `(row, col)`.
    fn block_nonzero(&self, k: usize, l: usize) -> Option<(usize, usize)> {
        for r in self.cod.range(l) {
            for c in self.dom.range(k) {
                if !self.entries.get(r, c).is_zero() {
                    return Some((r, c));
                }
            }
        }
        None
    }

    pub fn block_is_zero(&self, k: usize, l: usize) -> Result<bool> {
        check_index(k, self.dom.num_sectors())?;
        check_index(l, self.cod.num_sectors())?;
        Ok(self.block_nonzero(k, l).is_none())
    }

    /// The least relation this matrix satisfies: `(k, l)` iff block `(l, k)` is nonzero.
    pub fn support_relation(&self) -> FiniteRelation {
        let pairs = (0..self.dom.num_sectors())
            .flat_map(|k| (0..self.cod.num_sectors()).map(move |l| (k, l)))
            .filter(|&(k, l)| self.block_nonzero(k, l).is_some());
        FiniteRelation::new(self.dom.labels().clone(), self.cod.labels().clone(), pairs)
            .expect("indices in range")
    }

    fn require_boundary(&self, lambda: &FiniteRelation) -> Result<()> {
        if lambda.src() != self.dom.labels() || lambda.dst() != self.cod.labels() {
            return Err(Error::BoundaryMismatch(format!(
                "relation {} -> {} against matrix {} -> {}",
                lambda.src(),
                lambda.dst(),
                self.dom.labels(),
                self.cod.labels()
            )));
        }
        Ok(())
    }

    /// The first forbidden nonzero block, if any.
    pub fn sectorial_violation(&self, lambda: &FiniteRelation) -> Result<Option<Violation>> {
        self.require_boundary(lambda)?;
        for k in 0..self.dom.num_sectors() {
            for l in 0..self.cod.num_sectors() {
                if lambda.contains(k, l) {
                    continue;
                }
                if let Some((row, col)) = self.block_nonzero(k, l) {
                    return Ok(Some(Violation::Block {
                        dom_sector: self.dom.labels().name(k),
                        cod_sector: self.cod.labels().name(l),
                        row,
                        col,
                    }));
                }
            }
        }
        Ok(None)
    }

    /// Every block outside `lambda` is exactly zero.
    pub fn check_sectorial(&self, lambda: &FiniteRelation) -> Result<bool> {
        Ok(self.sectorial_violation(lambda)?.is_none())
    }

    /// The relational (discard-style) reading of a constraint in the biproduct
    /// structure: for every input sector `k`, `d_{λ_k} ∘ f` factors through
    /// `d_{k}`, where `d_S` is the idempotent that zeroes the sectors in `S`.
    /// Decided as `d_{λ_k} f = d_{λ_k} f d_{k}` with explicit matrix products.
    pub fn check_relational_biproduct(&self, lambda: &FiniteRelation) -> Result<bool> {
        self.require_boundary(lambda)?;
        for k in 0..self.dom.num_sectors() {
            let targets = lambda.related_set(k)?;
            let d_out = kill_sectors(&self.cod, |l| targets.contains(&l));
            let d_in = kill_sectors(&self.dom, |kk| kk == k);
            let lhs = d_out.mul(&self.entries)?;
            let rhs = lhs.mul(&d_in)?;
            if lhs != rhs {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &BlockMatrix) -> Result<BlockMatrix> {
        if first.cod != self.dom {
            return Err(Error::BoundaryMismatch(format!(
                "composition: {} vs {}",
                first.cod.labels(),
                self.dom.labels()
            )));
        }
        Ok(BlockMatrix {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            entries: self.entries.mul(&first.entries)?,
        })
    }

    /// Block-diagonal sum; sector lists concatenate.
    pub fn direct_sum(&self, other: &BlockMatrix) -> Result<BlockMatrix> {
        Ok(BlockMatrix {
            dom: self.dom.direct_sum(&other.dom)?,
            cod: self.cod.direct_sum(&other.cod)?,
            entries: self.entries.direct_sum(&other.entries),
        })
    }

    /// Kronecker product in the sector-major basis.
    pub fn tensor(&self, other: &BlockMatrix) -> Result<BlockMatrix> {
        let dom = self.dom.tensor(&other.dom)?;
        let cod = self.cod.tensor(&other.cod)?;
        let mut entries = RatMatrix::zeros(cod.total_dim(), dom.total_dim());
        for r1 in 0..self.cod.total_dim() {
            for c1 in 0..self.dom.total_dim() {
                let a = self.get(r1, c1);
                if a.is_zero() {
                    continue;
                }
                for r2 in 0..other.cod.total_dim() {
                    for c2 in 0..other.dom.total_dim() {
                        let b = other.get(r2, c2);
                        if b.is_zero() {
                            continue;
                        }
                        let r = self.cod.tensor_index(&other.cod, r1, r2);
                        let c = self.dom.tensor_index(&other.dom, c1, c2);
                        entries.set(r, c, a * b);
                    }
                }
            }
        }
        Ok(BlockMatrix { dom, cod, entries })
    }

    /// Entrywise transpose; the dagger over the rationals.
    pub fn transpose(&self) -> BlockMatrix {
        BlockMatrix {
            dom: self.cod.clone(),
            cod: self.dom.clone(),
            entries: self.entries.transpose(),
        }
    }

    /// `Σ_u e_u ⊗ e_u`, a map from [`SectorSpace::unit`] into `A ⊗ A`.
    pub fn sector_cup(a: &SectorSpace) -> Result<BlockMatrix> {
        let cod = a.tensor(a)?;
        let mut entries = RatMatrix::zeros(cod.total_dim(), 1);
        for u in 0..a.total_dim() {
            entries.set(a.tensor_index(a, u, u), 0, one());
        }
        BlockMatrix::new(SectorSpace::unit(), cod, entries)
    }

    pub fn sector_cap(a: &SectorSpace) -> Result<BlockMatrix> {
        Ok(Self::sector_cup(a)?.transpose())
    }
}

/// Diagonal 0/1 matrix that zeroes the sectors selected by `kill`.
fn kill_sectors(space: &SectorSpace, kill: impl Fn(usize) -> bool) -> RatMatrix {
    let mut m = RatMatrix::zeros(space.total_dim(), space.total_dim());
    for k in (0..space.num_sectors()).filter(|&k| !kill(k)) {
        for u in space.range(k) {
            m.set(u, u, one());
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::int;

    fn space(s: &[(&str, usize)]) -> SectorSpace {
        SectorSpace::new(s.iter().copied()).unwrap()
    }

    fn mat(dom: &SectorSpace, cod: &SectorSpace, v: &[i64]) -> BlockMatrix {
        BlockMatrix::from_rows(
            dom.clone(),
            cod.clone(),
            v.iter().map(|&x| int(x)).collect(),
        )
        .unwrap()
    }

    fn rel(src: &SectorSpace, dst: &SectorSpace, pairs: &[(usize, usize)]) -> FiniteRelation {
        FiniteRelation::new(
            src.labels().clone(),
            dst.labels().clone(),
            pairs.iter().copied(),
        )
        .unwrap()
    }

    #[test]
    fn spaces_validate() {
        assert!(SectorSpace::new([("a", 0)]).is_err());
        assert!(SectorSpace::new([("a", 1), ("a", 2)]).is_err());
        let s = space(&[("a", 2), ("b", 1), ("c", 3)]);
        assert_eq!(s.total_dim(), 6);
        assert_eq!(s.range(2), 3..6);
        assert_eq!(
            (0..6).map(|u| s.sector_of(u)).collect::<Vec<_>>(),
            [0, 0, 1, 2, 2, 2]
        );
    }

    #[test]
    fn lower_triangular_example() {
        // [[1,0],[1,1]] on 1+1 sectors: only block (row 2, col 1) is off-diagonal and nonzero.
        let s = space(&[("s1", 1), ("s2", 1)]);
        let f = mat(&s, &s, &[1, 0, 1, 1]);
        assert!(f
            .check_sectorial(&FiniteRelation::full(
                s.labels().clone(),
                s.labels().clone()
            ))
            .unwrap());
        assert!(!f
            .check_sectorial(&FiniteRelation::identity(s.labels().clone()))
            .unwrap());
        assert_eq!(f.support_relation(), rel(&s, &s, &[(0, 0), (0, 1), (1, 1)]));
        let v = f
            .sectorial_violation(&FiniteRelation::identity(s.labels().clone()))
            .unwrap()
            .unwrap();
        assert_eq!(
            v,
            Violation::Block {
                dom_sector: "s1".into(),
                cod_sector: "s2".into(),
                row: 1,
                col: 0
            }
        );
    }

    #[test]
    fn identity_and_zero_supports() {
        let s = space(&[("a", 2), ("b", 1)]);
        let id = BlockMatrix::identity(s.clone());
        assert_eq!(
            id.support_relation(),
            FiniteRelation::identity(s.labels().clone())
        );
        assert!(id
            .check_sectorial(&FiniteRelation::identity(s.labels().clone()))
            .unwrap());
        assert!(BlockMatrix::zero(s.clone(), s.clone())
            .support_relation()
            .is_empty());
    }

    #[test]
    fn boundary_must_match_labels() {
        let s = space(&[("a", 1)]);
        let t = space(&[("b", 1)]);
        let f = BlockMatrix::identity(s.clone());
        assert!(matches!(
            f.check_sectorial(&FiniteRelation::identity(t.labels().clone())),
            Err(Error::BoundaryMismatch(_))
        ));
        assert!(f.compose(&BlockMatrix::identity(t)).is_err());
    }

    #[test]
    fn direct_sum_of_scalars() {
        let a = space(&[("a", 1)]);
        let b = space(&[("b", 1)]);
        let d = mat(&a, &a, &[2]).direct_sum(&mat(&b, &b, &[3])).unwrap();
        let ab = space(&[("a", 1), ("b", 1)]);
        assert_eq!(d, mat(&ab, &ab, &[2, 0, 0, 3]));
    }

    #[test]
    fn cup_vectors() {
        let one = space(&[("a", 1)]);
        assert_eq!(
            BlockMatrix::sector_cup(&one).unwrap().entries().data(),
            &[int(1)]
        );
        // Two one-dimensional sectors: basis of A⊗A is a*a, a*b, b*a, b*b.
        let two = space(&[("a", 1), ("b", 1)]);
        let cup = BlockMatrix::sector_cup(&two).unwrap();
        assert_eq!(cup.entries().data(), &[int(1), int(0), int(0), int(1)]);
        for s in [one, two, space(&[("x", 2), ("y", 1), ("z", 2)])] {
            let cup = BlockMatrix::sector_cup(&s).unwrap();
            assert!(cup
                .check_sectorial(&FiniteRelation::cup(s.labels()).unwrap())
                .unwrap());
        }
    }

    #[test]
    fn snake_identity_on_matrices() {
        let a = space(&[("x", 2), ("y", 1)]);
        let id = BlockMatrix::identity(a.clone());
        let cup = BlockMatrix::sector_cup(&a).unwrap();
        let cap = BlockMatrix::sector_cap(&a).unwrap();
        let left = id.tensor(&cup).unwrap();
        let right = cap.tensor(&id).unwrap();
        assert_eq!(right.compose(&left).unwrap(), id);
    }

    #[test]
    fn tensor_respects_sector_blocks() {
        // Kronecker of two full-support matrices has full support on product sectors.
        let a = space(&[("a", 1), ("b", 2)]);
        let c = space(&[("c", 2)]);
        let f = mat(&a, &a, &[1, 2, 3, 4, 5, 6, 7, 8, 9]);
        let g = mat(&c, &c, &[1, 0, 0, 2]);
        let t = f.tensor(&g).unwrap();
        assert_eq!(
            t.support_relation(),
            f.support_relation()
                .tensor_product(&g.support_relation())
                .unwrap()
        );
        assert_eq!(t.get(0, 0), &int(1));
        // (b-basis 0 ⊗ c-basis 1) -> (a ⊗ c-basis 1): f[0][1] * g[1][1] = 2 * 2.
        let r = a.tensor_index(&c, 0, 1);
        let col = a.tensor_index(&c, 1, 1);
        assert_eq!(t.get(r, col), &int(4));
    }

    #[test]
    fn relational_reading_matches_on_examples() {
        let s = space(&[("s1", 1), ("s2", 2)]);
        let f = mat(&s, &s, &[1, 0, 0, 1, 1, 0, 0, 0, 1]);
        for pairs in [
            vec![],
            vec![(0, 0)],
            vec![(0, 0), (0, 1), (1, 1)],
            vec![(0, 0), (1, 1)],
        ] {
            let r = rel(&s, &s, &pairs);
            assert_eq!(
                f.check_sectorial(&r).unwrap(),
                f.check_relational_biproduct(&r).unwrap(),
                "{r}"
            );
        }
    }
}
