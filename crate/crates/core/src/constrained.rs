//! Constrained morphisms: pairs `(constraint, morphism)` whose morphism is
//! certified to satisfy the constraint, composed component-wise.
//!
//! An [`Encoding`] supplies the satisfaction predicate and the two layers of
//! structure (on constraints and on morphisms). [`ConstrainedCategory`]
//! builds certified pairs and propagates certificates through `compose`,
//! `tensor`, `dagger` and `relax` without re-deciding them. With `recheck`
//! enabled every derived certificate is also evaluated from scratch, and a
//! disagreement is reported as [`Error::LaxityViolated`].

use std::fmt;

use crate::cspcat::{CspProblem, FinFunction};
use crate::error::{Error, Result};
use crate::funcrel::{PartitionedFinSet, PartitionedFunction};
use crate::monoidrel::{Element, FiniteMonoid, MonoidLabeling};
use crate::relcat::{FiniteRelation, LabelList};
use crate::sectorial::{BlockMatrix, SectorSpace};
use crate::signalling::{FactorSpace, StochChannel};
use crate::witness::Violation;

/// Which structures an encoding carries on top of sequential composition.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Structures {
    pub identity: bool,
    pub tensor: bool,
    pub dagger: bool,
    pub compact: bool,
    /// Constraint composition is associative only up to `leq`: the left
    /// bracketing `(r ∘ (q ∘ p))` lies above the right one.
    pub lax_associativity: bool,
}

pub trait Encoding {
    /// Objects on the morphism side (spaces, sets); boundaries are compared on these.
    type Object: Clone + PartialEq + fmt::Debug + fmt::Display;
    type Constraint: Clone + PartialEq + fmt::Debug;
    type Morphism: Clone + PartialEq + fmt::Debug;

    fn name(&self) -> &'static str;

    fn structures(&self) -> Structures;

    fn boundary(&self, f: &Self::Morphism) -> (Self::Object, Self::Object);

    /// `Ok(None)` when `f` satisfies `c`; a boundary mismatch is an error.
    fn violation(&self, f: &Self::Morphism, c: &Self::Constraint) -> Result<Option<Violation>>;

    fn leq(&self, a: &Self::Constraint, b: &Self::Constraint) -> Result<bool>;

    fn compose_constraint(
        &self,
        second: &Self::Constraint,
        first: &Self::Constraint,
    ) -> Result<Self::Constraint>;

    fn compose_morphism(
        &self,
        second: &Self::Morphism,
        first: &Self::Morphism,
    ) -> Result<Self::Morphism>;

    fn identity(&self, _obj: &Self::Object) -> Result<(Self::Constraint, Self::Morphism)> {
        Err(Error::Unsupported("identity"))
    }

    fn tensor_constraint(
        &self,
        _a: &Self::Constraint,
        _b: &Self::Constraint,
    ) -> Result<Self::Constraint> {
        Err(Error::Unsupported("tensor"))
    }

    fn tensor_morphism(&self, _a: &Self::Morphism, _b: &Self::Morphism) -> Result<Self::Morphism> {
        Err(Error::Unsupported("tensor"))
    }

    fn tensor_object(&self, _a: &Self::Object, _b: &Self::Object) -> Result<Self::Object> {
        Err(Error::Unsupported("tensor"))
    }

    fn unit(&self) -> Result<Self::Object> {
        Err(Error::Unsupported("tensor"))
    }

    fn dagger_constraint(&self, _c: &Self::Constraint) -> Result<Self::Constraint> {
        Err(Error::Unsupported("dagger"))
    }

    fn dagger_morphism(&self, _f: &Self::Morphism) -> Result<Self::Morphism> {
        Err(Error::Unsupported("dagger"))
    }

    /// The cup on `obj` as a constraint/morphism pair.
    fn cup(&self, _obj: &Self::Object) -> Result<(Self::Constraint, Self::Morphism)> {
        Err(Error::Unsupported("compact structure"))
    }
}

/// A constraint together with a morphism. Only [`ConstrainedCategory`] builds
/// these; `certified` is false exactly for values made by `pair_unchecked`.
#[derive(Debug, Clone, PartialEq)]
pub struct Constrained<C, M> {
    constraint: C,
    morphism: M,
    certified: bool,
}

impl<C, M> Constrained<C, M> {
    pub fn constraint(&self) -> &C {
        &self.constraint
    }

    pub fn morphism(&self) -> &M {
        &self.morphism
    }

    pub fn is_certified(&self) -> bool {
        self.certified
    }

    pub fn into_parts(self) -> (C, M) {
        (self.constraint, self.morphism)
    }
}

pub type Pair<E> = Constrained<<E as Encoding>::Constraint, <E as Encoding>::Morphism>;

#[derive(Debug, Clone)]
pub struct ConstrainedCategory<E> {
    encoding: E,
    recheck: bool,
}

impl<E: Encoding> ConstrainedCategory<E> {
    pub fn new(encoding: E) -> Self {
        Self {
            encoding,
            recheck: false,
        }
    }

    /// Re-evaluate the predicate on every derived pair.
    pub fn with_recheck(mut self, recheck: bool) -> Self {
        self.recheck = recheck;
        self
    }

    pub fn encoding(&self) -> &E {
        &self.encoding
    }

    pub fn rechecking(&self) -> bool {
        self.recheck
    }

    /// Certifies `(c, f)` or returns the reason it cannot be.
    pub fn pair(&self, c: E::Constraint, f: E::Morphism) -> Result<Pair<E>> {
        match self.encoding.violation(&f, &c)? {
            Some(v) => Err(Error::Unsatisfied(v)),
            None => Ok(Constrained {
                constraint: c,
                morphism: f,
                certified: true,
            }),
        }
    }

    /// An uncertified pair, for oracles. Rejected by every structural operation.
    pub fn pair_unchecked(&self, c: E::Constraint, f: E::Morphism) -> Pair<E> {
        Constrained {
            constraint: c,
            morphism: f,
            certified: false,
        }
    }

    /// Evaluates the predicate from scratch.
    pub fn verify(&self, p: &Pair<E>) -> Result<bool> {
        Ok(self
            .encoding
            .violation(&p.morphism, &p.constraint)?
            .is_none())
    }

    fn derived(
        &self,
        op: &str,
        constraint: E::Constraint,
        morphism: E::Morphism,
    ) -> Result<Pair<E>> {
        if self.recheck {
            if let Some(v) = self.encoding.violation(&morphism, &constraint)? {
                return Err(Error::LaxityViolated(format!("{op}: {v}")));
            }
        }
        Ok(Constrained {
            constraint,
            morphism,
            certified: true,
        })
    }

    fn require_certified(p: &Pair<E>) -> Result<()> {
        if p.certified {
            Ok(())
        } else {
            Err(Error::Unchecked)
        }
    }

    pub fn identity(&self, obj: &E::Object) -> Result<Pair<E>> {
        let (c, f) = self.encoding.identity(obj)?;
        self.derived("identity", c, f)
    }

    /// `q ∘ p`, component-wise.
    pub fn compose(&self, q: &Pair<E>, p: &Pair<E>) -> Result<Pair<E>> {
        Self::require_certified(p)?;
        Self::require_certified(q)?;
        let c = self
            .encoding
            .compose_constraint(&q.constraint, &p.constraint)?;
        let f = self.encoding.compose_morphism(&q.morphism, &p.morphism)?;
        self.derived("compose", c, f)
    }

    pub fn tensor(&self, p: &Pair<E>, q: &Pair<E>) -> Result<Pair<E>> {
        Self::require_certified(p)?;
        Self::require_certified(q)?;
        let c = self
            .encoding
            .tensor_constraint(&p.constraint, &q.constraint)?;
        let f = self.encoding.tensor_morphism(&p.morphism, &q.morphism)?;
        self.derived("tensor", c, f)
    }

    pub fn dagger(&self, p: &Pair<E>) -> Result<Pair<E>> {
        Self::require_certified(p)?;
        let c = self.encoding.dagger_constraint(&p.constraint)?;
        let f = self.encoding.dagger_morphism(&p.morphism)?;
        self.derived("dagger", c, f)
    }

    /// Same morphism under a weaker constraint.
    pub fn relax(&self, p: &Pair<E>, weaker: E::Constraint) -> Result<Pair<E>> {
        Self::require_certified(p)?;
        if !self.encoding.leq(&p.constraint, &weaker)? {
            return Err(Error::NotARelaxation(format!(
                "{:?} is not below {:?}",
                p.constraint, weaker
            )));
        }
        self.derived("relax", weaker, p.morphism.clone())
    }

    pub fn cup(&self, obj: &E::Object) -> Result<Pair<E>> {
        let (c, f) = self.encoding.cup(obj)?;
        self.derived("cup", c, f)
    }

    pub fn boundary(&self, p: &Pair<E>) -> (E::Object, E::Object) {
        self.encoding.boundary(&p.morphism)
    }
}

/// Which tensor sectorial constraints travel with.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SectorTensor {
    /// Direct sum of matrices with disjoint union of relations.
    DirectSum,
    /// Kronecker product of matrices with cartesian product of relations.
    Kronecker,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Sectorial {
    pub tensor: SectorTensor,
}

impl Encoding for Sectorial {
    type Object = SectorSpace;
    type Constraint = FiniteRelation;
    type Morphism = BlockMatrix;

    fn name(&self) -> &'static str {
        match self.tensor {
            SectorTensor::DirectSum => "sectorial",
            SectorTensor::Kronecker => "sectorial-kron",
        }
    }

    fn structures(&self) -> Structures {
        Structures {
            identity: true,
            tensor: true,
            dagger: true,
            compact: self.tensor == SectorTensor::Kronecker,
            ..Structures::default()
        }
    }

    fn boundary(&self, f: &BlockMatrix) -> (SectorSpace, SectorSpace) {
        (f.dom().clone(), f.cod().clone())
    }

    fn violation(&self, f: &BlockMatrix, c: &FiniteRelation) -> Result<Option<Violation>> {
        f.sectorial_violation(c)
    }

    fn leq(&self, a: &FiniteRelation, b: &FiniteRelation) -> Result<bool> {
        a.leq(b)
    }

    fn compose_constraint(&self, s: &FiniteRelation, f: &FiniteRelation) -> Result<FiniteRelation> {
        s.compose(f)
    }

    fn compose_morphism(&self, s: &BlockMatrix, f: &BlockMatrix) -> Result<BlockMatrix> {
        s.compose(f)
    }

    fn identity(&self, obj: &SectorSpace) -> Result<(FiniteRelation, BlockMatrix)> {
        Ok((
            FiniteRelation::identity(obj.labels().clone()),
            BlockMatrix::identity(obj.clone()),
        ))
    }

    fn tensor_constraint(&self, a: &FiniteRelation, b: &FiniteRelation) -> Result<FiniteRelation> {
        match self.tensor {
            SectorTensor::DirectSum => a.tensor_disjoint(b),
            SectorTensor::Kronecker => a.tensor_product(b),
        }
    }

    fn tensor_morphism(&self, a: &BlockMatrix, b: &BlockMatrix) -> Result<BlockMatrix> {
        match self.tensor {
            SectorTensor::DirectSum => a.direct_sum(b),
            SectorTensor::Kronecker => a.tensor(b),
        }
    }

    fn tensor_object(&self, a: &SectorSpace, b: &SectorSpace) -> Result<SectorSpace> {
        match self.tensor {
            SectorTensor::DirectSum => a.direct_sum(b),
            SectorTensor::Kronecker => a.tensor(b),
        }
    }

    fn unit(&self) -> Result<SectorSpace> {
        Ok(match self.tensor {
            SectorTensor::DirectSum => SectorSpace::zero(),
            SectorTensor::Kronecker => SectorSpace::unit(),
        })
    }

    fn dagger_constraint(&self, c: &FiniteRelation) -> Result<FiniteRelation> {
        Ok(c.converse())
    }

    fn dagger_morphism(&self, f: &BlockMatrix) -> Result<BlockMatrix> {
        Ok(f.transpose())
    }

    fn cup(&self, obj: &SectorSpace) -> Result<(FiniteRelation, BlockMatrix)> {
        if self.tensor != SectorTensor::Kronecker {
            return Err(Error::Unsupported("compact structure"));
        }
        Ok((
            FiniteRelation::cup(obj.labels())?,
            BlockMatrix::sector_cup(obj)?,
        ))
    }
}

impl fmt::Display for SectorSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .sectors()
            .iter()
            .map(|(l, d)| format!("{l}:{d}"))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Signalling;

impl Encoding for Signalling {
    type Object = FactorSpace;
    type Constraint = FiniteRelation;
    type Morphism = StochChannel;

    fn name(&self) -> &'static str {
        "signalling"
    }

    fn structures(&self) -> Structures {
        Structures {
            identity: true,
            tensor: true,
            ..Structures::default()
        }
    }

    fn boundary(&self, f: &StochChannel) -> (FactorSpace, FactorSpace) {
        (f.dom().clone(), f.cod().clone())
    }

    fn violation(&self, f: &StochChannel, c: &FiniteRelation) -> Result<Option<Violation>> {
        f.signalling_violation(c)
    }

    fn leq(&self, a: &FiniteRelation, b: &FiniteRelation) -> Result<bool> {
        a.leq(b)
    }

    fn compose_constraint(&self, s: &FiniteRelation, f: &FiniteRelation) -> Result<FiniteRelation> {
        s.compose(f)
    }

    fn compose_morphism(&self, s: &StochChannel, f: &StochChannel) -> Result<StochChannel> {
        s.compose(f)
    }

    fn identity(&self, obj: &FactorSpace) -> Result<(FiniteRelation, StochChannel)> {
        Ok((
            FiniteRelation::identity(obj.labels().clone()),
            StochChannel::identity(obj.clone()),
        ))
    }

    fn tensor_constraint(&self, a: &FiniteRelation, b: &FiniteRelation) -> Result<FiniteRelation> {
        a.tensor_disjoint(b)
    }

    fn tensor_morphism(&self, a: &StochChannel, b: &StochChannel) -> Result<StochChannel> {
        a.tensor(b)
    }

    fn tensor_object(&self, a: &FactorSpace, b: &FactorSpace) -> Result<FactorSpace> {
        a.concat(b)
    }

    fn unit(&self) -> Result<FactorSpace> {
        Ok(FactorSpace::empty())
    }
}

impl fmt::Display for FactorSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .factors()
            .iter()
            .map(|(l, c)| format!("{l}:{c}"))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct FuncRel;

impl Encoding for FuncRel {
    type Object = PartitionedFinSet;
    type Constraint = FiniteRelation;
    type Morphism = PartitionedFunction;

    fn name(&self) -> &'static str {
        "funcrel"
    }

    fn structures(&self) -> Structures {
        Structures {
            identity: true,
            tensor: true,
            ..Structures::default()
        }
    }

    fn boundary(&self, f: &PartitionedFunction) -> (PartitionedFinSet, PartitionedFinSet) {
        (f.dom().clone(), f.cod().clone())
    }

    fn violation(&self, f: &PartitionedFunction, c: &FiniteRelation) -> Result<Option<Violation>> {
        f.funcrel_violation(c)
    }

    fn leq(&self, a: &FiniteRelation, b: &FiniteRelation) -> Result<bool> {
        a.leq(b)
    }

    fn compose_constraint(&self, s: &FiniteRelation, f: &FiniteRelation) -> Result<FiniteRelation> {
        s.compose(f)
    }

    fn compose_morphism(
        &self,
        s: &PartitionedFunction,
        f: &PartitionedFunction,
    ) -> Result<PartitionedFunction> {
        s.compose(f)
    }

    fn identity(&self, obj: &PartitionedFinSet) -> Result<(FiniteRelation, PartitionedFunction)> {
        Ok((
            FiniteRelation::identity(obj.labels().clone()),
            PartitionedFunction::identity(obj.clone()),
        ))
    }

    fn tensor_constraint(&self, a: &FiniteRelation, b: &FiniteRelation) -> Result<FiniteRelation> {
        a.tensor_disjoint(b)
    }

    fn tensor_morphism(
        &self,
        a: &PartitionedFunction,
        b: &PartitionedFunction,
    ) -> Result<PartitionedFunction> {
        a.tensor(b)
    }

    fn tensor_object(
        &self,
        a: &PartitionedFinSet,
        b: &PartitionedFinSet,
    ) -> Result<PartitionedFinSet> {
        a.disjoint_union(b)
    }

    fn unit(&self) -> Result<PartitionedFinSet> {
        PartitionedFinSet::new(Vec::<(String, usize)>::new())
    }
}

impl fmt::Display for PartitionedFinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self
            .blocks()
            .iter()
            .map(|(l, n)| format!("{l}:{n}"))
            .collect();
        write!(f, "[{}]", parts.join(", "))
    }
}

/// The single object of a monoid, named by the labelled set.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidObject(pub LabelList);

impl fmt::Display for MonoidObject {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MonoidEncoding {
    pub monoid: FiniteMonoid,
    pub labeling: MonoidLabeling,
}

impl Encoding for MonoidEncoding {
    type Object = MonoidObject;
    type Constraint = FiniteRelation;
    type Morphism = Element;

    fn name(&self) -> &'static str {
        "monoid"
    }

    fn structures(&self) -> Structures {
        Structures {
            identity: true,
            ..Structures::default()
        }
    }

    fn boundary(&self, _f: &Element) -> (MonoidObject, MonoidObject) {
        let o = MonoidObject(self.labeling.set().clone());
        (o.clone(), o)
    }

    fn violation(&self, m: &Element, c: &FiniteRelation) -> Result<Option<Violation>> {
        self.monoid.monoid_violation(*m, c, &self.labeling)
    }

    /// Each pair is a condition, so fewer pairs is weaker: `a ≤ b` iff `b ⊆ a`.
    fn leq(&self, a: &FiniteRelation, b: &FiniteRelation) -> Result<bool> {
        b.leq(a)
    }

    fn compose_constraint(&self, s: &FiniteRelation, f: &FiniteRelation) -> Result<FiniteRelation> {
        s.compose(f)
    }

    /// `second · first`.
    fn compose_morphism(&self, s: &Element, f: &Element) -> Result<Element> {
        Ok(self.monoid.mul(*s, *f))
    }

    fn identity(&self, _obj: &MonoidObject) -> Result<(FiniteRelation, Element)> {
        Ok((
            FiniteRelation::identity(self.labeling.set().clone()),
            self.monoid.identity(),
        ))
    }
}

/// Set-based CSPs constraining functions. Constraints are ordered by
/// [`CspProblem::leq`]; there are no identities or tensors.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Csp;

/// A finite set `{0, .., n-1}`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FinSet(pub usize);

impl fmt::Display for FinSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

impl Encoding for Csp {
    type Object = FinSet;
    type Constraint = CspProblem;
    type Morphism = FinFunction;

    fn name(&self) -> &'static str {
        "csp"
    }

    fn structures(&self) -> Structures {
        Structures {
            lax_associativity: true,
            ..Structures::default()
        }
    }

    fn boundary(&self, f: &FinFunction) -> (FinSet, FinSet) {
        (FinSet(f.dom()), FinSet(f.cod()))
    }

    fn violation(&self, f: &FinFunction, c: &CspProblem) -> Result<Option<Violation>> {
        c.violation(f)
    }

    fn leq(&self, a: &CspProblem, b: &CspProblem) -> Result<bool> {
        a.leq(b)
    }

    fn compose_constraint(&self, s: &CspProblem, f: &CspProblem) -> Result<CspProblem> {
        s.compose(f)
    }

    fn compose_morphism(&self, s: &FinFunction, f: &FinFunction) -> Result<FinFunction> {
        s.compose(f)
    }
}
