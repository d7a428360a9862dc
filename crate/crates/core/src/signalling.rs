//! Stochastic channels between factored finite spaces and relational
//! (signalling) constraints on them.
//!
//! A relation `τ` from input factors to output factors allows a channel `f`
//! when, for every input factor `i`, discarding the outputs `τ_i` leaves a
//! channel that does not depend on input `i`. The existential witness
//! `f'_i` is built explicitly as `d_{τ_i} ∘ f ∘ e_{i}`, where `e` prepares
//! the uniform distribution.
//!
//! States are indexed row-major over the factor list, first factor most
//! significant, so [`StochChannel::tensor`] lines up with
//! [`FiniteRelation::tensor_disjoint`].

use std::collections::BTreeSet;

use num_traits::{One, Zero};

use crate::error::{check_index, Error, Result};
use crate::matrix::RatMatrix;
use crate::rational::{int, one, ratio, zero, Rational};
use crate::relcat::{FiniteRelation, LabelList};
use crate::witness::Violation;

pub type FactorSet = BTreeSet<usize>;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FactorSpace {
    factors: Vec<(String, usize)>,
    labels: LabelList,
}

impl FactorSpace {
    pub fn new<I, S>(factors: I) -> Result<Self>
    where
        I: IntoIterator<Item = (S, usize)>,
        S: Into<String>,
    {
        let factors: Vec<(String, usize)> =
            factors.into_iter().map(|(l, c)| (l.into(), c)).collect();
        if let Some((l, _)) = factors.iter().find(|(_, c)| *c == 0) {
            return Err(Error::Invalid(format!("factor `{l}` has cardinality 0")));
        }
        let labels = LabelList::new(factors.iter().map(|(l, _)| l.clone()))?;
        Ok(Self { factors, labels })
    }

    pub fn empty() -> Self {
        Self::new(Vec::<(String, usize)>::new()).unwrap()
    }

    pub fn factors(&self) -> &[(String, usize)] {
        &self.factors
    }

    pub fn labels(&self) -> &LabelList {
        &self.labels
    }

    pub fn len(&self) -> usize {
        self.factors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.factors.is_empty()
    }

    pub fn card(&self, i: usize) -> usize {
        self.factors[i].1
    }

    /// Number of joint states; 1 for the empty space.
    pub fn total(&self) -> usize {
        self.factors.iter().map(|(_, c)| c).product()
    }

    /// Per-factor values of joint state `x`.
    pub fn decode(&self, mut x: usize) -> Vec<usize> {
        let mut digits = vec![0; self.len()];
        for (d, (_, c)) in digits.iter_mut().zip(&self.factors).rev() {
            *d = x % c;
            x /= c;
        }
        digits
    }

    pub fn encode(&self, digits: &[usize]) -> usize {
        digits
            .iter()
            .zip(&self.factors)
            .fold(0, |acc, (d, (_, c))| acc * c + d)
    }

    fn check_set(&self, s: &FactorSet) -> Result<()> {
        s.iter().try_for_each(|&i| check_index(i, self.len()))
    }

    /// The space with the factors in `s` removed.
    pub fn without(&self, s: &FactorSet) -> Result<FactorSpace> {
        self.check_set(s)?;
        FactorSpace::new(
            self.factors
                .iter()
                .enumerate()
                .filter(|(i, _)| !s.contains(i))
                .map(|(_, f)| f.clone()),
        )
    }

    pub fn concat(&self, other: &FactorSpace) -> Result<FactorSpace> {
        FactorSpace::new(self.factors.iter().chain(&other.factors).cloned())
    }

    fn names(&self, s: impl IntoIterator<Item = usize>) -> Vec<String> {
        s.into_iter().map(|i| self.labels.name(i)).collect()
    }
}

/// A column-stochastic exact-rational matrix `cod.total × dom.total`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct StochChannel {
    dom: FactorSpace,
    cod: FactorSpace,
    matrix: RatMatrix,
}

impl StochChannel {
    /// Validates nonnegativity and that every column sums to exactly 1.
    pub fn new(dom: FactorSpace, cod: FactorSpace, matrix: RatMatrix) -> Result<Self> {
        if matrix.rows() != cod.total() || matrix.cols() != dom.total() {
            return Err(Error::ShapeMismatch(format!(
                "matrix is {}x{} but spaces need {}x{}",
                matrix.rows(),
                matrix.cols(),
                cod.total(),
                dom.total()
            )));
        }
        for c in 0..matrix.cols() {
            let mut sum = zero();
            for v in matrix.column(c) {
                if *v < zero() {
                    return Err(Error::NotStochastic(format!(
                        "negative entry in column {c}"
                    )));
                }
                sum += v;
            }
            if !sum.is_one() {
                return Err(Error::NotStochastic(format!("column {c} sums to {sum}")));
            }
        }
        Ok(Self { dom, cod, matrix })
    }

    /// Row-major entries.
    pub fn from_rows(dom: FactorSpace, cod: FactorSpace, entries: Vec<Rational>) -> Result<Self> {
        let m = RatMatrix::from_vec(cod.total(), dom.total(), entries)?;
        Self::new(dom, cod, m)
    }

    /// Builds `P(y | x)` from a function of the decoded input and output values.
    pub fn from_fn(
        dom: FactorSpace,
        cod: FactorSpace,
        p: impl Fn(&[usize], &[usize]) -> Rational,
    ) -> Result<Self> {
        let mut m = RatMatrix::zeros(cod.total(), dom.total());
        for x in 0..dom.total() {
            let xd = dom.decode(x);
            for y in 0..cod.total() {
                m.set(y, x, p(&xd, &cod.decode(y)));
            }
        }
        Self::new(dom, cod, m)
    }

    /// A deterministic channel from a map on decoded values.
    pub fn deterministic(
        dom: FactorSpace,
        cod: FactorSpace,
        map: impl Fn(&[usize]) -> Vec<usize>,
    ) -> Result<Self> {
        let mut m = RatMatrix::zeros(cod.total(), dom.total());
        for x in 0..dom.total() {
            let y = map(&dom.decode(x));
            if y.len() != cod.len() || y.iter().enumerate().any(|(j, &v)| v >= cod.card(j)) {
                return Err(Error::Invalid(format!(
                    "image {y:?} is not a state of the codomain"
                )));
            }
            m.set(cod.encode(&y), x, one());
        }
        Self::new(dom, cod, m)
    }

    pub fn identity(space: FactorSpace) -> Self {
        let n = space.total();
        Self {
            dom: space.clone(),
            cod: space,
            matrix: RatMatrix::identity(n),
        }
    }

    pub fn dom(&self) -> &FactorSpace {
        &self.dom
    }

    pub fn cod(&self) -> &FactorSpace {
        &self.cod
    }

    pub fn matrix(&self) -> &RatMatrix {
        &self.matrix
    }

    /// `P(y | x)` on joint indices.
    pub fn prob(&self, y: usize, x: usize) -> &Rational {
        self.matrix.get(y, x)
    }

    /// `self ∘ first`.
    pub fn compose(&self, first: &StochChannel) -> Result<StochChannel> {
        if first.cod != self.dom {
            return Err(Error::BoundaryMismatch(format!(
                "composition: {} vs {}",
                first.cod.labels(),
                self.dom.labels()
            )));
        }
        let matrix = self.matrix.mul(&first.matrix)?;
        debug_assert!(
            (0..matrix.cols()).all(|c| matrix.column(c).fold(zero(), |a, b| a + b).is_one())
        );
        Ok(StochChannel {
            dom: first.dom.clone(),
            cod: self.cod.clone(),
            matrix,
        })
    }

    /// Parallel composition; factor lists concatenate.
    pub fn tensor(&self, other: &StochChannel) -> Result<StochChannel> {
        Ok(StochChannel {
            dom: self.dom.concat(&other.dom)?,
            cod: self.cod.concat(&other.cod)?,
            matrix: self.matrix.kron(&other.matrix),
        })
    }

    /// True when the output distribution does not depend on the input factors
    /// in `inputs` (jointly), for every value of the remaining inputs.
    pub fn is_constant_in(&self, inputs: &FactorSet) -> Result<bool> {
        self.dom.check_set(inputs)?;
        for x in 0..self.dom.total() {
            let mut d = self.dom.decode(x);
            for &i in inputs {
                d[i] = 0;
            }
            let x0 = self.dom.encode(&d);
            if x0 != x && self.matrix.column(x).ne(self.matrix.column(x0)) {
                return Ok(false);
            }
        }
        Ok(true)
    }

    /// Sends the uniform input distribution to the uniform output distribution.
    pub fn is_uniform_preserving(&self) -> bool {
        let n = self.dom.total();
        let expected = ratio(1, self.cod.total() as i64);
        (0..self.cod.total()).all(|y| {
            let s = (0..n).fold(zero(), |acc, x| acc + self.prob(y, x));
            s / int(n as i64) == expected
        })
    }

    fn require_boundary(&self, tau: &FiniteRelation) -> Result<()> {
        if tau.src() != self.dom.labels() || tau.dst() != self.cod.labels() {
            return Err(Error::BoundaryMismatch(format!(
                "relation {} -> {} against channel {} -> {}",
                tau.src(),
                tau.dst(),
                self.dom.labels(),
                self.cod.labels()
            )));
        }
        Ok(())
    }

    /// The first input factor whose influence escapes `τ`, if any.
    pub fn signalling_violation(&self, tau: &FiniteRelation) -> Result<Option<Violation>> {
        self.require_boundary(tau)?;
        for i in 0..self.dom.len() {
            let reach = tau.related_set(i)?;
            let g = discard(&self.cod, &reach)?.compose(self)?;
            if !g.is_constant_in(&FactorSet::from([i]))? {
                let kept = (0..self.cod.len()).filter(|j| !reach.contains(j));
                return Ok(Some(Violation::Signalling {
                    input: self.dom.labels().name(i),
                    outputs: self.cod.names(kept),
                }));
            }
        }
        Ok(None)
    }

    /// For every input `i`: `d_{τ_i} ∘ f` is constant in input `i`.
    pub fn check_signalling(&self, tau: &FiniteRelation) -> Result<bool> {
        Ok(self.signalling_violation(tau)?.is_none())
    }

    /// The witness `f'_i = d_{τ_i} ∘ f ∘ e_{i}`, a channel out of the inputs
    /// other than `i`. When `f` satisfies `τ`, `d_{τ_i} ∘ f = f'_i ∘ d_{i}`.
    pub fn signalling_factor(&self, tau: &FiniteRelation, i: usize) -> Result<StochChannel> {
        self.require_boundary(tau)?;
        let reach = tau.related_set(i)?;
        let single = FactorSet::from([i]);
        discard(&self.cod, &reach)?
            .compose(self)?
            .compose(&prepare_uniform(&self.dom, &single)?)
    }

    /// For every absent arrow `(i, j)`: the marginal on output `j` alone is
    /// constant in input `i`.
    pub fn check_signalling_atomic(&self, tau: &FiniteRelation) -> Result<bool> {
        self.require_boundary(tau)?;
        for j in 0..self.cod.len() {
            let others: FactorSet = (0..self.cod.len()).filter(|&jj| jj != j).collect();
            let marginal = discard(&self.cod, &others)?.compose(self)?;
            for i in 0..self.dom.len() {
                if !tau.contains(i, j) && !marginal.is_constant_in(&FactorSet::from([i]))? {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    }

    /// The backward reading of `τ`: for every output `j`, preparing the inputs
    /// related to `j` uniformly leaves `j` uniform and independent of the other
    /// outputs, for every value of the remaining inputs.
    ///
    /// Errors with [`Error::NotUniformPreserving`] when `f` does not map the
    /// uniform state to the uniform state.
    pub fn cosignalling_violation(&self, tau: &FiniteRelation) -> Result<Option<Violation>> {
        self.require_boundary(tau)?;
        if !self.is_uniform_preserving() {
            return Err(Error::NotUniformPreserving);
        }
        for j in 0..self.cod.len() {
            let sources = tau.sources_of(j)?;
            let h = self.compose(&prepare_uniform(&self.dom, &sources)?)?;
            let rest = discard(&self.cod, &FactorSet::from([j]))?.compose(&h)?;
            let weight = ratio(1, self.cod.card(j) as i64);
            let rest_space = rest.cod().clone();
            let ok = (0..h.dom().total()).all(|x| {
                (0..self.cod.total()).all(|y| {
                    let mut yd = self.cod.decode(y);
                    yd.remove(j);
                    let yr = rest_space.encode(&yd);
                    *h.prob(y, x) == &weight * rest.prob(yr, x)
                })
            });
            if !ok {
                return Ok(Some(Violation::Cosignalling {
                    output: self.cod.labels().name(j),
                    inputs: self.dom.names(sources),
                }));
            }
        }
        Ok(None)
    }

    pub fn check_cosignalling(&self, tau: &FiniteRelation) -> Result<bool> {
        Ok(self.cosignalling_violation(tau)?.is_none())
    }

    /// `d_T ∘ f` is jointly constant in the inputs `{ i | τ_i ⊆ T }`.
    ///
    /// Requires `f` to satisfy `τ`; holds whenever it does.
    pub fn check_domain_atomicity(
        &self,
        tau: &FiniteRelation,
        outputs: &FactorSet,
    ) -> Result<bool> {
        if !self.check_signalling(tau)? {
            return Err(Error::PreconditionViolated(
                "channel does not satisfy the relation".into(),
            ));
        }
        self.cod.check_set(outputs)?;
        let inputs = tau.pre_image(outputs)?;
        discard(&self.cod, outputs)?
            .compose(self)?
            .is_constant_in(&inputs)
    }

    /// The least relation for the single-output reading: `(i, j)` iff the
    /// marginal on output `j` depends on input `i`.
    pub fn atomic_support(&self) -> FiniteRelation {
        let mut pairs = Vec::new();
        for j in 0..self.cod.len() {
            let others: FactorSet = (0..self.cod.len()).filter(|&jj| jj != j).collect();
            let marginal = discard(&self.cod, &others)
                .and_then(|d| d.compose(self))
                .expect("well-formed");
            for i in 0..self.dom.len() {
                if !marginal
                    .is_constant_in(&FactorSet::from([i]))
                    .expect("in range")
                {
                    pairs.push((i, j));
                }
            }
        }
        FiniteRelation::new(self.dom.labels().clone(), self.cod.labels().clone(), pairs)
            .expect("in range")
    }
}

/// `d_S`: marginalizes out exactly the factors in `s`.
pub fn discard(space: &FactorSpace, s: &FactorSet) -> Result<StochChannel> {
    let cod = space.without(s)?;
    let mut m = RatMatrix::zeros(cod.total(), space.total());
    for x in 0..space.total() {
        let kept: Vec<usize> = space
            .decode(x)
            .into_iter()
            .enumerate()
            .filter(|(i, _)| !s.contains(i))
            .map(|(_, v)| v)
            .collect();
        m.set(cod.encode(&kept), x, one());
    }
    Ok(StochChannel {
        dom: space.clone(),
        cod,
        matrix: m,
    })
}

/// `e_S`: inserts the uniform distribution on each factor in `s`.
pub fn prepare_uniform(space: &FactorSpace, s: &FactorSet) -> Result<StochChannel> {
    let dom = space.without(s)?;
    let count: usize = s.iter().map(|&i| space.card(i)).product();
    let w = ratio(1, count as i64);
    let mut m = RatMatrix::zeros(space.total(), dom.total());
    for y in 0..space.total() {
        let kept: Vec<usize> = space
            .decode(y)
            .into_iter()
            .enumerate()
            .filter(|(i, _)| !s.contains(i))
            .map(|(_, v)| v)
            .collect();
        m.set(y, dom.encode(&kept), w.clone());
    }
    Ok(StochChannel {
        dom,
        cod: space.clone(),
        matrix: m,
    })
}

/// `A:2 → B1:2 ⊗ B2:2`, sending `x` to the uniform mixture of `(y1, y2)`
/// with `y1 ⊕ y2 = x`.
pub fn parity_counterexample() -> StochChannel {
    let dom = FactorSpace::new([("A", 2)]).unwrap();
    let cod = FactorSpace::new([("B1", 2), ("B2", 2)]).unwrap();
    StochChannel::from_fn(dom, cod, |x, y| {
        if (y[0] ^ y[1]) == x[0] {
            ratio(1, 2)
        } else {
            Rational::zero()
        }
    })
    .expect("columns sum to 1")
}

/// `(σ1, σ2)` on `[A] → [B1, B2]`: `σ_i` omits exactly the arrow `A → B_i`.
pub fn parity_constraints() -> (FiniteRelation, FiniteRelation) {
    let src = LabelList::new(["A"]).unwrap();
    let dst = LabelList::new(["B1", "B2"]).unwrap();
    (
        FiniteRelation::new(src.clone(), dst.clone(), [(0, 1)]).unwrap(),
        FiniteRelation::new(src, dst, [(0, 0)]).unwrap(),
    )
}
