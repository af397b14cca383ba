//! Homomorphisms out of function groups: point homomorphisms `φ: A -> G`
//! and homomorphisms `H: A -> B` between function groups, their
//! separation properties, minimal supports, and the weighted-composition
//! representation.

mod represent;
mod support;

use std::collections::VecDeque;
use std::fmt;
use std::sync::Arc;

use serde::Serialize;
use thiserror::Error;

use crate::fgroup::{ControlViolation, FGroupError, FunctionGroup, PointMap};
use crate::group::{Elem, GroupMorphism};
use crate::subset::Subset;

pub use represent::{
    CheckStatus, HypothesisCheck, IsoRepresentation, PartialMorphism, RepresentOptions, Representation, WeightedComposition,
};
pub use support::{SupportMap, SupportPolicy, SupportReport, MAX_SUPPORT_DOMAIN};

/// Which side of a homomorphism a hypothesis refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Source,
    Target,
}

impl fmt::Display for Side {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Side::Source => "source",
            Side::Target => "target",
        })
    }
}

/// A named precondition of the representation theorems.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Hypothesis {
    FunctionGroup(Side),
    Controllable(Side),
    PointwiseDense(Side),
}

impl fmt::Display for Hypothesis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Hypothesis::FunctionGroup(s) => write!(f, "function-group({s})"),
            Hypothesis::Controllable(s) => write!(f, "controllable({s})"),
            Hypothesis::PointwiseDense(s) => write!(f, "pointwise-dense({s})"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HomError {
    #[error("source and target are function groups over different groups")]
    GroupMismatch,
    #[error("pair #{0} has a source map outside the source group")]
    PairNotInSource(usize),
    #[error("pair #{0} has a target map outside the target group")]
    PairNotInTarget(usize),
    #[error("pair sources generate only {reached} of {order} elements")]
    PairsDoNotGenerate { reached: usize, order: usize },
    #[error("inconsistent images: words {left:?} and {right:?} name the same element but map differently")]
    InconsistentImages { left: Vec<usize>, right: Vec<usize> },
    #[error("image of element #{0} is not in the target group")]
    ImageNotInTarget(usize),
    #[error("mapping has {len} entries, source has {order} elements")]
    BadTableLength { len: usize, order: usize },
    #[error("not a homomorphism: fails on elements #{f} and #{g}")]
    NotHomomorphism { f: usize, g: usize },
    #[error("weight vector has {weights} entries but the point map has {points}")]
    WeightCountMismatch { weights: usize, points: usize },
    #[error("the homomorphism is null, so the empty set is a support")]
    NullHomomorphism,
    #[error("support search over {0} points exceeds the supported maximum")]
    SupportSearchTooLarge(usize),
    #[error("not weakly separating: #{f} and #{g} are detached but their images are not")]
    NotWeaklySeparating { f: usize, g: usize },
    #[error("not separating: #{f} and #{g} are separated but their images are not")]
    NotSeparating { f: usize, g: usize },
    #[error("point {y} has no singleton minimum support (minimal supports: {minimal:?})")]
    NonSingletonSupport { y: usize, minimal: Vec<Subset> },
    #[error("no injective choice of singleton supports exists")]
    NoInjectiveSupportChoice,
    #[error("weight at point {y} is not well defined: #{f} and #{g} agree at h(y) but their images differ at y")]
    NotWellDefined { f: usize, g: usize, y: usize },
    #[error("hypothesis {hypothesis} fails: {detail}")]
    HypothesisFailed { hypothesis: Hypothesis, detail: String },
    #[error("homomorphism is not bijective (injective: {injective}, surjective: {surjective})")]
    NotBijective { injective: bool, surjective: bool },
    #[error("not biseparating: the {} map sends the detached pair #{f}, #{g} to a pair that is not detached",
        if *.inverse { "inverse" } else { "forward" })]
    NotBiseparating { inverse: bool, f: usize, g: usize },
    #[error("representation check failed: {0}")]
    TheoremViolation(String),
    #[error(transparent)]
    FunctionGroup(#[from] FGroupError),
}

impl HomError {
    fn hypothesis(hypothesis: Hypothesis, detail: impl Into<String>) -> Self {
        HomError::HypothesisFailed { hypothesis, detail: detail.into() }
    }
}

/// A homomorphism `φ: A -> G` into the value group of `A`.
#[derive(Debug, Clone)]
pub struct PointHom {
    source: Arc<FunctionGroup>,
    values: Vec<Elem>,
}

/// Checks `φ(f * g_k) = φ(f) φ(g_k)` for every element `f` and generator
/// `g_k`, plus `φ(e) = e`. Every element is a word in the generators, so
/// this is equivalent to the law on all pairs.
fn check_law_on_generators<T: PartialEq + Copy>(
    source: &FunctionGroup,
    image: &[T],
    identity: T,
    mul: impl Fn(T, T) -> T,
) -> Result<(), HomError> {
    if image[source.identity_index()] != identity {
        return Err(HomError::NotHomomorphism { f: 0, g: 0 });
    }
    for f in 0..source.len() {
        for (k, &g) in source.generators().iter().enumerate() {
            let fg = source.right_mul_generator(f, k);
            if image[fg] != mul(image[f], image[g]) {
                return Err(HomError::NotHomomorphism { f, g });
            }
        }
    }
    Ok(())
}

impl PointHom {
    pub fn from_values(source: Arc<FunctionGroup>, values: Vec<Elem>) -> Result<Self, HomError> {
        if values.len() != source.len() {
            return Err(HomError::BadTableLength { len: values.len(), order: source.len() });
        }
        let group = source.group().clone();
        if let Some(i) = values.iter().position(|&v| v as usize >= group.order()) {
            return Err(HomError::ImageNotInTarget(i));
        }
        check_law_on_generators(&source, &values, group.identity(), |a, b| group.mul(a, b))?;
        Ok(PointHom { source, values })
    }

    pub fn from_fn(source: Arc<FunctionGroup>, phi: impl Fn(&PointMap) -> Elem) -> Result<Self, HomError> {
        let values = source.elements().iter().map(phi).collect();
        Self::from_values(source, values)
    }

    /// `δ_x`, evaluation at `x`.
    pub fn evaluation(source: Arc<FunctionGroup>, x: usize) -> Self {
        let values = source.elements().iter().map(|f| f.at(x)).collect();
        PointHom { source, values }
    }

    pub fn null(source: Arc<FunctionGroup>) -> Self {
        let e = source.group().identity();
        let values = vec![e; source.len()];
        PointHom { source, values }
    }

    /// `α ∘ φ` for an endomorphism `α` of the value group.
    pub fn then(&self, alpha: &GroupMorphism) -> Result<Self, HomError> {
        if alpha.source() != self.source.group() || alpha.target() != self.source.group() {
            return Err(HomError::GroupMismatch);
        }
        let values = self.values.iter().map(|&v| alpha.apply(v)).collect();
        Ok(PointHom { source: self.source.clone(), values })
    }

    pub fn source(&self) -> &Arc<FunctionGroup> {
        &self.source
    }

    pub fn values(&self) -> &[Elem] {
        &self.values
    }

    pub fn value(&self, i: usize) -> Elem {
        self.values[i]
    }

    fn vanishes(&self, i: usize) -> bool {
        self.values[i] == self.source.group().identity()
    }

    pub fn is_null(&self) -> bool {
        (0..self.values.len()).all(|i| self.vanishes(i))
    }

    /// Indices of the maps with `φ(f) != e`.
    fn support_of_values(&self) -> Vec<usize> {
        (0..self.values.len()).filter(|&i| !self.vanishes(i)).collect()
    }

    /// First pair (in element order) of separated maps with both images
    /// nontrivial.
    pub fn separating_violation(&self) -> Option<(usize, usize)> {
        let live = self.support_of_values();
        let a = &self.source;
        live.iter()
            .enumerate()
            .flat_map(|(k, &i)| live[k + 1..].iter().map(move |&j| (i, j)))
            .find(|&(i, j)| a.separated(i, j))
    }

    pub fn is_separating(&self) -> bool {
        self.separating_violation().is_none()
    }

    /// As [`Self::separating_violation`], with detached in place of separated.
    pub fn weak_separating_violation(&self) -> Result<Option<(usize, usize)>, HomError> {
        let live = self.support_of_values();
        for (k, &i) in live.iter().enumerate() {
            for &j in &live[k + 1..] {
                if self.source.detached(i, j)? {
                    return Ok(Some((i, j)));
                }
            }
        }
        Ok(None)
    }

    pub fn is_weakly_separating(&self) -> Result<bool, HomError> {
        Ok(self.weak_separating_violation()?.is_none())
    }

    /// First pair `f, g` (allowing `f = g`) with `Z(f) ∩ Z(g) = ∅` and both
    /// images trivial.
    pub fn non_vanishing_violation(&self) -> Option<(usize, usize)> {
        let a = &self.source;
        let dead: Vec<usize> = (0..self.values.len()).filter(|&i| self.vanishes(i)).collect();
        dead.iter()
            .enumerate()
            .flat_map(|(k, &i)| dead[k..].iter().map(move |&j| (i, j)))
            .find(|&(i, j)| a.zero(i).is_disjoint(a.zero(j)))
    }

    pub fn is_non_vanishing(&self) -> bool {
        self.non_vanishing_violation().is_none()
    }
}

/// How a [`GroupHom`] was presented.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum HomOrigin {
    GeneratorImages,
    ExplicitTable,
}

/// A homomorphism `H: A -> B` between function groups over the same `G`,
/// stored as a full table of target element indices.
#[derive(Debug, Clone)]
pub struct GroupHom {
    source: Arc<FunctionGroup>,
    target: Arc<FunctionGroup>,
    mapping: Vec<usize>,
    origin: HomOrigin,
}

impl GroupHom {
    fn check_groups(source: &FunctionGroup, target: &FunctionGroup) -> Result<(), HomError> {
        if source.group() != target.group() {
            return Err(HomError::GroupMismatch);
        }
        Ok(())
    }

    /// Extends `source map -> target map` pairs to all of `A` along the
    /// Cayley graph of the pair sources, rejecting any inconsistency with
    /// the two words that reach the same element.
    pub fn from_images(
        source: Arc<FunctionGroup>,
        target: Arc<FunctionGroup>,
        pairs: &[(PointMap, PointMap)],
    ) -> Result<Self, HomError> {
        Self::check_groups(&source, &target)?;
        let mut steps = Vec::with_capacity(pairs.len());
        for (k, (s, t)) in pairs.iter().enumerate() {
            let s = source.index_of(s).ok_or(HomError::PairNotInSource(k))?;
            let t = target.index_of(t).ok_or(HomError::PairNotInTarget(k))?;
            steps.push((s, t));
        }

        let mut mapping: Vec<Option<usize>> = vec![None; source.len()];
        // Breadth-first tree: parent element and the pair that led here.
        let mut parent: Vec<Option<(usize, usize)>> = vec![None; source.len()];
        let word = |parent: &[Option<(usize, usize)>], mut i: usize| {
            let mut w = Vec::new();
            while let Some((p, k)) = parent[i] {
                w.push(k);
                i = p;
            }
            w.reverse();
            w
        };
        mapping[source.identity_index()] = Some(target.identity_index());
        let mut queue = VecDeque::from([source.identity_index()]);
        while let Some(x) = queue.pop_front() {
            let hx = mapping[x].expect("queued elements are mapped");
            for (k, &(s, t)) in steps.iter().enumerate() {
                let y = source.product_index(x, s);
                let hy = target.product_index(hx, t);
                match mapping[y] {
                    None => {
                        mapping[y] = Some(hy);
                        parent[y] = Some((x, k));
                        queue.push_back(y);
                    }
                    Some(v) if v != hy => {
                        let mut left = word(&parent, x);
                        left.push(k);
                        return Err(HomError::InconsistentImages { left, right: word(&parent, y) });
                    }
                    Some(_) => {}
                }
            }
        }
        let reached = mapping.iter().filter(|m| m.is_some()).count();
        if reached != source.len() {
            return Err(HomError::PairsDoNotGenerate { reached, order: source.len() });
        }
        let mapping = mapping.into_iter().map(Option::unwrap).collect();
        Ok(GroupHom { source, target, mapping, origin: HomOrigin::GeneratorImages })
    }

    pub fn from_table(
        source: Arc<FunctionGroup>,
        target: Arc<FunctionGroup>,
        mapping: Vec<usize>,
    ) -> Result<Self, HomError> {
        Self::check_groups(&source, &target)?;
        if mapping.len() != source.len() {
            return Err(HomError::BadTableLength { len: mapping.len(), order: source.len() });
        }
        if let Some(i) = mapping.iter().position(|&m| m >= target.len()) {
            return Err(HomError::ImageNotInTarget(i));
        }
        check_law_on_generators(&source, &mapping, target.identity_index(), |a, b| target.product_index(a, b))?;
        Ok(GroupHom { source, target, mapping, origin: HomOrigin::ExplicitTable })
    }

    pub fn from_fn(
        source: Arc<FunctionGroup>,
        target: Arc<FunctionGroup>,
        map: impl Fn(&PointMap) -> PointMap,
    ) -> Result<Self, HomError> {
        let mapping = source
            .elements()
            .iter()
            .enumerate()
            .map(|(i, f)| target.index_of(&map(f)).ok_or(HomError::ImageNotInTarget(i)))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_table(source, target, mapping)
    }

    pub fn identity(a: Arc<FunctionGroup>) -> Self {
        let mapping = (0..a.len()).collect();
        GroupHom { source: a.clone(), target: a, mapping, origin: HomOrigin::ExplicitTable }
    }

    /// `Hf(y) = w[y](f(h(y)))`.
    pub fn weighted_composition(
        source: Arc<FunctionGroup>,
        target: Arc<FunctionGroup>,
        h: &[usize],
        weights: &[GroupMorphism],
    ) -> Result<Self, HomError> {
        if h.len() != weights.len() {
            return Err(HomError::WeightCountMismatch { weights: weights.len(), points: h.len() });
        }
        if weights.iter().any(|w| w.source() != source.group() || w.target() != source.group()) {
            return Err(HomError::GroupMismatch);
        }
        Self::from_fn(source, target, |f| {
            PointMap::new(h.iter().zip(weights).map(|(&x, w)| w.apply(f.at(x))).collect())
        })
    }

    pub fn source(&self) -> &Arc<FunctionGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FunctionGroup> {
        &self.target
    }

    pub fn origin(&self) -> HomOrigin {
        self.origin
    }

    pub fn mapping(&self) -> &[usize] {
        &self.mapping
    }

    /// Index in `B` of `H(f_i)`.
    pub fn apply(&self, i: usize) -> usize {
        self.mapping[i]
    }

    /// `H(f_i)` as a map on `Y`.
    pub fn image(&self, i: usize) -> &PointMap {
        self.target.element(self.mapping[i])
    }

    /// `δ_y ∘ H`.
    pub fn coordinate(&self, y: usize) -> PointHom {
        let values = (0..self.source.len()).map(|i| self.image(i).at(y)).collect();
        PointHom { source: self.source.clone(), values }
    }

    pub fn is_injective(&self) -> bool {
        let mut hit = vec![false; self.target.len()];
        self.mapping.iter().all(|&m| !std::mem::replace(&mut hit[m], true))
    }

    pub fn is_surjective(&self) -> bool {
        let mut hit = vec![false; self.target.len()];
        for &m in &self.mapping {
            hit[m] = true;
        }
        hit.into_iter().all(|h| h)
    }

    pub fn is_bijective(&self) -> bool {
        self.source.len() == self.target.len() && self.is_injective()
    }

    pub fn inverse(&self) -> Result<GroupHom, HomError> {
        if !self.is_bijective() {
            return Err(HomError::NotBijective { injective: self.is_injective(), surjective: self.is_surjective() });
        }
        let mut mapping = vec![0; self.target.len()];
        for (i, &m) in self.mapping.iter().enumerate() {
            mapping[m] = i;
        }
        Ok(GroupHom { source: self.target.clone(), target: self.source.clone(), mapping, origin: self.origin })
    }

    /// First separated pair in `A` whose images are not separated in `B`.
    pub fn separating_violation(&self) -> Option<(usize, usize)> {
        let (a, b) = (&self.source, &self.target);
        (0..a.len())
            .flat_map(|i| (i + 1..a.len()).map(move |j| (i, j)))
            .find(|&(i, j)| a.separated(i, j) && !b.separated(self.mapping[i], self.mapping[j]))
    }

    pub fn is_separating(&self) -> bool {
        self.separating_violation().is_none()
    }

    /// First detached pair in `A` whose images are not detached in `B`.
    pub fn weak_separating_violation(&self) -> Result<Option<(usize, usize)>, HomError> {
        let (a, b) = (&self.source, &self.target);
        let (la, lb) = (a.lattices()?, b.lattices()?);
        let found = (0..a.len()).flat_map(|i| (i + 1..a.len()).map(move |j| (i, j))).find(|&(i, j)| {
            la.coz_hull(i).is_disjoint(la.coz_hull(j))
                && !lb.coz_hull(self.mapping[i]).is_disjoint(lb.coz_hull(self.mapping[j]))
        });
        Ok(found)
    }

    pub fn is_weakly_separating(&self) -> Result<bool, HomError> {
        Ok(self.weak_separating_violation()?.is_none())
    }
}

/// The controllability witness as a human-readable sentence.
pub(crate) fn describe_control_violation(a: &FunctionGroup, v: &ControlViolation) -> String {
    format!("f={} D1={} D2={}", a.element(v.f), v.d1, v.d2)
}
