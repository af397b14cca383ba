//! Function groups: subgroups `A` of `G^X` for a finite group `G` and a
//! finite domain `X`, together with the set lattices they induce on `X` and
//! decision procedures for the hypotheses used by the representation engine.

mod hypotheses;
mod lattice;

use std::collections::{HashMap, VecDeque};
use std::fmt;
use std::sync::{Arc, OnceLock};

use thiserror::Error;

use crate::group::{Elem, FiniteGroup};
use crate::subset::{Subset, MAX_DOMAIN};

pub use hypotheses::{
    ControlViolation, ControlWitness, ExtensionCertificate, Literal, NormalSeparation, NormalityConfig,
    NormalViolation,
};
pub use lattice::Lattices;

/// Default bound on the number of elements produced by [`FunctionGroup::generate`].
pub const DEFAULT_MAX_CLOSURE: usize = 1_000_000;

/// Bound on the size of any set family computed from a function group.
pub const MAX_FAMILY: usize = 1 << 20;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FGroupError {
    #[error("the domain X must contain at least one point")]
    EmptyDomain,
    #[error("domain of size {0} exceeds the supported maximum of {MAX_DOMAIN}")]
    DomainTooLarge(usize),
    #[error("map #{index} has {len} values, expected {expected}")]
    BadMapLength { index: usize, len: usize, expected: usize },
    #[error("map #{index} has value {value} at point {point}, which is not a group element")]
    BadMapValue { index: usize, point: usize, value: usize },
    #[error("closure exceeds the bound of {0} elements")]
    TooLarge(usize),
    #[error("set family exceeds the bound of {0} subsets")]
    FamilyTooLarge(usize),
    #[error(
        "normality search bound exceeded for D1={d1}, D2={d2}: needs {terms} terms of up to {literals} literals"
    )]
    SearchBoundExceeded { d1: Subset, d2: Subset, terms: usize, literals: usize },
}

/// An element of `G^X`, stored as the vector of its values.
#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PointMap(Box<[Elem]>);

impl PointMap {
    pub fn new(values: Vec<Elem>) -> Self {
        PointMap(values.into_boxed_slice())
    }

    pub fn constant(value: Elem, domain_size: usize) -> Self {
        PointMap(vec![value; domain_size].into_boxed_slice())
    }

    pub fn domain_size(&self) -> usize {
        self.0.len()
    }

    pub fn values(&self) -> &[Elem] {
        &self.0
    }

    #[inline]
    pub fn at(&self, x: usize) -> Elem {
        self.0[x]
    }

    /// `Z(f)`: the points where `f` takes the identity value.
    pub fn zero_set(&self, group: &FiniteGroup) -> Subset {
        let e = group.identity();
        self.0.iter().enumerate().filter(|(_, &v)| v == e).map(|(x, _)| x).collect()
    }

    /// `coz(f) = X \ Z(f)`.
    pub fn cozero_set(&self, group: &FiniteGroup) -> Subset {
        let e = group.identity();
        self.0.iter().enumerate().filter(|(_, &v)| v != e).map(|(x, _)| x).collect()
    }

    pub fn mul(&self, other: &PointMap, group: &FiniteGroup) -> PointMap {
        PointMap(self.0.iter().zip(other.0.iter()).map(|(&a, &b)| group.mul(a, b)).collect())
    }

    pub fn inv(&self, group: &FiniteGroup) -> PointMap {
        PointMap(self.0.iter().map(|&a| group.inv(a)).collect())
    }

    /// `f ∘ h` for a point map `h: Y -> X` given as a vector.
    pub fn precompose(&self, h: &[usize]) -> PointMap {
        PointMap(h.iter().map(|&x| self.0[x]).collect())
    }

    pub fn agrees_on(&self, other: &PointMap, s: Subset) -> bool {
        s.iter().all(|x| self.0[x] == other.0[x])
    }

    pub fn is_identity_on(&self, s: Subset, group: &FiniteGroup) -> bool {
        s.iter().all(|x| self.0[x] == group.identity())
    }
}

impl fmt::Display for PointMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("(")?;
        for (i, v) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{v}")?;
        }
        f.write_str(")")
    }
}

impl fmt::Debug for PointMap {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

/// A finite subgroup `A` of `G^X`.
///
/// Elements are kept in the order the closure discovered them: the identity
/// map first, then breadth-first by right multiplication with the generators.
/// All witness searches iterate in this order.
pub struct FunctionGroup {
    group: Arc<FiniteGroup>,
    domain_size: usize,
    elements: Vec<PointMap>,
    index: HashMap<PointMap, usize>,
    generators: Vec<usize>,
    /// `right_mul[i][k]` is the index of `elements[i] * generator k`.
    right_mul: Vec<Vec<u32>>,
    coz: Vec<Subset>,
    lattices: OnceLock<Result<Arc<Lattices>, FGroupError>>,
    control: OnceLock<Result<Option<ControlViolation>, FGroupError>>,
    cells: OnceLock<Vec<Subset>>,
}

impl FunctionGroup {
    /// The subgroup of `G^X` generated by `generators`, with the default bound.
    pub fn generate(
        group: Arc<FiniteGroup>,
        domain_size: usize,
        generators: &[PointMap],
    ) -> Result<Self, FGroupError> {
        Self::generate_bounded(group, domain_size, generators, DEFAULT_MAX_CLOSURE)
    }

    /// The subgroup generated by `generators`, failing with
    /// [`FGroupError::TooLarge`] once more than `max_elements` are found.
    pub fn generate_bounded(
        group: Arc<FiniteGroup>,
        domain_size: usize,
        generators: &[PointMap],
        max_elements: usize,
    ) -> Result<Self, FGroupError> {
        if domain_size == 0 {
            return Err(FGroupError::EmptyDomain);
        }
        if domain_size > MAX_DOMAIN {
            return Err(FGroupError::DomainTooLarge(domain_size));
        }
        for (index, g) in generators.iter().enumerate() {
            if g.domain_size() != domain_size {
                return Err(FGroupError::BadMapLength { index, len: g.domain_size(), expected: domain_size });
            }
            if let Some((point, &v)) = g.values().iter().enumerate().find(|(_, &v)| v as usize >= group.order()) {
                return Err(FGroupError::BadMapValue { index, point, value: v as usize });
            }
        }

        let identity = PointMap::constant(group.identity(), domain_size);
        let mut elements = vec![identity.clone()];
        let mut index = HashMap::from([(identity, 0usize)]);
        let mut right_mul: Vec<Vec<u32>> = Vec::new();
        let mut queue = VecDeque::from([0usize]);
        while let Some(i) = queue.pop_front() {
            let mut row = Vec::with_capacity(generators.len());
            for g in generators {
                let product = elements[i].mul(g, &group);
                let j = match index.get(&product) {
                    Some(&j) => j,
                    None => {
                        if elements.len() >= max_elements {
                            return Err(FGroupError::TooLarge(max_elements));
                        }
                        let j = elements.len();
                        index.insert(product.clone(), j);
                        elements.push(product);
                        queue.push_back(j);
                        j
                    }
                };
                row.push(j as u32);
            }
            debug_assert_eq!(right_mul.len(), i);
            right_mul.push(row);
        }
        let generators = generators.iter().map(|g| index[g]).collect();
        let coz = elements.iter().map(|f| f.cozero_set(&group)).collect();
        Ok(FunctionGroup {
            group,
            domain_size,
            elements,
            index,
            generators,
            right_mul,
            coz,
            lattices: OnceLock::new(),
            control: OnceLock::new(),
            cells: OnceLock::new(),
        })
    }

    /// The full power `G^X`, generated by the maps that carry one generator
    /// of `G` at one point and the identity elsewhere.
    pub fn full_power(group: Arc<FiniteGroup>, domain_size: usize) -> Result<Self, FGroupError> {
        let e = group.identity();
        let mut gens = Vec::new();
        for x in 0..domain_size {
            for g in group.generating_set() {
                let mut values = vec![e; domain_size];
                values[x] = g;
                gens.push(PointMap::new(values));
            }
        }
        Self::generate(group, domain_size, &gens)
    }

    /// The constant maps.
    pub fn constants(group: Arc<FiniteGroup>, domain_size: usize) -> Result<Self, FGroupError> {
        let gens: Vec<PointMap> =
            group.generating_set().into_iter().map(|g| PointMap::constant(g, domain_size)).collect();
        Self::generate(group, domain_size, &gens)
    }

    pub fn group(&self) -> &Arc<FiniteGroup> {
        &self.group
    }

    pub fn domain_size(&self) -> usize {
        self.domain_size
    }

    pub fn domain(&self) -> Subset {
        Subset::full(self.domain_size)
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn elements(&self) -> &[PointMap] {
        &self.elements
    }

    pub fn element(&self, i: usize) -> &PointMap {
        &self.elements[i]
    }

    pub fn index_of(&self, f: &PointMap) -> Option<usize> {
        self.index.get(f).copied()
    }

    pub fn contains(&self, f: &PointMap) -> bool {
        self.index.contains_key(f)
    }

    /// Index of the identity map (always 0).
    pub fn identity_index(&self) -> usize {
        0
    }

    /// Indices of the generators, in the order they were supplied.
    pub fn generators(&self) -> &[usize] {
        &self.generators
    }

    /// Index of `elements[i] * generators[k]`.
    pub fn right_mul_generator(&self, i: usize, k: usize) -> usize {
        self.right_mul[i][k] as usize
    }

    pub fn product_index(&self, i: usize, j: usize) -> usize {
        let p = self.elements[i].mul(&self.elements[j], &self.group);
        self.index[&p]
    }

    pub fn inverse_index(&self, i: usize) -> usize {
        self.index[&self.elements[i].inv(&self.group)]
    }

    pub fn cozero(&self, i: usize) -> Subset {
        self.coz[i]
    }

    pub fn zero(&self, i: usize) -> Subset {
        self.coz[i].complement(self.domain_size)
    }

    /// Same group, same domain, same element set.
    pub fn same_elements(&self, other: &FunctionGroup) -> bool {
        self.group == other.group
            && self.domain_size == other.domain_size
            && self.len() == other.len()
            && self.elements.iter().all(|f| other.contains(f))
    }

    /// `X = ∪ coz(f)`.
    pub fn is_faithful(&self) -> bool {
        self.coz.iter().fold(Subset::EMPTY, |acc, &c| acc | c) == self.domain()
    }

    /// For all `x1 != x2` some `f` has `f(x1) != f(x2)`.
    pub fn separates_points(&self) -> bool {
        self.first_unseparated_pair().is_none()
    }

    pub fn first_unseparated_pair(&self) -> Option<(usize, usize)> {
        let n = self.domain_size;
        (0..n)
            .flat_map(|a| (a + 1..n).map(move |b| (a, b)))
            .find(|&(a, b)| self.elements.iter().all(|f| f.at(a) == f.at(b)))
    }

    pub fn first_uncovered_point(&self) -> Option<usize> {
        self.coz.iter().fold(Subset::EMPTY, |acc, &c| acc | c).complement(self.domain_size).iter().next()
    }

    pub fn is_function_group(&self) -> bool {
        self.is_faithful() && self.separates_points()
    }

    /// The evaluation image `δ_x(A) = {f(x) : f ∈ A}` as a sorted list.
    pub fn values_at(&self, x: usize) -> Vec<Elem> {
        let mut hit = vec![false; self.group.order()];
        for f in &self.elements {
            hit[f.at(x) as usize] = true;
        }
        self.group.elements().filter(|&a| hit[a as usize]).collect()
    }

    /// With `G` discrete, `δ_x(A)` is dense exactly when it is all of `G`.
    pub fn is_pointwise_dense(&self) -> bool {
        self.first_sparse_point().is_none()
    }

    pub fn first_sparse_point(&self) -> Option<usize> {
        (0..self.domain_size).find(|&x| self.values_at(x).len() != self.group.order())
    }

    pub fn contains_constants(&self) -> bool {
        self.group.elements().all(|a| self.contains(&PointMap::constant(a, self.domain_size)))
    }

    /// `A*`, the bounded maps. Every map into a finite group has finite
    /// range, so this is the whole group; kept so that statements about
    /// `A*` read the same as statements about `A`.
    pub fn bounded_part(&self) -> &FunctionGroup {
        self
    }
}

impl fmt::Debug for FunctionGroup {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("FunctionGroup")
            .field("group_order", &self.group.order())
            .field("domain_size", &self.domain_size)
            .field("order", &self.elements.len())
            .field("generators", &self.generators)
            .finish()
    }
}
