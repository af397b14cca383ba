//! Recovering `Hf(y) = w[y](f(h(y)))` from a homomorphism `H: A -> B`.

use std::sync::Arc;

use serde::Serialize;

use super::support::{SupportMap, SupportPolicy};
use super::{describe_control_violation, GroupHom, HomError, Hypothesis, Side};
use crate::fgroup::{FunctionGroup, PointMap};
use crate::group::{Elem, FiniteGroup, GroupMorphism};

/// A homomorphism defined on a subgroup of `G`, stored over all of `G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PartialMorphism {
    domain: Vec<Elem>,
    table: Vec<Option<Elem>>,
}

impl PartialMorphism {
    pub fn apply(&self, a: Elem) -> Option<Elem> {
        self.table[a as usize]
    }

    /// The subgroup on which the map is defined, ascending.
    pub fn domain(&self) -> &[Elem] {
        &self.domain
    }

    pub fn is_total(&self) -> bool {
        self.domain.len() == self.table.len()
    }

    pub fn to_morphism(&self, group: &Arc<FiniteGroup>) -> Option<GroupMorphism> {
        let image: Option<Vec<Elem>> = self.table.iter().copied().collect();
        GroupMorphism::new(group.clone(), group.clone(), image?).ok()
    }
}

/// `h` together with the weights `w[y]: G_{h(y)} -> G`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct WeightedComposition {
    pub h: Vec<Option<usize>>,
    pub weights: Vec<Option<PartialMorphism>>,
    /// Every `f` was checked against `Hf(y) = w[y](f(h(y)))`.
    pub verified: bool,
}

impl WeightedComposition {
    /// `w[y](f(h(y)))` at every `y`, the identity at dropped points.
    pub fn apply(&self, f: &PointMap, group: &FiniteGroup) -> Option<PointMap> {
        self.h
            .iter()
            .zip(&self.weights)
            .map(|(x, w)| match (x, w) {
                (Some(x), Some(w)) => w.apply(f.at(*x)),
                _ => Some(group.identity()),
            })
            .collect::<Option<Vec<_>>>()
            .map(PointMap::new)
    }

    /// Points `y` with `G_{h(y)}` a proper subgroup.
    pub fn partial_points(&self) -> Vec<usize> {
        self.weights
            .iter()
            .enumerate()
            .filter(|(_, w)| w.as_ref().is_some_and(|w| !w.is_total()))
            .map(|(y, _)| y)
            .collect()
    }
}

/// Outcome of one precondition check.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(tag = "status", content = "detail", rename_all = "lowercase")]
pub enum CheckStatus {
    Holds,
    Fails(String),
    Skipped,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HypothesisCheck {
    pub name: String,
    #[serde(flatten)]
    pub status: CheckStatus,
}

impl HypothesisCheck {
    fn new(name: impl ToString, status: CheckStatus) -> Self {
        HypothesisCheck { name: name.to_string(), status }
    }

    pub fn holds(&self) -> bool {
        self.status == CheckStatus::Holds
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RepresentOptions {
    pub policy: SupportPolicy,
    /// Fail with [`HomError::HypothesisFailed`] instead of only reporting.
    pub enforce_hypotheses: bool,
    pub check_controllability: bool,
}

impl Default for RepresentOptions {
    fn default() -> Self {
        RepresentOptions { policy: SupportPolicy::Minimum, enforce_hypotheses: true, check_controllability: true }
    }
}

impl RepresentOptions {
    /// Injective singleton supports, hypotheses reported but not enforced.
    pub fn lenient() -> Self {
        RepresentOptions { policy: SupportPolicy::SingletonMatching, enforce_hypotheses: false, check_controllability: false }
    }
}

#[derive(Debug, Clone)]
pub struct Representation {
    pub support: SupportMap,
    pub composition: WeightedComposition,
    /// `w[y]` as endomorphisms of `G`, for retained `y` with `G_{h(y)} = G`.
    pub endomorphisms: Vec<Option<GroupMorphism>>,
    pub contains_constants: bool,
    pub hypotheses: Vec<HypothesisCheck>,
}

#[derive(Debug, Clone)]
pub struct IsoRepresentation {
    pub forward: Representation,
    pub backward: Representation,
    /// `h: Y -> X`, a bijection.
    pub h: Vec<usize>,
    /// `k = h⁻¹: X -> Y`.
    pub k: Vec<usize>,
    /// `w[y] ∈ Aut(G)`.
    pub weights: Vec<GroupMorphism>,
    /// `ρ[x] ∈ Aut(G)` with `H⁻¹g(x) = ρ[x](g(k(x)))`.
    pub inverse_weights: Vec<GroupMorphism>,
    pub hypotheses: Vec<HypothesisCheck>,
}

fn function_group_check(a: &FunctionGroup) -> CheckStatus {
    if let Some(x) = a.first_uncovered_point() {
        CheckStatus::Fails(format!("every map vanishes at point {x}"))
    } else if let Some((x, y)) = a.first_unseparated_pair() {
        CheckStatus::Fails(format!("points {x} and {y} are not separated"))
    } else {
        CheckStatus::Holds
    }
}

fn dense_check(a: &FunctionGroup) -> CheckStatus {
    match a.first_sparse_point() {
        Some(x) => CheckStatus::Fails(format!("values at point {x} form a proper subgroup")),
        None => CheckStatus::Holds,
    }
}

fn control_check(a: &FunctionGroup, enabled: bool) -> Result<CheckStatus, HomError> {
    if !enabled {
        return Ok(CheckStatus::Skipped);
    }
    Ok(match a.control_violation()? {
        Some(v) => CheckStatus::Fails(describe_control_violation(a, &v)),
        None => CheckStatus::Holds,
    })
}

/// Records `(hypothesis, status)` and, when enforcing, fails on the first
/// violated one in the given order.
fn settle(
    checks: Vec<(Hypothesis, CheckStatus)>,
    enforce: bool,
) -> Result<Vec<HypothesisCheck>, HomError> {
    if enforce {
        if let Some((h, CheckStatus::Fails(detail))) = checks.iter().find(|(_, s)| matches!(s, CheckStatus::Fails(_))) {
            return Err(HomError::hypothesis(*h, detail.clone()));
        }
    }
    Ok(checks.into_iter().map(|(h, s)| HypothesisCheck::new(h, s)).collect())
}

impl GroupHom {
    /// The weights `w[y]` on `G_{h(y)} = δ_{h(y)}(A)`, read off from `H`.
    pub fn weight_map(&self, support: &SupportMap) -> Result<WeightedComposition, HomError> {
        let a = self.source();
        let g = a.group();
        let e = g.identity();
        let mut weights = Vec::with_capacity(support.h.len());
        for (y, x) in support.h.iter().enumerate() {
            let Some(x) = *x else {
                weights.push(None);
                continue;
            };
            let mut table: Vec<Option<Elem>> = vec![None; g.order()];
            let mut first: Vec<usize> = vec![usize::MAX; g.order()];
            for i in 0..a.len() {
                let (v, w) = (a.element(i).at(x) as usize, self.image(i).at(y));
                match table[v] {
                    None => {
                        table[v] = Some(w);
                        first[v] = i;
                    }
                    Some(prev) if prev != w => return Err(HomError::NotWellDefined { f: first[v], g: i, y }),
                    Some(_) => {}
                }
            }
            let domain = (0..g.order()).filter(|&v| table[v].is_some()).map(|v| v as Elem).collect();
            weights.push(Some(PartialMorphism { domain, table }));
        }
        let composition = WeightedComposition { h: support.h.clone(), weights, verified: false };
        let verified = (0..a.len()).all(|i| composition.apply(a.element(i), g).as_ref() == Some(self.image(i)));
        if !verified {
            return Err(HomError::TheoremViolation("weighted composition does not reproduce H".into()));
        }
        debug_assert!(support.h.iter().enumerate().all(|(y, x)| x.is_some()
            || (0..a.len()).all(|i| self.image(i).at(y) == e)));
        Ok(WeightedComposition { verified, ..composition })
    }

    pub fn represent(&self) -> Result<Representation, HomError> {
        self.represent_with(RepresentOptions::default())
    }

    pub fn represent_with(&self, options: RepresentOptions) -> Result<Representation, HomError> {
        let a = self.source();
        let checks = vec![
            (Hypothesis::FunctionGroup(Side::Source), function_group_check(a)),
            (Hypothesis::Controllable(Side::Source), control_check(a, options.check_controllability)?),
        ];
        let mut hypotheses = settle(checks, options.enforce_hypotheses)?;
        hypotheses.push(HypothesisCheck::new(Hypothesis::PointwiseDense(Side::Source), dense_check(a)));
        self.represent_from(self.support_map_with(options.policy)?, hypotheses)
    }

    fn represent_from(&self, support: SupportMap, hypotheses: Vec<HypothesisCheck>) -> Result<Representation, HomError> {
        let a = self.source();
        let composition = self.weight_map(&support)?;
        let endomorphisms = composition
            .weights
            .iter()
            .map(|w| w.as_ref().and_then(|w| w.to_morphism(a.group())))
            .collect();
        let contains_constants = a.contains_constants();
        let partial = composition.partial_points();
        if !partial.is_empty() {
            log::info!("weights at points {partial:?} are defined on proper subgroups only");
        }
        Ok(Representation { support, composition, endomorphisms, contains_constants, hypotheses })
    }

    pub fn represent_iso(&self) -> Result<IsoRepresentation, HomError> {
        self.represent_iso_with(RepresentOptions::default())
    }

    pub fn represent_iso_with(&self, options: RepresentOptions) -> Result<IsoRepresentation, HomError> {
        let inverse = self.inverse()?;
        let (a, b) = (self.source(), self.target());
        let checks = vec![
            (Hypothesis::FunctionGroup(Side::Source), function_group_check(a)),
            (Hypothesis::FunctionGroup(Side::Target), function_group_check(b)),
            (Hypothesis::PointwiseDense(Side::Source), dense_check(a)),
            (Hypothesis::PointwiseDense(Side::Target), dense_check(b)),
            (Hypothesis::Controllable(Side::Source), control_check(a, options.check_controllability)?),
            (Hypothesis::Controllable(Side::Target), control_check(b, options.check_controllability)?),
        ];
        let hypotheses = settle(checks, options.enforce_hypotheses)?;

        for (map, is_inverse) in [(self, false), (&inverse, true)] {
            let violation = match options.policy {
                SupportPolicy::Minimum => map.weak_separating_violation()?,
                SupportPolicy::SingletonMatching => map.separating_violation(),
            };
            if let Some((f, g)) = violation {
                return Err(HomError::NotBiseparating { inverse: is_inverse, f, g });
            }
        }

        let violation = |msg: &str| HomError::TheoremViolation(msg.to_string());
        let forward = self.represent_from(self.support_map_with(options.policy)?, hypotheses.clone())?;
        let h = forward.support.total().ok_or_else(|| violation("h is not defined everywhere"))?;
        let backward_support = match options.policy {
            // The minimum support is canonical, so read `h⁻¹` off `H⁻¹` independently.
            SupportPolicy::Minimum => inverse.support_map_with(options.policy)?,
            // A matching is a choice; `H⁻¹` must be represented over its inverse.
            SupportPolicy::SingletonMatching => {
                if h.len() != a.domain_size() {
                    return Err(violation("h is not a bijection"));
                }
                let mut k = vec![None; h.len()];
                for (y, &x) in h.iter().enumerate() {
                    k[x] = Some(y);
                }
                SupportMap { h: k, policy: options.policy, reports: Vec::new() }
            }
        };
        let backward = inverse.represent_from(backward_support, hypotheses.clone())?;
        let k = backward.support.total().ok_or_else(|| violation("h⁻¹ is not defined everywhere"))?;
        if h.len() != k.len() || (0..h.len()).any(|y| k[h[y]] != y) {
            return Err(violation("h is not a bijection with inverse read off from H⁻¹"));
        }
        let autos = |rep: &Representation| -> Result<Vec<GroupMorphism>, HomError> {
            rep.endomorphisms
                .iter()
                .map(|w| w.clone().filter(GroupMorphism::is_auto).ok_or_else(|| violation("a weight is not an automorphism")))
                .collect()
        };
        let weights = autos(&forward)?;
        let inverse_weights = autos(&backward)?;
        for (y, w) in weights.iter().enumerate() {
            let id = GroupMorphism::compose(&inverse_weights[h[y]], w).expect("same group");
            if id != GroupMorphism::identity(a.group()) {
                return Err(violation("ρ[h(y)] ∘ w[y] is not the identity"));
            }
        }
        Ok(IsoRepresentation { forward, backward, h, k, weights, inverse_weights, hypotheses })
    }
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::super::tests::{full, pm, z};
    use super::*;
    use crate::group::{automorphism_group, FiniteGroup};

    #[test]
    fn recovers_a_weighted_composition() {
        let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
        let a = full(&s3, 3);
        let autos = automorphism_group(&s3);
        let h = [2, 0, 1];
        let w = vec![autos[1].clone(), autos[0].clone(), autos[4].clone()];
        let hom = GroupHom::weighted_composition(a.clone(), a.clone(), &h, &w).unwrap();
        let iso = hom.represent_iso().unwrap();
        assert_eq!(iso.h, h.to_vec());
        assert_eq!(iso.weights, w);
        assert!(iso.hypotheses.iter().all(HypothesisCheck::holds));
        for (y, wy) in iso.weights.iter().enumerate() {
            let back = GroupMorphism::compose(&iso.inverse_weights[iso.h[y]], wy).unwrap();
            assert_eq!(back, GroupMorphism::identity(&s3));
        }
    }

    #[test]
    fn represent_with_dropped_point_and_endomorphism() {
        // Hf = (2·f(1), e, f(0)) over Z_4: w[0] is not injective.
        let g = z(4);
        let a = full(&g, 2);
        let b = full(&g, 3);
        let hom = GroupHom::from_fn(a.clone(), b, |f| {
            PointMap::new(vec![(2 * f.at(1)) % 4, 0, f.at(0)])
        })
        .unwrap();
        let rep = hom.represent().unwrap();
        assert_eq!(rep.support.h, vec![Some(1), None, Some(0)]);
        let w0 = rep.endomorphisms[0].as_ref().unwrap();
        assert_eq!(w0.image(), &[0, 2, 0, 2]);
        assert!(rep.endomorphisms[1].is_none());
        assert!(rep.composition.verified);
        assert!(rep.composition.partial_points().is_empty());
    }

    #[test]
    fn partial_weights_on_sparse_source() {
        // Values at each point lie in {0, 2} ⊂ Z_4.
        let a = Arc::new(FunctionGroup::generate(z(4), 2, &[pm(&[2, 0]), pm(&[0, 2])]).unwrap());
        let hom = GroupHom::identity(a.clone());
        let rep = hom.represent().unwrap();
        assert_eq!(rep.composition.partial_points(), vec![0, 1]);
        assert!(rep.endomorphisms.iter().all(Option::is_none));
        let w = rep.composition.weights[0].as_ref().unwrap();
        assert_eq!(w.domain(), &[0, 2]);
        assert_eq!(w.apply(2), Some(2));
        assert_eq!(w.apply(1), None);
    }

    #[test]
    fn iso_requires_bijection() {
        let a = full(&z(2), 2);
        let b = full(&z(2), 3);
        let hom = GroupHom::from_fn(a, b, |f| f.precompose(&[0, 1, 0])).unwrap();
        assert_eq!(hom.represent_iso().unwrap_err(), HomError::NotBijective { injective: true, surjective: false });
    }

    #[test]
    fn iso_rejects_uncontrollable_source() {
        let even = Arc::new(FunctionGroup::generate(z(2), 3, &[pm(&[1, 1, 0]), pm(&[0, 1, 1])]).unwrap());
        let err = GroupHom::identity(even).represent_iso().unwrap_err();
        assert!(matches!(err, HomError::HypothesisFailed { hypothesis: Hypothesis::Controllable(Side::Source), .. }));
    }

    #[test]
    fn iso_rejects_non_biseparating() {
        // (f0, f1) -> (f0, f0 + f1) on Z_2^2 is bijective but merges supports.
        let a = full(&z(2), 2);
        let hom = GroupHom::from_fn(a.clone(), a, |f| PointMap::new(vec![f.at(0), (f.at(0) + f.at(1)) % 2])).unwrap();
        assert!(matches!(hom.represent_iso().unwrap_err(), HomError::NotBiseparating { inverse: false, .. }));
    }

    #[test]
    fn lenient_options_skip_controllability() {
        let even = Arc::new(FunctionGroup::generate(z(2), 3, &[pm(&[1, 1, 0]), pm(&[0, 1, 1])]).unwrap());
        let swap = GroupHom::from_fn(even.clone(), even, |f| f.precompose(&[1, 0, 2])).unwrap();
        let iso = swap.represent_iso_with(RepresentOptions::lenient()).unwrap();
        assert_eq!(iso.h, vec![1, 0, 2]);
        assert!(iso.hypotheses.iter().any(|c| c.status == CheckStatus::Skipped));
    }
}
