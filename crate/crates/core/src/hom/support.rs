//! Supports of point homomorphisms and the support map of `H: A -> B`.

use serde::Serialize;

use super::{GroupHom, HomError, PointHom};
use crate::subset::Subset;

/// Largest `|X|` for which minimal supports are enumerated exhaustively.
pub const MAX_SUPPORT_DOMAIN: usize = 20;

/// All minimal supports of a nonnull `φ`, in size-then-lex order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportReport {
    pub minimal_supports: Vec<Subset>,
    /// The intersection of all minimal supports, if that is itself a support.
    pub minimum: Option<Subset>,
    pub is_singleton: bool,
}

impl PointHom {
    /// Every `f` whose zero set contains `s` is sent to `e`.
    pub fn is_support(&self, s: Subset) -> bool {
        let a = self.source();
        (0..a.len()).all(|i| self.vanishes(i) || !s.is_subset_of(a.zero(i)))
    }

    /// As [`Self::is_support`] with `int(cl(Z(f)))` in place of `Z(f)`.
    pub fn is_weak_support(&self, s: Subset) -> bool {
        let a = self.source();
        (0..a.len()).all(|i| self.vanishes(i) || !s.is_subset_of(a.tau_interior(a.tau_closure(a.zero(i)))))
    }

    pub fn minimal_supports(&self) -> Result<SupportReport, HomError> {
        let a = self.source();
        let n = a.domain_size();
        if self.is_null() {
            return Err(HomError::NullHomomorphism);
        }
        if n > MAX_SUPPORT_DOMAIN {
            return Err(HomError::SupportSearchTooLarge(n));
        }
        let live: Vec<Subset> = (0..a.len()).filter(|&i| !self.vanishes(i)).map(|i| a.zero(i)).collect();
        let mut minimal: Vec<Subset> = Vec::new();
        for s in Subset::all_by_size(n) {
            if minimal.iter().any(|m| m.is_subset_of(s)) {
                continue;
            }
            if live.iter().all(|z| !s.is_subset_of(*z)) {
                minimal.push(s);
            }
        }
        let meet = minimal.iter().fold(Subset::full(n), |acc, &m| acc & m);
        let minimum = self.is_support(meet).then_some(meet);
        let is_singleton = minimum.is_some_and(|m| m.len() == 1);
        Ok(SupportReport { minimal_supports: minimal, minimum, is_singleton })
    }

    /// Points `x` with `{x}` a support, ascending.
    pub fn singleton_supports(&self) -> Vec<usize> {
        (0..self.source().domain_size()).filter(|&x| self.is_support(Subset::singleton(x))).collect()
    }
}

/// How the point `h(y)` is chosen from the supports of `δ_y ∘ H`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum SupportPolicy {
    /// The minimum support, which must be a singleton. Requires `H` weakly
    /// separating.
    #[default]
    Minimum,
    /// The lexicographically least injective choice of `h(y)` with `{h(y)}`
    /// a support. Requires `H` separating. Any singleton support gives a
    /// well-defined weight, which the weight map then confirms.
    SingletonMatching,
}

/// `h: Y' -> X` where `Y'` drops the points with `δ_y ∘ H` null.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SupportMap {
    pub h: Vec<Option<usize>>,
    pub policy: SupportPolicy,
    /// Reports per retained point; empty under [`SupportPolicy::SingletonMatching`].
    pub reports: Vec<Option<SupportReport>>,
}

impl SupportMap {
    pub fn retained(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.h.iter().enumerate().filter_map(|(y, x)| x.map(|x| (y, x)))
    }

    pub fn dropped(&self) -> Vec<usize> {
        self.h.iter().enumerate().filter(|(_, x)| x.is_none()).map(|(y, _)| y).collect()
    }

    pub fn is_total(&self) -> bool {
        self.h.iter().all(Option::is_some)
    }

    pub fn total(&self) -> Option<Vec<usize>> {
        self.h.iter().copied().collect()
    }

    pub fn is_onto(&self, domain_size: usize) -> bool {
        let mut hit = vec![false; domain_size];
        for (_, x) in self.retained() {
            hit[x] = true;
        }
        hit.into_iter().all(|b| b)
    }
}

impl GroupHom {
    pub fn support_map(&self) -> Result<SupportMap, HomError> {
        self.support_map_with(SupportPolicy::Minimum)
    }

    pub fn support_map_with(&self, policy: SupportPolicy) -> Result<SupportMap, HomError> {
        match policy {
            SupportPolicy::Minimum => {
                if let Some((f, g)) = self.weak_separating_violation()? {
                    return Err(HomError::NotWeaklySeparating { f, g });
                }
            }
            SupportPolicy::SingletonMatching => {
                if let Some((f, g)) = self.separating_violation() {
                    return Err(HomError::NotSeparating { f, g });
                }
            }
        }
        let m = self.target().domain_size();
        let mut coordinates = Vec::with_capacity(m);
        for y in 0..m {
            let phi = self.coordinate(y);
            if phi.is_null() {
                log::info!("point {y} dropped: its coordinate homomorphism is null");
                coordinates.push(None);
            } else {
                coordinates.push(Some(phi));
            }
        }
        match policy {
            SupportPolicy::Minimum => {
                let mut h = Vec::with_capacity(m);
                let mut reports = Vec::with_capacity(m);
                for (y, phi) in coordinates.iter().enumerate() {
                    let Some(phi) = phi else {
                        h.push(None);
                        reports.push(None);
                        continue;
                    };
                    let report = phi.minimal_supports()?;
                    match report.minimum {
                        Some(s) if report.is_singleton => h.push(s.iter().next()),
                        _ => return Err(HomError::NonSingletonSupport { y, minimal: report.minimal_supports }),
                    }
                    reports.push(Some(report));
                }
                Ok(SupportMap { h, policy, reports })
            }
            SupportPolicy::SingletonMatching => {
                let mut candidates = Vec::with_capacity(m);
                for (y, phi) in coordinates.iter().enumerate() {
                    let Some(phi) = phi else {
                        candidates.push(Vec::new());
                        continue;
                    };
                    let c = phi.singleton_supports();
                    if c.is_empty() {
                        let minimal = if self.source().domain_size() <= MAX_SUPPORT_DOMAIN {
                            phi.minimal_supports()?.minimal_supports
                        } else {
                            Vec::new()
                        };
                        return Err(HomError::NonSingletonSupport { y, minimal });
                    }
                    candidates.push(c);
                }
                let live: Vec<bool> = coordinates.iter().map(Option::is_some).collect();
                let h = least_matching(&candidates, &live, self.source().domain_size())
                    .ok_or(HomError::NoInjectiveSupportChoice)?;
                Ok(SupportMap { h, policy, reports: Vec::new() })
            }
        }
    }
}

/// Augmenting-path search: can every `y` in `rows` be matched to a free
/// column?
fn has_matching(candidates: &[Vec<usize>], rows: &[usize], taken: &[bool]) -> bool {
    fn augment(
        y: usize,
        candidates: &[Vec<usize>],
        taken: &[bool],
        owner: &mut [Option<usize>],
        seen: &mut [bool],
    ) -> bool {
        for &x in &candidates[y] {
            if taken[x] || seen[x] {
                continue;
            }
            seen[x] = true;
            if owner[x].is_none_or(|z| augment(z, candidates, taken, owner, seen)) {
                owner[x] = Some(y);
                return true;
            }
        }
        false
    }
    let mut owner = vec![None; taken.len()];
    rows.iter().all(|&y| augment(y, candidates, taken, &mut owner, &mut vec![false; taken.len()]))
}

/// Lexicographically least injective `h` with `h(y) ∈ candidates[y]` for
/// every live `y`.
fn least_matching(candidates: &[Vec<usize>], live: &[bool], n: usize) -> Option<Vec<Option<usize>>> {
    let rows: Vec<usize> = (0..candidates.len()).filter(|&y| live[y]).collect();
    let mut taken = vec![false; n];
    let mut h = vec![None; candidates.len()];
    for (k, &y) in rows.iter().enumerate() {
        let x = candidates[y].iter().copied().find(|&x| {
            if taken[x] {
                return false;
            }
            taken[x] = true;
            let ok = has_matching(candidates, &rows[k + 1..], &taken);
            taken[x] = false;
            ok
        })?;
        taken[x] = true;
        h[y] = Some(x);
    }
    Some(h)
}

#[cfg(test)]
mod tests {
    use std::sync::Arc;

    use super::super::tests::{full, pm, sum_of_two_points, z};
    use super::*;
    use crate::fgroup::{FunctionGroup, PointMap};
    use crate::group::{automorphism_group, FiniteGroup};

    fn set(v: &[usize]) -> Subset {
        v.iter().copied().collect()
    }

    /// Supports straight from the definition: every subset tested, then
    /// minimality by removing one point at a time.
    fn brute_minimal(phi: &PointHom) -> Vec<Subset> {
        let n = phi.source().domain_size();
        let mut out: Vec<Subset> = Subset::all_by_size(n)
            .into_iter()
            .filter(|&s| phi.is_support(s) && s.iter().all(|x| !phi.is_support(s.minus(Subset::singleton(x)))))
            .collect();
        out.sort_by(Subset::size_lex_cmp);
        out
    }

    #[test]
    fn evaluation_has_singleton_minimum() {
        let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
        for g in [z(2), z(3), s3] {
            let a = full(&g, 3);
            for x in 0..3 {
                for alpha in automorphism_group(&g) {
                    let phi = PointHom::evaluation(a.clone(), x).then(&alpha).unwrap();
                    let r = phi.minimal_supports().unwrap();
                    assert_eq!(r.minimal_supports, vec![Subset::singleton(x)]);
                    assert_eq!(r.minimum, Some(Subset::singleton(x)));
                    assert!(r.is_singleton);
                }
            }
        }
    }

    #[test]
    fn sum_has_pair_support() {
        let phi = sum_of_two_points();
        let r = phi.minimal_supports().unwrap();
        assert_eq!(r.minimal_supports, vec![set(&[0, 1])]);
        assert_eq!(r.minimum, Some(set(&[0, 1])));
        assert!(!r.is_singleton);
        assert_eq!(r.minimal_supports, brute_minimal(&phi));
    }

    #[test]
    fn null_is_rejected() {
        let a = full(&z(2), 2);
        assert_eq!(PointHom::null(a).minimal_supports().unwrap_err(), HomError::NullHomomorphism);
    }

    #[test]
    fn minimal_supports_match_brute_force() {
        let a = Arc::new(FunctionGroup::generate(z(2), 4, &[pm(&[1, 1, 0, 0]), pm(&[0, 1, 1, 1])]).unwrap());
        let g = a.group().clone();
        let phis = [
            PointHom::from_fn(a.clone(), |f| f.at(3)).unwrap(),
            PointHom::from_fn(a.clone(), |f| g.mul(f.at(0), f.at(2))).unwrap(),
            PointHom::from_fn(a.clone(), |f| g.mul(f.at(1), f.at(3))).unwrap(),
        ];
        for phi in &phis {
            let r = phi.minimal_supports().unwrap();
            assert_eq!(r.minimal_supports, brute_minimal(phi));
            for &s in &r.minimal_supports {
                assert_eq!(phi.is_weak_support(s), phi.is_support(s));
            }
        }
    }

    #[test]
    fn support_map_of_composition() {
        let a = full(&z(3), 3);
        let b = full(&z(3), 4);
        let h0 = [2, 0, 0, 1];
        let h = GroupHom::from_fn(a, b, |f| f.precompose(&h0)).unwrap();
        let m = h.support_map().unwrap();
        assert_eq!(m.total().unwrap(), h0.to_vec());
    }

    #[test]
    fn matching_resolves_repeated_columns() {
        // Columns 0 and 2 of every codeword agree, so {0} and {2} are both
        // supports wherever either is.
        let a = Arc::new(FunctionGroup::generate(z(2), 3, &[pm(&[1, 0, 1]), pm(&[0, 1, 0])]).unwrap());
        let h = GroupHom::from_fn(a.clone(), a, |f| f.precompose(&[2, 1, 0])).unwrap();
        let m = h.support_map_with(SupportPolicy::SingletonMatching).unwrap();
        assert_eq!(m.h, vec![Some(0), Some(1), Some(2)]);
        assert!(matches!(h.support_map().unwrap_err(), HomError::NonSingletonSupport { y: 0, .. }));
    }

    #[test]
    fn least_matching_backtracks() {
        let c = vec![vec![0, 1], vec![0]];
        assert_eq!(least_matching(&c, &[true, true], 2), Some(vec![Some(1), Some(0)]));
        assert_eq!(least_matching(&[vec![0], vec![0]], &[true, true], 2), None);
    }

    #[test]
    fn support_map_drops_null_points() {
        let a = full(&z(2), 2);
        let b = full(&z(2), 3);
        let zero = PointMap::constant(0, 2);
        let h = GroupHom::from_fn(a, b, |f| PointMap::new(vec![f.at(1), zero.at(0), f.at(0)])).unwrap();
        let m = h.support_map().unwrap();
        assert_eq!(m.h, vec![Some(1), None, Some(0)]);
        assert_eq!(m.dropped(), vec![1]);
        assert!(m.is_onto(2));
    }

    #[test]
    fn support_map_requires_separation() {
        let a = full(&z(2), 2);
        let b = full(&z(2), 1);
        let g = a.group().clone();
        let h = GroupHom::from_fn(a, b, |f| PointMap::new(vec![g.mul(f.at(0), f.at(1))])).unwrap();
        assert!(matches!(h.support_map().unwrap_err(), HomError::NotWeaklySeparating { .. }));
        assert!(matches!(
            h.support_map_with(SupportPolicy::SingletonMatching).unwrap_err(),
            HomError::NotSeparating { .. }
        ));
    }

}
