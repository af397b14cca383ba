//! Controllability, normality and the finite-domain collapse of the largest
//! ω-extension.

use serde::Serialize;

use super::{FGroupError, FunctionGroup};
use crate::group::Elem;
use crate::subset::Subset;

/// A map and a disjoint pair of `D(A)` members for which no replica exists.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ControlViolation {
    pub f: usize,
    pub d1: Subset,
    pub d2: Subset,
}

/// A replica `f'` agreeing with `f` on `D1` and vanishing on `Z(f) ∪ (X \ E)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ControlWitness {
    pub f_prime: usize,
    pub e: Subset,
}

impl FunctionGroup {
    fn replica_ok(&self, f: usize, f_prime: usize, d1: Subset, e: Subset) -> bool {
        let zero_f = self.zero(f);
        self.cozero(f_prime).is_subset_of(e)
            && self.cozero(f_prime).is_disjoint(zero_f)
            && self.element(f_prime).agrees_on(self.element(f), d1)
    }

    /// The first `f'` in element order that replicates `f` on `d1` while
    /// avoiding `d2`, paired with the smallest admissible `E ∈ E(A)`.
    pub fn control_witness(&self, f: usize, d1: Subset, d2: Subset) -> Result<Option<ControlWitness>, FGroupError> {
        let lat = self.lattices()?;
        let allowed = d2.complement(self.domain_size());
        for f_prime in 0..self.len() {
            // E must contain D1 and coz(f'); the smallest such member of the
            // intersection-closed E(A) is its hull.
            let Some(e) = lat.e.hull(d1 | self.cozero(f_prime)) else {
                continue;
            };
            if e.is_subset_of(allowed) && self.replica_ok(f, f_prime, d1, e) {
                return Ok(Some(ControlWitness { f_prime, e }));
            }
        }
        Ok(None)
    }

    fn compute_control_violation(&self) -> Result<Option<ControlViolation>, FGroupError> {
        let lat = self.lattices()?;
        let n = self.domain_size();
        // Per pair, only the largest admissible E matters: a larger E only
        // weakens the vanishing requirement on f'.
        let pairs: Vec<(Subset, Subset, Option<(Subset, Vec<usize>)>)> = lat
            .disjoint_pairs()
            .map(|(d1, d2)| {
                let candidates = lat.e.largest_between(d1, d2.complement(n)).map(|e_max| {
                    let k: Vec<usize> = (0..self.len()).filter(|&g| self.cozero(g).is_subset_of(e_max)).collect();
                    (e_max, k)
                });
                (d1, d2, candidates)
            })
            .collect();

        for f in 0..self.len() {
            for (d1, d2, candidates) in &pairs {
                let ok = match candidates {
                    None => false,
                    Some((e_max, k)) => {
                        self.cozero(f).is_subset_of(*e_max)
                            || k.iter().any(|&g| self.replica_ok(f, g, *d1, *e_max))
                    }
                };
                if !ok {
                    return Ok(Some(ControlViolation { f, d1: *d1, d2: *d2 }));
                }
            }
        }
        Ok(None)
    }

    /// The first `(f, D1, D2)` in search order (maps in element order, then
    /// `D1`, then `D2` in family order) admitting no replica; `None` when the
    /// group is controllable.
    pub fn control_violation(&self) -> Result<Option<ControlViolation>, FGroupError> {
        self.control.get_or_init(|| self.compute_control_violation()).clone()
    }

    pub fn is_controllable(&self) -> Result<bool, FGroupError> {
        Ok(self.control_violation()?.is_none())
    }
}

/// Bounds on the shape of a normality certificate. `None` means `|X|`.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct NormalityConfig {
    pub max_terms: Option<usize>,
    pub max_literals: Option<usize>,
}

/// One factor `f⁻¹(F1)` of a term, with the disjoint companion set `F2`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Literal {
    pub f: usize,
    pub inside: Vec<Elem>,
    pub outside: Vec<Elem>,
}

/// Maps and disjoint value sets separating `D1` from `D2`:
/// `D1 ⊆ ∪_j ∩_i f_ij⁻¹(F1_ij)` and `D2 ⊆ ∩_j ∪_i f_ij⁻¹(F2_ij)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct NormalSeparation {
    pub d1: Subset,
    pub d2: Subset,
    pub terms: Vec<Vec<Literal>>,
}

impl NormalSeparation {
    pub fn max_literals(&self) -> usize {
        self.terms.iter().map(Vec::len).max().unwrap_or(0)
    }

    /// Evaluates both set expressions directly.
    pub fn verify(&self, a: &FunctionGroup) -> bool {
        let preimage = |f: usize, values: &[Elem]| -> Subset {
            let g = a.element(f);
            (0..a.domain_size()).filter(|&x| values.contains(&g.at(x))).collect()
        };
        let disjoint_values =
            self.terms.iter().flatten().all(|l| l.inside.iter().all(|v| !l.outside.contains(v)));
        let cover1 = self
            .terms
            .iter()
            .map(|t| t.iter().fold(a.domain(), |acc, l| acc & preimage(l.f, &l.inside)))
            .fold(Subset::EMPTY, |acc, s| acc | s);
        let cover2 = self
            .terms
            .iter()
            .map(|t| t.iter().fold(Subset::EMPTY, |acc, l| acc | preimage(l.f, &l.outside)))
            .fold(a.domain(), |acc, s| acc & s);
        !self.terms.is_empty()
            && self.terms.iter().all(|t| !t.is_empty())
            && disjoint_values
            && self.d1.is_subset_of(cover1)
            && self.d2.is_subset_of(cover2)
    }
}

/// A disjoint pair of `D(A)` members that no map configuration separates,
/// with two points (one from each side) that every map confuses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct NormalViolation {
    pub d1: Subset,
    pub d2: Subset,
    pub x: usize,
    pub y: usize,
}

/// Records that the largest ω-extension of `A*` was computed and compared.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ExtensionCertificate {
    pub order: usize,
    pub extension_order: usize,
    /// `A* = A`: every map into a finite group is bounded.
    pub bounded_part_is_whole: bool,
    /// The extension has exactly the elements of `A`.
    pub same_elements: bool,
}

impl FunctionGroup {
    /// Builds a separation of `d1` from `d2` one point of `d1` at a time:
    /// each term is an intersection of level sets `f⁻¹({f(x)})` that
    /// excludes all of `d2`, and the companion sets are the complements.
    /// Returns `None` if some point of `d1` is indistinguishable from a point
    /// of `d2`.
    pub fn normal_separation(
        &self,
        d1: Subset,
        d2: Subset,
        config: NormalityConfig,
    ) -> Result<Result<NormalSeparation, NormalViolation>, FGroupError> {
        let group = self.group();
        let full_value_set: Vec<Elem> = group.elements().collect();
        let level = |f: usize, x: usize| -> Literal {
            let v = self.element(f).at(x);
            Literal { f, inside: vec![v], outside: full_value_set.iter().copied().filter(|&u| u != v).collect() }
        };
        let preimage = |l: &Literal| -> Subset {
            let g = self.element(l.f);
            (0..self.domain_size()).filter(|&x| l.inside.contains(&g.at(x))).collect()
        };

        let mut terms: Vec<Vec<Literal>> = Vec::new();
        let mut covered = Subset::EMPTY;
        for x in d1.iter() {
            if covered.contains(x) {
                continue;
            }
            let mut term = Vec::new();
            let mut region = self.domain();
            let mut remaining = d2;
            while let Some(y) = remaining.iter().next() {
                let Some(f) = (0..self.len()).find(|&f| self.element(f).at(x) != self.element(f).at(y)) else {
                    return Ok(Err(NormalViolation { d1, d2, x, y }));
                };
                let lit = level(f, x);
                region = region & preimage(&lit);
                remaining = remaining & region;
                term.push(lit);
            }
            if term.is_empty() {
                // D2 is empty: the whole domain is a valid term.
                term.push(Literal { f: self.identity_index(), inside: full_value_set.clone(), outside: Vec::new() });
            }
            covered = covered | region;
            terms.push(term);
        }
        if terms.is_empty() {
            // D1 is empty: one term with an empty first side.
            terms.push(vec![Literal { f: self.identity_index(), inside: Vec::new(), outside: full_value_set }]);
        }

        let separation = NormalSeparation { d1, d2, terms };
        let n = self.domain_size();
        let max_terms = config.max_terms.unwrap_or(n);
        let max_literals = config.max_literals.unwrap_or(n);
        if separation.terms.len() > max_terms || separation.max_literals() > max_literals {
            return Err(FGroupError::SearchBoundExceeded {
                d1,
                d2,
                terms: separation.terms.len(),
                literals: separation.max_literals(),
            });
        }
        assert!(separation.verify(self), "constructed normality certificate failed verification");
        Ok(Ok(separation))
    }

    /// The first disjoint pair of `D(A)` members that cannot be separated.
    pub fn normality_violation(&self, config: NormalityConfig) -> Result<Option<NormalViolation>, FGroupError> {
        let lat = self.lattices()?;
        for (d1, d2) in lat.disjoint_pairs() {
            if let Err(v) = self.normal_separation(d1, d2, config)? {
                return Ok(Some(v));
            }
        }
        Ok(None)
    }

    pub fn is_normal(&self) -> Result<bool, FGroupError> {
        Ok(self.normality_violation(NormalityConfig::default())?.is_none())
    }

    /// `ext_ω(A*)`: all products of members of `A*` whose cozero sets form a
    /// locally finite family. On a finite domain such a family has only
    /// finitely many nonempty members, so the products are finite products
    /// and the extension is the subgroup generated by `A*` itself.
    pub fn omega_extension_closure(&self) -> Result<(FunctionGroup, ExtensionCertificate), FGroupError> {
        let bounded = self.bounded_part();
        let ext = FunctionGroup::generate(self.group().clone(), self.domain_size(), bounded.elements())?;
        let cert = ExtensionCertificate {
            order: self.len(),
            extension_order: ext.len(),
            bounded_part_is_whole: bounded.len() == self.len(),
            same_elements: ext.same_elements(self),
        };
        Ok((ext, cert))
    }
}

#[cfg(test)]
mod tests {
    use super::super::tests::{even_weight_z2_cube, pm, z};
    use super::*;
    use std::sync::Arc;

    use crate::group::FiniteGroup;

    /// Exhaustive oracle straight from the definition: every f, every
    /// disjoint pair, every (f', E) with E ∈ E(A).
    fn controllable_by_definition(a: &FunctionGroup) -> Option<(usize, Subset, Subset)> {
        let lat = a.lattices().unwrap();
        let n = a.domain_size();
        for f in 0..a.len() {
            for (d1, d2) in lat.disjoint_pairs() {
                let exists = (0..a.len()).any(|fp| {
                    lat.e.iter().any(|e| {
                        d1.is_subset_of(e)
                            && e.is_subset_of(d2.complement(n))
                            && a.element(fp).agrees_on(a.element(f), d1)
                            && a.element(fp).is_identity_on(a.zero(f) | e.complement(n), a.group())
                    })
                });
                if !exists {
                    return Some((f, d1, d2));
                }
            }
        }
        None
    }

    #[test]
    fn full_power_is_controllable() {
        let s3 = Arc::new(FiniteGroup::symmetric(3).unwrap());
        for (g, n) in [(z(2), 3), (z(3), 2), (z(4), 2), (s3, 2)] {
            let a = FunctionGroup::full_power(g, n).unwrap();
            assert_eq!(a.control_violation().unwrap(), None);
            assert_eq!(controllable_by_definition(&a), None);
        }
    }

    #[test]
    fn full_power_witness_is_restriction() {
        let a = FunctionGroup::full_power(z(3), 3).unwrap();
        let f = a.index_of(&pm(&[1, 2, 2])).unwrap();
        let d1: Subset = [0, 1].into_iter().collect();
        let w = a.control_witness(f, d1, Subset::singleton(2)).unwrap().unwrap();
        assert_eq!(a.element(w.f_prime), &pm(&[1, 2, 0]));
        assert_eq!(w.e, d1);
    }

    #[test]
    fn even_weight_cube_is_not_controllable() {
        let a = even_weight_z2_cube();
        let v = a.control_violation().unwrap().unwrap();
        assert_eq!(a.element(v.f), &pm(&[1, 1, 0]));
        assert_eq!(v.d1, Subset::singleton(0));
        assert_eq!(v.d2, Subset::singleton(1));
        let (f, d1, d2) = controllable_by_definition(&a).unwrap();
        assert_eq!((f, d1, d2), (v.f, v.d1, v.d2));
        assert_eq!(a.control_witness(v.f, v.d1, v.d2).unwrap(), None);
    }

    #[test]
    fn constants_are_vacuously_controllable_and_normal() {
        let a = FunctionGroup::constants(z(3), 3).unwrap();
        assert!(a.is_controllable().unwrap());
        assert_eq!(controllable_by_definition(&a), None);
        assert!(a.is_normal().unwrap());
    }

    #[test]
    fn controllability_agrees_with_definition_on_generated_groups() {
        let cases: Vec<FunctionGroup> = vec![
            FunctionGroup::generate(z(2), 4, &[pm(&[1, 1, 0, 0]), pm(&[0, 0, 1, 1]), pm(&[0, 1, 1, 0])]).unwrap(),
            FunctionGroup::generate(z(4), 3, &[pm(&[2, 1, 0]), pm(&[0, 2, 2])]).unwrap(),
            FunctionGroup::generate(z(3), 3, &[pm(&[1, 1, 1]), pm(&[0, 1, 2])]).unwrap(),
            FunctionGroup::generate(z(2), 3, &[pm(&[1, 1, 0]), pm(&[0, 0, 1])]).unwrap(),
        ];
        for a in &cases {
            let fast = a.control_violation().unwrap().map(|v| (v.f, v.d1, v.d2));
            assert_eq!(fast, controllable_by_definition(a));
        }
    }

    #[test]
    fn normality_certificates() {
        let full = FunctionGroup::full_power(z(2), 3).unwrap();
        assert!(full.is_normal().unwrap());
        let d1: Subset = [0].into_iter().collect();
        let d2: Subset = [1, 2].into_iter().collect();
        let sep = full.normal_separation(d1, d2, NormalityConfig::default()).unwrap().unwrap();
        assert!(sep.verify(&full));

        let cube = even_weight_z2_cube();
        assert!(cube.is_normal().unwrap());
        let sep = cube.normal_separation(Subset::singleton(0), Subset::singleton(1), NormalityConfig::default());
        assert!(sep.unwrap().unwrap().verify(&cube));

        // Non-D(A) sets holding two points the group cannot tell apart.
        let a = FunctionGroup::generate(z(2), 3, &[pm(&[1, 1, 0])]).unwrap();
        let v = a
            .normal_separation(Subset::singleton(0), Subset::singleton(1), NormalityConfig::default())
            .unwrap()
            .unwrap_err();
        assert_eq!((v.x, v.y), (0, 1));
    }

    #[test]
    fn normality_bound_is_an_error() {
        let full = FunctionGroup::full_power(z(2), 3).unwrap();
        let tight = NormalityConfig { max_terms: Some(1), max_literals: Some(1) };
        let err = full.normality_violation(tight).unwrap_err();
        assert!(matches!(err, FGroupError::SearchBoundExceeded { .. }));
    }

    #[test]
    fn tampered_certificate_fails_verification() {
        let full = FunctionGroup::full_power(z(2), 2).unwrap();
        let mut sep = full
            .normal_separation(Subset::singleton(0), Subset::singleton(1), NormalityConfig::default())
            .unwrap()
            .unwrap();
        sep.terms[0][0].outside = sep.terms[0][0].inside.clone();
        assert!(!sep.verify(&full));
    }

    #[test]
    fn omega_extension_collapses() {
        for a in [
            FunctionGroup::full_power(z(2), 3).unwrap(),
            even_weight_z2_cube(),
            FunctionGroup::generate(z(2), 3, &[pm(&[1, 0, 1])]).unwrap(),
        ] {
            let (ext, cert) = a.omega_extension_closure().unwrap();
            assert!(cert.same_elements && cert.bounded_part_is_whole);
            assert!(ext.same_elements(&a));
            let (again, _) = ext.omega_extension_closure().unwrap();
            assert!(again.same_elements(&ext));
        }
    }
}
