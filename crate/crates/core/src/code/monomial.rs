//! Monomial equivalence of codes: maps `c ↦ (y ↦ λ_y · c(σ(y)))`.

use std::cmp::Ordering;
use std::fmt;

use serde::Serialize;

use super::{inverses, rref, CodeError, LinearCode};
use crate::fgroup::PointMap;
use crate::group::{Elem, FiniteGroup};
use crate::hom::{GroupHom, HomError, RepresentOptions, SupportMap, SupportPolicy, WeightedComposition};

/// `(Tc)(y) = λ_y · c(σ(y))`. Ordered lexicographically by the sequence
/// `(σ_0, λ_0), (σ_1, λ_1), ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MonomialWitness {
    pub sigma: Vec<usize>,
    pub lambda: Vec<Elem>,
}

impl MonomialWitness {
    pub fn identity(n: usize) -> Self {
        MonomialWitness { sigma: (0..n).collect(), lambda: vec![1; n] }
    }

    pub fn apply(&self, c: &PointMap, p: usize) -> PointMap {
        PointMap::new(
            self.sigma.iter().zip(&self.lambda).map(|(&x, &l)| (l as usize * c.at(x) as usize % p) as Elem).collect(),
        )
    }

    /// Every codeword of `c1` maps into `c2`, and the map is a bijection.
    pub fn verify(&self, c1: &LinearCode, c2: &LinearCode) -> bool {
        let n = c1.n();
        if c1.p() != c2.p() || n != c2.n() || self.sigma.len() != n || self.lambda.len() != n {
            return false;
        }
        let mut hit = vec![false; n];
        if self.sigma.iter().any(|&x| x >= n || std::mem::replace(&mut hit[x], true)) {
            return false;
        }
        if self.lambda.iter().any(|&l| l == 0 || l as usize >= c1.p()) {
            return false;
        }
        let mut seen = vec![false; c2.codewords().len()];
        c1.codewords().iter().all(|c| match c2.as_fgroup().index_of(&self.apply(c, c1.p())) {
            Some(j) => !std::mem::replace(&mut seen[j], true),
            None => false,
        }) && seen.into_iter().all(|s| s)
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: &MonomialWitness, inner: &MonomialWitness, p: usize) -> MonomialWitness {
        let sigma = outer.sigma.iter().map(|&x| inner.sigma[x]).collect();
        let lambda = outer
            .sigma
            .iter()
            .zip(&outer.lambda)
            .map(|(&x, &l)| (l as usize * inner.lambda[x] as usize % p) as Elem)
            .collect();
        MonomialWitness { sigma, lambda }
    }

    pub fn inverse(&self, p: usize) -> MonomialWitness {
        let inv = inverses(p);
        let n = self.sigma.len();
        let mut sigma = vec![0; n];
        let mut lambda = vec![0; n];
        for (y, &x) in self.sigma.iter().enumerate() {
            sigma[x] = y;
            lambda[x] = inv[self.lambda[y] as usize];
        }
        MonomialWitness { sigma, lambda }
    }
}

impl Ord for MonomialWitness {
    fn cmp(&self, other: &Self) -> Ordering {
        let pairs = |w: &MonomialWitness| w.sigma.iter().copied().zip(w.lambda.iter().copied()).collect::<Vec<_>>();
        pairs(self).cmp(&pairs(other))
    }
}

impl PartialOrd for MonomialWitness {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for MonomialWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: Vec<String>| v.join(" ");
        writeln!(f, "sigma: {}", join(self.sigma.iter().map(ToString::to_string).collect()))?;
        write!(f, "lambda: {}", join(self.lambda.iter().map(ToString::to_string).collect()))
    }
}

/// The projection of a code onto a prefix of its coordinates.
struct PrefixSpace {
    rows: Vec<Vec<Elem>>,
    pivots: Vec<usize>,
}

impl PrefixSpace {
    fn contains(&self, v: &mut [Elem], p: usize) -> bool {
        for (row, &c) in self.rows.iter().zip(&self.pivots) {
            let coef = v[c] as usize;
            if coef != 0 {
                for (a, &b) in v.iter_mut().zip(row) {
                    *a = ((*a as usize + p - coef * b as usize % p) % p) as Elem;
                }
            }
        }
        v.iter().all(|&a| a == 0)
    }
}

struct Search<'a> {
    p: usize,
    n: usize,
    rows: &'a [Vec<Elem>],
    /// `prefixes[t]` spans the first `t + 1` coordinates of the target code.
    prefixes: Vec<PrefixSpace>,
    /// Source columns with the same profile as each target column.
    candidates: Vec<Vec<usize>>,
    used: Vec<bool>,
    sigma: Vec<usize>,
    lambda: Vec<Elem>,
    /// Partial images of the source generator rows.
    images: Vec<Vec<Elem>>,
    scratch: Vec<Elem>,
    found: Vec<MonomialWitness>,
    find_all: bool,
}

impl Search<'_> {
    fn prefix_ok(&mut self, y: usize) -> bool {
        for img in &self.images {
            self.scratch.clear();
            self.scratch.extend_from_slice(&img[..=y]);
            if !self.prefixes[y].contains(&mut self.scratch, self.p) {
                return false;
            }
        }
        true
    }

    /// Positions are assigned in index order and choices are tried in
    /// increasing `(σ_y, λ_y)`, so the first leaf is the least witness.
    fn dfs(&mut self, y: usize) -> bool {
        if y == self.n {
            self.found.push(MonomialWitness { sigma: self.sigma.clone(), lambda: self.lambda.clone() });
            return !self.find_all;
        }
        for ci in 0..self.candidates[y].len() {
            let x = self.candidates[y][ci];
            if self.used[x] {
                continue;
            }
            self.used[x] = true;
            self.sigma.push(x);
            for l in 1..self.p {
                for (img, row) in self.images.iter_mut().zip(self.rows) {
                    img.push((l * row[x] as usize % self.p) as Elem);
                }
                self.lambda.push(l as Elem);
                let stop = self.prefix_ok(y) && self.dfs(y + 1);
                self.lambda.pop();
                for img in &mut self.images {
                    img.pop();
                }
                if stop {
                    return true;
                }
            }
            self.sigma.pop();
            self.used[x] = false;
        }
        false
    }
}

fn search(c1: &LinearCode, c2: &LinearCode, find_all: bool) -> Result<Vec<MonomialWitness>, CodeError> {
    if c1.p() != c2.p() {
        return Err(CodeError::FieldMismatch(c1.p(), c2.p()));
    }
    if c1.n() != c2.n() {
        return Err(CodeError::LengthMismatch(c1.n(), c2.n()));
    }
    if c1.k() != c2.k() || c1.weight_enumerator() != c2.weight_enumerator() {
        return Ok(Vec::new());
    }
    let (p, n) = (c1.p(), c1.n());
    let (prof1, prof2) = (c1.column_profiles(), c2.column_profiles());
    let candidates: Vec<Vec<usize>> = prof2.iter().map(|q| (0..n).filter(|&x| prof1[x] == *q).collect()).collect();
    let prefixes = (0..n)
        .map(|t| {
            let cols: Vec<Vec<Elem>> = c2.generator_rows().iter().map(|r| r[..=t].to_vec()).collect();
            let (rows, pivots) = rref(p, &cols, t + 1);
            PrefixSpace { rows, pivots }
        })
        .collect();
    let mut s = Search {
        p,
        n,
        rows: c1.generator_rows(),
        prefixes,
        candidates,
        used: vec![false; n],
        sigma: Vec::with_capacity(n),
        lambda: Vec::with_capacity(n),
        images: vec![Vec::with_capacity(n); c1.k()],
        scratch: Vec::with_capacity(n),
        found: Vec::new(),
        find_all,
    };
    s.dfs(0);
    for w in &s.found {
        assert!(w.verify(c1, c2), "search produced a witness that does not map the code");
    }
    Ok(s.found)
}

/// The least monomial map carrying `c1` onto `c2`, if any.
pub fn monomial_equivalence(c1: &LinearCode, c2: &LinearCode) -> Result<Option<MonomialWitness>, CodeError> {
    Ok(search(c1, c2, false)?.into_iter().next())
}

/// All monomial self-maps of `c`, in increasing order.
pub fn code_automorphisms(c: &LinearCode) -> Vec<MonomialWitness> {
    search(c, c, true).expect("a code matches itself")
}

fn field_order(h: &GroupHom) -> Result<usize, CodeError> {
    let g = h.source().group();
    let p = g.order();
    if !super::is_prime(p) || **g != FiniteGroup::cyclic(p).expect("valid order") {
        return Err(CodeError::NotCodeHom);
    }
    Ok(p)
}

/// Checks that a bijective weight-preserving `H` between two codes is a
/// weighted composition with `h` bijective and every weight a nonzero
/// scaling, and returns it together with the equivalent monomial map.
pub fn verify_isometry_is_monomial(h: &GroupHom) -> Result<(WeightedComposition, MonomialWitness), CodeError> {
    let p = field_order(h)?;
    let (a, b) = (h.source(), h.target());
    for i in 0..a.len() {
        let (weight, image_weight) = (a.cozero(i).len(), b.cozero(h.apply(i)).len());
        if weight != image_weight {
            return Err(CodeError::NotIsometry { codeword: a.element(i).clone(), weight, image_weight });
        }
    }
    let degenerate = a.first_uncovered_point().is_some() || b.first_uncovered_point().is_some();
    let (composition, sigma, lambda) = if !degenerate {
        let iso = h.represent_iso_with(RepresentOptions::lenient())?;
        let lambda = iso.weights.iter().map(|w| w.apply(1)).collect();
        (iso.forward.composition, iso.h, lambda)
    } else {
        // Zero columns carry no information; pair them up in order.
        let inverse = h.inverse()?;
        for (map, inverse) in [(h, false), (&inverse, true)] {
            if let Some((f, g)) = map.separating_violation() {
                return Err(HomError::NotBiseparating { inverse, f, g }.into());
            }
        }
        let support = h.support_map_with(SupportPolicy::SingletonMatching)?;
        let mut free = (0..a.domain_size()).filter(|&x| a.values_at(x) == [0]);
        let filled: Vec<Option<usize>> = support.h.iter().map(|x| x.or_else(|| free.next())).collect();
        let sigma: Vec<usize> = filled
            .iter()
            .copied()
            .collect::<Option<_>>()
            .ok_or_else(|| HomError::TheoremViolation("zero columns do not pair up".into()))?;
        let support = SupportMap { h: filled, ..support };
        let composition = h.weight_map(&support)?;
        let lambda = composition.weights.iter().map(|w| w.as_ref().and_then(|w| w.apply(1)).unwrap_or(1)).collect();
        (composition, sigma, lambda)
    };
    let witness = MonomialWitness { sigma, lambda };
    for i in 0..a.len() {
        if &witness.apply(a.element(i), p) != h.image(i) {
            return Err(HomError::TheoremViolation("monomial witness disagrees with H".into()).into());
        }
    }
    Ok((composition, witness))
}
