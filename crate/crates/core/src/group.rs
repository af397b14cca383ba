//! Finite groups presented by Cayley tables, and the morphisms between them.
//!
//! Elements are the indices `0..order`. Every table is validated at
//! construction (shape, identity, inverses, associativity), so the rest of
//! the crate can rely on the group axioms without re-checking them.

use std::collections::VecDeque;
use std::sync::Arc;

use thiserror::Error;

/// Index of a group element.
pub type Elem = u8;

/// Largest supported group order (element indices must fit in [`Elem`]).
pub const MAX_ORDER: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroupError {
    #[error("invalid group order {0}: must be between 1 and {MAX_ORDER}")]
    InvalidOrder(usize),
    #[error("table has {rows} rows, expected {order}")]
    BadRowCount { rows: usize, order: usize },
    #[error("table row {row} has {len} entries, expected {order}")]
    BadRowLength { row: usize, len: usize, order: usize },
    #[error("table entry {value} at row {row}, column {col} is not an element index")]
    IndexOutOfRange { row: usize, col: usize, value: usize },
    #[error("table has no identity element")]
    NoIdentity,
    #[error("element {0} has no inverse")]
    NoInverse(usize),
    #[error("table is not associative: ({a}*{b})*{c} != {a}*({b}*{c})")]
    NotAssociative { a: usize, b: usize, c: usize },
    #[error("image vector has length {len}, source group has order {order}")]
    BadImageLength { len: usize, order: usize },
    #[error("image {value} of element {element} is not an element of the target group")]
    ImageOutOfRange { element: usize, value: usize },
    #[error("map is not a homomorphism: law fails for the pair ({a}, {b})")]
    NotHomomorphism { a: usize, b: usize },
    #[error("morphisms do not chain: codomain of the inner map is not the domain of the outer map")]
    DomainMismatch,
    #[error("morphism is not an automorphism and cannot be inverted")]
    NotInvertible,
}

/// A finite group given by its multiplication table.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct FiniteGroup {
    order: usize,
    /// Row-major: `table[a * order + b]` is the index of `a * b`.
    table: Vec<Elem>,
    identity: Elem,
    inverse: Vec<Elem>,
}

impl FiniteGroup {
    /// The cyclic group `Z_n` with `i * j = (i + j) mod n`.
    pub fn cyclic(n: usize) -> Result<Self, GroupError> {
        if n == 0 || n > MAX_ORDER {
            return Err(GroupError::InvalidOrder(n));
        }
        let rows: Vec<Vec<usize>> = (0..n).map(|i| (0..n).map(|j| (i + j) % n).collect()).collect();
        Self::from_table(n, &rows)
    }

    /// The symmetric group on `n` points. Elements are the permutations in
    /// lexicographic order (so index 0 is the identity) and the product is
    /// composition: `(s * t)(i) = s(t(i))`.
    pub fn symmetric(n: usize) -> Result<Self, GroupError> {
        if n > 5 {
            return Err(GroupError::InvalidOrder((1..=n).product()));
        }
        let perms = permutations(n);
        let position = |p: &[usize]| perms.binary_search_by(|q| q.as_slice().cmp(p)).unwrap();
        let rows: Vec<Vec<usize>> = perms
            .iter()
            .map(|s| {
                perms
                    .iter()
                    .map(|t| {
                        let st: Vec<usize> = t.iter().map(|&i| s[i]).collect();
                        position(&st)
                    })
                    .collect()
            })
            .collect();
        Self::from_table(perms.len(), &rows)
    }

    /// Validates a Cayley table and computes the identity and inverses.
    pub fn from_table(order: usize, rows: &[Vec<usize>]) -> Result<Self, GroupError> {
        if order == 0 || order > MAX_ORDER {
            return Err(GroupError::InvalidOrder(order));
        }
        if rows.len() != order {
            return Err(GroupError::BadRowCount { rows: rows.len(), order });
        }
        let mut table = Vec::with_capacity(order * order);
        for (row, entries) in rows.iter().enumerate() {
            if entries.len() != order {
                return Err(GroupError::BadRowLength { row, len: entries.len(), order });
            }
            for (col, &value) in entries.iter().enumerate() {
                if value >= order {
                    return Err(GroupError::IndexOutOfRange { row, col, value });
                }
                table.push(value as Elem);
            }
        }
        let at = |a: usize, b: usize| table[a * order + b] as usize;

        let identity = (0..order)
            .find(|&e| (0..order).all(|i| at(e, i) == i && at(i, e) == i))
            .ok_or(GroupError::NoIdentity)?;

        let mut inverse = Vec::with_capacity(order);
        for i in 0..order {
            let inv = (0..order)
                .find(|&j| at(i, j) == identity && at(j, i) == identity)
                .ok_or(GroupError::NoInverse(i))?;
            inverse.push(inv as Elem);
        }

        for a in 0..order {
            for b in 0..order {
                let ab = at(a, b);
                for c in 0..order {
                    if at(ab, c) != at(a, at(b, c)) {
                        return Err(GroupError::NotAssociative { a, b, c });
                    }
                }
            }
        }

        Ok(FiniteGroup { order, table, identity: identity as Elem, inverse })
    }

    pub fn order(&self) -> usize {
        self.order
    }

    pub fn identity(&self) -> Elem {
        self.identity
    }

    #[inline]
    pub fn mul(&self, a: Elem, b: Elem) -> Elem {
        self.table[a as usize * self.order + b as usize]
    }

    #[inline]
    pub fn inv(&self, a: Elem) -> Elem {
        self.inverse[a as usize]
    }

    pub fn elements(&self) -> impl Iterator<Item = Elem> {
        (0..self.order).map(|i| i as Elem)
    }

    /// The table as nested rows, in the shape accepted by [`Self::from_table`].
    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.table.chunks(self.order).map(|r| r.iter().map(|&v| v as usize).collect()).collect()
    }

    pub fn is_abelian(&self) -> bool {
        self.elements().all(|a| self.elements().all(|b| self.mul(a, b) == self.mul(b, a)))
    }

    pub fn element_order(&self, a: Elem) -> usize {
        let mut x = a;
        let mut k = 1;
        while x != self.identity {
            x = self.mul(x, a);
            k += 1;
        }
        k
    }

    /// Sorted elements of the subgroup generated by `gens`.
    pub fn subgroup_generated(&self, gens: &[Elem]) -> Vec<Elem> {
        let mut seen = vec![false; self.order];
        seen[self.identity as usize] = true;
        let mut queue = VecDeque::from([self.identity]);
        while let Some(x) = queue.pop_front() {
            for &g in gens {
                let y = self.mul(x, g);
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    queue.push_back(y);
                }
            }
        }
        self.elements().filter(|&a| seen[a as usize]).collect()
    }

    /// A generating set picked greedily in element order.
    pub fn generating_set(&self) -> Vec<Elem> {
        let mut gens = Vec::new();
        let mut span = vec![self.identity];
        for a in self.elements() {
            if span.binary_search(&a).is_err() {
                gens.push(a);
                span = self.subgroup_generated(&gens);
            }
        }
        gens
    }
}

pub(crate) fn permutations(n: usize) -> Vec<Vec<usize>> {
    fn rec(prefix: &mut Vec<usize>, used: &mut [bool], out: &mut Vec<Vec<usize>>) {
        if prefix.len() == used.len() {
            out.push(prefix.clone());
            return;
        }
        for i in 0..used.len() {
            if !used[i] {
                used[i] = true;
                prefix.push(i);
                rec(prefix, used, out);
                prefix.pop();
                used[i] = false;
            }
        }
    }
    let mut out = Vec::new();
    rec(&mut Vec::new(), &mut vec![false; n], &mut out);
    out
}

/// A verified homomorphism between two finite groups.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct GroupMorphism {
    source: Arc<FiniteGroup>,
    target: Arc<FiniteGroup>,
    image: Vec<Elem>,
    is_epi: bool,
    is_auto: bool,
}

impl GroupMorphism {
    /// Checks the homomorphism law on every pair before accepting `image`.
    pub fn new(
        source: Arc<FiniteGroup>,
        target: Arc<FiniteGroup>,
        image: Vec<Elem>,
    ) -> Result<Self, GroupError> {
        if image.len() != source.order() {
            return Err(GroupError::BadImageLength { len: image.len(), order: source.order() });
        }
        if let Some((element, &value)) =
            image.iter().enumerate().find(|(_, &v)| v as usize >= target.order())
        {
            return Err(GroupError::ImageOutOfRange { element, value: value as usize });
        }
        for a in source.elements() {
            for b in source.elements() {
                let lhs = image[source.mul(a, b) as usize];
                let rhs = target.mul(image[a as usize], image[b as usize]);
                if lhs != rhs {
                    return Err(GroupError::NotHomomorphism { a: a as usize, b: b as usize });
                }
            }
        }
        Ok(Self::from_verified(source, target, image))
    }

    fn from_verified(source: Arc<FiniteGroup>, target: Arc<FiniteGroup>, image: Vec<Elem>) -> Self {
        let mut hit = vec![false; target.order()];
        for &v in &image {
            hit[v as usize] = true;
        }
        let is_epi = hit.iter().all(|&h| h);
        let is_auto = is_epi && source == target;
        GroupMorphism { source, target, image, is_epi, is_auto }
    }

    pub fn identity(group: &Arc<FiniteGroup>) -> Self {
        Self::from_verified(group.clone(), group.clone(), group.elements().collect())
    }

    /// The null morphism sending everything to the identity of `target`.
    pub fn trivial(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>) -> Self {
        let e = target.identity();
        Self::from_verified(source.clone(), target.clone(), vec![e; source.order()])
    }

    pub fn source(&self) -> &Arc<FiniteGroup> {
        &self.source
    }

    pub fn target(&self) -> &Arc<FiniteGroup> {
        &self.target
    }

    pub fn image(&self) -> &[Elem] {
        &self.image
    }

    #[inline]
    pub fn apply(&self, a: Elem) -> Elem {
        self.image[a as usize]
    }

    pub fn is_endo(&self) -> bool {
        self.source == self.target
    }

    pub fn is_epi(&self) -> bool {
        self.is_epi
    }

    pub fn is_auto(&self) -> bool {
        self.is_auto
    }

    pub fn is_null(&self) -> bool {
        let e = self.target.identity();
        self.image.iter().all(|&v| v == e)
    }

    /// `outer ∘ inner`.
    pub fn compose(outer: &GroupMorphism, inner: &GroupMorphism) -> Result<Self, GroupError> {
        if inner.target != outer.source {
            return Err(GroupError::DomainMismatch);
        }
        let image = inner.image.iter().map(|&v| outer.apply(v)).collect();
        Ok(Self::from_verified(inner.source.clone(), outer.target.clone(), image))
    }

    pub fn invert(&self) -> Result<Self, GroupError> {
        if !self.is_auto {
            return Err(GroupError::NotInvertible);
        }
        let mut image = vec![0; self.image.len()];
        for (a, &v) in self.image.iter().enumerate() {
            image[v as usize] = a as Elem;
        }
        Ok(Self::from_verified(self.target.clone(), self.source.clone(), image))
    }
}

/// Extends generator images along the Cayley graph of `source`. Returns
/// `None` as soon as two paths to the same element disagree.
fn extend_on_generators(
    source: &FiniteGroup,
    target: &FiniteGroup,
    gens: &[Elem],
    images: &[Elem],
) -> Option<Vec<Option<Elem>>> {
    let mut map = vec![None; source.order()];
    map[source.identity() as usize] = Some(target.identity());
    let mut queue = VecDeque::from([source.identity()]);
    while let Some(x) = queue.pop_front() {
        let fx = map[x as usize].expect("queued elements are mapped");
        for (&g, &a) in gens.iter().zip(images) {
            let y = source.mul(x, g);
            let fy = target.mul(fx, a);
            match map[y as usize] {
                None => {
                    map[y as usize] = Some(fy);
                    queue.push_back(y);
                }
                Some(v) if v != fy => return None,
                Some(_) => {}
            }
        }
    }
    Some(map)
}

/// All homomorphisms `source -> target`, sorted by image vector.
///
/// Images are chosen for a generating set of `source` one generator at a
/// time; each partial choice is extended along the Cayley graph and
/// abandoned on the first inconsistency.
pub fn homomorphisms(source: &Arc<FiniteGroup>, target: &Arc<FiniteGroup>) -> Vec<GroupMorphism> {
    let gens = source.generating_set();
    let mut images: Vec<Elem> = Vec::with_capacity(gens.len());
    let mut found = Vec::new();

    fn search(
        source: &Arc<FiniteGroup>,
        target: &Arc<FiniteGroup>,
        gens: &[Elem],
        images: &mut Vec<Elem>,
        found: &mut Vec<GroupMorphism>,
    ) {
        let depth = images.len();
        let Some(map) = extend_on_generators(source, target, &gens[..depth], images) else {
            return;
        };
        if depth == gens.len() {
            let image: Vec<Elem> = map.into_iter().map(|v| v.expect("generators span the group")).collect();
            let morphism = GroupMorphism::new(source.clone(), target.clone(), image)
                .expect("consistent extension along generators is a homomorphism");
            found.push(morphism);
            return;
        }
        for a in target.elements() {
            images.push(a);
            search(source, target, gens, images, found);
            images.pop();
        }
    }

    search(source, target, &gens, &mut images, &mut found);
    found.sort_by(|a, b| a.image.cmp(&b.image));
    found
}

/// All endomorphisms of `group`, sorted by image vector.
pub fn endomorphisms(group: &Arc<FiniteGroup>) -> Vec<GroupMorphism> {
    homomorphisms(group, group)
}

/// The full automorphism group, sorted by image vector.
pub fn automorphism_group(group: &Arc<FiniteGroup>) -> Vec<GroupMorphism> {
    endomorphisms(group).into_iter().filter(GroupMorphism::is_auto).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn s3() -> Arc<FiniteGroup> {
        Arc::new(FiniteGroup::symmetric(3).unwrap())
    }

    fn all_bijections(n: usize) -> Vec<Vec<Elem>> {
        permutations(n).into_iter().map(|p| p.into_iter().map(|v| v as Elem).collect()).collect()
    }

    /// Brute-force oracle: every bijection of the element set that obeys the law.
    fn automorphisms_by_brute_force(g: &Arc<FiniteGroup>) -> Vec<Vec<Elem>> {
        all_bijections(g.order())
            .into_iter()
            .filter(|img| {
                g.elements().all(|a| {
                    g.elements().all(|b| img[g.mul(a, b) as usize] == g.mul(img[a as usize], img[b as usize]))
                })
            })
            .collect()
    }

    #[test]
    fn cyclic_construction() {
        let trivial = FiniteGroup::cyclic(1).unwrap();
        assert_eq!(trivial.rows(), vec![vec![0]]);
        let z4 = FiniteGroup::cyclic(4).unwrap();
        for i in 0..4u8 {
            for j in 0..4u8 {
                assert_eq!(z4.mul(i, j), (i + j) % 4);
            }
        }
        assert_eq!(FiniteGroup::cyclic(0), Err(GroupError::InvalidOrder(0)));
    }

    #[test]
    fn table_validation() {
        let z2 = FiniteGroup::from_table(2, &[vec![0, 1], vec![1, 0]]).unwrap();
        assert_eq!(z2, FiniteGroup::cyclic(2).unwrap());
        assert_eq!(FiniteGroup::from_table(2, &[vec![0, 1], vec![0, 1]]), Err(GroupError::NoIdentity));
        assert!(matches!(
            FiniteGroup::from_table(2, &[vec![0, 1], vec![1]]),
            Err(GroupError::BadRowLength { row: 1, .. })
        ));
        assert!(matches!(
            FiniteGroup::from_table(2, &[vec![0, 1], vec![1, 2]]),
            Err(GroupError::IndexOutOfRange { row: 1, col: 1, value: 2 })
        ));
        // Identity 0, but 1*1 = 1 leaves 1 without an inverse.
        assert_eq!(
            FiniteGroup::from_table(2, &[vec![0, 1], vec![1, 1]]),
            Err(GroupError::NoInverse(1))
        );
        // A loop that is not associative: the 5-element Moufang-free quasigroup
        // with identity 0 in which every element is its own inverse.
        let loop5 = vec![
            vec![0, 1, 2, 3, 4],
            vec![1, 0, 3, 4, 2],
            vec![2, 4, 0, 1, 3],
            vec![3, 2, 4, 0, 1],
            vec![4, 3, 1, 2, 0],
        ];
        assert!(matches!(FiniteGroup::from_table(5, &loop5), Err(GroupError::NotAssociative { .. })));
    }

    #[test]
    fn symmetric_group_is_nonabelian_of_order_six() {
        let g = s3();
        assert_eq!(g.order(), 6);
        assert_eq!(g.identity(), 0);
        assert!(!g.is_abelian());
        assert_eq!(g.generating_set().len(), 2);
    }

    #[test]
    fn automorphism_counts_match_brute_force() {
        let z2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
        let auts = automorphism_group(&z2);
        assert_eq!(auts.len(), 1);
        assert_eq!(auts[0], GroupMorphism::identity(&z2));

        for p in [2usize, 3, 5, 7] {
            let g = Arc::new(FiniteGroup::cyclic(p).unwrap());
            let auts = automorphism_group(&g);
            assert_eq!(auts.len(), p - 1);
            let images: Vec<Vec<Elem>> = auts.iter().map(|a| a.image().to_vec()).collect();
            assert_eq!(images, automorphisms_by_brute_force(&g));
        }

        let g = s3();
        let images: Vec<Vec<Elem>> = automorphism_group(&g).iter().map(|a| a.image().to_vec()).collect();
        assert_eq!(images.len(), 6);
        assert_eq!(images, automorphisms_by_brute_force(&g));

        for n in [4usize, 6, 8] {
            let g = Arc::new(FiniteGroup::cyclic(n).unwrap());
            let images: Vec<Vec<Elem>> = automorphism_group(&g).iter().map(|a| a.image().to_vec()).collect();
            assert_eq!(images, automorphisms_by_brute_force(&g));
        }
    }

    #[test]
    fn endomorphism_counts() {
        let count = |n| endomorphisms(&Arc::new(FiniteGroup::cyclic(n).unwrap())).len();
        assert_eq!(count(2), 2);
        assert_eq!(count(3), 3);
        assert_eq!(count(4), 4);
        // x -> kx for k = 0..3, in image-vector order.
        let z4 = Arc::new(FiniteGroup::cyclic(4).unwrap());
        let images: Vec<Vec<Elem>> = endomorphisms(&z4).iter().map(|m| m.image().to_vec()).collect();
        assert_eq!(images, vec![vec![0, 0, 0, 0], vec![0, 1, 2, 3], vec![0, 2, 0, 2], vec![0, 3, 2, 1]]);
        // S3: trivial, three maps onto a transposition subgroup, six automorphisms.
        assert_eq!(endomorphisms(&s3()).len(), 10);
    }

    #[test]
    fn endomorphisms_preserve_identity_and_inverses() {
        for g in [s3(), Arc::new(FiniteGroup::cyclic(6).unwrap()), Arc::new(FiniteGroup::cyclic(4).unwrap())] {
            for m in endomorphisms(&g) {
                assert_eq!(m.apply(g.identity()), g.identity());
                for x in g.elements() {
                    assert_eq!(m.apply(g.inv(x)), g.inv(m.apply(x)));
                }
            }
        }
    }

    #[test]
    fn automorphisms_form_a_group() {
        for g in [s3(), Arc::new(FiniteGroup::cyclic(5).unwrap()), Arc::new(FiniteGroup::cyclic(8).unwrap())] {
            let auts = automorphism_group(&g);
            assert!(auts.contains(&GroupMorphism::identity(&g)));
            for a in &auts {
                assert!(auts.contains(&a.invert().unwrap()));
                for b in &auts {
                    assert!(auts.contains(&GroupMorphism::compose(a, b).unwrap()));
                }
            }
        }
    }

    #[test]
    fn compose_and_invert() {
        let z5 = Arc::new(FiniteGroup::cyclic(5).unwrap());
        let double = GroupMorphism::new(z5.clone(), z5.clone(), vec![0, 2, 4, 1, 3]).unwrap();
        let id = GroupMorphism::identity(&z5);
        assert_eq!(GroupMorphism::compose(&id, &double).unwrap(), double);
        let inv = double.invert().unwrap();
        assert_eq!(inv.image(), &[0, 3, 1, 4, 2]);
        assert_eq!(GroupMorphism::compose(&inv, &double).unwrap(), id);

        let z2 = Arc::new(FiniteGroup::cyclic(2).unwrap());
        assert_eq!(GroupMorphism::trivial(&z2, &z2).invert(), Err(GroupError::NotInvertible));
        assert_eq!(GroupMorphism::compose(&double, &GroupMorphism::identity(&z2)), Err(GroupError::DomainMismatch));
    }

    #[test]
    fn morphism_law_is_checked() {
        let z4 = Arc::new(FiniteGroup::cyclic(4).unwrap());
        let err = GroupMorphism::new(z4.clone(), z4.clone(), vec![0, 1, 1, 0]).unwrap_err();
        assert!(matches!(err, GroupError::NotHomomorphism { .. }));
    }
}
