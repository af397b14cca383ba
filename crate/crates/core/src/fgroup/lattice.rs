//! The families `C(A)`, `O(A)`, `D(A)`, `E(A)` of subsets of `X`, the
//! partition of `X` into points that `A` cannot tell apart, and the
//! separated/detached predicates on pairs of maps.
//!
//! `G` is finite and discrete, so every subset of `G` is both open and
//! closed and `C(A) = {f⁻¹(S) : f ∈ A, S ⊆ G}`. The lattices are computed
//! as honest `∪/∩`-closures of their generating families; their equality is
//! an invariant that is checked rather than assumed.

use std::collections::{HashMap, HashSet};
use std::sync::Arc;

use super::{FGroupError, FunctionGroup, MAX_FAMILY};
use crate::subset::{SetFamily, Subset};

/// The four families induced by a function group, plus the smallest
/// `D(A)` member containing each cozero set.
#[derive(Debug, Clone)]
pub struct Lattices {
    pub c: SetFamily,
    pub o: SetFamily,
    pub d: SetFamily,
    pub e: SetFamily,
    /// `coz_hull[i]` is the smallest member of `D(A)` containing `coz(f_i)`.
    coz_hull: Vec<Subset>,
}

impl Lattices {
    pub fn coz_hull(&self, i: usize) -> Subset {
        self.coz_hull[i]
    }

    /// Ordered pairs of disjoint members of `D(A)`, both in family order.
    pub fn disjoint_pairs(&self) -> impl Iterator<Item = (Subset, Subset)> + '_ {
        self.d.iter().flat_map(move |d1| self.d.iter().filter(move |d2| d1.is_disjoint(*d2)).map(move |d2| (d1, d2)))
    }
}

/// Closure of `generators` under finite unions and intersections.
///
/// Intersections of generators are formed first; unions of those are then
/// closed under intersection as well, by distributivity.
fn lattice_closure(generators: &[Subset], bound: usize) -> Result<Vec<Subset>, FGroupError> {
    let mut meets: HashSet<Subset> = generators.iter().copied().collect();
    let mut work: Vec<Subset> = meets.iter().copied().collect();
    while let Some(s) = work.pop() {
        for &g in generators {
            let t = s & g;
            if meets.insert(t) {
                if meets.len() > bound {
                    return Err(FGroupError::FamilyTooLarge(bound));
                }
                work.push(t);
            }
        }
    }
    let mut meets: Vec<Subset> = meets.into_iter().collect();
    meets.sort();

    let mut joins: HashSet<Subset> = meets.iter().copied().collect();
    let mut work = meets.clone();
    while let Some(s) = work.pop() {
        for &m in &meets {
            let t = s | m;
            if joins.insert(t) {
                if joins.len() > bound {
                    return Err(FGroupError::FamilyTooLarge(bound));
                }
                work.push(t);
            }
        }
    }
    let mut out: Vec<Subset> = joins.into_iter().collect();
    out.sort();
    Ok(out)
}

impl FunctionGroup {
    /// `C(A)`: all preimages `f⁻¹(S)`. Each is a union of level sets of `f`,
    /// so it suffices to take every union of the level-set partition.
    fn preimage_family(&self) -> Result<Vec<Subset>, FGroupError> {
        let mut seen_partitions: HashSet<Vec<Subset>> = HashSet::new();
        let mut family: HashSet<Subset> = HashSet::new();
        for f in self.elements() {
            let mut blocks: HashMap<u8, Subset> = HashMap::new();
            for x in 0..self.domain_size() {
                let b = blocks.entry(f.at(x)).or_default();
                *b = b.with(x);
            }
            let mut blocks: Vec<Subset> = blocks.into_values().collect();
            blocks.sort();
            if !seen_partitions.insert(blocks.clone()) {
                continue;
            }
            if blocks.len() >= 64 || 1usize << blocks.len() > MAX_FAMILY {
                return Err(FGroupError::FamilyTooLarge(MAX_FAMILY));
            }
            for mask in 0u64..1 << blocks.len() {
                let s = blocks
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| mask >> i & 1 == 1)
                    .fold(Subset::EMPTY, |acc, (_, &b)| acc | b);
                family.insert(s);
                if family.len() > MAX_FAMILY {
                    return Err(FGroupError::FamilyTooLarge(MAX_FAMILY));
                }
            }
        }
        Ok(family.into_iter().collect())
    }

    fn compute_lattices(&self) -> Result<Lattices, FGroupError> {
        let n = self.domain_size();
        let c_members = self.preimage_family()?;
        let o_members: Vec<Subset> = c_members.iter().map(|s| s.complement(n)).collect();
        let d = SetFamily::new(n, lattice_closure(&c_members, MAX_FAMILY)?);
        let e = SetFamily::new(n, lattice_closure(&o_members, MAX_FAMILY)?);
        // Every subset of a discrete G is clopen, so C(A) is closed under
        // complements and the two generated lattices must agree.
        assert_eq!(d, e, "D(A) and E(A) differ for a finite discrete group");
        let coz_hull = (0..self.len())
            .map(|i| d.hull(self.cozero(i)).expect("X belongs to D(A)"))
            .collect();
        Ok(Lattices { c: SetFamily::new(n, c_members), o: SetFamily::new(n, o_members), d, e, coz_hull })
    }

    /// All four families, computed once and cached.
    pub fn lattices(&self) -> Result<Arc<Lattices>, FGroupError> {
        self.lattices.get_or_init(|| self.compute_lattices().map(Arc::new)).clone()
    }

    pub fn d_lattice(&self) -> Result<SetFamily, FGroupError> {
        Ok(self.lattices()?.d.clone())
    }

    pub fn e_lattice(&self) -> Result<SetFamily, FGroupError> {
        Ok(self.lattices()?.e.clone())
    }

    /// Classes of points that every map in `A` takes to the same value,
    /// ordered by smallest member.
    pub fn cells(&self) -> &[Subset] {
        self.cells.get_or_init(|| {
            let mut by_column: HashMap<Vec<u8>, Subset> = HashMap::new();
            for x in 0..self.domain_size() {
                let column: Vec<u8> = self.elements().iter().map(|f| f.at(x)).collect();
                let cell = by_column.entry(column).or_default();
                *cell = cell.with(x);
            }
            let mut cells: Vec<Subset> = by_column.into_values().collect();
            cells.sort_by_key(|c| c.iter().next());
            cells
        })
    }

    /// Closure in the topology `τ_A`. The smallest open neighbourhood of a
    /// point is its cell, so a point is in the closure of `t` iff its cell
    /// meets `t`.
    pub fn tau_closure(&self, t: Subset) -> Subset {
        self.cells().iter().filter(|c| !c.is_disjoint(t)).fold(Subset::EMPTY, |acc, &c| acc | c)
    }

    /// Interior in `τ_A`: the union of the cells contained in `t`.
    pub fn tau_interior(&self, t: Subset) -> Subset {
        self.cells().iter().filter(|c| c.is_subset_of(t)).fold(Subset::EMPTY, |acc, &c| acc | c)
    }

    /// `coz(f) ∩ coz(g) = ∅`.
    pub fn separated(&self, i: usize, j: usize) -> bool {
        self.cozero(i).is_disjoint(self.cozero(j))
    }

    /// Some disjoint `D1, D2 ∈ D(A)` contain `coz(f)` and `coz(g)`.
    ///
    /// `D(A)` is intersection-closed, so such a pair exists iff the smallest
    /// members containing the two cozero sets are disjoint.
    pub fn detached(&self, i: usize, j: usize) -> Result<bool, FGroupError> {
        let lat = self.lattices()?;
        Ok(lat.coz_hull(i).is_disjoint(lat.coz_hull(j)))
    }
}
