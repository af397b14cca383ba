//! Test corpus and definition-level oracles. Nothing here calls the
//! decision procedures under test; subsets are raw `u64` masks.

#![allow(dead_code)]

use std::collections::HashSet;
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::Rng;
use rand_chacha::ChaCha8Rng;

use sepcomp::fgroup::{FunctionGroup, PointMap};
use sepcomp::FiniteGroup;

pub fn cyclic(n: usize) -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::cyclic(n).unwrap())
}

pub fn s3() -> Arc<FiniteGroup> {
    Arc::new(FiniteGroup::symmetric(3).unwrap())
}

/// The four value groups of the round-trip corpus.
pub fn value_groups() -> Vec<(&'static str, Arc<FiniteGroup>)> {
    vec![("Z2", cyclic(2)), ("Z3", cyclic(3)), ("Z4", cyclic(4)), ("S3", s3())]
}

pub fn full(g: &Arc<FiniteGroup>, n: usize) -> Arc<FunctionGroup> {
    Arc::new(FunctionGroup::full_power(g.clone(), n).unwrap())
}

pub fn pm(v: &[u8]) -> PointMap {
    PointMap::new(v.to_vec())
}

pub fn even_weight_cube() -> Arc<FunctionGroup> {
    Arc::new(FunctionGroup::generate(cyclic(2), 3, &[pm(&[1, 1, 0]), pm(&[0, 1, 1])]).unwrap())
}

pub struct CorpusEntry {
    pub label: String,
    pub group: Arc<FunctionGroup>,
}

/// Full powers over every value group and `|X| ∈ {2,3,4}`, the even-weight
/// cube, the Hamming code, and seeded random subgroups.
pub fn corpus() -> Vec<CorpusEntry> {
    let mut out = Vec::new();
    for (name, g) in value_groups() {
        for n in 2..=4 {
            out.push(CorpusEntry { label: format!("{name}^{n}"), group: full(&g, n) });
        }
    }
    out.push(CorpusEntry { label: "even-weight cube".into(), group: even_weight_cube() });
    let hamming = sepcomp::LinearCode::from_matrix(
        2,
        7,
        &[
            vec![1, 0, 0, 0, 0, 1, 1],
            vec![0, 1, 0, 0, 1, 0, 1],
            vec![0, 0, 1, 0, 1, 1, 0],
            vec![0, 0, 0, 1, 1, 1, 1],
        ],
    )
    .unwrap();
    out.push(CorpusEntry { label: "hamming[7,4]".into(), group: hamming.as_fgroup().clone() });

    let mut rng = <ChaCha8Rng as rand::SeedableRng>::seed_from_u64(2024);
    let groups = value_groups();
    for i in 0..16 {
        let (name, g) = &groups[i % groups.len()];
        let n = rng.gen_range(2..=4);
        let k = rng.gen_range(1..=3);
        let gens: Vec<PointMap> =
            (0..k).map(|_| PointMap::new((0..n).map(|_| rng.gen_range(0..g.order()) as u8).collect())).collect();
        let a = FunctionGroup::generate(g.clone(), n, &gens).unwrap();
        out.push(CorpusEntry { label: format!("random#{i} over {name}^{n}"), group: Arc::new(a) });
    }
    out
}

/// All permutations of `0..n` in lexicographic order.
pub fn permutations(n: usize) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut p: Vec<usize> = (0..n).collect();
    loop {
        out.push(p.clone());
        let Some(i) = (1..n).rev().find(|&i| p[i - 1] < p[i]) else { return out };
        let j = (i..n).rev().find(|&j| p[j] > p[i - 1]).unwrap();
        p.swap(i - 1, j);
        p[i..].reverse();
    }
}

/// Automorphisms of `g` as image tables: every bijection preserving the
/// multiplication table.
pub fn automorphisms(g: &FiniteGroup) -> Vec<Vec<u8>> {
    let n = g.order();
    permutations(n)
        .into_iter()
        .filter(|p| (0..n).all(|a| (0..n).all(|b| p[g.mul(a as u8, b as u8) as usize] == g.mul(p[a] as u8, p[b] as u8) as usize)))
        .map(|p| p.into_iter().map(|v| v as u8).collect())
        .collect()
}

pub fn random_bijection(rng: &mut ChaCha8Rng, n: usize) -> Vec<usize> {
    let mut p: Vec<usize> = (0..n).collect();
    p.shuffle(rng);
    p
}

pub fn zero_mask(f: &PointMap, e: u8) -> u64 {
    (0..f.domain_size()).filter(|&x| f.at(x) == e).fold(0, |m, x| m | 1 << x)
}

pub fn cozero_mask(f: &PointMap, e: u8) -> u64 {
    (0..f.domain_size()).filter(|&x| f.at(x) != e).fold(0, |m, x| m | 1 << x)
}

/// `D(A)`: preimages `f⁻¹(S)` over all `S ⊆ G`, then pairwise unions and
/// intersections until nothing new appears.
pub fn naive_d_lattice(a: &FunctionGroup) -> Vec<u64> {
    let order = a.group().order();
    let mut fam: HashSet<u64> = HashSet::new();
    for f in a.elements() {
        for s in 0u64..1 << order {
            fam.insert((0..a.domain_size()).filter(|&x| s >> f.at(x) & 1 == 1).fold(0, |m, x| m | 1 << x));
        }
    }
    loop {
        let cur: Vec<u64> = fam.iter().copied().collect();
        let before = fam.len();
        for &p in &cur {
            for &q in &cur {
                fam.insert(p | q);
                fam.insert(p & q);
            }
        }
        if fam.len() == before {
            let mut v: Vec<u64> = fam.into_iter().collect();
            v.sort();
            return v;
        }
    }
}

/// `E(A)` from the complements of `C(A)`.
pub fn naive_e_lattice(a: &FunctionGroup) -> Vec<u64> {
    let full = (1u64 << a.domain_size()) - 1;
    let order = a.group().order();
    let mut fam: HashSet<u64> = HashSet::new();
    for f in a.elements() {
        for s in 0u64..1 << order {
            let pre = (0..a.domain_size()).filter(|&x| s >> f.at(x) & 1 == 1).fold(0, |m, x| m | 1 << x);
            fam.insert(full & !pre);
        }
    }
    loop {
        let cur: Vec<u64> = fam.iter().copied().collect();
        let before = fam.len();
        for &p in &cur {
            for &q in &cur {
                fam.insert(p | q);
                fam.insert(p & q);
            }
        }
        if fam.len() == before {
            let mut v: Vec<u64> = fam.into_iter().collect();
            v.sort();
            return v;
        }
    }
}

/// The first `(f, D1, D2)` (maps in element order, `D(A)` ascending) for
/// which no `f' ∈ A`, `E ∈ E(A)` satisfy the controllability conditions.
pub fn naive_control_violation(a: &FunctionGroup) -> Option<(usize, u64, u64)> {
    let e = a.group().identity();
    let full = (1u64 << a.domain_size()) - 1;
    let d = naive_d_lattice(a);
    let big_e = naive_e_lattice(a);
    for (i, f) in a.elements().iter().enumerate() {
        let zf = zero_mask(f, e);
        for &d1 in &d {
            for &d2 in &d {
                if d1 & d2 != 0 {
                    continue;
                }
                let ok = big_e.iter().filter(|&&ee| d1 & !ee == 0 && ee & d2 == 0).any(|&ee| {
                    a.elements().iter().any(|g| {
                        (0..a.domain_size()).all(|x| {
                            let bit = 1u64 << x;
                            (d1 & bit == 0 || g.at(x) == f.at(x)) && ((zf | (full & !ee)) & bit == 0 || g.at(x) == e)
                        })
                    })
                });
                if !ok {
                    return Some((i, d1, d2));
                }
            }
        }
    }
    None
}

/// `S` is a support of `φ` (given as its value table): every `f` vanishing
/// on `S` has `φ(f) = e`.
pub fn is_support(a: &FunctionGroup, phi: &[u8], s: u64) -> bool {
    let e = a.group().identity();
    a.elements().iter().zip(phi).all(|(f, &v)| v == e || s & !zero_mask(f, e) != 0)
}

/// All supports, then the minimal ones.
pub fn naive_minimal_supports(a: &FunctionGroup, phi: &[u8]) -> Vec<u64> {
    let n = a.domain_size();
    let supports: Vec<u64> = (0u64..1 << n).filter(|&s| is_support(a, phi, s)).collect();
    let mut minimal: Vec<u64> =
        supports.iter().copied().filter(|&s| !supports.iter().any(|&t| t != s && t & !s == 0)).collect();
    minimal.sort_by_key(|&s| (s.count_ones(), (0..64).filter(|x| s >> x & 1 == 1).collect::<Vec<u32>>()));
    minimal
}

pub fn mask_of(s: sepcomp::Subset) -> u64 {
    s.bits()
}
