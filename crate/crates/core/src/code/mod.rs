//! Linear codes over prime fields, viewed as function groups over `(Z_p, +)`.

mod monomial;

use std::sync::Arc;

use thiserror::Error;

use crate::fgroup::{FGroupError, FunctionGroup, PointMap, DEFAULT_MAX_CLOSURE};
use crate::group::{Elem, FiniteGroup, MAX_ORDER};
use crate::hom::HomError;

pub use monomial::{code_automorphisms, monomial_equivalence, verify_isometry_is_monomial, MonomialWitness};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodeError {
    #[error(
        "field size {0} is not prime: only prime fields are supported, since the additive automorphisms of \
         a prime field are exactly the nonzero scalings, while larger fields would mix in semilinear maps"
    )]
    NotPrime(usize),
    #[error("field size {0} is too large")]
    FieldTooLarge(usize),
    #[error("row {row} has {len} entries, expected {expected}")]
    BadRowLength { row: usize, len: usize, expected: usize },
    #[error("row {row}, column {col}: entry {value} is not below the field size")]
    EntryOutOfRange { row: usize, col: usize, value: usize },
    #[error("rows have rank {rank}, but {rows} were given")]
    RankDeficient { rank: usize, rows: usize },
    #[error("codes over different fields ({0} and {1})")]
    FieldMismatch(usize, usize),
    #[error("codes of different lengths ({0} and {1})")]
    LengthMismatch(usize, usize),
    #[error("not an isometry: {codeword} has weight {weight} but its image has weight {image_weight}")]
    NotIsometry { codeword: PointMap, weight: usize, image_weight: usize },
    #[error("value group is not a prime cyclic group")]
    NotCodeHom,
    #[error(transparent)]
    FunctionGroup(#[from] FGroupError),
    #[error(transparent)]
    Hom(#[from] HomError),
}

pub(crate) fn is_prime(p: usize) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| p % d != 0)
}

/// Inverses of `1..p` modulo `p`; index 0 is unused.
pub(crate) fn inverses(p: usize) -> Vec<Elem> {
    let mut inv = vec![0; p];
    for a in 1..p {
        inv[a] = (1..p).find(|b| a * b % p == 1).expect("p is prime") as Elem;
    }
    inv
}

/// Reduced row-echelon form over `Z_p`, with the pivot column of each row.
pub(crate) fn rref(p: usize, rows: &[Vec<Elem>], n: usize) -> (Vec<Vec<Elem>>, Vec<usize>) {
    let inv = inverses(p);
    let mut m: Vec<Vec<Elem>> = rows.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(s) = (r..m.len()).find(|&i| m[i][c] != 0) else { continue };
        m.swap(r, s);
        let scale = inv[m[r][c] as usize] as usize;
        for v in m[r].iter_mut() {
            *v = (*v as usize * scale % p) as Elem;
        }
        for i in 0..m.len() {
            let factor = m[i][c] as usize;
            if i == r || factor == 0 {
                continue;
            }
            for j in 0..n {
                let sub = factor * m[r][j] as usize % p;
                m[i][j] = ((m[i][j] as usize + p - sub) % p) as Elem;
            }
        }
        pivots.push(c);
        r += 1;
    }
    m.truncate(r);
    (m, pivots)
}

/// A `k`-dimensional subspace of `Z_p^n` with all `p^k` codewords enumerated.
#[derive(Debug, Clone)]
pub struct LinearCode {
    p: usize,
    n: usize,
    /// Generator rows in reduced row-echelon form.
    rows: Vec<Vec<Elem>>,
    field: Arc<FiniteGroup>,
    fgroup: Arc<FunctionGroup>,
}

impl LinearCode {
    /// Row-reduces and enumerates the code spanned by `rows`, which must be
    /// linearly independent.
    pub fn from_matrix(p: usize, n: usize, rows: &[Vec<usize>]) -> Result<Self, CodeError> {
        Self::from_matrix_bounded(p, n, rows, DEFAULT_MAX_CLOSURE)
    }

    pub fn from_matrix_bounded(p: usize, n: usize, rows: &[Vec<usize>], max_codewords: usize) -> Result<Self, CodeError> {
        if !is_prime(p) {
            return Err(CodeError::NotPrime(p));
        }
        if p > MAX_ORDER {
            return Err(CodeError::FieldTooLarge(p));
        }
        let mut entries = Vec::with_capacity(rows.len());
        for (row, r) in rows.iter().enumerate() {
            if r.len() != n {
                return Err(CodeError::BadRowLength { row, len: r.len(), expected: n });
            }
            if let Some(col) = r.iter().position(|&v| v >= p) {
                return Err(CodeError::EntryOutOfRange { row, col, value: r[col] });
            }
            entries.push(r.iter().map(|&v| v as Elem).collect::<Vec<_>>());
        }
        let (reduced, _) = rref(p, &entries, n);
        if reduced.len() != rows.len() {
            return Err(CodeError::RankDeficient { rank: reduced.len(), rows: rows.len() });
        }
        let field = Arc::new(FiniteGroup::cyclic(p).expect("prime below the order bound"));
        let gens: Vec<PointMap> = reduced.iter().map(|r| PointMap::new(r.clone())).collect();
        let fgroup = FunctionGroup::generate_bounded(field.clone(), n, &gens, max_codewords)?;
        Ok(LinearCode { p, n, rows: reduced, field, fgroup: Arc::new(fgroup) })
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> usize {
        self.rows.len()
    }

    /// The generator matrix in reduced row-echelon form.
    pub fn generator_rows(&self) -> &[Vec<Elem>] {
        &self.rows
    }

    pub fn field(&self) -> &Arc<FiniteGroup> {
        &self.field
    }

    pub fn as_fgroup(&self) -> &Arc<FunctionGroup> {
        &self.fgroup
    }

    pub fn codewords(&self) -> &[PointMap] {
        self.fgroup.elements()
    }

    pub fn contains(&self, word: &PointMap) -> bool {
        self.fgroup.contains(word)
    }

    /// `W[i]` counts the codewords of Hamming weight `i`.
    pub fn weight_enumerator(&self) -> Vec<u64> {
        let mut w = vec![0; self.n + 1];
        for i in 0..self.fgroup.len() {
            w[self.fgroup.cozero(i).len()] += 1;
        }
        w
    }

    /// For each column, the weight histogram of the codewords nonzero there.
    pub(crate) fn column_profiles(&self) -> Vec<Vec<u64>> {
        let mut prof = vec![vec![0; self.n + 1]; self.n];
        for i in 0..self.fgroup.len() {
            let coz = self.fgroup.cozero(i);
            for x in coz.iter() {
                prof[x][coz.len()] += 1;
            }
        }
        prof
    }

    /// Columns that vanish on every codeword.
    pub fn zero_columns(&self) -> Vec<usize> {
        (0..self.n).filter(|&x| self.rows.iter().all(|r| r[x] == 0)).collect()
    }
}

#[cfg(test)]
pub(crate) mod tests {
    use super::*;

    pub(crate) fn hamming() -> LinearCode {
        let rows = vec![
            vec![1, 0, 0, 0, 0, 1, 1],
            vec![0, 1, 0, 0, 1, 0, 1],
            vec![0, 0, 1, 0, 1, 1, 0],
            vec![0, 0, 0, 1, 1, 1, 1],
        ];
        LinearCode::from_matrix(2, 7, &rows).unwrap()
    }

    #[test]
    fn construction() {
        let c = LinearCode::from_matrix(2, 3, &[vec![1, 0, 1], vec![0, 1, 1]]).unwrap();
        assert_eq!(c.codewords().len(), 4);
        assert_eq!(hamming().codewords().len(), 16);
        assert_eq!(LinearCode::from_matrix(4, 2, &[vec![1, 1]]).unwrap_err(), CodeError::NotPrime(4));
        assert_eq!(
            LinearCode::from_matrix(3, 2, &[vec![1, 2], vec![2, 1]]).unwrap_err(),
            CodeError::RankDeficient { rank: 1, rows: 2 }
        );
        assert_eq!(
            LinearCode::from_matrix(3, 2, &[vec![1, 3]]).unwrap_err(),
            CodeError::EntryOutOfRange { row: 0, col: 1, value: 3 }
        );
    }

    #[test]
    fn rref_normal_form() {
        let c = LinearCode::from_matrix(3, 3, &[vec![2, 1, 0], vec![1, 1, 1]]).unwrap();
        assert_eq!(c.generator_rows(), &[vec![1, 0, 2], vec![0, 1, 2]]);
        let d = LinearCode::from_matrix(3, 3, &[vec![0, 1, 2], vec![1, 0, 2]]).unwrap();
        assert_eq!(c.generator_rows(), d.generator_rows());
        assert!(c.as_fgroup().same_elements(d.as_fgroup()));
    }

    #[test]
    fn weight_enumerators() {
        let zero = LinearCode::from_matrix(2, 3, &[]).unwrap();
        assert_eq!(zero.weight_enumerator(), vec![1, 0, 0, 0]);
        let full = LinearCode::from_matrix(2, 3, &[vec![1, 0, 0], vec![0, 1, 0], vec![0, 0, 1]]).unwrap();
        assert_eq!(full.weight_enumerator(), vec![1, 3, 3, 1]);
        assert_eq!(hamming().weight_enumerator(), vec![1, 0, 0, 7, 7, 0, 0, 1]);
    }

    #[test]
    fn closed_under_scalars() {
        let c = LinearCode::from_matrix(5, 4, &[vec![1, 2, 3, 4], vec![0, 1, 1, 0]]).unwrap();
        assert_eq!(c.codewords().len(), 25);
        for w in c.codewords() {
            for s in 1..5u8 {
                let scaled = PointMap::new(w.values().iter().map(|&v| v * s % 5).collect());
                assert!(c.contains(&scaled));
            }
        }
    }
}
