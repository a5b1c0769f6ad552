use std::collections::HashMap;
use std::fmt;
use std::sync::{Arc, Mutex, OnceLock};

use num_bigint::BigUint;
use num_traits::One;
use serde::{Deserialize, Serialize};

/// A multi-index `α ∈ Z₊ⁿ`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn new(entries: Vec<u32>) -> Self {
        MultiIndex(entries)
    }

    pub fn zeros(len: usize) -> Self {
        MultiIndex(vec![0; len])
    }

    /// The unit index `e_j` (0-based `j`).
    pub fn unit(len: usize, j: usize) -> Self {
        let mut e = vec![0; len];
        e[j] = 1;
        MultiIndex(e)
    }

    pub fn entries(&self) -> &[u32] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// |α| = Σ α_j.
    pub fn weight(&self) -> u32 {
        self.0.iter().sum()
    }

    /// α! = ∏ α_j!.
    pub fn factorial(&self) -> BigUint {
        self.0
            .iter()
            .fold(BigUint::one(), |acc, &a| acc * factorial(a))
    }

    pub fn checked_sub(&self, other: &MultiIndex) -> Option<MultiIndex> {
        debug_assert_eq!(self.len(), other.len());
        self.0
            .iter()
            .zip(&other.0)
            .map(|(&a, &b)| a.checked_sub(b))
            .collect::<Option<Vec<_>>>()
            .map(MultiIndex)
    }

    pub fn add(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

impl fmt::Display for MultiIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, a) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ")")
    }
}

impl From<Vec<u32>> for MultiIndex {
    fn from(v: Vec<u32>) -> Self {
        MultiIndex(v)
    }
}

impl From<&[u32]> for MultiIndex {
    fn from(v: &[u32]) -> Self {
        MultiIndex(v.to_vec())
    }
}

pub fn factorial(k: u32) -> BigUint {
    (2..=k).fold(BigUint::one(), |acc, j| acc * j)
}

/// All multi-indices of length `n` and weight exactly `d`, lexicographically
/// descending (`z₁^d` first).
pub fn indices_of_weight(n: usize, d: u32) -> Vec<MultiIndex> {
    fn rec(n: usize, d: u32, prefix: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
        if prefix.len() + 1 == n {
            prefix.push(d);
            out.push(MultiIndex(prefix.clone()));
            prefix.pop();
            return;
        }
        for a in (0..=d).rev() {
            prefix.push(a);
            rec(n, d - a, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    if n == 0 {
        if d == 0 {
            out.push(MultiIndex(Vec::new()));
        }
        return out;
    }
    rec(n, d, &mut Vec::with_capacity(n), &mut out);
    out
}

/// Graded monomial basis of polynomials in `n` variables of total degree `≤ cap`,
/// together with the truncated multiplication table.
#[derive(Debug)]
pub struct MonomialBasis {
    n: usize,
    cap: u32,
    monomials: Vec<MultiIndex>,
    weights: Vec<u32>,
    degree_start: Vec<usize>,
    lookup: HashMap<MultiIndex, usize>,
    pairs: Vec<Vec<(u32, u32)>>,
}

impl MonomialBasis {
    fn build(n: usize, cap: u32) -> Self {
        let mut monomials = Vec::new();
        let mut degree_start = Vec::with_capacity(cap as usize + 2);
        for d in 0..=cap {
            degree_start.push(monomials.len());
            monomials.extend(indices_of_weight(n, d));
        }
        degree_start.push(monomials.len());
        let weights: Vec<u32> = monomials.iter().map(MultiIndex::weight).collect();
        let lookup: HashMap<MultiIndex, usize> = monomials
            .iter()
            .enumerate()
            .map(|(i, a)| (a.clone(), i))
            .collect();
        let pairs = monomials
            .iter()
            .enumerate()
            .map(|(i, a)| {
                let room = cap - weights[i];
                monomials[..degree_start[room as usize + 1]]
                    .iter()
                    .enumerate()
                    .map(|(j, b)| (j as u32, lookup[&a.add(b)] as u32))
                    .collect()
            })
            .collect();
        MonomialBasis {
            n,
            cap,
            monomials,
            weights,
            degree_start,
            lookup,
            pairs,
        }
    }

    /// Shared basis for `(n, cap)`; built once per process.
    pub fn shared(n: usize, cap: u32) -> Arc<MonomialBasis> {
        static CACHE: OnceLock<Mutex<HashMap<(usize, u32), Arc<MonomialBasis>>>> = OnceLock::new();
        let cache = CACHE.get_or_init(Default::default);
        if let Some(b) = cache.lock().expect("basis cache poisoned").get(&(n, cap)) {
            return Arc::clone(b);
        }
        let built = Arc::new(MonomialBasis::build(n, cap));
        let mut guard = cache.lock().expect("basis cache poisoned");
        Arc::clone(guard.entry((n, cap)).or_insert(built))
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn cap(&self) -> u32 {
        self.cap
    }

    pub fn len(&self) -> usize {
        self.monomials.len()
    }

    pub fn is_empty(&self) -> bool {
        self.monomials.is_empty()
    }

    pub fn monomials(&self) -> &[MultiIndex] {
        &self.monomials
    }

    pub fn monomial(&self, i: usize) -> &MultiIndex {
        &self.monomials[i]
    }

    /// |α| for the `i`-th monomial.
    pub fn weight(&self, i: usize) -> u32 {
        self.weights[i]
    }

    pub fn index_of(&self, alpha: &MultiIndex) -> Option<usize> {
        self.lookup.get(alpha).copied()
    }

    /// Number of monomials of weight `≤ d`.
    pub fn count_up_to(&self, d: u32) -> usize {
        self.degree_start[d.min(self.cap) as usize + 1]
    }

    pub(crate) fn pairs(&self) -> &[Vec<(u32, u32)>] {
        &self.pairs
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn binom(a: usize, b: usize) -> usize {
        (0..b).fold(1, |acc, i| acc * (a - i) / (i + 1))
    }

    #[test]
    fn basis_sizes_and_order() {
        let b = MonomialBasis::shared(3, 6);
        assert_eq!(b.len(), binom(9, 3));
        assert_eq!(b.monomial(0).entries(), &[0, 0, 0]);
        assert_eq!(b.monomial(1).entries(), &[1, 0, 0]);
        assert_eq!(b.monomial(3).entries(), &[0, 0, 1]);
        assert_eq!(b.monomial(4).entries(), &[2, 0, 0]);
        // Pairs with |α|+|β| ≤ D correspond to monomials in 2n variables.
        let total: usize = b.pairs().iter().map(Vec::len).sum();
        assert_eq!(total, binom(12, 6));
        assert_eq!(b.count_up_to(1), 4);
    }

    #[test]
    fn weights_match_entries() {
        let b = MonomialBasis::shared(2, 5);
        for (i, a) in b.monomials().iter().enumerate() {
            assert_eq!(b.weight(i), a.weight());
            assert_eq!(b.index_of(a), Some(i));
        }
    }

    #[test]
    fn multi_index_arithmetic() {
        let a = MultiIndex::new(vec![2, 1, 0]);
        assert_eq!(a.weight(), 3);
        assert_eq!(a.factorial(), BigUint::from(2u32));
        assert_eq!(
            a.checked_sub(&MultiIndex::new(vec![1, 1, 0])),
            Some(MultiIndex::new(vec![1, 0, 0]))
        );
        assert_eq!(a.checked_sub(&MultiIndex::new(vec![0, 2, 0])), None);
        assert_eq!(a.to_string(), "(2,1,0)");
    }
}
