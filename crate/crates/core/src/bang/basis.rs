//! Multiset bases for symmetric tensor powers.
//!
//! A symmetric degree-`n` tensor over an alphabet of `w` letters is
//! stored in *aggregated* form: one coefficient per multiset `m` of size
//! `n`, equal to the sum of the full tensor's entries over all tuples
//! with content `m`. Aggregation is invariant under symmetrisation, so
//! this is a faithful representation of symmetric tensors, and the
//! multinomial bookkeeping lives in exactly two conversion routines
//! ([`SymComponent::expand`] and [`SymComponent::compress`]) plus the
//! slot-insertion step used by products and slotwise maps.

use crate::convex::{decode_index, CVec};
use crate::rat::{multinomial, zero, Rat};
use num_traits::Zero;
use std::collections::HashMap;
use std::sync::{Mutex, OnceLock};

/// Ordered enumeration of the multisets of size `degree` over
/// `alphabet` letters, as count vectors, with a reverse index.
#[derive(Debug, Clone)]
pub struct MsetBasis {
    pub alphabet: usize,
    pub degree: usize,
    pub msets: Vec<Vec<u32>>,
    index: HashMap<Vec<u32>, usize>,
}

fn enumerate_counts(alphabet: usize, degree: usize) -> Vec<Vec<u32>> {
    if alphabet == 0 {
        return if degree == 0 { vec![Vec::new()] } else { Vec::new() };
    }
    let mut out = Vec::new();
    let mut current = vec![0u32; alphabet];
    fill(&mut out, &mut current, 0, degree);
    out
}

// descending lexicographic on counts, so the degree-one basis lists the
// letters in web order
fn fill(out: &mut Vec<Vec<u32>>, current: &mut Vec<u32>, pos: usize, remaining: usize) {
    if pos == current.len() - 1 {
        current[pos] = remaining as u32;
        out.push(current.clone());
        current[pos] = 0;
        return;
    }
    for take in (0..=remaining).rev() {
        current[pos] = take as u32;
        fill(out, current, pos + 1, remaining - take);
    }
    current[pos] = 0;
}

static BASIS_CACHE: OnceLock<Mutex<HashMap<(usize, usize), std::sync::Arc<MsetBasis>>>> =
    OnceLock::new();

impl MsetBasis {
    pub fn get(alphabet: usize, degree: usize) -> std::sync::Arc<MsetBasis> {
        let cache = BASIS_CACHE.get_or_init(|| Mutex::new(HashMap::new()));
        let mut guard = cache.lock().unwrap();
        guard
            .entry((alphabet, degree))
            .or_insert_with(|| {
                let msets = enumerate_counts(alphabet, degree);
                let index =
                    msets.iter().enumerate().map(|(i, m)| (m.clone(), i)).collect();
                std::sync::Arc::new(MsetBasis { alphabet, degree, msets, index })
            })
            .clone()
    }

    pub fn len(&self) -> usize {
        self.msets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.msets.is_empty()
    }

    pub fn position(&self, counts: &[u32]) -> usize {
        self.index[counts]
    }

    /// Number of distinct tuples with this content.
    pub fn tuple_count(&self, i: usize) -> Rat {
        Rat::from_integer(multinomial(&self.msets[i]))
    }
}

/// A symmetric tensor in aggregated multiset coordinates. Coefficients
/// may be signed: intermediate algebra (differences of iterates, map
/// columns) uses the full rational vector space.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SymComponent {
    pub alphabet: usize,
    pub degree: usize,
    pub coeffs: Vec<Rat>,
}

impl SymComponent {
    pub fn zero(alphabet: usize, degree: usize) -> Self {
        let basis = MsetBasis::get(alphabet, degree);
        SymComponent { alphabet, degree, coeffs: vec![zero(); basis.len()] }
    }

    /// Degree-zero scalar component.
    pub fn scalar(alphabet: usize, value: Rat) -> Self {
        SymComponent { alphabet, degree: 0, coeffs: vec![value] }
    }

    pub fn basis(&self) -> std::sync::Arc<MsetBasis> {
        MsetBasis::get(self.alphabet, self.degree)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn scale(&self, s: &Rat) -> Self {
        SymComponent {
            alphabet: self.alphabet,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c.clone() * s).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.alphabet, other.alphabet);
        assert_eq!(self.degree, other.degree);
        SymComponent {
            alphabet: self.alphabet,
            degree: self.degree,
            coeffs: self
                .coeffs
                .iter()
                .zip(&other.coeffs)
                .map(|(a, b)| a.clone() + b)
                .collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.scale(&crate::rat::int(-1)))
    }

    /// Aggregated form of a pure product `v_1 (x) ... (x) v_n` (equal to
    /// that of its symmetrisation). One slot-insertion step per factor.
    pub fn pure_product(alphabet: usize, factors: &[&[Rat]]) -> Self {
        let mut acc: HashMap<Vec<u32>, Rat> = HashMap::new();
        acc.insert(vec![0; alphabet], crate::rat::one());
        for f in factors {
            assert_eq!(f.len(), alphabet);
            let mut next: HashMap<Vec<u32>, Rat> = HashMap::new();
            for (mset, w) in &acc {
                for (l, fl) in f.iter().enumerate() {
                    if fl.is_zero() {
                        continue;
                    }
                    let mut m = mset.clone();
                    m[l] += 1;
                    *next.entry(m).or_insert_with(zero) += w.clone() * fl;
                }
            }
            acc = next;
        }
        let mut out = SymComponent::zero(alphabet, factors.len());
        let basis = out.basis();
        for (mset, w) in acc {
            let i = basis.position(&mset);
            out.coeffs[i] = w;
        }
        out
    }

    /// Applies a linear letter map `T` (rows indexed by the new alphabet)
    /// to every slot of the tensor, staying in aggregated form.
    pub fn apply_slotwise(&self, new_alphabet: usize, t: &[Vec<Rat>]) -> Self {
        assert_eq!(t.len(), new_alphabet);
        for row in t {
            assert_eq!(row.len(), self.alphabet);
        }
        let basis = self.basis();
        let mut out = SymComponent::zero(new_alphabet, self.degree);
        let out_basis = out.basis();
        for (i, mset) in basis.msets.iter().enumerate() {
            if self.coeffs[i].is_zero() {
                continue;
            }
            // walk the letters of this multiset, distributing T per slot
            let mut acc: HashMap<Vec<u32>, Rat> = HashMap::new();
            acc.insert(vec![0; new_alphabet], self.coeffs[i].clone());
            for (letter, &count) in mset.iter().enumerate() {
                for _ in 0..count {
                    let mut next: HashMap<Vec<u32>, Rat> = HashMap::new();
                    for (m, w) in &acc {
                        for (y, row) in t.iter().enumerate() {
                            if row[letter].is_zero() {
                                continue;
                            }
                            let mut m2 = m.clone();
                            m2[y] += 1;
                            *next.entry(m2).or_insert_with(zero) +=
                                w.clone() * &row[letter];
                        }
                    }
                    acc = next;
                }
            }
            for (m, w) in acc {
                out.coeffs[out_basis.position(&m)] += w;
            }
        }
        out
    }

    /// Pairing against a symmetric test given by its per-tuple values on
    /// each content class: `sum over m of t[m] * coeff[m]`.
    pub fn pair_with_values(&self, values: &[Rat]) -> Rat {
        assert_eq!(values.len(), self.coeffs.len());
        self.coeffs
            .iter()
            .zip(values)
            .fold(zero(), |acc, (c, v)| acc + c.clone() * v)
    }

    /// Pairing of two aggregated forms (test and tensor both symmetric):
    /// `sum over m of t[m] * a[m] / (number of tuples in m)`.
    pub fn pair_aggregated(&self, other: &Self) -> Rat {
        assert_eq!(self.alphabet, other.alphabet);
        assert_eq!(self.degree, other.degree);
        let basis = self.basis();
        let mut acc = zero();
        for i in 0..self.coeffs.len() {
            if self.coeffs[i].is_zero() || other.coeffs[i].is_zero() {
                continue;
            }
            acc += self.coeffs[i].clone() * &other.coeffs[i] / basis.tuple_count(i);
        }
        acc
    }

    /// Full dense tensor of the represented symmetric tensor. Exponential
    /// in the degree; audit path only.
    pub fn expand(&self) -> CVec {
        let basis = self.basis();
        let dim = self.alphabet.pow(self.degree as u32);
        let mut out = vec![zero(); dim];
        for (flat, o) in out.iter_mut().enumerate() {
            let digits = decode_index(flat, self.alphabet, self.degree);
            let mut counts = vec![0u32; self.alphabet];
            for d in digits {
                counts[d] += 1;
            }
            let i = basis.position(&counts);
            *o = self.coeffs[i].clone() / basis.tuple_count(i);
        }
        // expand may produce signed data; bypass the CVec nonnegativity
        // guard by construction: callers only expand nonnegative tensors
        CVec::new(out)
    }

    /// Aggregates a full tensor: the inverse of [`SymComponent::expand`]
    /// on symmetric tensors, and the symmetrising projection otherwise.
    pub fn compress(alphabet: usize, degree: usize, full: &CVec) -> Self {
        assert_eq!(full.dim(), alphabet.pow(degree as u32));
        let mut out = SymComponent::zero(alphabet, degree);
        let basis = out.basis();
        for flat in 0..full.dim() {
            let digits = decode_index(flat, alphabet, degree);
            let mut counts = vec![0u32; alphabet];
            for d in digits {
                counts[d] += 1;
            }
            out.coeffs[basis.position(&counts)] += full.get(flat).clone();
        }
        out
    }
}

/// Compress composed with expand is the identity; expand composed with
/// compress is full symmetrisation. Used as the audit oracle.
pub fn expansion_round_trip_holds(c: &SymComponent) -> bool {
    let back = SymComponent::compress(c.alphabet, c.degree, &c.expand());
    back == *c
}
