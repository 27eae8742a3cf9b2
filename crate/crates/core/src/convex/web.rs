//! Webs (finite coordinate systems) and nonnegative coordinate vectors.

use crate::rat::{to_frac_string, zero, Rat};
use num_traits::Zero;
use serde::{Deserialize, Serialize};
use std::fmt;

/// A finite ordered set of coordinate labels. The order is canonical and
/// fixed at construction; composite webs derive their labels from their
/// factors so serialised objects are reproducible.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Web {
    labels: Vec<String>,
}

impl Web {
    pub fn new(labels: Vec<String>) -> Self {
        let mut seen = std::collections::BTreeSet::new();
        for l in &labels {
            assert!(seen.insert(l.clone()), "duplicate web label {l}");
        }
        Web { labels }
    }

    pub fn empty() -> Self {
        Web { labels: Vec::new() }
    }

    /// Single-coordinate web used for the weight object.
    pub fn singleton(label: &str) -> Self {
        Web { labels: vec![label.to_string()] }
    }

    pub fn dim(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    /// Disjoint union, prefixing each block with its position.
    pub fn disjoint_union(parts: &[&Web]) -> Self {
        let mut labels = Vec::new();
        for (i, w) in parts.iter().enumerate() {
            for l in w.labels() {
                labels.push(format!("{i}.{l}"));
            }
        }
        Web { labels }
    }

    /// Product web in row-major order: the label `(a,b)` at index
    /// `i * dim(other) + j`.
    pub fn product(&self, other: &Web) -> Self {
        let mut labels = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.labels {
            for b in &other.labels {
                labels.push(format!("({a},{b})"));
            }
        }
        Web { labels }
    }
}

/// A vector of nonnegative rationals over a web, compared and serialised
/// entrywise.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct CVec {
    entries: Vec<Rat>,
}

impl CVec {
    pub fn new(entries: Vec<Rat>) -> Self {
        assert!(entries.iter().all(|e| *e >= zero()), "negative entry in CVec");
        CVec { entries }
    }

    pub fn zeros(dim: usize) -> Self {
        CVec { entries: vec![zero(); dim] }
    }

    /// Standard basis vector.
    pub fn unit(dim: usize, i: usize) -> Self {
        let mut entries = vec![zero(); dim];
        entries[i] = crate::rat::one();
        CVec { entries }
    }

    pub fn dim(&self) -> usize {
        self.entries.len()
    }

    pub fn entries(&self) -> &[Rat] {
        &self.entries
    }

    pub fn get(&self, i: usize) -> &Rat {
        &self.entries[i]
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().all(|e| e.is_zero())
    }

    /// Exact dot product; the bilinear pairing between tests and points.
    pub fn pairing(&self, other: &CVec) -> Rat {
        assert_eq!(self.dim(), other.dim(), "web mismatch in pairing");
        self.entries
            .iter()
            .zip(&other.entries)
            .fold(zero(), |acc, (a, b)| acc + a.clone() * b)
    }

    pub fn add(&self, other: &CVec) -> CVec {
        assert_eq!(self.dim(), other.dim());
        CVec {
            entries: self
                .entries
                .iter()
                .zip(&other.entries)
                .map(|(a, b)| a.clone() + b)
                .collect(),
        }
    }

    pub fn scale(&self, s: &Rat) -> CVec {
        assert!(*s >= zero());
        CVec { entries: self.entries.iter().map(|e| e.clone() * s).collect() }
    }

    /// Blockwise concatenation (used by the additive connectives).
    pub fn concat(parts: &[&CVec]) -> CVec {
        let mut entries = Vec::new();
        for p in parts {
            entries.extend(p.entries.iter().cloned());
        }
        CVec { entries }
    }

    /// Kronecker product in row-major order, matching `Web::product`.
    pub fn tensor(&self, other: &CVec) -> CVec {
        let mut entries = Vec::with_capacity(self.dim() * other.dim());
        for a in &self.entries {
            for b in &other.entries {
                entries.push(a.clone() * b);
            }
        }
        CVec { entries }
    }

    pub fn slice(&self, range: std::ops::Range<usize>) -> CVec {
        CVec { entries: self.entries[range].to_vec() }
    }

    pub fn frac_strings(&self) -> Vec<String> {
        self.entries.iter().map(to_frac_string).collect()
    }
}

impl fmt::Display for CVec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({})", self.frac_strings().join(", "))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn pairing_is_dot_product() {
        let t = CVec::new(vec![rat(1, 1), rat(1, 1)]);
        let x = CVec::new(vec![rat(1, 2), rat(1, 4)]);
        assert_eq!(t.pairing(&x), rat(3, 4));
        assert_eq!(CVec::zeros(2).pairing(&x), rat(0, 1));
    }

    #[test]
    fn tensor_is_row_major() {
        let a = CVec::new(vec![rat(1, 2), rat(1, 3)]);
        let b = CVec::new(vec![rat(1, 1), rat(0, 1)]);
        let t = a.tensor(&b);
        assert_eq!(t.entries(), &[rat(1, 2), rat(0, 1), rat(1, 3), rat(0, 1)]);
    }

    #[test]
    fn product_web_labels_match_tensor_order() {
        let w1 = Web::new(vec!["a".into(), "b".into()]);
        let w2 = Web::new(vec!["x".into(), "y".into()]);
        let p = w1.product(&w2);
        assert_eq!(p.labels(), &["(a,x)", "(a,y)", "(b,x)", "(b,y)"]);
    }
}
