//! Truncated elements of the exponential: compatible component families.

use super::basis::{MsetBasis, SymComponent};
use super::maps::{proj_j_step, theta_components};
use crate::convex::CVec;
use crate::rat::{multinomial, one, zero, Rat};
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum BangError {
    #[error("components are not projection-compatible at degree {0}")]
    Incompatible(usize),
    #[error("operation needs truncation degree {needed}, have {have}")]
    DegreeTooLow { needed: usize, have: usize },
    #[error("promotion of a vector outside the point ball")]
    NonMember,
}

/// A degree-truncated element of the exponential over an object with
/// `alphabet - 1` coordinates: components `a_0, ..., a_N` over the
/// star-extended alphabet, each one the projection of the next.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruncatedBang {
    pub alphabet: usize,
    comps: Vec<SymComponent>,
}

impl TruncatedBang {
    /// Wraps a component family, checking projection compatibility.
    pub fn new(alphabet: usize, comps: Vec<SymComponent>) -> Result<Self, BangError> {
        for (n, c) in comps.iter().enumerate() {
            assert_eq!(c.alphabet, alphabet);
            assert_eq!(c.degree, n);
            if n + 1 < comps.len() && proj_j_step(&comps[n + 1]) != *c {
                return Err(BangError::Incompatible(n));
            }
        }
        Ok(TruncatedBang { alphabet, comps })
    }

    /// Builds the family from its top component by projecting down.
    pub fn from_top(top: SymComponent) -> Self {
        let alphabet = top.alphabet;
        let mut comps = vec![top];
        while comps.last().unwrap().degree > 0 {
            let next = proj_j_step(comps.last().unwrap());
            comps.push(next);
        }
        comps.reverse();
        TruncatedBang { alphabet, comps }
    }

    pub fn zero(alphabet: usize, trunc: usize) -> Self {
        TruncatedBang {
            alphabet,
            comps: (0..=trunc).map(|n| SymComponent::zero(alphabet, n)).collect(),
        }
    }

    pub fn truncation(&self) -> usize {
        self.comps.len() - 1
    }

    pub fn component(&self, n: usize) -> Result<&SymComponent, BangError> {
        self.comps.get(n).ok_or(BangError::DegreeTooLow { needed: n, have: self.truncation() })
    }

    pub fn components(&self) -> &[SymComponent] {
        &self.comps
    }

    /// The canonical projection `pi_n`.
    pub fn pi(&self, n: usize) -> Result<SymComponent, BangError> {
        Ok(self.component(n)?.clone())
    }

    /// Section of `pi_n`: assembles a truncated element from a single
    /// degree-`n` component.
    pub fn theta(c: &SymComponent, trunc: usize, n: usize) -> Result<Self, BangError> {
        if n > trunc {
            return Err(BangError::DegreeTooLow { needed: n, have: trunc });
        }
        let comps = theta_components(c, trunc);
        TruncatedBang::new(c.alphabet, comps)
    }

    /// Degree-zero coordinate: the weakening value.
    pub fn weak(&self) -> Rat {
        self.comps[0].coeffs[0].clone()
    }

    /// Dereliction: the object coordinates of the degree-one component.
    pub fn der(&self) -> Result<CVec, BangError> {
        let c1 = self.component(1)?;
        Ok(CVec::new(c1.coeffs[..self.alphabet - 1].to_vec()))
    }

    pub fn scale(&self, s: &Rat) -> Self {
        TruncatedBang {
            alphabet: self.alphabet,
            comps: self.comps.iter().map(|c| c.scale(s)).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!(self.alphabet, other.alphabet);
        let n = self.truncation().min(other.truncation());
        TruncatedBang {
            alphabet: self.alphabet,
            comps: (0..=n).map(|k| self.comps[k].add(&other.comps[k])).collect(),
        }
    }
}

/// The universal promotion of a point: components `(x, 1)` to the `n`.
/// Aggregated coefficients are multinomials times coordinate powers, so
/// no dense expansion is ever needed.
pub fn nabla(x: &CVec, trunc: usize) -> TruncatedBang {
    let alphabet = x.dim() + 1;
    let comps = (0..=trunc)
        .map(|n| {
            let mut c = SymComponent::zero(alphabet, n);
            let basis = MsetBasis::get(alphabet, n);
            for (i, mset) in basis.msets.iter().enumerate() {
                let mut coeff = Rat::from_integer(multinomial(mset));
                for (l, &count) in mset.iter().enumerate() {
                    if l + 1 == alphabet {
                        continue; // star coordinate is 1
                    }
                    for _ in 0..count {
                        coeff *= x.get(l);
                        if coeff.is_zero() {
                            break;
                        }
                    }
                    if coeff.is_zero() {
                        break;
                    }
                }
                c.coeffs[i] = coeff;
            }
            c
        })
        .collect();
    TruncatedBang { alphabet, comps }
}

/// Membership-checked promotion: rejects vectors outside the object's
/// point ball before promoting.
pub fn nabla_in(
    object: &crate::convex::ConvexObject,
    x: &CVec,
    trunc: usize,
) -> Result<TruncatedBang, BangError> {
    if !object.membership(x) {
        return Err(BangError::NonMember);
    }
    Ok(nabla(x, trunc))
}

/// A finite weighted sum of promoted points: the linear copier's value
/// on a finite measure, kept in factored form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PromotedSum {
    pub dim: usize,
    pub terms: Vec<(Rat, CVec)>,
}

impl PromotedSum {
    pub fn new(dim: usize, terms: Vec<(Rat, CVec)>) -> Self {
        for (_, x) in &terms {
            assert_eq!(x.dim(), dim);
        }
        PromotedSum { dim, terms }
    }

    /// The copier on a point mass: a single promoted point.
    pub fn of_point(x: CVec) -> Self {
        PromotedSum { dim: x.dim(), terms: vec![(one(), x)] }
    }

    /// Materialises the weighted sum of promotions at a truncation.
    pub fn to_bang(&self, trunc: usize) -> TruncatedBang {
        let mut acc = TruncatedBang::zero(self.dim + 1, trunc);
        for (w, x) in &self.terms {
            if w.is_zero() {
                continue;
            }
            acc = acc.add(&nabla(x, trunc).scale(w));
        }
        acc
    }

    pub fn total_weight(&self) -> Rat {
        self.terms.iter().fold(zero(), |acc, (w, _)| acc + w)
    }
}
