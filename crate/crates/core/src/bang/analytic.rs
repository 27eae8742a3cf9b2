//! Analytic maps as truncated power series with exact coefficients.
//!
//! A map is stored by its homogeneous terms: `terms[n]` is a matrix
//! sending the aggregated degree-`n` power of the argument to the target
//! web, so `f(x) = sum over n of terms[n] . agg(x^n)`. The linear action
//! on a truncated exponential element reads the star-free part of each
//! component, which agrees with the power series on every promoted point
//! and is the unique linear extension.

use super::basis::{MsetBasis, SymComponent};
use super::element::{BangError, TruncatedBang};
use super::maps::{rho, sec_n};
use crate::convex::{CVec, MultiMap};
use crate::rat::{factorial, self_power, zero, Rat};
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum FixError {
    #[error("iterate decreased on a test generator at iteration {0}: implementation bug")]
    NonMonotone(usize),
    #[error("no convergence within {iterations} iterations")]
    MaxIterExceeded { last: CVec, iterations: usize },
}

/// Aggregated coordinates of `x^(x) n`: multinomial times monomial.
pub fn agg_power(x: &CVec, n: usize) -> SymComponent {
    let alphabet = x.dim();
    let basis = MsetBasis::get(alphabet, n);
    let mut c = SymComponent::zero(alphabet, n);
    for (i, mset) in basis.msets.iter().enumerate() {
        let mut coeff = Rat::from_integer(crate::rat::multinomial(mset));
        for (l, &count) in mset.iter().enumerate() {
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
}

/// A truncated analytic map between webs of the given dimensions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AnalyticMap {
    pub source_dim: usize,
    pub target_dim: usize,
    pub trunc: usize,
    /// `terms[n]`: rows over the target web, columns over the degree-`n`
    /// multiset basis of the source web.
    pub terms: Vec<Vec<Vec<Rat>>>,
}

impl AnalyticMap {
    pub fn zero(source_dim: usize, target_dim: usize, trunc: usize) -> Self {
        let terms = (0..=trunc)
            .map(|n| {
                let cols = MsetBasis::get(source_dim, n).len();
                vec![vec![zero(); cols]; target_dim]
            })
            .collect();
        AnalyticMap { source_dim, target_dim, trunc, terms }
    }

    /// Constant map.
    pub fn constant(value: &CVec, source_dim: usize, trunc: usize) -> Self {
        let mut f = AnalyticMap::zero(source_dim, value.dim(), trunc);
        for (y, row) in f.terms[0].iter_mut().enumerate() {
            row[0] = value.get(y).clone();
        }
        f
    }

    /// Embeds a linear map: the action on the exponential factors through
    /// dereliction, so the series has a single degree-one term.
    pub fn from_linear(m: &MultiMap, trunc: usize) -> Self {
        assert_eq!(m.arity(), 1);
        assert!(trunc >= 1);
        let mut f = AnalyticMap::zero(m.source_dims[0], m.target_dim, trunc);
        let basis = MsetBasis::get(m.source_dims[0], 1);
        for y in 0..m.target_dim {
            for (col, mset) in basis.msets.iter().enumerate() {
                let l = mset.iter().position(|&c| c == 1).unwrap();
                f.terms[1][y][col] = m.coeff(&[l], y).clone();
            }
        }
        f
    }

    /// Sets the degree-`n` term matrix.
    pub fn with_term(mut self, n: usize, matrix: Vec<Vec<Rat>>) -> Self {
        assert!(n <= self.trunc);
        assert_eq!(matrix.len(), self.target_dim);
        let cols = MsetBasis::get(self.source_dim, n).len();
        for row in &matrix {
            assert_eq!(row.len(), cols);
        }
        self.terms[n] = matrix;
        self
    }

    fn term_apply(&self, n: usize, c: &SymComponent) -> Vec<Rat> {
        self.terms[n]
            .iter()
            .map(|row| {
                row.iter()
                    .zip(&c.coeffs)
                    .fold(zero(), |acc, (m, v)| acc + m.clone() * v)
            })
            .collect()
    }

    /// Exact evaluation of the partial sum up to `upto`.
    pub fn eval_partial(&self, x: &CVec, upto: usize) -> CVec {
        assert_eq!(x.dim(), self.source_dim);
        let mut out = vec![zero(); self.target_dim];
        for n in 0..=upto.min(self.trunc) {
            let pow = agg_power(x, n);
            for (o, v) in out.iter_mut().zip(self.term_apply(n, &pow)) {
                *o += v;
            }
        }
        CVec::new(out)
    }

    /// Exact evaluation of the truncated series.
    pub fn eval(&self, x: &CVec) -> CVec {
        self.eval_partial(x, self.trunc)
    }

    /// The unique linear action on truncated exponential elements: each
    /// degree contributes through its star-free homogeneous part.
    pub fn apply_bang(&self, b: &TruncatedBang) -> Result<CVec, BangError> {
        assert_eq!(b.alphabet, self.source_dim + 1);
        let mut out = vec![zero(); self.target_dim];
        for n in 0..=self.trunc {
            if n > b.truncation()
                && self.terms[n].iter().all(|row| row.iter().all(|c| c.is_zero()))
            {
                continue;
            }
            let comp = b.component(n)?;
            let star_free = star_free_part(comp);
            for (o, v) in out.iter_mut().zip(self.term_apply(n, &star_free)) {
                *o += v;
            }
        }
        // signed intermediates never reach here: terms and components of
        // actual elements are nonnegative
        Ok(CVec::new(out))
    }

    /// Exact degree-`n` coefficient, recovered through the section maps:
    /// `(n^n / n!) rho_n` times the action on the assembled embedding of
    /// the basis tensor. Returned in the same matrix shape as `terms[n]`,
    /// and equal to it: this is the audit route for the section algebra.
    pub fn taylor(&self, n: usize) -> Result<Vec<Vec<Rat>>, BangError> {
        if n > self.trunc {
            return Err(BangError::DegreeTooLow { needed: n, have: self.trunc });
        }
        let basis = MsetBasis::get(self.source_dim, n);
        let scale = rho(n) * Rat::new(self_power(n), factorial(n));
        let mut cols: Vec<CVec> = Vec::with_capacity(basis.len());
        for i in 0..basis.len() {
            let mut unit = SymComponent::zero(self.source_dim, n);
            unit.coeffs[i] = crate::rat::one();
            let embedded = sec_n(&unit, n);
            let assembled = TruncatedBang::theta(&embedded, self.trunc, n)?;
            cols.push(self.apply_bang(&assembled)?);
        }
        let mut out = vec![vec![zero(); basis.len()]; self.target_dim];
        for (col, img) in cols.iter().enumerate() {
            for (y, row) in out.iter_mut().enumerate() {
                row[col] = img.get(y).clone() * scale.clone();
            }
        }
        Ok(out)
    }
}

/// Star-free homogeneous part of a component, over the object alphabet.
pub fn star_free_part(c: &SymComponent) -> SymComponent {
    super::maps::proj_m(c, c.degree)
}

/// Outcome of a converged Kleene iteration.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FixOutcome {
    pub point: CVec,
    pub iterations: usize,
}

/// Least fixed point of an endo-map by Kleene iteration from zero.
/// Convergence is judged on the given test generators: the iteration
/// stops when every test value moves by less than `tol`. Monotonicity of
/// every test value is asserted exactly at each step.
pub fn fix(
    f: &AnalyticMap,
    tests: &[CVec],
    tol: &Rat,
    max_iter: usize,
) -> Result<FixOutcome, FixError> {
    assert_eq!(f.source_dim, f.target_dim);
    assert!(*tol > zero());
    let mut current = CVec::zeros(f.source_dim);
    for iteration in 1..=max_iter {
        let next = f.eval(&current);
        let mut worst = zero();
        for t in tests {
            let before = t.pairing(&current);
            let after = t.pairing(&next);
            if after < before {
                return Err(FixError::NonMonotone(iteration));
            }
            let delta = after - before;
            if delta > worst {
                worst = delta;
            }
        }
        current = next;
        if worst < *tol {
            return Ok(FixOutcome { point: current, iterations: iteration });
        }
    }
    Err(FixError::MaxIterExceeded { last: current, iterations: max_iter })
}
