//! Multilinear maps between convex objects as exact coefficient arrays.

use super::object::ConvexObject;
use super::web::CVec;
use crate::measure::FiniteMeasure;
use crate::rat::{one, zero, Rat};
use num_traits::Zero;

/// An `n`-linear map stored as a dense array of nonnegative rationals
/// indexed row-major by `(i_1, ..., i_n, j)` over the source webs and
/// the target web.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MultiMap {
    pub source_dims: Vec<usize>,
    pub target_dim: usize,
    pub coeffs: Vec<Rat>,
}

impl MultiMap {
    pub fn zero(source_dims: Vec<usize>, target_dim: usize) -> Self {
        let len = source_dims.iter().product::<usize>() * target_dim;
        MultiMap { source_dims, target_dim, coeffs: vec![zero(); len] }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = MultiMap::zero(vec![dim], dim);
        for i in 0..dim {
            m.coeffs[i * dim + i] = one();
        }
        m
    }

    /// Builds from an explicit coefficient function over multi-indices.
    pub fn from_fn(
        source_dims: Vec<usize>,
        target_dim: usize,
        mut f: impl FnMut(&[usize], usize) -> Rat,
    ) -> Self {
        let mut m = MultiMap::zero(source_dims.clone(), target_dim);
        let mut idx = vec![0usize; source_dims.len()];
        loop {
            for j in 0..target_dim {
                let flat = m.flat_index(&idx, j);
                m.coeffs[flat] = f(&idx, j);
            }
            if !advance(&mut idx, &source_dims) {
                break;
            }
        }
        m
    }

    pub fn arity(&self) -> usize {
        self.source_dims.len()
    }

    pub fn flat_index(&self, idx: &[usize], j: usize) -> usize {
        let mut flat = 0;
        for (i, d) in idx.iter().zip(&self.source_dims) {
            flat = flat * d + i;
        }
        flat * self.target_dim + j
    }

    pub fn coeff(&self, idx: &[usize], j: usize) -> &Rat {
        &self.coeffs[self.flat_index(idx, j)]
    }

    /// Full application: contract every source argument.
    pub fn apply(&self, args: &[&CVec]) -> CVec {
        assert_eq!(args.len(), self.arity());
        for (a, d) in args.iter().zip(&self.source_dims) {
            assert_eq!(a.dim(), *d, "argument web mismatch");
        }
        let mut out = vec![zero(); self.target_dim];
        let mut idx = vec![0usize; self.arity()];
        loop {
            let mut weight = one();
            for (k, &i) in idx.iter().enumerate() {
                weight *= args[k].get(i).clone();
                if weight.is_zero() {
                    break;
                }
            }
            if !weight.is_zero() {
                for (j, o) in out.iter_mut().enumerate() {
                    let c = self.coeff(&idx, j);
                    if !c.is_zero() {
                        *o += weight.clone() * c;
                    }
                }
            }
            if !advance(&mut idx, &self.source_dims) {
                break;
            }
        }
        CVec::new(out)
    }

    /// Pairing of a target test against an application: `eta . f(x...)`.
    pub fn test_value(&self, args: &[&CVec], test: &CVec) -> Rat {
        test.pairing(&self.apply(args))
    }

    /// Transpose in argument `k` (0-based): exchanges the `k`-th source
    /// slot with the target slot, giving the map that sends a target
    /// test to a test on the `k`-th source.
    pub fn transpose_k(&self, k: usize) -> MultiMap {
        assert!(k < self.arity());
        let mut new_sources = self.source_dims.clone();
        let new_target = new_sources[k];
        new_sources[k] = self.target_dim;
        let out = MultiMap::from_fn(new_sources, new_target, |idx, j| {
            let mut orig = idx.to_vec();
            let eta_index = orig[k];
            orig[k] = j;
            self.coeff(&orig, eta_index).clone()
        });
        out
    }

    /// Currying: the first `m` arguments stay, the rest move into the
    /// target, which becomes the coefficient web of the inner map. The
    /// flat array is untouched; only the shape changes.
    pub fn curry(&self, m: usize) -> MultiMap {
        assert!(m <= self.arity());
        let outer = self.source_dims[..m].to_vec();
        let inner: usize =
            self.source_dims[m..].iter().product::<usize>() * self.target_dim;
        MultiMap { source_dims: outer, target_dim: inner, coeffs: self.coeffs.clone() }
    }

    /// Inverse of [`MultiMap::curry`]: re-expands a target that is the
    /// coefficient web of an inner map with the given shape.
    pub fn uncurry(&self, inner_sources: &[usize], inner_target: usize) -> MultiMap {
        let expect: usize = inner_sources.iter().product::<usize>() * inner_target;
        assert_eq!(self.target_dim, expect, "target is not a map web of that shape");
        let mut sources = self.source_dims.clone();
        sources.extend_from_slice(inner_sources);
        MultiMap { source_dims: sources, target_dim: inner_target, coeffs: self.coeffs.clone() }
    }

    /// Composition of unary maps: `self` after `other`.
    pub fn compose1(&self, other: &MultiMap) -> MultiMap {
        assert_eq!(self.arity(), 1);
        assert_eq!(other.arity(), 1);
        assert_eq!(self.source_dims[0], other.target_dim);
        let mid = other.target_dim;
        MultiMap::from_fn(other.source_dims.clone(), self.target_dim, |idx, j| {
            let mut acc = zero();
            for k in 0..mid {
                acc += other.coeff(idx, k).clone() * self.coeff(&[k], j);
            }
            acc
        })
    }

    /// JSON form: shape plus the flat coefficient array as `"p/q"`
    /// strings in row-major order.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "source_dims": self.source_dims,
            "target_dim": self.target_dim,
            "coeffs": self.coeffs.iter().map(crate::rat::to_frac_string).collect::<Vec<_>>(),
        })
    }

    /// Membership of the map in the linear-map ball of the given
    /// objects: the image of every tuple of point generators must be a
    /// point of the target.
    pub fn validate(&self, sources: &[&ConvexObject], target: &ConvexObject) -> bool {
        assert_eq!(sources.len(), self.arity());
        let mut choice = vec![0usize; self.arity()];
        loop {
            let args: Vec<&CVec> =
                choice.iter().zip(sources).map(|(&c, o)| &o.point_gens[c]).collect();
            if !target.membership(&self.apply(&args)) {
                return false;
            }
            let dims: Vec<usize> = sources.iter().map(|o| o.point_gens.len()).collect();
            if !advance(&mut choice, &dims) {
                return true;
            }
        }
    }

    /// Norm over the source balls: the maximum of a multilinear map over
    /// products of balls is attained at products of generators.
    pub fn norm_against(&self, sources: &[&ConvexObject], target_test: &CVec) -> Rat {
        let mut best = zero();
        let mut choice = vec![0usize; self.arity()];
        loop {
            let args: Vec<&CVec> =
                choice.iter().zip(sources).map(|(&c, o)| &o.point_gens[c]).collect();
            let v = self.test_value(&args, target_test);
            if v > best {
                best = v;
            }
            let dims: Vec<usize> = sources.iter().map(|o| o.point_gens.len()).collect();
            if !advance(&mut choice, &dims) {
                return best;
            }
        }
    }
}

fn advance(idx: &mut [usize], dims: &[usize]) -> bool {
    for k in (0..idx.len()).rev() {
        idx[k] += 1;
        if idx[k] < dims[k] {
            return true;
        }
        idx[k] = 0;
    }
    false
}

/// The linear-map object `(X_1, ..., X_n) -o Y` materialised as a convex
/// object over the coefficient web: tests are generated by tuples of
/// source point generators paired with target test generators; points
/// are recovered as the exact polar of those tests.
pub fn lolli_object(
    sources: &[&ConvexObject],
    target: &ConvexObject,
) -> Result<ConvexObject, super::polar::PolarError> {
    let mut web = sources
        .first()
        .map(|s| s.web.clone())
        .unwrap_or_else(super::web::Web::empty);
    for s in &sources[1.min(sources.len())..] {
        web = web.product(&s.web);
    }
    web = if sources.is_empty() { target.web.clone() } else { web.product(&target.web) };
    let mut test_gens = Vec::new();
    let mut choice = vec![0usize; sources.len()];
    loop {
        let mut pure: Option<CVec> = None;
        for (&c, o) in choice.iter().zip(sources) {
            let g = &o.point_gens[c];
            pure = Some(match pure {
                None => g.clone(),
                Some(p) => p.tensor(g),
            });
        }
        for t in &target.test_gens {
            let covec = match &pure {
                None => t.clone(),
                Some(p) => p.tensor(t),
            };
            test_gens.push(covec);
        }
        let dims: Vec<usize> = sources.iter().map(|o| o.point_gens.len()).collect();
        if sources.is_empty() || !advance(&mut choice, &dims) {
            break;
        }
    }
    let point_gens = super::polar::polar_vertices(web.dim(), &test_gens)?;
    Ok(ConvexObject { web, point_gens, test_gens })
}

/// A finite sub-probability kernel from `A` (indices `0..a`) to `B`
/// (indices `0..b`) and the exact correspondence with linear maps
/// between the data-type objects.
pub fn kernel_to_linear(kernel: &[FiniteMeasure<usize>], target_dim: usize) -> MultiMap {
    let a = kernel.len();
    MultiMap::from_fn(vec![a], target_dim, |idx, j| kernel[idx[0]].mass_at(&j))
}

/// Inverse direction: evaluate the linear map on Dirac points.
pub fn linear_to_kernel(m: &MultiMap) -> Vec<FiniteMeasure<usize>> {
    assert_eq!(m.arity(), 1);
    (0..m.source_dims[0])
        .map(|i| {
            let img = m.apply(&[&CVec::unit(m.source_dims[0], i)]);
            FiniteMeasure::from_atoms(
                img.entries().iter().cloned().enumerate().collect::<Vec<_>>(),
            )
            .expect("kernel row mass exceeds 1")
        })
        .collect()
}
