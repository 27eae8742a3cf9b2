//! The degree-indexed map family between symmetric powers of `X & W`.
//!
//! Conventions: components over the full alphabet put the weight letter
//! (star) last; homogeneous components over `X` alone drop it. All maps
//! act on aggregated multiset coefficients and are exact.

use super::basis::{MsetBasis, SymComponent};
use crate::rat::{factorial, one, self_power, Rat};
use num_traits::Zero;

/// The section defect `rho_m = m^m (m + 1) / m!`, with `0^0 = 1`.
pub fn rho(m: usize) -> Rat {
    Rat::new(self_power(m) * (m as i64 + 1), factorial(m))
}

/// One projection step: drops the degree by one by extracting the weight
/// coordinate of the last slot. Aggregated form: the coefficient at `m`
/// reads the coefficient at `m + {star}` scaled by the fraction of
/// tuples whose last slot is the star.
pub fn proj_j_step(c: &SymComponent) -> SymComponent {
    let d = c.degree;
    assert!(d > 0, "cannot project below degree 0");
    let star = c.alphabet - 1;
    let mut out = SymComponent::zero(c.alphabet, d - 1);
    let in_basis = c.basis();
    let out_basis = out.basis();
    for (i, mset) in out_basis.msets.iter().enumerate() {
        let mut up = mset.clone();
        up[star] += 1;
        let j = in_basis.position(&up);
        if !c.coeffs[j].is_zero() {
            out.coeffs[i] =
                c.coeffs[j].clone() * Rat::new((up[star] as i64).into(), (d as i64).into());
        }
    }
    out
}

/// Iterated projection from the component's degree down to `m`.
pub fn proj_j(c: &SymComponent, m: usize) -> SymComponent {
    assert!(m <= c.degree, "projection target above degree");
    let mut cur = c.clone();
    while cur.degree > m {
        cur = proj_j_step(&cur);
    }
    cur
}

/// Extracts the degree-`m` homogeneous part as a star-free component
/// over `X`: all remaining slots must carry the star. Zero when `m`
/// exceeds the degree.
pub fn proj_m(c: &SymComponent, m: usize) -> SymComponent {
    let n = c.degree;
    let star = c.alphabet - 1;
    let mut out = SymComponent::zero(c.alphabet - 1, m);
    if m > n {
        return out;
    }
    let in_basis = c.basis();
    let out_basis = out.basis();
    let factor = Rat::new(
        factorial(m) * factorial(n - m),
        factorial(n),
    );
    for (i, mset) in out_basis.msets.iter().enumerate() {
        let mut up = mset.clone();
        up.push((n - m) as u32);
        let _ = star;
        let j = in_basis.position(&up);
        if !c.coeffs[j].is_zero() {
            out.coeffs[i] = c.coeffs[j].clone() * factor.clone();
        }
    }
    out
}

/// Section of the homogeneous projection: embeds a degree-`m` star-free
/// component into degree `n` of the full alphabet, up to `m!/m^m`. For
/// `n` not a multiple of `m` the embedding goes to the next multiple and
/// projects back down.
pub fn sec_n(c: &SymComponent, n: usize) -> SymComponent {
    let m = c.degree;
    let full_alphabet = c.alphabet + 1;
    if m == 0 {
        // r maps to r times the pure star tensor
        let mut out = SymComponent::zero(full_alphabet, n);
        let mut mset = vec![0u32; full_alphabet];
        mset[full_alphabet - 1] = n as u32;
        let basis = out.basis();
        out.coeffs[basis.position(&mset)] = c.coeffs[0].clone();
        return out;
    }
    let p = n.div_ceil(m).max(1);
    let mp = m * p;
    let mut lifted = SymComponent::zero(full_alphabet, mp);
    let factor = Rat::new(factorial(mp), factorial(mp - m) * self_power(m));
    let in_basis = c.basis();
    let out_basis = lifted.basis();
    for (i, mset) in in_basis.msets.iter().enumerate() {
        if c.coeffs[i].is_zero() {
            continue;
        }
        let mut up = mset.clone();
        up.push((mp - m) as u32);
        lifted.coeffs[out_basis.position(&up)] = c.coeffs[i].clone() * factor.clone();
    }
    proj_j(&lifted, n)
}

/// The approximate section of the projection family:
/// `sum over k of (1/(m+1)) (k^k m!)/(k! m^m)` times the degree-`k`
/// extraction re-embedded at degree `n`.
pub fn sec_k(c: &SymComponent, n: usize) -> SymComponent {
    let m = c.degree;
    let mut out = SymComponent::zero(c.alphabet, n);
    for k in 0..=m {
        let coef = Rat::new(
            self_power(k) * factorial(m),
            factorial(k) * self_power(m) * (m as i64 + 1),
        );
        if coef.is_zero() {
            continue;
        }
        out = out.add(&sec_n(&proj_m(c, k), n).scale(&coef));
    }
    out
}

/// Extracts the homogeneous part of degree `k` without changing the
/// component's degree: `(k^k / k!) sec_n . proj_m`.
pub fn extract_d(c: &SymComponent, k: usize) -> SymComponent {
    assert!(k <= c.degree, "homogeneous degree above component degree");
    let coef = Rat::new(self_power(k), factorial(k));
    sec_n(&proj_m(c, k), c.degree).scale(&coef)
}

/// Components of the section of the bang projection:
/// `theta_n(a) = (K_{n,m} a)_m` up to the truncation degree.
pub fn theta_components(c: &SymComponent, trunc: usize) -> Vec<SymComponent> {
    (0..=trunc).map(|m| sec_k(c, m)).collect()
}

/// Columns of a linear map on symmetric components, as images of the
/// aggregated basis units. Useful for exact map-equality tests.
pub fn map_columns(
    alphabet: usize,
    degree: usize,
    f: impl Fn(&SymComponent) -> SymComponent,
) -> Vec<SymComponent> {
    let basis = MsetBasis::get(alphabet, degree);
    (0..basis.len())
        .map(|i| {
            let mut unit = SymComponent::zero(alphabet, degree);
            unit.coeffs[i] = one();
            f(&unit)
        })
        .collect()
}

/// Identity on the aggregated basis, as columns.
pub fn identity_columns(alphabet: usize, degree: usize) -> Vec<SymComponent> {
    map_columns(alphabet, degree, |c| c.clone())
}

pub fn columns_scale(cols: &[SymComponent], s: &Rat) -> Vec<SymComponent> {
    cols.iter().map(|c| c.scale(s)).collect()
}

/// `sum over k <= n of D_{n,k}` equals the identity; exposed for the law
/// suite.
pub fn d_decomposition_columns(alphabet: usize, degree: usize) -> Vec<SymComponent> {
    map_columns(alphabet, degree, |c| {
        let mut acc = SymComponent::zero(alphabet, degree);
        for k in 0..=degree {
            acc = acc.add(&extract_d(c, k));
        }
        acc
    })
}
