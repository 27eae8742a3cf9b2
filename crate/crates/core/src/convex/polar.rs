//! Exact vertex enumeration for polars of finitely generated sets.
//!
//! The polar of a generator set `G` inside the nonnegative orthant is
//! the polytope `{ t >= 0 : <g, t> <= 1 for all g in G }`. Its vertices
//! are enumerated by the double-description method on the homogenising
//! cone `{ (t, w) >= 0 : <g, t> <= w }`: halfspaces are added one at a
//! time, crossing pairs of rays generate candidates on the new
//! hyperplane, and non-extreme rays are pruned by an exact rank test.
//! Leftover rays with `w = 0` witness an unbounded polar.

use super::web::CVec;
use crate::rat::{one, zero, Rat};
use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::Zero;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum PolarError {
    #[error("polar dual over the empty web")]
    EmptyWeb,
    #[error("polar is unbounded: some coordinate is untouched by the generators")]
    Unbounded,
    #[error("size cap exceeded: {0}")]
    CapExceeded(String),
}

/// Caps matching the intended desk scale; polars beyond this are refused
/// rather than attempted.
pub const MAX_WEB: usize = 8;
pub const MAX_GENS: usize = 200;

/// Canonical primitive-integer representative of a ray direction.
fn canonical_ray(v: &[Rat]) -> Vec<Rat> {
    let mut lcm = BigInt::from(1);
    for e in v {
        lcm = lcm.lcm(e.denom());
    }
    let ints: Vec<BigInt> = v.iter().map(|e| e.numer() * &lcm / e.denom()).collect();
    let mut gcd = BigInt::zero();
    for i in &ints {
        gcd = gcd.gcd(i);
    }
    if gcd.is_zero() {
        return v.to_vec();
    }
    ints.into_iter().map(|i| Rat::from_integer(i / &gcd)).collect()
}

/// Exact rank of a rational matrix by Gaussian elimination.
fn rank(rows: &[Vec<Rat>]) -> usize {
    let mut m: Vec<Vec<Rat>> = rows.to_vec();
    let cols = m.first().map(|r| r.len()).unwrap_or(0);
    let mut rank = 0;
    for c in 0..cols {
        let Some(pivot) = (rank..m.len()).find(|&r| !m[r][c].is_zero()) else {
            continue;
        };
        m.swap(rank, pivot);
        let lead = m[rank][c].clone();
        for r in 0..m.len() {
            if r != rank && !m[r][c].is_zero() {
                let factor = m[r][c].clone() / lead.clone();
                for k in c..cols {
                    let sub = factor.clone() * m[rank][k].clone();
                    m[r][k] -= sub;
                }
            }
        }
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    rank
}

fn dot(a: &[Rat], b: &[Rat]) -> Rat {
    a.iter().zip(b).fold(zero(), |acc, (x, y)| acc + x.clone() * y)
}

/// Extreme rays of the pointed cone `{ z >= 0 : <a, z> <= 0 for a in
/// halfspaces }` in dimension `dim`.
fn cone_extreme_rays(dim: usize, halfspaces: &[Vec<Rat>]) -> Vec<Vec<Rat>> {
    // orthant constraints -z_i <= 0 participate in the rank test
    let mut seen: Vec<Vec<Rat>> = (0..dim)
        .map(|i| {
            let mut row = vec![zero(); dim];
            row[i] = -one();
            row
        })
        .collect();
    let mut rays: Vec<Vec<Rat>> =
        (0..dim).map(|i| CVec::unit(dim, i).entries().to_vec()).collect();

    for hs in halfspaces {
        let vals: Vec<Rat> = rays.iter().map(|r| dot(hs, r)).collect();
        let mut next: Vec<Vec<Rat>> = Vec::new();
        for (r, v) in rays.iter().zip(&vals) {
            if *v <= zero() {
                next.push(r.clone());
            }
        }
        for (i, ri) in rays.iter().enumerate() {
            if vals[i] <= zero() {
                continue;
            }
            for (j, rj) in rays.iter().enumerate() {
                if vals[j] >= zero() {
                    continue;
                }
                // vals[i] * rj - vals[j] * ri lands on the hyperplane and
                // is a nonnegative combination of two cone members
                let cand: Vec<Rat> = ri
                    .iter()
                    .zip(rj)
                    .map(|(a, b)| vals[i].clone() * b - vals[j].clone() * a)
                    .collect();
                next.push(canonical_ray(&cand));
            }
        }
        seen.push(hs.clone());
        // dedupe and keep only extreme rays (active set of rank dim - 1)
        next = next.into_iter().map(|r| canonical_ray(&r)).collect();
        next.sort();
        next.dedup();
        rays = next
            .into_iter()
            .filter(|r| {
                if r.iter().all(|e| e.is_zero()) {
                    return false;
                }
                let active: Vec<Vec<Rat>> =
                    seen.iter().filter(|a| dot(a, r).is_zero()).cloned().collect();
                rank(&active) >= dim - 1
            })
            .collect();
    }
    rays
}

/// Vertices of `{ t >= 0 : <g, t> <= 1 for all g in gens }`, exact and in
/// canonical order. This is both the polar-dual operation and the ball
/// vertex enumeration (vertices of a point polytope from its tests).
pub fn polar_vertices(dim: usize, gens: &[CVec]) -> Result<Vec<CVec>, PolarError> {
    if dim == 0 {
        return Err(PolarError::EmptyWeb);
    }
    if dim > MAX_WEB {
        return Err(PolarError::CapExceeded(format!("web size {dim} > {MAX_WEB}")));
    }
    if gens.len() > MAX_GENS {
        return Err(PolarError::CapExceeded(format!("{} generators > {MAX_GENS}", gens.len())));
    }
    let halfspaces: Vec<Vec<Rat>> = gens
        .iter()
        .map(|g| {
            assert_eq!(g.dim(), dim, "generator dimension mismatch");
            let mut row: Vec<Rat> = g.entries().to_vec();
            row.push(-one());
            row
        })
        .collect();
    let rays = cone_extreme_rays(dim + 1, &halfspaces);
    let mut vertices = Vec::new();
    for r in rays {
        let w = &r[dim];
        if w.is_zero() {
            return Err(PolarError::Unbounded);
        }
        let v: Vec<Rat> = r[..dim].iter().map(|e| e.clone() / w.clone()).collect();
        vertices.push(CVec::new(v));
    }
    vertices.sort();
    vertices.dedup();
    Ok(vertices)
}

/// True when two generator sets have the same downward convex closure,
/// decided by comparing iterated polars (exact vertex sets).
pub fn same_polytope(dim: usize, a: &[CVec], b: &[CVec]) -> Result<bool, PolarError> {
    let pa = polar_vertices(dim, a)?;
    let pb = polar_vertices(dim, b)?;
    Ok(pa == pb)
}
