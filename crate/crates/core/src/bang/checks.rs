//! Named numeric bound checks on the exponential over the two-point
//! object. These are exhaustive exact maximisations over vertex tensors,
//! with a data-parallel sweep and a sequential fallback.

use super::basis::SymComponent;
use super::maps::proj_j;
use crate::bang::analytic::AnalyticMap;
use crate::convex::{ConvexObject, CVec};
use crate::rat::{int, rat, zero, Rat};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// The six ball vertices of `(W + W) & W`: coordinates `(r0, r1, r*)`
/// with `r0 + r1 <= 1` and `r* <= 1`.
pub fn xw_ball_vertices() -> Vec<CVec> {
    let w = ConvexObject::weights();
    let x = ConvexObject::plus_objects(&[&w, &w]);
    let xw = ConvexObject::with_objects(&[&x, &w]);
    xw.ball_vertices().expect("vertex enumeration of a 3-dim polytope")
}

/// The separating test `f((r0, r1, r*) (x) (s0, s1, s*)) = r0 s1 + r1 s0`
/// evaluated on an aggregated degree-2 component: reads the coefficient
/// of the mixed multiset.
pub fn mixed_test_value(c: &SymComponent) -> Rat {
    assert_eq!(c.alphabet, 3);
    assert_eq!(c.degree, 2);
    let basis = c.basis();
    c.coeffs[basis.position(&[1, 1, 0])].clone()
}

fn tuple_component(vertices: &[CVec], digits: &[usize]) -> SymComponent {
    let factors: Vec<&[Rat]> = digits.iter().map(|&d| vertices[d].entries()).collect();
    SymComponent::pure_product(3, &factors)
}

fn max_over_tuples(degree: usize, eval: impl Fn(&[usize]) -> Rat + Sync) -> Rat {
    let total = 6usize.pow(degree as u32);
    let decode = |mut flat: usize| -> Vec<usize> {
        let mut digits = vec![0usize; degree];
        for d in digits.iter_mut().rev() {
            *d = flat % 6;
            flat /= 6;
        }
        digits
    };
    #[cfg(feature = "parallel")]
    {
        (0..total)
            .into_par_iter()
            .map(|flat| eval(&decode(flat)))
            .reduce(zero, |a, b| if a >= b { a } else { b })
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..total).map(|flat| eval(&decode(flat))).fold(zero(), |a, b| if a >= b { a } else { b })
    }
}

/// Sequential twin of the sweep, kept callable for benchmarks.
pub fn max_over_tuples_seq(degree: usize, eval: impl Fn(&[usize]) -> Rat) -> Rat {
    let total = 6usize.pow(degree as u32);
    let mut best = zero();
    let mut digits = vec![0usize; degree];
    for flat in 0..total {
        let mut f = flat;
        for d in digits.iter_mut().rev() {
            *d = f % 6;
            f /= 6;
        }
        let v = eval(&digits);
        if v > best {
            best = v;
        }
    }
    best
}

/// Exhaustive maximum of the separating test over projected symmetrised
/// triples of ball vertices: the projection from degree 3 to degree 2 is
/// not surjective, because this maximum stays at most 2/3 while the test
/// reaches 1 on a degree-2 element.
pub fn projection_defect_max() -> Rat {
    let vertices = xw_ball_vertices();
    max_over_tuples(3, |digits| {
        let c = tuple_component(&vertices, digits);
        mixed_test_value(&proj_j(&c, 2))
    })
}

pub fn projection_defect_max_seq() -> Rat {
    let vertices = xw_ball_vertices();
    max_over_tuples_seq(3, |digits| {
        let c = tuple_component(&vertices, digits);
        mixed_test_value(&proj_j(&c, 2))
    })
}

/// The degree-2 witness: the symmetric half-sum of the two mixed-label
/// vertices, on which the separating test evaluates to exactly 1.
pub fn projection_defect_witness() -> Rat {
    let v = CVec::new(vec![zero(), int(1), zero()]);
    let w = CVec::new(vec![int(1), zero(), zero()]);
    let c = SymComponent::pure_product(3, &[v.entries(), w.entries()]);
    mixed_test_value(&c)
}

/// Maximum of the separating test after projecting symmetrised pure
/// vertex tensors from degree `2n` down to 2. Bounded by `n / (2n - 1)`.
pub fn deep_projection_max(n: usize) -> Rat {
    let vertices = xw_ball_vertices();
    max_over_tuples(2 * n, |digits| {
        let c = tuple_component(&vertices, digits);
        mixed_test_value(&proj_j(&c, 2))
    })
}

pub fn deep_projection_max_seq(n: usize) -> Rat {
    let vertices = xw_ball_vertices();
    max_over_tuples_seq(2 * n, |digits| {
        let c = tuple_component(&vertices, digits);
        mixed_test_value(&proj_j(&c, 2))
    })
}

pub fn deep_projection_bound(n: usize) -> Rat {
    rat(n as i64, 2 * n as i64 - 1)
}

/// The analytic-but-not-effective map `(p0, p1) -> 4 p0 p1` over the
/// two-point simplex, as a truncated power series: a single degree-2
/// term that doubles the mixed aggregated coordinate.
pub fn four_p0p1(trunc: usize) -> AnalyticMap {
    assert!(trunc >= 2);
    let mut f = AnalyticMap::zero(2, 1, trunc);
    let basis = crate::bang::basis::MsetBasis::get(2, 2);
    let mut row = vec![zero(); basis.len()];
    row[basis.position(&[1, 1])] = int(2);
    f.terms[2] = vec![row];
    f
}

/// Membership validity of the map at a truncation: every grid point of
/// the simplex evaluates inside the unit interval, exactly.
pub fn four_p0p1_membership_valid(trunc: usize, grid: usize) -> bool {
    let f = four_p0p1(trunc);
    for i in 0..=grid {
        for j in 0..=(grid - i) {
            let x = CVec::new(vec![rat(i as i64, grid as i64), rat(j as i64, grid as i64)]);
            let v = f.eval(&x);
            if v.get(0) > &int(1) {
                return false;
            }
        }
    }
    true
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn six_vertices() {
        assert_eq!(xw_ball_vertices().len(), 6);
    }

    #[test]
    fn witness_reaches_one() {
        assert_eq!(projection_defect_witness(), int(1));
    }

    #[test]
    fn projection_defect_bounded_by_two_thirds() {
        let max = projection_defect_max();
        assert!(max <= rat(2, 3), "max = {max}");
        assert_eq!(max, projection_defect_max_seq());
    }

    #[test]
    fn deep_projection_bounds_small_degrees() {
        for n in 1..=2usize {
            let max = deep_projection_max(n);
            assert!(max <= deep_projection_bound(n), "n = {n}, max = {max}");
            assert_eq!(max, deep_projection_max_seq(n));
        }
    }

    #[test]
    fn four_p0p1_values() {
        let f = four_p0p1(2);
        let half = CVec::new(vec![rat(1, 2), rat(1, 2)]);
        assert_eq!(f.eval(&half), CVec::new(vec![int(1)]));
        let corner = CVec::new(vec![int(1), zero()]);
        assert_eq!(f.eval(&corner), CVec::new(vec![zero()]));
    }

    #[test]
    fn four_p0p1_membership_at_truncations() {
        for trunc in [2usize, 4, 6] {
            assert!(four_p0p1_membership_valid(trunc, 8));
        }
    }
}
