//! Convex objects: a web together with generating sets for the point and
//! test polytopes.
//!
//! The point ball is the downward convex closure of `point_gens`, the
//! test ball that of `test_gens`; every constructor keeps the
//! cross-pairing bound (every test against every point is at most one)
//! and the bipolarity property that each ball is exactly the polar of
//! the other's generators.

use super::polar::{polar_vertices, same_polytope, PolarError};
use super::web::{CVec, Web};
use crate::measure::FiniteMeasure;
use crate::rat::{one, zero, Rat};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvexObject {
    pub web: Web,
    pub point_gens: Vec<CVec>,
    pub test_gens: Vec<CVec>,
}

fn canonical(mut gens: Vec<CVec>) -> Vec<CVec> {
    gens.sort();
    gens.dedup();
    gens
}

impl ConvexObject {
    fn new(web: Web, point_gens: Vec<CVec>, test_gens: Vec<CVec>) -> Self {
        let obj = ConvexObject {
            web,
            point_gens: canonical(point_gens),
            test_gens: canonical(test_gens),
        };
        obj.assert_cross_pairing();
        obj
    }

    fn assert_cross_pairing(&self) {
        for p in &self.point_gens {
            debug_assert_eq!(p.dim(), self.web.dim());
            for t in &self.test_gens {
                assert!(t.pairing(p) <= one(), "cross pairing exceeds 1: {t} . {p}");
            }
        }
    }

    /// The weight object: points and tests are the unit interval, the
    /// pairing is multiplication.
    pub fn weights() -> Self {
        let w = Web::singleton("w");
        ConvexObject::new(w, vec![CVec::unit(1, 0)], vec![CVec::unit(1, 0)])
    }

    /// The additive unit: empty web, a single zero point and test.
    pub fn zero_object() -> Self {
        ConvexObject::new(Web::empty(), vec![CVec::zeros(0)], vec![CVec::zeros(0)])
    }

    /// The data-type object of a finite label set: points are generated
    /// by the coordinate Diracs (the sub-probability simplex), tests by
    /// every 0/1 vector (the cube vertices).
    pub fn embed_finite(labels: &[&str]) -> Self {
        let n = labels.len();
        assert!(n <= 12, "embed_finite label set too large for explicit tests");
        let web = Web::new(labels.iter().map(|s| s.to_string()).collect());
        if n == 0 {
            return ConvexObject::zero_object();
        }
        let point_gens = (0..n).map(|i| CVec::unit(n, i)).collect();
        let test_gens = (0..(1usize << n))
            .map(|mask| {
                CVec::new(
                    (0..n)
                        .map(|i| if mask >> i & 1 == 1 { one() } else { zero() })
                        .collect(),
                )
            })
            .collect();
        ConvexObject::new(web, point_gens, test_gens)
    }

    /// Duality: exchange points and tests.
    pub fn dual(&self) -> Self {
        ConvexObject {
            web: self.web.clone(),
            point_gens: self.test_gens.clone(),
            test_gens: self.point_gens.clone(),
        }
    }

    /// Cartesian product (`with`): points are blockwise tuples of point
    /// generators, tests are single-block injections of test generators
    /// (which enforces the summed pairing bound structurally).
    pub fn with_objects(parts: &[&ConvexObject]) -> Self {
        let web = Web::disjoint_union(&parts.iter().map(|p| &p.web).collect::<Vec<_>>());
        let mut point_gens = vec![CVec::zeros(0)];
        for p in parts {
            let mut next = Vec::new();
            for acc in &point_gens {
                for g in &p.point_gens {
                    next.push(CVec::concat(&[acc, g]));
                }
            }
            point_gens = next;
        }
        let mut test_gens = Vec::new();
        let dims: Vec<usize> = parts.iter().map(|p| p.web.dim()).collect();
        let total: usize = dims.iter().sum();
        let mut offset = 0;
        for (p, d) in parts.iter().zip(&dims) {
            for t in &p.test_gens {
                let mut entries = vec![zero(); total];
                entries[offset..offset + d].clone_from_slice(t.entries());
                test_gens.push(CVec::new(entries));
            }
            offset += d;
        }
        // the zero test is always a vertex of the test ball
        test_gens.push(CVec::zeros(total));
        ConvexObject::new(web, point_gens, test_gens)
    }

    /// Coproduct (`plus`): dual of the product of duals.
    pub fn plus_objects(parts: &[&ConvexObject]) -> Self {
        let duals: Vec<ConvexObject> = parts.iter().map(|p| p.dual()).collect();
        ConvexObject::with_objects(&duals.iter().collect::<Vec<_>>()).dual()
    }

    /// Tensor product: points are generated by the pure tensors of point
    /// generators; tests are the exact polar of those products.
    pub fn tensor(&self, other: &ConvexObject) -> Result<Self, PolarError> {
        let web = self.web.product(&other.web);
        let mut point_gens = Vec::new();
        for a in &self.point_gens {
            for b in &other.point_gens {
                point_gens.push(a.tensor(b));
            }
        }
        let test_gens = polar_vertices(web.dim(), &point_gens)?;
        Ok(ConvexObject::new(web, point_gens, test_gens))
    }

    pub fn dim(&self) -> usize {
        self.web.dim()
    }

    /// Point-ball membership from the test generators.
    pub fn membership(&self, x: &CVec) -> bool {
        x.dim() == self.dim() && self.test_gens.iter().all(|t| t.pairing(x) <= one())
    }

    /// Test-ball membership from the point generators.
    pub fn test_membership(&self, t: &CVec) -> bool {
        t.dim() == self.dim() && self.point_gens.iter().all(|p| t.pairing(p) <= one())
    }

    /// `sup` of the pairing over the test ball: attained at a generator.
    pub fn norm_point(&self, x: &CVec) -> Rat {
        self.test_gens.iter().map(|t| t.pairing(x)).max().unwrap_or_else(zero)
    }

    /// `sup` of the pairing over the point ball: attained at a generator.
    pub fn norm_test(&self, t: &CVec) -> Rat {
        self.point_gens.iter().map(|p| t.pairing(p)).max().unwrap_or_else(zero)
    }

    /// Full vertex set of the point ball (polar of the test generators).
    pub fn ball_vertices(&self) -> Result<Vec<CVec>, PolarError> {
        polar_vertices(self.dim(), &self.test_gens)
    }

    /// True when the two objects have the same point ball over
    /// identically sized webs (labels are ignored).
    pub fn same_ball(&self, other: &ConvexObject) -> Result<bool, PolarError> {
        if self.dim() != other.dim() {
            return Ok(false);
        }
        Ok(same_polytope(self.dim(), &self.point_gens, &other.point_gens)?
            && same_polytope(self.dim(), &self.test_gens, &other.test_gens)?)
    }

    /// Desk-scale bipolarity: the polar of the polar of the point
    /// generators spans the same polytope as the generators themselves.
    pub fn bipolar_check(&self) -> Result<bool, PolarError> {
        let polar1 = polar_vertices(self.dim(), &self.point_gens)?;
        let polar2 = polar_vertices(self.dim(), &polar1)?;
        same_polytope(self.dim(), &polar2, &self.point_gens)
    }

    /// JSON form: the web as a label array, generators as arrays of
    /// `"p/q"` strings.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "web": self.web.labels(),
            "point_gens": self.point_gens.iter().map(|g| g.frac_strings()).collect::<Vec<_>>(),
            "test_gens": self.test_gens.iter().map(|g| g.frac_strings()).collect::<Vec<_>>(),
        })
    }

    /// Coordinate vector of a finite measure over this object's labels.
    pub fn cvec_of_measure(&self, m: &FiniteMeasure<String>) -> Option<CVec> {
        let mut entries = vec![zero(); self.dim()];
        for (label, w) in m.atoms() {
            let i = self.web.index_of(label)?;
            entries[i] = w.clone();
        }
        Some(CVec::new(entries))
    }
}
