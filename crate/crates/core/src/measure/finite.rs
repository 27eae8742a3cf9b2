//! Exact finite-support sub-probability measures.

use crate::rat::{one, zero, Rat};
use num_traits::Zero;
use std::collections::BTreeMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum MeasureError {
    #[error("total mass {0} exceeds 1")]
    MassOverflow(String),
    #[error("negative weight {0}")]
    NegativeWeight(String),
    #[error("integrand value {0} outside [0, 1]")]
    IntegrandRange(String),
}

/// A sub-probability measure with finite support, stored as a canonical
/// ordered table of atoms. Duplicate atoms are merged by addition; zero
/// weights are dropped; the total mass never exceeds one.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteMeasure<T: Ord + Clone> {
    atoms: BTreeMap<T, Rat>,
}

impl<T: Ord + Clone> FiniteMeasure<T> {
    /// The zero measure (total mass 0).
    pub fn zero_measure() -> Self {
        FiniteMeasure { atoms: BTreeMap::new() }
    }

    /// Point mass: the monad unit.
    pub fn dirac(x: T) -> Self {
        let mut atoms = BTreeMap::new();
        atoms.insert(x, one());
        FiniteMeasure { atoms }
    }

    /// Builds a measure from `(value, weight)` pairs, merging duplicates.
    pub fn from_atoms<I: IntoIterator<Item = (T, Rat)>>(pairs: I) -> Result<Self, MeasureError> {
        let mut atoms: BTreeMap<T, Rat> = BTreeMap::new();
        for (x, w) in pairs {
            if w < zero() {
                return Err(MeasureError::NegativeWeight(w.to_string()));
            }
            if w.is_zero() {
                continue;
            }
            *atoms.entry(x).or_insert_with(zero) += w;
        }
        let m = FiniteMeasure { atoms };
        if m.total_mass() > one() {
            return Err(MeasureError::MassOverflow(m.total_mass().to_string()));
        }
        Ok(m)
    }

    pub fn atoms(&self) -> impl Iterator<Item = (&T, &Rat)> {
        self.atoms.iter()
    }

    pub fn support_len(&self) -> usize {
        self.atoms.len()
    }

    pub fn mass_at(&self, x: &T) -> Rat {
        self.atoms.get(x).cloned().unwrap_or_else(zero)
    }

    pub fn total_mass(&self) -> Rat {
        self.atoms.values().fold(zero(), |a, b| a + b)
    }

    /// Exact pushforward along `f` (relabels atoms, merging collisions).
    pub fn pushforward<U: Ord + Clone>(&self, f: impl Fn(&T) -> U) -> FiniteMeasure<U> {
        let mut atoms: BTreeMap<U, Rat> = BTreeMap::new();
        for (x, w) in &self.atoms {
            *atoms.entry(f(x)).or_insert_with(zero) += w;
        }
        FiniteMeasure { atoms }
    }

    /// Exact integral of a `[0, 1]`-valued function against the measure.
    pub fn integrate(&self, f: impl Fn(&T) -> Rat) -> Result<Rat, MeasureError> {
        let mut acc = zero();
        for (x, w) in &self.atoms {
            let v = f(x);
            if v < zero() || v > one() {
                return Err(MeasureError::IntegrandRange(v.to_string()));
            }
            acc += v * w;
        }
        Ok(acc)
    }

    /// Monad multiplication: expected value of a measure over measures.
    pub fn flatten(outer: &FiniteMeasure<FiniteMeasure<T>>) -> Self
    where
        FiniteMeasure<T>: Ord,
    {
        let mut atoms: BTreeMap<T, Rat> = BTreeMap::new();
        for (inner, w) in &outer.atoms {
            for (x, v) in &inner.atoms {
                *atoms.entry(x.clone()).or_insert_with(zero) += w.clone() * v;
            }
        }
        FiniteMeasure { atoms }
    }

    /// Kleisli extension: pushforward through a sub-probability kernel
    /// followed by expectation. Exact.
    pub fn bind<U: Ord + Clone>(&self, k: impl Fn(&T) -> FiniteMeasure<U>) -> FiniteMeasure<U> {
        let mut atoms: BTreeMap<U, Rat> = BTreeMap::new();
        for (x, w) in &self.atoms {
            for (y, v) in k(x).atoms {
                *atoms.entry(y).or_insert_with(zero) += w.clone() * v;
            }
        }
        FiniteMeasure { atoms }
    }

    /// Exact scalar multiple, `0 <= s <= 1`.
    pub fn scale(&self, s: &Rat) -> Self {
        assert!(*s >= zero() && *s <= one(), "scalar outside [0, 1]");
        let atoms = self
            .atoms
            .iter()
            .filter(|(_, w)| !w.is_zero())
            .map(|(x, w)| (x.clone(), s.clone() * w))
            .filter(|(_, w)| !w.is_zero())
            .collect();
        FiniteMeasure { atoms }
    }

    /// Countable sum of a (truncated) family, exact. Fails with
    /// `MassOverflow` when the summed mass exceeds one.
    pub fn countable_sum<I: IntoIterator<Item = FiniteMeasure<T>>>(
        parts: I,
    ) -> Result<Self, MeasureError> {
        let mut atoms: BTreeMap<T, Rat> = BTreeMap::new();
        for m in parts {
            for (x, w) in m.atoms {
                *atoms.entry(x).or_insert_with(zero) += w;
            }
        }
        let m = FiniteMeasure { atoms };
        if m.total_mass() > one() {
            return Err(MeasureError::MassOverflow(m.total_mass().to_string()));
        }
        Ok(m)
    }

    /// Product measure (independent pairing), exact.
    pub fn product<U: Ord + Clone>(&self, other: &FiniteMeasure<U>) -> FiniteMeasure<(T, U)> {
        let mut atoms: BTreeMap<(T, U), Rat> = BTreeMap::new();
        for (x, w) in &self.atoms {
            for (y, v) in &other.atoms {
                atoms.insert((x.clone(), y.clone()), w.clone() * v);
            }
        }
        FiniteMeasure { atoms }
    }
}

// Lexicographic order on the atom table, so measures can themselves be
// atoms of an outer measure.
impl<T: Ord + Clone> PartialOrd for FiniteMeasure<T> {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: Ord + Clone> Ord for FiniteMeasure<T> {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.atoms.iter().cmp(other.atoms.iter())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::{int, rat};

    #[test]
    fn dirac_has_mass_one_and_unit_integral() {
        let d = FiniteMeasure::dirac(3i64);
        assert_eq!(d.total_mass(), one());
        // integrate against the indicator of {3}
        let v = d.integrate(|x| if *x == 3 { one() } else { zero() }).unwrap();
        assert_eq!(v, one());
    }

    #[test]
    fn bind_dirac_is_kernel_application() {
        let k = |x: &i64| {
            FiniteMeasure::from_atoms([(x + 1, rat(1, 2)), (x + 2, rat(1, 2))]).unwrap()
        };
        assert_eq!(FiniteMeasure::dirac(5i64).bind(k), k(&5));
    }

    #[test]
    fn pushforward_relabels() {
        let m = FiniteMeasure::from_atoms([(0i64, rat(1, 2))]).unwrap();
        let shifted = m.pushforward(|x| x + 1);
        assert_eq!(shifted.mass_at(&1), rat(1, 2));
        assert_eq!(shifted.support_len(), 1);
    }

    #[test]
    fn pushforward_functoriality_on_three_atoms() {
        let m = FiniteMeasure::from_atoms([(0i64, rat(1, 4)), (1, rat(1, 4)), (2, rat(1, 4))])
            .unwrap();
        let f = |x: &i64| x * 2;
        let g = |x: &i64| x + 1;
        let lhs = m.pushforward(|x| g(&f(x)));
        let rhs = m.pushforward(f).pushforward(g);
        assert_eq!(lhs, rhs);
        assert_eq!(m.pushforward(|x| *x), m);
    }

    #[test]
    fn integrate_hand_sum() {
        // 1/2 * 0 + 1/4 * 1 = 1/4 against the identity on {0,1}
        let m = FiniteMeasure::from_atoms([(0i64, rat(1, 2)), (1, rat(1, 4))]).unwrap();
        let v = m.integrate(|x| int(*x)).unwrap();
        assert_eq!(v, rat(1, 4));
        assert_eq!(m.integrate(|_| zero()).unwrap(), zero());
    }

    #[test]
    fn integrate_rejects_out_of_range() {
        let m = FiniteMeasure::dirac(0i64);
        assert!(matches!(m.integrate(|_| int(2)), Err(MeasureError::IntegrandRange(_))));
    }

    #[test]
    fn flatten_expected_value() {
        // coin over kernels: H -> dirac(0), T -> {0 -> 1/2}; mass(0) = 3/4
        let h = FiniteMeasure::dirac(0i64);
        let t = FiniteMeasure::from_atoms([(0i64, rat(1, 2))]).unwrap();
        let outer =
            FiniteMeasure::from_atoms([(h, rat(1, 2)), (t, rat(1, 2))]).unwrap();
        let flat = FiniteMeasure::flatten(&outer);
        assert_eq!(flat.mass_at(&0), rat(3, 4));
    }

    #[test]
    fn flatten_of_dirac_is_identity() {
        let m = FiniteMeasure::from_atoms([(1i64, rat(1, 3)), (2, rat(1, 3))]).unwrap();
        assert_eq!(FiniteMeasure::flatten(&FiniteMeasure::dirac(m.clone())), m);
    }

    #[test]
    fn countable_sum_geometric_reaches_mass_one() {
        let parts = (0..60).map(|n| FiniteMeasure::dirac(n as i64).scale(&rat(1, 2).pow(n + 1)));
        let m = FiniteMeasure::countable_sum(parts).unwrap();
        assert_eq!(m.mass_at(&0), rat(1, 2));
        assert_eq!(m.mass_at(&3), rat(1, 16));
        assert!(m.total_mass() < one());
        // the full (infinite) family has mass exactly 1; the truncation is short by 2^-60
        assert_eq!(one() - m.total_mass(), rat(1, 2).pow(60));
    }

    #[test]
    fn countable_sum_neutral_zero() {
        let m = FiniteMeasure::from_atoms([(9i64, rat(2, 3))]).unwrap();
        let again =
            FiniteMeasure::countable_sum([m.clone(), FiniteMeasure::zero_measure()]).unwrap();
        assert_eq!(again, m);
    }

    #[test]
    fn countable_sum_overflow_detected() {
        let a = FiniteMeasure::dirac(0i64).scale(&rat(3, 4));
        let b = FiniteMeasure::dirac(1i64).scale(&rat(3, 4));
        assert!(matches!(
            FiniteMeasure::countable_sum([a, b]),
            Err(MeasureError::MassOverflow(_))
        ));
    }

    #[test]
    fn scale_examples() {
        let d = FiniteMeasure::dirac(7i64);
        assert_eq!(d.scale(&rat(1, 2)).total_mass(), rat(1, 2));
        assert_eq!(d.scale(&zero()), FiniteMeasure::zero_measure());
        let m = FiniteMeasure::from_atoms([(0i64, rat(3, 4))]).unwrap();
        assert_eq!(m.scale(&rat(1, 3)).mass_at(&0), rat(1, 4));
    }

    #[test]
    fn duplicate_atoms_merge() {
        let m = FiniteMeasure::from_atoms([(1i64, rat(1, 4)), (1, rat(1, 4))]).unwrap();
        assert_eq!(m.support_len(), 1);
        assert_eq!(m.mass_at(&1), rat(1, 2));
    }
}
