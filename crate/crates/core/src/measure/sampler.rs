//! Seeded sampler representation of sub-probability measures.

use super::finite::{FiniteMeasure, MeasureError};
use crate::rat::{to_f64, zero};
use crate::seed::SeedStream;
use std::collections::BTreeMap;
use std::sync::Arc;

/// A sub-probability measure as a deterministic partial sampler: the
/// pushforward of the seed stream's uniform measure by a total function
/// into `T` plus an undefined point (`None`). Same stream, same output.
///
/// Combinators that need two independent randomness sources split the
/// stream into its even and odd halves; a split tiles the remainder of
/// the stream, so the parent must not be drawn from afterwards.
#[derive(Clone)]
pub struct SamplerMeasure<T> {
    sampler: Arc<dyn Fn(&mut SeedStream) -> Option<T> + Send + Sync>,
}

impl<T: Clone + Send + Sync + 'static> SamplerMeasure<T> {
    pub fn new(f: impl Fn(&mut SeedStream) -> Option<T> + Send + Sync + 'static) -> Self {
        SamplerMeasure { sampler: Arc::new(f) }
    }

    pub fn sample(&self, stream: &mut SeedStream) -> Option<T> {
        (self.sampler)(stream)
    }

    /// Point mass.
    pub fn dirac(x: T) -> Self {
        SamplerMeasure::new(move |_| Some(x.clone()))
    }

    /// Inverse-CDF sampler for a finite table: walks the cumulative
    /// weights; draws beyond the total mass land on the undefined point.
    pub fn from_finite(m: &FiniteMeasure<T>) -> Self
    where
        T: Ord,
    {
        let table: Vec<(T, f64)> = {
            let mut acc = zero();
            m.atoms()
                .map(|(x, w)| {
                    acc += w;
                    (x.clone(), to_f64(&acc))
                })
                .collect()
        };
        SamplerMeasure::new(move |stream| {
            let u = stream.next_unit_f64();
            table.iter().find(|(_, c)| u < *c).map(|(x, _)| x.clone())
        })
    }

    /// Pushforward: compose the partial map.
    pub fn pushforward<U: Clone + Send + Sync + 'static>(
        &self,
        f: impl Fn(T) -> U + Send + Sync + 'static,
    ) -> SamplerMeasure<U> {
        let inner = self.sampler.clone();
        SamplerMeasure::new(move |stream| inner(stream).map(&f))
    }

    /// Monad multiplication for samplers of samplers: the outer draw uses
    /// the even half of the stream, the inner measure runs on the odd
    /// half, realising the pairing of two independent randomness sources.
    pub fn flatten(outer: SamplerMeasure<SamplerMeasure<T>>) -> SamplerMeasure<T> {
        SamplerMeasure::new(move |stream| {
            let (mut left, mut right) = stream.split();
            outer.sample(&mut left).and_then(|inner| inner.sample(&mut right))
        })
    }

    /// Scalar multiple by rejection: accept with probability `s` using
    /// one seed half as the gate, the other as the payload source.
    pub fn scale(&self, s: f64) -> SamplerMeasure<T> {
        assert!((0.0..=1.0).contains(&s));
        let inner = self.sampler.clone();
        SamplerMeasure::new(move |stream| {
            let (mut gate, mut payload) = stream.split();
            if gate.next_unit_f64() < s {
                inner(&mut payload)
            } else {
                None
            }
        })
    }

    /// Countable sum of a truncated family. Each part comes with its
    /// declared total mass; one draw selects a branch with probability
    /// equal to that mass, then the branch is sampled conditioned on
    /// success by bounded rejection (exact when the declaration is; the
    /// retry cap leaves a bias below `(1 - mass)^1000`).
    pub fn countable_sum(
        parts: Vec<(SamplerMeasure<T>, f64)>,
    ) -> Result<SamplerMeasure<T>, MeasureError> {
        let total: f64 = parts.iter().map(|(_, w)| w).sum();
        if total > 1.0 + 1e-12 {
            return Err(MeasureError::MassOverflow(total.to_string()));
        }
        Ok(SamplerMeasure::new(move |stream| {
            let u = stream.next_unit_f64();
            let mut acc = 0.0;
            for (part, w) in &parts {
                acc += w;
                if u < acc {
                    // fresh substream per attempt so rejection never replays
                    for attempt in 0..1000 {
                        let mut s = stream.substream(attempt);
                        if let Some(x) = part.sample(&mut s) {
                            return Some(x);
                        }
                    }
                    return None;
                }
            }
            None
        }))
    }

    /// Statistical check of the countable-sum precondition: estimates
    /// every declared mass empirically and rejects declarations further
    /// than `z` standard errors from the observation.
    pub fn verify_declared_masses(
        parts: &[(SamplerMeasure<T>, f64)],
        n_samples: u64,
        seed: &SeedStream,
        z: f64,
    ) -> bool {
        parts.iter().enumerate().all(|(idx, (part, declared))| {
            let mut defined = 0u64;
            for i in 0..n_samples {
                let mut s = seed.substream((idx as u64) << 32 | i);
                if part.sample(&mut s).is_some() {
                    defined += 1;
                }
            }
            let p = defined as f64 / n_samples as f64;
            let se = (p * (1.0 - p) / n_samples as f64).sqrt().max(1.0 / n_samples as f64);
            (p - declared).abs() <= z * se
        })
    }

    /// Monte-Carlo integral of a `[0, 1]`-valued function. Undefined
    /// samples contribute zero, matching integration over the defined
    /// region only. Rejects integrands observed outside `[0, 1]`.
    pub fn integrate(
        &self,
        f: impl Fn(&T) -> f64,
        n_samples: u64,
        seed: &SeedStream,
    ) -> Result<IntegralEstimate, MeasureError> {
        let mut sum = 0.0;
        let mut sum_sq = 0.0;
        for i in 0..n_samples {
            let mut s = seed.substream(i);
            let v = self.sample(&mut s).map(|x| f(&x)).unwrap_or(0.0);
            if !(0.0..=1.0).contains(&v) {
                return Err(MeasureError::IntegrandRange(v.to_string()));
            }
            sum += v;
            sum_sq += v * v;
        }
        let mean = sum / n_samples as f64;
        let var = (sum_sq / n_samples as f64 - mean * mean).max(0.0);
        Ok(IntegralEstimate { mean, std_error: (var / n_samples as f64).sqrt(), n_samples })
    }

    /// Empirical frequency table over `n_samples` independent substreams.
    pub fn empirical<K: Ord>(
        &self,
        key: impl Fn(&T) -> K,
        n_samples: u64,
        seed: &SeedStream,
    ) -> (BTreeMap<K, u64>, u64) {
        let mut counts: BTreeMap<K, u64> = BTreeMap::new();
        let mut undefined = 0;
        for i in 0..n_samples {
            let mut s = seed.substream(i);
            match self.sample(&mut s) {
                Some(x) => *counts.entry(key(&x)).or_insert(0) += 1,
                None => undefined += 1,
            }
        }
        (counts, undefined)
    }
}

/// Result of a Monte-Carlo integration.
#[derive(Debug, Clone, PartialEq)]
pub struct IntegralEstimate {
    pub mean: f64,
    pub std_error: f64,
    pub n_samples: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DistanceVerdict {
    Equal,
    Distinct,
}

/// Empirical total-variation comparison of two samplers.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceReport {
    pub estimate: f64,
    pub threshold: f64,
    pub verdict: DistanceVerdict,
    pub n_samples: u64,
}

/// Estimates the total-variation distance between two samplers over the
/// atoms (or bins) actually observed, including the undefined point, and
/// issues an equal/distinct verdict. The threshold scales like
/// `z * sqrt(k / n) / 2` where `k` counts occupied bins, so identical
/// samplers pass and well-separated ones fail at the declared `z`.
/// Deterministic given the seed.
pub fn stat_distance<T, K: Ord>(
    a: &SamplerMeasure<T>,
    b: &SamplerMeasure<T>,
    key: impl Fn(&T) -> K + Copy,
    n_samples: u64,
    seed: &SeedStream,
    z: f64,
) -> DistanceReport
where
    T: Clone + Send + Sync + 'static,
{
    let (ca, ua) = a.empirical(key, n_samples, &seed.substream(0x5EED));
    let (cb, ub) = b.empirical(key, n_samples, &seed.substream(0xFEED));
    let n = n_samples as f64;
    let mut tv = (ua as f64 - ub as f64).abs() / n;
    let mut bins = 1usize;
    let keys: std::collections::BTreeSet<&K> = ca.keys().chain(cb.keys()).collect();
    for k in keys {
        let pa = ca.get(k).copied().unwrap_or(0) as f64 / n;
        let pb = cb.get(k).copied().unwrap_or(0) as f64 / n;
        tv += (pa - pb).abs();
        bins += 1;
    }
    tv /= 2.0;
    let threshold = z * ((bins as f64) / n).sqrt() / 2.0;
    DistanceReport {
        estimate: tv,
        threshold,
        verdict: if tv <= threshold { DistanceVerdict::Equal } else { DistanceVerdict::Distinct },
        n_samples,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    fn uniform01() -> SamplerMeasure<f64> {
        SamplerMeasure::new(|s| Some(s.next_unit_f64()))
    }

    fn bernoulli(p: f64) -> SamplerMeasure<i64> {
        SamplerMeasure::new(move |s| Some(if s.next_unit_f64() < p { 1 } else { 0 }))
    }

    #[test]
    fn uniform_mean_is_half_within_three_sigma() {
        let est = uniform01().integrate(|x| *x, 100_000, &SeedStream::root(11)).unwrap();
        assert!((est.mean - 0.5).abs() < 3.0 * est.std_error, "{est:?}");
    }

    #[test]
    fn integrate_rejects_out_of_range_integrand() {
        let res = uniform01().integrate(|x| 2.0 * x, 1000, &SeedStream::root(11));
        assert!(matches!(res, Err(MeasureError::IntegrandRange(_))));
    }

    #[test]
    fn pushforward_shifts_samples() {
        let m = SamplerMeasure::dirac(1i64).pushforward(|x| x + 1);
        assert_eq!(m.sample(&mut SeedStream::root(0)), Some(2));
    }

    #[test]
    fn flatten_agrees_with_finite_flatten() {
        // outer coin picks dirac(0) or a half-mass dirac(0): flattened mass(0) = 3/4
        let h = FiniteMeasure::dirac(0i64);
        let t = FiniteMeasure::from_atoms([(0i64, rat(1, 2))]).unwrap();
        let outer = bernoulli(0.5).pushforward(move |b| {
            SamplerMeasure::from_finite(if b == 1 { &h } else { &t })
        });
        let flat = SamplerMeasure::flatten(outer);
        let (counts, undef) = flat.empirical(|x| *x, 100_000, &SeedStream::root(5));
        let p0 = counts[&0] as f64 / 100_000.0;
        assert!((p0 - 0.75).abs() < 0.01, "p0 = {p0}");
        assert!((undef as f64 / 100_000.0 - 0.25).abs() < 0.01);
    }

    #[test]
    fn scale_rejects_mass() {
        let m = SamplerMeasure::dirac(7i64).scale(0.25);
        let (counts, undef) = m.empirical(|x| *x, 40_000, &SeedStream::root(9));
        let p = counts[&7] as f64 / 40_000.0;
        assert!((p - 0.25).abs() < 0.02, "p = {p}");
        assert_eq!(counts[&7] + undef, 40_000);
    }

    #[test]
    fn identical_samplers_judged_equal() {
        let a = bernoulli(0.5);
        let b = bernoulli(0.5);
        let rep = stat_distance(&a, &b, |x| *x, 100_000, &SeedStream::root(1), 4.0);
        assert_eq!(rep.verdict, DistanceVerdict::Equal, "{rep:?}");
    }

    #[test]
    fn disjoint_diracs_judged_distinct_with_estimate_one() {
        let a = SamplerMeasure::dirac(0i64);
        let b = SamplerMeasure::dirac(1i64);
        let rep = stat_distance(&a, &b, |x| *x, 10_000, &SeedStream::root(2), 4.0);
        assert_eq!(rep.verdict, DistanceVerdict::Distinct);
        assert!((rep.estimate - 1.0).abs() < 1e-9);
    }

    #[test]
    fn bernoulli_half_vs_seventy_percent() {
        let rep = stat_distance(
            &bernoulli(0.5),
            &bernoulli(0.7),
            |x| *x,
            100_000,
            &SeedStream::root(3),
            4.0,
        );
        assert_eq!(rep.verdict, DistanceVerdict::Distinct);
        assert!((rep.estimate - 0.2).abs() < 0.02, "{rep:?}");
    }

    #[test]
    fn finite_and_sampler_representations_agree() {
        let m = FiniteMeasure::from_atoms([(0i64, rat(1, 3)), (2, rat(1, 4))]).unwrap();
        let a = SamplerMeasure::from_finite(&m);
        let b = SamplerMeasure::from_finite(&m.clone());
        let rep = stat_distance(&a, &b, |x| *x, 50_000, &SeedStream::root(4), 4.0);
        assert_eq!(rep.verdict, DistanceVerdict::Equal);
    }

    #[test]
    fn countable_sum_of_scaled_diracs() {
        let parts = vec![
            (SamplerMeasure::dirac(0i64).scale(0.5), 0.5),
            (SamplerMeasure::dirac(1i64).scale(0.25), 0.25),
        ];
        assert!(SamplerMeasure::verify_declared_masses(&parts, 20_000, &SeedStream::root(6), 4.0));
        let m = SamplerMeasure::countable_sum(parts).unwrap();
        let (counts, undef) = m.empirical(|x| *x, 100_000, &SeedStream::root(8));
        assert!((counts[&0] as f64 / 1e5 - 0.5).abs() < 0.01);
        assert!((counts[&1] as f64 / 1e5 - 0.25).abs() < 0.01);
        assert!((undef as f64 / 1e5 - 0.25).abs() < 0.01);
    }

    #[test]
    fn countable_sum_mass_overflow_rejected() {
        let parts = vec![
            (SamplerMeasure::dirac(0i64), 0.75),
            (SamplerMeasure::dirac(1i64), 0.75),
        ];
        assert!(matches!(
            SamplerMeasure::countable_sum(parts),
            Err(MeasureError::MassOverflow(_))
        ));
    }

    #[test]
    fn geometric_family_sums_to_geometric_measure() {
        let parts: Vec<_> = (0..30)
            .map(|n| {
                let w = 0.5f64.powi(n + 1);
                (SamplerMeasure::dirac(n as i64).scale(w), w)
            })
            .collect();
        let m = SamplerMeasure::countable_sum(parts).unwrap();
        let (counts, _) = m.empirical(|x| *x, 100_000, &SeedStream::root(12));
        assert!((counts[&0] as f64 / 1e5 - 0.5).abs() < 0.01);
        assert!((counts[&1] as f64 / 1e5 - 0.25).abs() < 0.01);
        assert!((counts[&2] as f64 / 1e5 - 0.125).abs() < 0.01);
    }
}
