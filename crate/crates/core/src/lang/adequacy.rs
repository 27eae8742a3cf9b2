//! Empirical comparison of the two semantics on the discrete fragment.

use super::ast::Span;
use super::denote::{denote_program, DenoteCtx, DenoteError};
use super::opsem::{estimate_dist, DistEstimate};
use super::types::TypedTerm;
use super::value::CanonValue;
use crate::measure::FiniteMeasure;
use crate::rat::{one, to_f64, to_frac_string, Rat};
use std::collections::BTreeSet;

/// One compared atom.
#[derive(Debug, Clone)]
pub struct AtomComparison {
    pub value: CanonValue,
    pub denoted: Rat,
    pub estimated: f64,
    pub sigma: f64,
    pub pass: bool,
}

#[derive(Debug, Clone)]
pub struct AdequacyReport {
    pub atoms: Vec<AtomComparison>,
    pub denoted_bottom: Rat,
    pub estimated_bottom: f64,
    pub bottom_pass: bool,
    pub pass: bool,
    pub n_samples: u64,
    pub z: f64,
}

impl AdequacyReport {
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "atoms": self.atoms.iter().map(|a| serde_json::json!({
                "value": a.value.to_json(),
                "denoted": to_frac_string(&a.denoted),
                "estimated": a.estimated,
                "sigma": a.sigma,
                "pass": a.pass,
            })).collect::<Vec<_>>(),
            "bottom": {
                "denoted": to_frac_string(&self.denoted_bottom),
                "estimated": self.estimated_bottom,
                "pass": self.bottom_pass,
            },
            "n_samples": self.n_samples,
            "z": self.z,
            "pass": self.pass,
        })
    }
}

/// Core comparison, separated from interpretation so the harness can be
/// self-tested with a deliberately perturbed denotation: every atom of
/// either side must agree within `z` standard errors plus the fixed-point
/// tolerance.
pub fn compare_measures(
    denoted: &FiniteMeasure<CanonValue>,
    estimated: &DistEstimate,
    z: f64,
    fix_tol: &Rat,
) -> AdequacyReport {
    let n = estimated.n_samples as f64;
    let tol = to_f64(fix_tol);
    let values: BTreeSet<CanonValue> = denoted
        .atoms()
        .map(|(v, _)| v.clone())
        .chain(estimated.counts.keys().cloned())
        .collect();
    let mut atoms = Vec::new();
    let mut pass = true;
    for v in values {
        let p = denoted.mass_at(&v);
        let p_hat = estimated.frequency(&v);
        let p_ref = to_f64(&p).max(p_hat).max(1.0 / n);
        let sigma = (p_ref * (1.0 - p_ref).max(0.0) / n).sqrt().max(1.0 / n);
        let ok = (p_hat - to_f64(&p)).abs() <= z * sigma + tol;
        pass &= ok;
        atoms.push(AtomComparison { value: v, denoted: p, estimated: p_hat, sigma, pass: ok });
    }
    let denoted_bottom = one() - denoted.total_mass();
    let b_hat = estimated.bottom_frequency();
    let b_ref = to_f64(&denoted_bottom).max(b_hat).max(1.0 / n);
    let sigma_b = (b_ref * (1.0 - b_ref).max(0.0) / n).sqrt().max(1.0 / n);
    let bottom_pass = (b_hat - to_f64(&denoted_bottom)).abs() <= z * sigma_b + tol;
    pass &= bottom_pass;
    AdequacyReport {
        atoms,
        denoted_bottom,
        estimated_bottom: b_hat,
        bottom_pass,
        pass,
        n_samples: estimated.n_samples,
        z,
    }
}

/// Runs both semantics on a closed data-typed program and compares them
/// per atom. Deterministic given the seed.
pub fn compare_adequacy(
    term: &TypedTerm,
    raw: &super::ast::Term,
    z: f64,
    ctx: &DenoteCtx,
    n_samples: u64,
    seed: u64,
    fuel: u64,
) -> Result<AdequacyReport, DenoteError> {
    let denoted = denote_program(term, ctx)?.data_measure(Span::default())?;
    let estimated = estimate_dist(raw, n_samples, seed, fuel);
    Ok(compare_measures(&denoted, &estimated, z, &ctx.fix_tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parser::parse_program;
    use crate::lang::types::typecheck;
    use crate::rat::rat;

    fn compare(src: &str, n: u64, seed: u64) -> AdequacyReport {
        let raw = parse_program(src).unwrap();
        let typed = typecheck(&raw).unwrap();
        compare_adequacy(&typed, &raw, 4.0, &DenoteCtx::default(), n, seed, 10_000).unwrap()
    }

    #[test]
    fn geometric_passes() {
        let r = compare("fix g. if bernoulli(1/2) then 0 else 1 + g", 100_000, 42);
        assert!(r.pass, "{:?}", r.to_json());
    }

    #[test]
    fn divergence_passes_with_full_bottom() {
        let r = compare("fix x. x", 1_000, 7);
        assert!(r.pass);
        assert_eq!(r.denoted_bottom, one());
        assert_eq!(r.estimated_bottom, 1.0);
    }

    #[test]
    fn perturbed_denotation_fails() {
        // harness self-test: shift five percent of the fair coin's mass
        let raw = parse_program("bernoulli(1/2)").unwrap();
        let est = estimate_dist(&raw, 100_000, 11, 100);
        let perturbed = FiniteMeasure::from_atoms([
            (CanonValue::rat(rat(0, 1)), rat(45, 100)),
            (CanonValue::rat(rat(1, 1)), rat(55, 100)),
        ])
        .unwrap();
        let report = compare_measures(&perturbed, &est, 4.0, &rat(1, 1_000_000_000));
        assert!(!report.pass);
    }
}
