//! Machine-readable reports: one JSON schema for every command.
//!
//! Rationals are serialised as `"p/q"` strings so no value is ever
//! rounded; atoms are listed in canonical value order, which together
//! with seeded sampling makes every report byte-identical across runs
//! and parallel schedules.

use crate::lang::{CanonValue, DistEstimate};
use crate::measure::FiniteMeasure;
use crate::rat::{one, to_frac_string, Rat};
use num_bigint::BigInt;
use serde::Serialize;
use serde_json::Value;
use std::collections::BTreeMap;

#[derive(Debug, Clone, Serialize)]
pub struct AtomEntry {
    pub value: Value,
    pub mass: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct DistReport {
    pub atoms: Vec<AtomEntry>,
    pub bottom_mass: String,
    pub meta: BTreeMap<String, Value>,
}

impl DistReport {
    /// Exact report from a denotational measure: the bottom mass is the
    /// measure's missing mass.
    pub fn from_measure(m: &FiniteMeasure<CanonValue>, meta: BTreeMap<String, Value>) -> Self {
        let atoms = m
            .atoms()
            .map(|(v, w)| AtomEntry { value: v.to_json(), mass: to_frac_string(w) })
            .collect();
        DistReport {
            atoms,
            bottom_mass: to_frac_string(&(one() - m.total_mass())),
            meta,
        }
    }

    /// Empirical report from sampled counts: masses are the exact
    /// rationals `count / n`.
    pub fn from_estimate(est: &DistEstimate, meta: BTreeMap<String, Value>) -> Self {
        let n = BigInt::from(est.n_samples);
        let atoms = est
            .counts
            .iter()
            .map(|(v, c)| AtomEntry {
                value: v.to_json(),
                mass: to_frac_string(&Rat::new(BigInt::from(*c), n.clone())),
            })
            .collect();
        DistReport {
            atoms,
            bottom_mass: to_frac_string(&Rat::new(BigInt::from(est.bottom), n)),
            meta,
        }
    }

    pub fn to_json(&self) -> Value {
        serde_json::to_value(self).expect("report serialisation")
    }

    pub fn render_text(&self) -> String {
        let mut out = String::new();
        for a in &self.atoms {
            let shown = match &a.value {
                Value::String(s) => s.clone(),
                other => other.to_string(),
            };
            out.push_str(&format!("{shown}\t{}\n", a.mass));
        }
        out.push_str(&format!("bottom\t{}\n", self.bottom_mass));
        out
    }
}

/// Standard metadata block shared by the sampling commands.
pub fn meta(entries: &[(&str, Value)]) -> BTreeMap<String, Value> {
    entries.iter().map(|(k, v)| (k.to_string(), v.clone())).collect()
}
