//! First-order values of data types, with a canonical order and a JSON
//! form for reports.

use crate::rat::{to_frac_string, Rat};
use serde_json::json;
use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum CanonValue {
    Rat(Rat),
    Pair(Box<CanonValue>, Box<CanonValue>),
    L(Box<CanonValue>),
    R(Box<CanonValue>),
}

impl CanonValue {
    pub fn rat(r: Rat) -> Self {
        CanonValue::Rat(r)
    }

    pub fn to_json(&self) -> serde_json::Value {
        match self {
            CanonValue::Rat(r) => json!(to_frac_string(r)),
            CanonValue::Pair(a, b) => json!({ "pair": [a.to_json(), b.to_json()] }),
            CanonValue::L(v) => json!({ "L": v.to_json() }),
            CanonValue::R(v) => json!({ "R": v.to_json() }),
        }
    }
}

impl fmt::Display for CanonValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CanonValue::Rat(r) => write!(f, "{}", to_frac_string(r)),
            CanonValue::Pair(a, b) => write!(f, "({a}, {b})"),
            CanonValue::L(v) => write!(f, "L {v}"),
            CanonValue::R(v) => write!(f, "R {v}"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rat::rat;

    #[test]
    fn ordering_is_total_and_stable() {
        let a = CanonValue::rat(rat(1, 2));
        let b = CanonValue::L(Box::new(CanonValue::rat(rat(1, 2))));
        let c = CanonValue::Pair(Box::new(a.clone()), Box::new(b.clone()));
        let mut v = [c.clone(), b.clone(), a.clone()];
        v.sort();
        assert_eq!(v.len(), 3);
    }

    #[test]
    fn json_shape() {
        let v = CanonValue::L(Box::new(CanonValue::Pair(
            Box::new(CanonValue::rat(rat(1, 2))),
            Box::new(CanonValue::rat(rat(1, 2))),
        )));
        assert_eq!(
            v.to_json().to_string(),
            r#"{"L":{"pair":["1/2","1/2"]}}"#
        );
    }
}
