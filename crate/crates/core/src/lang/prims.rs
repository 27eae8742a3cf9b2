//! The primitive registry: named kernels over the reals.
//!
//! Discrete-exact primitives map rational arguments to a finite
//! sub-probability table; continuous ones only sample. Division by zero
//! loses its mass (zero measure exactly, undefined operationally), which
//! is the canonical failure of sub-probability semantics. Out-of-range
//! probability arguments are clamped so every primitive is a total
//! kernel.

use crate::measure::FiniteMeasure;
use crate::rat::{from_f64_exact, int, one, to_f64, zero, Rat};
use crate::seed::SeedStream;
use num_traits::{ToPrimitive, Zero};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PrimKind {
    DiscreteExact,
    ContinuousSampler,
}

#[derive(Debug, Clone, Copy)]
pub struct PrimInfo {
    pub name: &'static str,
    pub arity: usize,
    pub kind: PrimKind,
}

const PRIMS: &[PrimInfo] = &[
    PrimInfo { name: "bernoulli", arity: 1, kind: PrimKind::DiscreteExact },
    PrimInfo { name: "dunif", arity: 1, kind: PrimKind::DiscreteExact },
    PrimInfo { name: "uniform", arity: 2, kind: PrimKind::ContinuousSampler },
    PrimInfo { name: "normal", arity: 2, kind: PrimKind::ContinuousSampler },
    PrimInfo { name: "add", arity: 2, kind: PrimKind::DiscreteExact },
    PrimInfo { name: "sub", arity: 2, kind: PrimKind::DiscreteExact },
    PrimInfo { name: "mul", arity: 2, kind: PrimKind::DiscreteExact },
    PrimInfo { name: "div", arity: 2, kind: PrimKind::DiscreteExact },
    PrimInfo { name: "lt", arity: 2, kind: PrimKind::DiscreteExact },
    PrimInfo { name: "eq", arity: 2, kind: PrimKind::DiscreteExact },
];

pub fn lookup(name: &str) -> Option<&'static PrimInfo> {
    PRIMS.iter().find(|p| p.name == name)
}

fn clamp_unit(p: &Rat) -> Rat {
    if *p < zero() {
        zero()
    } else if *p > one() {
        one()
    } else {
        p.clone()
    }
}

/// Exact kernel of a discrete primitive; `None` for continuous ones.
pub fn eval_exact(name: &str, args: &[Rat]) -> Option<FiniteMeasure<Rat>> {
    let m = match name {
        "bernoulli" => {
            let p = clamp_unit(&args[0]);
            FiniteMeasure::from_atoms([(one(), p.clone()), (zero(), one() - p)]).unwrap()
        }
        "dunif" => {
            let n = args[0].floor().to_integer().to_i64().unwrap_or(0);
            if n <= 0 {
                FiniteMeasure::zero_measure()
            } else {
                FiniteMeasure::from_atoms((0..n).map(|k| (int(k), Rat::new(1.into(), n.into()))))
                    .unwrap()
            }
        }
        "add" => FiniteMeasure::dirac(args[0].clone() + &args[1]),
        "sub" => FiniteMeasure::dirac(args[0].clone() - &args[1]),
        "mul" => FiniteMeasure::dirac(args[0].clone() * &args[1]),
        "div" => {
            if args[1].is_zero() {
                FiniteMeasure::zero_measure()
            } else {
                FiniteMeasure::dirac(args[0].clone() / &args[1])
            }
        }
        "lt" => FiniteMeasure::dirac(if args[0] < args[1] { one() } else { zero() }),
        "eq" => FiniteMeasure::dirac(if args[0] == args[1] { one() } else { zero() }),
        _ => return None,
    };
    Some(m)
}

/// Draws one sample from the primitive's kernel. Continuous draws are
/// dyadic rationals (exact images of the stream), so equality tests on
/// results are well-defined.
pub fn sample(name: &str, args: &[Rat], stream: &mut SeedStream) -> Option<Rat> {
    if let Some(table) = eval_exact(name, args) {
        let u = stream.next_unit_rat();
        let mut acc = zero();
        for (x, w) in table.atoms() {
            acc += w;
            if u < acc {
                return Some(x.clone());
            }
        }
        return None;
    }
    match name {
        "uniform" => {
            let (lo, hi) = (&args[0], &args[1]);
            let (lo, hi) = if lo <= hi { (lo, hi) } else { (hi, lo) };
            let u = stream.next_unit_rat();
            Some(lo + (hi.clone() - lo) * u)
        }
        "normal" => {
            let mean = &args[0];
            let sd = &args[1];
            if *sd <= zero() {
                return Some(mean.clone());
            }
            let u1 = stream.next_unit_f64().max(f64::MIN_POSITIVE);
            let u2 = stream.next_unit_f64();
            let z = (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
            let offset = from_f64_exact(z * to_f64(sd))?;
            Some(mean.clone() + offset)
        }
        _ => None,
    }
}
