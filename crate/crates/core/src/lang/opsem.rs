//! Operational semantics: seeded call-by-name big-step evaluation.
//!
//! Application substitutes unevaluated arguments, so a thunk is
//! re-sampled at every use; forcing (`eval`) reduces its scrutinee to a
//! first-order value once and substitutes the value literally, which is
//! what preserves correlations. Primitives draw from the seed stream in
//! evaluation order, so a run is a pure function of the term and the
//! seed. Fuel exhaustion models the missing mass of non-termination.

use super::ast::{Span, Term, TermKind};
use super::prims;
use super::value::CanonValue;
use crate::rat::Rat;
use crate::seed::SeedStream;
use std::collections::BTreeMap;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Capture-avoiding substitution; binders shadow, and binders whose name
/// occurs free in the replacement are renamed with a `$` suffix that the
/// lexer cannot produce.
fn subst(term: &Term, var: &str, replacement: &Term, counter: &mut u64) -> Term {
    let kind = match &term.kind {
        TermKind::Var(x) => {
            if x == var {
                return replacement.clone();
            }
            TermKind::Var(x.clone())
        }
        TermKind::Lit(r) => TermKind::Lit(r.clone()),
        TermKind::Lam(x, body) => {
            let (x2, body2) = subst_under(x, body, var, replacement, counter);
            TermKind::Lam(x2, Box::new(body2))
        }
        TermKind::Fix(x, body) => {
            let (x2, body2) = subst_under(x, body, var, replacement, counter);
            TermKind::Fix(x2, Box::new(body2))
        }
        TermKind::App(f, a) => TermKind::App(
            Box::new(subst(f, var, replacement, counter)),
            Box::new(subst(a, var, replacement, counter)),
        ),
        TermKind::Pair(a, b) => TermKind::Pair(
            Box::new(subst(a, var, replacement, counter)),
            Box::new(subst(b, var, replacement, counter)),
        ),
        TermKind::InL(t) => TermKind::InL(Box::new(subst(t, var, replacement, counter))),
        TermKind::InR(t) => TermKind::InR(Box::new(subst(t, var, replacement, counter))),
        TermKind::MatchPair { scrutinee, left_var, right_var, body } => {
            let s2 = subst(scrutinee, var, replacement, counter);
            if left_var == var || right_var == var {
                TermKind::MatchPair {
                    scrutinee: Box::new(s2),
                    left_var: left_var.clone(),
                    right_var: right_var.clone(),
                    body: body.clone(),
                }
            } else {
                // rename binders that would capture
                let (lv, rv, mut body2) = (left_var.clone(), right_var.clone(), (**body).clone());
                let free = replacement.free_vars();
                let (lv, rv) = if free.contains(lv.as_str()) || free.contains(rv.as_str()) {
                    let nl = fresh_name(&lv, counter);
                    let nr = fresh_name(&rv, counter);
                    body2 = subst(&body2, &lv, &var_term(&nl, term.span), counter);
                    body2 = subst(&body2, &rv, &var_term(&nr, term.span), counter);
                    (nl, nr)
                } else {
                    (lv, rv)
                };
                TermKind::MatchPair {
                    scrutinee: Box::new(s2),
                    left_var: lv,
                    right_var: rv,
                    body: Box::new(subst(&body2, var, replacement, counter)),
                }
            }
        }
        TermKind::MatchSum { scrutinee, left_var, left_body, right_var, right_body } => {
            let s2 = subst(scrutinee, var, replacement, counter);
            let (lv, lb) = if left_var == var {
                (left_var.clone(), (**left_body).clone())
            } else {
                let (v, b) = subst_under(left_var, left_body, var, replacement, counter);
                (v, b)
            };
            let (rv, rb) = if right_var == var {
                (right_var.clone(), (**right_body).clone())
            } else {
                let (v, b) = subst_under(right_var, right_body, var, replacement, counter);
                (v, b)
            };
            TermKind::MatchSum {
                scrutinee: Box::new(s2),
                left_var: lv,
                left_body: Box::new(lb),
                right_var: rv,
                right_body: Box::new(rb),
            }
        }
        TermKind::If { cond, then_branch, else_branch } => TermKind::If {
            cond: Box::new(subst(cond, var, replacement, counter)),
            then_branch: Box::new(subst(then_branch, var, replacement, counter)),
            else_branch: Box::new(subst(else_branch, var, replacement, counter)),
        },
        TermKind::Eval { scrutinee, var: v, body } => {
            let s2 = subst(scrutinee, var, replacement, counter);
            if v == var {
                TermKind::Eval { scrutinee: Box::new(s2), var: v.clone(), body: body.clone() }
            } else {
                let (v2, b2) = subst_under(v, body, var, replacement, counter);
                TermKind::Eval { scrutinee: Box::new(s2), var: v2, body: Box::new(b2) }
            }
        }
        TermKind::Prim(name, args) => TermKind::Prim(
            name.clone(),
            args.iter().map(|a| subst(a, var, replacement, counter)).collect(),
        ),
    };
    Term::new(kind, term.span)
}

fn var_term(name: &str, span: Span) -> Term {
    Term::new(TermKind::Var(name.to_string()), span)
}

fn fresh_name(base: &str, counter: &mut u64) -> String {
    *counter += 1;
    format!("{base}${counter}")
}

fn subst_under(
    binder: &str,
    body: &Term,
    var: &str,
    replacement: &Term,
    counter: &mut u64,
) -> (String, Term) {
    if binder == var {
        return (binder.to_string(), body.clone());
    }
    if replacement.free_vars().contains(binder) {
        let fresh = fresh_name(binder, counter);
        let renamed = subst(body, binder, &var_term(&fresh, body.span), counter);
        (fresh, subst(&renamed, var, replacement, counter))
    } else {
        (binder.to_string(), subst(body, var, replacement, counter))
    }
}

struct Machine<'a> {
    stream: &'a mut SeedStream,
    fuel: u64,
    counter: u64,
}

impl Machine<'_> {
    fn whnf(&mut self, term: Term) -> Option<Term> {
        // reductions continue in a loop so deep fix-unfolding chains use
        // constant stack; only sub-evaluations (function heads, scrutinees,
        // primitive arguments) recurse
        let mut term = term;
        loop {
            if self.fuel == 0 {
                return None;
            }
            self.fuel -= 1;
            term = match term.kind {
                TermKind::Lam(..)
                | TermKind::Pair(..)
                | TermKind::InL(..)
                | TermKind::InR(..)
                | TermKind::Lit(_) => return Some(term),
                TermKind::Var(x) => unreachable!("stuck on free variable `{x}`"),
                TermKind::App(f, a) => {
                    let fv = self.whnf(*f)?;
                    match fv.kind {
                        TermKind::Lam(x, body) => subst(&body, &x, &a, &mut self.counter),
                        other => unreachable!("application of a non-function: {other:?}"),
                    }
                }
                TermKind::Fix(x, body) => {
                    let again = Term::new(TermKind::Fix(x.clone(), body.clone()), term.span);
                    subst(&body, &x, &again, &mut self.counter)
                }
                TermKind::If { cond, then_branch, else_branch } => {
                    let cv = self.whnf(*cond)?;
                    match cv.kind {
                        TermKind::Lit(r) => {
                            if r == crate::rat::zero() {
                                *else_branch
                            } else {
                                *then_branch
                            }
                        }
                        other => unreachable!("if on a non-real: {other:?}"),
                    }
                }
                TermKind::MatchPair { scrutinee, left_var, right_var, body } => {
                    let sv = self.whnf(*scrutinee)?;
                    match sv.kind {
                        TermKind::Pair(a, b) => {
                            let step = subst(&body, &left_var, &a, &mut self.counter);
                            subst(&step, &right_var, &b, &mut self.counter)
                        }
                        other => unreachable!("pair match on {other:?}"),
                    }
                }
                TermKind::MatchSum { scrutinee, left_var, left_body, right_var, right_body } => {
                    let sv = self.whnf(*scrutinee)?;
                    match sv.kind {
                        TermKind::InL(payload) => {
                            subst(&left_body, &left_var, &payload, &mut self.counter)
                        }
                        TermKind::InR(payload) => {
                            subst(&right_body, &right_var, &payload, &mut self.counter)
                        }
                        other => unreachable!("sum match on {other:?}"),
                    }
                }
                TermKind::Eval { scrutinee, var, body } => {
                    let value = self.deep_value(*scrutinee)?;
                    let literal = value_term(&value, term.span);
                    subst(&body, &var, &literal, &mut self.counter)
                }
                TermKind::Prim(name, args) => {
                    let mut vals: Vec<Rat> = Vec::with_capacity(args.len());
                    for a in args {
                        let av = self.whnf(a)?;
                        match av.kind {
                            TermKind::Lit(r) => vals.push(r),
                            other => unreachable!("primitive argument not a real: {other:?}"),
                        }
                    }
                    let drawn = prims::sample(&name, &vals, self.stream)?;
                    return Some(Term::new(TermKind::Lit(drawn), term.span));
                }
            };
        }
    }

    /// Forces a data-typed term all the way to a first-order value.
    fn deep_value(&mut self, term: Term) -> Option<CanonValue> {
        let v = self.whnf(term)?;
        match v.kind {
            TermKind::Lit(r) => Some(CanonValue::Rat(r)),
            TermKind::Pair(a, b) => {
                let av = self.deep_value(*a)?;
                let bv = self.deep_value(*b)?;
                Some(CanonValue::Pair(Box::new(av), Box::new(bv)))
            }
            TermKind::InL(t) => Some(CanonValue::L(Box::new(self.deep_value(*t)?))),
            TermKind::InR(t) => Some(CanonValue::R(Box::new(self.deep_value(*t)?))),
            other => unreachable!("deep value of a non-data term: {other:?}"),
        }
    }
}

/// Re-injects a first-order value as a term (literals under
/// constructors), so substituting it re-evaluates without randomness.
pub fn value_term(v: &CanonValue, span: Span) -> Term {
    let kind = match v {
        CanonValue::Rat(r) => TermKind::Lit(r.clone()),
        CanonValue::Pair(a, b) => TermKind::Pair(
            Box::new(value_term(a, span)),
            Box::new(value_term(b, span)),
        ),
        CanonValue::L(t) => TermKind::InL(Box::new(value_term(t, span))),
        CanonValue::R(t) => TermKind::InR(Box::new(value_term(t, span))),
    };
    Term::new(kind, span)
}

/// One seeded run of a closed data-typed program: the deep value, or the
/// undefined point on fuel exhaustion (or lost mass in a primitive).
pub fn op_eval(term: &Term, stream: &mut SeedStream, fuel: u64) -> Option<CanonValue> {
    let mut machine = Machine { stream, fuel, counter: 0 };
    machine.deep_value(term.clone())
}

/// Empirical distribution over `n_samples` independent runs, one
/// substream per sample index, so the result is independent of the
/// parallel schedule.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DistEstimate {
    pub counts: BTreeMap<CanonValue, u64>,
    pub bottom: u64,
    pub n_samples: u64,
}

impl DistEstimate {
    pub fn frequency(&self, v: &CanonValue) -> f64 {
        *self.counts.get(v).unwrap_or(&0) as f64 / self.n_samples as f64
    }

    pub fn bottom_frequency(&self) -> f64 {
        self.bottom as f64 / self.n_samples as f64
    }
}

pub fn estimate_dist(term: &Term, n_samples: u64, seed: u64, fuel: u64) -> DistEstimate {
    let root = SeedStream::root(seed);
    let run = |i: u64| -> Option<CanonValue> {
        let mut stream = root.substream(i);
        op_eval(term, &mut stream, fuel)
    };
    #[cfg(feature = "parallel")]
    let (counts, bottom) = (0..n_samples)
        .into_par_iter()
        .fold(
            || (BTreeMap::new(), 0u64),
            |(mut counts, mut bottom), i| {
                match run(i) {
                    Some(v) => *counts.entry(v).or_insert(0) += 1,
                    None => bottom += 1,
                }
                (counts, bottom)
            },
        )
        .reduce(
            || (BTreeMap::new(), 0u64),
            |(mut ca, ba), (cb, bb)| {
                for (k, v) in cb {
                    *ca.entry(k).or_insert(0) += v;
                }
                (ca, ba + bb)
            },
        );
    #[cfg(not(feature = "parallel"))]
    let (counts, bottom) = {
        let mut counts: BTreeMap<CanonValue, u64> = BTreeMap::new();
        let mut bottom = 0u64;
        for i in 0..n_samples {
            match run(i) {
                Some(v) => *counts.entry(v).or_insert(0) += 1,
                None => bottom += 1,
            }
        }
        (counts, bottom)
    };
    DistEstimate { counts, bottom, n_samples }
}

/// Sequential twin of [`estimate_dist`], kept callable for benchmarks.
pub fn estimate_dist_seq(term: &Term, n_samples: u64, seed: u64, fuel: u64) -> DistEstimate {
    let root = SeedStream::root(seed);
    let mut counts: BTreeMap<CanonValue, u64> = BTreeMap::new();
    let mut bottom = 0u64;
    for i in 0..n_samples {
        let mut stream = root.substream(i);
        match op_eval(term, &mut stream, fuel) {
            Some(v) => *counts.entry(v).or_insert(0) += 1,
            None => bottom += 1,
        }
    }
    DistEstimate { counts, bottom, n_samples }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parser::parse_program;
    use crate::rat::{int, rat};

    fn run(src: &str, seed: u64) -> Option<CanonValue> {
        let t = parse_program(src).unwrap();
        crate::lang::types::typecheck(&t).unwrap();
        op_eval(&t, &mut SeedStream::root(seed), 10_000)
    }

    #[test]
    fn literals_and_arithmetic() {
        assert_eq!(run("1 + 2 * 3", 0), Some(CanonValue::rat(int(7))));
        assert_eq!(run("(1 - 2) * 4", 0), Some(CanonValue::rat(int(-4))));
        assert_eq!(run("1/2 + 1/3", 0), Some(CanonValue::rat(rat(5, 6))));
    }

    #[test]
    fn division_by_zero_is_bottom() {
        assert_eq!(run("1 / 0", 0), None);
    }

    #[test]
    fn pure_divergence_is_bottom_for_every_fuel() {
        let t = parse_program("fix x. x").unwrap();
        for fuel in [1u64, 10, 1000] {
            assert_eq!(op_eval(&t, &mut SeedStream::root(1), fuel), None);
        }
    }

    #[test]
    fn eval_forces_sharing() {
        // under eval the two components agree for every seed
        let t = parse_program("eval uniform(0, 1) as x in L (x, x)").unwrap();
        for seed in 0..200 {
            match op_eval(&t, &mut SeedStream::root(seed), 10_000).unwrap() {
                CanonValue::L(inner) => match *inner {
                    CanonValue::Pair(a, b) => assert_eq!(a, b, "seed {seed}"),
                    other => panic!("{other:?}"),
                },
                other => panic!("{other:?}"),
            }
        }
    }

    #[test]
    fn plain_application_resamples() {
        // without eval the argument is re-sampled at each use
        let t = parse_program("(\\x. (x, x)) uniform(0, 1)").unwrap();
        let mut equal = 0;
        for seed in 0..200 {
            match op_eval(&t, &mut SeedStream::root(seed), 10_000).unwrap() {
                CanonValue::Pair(a, b) => {
                    if a == b {
                        equal += 1;
                    }
                }
                other => panic!("{other:?}"),
            }
        }
        assert!(equal <= 1, "continuous draws almost never coincide, saw {equal}");
    }

    #[test]
    fn geometric_program_distribution() {
        let t = parse_program("fix g. if bernoulli(1/2) then 0 else 1 + g").unwrap();
        let est = estimate_dist(&t, 100_000, 42, 10_000);
        assert!((est.frequency(&CanonValue::rat(int(0))) - 0.5).abs() < 0.01);
        assert!((est.frequency(&CanonValue::rat(int(1))) - 0.25).abs() < 0.01);
        assert_eq!(est.bottom, 0);
        // deterministic given the seed and independent of the schedule
        assert_eq!(est, estimate_dist_seq(&t, 100_000, 42, 10_000));
    }

    #[test]
    fn bernoulli_third() {
        let t = parse_program("bernoulli(1/3)").unwrap();
        let est = estimate_dist(&t, 100_000, 7, 100);
        let p1 = est.frequency(&CanonValue::rat(int(1)));
        let sigma = ((1.0 / 3.0) * (2.0 / 3.0) / 100_000.0f64).sqrt();
        assert!((p1 - 1.0 / 3.0).abs() < 3.0 * sigma, "{p1}");
    }

    #[test]
    fn divergence_reports_full_bottom_mass() {
        let t = parse_program("fix x. x").unwrap();
        let est = estimate_dist(&t, 1000, 3, 500);
        assert_eq!(est.bottom, 1000);
        assert!(est.counts.is_empty());
    }

    #[test]
    fn capture_avoiding_substitution() {
        // (\f. \y. f 1) (\x. y0) with y0 bound outside would capture; here
        // closed variant: (\f. \y. f (y + 1)) (\x. x * 2) applied to 3
        let t = parse_program("((\\f. \\y. f (y + 1)) (\\x. x * 2)) 3").unwrap();
        assert_eq!(
            op_eval(&t, &mut SeedStream::root(0), 10_000),
            Some(CanonValue::rat(int(8)))
        );
    }

    #[test]
    fn match_on_sampled_tag_forces_once() {
        let t = parse_program(
            "match (if bernoulli(1/2) then L 1 else R (2, 3)) with L x -> x ; R p -> match p with (a, b) -> a + b",
        )
        .unwrap();
        let est = estimate_dist(&t, 20_000, 9, 10_000);
        assert!((est.frequency(&CanonValue::rat(int(1))) - 0.5).abs() < 0.02);
        assert!((est.frequency(&CanonValue::rat(int(5))) - 0.5).abs() < 0.02);
    }
}
