//! Exact denotational semantics on the discrete fragment.
//!
//! Types translate as: reals to finite measures over rationals, products
//! to pairs sampled separately, sums to weighted formal sums of tagged
//! promoted denotations, and functions to memoising closures (analytic
//! maps represented extensionally). A variable is used as many times as
//! the body demands, which is exactly what promotion provides, so the
//! forcing clause decomposes its scrutinee into a weighted sum of point
//! promotions (the linear copier on a finite measure) and evaluates the
//! body once per point.

use super::ast::{Span, Type};
use super::prims::{self, PrimKind};
use super::types::{TypedKind, TypedTerm};
use super::value::CanonValue;
use crate::measure::FiniteMeasure;
use crate::rat::{one, to_frac_string, zero, Rat};
use num_traits::Zero;
use std::cell::RefCell;
use std::collections::{BTreeMap, HashMap};
use std::rc::Rc;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum DenoteError {
    #[error("continuous primitive `{name}` at {span} has no exact denotation")]
    ContinuousPrimitive { name: String, span: Span },
    #[error("fixed point at {span} did not converge within {iterations} iterations")]
    UnconvergedFix { span: Span, iterations: usize, last: Box<Denot> },
    #[error("fixed point iterate decreased at {span}: implementation bug")]
    NonMonotoneFix { span: Span },
    #[error("no decidable observation at {span}: fixed point result is higher-order")]
    HigherOrderObservation { span: Span },
    #[error("value of a non-data denotation requested at {span}")]
    NonDataValue { span: Span },
}

/// Interpreter settings: the tolerance and iteration budget of Kleene
/// iteration.
#[derive(Debug, Clone)]
pub struct DenoteCtx {
    pub fix_tol: Rat,
    pub max_iter: usize,
    /// consecutive below-tolerance iterations required before stopping;
    /// guards against the zero-increment plateaus of countdown-style
    /// recursion
    pub fix_stall: usize,
}

impl Default for DenoteCtx {
    fn default() -> Self {
        DenoteCtx {
            fix_tol: Rat::new(1.into(), 1_000_000_000.into()),
            max_iter: 10_000,
            fix_stall: 30,
        }
    }
}

/// A denotation, shaped by the translated type.
#[derive(Clone)]
pub enum Denot {
    /// real type: an exact finite-support sub-probability measure
    Data(FiniteMeasure<Rat>),
    /// product type: components sampled separately
    PairD(Box<Denot>, Box<Denot>),
    /// sum type: weighted formal sums of tagged promoted denotations
    SumD { left: Vec<(Rat, Denot)>, right: Vec<(Rat, Denot)> },
    /// function type: a pure memoising closure
    Fun(Rc<FunDenot>),
}

pub struct FunDenot {
    id: u64,
    #[allow(clippy::type_complexity)]
    apply_fn: Box<dyn Fn(&Denot) -> Result<Denot, DenoteError>>,
    memo: RefCell<HashMap<String, Denot>>,
}

thread_local! {
    static NEXT_FUN_ID: RefCell<u64> = const { RefCell::new(0) };
}

fn next_fun_id() -> u64 {
    NEXT_FUN_ID.with(|c| {
        let mut c = c.borrow_mut();
        *c += 1;
        *c
    })
}

impl FunDenot {
    pub fn new(apply_fn: impl Fn(&Denot) -> Result<Denot, DenoteError> + 'static) -> Rc<Self> {
        Rc::new(FunDenot {
            id: next_fun_id(),
            apply_fn: Box::new(apply_fn),
            memo: RefCell::new(HashMap::new()),
        })
    }

    pub fn apply(&self, arg: &Denot) -> Result<Denot, DenoteError> {
        let key = arg.key();
        if let Some(hit) = self.memo.borrow().get(&key) {
            return Ok(hit.clone());
        }
        let out = (self.apply_fn)(arg)?;
        self.memo.borrow_mut().insert(key, out.clone());
        Ok(out)
    }
}

impl std::fmt::Debug for Denot {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.key())
    }
}

impl Denot {
    /// Canonical string form: the memoisation key and debug rendering.
    /// Closures are keyed by identity.
    pub fn key(&self) -> String {
        match self {
            Denot::Data(m) => {
                let atoms: Vec<String> = m
                    .atoms()
                    .map(|(x, w)| format!("{}:{}", to_frac_string(x), to_frac_string(w)))
                    .collect();
                format!("{{{}}}", atoms.join(","))
            }
            Denot::PairD(a, b) => format!("({},{})", a.key(), b.key()),
            Denot::SumD { left, right } => {
                let rend = |side: &Vec<(Rat, Denot)>| -> String {
                    side.iter()
                        .map(|(w, d)| format!("{}*{}", to_frac_string(w), d.key()))
                        .collect::<Vec<_>>()
                        .join("+")
                };
                format!("[L {} | R {}]", rend(left), rend(right))
            }
            Denot::Fun(f) => format!("fun#{}", f.id),
        }
    }

    /// The bottom element of a type: zero measure, pair of bottoms,
    /// empty sum, or the constantly-bottom closure.
    pub fn zero_of(ty: &Type) -> Denot {
        match ty {
            Type::Real | Type::Var(_) => Denot::Data(FiniteMeasure::zero_measure()),
            Type::Prod(a, b) => {
                Denot::PairD(Box::new(Denot::zero_of(a)), Box::new(Denot::zero_of(b)))
            }
            Type::Sum(..) => Denot::SumD { left: Vec::new(), right: Vec::new() },
            Type::Arrow(_, b) => {
                let result = (**b).clone();
                Denot::Fun(FunDenot::new(move |_| Ok(Denot::zero_of(&result))))
            }
        }
    }

    pub fn scale(&self, w: &Rat) -> Denot {
        match self {
            Denot::Data(m) => Denot::Data(m.scale(w)),
            Denot::PairD(a, b) => {
                Denot::PairD(Box::new(a.scale(w)), Box::new(b.scale(w)))
            }
            Denot::SumD { left, right } => {
                let scale_side = |side: &Vec<(Rat, Denot)>| {
                    side.iter()
                        .map(|(v, d)| (v.clone() * w, d.clone()))
                        .filter(|(v, _)| !v.is_zero())
                        .collect()
                };
                Denot::SumD { left: scale_side(left), right: scale_side(right) }
            }
            Denot::Fun(f) => {
                let f = f.clone();
                let w = w.clone();
                Denot::Fun(FunDenot::new(move |arg| Ok(f.apply(arg)?.scale(&w))))
            }
        }
    }

    pub fn add(&self, other: &Denot) -> Denot {
        match (self, other) {
            (Denot::Data(a), Denot::Data(b)) => Denot::Data(
                FiniteMeasure::countable_sum([a.clone(), b.clone()])
                    .expect("semantic sum exceeds unit mass"),
            ),
            (Denot::PairD(a1, b1), Denot::PairD(a2, b2)) => {
                Denot::PairD(Box::new(a1.add(a2)), Box::new(b1.add(b2)))
            }
            (
                Denot::SumD { left: l1, right: r1 },
                Denot::SumD { left: l2, right: r2 },
            ) => {
                let merge = |a: &Vec<(Rat, Denot)>, b: &Vec<(Rat, Denot)>| {
                    let mut keyed: BTreeMap<String, (Rat, Denot)> = BTreeMap::new();
                    for (w, d) in a.iter().chain(b) {
                        match keyed.entry(d.key()) {
                            std::collections::btree_map::Entry::Occupied(mut e) => {
                                e.get_mut().0 += w;
                            }
                            std::collections::btree_map::Entry::Vacant(e) => {
                                e.insert((w.clone(), d.clone()));
                            }
                        }
                    }
                    keyed.into_values().collect()
                };
                Denot::SumD { left: merge(l1, l2), right: merge(r1, r2) }
            }
            (Denot::Fun(f), Denot::Fun(g)) => {
                let (f, g) = (f.clone(), g.clone());
                Denot::Fun(FunDenot::new(move |arg| {
                    Ok(f.apply(arg)?.add(&g.apply(arg)?))
                }))
            }
            _ => unreachable!("summing denotations of different shapes"),
        }
    }

    /// The observable distribution of a data-typed denotation.
    pub fn data_measure(&self, span: Span) -> Result<FiniteMeasure<CanonValue>, DenoteError> {
        match self {
            Denot::Data(m) => Ok(m.pushforward(|r| CanonValue::Rat(r.clone()))),
            Denot::PairD(a, b) => {
                let ma = a.data_measure(span)?;
                let mb = b.data_measure(span)?;
                Ok(ma
                    .product(&mb)
                    .pushforward(|(x, y)| CanonValue::Pair(Box::new(x.clone()), Box::new(y.clone()))))
            }
            Denot::SumD { left, right } => {
                let mut parts: Vec<FiniteMeasure<CanonValue>> = Vec::new();
                for (w, d) in left {
                    parts.push(
                        d.data_measure(span)?
                            .pushforward(|v| CanonValue::L(Box::new(v.clone())))
                            .scale(w),
                    );
                }
                for (w, d) in right {
                    parts.push(
                        d.data_measure(span)?
                            .pushforward(|v| CanonValue::R(Box::new(v.clone())))
                            .scale(w),
                    );
                }
                Ok(FiniteMeasure::countable_sum(parts).expect("tagged sum exceeds unit mass"))
            }
            Denot::Fun(_) => Err(DenoteError::NonDataValue { span }),
        }
    }

    /// The denotation of a first-order value at a data type.
    pub fn from_value(v: &CanonValue, ty: &Type) -> Denot {
        match (v, ty) {
            (CanonValue::Rat(r), _) => Denot::Data(FiniteMeasure::dirac(r.clone())),
            (CanonValue::Pair(a, b), Type::Prod(ta, tb)) => Denot::PairD(
                Box::new(Denot::from_value(a, ta)),
                Box::new(Denot::from_value(b, tb)),
            ),
            (CanonValue::L(p), Type::Sum(ta, _)) => Denot::SumD {
                left: vec![(one(), Denot::from_value(p, ta))],
                right: Vec::new(),
            },
            (CanonValue::R(p), Type::Sum(_, tb)) => Denot::SumD {
                left: Vec::new(),
                right: vec![(one(), Denot::from_value(p, tb))],
            },
            other => unreachable!("value shape does not match type: {other:?}"),
        }
    }

    /// Structural agreement between a denotation and a translated type.
    pub fn matches_type(&self, ty: &Type) -> bool {
        match (self, ty) {
            (Denot::Data(_), Type::Real) => true,
            (Denot::PairD(a, b), Type::Prod(ta, tb)) => {
                a.matches_type(ta) && b.matches_type(tb)
            }
            (Denot::SumD { left, right }, Type::Sum(ta, tb)) => {
                left.iter().all(|(_, d)| d.matches_type(ta))
                    && right.iter().all(|(_, d)| d.matches_type(tb))
            }
            (Denot::Fun(_), Type::Arrow(..)) => true,
            _ => false,
        }
    }
}

/// The linear copier of a data type applied to an observable measure:
/// the weighted decomposition into promoted point values. Errors on
/// non-data types.
pub fn copy_data(
    m: &FiniteMeasure<CanonValue>,
    ty: &Type,
    span: Span,
) -> Result<Vec<(Rat, CanonValue)>, DenoteError> {
    if !ty.is_data_type() {
        return Err(DenoteError::NonDataValue { span });
    }
    Ok(m.atoms().map(|(v, w)| (w.clone(), v.clone())).collect())
}

type Env = HashMap<String, Denot>;

/// Interprets a typed term in an environment of denotations.
pub fn denote(term: &TypedTerm, env: &Env, ctx: &DenoteCtx) -> Result<Denot, DenoteError> {
    let span = term.span;
    match &term.kind {
        TypedKind::Var(x) => Ok(env.get(x).unwrap_or_else(|| panic!("unbound `{x}`")).clone()),
        TypedKind::Lit(r) => Ok(Denot::Data(FiniteMeasure::dirac(r.clone()))),
        TypedKind::Lam(x, body) => {
            let x = x.clone();
            let body = (**body).clone();
            let env = env.clone();
            let ctx = ctx.clone();
            Ok(Denot::Fun(FunDenot::new(move |arg| {
                let mut inner = env.clone();
                inner.insert(x.clone(), arg.clone());
                denote(&body, &inner, &ctx)
            })))
        }
        TypedKind::App(f, a) => {
            let fd = denote(f, env, ctx)?;
            let ad = denote(a, env, ctx)?;
            match fd {
                Denot::Fun(c) => c.apply(&ad),
                other => unreachable!("application of {other:?}"),
            }
        }
        TypedKind::Pair(a, b) => Ok(Denot::PairD(
            Box::new(denote(a, env, ctx)?),
            Box::new(denote(b, env, ctx)?),
        )),
        TypedKind::InL(t) => Ok(Denot::SumD {
            left: vec![(one(), denote(t, env, ctx)?)],
            right: Vec::new(),
        }),
        TypedKind::InR(t) => Ok(Denot::SumD {
            left: Vec::new(),
            right: vec![(one(), denote(t, env, ctx)?)],
        }),
        TypedKind::MatchPair { scrutinee, left_var, right_var, body } => {
            let sd = denote(scrutinee, env, ctx)?;
            match sd {
                Denot::PairD(a, b) => {
                    let mut inner = env.clone();
                    inner.insert(left_var.clone(), *a);
                    inner.insert(right_var.clone(), *b);
                    denote(body, &inner, ctx)
                }
                other => unreachable!("pair match on {other:?}"),
            }
        }
        TypedKind::MatchSum { scrutinee, left_var, left_body, right_var, right_body } => {
            let sd = denote(scrutinee, env, ctx)?;
            let (left, right) = match sd {
                Denot::SumD { left, right } => (left, right),
                other => unreachable!("sum match on {other:?}"),
            };
            let mut acc = Denot::zero_of(&term.ty);
            for (w, d) in left {
                let mut inner = env.clone();
                inner.insert(left_var.clone(), d);
                acc = acc.add(&denote(left_body, &inner, ctx)?.scale(&w));
            }
            for (w, d) in right {
                let mut inner = env.clone();
                inner.insert(right_var.clone(), d);
                acc = acc.add(&denote(right_body, &inner, ctx)?.scale(&w));
            }
            Ok(acc)
        }
        TypedKind::If { cond, then_branch, else_branch } => {
            let cd = denote(cond, env, ctx)?;
            let m = match cd {
                Denot::Data(m) => m,
                other => unreachable!("if on {other:?}"),
            };
            let zero_mass = m.mass_at(&zero());
            let nonzero_mass = m.total_mass() - &zero_mass;
            let td = denote(then_branch, env, ctx)?;
            let ed = denote(else_branch, env, ctx)?;
            Ok(td.scale(&nonzero_mass).add(&ed.scale(&zero_mass)))
        }
        TypedKind::Eval { scrutinee, var, body } => {
            let sd = denote(scrutinee, env, ctx)?;
            let observable = sd.data_measure(scrutinee.span)?;
            let points = copy_data(&observable, &scrutinee.ty, scrutinee.span)?;
            let mut acc = Denot::zero_of(&term.ty);
            for (w, v) in points {
                let mut inner = env.clone();
                inner.insert(var.clone(), Denot::from_value(&v, &scrutinee.ty));
                acc = acc.add(&denote(body, &inner, ctx)?.scale(&w));
            }
            Ok(acc)
        }
        TypedKind::Prim(name, args) => {
            let info = prims::lookup(name).expect("typechecked primitive");
            if info.kind == PrimKind::ContinuousSampler {
                return Err(DenoteError::ContinuousPrimitive { name: name.clone(), span });
            }
            // independent product of the argument measures, then the kernel
            let mut joint: FiniteMeasure<Vec<Rat>> = FiniteMeasure::dirac(Vec::new());
            for a in args {
                let m = match denote(a, env, ctx)? {
                    Denot::Data(m) => m,
                    other => unreachable!("primitive argument {other:?}"),
                };
                joint = joint.product(&m).pushforward(|(tuple, x)| {
                    let mut extended = tuple.clone();
                    extended.push(x.clone());
                    extended
                });
            }
            let name = name.clone();
            Ok(Denot::Data(joint.bind(|tuple| {
                prims::eval_exact(&name, tuple).expect("discrete primitive")
            })))
        }
        TypedKind::Fix(x, body) => {
            fix_denot(x, body, &term.ty, env, ctx, span, Vec::new())
        }
    }
}

/// Kleene iteration for recursive definitions. Data-typed fixed points
/// iterate on observable measures directly; function-typed ones return a
/// closure that accumulates arguments until the application's result
/// type is data, then iterates the whole chain to tolerance.
fn fix_denot(
    var: &str,
    body: &TypedTerm,
    ty: &Type,
    env: &Env,
    ctx: &DenoteCtx,
    span: Span,
    pending: Vec<Denot>,
) -> Result<Denot, DenoteError> {
    let result_ty = peel_arrows(ty, pending.len(), span)?;
    if result_ty.is_data_type() {
        let mut current = Denot::zero_of(ty);
        let mut current_obs = apply_chain(&current, &pending)?.data_measure(span)?;
        let mut quiet = 0usize;
        for _iteration in 1..=ctx.max_iter {
            let mut inner = env.clone();
            inner.insert(var.to_string(), current.clone());
            let next = denote(body, &inner, ctx)?;
            let next_obs = apply_chain(&next, &pending)?.data_measure(span)?;
            let mut worst = zero();
            for (v, w_next) in next_obs.atoms() {
                let w_cur = current_obs.mass_at(v);
                if *w_next < w_cur {
                    return Err(DenoteError::NonMonotoneFix { span });
                }
                let delta = w_next.clone() - w_cur;
                if delta > worst {
                    worst = delta;
                }
            }
            // an atom that vanished outright is also a monotonicity break
            for (v, w_cur) in current_obs.atoms() {
                if next_obs.mass_at(v) < *w_cur {
                    return Err(DenoteError::NonMonotoneFix { span });
                }
            }
            if worst < ctx.fix_tol {
                quiet += 1;
            } else {
                quiet = 0;
            }
            current = next;
            current_obs = next_obs;
            if quiet >= ctx.fix_stall {
                return apply_chain(&current, &pending);
            }
        }
        Err(DenoteError::UnconvergedFix {
            span,
            iterations: ctx.max_iter,
            last: Box::new(apply_chain(&current, &pending)?),
        })
    } else if matches!(result_ty, Type::Arrow(..)) {
        let var = var.to_string();
        let body = body.clone();
        let ty = ty.clone();
        let env = env.clone();
        let ctx = ctx.clone();
        Ok(Denot::Fun(FunDenot::new(move |arg| {
            let mut next_pending = pending.clone();
            next_pending.push(arg.clone());
            fix_denot(&var, &body, &ty, &env, &ctx, span, next_pending)
        })))
    } else {
        Err(DenoteError::HigherOrderObservation { span })
    }
}

fn peel_arrows(ty: &Type, n: usize, span: Span) -> Result<Type, DenoteError> {
    if n == 0 {
        return Ok(ty.clone());
    }
    match ty {
        Type::Arrow(_, b) => peel_arrows(b, n - 1, span),
        _ => Err(DenoteError::HigherOrderObservation { span }),
    }
}

fn apply_chain(d: &Denot, args: &[Denot]) -> Result<Denot, DenoteError> {
    let mut current = d.clone();
    for a in args {
        current = match current {
            Denot::Fun(f) => f.apply(a)?,
            other => unreachable!("applying {other:?}"),
        };
    }
    Ok(current)
}

/// Interprets a closed program.
pub fn denote_program(term: &TypedTerm, ctx: &DenoteCtx) -> Result<Denot, DenoteError> {
    denote(term, &HashMap::new(), ctx)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::lang::parser::parse_program;
    use crate::lang::types::typecheck;
    use crate::rat::{int, rat};

    fn interp(src: &str) -> Result<Denot, DenoteError> {
        let t = typecheck(&parse_program(src).unwrap()).unwrap();
        denote_program(&t, &DenoteCtx::default())
    }

    fn observable(src: &str) -> FiniteMeasure<CanonValue> {
        interp(src).unwrap().data_measure(Span::default()).unwrap()
    }

    #[test]
    fn arithmetic_is_exact() {
        let m = observable("1/2 + 1/3");
        assert_eq!(m.mass_at(&CanonValue::rat(rat(5, 6))), one());
    }

    #[test]
    fn bernoulli_denotes_the_coin() {
        let m = observable("bernoulli(1/3)");
        assert_eq!(m.mass_at(&CanonValue::rat(one())), rat(1, 3));
        assert_eq!(m.mass_at(&CanonValue::rat(zero())), rat(2, 3));
    }

    #[test]
    fn division_by_zero_loses_mass_exactly() {
        let m = observable("1 / (bernoulli(1/2))");
        // half the time the divisor is zero: that mass disappears
        assert_eq!(m.total_mass(), rat(1, 2));
        assert_eq!(m.mass_at(&CanonValue::rat(one())), rat(1, 2));
    }

    #[test]
    fn continuous_primitive_rejected() {
        let err = interp("uniform(0, 1)").unwrap_err();
        assert!(matches!(err, DenoteError::ContinuousPrimitive { .. }));
    }

    #[test]
    fn fix_of_variable_is_bottom() {
        let m = observable("fix x. x");
        assert_eq!(m.total_mass(), zero());
    }

    #[test]
    fn geometric_fixed_point() {
        let m = observable("fix g. if bernoulli(1/2) then 0 else 1 + g");
        for k in 0..10i64 {
            assert_eq!(
                m.mass_at(&CanonValue::rat(int(k))),
                rat(1, 2).pow(k as i32 + 1),
                "k = {k}"
            );
        }
        assert!(one() - m.total_mass() < rat(1, 100_000_000));
    }

    #[test]
    fn cbn_application_decorrelates_at_product_type() {
        let m = observable("(\\x. (x, x)) bernoulli(1/2)");
        // independent components: all four pairs have mass 1/4
        let pair = |a: i64, b: i64| {
            CanonValue::Pair(
                Box::new(CanonValue::rat(int(a))),
                Box::new(CanonValue::rat(int(b))),
            )
        };
        for (a, b) in [(0, 0), (0, 1), (1, 0), (1, 1)] {
            assert_eq!(m.mass_at(&pair(a, b)), rat(1, 4));
        }
    }

    #[test]
    fn eval_without_constructor_still_decorrelates_products() {
        // the pair type itself cannot hold correlation; both marginals
        // are fair coins
        let d = interp("eval bernoulli(1/2) as x in (x, x)").unwrap();
        match &d {
            Denot::PairD(a, b) => {
                for side in [a, b] {
                    let m = side.data_measure(Span::default()).unwrap();
                    assert_eq!(m.mass_at(&CanonValue::rat(zero())), rat(1, 2));
                    assert_eq!(m.mass_at(&CanonValue::rat(one())), rat(1, 2));
                }
            }
            other => panic!("{other:?}"),
        }
        // and the joint observable is correlated only through the
        // formal-sum decomposition, which a product type collapses
        let m = d.data_measure(Span::default()).unwrap();
        assert_eq!(m.total_mass(), one());
    }

    #[test]
    fn eval_under_a_constructor_keeps_correlation() {
        let m = observable("eval bernoulli(1/2) as x in L (x, x)");
        let lpair = |a: i64, b: i64| {
            CanonValue::L(Box::new(CanonValue::Pair(
                Box::new(CanonValue::rat(int(a))),
                Box::new(CanonValue::rat(int(b))),
            )))
        };
        assert_eq!(m.mass_at(&lpair(0, 0)), rat(1, 2));
        assert_eq!(m.mass_at(&lpair(1, 1)), rat(1, 2));
        assert_eq!(m.mass_at(&lpair(0, 1)), zero());
    }

    #[test]
    fn equality_under_eval_is_certain() {
        let m = observable("eval bernoulli(1/2) as x in x = x");
        assert_eq!(m.mass_at(&CanonValue::rat(one())), one());
    }

    #[test]
    fn equality_without_eval_is_a_coin() {
        let m = observable("(\\x. x = x) bernoulli(1/2)");
        assert_eq!(m.mass_at(&CanonValue::rat(one())), rat(1, 2));
        assert_eq!(m.mass_at(&CanonValue::rat(zero())), rat(1, 2));
    }

    #[test]
    fn match_sum_weights_branches() {
        let m = observable(
            "match (if bernoulli(1/3) then L 1 else R 2) with L x -> x + 10 ; R y -> y",
        );
        assert_eq!(m.mass_at(&CanonValue::rat(int(11))), rat(1, 3));
        assert_eq!(m.mass_at(&CanonValue::rat(int(2))), rat(2, 3));
    }

    #[test]
    fn function_typed_fix_terminates_on_data_observations() {
        // a recursive countdown: f(n) = if n = 0 then 0 else f(n - 1)
        let m = observable("(fix f. \\n. if n = 0 then 0 else f (n - 1)) 5");
        assert_eq!(m.mass_at(&CanonValue::rat(zero())), one());
    }

    #[test]
    fn unconverged_fix_is_reported() {
        let t = typecheck(&parse_program("fix g. if bernoulli(1/2) then 0 else 1 + g").unwrap())
            .unwrap();
        let ctx = DenoteCtx { fix_tol: rat(1, 1_000_000_000), max_iter: 3, fix_stall: 30 };
        let err = denote_program(&t, &ctx).unwrap_err();
        assert!(matches!(err, DenoteError::UnconvergedFix { iterations: 3, .. }));
    }

    #[test]
    fn weakening_and_exchange_invariance() {
        let t = typecheck(&parse_program("bernoulli(1/2)").unwrap()).unwrap();
        let ctx = DenoteCtx::default();
        let empty = denote(&t, &HashMap::new(), &ctx).unwrap();
        let mut extended = HashMap::new();
        extended.insert("unused".to_string(), Denot::Data(FiniteMeasure::dirac(int(9))));
        let w = denote(&t, &extended, &ctx).unwrap();
        assert_eq!(empty.key(), w.key());
    }

    #[test]
    fn denotation_shape_matches_type() {
        let cases = [
            "bernoulli(1/2)",
            "(1, 2)",
            "L (1, 1)",
            "\\x. x + 1",
            "eval bernoulli(1/2) as x in L (x, x)",
        ];
        for src in cases {
            let t = typecheck(&parse_program(src).unwrap()).unwrap();
            let d = denote_program(&t, &DenoteCtx::default()).unwrap();
            assert!(d.matches_type(&t.ty), "{src}");
        }
    }

    #[test]
    fn copy_data_decomposes_observables() {
        let m = FiniteMeasure::from_atoms([
            (CanonValue::rat(int(3)), rat(1, 2)),
            (CanonValue::rat(int(5)), rat(1, 4)),
        ])
        .unwrap();
        let points = copy_data(&m, &Type::Real, Span::default()).unwrap();
        assert_eq!(points.len(), 2);
        assert_eq!(points[0], (rat(1, 2), CanonValue::rat(int(3))));
        // non-data types are rejected
        let arrow = Type::Arrow(Box::new(Type::Real), Box::new(Type::Real));
        assert!(copy_data(&m, &arrow, Span::default()).is_err());
    }

    #[test]
    fn memoisation_reuses_applications() {
        // the closure is applied twice to the same argument denotation
        let m = observable("(\\f. f 1 + f 1) (\\x. x * 2)");
        assert_eq!(m.mass_at(&CanonValue::rat(int(4))), one());
    }
}
