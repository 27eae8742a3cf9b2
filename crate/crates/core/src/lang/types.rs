//! Type inference: plain unification over simple types, with leftover
//! variables defaulted to the reals, and data-type side conditions on
//! forcing checked after defaulting.

use super::ast::{Span, Term, TermKind, Type};
use super::prims;
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum TypeError {
    #[error("type mismatch at {span}: expected {expected}, found {found}")]
    Mismatch { span: Span, expected: String, found: String },
    #[error("eval scrutinee at {span} has function type {ty}")]
    EvalOnFunctionType { span: Span, ty: String },
    #[error("unbound variable `{name}` at {span}")]
    UnboundVariable { name: String, span: Span },
    #[error("primitive `{name}` at {span} expects {expected} arguments, got {got}")]
    PrimArity { name: String, span: Span, expected: usize, got: usize },
    #[error("unknown primitive `{name}` at {span}")]
    UnknownPrim { name: String, span: Span },
    #[error("infinite type at {span}")]
    OccursCheck { span: Span },
}

/// A term annotated with its resolved type at every node.
#[derive(Debug, Clone, PartialEq)]
pub struct TypedTerm {
    pub kind: TypedKind,
    pub ty: Type,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TypedKind {
    Var(String),
    Lam(String, Box<TypedTerm>),
    App(Box<TypedTerm>, Box<TypedTerm>),
    Fix(String, Box<TypedTerm>),
    Pair(Box<TypedTerm>, Box<TypedTerm>),
    InL(Box<TypedTerm>),
    InR(Box<TypedTerm>),
    MatchPair {
        scrutinee: Box<TypedTerm>,
        left_var: String,
        right_var: String,
        body: Box<TypedTerm>,
    },
    MatchSum {
        scrutinee: Box<TypedTerm>,
        left_var: String,
        left_body: Box<TypedTerm>,
        right_var: String,
        right_body: Box<TypedTerm>,
    },
    If {
        cond: Box<TypedTerm>,
        then_branch: Box<TypedTerm>,
        else_branch: Box<TypedTerm>,
    },
    Eval {
        scrutinee: Box<TypedTerm>,
        var: String,
        body: Box<TypedTerm>,
    },
    Prim(String, Vec<TypedTerm>),
    Lit(crate::rat::Rat),
}

struct Inference {
    next_var: u32,
    subst: HashMap<u32, Type>,
    eval_spans: Vec<(Span, Type)>,
}

impl Inference {
    fn fresh(&mut self) -> Type {
        self.next_var += 1;
        Type::Var(self.next_var - 1)
    }

    fn resolve(&self, ty: &Type) -> Type {
        match ty {
            Type::Var(v) => match self.subst.get(v) {
                Some(t) => self.resolve(&t.clone()),
                None => ty.clone(),
            },
            Type::Real => Type::Real,
            Type::Prod(a, b) => {
                Type::Prod(Box::new(self.resolve(a)), Box::new(self.resolve(b)))
            }
            Type::Sum(a, b) => Type::Sum(Box::new(self.resolve(a)), Box::new(self.resolve(b))),
            Type::Arrow(a, b) => {
                Type::Arrow(Box::new(self.resolve(a)), Box::new(self.resolve(b)))
            }
        }
    }

    fn occurs(&self, v: u32, ty: &Type) -> bool {
        match self.resolve(ty) {
            Type::Var(w) => w == v,
            Type::Real => false,
            Type::Prod(a, b) | Type::Sum(a, b) | Type::Arrow(a, b) => {
                self.occurs(v, &a) || self.occurs(v, &b)
            }
        }
    }

    fn unify(&mut self, a: &Type, b: &Type, span: Span) -> Result<(), TypeError> {
        let (ra, rb) = (self.resolve(a), self.resolve(b));
        match (&ra, &rb) {
            (Type::Var(v), _) => {
                if ra == rb {
                    return Ok(());
                }
                if self.occurs(*v, &rb) {
                    return Err(TypeError::OccursCheck { span });
                }
                self.subst.insert(*v, rb);
                Ok(())
            }
            (_, Type::Var(_)) => self.unify(&rb, &ra, span),
            (Type::Real, Type::Real) => Ok(()),
            (Type::Prod(a1, a2), Type::Prod(b1, b2))
            | (Type::Sum(a1, a2), Type::Sum(b1, b2))
            | (Type::Arrow(a1, a2), Type::Arrow(b1, b2)) => {
                self.unify(a1, b1, span)?;
                self.unify(a2, b2, span)
            }
            _ => Err(TypeError::Mismatch {
                span,
                expected: ra.to_string(),
                found: rb.to_string(),
            }),
        }
    }

    fn infer(
        &mut self,
        env: &HashMap<String, Type>,
        term: &Term,
    ) -> Result<TypedTerm, TypeError> {
        let span = term.span;
        let (kind, ty) = match &term.kind {
            TermKind::Var(x) => {
                let ty = env.get(x).ok_or_else(|| TypeError::UnboundVariable {
                    name: x.clone(),
                    span,
                })?;
                (TypedKind::Var(x.clone()), ty.clone())
            }
            TermKind::Lit(r) => (TypedKind::Lit(r.clone()), Type::Real),
            TermKind::Lam(x, body) => {
                let arg = self.fresh();
                let mut inner = env.clone();
                inner.insert(x.clone(), arg.clone());
                let tbody = self.infer(&inner, body)?;
                let ty = Type::Arrow(Box::new(arg), Box::new(tbody.ty.clone()));
                (TypedKind::Lam(x.clone(), Box::new(tbody)), ty)
            }
            TermKind::App(f, a) => {
                let tf = self.infer(env, f)?;
                let ta = self.infer(env, a)?;
                let result = self.fresh();
                let want =
                    Type::Arrow(Box::new(ta.ty.clone()), Box::new(result.clone()));
                self.unify(&tf.ty, &want, span)?;
                (TypedKind::App(Box::new(tf), Box::new(ta)), result)
            }
            TermKind::Fix(x, body) => {
                let ty = self.fresh();
                let mut inner = env.clone();
                inner.insert(x.clone(), ty.clone());
                let tbody = self.infer(&inner, body)?;
                self.unify(&ty, &tbody.ty, span)?;
                (TypedKind::Fix(x.clone(), Box::new(tbody)), ty)
            }
            TermKind::Pair(a, b) => {
                let ta = self.infer(env, a)?;
                let tb = self.infer(env, b)?;
                let ty = Type::Prod(Box::new(ta.ty.clone()), Box::new(tb.ty.clone()));
                (TypedKind::Pair(Box::new(ta), Box::new(tb)), ty)
            }
            TermKind::InL(t) => {
                let tt = self.infer(env, t)?;
                let ty = Type::Sum(Box::new(tt.ty.clone()), Box::new(self.fresh()));
                (TypedKind::InL(Box::new(tt)), ty)
            }
            TermKind::InR(t) => {
                let tt = self.infer(env, t)?;
                let ty = Type::Sum(Box::new(self.fresh()), Box::new(tt.ty.clone()));
                (TypedKind::InR(Box::new(tt)), ty)
            }
            TermKind::MatchPair { scrutinee, left_var, right_var, body } => {
                let ts = self.infer(env, scrutinee)?;
                let a = self.fresh();
                let b = self.fresh();
                self.unify(
                    &ts.ty,
                    &Type::Prod(Box::new(a.clone()), Box::new(b.clone())),
                    span,
                )?;
                let mut inner = env.clone();
                inner.insert(left_var.clone(), a);
                inner.insert(right_var.clone(), b);
                let tbody = self.infer(&inner, body)?;
                let ty = tbody.ty.clone();
                (
                    TypedKind::MatchPair {
                        scrutinee: Box::new(ts),
                        left_var: left_var.clone(),
                        right_var: right_var.clone(),
                        body: Box::new(tbody),
                    },
                    ty,
                )
            }
            TermKind::MatchSum { scrutinee, left_var, left_body, right_var, right_body } => {
                let ts = self.infer(env, scrutinee)?;
                let a = self.fresh();
                let b = self.fresh();
                self.unify(
                    &ts.ty,
                    &Type::Sum(Box::new(a.clone()), Box::new(b.clone())),
                    span,
                )?;
                let mut left_env = env.clone();
                left_env.insert(left_var.clone(), a);
                let tl = self.infer(&left_env, left_body)?;
                let mut right_env = env.clone();
                right_env.insert(right_var.clone(), b);
                let tr = self.infer(&right_env, right_body)?;
                self.unify(&tl.ty, &tr.ty, span)?;
                let ty = tl.ty.clone();
                (
                    TypedKind::MatchSum {
                        scrutinee: Box::new(ts),
                        left_var: left_var.clone(),
                        left_body: Box::new(tl),
                        right_var: right_var.clone(),
                        right_body: Box::new(tr),
                    },
                    ty,
                )
            }
            TermKind::If { cond, then_branch, else_branch } => {
                let tc = self.infer(env, cond)?;
                self.unify(&tc.ty, &Type::Real, cond.span)?;
                let tt = self.infer(env, then_branch)?;
                let te = self.infer(env, else_branch)?;
                self.unify(&tt.ty, &te.ty, span)?;
                let ty = tt.ty.clone();
                (
                    TypedKind::If {
                        cond: Box::new(tc),
                        then_branch: Box::new(tt),
                        else_branch: Box::new(te),
                    },
                    ty,
                )
            }
            TermKind::Eval { scrutinee, var, body } => {
                let ts = self.infer(env, scrutinee)?;
                self.eval_spans.push((scrutinee.span, ts.ty.clone()));
                let mut inner = env.clone();
                inner.insert(var.clone(), ts.ty.clone());
                let tbody = self.infer(&inner, body)?;
                let ty = tbody.ty.clone();
                (
                    TypedKind::Eval {
                        scrutinee: Box::new(ts),
                        var: var.clone(),
                        body: Box::new(tbody),
                    },
                    ty,
                )
            }
            TermKind::Prim(name, args) => {
                let info = prims::lookup(name).ok_or_else(|| TypeError::UnknownPrim {
                    name: name.clone(),
                    span,
                })?;
                if args.len() != info.arity {
                    return Err(TypeError::PrimArity {
                        name: name.clone(),
                        span,
                        expected: info.arity,
                        got: args.len(),
                    });
                }
                let mut targs = Vec::new();
                for a in args {
                    let ta = self.infer(env, a)?;
                    self.unify(&ta.ty, &Type::Real, a.span)?;
                    targs.push(ta);
                }
                (TypedKind::Prim(name.clone(), targs), Type::Real)
            }
        };
        Ok(TypedTerm { kind, ty, span })
    }

    /// Replaces unresolved variables by the reals (the monomorphic
    /// default) throughout a typed tree.
    fn default_tree(&self, t: TypedTerm) -> TypedTerm {
        let ty = defaulted(&self.resolve(&t.ty));
        let kind = match t.kind {
            TypedKind::Var(x) => TypedKind::Var(x),
            TypedKind::Lit(r) => TypedKind::Lit(r),
            TypedKind::Lam(x, b) => TypedKind::Lam(x, Box::new(self.default_tree(*b))),
            TypedKind::App(f, a) => TypedKind::App(
                Box::new(self.default_tree(*f)),
                Box::new(self.default_tree(*a)),
            ),
            TypedKind::Fix(x, b) => TypedKind::Fix(x, Box::new(self.default_tree(*b))),
            TypedKind::Pair(a, b) => TypedKind::Pair(
                Box::new(self.default_tree(*a)),
                Box::new(self.default_tree(*b)),
            ),
            TypedKind::InL(t) => TypedKind::InL(Box::new(self.default_tree(*t))),
            TypedKind::InR(t) => TypedKind::InR(Box::new(self.default_tree(*t))),
            TypedKind::MatchPair { scrutinee, left_var, right_var, body } => {
                TypedKind::MatchPair {
                    scrutinee: Box::new(self.default_tree(*scrutinee)),
                    left_var,
                    right_var,
                    body: Box::new(self.default_tree(*body)),
                }
            }
            TypedKind::MatchSum { scrutinee, left_var, left_body, right_var, right_body } => {
                TypedKind::MatchSum {
                    scrutinee: Box::new(self.default_tree(*scrutinee)),
                    left_var,
                    left_body: Box::new(self.default_tree(*left_body)),
                    right_var,
                    right_body: Box::new(self.default_tree(*right_body)),
                }
            }
            TypedKind::If { cond, then_branch, else_branch } => TypedKind::If {
                cond: Box::new(self.default_tree(*cond)),
                then_branch: Box::new(self.default_tree(*then_branch)),
                else_branch: Box::new(self.default_tree(*else_branch)),
            },
            TypedKind::Eval { scrutinee, var, body } => TypedKind::Eval {
                scrutinee: Box::new(self.default_tree(*scrutinee)),
                var,
                body: Box::new(self.default_tree(*body)),
            },
            TypedKind::Prim(name, args) => TypedKind::Prim(
                name,
                args.into_iter().map(|a| self.default_tree(a)).collect(),
            ),
        };
        TypedTerm { kind, ty, span: t.span }
    }
}

fn defaulted(ty: &Type) -> Type {
    match ty {
        Type::Var(_) => Type::Real,
        Type::Real => Type::Real,
        Type::Prod(a, b) => Type::Prod(Box::new(defaulted(a)), Box::new(defaulted(b))),
        Type::Sum(a, b) => Type::Sum(Box::new(defaulted(a)), Box::new(defaulted(b))),
        Type::Arrow(a, b) => Type::Arrow(Box::new(defaulted(a)), Box::new(defaulted(b))),
    }
}

/// Infers the principal simple type of a closed term, defaulting
/// unconstrained leaves to the reals, and enforces the data-type side
/// condition on every forcing scrutinee.
pub fn typecheck(term: &Term) -> Result<TypedTerm, TypeError> {
    let mut inf = Inference { next_var: 0, subst: HashMap::new(), eval_spans: Vec::new() };
    let typed = inf.infer(&HashMap::new(), term)?;
    for (span, ty) in inf.eval_spans.clone() {
        let resolved = defaulted(&inf.resolve(&ty));
        if !resolved.is_data_type() {
            return Err(TypeError::EvalOnFunctionType { span, ty: resolved.to_string() });
        }
    }
    Ok(inf.default_tree(typed))
}
