//! Abstract syntax of the probabilistic call-by-name language.

use crate::rat::Rat;
use std::fmt;

/// Source position, 1-based.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct Span {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Span {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

/// Simple types: reals, products, sums, functions. A type is a *data
/// type* when no function space occurs in it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Type {
    Real,
    Prod(Box<Type>, Box<Type>),
    Sum(Box<Type>, Box<Type>),
    Arrow(Box<Type>, Box<Type>),
    /// inference-time placeholder, resolved or defaulted before use
    Var(u32),
}

impl Type {
    pub fn is_data_type(&self) -> bool {
        match self {
            Type::Real => true,
            Type::Prod(a, b) | Type::Sum(a, b) => a.is_data_type() && b.is_data_type(),
            Type::Arrow(..) => false,
            Type::Var(_) => false,
        }
    }
}

impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Real => write!(f, "R"),
            Type::Prod(a, b) => write!(f, "({a} * {b})"),
            Type::Sum(a, b) => write!(f, "({a} + {b})"),
            Type::Arrow(a, b) => write!(f, "({a} -> {b})"),
            Type::Var(v) => write!(f, "?{v}"),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Term {
    pub kind: TermKind,
    pub span: Span,
}

#[derive(Debug, Clone, PartialEq)]
pub enum TermKind {
    Var(String),
    Lam(String, Box<Term>),
    App(Box<Term>, Box<Term>),
    Fix(String, Box<Term>),
    Pair(Box<Term>, Box<Term>),
    InL(Box<Term>),
    InR(Box<Term>),
    MatchPair {
        scrutinee: Box<Term>,
        left_var: String,
        right_var: String,
        body: Box<Term>,
    },
    MatchSum {
        scrutinee: Box<Term>,
        left_var: String,
        left_body: Box<Term>,
        right_var: String,
        right_body: Box<Term>,
    },
    If {
        cond: Box<Term>,
        then_branch: Box<Term>,
        else_branch: Box<Term>,
    },
    Eval {
        scrutinee: Box<Term>,
        var: String,
        body: Box<Term>,
    },
    Prim(String, Vec<Term>),
    Lit(Rat),
}

impl Term {
    pub fn new(kind: TermKind, span: Span) -> Self {
        Term { kind, span }
    }

    /// Free variables, for the well-scopedness check after parsing.
    pub fn free_vars(&self) -> std::collections::BTreeSet<&str> {
        let mut out = std::collections::BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free<'a>(
        &'a self,
        bound: &mut Vec<&'a str>,
        out: &mut std::collections::BTreeSet<&'a str>,
    ) {
        match &self.kind {
            TermKind::Var(x) => {
                if !bound.iter().any(|b| b == x) {
                    out.insert(x);
                }
            }
            TermKind::Lam(x, body) | TermKind::Fix(x, body) => {
                bound.push(x);
                body.collect_free(bound, out);
                bound.pop();
            }
            TermKind::App(f, a) => {
                f.collect_free(bound, out);
                a.collect_free(bound, out);
            }
            TermKind::Pair(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            TermKind::InL(t) | TermKind::InR(t) => t.collect_free(bound, out),
            TermKind::MatchPair { scrutinee, left_var, right_var, body } => {
                scrutinee.collect_free(bound, out);
                bound.push(left_var);
                bound.push(right_var);
                body.collect_free(bound, out);
                bound.pop();
                bound.pop();
            }
            TermKind::MatchSum { scrutinee, left_var, left_body, right_var, right_body } => {
                scrutinee.collect_free(bound, out);
                bound.push(left_var);
                left_body.collect_free(bound, out);
                bound.pop();
                bound.push(right_var);
                right_body.collect_free(bound, out);
                bound.pop();
            }
            TermKind::If { cond, then_branch, else_branch } => {
                cond.collect_free(bound, out);
                then_branch.collect_free(bound, out);
                else_branch.collect_free(bound, out);
            }
            TermKind::Eval { scrutinee, var, body } => {
                scrutinee.collect_free(bound, out);
                bound.push(var);
                body.collect_free(bound, out);
                bound.pop();
            }
            TermKind::Prim(_, args) => {
                for a in args {
                    a.collect_free(bound, out);
                }
            }
            TermKind::Lit(_) => {}
        }
    }
}
