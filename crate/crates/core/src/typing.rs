//! Types, data declarations, and the typing judgments for patterns and
//! expressions.
//!
//! Booleans, pairs and binary sums are built in (`True`/`False`, `Pair/2`,
//! `Inl/1`, `Inr/1`). Further nominal types come from [`DataDecls`].

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::pattern::{CtorName, Pattern};
use crate::semantics::{CaseExpr, Defs, Expression};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Type {
    Bool,
    Pair(Box<Type>, Box<Type>),
    Sum(Box<Type>, Box<Type>),
    Named(String),
}

impl Type {
    pub fn pair(a: Type, b: Type) -> Self {
        Type::Pair(Box::new(a), Box::new(b))
    }

    pub fn sum(a: Type, b: Type) -> Self {
        Type::Sum(Box::new(a), Box::new(b))
    }

    pub fn named(name: impl Into<String>) -> Self {
        Type::Named(name.into())
    }
}

/// `*` binds tighter than `+`; both associate to the right.
impl fmt::Display for Type {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Type::Bool => f.write_str("Bool"),
            Type::Named(n) => f.write_str(n),
            Type::Pair(a, b) => {
                if matches!(**a, Type::Pair(..) | Type::Sum(..)) {
                    write!(f, "({a})")?;
                } else {
                    write!(f, "{a}")?;
                }
                f.write_str(" * ")?;
                if matches!(**b, Type::Sum(..)) {
                    write!(f, "({b})")
                } else {
                    write!(f, "{b}")
                }
            }
            Type::Sum(a, b) => {
                if matches!(**a, Type::Sum(..)) {
                    write!(f, "({a})")?;
                } else {
                    write!(f, "{a}")?;
                }
                write!(f, " + {b}")
            }
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CtorDecl {
    pub name: CtorName,
    pub args: Vec<Type>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DataDecl {
    pub name: String,
    pub ctors: Vec<CtorDecl>,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum DeclError {
    #[error("type `{0}` is declared twice")]
    DuplicateType(String),
    #[error("constructor `{0}` is declared twice")]
    DuplicateCtor(String),
    #[error("type `{0}` is built in and cannot be redeclared")]
    BuiltinType(String),
    #[error("type `{0}` has no constructors")]
    Empty(String),
}

const BUILTIN_CTORS: [&str; 5] = ["True", "False", "Pair", "Inl", "Inr"];

/// User-declared nominal data types, in declaration order. Constructor names
/// are unique across all declarations and the built-in constructors.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct DataDecls {
    decls: Vec<DataDecl>,
    ctor_index: BTreeMap<String, (usize, usize)>,
}

/// Which set of constructors a value of some type can be headed by.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Signature {
    pub type_name: String,
    pub ctors: BTreeSet<CtorName>,
}

impl DataDecls {
    pub fn new() -> Self {
        DataDecls::default()
    }

    pub fn declare(&mut self, name: impl Into<String>, ctors: Vec<CtorDecl>) -> Result<(), DeclError> {
        let name = name.into();
        if name == "Bool" {
            return Err(DeclError::BuiltinType(name));
        }
        if self.decls.iter().any(|d| d.name == name) {
            return Err(DeclError::DuplicateType(name));
        }
        if ctors.is_empty() {
            return Err(DeclError::Empty(name));
        }
        let idx = self.decls.len();
        let mut seen = BTreeSet::new();
        for c in &ctors {
            let n = &c.name.name;
            if BUILTIN_CTORS.contains(&n.as_str()) || self.ctor_index.contains_key(n) || !seen.insert(n.clone()) {
                return Err(DeclError::DuplicateCtor(n.clone()));
            }
        }
        for (j, c) in ctors.iter().enumerate() {
            self.ctor_index.insert(c.name.name.clone(), (idx, j));
        }
        self.decls.push(DataDecl { name, ctors });
        Ok(())
    }

    /// Builder form of [`DataDecls::declare`] for fixed, known-good tables.
    pub fn with(mut self, name: &str, ctors: &[(&str, Vec<Type>)]) -> Self {
        let ctors = ctors
            .iter()
            .map(|(n, args)| CtorDecl { name: CtorName::new(*n, args.len()), args: args.clone() })
            .collect();
        self.declare(name, ctors).expect("valid declaration");
        self
    }

    pub fn decls(&self) -> &[DataDecl] {
        &self.decls
    }

    pub fn get(&self, name: &str) -> Option<&DataDecl> {
        self.decls.iter().find(|d| d.name == name)
    }

    /// The declaration and constructor entry for a user constructor name.
    pub fn lookup_ctor(&self, name: &str) -> Option<(&DataDecl, &CtorDecl)> {
        let &(i, j) = self.ctor_index.get(name)?;
        let d = &self.decls[i];
        Some((d, &d.ctors[j]))
    }

    /// Whether `c` is built in or declared, with matching arity.
    pub fn knows_ctor(&self, c: &CtorName) -> bool {
        match c.name.as_str() {
            "True" | "False" => c.arity == 0,
            "Pair" => c.arity == 2,
            "Inl" | "Inr" => c.arity == 1,
            n => self.lookup_ctor(n).is_some_and(|(_, cd)| cd.name.arity == c.arity),
        }
    }

    /// Constructors of `tau` with their argument types, in declaration order.
    pub fn ctors_of(&self, tau: &Type) -> Option<Vec<(CtorName, Vec<Type>)>> {
        match tau {
            Type::Bool => Some(vec![(CtorName::new("True", 0), vec![]), (CtorName::new("False", 0), vec![])]),
            Type::Pair(a, b) => Some(vec![(CtorName::new("Pair", 2), vec![(**a).clone(), (**b).clone()])]),
            Type::Sum(a, b) => Some(vec![
                (CtorName::new("Inl", 1), vec![(**a).clone()]),
                (CtorName::new("Inr", 1), vec![(**b).clone()]),
            ]),
            Type::Named(n) => {
                let d = self.get(n)?;
                Some(d.ctors.iter().map(|c| (c.name.clone(), c.args.clone())).collect())
            }
        }
    }

    /// Argument types of constructor `c` at type `tau`.
    pub fn ctor_args(&self, tau: &Type, c: &CtorName) -> Option<Vec<Type>> {
        self.ctors_of(tau)?.into_iter().find(|(n, _)| n == c).map(|(_, args)| args)
    }

    /// The signature of the unique type that contains every constructor of
    /// `ctors`. Built-in pair and sum signatures are identified by their
    /// constructor names alone. `Ok(None)` when `ctors` is empty.
    pub fn signature_containing(&self, ctors: &BTreeSet<CtorName>) -> Result<Option<Signature>, SignatureError> {
        let Some(first) = ctors.iter().next() else {
            return Ok(None);
        };
        let sig = self.signature_of(first).ok_or_else(|| SignatureError::Unknown(first.name.clone()))?;
        for c in ctors {
            if !sig.ctors.contains(c) {
                return Err(SignatureError::Mixed(first.name.clone(), c.name.clone()));
            }
        }
        Ok(Some(sig))
    }

    pub fn signature_of(&self, c: &CtorName) -> Option<Signature> {
        let names: &[(&str, usize)] = match c.name.as_str() {
            "True" | "False" => &[("True", 0), ("False", 0)],
            "Pair" => &[("Pair", 2)],
            "Inl" | "Inr" => &[("Inl", 1), ("Inr", 1)],
            n => {
                let (d, cd) = self.lookup_ctor(n)?;
                if cd.name.arity != c.arity {
                    return None;
                }
                return Some(Signature {
                    type_name: d.name.clone(),
                    ctors: d.ctors.iter().map(|c| c.name.clone()).collect(),
                });
            }
        };
        let ctors: BTreeSet<CtorName> = names.iter().map(|(n, a)| CtorName::new(*n, *a)).collect();
        if !ctors.contains(c) {
            return None;
        }
        let type_name = match c.name.as_str() {
            "True" | "False" => "Bool",
            "Pair" => "*",
            _ => "+",
        };
        Some(Signature { type_name: type_name.to_string(), ctors })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SignatureError {
    #[error("constructor `{0}` belongs to no declared type")]
    Unknown(String),
    #[error("constructors `{0}` and `{1}` belong to different types")]
    Mixed(String, String),
}

/// An ordered typing context; later entries shadow earlier ones on lookup.
pub type Context = Vec<(String, Type)>;

/// Parameter and result types of top-level functions by name.
pub type Signatures = BTreeMap<String, (Vec<Type>, Type)>;

fn lookup<'a>(ctx: &'a Context, x: &str) -> Option<&'a Type> {
    ctx.iter().rev().find(|(y, _)| y == x).map(|(_, t)| t)
}

/// Two contexts are equal as multisets of bindings.
pub fn same_context(a: &Context, b: &Context) -> bool {
    let mut a = a.clone();
    let mut b = b.clone();
    a.sort();
    b.sort();
    a == b
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TypeError {
    #[error("constructor `{ctor}` does not belong to type `{tau}`")]
    CtorMismatch { ctor: String, tau: String },
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("unbound variable `{0}`")]
    Unbound(String),
    #[error("or-pattern branches bind different variables: {0}")]
    OrContext(String),
    #[error("and-pattern branches disagree on negated variables: {0}")]
    AndContext(String),
    #[error("expected type `{expected}`, found `{found}`")]
    Mismatch { expected: String, found: String },
    #[error("cannot infer the type of `{0}`; add an annotation")]
    CannotInfer(String),
    #[error("unknown constructor `{0}`")]
    UnknownCtor(String),
    #[error("unknown function `{0}`")]
    UnknownFunction(String),
    #[error("function `{name}` expects {expected} arguments, got {found}")]
    Arity { name: String, expected: usize, found: usize },
}

fn fmt_ctx(ctx: &Context) -> String {
    let items: Vec<String> = ctx.iter().map(|(x, t)| format!("{x}: {t}")).collect();
    format!("[{}]", items.join(", "))
}

/// Synthesizes `(gamma, delta)`: the bindings made on a successful and on a
/// failed match of `p` against a value of type `tau`.
pub fn type_pattern(p: &Pattern, tau: &Type, decls: &DataDecls) -> Result<(Context, Context), TypeError> {
    match p {
        Pattern::Var(x) => Ok((vec![(x.clone(), tau.clone())], vec![])),
        Pattern::Wildcard | Pattern::Absurd => Ok((vec![], vec![])),
        Pattern::Neg(q) => {
            let (g, d) = type_pattern(q, tau, decls)?;
            Ok((d, g))
        }
        Pattern::And(a, b) => {
            let (g1, d1) = type_pattern(a, tau, decls)?;
            let (g2, d2) = type_pattern(b, tau, decls)?;
            if !same_context(&d1, &d2) {
                return Err(TypeError::AndContext(format!("{} vs {}", fmt_ctx(&d1), fmt_ctx(&d2))));
            }
            let mut g = g1;
            g.extend(g2);
            Ok((g, d1))
        }
        Pattern::Or(a, b) => {
            let (g1, d1) = type_pattern(a, tau, decls)?;
            let (g2, d2) = type_pattern(b, tau, decls)?;
            if !same_context(&g1, &g2) {
                return Err(TypeError::OrContext(format!("{} vs {}", fmt_ctx(&g1), fmt_ctx(&g2))));
            }
            let mut d = d1;
            d.extend(d2);
            Ok((g1, d))
        }
        Pattern::Ctor(c, args) => {
            if let Type::Named(n) = tau {
                if decls.get(n).is_none() {
                    return Err(TypeError::UnknownType(n.clone()));
                }
            }
            let arg_types = decls.ctor_args(tau, c).ok_or_else(|| TypeError::CtorMismatch {
                ctor: c.name.clone(),
                tau: tau.to_string(),
            })?;
            let mut g = Vec::new();
            let mut d = Vec::new();
            for (a, t) in args.iter().zip(&arg_types) {
                let (ga, da) = type_pattern(a, t, decls)?;
                g.extend(ga);
                d.extend(da);
            }
            Ok((g, d))
        }
    }
}

/// Expression typing with optional signatures for top-level functions.
#[derive(Clone, Debug, Default)]
pub struct Typer {
    pub decls: DataDecls,
    pub functions: Signatures,
}

impl Typer {
    pub fn new(decls: DataDecls) -> Self {
        Typer { decls, functions: BTreeMap::new() }
    }

    /// Synthesizes the type of `e`.
    pub fn synth(&self, ctx: &Context, e: &Expression) -> Result<Type, TypeError> {
        match e {
            Expression::Var(x) => lookup(ctx, x).cloned().ok_or_else(|| TypeError::Unbound(x.clone())),
            Expression::Ctor(c, args) => match (c.name.as_str(), args.as_slice()) {
                ("True" | "False", []) => Ok(Type::Bool),
                ("Pair", [a, b]) => Ok(Type::pair(self.synth(ctx, a)?, self.synth(ctx, b)?)),
                ("Inl" | "Inr", [_]) => Err(TypeError::CannotInfer(e.to_string())),
                (n, _) => {
                    let (d, cd) = self.decls.lookup_ctor(n).ok_or_else(|| TypeError::UnknownCtor(n.to_string()))?;
                    if cd.name.arity != args.len() {
                        return Err(TypeError::UnknownCtor(format!("{n}/{}", args.len())));
                    }
                    for (a, t) in args.iter().zip(&cd.args) {
                        self.check(ctx, a, t)?;
                    }
                    Ok(Type::Named(d.name.clone()))
                }
            },
            Expression::Call(name, args) => {
                let (params, ret) = self
                    .functions
                    .get(name)
                    .ok_or_else(|| TypeError::UnknownFunction(name.clone()))?;
                if params.len() != args.len() {
                    return Err(TypeError::Arity { name: name.clone(), expected: params.len(), found: args.len() });
                }
                for (a, t) in args.iter().zip(params) {
                    self.check(ctx, a, t)?;
                }
                Ok(ret.clone())
            }
            Expression::Case(case) => self.case_type(ctx, case, None),
        }
    }

    /// Checks `e` against `expected`; needed for injections into sums.
    pub fn check(&self, ctx: &Context, e: &Expression, expected: &Type) -> Result<(), TypeError> {
        match (e, expected) {
            (Expression::Ctor(c, args), Type::Sum(l, r)) if args.len() == 1 && (c.name == "Inl" || c.name == "Inr") => {
                let t = if c.name == "Inl" { l } else { r };
                self.check(ctx, &args[0], t)
            }
            (Expression::Ctor(c, args), Type::Pair(l, r)) if c.name == "Pair" && args.len() == 2 => {
                self.check(ctx, &args[0], l)?;
                self.check(ctx, &args[1], r)
            }
            (Expression::Case(case), _) => self.case_type(ctx, case, Some(expected)).map(|_| ()),
            _ => {
                let found = self.synth(ctx, e)?;
                if &found == expected {
                    Ok(())
                } else {
                    Err(TypeError::Mismatch { expected: expected.to_string(), found: found.to_string() })
                }
            }
        }
    }

    fn case_type(&self, ctx: &Context, case: &CaseExpr, expected: Option<&Type>) -> Result<Type, TypeError> {
        let sigma = self.synth(ctx, &case.scrutinee)?;
        let mut branches: Vec<(Context, &Expression)> = Vec::new();
        for cl in &case.clauses {
            // The failure context is synthesized per clause and not used.
            let (gamma, _delta) = type_pattern(&cl.pattern, &sigma, &self.decls)?;
            let mut inner = ctx.clone();
            inner.extend(gamma);
            branches.push((inner, &cl.rhs));
        }
        branches.push((ctx.clone(), &case.default));
        let result = match expected {
            Some(t) => t.clone(),
            None => {
                let mut found = None;
                let mut last_err = None;
                for (c, e) in &branches {
                    match self.synth(c, e) {
                        Ok(t) => {
                            found = Some(t);
                            break;
                        }
                        Err(err) => last_err = Some(err),
                    }
                }
                match found {
                    Some(t) => t,
                    None => return Err(last_err.expect("at least the default branch")),
                }
            }
        };
        for (c, e) in &branches {
            self.check(c, e, &result)?;
        }
        Ok(result)
    }
}

/// Synthesizes the type of `e` under `ctx` with no function signatures.
pub fn type_expr(ctx: &Context, e: &Expression, decls: &DataDecls) -> Result<Type, TypeError> {
    Typer::new(decls.clone()).synth(ctx, e)
}

/// The nominal type or `Bool` whose constructors head the clause patterns.
/// `None` when no clause names a constructor, when the constructor is
/// unknown, or when it is a pair or sum (whose type needs argument types).
pub fn scrutinee_type(case: &CaseExpr, decls: &DataDecls) -> Option<Type> {
    let heads: BTreeSet<CtorName> = case.clauses.iter().flat_map(|cl| cl.pattern.ctors()).collect();
    let sig = decls.signature_of(heads.iter().next()?)?;
    match sig.type_name.as_str() {
        "Bool" => Some(Type::Bool),
        "*" | "+" => None,
        name => Some(Type::named(name)),
    }
}

/// Signatures for unannotated definitions. A parameter takes the type of a
/// case that scrutinizes it directly. Return types are found by checking
/// each body against `Bool` and every declared type, with the definition's
/// own candidate signature in scope so that self-recursion resolves;
/// definitions that need an unresolved one are retried until nothing
/// changes. The error names the definition that stayed unresolved.
pub fn infer_signatures(
    decls: &DataDecls,
    defs: &Defs,
) -> Result<Signatures, (String, TypeError)> {
    let mut params: BTreeMap<&str, Vec<Type>> = BTreeMap::new();
    for (name, (ps, body)) in defs {
        let cases = body.cases();
        let mut tys = Vec::with_capacity(ps.len());
        for p in ps {
            let found = cases.iter().find_map(|c| match &c.scrutinee {
                Expression::Var(x) if x == p => scrutinee_type(c, decls),
                _ => None,
            });
            match found {
                Some(t) => tys.push(t),
                None => return Err((name.clone(), TypeError::CannotInfer(p.clone()))),
            }
        }
        params.insert(name, tys);
    }

    let candidates: Vec<Type> =
        std::iter::once(Type::Bool).chain(decls.decls().iter().map(|d| Type::named(d.name.clone()))).collect();
    let mut known = Signatures::new();
    loop {
        let mut progress = false;
        for (name, (ps, body)) in defs {
            if known.contains_key(name) {
                continue;
            }
            let ctx: Context = ps.iter().cloned().zip(params[name.as_str()].iter().cloned()).collect();
            for cand in &candidates {
                let mut typer = Typer::new(decls.clone());
                typer.functions = known.clone();
                typer.functions.insert(name.clone(), (params[name.as_str()].clone(), cand.clone()));
                if typer.check(&ctx, body, cand).is_ok() {
                    known.insert(name.clone(), (params[name.as_str()].clone(), cand.clone()));
                    progress = true;
                    break;
                }
            }
        }
        if !progress {
            break;
        }
    }

    for (name, (ps, body)) in defs {
        if !known.contains_key(name) {
            let ctx: Context = ps.iter().cloned().zip(params[name.as_str()].iter().cloned()).collect();
            let mut typer = Typer::new(decls.clone());
            typer.functions = known.clone();
            let err = match typer.synth(&ctx, body) {
                Err(e) => e,
                Ok(t) => TypeError::CannotInfer(format!("{name}: {t}")),
            };
            return Err((name.clone(), err));
        }
    }
    Ok(known)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::Clause;

    fn v(x: &str) -> Pattern {
        Pattern::var(x)
    }

    #[test]
    fn pattern_rules() {
        let decls = DataDecls::new();
        let t1 = Type::Bool;
        let t2 = Type::sum(Type::Bool, Type::Bool);
        assert_eq!(type_pattern(&v("x"), &t1, &decls).unwrap(), (vec![("x".into(), t1.clone())], vec![]));
        let pair = Pattern::ctor("Pair", vec![v("x"), v("x")]);
        let (g, d) = type_pattern(&pair, &Type::pair(t1.clone(), t2.clone()), &decls).unwrap();
        assert_eq!(g, vec![("x".into(), t1.clone()), ("x".into(), t2)]);
        assert!(d.is_empty());
        let (g, d) = type_pattern(&Pattern::neg(v("x")), &t1, &decls).unwrap();
        assert!(g.is_empty());
        assert_eq!(d, vec![("x".into(), t1)]);
    }

    #[test]
    fn or_branches_must_agree() {
        let decls = DataDecls::new();
        let p = Pattern::or(Pattern::and(v("x"), Pattern::nullary("True")), Pattern::nullary("False"));
        assert!(matches!(type_pattern(&p, &Type::Bool, &decls), Err(TypeError::OrContext(_))));
    }

    #[test]
    fn constructor_must_fit_type() {
        let decls = DataDecls::new().with("Color", &[("Red", vec![]), ("Green", vec![])]);
        assert!(type_pattern(&Pattern::nullary("Red"), &Type::named("Color"), &decls).is_ok());
        assert!(type_pattern(&Pattern::nullary("Red"), &Type::Bool, &decls).is_err());
        let inl = Pattern::ctor("Inl", vec![Pattern::nullary("Red")]);
        assert!(type_pattern(&inl, &Type::sum(Type::named("Color"), Type::Bool), &decls).is_ok());
    }

    #[test]
    fn expression_rules() {
        let decls = DataDecls::new();
        let t = Expression::nullary("True");
        assert_eq!(type_expr(&vec![], &t, &decls).unwrap(), Type::Bool);

        let case = Expression::case(
            Expression::nullary("True"),
            vec![
                Clause::new(Pattern::nullary("True"), Expression::nullary("False")),
                Clause::new(Pattern::neg(Pattern::nullary("True")), Expression::nullary("True")),
            ],
            Expression::nullary("False"),
        );
        assert_eq!(type_expr(&vec![], &case, &decls).unwrap(), Type::Bool);

        let ctx = vec![("x".to_string(), Type::Bool)];
        let pair = Expression::ctor("Pair", vec![Expression::var("x"), Expression::var("x")]);
        assert_eq!(type_expr(&ctx, &pair, &decls).unwrap(), Type::pair(Type::Bool, Type::Bool));
    }

    #[test]
    fn injections_need_an_expected_type() {
        let typer = Typer::new(DataDecls::new());
        let e = Expression::ctor("Inl", vec![Expression::nullary("True")]);
        assert!(typer.synth(&vec![], &e).is_err());
        assert!(typer.check(&vec![], &e, &Type::sum(Type::Bool, Type::Bool)).is_ok());
    }

    #[test]
    fn clause_bindings_scope_over_rhs() {
        let decls = DataDecls::new().with("Day", &[("Mo", vec![]), ("Sa", vec![])]);
        let case = Expression::case(
            Expression::nullary("Mo"),
            vec![Clause::new(Pattern::and(v("y"), Pattern::nullary("Sa")), Expression::var("y"))],
            Expression::nullary("Mo"),
        );
        assert_eq!(type_expr(&vec![], &case, &decls).unwrap(), Type::named("Day"));
    }

    #[test]
    fn signatures() {
        let decls = DataDecls::new().with("Color", &[("Red", vec![]), ("Green", vec![])]);
        let red = CtorName::new("Red", 0);
        let sig = decls.signature_containing(&BTreeSet::from([red.clone()])).unwrap().unwrap();
        assert_eq!(sig.type_name, "Color");
        assert_eq!(sig.ctors.len(), 2);
        let mixed = BTreeSet::from([red, CtorName::new("True", 0)]);
        assert!(decls.signature_containing(&mixed).is_err());
        assert!(decls.signature_containing(&BTreeSet::new()).unwrap().is_none());
    }

    #[test]
    fn declarations_reject_duplicates() {
        let mut decls = DataDecls::new();
        let red = CtorDecl { name: CtorName::new("Red", 0), args: vec![] };
        decls.declare("Color", vec![red.clone()]).unwrap();
        assert!(decls.declare("Other", vec![red]).is_err());
        let t = CtorDecl { name: CtorName::new("True", 0), args: vec![] };
        assert!(decls.declare("B", vec![t]).is_err());
    }

    #[test]
    fn signatures_are_inferred_through_recursion() {
        let decls = DataDecls::new()
            .with("Nat", &[("Z", vec![]), ("S", vec![Type::named("Nat")])])
            .with("List", &[("Nil", vec![]), ("Cons", vec![Type::Bool, Type::named("List")])]);
        let length = Expression::case(
            Expression::var("xs"),
            vec![
                Clause::new(Pattern::nullary("Nil"), Expression::nullary("Z")),
                Clause::new(
                    Pattern::ctor("Cons", vec![Pattern::Wildcard, v("zs")]),
                    Expression::ctor("S", vec![Expression::call("length", vec![Expression::var("zs")])]),
                ),
            ],
            Expression::nullary("Z"),
        );
        let mut defs = Defs::new();
        defs.insert("length".into(), (vec!["xs".into()], length));
        let sigs = infer_signatures(&decls, &defs).unwrap();
        assert_eq!(sigs["length"], (vec![Type::named("List")], Type::named("Nat")));

        defs.insert("id".into(), (vec!["y".into()], Expression::var("y")));
        let (name, err) = infer_signatures(&decls, &defs).unwrap_err();
        assert_eq!(name, "id");
        assert_eq!(err, TypeError::CannotInfer("y".into()));
    }
}
