//! Expressions with default clauses and their order-independent small-step
//! semantics.
//!
//! A case over a value steps to the right-hand side of *any* matching clause,
//! once per derivable substitution, so [`step`] returns a set. Wellformed
//! expressions always produce a singleton.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::pattern::{fv_even, match_neg, match_pos, CtorName, Pattern, Substitution, Value};

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Expression {
    Var(String),
    Ctor(CtorName, Vec<Expression>),
    Case(Box<CaseExpr>),
    /// Call of a top-level definition; unfolded once all arguments are values.
    Call(String, Vec<Expression>),
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CaseExpr {
    pub scrutinee: Expression,
    pub clauses: Vec<Clause>,
    pub default: Expression,
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Clause {
    pub pattern: Pattern,
    pub rhs: Expression,
}

impl Clause {
    pub fn new(pattern: Pattern, rhs: Expression) -> Self {
        Clause { pattern, rhs }
    }
}

impl Expression {
    pub fn var(x: impl Into<String>) -> Self {
        Expression::Var(x.into())
    }

    pub fn ctor(name: impl Into<String>, args: Vec<Expression>) -> Self {
        let c = CtorName::new(name, args.len());
        Expression::Ctor(c, args)
    }

    pub fn nullary(name: impl Into<String>) -> Self {
        Expression::ctor(name, Vec::new())
    }

    pub fn case(scrutinee: Expression, clauses: Vec<Clause>, default: Expression) -> Self {
        Expression::Case(Box::new(CaseExpr { scrutinee, clauses, default }))
    }

    pub fn call(name: impl Into<String>, args: Vec<Expression>) -> Self {
        Expression::Call(name.into(), args)
    }

    pub fn from_value(v: &Value) -> Self {
        Expression::Ctor(v.ctor.clone(), v.args.iter().map(Expression::from_value).collect())
    }

    pub fn as_value(&self) -> Option<Value> {
        match self {
            Expression::Ctor(c, args) => {
                let args = args.iter().map(Expression::as_value).collect::<Option<Vec<_>>>()?;
                Some(Value { ctor: c.clone(), args })
            }
            _ => None,
        }
    }

    pub fn is_value(&self) -> bool {
        match self {
            Expression::Ctor(_, args) => args.iter().all(Expression::is_value),
            _ => false,
        }
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut out);
        out
    }

    fn collect_free(&self, out: &mut BTreeSet<String>) {
        match self {
            Expression::Var(x) => {
                out.insert(x.clone());
            }
            Expression::Ctor(_, args) | Expression::Call(_, args) => {
                for a in args {
                    a.collect_free(out);
                }
            }
            Expression::Case(c) => {
                c.scrutinee.collect_free(out);
                c.default.collect_free(out);
                for cl in &c.clauses {
                    let bound = fv_even(&cl.pattern);
                    for x in cl.rhs.free_vars() {
                        if !bound.contains(&x) {
                            out.insert(x);
                        }
                    }
                }
            }
        }
    }

    /// Every variable name occurring anywhere, bound or free, including
    /// pattern variables.
    fn all_names(&self, out: &mut BTreeSet<String>) {
        match self {
            Expression::Var(x) => {
                out.insert(x.clone());
            }
            Expression::Ctor(_, args) | Expression::Call(_, args) => {
                for a in args {
                    a.all_names(out);
                }
            }
            Expression::Case(c) => {
                c.scrutinee.all_names(out);
                c.default.all_names(out);
                for cl in &c.clauses {
                    pattern_names(&cl.pattern, out);
                    cl.rhs.all_names(out);
                }
            }
        }
    }

    /// Case subexpressions in pre-order (outer before inner, scrutinee before
    /// clauses before default).
    pub fn cases(&self) -> Vec<&CaseExpr> {
        let mut out = Vec::new();
        self.collect_cases(&mut out);
        out
    }

    fn collect_cases<'a>(&'a self, out: &mut Vec<&'a CaseExpr>) {
        match self {
            Expression::Var(_) => {}
            Expression::Ctor(_, args) | Expression::Call(_, args) => {
                for a in args {
                    a.collect_cases(out);
                }
            }
            Expression::Case(c) => {
                out.push(c);
                c.scrutinee.collect_cases(out);
                for cl in &c.clauses {
                    cl.rhs.collect_cases(out);
                }
                c.default.collect_cases(out);
            }
        }
    }
}

fn pattern_names(p: &Pattern, out: &mut BTreeSet<String>) {
    match p {
        Pattern::Var(x) => {
            out.insert(x.clone());
        }
        Pattern::Ctor(_, args) => {
            for a in args {
                pattern_names(a, out);
            }
        }
        Pattern::And(a, b) | Pattern::Or(a, b) => {
            pattern_names(a, out);
            pattern_names(b, out);
        }
        Pattern::Neg(q) => pattern_names(q, out),
        Pattern::Wildcard | Pattern::Absurd => {}
    }
}

fn write_args(f: &mut fmt::Formatter<'_>, args: &[Expression]) -> fmt::Result {
    f.write_str("(")?;
    for (i, a) in args.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        write!(f, "{a}")?;
    }
    f.write_str(")")
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expression::Var(x) => f.write_str(x),
            Expression::Ctor(c, args) => {
                f.write_str(&c.name)?;
                if args.is_empty() {
                    Ok(())
                } else {
                    write_args(f, args)
                }
            }
            Expression::Call(name, args) => {
                f.write_str(name)?;
                write_args(f, args)
            }
            Expression::Case(c) => write!(f, "{c}"),
        }
    }
}

impl fmt::Display for CaseExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "case {} of {{ ", self.scrutinee)?;
        for cl in &self.clauses {
            write!(f, "{} => {}, ", cl.pattern, cl.rhs)?;
        }
        write!(f, "default => {} }}", self.default)
    }
}

fn rename_pattern(p: &Pattern, from: &str, to: &str) -> Pattern {
    match p {
        Pattern::Var(x) if x == from => Pattern::Var(to.to_string()),
        Pattern::Var(_) | Pattern::Wildcard | Pattern::Absurd => p.clone(),
        Pattern::Ctor(c, args) => Pattern::Ctor(c.clone(), args.iter().map(|a| rename_pattern(a, from, to)).collect()),
        Pattern::And(a, b) => Pattern::and(rename_pattern(a, from, to), rename_pattern(b, from, to)),
        Pattern::Or(a, b) => Pattern::or(rename_pattern(a, from, to), rename_pattern(b, from, to)),
        Pattern::Neg(q) => Pattern::neg(rename_pattern(q, from, to)),
    }
}

/// Simultaneous, capture-avoiding substitution of expressions for free
/// variables. Clause binders shadow; a binder that would capture a free
/// variable of a substituted expression is renamed to a fresh `$r<n>` name.
pub fn subst_expr(e: &Expression, map: &BTreeMap<String, Expression>) -> Expression {
    if map.is_empty() {
        return e.clone();
    }
    match e {
        Expression::Var(x) => map.get(x).cloned().unwrap_or_else(|| e.clone()),
        Expression::Ctor(c, args) => Expression::Ctor(c.clone(), args.iter().map(|a| subst_expr(a, map)).collect()),
        Expression::Call(n, args) => Expression::Call(n.clone(), args.iter().map(|a| subst_expr(a, map)).collect()),
        Expression::Case(c) => {
            let scrutinee = subst_expr(&c.scrutinee, map);
            let default = subst_expr(&c.default, map);
            let clauses = c.clauses.iter().map(|cl| subst_clause(cl, map)).collect();
            Expression::Case(Box::new(CaseExpr { scrutinee, clauses, default }))
        }
    }
}

fn subst_clause(cl: &Clause, map: &BTreeMap<String, Expression>) -> Clause {
    let bound = fv_even(&cl.pattern);
    let rhs_free = cl.rhs.free_vars();
    let inner: BTreeMap<String, Expression> = map
        .iter()
        .filter(|(x, _)| !bound.contains(*x) && rhs_free.contains(*x))
        .map(|(x, e)| (x.clone(), e.clone()))
        .collect();
    if inner.is_empty() {
        return cl.clone();
    }
    let incoming: BTreeSet<String> = inner.values().flat_map(Expression::free_vars).collect();
    let mut pattern = cl.pattern.clone();
    let mut rhs = cl.rhs.clone();
    let captured: Vec<&String> = bound.iter().filter(|x| incoming.contains(*x)).collect();
    if !captured.is_empty() {
        let mut used = BTreeSet::new();
        rhs.all_names(&mut used);
        pattern_names(&pattern, &mut used);
        used.extend(incoming.iter().cloned());
        for (x, e) in &inner {
            used.insert(x.clone());
            e.all_names(&mut used);
        }
        let mut n = 0usize;
        for x in captured {
            let fresh = loop {
                let candidate = format!("$r{n}");
                n += 1;
                if !used.contains(&candidate) {
                    break candidate;
                }
            };
            used.insert(fresh.clone());
            pattern = rename_pattern(&pattern, x, &fresh);
            let rename = BTreeMap::from([(x.clone(), Expression::Var(fresh))]);
            rhs = subst_expr(&rhs, &rename);
        }
    }
    Clause { pattern, rhs: subst_expr(&rhs, &inner) }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SemanticsError {
    #[error("substitution {0} binds a variable twice")]
    Improper(String),
}

/// `e σ` for a proper substitution `σ`.
pub fn apply_subst(e: &Expression, s: &Substitution) -> Result<Expression, SemanticsError> {
    if !s.is_proper() {
        return Err(SemanticsError::Improper(s.to_string()));
    }
    Ok(subst_expr(e, &subst_map(s)))
}

// The first mapping for a variable wins; only nonlinear patterns produce
// substitutions where this matters.
fn subst_map(s: &Substitution) -> BTreeMap<String, Expression> {
    let mut map = BTreeMap::new();
    for m in s.mappings() {
        map.entry(m.var.clone()).or_insert_with(|| Expression::from_value(&m.value));
    }
    map
}

/// Top-level definitions: name to parameters and body.
pub type Defs = BTreeMap<String, (Vec<String>, Expression)>;

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StepResult {
    /// Distinct successors; never empty.
    Stepped(Vec<Expression>),
    Stuck,
    IsValue,
}

pub fn step(e: &Expression) -> StepResult {
    step_with(e, &Defs::new())
}

pub fn step_with(e: &Expression, defs: &Defs) -> StepResult {
    match e {
        Expression::Var(_) => StepResult::Stuck,
        Expression::Ctor(c, args) => match step_args(args, defs) {
            ArgStep::AllValues => StepResult::IsValue,
            ArgStep::Stuck => StepResult::Stuck,
            ArgStep::Stepped(rows) => {
                StepResult::Stepped(rows.into_iter().map(|a| Expression::Ctor(c.clone(), a)).collect())
            }
        },
        Expression::Call(name, args) => match step_args(args, defs) {
            ArgStep::Stuck => StepResult::Stuck,
            ArgStep::Stepped(rows) => {
                StepResult::Stepped(rows.into_iter().map(|a| Expression::Call(name.clone(), a)).collect())
            }
            ArgStep::AllValues => {
                let Some((params, body)) = defs.get(name) else {
                    return StepResult::Stuck;
                };
                if params.len() != args.len() {
                    return StepResult::Stuck;
                }
                let map = params.iter().cloned().zip(args.iter().cloned()).collect();
                StepResult::Stepped(vec![subst_expr(body, &map)])
            }
        },
        Expression::Case(c) => {
            let Some(v) = c.scrutinee.as_value() else {
                return match step_with(&c.scrutinee, defs) {
                    StepResult::Stepped(next) => StepResult::Stepped(
                        next.into_iter()
                            .map(|s| {
                                Expression::Case(Box::new(CaseExpr {
                                    scrutinee: s,
                                    clauses: c.clauses.clone(),
                                    default: c.default.clone(),
                                }))
                            })
                            .collect(),
                    ),
                    _ => StepResult::Stuck,
                };
            };
            let mut out: Vec<Expression> = Vec::new();
            for cl in &c.clauses {
                for s in match_pos(&cl.pattern, &v).iter() {
                    let next = subst_expr(&cl.rhs, &subst_map(s));
                    if !out.contains(&next) {
                        out.push(next);
                    }
                }
            }
            if out.is_empty() {
                debug_assert!(c.clauses.iter().all(|cl| !match_neg(&cl.pattern, &v).is_empty()));
                out.push(c.default.clone());
            }
            StepResult::Stepped(out)
        }
    }
}

enum ArgStep {
    AllValues,
    Stuck,
    Stepped(Vec<Vec<Expression>>),
}

// Steps the leftmost non-value argument.
fn step_args(args: &[Expression], defs: &Defs) -> ArgStep {
    let Some(i) = args.iter().position(|a| !a.is_value()) else {
        return ArgStep::AllValues;
    };
    match step_with(&args[i], defs) {
        StepResult::Stepped(next) => ArgStep::Stepped(
            next.into_iter()
                .map(|a| {
                    let mut row = args.to_vec();
                    row[i] = a;
                    row
                })
                .collect(),
        ),
        _ => ArgStep::Stuck,
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EvalOutcome {
    Value(Value),
    Diverged,
    Stuck(Expression),
    Nondeterministic(Vec<Expression>),
}

impl fmt::Display for EvalOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EvalOutcome::Value(v) => write!(f, "{v}"),
            EvalOutcome::Diverged => f.write_str("diverged (fuel exhausted)"),
            EvalOutcome::Stuck(e) => write!(f, "stuck at {e}"),
            EvalOutcome::Nondeterministic(es) => {
                let items: Vec<String> = es.iter().map(ToString::to_string).collect();
                write!(f, "nondeterministic step to {{{}}}", items.join(", "))
            }
        }
    }
}

pub const DEFAULT_FUEL: usize = 10_000;

pub fn eval(e: &Expression, fuel: usize) -> EvalOutcome {
    eval_with(e, &Defs::new(), fuel)
}

pub fn eval_with(e: &Expression, defs: &Defs, fuel: usize) -> EvalOutcome {
    let mut cur = e.clone();
    for _ in 0..=fuel {
        match step_with(&cur, defs) {
            StepResult::IsValue => return EvalOutcome::Value(cur.as_value().expect("value")),
            StepResult::Stuck => return EvalOutcome::Stuck(cur),
            StepResult::Stepped(mut next) => {
                if next.len() > 1 {
                    return EvalOutcome::Nondeterministic(next);
                }
                cur = next.pop().expect("nonempty successor set");
            }
        }
    }
    EvalOutcome::Diverged
}

/// Both reach the same value within `fuel` steps, or both exhaust it.
pub fn expr_equiv_bounded(e1: &Expression, e2: &Expression, fuel: usize) -> bool {
    match (eval(e1, fuel), eval(e2, fuel)) {
        (EvalOutcome::Value(a), EvalOutcome::Value(b)) => a == b,
        (EvalOutcome::Diverged, EvalOutcome::Diverged) => true,
        _ => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn n(c: &str) -> Expression {
        Expression::nullary(c)
    }

    fn p(c: &str) -> Pattern {
        Pattern::nullary(c)
    }

    fn is_red(scrutinee: Expression) -> Expression {
        Expression::case(
            scrutinee,
            vec![Clause::new(p("Red"), n("True")), Clause::new(Pattern::neg(p("Red")), n("False"))],
            n("False"),
        )
    }

    #[test]
    fn match_and_default_steps() {
        assert_eq!(step(&is_red(n("Red"))), StepResult::Stepped(vec![n("True")]));
        let e = Expression::case(n("Green"), vec![Clause::new(p("Red"), n("True"))], n("False"));
        assert_eq!(step(&e), StepResult::Stepped(vec![n("False")]));
    }

    #[test]
    fn overlapping_clauses_step_to_both() {
        let e = Expression::case(
            n("Red"),
            vec![Clause::new(p("Red"), n("A")), Clause::new(Pattern::Wildcard, n("B"))],
            n("D"),
        );
        assert_eq!(step(&e), StepResult::Stepped(vec![n("A"), n("B")]));
        assert!(matches!(eval(&e, 10), EvalOutcome::Nondeterministic(_)));
    }

    #[test]
    fn values_and_stuck_terms() {
        assert_eq!(eval(&n("True"), 10), EvalOutcome::Value(Value::nullary("True")));
        assert_eq!(step(&n("True")), StepResult::IsValue);
        let e = Expression::case(Expression::var("z"), vec![], n("True"));
        assert_eq!(step(&e), StepResult::Stuck);
    }

    #[test]
    fn binders_reach_the_rhs() {
        let weekend = Expression::case(
            n("Sa"),
            vec![Clause::new(
                Pattern::and(Pattern::var("y"), Pattern::or(p("Sa"), p("Su"))),
                Expression::ctor("Weekend", vec![Expression::var("y")]),
            )],
            n("Tomorrow"),
        );
        let expected = Value::new("Weekend", vec![Value::nullary("Sa")]);
        assert_eq!(eval(&weekend, 10), EvalOutcome::Value(expected));
    }

    #[test]
    fn congruence_goes_left_to_right() {
        let e = Expression::ctor("Pair", vec![is_red(n("Red")), is_red(n("Blue"))]);
        let StepResult::Stepped(next) = step(&e) else { panic!() };
        assert_eq!(next, vec![Expression::ctor("Pair", vec![n("True"), is_red(n("Blue"))])]);
    }

    #[test]
    fn substitution_basics() {
        let s = Substitution::single("x", Value::nullary("True"));
        assert_eq!(apply_subst(&Expression::var("x"), &s).unwrap(), n("True"));
        let s = Substitution::from_pairs([("x", Value::nullary("A")), ("y", Value::nullary("B"))]);
        let pair = Expression::ctor("Pair", vec![Expression::var("x"), Expression::var("y")]);
        assert_eq!(apply_subst(&pair, &s).unwrap(), Expression::ctor("Pair", vec![n("A"), n("B")]));
        let dup = Substitution::from_pairs([("x", Value::nullary("A")), ("x", Value::nullary("B"))]);
        assert!(apply_subst(&pair, &dup).is_err());
    }

    #[test]
    fn clause_binders_shadow() {
        // case x of { x => Pair(x, y), default => x }
        let inner = Expression::case(
            Expression::var("x"),
            vec![Clause::new(Pattern::var("x"), Expression::ctor("Pair", vec![Expression::var("x"), Expression::var("y")]))],
            Expression::var("x"),
        );
        let outer = Expression::ctor("Wrap", vec![inner]);
        let s = Substitution::from_pairs([("x", Value::nullary("A")), ("y", Value::nullary("B"))]);
        let got = apply_subst(&outer, &s).unwrap();
        let expected = Expression::ctor(
            "Wrap",
            vec![Expression::case(
                n("A"),
                vec![Clause::new(Pattern::var("x"), Expression::ctor("Pair", vec![Expression::var("x"), n("B")]))],
                n("A"),
            )],
        );
        assert_eq!(got, expected);
    }

    #[test]
    fn renaming_avoids_capture() {
        // (case c of { x => Pair(x, y) }) [y := x]
        let e = Expression::case(
            Expression::var("c"),
            vec![Clause::new(Pattern::var("x"), Expression::ctor("Pair", vec![Expression::var("x"), Expression::var("y")]))],
            n("D"),
        );
        let map = BTreeMap::from([("y".to_string(), Expression::var("x"))]);
        let got = subst_expr(&e, &map);
        let Expression::Case(c) = &got else { panic!() };
        let Pattern::Var(b) = &c.clauses[0].pattern else { panic!() };
        assert_ne!(b, "x");
        assert_eq!(c.clauses[0].rhs, Expression::ctor("Pair", vec![Expression::var(b), Expression::var("x")]));
    }

    #[test]
    fn calls_unfold() {
        let mut defs = Defs::new();
        defs.insert("isRed".into(), (vec!["c".into()], is_red(Expression::var("c"))));
        let e = Expression::call("isRed", vec![n("Red")]);
        assert_eq!(eval_with(&e, &defs, 10), EvalOutcome::Value(Value::nullary("True")));
        defs.insert("loop".into(), (vec![], Expression::call("loop", vec![])));
        assert_eq!(eval_with(&Expression::call("loop", vec![]), &defs, 50), EvalOutcome::Diverged);
    }

    #[test]
    fn bounded_equivalence() {
        let e = is_red(n("Red"));
        assert!(expr_equiv_bounded(&e, &e, 10));
        let permuted = Expression::case(
            n("Red"),
            vec![Clause::new(Pattern::neg(p("Red")), n("False")), Clause::new(p("Red"), n("True"))],
            n("False"),
        );
        assert!(expr_equiv_bounded(&e, &permuted, 10));
        let replaced = Expression::case(
            n("Red"),
            vec![
                Clause::new(Pattern::neg(Pattern::neg(p("Red"))), n("True")),
                Clause::new(Pattern::neg(p("Red")), n("False")),
            ],
            n("False"),
        );
        assert!(expr_equiv_bounded(&e, &replaced, 10));
    }
}
