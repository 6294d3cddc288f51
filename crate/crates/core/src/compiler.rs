//! Compilation of clause matrices over normalized patterns into decision
//! trees.
//!
//! A matrix has one column per scrutinee and one row per clause; the default
//! right-hand side is kept separately and is never a row. Compilation takes a
//! **Default** step (no rows), a **Simple** step (first row only binds
//! variables) or a **Branch** step on the leftmost column that has head
//! constructors.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::normalize::{to_ndnf, NConjunct, Ndnf};
use crate::pattern::{match_pos, CtorName, SubstSet, Value};
use crate::semantics::{eval_with, subst_expr, CaseExpr, Defs, EvalOutcome, Expression, StepResult};
use crate::wellformed::{wf_expr_with, wf_matrix_with, WfReport};
use crate::typing::DataDecls;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Row {
    pub patterns: Vec<Ndnf>,
    pub rhs: Expression,
}

impl Row {
    pub fn new(patterns: Vec<Ndnf>, rhs: Expression) -> Self {
        Row { patterns, rhs }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ClauseMatrix {
    pub scrutinees: Vec<Expression>,
    pub rows: Vec<Row>,
    pub default_rhs: Expression,
}

impl ClauseMatrix {
    pub fn new(scrutinees: Vec<Expression>, rows: Vec<Row>, default_rhs: Expression) -> Self {
        ClauseMatrix { scrutinees, rows, default_rhs }
    }

    pub fn width(&self) -> usize {
        self.scrutinees.len()
    }

    pub fn column(&self, i: usize) -> Vec<&Ndnf> {
        self.rows.iter().map(|r| &r.patterns[i]).collect()
    }

    /// Substitutes into scrutinees and right-hand sides alike.
    pub fn subst(&self, map: &BTreeMap<String, Expression>) -> ClauseMatrix {
        ClauseMatrix {
            scrutinees: self.scrutinees.iter().map(|s| subst_expr(s, map)).collect(),
            rows: self
                .rows
                .iter()
                .map(|r| Row { patterns: r.patterns.clone(), rhs: subst_expr(&r.rhs, map) })
                .collect(),
            default_rhs: subst_expr(&self.default_rhs, map),
        }
    }
}

impl fmt::Display for ClauseMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let scrutinees: Vec<String> = self.scrutinees.iter().map(ToString::to_string).collect();
        writeln!(f, "case {} of", scrutinees.join(", "))?;
        for row in &self.rows {
            let cells: Vec<String> = row.patterns.iter().map(ToString::to_string).collect();
            if cells.is_empty() {
                writeln!(f, "  => {}", row.rhs)?;
            } else {
                writeln!(f, "  {} => {}", cells.join("  "), row.rhs)?;
            }
        }
        write!(f, "  default => {}", self.default_rhs)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Arm {
    pub ctor: CtorName,
    pub binders: Vec<String>,
    pub tree: DecisionTree,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DecisionTree {
    Leaf(Expression),
    Switch { scrutinee: Expression, arms: Vec<Arm>, default: Box<DecisionTree> },
}

/// Source of binder names `<prefix><n>`. The `$` prefix cannot occur in
/// parsed programs.
#[derive(Clone, Debug)]
pub struct FreshSupply {
    pub counter: usize,
    pub prefix: String,
}

impl Default for FreshSupply {
    fn default() -> Self {
        FreshSupply { counter: 0, prefix: "$k".to_string() }
    }
}

impl FreshSupply {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn fresh(&mut self) -> String {
        let name = format!("{}{}", self.prefix, self.counter);
        self.counter += 1;
        name
    }

    pub fn take(&mut self, n: usize) -> Vec<String> {
        (0..n).map(|_| self.fresh()).collect()
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CompileError {
    #[error("input is not wellformed: {}", first_violation(.0))]
    NotWellformed(WfReport),
}

fn first_violation(r: &WfReport) -> String {
    r.violations.first().map(ToString::to_string).unwrap_or_default()
}

/// One column, one row per clause, patterns normalized.
pub fn embed_case(e: &CaseExpr) -> ClauseMatrix {
    ClauseMatrix {
        scrutinees: vec![e.scrutinee.clone()],
        rows: e.clauses.iter().map(|c| Row::new(vec![to_ndnf(&c.pattern)], c.rhs.clone())).collect(),
        default_rhs: e.default.clone(),
    }
}

/// Constructors tested by a column: positive heads and banned sets, sorted.
pub fn head_ctors<'a>(column: impl IntoIterator<Item = &'a Ndnf>) -> BTreeSet<CtorName> {
    let mut out = BTreeSet::new();
    for cell in column {
        for k in cell.conjuncts() {
            match k {
                NConjunct::Positive { ctor, .. } => {
                    out.insert(ctor.clone());
                }
                NConjunct::Negative { banned, .. } => out.extend(banned.iter().cloned()),
                NConjunct::Unsat { .. } => {}
            }
        }
    }
    out
}

fn bind_all(vars: &BTreeSet<String>, to: &Expression) -> BTreeMap<String, Expression> {
    vars.iter().map(|y| (y.clone(), to.clone())).collect()
}

fn without(cells: &[Ndnf], i: usize) -> Vec<Ndnf> {
    cells.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, c)| c.clone()).collect()
}

/// The subproblem assuming scrutinee `i` matched `ctor(binders)`. The new
/// scrutinees are the binders followed by the remaining old ones.
pub fn specialize(i: usize, ctor: &CtorName, binders: &[String], m: &ClauseMatrix) -> ClauseMatrix {
    assert_eq!(binders.len(), ctor.arity, "one binder per constructor argument");
    let vi = &m.scrutinees[i];
    let mut scrutinees: Vec<Expression> = binders.iter().map(|b| Expression::Var(b.clone())).collect();
    scrutinees.extend(m.scrutinees.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, s)| s.clone()));
    let mut rows = Vec::new();
    for row in &m.rows {
        let rest = without(&row.patterns, i);
        // A disjunction contributes one candidate row per conjunct.
        for k in row.patterns[i].conjuncts() {
            let head: Vec<Ndnf> = match k {
                NConjunct::Positive { ctor: c, args, .. } if c == ctor => {
                    args.iter().cloned().map(Ndnf::single).collect()
                }
                NConjunct::Negative { banned, .. } if !banned.contains(ctor) => vec![Ndnf::wildcard(); ctor.arity],
                _ => continue,
            };
            let mut patterns = head;
            patterns.extend(rest.iter().cloned());
            rows.push(Row { patterns, rhs: subst_expr(&row.rhs, &bind_all(k.vars(), vi)) });
        }
    }
    ClauseMatrix { scrutinees, rows, default_rhs: m.default_rhs.clone() }
}

/// The subproblem assuming scrutinee `i` matched none of `heads`. Only
/// negative conjuncts survive; their banned sets are within `heads` when
/// `heads` is the column's head set.
pub fn default_matrix(i: usize, heads: &BTreeSet<CtorName>, m: &ClauseMatrix) -> ClauseMatrix {
    let vi = &m.scrutinees[i];
    let mut rows = Vec::new();
    for row in &m.rows {
        let rest = without(&row.patterns, i);
        for k in row.patterns[i].conjuncts() {
            if let NConjunct::Negative { vars, banned } = k {
                debug_assert!(banned.is_subset(heads) || heads.is_empty());
                rows.push(Row { patterns: rest.clone(), rhs: subst_expr(&row.rhs, &bind_all(vars, vi)) });
            }
        }
    }
    ClauseMatrix { scrutinees: without_exprs(&m.scrutinees, i), rows, default_rhs: m.default_rhs.clone() }
}

fn without_exprs(es: &[Expression], i: usize) -> Vec<Expression> {
    es.iter().enumerate().filter(|&(j, _)| j != i).map(|(_, e)| e.clone()).collect()
}

/// Compiles a matrix after checking that it is wellformed.
pub fn compile(m: &ClauseMatrix, fresh: &mut FreshSupply) -> Result<DecisionTree, CompileError> {
    compile_with(m, fresh, None)
}

pub fn compile_with(
    m: &ClauseMatrix,
    fresh: &mut FreshSupply,
    decls: Option<&DataDecls>,
) -> Result<DecisionTree, CompileError> {
    let report = wf_matrix_with(m, decls);
    if !report.ok {
        return Err(CompileError::NotWellformed(report));
    }
    Ok(compile_unchecked(m, fresh))
}

/// Checks the case expression itself (rather than its embedding, which can
/// be rejected where the expression is accepted) and compiles its embedding.
pub fn compile_case(e: &CaseExpr, fresh: &mut FreshSupply) -> Result<DecisionTree, CompileError> {
    compile_case_with(e, fresh, None)
}

pub fn compile_case_with(
    e: &CaseExpr,
    fresh: &mut FreshSupply,
    decls: Option<&DataDecls>,
) -> Result<DecisionTree, CompileError> {
    let report = wf_expr_with(&Expression::Case(Box::new(e.clone())), decls);
    if !report.ok {
        return Err(CompileError::NotWellformed(report));
    }
    Ok(compile_unchecked(&embed_case(e), fresh))
}

/// Compiles without any wellformedness check. Total on rectangular input.
pub fn compile_unchecked(m: &ClauseMatrix, fresh: &mut FreshSupply) -> DecisionTree {
    let Some(first) = m.rows.first() else {
        return DecisionTree::Leaf(m.default_rhs.clone());
    };
    let bound: Option<Vec<&BTreeSet<String>>> = first.patterns.iter().map(Ndnf::as_variable_only).collect();
    if let Some(bound) = bound {
        let mut map = BTreeMap::new();
        for (vars, s) in bound.into_iter().zip(&m.scrutinees) {
            map.extend(bind_all(vars, s));
        }
        return DecisionTree::Leaf(subst_expr(&first.rhs, &map));
    }
    let width = m.width();
    let Some(i) = (0..width).find(|&i| !head_ctors(m.column(i)).is_empty()) else {
        // No column tests a constructor, yet the first row is not simple: one
        // of its cells is unsatisfiable or a disjunction of variable-only
        // conjuncts. Eliminating that column keeps every satisfiable row.
        let i = first.patterns.iter().position(|c| c.as_variable_only().is_none()).expect("non-simple cell");
        return compile_unchecked(&default_matrix(i, &BTreeSet::new(), m), fresh);
    };
    let heads = head_ctors(m.column(i));
    let arms = heads
        .iter()
        .map(|c| {
            let binders = fresh.take(c.arity);
            let sub = specialize(i, c, &binders, m);
            Arm { ctor: c.clone(), binders, tree: compile_unchecked(&sub, fresh) }
        })
        .collect();
    let default = compile_unchecked(&default_matrix(i, &heads, m), fresh);
    DecisionTree::Switch { scrutinee: m.scrutinees[i].clone(), arms, default: Box::new(default) }
}

/// Evaluates a closed expression to a value, if it has one.
fn value_of(e: &Expression, defs: &Defs, fuel: usize) -> Result<Value, EvalOutcome> {
    match e.as_value() {
        Some(v) => Ok(v),
        None => match eval_with(e, defs, fuel) {
            EvalOutcome::Value(v) => Ok(v),
            other => Err(other),
        },
    }
}

fn env_map(env: &BTreeMap<String, Value>) -> BTreeMap<String, Expression> {
    env.iter().map(|(x, v)| (x.clone(), Expression::from_value(v))).collect()
}

pub fn eval_tree(t: &DecisionTree, env: &crate::pattern::Substitution, fuel: usize) -> EvalOutcome {
    eval_tree_with(t, env, &Defs::new(), fuel)
}

/// Walks the tree under `env`, then evaluates the leaf. Scrutinees that are
/// not variables are evaluated where the switch examines them.
pub fn eval_tree_with(
    t: &DecisionTree,
    env: &crate::pattern::Substitution,
    defs: &Defs,
    fuel: usize,
) -> EvalOutcome {
    let mut bindings: BTreeMap<String, Value> = BTreeMap::new();
    for m in env.mappings() {
        bindings.entry(m.var.clone()).or_insert_with(|| m.value.clone());
    }
    let mut node = t;
    loop {
        match node {
            DecisionTree::Leaf(rhs) => return eval_with(&subst_expr(rhs, &env_map(&bindings)), defs, fuel),
            DecisionTree::Switch { scrutinee, arms, default } => {
                let s = subst_expr(scrutinee, &env_map(&bindings));
                let v = match value_of(&s, defs, fuel) {
                    Ok(v) => v,
                    Err(other) => return other,
                };
                match arms.iter().find(|a| a.ctor == v.ctor) {
                    Some(arm) => {
                        for (b, w) in arm.binders.iter().zip(&v.args) {
                            bindings.insert(b.clone(), w.clone());
                        }
                        node = &arm.tree;
                    }
                    None => node = default,
                }
            }
        }
    }
}

/// The multi-column single step: one successor per matching row and
/// combination of per-column substitutions; the default when no row matches.
/// `Stuck` unless every scrutinee is a value.
pub fn step_matrix(m: &ClauseMatrix) -> StepResult {
    let Some(values) = m.scrutinees.iter().map(Expression::as_value).collect::<Option<Vec<_>>>() else {
        return StepResult::Stuck;
    };
    let mut out: Vec<Expression> = Vec::new();
    for row in &m.rows {
        let mut sigmas = SubstSet::singleton(crate::pattern::Substitution::empty());
        for (cell, v) in row.patterns.iter().zip(&values) {
            sigmas = sigmas.product(&match_pos(&cell.to_pattern(), v));
            if sigmas.is_empty() {
                break;
            }
        }
        for s in sigmas.iter() {
            let mut map = BTreeMap::new();
            for mapping in s.mappings() {
                map.entry(mapping.var.clone()).or_insert_with(|| Expression::from_value(&mapping.value));
            }
            let next = subst_expr(&row.rhs, &map);
            if !out.contains(&next) {
                out.push(next);
            }
        }
    }
    if out.is_empty() {
        out.push(m.default_rhs.clone());
    }
    StepResult::Stepped(out)
}

/// One matrix step followed by ordinary evaluation.
pub fn eval_matrix(m: &ClauseMatrix, defs: &Defs, fuel: usize) -> EvalOutcome {
    match step_matrix(m) {
        StepResult::Stepped(mut next) if next.len() == 1 => eval_with(&next.pop().expect("one"), defs, fuel),
        StepResult::Stepped(next) => EvalOutcome::Nondeterministic(next),
        StepResult::Stuck | StepResult::IsValue => {
            EvalOutcome::Stuck(Expression::Case(Box::new(CaseExpr {
                scrutinee: m.scrutinees.first().cloned().unwrap_or_else(|| Expression::nullary("Unit")),
                clauses: Vec::new(),
                default: m.default_rhs.clone(),
            })))
        }
    }
}

/// Structural invariants of compiler output: distinct arm constructors,
/// one distinct binder per argument, and no scrutinee switched on twice along
/// a path.
pub fn check_tree(t: &DecisionTree) -> Result<(), String> {
    fn go(t: &DecisionTree, path: &mut Vec<Expression>) -> Result<(), String> {
        let DecisionTree::Switch { scrutinee, arms, default } = t else {
            return Ok(());
        };
        if path.contains(scrutinee) {
            return Err(format!("scrutinee `{scrutinee}` is examined twice on one path"));
        }
        let mut seen = BTreeSet::new();
        for arm in arms {
            if !seen.insert(&arm.ctor) {
                return Err(format!("constructor `{}` has two arms", arm.ctor));
            }
            if arm.binders.len() != arm.ctor.arity {
                return Err(format!("arm `{}` has {} binders", arm.ctor, arm.binders.len()));
            }
            let distinct: BTreeSet<&String> = arm.binders.iter().collect();
            if distinct.len() != arm.binders.len() {
                return Err(format!("arm `{}` repeats a binder", arm.ctor));
            }
        }
        path.push(scrutinee.clone());
        for arm in arms {
            go(&arm.tree, path)?;
        }
        go(default, path)?;
        path.pop();
        Ok(())
    }
    go(t, &mut Vec::new())
}

impl DecisionTree {
    pub fn size(&self) -> usize {
        match self {
            DecisionTree::Leaf(_) => 1,
            DecisionTree::Switch { arms, default, .. } => {
                1 + default.size() + arms.iter().map(|a| a.tree.size()).sum::<usize>()
            }
        }
    }

    fn write_indented(&self, f: &mut fmt::Formatter<'_>, indent: usize) -> fmt::Result {
        match self {
            DecisionTree::Leaf(e) => write!(f, "{e}"),
            DecisionTree::Switch { scrutinee, arms, default } => {
                let pad = "  ".repeat(indent + 1);
                writeln!(f, "switch {scrutinee} {{")?;
                for arm in arms {
                    write!(f, "{pad}{}", arm.ctor.name)?;
                    if !arm.binders.is_empty() {
                        write!(f, "({})", arm.binders.join(", "))?;
                    }
                    f.write_str(" => ")?;
                    arm.tree.write_indented(f, indent + 1)?;
                    writeln!(f)?;
                }
                write!(f, "{pad}default => ")?;
                default.write_indented(f, indent + 1)?;
                write!(f, "\n{}}}", "  ".repeat(indent))
            }
        }
    }

    /// Compact JSON with keys in the order `switch`, `arms`, `default` and
    /// `ctor`, `binders`, `tree`.
    pub fn to_json(&self) -> String {
        serde_json::to_string(&TreeJson::from(self)).expect("tree serializes")
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(&TreeJson::from(self)).expect("tree serializes")
    }
}

impl fmt::Display for DecisionTree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write_indented(f, 0)
    }
}

// Field order here is the field order of the JSON output.
#[derive(Serialize)]
#[serde(untagged)]
enum TreeJson {
    Switch { switch: String, arms: Vec<ArmJson>, default: Box<TreeJson> },
    Leaf { leaf: String },
}

#[derive(Serialize)]
struct ArmJson {
    ctor: String,
    binders: Vec<String>,
    tree: TreeJson,
}

impl From<&DecisionTree> for TreeJson {
    fn from(t: &DecisionTree) -> Self {
        match t {
            DecisionTree::Leaf(e) => TreeJson::Leaf { leaf: e.to_string() },
            DecisionTree::Switch { scrutinee, arms, default } => TreeJson::Switch {
                switch: scrutinee.to_string(),
                arms: arms
                    .iter()
                    .map(|a| ArmJson { ctor: a.ctor.name.clone(), binders: a.binders.clone(), tree: (&a.tree).into() })
                    .collect(),
                default: Box::new(default.as_ref().into()),
            },
        }
    }
}
