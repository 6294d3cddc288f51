//! Brute-force oracles and seeded generators behind the property suites.
//!
//! Every check compares an artifact against plain enumeration over a finite
//! universe of values. Generators are pure functions of their seed, and each
//! property case derives its own seed from the suite seed, the check name and
//! the attempt index, so a single failing case can be replayed alone.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::compiler::{
    check_tree, compile, compile_case, default_matrix, eval_matrix, eval_tree, eval_tree_with, head_ctors, specialize, Arm,
    ClauseMatrix, DecisionTree, FreshSupply, Row,
};
use crate::exhaustiveness::{exhaustive_typed, useful_witness, PatternMatrix};
use crate::normalize::{dnf, nnf, to_ndnf, Ndnf};
use crate::overlap::decide;
use crate::pattern::{
    derivations, equiv_counterexample, fv_even, fv_odd, match_neg, match_pos, subst_equiv, CtorName, Pattern,
    SubstSet, Substitution, Value,
};
use crate::semantics::{
    eval_with, expr_equiv_bounded, step, subst_expr, CaseExpr, Clause, Defs, EvalOutcome, Expression, StepResult,
    DEFAULT_FUEL,
};
use crate::typing::{same_context, type_pattern, DataDecls, Type};
use crate::wellformed::{deterministic, linear_neg, linear_pos, wf_expr, wf_matrix};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OracleError {
    #[error("universe depth must be at least 1")]
    ZeroDepth,
    #[error("unknown type `{0}`")]
    UnknownType(String),
    #[error("no pattern satisfied the constraints in {0} attempts")]
    Exhausted(usize),
    #[error("unknown suite `{0}`")]
    UnknownSuite(String),
    #[error("case expression is not wellformed: {0}")]
    NotWellformed(String),
}

// ---------------------------------------------------------------------------
// Value universes

/// All values of `tau` whose constructor tree has height at most `depth`,
/// constructors in declaration order and arguments in lexicographic order.
pub fn enumerate_values(decls: &DataDecls, tau: &Type, depth: usize) -> Result<Vec<Value>, OracleError> {
    if depth == 0 {
        return Err(OracleError::ZeroDepth);
    }
    Enumerator { decls, memo: HashMap::new() }.values(tau, depth)
}

struct Enumerator<'a> {
    decls: &'a DataDecls,
    memo: HashMap<(Type, usize), Vec<Value>>,
}

impl Enumerator<'_> {
    fn values(&mut self, tau: &Type, depth: usize) -> Result<Vec<Value>, OracleError> {
        let ctors = self.decls.ctors_of(tau).ok_or_else(|| OracleError::UnknownType(tau.to_string()))?;
        if depth == 0 {
            return Ok(Vec::new());
        }
        if let Some(vs) = self.memo.get(&(tau.clone(), depth)) {
            return Ok(vs.clone());
        }
        let mut out = Vec::new();
        for (c, arg_tys) in ctors {
            let mut tuples: Vec<Vec<Value>> = vec![Vec::new()];
            for t in &arg_tys {
                let choices = self.values(t, depth - 1)?;
                tuples = tuples
                    .iter()
                    .flat_map(|prefix| {
                        choices.iter().map(move |v| {
                            let mut next = prefix.clone();
                            next.push(v.clone());
                            next
                        })
                    })
                    .collect();
            }
            out.extend(tuples.into_iter().map(|args| Value { ctor: c.clone(), args }));
        }
        self.memo.insert((tau.clone(), depth), out.clone());
        Ok(out)
    }
}

/// The declarations the suites draw from: a finite enumeration, a small
/// one, a recursive list and a recursive tree.
pub fn universe() -> DataDecls {
    DataDecls::new()
        .with(
            "Day",
            &[
                ("Mo", vec![]),
                ("Tu", vec![]),
                ("We", vec![]),
                ("Th", vec![]),
                ("Fr", vec![]),
                ("Sa", vec![]),
                ("Su", vec![]),
            ],
        )
        .with("Color", &[("Red", vec![]), ("Green", vec![]), ("Blue", vec![])])
        .with("List", &[("Nil", vec![]), ("Cons", vec![Type::Bool, Type::named("List")])])
        .with("T", &[("A", vec![]), ("B", vec![Type::named("T")]), ("C", vec![Type::named("T"), Type::named("T")])])
}

/// Types of [`universe`] used as scrutinee types, builtin ones included.
pub fn universe_types() -> Vec<Type> {
    vec![
        Type::Bool,
        Type::named("Color"),
        Type::named("Day"),
        Type::named("List"),
        Type::named("T"),
        Type::pair(Type::Bool, Type::named("Color")),
        Type::sum(Type::Bool, Type::named("List")),
    ]
}

// ---------------------------------------------------------------------------
// Generators

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Constraints {
    pub require_linear: bool,
    pub require_det: bool,
}

impl Constraints {
    pub fn accepts(&self, p: &Pattern) -> bool {
        (!self.require_linear || linear_pos(p)) && (!self.require_det || deterministic(p))
    }
}

/// Rejection-sampling budget of [`gen_pattern`].
pub const MAX_ATTEMPTS: usize = 1000;

/// A random pattern over `tau` with at most `size` inner nodes.
pub fn gen_pattern(
    decls: &DataDecls,
    tau: &Type,
    size: usize,
    seed: u64,
    constraints: Constraints,
) -> Result<Pattern, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let gen = PatternGen::default();
    for _ in 0..MAX_ATTEMPTS {
        let p = gen.pattern(decls, &mut rng, tau, size)?;
        if constraints.accepts(&p) {
            return Ok(p);
        }
    }
    Err(OracleError::Exhausted(MAX_ATTEMPTS))
}

/// Typed random patterns over a fixed pool of variable names.
#[derive(Clone, Debug)]
pub struct PatternGen {
    pub vars: Vec<String>,
}

impl Default for PatternGen {
    fn default() -> Self {
        PatternGen::with_vars(&["x", "y", "z"])
    }
}

impl PatternGen {
    pub fn with_vars(vars: &[&str]) -> Self {
        PatternGen { vars: vars.iter().map(|v| v.to_string()).collect() }
    }

    /// Size 0 yields `_` or a nullary constructor; larger sizes spend one
    /// unit on the root and distribute the rest over its children.
    pub fn pattern(&self, decls: &DataDecls, rng: &mut impl Rng, tau: &Type, size: usize) -> Result<Pattern, OracleError> {
        let ctors = decls.ctors_of(tau).ok_or_else(|| OracleError::UnknownType(tau.to_string()))?;
        if size == 0 {
            let nullary: Vec<&CtorName> = ctors.iter().filter(|(_, a)| a.is_empty()).map(|(c, _)| c).collect();
            return Ok(match nullary.choose(rng) {
                Some(c) if rng.gen_bool(0.6) => Pattern::Ctor((*c).clone(), Vec::new()),
                _ => Pattern::Wildcard,
            });
        }
        let rest = size - 1;
        Ok(match rng.gen_range(0..14) {
            0 | 1 => Pattern::Var(self.vars.choose(rng).expect("variable pool").clone()),
            2 => Pattern::Wildcard,
            3 => Pattern::Absurd,
            4 | 5 => Pattern::neg(self.pattern(decls, rng, tau, rest)?),
            6..=9 => {
                let left = rng.gen_range(0..=rest);
                let a = self.pattern(decls, rng, tau, left)?;
                let b = self.pattern(decls, rng, tau, rest - left)?;
                if rng.gen_bool(0.5) {
                    Pattern::and(a, b)
                } else {
                    Pattern::or(a, b)
                }
            }
            _ => {
                let (c, arg_tys) = ctors.choose(rng).expect("types have constructors");
                let args = self.args(decls, rng, arg_tys, rest)?;
                Pattern::Ctor(c.clone(), args)
            }
        })
    }

    /// One pattern per argument type, sharing `size` units between them.
    pub fn args(&self, decls: &DataDecls, rng: &mut impl Rng, tys: &[Type], size: usize) -> Result<Vec<Pattern>, OracleError> {
        let mut sizes = vec![0; tys.len()];
        if !tys.is_empty() {
            for _ in 0..size {
                sizes[rng.gen_range(0..tys.len())] += 1;
            }
        }
        tys.iter().zip(sizes).map(|(t, s)| self.pattern(decls, rng, t, s)).collect()
    }
}

/// Name of the scrutinee variable of generated case expressions.
pub const SCRUTINEE: &str = "s";

/// A random wellformed case on the variable [`SCRUTINEE`]. Clause `i` has
/// right-hand side `R<i>(bound variables)`, the default is `D(s)`. Later
/// clauses are often guarded by the negation of earlier ones, erased of
/// variables, which keeps them disjoint.
pub fn gen_case(decls: &DataDecls, tau: &Type, size: usize, seed: u64) -> Result<CaseExpr, OracleError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    gen_case_with(decls, &mut rng, tau, size)
}

fn gen_case_with(decls: &DataDecls, rng: &mut impl Rng, tau: &Type, size: usize) -> Result<CaseExpr, OracleError> {
    let gen = PatternGen::default();
    let wanted = rng.gen_range(1..=4);
    let mut case = CaseExpr {
        scrutinee: Expression::var(SCRUTINEE),
        clauses: Vec::new(),
        default: Expression::ctor("D", vec![Expression::var(SCRUTINEE)]),
    };
    for _ in 0..wanted {
        for _ in 0..12 {
            let n = rng.gen_range(0..=size);
            let p = gen.pattern(decls, rng, tau, n)?;
            if !(linear_pos(&p) && deterministic(&p)) {
                continue;
            }
            let earlier: Vec<Pattern> = case.clauses.iter().map(|c| c.pattern.erase_vars()).collect();
            let p = if !earlier.is_empty() && rng.gen_bool(0.6) {
                Pattern::and(p, Pattern::neg(Pattern::any_of(earlier)))
            } else {
                p
            };
            let i = case.clauses.len();
            let rhs = Expression::ctor(format!("R{i}"), fv_even(&p).into_iter().map(Expression::var).collect());
            case.clauses.push(Clause::new(p, rhs));
            if wf_expr(&Expression::Case(Box::new(case.clone()))).ok {
                break;
            }
            case.clauses.pop();
        }
    }
    Ok(case)
}

/// `e` with its scrutinee variable bound to `v`.
pub fn instantiate(e: &CaseExpr, v: &Value) -> Expression {
    let whole = Expression::Case(Box::new(e.clone()));
    match &e.scrutinee {
        Expression::Var(x) => subst_expr(&whole, &BTreeMap::from([(x.clone(), Expression::from_value(v))])),
        _ => whole,
    }
}

// ---------------------------------------------------------------------------
// Differential compilation

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DiffOutcome {
    Agree { checked: usize },
    /// The first scrutinee value on which the interpreter and the tree part
    /// ways; `expected` is the interpreter's outcome.
    Disagree { witness: Value, expected: EvalOutcome, actual: EvalOutcome },
}

impl DiffOutcome {
    pub fn agrees(&self) -> bool {
        matches!(self, DiffOutcome::Agree { .. })
    }
}

impl fmt::Display for DiffOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiffOutcome::Agree { checked } => write!(f, "agree on {checked} values"),
            DiffOutcome::Disagree { witness, expected, actual } => {
                write!(f, "disagree on {witness}: interpreter gives {expected}, tree gives {actual}")
            }
        }
    }
}

/// Compiles `e` and compares the tree with the interpreter on every value of
/// `tau` up to `depth`.
pub fn differential_compile_check(
    e: &CaseExpr,
    decls: &DataDecls,
    tau: &Type,
    depth: usize,
) -> Result<DiffOutcome, OracleError> {
    differential_compile_check_with(e, &Defs::new(), decls, tau, depth)
}

/// As [`differential_compile_check`] with top-level definitions in scope,
/// so right-hand sides may call them.
pub fn differential_compile_check_with(
    e: &CaseExpr,
    defs: &Defs,
    decls: &DataDecls,
    tau: &Type,
    depth: usize,
) -> Result<DiffOutcome, OracleError> {
    let tree = compile_case(e, &mut FreshSupply::new()).map_err(|err| OracleError::NotWellformed(err.to_string()))?;
    differential_tree_check_with(e, &tree, defs, decls, tau, depth)
}

/// As [`differential_compile_check`] against a given tree. Interpreter
/// outcomes other than a value count as disagreement.
pub fn differential_tree_check(
    e: &CaseExpr,
    tree: &DecisionTree,
    decls: &DataDecls,
    tau: &Type,
    depth: usize,
) -> Result<DiffOutcome, OracleError> {
    differential_tree_check_with(e, tree, &Defs::new(), decls, tau, depth)
}

pub fn differential_tree_check_with(
    e: &CaseExpr,
    tree: &DecisionTree,
    defs: &Defs,
    decls: &DataDecls,
    tau: &Type,
    depth: usize,
) -> Result<DiffOutcome, OracleError> {
    let values = enumerate_values(decls, tau, depth)?;
    for v in &values {
        let env = match &e.scrutinee {
            Expression::Var(x) => Substitution::single(x.clone(), v.clone()),
            _ => Substitution::empty(),
        };
        let expected = eval_with(&instantiate(e, v), defs, DEFAULT_FUEL);
        let actual = eval_tree_with(tree, &env, defs, DEFAULT_FUEL);
        if !matches!(expected, EvalOutcome::Value(_)) || expected != actual {
            return Ok(DiffOutcome::Disagree { witness: v.clone(), expected, actual });
        }
    }
    Ok(DiffOutcome::Agree { checked: values.len() })
}

/// A deliberately wrong variant of `t`: two arms of equal arity with
/// different subtrees swap constructors, or else an arm trades its subtree
/// with the default. `None` when every subtree is a copy of its siblings.
pub fn corrupt_tree(t: &DecisionTree) -> Option<DecisionTree> {
    let DecisionTree::Switch { scrutinee, arms, default } = t else {
        return None;
    };
    for i in 0..arms.len() {
        for j in i + 1..arms.len() {
            if arms[i].ctor.arity == arms[j].ctor.arity && arms[i].tree != arms[j].tree {
                let mut arms = arms.clone();
                let ci = arms[i].ctor.clone();
                arms[i].ctor = arms[j].ctor.clone();
                arms[j].ctor = ci;
                return Some(DecisionTree::Switch { scrutinee: scrutinee.clone(), arms, default: default.clone() });
            }
        }
    }
    if let Some(i) = arms.iter().position(|a| a.tree != **default) {
        let mut arms = arms.clone();
        let moved = std::mem::replace(&mut arms[i].tree, (**default).clone());
        return Some(DecisionTree::Switch { scrutinee: scrutinee.clone(), arms, default: Box::new(moved) });
    }
    for (i, arm) in arms.iter().enumerate() {
        if let Some(tree) = corrupt_tree(&arm.tree) {
            let mut arms = arms.clone();
            arms[i] = Arm { tree, ..arm.clone() };
            return Some(DecisionTree::Switch { scrutinee: scrutinee.clone(), arms, default: default.clone() });
        }
    }
    corrupt_tree(default).map(|d| DecisionTree::Switch {
        scrutinee: scrutinee.clone(),
        arms: arms.clone(),
        default: Box::new(d),
    })
}

// ---------------------------------------------------------------------------
// Property suites

pub const SUITES: [&str; 7] = ["algebra", "linearity", "semantics", "normalize", "compile", "overlap", "exhaustive"];

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SuiteConfig {
    pub seed: u64,
    pub depth: usize,
    /// Instances per check. The overlap checks run two and a half times as
    /// many pairs.
    pub cases: usize,
}

impl Default for SuiteConfig {
    fn default() -> Self {
        SuiteConfig { seed: 0x5eed, depth: 3, cases: 200 }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CheckReport {
    pub name: String,
    pub required: usize,
    /// Instances that met the check's preconditions.
    pub checked: usize,
    pub failed: usize,
    /// The first few counterexamples.
    pub examples: Vec<String>,
}

impl CheckReport {
    pub fn passed(&self) -> bool {
        self.failed == 0 && self.checked >= self.required
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.passed() {
            return write!(f, "ok    {} ({} cases)", self.name, self.checked);
        }
        write!(f, "FAIL  {} ({} of {} cases failed", self.name, self.failed, self.checked)?;
        if self.checked < self.required {
            write!(f, ", only {} of {} instances generated", self.checked, self.required)?;
        }
        f.write_str(")")?;
        for e in &self.examples {
            write!(f, "\n        {e}")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SuiteReport {
    pub suite: String,
    pub checks: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(CheckReport::passed)
    }

    pub fn check(&self, name: &str) -> Option<&CheckReport> {
        self.checks.iter().find(|c| c.name == name)
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "suite {}", self.suite)?;
        for c in &self.checks {
            write!(f, "\n  {c}")?;
        }
        Ok(())
    }
}

/// The suites selected by a name, `all` selecting every suite.
pub fn suites_named(name: &str) -> Result<Vec<&'static str>, OracleError> {
    if name == "all" {
        return Ok(SUITES.to_vec());
    }
    SUITES.iter().find(|s| **s == name).map(|s| vec![*s]).ok_or_else(|| OracleError::UnknownSuite(name.into()))
}

pub fn run_suite(name: &str, cfg: &SuiteConfig) -> Result<SuiteReport, OracleError> {
    let lab = Lab::new(*cfg)?;
    let checks = match name {
        "algebra" => lab.algebra()?,
        "linearity" => lab.linearity()?,
        "semantics" => lab.semantics()?,
        "normalize" => lab.normalize()?,
        "compile" => lab.compile()?,
        "overlap" => lab.overlap()?,
        "exhaustive" => lab.exhaustive()?,
        other => return Err(OracleError::UnknownSuite(other.into())),
    };
    Ok(SuiteReport { suite: name.to_string(), checks })
}

enum Verdict {
    Pass,
    Fail(String),
    /// The instance misses the check's precondition and is not counted.
    Skip,
}

/// Largest pattern size drawn for law operands.
const OPERAND_SIZE: usize = 4;

fn splitmix(mut x: u64) -> u64 {
    x = x.wrapping_add(0x9e37_79b9_7f4a_7c15);
    x = (x ^ (x >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    x = (x ^ (x >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    x ^ (x >> 31)
}

fn name_hash(name: &str) -> u64 {
    name.bytes().fold(0xcbf2_9ce4_8422_2325, |h, b| (h ^ u64::from(b)).wrapping_mul(0x0100_0000_01b3))
}

fn linear_both(p: &Pattern) -> bool {
    linear_pos(p) && linear_neg(p)
}

fn compare(lhs: &Pattern, rhs: &Pattern, values: &[Value], linear: bool) -> Verdict {
    if linear && !(linear_both(lhs) && linear_both(rhs)) {
        return Verdict::Skip;
    }
    match equiv_counterexample(lhs, rhs, values) {
        None => Verdict::Pass,
        Some(v) => Verdict::Fail(format!("`{lhs}` and `{rhs}` differ on {v}")),
    }
}

fn sorted(r: StepResult) -> StepResult {
    match r {
        StepResult::Stepped(mut es) => {
            es.sort();
            StepResult::Stepped(es)
        }
        other => other,
    }
}

fn pairwise_equiv(set: &SubstSet) -> bool {
    let all: Vec<&Substitution> = set.iter().collect();
    all.iter().all(|a| all.iter().all(|b| subst_equiv(a, b)))
}

/// Cartesian product of per-column universes.
fn vectors(columns: &[Vec<Value>]) -> Vec<Vec<Value>> {
    columns.iter().fold(vec![Vec::new()], |acc, col| {
        acc.iter()
            .flat_map(|prefix| {
                col.iter().map(move |v| {
                    let mut next = prefix.clone();
                    next.push(v.clone());
                    next
                })
            })
            .collect()
    })
}

type Law = fn(&[Pattern]) -> (Pattern, Pattern);

struct Lab {
    cfg: SuiteConfig,
    decls: DataDecls,
    gen: PatternGen,
    universes: Vec<(Type, Vec<Value>)>,
}

impl Lab {
    fn new(cfg: SuiteConfig) -> Result<Self, OracleError> {
        let decls = universe();
        let universes = universe_types()
            .into_iter()
            .map(|t| enumerate_values(&decls, &t, cfg.depth).map(|vs| (t, vs)))
            .collect::<Result<_, _>>()?;
        Ok(Lab { cfg, decls, gen: PatternGen::default(), universes })
    }

    fn check(
        &self,
        name: &str,
        required: usize,
        mut case: impl FnMut(&mut ChaCha8Rng) -> Result<Verdict, OracleError>,
    ) -> Result<CheckReport, OracleError> {
        let mut report =
            CheckReport { name: name.to_string(), required, checked: 0, failed: 0, examples: Vec::new() };
        let base = self.cfg.seed ^ name_hash(name);
        let budget = required.max(1) * 200;
        let mut attempt = 0u64;
        while report.checked < required && (attempt as usize) < budget {
            let mut rng = ChaCha8Rng::seed_from_u64(splitmix(base ^ splitmix(attempt)));
            attempt += 1;
            match case(&mut rng)? {
                Verdict::Skip => {}
                Verdict::Pass => report.checked += 1,
                Verdict::Fail(msg) => {
                    report.checked += 1;
                    report.failed += 1;
                    if report.examples.len() < 3 {
                        report.examples.push(format!("attempt {}: {msg}", attempt - 1));
                    }
                }
            }
        }
        Ok(report)
    }

    fn pick(&self, rng: &mut ChaCha8Rng, accept: impl Fn(&[(CtorName, Vec<Type>)]) -> bool) -> (&Type, &[Value]) {
        let fitting: Vec<&(Type, Vec<Value>)> = self
            .universes
            .iter()
            .filter(|(t, _)| accept(&self.decls.ctors_of(t).expect("universe type")))
            .collect();
        let (t, vs) = fitting.choose(rng).expect("some universe type fits");
        (t, vs)
    }

    fn any_type(&self, rng: &mut ChaCha8Rng) -> (&Type, &[Value]) {
        self.pick(rng, |_| true)
    }

    fn pattern(&self, rng: &mut ChaCha8Rng, tau: &Type) -> Result<Pattern, OracleError> {
        let size = rng.gen_range(0..=OPERAND_SIZE);
        self.gen.pattern(&self.decls, rng, tau, size)
    }

    /// A constructor of `tau` with at least `min_arity` arguments.
    fn ctor_of(&self, rng: &mut ChaCha8Rng, tau: &Type, min_arity: usize) -> (CtorName, Vec<Type>) {
        let ctors: Vec<_> = self.decls.ctors_of(tau).expect("universe type").into_iter().filter(|(c, _)| c.arity >= min_arity).collect();
        ctors.choose(rng).expect("constructor of sufficient arity").clone()
    }

    fn args(&self, rng: &mut ChaCha8Rng, tys: &[Type]) -> Result<Vec<Pattern>, OracleError> {
        let size = rng.gen_range(0..=OPERAND_SIZE);
        self.gen.args(&self.decls, rng, tys, size)
    }

    fn law(&self, name: &str, operands: usize, linear: bool, law: Law) -> Result<CheckReport, OracleError> {
        self.check(name, self.cfg.cases, |rng| {
            let (tau, values) = self.any_type(rng);
            let ps = (0..operands).map(|_| self.pattern(rng, tau)).collect::<Result<Vec<_>, _>>()?;
            let (lhs, rhs) = law(&ps);
            Ok(compare(&lhs, &rhs, values, linear))
        })
    }

    // -- algebra ------------------------------------------------------------

    fn algebra(&self) -> Result<Vec<CheckReport>, OracleError> {
        use Pattern as P;
        let n = self.cfg.cases;
        let mut out = vec![
            self.check("matching is sound", n, |rng| {
                let (tau, values) = self.any_type(rng);
                let p = self.pattern(rng, tau)?;
                Ok(match values.iter().find(|v| !derivations(&p, v, true).is_empty() && !derivations(&p, v, false).is_empty()) {
                    Some(v) => Verdict::Fail(format!("`{p}` both matches and fails on {v}")),
                    None => Verdict::Pass,
                })
            })?,
            self.check("matching is complete", n, |rng| {
                let (tau, values) = self.any_type(rng);
                let p = self.pattern(rng, tau)?;
                Ok(match values.iter().find(|v| derivations(&p, v, true).is_empty() && derivations(&p, v, false).is_empty()) {
                    Some(v) => Verdict::Fail(format!("`{p}` neither matches nor fails on {v}")),
                    None => Verdict::Pass,
                })
            })?,
            self.congruence()?,
        ];
        let unrestricted: [(&str, usize, Law); 11] = [
            ("& is commutative", 2, |p| (P::and(p[0].clone(), p[1].clone()), P::and(p[1].clone(), p[0].clone()))),
            ("| is commutative", 2, |p| (P::or(p[0].clone(), p[1].clone()), P::or(p[1].clone(), p[0].clone()))),
            ("& is associative", 3, |p| {
                let l = P::and(p[0].clone(), P::and(p[1].clone(), p[2].clone()));
                (l, P::and(P::and(p[0].clone(), p[1].clone()), p[2].clone()))
            }),
            ("| is associative", 3, |p| {
                let l = P::or(p[0].clone(), P::or(p[1].clone(), p[2].clone()));
                (l, P::or(P::or(p[0].clone(), p[1].clone()), p[2].clone()))
            }),
            ("_ is neutral for &", 1, |p| (P::and(p[0].clone(), P::Wildcard), p[0].clone())),
            ("# is neutral for |", 1, |p| (P::or(p[0].clone(), P::Absurd), p[0].clone())),
            ("!_ is #", 0, |_| (P::neg(P::Wildcard), P::Absurd)),
            ("!# is _", 0, |_| (P::neg(P::Absurd), P::Wildcard)),
            ("De Morgan for |", 2, |p| {
                (P::neg(P::or(p[0].clone(), p[1].clone())), P::and(P::neg(p[0].clone()), P::neg(p[1].clone())))
            }),
            ("De Morgan for &", 2, |p| {
                (P::neg(P::and(p[0].clone(), p[1].clone())), P::or(P::neg(p[0].clone()), P::neg(p[1].clone())))
            }),
            ("double negation", 1, |p| (P::neg(P::neg(p[0].clone())), p[0].clone())),
        ];
        for (name, k, law) in unrestricted {
            out.push(self.law(name, k, false, law)?);
        }
        out.push(self.check("constructor conjunction merges arguments", n, |rng| {
            let (tau, values) = self.pick(rng, |cs| cs.iter().any(|(c, _)| c.arity > 0));
            let (c, tys) = self.ctor_of(rng, tau, 1);
            let (ps, qs) = (self.args(rng, &tys)?, self.args(rng, &tys)?);
            let lhs = P::and(P::Ctor(c.clone(), ps.clone()), P::Ctor(c.clone(), qs.clone()));
            let rhs = P::Ctor(c, ps.into_iter().zip(qs).map(|(p, q)| P::and(p, q)).collect());
            Ok(compare(&lhs, &rhs, values, false))
        })?);
        for linear in [false, true] {
            let name = if linear {
                "disjunction leaves a constructor argument (linear inputs)"
            } else {
                "disjunction leaves a constructor argument"
            };
            out.push(self.check(name, n, |rng| {
                let (tau, values) = self.pick(rng, |cs| cs.iter().any(|(c, _)| c.arity > 0));
                let (c, tys) = self.ctor_of(rng, tau, 1);
                let ps = self.args(rng, &tys)?;
                let i = rng.gen_range(0..tys.len());
                let alt = self.pattern(rng, &tys[i])?;
                let mut left = ps.clone();
                left[i] = P::or(ps[i].clone(), alt.clone());
                let mut second = ps.clone();
                second[i] = alt;
                let lhs = P::Ctor(c.clone(), left);
                let rhs = P::or(P::Ctor(c.clone(), ps), P::Ctor(c, second));
                Ok(compare(&lhs, &rhs, values, linear))
            })?);
        }
        let linear: [(&str, usize, Law); 6] = [
            ("& distributes over |", 3, |p| {
                let l = P::and(p[0].clone(), P::or(p[1].clone(), p[2].clone()));
                (l, P::or(P::and(p[0].clone(), p[1].clone()), P::and(p[0].clone(), p[2].clone())))
            }),
            ("| distributes over &", 3, |p| {
                let l = P::or(p[0].clone(), P::and(p[1].clone(), p[2].clone()));
                (l, P::and(P::or(p[0].clone(), p[1].clone()), P::or(p[0].clone(), p[2].clone())))
            }),
            ("& is idempotent", 1, |p| (P::and(p[0].clone(), p[0].clone()), p[0].clone())),
            ("| is idempotent", 1, |p| (P::or(p[0].clone(), p[0].clone()), p[0].clone())),
            ("# absorbs &", 1, |p| (P::and(p[0].clone(), P::Absurd), P::Absurd)),
            ("_ absorbs |", 1, |p| (P::or(p[0].clone(), P::Wildcard), P::Wildcard)),
        ];
        for (name, k, law) in linear {
            out.push(self.law(name, k, true, law)?);
        }
        out.push(self.check("an absurd argument makes a constructor absurd", n, |rng| {
            let (tau, values) = self.pick(rng, |cs| cs.iter().any(|(c, _)| c.arity > 0));
            let (c, tys) = self.ctor_of(rng, tau, 1);
            let mut ps = self.args(rng, &tys)?;
            let i = rng.gen_range(0..tys.len());
            ps[i] = P::Absurd;
            Ok(compare(&P::Ctor(c, ps), &P::Absurd, values, true))
        })?);
        out.push(self.check("different constructors clash", n, |rng| {
            let (tau, values) = self.pick(rng, |cs| cs.len() > 1);
            let (c, d, ps, qs) = self.two_ctors(rng, tau)?;
            Ok(compare(&P::and(P::Ctor(c, ps), P::Ctor(d, qs)), &P::Absurd, values, true))
        })?);
        out.push(self.check("a constructor excludes a negated other", n, |rng| {
            let (tau, values) = self.pick(rng, |cs| cs.len() > 1);
            let (c, d, ps, qs) = self.two_ctors(rng, tau)?;
            let lhs = P::and(P::Ctor(c.clone(), ps.clone()), P::neg(P::Ctor(d, qs)));
            Ok(compare(&lhs, &P::Ctor(c, ps), values, true))
        })?);
        out.push(self.check("negated constructor expands", n, |rng| {
            let (tau, values) = self.any_type(rng);
            let (c, tys) = self.ctor_of(rng, tau, 0);
            let ps = self.args(rng, &tys)?;
            let lhs = P::neg(P::Ctor(c.clone(), ps.clone()));
            let mut alts = vec![P::neg(P::Ctor(c.clone(), vec![P::Wildcard; c.arity]))];
            for (i, p) in ps.iter().enumerate() {
                let mut args = vec![P::Wildcard; c.arity];
                args[i] = P::neg(p.clone());
                alts.push(P::Ctor(c.clone(), args));
            }
            Ok(compare(&lhs, &P::any_of(alts), values, true))
        })?);
        Ok(out)
    }

    fn two_ctors(
        &self,
        rng: &mut ChaCha8Rng,
        tau: &Type,
    ) -> Result<(CtorName, CtorName, Vec<Pattern>, Vec<Pattern>), OracleError> {
        let ctors = self.decls.ctors_of(tau).expect("universe type");
        let mut picked: Vec<&(CtorName, Vec<Type>)> = ctors.choose_multiple(rng, 2).collect();
        let (d, dt) = picked.pop().expect("two constructors").clone();
        let (c, ct) = picked.pop().expect("two constructors").clone();
        Ok((c, d, self.args(rng, &ct)?, self.args(rng, &dt)?))
    }

    /// Rewrites `p` by a law that holds without side conditions.
    fn equivalent_variant(rng: &mut ChaCha8Rng, p: &Pattern) -> Pattern {
        match rng.gen_range(0..4) {
            0 => Pattern::neg(Pattern::neg(p.clone())),
            1 => Pattern::and(p.clone(), Pattern::Wildcard),
            2 => Pattern::or(Pattern::Absurd, p.clone()),
            _ => match p {
                Pattern::And(a, b) => Pattern::and((**b).clone(), (**a).clone()),
                Pattern::Or(a, b) => Pattern::or((**b).clone(), (**a).clone()),
                other => Pattern::neg(Pattern::neg(other.clone())),
            },
        }
    }

    fn congruence(&self) -> Result<CheckReport, OracleError> {
        self.check("equivalence is a congruence", self.cfg.cases, |rng| {
            let (tau, values) = self.any_type(rng);
            let p = self.pattern(rng, tau)?;
            let p2 = Self::equivalent_variant(rng, &p);
            if equiv_counterexample(&p, &p2, values).is_some() {
                return Ok(Verdict::Skip);
            }
            let q = self.pattern(rng, tau)?;
            let (ctx_p, ctx_p2, universe): (Pattern, Pattern, Vec<Value>) = match rng.gen_range(0..4) {
                0 => (Pattern::neg(p.clone()), Pattern::neg(p2.clone()), values.to_vec()),
                1 => (Pattern::and(p.clone(), q.clone()), Pattern::and(p2.clone(), q), values.to_vec()),
                2 => (Pattern::or(q.clone(), p.clone()), Pattern::or(q, p2.clone()), values.to_vec()),
                _ => {
                    let pair = Type::pair(tau.clone(), Type::Bool);
                    let other = self.pattern(rng, &Type::Bool)?;
                    let wide = enumerate_values(&self.decls, &pair, self.cfg.depth + 1)?;
                    (
                        Pattern::ctor("Pair", vec![p.clone(), other.clone()]),
                        Pattern::ctor("Pair", vec![p2.clone(), other]),
                        wide,
                    )
                }
            };
            Ok(compare(&ctx_p, &ctx_p2, &universe, false))
        })
    }

    // -- linearity ----------------------------------------------------------

    fn linearity(&self) -> Result<Vec<CheckReport>, OracleError> {
        let n = self.cfg.cases;
        let mut out = Vec::new();
        for positive in [true, false] {
            let side = if positive { "positive" } else { "negative" };
            let linear = move |p: &Pattern| if positive { linear_pos(p) } else { linear_neg(p) };
            out.push(self.check(&format!("linear patterns cover their variables ({side})"), n, |rng| {
                let (tau, values) = self.any_type(rng);
                let p = self.pattern(rng, tau)?;
                if !linear(&p) {
                    return Ok(Verdict::Skip);
                }
                let expected = if positive { fv_even(&p) } else { fv_odd(&p) };
                for v in values {
                    let set = if positive { match_pos(&p, v) } else { match_neg(&p, v) };
                    let wrong = set.iter().find(|s| s.domain() != expected).map(ToString::to_string);
                    if let Some(s) = wrong {
                        return Ok(Verdict::Fail(format!("`{p}` on {v} binds {s}")));
                    }
                }
                Ok(Verdict::Pass)
            })?);
            out.push(self.check(&format!("linear patterns bind each variable once ({side})"), n, |rng| {
                let (tau, values) = self.any_type(rng);
                let p = self.pattern(rng, tau)?;
                if !linear(&p) {
                    return Ok(Verdict::Skip);
                }
                for v in values {
                    let set = if positive { match_pos(&p, v) } else { match_neg(&p, v) };
                    let wrong = set.iter().find(|s| !s.is_proper()).map(ToString::to_string);
                    if let Some(s) = wrong {
                        return Ok(Verdict::Fail(format!("`{p}` on {v} yields improper {s}")));
                    }
                }
                Ok(Verdict::Pass)
            })?);
            out.push(self.check(&format!("deterministic patterns match uniquely ({side})"), n, |rng| {
                let (tau, values) = self.any_type(rng);
                let p = self.pattern(rng, tau)?;
                if !(linear(&p) && deterministic(&p)) {
                    return Ok(Verdict::Skip);
                }
                for v in values {
                    let set = if positive { match_pos(&p, v) } else { match_neg(&p, v) };
                    if !pairwise_equiv(&set) {
                        return Ok(Verdict::Fail(format!("`{p}` on {v} yields {set}")));
                    }
                }
                Ok(Verdict::Pass)
            })?);
        }
        out.push(self.check("De Morgan rewriting preserves linearity", n, |rng| {
            let (tau, _) = self.any_type(rng);
            let (p, q) = (self.pattern(rng, tau)?, self.pattern(rng, tau)?);
            let neg = |x: &Pattern| Pattern::neg(x.clone());
            let pairs = [
                (neg(&Pattern::or(p.clone(), q.clone())), Pattern::and(neg(&p), neg(&q))),
                (neg(&Pattern::and(p.clone(), q.clone())), Pattern::or(neg(&p), neg(&q))),
                (neg(&neg(&p)), p.clone()),
            ];
            for (before, after) in &pairs {
                if linear_pos(before) && !linear_pos(after) {
                    return Ok(Verdict::Fail(format!("`{before}` is positively linear, `{after}` is not")));
                }
                if linear_neg(before) && !linear_neg(after) {
                    return Ok(Verdict::Fail(format!("`{before}` is negatively linear, `{after}` is not")));
                }
            }
            Ok(Verdict::Pass)
        })?);
        Ok(out)
    }

    // -- semantics ----------------------------------------------------------

    fn case(&self, rng: &mut ChaCha8Rng) -> Result<(&Type, &[Value], CaseExpr), OracleError> {
        let (tau, values) = self.any_type(rng);
        let case = gen_case_with(&self.decls, rng, tau, OPERAND_SIZE)?;
        Ok((tau, values, case))
    }

    fn semantics(&self) -> Result<Vec<CheckReport>, OracleError> {
        let n = self.cfg.cases;
        let mut out = Vec::new();
        out.push(self.check("wellformed evaluation is deterministic", n, |rng| {
            let (_, values, case) = self.case(rng)?;
            for v in values {
                let mut e = instantiate(&case, v);
                loop {
                    match step(&e) {
                        StepResult::IsValue => break,
                        StepResult::Stuck => return Ok(Verdict::Fail(format!("`{e}` is stuck"))),
                        StepResult::Stepped(next) if next.len() == 1 => e = next.into_iter().next().expect("one"),
                        StepResult::Stepped(next) => {
                            return Ok(Verdict::Fail(format!("`{e}` steps to {} expressions", next.len())))
                        }
                    }
                }
            }
            Ok(Verdict::Pass)
        })?);
        out.push(self.check("permuting clauses keeps the meaning", n, |rng| {
            let (_, values, case) = self.case(rng)?;
            let mut permuted = case.clone();
            permuted.clauses.shuffle(rng);
            for v in values {
                let (a, b) = (instantiate(&case, v), instantiate(&permuted, v));
                if !expr_equiv_bounded(&a, &b, DEFAULT_FUEL) {
                    return Ok(Verdict::Fail(format!("`{a}` and `{b}` differ")));
                }
            }
            Ok(Verdict::Pass)
        })?);
        out.push(self.check("default differs from a wildcard clause", n, |rng| {
            let (_, values, case) = self.case(rng)?;
            let Some(v) = values.iter().find(|v| case.clauses.iter().any(|c| !match_pos(&c.pattern, v).is_empty()))
            else {
                return Ok(Verdict::Skip);
            };
            let mut wild = case.clone();
            wild.clauses.push(Clause::new(Pattern::Wildcard, case.default.clone()));
            if wf_expr(&Expression::Case(Box::new(wild.clone()))).ok {
                return Ok(Verdict::Fail(format!("`{}` is accepted", Expression::Case(Box::new(wild)))));
            }
            let e = instantiate(&wild, v);
            Ok(match step(&e) {
                StepResult::Stepped(next) if next.len() > 1 => Verdict::Pass,
                other => Verdict::Fail(format!("`{e}` steps to {other:?}")),
            })
        })?);
        out.push(self.check("equivalent clause patterns keep the meaning", n, |rng| {
            let (_, values, case) = self.case(rng)?;
            if case.clauses.is_empty() {
                return Ok(Verdict::Skip);
            }
            let i = rng.gen_range(0..case.clauses.len());
            let mut other = case.clone();
            other.clauses[i].pattern = Self::equivalent_variant(rng, &case.clauses[i].pattern);
            for v in values {
                let (a, b) = (instantiate(&case, v), instantiate(&other, v));
                if !expr_equiv_bounded(&a, &b, DEFAULT_FUEL) {
                    return Ok(Verdict::Fail(format!("`{a}` and `{b}` differ")));
                }
            }
            Ok(Verdict::Pass)
        })?);
        Ok(out)
    }

    // -- normalize ----------------------------------------------------------

    fn normalize(&self) -> Result<Vec<CheckReport>, OracleError> {
        let n = self.cfg.cases;
        let mut out = Vec::new();
        out.push(self.check("negation normal form keeps free variables", n, |rng| {
            let (tau, _) = self.any_type(rng);
            let p = self.pattern(rng, tau)?;
            let q = nnf(&p).to_pattern();
            Ok(if fv_even(&p) == fv_even(&q) && fv_odd(&p) == fv_odd(&q) {
                Verdict::Pass
            } else {
                Verdict::Fail(format!("`{p}` became `{q}`"))
            })
        })?);
        out.push(self.check("negation normal form keeps linearity", n, |rng| {
            let (tau, _) = self.any_type(rng);
            let p = self.pattern(rng, tau)?;
            if !linear_pos(&p) {
                return Ok(Verdict::Skip);
            }
            let q = nnf(&p).to_pattern();
            Ok(if linear_pos(&q) { Verdict::Pass } else { Verdict::Fail(format!("`{p}` became `{q}`")) })
        })?);
        out.push(self.check("negation normal form keeps typing", n, |rng| {
            let (tau, _) = self.any_type(rng);
            let p = self.pattern(rng, tau)?;
            let Ok((g, d)) = type_pattern(&p, tau, &self.decls) else {
                return Ok(Verdict::Skip);
            };
            let q = nnf(&p).to_pattern();
            Ok(match type_pattern(&q, tau, &self.decls) {
                Ok((g2, d2)) if same_context(&g, &g2) && same_context(&d, &d2) => Verdict::Pass,
                other => Verdict::Fail(format!("`{p}` types, its form `{q}` gives {other:?}")),
            })
        })?);
        out.push(self.check("De Morgan rewriting keeps typing", n, |rng| {
            let (tau, _) = self.any_type(rng);
            let (p, q) = (self.pattern(rng, tau)?, self.pattern(rng, tau)?);
            let neg = |x: &Pattern| Pattern::neg(x.clone());
            let pairs = [
                (neg(&Pattern::or(p.clone(), q.clone())), Pattern::and(neg(&p), neg(&q))),
                (neg(&Pattern::and(p.clone(), q.clone())), Pattern::or(neg(&p), neg(&q))),
                (neg(&neg(&p)), p.clone()),
            ];
            for (a, b) in &pairs {
                let (ta, tb) = (type_pattern(a, tau, &self.decls), type_pattern(b, tau, &self.decls));
                let agree = match (&ta, &tb) {
                    (Ok((g1, d1)), Ok((g2, d2))) => same_context(g1, g2) && same_context(d1, d2),
                    (Err(_), Err(_)) => true,
                    _ => false,
                };
                if !agree {
                    return Ok(Verdict::Fail(format!("`{a}` gives {ta:?}, `{b}` gives {tb:?}")));
                }
            }
            Ok(Verdict::Pass)
        })?);
        out.push(self.check("normal forms keep the meaning of linear patterns", n, |rng| {
            let (tau, values) = self.any_type(rng);
            let p = self.pattern(rng, tau)?;
            // Negated variables normalize to `#`, which drops their bindings.
            if !linear_both(&p) || !fv_odd(&p).is_empty() {
                return Ok(Verdict::Skip);
            }
            let n = nnf(&p);
            let stages = [
                ("nnf", n.to_pattern()),
                ("dnf", Pattern::any_of(dnf(&n).iter().map(|k| k.to_pattern()))),
                ("ndnf", to_ndnf(&p).to_pattern()),
            ];
            for (stage, q) in stages {
                if let Some(v) = equiv_counterexample(&p, &q, values) {
                    return Ok(Verdict::Fail(format!("{stage} of `{p}` is `{q}`, differing on {v}")));
                }
            }
            Ok(Verdict::Pass)
        })?);
        Ok(out)
    }

    // -- compile ------------------------------------------------------------

    /// A random wellformed two-column matrix on scrutinees `s0`, `s1`.
    fn matrix(&self, rng: &mut ChaCha8Rng) -> Result<(ClauseMatrix, Vec<Vec<Value>>), OracleError> {
        let (t0, u0) = self.any_type(rng);
        let (t1, u1) = self.any_type(rng);
        let types = [t0.clone(), t1.clone()];
        let gens = [PatternGen::with_vars(&["x0", "y0"]), PatternGen::with_vars(&["x1", "y1"])];
        let scrutinees = vec![Expression::var("s0"), Expression::var("s1")];
        let default = Expression::ctor("D", scrutinees.clone());
        let mut m = ClauseMatrix::new(scrutinees, Vec::new(), default);
        for i in 0..rng.gen_range(1..=3) {
            for _ in 0..10 {
                let mut cells = Vec::new();
                let mut bound = BTreeSet::new();
                for (g, t) in gens.iter().zip(&types) {
                    let size = rng.gen_range(0..=3);
                    let p = g.pattern(&self.decls, rng, t, size)?;
                    bound.extend(fv_even(&p));
                    cells.push(p);
                }
                if !cells.iter().all(|p| linear_pos(p) && deterministic(p)) {
                    continue;
                }
                let rhs = Expression::ctor(format!("R{i}"), bound.into_iter().map(Expression::var).collect());
                m.rows.push(Row::new(cells.iter().map(to_ndnf).collect(), rhs));
                if wf_matrix(&m).ok {
                    break;
                }
                m.rows.pop();
            }
        }
        Ok((m, vec![u0.to_vec(), u1.to_vec()]))
    }

    fn bind(m: &ClauseMatrix, vector: &[Value]) -> (ClauseMatrix, Substitution) {
        let pairs: Vec<(String, Value)> =
            vector.iter().enumerate().map(|(j, v)| (format!("s{j}"), v.clone())).collect();
        let map = pairs.iter().map(|(x, v)| (x.clone(), Expression::from_value(v))).collect();
        (m.subst(&map), Substitution::from_pairs(pairs))
    }

    fn compile(&self) -> Result<Vec<CheckReport>, OracleError> {
        let n = self.cfg.cases;
        let depth = self.cfg.depth;
        let mut out = Vec::new();
        out.push(self.check("compiled cases agree with the interpreter", n, |rng| {
            let (tau, _, case) = self.case(rng)?;
            Ok(match differential_compile_check(&case, &self.decls, tau, depth)? {
                DiffOutcome::Agree { .. } => Verdict::Pass,
                d => Verdict::Fail(format!("{}: {d}", Expression::Case(Box::new(case)))),
            })
        })?);
        out.push(self.check("compiled matrices agree with matrix evaluation", n, |rng| {
            let (m, columns) = self.matrix(rng)?;
            let tree = compile(&m, &mut FreshSupply::new()).map_err(|e| OracleError::NotWellformed(e.to_string()))?;
            for vector in vectors(&columns) {
                let (bound, env) = Self::bind(&m, &vector);
                let expected = eval_matrix(&bound, &Defs::new(), DEFAULT_FUEL);
                let actual = eval_tree(&tree, &env, DEFAULT_FUEL);
                if !matches!(expected, EvalOutcome::Value(_)) || expected != actual {
                    return Ok(Verdict::Fail(format!("{m}\non {env}: matrix gives {expected}, tree gives {actual}")));
                }
            }
            Ok(Verdict::Pass)
        })?);
        out.push(self.check("compiled trees are well shaped", n, |rng| {
            let (m, _) = self.matrix(rng)?;
            let tree = compile(&m, &mut FreshSupply::new()).map_err(|e| OracleError::NotWellformed(e.to_string()))?;
            Ok(match check_tree(&tree) {
                Ok(()) => Verdict::Pass,
                Err(e) => Verdict::Fail(format!("{m}\n{e}")),
            })
        })?);
        out.push(self.check("specialization and default preserve steps", n, |rng| {
            let (m, columns) = self.matrix(rng)?;
            let vector: Vec<Value> = columns.iter().map(|c| c.choose(rng).expect("nonempty universe").clone()).collect();
            let (bound, _) = Self::bind(&m, &vector);
            let i = rng.gen_range(0..m.width());
            let v = &vector[i];
            let heads = head_ctors(bound.column(i));
            let reduced = if heads.contains(&v.ctor) {
                let binders = FreshSupply::new().take(v.ctor.arity);
                let map = binders.iter().cloned().zip(v.args.iter().map(Expression::from_value)).collect();
                specialize(i, &v.ctor, &binders, &bound).subst(&map)
            } else {
                default_matrix(i, &heads, &bound)
            };
            let (a, b) = (sorted(crate::compiler::step_matrix(&bound)), sorted(crate::compiler::step_matrix(&reduced)));
            Ok(if a == b { Verdict::Pass } else { Verdict::Fail(format!("{bound}\nsteps to {a:?}, reduced to {b:?}")) })
        })?);
        out.push(self.check("specialization and default preserve wellformedness", n, |rng| {
            let (m, _) = self.matrix(rng)?;
            // A cell such as `True | _` has overlapping variable-free
            // disjuncts; specializing it can leave two overlapping rows.
            let cells_disjoint = m.rows.iter().flat_map(|r| &r.patterns).all(|cell| {
                let ks = cell.conjuncts();
                (0..ks.len()).all(|a| {
                    (a + 1..ks.len()).all(|b| {
                        !decide(&Ndnf::single(ks[a].clone()), &Ndnf::single(ks[b].clone()), None).unwrap_or(true)
                    })
                })
            });
            if !cells_disjoint {
                return Ok(Verdict::Skip);
            }
            for i in 0..m.width() {
                let heads = head_ctors(m.column(i));
                let mut fresh = FreshSupply::new();
                for c in &heads {
                    let s = specialize(i, c, &fresh.take(c.arity), &m);
                    if !wf_matrix(&s).ok {
                        return Ok(Verdict::Fail(format!("{m}\nspecialized at {c} in column {i}:\n{s}")));
                    }
                }
                let d = default_matrix(i, &heads, &m);
                if !wf_matrix(&d).ok {
                    return Ok(Verdict::Fail(format!("{m}\ndefault of column {i}:\n{d}")));
                }
            }
            Ok(Verdict::Pass)
        })?);
        out.push(self.check("a corrupted tree is caught", n, |rng| {
            let (tau, _, case) = self.case(rng)?;
            let tree = compile_case(&case, &mut FreshSupply::new()).map_err(|e| OracleError::NotWellformed(e.to_string()))?;
            let Some(bad) = corrupt_tree(&tree) else {
                return Ok(Verdict::Skip);
            };
            // A swap between arms unreachable at this depth goes unnoticed.
            let intact = differential_tree_check(&case, &tree, &self.decls, tau, depth)?;
            let broken = differential_tree_check(&case, &bad, &self.decls, tau, depth)?;
            Ok(match (intact.agrees(), broken.agrees()) {
                (true, false) => Verdict::Pass,
                (true, true) => Verdict::Skip,
                (false, _) => Verdict::Fail(format!("the intact tree disagrees: {intact}")),
            })
        })?);
        Ok(out)
    }

    // -- overlap ------------------------------------------------------------

    fn overlap(&self) -> Result<Vec<CheckReport>, OracleError> {
        let pairs = self.cfg.cases * 5 / 2;
        let mut out = Vec::new();
        for typed in [false, true] {
            let name = if typed { "type-aware overlap is sound" } else { "overlap is sound" };
            out.push(self.check(name, pairs, |rng| {
                let (tau, values) = self.any_type(rng);
                let (p, q) = (self.pattern(rng, tau)?, self.pattern(rng, tau)?);
                let decls = typed.then_some(&self.decls);
                // Signature errors make the decision conservative.
                let overlap = decide(&to_ndnf(&p), &to_ndnf(&q), decls).unwrap_or(true);
                if overlap {
                    return Ok(Verdict::Pass);
                }
                Ok(match values.iter().find(|v| !match_pos(&p, v).is_empty() && !match_pos(&q, v).is_empty()) {
                    Some(v) => Verdict::Fail(format!("`{p}` and `{q}` reported disjoint, both match {v}")),
                    None => Verdict::Pass,
                })
            })?);
        }
        out.push(self.check("overlap is symmetric", pairs, |rng| {
            let (tau, _) = self.any_type(rng);
            let (p, q) = (to_ndnf(&self.pattern(rng, tau)?), to_ndnf(&self.pattern(rng, tau)?));
            Ok(if decide(&p, &q, None) == decide(&q, &p, None) {
                Verdict::Pass
            } else {
                Verdict::Fail(format!("`{p}` against `{q}` is asymmetric"))
            })
        })?);
        Ok(out)
    }

    // -- exhaustive ---------------------------------------------------------

    fn exhaustive(&self) -> Result<Vec<CheckReport>, OracleError> {
        let n = self.cfg.cases;
        let depth = self.cfg.depth;
        let mut out = Vec::new();
        out.push(self.check("exhaustiveness agrees with enumeration", n, |rng| {
            let (p, types) = self.pattern_matrix(rng)?;
            let mut columns = Vec::new();
            let mut exact = true;
            for t in &types {
                let vs = enumerate_values(&self.decls, t, depth)?;
                exact &= enumerate_values(&self.decls, t, depth + 1)?.len() == vs.len();
                columns.push(vs);
            }
            let missed = vectors(&columns).into_iter().find(|vector| !covers(&p, vector));
            let claim = match exhaustive_typed(&p, &types, &self.decls) {
                Ok(b) => b,
                Err(e) => return Ok(Verdict::Fail(format!("{p}\nerror: {e}"))),
            };
            Ok(match (claim, missed) {
                (true, Some(v)) => Verdict::Fail(format!("{p}\nreported exhaustive, misses {}", show(&v))),
                (false, None) if exact => Verdict::Fail(format!("{p}\nreported non-exhaustive, covers every value")),
                _ => Verdict::Pass,
            })
        })?);
        out.push(self.check("non-exhaustiveness witnesses are uncovered", n, |rng| {
            let (p, types) = self.pattern_matrix(rng)?;
            let witness = match useful_witness(&p, &vec![Ndnf::wildcard(); p.width], Some(&types), &self.decls) {
                Ok(Some(w)) => w,
                Ok(None) => return Ok(Verdict::Skip),
                Err(e) => return Ok(Verdict::Fail(format!("{p}\nerror: {e}"))),
            };
            let Some(values) = witness.iter().map(|s| s.concretize(&self.decls)).collect::<Option<Vec<_>>>() else {
                let items: Vec<String> = witness.iter().map(ToString::to_string).collect();
                return Ok(Verdict::Fail(format!("{p}\nwitness ({}) has no value", items.join(", "))));
            };
            Ok(if covers(&p, &values) {
                Verdict::Fail(format!("{p}\nwitness {} is covered", show(&values)))
            } else {
                Verdict::Pass
            })
        })?);
        Ok(out)
    }

    fn pattern_matrix(&self, rng: &mut ChaCha8Rng) -> Result<(PatternMatrix, Vec<Type>), OracleError> {
        let width = rng.gen_range(1..=2);
        let types: Vec<Type> = (0..width).map(|_| self.any_type(rng).0.clone()).collect();
        let mut rows = Vec::new();
        for _ in 0..rng.gen_range(0..=4) {
            let row = types.iter().map(|t| self.pattern(rng, t).map(|p| to_ndnf(&p))).collect::<Result<Vec<_>, _>>()?;
            rows.push(row);
        }
        Ok((PatternMatrix::new(width, rows), types))
    }
}

fn covers(p: &PatternMatrix, vector: &[Value]) -> bool {
    p.rows.iter().any(|row| row.iter().zip(vector).all(|(cell, v)| !match_pos(&cell.to_pattern(), v).is_empty()))
}

fn show(values: &[Value]) -> String {
    let items: Vec<String> = values.iter().map(ToString::to_string).collect();
    format!("({})", items.join(", "))
}
