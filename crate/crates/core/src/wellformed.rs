//! Linearity, determinism and wellformedness checks.
//!
//! Every check has a boolean form and a form that reports violations with the
//! name of the rule that failed and the path from the pattern root to the
//! offending node (child indices: constructor argument position, `0`/`1` for
//! the sides of `&` and `|`, `0` under `!`).

use std::collections::BTreeSet;
use std::fmt;

use crate::compiler::ClauseMatrix;
use crate::normalize::{to_ndnf, Ndnf};
use crate::overlap::OverlapChecker;
use crate::pattern::{fv_even, fv_odd, Pattern};
use crate::semantics::{CaseExpr, Expression};
use crate::typing::DataDecls;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Violation {
    pub rule: &'static str,
    /// Path inside the offending pattern; empty for clause-level violations.
    pub path: Vec<usize>,
    pub message: String,
    /// Pre-order index of the case expression, when checking expressions.
    pub case_index: Option<usize>,
    /// Clause (or row) indices involved.
    pub clauses: Vec<usize>,
}

impl Violation {
    fn at(rule: &'static str, path: &[usize], message: String) -> Self {
        Violation { rule, path: path.to_vec(), message, case_index: None, clauses: Vec::new() }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}] {}", self.rule, self.message)?;
        if !self.path.is_empty() {
            let path: Vec<String> = self.path.iter().map(ToString::to_string).collect();
            write!(f, " (at pattern path {})", path.join("."))?;
        }
        Ok(())
    }
}

/// `ok` holds exactly when `violations` is empty.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct WfReport {
    pub ok: bool,
    pub violations: Vec<Violation>,
}

impl WfReport {
    pub fn from_violations(violations: Vec<Violation>) -> Self {
        WfReport { ok: violations.is_empty(), violations }
    }
}

fn show(vars: &BTreeSet<String>) -> String {
    let items: Vec<&str> = vars.iter().map(String::as_str).collect();
    format!("{{{}}}", items.join(", "))
}

pub fn linear_pos(p: &Pattern) -> bool {
    linearity_violations(p, true).is_empty()
}

pub fn linear_neg(p: &Pattern) -> bool {
    linearity_violations(p, false).is_empty()
}

/// Violations of the positive (`positive = true`) or negative linearity
/// judgment.
pub fn linearity_violations(p: &Pattern, positive: bool) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    linearity(p, positive, &mut path, &mut out);
    out
}

fn linearity(p: &Pattern, positive: bool, path: &mut Vec<usize>, out: &mut Vec<Violation>) {
    let sign = if positive { '+' } else { '-' };
    match p {
        Pattern::Var(_) | Pattern::Wildcard | Pattern::Absurd => {}
        Pattern::Neg(q) => {
            path.push(0);
            linearity(q, !positive, path, out);
            path.pop();
        }
        Pattern::Or(a, b) | Pattern::And(a, b) => {
            let is_or = matches!(p, Pattern::Or(..));
            path.push(0);
            linearity(a, positive, path, out);
            path.pop();
            path.push(1);
            linearity(b, positive, path, out);
            path.pop();
            let (fa, fb) = if positive { (fv_even(a), fv_even(b)) } else { (fv_odd(a), fv_odd(b)) };
            // Positive `|` and negative `&` need equal sets; the other two
            // need disjoint sets.
            let need_equal = is_or == positive;
            let op = if is_or { "|" } else { "&" };
            let rule = match (is_or, positive) {
                (true, true) => "L-Or+",
                (true, false) => "L-Or-",
                (false, true) => "L-And+",
                (false, false) => "L-And-",
            };
            if need_equal && fa != fb {
                out.push(Violation::at(
                    rule,
                    path,
                    format!("sides of `{op}` bind different variables ({sign}): {} vs {}", show(&fa), show(&fb)),
                ));
            } else if !need_equal && !fa.is_disjoint(&fb) {
                let shared: BTreeSet<String> = fa.intersection(&fb).cloned().collect();
                out.push(Violation::at(
                    rule,
                    path,
                    format!("both sides of `{op}` bind {} ({sign})", show(&shared)),
                ));
            }
        }
        Pattern::Ctor(c, args) => {
            for (i, a) in args.iter().enumerate() {
                path.push(i);
                linearity(a, positive, path, out);
                path.pop();
            }
            if positive {
                let mut seen = BTreeSet::new();
                let mut repeated = BTreeSet::new();
                for a in args {
                    for x in fv_even(a) {
                        if !seen.insert(x.clone()) {
                            repeated.insert(x);
                        }
                    }
                }
                if !repeated.is_empty() {
                    out.push(Violation::at(
                        "L-Ctor+",
                        path,
                        format!("arguments of `{}` bind {} more than once", c.name, show(&repeated)),
                    ));
                }
            } else {
                let odd: BTreeSet<String> = args.iter().flat_map(fv_odd).collect();
                if !odd.is_empty() {
                    out.push(Violation::at(
                        "L-Ctor-",
                        path,
                        format!("negated constructor `{}` has arguments binding {}", c.name, show(&odd)),
                    ));
                }
            }
        }
    }
}

pub fn deterministic(p: &Pattern) -> bool {
    determinism_violations(p, &OverlapChecker::new(None)).is_empty()
}

/// Like [`deterministic`], with type-aware disjointness when `decls` is
/// given.
pub fn deterministic_with(p: &Pattern, decls: Option<&DataDecls>) -> bool {
    determinism_violations(p, &OverlapChecker::new(decls.cloned())).is_empty()
}

pub fn determinism_violations(p: &Pattern, checker: &OverlapChecker) -> Vec<Violation> {
    let mut out = Vec::new();
    let mut path = Vec::new();
    determinism(p, checker, &mut path, &mut out);
    out
}

// A signature error in type-aware mode means disjointness cannot be
// established, which is reported as overlap.
fn patterns_disjoint(checker: &OverlapChecker, p: &Pattern, q: &Pattern) -> bool {
    checker.disjoint(p, q).unwrap_or(false)
}

fn cells_disjoint(checker: &OverlapChecker, a: &Ndnf, b: &Ndnf) -> bool {
    checker.decide(a, b).map(|overlap| !overlap).unwrap_or(false)
}

fn determinism(p: &Pattern, checker: &OverlapChecker, path: &mut Vec<usize>, out: &mut Vec<Violation>) {
    match p {
        Pattern::Var(_) | Pattern::Wildcard | Pattern::Absurd => {}
        Pattern::Neg(q) => {
            path.push(0);
            determinism(q, checker, path, out);
            path.pop();
        }
        Pattern::Ctor(_, args) => {
            for (i, a) in args.iter().enumerate() {
                path.push(i);
                determinism(a, checker, path, out);
                path.pop();
            }
        }
        Pattern::Or(a, b) => {
            path.push(0);
            determinism(a, checker, path, out);
            path.pop();
            path.push(1);
            determinism(b, checker, path, out);
            path.pop();
            let variable_free = fv_even(a).is_empty() && fv_even(b).is_empty();
            if !variable_free && !patterns_disjoint(checker, a, b) {
                out.push(Violation::at(
                    "D-Or",
                    path,
                    format!("sides of `{p}` may overlap and bind variables"),
                ));
            }
        }
        Pattern::And(a, b) => {
            path.push(0);
            determinism(a, checker, path, out);
            path.pop();
            path.push(1);
            determinism(b, checker, path, out);
            path.pop();
            let variable_free = fv_odd(a).is_empty() && fv_odd(b).is_empty();
            let negations_disjoint =
                || patterns_disjoint(checker, &Pattern::neg((**a).clone()), &Pattern::neg((**b).clone()));
            if !variable_free && !negations_disjoint() {
                out.push(Violation::at(
                    "D-And",
                    path,
                    format!("negations of the sides of `{p}` may overlap and bind variables"),
                ));
            }
        }
    }
}

/// Per-pattern conditions of a clause or matrix cell.
fn pattern_violations(p: &Pattern, checker: &OverlapChecker) -> Vec<Violation> {
    let mut out = determinism_violations(p, checker);
    out.extend(linearity_violations(p, true));
    out
}

pub fn wf_expr(e: &Expression) -> WfReport {
    wf_expr_with(e, None)
}

pub fn wf_expr_with(e: &Expression, decls: Option<&DataDecls>) -> WfReport {
    let checker = OverlapChecker::new(decls.cloned());
    let mut out = Vec::new();
    for (index, case) in e.cases().into_iter().enumerate() {
        for mut v in case_violations(case, &checker) {
            v.case_index = Some(index);
            out.push(v);
        }
    }
    WfReport::from_violations(out)
}

/// Violations of a single case expression, not descending into its
/// subexpressions.
pub fn case_violations(case: &CaseExpr, checker: &OverlapChecker) -> Vec<Violation> {
    let mut out = Vec::new();
    let normal: Vec<Ndnf> = case.clauses.iter().map(|c| to_ndnf(&c.pattern)).collect();
    for (i, clause) in case.clauses.iter().enumerate() {
        for mut v in pattern_violations(&clause.pattern, checker) {
            v.clauses = vec![i];
            out.push(v);
        }
        for j in 0..i {
            if !cells_disjoint(checker, &normal[j], &normal[i]) {
                let mut v = Violation::at(
                    "Wf-Case",
                    &[],
                    format!(
                        "clauses {} (`{}`) and {} (`{}`) may overlap",
                        j + 1,
                        case.clauses[j].pattern,
                        i + 1,
                        clause.pattern
                    ),
                );
                v.clauses = vec![j, i];
                out.push(v);
            }
        }
    }
    out
}

pub fn wf_matrix(m: &ClauseMatrix) -> WfReport {
    wf_matrix_with(m, None)
}

pub fn wf_matrix_with(m: &ClauseMatrix, decls: Option<&DataDecls>) -> WfReport {
    let checker = OverlapChecker::new(decls.cloned());
    let mut out = Vec::new();
    let width = m.scrutinees.len();
    for (j, row) in m.rows.iter().enumerate() {
        if row.patterns.len() != width {
            let mut v = Violation::at(
                "Wf-MC",
                &[],
                format!("row {} has {} cells for {} scrutinees", j + 1, row.patterns.len(), width),
            );
            v.clauses = vec![j];
            out.push(v);
            continue;
        }
        let mut bound: Vec<BTreeSet<String>> = Vec::new();
        for (i, cell) in row.patterns.iter().enumerate() {
            let p = cell.to_pattern();
            for mut v in pattern_violations(&p, &checker) {
                v.message = format!("row {}, column {}: {}", j + 1, i + 1, v.message);
                v.clauses = vec![j];
                out.push(v);
            }
            let fv = fv_even(&p);
            for (k, other) in bound.iter().enumerate() {
                if !fv.is_disjoint(other) {
                    let shared: BTreeSet<String> = fv.intersection(other).cloned().collect();
                    let mut v = Violation::at(
                        "Wf-MC",
                        &[],
                        format!("row {}: columns {} and {} both bind {}", j + 1, k + 1, i + 1, show(&shared)),
                    );
                    v.clauses = vec![j];
                    out.push(v);
                }
            }
            bound.push(fv);
        }
        for (k, earlier) in m.rows[..j].iter().enumerate() {
            if earlier.patterns.len() != width {
                continue;
            }
            let separated = (0..width).any(|i| cells_disjoint(&checker, &earlier.patterns[i], &row.patterns[i]));
            if !separated {
                let mut v = Violation::at(
                    "Wf-MC",
                    &[],
                    format!("rows {} and {} may overlap in every column", k + 1, j + 1),
                );
                v.clauses = vec![k, j];
                out.push(v);
            }
        }
    }
    for (j, row) in m.rows.iter().enumerate() {
        for mut v in wf_expr_with(&row.rhs, decls).violations {
            v.clauses = vec![j];
            out.push(v);
        }
    }
    out.extend(wf_expr_with(&m.default_rhs, decls).violations);
    for s in &m.scrutinees {
        out.extend(wf_expr_with(s, decls).violations);
    }
    WfReport::from_violations(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::semantics::Clause;

    fn x() -> Pattern {
        Pattern::var("x")
    }

    fn c(name: &str) -> Pattern {
        Pattern::nullary(name)
    }

    #[test]
    fn linearity_examples() {
        assert!(!linear_pos(&Pattern::ctor("Cons", vec![x(), x()])));
        assert!(!linear_pos(&Pattern::or(Pattern::and(x(), c("True")), c("False"))));
        assert!(linear_pos(&Pattern::and(x(), Pattern::or(c("Sa"), c("Su")))));
        assert!(linear_pos(&Pattern::Wildcard));
        assert!(linear_pos(&Pattern::neg(Pattern::neg(x()))));
        // Negation flips the roles of `&` and `|`.
        assert!(linear_pos(&Pattern::neg(Pattern::or(x(), x()))));
        assert!(linear_pos(&Pattern::neg(Pattern::and(x(), c("A")))));
        assert!(!linear_pos(&Pattern::neg(Pattern::and(Pattern::neg(x()), c("A")))));
    }

    #[test]
    fn constructor_linearity() {
        // Pairwise, not just a common intersection.
        let p = Pattern::ctor("T", vec![x(), x(), Pattern::var("y")]);
        assert!(!linear_pos(&p));
        assert!(!linear_neg(&Pattern::ctor("C", vec![Pattern::neg(x())])));
        assert!(linear_neg(&Pattern::ctor("C", vec![x()])));
    }

    #[test]
    fn violations_carry_rule_and_path() {
        let p = Pattern::and(c("A"), Pattern::ctor("Cons", vec![x(), x()]));
        let v = linearity_violations(&p, true);
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].rule, "L-Ctor+");
        assert_eq!(v[0].path, vec![1]);
    }

    #[test]
    fn determinism_examples() {
        let p = Pattern::or(
            Pattern::ctor("Pair", vec![x(), Pattern::Wildcard]),
            Pattern::ctor("Pair", vec![Pattern::Wildcard, x()]),
        );
        assert!(!deterministic(&p));
        assert!(deterministic(&Pattern::or(c("Red"), Pattern::neg(c("Red")))));
        assert!(deterministic(&x()));
        assert!(deterministic(&Pattern::or(Pattern::and(x(), c("Sa")), Pattern::and(x(), c("Su")))));
        // Variable-free disjunctions may overlap.
        assert!(deterministic(&Pattern::or(c("True"), Pattern::Wildcard)));
    }

    #[test]
    fn conjunction_determinism() {
        let p = Pattern::and(Pattern::neg(x()), Pattern::neg(Pattern::var("y")));
        assert!(!deterministic(&p));
        // The doubly negated sides x & A and x & B are disjoint.
        let q = Pattern::and(Pattern::neg(Pattern::and(x(), c("A"))), Pattern::neg(Pattern::and(x(), c("B"))));
        assert!(deterministic(&q));
        assert!(deterministic(&Pattern::and(x(), c("A"))));
    }

    #[test]
    fn case_wellformedness() {
        let t = Expression::nullary("True");
        let f = Expression::nullary("False");
        let is_red = Expression::case(
            Expression::var("c"),
            vec![Clause::new(c("Red"), t.clone()), Clause::new(Pattern::neg(c("Red")), f.clone())],
            f.clone(),
        );
        assert!(wf_expr(&is_red).ok);
        let overlapping = Expression::case(
            Expression::var("c"),
            vec![Clause::new(c("Red"), t.clone()), Clause::new(Pattern::Wildcard, f.clone())],
            f.clone(),
        );
        let report = wf_expr(&overlapping);
        assert!(!report.ok);
        assert_eq!(report.violations[0].rule, "Wf-Case");
        assert_eq!(report.violations[0].clauses, vec![0, 1]);
        assert!(wf_expr(&Expression::ctor("Pair", vec![t.clone(), is_red.clone()])).ok);
        let nested = Expression::ctor("Wrap", vec![is_red, overlapping]);
        assert_eq!(wf_expr(&nested).violations[0].case_index, Some(1));
    }

    #[test]
    fn type_aware_mode_accepts_covering_negations() {
        let decls = DataDecls::new().with("AB", &[("A", vec![]), ("B", vec![])]);
        let not_a = Pattern::neg(Pattern::and(x(), Pattern::neg(c("A"))));
        let not_b = Pattern::neg(Pattern::and(x(), Pattern::neg(c("B"))));
        let p = Pattern::and(not_a, not_b);
        assert!(!deterministic(&p));
        assert!(deterministic_with(&p, Some(&decls)));
        let e = Expression::case(
            Expression::var("v"),
            vec![
                Clause::new(Pattern::neg(c("A")), Expression::nullary("True")),
                Clause::new(Pattern::neg(c("B")), Expression::nullary("False")),
            ],
            Expression::nullary("False"),
        );
        assert!(!wf_expr(&e).ok);
        assert!(wf_expr_with(&e, Some(&decls)).ok);
    }
}
