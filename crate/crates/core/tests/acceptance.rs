//! Acceptance criteria, one line each. Exits nonzero when any criterion
//! fails; the detail after the verdict says why.

use std::collections::BTreeSet;
use std::process::ExitCode;

use patalg::compiler::{
    compile, compile_case, default_matrix, embed_case, head_ctors, specialize, Arm, ClauseMatrix, DecisionTree,
    FreshSupply, Row,
};
use patalg::exhaustiveness::{exhaustive, uncovered, PatternMatrix};
use patalg::normalize::{dnf, format_dnf, nnf, to_ndnf, NConjunct, Ndnf};
use patalg::oracle::{
    corrupt_tree, differential_compile_check_with, differential_tree_check, enumerate_values, run_suite, DiffOutcome,
    SuiteConfig,
};
use patalg::pattern::{match_neg, match_pos, CtorName, Pattern, SubstSet, Substitution, Value};
use patalg::semantics::{CaseExpr, Clause, Expression};
use patalg::syntax::parse;
use patalg::typing::{scrutinee_type, DataDecls, Type};
use patalg::wellformed::linear_pos;

const PROGRAMS: [(&str, &str); 5] = [
    ("access.pat", include_str!("../../../programs/access.pat")),
    ("isred.pat", include_str!("../../../programs/isred.pat")),
    ("isweekend.pat", include_str!("../../../programs/isweekend.pat")),
    ("lists.pat", include_str!("../../../programs/lists.pat")),
    ("weekend.pat", include_str!("../../../programs/weekend.pat")),
];

/// Collects failed expectations; a criterion passes when none were recorded.
#[derive(Default)]
struct Report {
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Report {
    fn expect(&mut self, ok: bool, what: impl Into<String>) {
        if !ok {
            self.failures.push(what.into());
        }
    }

    fn note(&mut self, what: impl Into<String>) {
        self.notes.push(what.into());
    }
}

fn c(name: &str) -> Pattern {
    Pattern::nullary(name)
}

fn v(name: &str) -> Value {
    Value::nullary(name)
}

fn one(s: Substitution) -> SubstSet {
    SubstSet::singleton(s)
}

fn days() -> DataDecls {
    let days: Vec<(&str, Vec<Type>)> = ["Mo", "Tu", "We", "Th", "Fr", "Sa", "Su"].iter().map(|d| (*d, vec![])).collect();
    DataDecls::new().with("Day", &days).with("Color", &[("Red", vec![]), ("Green", vec![]), ("Blue", vec![])])
}

fn weekend_case() -> CaseExpr {
    let y = Pattern::var("y");
    let e1 = Expression::ctor("Weekend", vec![Expression::var("y")]);
    let e2 = Expression::ctor("Today", vec![Expression::var("y")]);
    CaseExpr {
        scrutinee: Expression::var("x"),
        clauses: vec![
            Clause::new(Pattern::and(y.clone(), Pattern::or(c("Sa"), c("Su"))), e1),
            Clause::new(Pattern::and(y, Pattern::neg(Pattern::any_of([c("Fr"), c("Sa"), c("Su")]))), e2),
        ],
        default: Expression::nullary("Tomorrow"),
    }
}

fn matching_examples(r: &mut Report) {
    let list = Value::new("Cons", vec![v("2"), Value::new("Cons", vec![v("3"), v("Nil")])]);
    let cons_x_xs = Pattern::ctor("Cons", vec![Pattern::var("x"), Pattern::var("xs")]);
    let expected = Substitution::from_pairs([("x", v("2")), ("xs", Value::new("Cons", vec![v("3"), v("Nil")]))]);
    r.expect(match_pos(&cons_x_xs, &list).equiv(&one(expected)), "Cons(x, xs) binds head and tail");

    let true_or_false = Pattern::or(c("True"), c("False"));
    r.expect(match_pos(&true_or_false, &v("True")).equiv(&one(Substitution::empty())), "True | False matches True");

    r.expect(match_pos(&c("True"), &v("False")).is_empty(), "True does not match False positively");
    r.expect(match_neg(&c("True"), &v("False")).equiv(&one(Substitution::empty())), "True fails on False with []");

    let not_x = Pattern::neg(Pattern::var("x"));
    r.expect(match_pos(&not_x, &v("True")).is_empty(), "!x never matches");
    r.expect(
        match_neg(&not_x, &v("True")).equiv(&one(Substitution::single("x", v("True")))),
        "!x fails on True binding x",
    );

    let not_not_x = Pattern::neg(not_x.clone());
    r.expect(
        match_pos(&not_not_x, &v("True")).equiv(&one(Substitution::single("x", v("True")))),
        "!!x matches True binding x",
    );

    // Non-linear patterns yield improper or domain-inconsistent results.
    let cons_x_x = Pattern::ctor("Cons", vec![Pattern::var("x"), Pattern::var("x")]);
    let got = match_pos(&cons_x_x, &Value::new("Cons", vec![v("2"), v("Nil")]));
    let improper = Substitution::from_pairs([("x", v("2")), ("x", v("Nil"))]);
    r.expect(got.equiv(&one(improper.clone())) && !improper.is_proper(), "Cons(x, x) gives an improper substitution");

    let bound_or_false = Pattern::or(Pattern::and(Pattern::var("x"), c("True")), c("False"));
    r.expect(
        match_pos(&bound_or_false, &v("True")).equiv(&one(Substitution::single("x", v("True")))),
        "(x & True) | False binds x on True",
    );
    r.expect(
        match_pos(&bound_or_false, &v("False")).equiv(&one(Substitution::empty())),
        "(x & True) | False binds nothing on False",
    );

    r.expect(!linear_pos(&cons_x_x), "Cons(x, x) is rejected as non-linear");
    r.expect(!linear_pos(&bound_or_false), "(x & True) | False is rejected as non-linear");
    r.expect(linear_pos(&cons_x_xs) && linear_pos(&not_not_x), "the linear examples are accepted");
}

fn normalization_goldens(r: &mut Report) {
    let x = Pattern::var("x");
    let weekend = Pattern::and(x.clone(), Pattern::or(c("Sa"), c("Su")));
    let weekday = Pattern::and(x, Pattern::neg(Pattern::or(c("Sa"), c("Su"))));
    let checks = [
        (nnf(&weekday).to_string(), "x & (!Sa & !Su)"),
        (format_dnf(&dnf(&nnf(&weekend))), "||{ x & Sa, x & Su }"),
        (format_dnf(&dnf(&nnf(&weekday))), "||{ x & (!Sa & !Su) }"),
        (to_ndnf(&weekend).to_string(), "||{ {x} & Sa, {x} & Su }"),
        (to_ndnf(&weekday).to_string(), "||{ {x} & !{Sa, Su} }"),
    ];
    for (got, want) in checks {
        r.expect(got == want, format!("expected `{want}`, got `{got}`"));
    }
}

fn negated(names: &[(&str, usize)]) -> Ndnf {
    Ndnf::single(NConjunct::Negative {
        vars: BTreeSet::new(),
        banned: names.iter().map(|(n, a)| CtorName::new(*n, *a)).collect(),
    })
}

fn positive(name: &str) -> Ndnf {
    Ndnf::single(NConjunct::Positive { vars: BTreeSet::new(), ctor: CtorName::new(name, 0), args: vec![] })
}

fn compilation_golden(r: &mut Report) {
    let x = || Expression::var("x");
    let tree = compile(&embed_case(&weekend_case()), &mut FreshSupply::new());
    let arm = |ctor: &str, rhs: Expression| Arm { ctor: CtorName::new(ctor, 0), binders: vec![], tree: DecisionTree::Leaf(rhs) };
    let expected = DecisionTree::Switch {
        scrutinee: x(),
        arms: vec![
            arm("Fr", Expression::nullary("Tomorrow")),
            arm("Sa", Expression::ctor("Weekend", vec![x()])),
            arm("Su", Expression::ctor("Weekend", vec![x()])),
        ],
        default: Box::new(DecisionTree::Leaf(Expression::ctor("Today", vec![x()]))),
    };
    match tree {
        Ok(t) => r.expect(t == expected, format!("weekend compiled to\n{t}")),
        Err(e) => r.expect(false, format!("weekend did not compile: {e}")),
    }

    // Specialization by Cons: the row banning Cons disappears, the row
    // banning Nil gains wildcards for the two new columns.
    let var = Expression::var;
    let d = |i: usize| positive(&format!("D{i}"));
    let m = ClauseMatrix::new(
        vec![var("v1"), var("v2")],
        vec![
            Row::new(vec![negated(&[("Cons", 2)]), d(1)], var("e1")),
            Row::new(vec![negated(&[("Nil", 0)]), d(2)], var("e2")),
        ],
        var("ed"),
    );
    let s = specialize(0, &CtorName::new("Cons", 2), &["x".into(), "y".into()], &m);
    r.expect(s.scrutinees == vec![var("x"), var("y"), var("v2")], "Cons specialization scrutinees");
    r.expect(
        s.rows == vec![Row::new(vec![Ndnf::wildcard(), Ndnf::wildcard(), d(2)], var("e2"))],
        "Cons specialization keeps only the row banning Nil",
    );

    // Default over heads {Red, Green}: the Red row goes, the row banning
    // Green keeps its remaining column.
    let m = ClauseMatrix::new(
        vec![var("v1"), var("v2")],
        vec![
            Row::new(vec![positive("Red"), d(1)], var("e1")),
            Row::new(vec![negated(&[("Green", 0)]), d(2)], var("e2")),
        ],
        var("ed"),
    );
    let heads = head_ctors(m.column(0));
    let dm = default_matrix(0, &heads, &m);
    r.expect(dm.scrutinees == vec![var("v2")], "default scrutinees");
    r.expect(dm.rows == vec![Row::new(vec![d(2)], var("e2"))], "default keeps only the row banning Green");
}

fn exhaustiveness_golden(r: &mut Report) {
    let decls = days();
    let weekend = PatternMatrix::from_case(&weekend_case());
    match exhaustive(&weekend, &decls) {
        Ok(false) => {}
        other => r.expect(false, format!("weekend should be non-exhaustive, got {other:?}")),
    }
    match uncovered(&weekend, Some(&[Type::named("Day")]), &decls) {
        Ok(Some(Ok(values))) => {
            let shown: Vec<String> = values.iter().map(ToString::to_string).collect();
            let in_range = values.len() == 1 && ["Mo", "Tu", "We", "Th"].contains(&values[0].ctor.name.as_str());
            r.expect(in_range, format!("weekend witness is {}, expected one of Mo, Tu, We, Th", shown.join(", ")));
        }
        other => r.expect(false, format!("weekend witness missing: {other:?}")),
    }
    // The enumeration decides what the witness can be.
    let values = enumerate_values(&decls, &Type::named("Day"), 1).unwrap_or_default();
    let missed: Vec<String> = values
        .iter()
        .filter(|val| weekend.rows.iter().all(|row| match_pos(&row[0].to_pattern(), val).is_empty()))
        .map(ToString::to_string)
        .collect();
    r.note(format!("values no weekend row matches: {}", missed.join(", ")));

    let is_red = PatternMatrix::new(1, vec![vec![to_ndnf(&c("Red"))], vec![to_ndnf(&Pattern::neg(c("Red")))]]);
    r.expect(matches!(exhaustive(&is_red, &decls), Ok(true)), "isRed should be exhaustive");
    let colors = enumerate_values(&decls, &Type::named("Color"), 3).unwrap_or_default();
    let all_covered = !colors.is_empty()
        && colors.iter().all(|val| is_red.rows.iter().any(|row| !match_pos(&row[0].to_pattern(), val).is_empty()));
    r.expect(all_covered, "enumeration finds a color isRed misses");
}

fn suite(r: &mut Report, name: &str, cfg: &SuiteConfig) {
    match run_suite(name, cfg) {
        Ok(report) => {
            for check in &report.checks {
                r.expect(check.passed(), check.to_string());
                r.expect(check.checked >= check.required, format!("{}: only {} cases", check.name, check.checked));
            }
        }
        Err(e) => r.expect(false, format!("suite {name}: {e}")),
    }
}

fn differential(r: &mut Report) {
    let cfg = SuiteConfig::default();
    suite(r, "compile", &cfg);

    let mut programs = 0;
    for (file, src) in PROGRAMS {
        let prog = match parse(src) {
            Ok(p) => p,
            Err(e) => {
                r.expect(false, format!("{file}:{e}"));
                continue;
            }
        };
        let defs = prog.defs_map();
        for def in &prog.defs {
            let Expression::Case(case) = &def.body else { continue };
            let Some(tau) = scrutinee_type(case, &prog.decls) else {
                r.expect(false, format!("{file}: no scrutinee type for {}", def.name));
                continue;
            };
            match differential_compile_check_with(case, &defs, &prog.decls, &tau, cfg.depth) {
                Ok(DiffOutcome::Agree { .. }) => programs += 1,
                Ok(d) => r.expect(false, format!("{file}: {}: {d}", def.name)),
                Err(e) => r.expect(false, format!("{file}: {}: {e}", def.name)),
            }
        }
    }
    r.note(format!("{programs} example definitions agree on their whole universe"));

    let decls = days();
    let case = weekend_case();
    match compile_case(&case, &mut FreshSupply::new()).ok().and_then(|t| corrupt_tree(&t)) {
        Some(bad) => match differential_tree_check(&case, &bad, &decls, &Type::named("Day"), cfg.depth) {
            Ok(DiffOutcome::Disagree { witness, .. }) => r.note(format!("corrupted weekend tree caught on {witness}")),
            other => r.expect(false, format!("corrupted weekend tree not caught: {other:?}")),
        },
        None => r.expect(false, "weekend tree could not be corrupted"),
    }
}

type Criterion = Box<dyn Fn(&mut Report)>;

fn main() -> ExitCode {
    let cfg = SuiteConfig::default();
    let criteria: Vec<(&str, Criterion)> = vec![
        ("matching examples", Box::new(matching_examples)),
        ("normalization goldens", Box::new(normalization_goldens)),
        ("compilation golden", Box::new(compilation_golden)),
        ("exhaustiveness golden", Box::new(exhaustiveness_golden)),
        ("pattern algebra properties", Box::new(move |r| suite(r, "algebra", &cfg))),
        ("linearity and determinism properties", Box::new(move |r| suite(r, "linearity", &cfg))),
        ("semantics properties", Box::new(move |r| suite(r, "semantics", &cfg))),
        ("differential compilation", Box::new(differential)),
        ("overlap soundness", Box::new(move |r| suite(r, "overlap", &cfg))),
    ];

    let mut failed = 0;
    for (i, (title, run)) in criteria.iter().enumerate() {
        let mut report = Report::default();
        run(&mut report);
        let verdict = if report.failures.is_empty() { "PASS" } else { "FAIL" };
        println!("criterion {}: {verdict}  {title}", i + 1);
        for f in &report.failures {
            println!("    failed: {}", f.trim_end().replace('\n', "\n            "));
        }
        for n in &report.notes {
            println!("    note: {n}");
        }
        if !report.failures.is_empty() {
            failed += 1;
        }
    }
    println!("{} of {} criteria pass", criteria.len() - failed, criteria.len());
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
