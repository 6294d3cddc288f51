//! Patterns, values and substitutions, together with the two mutually
//! recursive matching judgments.
//!
//! Matching is computed exhaustively: `match_pos(p, v)` returns every
//! substitution that has a derivation of `p` matching `v`, and `match_neg`
//! every substitution with a derivation of `p` *not* matching `v`. The
//! soundness, completeness and determinism properties quantify over all
//! derivations, so a single-result matcher would not be able to check them.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

/// A constructor name together with its arity. `Cons/2` and `Cons/1` are
/// different constructors.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CtorName {
    pub name: String,
    pub arity: usize,
}

impl CtorName {
    pub fn new(name: impl Into<String>, arity: usize) -> Self {
        CtorName { name: name.into(), arity }
    }
}

impl fmt::Display for CtorName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Pattern {
    Var(String),
    Ctor(CtorName, Vec<Pattern>),
    And(Box<Pattern>, Box<Pattern>),
    Or(Box<Pattern>, Box<Pattern>),
    Wildcard,
    Absurd,
    Neg(Box<Pattern>),
}

impl Pattern {
    pub fn var(name: impl Into<String>) -> Self {
        Pattern::Var(name.into())
    }

    /// Constructor pattern; the arity is taken from the number of arguments.
    pub fn ctor(name: impl Into<String>, args: Vec<Pattern>) -> Self {
        let name = CtorName::new(name, args.len());
        Pattern::Ctor(name, args)
    }

    pub fn nullary(name: impl Into<String>) -> Self {
        Pattern::ctor(name, Vec::new())
    }

    pub fn and(lhs: Pattern, rhs: Pattern) -> Self {
        Pattern::And(Box::new(lhs), Box::new(rhs))
    }

    pub fn or(lhs: Pattern, rhs: Pattern) -> Self {
        Pattern::Or(Box::new(lhs), Box::new(rhs))
    }

    #[allow(clippy::should_implement_trait)]
    pub fn neg(inner: Pattern) -> Self {
        Pattern::Neg(Box::new(inner))
    }

    /// Right-nested disjunction of `items`; `#` when empty.
    pub fn any_of(items: impl IntoIterator<Item = Pattern>) -> Self {
        let mut items: Vec<_> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Pattern::Absurd;
        };
        while let Some(p) = items.pop() {
            acc = Pattern::or(p, acc);
        }
        acc
    }

    /// Right-nested conjunction of `items`; `_` when empty.
    pub fn all_of(items: impl IntoIterator<Item = Pattern>) -> Self {
        let mut items: Vec<_> = items.into_iter().collect();
        let Some(mut acc) = items.pop() else {
            return Pattern::Wildcard;
        };
        while let Some(p) = items.pop() {
            acc = Pattern::and(p, acc);
        }
        acc
    }

    /// Number of nodes.
    pub fn size(&self) -> usize {
        match self {
            Pattern::Var(_) | Pattern::Wildcard | Pattern::Absurd => 1,
            Pattern::Ctor(_, args) => 1 + args.iter().map(Pattern::size).sum::<usize>(),
            Pattern::And(a, b) | Pattern::Or(a, b) => 1 + a.size() + b.size(),
            Pattern::Neg(p) => 1 + p.size(),
        }
    }

    /// Replaces every variable by a wildcard. Matching success is unchanged.
    pub fn erase_vars(&self) -> Pattern {
        match self {
            Pattern::Var(_) => Pattern::Wildcard,
            Pattern::Ctor(c, args) => {
                Pattern::Ctor(c.clone(), args.iter().map(Pattern::erase_vars).collect())
            }
            Pattern::And(a, b) => Pattern::and(a.erase_vars(), b.erase_vars()),
            Pattern::Or(a, b) => Pattern::or(a.erase_vars(), b.erase_vars()),
            Pattern::Wildcard => Pattern::Wildcard,
            Pattern::Absurd => Pattern::Absurd,
            Pattern::Neg(p) => Pattern::neg(p.erase_vars()),
        }
    }

    /// Every constructor mentioned anywhere in the pattern.
    pub fn ctors(&self) -> BTreeSet<CtorName> {
        let mut out = BTreeSet::new();
        self.collect_ctors(&mut out);
        out
    }

    fn collect_ctors(&self, out: &mut BTreeSet<CtorName>) {
        match self {
            Pattern::Ctor(c, args) => {
                out.insert(c.clone());
                for a in args {
                    a.collect_ctors(out);
                }
            }
            Pattern::And(a, b) | Pattern::Or(a, b) => {
                a.collect_ctors(out);
                b.collect_ctors(out);
            }
            Pattern::Neg(p) => p.collect_ctors(out),
            Pattern::Var(_) | Pattern::Wildcard | Pattern::Absurd => {}
        }
    }
}

fn is_binary(p: &Pattern) -> bool {
    matches!(p, Pattern::And(..) | Pattern::Or(..))
}

fn write_operand(f: &mut fmt::Formatter<'_>, p: &Pattern) -> fmt::Result {
    if is_binary(p) {
        write!(f, "({p})")
    } else {
        write!(f, "{p}")
    }
}

/// ASCII surface notation: `!` for negation, `&`, `|`, `_` and `#`. Binary
/// operands that are themselves binary are parenthesized, so printing and
/// re-parsing is the identity.
impl fmt::Display for Pattern {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Pattern::Var(x) => f.write_str(x),
            Pattern::Ctor(c, args) => {
                f.write_str(&c.name)?;
                if !args.is_empty() {
                    f.write_str("(")?;
                    for (i, a) in args.iter().enumerate() {
                        if i > 0 {
                            f.write_str(", ")?;
                        }
                        write!(f, "{a}")?;
                    }
                    f.write_str(")")?;
                }
                Ok(())
            }
            Pattern::And(a, b) => {
                write_operand(f, a)?;
                f.write_str(" & ")?;
                write_operand(f, b)
            }
            Pattern::Or(a, b) => {
                write_operand(f, a)?;
                f.write_str(" | ")?;
                write_operand(f, b)
            }
            Pattern::Wildcard => f.write_str("_"),
            Pattern::Absurd => f.write_str("#"),
            Pattern::Neg(p) => {
                f.write_str("!")?;
                if is_binary(p) {
                    write!(f, "({p})")
                } else {
                    write!(f, "{p}")
                }
            }
        }
    }
}

/// A constructor applied to values.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Value {
    pub ctor: CtorName,
    pub args: Vec<Value>,
}

impl Value {
    pub fn new(name: impl Into<String>, args: Vec<Value>) -> Self {
        Value { ctor: CtorName::new(name, args.len()), args }
    }

    pub fn nullary(name: impl Into<String>) -> Self {
        Value::new(name, Vec::new())
    }

    /// Height of the constructor tree; nullary values have height 1.
    pub fn height(&self) -> usize {
        1 + self.args.iter().map(Value::height).max().unwrap_or(0)
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.ctor.name)?;
        if !self.args.is_empty() {
            f.write_str("(")?;
            for (i, a) in self.args.iter().enumerate() {
                if i > 0 {
                    f.write_str(", ")?;
                }
                write!(f, "{a}")?;
            }
            f.write_str(")")?;
        }
        Ok(())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Mapping {
    pub var: String,
    pub value: Value,
}

impl Mapping {
    pub fn new(var: impl Into<String>, value: Value) -> Self {
        Mapping { var: var.into(), value }
    }
}

/// An ordered list of mappings. Not necessarily a function: nonlinear
/// patterns produce substitutions that bind a variable twice.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Substitution(pub Vec<Mapping>);

impl Substitution {
    pub fn empty() -> Self {
        Substitution(Vec::new())
    }

    pub fn single(var: impl Into<String>, value: Value) -> Self {
        Substitution(vec![Mapping::new(var, value)])
    }

    pub fn from_pairs<S: Into<String>>(pairs: impl IntoIterator<Item = (S, Value)>) -> Self {
        Substitution(pairs.into_iter().map(|(x, v)| Mapping::new(x, v)).collect())
    }

    pub fn mappings(&self) -> &[Mapping] {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// `self ++ other`.
    pub fn concat(&self, other: &Substitution) -> Substitution {
        let mut out = self.0.clone();
        out.extend(other.0.iter().cloned());
        Substitution(out)
    }

    pub fn push(&mut self, var: impl Into<String>, value: Value) {
        self.0.push(Mapping::new(var, value));
    }

    /// No variable occurs twice in the domain.
    pub fn is_proper(&self) -> bool {
        let mut seen = BTreeSet::new();
        self.0.iter().all(|m| seen.insert(m.var.as_str()))
    }

    /// The set of bound variables.
    pub fn domain(&self) -> BTreeSet<String> {
        self.0.iter().map(|m| m.var.clone()).collect()
    }

    /// First value bound to `var`.
    pub fn lookup(&self, var: &str) -> Option<&Value> {
        self.0.iter().find(|m| m.var == var).map(|m| &m.value)
    }

    /// The mappings as a set; two substitutions are equivalent iff their
    /// canonical forms are equal.
    pub fn canonical(&self) -> BTreeSet<Mapping> {
        self.0.iter().cloned().collect()
    }
}

impl fmt::Display for Substitution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, m) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{} -> {}", m.var, m.value)?;
        }
        f.write_str("]")
    }
}

/// Two substitutions are equivalent when they contain the same mappings,
/// ignoring order and multiplicity.
pub fn subst_equiv(s1: &Substitution, s2: &Substitution) -> bool {
    s1.canonical() == s2.canonical()
}

/// A finite set of substitutions, deduplicated up to [`subst_equiv`]. The
/// first-inserted member of each equivalence class is kept as representative.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SubstSet {
    members: BTreeMap<BTreeSet<Mapping>, Substitution>,
}

impl SubstSet {
    pub fn new() -> Self {
        SubstSet::default()
    }

    pub fn singleton(s: Substitution) -> Self {
        let mut set = SubstSet::new();
        set.insert(s);
        set
    }

    pub fn insert(&mut self, s: Substitution) -> bool {
        let key = s.canonical();
        if self.members.contains_key(&key) {
            return false;
        }
        self.members.insert(key, s);
        true
    }

    pub fn extend(&mut self, other: SubstSet) {
        for (k, s) in other.members {
            self.members.entry(k).or_insert(s);
        }
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = &Substitution> {
        self.members.values()
    }

    pub fn contains_equiv(&self, s: &Substitution) -> bool {
        self.members.contains_key(&s.canonical())
    }

    /// Every member of `self` has an equivalent member in `other` and vice versa.
    pub fn equiv(&self, other: &SubstSet) -> bool {
        self.members.len() == other.members.len()
            && self.members.keys().all(|k| other.members.contains_key(k))
    }

    /// `{ a ++ b | a in self, b in other }`.
    pub fn product(&self, other: &SubstSet) -> SubstSet {
        let mut out = SubstSet::new();
        for a in self.iter() {
            for b in other.iter() {
                out.insert(a.concat(b));
            }
        }
        out
    }
}

impl FromIterator<Substitution> for SubstSet {
    fn from_iter<T: IntoIterator<Item = Substitution>>(iter: T) -> Self {
        let mut set = SubstSet::new();
        for s in iter {
            set.insert(s);
        }
        set
    }
}

impl fmt::Display for SubstSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (i, s) in self.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

/// Variables occurring under an even number of negations.
pub fn fv_even(p: &Pattern) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_fv(p, true, &mut out);
    out
}

/// Variables occurring under an odd number of negations.
pub fn fv_odd(p: &Pattern) -> BTreeSet<String> {
    let mut out = BTreeSet::new();
    collect_fv(p, false, &mut out);
    out
}

fn collect_fv(p: &Pattern, even: bool, out: &mut BTreeSet<String>) {
    match p {
        Pattern::Var(x) => {
            if even {
                out.insert(x.clone());
            }
        }
        Pattern::Wildcard | Pattern::Absurd => {}
        Pattern::Neg(q) => collect_fv(q, !even, out),
        Pattern::And(a, b) | Pattern::Or(a, b) => {
            collect_fv(a, even, out);
            collect_fv(b, even, out);
        }
        Pattern::Ctor(_, args) => {
            for a in args {
                collect_fv(a, even, out);
            }
        }
    }
}

/// All substitutions `s` such that `p` matches `v` producing `s`.
pub fn match_pos(p: &Pattern, v: &Value) -> SubstSet {
    let pos = matches_pos(p, v);
    debug_assert!(
        !(pos.is_empty() && matches_neg(p, v).is_empty()),
        "matching is incomplete for {p} against {v}"
    );
    debug_assert!(
        pos.is_empty() || matches_neg(p, v).is_empty(),
        "matching is unsound for {p} against {v}"
    );
    pos
}

/// All substitutions `s` such that `p` does not match `v` producing `s`.
pub fn match_neg(p: &Pattern, v: &Value) -> SubstSet {
    let neg = matches_neg(p, v);
    debug_assert!(
        !(neg.is_empty() && matches_pos(p, v).is_empty()),
        "matching is incomplete for {p} against {v}"
    );
    debug_assert!(
        neg.is_empty() || matches_pos(p, v).is_empty(),
        "matching is unsound for {p} against {v}"
    );
    neg
}

/// Either derivation set without the soundness and completeness assertions,
/// so that oracles can observe a violation instead of panicking on it.
pub fn derivations(p: &Pattern, v: &Value, positive: bool) -> SubstSet {
    if positive {
        matches_pos(p, v)
    } else {
        matches_neg(p, v)
    }
}

// Patterns are trees, so each (node, value) pair is reached along exactly
// one path and there is nothing to memoize.
fn matches_pos(p: &Pattern, v: &Value) -> SubstSet {
    match p {
        Pattern::Var(x) => SubstSet::singleton(Substitution::single(x.clone(), v.clone())),
        Pattern::Wildcard => SubstSet::singleton(Substitution::empty()),
        Pattern::Absurd => SubstSet::new(),
        Pattern::Neg(q) => matches_neg(q, v),
        Pattern::Or(a, b) => {
            let mut out = matches_pos(a, v);
            out.extend(matches_pos(b, v));
            out
        }
        Pattern::And(a, b) => {
            let left = matches_pos(a, v);
            if left.is_empty() {
                return left;
            }
            left.product(&matches_pos(b, v))
        }
        Pattern::Ctor(c, args) => {
            if *c != v.ctor || args.len() != v.args.len() {
                return SubstSet::new();
            }
            let mut acc = SubstSet::singleton(Substitution::empty());
            for (a, w) in args.iter().zip(&v.args) {
                acc = acc.product(&matches_pos(a, w));
                if acc.is_empty() {
                    break;
                }
            }
            acc
        }
    }
}

fn matches_neg(p: &Pattern, v: &Value) -> SubstSet {
    match p {
        Pattern::Var(_) | Pattern::Wildcard => SubstSet::new(),
        Pattern::Absurd => SubstSet::singleton(Substitution::empty()),
        Pattern::Neg(q) => matches_pos(q, v),
        Pattern::And(a, b) => {
            let mut out = matches_neg(a, v);
            out.extend(matches_neg(b, v));
            out
        }
        Pattern::Or(a, b) => {
            let left = matches_neg(a, v);
            if left.is_empty() {
                return left;
            }
            left.product(&matches_neg(b, v))
        }
        Pattern::Ctor(c, args) => {
            if *c != v.ctor || args.len() != v.args.len() {
                return SubstSet::singleton(Substitution::empty());
            }
            let mut out = SubstSet::new();
            for (a, w) in args.iter().zip(&v.args) {
                out.extend(matches_neg(a, w));
            }
            out
        }
    }
}

/// Bounded approximation of semantic pattern equivalence: for each value of
/// `universe`, the positive and the negative result sets of `p` and `q` must
/// cover each other up to substitution equivalence.
pub fn pattern_equiv_bounded(p: &Pattern, q: &Pattern, universe: &[Value]) -> bool {
    universe.iter().all(|v| equiv_at(p, q, v))
}

/// The first value of `universe` on which `p` and `q` disagree.
pub fn equiv_counterexample<'a>(p: &Pattern, q: &Pattern, universe: &'a [Value]) -> Option<&'a Value> {
    universe.iter().find(|v| !equiv_at(p, q, v))
}

fn equiv_at(p: &Pattern, q: &Pattern, v: &Value) -> bool {
    matches_pos(p, v).equiv(&matches_pos(q, v)) && matches_neg(p, v).equiv(&matches_neg(q, v))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn num(n: u32) -> Value {
        Value::nullary(n.to_string())
    }

    fn t() -> Value {
        Value::nullary("True")
    }

    fn set(items: Vec<Substitution>) -> SubstSet {
        items.into_iter().collect()
    }

    #[test]
    fn free_variables() {
        let negx = Pattern::neg(Pattern::var("x"));
        assert!(fv_even(&negx).is_empty());
        assert_eq!(fv_odd(&negx), BTreeSet::from(["x".to_string()]));
        assert!(fv_even(&Pattern::Wildcard).is_empty());
        assert!(fv_odd(&Pattern::Absurd).is_empty());

        let p = Pattern::and(Pattern::var("x"), Pattern::neg(Pattern::var("y")));
        assert_eq!(fv_even(&p), BTreeSet::from(["x".to_string()]));
        assert_eq!(fv_odd(&p), BTreeSet::from(["y".to_string()]));
    }

    #[test]
    fn cons_binds_head_and_tail() {
        let p = Pattern::ctor("Cons", vec![Pattern::var("x"), Pattern::var("xs")]);
        let tail = Value::new("Cons", vec![num(3), Value::nullary("Nil")]);
        let v = Value::new("Cons", vec![num(2), tail.clone()]);
        let expected = Substitution::from_pairs([("x", num(2)), ("xs", tail)]);
        assert!(match_pos(&p, &v).equiv(&SubstSet::singleton(expected)));
        assert!(match_neg(&p, &v).is_empty());
    }

    #[test]
    fn negative_judgment_examples() {
        let s = match_neg(&Pattern::nullary("True"), &Value::nullary("False"));
        assert!(s.equiv(&SubstSet::singleton(Substitution::empty())));

        let s = match_neg(&Pattern::neg(Pattern::var("x")), &t());
        assert!(s.equiv(&SubstSet::singleton(Substitution::single("x", t()))));

        let s = match_pos(&Pattern::neg(Pattern::neg(Pattern::var("x"))), &t());
        assert!(s.equiv(&SubstSet::singleton(Substitution::single("x", t()))));
    }

    #[test]
    fn wildcard_and_absurd() {
        let v = Value::new("Pair", vec![t(), t()]);
        assert!(match_pos(&Pattern::Wildcard, &v).equiv(&set(vec![Substitution::empty()])));
        assert!(match_neg(&Pattern::Absurd, &v).equiv(&set(vec![Substitution::empty()])));
        assert!(match_neg(&Pattern::Wildcard, &v).is_empty());
        assert!(match_pos(&Pattern::Absurd, &v).is_empty());
    }

    #[test]
    fn nonlinear_pattern_binds_twice() {
        let p = Pattern::ctor("Cons", vec![Pattern::var("x"), Pattern::var("x")]);
        let v = Value::new("Cons", vec![num(2), Value::nullary("Nil")]);
        let got = match_pos(&p, &v);
        assert_eq!(got.len(), 1);
        let s = got.iter().next().unwrap();
        assert_eq!(s, &Substitution::from_pairs([("x", num(2)), ("x", Value::nullary("Nil"))]));
        assert!(!s.is_proper());
    }

    #[test]
    fn arity_distinguishes_constructors() {
        let p = Pattern::ctor("C", vec![Pattern::Wildcard]);
        let v = Value::nullary("C");
        assert!(match_pos(&p, &v).is_empty());
        assert!(!match_neg(&p, &v).is_empty());
    }

    #[test]
    fn substitution_equivalence() {
        let two = num(2);
        let three = num(3);
        let a = Substitution::from_pairs([("x", two.clone()), ("y", three.clone())]);
        let b = Substitution::from_pairs([("y", three), ("x", two.clone())]);
        assert!(subst_equiv(&a, &b));
        assert!(!subst_equiv(&Substitution::single("x", two.clone()), &Substitution::single("x", num(3))));
        let dup = Substitution::from_pairs([("x", two.clone()), ("x", two.clone())]);
        assert!(subst_equiv(&dup, &Substitution::single("x", two)));
    }

    #[test]
    fn bounded_equivalence_examples() {
        let universe = vec![t(), Value::nullary("False")];
        let p = Pattern::and(Pattern::var("x"), Pattern::nullary("True"));
        assert!(pattern_equiv_bounded(&Pattern::neg(Pattern::neg(p.clone())), &p, &universe));
        assert!(pattern_equiv_bounded(&p, &p, &universe));
        let negx = Pattern::neg(Pattern::var("x"));
        assert!(!pattern_equiv_bounded(&Pattern::Absurd, &negx, &[t()]));
    }

    #[test]
    fn display_parenthesizes_nested_operators() {
        let p = Pattern::and(
            Pattern::var("x"),
            Pattern::neg(Pattern::or(Pattern::nullary("Sa"), Pattern::nullary("Su"))),
        );
        assert_eq!(p.to_string(), "x & !(Sa | Su)");
    }
}
