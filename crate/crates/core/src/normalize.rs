//! Negation normal form, disjunctive normal form and normalized conjuncts.
//!
//! The pipeline is `to_ndnf = normalize_conjunct ∘ dnf ∘ nnf`. Each stage can
//! be re-read as an ordinary [`Pattern`] through its `to_pattern` embedding,
//! which is how the semantic properties of the stages are tested.

use std::collections::BTreeSet;
use std::fmt;

use crate::pattern::{CtorName, Pattern};

/// Patterns in negation normal form: negation only wraps variables or
/// constructor heads.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Nnf {
    Var(String),
    NegVar(String),
    /// `!C(_, ..., _)`.
    NegCtor(CtorName),
    Ctor(CtorName, Vec<Nnf>),
    And(Box<Nnf>, Box<Nnf>),
    Or(Box<Nnf>, Box<Nnf>),
    Wildcard,
    Absurd,
}

/// Elementary conjuncts: negation normal forms without disjunction.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Conjunct {
    Var(String),
    NegVar(String),
    NegCtor(CtorName),
    Ctor(CtorName, Vec<Conjunct>),
    And(Box<Conjunct>, Box<Conjunct>),
    Wildcard,
    Absurd,
}

/// A normalized elementary conjunct. Every kind carries the set of
/// variables bound to the whole matched value.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum NConjunct {
    /// `{vars} & C(args)`; `args.len() == ctor.arity`.
    Positive { vars: BTreeSet<String>, ctor: CtorName, args: Vec<NConjunct> },
    /// `{vars} & !{banned}`; matches any value whose head is not banned.
    Negative { vars: BTreeSet<String>, banned: BTreeSet<CtorName> },
    /// `{vars} & #`.
    Unsat { vars: BTreeSet<String> },
}

/// A disjunction of normalized conjuncts. The empty disjunction is absurd.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Ndnf(pub Vec<NConjunct>);

fn neg_ctor_pattern(c: &CtorName) -> Pattern {
    Pattern::neg(Pattern::Ctor(c.clone(), vec![Pattern::Wildcard; c.arity]))
}

pub fn nnf(p: &Pattern) -> Nnf {
    nnf_pos(p)
}

pub fn nnf_pos(p: &Pattern) -> Nnf {
    match p {
        Pattern::Var(x) => Nnf::Var(x.clone()),
        Pattern::Wildcard => Nnf::Wildcard,
        Pattern::Absurd => Nnf::Absurd,
        Pattern::Neg(q) => nnf_neg(q),
        Pattern::And(a, b) => Nnf::And(Box::new(nnf_pos(a)), Box::new(nnf_pos(b))),
        Pattern::Or(a, b) => Nnf::Or(Box::new(nnf_pos(a)), Box::new(nnf_pos(b))),
        Pattern::Ctor(c, args) => Nnf::Ctor(c.clone(), args.iter().map(nnf_pos).collect()),
    }
}

pub fn nnf_neg(p: &Pattern) -> Nnf {
    match p {
        Pattern::Var(x) => Nnf::NegVar(x.clone()),
        Pattern::Wildcard => Nnf::Absurd,
        Pattern::Absurd => Nnf::Wildcard,
        Pattern::Neg(q) => nnf_pos(q),
        Pattern::And(a, b) => Nnf::Or(Box::new(nnf_neg(a)), Box::new(nnf_neg(b))),
        Pattern::Or(a, b) => Nnf::And(Box::new(nnf_neg(a)), Box::new(nnf_neg(b))),
        Pattern::Ctor(c, args) => {
            // !C(p1..pn) = !C | C(!p1, _, ..) | ... | C(_, .., !pn), nested to the right.
            let mut disjuncts = vec![Nnf::NegCtor(c.clone())];
            for (i, a) in args.iter().enumerate() {
                let mut row = vec![Nnf::Wildcard; args.len()];
                row[i] = nnf_neg(a);
                disjuncts.push(Nnf::Ctor(c.clone(), row));
            }
            let mut acc = disjuncts.pop().expect("at least the head disjunct");
            while let Some(d) = disjuncts.pop() {
                acc = Nnf::Or(Box::new(d), Box::new(acc));
            }
            acc
        }
    }
}

impl Nnf {
    pub fn to_pattern(&self) -> Pattern {
        match self {
            Nnf::Var(x) => Pattern::Var(x.clone()),
            Nnf::NegVar(x) => Pattern::neg(Pattern::Var(x.clone())),
            Nnf::NegCtor(c) => neg_ctor_pattern(c),
            Nnf::Ctor(c, args) => Pattern::Ctor(c.clone(), args.iter().map(Nnf::to_pattern).collect()),
            Nnf::And(a, b) => Pattern::and(a.to_pattern(), b.to_pattern()),
            Nnf::Or(a, b) => Pattern::or(a.to_pattern(), b.to_pattern()),
            Nnf::Wildcard => Pattern::Wildcard,
            Nnf::Absurd => Pattern::Absurd,
        }
    }
}

/// Prints `!C` for negated heads regardless of arity; all other nodes as
/// patterns.
impl fmt::Display for Nnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_pattern())
    }
}

/// The set of elementary conjuncts of `n`, in left-to-right discovery order
/// without structural duplicates.
pub fn dnf(n: &Nnf) -> Vec<Conjunct> {
    let mut out = Vec::new();
    for k in dnf_raw(n) {
        if !out.contains(&k) {
            out.push(k);
        }
    }
    out
}

fn dnf_raw(n: &Nnf) -> Vec<Conjunct> {
    match n {
        Nnf::Var(x) => vec![Conjunct::Var(x.clone())],
        Nnf::NegVar(x) => vec![Conjunct::NegVar(x.clone())],
        Nnf::NegCtor(c) => vec![Conjunct::NegCtor(c.clone())],
        Nnf::Wildcard => vec![Conjunct::Wildcard],
        Nnf::Absurd => vec![Conjunct::Absurd],
        Nnf::Or(a, b) => {
            let mut out = dnf_raw(a);
            out.extend(dnf_raw(b));
            out
        }
        Nnf::And(a, b) => {
            let right = dnf_raw(b);
            let mut out = Vec::new();
            for k1 in dnf_raw(a) {
                for k2 in &right {
                    out.push(Conjunct::And(Box::new(k1.clone()), Box::new(k2.clone())));
                }
            }
            out
        }
        Nnf::Ctor(c, args) => {
            let mut rows: Vec<Vec<Conjunct>> = vec![Vec::new()];
            for a in args {
                let choices = dnf_raw(a);
                let mut next = Vec::with_capacity(rows.len() * choices.len());
                for row in &rows {
                    for k in &choices {
                        let mut r = row.clone();
                        r.push(k.clone());
                        next.push(r);
                    }
                }
                rows = next;
            }
            rows.into_iter().map(|r| Conjunct::Ctor(c.clone(), r)).collect()
        }
    }
}

impl Conjunct {
    pub fn to_pattern(&self) -> Pattern {
        match self {
            Conjunct::Var(x) => Pattern::Var(x.clone()),
            Conjunct::NegVar(x) => Pattern::neg(Pattern::Var(x.clone())),
            Conjunct::NegCtor(c) => neg_ctor_pattern(c),
            Conjunct::Ctor(c, args) => {
                Pattern::Ctor(c.clone(), args.iter().map(Conjunct::to_pattern).collect())
            }
            Conjunct::And(a, b) => Pattern::and(a.to_pattern(), b.to_pattern()),
            Conjunct::Wildcard => Pattern::Wildcard,
            Conjunct::Absurd => Pattern::Absurd,
        }
    }
}

impl fmt::Display for Conjunct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_pattern())
    }
}

/// `||{ k1, k2 }` rendering of a list of elementary conjuncts.
pub fn format_dnf(ks: &[Conjunct]) -> String {
    let items: Vec<String> = ks.iter().map(ToString::to_string).collect();
    if items.is_empty() {
        "||{}".to_string()
    } else {
        format!("||{{ {} }}", items.join(", "))
    }
}

impl NConjunct {
    /// `{} & !{}`.
    pub fn wildcard() -> Self {
        NConjunct::Negative { vars: BTreeSet::new(), banned: BTreeSet::new() }
    }

    pub fn unsat() -> Self {
        NConjunct::Unsat { vars: BTreeSet::new() }
    }

    pub fn vars(&self) -> &BTreeSet<String> {
        match self {
            NConjunct::Positive { vars, .. }
            | NConjunct::Negative { vars, .. }
            | NConjunct::Unsat { vars } => vars,
        }
    }

    /// `{vars} & !{}`: matches everything and binds only variables.
    pub fn is_variable_only(&self) -> bool {
        matches!(self, NConjunct::Negative { banned, .. } if banned.is_empty())
    }

    pub fn to_pattern(&self) -> Pattern {
        let vars = self.vars().iter().map(|x| Pattern::Var(x.clone()));
        match self {
            NConjunct::Positive { ctor, args, .. } => {
                let head = Pattern::Ctor(ctor.clone(), args.iter().map(NConjunct::to_pattern).collect());
                Pattern::all_of(vars.chain(std::iter::once(head)))
            }
            NConjunct::Negative { banned, .. } => {
                Pattern::all_of(vars.chain(banned.iter().map(neg_ctor_pattern)))
            }
            NConjunct::Unsat { .. } => Pattern::all_of(vars.chain(std::iter::once(Pattern::Absurd))),
        }
    }
}

fn write_vars(f: &mut fmt::Formatter<'_>, vars: &BTreeSet<String>) -> fmt::Result {
    f.write_str("{")?;
    for (i, x) in vars.iter().enumerate() {
        if i > 0 {
            f.write_str(", ")?;
        }
        f.write_str(x)?;
    }
    f.write_str("}")
}

impl fmt::Display for NConjunct {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_vars(f, self.vars())?;
        f.write_str(" & ")?;
        match self {
            NConjunct::Positive { ctor, args, .. } => {
                f.write_str(&ctor.name)?;
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
            NConjunct::Negative { banned, .. } => {
                f.write_str("!{")?;
                for (i, c) in banned.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    f.write_str(&c.name)?;
                }
                f.write_str("}")
            }
            NConjunct::Unsat { .. } => f.write_str("#"),
        }
    }
}

impl Ndnf {
    pub fn wildcard() -> Self {
        Ndnf(vec![NConjunct::wildcard()])
    }

    pub fn single(k: NConjunct) -> Self {
        Ndnf(vec![k])
    }

    pub fn conjuncts(&self) -> &[NConjunct] {
        &self.0
    }

    /// A single `{vars} & !{}` conjunct.
    pub fn as_variable_only(&self) -> Option<&BTreeSet<String>> {
        match self.0.as_slice() {
            [k] if k.is_variable_only() => Some(k.vars()),
            _ => None,
        }
    }

    /// Right-nested disjunction of the conjunct embeddings; `#` when empty.
    pub fn to_pattern(&self) -> Pattern {
        Pattern::any_of(self.0.iter().map(NConjunct::to_pattern))
    }
}

impl fmt::Display for Ndnf {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("||{}");
        }
        f.write_str("||{ ")?;
        for (i, k) in self.0.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{k}")?;
        }
        f.write_str(" }")
    }
}

pub fn normalize_conjunct(k: &Conjunct) -> NConjunct {
    match k {
        Conjunct::Var(x) => NConjunct::Negative {
            vars: BTreeSet::from([x.clone()]),
            banned: BTreeSet::new(),
        },
        Conjunct::Wildcard => NConjunct::wildcard(),
        Conjunct::Absurd | Conjunct::NegVar(_) => NConjunct::unsat(),
        Conjunct::NegCtor(c) => NConjunct::Negative {
            vars: BTreeSet::new(),
            banned: BTreeSet::from([c.clone()]),
        },
        Conjunct::Ctor(c, args) => NConjunct::Positive {
            vars: BTreeSet::new(),
            ctor: c.clone(),
            args: args.iter().map(normalize_conjunct).collect(),
        },
        Conjunct::And(a, b) => combine(&normalize_conjunct(a), &normalize_conjunct(b)),
    }
}

fn union<T: Ord + Clone>(a: &BTreeSet<T>, b: &BTreeSet<T>) -> BTreeSet<T> {
    a.union(b).cloned().collect()
}

/// Merges two normalized conjuncts into their conjunction. Symmetric.
pub fn combine(a: &NConjunct, b: &NConjunct) -> NConjunct {
    use NConjunct::*;
    let vars = union(a.vars(), b.vars());
    match (a, b) {
        (Unsat { .. }, _) | (_, Unsat { .. }) => Unsat { vars },
        (Negative { banned: b1, .. }, Negative { banned: b2, .. }) => {
            Negative { vars, banned: union(b1, b2) }
        }
        (Positive { ctor, args, .. }, Negative { banned, .. })
        | (Negative { banned, .. }, Positive { ctor, args, .. }) => {
            if banned.contains(ctor) {
                Unsat { vars }
            } else {
                Positive { vars, ctor: ctor.clone(), args: args.clone() }
            }
        }
        (Positive { ctor: c1, args: a1, .. }, Positive { ctor: c2, args: a2, .. }) => {
            if c1 == c2 && a1.len() == a2.len() {
                let args = a1.iter().zip(a2).map(|(x, y)| combine(x, y)).collect();
                Positive { vars, ctor: c1.clone(), args }
            } else {
                Unsat { vars }
            }
        }
    }
}

pub fn to_ndnf(p: &Pattern) -> Ndnf {
    let mut out = Vec::new();
    for k in dnf(&nnf(p)) {
        let n = normalize_conjunct(&k);
        if !out.contains(&n) {
            out.push(n);
        }
    }
    Ndnf(out)
}
