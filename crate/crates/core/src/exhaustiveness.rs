//! Usefulness and exhaustiveness of pattern matrices in normalized form.
//!
//! The recursion always examines the first column. [`useful`] splits a
//! negative first pattern `{xs} & !B` over every head constructor of the
//! column not in `B`, plus the default matrix when some constructor of the
//! type is neither a head nor in `B`. [`useful_as_published`] follows the
//! three-way case split literally; it can report a matrix exhaustive while a
//! value is uncovered (see the `published_rule_misses_a_value` test).

use std::collections::BTreeSet;
use std::fmt;

use thiserror::Error;

use crate::normalize::{NConjunct, Ndnf};
use crate::oracle::enumerate_values;
use crate::pattern::{match_pos, CtorName, Value};
use crate::semantics::CaseExpr;
use crate::typing::{DataDecls, SignatureError, Type};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ExhaustError {
    #[error(transparent)]
    Signature(#[from] SignatureError),
    #[error("pattern vector has {0} entries for a matrix of width {1}")]
    Width(usize, usize),
}

/// Rows of normalized patterns without right-hand sides; every row has
/// `width` cells.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PatternMatrix {
    pub rows: Vec<Vec<Ndnf>>,
    pub width: usize,
}

impl PatternMatrix {
    pub fn new(width: usize, rows: Vec<Vec<Ndnf>>) -> Self {
        assert!(rows.iter().all(|r| r.len() == width), "pattern matrix must be rectangular");
        PatternMatrix { rows, width }
    }

    /// One column holding the clause patterns of `case`.
    pub fn from_case(case: &CaseExpr) -> Self {
        let rows = case.clauses.iter().map(|c| vec![crate::normalize::to_ndnf(&c.pattern)]).collect();
        PatternMatrix { rows, width: 1 }
    }
}

impl fmt::Display for PatternMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, row) in self.rows.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let cells: Vec<String> = row.iter().map(ToString::to_string).collect();
            write!(f, "[{}]", cells.join("  "))?;
        }
        Ok(())
    }
}

/// A partially determined value: a constructor tree whose leaves may be
/// any value of the column type outside a banned set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Skeleton {
    Any { banned: BTreeSet<CtorName>, ty: Option<Type> },
    Ctor(CtorName, Vec<Skeleton>),
}

impl Skeleton {
    /// A smallest value fitting the skeleton, when its type can be determined.
    pub fn concretize(&self, decls: &DataDecls) -> Option<Value> {
        match self {
            Skeleton::Ctor(c, args) => {
                let args = args.iter().map(|a| a.concretize(decls)).collect::<Option<Vec<_>>>()?;
                Some(Value { ctor: c.clone(), args })
            }
            Skeleton::Any { banned, ty } => {
                let ty = match ty {
                    Some(t) => t.clone(),
                    None => type_of_signature(decls, banned)?,
                };
                (1..=6).find_map(|depth| {
                    let values = enumerate_values(decls, &ty, depth).ok()?;
                    values.into_iter().find(|v| !banned.contains(&v.ctor))
                })
            }
        }
    }
}

fn type_of_signature(decls: &DataDecls, ctors: &BTreeSet<CtorName>) -> Option<Type> {
    let sig = decls.signature_containing(ctors).ok()??;
    match sig.type_name.as_str() {
        "Bool" => Some(Type::Bool),
        // Pair and sum component types cannot be recovered from names.
        "*" | "+" => None,
        name => Some(Type::named(name)),
    }
}

impl fmt::Display for Skeleton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Skeleton::Any { banned, .. } if banned.is_empty() => f.write_str("_"),
            Skeleton::Any { banned, .. } => {
                let names: Vec<&str> = banned.iter().map(|c| c.name.as_str()).collect();
                write!(f, "!{{{}}}", names.join(", "))
            }
            Skeleton::Ctor(c, args) => {
                f.write_str(&c.name)?;
                if !args.is_empty() {
                    let items: Vec<String> = args.iter().map(ToString::to_string).collect();
                    write!(f, "({})", items.join(", "))?;
                }
                Ok(())
            }
        }
    }
}

/// Rows of `P` split so that every first cell is a single conjunct.
fn split_first(rows: &[Vec<Ndnf>]) -> Vec<(NConjunct, &[Ndnf])> {
    let mut out = Vec::new();
    for row in rows {
        for k in row[0].conjuncts() {
            out.push((k.clone(), &row[1..]));
        }
    }
    out
}

fn prepend(head: Vec<Ndnf>, rest: &[Ndnf]) -> Vec<Ndnf> {
    let mut row = head;
    row.extend_from_slice(rest);
    row
}

/// Rows of the specialization of `P` at `ctor`, first column only.
pub fn table_b1_specialize(p: &PatternMatrix, ctor: &CtorName) -> PatternMatrix {
    let mut rows = Vec::new();
    if p.width > 0 {
        for (k, rest) in split_first(&p.rows) {
            match k {
                NConjunct::Positive { ctor: c, args, .. } if &c == ctor => {
                    rows.push(prepend(args.into_iter().map(Ndnf::single).collect(), rest));
                }
                NConjunct::Negative { banned, .. } if !banned.contains(ctor) => {
                    rows.push(prepend(vec![Ndnf::wildcard(); ctor.arity], rest));
                }
                _ => {}
            }
        }
    }
    PatternMatrix { rows, width: (p.width + ctor.arity).saturating_sub(1) }
}

/// Rows of the default matrix of `P`: negative first cells survive and the
/// first column is dropped.
pub fn table_b1_default(p: &PatternMatrix) -> PatternMatrix {
    let mut rows = Vec::new();
    if p.width > 0 {
        for (k, rest) in split_first(&p.rows) {
            if let NConjunct::Negative { .. } = k {
                rows.push(rest.to_vec());
            }
        }
    }
    PatternMatrix { rows, width: p.width.saturating_sub(1) }
}

fn heads(p: &PatternMatrix) -> (BTreeSet<CtorName>, BTreeSet<CtorName>) {
    let mut pos = BTreeSet::new();
    let mut neg = BTreeSet::new();
    for row in &p.rows {
        for k in row[0].conjuncts() {
            match k {
                NConjunct::Positive { ctor, .. } => {
                    pos.insert(ctor.clone());
                }
                NConjunct::Negative { banned, .. } => neg.extend(banned.iter().cloned()),
                NConjunct::Unsat { .. } => {}
            }
        }
    }
    (pos, neg)
}

struct Search<'a> {
    decls: &'a DataDecls,
}

impl Search<'_> {
    fn arg_types(&self, ty: &Option<Type>, c: &CtorName) -> Vec<Option<Type>> {
        let from_type = ty.as_ref().and_then(|t| self.decls.ctor_args(t, c));
        let from_decl = || {
            self.decls
                .lookup_ctor(&c.name)
                .filter(|(_, cd)| cd.name == *c)
                .map(|(_, cd)| cd.args.clone())
        };
        match from_type.or_else(from_decl) {
            Some(args) => args.into_iter().map(Some).collect(),
            None => vec![None; c.arity],
        }
    }

    /// Whether some constructor of the column type lies outside `known`.
    fn has_other_ctor(&self, ty: &Option<Type>, known: &BTreeSet<CtorName>) -> Result<bool, ExhaustError> {
        if let Some(all) = ty.as_ref().and_then(|t| self.decls.ctors_of(t)) {
            return Ok(all.iter().any(|(c, _)| !known.contains(c)));
        }
        match self.decls.signature_containing(known)? {
            Some(sig) => Ok(!sig.ctors.is_subset(known)),
            // Nothing is known about the type; every type has a constructor.
            None => Ok(true),
        }
    }

    fn specialized(
        &self,
        p: &PatternMatrix,
        c: &CtorName,
        head: Vec<Ndnf>,
        rest: &[Ndnf],
        types: &[Option<Type>],
    ) -> Result<Option<Vec<Skeleton>>, ExhaustError> {
        let arg_types = self.arg_types(&types[0], c);
        let mut sub_types = arg_types;
        sub_types.extend_from_slice(&types[1..]);
        let found = self.useful(&table_b1_specialize(p, c), &prepend(head, rest), &sub_types)?;
        Ok(found.map(|mut w| {
            let tail = w.split_off(c.arity);
            let mut out = vec![Skeleton::Ctor(c.clone(), w)];
            out.extend(tail);
            out
        }))
    }

    fn useful(
        &self,
        p: &PatternMatrix,
        pvec: &[Ndnf],
        types: &[Option<Type>],
    ) -> Result<Option<Vec<Skeleton>>, ExhaustError> {
        if pvec.is_empty() {
            return Ok(if p.rows.is_empty() { Some(Vec::new()) } else { None });
        }
        let rest = &pvec[1..];
        for k in pvec[0].conjuncts() {
            let found = match k {
                NConjunct::Unsat { .. } => None,
                NConjunct::Positive { ctor, args, .. } => {
                    let head = args.iter().cloned().map(Ndnf::single).collect();
                    self.specialized(p, ctor, head, rest, types)?
                }
                NConjunct::Negative { banned, .. } => {
                    let (pos, neg) = heads(p);
                    let all_heads: BTreeSet<CtorName> = pos.union(&neg).cloned().collect();
                    let mut found = None;
                    for c in all_heads.difference(banned) {
                        let head = vec![Ndnf::wildcard(); c.arity];
                        if let Some(w) = self.specialized(p, c, head, rest, types)? {
                            found = Some(w);
                            break;
                        }
                    }
                    if found.is_none() {
                        let known: BTreeSet<CtorName> = all_heads.union(banned).cloned().collect();
                        if self.has_other_ctor(&types[0], &known)? {
                            let sub = self.useful(&table_b1_default(p), rest, &types[1..])?;
                            found = sub.map(|w| {
                                let mut out = vec![Skeleton::Any { banned: known, ty: types[0].clone() }];
                                out.extend(w);
                                out
                            });
                        }
                    }
                    found
                }
            };
            if found.is_some() {
                return Ok(found);
            }
        }
        Ok(None)
    }
}

fn check_width(p: &PatternMatrix, pvec: &[Ndnf]) -> Result<(), ExhaustError> {
    if pvec.len() != p.width {
        return Err(ExhaustError::Width(pvec.len(), p.width));
    }
    Ok(())
}

/// Whether some value vector matches `pvec` but no row of `p`.
pub fn useful(p: &PatternMatrix, pvec: &[Ndnf], decls: &DataDecls) -> Result<bool, ExhaustError> {
    Ok(useful_witness(p, pvec, None, decls)?.is_some())
}

/// [`useful`] returning a skeleton of a value vector that matches `pvec` and
/// no row. Column types, when given, decide which constructors exist.
pub fn useful_witness(
    p: &PatternMatrix,
    pvec: &[Ndnf],
    types: Option<&[Type]>,
    decls: &DataDecls,
) -> Result<Option<Vec<Skeleton>>, ExhaustError> {
    check_width(p, pvec)?;
    let types: Vec<Option<Type>> = match types {
        Some(ts) => ts.iter().cloned().map(Some).collect(),
        None => vec![None; p.width],
    };
    Search { decls }.useful(p, pvec, &types)
}

pub fn exhaustive(p: &PatternMatrix, decls: &DataDecls) -> Result<bool, ExhaustError> {
    Ok(!useful(p, &vec![Ndnf::wildcard(); p.width], decls)?)
}

pub fn exhaustive_typed(p: &PatternMatrix, types: &[Type], decls: &DataDecls) -> Result<bool, ExhaustError> {
    Ok(useful_witness(p, &vec![Ndnf::wildcard(); p.width], Some(types), decls)?.is_none())
}

/// Concrete values, or the skeleton that could not be made concrete.
pub type Witness = Result<Vec<Value>, Vec<Skeleton>>;

/// A value vector matched by no row, when one exists. Concrete values are
/// checked against every row; `Err` inside the option carries a skeleton
/// that could not be made concrete.
pub fn uncovered(
    p: &PatternMatrix,
    types: Option<&[Type]>,
    decls: &DataDecls,
) -> Result<Option<Witness>, ExhaustError> {
    let Some(skeletons) = useful_witness(p, &vec![Ndnf::wildcard(); p.width], types, decls)? else {
        return Ok(None);
    };
    let Some(values) = skeletons.iter().map(|s| s.concretize(decls)).collect::<Option<Vec<_>>>() else {
        return Ok(Some(Err(skeletons)));
    };
    let covered = p.rows.iter().any(|row| {
        row.iter().zip(&values).all(|(cell, v)| !match_pos(&cell.to_pattern(), v).is_empty())
    });
    assert!(!covered, "witness {values:?} is matched by a row");
    Ok(Some(Ok(values)))
}

/// The usefulness recursion exactly as first stated: a negative first
/// pattern is split over the negative heads of the column when there are
/// any, and otherwise over the positive heads when they form a complete
/// signature, falling back to the default matrix.
pub fn useful_as_published(p: &PatternMatrix, pvec: &[Ndnf], decls: &DataDecls) -> Result<bool, ExhaustError> {
    check_width(p, pvec)?;
    published(p, pvec, decls)
}

fn published(p: &PatternMatrix, pvec: &[Ndnf], decls: &DataDecls) -> Result<bool, ExhaustError> {
    if pvec.is_empty() {
        return Ok(p.rows.is_empty());
    }
    let rest = &pvec[1..];
    for k in pvec[0].conjuncts() {
        let useful = match k {
            NConjunct::Unsat { .. } => false,
            NConjunct::Positive { ctor, args, .. } => {
                let head = args.iter().cloned().map(Ndnf::single).collect();
                published(&table_b1_specialize(p, ctor), &prepend(head, rest), decls)?
            }
            NConjunct::Negative { banned, .. } => {
                let (pos, neg) = heads(p);
                let split = |cs: &BTreeSet<CtorName>| -> Result<bool, ExhaustError> {
                    for c in cs {
                        // The specialization of the vector is empty for banned c.
                        if banned.contains(c) {
                            continue;
                        }
                        let head = vec![Ndnf::wildcard(); c.arity];
                        if published(&table_b1_specialize(p, c), &prepend(head, rest), decls)? {
                            return Ok(true);
                        }
                    }
                    Ok(false)
                };
                if !neg.is_empty() {
                    split(&neg)?
                } else {
                    let complete = match decls.signature_containing(&pos)? {
                        Some(sig) => sig.ctors.is_subset(&pos),
                        None => false,
                    };
                    if complete {
                        split(&pos)?
                    } else {
                        published(&table_b1_default(p), rest, decls)?
                    }
                }
            }
        };
        if useful {
            return Ok(true);
        }
    }
    Ok(false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::normalize::to_ndnf;
    use crate::pattern::Pattern;

    fn day_decls() -> DataDecls {
        let days = ["Mo", "Tu", "We", "Th", "Fr", "Sa", "Su"];
        let ctors: Vec<(&str, Vec<Type>)> = days.iter().map(|d| (*d, vec![])).collect();
        DataDecls::new()
            .with("Day", &ctors)
            .with("Color", &[("Red", vec![]), ("Green", vec![]), ("Blue", vec![])])
            .with("AB", &[("A", vec![]), ("B", vec![])])
    }

    fn cell(p: Pattern) -> Ndnf {
        to_ndnf(&p)
    }

    fn c(name: &str) -> Pattern {
        Pattern::nullary(name)
    }

    fn weekend() -> PatternMatrix {
        let y = Pattern::var("y");
        PatternMatrix::new(
            1,
            vec![
                vec![cell(Pattern::and(y.clone(), Pattern::or(c("Sa"), c("Su"))))],
                vec![cell(Pattern::and(y, Pattern::neg(Pattern::any_of([c("Fr"), c("Sa"), c("Su")]))))],
            ],
        )
    }

    #[test]
    fn base_cases() {
        let decls = DataDecls::new();
        assert!(!useful(&PatternMatrix::new(0, vec![vec![]]), &[], &decls).unwrap());
        assert!(useful(&PatternMatrix::new(0, vec![]), &[], &decls).unwrap());
    }

    #[test]
    fn weekend_is_not_exhaustive_and_misses_friday() {
        let decls = day_decls();
        let p = weekend();
        assert!(useful(&p, &[Ndnf::wildcard()], &decls).unwrap());
        assert!(useful_as_published(&p, &[Ndnf::wildcard()], &decls).unwrap());
        let Some(Ok(values)) = uncovered(&p, Some(&[Type::named("Day")]), &decls).unwrap() else { panic!() };
        assert_eq!(values, vec![Value::nullary("Fr")]);
    }

    #[test]
    fn is_red_is_exhaustive() {
        let decls = day_decls();
        let p = PatternMatrix::new(1, vec![vec![cell(c("Red"))], vec![cell(Pattern::neg(c("Red")))]]);
        assert!(exhaustive(&p, &decls).unwrap());
        assert!(!useful_as_published(&p, &[Ndnf::wildcard()], &decls).unwrap());
    }

    #[test]
    fn wildcard_row_is_exhaustive() {
        let p = PatternMatrix::new(2, vec![vec![Ndnf::wildcard(), Ndnf::wildcard()]]);
        assert!(exhaustive(&p, &DataDecls::new()).unwrap());
    }

    #[test]
    fn incomplete_positive_heads_fall_to_default() {
        let decls = day_decls();
        let p = PatternMatrix::new(1, vec![vec![cell(c("Red"))], vec![cell(c("Green"))]]);
        let Some(Ok(values)) = uncovered(&p, None, &decls).unwrap() else { panic!() };
        assert_eq!(values, vec![Value::nullary("Blue")]);
        let q = PatternMatrix::new(1, vec![vec![cell(c("Red"))], vec![cell(c("Green"))], vec![cell(c("Blue"))]]);
        assert!(exhaustive(&q, &decls).unwrap());
    }

    #[test]
    fn published_rule_misses_a_value() {
        // Columns AB and Bool; (B, False) matches neither row.
        let decls = day_decls();
        let p = PatternMatrix::new(
            2,
            vec![vec![cell(Pattern::neg(c("A"))), cell(c("True"))], vec![cell(c("A")), Ndnf::wildcard()]],
        );
        let wild = [Ndnf::wildcard(), Ndnf::wildcard()];
        assert!(!useful_as_published(&p, &wild, &decls).unwrap());
        assert!(useful(&p, &wild, &decls).unwrap());
        let Some(Ok(values)) = uncovered(&p, Some(&[Type::named("AB"), Type::Bool]), &decls).unwrap() else {
            panic!()
        };
        assert_eq!(values, vec![Value::nullary("B"), Value::nullary("False")]);
    }

    #[test]
    fn table_b1_rows() {
        let cons = CtorName::new("Cons", 2);
        let p = PatternMatrix::new(
            2,
            vec![
                vec![cell(Pattern::ctor("Cons", vec![c("True"), Pattern::Wildcard])), Ndnf::wildcard()],
                vec![cell(Pattern::Absurd), Ndnf::wildcard()],
                // Written directly: normalizing `!Cons(_, _)` also yields
                // `Cons(#, _)` disjuncts.
                vec![
                    Ndnf::single(NConjunct::Negative { vars: BTreeSet::new(), banned: BTreeSet::from([cons.clone()]) }),
                    cell(c("A")),
                ],
                vec![cell(Pattern::neg(c("Nil"))), cell(c("B"))],
            ],
        );
        let s = table_b1_specialize(&p, &cons);
        assert_eq!(s.width, 3);
        assert_eq!(s.rows.len(), 2);
        assert_eq!(s.rows[0][0], cell(c("True")));
        assert_eq!(s.rows[1], vec![Ndnf::wildcard(), Ndnf::wildcard(), cell(c("B"))]);
        let d = table_b1_default(&p);
        assert_eq!(d.width, 1);
        assert_eq!(d.rows, vec![vec![cell(c("A"))], vec![cell(c("B"))]]);
    }

    #[test]
    fn unknown_constructors_are_an_error() {
        let p = PatternMatrix::new(1, vec![vec![cell(c("Zed"))]]);
        assert!(exhaustive(&p, &DataDecls::new()).is_err());
    }

    #[test]
    fn nested_witness() {
        let decls = DataDecls::new().with("List", &[("Nil", vec![]), ("Cons", vec![Type::Bool, Type::named("List")])]);
        let p = PatternMatrix::new(
            1,
            vec![
                vec![cell(c("Nil"))],
                vec![cell(Pattern::ctor("Cons", vec![c("True"), Pattern::Wildcard]))],
            ],
        );
        let Some(Ok(values)) = uncovered(&p, Some(&[Type::named("List")]), &decls).unwrap() else { panic!() };
        assert_eq!(values[0].to_string(), "Cons(False, Nil)");
    }
}
