//! Deciding whether two patterns in normalized disjunctive normal form can
//! match a common value.
//!
//! The decision is conservative: `true` (overlap) may be reported for
//! disjoint patterns, but `false` is only reported when no value matches
//! both. Without declarations two negative conjuncts always overlap; with
//! declarations they are disjoint when their banned sets jointly cover a
//! whole signature.

use std::collections::{BTreeSet, HashMap};
use std::sync::RwLock;

use thiserror::Error;

use crate::normalize::{to_ndnf, NConjunct, Ndnf};
use crate::pattern::Pattern;
use crate::typing::{DataDecls, SignatureError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum OverlapError {
    #[error(transparent)]
    Signature(#[from] SignatureError),
}

/// Overlap decisions with a cache of conjunct pairs. The cache is filled
/// idempotently, so concurrent readers observe either no entry or the final
/// answer.
#[derive(Debug, Default)]
pub struct OverlapChecker {
    decls: Option<DataDecls>,
    cache: RwLock<HashMap<(NConjunct, NConjunct), bool>>,
}

impl OverlapChecker {
    pub fn new(decls: Option<DataDecls>) -> Self {
        OverlapChecker { decls, cache: RwLock::new(HashMap::new()) }
    }

    pub fn decls(&self) -> Option<&DataDecls> {
        self.decls.as_ref()
    }

    pub fn decide(&self, a: &Ndnf, b: &Ndnf) -> Result<bool, OverlapError> {
        for k1 in a.conjuncts() {
            for k2 in b.conjuncts() {
                if self.conjuncts(k1, k2)? {
                    return Ok(true);
                }
            }
        }
        Ok(false)
    }

    pub fn disjoint(&self, p: &Pattern, q: &Pattern) -> Result<bool, OverlapError> {
        Ok(!self.decide(&to_ndnf(p), &to_ndnf(q))?)
    }

    fn conjuncts(&self, a: &NConjunct, b: &NConjunct) -> Result<bool, OverlapError> {
        // Order-independent key: the relation is symmetric.
        let key = if a <= b { (a.clone(), b.clone()) } else { (b.clone(), a.clone()) };
        if let Some(&hit) = self.cache.read().expect("overlap cache poisoned").get(&key) {
            return Ok(hit);
        }
        let result = self.compute(a, b)?;
        self.cache.write().expect("overlap cache poisoned").insert(key, result);
        Ok(result)
    }

    fn compute(&self, a: &NConjunct, b: &NConjunct) -> Result<bool, OverlapError> {
        use NConjunct::*;
        match (a, b) {
            (Unsat { .. }, _) | (_, Unsat { .. }) => Ok(false),
            (Positive { ctor: c1, args: a1, .. }, Positive { ctor: c2, args: a2, .. }) => {
                if c1 != c2 || a1.len() != a2.len() {
                    return Ok(false);
                }
                for (x, y) in a1.iter().zip(a2) {
                    if !self.conjuncts(x, y)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            (Positive { ctor, args, .. }, Negative { banned, .. })
            | (Negative { banned, .. }, Positive { ctor, args, .. }) => {
                if banned.contains(ctor) {
                    return Ok(false);
                }
                let wild = NConjunct::wildcard();
                for x in args {
                    if !self.conjuncts(x, &wild)? {
                        return Ok(false);
                    }
                }
                Ok(true)
            }
            (Negative { banned: b1, .. }, Negative { banned: b2, .. }) => {
                let Some(decls) = &self.decls else {
                    return Ok(true);
                };
                let all: BTreeSet<_> = b1.union(b2).cloned().collect();
                match decls.signature_containing(&all)? {
                    Some(sig) => Ok(!sig.ctors.is_subset(&all)),
                    None => Ok(true),
                }
            }
        }
    }
}

/// Whether `a` and `b` may match a common value.
pub fn decide(a: &Ndnf, b: &Ndnf, decls: Option<&DataDecls>) -> Result<bool, OverlapError> {
    OverlapChecker::new(decls.cloned()).decide(a, b)
}

/// `!decide(to_ndnf(p), to_ndnf(q))`; never claims disjointness falsely.
pub fn disjoint(p: &Pattern, q: &Pattern, decls: Option<&DataDecls>) -> Result<bool, OverlapError> {
    Ok(!decide(&to_ndnf(p), &to_ndnf(q), decls)?)
}

/// [`disjoint`] in conservative mode, which cannot fail.
pub fn disjoint_untyped(p: &Pattern, q: &Pattern) -> bool {
    disjoint(p, q, None).expect("untyped overlap is total")
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pattern::CtorName;

    fn pos(name: &str) -> Ndnf {
        Ndnf::single(NConjunct::Positive { vars: BTreeSet::new(), ctor: CtorName::new(name, 0), args: vec![] })
    }

    fn neg(names: &[&str]) -> Ndnf {
        Ndnf::single(NConjunct::Negative {
            vars: BTreeSet::new(),
            banned: names.iter().map(|n| CtorName::new(*n, 0)).collect(),
        })
    }

    #[test]
    fn conjunct_rules() {
        assert!(decide(&pos("Red"), &neg(&["Green"]), None).unwrap());
        assert!(!decide(&pos("Red"), &pos("Green"), None).unwrap());
        assert!(decide(&neg(&["A"]), &neg(&["B"]), None).unwrap());
        assert!(!decide(&pos("Red"), &Ndnf::single(NConjunct::unsat()), None).unwrap());
        assert!(!decide(&pos("Red"), &Ndnf(vec![]), None).unwrap());
    }

    #[test]
    fn pattern_disjointness() {
        let red = Pattern::nullary("Red");
        assert!(disjoint_untyped(&red, &Pattern::neg(red.clone())));
        assert!(!disjoint_untyped(&red, &red));
        assert!(!disjoint_untyped(&Pattern::Wildcard, &red));
        assert!(!disjoint_untyped(&Pattern::Wildcard, &Pattern::neg(red.clone())));
    }

    #[test]
    fn nested_arguments_are_compared() {
        let t = Pattern::nullary("True");
        let f = Pattern::nullary("False");
        let p = Pattern::ctor("Pair", vec![t.clone(), Pattern::Wildcard]);
        let q = Pattern::ctor("Pair", vec![f.clone(), Pattern::Wildcard]);
        assert!(disjoint_untyped(&p, &q));
        let r = Pattern::ctor("Pair", vec![Pattern::Wildcard, f]);
        assert!(!disjoint_untyped(&p, &r));
        let absurd_arg = Pattern::ctor("Pair", vec![Pattern::Absurd, Pattern::Wildcard]);
        assert!(disjoint_untyped(&absurd_arg, &Pattern::Wildcard));
    }

    #[test]
    fn type_aware_negatives() {
        let decls = DataDecls::new().with("AB", &[("A", vec![]), ("B", vec![])]);
        assert!(!decide(&neg(&["A"]), &neg(&["B"]), Some(&decls)).unwrap());
        assert!(decide(&neg(&["A"]), &neg(&["A"]), Some(&decls)).unwrap());
        assert!(decide(&neg(&[]), &neg(&[]), Some(&decls)).unwrap());
        assert!(decide(&neg(&["Zed"]), &neg(&["A"]), Some(&decls)).is_err());
    }

    #[test]
    fn symmetric_on_examples() {
        let cases = [pos("Red"), neg(&["Red"]), neg(&[]), Ndnf::single(NConjunct::unsat())];
        for a in &cases {
            for b in &cases {
                assert_eq!(decide(a, b, None).unwrap(), decide(b, a, None).unwrap());
            }
        }
    }
}
