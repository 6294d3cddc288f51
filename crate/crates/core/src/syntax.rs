//! Surface syntax: a lexer and recursive-descent parser for programs made of
//! data declarations, top-level definitions and an optional `main`.
//!
//! ```text
//! data List = Nil | Cons(Bool, List);
//! def head(l) := case l of { Cons(x, _) => x, default => False };
//! main := head(Cons(True, Nil));
//! ```
//!
//! Pattern precedence is `!` over `&` over `|`. Variables start lowercase,
//! constructors uppercase, and `$` is reserved for compiler-generated names.
//! Line comments start with `//`.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use thiserror::Error;

use crate::pattern::{CtorName, Pattern, Value};
use crate::semantics::{CaseExpr, Clause, Defs, Expression};
use crate::typing::{CtorDecl, DataDecls, Type};

/// 1-based line and column, columns counted in characters.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Pos {
    pub line: usize,
    pub col: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.col)
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
#[error("{pos}: {message}")]
pub struct ParseError {
    pub pos: Pos,
    pub message: String,
}

fn err<T>(pos: Pos, message: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, message: message.into() })
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Def {
    pub name: String,
    pub params: Vec<String>,
    pub body: Expression,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Program {
    pub decls: DataDecls,
    pub defs: Vec<Def>,
    pub main: Option<Expression>,
}

impl Program {
    pub fn def(&self, name: &str) -> Option<&Def> {
        self.defs.iter().find(|d| d.name == name)
    }

    /// Definitions in the form the evaluator unfolds calls with.
    pub fn defs_map(&self) -> Defs {
        self.defs.iter().map(|d| (d.name.clone(), (d.params.clone(), d.body.clone()))).collect()
    }
}

/// Prints every item on one line; parsing the output gives the program back.
impl fmt::Display for Program {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for d in self.decls.decls() {
            let ctors: Vec<String> = d
                .ctors
                .iter()
                .map(|c| {
                    if c.args.is_empty() {
                        c.name.name.clone()
                    } else {
                        let args: Vec<String> = c.args.iter().map(ToString::to_string).collect();
                        format!("{}({})", c.name.name, args.join(", "))
                    }
                })
                .collect();
            writeln!(f, "data {} = {};", d.name, ctors.join(" | "))?;
        }
        for d in &self.defs {
            writeln!(f, "def {}({}) := {};", d.name, d.params.join(", "), d.body)?;
        }
        if let Some(m) = &self.main {
            writeln!(f, "main := {m};")?;
        }
        Ok(())
    }
}

/// Where a case expression and its clauses start.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct CaseSpan {
    pub pos: Pos,
    /// Start of each clause pattern.
    pub clauses: Vec<Pos>,
    pub default: Pos,
}

/// Positions inside one definition. `cases` follows the pre-order of
/// [`Expression::cases`]: a case, then the cases of its scrutinee, its
/// clauses and its default.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct BodySpan {
    pub pos: Pos,
    pub cases: Vec<CaseSpan>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct SourceMap {
    pub data: Vec<Pos>,
    pub defs: Vec<BodySpan>,
    pub main: Option<BodySpan>,
}

pub fn parse(src: &str) -> Result<Program, ParseError> {
    parse_mapped(src).map(|(p, _)| p)
}

pub fn parse_mapped(src: &str) -> Result<(Program, SourceMap), ParseError> {
    let mut p = Parser::new(src)?;
    let out = p.program()?;
    Ok(out)
}

pub fn parse_pattern(src: &str) -> Result<Pattern, ParseError> {
    let mut p = Parser::new(src)?;
    let pat = p.pattern()?;
    p.expect_eof()?;
    Ok(pat)
}

pub fn parse_expr(src: &str) -> Result<Expression, ParseError> {
    let mut p = Parser::new(src)?;
    let e = p.expr()?;
    p.expect_eof()?;
    Ok(e)
}

/// A comma-separated list of values such as `Mo, Cons(True, Nil)`.
pub fn parse_values(src: &str) -> Result<Vec<Value>, ParseError> {
    let mut p = Parser::new(src)?;
    let mut out = Vec::new();
    if p.peek() != &Tok::Eof {
        loop {
            let pos = p.pos();
            let e = p.expr()?;
            match e.as_value() {
                Some(v) => out.push(v),
                None => return err(pos, format!("`{e}` is not a value")),
            }
            if !p.eat(&Tok::Sym(",")) {
                break;
            }
        }
    }
    p.expect_eof()?;
    Ok(out)
}

pub fn parse_type(src: &str) -> Result<Type, ParseError> {
    let mut p = Parser::new(src)?;
    let t = p.ty()?;
    p.expect_eof()?;
    Ok(t)
}

// ---------------------------------------------------------------------------
// Lexer

#[derive(Clone, Debug, PartialEq, Eq)]
enum Tok {
    Lower(String),
    Upper(String),
    Keyword(&'static str),
    Sym(&'static str),
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Tok::Lower(s) | Tok::Upper(s) => write!(f, "`{s}`"),
            Tok::Keyword(s) | Tok::Sym(s) => write!(f, "`{s}`"),
            Tok::Eof => f.write_str("end of input"),
        }
    }
}

const KEYWORDS: [&str; 6] = ["data", "def", "case", "of", "default", "main"];
// Longest first, so that `:=` wins over a lone `:`.
const SYMBOLS: [&str; 17] = [":=", "=>", "(", ")", "{", "}", ",", ";", "=", "|", "&", "!", "_", "#", "*", "+", ":"];

fn lex(src: &str) -> Result<Vec<(Tok, Pos)>, ParseError> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut i, mut line, mut col) = (0, 1, 1);
    let advance = |i: &mut usize, line: &mut usize, col: &mut usize, n: usize| {
        for _ in 0..n {
            if chars[*i] == '\n' {
                *line += 1;
                *col = 1;
            } else {
                *col += 1;
            }
            *i += 1;
        }
    };
    while i < chars.len() {
        let c = chars[i];
        let pos = Pos { line, col };
        if c.is_whitespace() {
            advance(&mut i, &mut line, &mut col, 1);
            continue;
        }
        if c == '/' && chars.get(i + 1) == Some(&'/') {
            while i < chars.len() && chars[i] != '\n' {
                advance(&mut i, &mut line, &mut col, 1);
            }
            continue;
        }
        if c == '$' {
            return err(pos, "`$` is reserved for generated names");
        }
        let ident = |ch: char| ch.is_alphanumeric() || ch == '_' || ch == '\'';
        if c.is_alphabetic() {
            let start = i;
            let mut end = i;
            while end < chars.len() && ident(chars[end]) {
                end += 1;
            }
            if chars.get(end) == Some(&'$') {
                return err(Pos { line, col: col + end - start }, "`$` is reserved for generated names");
            }
            let word: String = chars[start..end].iter().collect();
            let tok = if let Some(k) = KEYWORDS.iter().find(|k| **k == word) {
                Tok::Keyword(k)
            } else if c.is_uppercase() {
                Tok::Upper(word)
            } else if c.is_lowercase() {
                Tok::Lower(word)
            } else {
                return err(pos, format!("identifier `{word}` must start with a lowercase or uppercase letter"));
            };
            advance(&mut i, &mut line, &mut col, end - start);
            out.push((tok, pos));
            continue;
        }
        if c == '_' && chars.get(i + 1).is_some_and(|n| ident(*n)) {
            return err(pos, "variables must start with a lowercase letter");
        }
        let rest: String = chars[i..chars.len().min(i + 2)].iter().collect();
        let Some(sym) = SYMBOLS.iter().find(|s| rest.starts_with(**s)) else {
            return err(pos, format!("unexpected character `{c}`"));
        };
        advance(&mut i, &mut line, &mut col, sym.chars().count());
        out.push((Tok::Sym(sym), pos));
    }
    out.push((Tok::Eof, Pos { line, col }));
    Ok(out)
}

// ---------------------------------------------------------------------------
// Parser

struct Parser {
    toks: Vec<(Tok, Pos)>,
    at: usize,
    /// Case spans of the body being parsed, in pre-order.
    cases: Vec<CaseSpan>,
}

impl Parser {
    fn new(src: &str) -> Result<Self, ParseError> {
        Ok(Parser { toks: lex(src)?, at: 0, cases: Vec::new() })
    }

    fn peek(&self) -> &Tok {
        &self.toks[self.at].0
    }

    fn peek2(&self) -> &Tok {
        &self.toks[(self.at + 1).min(self.toks.len() - 1)].0
    }

    fn pos(&self) -> Pos {
        self.toks[self.at].1
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.at].0.clone();
        if t != Tok::Eof {
            self.at += 1;
        }
        t
    }

    fn eat(&mut self, t: &Tok) -> bool {
        if self.peek() == t {
            self.bump();
            true
        } else {
            false
        }
    }

    fn expect(&mut self, t: Tok) -> Result<(), ParseError> {
        if self.eat(&t) {
            Ok(())
        } else {
            err(self.pos(), format!("expected {t}, found {}", self.peek()))
        }
    }

    fn expect_eof(&mut self) -> Result<(), ParseError> {
        self.expect(Tok::Eof)
    }

    fn lower(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Lower(s) => {
                self.bump();
                Ok(s)
            }
            t => err(self.pos(), format!("expected {what}, found {t}")),
        }
    }

    fn upper(&mut self, what: &str) -> Result<String, ParseError> {
        match self.peek().clone() {
            Tok::Upper(s) => {
                self.bump();
                Ok(s)
            }
            t => err(self.pos(), format!("expected {what}, found {t}")),
        }
    }

    /// `item (, item)*` between parentheses; the opening one is consumed.
    fn list<T>(&mut self, mut item: impl FnMut(&mut Self) -> Result<T, ParseError>) -> Result<Vec<T>, ParseError> {
        let mut out = Vec::new();
        if self.eat(&Tok::Sym(")")) {
            return Ok(out);
        }
        loop {
            out.push(item(self)?);
            if self.eat(&Tok::Sym(")")) {
                return Ok(out);
            }
            self.expect(Tok::Sym(","))?;
        }
    }

    fn program(&mut self) -> Result<(Program, SourceMap), ParseError> {
        let mut prog = Program::default();
        let mut map = SourceMap::default();
        loop {
            let pos = self.pos();
            match self.bump() {
                Tok::Eof => return Ok((prog, map)),
                Tok::Keyword("data") => {
                    let name = self.upper("a type name")?;
                    self.expect(Tok::Sym("="))?;
                    let mut ctors = Vec::new();
                    loop {
                        let cname = self.upper("a constructor name")?;
                        let args = if self.eat(&Tok::Sym("(")) { self.list(Self::ty)? } else { Vec::new() };
                        ctors.push(CtorDecl { name: CtorName::new(cname, args.len()), args });
                        if !self.eat(&Tok::Sym("|")) {
                            break;
                        }
                    }
                    self.expect(Tok::Sym(";"))?;
                    if let Err(e) = prog.decls.declare(name, ctors) {
                        return err(pos, e.to_string());
                    }
                    map.data.push(pos);
                }
                Tok::Keyword("def") => {
                    let name = self.lower("a definition name")?;
                    self.expect(Tok::Sym("("))?;
                    let params = self.list(|p| p.lower("a parameter name"))?;
                    self.expect(Tok::Sym(":="))?;
                    let body = self.expr()?;
                    self.expect(Tok::Sym(";"))?;
                    prog.defs.push(Def { name, params, body });
                    map.defs.push(BodySpan { pos, cases: std::mem::take(&mut self.cases) });
                }
                Tok::Keyword("main") => {
                    if prog.main.is_some() {
                        return err(pos, "`main` is defined twice");
                    }
                    self.expect(Tok::Sym(":="))?;
                    prog.main = Some(self.expr()?);
                    self.expect(Tok::Sym(";"))?;
                    map.main = Some(BodySpan { pos, cases: std::mem::take(&mut self.cases) });
                }
                t => return err(pos, format!("expected `data`, `def` or `main`, found {t}")),
            }
        }
    }

    /// `*` binds tighter than `+`; both associate to the right.
    fn ty(&mut self) -> Result<Type, ParseError> {
        let left = self.ty_product()?;
        if self.eat(&Tok::Sym("+")) {
            return Ok(Type::sum(left, self.ty()?));
        }
        Ok(left)
    }

    fn ty_product(&mut self) -> Result<Type, ParseError> {
        let left = self.ty_atom()?;
        if self.eat(&Tok::Sym("*")) {
            return Ok(Type::pair(left, self.ty_product()?));
        }
        Ok(left)
    }

    fn ty_atom(&mut self) -> Result<Type, ParseError> {
        if self.eat(&Tok::Sym("(")) {
            let t = self.ty()?;
            self.expect(Tok::Sym(")"))?;
            return Ok(t);
        }
        let name = self.upper("a type")?;
        Ok(if name == "Bool" { Type::Bool } else { Type::named(name) })
    }

    fn pattern(&mut self) -> Result<Pattern, ParseError> {
        let mut p = self.pattern_and()?;
        while self.eat(&Tok::Sym("|")) {
            p = Pattern::or(p, self.pattern_and()?);
        }
        Ok(p)
    }

    fn pattern_and(&mut self) -> Result<Pattern, ParseError> {
        let mut p = self.pattern_unary()?;
        while self.eat(&Tok::Sym("&")) {
            p = Pattern::and(p, self.pattern_unary()?);
        }
        Ok(p)
    }

    fn pattern_unary(&mut self) -> Result<Pattern, ParseError> {
        if self.eat(&Tok::Sym("!")) {
            return Ok(Pattern::neg(self.pattern_unary()?));
        }
        let pos = self.pos();
        match self.bump() {
            Tok::Sym("_") => Ok(Pattern::Wildcard),
            Tok::Sym("#") => Ok(Pattern::Absurd),
            Tok::Sym("(") => {
                let p = self.pattern()?;
                self.expect(Tok::Sym(")"))?;
                Ok(p)
            }
            Tok::Lower(x) => Ok(Pattern::Var(x)),
            Tok::Upper(c) => {
                let args = if self.eat(&Tok::Sym("(")) { self.list(Self::pattern)? } else { Vec::new() };
                Ok(Pattern::ctor(c, args))
            }
            t => err(pos, format!("expected a pattern, found {t}")),
        }
    }

    fn expr(&mut self) -> Result<Expression, ParseError> {
        let pos = self.pos();
        match self.bump() {
            Tok::Keyword("case") => self.case_rest(pos),
            Tok::Sym("(") => {
                let e = self.expr()?;
                self.expect(Tok::Sym(")"))?;
                Ok(e)
            }
            Tok::Lower(x) => {
                if self.eat(&Tok::Sym("(")) {
                    Ok(Expression::call(x, self.list(Self::expr)?))
                } else {
                    Ok(Expression::var(x))
                }
            }
            Tok::Upper(c) => {
                let args = if self.eat(&Tok::Sym("(")) { self.list(Self::expr)? } else { Vec::new() };
                Ok(Expression::ctor(c, args))
            }
            t => err(pos, format!("expected an expression, found {t}")),
        }
    }

    fn case_rest(&mut self, pos: Pos) -> Result<Expression, ParseError> {
        let slot = self.cases.len();
        self.cases.push(CaseSpan { pos, ..CaseSpan::default() });
        let scrutinee = self.expr()?;
        self.expect(Tok::Keyword("of"))?;
        self.expect(Tok::Sym("{"))?;
        let mut clauses = Vec::new();
        loop {
            let at = self.pos();
            if self.eat(&Tok::Keyword("default")) {
                self.expect(Tok::Sym("=>"))?;
                self.cases[slot].default = at;
                let default = self.expr()?;
                self.eat(&Tok::Sym(","));
                self.expect(Tok::Sym("}"))?;
                return Ok(Expression::Case(Box::new(CaseExpr { scrutinee, clauses, default })));
            }
            if self.peek() == &Tok::Sym("}") {
                return err(at, "a case needs a `default` clause");
            }
            self.cases[slot].clauses.push(at);
            let pattern = self.pattern()?;
            self.expect(Tok::Sym("=>"))?;
            let rhs = self.expr()?;
            if self.peek() != &Tok::Keyword("default") || self.peek2() != &Tok::Sym("=>") {
                self.expect(Tok::Sym(","))?;
            } else {
                self.eat(&Tok::Sym(","));
            }
            clauses.push(Clause::new(pattern, rhs));
        }
    }
}

// ---------------------------------------------------------------------------
// Validation

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Diagnostic {
    pub pos: Pos,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: {}", self.pos, self.message)
    }
}

/// Static checks beyond the grammar: unique definitions and parameters,
/// closed bodies, calls with the right arity, and, unless `untyped`, declared
/// constructors at their declared arity and declared argument types.
pub fn validate(prog: &Program, map: &SourceMap, untyped: bool) -> Vec<Diagnostic> {
    let mut out = Vec::new();
    let arities: BTreeMap<&str, usize> = prog.defs.iter().map(|d| (d.name.as_str(), d.params.len())).collect();
    if !untyped {
        for (d, pos) in prog.decls.decls().iter().zip(&map.data) {
            for c in &d.ctors {
                for t in &c.args {
                    for n in named_types(t) {
                        if prog.decls.get(&n).is_none() {
                            out.push(Diagnostic { pos: *pos, message: format!("unknown type `{n}` in `{}`", c.name) });
                        }
                    }
                }
            }
        }
    }
    let mut seen = BTreeSet::new();
    let bodies = prog.defs.iter().zip(&map.defs).map(|(d, s)| (Some(d), &d.body, s.pos));
    let main = prog.main.iter().zip(&map.main).map(|(e, s)| (None, e, s.pos));
    for (def, body, pos) in bodies.chain(main) {
        let mut say = |message: String| out.push(Diagnostic { pos, message });
        let params: Vec<String> = def.map(|d| d.params.clone()).unwrap_or_default();
        if let Some(d) = def {
            if !seen.insert(d.name.clone()) {
                say(format!("`{}` is defined twice", d.name));
            }
            let distinct: BTreeSet<&String> = params.iter().collect();
            if distinct.len() != params.len() {
                say(format!("`{}` repeats a parameter", d.name));
            }
        }
        let owner = def.map_or("main".to_string(), |d| format!("`{}`", d.name));
        for x in body.free_vars() {
            if !params.contains(&x) {
                say(format!("variable `{x}` is unbound in {owner}"));
            }
        }
        let mut calls = Vec::new();
        let mut ctors = BTreeSet::new();
        collect(body, &mut calls, &mut ctors);
        for (name, n) in calls {
            match arities.get(name.as_str()) {
                None => say(format!("call of undefined `{name}`")),
                Some(&k) if k != n => say(format!("`{name}` takes {k} arguments, called with {n}")),
                _ => {}
            }
        }
        if !untyped {
            for c in ctors {
                if !prog.decls.knows_ctor(&c) {
                    match prog.decls.lookup_ctor(&c.name) {
                        Some((_, decl)) => say(format!(
                            "constructor `{}` takes {} arguments, used with {}",
                            c.name, decl.name.arity, c.arity
                        )),
                        None => say(format!("undeclared constructor `{}`", c.name)),
                    }
                }
            }
        }
    }
    out
}

fn named_types(t: &Type) -> Vec<String> {
    match t {
        Type::Bool => Vec::new(),
        Type::Named(n) => vec![n.clone()],
        Type::Pair(a, b) | Type::Sum(a, b) => {
            let mut v = named_types(a);
            v.extend(named_types(b));
            v
        }
    }
}

fn collect(e: &Expression, calls: &mut Vec<(String, usize)>, ctors: &mut BTreeSet<CtorName>) {
    match e {
        Expression::Var(_) => {}
        Expression::Ctor(c, args) => {
            ctors.insert(c.clone());
            args.iter().for_each(|a| collect(a, calls, ctors));
        }
        Expression::Call(f, args) => {
            calls.push((f.clone(), args.len()));
            args.iter().for_each(|a| collect(a, calls, ctors));
        }
        Expression::Case(c) => {
            collect(&c.scrutinee, calls, ctors);
            for cl in &c.clauses {
                ctors.extend(cl.pattern.ctors());
                collect(&cl.rhs, calls, ctors);
            }
            collect(&c.default, calls, ctors);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn is_red_with_negation() {
        let e = parse_expr("case c of { Red => True, !Red => False, default => False }").unwrap();
        let Expression::Case(c) = e else { panic!() };
        assert_eq!(c.clauses[0].pattern, Pattern::nullary("Red"));
        assert_eq!(c.clauses[1].pattern, Pattern::neg(Pattern::nullary("Red")));
        assert_eq!(c.default, Expression::nullary("False"));
    }

    #[test]
    fn and_binds_tighter_than_or() {
        let p = parse_pattern("x & (Sa | Su)").unwrap();
        assert_eq!(p, Pattern::and(Pattern::var("x"), Pattern::or(Pattern::nullary("Sa"), Pattern::nullary("Su"))));
        let q = parse_pattern("x & Sa | Su").unwrap();
        assert_eq!(q, Pattern::or(Pattern::and(Pattern::var("x"), Pattern::nullary("Sa")), Pattern::nullary("Su")));
        let r = parse_pattern("!x & y").unwrap();
        assert_eq!(r, Pattern::and(Pattern::neg(Pattern::var("x")), Pattern::var("y")));
    }

    #[test]
    fn unbalanced_paren_is_positioned() {
        let e = parse_pattern("(x & Sa").unwrap_err();
        assert_eq!(e.pos, Pos { line: 1, col: 8 });
        let e = parse("data D = A;\ndef f(x) := case x of { (A => A, default => A };").unwrap_err();
        assert_eq!(e.pos.line, 2);
    }

    #[test]
    fn dollar_is_reserved() {
        assert!(parse_pattern("$k0").is_err());
        assert!(parse_pattern("x$").is_err());
    }

    #[test]
    fn types_parse_with_precedence() {
        let t = parse_type("Bool * Color + List").unwrap();
        assert_eq!(t, Type::sum(Type::pair(Type::Bool, Type::named("Color")), Type::named("List")));
        assert_eq!(parse_type(&t.to_string()).unwrap(), t);
    }

    const LISTS: &str = "
        // lists of booleans
        data List = Nil | Cons(Bool, List);
        def head(l) := case l of { Cons(x, _) => x, default => False };
        def both(l) := case l of {
            Cons(True, Cons(True, _)) => True,
            default => False
        };
        main := head(Cons(True, Nil));
    ";

    #[test]
    fn programs_round_trip() {
        let prog = parse(LISTS).unwrap();
        assert_eq!(prog.defs.len(), 2);
        assert!(prog.main.is_some());
        let printed = prog.to_string();
        assert_eq!(parse(&printed).unwrap(), prog);
    }

    #[test]
    fn source_map_records_cases() {
        let (prog, map) = parse_mapped(LISTS).unwrap();
        assert_eq!(map.defs.len(), prog.defs.len());
        let both = &map.defs[1];
        assert_eq!(both.pos.line, 5);
        assert_eq!(both.cases.len(), 1);
        assert_eq!(both.cases[0].clauses, vec![Pos { line: 6, col: 13 }]);
        assert_eq!(both.cases[0].default.line, 7);
    }

    #[test]
    fn validation_finds_problems() {
        let src = "data D = A | B(D);\ndef f(x) := B(y);\ndef f(x) := g(x);\nmain := C(A);";
        let (prog, map) = parse_mapped(src).unwrap();
        let msgs: Vec<String> = validate(&prog, &map, false).iter().map(ToString::to_string).collect();
        assert!(msgs.iter().any(|m| m.contains("`y` is unbound")), "{msgs:?}");
        assert!(msgs.iter().any(|m| m.starts_with("3:1") && m.contains("defined twice")), "{msgs:?}");
        assert!(msgs.iter().any(|m| m.contains("undefined `g`")), "{msgs:?}");
        assert!(msgs.iter().any(|m| m.contains("undeclared constructor `C`")), "{msgs:?}");
        let untyped: Vec<String> = validate(&prog, &map, true).iter().map(ToString::to_string).collect();
        assert!(!untyped.iter().any(|m| m.contains("constructor")));
    }

    #[test]
    fn values_parse() {
        let vs = parse_values("Mo, Cons(True, Nil)").unwrap();
        assert_eq!(vs[1], Value::new("Cons", vec![Value::nullary("True"), Value::nullary("Nil")]));
        assert!(parse_values("x").is_err());
        assert_eq!(parse_values("").unwrap(), Vec::new());
    }
}
