//! `patc check`: wellformedness and overlap as errors, typing on request,
//! and exhaustiveness as notes. Every case carries a default clause, so a
//! value that no clause matches is not an error.

use std::io::Write;

use patalg::exhaustiveness::{uncovered, PatternMatrix};
use patalg::semantics::Expression;
use patalg::syntax::{BodySpan, Pos, Program, SourceMap};
use patalg::typing::{infer_signatures, scrutinee_type, Typer};
use patalg::wellformed::wf_expr_with;

use crate::{EXIT_FAIL, EXIT_OK};

#[derive(Clone, Copy, Debug, Default)]
pub struct Options {
    pub typed: bool,
    pub type_aware_overlap: bool,
    pub untyped: bool,
}

struct Sink<'a> {
    file: &'a str,
    err: &'a mut dyn Write,
    errors: usize,
    notes: usize,
}

impl Sink<'_> {
    fn error(&mut self, pos: Pos, message: impl std::fmt::Display) {
        self.errors += 1;
        let _ = writeln!(self.err, "{}:{pos}: error: {message}", self.file);
    }

    fn note(&mut self, pos: Pos, message: impl std::fmt::Display) {
        self.notes += 1;
        let _ = writeln!(self.err, "{}:{pos}: note: {message}", self.file);
    }
}

pub fn check(
    prog: &Program,
    map: &SourceMap,
    file: &str,
    opts: Options,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> i32 {
    let mut sink = Sink { file, err, errors: 0, notes: 0 };
    let bodies: Vec<(&Expression, &BodySpan)> = prog
        .defs
        .iter()
        .map(|d| &d.body)
        .zip(&map.defs)
        .chain(prog.main.iter().zip(map.main.iter()))
        .collect();

    let decls = opts.type_aware_overlap.then_some(&prog.decls);
    for (body, span) in &bodies {
        for v in wf_expr_with(body, decls).violations {
            let case = v.case_index.and_then(|i| span.cases.get(i));
            let pos = match (case, v.clauses.last()) {
                (Some(c), Some(&k)) => c.clauses.get(k).copied().unwrap_or(c.pos),
                (Some(c), None) => c.pos,
                (None, _) => span.pos,
            };
            sink.error(pos, &v);
        }
    }

    if !opts.untyped {
        for (body, span) in &bodies {
            for (case, cspan) in body.cases().into_iter().zip(&span.cases) {
                if case.clauses.is_empty() {
                    continue;
                }
                let matrix = PatternMatrix::from_case(case);
                let tau = scrutinee_type(case, &prog.decls);
                match uncovered(&matrix, tau.as_ref().map(std::slice::from_ref), &prog.decls) {
                    Ok(None) => {}
                    Ok(Some(Ok(values))) => {
                        let shown: Vec<String> = values.iter().map(ToString::to_string).collect();
                        sink.note(cspan.pos, format!("`{}` matches no clause and reaches the default", shown.join(", ")));
                    }
                    Ok(Some(Err(skeletons))) => {
                        let shown: Vec<String> = skeletons.iter().map(ToString::to_string).collect();
                        sink.note(cspan.pos, format!("values like `{}` reach the default", shown.join(", ")));
                    }
                    Err(e) => sink.note(cspan.pos, format!("exhaustiveness not checked: {e}")),
                }
            }
        }
    }

    if opts.typed {
        match infer_signatures(&prog.decls, &prog.defs_map()) {
            Err((name, e)) => {
                let pos = prog.defs.iter().zip(&map.defs).find(|(d, _)| d.name == name).map_or(Pos::default(), |(_, s)| s.pos);
                sink.error(pos, format!("in `{name}`: {e}"));
            }
            Ok(sigs) => {
                if let (Some(main), Some(span)) = (&prog.main, &map.main) {
                    let mut typer = Typer::new(prog.decls.clone());
                    typer.functions = sigs;
                    if let Err(e) = typer.synth(&Vec::new(), main) {
                        sink.error(span.pos, format!("in `main`: {e}"));
                    }
                }
            }
        }
    }

    let (errors, notes) = (sink.errors, sink.notes);
    let plural = |n: usize, word: &str| if n == 1 { format!("1 {word}") } else { format!("{n} {word}s") };
    if errors == 0 {
        let _ = writeln!(out, "{file}: ok, {}", plural(notes, "note"));
        EXIT_OK
    } else {
        let _ = writeln!(out, "{file}: {}, {}", plural(errors, "error"), plural(notes, "note"));
        EXIT_FAIL
    }
}
