use std::collections::BTreeMap;

use super::sexpr::{parse_all, parse_one, Pos, Sexp};
use super::{DiagCode, Diagnostic};
use crate::interp::{InterpError, Interpretation, PositiveFormula};
use crate::kernel::{parse_rational, Connective, TruthValue};
use crate::semantics::{encode_tuple, Element, GeneralStructure};
use crate::syntax::{
    validate_symbol_name, Formula, FormulaSequence, Quantifier, Schedule, SymbolKind, Term, Theory,
    Vocabulary,
};

type PResult<T> = Result<T, Diagnostic>;

fn diag<T>(code: DiagCode, pos: Pos, msg: impl Into<String>) -> PResult<T> {
    Err(Diagnostic::at(code, pos, msg))
}

fn looks_numeric(tok: &str) -> bool {
    tok.starts_with(|c: char| c.is_ascii_digit() || c == '-' || c == '+' || c == '.')
}

/// A rational literal in `[0,1]`.
pub fn parse_value(tok: &str, pos: Pos) -> PResult<TruthValue> {
    let r = parse_rational(tok).map_err(|_| {
        Diagnostic::at(
            DiagCode::BadLiteral,
            pos,
            format!("malformed rational `{tok}`"),
        )
    })?;
    TruthValue::new(r).map_err(|_| {
        Diagnostic::at(
            DiagCode::OutOfRange,
            pos,
            format!("constant {tok} is outside [0,1]"),
        )
    })
}

fn token(s: &Sexp, what: &str) -> PResult<String> {
    match s {
        Sexp::Token(t, _) => Ok(t.clone()),
        Sexp::List(_, p) => diag(
            DiagCode::Syntax,
            *p,
            format!("expected {what}, found a list"),
        ),
    }
}

fn items<'a>(s: &'a Sexp, what: &str) -> PResult<&'a [Sexp]> {
    match s {
        Sexp::List(items, _) => Ok(items),
        Sexp::Token(t, p) => diag(
            DiagCode::Syntax,
            *p,
            format!("expected {what}, found `{t}`"),
        ),
    }
}

fn headed<'a>(s: &'a Sexp, head: &str) -> PResult<&'a [Sexp]> {
    let l = items(s, &format!("({head} ...)"))?;
    match l.first().and_then(Sexp::token) {
        Some(h) if h == head => Ok(&l[1..]),
        _ => diag(DiagCode::Syntax, s.pos(), format!("expected ({head} ...)")),
    }
}

fn count(s: &Sexp) -> PResult<usize> {
    let t = token(s, "a natural number")?;
    t.parse().map_err(|_| {
        Diagnostic::at(
            DiagCode::Syntax,
            s.pos(),
            format!("expected a natural number, found `{t}`"),
        )
    })
}

fn variable(s: &Sexp, vocab: &Vocabulary) -> PResult<String> {
    let v = token(s, "a variable")?;
    if vocab.contains(&v) || validate_symbol_name(&v).is_err() {
        return diag(
            DiagCode::Syntax,
            s.pos(),
            format!("`{v}` cannot be used as a variable"),
        );
    }
    Ok(v)
}

fn check_arity(name: &str, expected: usize, got: usize, pos: Pos) -> PResult<()> {
    if expected != got {
        return diag(
            DiagCode::ArityMismatch,
            pos,
            format!("`{name}` takes {expected} argument(s), got {got}"),
        );
    }
    Ok(())
}

fn term_of(s: &Sexp, vocab: &Vocabulary) -> PResult<Term> {
    match s {
        Sexp::Token(t, p) => {
            if let Some(label) = t.strip_prefix('#') {
                if label.is_empty() {
                    return diag(DiagCode::Syntax, *p, "empty element literal");
                }
                return Ok(Term::elem(label));
            }
            match vocab.lookup(t) {
                Some(SymbolKind::Constant(_)) => Ok(Term::Const(t.clone())),
                Some(_) => diag(DiagCode::Syntax, *p, format!("`{t}` is not a term")),
                None => variable(s, vocab).map(Term::Var),
            }
        }
        Sexp::List(items, p) => {
            let head = match items.first() {
                Some(Sexp::Token(h, _)) => h,
                _ => return diag(DiagCode::Syntax, *p, "expected a function application"),
            };
            match vocab.lookup(head) {
                Some(SymbolKind::Function(i)) => {
                    check_arity(head, vocab.functions()[i].arity, items.len() - 1, *p)?;
                    let args = items[1..]
                        .iter()
                        .map(|a| term_of(a, vocab))
                        .collect::<PResult<_>>()?;
                    Ok(Term::App(head.clone(), args))
                }
                Some(_) => diag(
                    DiagCode::Syntax,
                    *p,
                    format!("`{head}` is not a function symbol"),
                ),
                None => diag(
                    DiagCode::UnknownSymbol,
                    *p,
                    format!("unknown function `{head}`"),
                ),
            }
        }
    }
}

fn formula_of(s: &Sexp, vocab: &Vocabulary) -> PResult<Formula> {
    match s {
        Sexp::Token(t, p) => {
            if looks_numeric(t) {
                return parse_value(t, *p).map(Formula::constant);
            }
            match vocab.lookup(t) {
                None => diag(DiagCode::UnknownSymbol, *p, format!("unknown symbol `{t}`")),
                Some(_) => diag(
                    DiagCode::Syntax,
                    *p,
                    format!("`{t}` is not a formula; atoms are written (P ...)"),
                ),
            }
        }
        Sexp::List(items, p) => {
            let head = match items.first() {
                Some(Sexp::Token(h, _)) => h.as_str(),
                Some(Sexp::List(..)) => {
                    return diag(DiagCode::Syntax, *p, "a formula cannot start with a list")
                }
                None => return diag(DiagCode::Syntax, *p, "empty list"),
            };
            let args = &items[1..];
            if let Some(q) = match head {
                "sup" => Some(Quantifier::Sup),
                "inf" => Some(Quantifier::Inf),
                _ => None,
            } {
                check_arity(head, 2, args.len(), *p)?;
                let v = variable(&args[0], vocab)?;
                return Ok(Formula::quant(q, &v, formula_of(&args[1], vocab)?));
            }
            if let Some(c) = Connective::from_keyword(head) {
                check_arity(head, c.arity(), args.len(), *p)?;
                let sub = args
                    .iter()
                    .map(|a| formula_of(a, vocab))
                    .collect::<PResult<Vec<_>>>()?;
                return Ok(Formula::apply(c, sub));
            }
            match vocab.lookup(head) {
                Some(SymbolKind::Predicate(i)) => {
                    check_arity(head, vocab.predicates()[i].arity, args.len(), *p)?;
                    let terms = args
                        .iter()
                        .map(|a| term_of(a, vocab))
                        .collect::<PResult<_>>()?;
                    Ok(Formula::atom(head, terms))
                }
                Some(_) => diag(DiagCode::Syntax, *p, format!("`{head}` is not a predicate")),
                None => diag(
                    DiagCode::UnknownSymbol,
                    *p,
                    format!("unknown symbol `{head}`"),
                ),
            }
        }
    }
}

/// Parses one formula, checking symbols and arities against `vocab`.
pub fn parse_formula(text: &str, vocab: &Vocabulary) -> PResult<Formula> {
    formula_of(&parse_one(text)?, vocab)
}

pub fn parse_term(text: &str, vocab: &Vocabulary) -> PResult<Term> {
    term_of(&parse_one(text)?, vocab)
}

fn declaration(vocab: &mut Vocabulary, s: &Sexp) -> PResult<()> {
    let l = items(s, "a declaration")?;
    let kind = l.first().and_then(Sexp::token).unwrap_or("");
    let shape = |n: usize| {
        if l.len() != n {
            diag(
                DiagCode::InvalidDeclaration,
                s.pos(),
                format!("malformed `{kind}` declaration"),
            )
        } else {
            Ok(())
        }
    };
    let res = match kind {
        "predicate" => {
            shape(3)?;
            vocab.add_predicate(&token(&l[1], "a name")?, count(&l[2])?)
        }
        "function" => {
            shape(3)?;
            vocab.add_function(&token(&l[1], "a name")?, count(&l[2])?)
        }
        "constant" => {
            shape(2)?;
            vocab.add_constant(&token(&l[1], "a name")?)
        }
        other => {
            return diag(
                DiagCode::Syntax,
                s.pos(),
                format!("unknown declaration `{other}`"),
            )
        }
    };
    res.map_err(|e| Diagnostic::at(DiagCode::InvalidDeclaration, s.pos(), e.to_string()))
}

/// `(vocabulary (predicate P 1) (function F 2) (constant c))`
pub fn parse_vocabulary(text: &str) -> PResult<Vocabulary> {
    let s = parse_one(text)?;
    let mut vocab = Vocabulary::new();
    for d in headed(&s, "vocabulary")? {
        declaration(&mut vocab, d)?;
    }
    Ok(vocab)
}

fn element(labels: &BTreeMap<String, Element>, s: &Sexp) -> PResult<Element> {
    let t = token(s, "an element")?;
    labels.get(&t).copied().ok_or_else(|| {
        Diagnostic::at(
            DiagCode::ForeignElement,
            s.pos(),
            format!("`{t}` is not in the universe"),
        )
    })
}

fn valid_label(t: &str) -> bool {
    !t.is_empty() && !t.starts_with('#')
}

/// Parses a structure; the vocabulary is read off the table headers.
///
/// ```text
/// (structure
///   (universe a b)
///   (predicate P 1 (a 1/4) (b 3/4))
///   (function F 1 (a b) (b a))
///   (constant c a))
/// ```
pub fn parse_structure(text: &str) -> PResult<GeneralStructure> {
    let s = parse_one(text)?;
    let body = headed(&s, "structure")?;
    let Some(first) = body.first() else {
        return diag(DiagCode::Syntax, s.pos(), "missing (universe ...)");
    };
    let mut universe = Vec::new();
    let mut labels = BTreeMap::new();
    for e in headed(first, "universe")? {
        let t = token(e, "an element label")?;
        if !valid_label(&t) {
            return diag(
                DiagCode::InvalidDeclaration,
                e.pos(),
                format!("invalid element label `{t}`"),
            );
        }
        if labels.insert(t.clone(), universe.len()).is_some() {
            return diag(
                DiagCode::DuplicateEntry,
                e.pos(),
                format!("element `{t}` listed twice"),
            );
        }
        universe.push(t);
    }
    if universe.is_empty() {
        return diag(DiagCode::InvalidDeclaration, first.pos(), "empty universe");
    }
    let n = universe.len();

    let mut vocab = Vocabulary::new();
    let mut predicates: Vec<Vec<Option<TruthValue>>> = Vec::new();
    let mut functions: Vec<Vec<Option<Element>>> = Vec::new();
    let mut constants = Vec::new();
    let mut table_pos = Vec::new();
    for t in &body[1..] {
        let l = items(t, "a table")?;
        let kind = l.first().and_then(Sexp::token).unwrap_or("");
        match kind {
            "predicate" | "function" => {
                if l.len() < 3 {
                    return diag(
                        DiagCode::InvalidDeclaration,
                        t.pos(),
                        format!("malformed `{kind}` table"),
                    );
                }
                let name = token(&l[1], "a name")?;
                let arity = count(&l[2])?;
                let added = if kind == "predicate" {
                    vocab.add_predicate(&name, arity)
                } else {
                    vocab.add_function(&name, arity)
                };
                added.map_err(|e| {
                    Diagnostic::at(DiagCode::InvalidDeclaration, t.pos(), e.to_string())
                })?;
                table_pos.push((name.clone(), t.pos()));
                let size = n.pow(arity as u32);
                let mut pred_table = vec![None; size];
                let mut func_table = vec![None; size];
                for entry in &l[3..] {
                    let row = items(entry, "a table row")?;
                    check_arity(&name, arity + 1, row.len(), entry.pos()).map_err(|mut d| {
                        d.message =
                            format!("row of `{name}` needs {arity} argument(s) and a value");
                        d
                    })?;
                    let args = row[..arity]
                        .iter()
                        .map(|a| element(&labels, a))
                        .collect::<PResult<Vec<_>>>()?;
                    let idx = encode_tuple(&args, n);
                    let last = &row[arity];
                    let fresh = if kind == "predicate" {
                        let v = parse_value(&token(last, "a value")?, last.pos())?;
                        pred_table[idx].replace(v).is_none()
                    } else {
                        func_table[idx].replace(element(&labels, last)?).is_none()
                    };
                    if !fresh {
                        return diag(
                            DiagCode::DuplicateEntry,
                            entry.pos(),
                            format!("duplicate entry in table {name}"),
                        );
                    }
                }
                if kind == "predicate" {
                    predicates.push(pred_table);
                } else {
                    functions.push(func_table);
                }
            }
            "constant" => {
                if l.len() != 3 {
                    return diag(
                        DiagCode::InvalidDeclaration,
                        t.pos(),
                        "malformed `constant` entry",
                    );
                }
                let name = token(&l[1], "a name")?;
                vocab.add_constant(&name).map_err(|e| {
                    Diagnostic::at(DiagCode::InvalidDeclaration, t.pos(), e.to_string())
                })?;
                constants.push(element(&labels, &l[2])?);
            }
            "universe" => return diag(DiagCode::DuplicateEntry, t.pos(), "universe given twice"),
            other => {
                return diag(
                    DiagCode::Syntax,
                    t.pos(),
                    format!("unknown table kind `{other}`"),
                )
            }
        }
    }

    let incomplete = |name: &str| {
        let pos = table_pos
            .iter()
            .find(|(n, _)| n == name)
            .map(|(_, p)| *p)
            .unwrap_or(s.pos());
        Diagnostic::at(
            DiagCode::IncompleteTable,
            pos,
            format!("incomplete table {name}"),
        )
    };
    let predicates = vocab
        .predicates()
        .iter()
        .zip(predicates)
        .map(|(p, t)| {
            t.into_iter()
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| incomplete(&p.name))
        })
        .collect::<PResult<Vec<_>>>()?;
    let functions = vocab
        .functions()
        .iter()
        .zip(functions)
        .map(|(f, t)| {
            t.into_iter()
                .collect::<Option<Vec<_>>>()
                .ok_or_else(|| incomplete(&f.name))
        })
        .collect::<PResult<Vec<_>>>()?;
    GeneralStructure::from_tables(vocab, universe, predicates, functions, constants)
        .map_err(|e| Diagnostic::at(DiagCode::InvalidDeclaration, s.pos(), e.to_string()))
}

fn sentence(s: &Sexp, vocab: &Vocabulary) -> PResult<Formula> {
    let f = formula_of(s, vocab)?;
    if !f.is_sentence() {
        return diag(
            DiagCode::NotASentence,
            s.pos(),
            format!("free variables {:?} in theory member", f.free_vars()),
        );
    }
    Ok(f)
}

/// `(theory phi ...)`; a bare list of sentences is accepted too.
pub fn parse_theory(text: &str, vocab: &Vocabulary) -> PResult<Theory> {
    let all = parse_all(text)?;
    let members: Vec<&Sexp> = match all.as_slice() {
        [one] if one.head() == Some("theory") => one.list().unwrap()[1..].iter().collect(),
        many => many.iter().collect(),
    };
    let sentences = members
        .into_iter()
        .map(|m| sentence(m, vocab))
        .collect::<PResult<Vec<_>>>()?;
    Ok(Theory::new(sentences).expect("members checked above"))
}

/// `(sequence (frame x y) (schedule exponential) phi_0 phi_1 ...)`
pub fn parse_sequence(text: &str, vocab: &Vocabulary) -> PResult<FormulaSequence> {
    let s = parse_one(text)?;
    let body = headed(&s, "sequence")?;
    if body.len() < 2 {
        return diag(
            DiagCode::Syntax,
            s.pos(),
            "expected (frame ...) and (schedule ...)",
        );
    }
    let frame = headed(&body[0], "frame")?
        .iter()
        .map(|v| variable(v, vocab))
        .collect::<PResult<Vec<_>>>()?;
    let sched = headed(&body[1], "schedule")?;
    let schedule = match sched {
        [k] => {
            let word = token(k, "a schedule")?;
            Schedule::from_keyword(&word).ok_or_else(|| {
                Diagnostic::at(
                    DiagCode::Syntax,
                    k.pos(),
                    format!("unknown schedule `{word}`"),
                )
            })?
        }
        _ => return diag(DiagCode::Syntax, body[1].pos(), "expected (schedule NAME)"),
    };
    let mut entries = Vec::new();
    for e in &body[2..] {
        let f = formula_of(e, vocab)?;
        if let Some(v) = f.free_vars().iter().find(|v| !frame.contains(v)) {
            return diag(
                DiagCode::Frame,
                e.pos(),
                format!("free variable `{v}` is not in the frame"),
            );
        }
        entries.push(f);
    }
    Ok(FormulaSequence::new(frame, entries, schedule).expect("frame checked above"))
}

fn shape_err(pos: Pos, e: InterpError) -> Diagnostic {
    Diagnostic::at(DiagCode::InterpretationShape, pos, e.to_string())
}

/// Positive interpretation over the two-valued vocabulary `vocab`.
///
/// ```text
/// (interpretation (grid 4)
///   (predicate P 1)
///   (lower P 1/4 (x) (Q x))
///   (upper P 1/2 (x) (R x)))
/// ```
pub fn parse_interpretation(text: &str, vocab: &Vocabulary) -> PResult<Interpretation> {
    let s = parse_one(text)?;
    let body = headed(&s, "interpretation")?;
    let Some(first) = body.first() else {
        return diag(DiagCode::Syntax, s.pos(), "missing (grid N)");
    };
    let g = match headed(first, "grid")? {
        [d] => {
            let denom: u64 = token(d, "a grid denominator")?.parse().map_err(|_| {
                Diagnostic::at(
                    DiagCode::InterpretationShape,
                    d.pos(),
                    "grid must be a power of two",
                )
            })?;
            Interpretation::exponent_of(denom).map_err(|e| shape_err(d.pos(), e))?
        }
        _ => return diag(DiagCode::Syntax, first.pos(), "expected (grid N)"),
    };
    let mut interp = Interpretation::new(g);
    for e in &body[1..] {
        let l = items(e, "an interpretation entry")?;
        match l.first().and_then(Sexp::token) {
            Some("predicate") if l.len() == 3 => {
                let name = token(&l[1], "a name")?;
                interp
                    .declare(&name, count(&l[2])?)
                    .map_err(|err| shape_err(e.pos(), err))?;
            }
            Some(kind @ ("lower" | "upper")) if l.len() == 5 => {
                let name = token(&l[1], "a predicate")?;
                let r = parse_value(&token(&l[2], "a grid point")?, l[2].pos())?;
                let params = items(&l[3], "a parameter list")?
                    .iter()
                    .map(|p| variable(p, vocab))
                    .collect::<PResult<Vec<_>>>()?;
                let f = formula_of(&l[4], vocab)?;
                let pf =
                    PositiveFormula::new(params, f).map_err(|err| shape_err(l[4].pos(), err))?;
                let res = if kind == "lower" {
                    interp.set_lower(&name, &r, pf)
                } else {
                    interp.set_upper(&name, &r, pf)
                };
                res.map_err(|err| match err {
                    InterpError::Duplicate { .. } => {
                        Diagnostic::at(DiagCode::DuplicateEntry, e.pos(), err.to_string())
                    }
                    other => shape_err(e.pos(), other),
                })?;
            }
            _ => {
                return diag(
                    DiagCode::InterpretationShape,
                    e.pos(),
                    "expected (predicate P k), (lower P r (x ...) phi) or (upper P r (x ...) phi)",
                )
            }
        }
    }
    interp.validate().map_err(|e| shape_err(s.pos(), e))?;
    Ok(interp)
}
