use super::*;
use crate::kernel::TruthValue;
use crate::syntax::Vocabulary;

fn vocab() -> Vocabulary {
    parse_vocabulary("(vocabulary (predicate P 1) (predicate Q 2) (function F 1) (constant c))")
        .unwrap()
}

const M0: &str = "(structure (universe a b) (predicate P 1 (a 1/4) (b 3/4)))";

#[test]
fn formula_examples() {
    let v = vocab();
    let f = parse_formula("(sup x (P x))", &v).unwrap();
    assert!(f.is_sentence());
    assert_eq!(f.to_string(), "(sup x (P x))");

    let e = parse_formula("(dotminus (P x) 5/4)", &v).unwrap_err();
    assert_eq!(e.code, DiagCode::OutOfRange);
    assert_eq!((e.line, e.column), (1, 17));

    let f = parse_formula("(min (Q x y) (neg (P x)))", &v).unwrap();
    assert_eq!(f.free_vars(), ["x", "y"]);
}

#[test]
fn formula_diagnostics() {
    let v = vocab();
    let code = |s: &str| parse_formula(s, &v).unwrap_err().code;
    assert_eq!(code("(R x)"), DiagCode::UnknownSymbol);
    assert_eq!(code("(P x y)"), DiagCode::ArityMismatch);
    assert_eq!(code("(neg (P x) (P x))"), DiagCode::ArityMismatch);
    assert_eq!(code("(P (G x))"), DiagCode::UnknownSymbol);
    assert_eq!(code("(sup x (P x)"), DiagCode::Unbalanced);
    assert_eq!(code("(max 1/0 0)"), DiagCode::BadLiteral);
    assert_eq!(code("(max -1/2 0)"), DiagCode::OutOfRange);
    assert_eq!(code("(P x) (P y)"), DiagCode::Syntax);
}

#[test]
fn terms_constants_and_elements() {
    let v = vocab();
    let f = parse_formula("(Q (F c) #a)", &v).unwrap();
    assert!(f.is_sentence());
    assert_eq!(f.to_string(), "(Q (F c) #a)");
}

#[test]
fn structure_examples() {
    let m = parse_structure(M0).unwrap();
    assert_eq!(m.size(), 2);
    assert_eq!(
        m.predicate_named("P", &[1]).unwrap(),
        &TruthValue::from_ratio(3, 4).unwrap()
    );

    let e = parse_structure("(structure (universe a b) (predicate P 1 (a 1/4)))").unwrap_err();
    assert_eq!(e.code, DiagCode::IncompleteTable);
    assert!(e.message.contains("incomplete table P"));

    let e = parse_structure("(structure (universe a b) (function F 1 (a c) (b a)))").unwrap_err();
    assert_eq!(e.code, DiagCode::ForeignElement);

    let e = parse_structure("(structure (universe a b) (predicate P 1 (a 1/4) (a 1/2) (b 0)))")
        .unwrap_err();
    assert_eq!(e.code, DiagCode::DuplicateEntry);

    let e = parse_structure("(structure (universe a b) (predicate P 1 (a 2) (b 0)))").unwrap_err();
    assert_eq!(e.code, DiagCode::OutOfRange);

    let e = parse_structure("(structure (universe a b) (predicate P 0 (a 2) (b 0)))").unwrap_err();
    assert_eq!(e.code, DiagCode::InvalidDeclaration);
}

#[test]
fn serialization_is_canonical() {
    let m = parse_structure("(structure (universe a b) (predicate P 1 (b 6/8) (a 2/8)))").unwrap();
    assert_eq!(
        m.render(),
        "(structure\n  (universe a b)\n  (predicate P 1 (a 1/4) (b 3/4)))"
    );
    assert_eq!(TruthValue::from_ratio(2, 4).unwrap().render(), "1/2");

    let v = vocab();
    let f = parse_formula("(sup y (Q y x))", &v).unwrap();
    assert_eq!(f.render(), "(sup v0 (Q v0 x))");
    assert_eq!(parse_formula(&f.render(), &v).unwrap(), f.canonical());
}

#[test]
fn theory_requires_sentences() {
    let v = vocab();
    let t = parse_theory("(theory (sup v0 (P v0)) 0)", &v).unwrap();
    assert_eq!(t.len(), 2);
    assert_eq!(parse_theory(&t.render(), &v).unwrap(), t);
    let e = parse_theory("(theory (P x))", &v).unwrap_err();
    assert_eq!(e.code, DiagCode::NotASentence);
}

#[test]
fn sequence_frame_is_checked() {
    let v = vocab();
    let s = parse_sequence(
        "(sequence (frame x) (schedule lemma) (P x) (half (P x)))",
        &v,
    )
    .unwrap();
    assert_eq!(s.len(), 2);
    assert_eq!(parse_sequence(&s.render(), &v).unwrap(), s);
    let e = parse_sequence("(sequence (frame x) (schedule lemma) (Q x y))", &v).unwrap_err();
    assert_eq!(e.code, DiagCode::Frame);
}

#[test]
fn interpretation_round_trip_and_shape() {
    let v = Vocabulary::relational([("A", 1), ("B", 1)]).unwrap();
    let text = "(interpretation (grid 2)
        (lower P 0 (x) (A x)) (lower P 1/2 (x) (A x))
        (upper P 1/2 (x) (B x)) (upper P 1 (x) (B x)))";
    let i = parse_interpretation(text, &v).unwrap();
    assert_eq!(parse_interpretation(&i.render(), &v).unwrap(), i);

    let missing = "(interpretation (grid 2) (lower P 0 (x) (A x)))";
    assert_eq!(
        parse_interpretation(missing, &v).unwrap_err().code,
        DiagCode::InterpretationShape
    );
    let negative = "(interpretation (grid 1) (lower P 0 (x) (neg (A x))) (upper P 1 (x) (B x)))";
    assert_eq!(
        parse_interpretation(negative, &v).unwrap_err().code,
        DiagCode::InterpretationShape
    );
    let twice = "(interpretation (grid 1) (lower P 0 (x) (A x)) (lower P 0 (x) (A x)))";
    assert_eq!(
        parse_interpretation(twice, &v).unwrap_err().code,
        DiagCode::DuplicateEntry
    );
    let odd = "(interpretation (grid 3))";
    assert_eq!(
        parse_interpretation(odd, &v).unwrap_err().code,
        DiagCode::InterpretationShape
    );
}

#[test]
fn document_kinds() {
    assert_eq!(SourceKind::detect(M0).unwrap(), SourceKind::Structure);
    assert_eq!(SourceKind::detect("(P x)").unwrap(), SourceKind::Formula);
    assert_eq!(
        SourceKind::from_path(std::path::Path::new("m.cmls")),
        Some(SourceKind::Structure)
    );
}

#[test]
fn report_json_is_deterministic() {
    let mut r = Report::new("eval");
    r.value("value", TruthValue::from_ratio(3, 4).unwrap())
        .value("a", 1);
    let text = r.to_json();
    assert!(text.contains("\"schema\": 1"));
    assert!(text.contains("\"value\": \"3/4\""));
    assert!(text.find("\"a\"").unwrap() < text.find("\"value\"").unwrap());
    assert_eq!(r.status.exit_code(), 0);
}
