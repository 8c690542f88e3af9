use proptest::prelude::*;
use weilkit_cli::session::Decl;
use weilkit_cli::{parse_session, parse_session_with, Action, DslError, Location, Status, Target};

const GM: &str = "field k = GF(2); algebra L = k[t]/(t^2+t+1); scheme X over L = [x,y]/(x*y-1)";

#[test]
fn three_declarations() {
    let s = parse_session(GM).unwrap();
    let kinds: Vec<_> = s.declarations().iter().map(|d| (d.name.as_str(), d.decl.kind())).collect();
    assert_eq!(kinds, [("k", "field"), ("L", "algebra"), ("X", "scheme")]);
    let x = s.scheme("X").unwrap();
    assert_eq!(x.display_generators(), ["x*y + 1"]);
    assert_eq!(s.declarations()[2].location, Location { line: 1, column: 46 });
}

#[test]
fn undefined_names_are_located() {
    let err = parse_session("field k = GF(2)\nscheme X over L = [x]").unwrap_err();
    assert_eq!(
        err,
        DslError::Name {
            location: Location { line: 2, column: 15 },
            message: "unknown name 'L'".into()
        }
    );
    let err = parse_session(&format!("{GM}\nscheme Y over L = [x]/(x - z)")).unwrap_err();
    assert!(matches!(err, DslError::Name { location: Location { line: 2, column: 28 }, .. }), "{err}");
}

#[test]
fn inseparable_modulus_is_a_type_mismatch() {
    let err = parse_session("field k = GF(2)\nalgebra L = k[t]/(t^2)").unwrap_err();
    match err {
        DslError::TypeMismatch { location, message } => {
            assert_eq!(location, Location { line: 2, column: 19 });
            assert!(message.contains("not separable"), "{message}");
        }
        other => panic!("{other}"),
    }
    let err = parse_session("field k = GF(4)").unwrap_err();
    assert!(matches!(err, DslError::TypeMismatch { .. }));
}

#[test]
fn syntax_errors_list_expected_tokens() {
    let err = parse_session("field k = GF(2)\nscheme X over k [x]").unwrap_err();
    assert_eq!(
        err,
        DslError::Syntax {
            location: Location { line: 2, column: 17 },
            message: "unexpected '['".into(),
            expected: vec!["=".into()],
        }
    );
    let err = parse_session("fold k = GF(2)").unwrap_err();
    match err {
        DslError::Syntax { expected, .. } => assert!(expected.contains(&"field".to_string())),
        other => panic!("{other}"),
    }
    let err = parse_session(&format!("{GM}\nverify frobnicate X")).unwrap_err();
    match err {
        DslError::Syntax { location, expected, .. } => {
            assert_eq!(location.line, 2);
            assert_eq!(expected.len(), 16);
        }
        other => panic!("{other}"),
    }
    let err = parse_session("field k = GF(2) field m = GF(3)").unwrap_err();
    assert!(matches!(err, DslError::Syntax { location: Location { line: 1, column: 17 }, .. }));
    let err = parse_session(&format!("{GM}\nscheme Y over L = [x]/(x +)")).unwrap_err();
    assert!(matches!(err, DslError::Syntax { location: Location { line: 2, column: 27 }, .. }), "{err}");
}

#[test]
fn names_are_unique() {
    let err = parse_session("field k = GF(2)\nfield k = GF(3)").unwrap_err();
    assert!(matches!(err, DslError::Name { location: Location { line: 2, column: 7 }, .. }));
}

#[test]
fn references_must_have_the_right_kind() {
    let err = parse_session(&format!("{GM}\nverify thom X over GF(2)")).unwrap_err();
    assert!(matches!(err, DslError::TypeMismatch { .. }));
    let err = parse_session(&format!("{GM}\nalgebra M = L[t]/(t^2 + t + 1)")).unwrap_err();
    assert!(matches!(err, DslError::TypeMismatch { .. }));
}

#[test]
fn comments_newlines_and_multiline_brackets() {
    let text = "
        # a comment line
        field k = GF(5)   # trailing
        algebra L = k[t]/(t^2 + 2)
        scheme C over L = [x, y]/(
            x^2 + y^2 - 1   # the circle
        )
        bundle E on C = [[3 + 3*x, 3*y],
                         [3*y, 3 - 3*x]] rank 1
        verify thom E over GF(5), GF(5)[eps]; verify bundle E
        verify preserves-smooth C expect refuted
    ";
    let s = parse_session(text).unwrap();
    assert_eq!(s.declarations().len(), 4);
    assert_eq!(s.bundle("E").unwrap().rank(), 1);
    assert_eq!(s.commands.len(), 3);
    assert_eq!(s.commands[0].text, "verify thom E over GF(5), GF(5)[eps]");
    assert_eq!(s.commands[0].location, Location { line: 10, column: 9 });
    match &s.commands[0].action {
        Action::Verify(Target::Thom { algebras, .. }) => {
            let names: Vec<String> = algebras.iter().map(|a| a.to_string()).collect();
            assert_eq!(names, ["GF(5)", "GF(5)[eps]"]);
        }
        other => panic!("{other:?}"),
    }
    assert_eq!(s.commands[2].expect, Some(Status::Refuted));
}

#[test]
fn bundles_and_morphisms_are_validated_at_declaration() {
    let err = parse_session(&format!("{GM}\nbundle E on X = [[x]] rank 1")).unwrap_err();
    match err {
        DslError::TypeMismatch { message, .. } => assert!(message.contains("not idempotent"), "{message}"),
        other => panic!("{other}"),
    }
    let err = parse_session(&format!("{GM}\nscheme A over L = [u]\nmorphism f : A -> X = (u, u)")).unwrap_err();
    assert!(matches!(err, DslError::TypeMismatch { location: Location { line: 3, .. }, .. }));
}

#[test]
fn validation_budgets_are_not_type_errors() {
    let config = weilkit::Config { point_budget: 3, ..Default::default() };
    let err = parse_session_with(&format!("{GM}\nbundle E on X = [[1]] rank 1"), config).unwrap_err();
    assert!(matches!(err, DslError::Budget { location: Location { line: 2, column: 8 }, .. }), "{err}");
}

#[test]
fn schemes_over_schemes_are_relative() {
    let s = parse_session(&format!("{GM}\nscheme W over X = [z]/(z^2 - x)")).unwrap();
    let w = s.scheme("W").unwrap();
    assert_eq!(w.vars(), ["x", "y", "z"]);
    assert_eq!(w.display_generators(), ["x*y + 1", "z^2 + x"]);
    assert!(weilkit::scheme::relative_presentation(w).is_ok());
    assert!(matches!(s.get("W").unwrap().decl, Decl::Scheme(_)));
}

#[test]
fn every_verify_target_parses() {
    let text = "
        field k = GF(2)
        algebra L = k[t]/(t^2 + t + 1)
        scheme X over L = [x, y]/(x*y - 1)
        scheme P over L = [x, y]
        scheme T over k = [s]
        scheme W over X = [z]/(z^2 + z + x)
        morphism f : X -> P = (x, y)
        bundle E on X = [[1]] rank 1
        verify adjunction X over GF(2)
        verify triangles X with T
        verify base-change X to T
        verify fiber-product f, f
        verify preserves-closed f
        verify preserves-smooth X
        verify preserves-etale W
        verify bundle E
        verify zero-section E
        verify normal P along (y) over GF(2)
        verify thom E over GF(2)
        verify step2 E over GF(2)
        verify gysin-shadow P along (y) over GF(2)
        verify galois-split X
        verify norm-open P by (x) over GF(2)
        verify affine-shadow X upto 1
    ";
    let s = parse_session(text).unwrap();
    assert_eq!(s.commands.len(), weilkit_cli::session::TARGETS.len());
}

proptest! {
    #[test]
    fn arbitrary_text_never_panics(text in "[a-zA-Z0-9 =;:,()\\[\\]#\n+*^/-]{0,80}") {
        let _ = parse_session(&text);
    }

    #[test]
    fn errors_point_inside_the_text(suffix in "[a-z0-9 =,()\\[\\]+*^-]{0,30}") {
        let text = format!("{GM}\n{suffix}");
        if let Err(e) = parse_session(&text) {
            let loc = e.location();
            let lines: Vec<&str> = text.split('\n').collect();
            prop_assert!(loc.line >= 1 && loc.line <= lines.len());
            prop_assert!(loc.column >= 1 && loc.column <= lines[loc.line - 1].chars().count() + 1);
        }
    }
}
