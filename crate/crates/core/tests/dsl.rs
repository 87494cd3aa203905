mod common;

use proptest::prelude::*;

use volform::dsl::{self, DslError};
use volform::scenarios::{self, Scenario};
use volform::{Check, Document, Outcome};

fn doc(src: &str) -> Document {
    dsl::parse(src).unwrap_or_else(|e| panic!("{e}\n---\n{src}"))
}

fn err(src: &str) -> DslError {
    dsl::parse(src).expect_err("document should be rejected")
}

fn canonical(src: &str) -> String {
    dsl::print(&doc(src))
}

const TARGETS: [&str; 12] = [
    "torus:1",
    "torus:2",
    "torus:3",
    "sl2",
    "surface",
    "surface:p=x^2,q=y^3",
    "xm1:1",
    "xm1:2",
    "xm1:3",
    "quadric",
    "product:quadric,torus:1",
    "product:sl2,torus:1",
];

// One golden per production.

#[test]
fn golden_chart_vars_invert_rel() {
    let out = canonical(
        "// comment\nchart { vars a, b, c*; invert a; rel a*c - b solve b; } # trailing",
    );
    assert_eq!(out, "chart {\n    vars a*, b, c*;\n    rel a*c - b solve b;\n}\n");
}

#[test]
fn golden_chart_without_relations() {
    assert_eq!(canonical("chart { vars x*, y; }"), "chart {\n    vars x*, y;\n}\n");
}

#[test]
fn golden_let_and_volume() {
    let out = canonical("chart { vars x*, y*; }\nlet p = x + 2;\nvolume w = (p - 2)^-1 y^-1 dx^dy;");
    assert!(out.contains("volume w = (x^-1*y^-1) dx^dy;"), "{out}");
    assert!(!out.contains("let"));
}

#[test]
fn golden_forms() {
    let out = canonical(
        "chart { vars x*, y*; }\n\
         volume w = (1/(x*y)) dx^dy;\n\
         field v = x d/dx;\n\
         form a = (x + 2) dx;\n\
         form b = d(x^2 y);\n\
         form c = iota(v, w);\n\
         form l = lie(v, a);\n\
         form z = d(b);",
    );
    for line in [
        "form a = (x + 2) dx;",
        "form b = (2*x*y) dx + (x^2) dy;",
        "form c = (y^-1) dy;",
        "form l = (2*x + 2) dx;",
        "form z = 0 dx^dy;",
    ] {
        assert!(out.contains(line), "missing `{line}` in\n{out}");
    }
}

#[test]
fn golden_fields_and_brackets() {
    let out = canonical(
        "chart { vars x*, y*; }\n\
         field v = x d/dx;\n\
         field u = y^2 d/dy;\n\
         field s = x d/dy;\n\
         field b1 = [v, u];\n\
         field b2 = bracket(v, s);\n\
         field m = x y v - 3 u;",
    );
    for line in [
        "field v = (x) d/dx;",
        "field u = (y^2) d/dy;",
        "field b1 = 0;",
        "field b2 = (x) d/dy;",
        "field m = (x^2*y) d/dx + (-3*y^2) d/dy;",
    ] {
        assert!(out.contains(line), "missing `{line}` in\n{out}");
    }
}

#[test]
fn golden_action_and_point() {
    let out = canonical(
        "chart { vars x*, y*; }\n\
         action g: x -> x^-1, y -> -y order 2;\n\
         point p0: x = 2, y = -1/3;",
    );
    assert!(out.contains("action g: x -> x^-1, y -> -y order 2;"), "{out}");
    assert!(out.contains("point p0: x = 2, y = -1/3;"), "{out}");
}

#[test]
fn golden_group() {
    let out = canonical("chart { vars x; }\ngroup t { size 1; basis [[1]]; element a0 = [[-1]]; }");
    assert!(
        out.contains("group t {\n    size 1;\n    basis [[1]];\n    element a0 = [[-1]];\n}"),
        "{out}"
    );
}

#[test]
fn golden_checks() {
    let out = canonical(
        "chart { vars x*, y*; }\n\
         field v = x d/dx;\n\
         field u = y d/dy;\n\
         action g: x -> -x order 2;\n\
         check tangent(v);\n\
         check semicompat(v, u, 3) expect unknown;\n\
         check condition_a((v, u, x*y));\n\
         check invariant(x*y, g) expect fail;",
    );
    assert!(out.ends_with(
        "check tangent(v);\n\
         check semicompat(v, u, 3) expect unknown;\n\
         check condition_a((v, u, x*y));\n\
         check invariant(x*y, g) expect fail;\n"
    ));
}

#[test]
fn power_versus_wedge() {
    let d = doc("chart { vars x*, y*; }\nform a = x^-2 dx^dy;\nform b = x^2 dy;");
    let out = dsl::print(&d);
    assert!(out.contains("form a = (x^-2) dx^dy;"), "{out}");
    assert!(out.contains("form b = (x^2) dy;"), "{out}");
}

#[test]
fn shadowing_dx_prints_d_of_coordinate() {
    let src = "chart { vars x*, y*; }\nform dx = y dy;\nform a = dx^dx;";
    let d = doc(src);
    assert!(dsl::print(&d).contains("d(x)"));
    assert_eq!(dsl::parse(&dsl::print(&d)).unwrap(), d);
}

// Round trips.

#[test]
fn scenarios_round_trip() {
    for t in TARGETS {
        let s = scenarios::by_name(t).unwrap();
        let text = dsl::print(&s.document);
        let back = dsl::parse(&text).unwrap_or_else(|e| panic!("{t}: {e}\n{text}"));
        assert_eq!(back, s.document, "{t}");
        assert_eq!(dsl::print(&back), text, "{t}");
    }
}

#[test]
fn surface_document_equals_scenario() {
    let src = include_str!("../../../docs/examples/surface.vf");
    let s = scenarios::by_name("surface:p=x,q=y").unwrap();
    assert_eq!(doc(src), s.document);
}

#[test]
fn shipped_examples_parse() {
    for src in [
        include_str!("../../../docs/examples/quadric_torus.vf"),
        include_str!("../../../docs/examples/wrong_potential.vf"),
    ] {
        let d = doc(src);
        assert_eq!(dsl::parse(&dsl::print(&d)).unwrap(), d);
    }
}

// Errors.

#[test]
fn empty_input_is_a_parse_error_at_origin() {
    let e = err("");
    assert!(matches!(e, DslError::Parse { .. }));
    assert_eq!(e.span().to_string(), "1:1");
    let e = err("  # only a comment\n");
    assert!(matches!(e, DslError::Parse { .. }));
}

#[test]
fn rel_without_solve_needs_triangular_presentation() {
    let e = err("chart { vars x, y; rel x*y - 1; }");
    assert!(matches!(e, DslError::Semantic { .. }));
    assert!(e.to_string().contains("triangular presentation required"), "{e}");
}

#[test]
fn unknown_identifier_reports_position() {
    let e = err("chart { vars x, y; }\nfield v = x d/dx + w d/dy;");
    assert!(matches!(e, DslError::Semantic { .. }));
    assert_eq!(e.span().to_string(), "2:20");
    assert!(e.to_string().contains("`w`"), "{e}");

    let e = err("chart { vars x; }\ncheck tangent(v);");
    assert_eq!(e.span().to_string(), "2:15");
    assert!(e.to_string().contains("unknown field `v`"), "{e}");
}

#[test]
fn non_tangent_field_is_rejected() {
    let e = err("chart { vars x*, y*, z; rel x + y + x*y*z - 1 solve z; }\nfield bad = d/dx;");
    assert!(matches!(e, DslError::Semantic { .. }));
    assert_eq!(e.span().to_string(), "2:13");
    assert!(e.to_string().contains("not tangent"), "{e}");
}

#[test]
fn lexical_and_syntax_errors_carry_positions() {
    let e = err("chart { vars x; }\nform a = x $ dx;");
    assert!(matches!(e, DslError::Lex { .. }));
    assert_eq!(e.span().to_string(), "2:12");

    let e = err("chart { vars x; }\nfield v = x d/dx");
    assert!(matches!(e, DslError::Parse { .. }));
    assert_eq!(e.span().to_string(), "2:17");
}

#[test]
fn other_semantic_errors() {
    for (src, needle) in [
        ("chart { vars x, x; }", "duplicate coordinate `x`"),
        ("chart { vars x; }\nfield f = (x, x);", "tuples"),
        ("chart { vars x, y; }\nvolume w = dx;", "degree"),
        ("chart { vars x; }\naction g: x -> x + 1 order 2;", "not the identity"),
        ("chart { vars x; }\nfield d = x d/dx;", "reserved"),
        ("chart { vars x; }\nform a = x^-1 dx;", "invertible"),
    ] {
        let e = err(src);
        assert!(matches!(e, DslError::Semantic { .. }), "{src}: {e}");
        assert!(e.to_string().contains(needle), "{src}: {e}");
    }
    assert_eq!(err("chart { vars x, x; }").span().to_string(), "1:17");
}

#[test]
fn syntax_only_parse_accepts_semantic_errors() {
    assert!(dsl::parse_syntax("chart { vars x; }\ncheck tangent(v);").is_ok());
    assert!(dsl::parse_syntax("chart { vars x; ").is_err());
}

fn random_document(s: &'static Scenario) -> impl Strategy<Value = Document> {
    let c = s.chart.clone();
    (
        prop::collection::vec(common::field(s), 1..=3),
        prop::collection::vec(common::any_form(&c), 0..=3),
        common::poly(&c, 3),
        prop::option::of(prop_oneof![Just(Outcome::Pass), Just(Outcome::Fail), Just(Outcome::Unknown)]),
    )
        .prop_map(move |(fields, forms, f, expect)| {
            let mut d = Document::new(s.chart.clone());
            d.volume = s.volume.clone();
            for (i, v) in fields.into_iter().enumerate() {
                d.fields.insert(format!("field{i}"), v);
            }
            for (i, a) in forms.into_iter().enumerate() {
                d.forms.insert(format!("form{i}"), a);
            }
            d.check(Check::Tangent { field: "field0".into() });
            let k = Check::KernelContains { field: "field0".into(), f, bound: Some(3) };
            match expect {
                Some(e) => d.check_expect(k, e),
                None => d.check(k),
            }
            d
        })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn print_parse_is_a_fixed_point(
        d in prop_oneof![
            random_document(&common::TORUS2),
            random_document(&common::SURFACE),
            random_document(&common::SL2),
        ]
    ) {
        let text = dsl::print(&d);
        let back = dsl::parse(&text).unwrap();
        prop_assert_eq!(&back, &d);
        prop_assert_eq!(dsl::print(&back), text);
    }
}
