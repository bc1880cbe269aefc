use super::*;
use crate::dilation::DilationPath;
use crate::error::{Error, ErrorKind};

#[test]
fn minimal_shift_spec_parses() {
    let text = r#"{"operator":{"kind":"shift","rule":{"name":"dirichlet"}},"m":2,"truncation":{"N":64,"n_blocks":8}}"#;
    let spec = parse_spec(text).unwrap();
    assert_eq!(spec.schema_version, 1);
    assert_eq!(spec.horizon(), 256);
    assert_eq!(spec.h_dim(), 64);
}

#[test]
fn unknown_rule_is_named() {
    let text = r#"{"operator":{"kind":"shift","rule":{"name":"drichlet"}},"m":2,"truncation":{"N":64,"n_blocks":8}}"#;
    let err = parse_spec(text).unwrap_err();
    assert!(matches!(&err, Error::Validation(msg) if msg.contains("\"drichlet\"")), "{err}");
    assert_eq!(err.kind(), ErrorKind::Input);
}

#[test]
fn small_corner_is_rejected() {
    let text = r#"{"operator":{"kind":"shift","rule":{"name":"dirichlet"}},"m":2,"truncation":{"N":3,"n_blocks":8}}"#;
    assert!(matches!(parse_spec(text), Err(Error::Validation(_))));
}

#[test]
fn unknown_field_reports_line() {
    let text = "{\n  \"operator\": {\"kind\": \"shift\", \"rule\": {\"name\": \"dirichlet\"}},\n  \"m\": 2,\n  \"colour\": 1,\n  \"truncation\": {\"N\": 64, \"n_blocks\": 8}\n}";
    let err = parse_spec(text).unwrap_err();
    match err {
        Error::Parse(msg) => {
            assert!(msg.starts_with("line 4"), "{msg}");
            assert!(msg.contains("colour"));
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn bad_tolerance_and_path_are_rejected() {
    let base = r#"{"operator":{"kind":"dense","entries":[[[0.5,0]]]},"m":3,"truncation":{"n_blocks":6}"#;
    assert!(parse_spec(&format!("{base}}}")).is_ok());
    assert!(parse_spec(&format!("{base},\"tolerances\":{{\"psd\":-1}}}}")).is_err());
    assert!(parse_spec(&format!("{base},\"tolerances\":{{\"nope\":1e-3}}}}")).is_err());
    assert!(parse_spec(&format!("{base},\"path\":\"badea_2iso\"}}")).is_err());
    assert!(parse_spec(&format!("{base},\"path\":\"sideways\"}}")).is_err());
}

#[test]
fn catalog_round_trips() {
    for d in DEMOS {
        let spec = demo_spec(d.name).unwrap();
        assert_eq!(parse_spec(&emit_spec(&spec)).unwrap(), spec, "{}", d.name);
    }
    assert!(matches!(demo_spec("nope"), Err(Error::UnknownDemo(_))));
}

#[test]
fn scalar_one_and_a_half_fails_precondition() {
    let text = r#"{"operator":{"kind":"dense","entries":[[[1.5,0]]]},"m":2,"truncation":{"n_blocks":6}}"#;
    let err = run_pipeline(&parse_spec(text).unwrap()).unwrap_err();
    assert_eq!(err.kind(), ErrorKind::Precondition, "{err}");
    let c = classify_spec(&parse_spec(text).unwrap()).unwrap();
    assert!(c.classification.expansive.holds);
    assert!(!c.classification.m_concave.holds);
    assert_eq!(c.admissible_path, None);
}

#[test]
fn scalar_demo_reports_weights() {
    let r = demo("scalar-3concave").unwrap();
    assert!(r.overall, "{:#?}", r.checks);
    assert_eq!(r.path, DilationPath::ThreeConcave);
    let w: Vec<f64> = r.model.weights.iter().take(3).map(|w| w.diagonal.as_ref().unwrap()[0]).collect();
    assert!((w[0] - 1.0).abs() < 1e-12);
    assert!((w[1] - 1.118034).abs() < 1e-6);
    assert!((w[2] - 1.183216).abs() < 1e-6);
}

#[test]
fn every_demo_passes() {
    for d in DEMOS {
        let r = demo(d.name).unwrap();
        assert!(r.overall, "{}: {:#?}", d.name, r.checks.iter().filter(|c| !c.passed).collect::<Vec<_>>());
    }
}

#[test]
fn nonisomorphic_pair_certificate() {
    let r = demo("nonisomorphic-pair").unwrap();
    let cert = r.certificate.unwrap();
    assert!(cert.found);
    assert!((cert.gap_e0 - 0.5).abs() < 1e-10);
}

#[test]
fn degenerate_demos() {
    let r = demo("unitary").unwrap();
    assert_eq!(r.model.hprime_dim, 0);
    let r = demo("zero-operator").unwrap();
    assert_eq!(r.model.hprime_dim, 1);
    assert!(r.model.weights.iter().all(|w| (w.norm - 1.0).abs() < 1e-15));
}

#[test]
fn reports_are_byte_stable() {
    let a = demo("strict-2concave").unwrap().to_json();
    let b = demo("strict-2concave").unwrap().to_json();
    assert_eq!(a, b);
    assert!(!a.contains("timestamp"));
}
