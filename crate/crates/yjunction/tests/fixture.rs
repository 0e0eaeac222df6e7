use yjunction::fixture::{calibrate, compare_with_reference, Fixture};
use yjunction::verify::{run_suite, Status};
use yjunction_core::protocol::{GateId, GateProtocol};

const CHECKED_IN: &str = include_str!("fixtures/calibration.txt");

#[test]
fn calibration_matches_the_checked_in_fixture() {
    assert_eq!(calibrate().unwrap().to_text(), CHECKED_IN);
}

#[test]
fn fixture_text_round_trips() {
    let f = Fixture::parse(CHECKED_IN).unwrap();
    assert_eq!(f, calibrate().unwrap());
    assert_eq!(f.to_text(), CHECKED_IN);
}

#[test]
fn closed_gates_match_the_reference_tables() {
    for g in [GateId::S, GateId::Sdg, GateId::Tdg, GateId::RxxP, GateId::RxxM] {
        let rows = compare_with_reference(g, GateProtocol::new(g).frame_table()).unwrap();
        assert_eq!(rows.len(), 8);
        assert!(rows.iter().all(|r| r.matches()), "{g}: {rows:?}");
    }
    assert!(compare_with_reference(GateId::I, GateProtocol::new(GateId::I).frame_table()).is_none());
}

#[test]
fn a_tampered_row_is_reported() {
    let tampered = CHECKED_IN.replacen("frames Sdg\n  closed yes\n  000 Y", "frames Sdg\n  closed yes\n  000 Z", 1);
    assert_ne!(tampered, CHECKED_IN);
    let f = Fixture::parse(&tampered).unwrap();
    let checks = run_suite("frames", Some(&f)).unwrap();
    let bad: Vec<_> = checks.iter().filter(|c| c.status == Status::Fail).collect();
    assert_eq!(bad.len(), 1, "{checks:?}");
    assert!(bad[0].detail.contains("row 000"), "{}", bad[0].detail);
    assert!(bad[0].name.contains("Sdg"));
}

#[test]
fn malformed_fixtures_name_the_line() {
    let broken = CHECKED_IN.replacen("  recovery +IXII", "  recovery +IQII", 1);
    match Fixture::parse(&broken) {
        Err(yjunction::Error::Format { line, .. }) => assert_eq!(line, 4),
        other => panic!("{other:?}"),
    }
}
