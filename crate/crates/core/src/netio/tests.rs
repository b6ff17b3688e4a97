use nalgebra::DVector;
use proptest::prelude::*;

use super::*;
use crate::dynamics::{simulate, OutputGrid, SimOptions, Trajectory};
use crate::error::Error;
use crate::netcore::{brusselator, IntMatrix};

const BRUSSELATOR: &str = "\
# simplified Brusselator
species X1 X2
reaction r1: 0 <-> X1 ; kf=1 kr=1
reaction r2: X1 <-> X2 ; kf=3 kr=0.1
reaction r3: 2 X1 + X2 <-> 3X1 ; kf=1 kr=0.1   # autocatalysis
";

fn span_of(e: Error) -> (usize, usize, String) {
    match e {
        Error::Parse { span, message } => (span.line, span.column, message),
        other => panic!("expected a parse error, got {other}"),
    }
}

#[test]
fn brusselator_file_matches_builder() {
    let net = parse_network(BRUSSELATOR).unwrap();
    let built = brusselator([1.0, 3.0, 1.0], [1.0, 0.1, 0.1]).unwrap();
    assert_eq!(net.stoich(), &IntMatrix::from_rows(&[vec![-1, 1, -1], vec![0, -1, 1]], 3));
    assert_eq!(net.gamma(), built.gamma());
    assert_eq!(net.incidence(), built.incidence());
    assert_eq!(net.labels(), ["r1", "r2", "r3"]);
    assert_eq!(net.kminus(), built.kminus());
}

#[test]
fn empty_complex_is_zero_column() {
    let net = parse_network("species X1\nreaction r: 0 <-> X1 ; kf=1 kr=1\n").unwrap();
    assert_eq!(net.hypervertices()[0], vec![0]);
    assert_eq!(net.gamma().col(0), vec![0]);
}

#[test]
fn positioned_errors() {
    let cases: [(&str, usize, usize, &str); 9] = [
        ("species X1\nreaction r: X1 <-> X1 ; kf=1 kr=1", 2, 13, "same complex"),
        ("species X1\nreaction r: X1 <-> Y ; kf=1 kr=1", 2, 20, "unknown species"),
        ("species X1 X2\nreaction r: X1 <-> X2 ; kf=0 kr=1", 2, 28, "positive"),
        ("species X1 X2\nreaction r: X1 <-> X2 ; kf=1 kr=-2", 2, 33, "positive"),
        ("species A B\nreaction r: A <-> B ; kf=1 kr=1\nreaction r: B <-> 0 ; kf=1 kr=1", 3, 10, "duplicate"),
        ("species A A", 1, 11, "duplicate species"),
        ("species A B\nreaction r: A -> B ; kf=1 kr=1", 2, 15, "`<->`"),
        ("molecule A", 1, 1, "expected"),
        ("species A B\nreaction r: 0A <-> B ; kf=1 kr=1", 2, 13, "coefficient"),
    ];
    for (text, line, col, needle) in cases {
        let (l, c, m) = span_of(parse_network(text).unwrap_err());
        assert_eq!((l, c), (line, col), "{text:?}: {m}");
        assert!(m.contains(needle), "{m}");
    }
    let (l, _, m) = span_of(parse_network("# nothing\n").unwrap_err());
    assert_eq!(l, 2);
    assert!(m.contains("no reactions"));
}

#[test]
fn repeated_species_merge_and_hypervertices_dedup() {
    let net = parse_network("species A B\nreaction a: A + A <-> B ; kf=1 kr=2\nreaction b: B <-> 2 A ; kf=1e-3 kr=5E2\n").unwrap();
    assert_eq!(net.n_hypervertices(), 2);
    assert_eq!(net.hypervertices()[0], vec![2, 0]);
    assert_eq!(net.kminus()[1], 500.0);
}

#[test]
fn canonical_round_trip() {
    let net = parse_network(BRUSSELATOR).unwrap();
    let text = network_to_text(&net);
    let again = parse_network(&text).unwrap();
    assert_eq!(network_to_text(&again), text);
    assert_eq!(again.stoich(), net.stoich());
    assert_eq!(again.kplus(), net.kplus());
    assert_eq!(again.labels(), net.labels());
}

#[test]
fn csv_layout() {
    let net = parse_network("species A B\nreaction r: A <-> B ; kf=2 kr=1\n").unwrap();
    let empty = trajectory_csv(&Trajectory::default(), &net);
    assert_eq!(empty, "t,x_A,x_B,D,epr,pepr,psi,psistar,eta_1\n");
    let tr = simulate(
        &net,
        &DVector::from_vec(vec![1.0, 1.0]),
        1.0,
        &SimOptions::default().with_grid(OutputGrid::Uniform(3)),
    )
    .unwrap();
    let csv = trajectory_csv(&tr, &net);
    let lines: Vec<&str> = csv.lines().collect();
    assert_eq!(lines.len(), 4);
    let cells: Vec<&str> = lines[1].split(',').collect();
    assert_eq!(cells.len(), 9);
    assert_eq!(cells[3], "");
    assert_eq!(cells[0], "0.0000000000000000e0");
    assert_eq!(cells[8].parse::<f64>().unwrap(), 2.0);
}

#[test]
fn schedule_json_round_trip() {
    let s = crate::dynamics::RateSchedule::new(vec![0.0, 0.5], vec![vec![1.0], vec![0.1]], vec![vec![2.0], vec![3.0]]).unwrap();
    let back = schedule_from_json(&schedule_to_json(&s).unwrap()).unwrap();
    assert_eq!(back, s);
    assert!(schedule_from_json(r#"{"times":[0,0],"kplus":[[1],[1]],"kminus":[[1],[1]]}"#).is_err());
}

#[test]
fn scenario_validation() {
    let net = parse_network(BRUSSELATOR).unwrap();
    let ok = ScenarioConfig::new("b.crn", vec![1.0, 4.0]);
    assert!(Scenario::from_parts(ok.clone(), net.clone(), None).is_ok());
    let mut bad = ok.clone();
    bad.x0 = vec![1.0];
    assert!(Scenario::from_parts(bad, net.clone(), None).is_err());
    let mut bad = ok.clone();
    bad.x_ref = Some(vec![1.0, -1.0]);
    assert!(Scenario::from_parts(bad, net.clone(), None).is_err());
    let mut bad = ok.clone();
    bad.rtol = 0.0;
    assert!(Scenario::from_parts(bad, net.clone(), None).is_err());
    let mut sc = Scenario::from_parts(ok, net, None).unwrap();
    sc.set_rate("r2.kf", 7.0).unwrap();
    assert_eq!(sc.network.kplus()[1], 7.0);
    assert!(sc.set_rate("r9.kf", 1.0).is_err());
    assert!(sc.set_rate("r2.k", 1.0).is_err());
    assert!(sc.set_rate("r2.kr", -1.0).is_err());
}

#[test]
fn scenario_rejects_unknown_fields() {
    let r: Result<ScenarioConfig, _> = serde_json::from_str(r#"{"network":"a.crn","x0":[1],"bogus":1}"#);
    assert!(r.is_err());
}

proptest! {
    #[test]
    fn parser_is_total_on_arbitrary_text(s in "\\PC{0,200}") {
        let _ = parse_network(&s);
    }

    #[test]
    fn parser_is_total_on_mutated_networks(pos in 0usize..200, ch in prop::sample::select(vec![' ', '+', '0', '9', 'e', '-', ':', ';', '<', '>', '=', '#', '\n', 'X', '.'])) {
        let mut chars: Vec<char> = BRUSSELATOR.chars().collect();
        let p = pos % chars.len();
        chars[p] = ch;
        let text: String = chars.into_iter().collect();
        if let Err(e) = parse_network(&text) {
            prop_assert!(matches!(e, Error::Parse { .. } | Error::InvalidNetwork(_) | Error::DuplicateHypervertex(_)), "{e}");
        }
    }
}
