use cuspfib::cuspdual::{verify_duality, CycleData, DualityReport, Triple};
use cuspfib::k3glue::{classify_inose_boundary, glued_lattice, GlueReport, InoseCase, InoseClassification};
use cuspfib::milnorfiber::{monodromy_report, MonodromyReport};
use cuspfib::numcheck::{verify_fibration, FibrationParams, FibrationReport, NumericalConfig};
use cuspfib::quadlattice::{t_lattice, GramLattice};
use cuspfib::sl2z::{is_conjugate_to_inverse, monodromy_matrix, ConjugacyCertificate, Sl2Matrix};
use cuspfib::QuadIrrational;
use serde::de::DeserializeOwned;
use serde::Serialize;
use std::fmt::Debug;

fn round_trip<T: Serialize + DeserializeOwned + PartialEq + Debug>(value: &T) -> String {
    let text = serde_json::to_string(value).unwrap();
    let back: T = serde_json::from_str(&text).unwrap();
    assert_eq!(&back, value);
    text
}

#[test]
fn exact_types() {
    let m = monodromy_matrix(2, 3, 7).unwrap();
    assert_eq!(round_trip(&m), "[[5,-11],[1,-2]]");
    round_trip(&Triple::new(2, 4, 5).unwrap());
    round_trip(&CycleData::new(vec![3, 2]).unwrap());
    let q = QuadIrrational::from_i64(3, 1, 2, 3);
    round_trip(&q);
    let cert: ConjugacyCertificate = is_conjugate_to_inverse(&monodromy_matrix(2, 4, 5).unwrap(), &monodromy_matrix(2, 3, 8).unwrap()).unwrap();
    round_trip(&cert);
    let l: GramLattice = t_lattice(3, 4, 5).unwrap();
    round_trip(&l);
}

#[test]
fn integers_beyond_i64_become_strings() {
    let big = Sl2Matrix::r().pow(i64::MAX).pow(4);
    let text = round_trip(&big);
    assert!(text.contains('"'), "{text}");
    let small = Sl2Matrix::r().pow(5);
    assert!(!round_trip(&small).contains('"'));
}

#[test]
fn reports() {
    let d: DualityReport = verify_duality(2, 3, 8).unwrap();
    let text = round_trip(&d);
    assert!(text.contains("\"alpha_v\":\"2+sqrt(3)\""), "{text}");
    assert!(text.contains("\"dual\":[2,4,5]"));
    let g: GlueReport = glued_lattice(&Triple::new(2, 4, 5).unwrap(), &Triple::new(2, 3, 8).unwrap()).unwrap();
    round_trip(&g);
    let i: InoseClassification = classify_inose_boundary(InoseCase::new([0, 0, 2, 2]).unwrap());
    round_trip(&i);
    let m: MonodromyReport = monodromy_report(2, 3, 7).unwrap();
    round_trip(&m);
}

#[test]
fn numerical_report_survives_a_round_trip() {
    let params = FibrationParams::minimal(2, 3, 7, 1.0).unwrap();
    let cfg = NumericalConfig { samples: 100, ..NumericalConfig::default() };
    let rep = verify_fibration(&params, &cfg).unwrap();
    let text = serde_json::to_string(&rep).unwrap();
    let back: FibrationReport = serde_json::from_str(&text).unwrap();
    // shortest-round-trip float formatting makes the text a fixed point
    assert_eq!(serde_json::to_string(&back).unwrap(), text);
    assert_eq!(back.passed(), rep.passed());
}

#[test]
fn config_from_toml() {
    let cfg = NumericalConfig::from_toml_str("residual_tol = 1e-10\nseed = 7\n").unwrap();
    assert_eq!(cfg.residual_tol, 1e-10);
    assert_eq!(cfg.seed, 7);
    assert_eq!(cfg.samples, NumericalConfig::default().samples);
    assert!(NumericalConfig::from_toml_str("bogus = 1").is_err());
}
