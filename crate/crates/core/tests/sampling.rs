use std::path::PathBuf;

use idamp::experiment::{parse_experiment, ExperimentSpec};
use idamp::sampling::sample_outcomes;
use idamp::sequence::Configuration;
use idamp::ExchangeClass;

fn hom() -> ExperimentSpec {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("scenarios/hom-beamsplitter.json");
    parse_experiment(&std::fs::read(path).unwrap()).unwrap()
}

fn coincidences(counts: &[(Configuration, usize)]) -> usize {
    let pq = Configuration::from_labels(["p", "q"]).unwrap();
    counts.iter().find(|(c, _)| *c == pq).map_or(0, |(_, n)| *n)
}

#[test]
fn bosons_never_coincide_fermions_always_do() {
    let spec = hom();
    let boson = sample_outcomes(&spec, ExchangeClass::Boson, 1_000, 1).unwrap();
    assert_eq!(coincidences(&boson), 0);
    assert_eq!(boson.iter().map(|(_, n)| n).sum::<usize>(), 1_000);
    let fermion = sample_outcomes(&spec, ExchangeClass::Fermion, 1_000, 1).unwrap();
    assert_eq!(coincidences(&fermion), 1_000);
}

#[test]
fn distinguishable_coincidence_rate_is_one_half() {
    let counts = sample_outcomes(&hom(), ExchangeClass::Distinguishable, 100_000, 3).unwrap();
    let rate = coincidences(&counts) as f64 / 100_000.0;
    assert!((rate - 0.5).abs() < 0.01, "{rate}");
}

#[test]
fn seeded_draws_repeat() {
    let spec = hom();
    let a = sample_outcomes(&spec, ExchangeClass::Distinguishable, 500, 9).unwrap();
    let b = sample_outcomes(&spec, ExchangeClass::Distinguishable, 500, 9).unwrap();
    let c = sample_outcomes(&spec, ExchangeClass::Distinguishable, 500, 10).unwrap();
    assert_eq!(a, b);
    assert_ne!(a, c);
    // every final configuration is listed, in canonical order
    let finals: Vec<String> = a.iter().map(|(c, _)| c.to_string()).collect();
    assert_eq!(finals, ["p:2", "p:1 q:1", "q:2"]);
}

#[test]
fn listed_finals_are_rejected() {
    let mut spec = hom();
    spec.finals = idamp::experiment::Finals::Listed(vec![Configuration::from_labels(["p", "q"]).unwrap()]);
    assert!(sample_outcomes(&spec, ExchangeClass::Boson, 10, 1).is_err());
}
