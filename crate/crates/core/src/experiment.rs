//! JSON experiment descriptions and the runner that turns them into
//! per-configuration amplitudes and probabilities.
//!
//! ```json
//! {
//!   "name": "hom-beamsplitter",
//!   "particle-count": 2,
//!   "exchange-classes": ["boson", "fermion", "distinguishable"],
//!   "measurements": [["a", "b"], ["p", "q"]],
//!   "steps": [[[[0.7071067811865476, 0], [0.7071067811865476, 0]],
//!              [[0.7071067811865476, 0], [-0.7071067811865476, 0]]]],
//!   "initial": {"a": 1, "b": 1},
//!   "finals": "all",
//!   "intermediate-policy": "coarse"
//! }
//! ```
//!
//! Boson probabilities divide `|amplitude|²` by `∏ μ!` of the initial and
//! final configurations (and by `(∏ μ!)²` of each resolved interior one).

use std::collections::{BTreeMap, BTreeSet};

use num_complex::Complex64;
use serde::de::{self, Deserializer};
use serde::ser::Serializer;
use serde::{Deserialize, Serialize};

use crate::amplitude::{probability, Amplitude, Probability};
use crate::error::{Error, Result};
use crate::exchange::{distinguishable_weight, ExchangeClass};
use crate::matrix::TransitionMatrix;
use crate::sequence::{
    coarse_chain, enumerate_configurations, restrict_matrix, sequence_amplitude, Configuration,
    MeasurementSequence, MeasurementStep,
};
use crate::ENGINE_VERSION;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum IntermediatePolicy {
    /// A configuration is given for every interior measurement.
    Resolved,
    /// Interior measurements are unobserved and summed over.
    Coarse,
}

/// Final configurations to report: every configuration of the last
/// measurement, or an explicit list.
#[derive(Debug, Clone, PartialEq)]
pub enum Finals {
    All,
    Listed(Vec<Configuration>),
}

impl Serialize for Finals {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Finals::All => s.serialize_str("all"),
            Finals::Listed(list) => list.serialize(s),
        }
    }
}

impl<'de> Deserialize<'de> for Finals {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Raw {
            Token(String),
            List(Vec<Configuration>),
        }
        match Raw::deserialize(d).map_err(|_| {
            de::Error::custom("expected the string \"all\" or a list of configurations")
        })? {
            Raw::Token(t) if t == "all" => Ok(Finals::All),
            Raw::Token(t) => Err(de::Error::custom(format!("unknown finals token {t:?}, expected \"all\""))),
            Raw::List(list) => Ok(Finals::Listed(list)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, rename_all = "kebab-case")]
pub struct ExperimentSpec {
    pub name: String,
    pub particle_count: usize,
    pub exchange_classes: Vec<ExchangeClass>,
    /// Outcome labels of each measurement, in matrix index order.
    pub measurements: Vec<Vec<String>>,
    /// One matrix per consecutive pair of measurements, rows of `[re, im]`.
    pub steps: Vec<Vec<Vec<Complex64>>>,
    pub initial: Configuration,
    pub finals: Finals,
    pub intermediate_policy: IntermediatePolicy,
    /// Interior configurations, required for the resolved policy.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub intermediates: Vec<Configuration>,
}

/// Parses and validates an experiment document.
pub fn parse_experiment(text: &[u8]) -> Result<ExperimentSpec> {
    let text = std::str::from_utf8(text).map_err(|e| Error::Parse {
        path: ".".into(),
        message: format!("not UTF-8: {e}"),
    })?;
    let mut de = serde_json::Deserializer::from_str(text);
    let spec: ExperimentSpec = serde_path_to_error::deserialize(&mut de).map_err(|e| Error::Parse {
        path: e.path().to_string(),
        message: e.inner().to_string(),
    })?;
    de.end().map_err(|e| Error::Parse { path: ".".into(), message: e.to_string() })?;
    spec.validate()?;
    Ok(spec)
}

fn check_labels(cfg: &Configuration, outcomes: &[String], what: &str, n: usize) -> Result<()> {
    if cfg.total() != n {
        return Err(Error::Validation(format!(
            "{what} holds {} particles, particle-count is {n}",
            cfg.total()
        )));
    }
    if let Some(l) = cfg.labels().find(|l| !outcomes.iter().any(|o| o == l)) {
        return Err(Error::LabelMismatch { label: l.to_string(), context: what.to_string() });
    }
    Ok(())
}

impl ExperimentSpec {
    pub fn validate(&self) -> Result<()> {
        let n = self.particle_count;
        if n == 0 {
            return Err(Error::Validation("particle-count must be at least 1".into()));
        }
        if self.exchange_classes.is_empty() {
            return Err(Error::Validation("exchange-classes is empty".into()));
        }
        if self.exchange_classes.iter().collect::<BTreeSet<_>>().len() != self.exchange_classes.len() {
            return Err(Error::Validation("exchange-classes lists a class twice".into()));
        }
        if self.measurements.is_empty() {
            return Err(Error::Validation("no measurements".into()));
        }
        for (k, outcomes) in self.measurements.iter().enumerate() {
            if outcomes.is_empty() {
                return Err(Error::Validation(format!("measurement {k} has no outcomes")));
            }
            if outcomes.iter().any(String::is_empty) {
                return Err(Error::Validation(format!("measurement {k} has an empty label")));
            }
            if outcomes.iter().collect::<BTreeSet<_>>().len() != outcomes.len() {
                return Err(Error::Validation(format!("measurement {k} repeats a label")));
            }
        }
        if self.steps.len() + 1 != self.measurements.len() {
            return Err(Error::Dimension(format!(
                "{} measurements need {} steps, got {}",
                self.measurements.len(),
                self.measurements.len() - 1,
                self.steps.len()
            )));
        }
        self.build_steps()?;

        check_labels(&self.initial, &self.measurements[0], "initial configuration", n)?;
        let last = self.measurements.last().expect("non-empty");
        if let Finals::Listed(list) = &self.finals {
            if list.is_empty() {
                return Err(Error::Validation("finals list is empty".into()));
            }
            for (i, cfg) in list.iter().enumerate() {
                check_labels(cfg, last, &format!("final configuration {i}"), n)?;
            }
            if list.iter().collect::<BTreeSet<_>>().len() != list.len() {
                return Err(Error::Validation("finals list repeats a configuration".into()));
            }
        }
        match self.intermediate_policy {
            IntermediatePolicy::Resolved => {
                let interior = self.measurements.len().saturating_sub(2);
                if self.intermediates.len() != interior {
                    return Err(Error::Validation(format!(
                        "resolved policy needs {interior} intermediate configurations, got {}",
                        self.intermediates.len()
                    )));
                }
                for (k, cfg) in self.intermediates.iter().enumerate() {
                    check_labels(cfg, &self.measurements[k + 1], &format!("intermediate configuration {k}"), n)?;
                }
            }
            IntermediatePolicy::Coarse => {
                if !self.intermediates.is_empty() {
                    return Err(Error::Validation("intermediates given under the coarse policy".into()));
                }
            }
        }
        Ok(())
    }

    /// The steps as engine objects, checking shapes and the unit disk.
    pub fn build_steps(&self) -> Result<Vec<MeasurementStep>> {
        self.steps
            .iter()
            .enumerate()
            .map(|(k, rows)| {
                let (from, to) = (&self.measurements[k], &self.measurements[k + 1]);
                let shape_ok = rows.len() == from.len() && rows.iter().all(|r| r.len() == to.len());
                if !shape_ok {
                    let cols: Vec<usize> = rows.iter().map(Vec::len).collect();
                    return Err(Error::Dimension(format!(
                        "step {k}: expected a {}x{} matrix, got {} rows of lengths {cols:?}",
                        from.len(),
                        to.len(),
                        rows.len()
                    )));
                }
                let matrix = TransitionMatrix::from_rows(rows.clone())
                    .map_err(|e| Error::Validation(format!("step {k}: {e}")))?;
                MeasurementStep::new(format!("step-{k}"), from.clone(), to.clone(), matrix)
            })
            .collect()
    }

    /// Final configurations in canonical order.
    pub fn final_configurations(&self) -> Vec<Configuration> {
        match &self.finals {
            Finals::All => enumerate_configurations(
                self.measurements.last().expect("validated"),
                self.particle_count,
                false,
            ),
            Finals::Listed(list) => {
                let mut list = list.clone();
                list.sort();
                list
            }
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("spec serializes")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultRow {
    #[serde(rename = "final")]
    pub final_configuration: Configuration,
    pub class: ExchangeClass,
    /// Absent for distinguishable particles, which have no amplitude.
    pub amplitude: Option<Amplitude>,
    pub probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Metadata {
    pub spec_name: String,
    pub engine_version: String,
    pub seed: Option<u64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResultTable {
    pub metadata: Metadata,
    pub rows: Vec<ResultRow>,
}

impl ResultTable {
    /// Total probability per exchange class.
    pub fn class_totals(&self) -> BTreeMap<ExchangeClass, f64> {
        let mut out = BTreeMap::new();
        for r in &self.rows {
            *out.entry(r.class).or_insert(0.0) += r.probability;
        }
        out
    }

    pub fn probability_of(&self, cfg: &Configuration, class: ExchangeClass) -> Option<f64> {
        self.rows
            .iter()
            .find(|r| r.class == class && &r.final_configuration == cfg)
            .map(|r| r.probability)
    }

    pub fn to_csv(&self) -> String {
        let mut w = csv::Writer::from_writer(Vec::new());
        w.write_record(["final", "class", "amp_re", "amp_im", "probability"])
            .expect("in-memory write");
        for r in &self.rows {
            let (re, im) = match r.amplitude {
                Some(a) => (fmt_f64(a.re), fmt_f64(a.im)),
                None => (String::new(), String::new()),
            };
            w.write_record([
                r.final_configuration.to_string(),
                r.class.to_string(),
                re,
                im,
                fmt_f64(r.probability),
            ])
            .expect("in-memory write");
        }
        String::from_utf8(w.into_inner().expect("flush to memory")).expect("csv is UTF-8")
    }

    /// JSON array of rows.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.rows).expect("rows serialize")
    }
}

// shortest round-trip form (exponent for tiny values), negative zero folded into zero
fn fmt_f64(x: f64) -> String {
    format!("{:?}", x + 0.0)
}

/// Runs every exchange class listed in the spec.
pub fn run_experiment(spec: &ExperimentSpec) -> Result<ResultTable> {
    run_experiment_for(spec, &spec.exchange_classes)
}

/// Runs the given classes, emitting rows by final configuration, then class.
pub fn run_experiment_for(spec: &ExperimentSpec, classes: &[ExchangeClass]) -> Result<ResultTable> {
    spec.validate()?;
    let steps = spec.build_steps()?;
    let classes: BTreeSet<ExchangeClass> = classes.iter().copied().collect();
    let coarse_product = match (spec.intermediate_policy, classes.contains(&ExchangeClass::Distinguishable)) {
        (IntermediatePolicy::Coarse, true) => Some(chain_product(&steps)?),
        _ => None,
    };

    let mut rows = Vec::new();
    for fin in spec.final_configurations() {
        for &class in &classes {
            let row = match class {
                ExchangeClass::Distinguishable => ResultRow {
                    final_configuration: fin.clone(),
                    class,
                    amplitude: None,
                    probability: distinguishable_row(spec, &steps, coarse_product.as_ref(), &fin)?,
                },
                _ => {
                    let (amp, weight) = identical_row(spec, &steps, &fin, class)?;
                    ResultRow {
                        final_configuration: fin.clone(),
                        class,
                        amplitude: Some(amp),
                        probability: probability(amp / weight.sqrt())?.value(),
                    }
                }
            };
            rows.push(row);
        }
    }
    Ok(ResultTable {
        metadata: Metadata {
            spec_name: spec.name.clone(),
            engine_version: ENGINE_VERSION.to_string(),
            seed: None,
        },
        rows,
    })
}

fn resolved_path(spec: &ExperimentSpec, fin: &Configuration) -> Vec<Configuration> {
    std::iter::once(spec.initial.clone())
        .chain(spec.intermediates.iter().cloned())
        .chain(std::iter::once(fin.clone()))
        .collect()
}

/// Raw amplitude and the multiplicity weight its squared modulus is divided by.
fn identical_row(
    spec: &ExperimentSpec,
    steps: &[MeasurementStep],
    fin: &Configuration,
    class: ExchangeClass,
) -> Result<(Amplitude, f64)> {
    let ends = spec.initial.multiplicity_factor() * fin.multiplicity_factor();
    if steps.is_empty() {
        let amp = if &spec.initial == fin { 1.0 } else { 0.0 };
        return Ok((Complex64::new(amp, 0.0), 1.0));
    }
    match spec.intermediate_policy {
        IntermediatePolicy::Resolved => {
            let seq = MeasurementSequence::new(resolved_path(spec, fin), steps.to_vec())?;
            let interior: f64 = spec.intermediates.iter().map(|c| c.multiplicity_factor().powi(2)).product();
            Ok((sequence_amplitude(&seq, class)?, ends * interior))
        }
        IntermediatePolicy::Coarse => Ok((coarse_chain(steps, &spec.initial, fin, class)?, ends)),
    }
}

fn chain_product(steps: &[MeasurementStep]) -> Result<Option<TransitionMatrix>> {
    let mut iter = steps.iter();
    let Some(first) = iter.next() else { return Ok(None) };
    let mut acc = first.matrix().clone();
    for step in iter {
        acc = acc.matmul(step.matrix())?;
    }
    Ok(Some(acc))
}

// a particle's outgoing probabilities must not sum past one
fn check_row_weights(m: &TransitionMatrix) -> Result<()> {
    let (row, sum) = m.max_row_weight();
    if sum > 1.0 + 1e-9 {
        return Err(Error::RowNormExceeded { row, sum });
    }
    Ok(())
}

/// Distinguishable particles: each particle carries its own amplitude, so
/// unobserved intermediates combine through the matrix product and only the
/// final squared moduli are summed over particle assignments.
fn distinguishable_row(
    spec: &ExperimentSpec,
    steps: &[MeasurementStep],
    coarse_product: Option<&Option<TransitionMatrix>>,
    fin: &Configuration,
) -> Result<f64> {
    if steps.is_empty() {
        return Ok(if &spec.initial == fin { 1.0 } else { 0.0 });
    }
    match (spec.intermediate_policy, coarse_product) {
        (IntermediatePolicy::Coarse, Some(Some(product))) => {
            let step = MeasurementStep::new(
                "product",
                spec.measurements[0].clone(),
                spec.measurements.last().expect("validated").clone(),
                product.clone(),
            )?;
            check_row_weights(product)?;
            let m = restrict_matrix(&step, &spec.initial, fin)?;
            Ok(Probability::new(distinguishable_weight(&m)? / fin.multiplicity_factor())?.value())
        }
        _ => {
            let path = resolved_path(spec, fin);
            let mut p = 1.0;
            for (k, step) in steps.iter().enumerate() {
                check_row_weights(step.matrix())?;
                let m = restrict_matrix(step, &path[k], &path[k + 1])?;
                p *= distinguishable_weight(&m)? / path[k + 1].multiplicity_factor();
            }
            Ok(Probability::new(p)?.value())
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const HOM: &str = r#"{
        "name": "hom",
        "particle-count": 2,
        "exchange-classes": ["boson", "fermion", "dist"],
        "measurements": [["a", "b"], ["p", "q"]],
        "steps": [[[[0.7071067811865476, 0], [0.7071067811865476, 0]],
                   [[0.7071067811865476, 0], [-0.7071067811865476, 0]]]],
        "initial": {"a": 1, "b": 1},
        "finals": [{"p": 1, "q": 1}],
        "intermediate-policy": "coarse"
    }"#;

    fn cfg(xs: &[&str]) -> Configuration {
        Configuration::from_labels(xs.iter().copied()).unwrap()
    }

    #[test]
    fn parses_hom() {
        let spec = parse_experiment(HOM.as_bytes()).unwrap();
        assert_eq!(spec.particle_count, 2);
        assert_eq!(spec.steps.len(), 1);
        assert_eq!(spec.exchange_classes[2], ExchangeClass::Distinguishable);
        let again = parse_experiment(spec.to_json().as_bytes()).unwrap();
        assert_eq!(again, spec);
    }

    #[test]
    fn rejects_out_of_disk_entry() {
        let text = HOM.replacen("[0.7071067811865476, 0]", "[1.5, 0]", 1);
        let err = parse_experiment(text.as_bytes()).unwrap_err();
        assert!(matches!(&err, Error::Validation(m) if m.contains("unit disk")), "{err}");
    }

    #[test]
    fn rejects_wrong_step_shape() {
        let text = HOM.replace(
            r#"[[[[0.7071067811865476, 0], [0.7071067811865476, 0]],"#,
            r#"[[[[0.7071067811865476, 0], [0.7071067811865476, 0], [0, 0]],"#,
        )
        .replace(
            r#"[[0.7071067811865476, 0], [-0.7071067811865476, 0]]]]"#,
            r#"[[0.7071067811865476, 0], [-0.7071067811865476, 0], [0, 0]]]]"#,
        );
        assert!(matches!(parse_experiment(text.as_bytes()), Err(Error::Dimension(_))));
    }

    #[test]
    fn rejects_unknown_fields_with_path() {
        let text = HOM.replace("\"name\"", "\"nmae\"");
        match parse_experiment(text.as_bytes()) {
            Err(Error::Parse { message, .. }) => assert!(message.contains("nmae"), "{message}"),
            other => panic!("unexpected {other:?}"),
        }
        let text = HOM.replace("{\"a\": 1, \"b\": 1}", "{\"a\": 0, \"b\": 2}");
        match parse_experiment(text.as_bytes()) {
            Err(Error::Parse { path, .. }) => assert_eq!(path, "initial"),
            other => panic!("unexpected {other:?}"),
        }
        assert!(matches!(parse_experiment(b"\xff"), Err(Error::Parse { .. })));
    }

    #[test]
    fn policy_is_required() {
        let text = HOM.replace(",\n        \"intermediate-policy\": \"coarse\"", "");
        assert!(!text.contains("intermediate-policy"));
        match parse_experiment(text.as_bytes()) {
            Err(Error::Parse { message, .. }) => assert!(message.contains("intermediate-policy"), "{message}"),
            other => panic!("unexpected {other:?}"),
        }
    }

    #[test]
    fn rejects_bad_configurations() {
        let text = HOM.replace("{\"a\": 1, \"b\": 1}", "{\"a\": 1, \"z\": 1}");
        assert!(matches!(parse_experiment(text.as_bytes()), Err(Error::LabelMismatch { .. })));
        let text = HOM.replace("{\"a\": 1, \"b\": 1}", "{\"a\": 1}");
        assert!(matches!(parse_experiment(text.as_bytes()), Err(Error::Validation(_))));
        let text = HOM.replace("\"coarse\"", "\"resolved\"").replace("\"finals\"", "\"intermediates\": [{\"a\": 2}], \"finals\"");
        assert!(parse_experiment(text.as_bytes()).is_err());
    }

    #[test]
    fn hom_probabilities() {
        let spec = parse_experiment(HOM.as_bytes()).unwrap();
        let table = run_experiment(&spec).unwrap();
        let pq = cfg(&["p", "q"]);
        assert_eq!(table.probability_of(&pq, ExchangeClass::Boson), Some(0.0));
        assert_eq!(table.probability_of(&pq, ExchangeClass::Fermion), Some(1.0));
        let d = table.probability_of(&pq, ExchangeClass::Distinguishable).unwrap();
        assert!((d - 0.5).abs() < 1e-12);
        assert!(table.rows.iter().find(|r| r.class == ExchangeClass::Distinguishable).unwrap().amplitude.is_none());
    }

    #[test]
    fn identity_step_is_deterministic() {
        let text = HOM
            .replace("\"finals\": [{\"p\": 1, \"q\": 1}]", "\"finals\": \"all\"")
            .replace(
                r#"[[[[0.7071067811865476, 0], [0.7071067811865476, 0]],
                   [[0.7071067811865476, 0], [-0.7071067811865476, 0]]]]"#,
                "[[[[1, 0], [0, 0]], [[0, 0], [1, 0]]]]",
            );
        let spec = parse_experiment(text.as_bytes()).unwrap();
        let table = run_experiment(&spec).unwrap();
        assert_eq!(table.rows.len(), 9);
        for r in &table.rows {
            let expect = if r.final_configuration == cfg(&["p", "q"]) { 1.0 } else { 0.0 };
            assert_eq!(r.probability, expect, "{r:?}");
        }
    }

    #[test]
    fn csv_layout() {
        let spec = parse_experiment(HOM.as_bytes()).unwrap();
        let csv = run_experiment(&spec).unwrap().to_csv();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "final,class,amp_re,amp_im,probability");
        assert_eq!(lines[1], "p:1 q:1,boson,0.0,0.0,0.0");
        assert!(lines[3].starts_with("p:1 q:1,distinguishable,,,"));
    }

    #[test]
    fn resolved_policy_matches_sequence_amplitude() {
        let text = r#"{
            "name": "resolved",
            "particle-count": 2,
            "exchange-classes": ["fermion", "boson", "distinguishable"],
            "measurements": [["a", "b"], ["l", "r"], ["p", "q"]],
            "steps": [[[[0.6, 0], [0, 0.8]], [[0, 0.8], [0.6, 0]]],
                      [[[0.5, 0.5], [0.5, -0.5]], [[0.5, -0.5], [0.5, 0.5]]]],
            "initial": {"a": 1, "b": 1},
            "finals": "all",
            "intermediate-policy": "resolved",
            "intermediates": [{"l": 1, "r": 1}]
        }"#;
        let spec = parse_experiment(text.as_bytes()).unwrap();
        let table = run_experiment(&spec).unwrap();
        // rows sorted by configuration then class
        assert_eq!(table.rows[0].class, ExchangeClass::Boson);
        let steps = spec.build_steps().unwrap();
        let seq = MeasurementSequence::new(
            vec![cfg(&["a", "b"]), cfg(&["l", "r"]), cfg(&["p", "q"])],
            steps,
        )
        .unwrap();
        let amp = sequence_amplitude(&seq, ExchangeClass::Fermion).unwrap();
        let row = table
            .rows
            .iter()
            .find(|r| r.class == ExchangeClass::Fermion && r.final_configuration == cfg(&["p", "q"]))
            .unwrap();
        assert_eq!(row.amplitude, Some(amp));
    }
}
