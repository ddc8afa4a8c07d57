//! Configurations, measurement sequences and the three composition rules:
//! concatenation (product), coarse graining (sum) and reversal (reciprocity).
//!
//! Bosonic configurations may hold several particles in one outcome. The
//! amplitude of such a transition is the raw permanent of the row/column
//! repeated matrix; whenever configurations are summed over, each term is
//! divided by `∏ μ!` of the summed configuration.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::amplitude::Amplitude;
use crate::error::{Error, Result};
use crate::exchange::{h_n, ExchangeClass};
use crate::matrix::TransitionMatrix;
use crate::permutation::factorial;

/// Occupation counts of outcome labels at one measurement.
///
/// Ordering is lexicographic on the sorted, repetition-expanded label list,
/// so `{a:2} < {a:1, b:1} < {b:2}`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "BTreeMap<String, usize>", into = "BTreeMap<String, usize>")]
pub struct Configuration {
    occupations: BTreeMap<String, usize>,
}

impl Configuration {
    pub fn new(occupations: BTreeMap<String, usize>) -> Result<Self> {
        if occupations.is_empty() {
            return Err(Error::Configuration("no occupied outcomes".into()));
        }
        if let Some((label, _)) = occupations.iter().find(|(_, &c)| c == 0) {
            return Err(Error::Configuration(format!("outcome {label:?} has count 0")));
        }
        if occupations.keys().any(|l| l.is_empty()) {
            return Err(Error::Configuration("empty outcome label".into()));
        }
        Ok(Configuration { occupations })
    }

    /// One particle per listed label; repeated labels accumulate.
    pub fn from_labels<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let mut occupations = BTreeMap::new();
        for l in labels {
            *occupations.entry(l.into()).or_insert(0) += 1;
        }
        Self::new(occupations)
    }

    pub fn total(&self) -> usize {
        self.occupations.values().sum()
    }

    pub fn occupations(&self) -> &BTreeMap<String, usize> {
        &self.occupations
    }

    pub fn count(&self, label: &str) -> usize {
        self.occupations.get(label).copied().unwrap_or(0)
    }

    pub fn labels(&self) -> impl Iterator<Item = &str> {
        self.occupations.keys().map(String::as_str)
    }

    /// Labels in canonical order, each repeated by its occupation.
    pub fn expanded(&self) -> Vec<&str> {
        self.occupations
            .iter()
            .flat_map(|(l, &c)| std::iter::repeat_n(l.as_str(), c))
            .collect()
    }

    pub fn has_repeats(&self) -> bool {
        self.occupations.values().any(|&c| c > 1)
    }

    /// `∏ μ!` over the occupations.
    pub fn multiplicity_factor(&self) -> f64 {
        self.occupations.values().map(|&c| factorial(c) as f64).product()
    }
}

impl TryFrom<BTreeMap<String, usize>> for Configuration {
    type Error = Error;

    fn try_from(map: BTreeMap<String, usize>) -> Result<Self> {
        Configuration::new(map)
    }
}

impl From<Configuration> for BTreeMap<String, usize> {
    fn from(c: Configuration) -> Self {
        c.occupations
    }
}

impl Ord for Configuration {
    fn cmp(&self, other: &Self) -> Ordering {
        self.expanded().cmp(&other.expanded())
    }
}

impl PartialOrd for Configuration {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Configuration {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.occupations.iter().map(|(l, c)| format!("{l}:{c}")).collect();
        f.write_str(&parts.join(" "))
    }
}

/// All configurations of `n` particles over `labels`, in canonical order.
/// With `distinct` set only subsets (one particle per outcome) are produced.
pub fn enumerate_configurations(labels: &[String], n: usize, distinct: bool) -> Vec<Configuration> {
    let mut sorted: Vec<&String> = labels.iter().collect::<BTreeSet<_>>().into_iter().collect();
    sorted.dedup();
    let m = sorted.len();
    let mut out = Vec::new();
    if n == 0 || (distinct && n > m) {
        return out;
    }
    // non-decreasing (or strictly increasing) index tuples in lexicographic order
    let mut idx: Vec<usize> = if distinct { (0..n).collect() } else { vec![0; n] };
    loop {
        out.push(
            Configuration::from_labels(idx.iter().map(|&i| sorted[i].clone()))
                .expect("n >= 1 labels"),
        );
        let mut pos = n;
        let advanced = loop {
            if pos == 0 {
                break false;
            }
            pos -= 1;
            let limit = if distinct { m - (n - pos) } else { m - 1 };
            if idx[pos] < limit {
                idx[pos] += 1;
                for k in pos + 1..n {
                    idx[k] = if distinct { idx[k - 1] + 1 } else { idx[pos] };
                }
                break true;
            }
        };
        if !advanced {
            break;
        }
    }
    out
}

/// Single-particle amplitudes between the outcomes of two consecutive
/// measurements.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementStep {
    pub label: String,
    from: Vec<String>,
    to: Vec<String>,
    matrix: TransitionMatrix,
}

impl MeasurementStep {
    pub fn new(
        label: impl Into<String>,
        from: Vec<String>,
        to: Vec<String>,
        matrix: TransitionMatrix,
    ) -> Result<Self> {
        if matrix.n_rows() != from.len() || matrix.n_cols() != to.len() {
            return Err(Error::Dimension(format!(
                "{}x{} matrix between {} and {} outcomes",
                matrix.n_rows(),
                matrix.n_cols(),
                from.len(),
                to.len()
            )));
        }
        for (side, labels) in [("earlier", &from), ("later", &to)] {
            let unique: BTreeSet<&String> = labels.iter().collect();
            if unique.len() != labels.len() {
                return Err(Error::Validation(format!("duplicate outcome label in {side} measurement")));
            }
            if labels.iter().any(String::is_empty) {
                return Err(Error::Validation(format!("empty outcome label in {side} measurement")));
            }
        }
        Ok(MeasurementStep { label: label.into(), from, to, matrix })
    }

    pub fn from_outcomes(&self) -> &[String] {
        &self.from
    }

    pub fn to_outcomes(&self) -> &[String] {
        &self.to
    }

    pub fn matrix(&self) -> &TransitionMatrix {
        &self.matrix
    }

    /// The step with its measurements interchanged: labels swapped and the
    /// matrix replaced by its conjugate transpose.
    pub fn reversed(&self) -> MeasurementStep {
        MeasurementStep {
            label: self.label.clone(),
            from: self.to.clone(),
            to: self.from.clone(),
            matrix: self.matrix.adjoint(),
        }
    }

    fn earlier_index(&self, label: &str) -> Result<usize> {
        index_of(&self.from, label, || format!("earlier outcomes of step {:?}", self.label))
    }

    fn later_index(&self, label: &str) -> Result<usize> {
        index_of(&self.to, label, || format!("later outcomes of step {:?}", self.label))
    }
}

fn index_of(labels: &[String], label: &str, context: impl FnOnce() -> String) -> Result<usize> {
    labels.iter().position(|l| l == label).ok_or_else(|| Error::LabelMismatch {
        label: label.to_string(),
        context: context(),
    })
}

fn same_label_set(a: &[String], b: &[String]) -> bool {
    a.iter().collect::<BTreeSet<_>>() == b.iter().collect::<BTreeSet<_>>()
}

/// The `N×N` matrix `a[i][j]` between two configurations: row `i` follows
/// the canonical expansion of `from`, column `j` that of `to`.
pub fn restrict_matrix(
    step: &MeasurementStep,
    from: &Configuration,
    to: &Configuration,
) -> Result<TransitionMatrix> {
    if from.total() != to.total() {
        return Err(Error::ParticleCount { expected: from.total(), found: to.total() });
    }
    let rows = from
        .expanded()
        .into_iter()
        .map(|l| step.earlier_index(l))
        .collect::<Result<Vec<_>>>()?;
    let cols = to
        .expanded()
        .into_iter()
        .map(|l| step.later_index(l))
        .collect::<Result<Vec<_>>>()?;
    Ok(step.matrix.select(&rows, &cols))
}

/// Ordered configurations joined by per-step transition matrices.
#[derive(Debug, Clone, PartialEq)]
pub struct MeasurementSequence {
    configurations: Vec<Configuration>,
    steps: Vec<MeasurementStep>,
}

impl MeasurementSequence {
    pub fn new(configurations: Vec<Configuration>, steps: Vec<MeasurementStep>) -> Result<Self> {
        let first = configurations
            .first()
            .ok_or_else(|| Error::Sequence("no configurations".into()))?;
        if steps.len() + 1 != configurations.len() {
            return Err(Error::Sequence(format!(
                "{} configurations need {} steps, got {}",
                configurations.len(),
                configurations.len() - 1,
                steps.len()
            )));
        }
        let n = first.total();
        if let Some(bad) = configurations.iter().find(|c| c.total() != n) {
            return Err(Error::ParticleCount { expected: n, found: bad.total() });
        }
        for (k, step) in steps.iter().enumerate() {
            for l in configurations[k].labels() {
                step.earlier_index(l)?;
            }
            for l in configurations[k + 1].labels() {
                step.later_index(l)?;
            }
            if let Some(next) = steps.get(k + 1) {
                if !same_label_set(&step.to, &next.from) {
                    return Err(Error::Sequence(format!(
                        "step {k} ends on different outcomes than step {} starts from",
                        k + 1
                    )));
                }
            }
        }
        Ok(MeasurementSequence { configurations, steps })
    }

    /// A sequence with a single configuration and no steps.
    pub fn trivial(configuration: Configuration) -> Self {
        MeasurementSequence { configurations: vec![configuration], steps: vec![] }
    }

    pub fn configurations(&self) -> &[Configuration] {
        &self.configurations
    }

    pub fn steps(&self) -> &[MeasurementStep] {
        &self.steps
    }

    pub fn particle_count(&self) -> usize {
        self.configurations[0].total()
    }

    pub fn len(&self) -> usize {
        self.configurations.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn initial(&self) -> &Configuration {
        &self.configurations[0]
    }

    pub fn last(&self) -> &Configuration {
        self.configurations.last().expect("at least one configuration")
    }
}

/// Product over steps of the per-step N-particle amplitude.
pub fn sequence_amplitude(seq: &MeasurementSequence, class: ExchangeClass) -> Result<Amplitude> {
    if class == ExchangeClass::Distinguishable {
        return Err(Error::NoAmplitude(class));
    }
    let mut amp = Complex64::new(1.0, 0.0);
    for (k, step) in seq.steps.iter().enumerate() {
        let m = restrict_matrix(step, &seq.configurations[k], &seq.configurations[k + 1])?;
        amp *= h_n(&m, class)?;
    }
    Ok(amp)
}

/// Joins two sequences sharing a junction configuration.
pub fn concatenate(s1: &MeasurementSequence, s2: &MeasurementSequence) -> Result<MeasurementSequence> {
    if s1.last() != s2.initial() {
        return Err(Error::JunctionMismatch);
    }
    let configurations = s1
        .configurations
        .iter()
        .chain(s2.configurations.iter().skip(1))
        .cloned()
        .collect();
    let steps = s1.steps.iter().chain(s2.steps.iter()).cloned().collect();
    MeasurementSequence::new(configurations, steps)
}

/// Sum rule over a family of sequences that differ only in the
/// configuration at one interior measurement.
///
/// Members are summed in canonical order of that configuration, each
/// divided by its `∏ μ!`. A family of one returns the member's amplitude.
pub fn coarse_grain_sum(family: &[MeasurementSequence], class: ExchangeClass) -> Result<Amplitude> {
    let first = family
        .first()
        .ok_or_else(|| Error::FamilyShape("empty family".into()))?;
    if family.len() == 1 {
        return sequence_amplitude(first, class);
    }
    let k = first.len();
    let mut varying = BTreeSet::new();
    for member in &family[1..] {
        if member.len() != k {
            return Err(Error::FamilyShape("members have different lengths".into()));
        }
        if member.steps != first.steps {
            return Err(Error::FamilyShape("members have different steps".into()));
        }
        for (i, (a, b)) in first.configurations.iter().zip(&member.configurations).enumerate() {
            if a != b {
                varying.insert(i);
            }
        }
    }
    let index = match varying.len() {
        0 => return Err(Error::FamilyShape("members are not distinct".into())),
        1 => *varying.iter().next().unwrap(),
        _ => {
            return Err(Error::FamilyShape(format!(
                "members differ at several measurements {varying:?}"
            )))
        }
    };
    if index == 0 || index + 1 == k {
        return Err(Error::FamilyShape("members differ at an endpoint measurement".into()));
    }
    let mut ordered: Vec<&MeasurementSequence> = family.iter().collect();
    ordered.sort_by(|a, b| a.configurations[index].cmp(&b.configurations[index]));
    if ordered
        .windows(2)
        .any(|w| w[0].configurations[index] == w[1].configurations[index])
    {
        return Err(Error::FamilyShape("repeated intermediate configuration".into()));
    }
    let mut total = Complex64::new(0.0, 0.0);
    for member in ordered {
        let weight = member.configurations[index].multiplicity_factor();
        total += sequence_amplitude(member, class)? / weight;
    }
    Ok(total)
}

/// Two steps with the middle measurement left unresolved: the sum over
/// every intermediate configuration of the product of the two per-step
/// amplitudes (subsets for fermions, multisets weighted by `1/∏ μ!` for
/// bosons).
pub fn compose_coarse(
    step_a: &MeasurementStep,
    step_b: &MeasurementStep,
    from: &Configuration,
    to: &Configuration,
    class: ExchangeClass,
) -> Result<Amplitude> {
    coarse_chain(&[step_a.clone(), step_b.clone()], from, to, class)
}

/// Any number of steps with every interior measurement unresolved.
pub fn coarse_chain(
    steps: &[MeasurementStep],
    from: &Configuration,
    to: &Configuration,
    class: ExchangeClass,
) -> Result<Amplitude> {
    if class == ExchangeClass::Distinguishable {
        return Err(Error::NoAmplitude(class));
    }
    let n = from.total();
    if to.total() != n {
        return Err(Error::ParticleCount { expected: n, found: to.total() });
    }
    let (last, interior) = steps
        .split_last()
        .ok_or_else(|| Error::Sequence("no steps to compose".into()))?;
    for pair in steps.windows(2) {
        if !same_label_set(&pair[0].to, &pair[1].from) {
            return Err(Error::Dimension(format!(
                "step {:?} ends on different outcomes than step {:?} starts from",
                pair[0].label, pair[1].label
            )));
        }
    }

    let mut layer: Vec<(Configuration, Amplitude)> = vec![(from.clone(), Complex64::new(1.0, 0.0))];
    for step in interior {
        let candidates = enumerate_configurations(&step.to, n, class == ExchangeClass::Fermion);
        let mut next = Vec::with_capacity(candidates.len());
        for target in candidates {
            let mut acc = Complex64::new(0.0, 0.0);
            for (source, amp) in &layer {
                acc += amp * h_n(&restrict_matrix(step, source, &target)?, class)?;
            }
            let weight = target.multiplicity_factor();
            next.push((target, acc / weight));
        }
        layer = next;
    }
    let mut total = Complex64::new(0.0, 0.0);
    for (source, amp) in &layer {
        total += amp * h_n(&restrict_matrix(last, source, to)?, class)?;
    }
    Ok(total)
}

/// The same process with the temporal order of all measurements reversed.
pub fn reverse_sequence(seq: &MeasurementSequence) -> MeasurementSequence {
    MeasurementSequence {
        configurations: seq.configurations.iter().rev().cloned().collect(),
        steps: seq.steps.iter().rev().map(MeasurementStep::reversed).collect(),
    }
}
