//! Mechanical re-derivation of the boson/fermion dichotomy.
//!
//! Each check evaluates an amplitude rule `H` (by default the closed-form
//! permanent or determinant) on seeded random instances and reports the
//! largest deviation from the identity it must satisfy. The suite can be run
//! against substitute rules to confirm that the checks catch broken ones.

mod functional;
mod identities;
mod report;
mod signs;

use crate::amplitude::{scaled_deviation, Amplitude};
use crate::error::Result;
use crate::exchange::{h_n, ExchangeClass};
use crate::matrix::TransitionMatrix;
use crate::permanent::{permanent_naive, permanent_ryser, permutation_expansion};
use crate::random::{random_disk_matrix, random_unitary, seeded};
use crate::sequence::{compose_coarse, enumerate_configurations, restrict_matrix, Configuration, MeasurementStep};
use crate::determinant::determinant;

use rand::Rng;

pub use functional::{check_functional_equations, functional_deviation, CandidateFunction};
pub use identities::{
    column_additivity_sweep, conjugation_equivariance_sweep, determinism_constants, factorization_sweep,
    slide_sweep, split_terms, two_step_path_sum, vanishing_terms_sweep, verify_column_additivity,
    verify_reciprocity_constants, verify_slide_identity, verify_two_step_factorization, SplitTerms,
};
pub use report::{format_report_table, VerificationReport};
pub use signs::{
    analyze_n3_signs, enumerate_n3_signs, enumerate_sn_characters, MultiplicationTable, N3SignAnalysis,
    SignAssignment, MAX_CHARACTER_N,
};

use report::Deviation;

/// An amplitude rule `H` mapping a square matrix of single-particle
/// amplitudes to the many-particle amplitude.
pub type Rule<'a> = &'a dyn Fn(&TransitionMatrix) -> Result<Amplitude>;

/// The closed-form rule for a class: permanent or determinant.
pub fn closed_form(class: ExchangeClass) -> impl Fn(&TransitionMatrix) -> Result<Amplitude> {
    move |m| h_n(m, class)
}

pub const DEFAULT_SEED: u64 = 42;
pub const DEFAULT_TOLERANCE: f64 = 1e-12;

/// Tolerance for checks that compare against an independent oracle
/// computed by a different summation (permutation expansion, matrix product).
pub const ORACLE_TOLERANCE: f64 = 1e-9;

/// Sample counts and rules for a suite run.
pub struct SuiteConfig<'a> {
    pub seed: u64,
    pub tolerance: f64,
    pub samples: usize,
    pub oracle_samples_per_n: usize,
    pub boson_rule: Rule<'a>,
    pub fermion_rule: Rule<'a>,
}

/// Independent stream per check so that adding a check does not shift
/// the samples of the others.
fn sub_seed(seed: u64, tag: &str) -> u64 {
    tag.bytes()
        .fold(seed ^ 0x9e37_79b9_7f4a_7c15, |h, b| (h ^ b as u64).wrapping_mul(0x0000_0100_0000_01b3))
}

/// Runs every registered check with the closed-form rules.
pub fn run_full_derivation_suite(seed: u64, tol: f64) -> Result<Vec<VerificationReport>> {
    let boson = closed_form(ExchangeClass::Boson);
    let fermion = closed_form(ExchangeClass::Fermion);
    run_derivation_suite(&SuiteConfig {
        seed,
        tolerance: tol,
        samples: 10_000,
        oracle_samples_per_n: 50,
        boson_rule: &boson,
        fermion_rule: &fermion,
    })
}

/// One report per check, ordered by check name.
pub fn run_derivation_suite(cfg: &SuiteConfig<'_>) -> Result<Vec<VerificationReport>> {
    let tol = cfg.tolerance;
    let n = cfg.samples;
    let mut reports = Vec::new();
    for (class, rule) in [(ExchangeClass::Boson, cfg.boson_rule), (ExchangeClass::Fermion, cfg.fermion_rule)] {
        let seed = |tag: &str| sub_seed(cfg.seed, &format!("{tag}/{class}"));
        reports.push(factorization_sweep(rule, class, n, seed("factorization"), tol)?);
        for size in [2, 3] {
            reports.push(column_additivity_sweep(rule, class, size, n, seed(&format!("additivity{size}")), tol)?);
        }
        reports.push(vanishing_terms_sweep(rule, class, n, seed("vanishing"), tol)?);
        reports.push(slide_sweep(rule, class, n, seed("slide"), tol)?);
        reports.push(identities::reciprocity_report(rule, class)?);
        reports.push(conjugation_equivariance_sweep(rule, class, 4, n, seed("conj"), 0.0)?);
        let derived = CandidateFunction::from_rule(format!("derived-{class}"), rule);
        reports.push(check_functional_equations(&derived, n, seed("functional"), tol)?);
    }
    for f in [CandidateFunction::identity(), CandidateFunction::conjugation()] {
        reports.push(check_functional_equations(&f, n, sub_seed(cfg.seed, &f.name), tol)?);
    }
    reports.push(n3_sign_report());
    reports.push(sn_character_report()?);
    reports.push(permanent_oracle_sweep(2..=8, cfg.oracle_samples_per_n, sub_seed(cfg.seed, "perm"), ORACLE_TOLERANCE)?);
    reports.push(determinant_oracle_sweep(2..=8, cfg.oracle_samples_per_n, sub_seed(cfg.seed, "det"), ORACLE_TOLERANCE)?);
    for class in [ExchangeClass::Boson, ExchangeClass::Fermion] {
        reports.push(cauchy_binet_sweep(class, 100, sub_seed(cfg.seed, &format!("cb/{class}")), ORACLE_TOLERANCE)?);
        reports.push(unitary_normalization_sweep(class, 20, sub_seed(cfg.seed, &format!("norm/{class}")), ORACLE_TOLERANCE)?);
    }
    reports.sort_by(|a, b| a.check.cmp(&b.check));
    Ok(reports)
}

fn n3_sign_report() -> VerificationReport {
    let analysis = analyze_n3_signs();
    let expected = [SignAssignment::trivial(3), SignAssignment::signature(3)];
    let exact = analysis.survivors.len() == 2 && expected.iter().all(|c| analysis.survivors.contains(c));
    VerificationReport::new("sign-collapse/n3", analysis.candidates, if exact { 0.0 } else { 1.0 }, 0.0)
}

fn sn_character_report() -> Result<VerificationReport> {
    let mut mismatches = 0.0;
    for n in 2..=MAX_CHARACTER_N {
        let chars = enumerate_sn_characters(n)?;
        let exact = chars.len() == 2
            && chars.contains(&SignAssignment::trivial(n))
            && chars.contains(&SignAssignment::signature(n));
        if !exact {
            mismatches += 1.0;
        }
    }
    Ok(VerificationReport::new("sign-collapse/sn-characters", MAX_CHARACTER_N - 1, mismatches, 0.0))
}

/// Ryser against the permutation expansion, `samples_per_n` random
/// unit-disk matrices for each size.
pub fn permanent_oracle_sweep(
    sizes: std::ops::RangeInclusive<usize>,
    samples_per_n: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    let mut rng = seeded(seed);
    let mut dev = Deviation::default();
    for n in sizes {
        for _ in 0..samples_per_n {
            let m = random_disk_matrix(&mut rng, n, n);
            dev.record(scaled_deviation(permanent_ryser(&m)?, permanent_naive(&m)?));
        }
    }
    Ok(dev.into_report("kernel-oracle/permanent", tol))
}

/// Pivoted elimination against the signed permutation expansion.
pub fn determinant_oracle_sweep(
    sizes: std::ops::RangeInclusive<usize>,
    samples_per_n: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    let mut rng = seeded(seed);
    let mut dev = Deviation::default();
    for n in sizes {
        for _ in 0..samples_per_n {
            let m = random_disk_matrix(&mut rng, n, n);
            dev.record(scaled_deviation(determinant(&m)?, permutation_expansion(&m, true)?));
        }
    }
    Ok(dev.into_report("kernel-oracle/determinant", tol))
}

fn labels(prefix: &str, count: usize) -> Vec<String> {
    (0..count).map(|i| format!("{prefix}{i}")).collect()
}

/// A random instance for coarse-graining: `n` particles entering from
/// distinct outcomes, `m` intermediate outcomes, and a random final
/// configuration (with repeats allowed for bosons).
pub struct CoarseInstance {
    pub step_a: MeasurementStep,
    pub step_b: MeasurementStep,
    pub from: Configuration,
    pub to: Configuration,
}

pub fn random_coarse_instance<R: Rng>(rng: &mut R, class: ExchangeClass, n: usize, m: usize) -> CoarseInstance {
    let outer = n + 1;
    let a = random_disk_matrix(rng, outer, m);
    let b = random_disk_matrix(rng, m, outer);
    let start = labels("s", outer);
    let mid = labels("x", m);
    let end = labels("e", outer);
    let from = Configuration::from_labels(start[..n].iter().cloned()).expect("n >= 1");
    let finals = enumerate_configurations(&end, n, class == ExchangeClass::Fermion);
    let to = finals[rng.gen_range(0..finals.len())].clone();
    CoarseInstance {
        step_a: MeasurementStep::new("a", start, mid.clone(), a).expect("consistent shapes"),
        step_b: MeasurementStep::new("b", mid, end, b).expect("consistent shapes"),
        from,
        to,
    }
}

/// `H` of the product matrix restricted to the two end configurations.
pub fn product_oracle(inst: &CoarseInstance, class: ExchangeClass) -> Result<Amplitude> {
    let product = inst.step_a.matrix().matmul(inst.step_b.matrix())?;
    let step = MeasurementStep::new(
        "ab",
        inst.step_a.from_outcomes().to_vec(),
        inst.step_b.to_outcomes().to_vec(),
        TransitionMatrix::unconstrained(product.n_rows(), product.n_cols(), product.entries().to_vec())?,
    )?;
    h_n(&restrict_matrix(&step, &inst.from, &inst.to)?, class)
}

/// Coarse composition against `H(A·B)` on random instances with up to
/// three particles and five intermediate outcomes.
pub fn cauchy_binet_sweep(class: ExchangeClass, samples: usize, seed: u64, tol: f64) -> Result<VerificationReport> {
    let mut rng = seeded(seed);
    let mut dev = Deviation::default();
    for _ in 0..samples {
        let n = rng.gen_range(1..=3);
        let m = rng.gen_range(n..=5);
        let inst = random_coarse_instance(&mut rng, class, n, m);
        let coarse = compose_coarse(&inst.step_a, &inst.step_b, &inst.from, &inst.to, class)?;
        dev.record(scaled_deviation(coarse, product_oracle(&inst, class)?));
    }
    Ok(dev.into_report(format!("cauchy-binet/{class}"), tol))
}

/// Total probability over all final configurations for one unitary step.
pub fn total_probability(u: &TransitionMatrix, from: &Configuration, class: ExchangeClass) -> Result<f64> {
    let m = u.n_cols();
    let modes = labels("o", m);
    let step = MeasurementStep::new("u", labels("i", u.n_rows()), modes.clone(), u.clone())?;
    let mut total = 0.0;
    for to in enumerate_configurations(&modes, from.total(), false) {
        let amp = h_n(&restrict_matrix(&step, from, &to)?, class)?;
        total += amp.norm_sqr() / (from.multiplicity_factor() * to.multiplicity_factor());
    }
    Ok(total)
}

pub fn unitary_normalization_sweep(class: ExchangeClass, samples: usize, seed: u64, tol: f64) -> Result<VerificationReport> {
    let mut rng = seeded(seed);
    let mut dev = Deviation::default();
    for _ in 0..samples {
        let m = rng.gen_range(1..=5);
        let n = rng.gen_range(1..=m.min(3));
        let u = random_unitary(&mut rng, m);
        let from = Configuration::from_labels(labels("i", m)[..n].iter().cloned())?;
        dev.record((total_probability(&u, &from, class)? - 1.0).abs());
    }
    Ok(dev.into_report(format!("unitary-normalization/{class}"), tol))
}
