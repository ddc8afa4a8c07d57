//! Candidate solutions `f` of the pair `f(uv) = f(u)f(v)`, `f(u+v) = f(u)+f(v)`.

use std::fmt;

use num_complex::Complex64;

use super::report::{Deviation, VerificationReport};
use super::Rule;
use crate::amplitude::Amplitude;
use crate::error::Result;
use crate::random::{random_disk_point, seeded};

/// A named total map on amplitudes.
pub struct CandidateFunction<'a> {
    pub name: String,
    evaluator: Box<dyn Fn(Amplitude) -> Amplitude + 'a>,
}

impl<'a> CandidateFunction<'a> {
    pub fn new(name: impl Into<String>, f: impl Fn(Amplitude) -> Amplitude + 'a) -> Self {
        CandidateFunction { name: name.into(), evaluator: Box::new(f) }
    }

    pub fn identity() -> Self {
        Self::new("identity", |z| z)
    }

    pub fn conjugation() -> Self {
        Self::new("conjugation", |z| z.conj())
    }

    /// `f(z) = H(diag(z, 1)) / H(identity)` read off a two-particle rule.
    /// Rule failures surface as NaN and fail every check.
    pub fn from_rule(name: impl Into<String>, rule: Rule<'a>) -> Self {
        let one = Complex64::new(1.0, 0.0);
        let zero = Complex64::new(0.0, 0.0);
        let nan = Complex64::new(f64::NAN, f64::NAN);
        let h = move |z: Amplitude| rule(&super::identities::mat2(z, zero, zero, one)).unwrap_or(nan);
        Self::new(name, move |z| h(z) / h(one))
    }

    pub fn eval(&self, z: Amplitude) -> Amplitude {
        (self.evaluator)(z)
    }
}

impl fmt::Debug for CandidateFunction<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("CandidateFunction").field("name", &self.name).finish()
    }
}

/// Per-sample deviation from both functional equations and the
/// normalization `f(1) = 1`, which rules out the trivial solution `f ≡ 0`.
pub fn functional_deviation(f: &CandidateFunction<'_>, u: Amplitude, v: Amplitude) -> f64 {
    let multiplicative = (f.eval(u * v) - f.eval(u) * f.eval(v)).norm();
    let additive = (f.eval(u + v) - (f.eval(u) + f.eval(v))).norm();
    let normalized = (f.eval(Complex64::new(1.0, 0.0)) - Complex64::new(1.0, 0.0)).norm();
    [multiplicative, additive, normalized]
        .into_iter()
        .map(|d| if d.is_nan() { f64::INFINITY } else { d })
        .fold(0.0, f64::max)
}

/// Max deviation over `samples` seeded unit-disk pairs `(u, v)`.
pub fn check_functional_equations(
    f: &CandidateFunction<'_>,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    let mut rng = seeded(seed);
    let mut dev = Deviation::default();
    for _ in 0..samples.max(1) {
        let u = random_disk_point(&mut rng);
        let v = random_disk_point(&mut rng);
        dev.record(functional_deviation(f, u, v));
    }
    Ok(dev.into_report(format!("functional-equations/{}", f.name), tol))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exchange::{h2, ExchangeClass};

    #[test]
    fn identity_and_conjugation_pass_exactly() {
        for f in [CandidateFunction::identity(), CandidateFunction::conjugation()] {
            let r = check_functional_equations(&f, 1000, 3, 0.0).unwrap();
            assert!(r.pass, "{r:?}");
            assert_eq!(r.max_deviation, 0.0);
        }
    }

    #[test]
    fn doubling_fails_multiplicativity() {
        let f = CandidateFunction::new("double", |z| 2.0 * z);
        let u = Complex64::new(0.5, 0.5);
        let v = Complex64::new(-0.3, 0.6);
        let mult = (f.eval(u * v) - f.eval(u) * f.eval(v)).norm();
        assert!(mult >= (2.0 * u * v).norm() - 1e-15);
        assert!(!check_functional_equations(&f, 100, 1, 1e-12).unwrap().pass);
    }

    #[test]
    fn zero_function_fails_normalization() {
        let f = CandidateFunction::new("zero", |_| Complex64::new(0.0, 0.0));
        let r = check_functional_equations(&f, 10, 1, 1e-12).unwrap();
        assert_eq!(r.max_deviation, 1.0);
    }

    #[test]
    fn rule_derived_function_is_the_identity() {
        for class in [ExchangeClass::Boson, ExchangeClass::Fermion] {
            let rule = move |m: &crate::matrix::TransitionMatrix| h2(m, class);
            let f = CandidateFunction::from_rule("derived", &rule);
            let z = Complex64::new(0.25, -0.5);
            assert_eq!(f.eval(z), z);
            assert!(check_functional_equations(&f, 1000, 2, 1e-15).unwrap().pass);
        }
    }
}
