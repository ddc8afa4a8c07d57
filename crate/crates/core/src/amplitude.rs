//! Complex amplitudes and the amplitude-to-probability rule.
//!
//! Amplitudes are plain [`Complex64`] values. Only amplitudes attached to a
//! complete outcome sequence are held to the unit disk; partial sums inside
//! a permanent or determinant expansion may leave it.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type Amplitude = Complex64;

/// Slack allowed above the unit circle for physical amplitudes and probabilities.
pub const DISK_SLACK: f64 = 1e-12;

/// A probability in `[0, 1]`, produced from a physical amplitude.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Probability(f64);

impl Probability {
    pub const ZERO: Probability = Probability(0.0);
    pub const ONE: Probability = Probability(1.0);

    /// Wraps a raw value, clamping round-off within [`DISK_SLACK`] of the ends.
    pub fn new(value: f64) -> Result<Self> {
        if !value.is_finite() {
            return Err(Error::NonFinite);
        }
        if value > 1.0 + DISK_SLACK {
            return Err(Error::AmplitudeOutOfDisk { modulus_sq: value });
        }
        if value < -DISK_SLACK {
            return Err(Error::Validation(format!("negative probability {value}")));
        }
        Ok(Probability(value.clamp(0.0, 1.0)))
    }

    pub fn value(self) -> f64 {
        self.0
    }
}

impl From<Probability> for f64 {
    fn from(p: Probability) -> f64 {
        p.0
    }
}

pub fn is_finite(a: Amplitude) -> bool {
    a.re.is_finite() && a.im.is_finite()
}

/// Product rule: the amplitude of a concatenation.
#[inline]
pub fn amp_product(a: Amplitude, b: Amplitude) -> Amplitude {
    a * b
}

/// Sum rule: the amplitude of a coarse graining.
#[inline]
pub fn amp_sum(a: Amplitude, b: Amplitude) -> Amplitude {
    a + b
}

/// Reciprocity: the amplitude with the two measurements interchanged.
#[inline]
pub fn amp_conjugate(a: Amplitude) -> Amplitude {
    a.conj()
}

/// Squared modulus of a complete-sequence amplitude.
pub fn probability(a: Amplitude) -> Result<Probability> {
    if !is_finite(a) {
        return Err(Error::NonFinite);
    }
    let p = a.norm_sqr();
    if p > 1.0 + DISK_SLACK {
        return Err(Error::AmplitudeOutOfDisk { modulus_sq: p });
    }
    Ok(Probability(p.min(1.0)))
}

/// `|lhs - rhs| / max(1, |lhs|, |rhs|)`: absolute inside the unit disk,
/// relative outside it.
pub fn scaled_deviation(lhs: Amplitude, rhs: Amplitude) -> f64 {
    let scale = 1f64.max(lhs.norm()).max(rhs.norm());
    (lhs - rhs).norm() / scale
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Amplitude {
        Complex64::new(re, im)
    }

    #[test]
    fn product_examples() {
        assert_eq!(amp_product(c(1.0, 0.0), c(0.3, -0.7)), c(0.3, -0.7));
        assert_eq!(amp_product(c(0.0, 1.0), c(0.0, 1.0)), c(-1.0, 0.0));
        let p = amp_product(c(0.6, 0.0), c(0.0, 0.5));
        assert!((p - c(0.0, 0.3)).norm() < 1e-16);
    }

    #[test]
    fn sum_examples() {
        assert_eq!(amp_sum(c(0.4, -0.2), c(0.0, 0.0)), c(0.4, -0.2));
        let s = amp_sum(c(0.3, 0.1), c(0.2, -0.1));
        assert!((s - c(0.5, 0.0)).norm() < 1e-16);
        let a = c(0.25, -0.75);
        assert_eq!(amp_sum(a, -a), c(0.0, 0.0));
    }

    #[test]
    fn conjugate_examples() {
        assert_eq!(amp_conjugate(c(0.5, 0.0)), c(0.5, 0.0));
        assert_eq!(amp_conjugate(c(0.0, 1.0)), c(0.0, -1.0));
        let a = c(0.1, 0.2);
        assert_eq!(amp_conjugate(amp_conjugate(a)), a);
    }

    #[test]
    fn probability_examples() {
        assert_eq!(probability(c(1.0, 0.0)).unwrap().value(), 1.0);
        assert_eq!(probability(c(0.0, 0.0)).unwrap().value(), 0.0);
        assert!((probability(c(0.6, 0.8)).unwrap().value() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn probability_clamps_and_rejects() {
        let just_over = c(1.0 + 1e-13, 0.0);
        assert_eq!(probability(just_over).unwrap().value(), 1.0);
        assert!(matches!(
            probability(c(1.5, 0.0)),
            Err(Error::AmplitudeOutOfDisk { .. })
        ));
        assert_eq!(probability(c(f64::NAN, 0.0)), Err(Error::NonFinite));
    }

    fn disk() -> impl Strategy<Value = Amplitude> {
        (0.0..1.0f64, 0.0..std::f64::consts::TAU)
            .prop_map(|(r, t)| Complex64::from_polar(r.sqrt(), t))
    }

    proptest! {
        #[test]
        fn product_commutes_and_associates(a in disk(), b in disk(), c in disk()) {
            let (ab, ba) = (amp_product(a, b), amp_product(b, a));
            prop_assert!((ab - ba).norm() <= 1e-15 * ab.norm());
            let l = amp_product(amp_product(a, b), c);
            let r = amp_product(a, amp_product(b, c));
            prop_assert!((l - r).norm() <= 1e-15 * l.norm());
        }

        #[test]
        fn conjugation_distributes_exactly(a in disk(), b in disk()) {
            prop_assert_eq!(amp_conjugate(amp_product(a, b)),
                amp_product(amp_conjugate(a), amp_conjugate(b)));
            prop_assert_eq!(amp_conjugate(amp_sum(a, b)),
                amp_sum(amp_conjugate(a), amp_conjugate(b)));
            prop_assert_eq!(probability(amp_conjugate(a)).unwrap(), probability(a).unwrap());
        }
    }
}
