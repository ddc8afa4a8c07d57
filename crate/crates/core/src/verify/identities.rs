//! Numeric checks of the two-particle derivation: the two-step
//! factorization, column additivity and the vanishing mixed terms, the
//! slide identities, and the determinism constants fixed by reciprocity.

use num_complex::Complex64;
use rand::Rng;

use super::report::{Deviation, VerificationReport};
use super::Rule;
use crate::amplitude::{probability, scaled_deviation, Amplitude};
use crate::error::{Error, Result};
use crate::exchange::ExchangeClass;
use crate::matrix::TransitionMatrix;
use crate::random::{random_disk_matrix, random_disk_point, seeded};

fn c(re: f64) -> Amplitude {
    Complex64::new(re, 0.0)
}

fn zero() -> Amplitude {
    Complex64::new(0.0, 0.0)
}

/// 2x2 matrix from its four entries, row-major; algebraic values allowed.
pub fn mat2(a11: Amplitude, a12: Amplitude, a21: Amplitude, a22: Amplitude) -> TransitionMatrix {
    TransitionMatrix::unconstrained(2, 2, vec![a11, a12, a21, a22]).expect("finite 2x2 entries")
}

fn diag(u: Amplitude, v: Amplitude) -> TransitionMatrix {
    mat2(u, zero(), zero(), v)
}

fn antidiag(u: Amplitude, v: Amplitude) -> TransitionMatrix {
    mat2(zero(), u, v, zero())
}

fn require_identical(class: ExchangeClass) -> Result<()> {
    match class {
        ExchangeClass::Distinguishable => Err(Error::NoAmplitude(class)),
        _ => Ok(()),
    }
}

/// Right-hand side of the two-step functional equation, built only from the
/// eight composite path amplitudes `paths[i][k][j] = a[i][k] · b[k][j]`:
/// `Σ_{π,ρ ∈ S₂} χ(π) χ(ρ) ∏_i paths[i][π(i)][ρ(π(i))]`.
pub fn two_step_path_sum(paths: &[[[Amplitude; 2]; 2]; 2], class: ExchangeClass) -> Result<Amplitude> {
    const S2: [([usize; 2], i8); 2] = [([0, 1], 1), ([1, 0], -1)];
    let mut total = zero();
    for (pi, pi_sign) in S2 {
        for (rho, rho_sign) in S2 {
            let chi = class.character(pi_sign)? * class.character(rho_sign)?;
            let term = paths[0][pi[0]][rho[pi[0]]] * paths[1][pi[1]][rho[pi[1]]];
            if chi > 0 {
                total += term;
            } else {
                total -= term;
            }
        }
    }
    Ok(total)
}

fn composite_paths(a: &TransitionMatrix, b: &TransitionMatrix) -> [[[Amplitude; 2]; 2]; 2] {
    let mut paths = [[[zero(); 2]; 2]; 2];
    for (i, by_mid) in paths.iter_mut().enumerate() {
        for (k, by_end) in by_mid.iter_mut().enumerate() {
            for (j, p) in by_end.iter_mut().enumerate() {
                *p = a.get(i, k) * b.get(k, j);
            }
        }
    }
    paths
}

pub(crate) fn factorization_deviation(
    rule: Rule<'_>,
    class: ExchangeClass,
    a: &TransitionMatrix,
    b: &TransitionMatrix,
) -> Result<f64> {
    require_identical(class)?;
    let lhs = rule(a)? * rule(b)?;
    let rhs = two_step_path_sum(&composite_paths(a, b), class)?;
    Ok(scaled_deviation(lhs, rhs))
}

/// `H(A)·H(B)` against the path-product form for one pair of 2x2 matrices.
pub fn verify_two_step_factorization(
    a: &TransitionMatrix,
    b: &TransitionMatrix,
    class: ExchangeClass,
    tol: f64,
) -> Result<VerificationReport> {
    let rule = super::closed_form(class);
    let mut dev = Deviation::default();
    dev.record(factorization_deviation(&rule, class, a, b)?);
    Ok(dev.into_report(format!("factorization/{class}"), tol))
}

pub fn factorization_sweep(
    rule: Rule<'_>,
    class: ExchangeClass,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    let mut rng = seeded(seed);
    let mut dev = Deviation::default();
    for _ in 0..samples {
        let a = random_disk_matrix(&mut rng, 2, 2);
        let b = random_disk_matrix(&mut rng, 2, 2);
        dev.record(factorization_deviation(rule, class, &a, &b)?);
    }
    Ok(dev.into_report(format!("factorization/{class}"), tol))
}

pub(crate) fn column_additivity_deviation(
    rule: Rule<'_>,
    m: &TransitionMatrix,
    m2: &TransitionMatrix,
    column: usize,
) -> Result<f64> {
    if m.n_rows() != m2.n_rows() || m.n_cols() != m2.n_cols() {
        return Err(Error::Dimension(format!(
            "shape mismatch: {}x{} vs {}x{}",
            m.n_rows(),
            m.n_cols(),
            m2.n_rows(),
            m2.n_cols()
        )));
    }
    if column >= m.n_cols() {
        return Err(Error::Dimension(format!("column {column} out of range")));
    }
    for j in (0..m.n_cols()).filter(|&j| j != column) {
        if m.column(j) != m2.column(j) {
            return Err(Error::Dimension(format!("matrices also differ in column {j}")));
        }
    }
    let merged: Vec<Amplitude> = m.column(column).iter().zip(m2.column(column)).map(|(x, y)| x + y).collect();
    let merged = TransitionMatrix::unconstrained(m.n_rows(), m.n_cols(), m.with_column(column, &merged).entries().to_vec())?;
    Ok(scaled_deviation(rule(&merged)?, rule(m)? + rule(m2)?))
}

/// `H` with one column replaced by the sum of two columns, against the sum
/// of the two `H` values.
pub fn verify_column_additivity(
    m: &TransitionMatrix,
    m2: &TransitionMatrix,
    column: usize,
    class: ExchangeClass,
    tol: f64,
) -> Result<VerificationReport> {
    require_identical(class)?;
    let rule = super::closed_form(class);
    let mut dev = Deviation::default();
    dev.record(column_additivity_deviation(&rule, m, m2, column)?);
    Ok(dev.into_report(format!("column-additivity/{class}"), tol))
}

pub fn column_additivity_sweep(
    rule: Rule<'_>,
    class: ExchangeClass,
    n: usize,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    require_identical(class)?;
    let mut rng = seeded(seed);
    let mut dev = Deviation::default();
    for _ in 0..samples {
        let m = random_disk_matrix(&mut rng, n, n);
        let column = rng.gen_range(0..n);
        let replacement: Vec<Amplitude> = (0..n).map(|_| random_disk_point(&mut rng)).collect();
        let m2 = m.with_column(column, &replacement);
        dev.record(column_additivity_deviation(rule, &m, &m2, column)?);
    }
    Ok(dev.into_report(format!("column-additivity/n{n}/{class}"), tol))
}

/// Splitting a 2x2 amplitude over both columns: the two terms with a
/// zero row must vanish exactly and the remaining two must add up to `H`.
pub fn split_terms(rule: Rule<'_>, m: &TransitionMatrix) -> Result<SplitTerms> {
    let (a11, a12, a21, a22) = (m.get(0, 0), m.get(0, 1), m.get(1, 0), m.get(1, 1));
    Ok(SplitTerms {
        whole: rule(m)?,
        first_column_split: [rule(&mat2(a11, a12, zero(), a22))?, rule(&mat2(zero(), a12, a21, a22))?],
        direct: rule(&diag(a11, a22))?,
        upper_only: rule(&mat2(a11, a12, zero(), zero()))?,
        lower_only: rule(&mat2(zero(), zero(), a21, a22))?,
        crossed: rule(&antidiag(a12, a21))?,
    })
}

#[derive(Debug, Clone, Copy)]
pub struct SplitTerms {
    pub whole: Amplitude,
    pub first_column_split: [Amplitude; 2],
    pub direct: Amplitude,
    pub upper_only: Amplitude,
    pub lower_only: Amplitude,
    pub crossed: Amplitude,
}

impl SplitTerms {
    pub fn deviation(&self) -> f64 {
        [
            scaled_deviation(self.whole, self.first_column_split[0] + self.first_column_split[1]),
            scaled_deviation(self.whole, self.direct + self.crossed),
            self.upper_only.norm(),
            self.lower_only.norm(),
        ]
        .into_iter()
        .fold(0.0, f64::max)
    }
}

/// Four-term split for 2x2 matrices plus, for 3x3, exact vanishing of
/// every matrix with a zero row or column.
pub fn vanishing_terms_sweep(
    rule: Rule<'_>,
    class: ExchangeClass,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    require_identical(class)?;
    let mut rng = seeded(seed);
    let mut dev = Deviation::default();
    for _ in 0..samples {
        let m = random_disk_matrix(&mut rng, 2, 2);
        let terms = split_terms(rule, &m)?;
        let m3 = random_disk_matrix(&mut rng, 3, 3);
        let k = rng.gen_range(0..3);
        let zeros = [zero(); 3];
        let no_col = m3.with_column(k, &zeros);
        let no_row = no_col.transpose().with_column(rng.gen_range(0..3), &zeros);
        dev.record_all([terms.deviation(), rule(&no_col)?.norm(), rule(&no_row)?.norm()]);
    }
    Ok(dev.into_report(format!("vanishing-terms/{class}"), tol))
}

pub(crate) fn slide_deviation(rule: Rule<'_>, u: Amplitude, v: Amplitude) -> Result<f64> {
    let one = c(1.0);
    let swap = antidiag(one, one);
    let id = diag(one, one);
    // H(diag(u,v))H(swap) = H(diag(u,1))H(antidiag(1,v)) = H(antidiag(1,v))H(diag(u,1)) = H(swap)H(diag(uv,1))
    let chain = [
        rule(&diag(u, v))? * rule(&swap)?,
        rule(&diag(u, one))? * rule(&antidiag(one, v))?,
        rule(&antidiag(one, v))? * rule(&diag(u, one))?,
        rule(&swap)? * rule(&diag(u * v, one))?,
    ];
    let mut worst = chain.windows(2).map(|w| scaled_deviation(w[0], w[1])).fold(0.0, f64::max);
    // H(antidiag(u,v))H(id) = H(swap)H(diag(v,u))
    worst = worst.max(scaled_deviation(
        rule(&antidiag(u, v))? * rule(&id)?,
        rule(&swap)? * rule(&diag(v, u))?,
    ));
    // H(diag(uv,1))H(id) = H(diag(u,1))H(diag(v,1))
    worst = worst.max(scaled_deviation(
        rule(&diag(u * v, one))? * rule(&id)?,
        rule(&diag(u, one))? * rule(&diag(v, one))?,
    ));
    Ok(worst)
}

/// Moving single-particle amplitudes along paths: the slide identities and
/// the multiplicativity of `H(diag(z, 1))`.
pub fn verify_slide_identity(u: Amplitude, v: Amplitude, class: ExchangeClass, tol: f64) -> Result<VerificationReport> {
    require_identical(class)?;
    let rule = super::closed_form(class);
    let mut dev = Deviation::default();
    dev.record(slide_deviation(&rule, u, v)?);
    Ok(dev.into_report(format!("slide-identities/{class}"), tol))
}

pub fn slide_sweep(rule: Rule<'_>, class: ExchangeClass, samples: usize, seed: u64, tol: f64) -> Result<VerificationReport> {
    require_identical(class)?;
    let mut rng = seeded(seed);
    let mut dev = Deviation::default();
    for _ in 0..samples {
        let u = random_disk_point(&mut rng);
        let v = random_disk_point(&mut rng);
        dev.record(slide_deviation(rule, u, v)?);
    }
    Ok(dev.into_report(format!("slide-identities/{class}"), tol))
}

/// `H(identity)` and `H(swap)` for the given rule.
pub fn determinism_constants(rule: Rule<'_>) -> Result<(Amplitude, Amplitude)> {
    let one = c(1.0);
    Ok((rule(&diag(one, one))?, rule(&antidiag(one, one))?))
}

fn distance_to_unit_sign(z: Amplitude) -> f64 {
    (z - c(1.0)).norm().min((z + c(1.0)).norm())
}

pub(crate) fn reciprocity_report(rule: Rule<'_>, class: ExchangeClass) -> Result<VerificationReport> {
    let one = c(1.0);
    let (h_id, h_swap) = determinism_constants(rule)?;
    let mut dev = Deviation::default();
    for (m, h) in [(diag(one, one), h_id), (antidiag(one, one), h_swap)] {
        // real data gives a self-conjugate amplitude
        let conj_gap = (rule(&m.conj())? - h.conj()).norm();
        let prob_gap = match probability(h) {
            Ok(p) => (p.value() - 1.0).abs(),
            Err(_) => f64::INFINITY,
        };
        dev.record_all([distance_to_unit_sign(h), conj_gap, prob_gap]);
    }
    Ok(dev.into_report(format!("reciprocity-constants/{class}"), 0.0))
}

/// `H(identity)` and `H(swap)` must each be exactly `±1`, and each
/// deterministic configuration must have probability exactly 1.
pub fn verify_reciprocity_constants(class: ExchangeClass) -> Result<VerificationReport> {
    require_identical(class)?;
    reciprocity_report(&super::closed_form(class), class)
}

/// `H(conj M) = conj(H(M))`, bit for bit, on random matrices of size 1..=max_n.
pub fn conjugation_equivariance_sweep(
    rule: Rule<'_>,
    class: ExchangeClass,
    max_n: usize,
    samples: usize,
    seed: u64,
    tol: f64,
) -> Result<VerificationReport> {
    require_identical(class)?;
    let mut rng = seeded(seed);
    let mut dev = Deviation::default();
    for s in 0..samples {
        let n = 1 + s % max_n;
        let m = random_disk_matrix(&mut rng, n, n);
        dev.record((rule(&m.conj())? - rule(&m)?.conj()).norm());
    }
    Ok(dev.into_report(format!("conjugation-equivariance/{class}"), tol))
}
