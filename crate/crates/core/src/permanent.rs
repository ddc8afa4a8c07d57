//! Matrix permanent: a brute-force permutation expansion used as the oracle,
//! and Ryser's inclusion-exclusion formula walked in Gray-code order.

use num_complex::Complex64;

use crate::amplitude::Amplitude;
use crate::error::{Error, Result};
use crate::matrix::TransitionMatrix;
use crate::permutation::next_lexicographic;

pub const NAIVE_MAX_N: usize = 10;
pub const RYSER_MAX_N: usize = 24;

/// Sum over all `n!` permutations of `∏_i m[i][π(i)]`, optionally weighted
/// by the permutation sign. Permutations are visited in lexicographic order.
pub fn permutation_expansion(m: &TransitionMatrix, signed: bool) -> Result<Amplitude> {
    let n = m.square_dim()?;
    if n > NAIVE_MAX_N {
        return Err(Error::TooLarge { n, max: NAIVE_MAX_N });
    }
    let mut perm: Vec<usize> = (0..n).collect();
    let mut total = Complex64::new(0.0, 0.0);
    loop {
        let mut term = Complex64::new(1.0, 0.0);
        for (i, &j) in perm.iter().enumerate() {
            term *= m.get(i, j);
        }
        if signed && odd(&perm) {
            total -= term;
        } else {
            total += term;
        }
        if !next_lexicographic(&mut perm) {
            break;
        }
    }
    Ok(total)
}

// Parity via inversion count, kept separate from `Permutation::sign`.
fn odd(p: &[usize]) -> bool {
    let mut inversions = 0usize;
    for i in 0..p.len() {
        for j in i + 1..p.len() {
            if p[i] > p[j] {
                inversions += 1;
            }
        }
    }
    inversions % 2 == 1
}

/// Permanent by direct permutation expansion. Only for `n ≤ 10`.
pub fn permanent_naive(m: &TransitionMatrix) -> Result<Amplitude> {
    permutation_expansion(m, false)
}

/// Permanent by Ryser's formula,
/// `perm(A) = (-1)^n Σ_{S ⊆ cols} (-1)^{|S|} ∏_i Σ_{j ∈ S} a_ij`,
/// visiting subsets in binary-reflected Gray-code order so each step adds
/// or removes one column from a running vector of row sums. `O(2^n · n)`.
///
/// Matrices of size 1 and 2 use the closed form, and any matrix with an
/// all-zero row or column returns exactly zero.
pub fn permanent_ryser(m: &TransitionMatrix) -> Result<Amplitude> {
    let n = m.square_dim()?;
    if n > RYSER_MAX_N {
        return Err(Error::TooLarge { n, max: RYSER_MAX_N });
    }
    let zero = Complex64::new(0.0, 0.0);
    if m.has_zero_row() || m.has_zero_column() {
        return Ok(zero);
    }
    match n {
        1 => return Ok(m.get(0, 0)),
        2 => return Ok(m.get(0, 0) * m.get(1, 1) + m.get(0, 1) * m.get(1, 0)),
        _ => {}
    }

    let mut row_sums = vec![zero; n];
    let mut total = zero;
    let mut gray: u32 = 0;
    for k in 1u32..(1u32 << n) {
        let j = k.trailing_zeros() as usize;
        gray ^= 1 << j;
        if gray & (1 << j) != 0 {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s += m.get(i, j);
            }
        } else {
            for (i, s) in row_sums.iter_mut().enumerate() {
                *s -= m.get(i, j);
            }
        }
        let product = row_sums.iter().fold(Complex64::new(1.0, 0.0), |acc, &s| acc * s);
        if gray.count_ones().is_multiple_of(2) {
            total += product;
        } else {
            total -= product;
        }
    }
    Ok(if n % 2 == 0 { total } else { -total })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{random_disk_matrix, seeded};

    fn close(a: Amplitude, b: Amplitude, tol: f64) -> bool {
        (a - b).norm() <= tol * 1f64.max(b.norm())
    }

    #[test]
    fn naive_examples() {
        assert_eq!(permanent_naive(&TransitionMatrix::identity(3)).unwrap(), Complex64::new(1.0, 0.0));
        let m = TransitionMatrix::from_real(2, 2, &[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert!(close(permanent_naive(&m).unwrap(), Complex64::new(0.10, 0.0), 1e-15));
        let z = TransitionMatrix::from_real(3, 3, &[0.3, 0.2, 0.1, 0.0, 0.0, 0.0, 0.5, 0.6, 0.7]).unwrap();
        assert_eq!(permanent_naive(&z).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn naive_errors() {
        assert_eq!(
            permanent_naive(&TransitionMatrix::zeros(2, 3)),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        );
        assert_eq!(
            permanent_naive(&TransitionMatrix::identity(11)),
            Err(Error::TooLarge { n: 11, max: 10 })
        );
    }

    #[test]
    fn ryser_examples() {
        assert_eq!(permanent_ryser(&TransitionMatrix::identity(4)).unwrap(), Complex64::new(1.0, 0.0));
        let half = TransitionMatrix::from_real(3, 3, &[0.5; 9]).unwrap();
        // n! c^n = 6 * 0.125
        assert!(close(permanent_ryser(&half).unwrap(), Complex64::new(0.75, 0.0), 1e-15));
        assert_eq!(
            permanent_ryser(&TransitionMatrix::identity(25)),
            Err(Error::TooLarge { n: 25, max: 24 })
        );
    }

    #[test]
    fn ryser_matches_naive_on_random_7x7() {
        let mut rng = seeded(7);
        for _ in 0..20 {
            let m = random_disk_matrix(&mut rng, 7, 7);
            let fast = permanent_ryser(&m).unwrap();
            let slow = permanent_naive(&m).unwrap();
            assert!(close(fast, slow, 1e-9), "{fast} vs {slow}");
        }
    }

    #[test]
    fn ryser_zero_column_is_exact() {
        let mut rng = seeded(3);
        let m = random_disk_matrix(&mut rng, 5, 5).with_column(2, &[Complex64::new(0.0, 0.0); 5]);
        assert_eq!(permanent_ryser(&m).unwrap(), Complex64::new(0.0, 0.0));
    }

    #[test]
    fn all_ones_closed_form() {
        // perm(J_n) = n!
        let ones = TransitionMatrix::from_real(6, 6, &[1.0; 36]).unwrap();
        assert_eq!(permanent_ryser(&ones).unwrap(), Complex64::new(720.0, 0.0));
    }
}
