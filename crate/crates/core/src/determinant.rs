//! Complex determinant by Gaussian elimination with partial pivoting.

use num_complex::Complex64;

use crate::amplitude::Amplitude;
use crate::error::Result;
use crate::matrix::TransitionMatrix;

/// Determinant of a square matrix.
///
/// Sizes up to 3 use the cofactor expansion; larger matrices use row
/// elimination with partial pivoting (largest modulus in the column).
/// A matrix with two identical rows or columns returns exactly zero.
pub fn determinant(m: &TransitionMatrix) -> Result<Amplitude> {
    let n = m.square_dim()?;
    let zero = Complex64::new(0.0, 0.0);
    if m.has_repeated_line() {
        return Ok(zero);
    }
    let a = |i: usize, j: usize| m.get(i, j);
    match n {
        1 => return Ok(a(0, 0)),
        2 => return Ok(a(0, 0) * a(1, 1) - a(0, 1) * a(1, 0)),
        3 => {
            return Ok(a(0, 0) * (a(1, 1) * a(2, 2) - a(1, 2) * a(2, 1))
                - a(0, 1) * (a(1, 0) * a(2, 2) - a(1, 2) * a(2, 0))
                + a(0, 2) * (a(1, 0) * a(2, 1) - a(1, 1) * a(2, 0)))
        }
        _ => {}
    }

    let mut lu: Vec<Complex64> = m.entries().to_vec();
    let mut negate = false;
    for col in 0..n {
        let mut pivot_row = col;
        let mut best = lu[col * n + col].norm_sqr();
        for r in col + 1..n {
            let mag = lu[r * n + col].norm_sqr();
            if mag > best {
                best = mag;
                pivot_row = r;
            }
        }
        if best == 0.0 {
            return Ok(zero);
        }
        if pivot_row != col {
            for j in 0..n {
                lu.swap(col * n + j, pivot_row * n + j);
            }
            negate = !negate;
        }
        let pivot = lu[col * n + col];
        for r in col + 1..n {
            let factor = lu[r * n + col] / pivot;
            if factor == zero {
                continue;
            }
            for j in col + 1..n {
                let upper = lu[col * n + j];
                lu[r * n + j] -= factor * upper;
            }
            lu[r * n + col] = zero;
        }
    }
    let det = (0..n).fold(Complex64::new(1.0, 0.0), |acc, i| acc * lu[i * n + i]);
    Ok(if negate { -det } else { det })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;
    use crate::permanent::permutation_expansion;
    use crate::random::{random_disk_matrix, seeded};

    #[test]
    fn examples() {
        for n in 1..7 {
            assert_eq!(determinant(&TransitionMatrix::identity(n)).unwrap(), Complex64::new(1.0, 0.0));
        }
        let m = TransitionMatrix::from_real(2, 2, &[0.1, 0.2, 0.3, 0.4]).unwrap();
        assert!((determinant(&m).unwrap() - Complex64::new(-0.02, 0.0)).norm() < 1e-16);
        assert_eq!(
            determinant(&TransitionMatrix::zeros(3, 2)),
            Err(Error::NotSquare { rows: 3, cols: 2 })
        );
    }

    #[test]
    fn equal_columns_vanish_exactly() {
        let mut rng = seeded(11);
        for n in 2..8 {
            let m = random_disk_matrix(&mut rng, n, n);
            let dup = m.with_column(n - 1, &m.column(0));
            assert_eq!(determinant(&dup).unwrap(), Complex64::new(0.0, 0.0));
        }
    }

    #[test]
    fn pivoting_handles_zero_leading_entry() {
        // anti-identity of size 4 is the permutation (0 3)(1 2): even
        let mut m = TransitionMatrix::zeros(4, 4);
        for i in 0..4 {
            m.set(i, 3 - i, Complex64::new(1.0, 0.0));
        }
        assert_eq!(determinant(&m).unwrap(), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn matches_signed_expansion() {
        let mut rng = seeded(5);
        for n in 1..=8 {
            for _ in 0..10 {
                let m = random_disk_matrix(&mut rng, n, n);
                let lu = determinant(&m).unwrap();
                let oracle = permutation_expansion(&m, true).unwrap();
                assert!((lu - oracle).norm() <= 1e-9 * 1f64.max(oracle.norm()));
            }
        }
    }
}
