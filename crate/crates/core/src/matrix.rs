//! Dense complex matrices of single-particle transition amplitudes.

use num_complex::Complex64;

use crate::amplitude::{is_finite, Amplitude, DISK_SLACK};
use crate::error::{Error, Result};

/// Row-major matrix whose entry `(i, j)` is the amplitude from outcome `i`
/// of the earlier measurement to outcome `j` of the later one.
///
/// [`TransitionMatrix::new`] enforces the physical constraint that every
/// entry lies in the closed unit disk. Intermediate algebraic matrices
/// (column sums, matrix products) are built with
/// [`TransitionMatrix::unconstrained`], which only requires finiteness.
#[derive(Debug, Clone, PartialEq)]
pub struct TransitionMatrix {
    rows: usize,
    cols: usize,
    entries: Vec<Amplitude>,
}

impl TransitionMatrix {
    pub fn new(rows: usize, cols: usize, entries: Vec<Amplitude>) -> Result<Self> {
        let m = Self::unconstrained(rows, cols, entries)?;
        for i in 0..rows {
            for j in 0..cols {
                let modulus = m.get(i, j).norm();
                if modulus > 1.0 + DISK_SLACK {
                    return Err(Error::EntryOutOfDisk { row: i, col: j, modulus });
                }
            }
        }
        Ok(m)
    }

    pub fn unconstrained(rows: usize, cols: usize, entries: Vec<Amplitude>) -> Result<Self> {
        if rows == 0 || cols == 0 {
            return Err(Error::Dimension(format!("empty {rows}x{cols} matrix")));
        }
        if entries.len() != rows * cols {
            return Err(Error::Dimension(format!(
                "{} entries supplied for a {rows}x{cols} matrix",
                entries.len()
            )));
        }
        if !entries.iter().all(|&z| is_finite(z)) {
            return Err(Error::NonFinite);
        }
        Ok(TransitionMatrix { rows, cols, entries })
    }

    /// Builds a physical matrix from nested rows.
    pub fn from_rows(rows: Vec<Vec<Amplitude>>) -> Result<Self> {
        let (r, c) = nested_shape(&rows)?;
        Self::new(r, c, rows.into_iter().flatten().collect())
    }

    pub fn from_rows_unconstrained(rows: Vec<Vec<Amplitude>>) -> Result<Self> {
        let (r, c) = nested_shape(&rows)?;
        Self::unconstrained(r, c, rows.into_iter().flatten().collect())
    }

    /// Physical matrix from real entries, row-major.
    pub fn from_real(rows: usize, cols: usize, entries: &[f64]) -> Result<Self> {
        Self::new(
            rows,
            cols,
            entries.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        )
    }

    pub fn identity(n: usize) -> Self {
        let mut entries = vec![Complex64::new(0.0, 0.0); n * n];
        for i in 0..n {
            entries[i * n + i] = Complex64::new(1.0, 0.0);
        }
        TransitionMatrix { rows: n, cols: n, entries }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        TransitionMatrix {
            rows,
            cols,
            entries: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn n_rows(&self) -> usize {
        self.rows
    }

    pub fn n_cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    /// Side length, or a [`Error::NotSquare`].
    pub fn square_dim(&self) -> Result<usize> {
        if self.is_square() {
            Ok(self.rows)
        } else {
            Err(Error::NotSquare { rows: self.rows, cols: self.cols })
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Amplitude {
        self.entries[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, value: Amplitude) {
        self.entries[i * self.cols + j] = value;
    }

    pub fn row(&self, i: usize) -> &[Amplitude] {
        &self.entries[i * self.cols..(i + 1) * self.cols]
    }

    pub fn entries(&self) -> &[Amplitude] {
        &self.entries
    }

    pub fn to_rows(&self) -> Vec<Vec<Amplitude>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn map(&self, f: impl Fn(Amplitude) -> Amplitude) -> Self {
        TransitionMatrix {
            rows: self.rows,
            cols: self.cols,
            entries: self.entries.iter().map(|&z| f(z)).collect(),
        }
    }

    pub fn conj(&self) -> Self {
        self.map(|z| z.conj())
    }

    pub fn transpose(&self) -> Self {
        let mut entries = Vec::with_capacity(self.entries.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                entries.push(self.get(i, j));
            }
        }
        TransitionMatrix { rows: self.cols, cols: self.rows, entries }
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        self.transpose().conj()
    }

    /// Matrix product `self · rhs`, summing over the shared index in order.
    pub fn matmul(&self, rhs: &TransitionMatrix) -> Result<Self> {
        if self.cols != rhs.rows {
            return Err(Error::Dimension(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, rhs.rows, rhs.cols
            )));
        }
        let mut entries = Vec::with_capacity(self.rows * rhs.cols);
        for i in 0..self.rows {
            for j in 0..rhs.cols {
                let mut acc = Complex64::new(0.0, 0.0);
                for k in 0..self.cols {
                    acc += self.get(i, k) * rhs.get(k, j);
                }
                entries.push(acc);
            }
        }
        Ok(TransitionMatrix { rows: self.rows, cols: rhs.cols, entries })
    }

    /// Sub-matrix picking the listed rows and columns (repeats allowed).
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        let mut entries = Vec::with_capacity(rows.len() * cols.len());
        for &i in rows {
            for &j in cols {
                entries.push(self.get(i, j));
            }
        }
        TransitionMatrix { rows: rows.len(), cols: cols.len(), entries }
    }

    pub fn column(&self, j: usize) -> Vec<Amplitude> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Copy with column `j` replaced.
    pub fn with_column(&self, j: usize, column: &[Amplitude]) -> Self {
        let mut out = self.clone();
        for (i, &z) in column.iter().enumerate() {
            out.set(i, j, z);
        }
        out
    }

    pub fn has_zero_row(&self) -> bool {
        (0..self.rows).any(|i| self.row(i).iter().all(|z| z.re == 0.0 && z.im == 0.0))
    }

    pub fn has_zero_column(&self) -> bool {
        (0..self.cols).any(|j| (0..self.rows).all(|i| {
            let z = self.get(i, j);
            z.re == 0.0 && z.im == 0.0
        }))
    }

    /// True when two rows or two columns are bitwise identical.
    pub fn has_repeated_line(&self) -> bool {
        for a in 0..self.rows {
            for b in a + 1..self.rows {
                if self.row(a) == self.row(b) {
                    return true;
                }
            }
        }
        for a in 0..self.cols {
            for b in a + 1..self.cols {
                if (0..self.rows).all(|i| self.get(i, a) == self.get(i, b)) {
                    return true;
                }
            }
        }
        false
    }

    /// Max over rows of the summed squared moduli.
    pub fn max_row_weight(&self) -> (usize, f64) {
        (0..self.rows)
            .map(|i| (i, self.row(i).iter().map(|z| z.norm_sqr()).sum::<f64>()))
            .fold((0, f64::NEG_INFINITY), |best, cur| if cur.1 > best.1 { cur } else { best })
    }
}

fn nested_shape(rows: &[Vec<Amplitude>]) -> Result<(usize, usize)> {
    let r = rows.len();
    let c = rows.first().map_or(0, Vec::len);
    if let Some(bad) = rows.iter().position(|row| row.len() != c) {
        return Err(Error::Dimension(format!(
            "ragged matrix: row {bad} has {} entries, row 0 has {c}",
            rows[bad].len()
        )));
    }
    Ok((r, c))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_entries_outside_disk() {
        let err = TransitionMatrix::from_real(1, 2, &[0.5, 1.5]).unwrap_err();
        assert!(matches!(err, Error::EntryOutOfDisk { row: 0, col: 1, .. }));
        assert!(TransitionMatrix::from_real(1, 1, &[1.0 + 1e-13]).is_ok());
        assert!(TransitionMatrix::unconstrained(1, 1, vec![Complex64::new(3.0, 0.0)]).is_ok());
    }

    #[test]
    fn rejects_bad_shapes() {
        assert!(TransitionMatrix::unconstrained(0, 3, vec![]).is_err());
        assert!(TransitionMatrix::unconstrained(2, 2, vec![Complex64::new(0.0, 0.0); 3]).is_err());
        let ragged = vec![vec![Complex64::new(0.0, 0.0); 2], vec![Complex64::new(0.0, 0.0)]];
        assert!(TransitionMatrix::from_rows(ragged).is_err());
        assert_eq!(
            TransitionMatrix::zeros(2, 3).square_dim(),
            Err(Error::NotSquare { rows: 2, cols: 3 })
        );
    }

    #[test]
    fn rejects_non_finite() {
        let e = TransitionMatrix::unconstrained(1, 1, vec![Complex64::new(f64::INFINITY, 0.0)]);
        assert_eq!(e, Err(Error::NonFinite));
    }

    #[test]
    fn matmul_and_transpose() {
        let a = TransitionMatrix::from_real(2, 3, &[0.1, 0.2, 0.3, 0.4, 0.5, 0.6]).unwrap();
        let t = a.transpose();
        assert_eq!((t.n_rows(), t.n_cols()), (3, 2));
        assert_eq!(t.get(2, 1), a.get(1, 2));
        let p = a.matmul(&t).unwrap();
        assert!((p.get(0, 1).re - (0.04 + 0.10 + 0.18)).abs() < 1e-15);
        assert!(a.matmul(&a).is_err());
    }

    #[test]
    fn line_predicates() {
        let m = TransitionMatrix::from_real(2, 2, &[0.1, 0.1, 0.3, 0.3]).unwrap();
        assert!(m.has_repeated_line());
        assert!(!m.has_zero_row());
        let z = TransitionMatrix::from_real(2, 2, &[0.0, 0.5, 0.0, 0.2]).unwrap();
        assert!(z.has_zero_column());
    }
}
