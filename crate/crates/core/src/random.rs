//! Seeded random instances: unit-disk amplitudes, matrices and unitaries.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::amplitude::Amplitude;
use crate::matrix::TransitionMatrix;

pub type SeededRng = ChaCha8Rng;

pub fn seeded(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Uniform point in the closed unit disk.
pub fn random_disk_point<R: Rng + ?Sized>(rng: &mut R) -> Amplitude {
    let r: f64 = rng.gen::<f64>().sqrt();
    let theta: f64 = rng.gen_range(0.0..std::f64::consts::TAU);
    Complex64::from_polar(r, theta)
}

/// Matrix with independent uniform unit-disk entries.
pub fn random_disk_matrix<R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> TransitionMatrix {
    let entries = (0..rows * cols).map(|_| random_disk_point(rng)).collect();
    TransitionMatrix::new(rows, cols, entries).expect("disk samples are valid entries")
}

/// Haar-distributed unitary from Gram-Schmidt on a complex Gaussian matrix.
pub fn random_unitary<R: Rng + ?Sized>(rng: &mut R, n: usize) -> TransitionMatrix {
    let mut cols: Vec<Vec<Complex64>> = (0..n)
        .map(|_| {
            (0..n)
                .map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal)))
                .collect()
        })
        .collect();
    for j in 0..n {
        for k in 0..j {
            let proj: Complex64 = (0..n).map(|i| cols[k][i].conj() * cols[j][i]).sum();
            for i in 0..n {
                let sub = proj * cols[k][i];
                cols[j][i] -= sub;
            }
        }
        let norm = cols[j].iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        for z in cols[j].iter_mut() {
            *z /= norm;
        }
    }
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for col in &cols {
            entries.push(col[i]);
        }
    }
    TransitionMatrix::new(n, n, entries).expect("unitary entries lie in the unit disk")
}
