//! Haar-random states and unitaries.

use num_complex::Complex64;
use rand::Rng;
use rand_distr::StandardNormal;

use crate::linalg::CMatrix;
use crate::state::PureState;

fn gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))
}

/// Normalized complex Gaussian vector on `n` qubits.
pub fn haar_state<R: Rng + ?Sized>(n: usize, rng: &mut R) -> PureState {
    let amps = (0..1usize << n).map(|_| gaussian(rng)).collect();
    PureState::normalized(amps).expect("Gaussian vector is nonzero")
}

/// Haar unitary from Gram–Schmidt on a complex Ginibre matrix. Columns are
/// orthonormalized in order, which fixes the phase convention of the QR
/// factor and keeps the distribution Haar.
pub fn haar_unitary<R: Rng + ?Sized>(dim: usize, rng: &mut R) -> CMatrix {
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(dim);
    while cols.len() < dim {
        let mut v: Vec<Complex64> = (0..dim).map(|_| gaussian(rng)).collect();
        // two passes of modified Gram–Schmidt
        for _ in 0..2 {
            for u in &cols {
                let proj: Complex64 = u.iter().zip(&v).map(|(a, b)| a.conj() * b).sum();
                v.iter_mut().zip(u).for_each(|(b, a)| *b -= a * proj);
            }
        }
        let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-8 {
            continue;
        }
        v.iter_mut().for_each(|c| *c /= norm);
        cols.push(v);
    }
    let mut m = CMatrix::zeros(dim);
    for (j, col) in cols.iter().enumerate() {
        for (i, c) in col.iter().enumerate() {
            m[(i, j)] = *c;
        }
    }
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn unitary_is_unitary() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for dim in [2, 4, 8] {
            let u = haar_unitary(dim, &mut rng);
            assert!(u.adjoint().matmul(&u).max_abs_diff(&CMatrix::identity(dim)) < 1e-12);
        }
    }

    #[test]
    fn state_is_normalized_and_seeded() {
        let a = haar_state(4, &mut ChaCha8Rng::seed_from_u64(9));
        let b = haar_state(4, &mut ChaCha8Rng::seed_from_u64(9));
        assert_eq!(a, b);
        assert!((a.inner(&a).unwrap().re - 1.0).abs() < 1e-12);
    }
}
