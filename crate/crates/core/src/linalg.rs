//! Small dense complex matrices and a cyclic Jacobi Hermitian eigensolver.

use std::ops::{Index, IndexMut};

use num_complex::Complex64;

use crate::error::{Error, Result};

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };
const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// Square complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct CMatrix {
    dim: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![ZERO; dim * dim],
        }
    }

    pub fn identity(dim: usize) -> Self {
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = ONE;
        }
        m
    }

    pub fn from_row_major(dim: usize, data: Vec<Complex64>) -> Result<Self> {
        if data.len() != dim * dim {
            return Err(Error::InvalidArgument(format!(
                "expected {} entries for a {dim}x{dim} matrix, got {}",
                dim * dim,
                data.len()
            )));
        }
        Ok(Self { dim, data })
    }

    pub fn from_real_diagonal(diag: &[f64]) -> Self {
        let mut m = Self::zeros(diag.len());
        for (i, &v) in diag.iter().enumerate() {
            m[(i, i)] = Complex64::new(v, 0.0);
        }
        m
    }

    /// `|v⟩⟨v|`
    pub fn outer(v: &[Complex64]) -> Self {
        let dim = v.len();
        let mut m = Self::zeros(dim);
        for i in 0..dim {
            for j in 0..dim {
                m[(i, j)] = v[i] * v[j].conj();
            }
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn as_slice(&self) -> &[Complex64] {
        &self.data
    }

    pub fn row(&self, i: usize) -> &[Complex64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn column(&self, j: usize) -> Vec<Complex64> {
        (0..self.dim).map(|i| self[(i, j)]).collect()
    }

    pub fn matmul(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim);
        let d = self.dim;
        let mut out = CMatrix::zeros(d);
        for i in 0..d {
            for k in 0..d {
                let a = self[(i, k)];
                if a == ZERO {
                    continue;
                }
                let rrow = rhs.row(k);
                let orow = &mut out.data[i * d..(i + 1) * d];
                for (o, r) in orow.iter_mut().zip(rrow) {
                    *o += a * r;
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(self.dim, v.len());
        (0..self.dim)
            .map(|i| self.row(i).iter().zip(v).map(|(a, b)| a * b).sum())
            .collect()
    }

    pub fn adjoint(&self) -> CMatrix {
        let d = self.dim;
        let mut out = CMatrix::zeros(d);
        for i in 0..d {
            for j in 0..d {
                out[(j, i)] = self[(i, j)].conj();
            }
        }
        out
    }

    pub fn scale(&self, s: Complex64) -> CMatrix {
        CMatrix {
            dim: self.dim,
            data: self.data.iter().map(|v| v * s).collect(),
        }
    }

    pub fn add(&self, rhs: &CMatrix) -> CMatrix {
        assert_eq!(self.dim, rhs.dim);
        CMatrix {
            dim: self.dim,
            data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn trace(&self) -> Complex64 {
        (0..self.dim).map(|i| self[(i, i)]).sum()
    }

    /// `Tr[self * rhs]` without forming the product.
    pub fn trace_product(&self, rhs: &CMatrix) -> Complex64 {
        assert_eq!(self.dim, rhs.dim);
        let d = self.dim;
        let mut acc = ZERO;
        for i in 0..d {
            for k in 0..d {
                acc += self[(i, k)] * rhs[(k, i)];
            }
        }
        acc
    }

    pub fn max_abs_diff(&self, rhs: &CMatrix) -> f64 {
        assert_eq!(self.dim, rhs.dim);
        self.data
            .iter()
            .zip(&rhs.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn hermitian_deviation(&self) -> f64 {
        let d = self.dim;
        let mut dev = 0.0f64;
        for i in 0..d {
            for j in i..d {
                dev = dev.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        dev
    }

    /// `U self U†`
    pub fn conjugate_by(&self, u: &CMatrix) -> CMatrix {
        u.matmul(self).matmul(&u.adjoint())
    }
}

impl Index<(usize, usize)> for CMatrix {
    type Output = Complex64;

    #[inline]
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.dim + j]
    }
}

impl IndexMut<(usize, usize)> for CMatrix {
    #[inline]
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.dim + j]
    }
}

/// Eigendecomposition of a Hermitian matrix. Eigenvalues are ascending and
/// `vectors` holds the matching eigenvectors as columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    pub values: Vec<f64>,
    pub vectors: CMatrix,
}

impl HermitianEigen {
    pub fn vector(&self, k: usize) -> Vec<Complex64> {
        self.vectors.column(k)
    }

    /// Largest `‖A v − λ v‖` over all eigenpairs.
    pub fn max_residual(&self, a: &CMatrix) -> f64 {
        (0..self.values.len())
            .map(|k| {
                let v = self.vector(k);
                let av = a.matvec(&v);
                av.iter()
                    .zip(&v)
                    .map(|(x, y)| (x - y * self.values[k]).norm_sqr())
                    .sum::<f64>()
                    .sqrt()
            })
            .fold(0.0, f64::max)
    }
}

const HERMITIAN_TOL: f64 = 1e-10;
const MAX_SWEEPS: usize = 100;

/// Cyclic Jacobi diagonalization. Each rotation first removes the phase of the
/// pivot `a_pq` with a diagonal unitary, then applies the real symmetric
/// Jacobi rotation to the resulting real 2x2 block.
pub fn eigh(a: &CMatrix) -> Result<HermitianEigen> {
    let dev = a.hermitian_deviation();
    if dev > HERMITIAN_TOL {
        return Err(Error::NotHermitian(dev));
    }
    let n = a.dim();
    let mut m = a.clone();
    // symmetrize so roundoff in the input does not bias the rotations
    for i in 0..n {
        m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
    let mut v = CMatrix::identity(n);

    let scale = m
        .data
        .iter()
        .map(|x| x.norm_sqr())
        .sum::<f64>()
        .sqrt()
        .max(f64::MIN_POSITIVE);
    for _ in 0..MAX_SWEEPS {
        let off: f64 = (0..n)
            .flat_map(|i| ((i + 1)..n).map(move |j| (i, j)))
            .map(|(i, j)| m[(i, j)].norm_sqr())
            .sum::<f64>()
            .sqrt();
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r <= 1e-300 || r <= 1e-18 * scale {
                    continue;
                }
                let phase = apq / r; // e^{iφ}
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let tau = (aqq - app) / (2.0 * r);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                let e_minus = phase.conj(); // e^{-iφ}
                                            // U = [[c, s], [-s e^{-iφ}, c e^{-iφ}]] on (p, q)
                let u_qp = -e_minus * s;
                let u_qq = e_minus * c;
                // columns: A <- A U
                for k in 0..n {
                    let akp = m[(k, p)];
                    let akq = m[(k, q)];
                    m[(k, p)] = akp * c + akq * u_qp;
                    m[(k, q)] = akp * s + akq * u_qq;
                }
                // rows: A <- U† A
                for k in 0..n {
                    let apk = m[(p, k)];
                    let aqk = m[(q, k)];
                    m[(p, k)] = apk * c + aqk * u_qp.conj();
                    m[(q, k)] = apk * s + aqk * u_qq.conj();
                }
                m[(p, q)] = ZERO;
                m[(q, p)] = ZERO;
                m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = vkp * c + vkq * u_qp;
                    v[(k, q)] = vkp * s + vkq * u_qq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    // stable: degenerate eigenvalues keep their column order
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re));
    let values = order.iter().map(|&i| m[(i, i)].re).collect();
    let mut vectors = CMatrix::zeros(n);
    for (new, &old) in order.iter().enumerate() {
        for k in 0..n {
            vectors[(k, new)] = v[(k, old)];
        }
    }
    Ok(HermitianEigen { values, vectors })
}

/// Eigenvalues only, ascending.
pub fn eigvalsh(a: &CMatrix) -> Result<Vec<f64>> {
    Ok(eigh(a)?.values)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn random_hermitian(dim: usize, rng: &mut ChaCha8Rng) -> CMatrix {
        let mut m = CMatrix::zeros(dim);
        for i in 0..dim {
            m[(i, i)] = Complex64::new(rng.random_range(-1.0..1.0), 0.0);
            for j in (i + 1)..dim {
                let z = Complex64::new(rng.random_range(-1.0..1.0), rng.random_range(-1.0..1.0));
                m[(i, j)] = z;
                m[(j, i)] = z.conj();
            }
        }
        m
    }

    #[test]
    fn residuals_and_orthonormality() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for dim in [1, 2, 3, 4, 8, 16, 33] {
            let a = random_hermitian(dim, &mut rng);
            let e = eigh(&a).unwrap();
            assert!(e.max_residual(&a) < 1e-10, "dim {dim}");
            let vhv = e.vectors.adjoint().matmul(&e.vectors);
            assert!(vhv.max_abs_diff(&CMatrix::identity(dim)) < 1e-12);
            assert!(e.values.windows(2).all(|w| w[0] <= w[1]));
            let tr: f64 = e.values.iter().sum();
            assert!((tr - a.trace().re).abs() < 1e-10);
        }
    }

    #[test]
    fn degenerate_spectrum() {
        // Z ⊗ Z has eigenvalues {-1, -1, 1, 1}
        let zz = CMatrix::from_real_diagonal(&[1.0, -1.0, -1.0, 1.0]);
        let e = eigh(&zz).unwrap();
        assert_eq!(e.values, vec![-1.0, -1.0, 1.0, 1.0]);
        assert!(e.max_residual(&zz) < 1e-14);
    }

    #[test]
    fn two_level_closed_form() {
        // [[a, b], [b*, d]] has eigenvalues (a+d)/2 ± sqrt(((a-d)/2)^2 + |b|^2)
        let b = Complex64::new(0.3, -0.4);
        let a = CMatrix::from_row_major(
            2,
            vec![Complex64::new(1.0, 0.0), b, b.conj(), Complex64::new(-0.5, 0.0)],
        )
        .unwrap();
        let e = eigvalsh(&a).unwrap();
        let r = (0.75f64 * 0.75 + 0.25).sqrt();
        assert!((e[0] - (0.25 - r)).abs() < 1e-14);
        assert!((e[1] - (0.25 + r)).abs() < 1e-14);
    }

    #[test]
    fn rejects_non_hermitian() {
        let mut a = CMatrix::zeros(2);
        a[(0, 1)] = ONE;
        assert!(matches!(eigh(&a), Err(Error::NotHermitian(_))));
    }
}
