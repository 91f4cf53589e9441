//! Pauli coefficients `ρ_μ = Tr[ρ P_μ]` and the sorted Pauli spectrum.
//!
//! All coefficients sharing an X-part `x` come out of one Walsh–Hadamard
//! transform of `c ↦ ρ_{c, c^x}`, so a full table costs `O(d² log d)`.

use num_complex::Complex64;
use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::pauli::{check_same, PauliString};
use crate::state::QuantumState;

/// Largest N for which all `4^N` coefficients are computed.
pub const DEFAULT_EXHAUSTIVE_LIMIT: usize = 10;

const IMAG_TOL: f64 = 1e-10;

/// `Tr[ρ P]` for a single string.
pub fn pauli_expectation<S: QuantumState + ?Sized>(state: &S, p: &PauliString) -> Result<f64> {
    check_same(state.n_qubits(), p.n_qubits())?;
    let d = state.dim();
    let mut f = vec![Complex64::new(0.0, 0.0); d];
    state.shifted_diagonal(p.x_mask() as usize, &mut f);
    let z = p.z_mask();
    let sum: Complex64 = f
        .iter()
        .enumerate()
        .map(|(c, v)| if (c as u64 & z).count_ones() & 1 == 1 { -*v } else { *v })
        .sum();
    let val = sum * p.matrix_phase();
    if val.im.abs() > IMAG_TOL {
        return Err(Error::NotHermitian(val.im.abs()));
    }
    Ok(val.re)
}

/// Every Pauli coefficient of a state, identity included, indexed by
/// `(x << n) | z`.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliTable {
    n: usize,
    coeffs: Vec<f64>,
}

impl PauliTable {
    pub fn compute<S: QuantumState + ?Sized>(state: &S) -> Result<Self> {
        Self::compute_with_limit(state, DEFAULT_EXHAUSTIVE_LIMIT)
    }

    pub fn compute_with_limit<S: QuantumState + ?Sized>(state: &S, limit: usize) -> Result<Self> {
        let n = state.n_qubits();
        if n > limit {
            return Err(Error::TooManyQubits {
                what: "exhaustive Pauli spectrum",
                n,
                limit,
            });
        }
        let d = 1usize << n;
        let blocks: Vec<(Vec<f64>, f64)> = (0..d)
            .into_par_iter()
            .map(|x| {
                let mut f = vec![Complex64::new(0.0, 0.0); d];
                state.shifted_diagonal(x, &mut f);
                walsh_hadamard(&mut f);
                let mut worst = 0.0f64;
                let row = f
                    .iter()
                    .enumerate()
                    .map(|(z, v)| {
                        let v = match ((x & z).count_ones() & 3) as u8 {
                            0 => *v,
                            1 => v * Complex64::i(),
                            2 => -*v,
                            _ => -v * Complex64::i(),
                        };
                        worst = worst.max(v.im.abs());
                        v.re
                    })
                    .collect();
                (row, worst)
            })
            .collect();
        let worst = blocks.iter().map(|b| b.1).fold(0.0, f64::max);
        if worst > IMAG_TOL {
            return Err(Error::NotHermitian(worst));
        }
        let coeffs = blocks.into_iter().flat_map(|b| b.0).collect();
        Ok(Self { n, coeffs })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    /// Coefficient of a signed string: `sign * Tr[ρ P]`.
    #[inline]
    pub fn get(&self, p: &PauliString) -> f64 {
        debug_assert_eq!(p.n_qubits(), self.n);
        p.sign() * self.coeffs[p.table_index()]
    }

    /// `Σ_μ ρ_μ²` over all strings including the identity.
    pub fn sum_squares(&self) -> f64 {
        self.coeffs.iter().map(|v| v * v).sum()
    }

    pub fn spectrum(&self) -> PauliSpectrum {
        let n = self.n;
        let mut entries: Vec<(f64, u64, PauliString)> = crate::pauli::all_nonidentity(n)
            .map(|p| (self.coeffs[p.table_index()].abs(), p.label_index(), p))
            .collect();
        entries.par_sort_by(|a, b| b.0.total_cmp(&a.0).then(a.1.cmp(&b.1)));
        let (r, labels) = entries.into_iter().map(|(v, _, p)| (v, p)).unzip();
        PauliSpectrum { n, r, labels }
    }
}

fn walsh_hadamard(f: &mut [Complex64]) {
    let d = f.len();
    let mut h = 1;
    while h < d {
        for block in (0..d).step_by(2 * h) {
            for i in block..block + h {
                let a = f[i];
                let b = f[i + h];
                f[i] = a + b;
                f[i + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Absolute non-identity Pauli coefficients in nonincreasing order. Ties are
/// ordered by base-4 label index.
#[derive(Debug, Clone, PartialEq)]
pub struct PauliSpectrum {
    n: usize,
    r: Vec<f64>,
    labels: Vec<PauliString>,
}

impl PauliSpectrum {
    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn r(&self) -> &[f64] {
        &self.r
    }

    /// Original labels in sorted order.
    pub fn index_map(&self) -> &[PauliString] {
        &self.labels
    }

    pub fn r1(&self) -> f64 {
        self.r.first().copied().unwrap_or(0.0)
    }

    pub fn sum_squares(&self) -> f64 {
        self.r.iter().map(|v| v * v).sum()
    }
}

pub fn pauli_spectrum<S: QuantumState + ?Sized>(state: &S) -> Result<PauliSpectrum> {
    Ok(PauliTable::compute(state)?.spectrum())
}
