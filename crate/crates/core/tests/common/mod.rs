#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;

use clifford_ergotropy::clifford::CliffordTableau;
use clifford_ergotropy::linalg::CMatrix;
use clifford_ergotropy::operator::PauliOperator;
use clifford_ergotropy::pauli::{all_nonidentity, PauliString};

/// Dense `C` for a tableau storing `C† P C`.
///
/// `Σ_μ (C† P_μ C) A P_μ = d Tr[C A] C†`, so a twirl of any `A` with
/// `Tr[CA] ≠ 0` recovers `C†` up to a scalar.
pub fn dense_clifford(t: &CliffordTableau) -> CMatrix {
    let n = t.n_qubits();
    let d = 1usize << n;
    let mut strings = vec![PauliString::identity(n)];
    strings.extend(all_nonidentity(n));
    for (i, j) in (0..d).flat_map(|i| (0..d).map(move |j| (i, j))) {
        let mut a = CMatrix::zeros(d);
        a[(i, j)] = Complex64::new(1.0, 0.0);
        let mut v = CMatrix::zeros(d);
        for p in &strings {
            let img = t.conjugate(p).unwrap().to_dense();
            v = v.add(&img.matmul(&a).matmul(&p.to_dense()));
        }
        let norm2 = v.matmul(&v.adjoint())[(0, 0)].re;
        if norm2 > 1e-6 {
            return v.adjoint().scale(Complex64::new(1.0 / norm2.sqrt(), 0.0));
        }
    }
    unreachable!("some matrix unit has nonzero overlap with a unitary")
}

/// Random Hermitian operator with `1..=max_terms` distinct terms, coefficients in (−1, 1).
pub fn random_hamiltonian<R: Rng>(n: usize, max_terms: usize, rng: &mut R) -> PauliOperator {
    let mut pool: Vec<PauliString> = all_nonidentity(n).collect();
    let k = rng.random_range(1..=max_terms.min(pool.len()));
    let mut op = PauliOperator::new(n).unwrap();
    for _ in 0..k {
        let p = pool.swap_remove(rng.random_range(0..pool.len()));
        op.add_term(p, rng.random_range(-1.0..1.0)).unwrap();
    }
    op
}

/// Uniform point in the Bloch ball (or on the sphere when `pure`).
pub fn random_bloch<R: Rng>(pure: bool, rng: &mut R) -> [f64; 3] {
    loop {
        let v = [
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0),
            rng.random_range(-1.0..1.0f64),
        ];
        let len = v.iter().map(|x| x * x).sum::<f64>().sqrt();
        if len > 1.0 || len < 1e-3 {
            continue;
        }
        return if pure { v.map(|x| x / len) } else { v };
    }
}

pub fn energy_dense(rho: &CMatrix, h: &PauliOperator) -> f64 {
    rho.trace_product(&h.to_dense()).re
}
