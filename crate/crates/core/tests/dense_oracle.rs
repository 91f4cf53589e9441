mod common;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use clifford_ergotropy::clifford::{random_clifford, CliffordTableau};
use clifford_ergotropy::ergotropy::orbit_energy;
use clifford_ergotropy::haar::{haar_state, haar_unitary};
use clifford_ergotropy::linalg::CMatrix;
use clifford_ergotropy::pauli::{all_nonidentity, Pauli, PauliString};
use clifford_ergotropy::spectrum::PauliTable;
use clifford_ergotropy::state::{DensityMatrix, QuantumState};

use common::{dense_clifford, energy_dense, random_hamiltonian};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn kron(a: &CMatrix, b: &CMatrix) -> CMatrix {
    let (da, db) = (a.dim(), b.dim());
    let mut m = CMatrix::zeros(da * db);
    for i in 0..da * db {
        for j in 0..da * db {
            m[(i, j)] = a[(i / db, j / db)] * b[(i % db, j % db)];
        }
    }
    m
}

/// `U† P U` equals the tableau image for every generator.
fn assert_tableau_matches(u: &CMatrix, t: &CliffordTableau) {
    let n = t.n_qubits();
    for q in 0..n {
        for p in [Pauli::X, Pauli::Z] {
            let gen = PauliString::single(n, q, p).unwrap();
            let lhs = u.adjoint().matmul(&gen.to_dense()).matmul(u);
            let rhs = t.conjugate(&gen).unwrap().to_dense();
            assert!(
                lhs.max_abs_diff(&rhs) < 1e-12,
                "generator {gen}: tableau image {}",
                t.conjugate(&gen).unwrap()
            );
        }
    }
}

#[test]
fn gate_tableaux_match_dense_gates() {
    let s = std::f64::consts::FRAC_1_SQRT_2;
    let h = CMatrix::from_row_major(2, vec![c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]).unwrap();
    assert_tableau_matches(&h, &CliffordTableau::hadamard(1, 0).unwrap());

    let s_dag = CMatrix::from_row_major(2, vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, -1.0)]).unwrap();
    assert_tableau_matches(&s_dag, &CliffordTableau::phase(1, 0).unwrap());

    let one = c(1.0, 0.0);
    let mut cnot = CMatrix::zeros(4);
    for (i, j) in [(0, 0), (1, 1), (2, 3), (3, 2)] {
        cnot[(i, j)] = one;
    }
    assert_tableau_matches(&cnot, &CliffordTableau::cnot(2, 0, 1).unwrap());
    let mut rev = CMatrix::zeros(4);
    for (i, j) in [(0, 0), (1, 3), (2, 2), (3, 1)] {
        rev[(i, j)] = one;
    }
    assert_tableau_matches(&rev, &CliffordTableau::cnot(2, 1, 0).unwrap());

    let id = CMatrix::identity(2);
    assert_tableau_matches(&kron(&id, &h), &CliffordTableau::hadamard(2, 1).unwrap());
    assert_tableau_matches(&kron(&s_dag, &kron(&id, &id)), &CliffordTableau::phase(3, 0).unwrap());
}

#[test]
fn composition_matches_matrix_products() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in 1..=3 {
        for _ in 0..10 {
            let a = random_clifford(n, &mut rng);
            let b = random_clifford(n, &mut rng);
            let (ua, ub) = (dense_clifford(&a), dense_clifford(&b));
            assert_tableau_matches(&ua, &a);
            // a.compose(b) maps P to a(b(P)) = U_a† U_b† P U_b U_a
            assert_tableau_matches(&ub.matmul(&ua), &a.compose(&b).unwrap());
        }
    }
}

#[test]
fn conjugation_of_every_string_matches_dense() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for n in 1..=3 {
        let t = random_clifford(n, &mut rng);
        let u = dense_clifford(&t);
        for p in all_nonidentity(n) {
            for q in [p, p.negated()] {
                let lhs = u.adjoint().matmul(&q.to_dense()).matmul(&u);
                assert!(lhs.max_abs_diff(&t.conjugate(&q).unwrap().to_dense()) < 1e-12);
            }
        }
    }
}

#[test]
fn orbit_energy_matches_dense_conjugation() {
    let mut rng = ChaCha8Rng::seed_from_u64(99);
    for k in 0..100 {
        let n = 1 + k % 3;
        let t = random_clifford(n, &mut rng);
        let h = random_hamiltonian(n, 12, &mut rng);
        let rho = if k % 2 == 0 {
            haar_state(n, &mut rng).density_matrix()
        } else {
            // random mixed state: rotated random populations
            let mut p: Vec<f64> = (0..1 << n).map(|_| rng.random::<f64>()).collect();
            let sum: f64 = p.iter().sum();
            p.iter_mut().for_each(|x| *x /= sum);
            let u = haar_unitary(1 << n, &mut rng);
            DensityMatrix::new(CMatrix::from_real_diagonal(&p).conjugate_by(&u)).unwrap()
        };
        let table = PauliTable::compute(&rho).unwrap();
        let fast = orbit_energy(&table, &t, &h).unwrap();
        let u = dense_clifford(&t);
        let dense = energy_dense(&rho.matrix().conjugate_by(&u), &h);
        assert!((fast - dense).abs() < 1e-10, "case {k}: {fast} vs {dense}");
    }
}

#[test]
fn pauli_table_matches_traces() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let psi = haar_state(3, &mut rng);
    let rho = psi.density_matrix();
    let table = PauliTable::compute(&psi).unwrap();
    for p in all_nonidentity(3) {
        let tr = rho.matrix().trace_product(&p.to_dense());
        assert!(tr.im.abs() < 1e-12);
        assert!((table.get(&p) - tr.re).abs() < 1e-12);
        assert!((table.get(&p.negated()) + tr.re).abs() < 1e-12);
    }
}
