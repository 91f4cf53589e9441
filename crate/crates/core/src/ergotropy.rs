//! Ergotropy, Clifford ergotropy and the ergotropy gap.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::clifford::{random_clifford, single_qubit_cliffords, CliffordEnumeration, CliffordTableau};
use crate::error::{Error, Result};
use crate::linalg::{eigh, eigvalsh, CMatrix};
use crate::operator::PauliOperator;
use crate::pauli::{check_same, PauliString};
use crate::spectrum::PauliTable;
use crate::state::{DensityMatrix, PureState, QuantumState};

/// Largest N handled by dense eigendecomposition.
pub const DENSE_LIMIT: usize = 10;
/// Largest N whose ground energy is found by scanning basis states when the
/// Hamiltonian is diagonal.
const DIAGONAL_SCAN_LIMIT: usize = 26;
/// Above this N the ground energy comes from Lanczos instead of Jacobi.
const LANCZOS_FROM: usize = 7;
pub const LANCZOS_LIMIT: usize = 14;

#[derive(Debug, Clone, PartialEq)]
pub struct ErgotropyResult {
    pub initial_energy: f64,
    pub passive_energy: f64,
    pub ergotropy: f64,
    /// `(p_k, ε_k)` with probabilities descending and energies ascending.
    pub passive_populations: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CliffordErgotropyResult {
    pub initial_energy: f64,
    pub orbit_min_energy: f64,
    pub clifford_ergotropy: f64,
    pub optimal_tableau: CliffordTableau,
    /// True when the orbit minimum came from exhaustive enumeration.
    pub exact: bool,
    /// `ergotropy − clifford_ergotropy`, when the full ergotropy was computed.
    pub gap: Option<f64>,
}

fn check_dense(n: usize) -> Result<()> {
    if n > DENSE_LIMIT {
        Err(Error::TooManyQubits {
            what: "dense eigendecomposition",
            n,
            limit: DENSE_LIMIT,
        })
    } else {
        Ok(())
    }
}

/// Energy levels of `H`, ascending.
pub fn energy_levels(h: &PauliOperator) -> Result<Vec<f64>> {
    check_dense(h.n_qubits())?;
    eigvalsh(&h.to_dense())
}

/// Ground-state energy `ε_G`. Diagonal (Z-only) Hamiltonians are scanned
/// basis state by basis state; small ones are diagonalized densely and
/// larger ones go through Lanczos with full reorthogonalization.
pub fn ground_energy(h: &PauliOperator) -> Result<f64> {
    let n = h.n_qubits();
    if h.is_empty() {
        return Ok(0.0);
    }
    if h.terms().all(|(p, _)| p.x_mask() == 0) {
        if n > DIAGONAL_SCAN_LIMIT {
            return Err(Error::TooManyQubits {
                what: "diagonal ground-state scan",
                n,
                limit: DIAGONAL_SCAN_LIMIT,
            });
        }
        let terms: Vec<(u64, f64)> = h.terms().map(|(p, c)| (p.z_mask(), c)).collect();
        let min = (0..1u64 << n)
            .into_par_iter()
            .map(|b| {
                terms
                    .iter()
                    .map(|&(z, c)| if (b & z).count_ones() & 1 == 1 { -c } else { c })
                    .sum::<f64>()
            })
            .reduce(|| f64::INFINITY, f64::min);
        return Ok(min);
    }
    if n >= LANCZOS_FROM {
        if n > LANCZOS_LIMIT {
            return Err(Error::TooManyQubits {
                what: "Lanczos ground energy",
                n,
                limit: LANCZOS_LIMIT,
            });
        }
        return lanczos_ground_energy(h);
    }
    Ok(energy_levels(h)?[0])
}

fn lanczos_ground_energy(h: &PauliOperator) -> Result<f64> {
    let d = 1usize << h.n_qubits();
    let max_iter = d.min(400);
    let mut rng = ChaCha8Rng::seed_from_u64(0x1a2c);
    let start: Vec<Complex64> = (0..d)
        .map(|_| Complex64::new(rng.random::<f64>() - 0.5, rng.random::<f64>() - 0.5))
        .collect();
    let mut v = normalize(start);
    let mut basis: Vec<Vec<Complex64>> = Vec::new();
    let (mut alpha, mut beta) = (Vec::new(), Vec::new());
    let mut last = f64::INFINITY;
    let scale = h.l1_norm().max(1.0);
    for j in 0..max_iter {
        let mut w = h.apply(&v)?;
        let a = dot(&v, &w).re;
        alpha.push(a);
        basis.push(v);
        for _ in 0..2 {
            for u in &basis {
                let c = dot(u, &w);
                w.iter_mut().zip(u).for_each(|(wi, ui)| *wi -= ui * c);
            }
        }
        let b = w.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        if j % 8 == 7 || b < 1e-12 * scale || j + 1 == max_iter {
            let e = tridiagonal_min_eigenvalue(&alpha, &beta);
            if b < 1e-12 * scale || (last - e).abs() < 1e-14 * scale {
                return Ok(e);
            }
            last = e;
        }
        beta.push(b);
        v = w.into_iter().map(|c| c / b).collect();
    }
    Ok(last)
}

fn dot(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

fn normalize(v: Vec<Complex64>) -> Vec<Complex64> {
    let norm = v.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    v.into_iter().map(|c| c / norm).collect()
}

/// Smallest eigenvalue of the symmetric tridiagonal matrix with diagonal
/// `a` and off-diagonal `b` by Sturm-sequence bisection.
fn tridiagonal_min_eigenvalue(a: &[f64], b: &[f64]) -> f64 {
    let n = a.len();
    let off = |i: usize| if i < n - 1 { b[i].abs() } else { 0.0 };
    let (mut lo, mut hi) = (f64::INFINITY, f64::NEG_INFINITY);
    for i in 0..n {
        let r = off(i) + if i > 0 { off(i - 1) } else { 0.0 };
        lo = lo.min(a[i] - r);
        hi = hi.max(a[i] + r);
    }
    // number of eigenvalues strictly below x
    let count_below = |x: f64| {
        let mut q = 1.0f64;
        let mut count = 0;
        for i in 0..n {
            let b2 = if i > 0 { b[i - 1] * b[i - 1] } else { 0.0 };
            q = a[i] - x - if i > 0 { b2 / q } else { 0.0 };
            if q == 0.0 {
                q = -f64::EPSILON * (x.abs() + 1.0);
            }
            if q < 0.0 {
                count += 1;
            }
        }
        count
    };
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if count_below(mid) >= 1 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    0.5 * (lo + hi)
}

/// Standard ergotropy through the passive state: descending populations are
/// paired with ascending energy levels.
pub fn standard_ergotropy(rho: &DensityMatrix, h: &PauliOperator) -> Result<ErgotropyResult> {
    check_same(rho.n_qubits(), h.n_qubits())?;
    check_dense(rho.n_qubits())?;
    let initial_energy = h.energy(rho)?;
    let probs = rho.populations()?;
    let levels = energy_levels(h)?;
    let passive_populations: Vec<(f64, f64)> = probs.into_iter().zip(levels).collect();
    let passive_energy = passive_populations.iter().map(|(p, e)| p * e).sum();
    Ok(ErgotropyResult {
        initial_energy,
        passive_energy,
        ergotropy: initial_energy - passive_energy,
        passive_populations,
    })
}

/// The passive state `Σ_k p_k |ε_k⟩⟨ε_k|`.
pub fn passive_state(rho: &DensityMatrix, h: &PauliOperator) -> Result<DensityMatrix> {
    check_same(rho.n_qubits(), h.n_qubits())?;
    check_dense(rho.n_qubits())?;
    let probs = rho.populations()?;
    let eig = eigh(&h.to_dense())?;
    let d = probs.len();
    let mut m = CMatrix::zeros(d);
    for (k, p) in probs.iter().enumerate() {
        let v = eig.vector(k);
        for i in 0..d {
            for j in 0..d {
                m[(i, j)] += v[i] * v[j].conj() * *p;
            }
        }
    }
    DensityMatrix::new(m)
}

/// `ℰ = E − ε_G` for a pure state.
pub fn ergotropy_pure(state: &PureState, h: &PauliOperator) -> Result<f64> {
    check_same(state.n_qubits(), h.n_qubits())?;
    Ok(h.energy(state)? - ground_energy(h)?)
}

/// Ergotropy of any state, using the pure-state shortcut when possible.
pub fn ergotropy<S: QuantumState + ?Sized>(state: &S, h: &PauliOperator) -> Result<f64> {
    check_same(state.n_qubits(), h.n_qubits())?;
    if state.is_pure() {
        Ok(h.energy(state)? - ground_energy(h)?)
    } else {
        Ok(standard_ergotropy(&state.density_matrix(), h)?.ergotropy)
    }
}

/// Best point found on a Clifford orbit.
#[derive(Debug, Clone, PartialEq)]
pub struct OrbitMinimum {
    pub energy: f64,
    pub tableau: CliffordTableau,
}

/// Energy `Σ_ℓ η_ℓ H_ℓ ρ_{c(ℓ)}` of the rotated state `C ρ C†`.
pub fn orbit_energy(table: &PauliTable, tableau: &CliffordTableau, h: &PauliOperator) -> Result<f64> {
    check_same(table.n_qubits(), tableau.n_qubits())?;
    check_same(table.n_qubits(), h.n_qubits())?;
    h.terms()
        .try_fold(0.0, |acc, (p, c)| Ok(acc + c * table.get(&tableau.conjugate(p)?)))
}

/// Generator bits of `p` in sign-index layout (generator `g` at bit `2n-1-g`).
fn generator_mask(p: &PauliString) -> u64 {
    let n = p.n_qubits();
    (0..n).fold(0u64, |acc, j| {
        let bit = 1u64 << (n - 1 - j);
        let mut acc = acc;
        if p.x_mask() & bit != 0 {
            acc |= 1 << (2 * n - 1 - 2 * j);
        }
        if p.z_mask() & bit != 0 {
            acc |= 1 << (2 * n - 2 - 2 * j);
        }
        acc
    })
}

/// Exhaustive minimum of `E(C ρ C†)` over the Clifford group.
///
/// Symplectic parts are split across workers; for each one the sign
/// dependence `η_ℓ = η⁰_ℓ (−1)^{s·v_ℓ}` is evaluated for all sign vectors
/// `s`. Ties resolve to the first tableau in canonical order, regardless of
/// how work was partitioned.
pub fn clifford_min_energy_exact<S: QuantumState + ?Sized>(
    state: &S,
    h: &PauliOperator,
    allow_three: bool,
) -> Result<OrbitMinimum> {
    let n = state.n_qubits();
    check_same(n, h.n_qubits())?;
    let enumeration = CliffordEnumeration::new(n, allow_three).map_err(|_| Error::ExhaustiveUnavailable(n))?;
    let table = PauliTable::compute(state)?;
    let terms: Vec<(PauliString, f64, u64)> = h.terms().map(|(p, c)| (*p, c, generator_mask(p))).collect();
    let signs = enumeration.signs_len();

    let (energy, index) = (0..enumeration.symplectic_len())
        .into_par_iter()
        .map(|s| {
            let base = enumeration.symplectic(s);
            let contrib: Vec<(f64, u64)> = terms
                .iter()
                .map(|(p, c, v)| {
                    let q = base.conjugate_unchecked(p).expect("enumerated tableau is valid");
                    (c * table.get(&q), *v)
                })
                .collect();
            let mut best = (f64::INFINITY, u64::MAX);
            for k in 0..signs {
                let e: f64 = contrib
                    .iter()
                    .map(|&(w, v)| if (k & v).count_ones() & 1 == 1 { -w } else { w })
                    .sum();
                if e < best.0 {
                    best = (e, s * signs + k);
                }
            }
            best
        })
        .reduce(|| (f64::INFINITY, u64::MAX), pick_min);

    Ok(OrbitMinimum {
        energy,
        tableau: enumeration.get(index),
    })
}

fn pick_min(a: (f64, u64), b: (f64, u64)) -> (f64, u64) {
    match a.0.total_cmp(&b.0) {
        std::cmp::Ordering::Less => a,
        std::cmp::Ordering::Greater => b,
        std::cmp::Ordering::Equal => {
            if a.1 <= b.1 {
                a
            } else {
                b
            }
        }
    }
}

pub fn clifford_ergotropy_exact<S: QuantumState + ?Sized>(
    state: &S,
    h: &PauliOperator,
    allow_three: bool,
) -> Result<CliffordErgotropyResult> {
    let initial_energy = h.energy(state)?;
    let min = clifford_min_energy_exact(state, h, allow_three)?;
    Ok(CliffordErgotropyResult {
        initial_energy,
        orbit_min_energy: min.energy,
        clifford_ergotropy: initial_energy - min.energy,
        optimal_tableau: min.tableau,
        exact: true,
        gap: None,
    })
}

/// Search effort for the heuristic orbit minimization.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct HeuristicBudget {
    pub restarts: usize,
    pub steps: usize,
}

impl HeuristicBudget {
    pub fn new(restarts: usize, steps: usize) -> Self {
        Self { restarts, steps }
    }
}

impl Default for HeuristicBudget {
    fn default() -> Self {
        Self {
            restarts: 50,
            steps: 200,
        }
    }
}

impl std::str::FromStr for HeuristicBudget {
    type Err = Error;

    /// Parses `RESTARTSxSTEPS`, e.g. `50x200`.
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::InvalidArgument(format!("budget {s:?} is not of the form RESTARTSxSTEPS"));
        let (r, st) = s.split_once(['x', 'X']).ok_or_else(bad)?;
        Ok(Self {
            restarts: r.trim().parse().map_err(|_| bad())?,
            steps: st.trim().parse().map_err(|_| bad())?,
        })
    }
}

/// Local moves: every single-qubit action on every site plus CNOT on every
/// ordered pair.
fn local_moves(n: usize) -> Vec<CliffordTableau> {
    let singles = single_qubit_cliffords();
    let mut moves = Vec::with_capacity(24 * n + n * n.saturating_sub(1));
    for q in 0..n {
        for s in &singles {
            moves.push(CliffordTableau::embed_single(n, q, s).expect("qubit in range"));
        }
    }
    for c in 0..n {
        for t in 0..n {
            if c != t {
                moves.push(CliffordTableau::cnot(n, c, t).expect("distinct qubits"));
            }
        }
    }
    moves
}

/// Moves applied at a local minimum before descending again.
const KICK_MOVES: usize = 3;

/// Random restarts of steepest descent over [`local_moves`], composed on
/// either side of the current tableau.
///
/// Restart 0 starts at the identity; restart `r > 0` starts from a uniform
/// random Clifford. Each restart draws from stream `r` of a ChaCha generator
/// seeded with `seed`. A step takes the best strictly improving move (first
/// in move order on ties); at a local minimum the step instead applies
/// [`KICK_MOVES`] random moves and descent resumes. The best tableau seen is
/// kept, so adding restarts or steps never worsens the result.
pub fn clifford_min_energy_heuristic<S: QuantumState + ?Sized>(
    state: &S,
    h: &PauliOperator,
    budget: HeuristicBudget,
    seed: u64,
) -> Result<OrbitMinimum> {
    let n = state.n_qubits();
    check_same(n, h.n_qubits())?;
    if budget.restarts == 0 || budget.steps == 0 {
        return Err(Error::InvalidArgument(
            "heuristic budget must have at least one restart and one step".into(),
        ));
    }
    let table = PauliTable::compute(state)?;
    let terms: Vec<(PauliString, f64)> = h.terms().map(|(p, c)| (*p, c)).collect();
    let moves = local_moves(n);
    let n_moves = moves.len();

    let energy_of =
        |images: &[PauliString]| -> f64 { terms.iter().zip(images).map(|((_, c), q)| c * table.get(q)).sum() };
    let images_of = |t: &CliffordTableau| -> Vec<PauliString> {
        terms
            .iter()
            .map(|(p, _)| t.conjugate_unchecked(p).expect("valid tableau"))
            .collect()
    };
    // move m < n_moves acts after the current tableau, m >= n_moves before it
    let apply = |current: &CliffordTableau, m: usize| -> CliffordTableau {
        if m < n_moves {
            moves[m].compose(current).expect("same size")
        } else {
            current.compose(&moves[m - n_moves]).expect("same size")
        }
    };

    let runs: Vec<(f64, usize, CliffordTableau)> = (0..budget.restarts)
        .into_par_iter()
        .map(|r| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(r as u64);
            let mut current = if r == 0 {
                CliffordTableau::identity(n)
            } else {
                random_clifford(n, &mut rng)
            };
            let mut images = images_of(&current);
            let mut energy = energy_of(&images);
            let mut best = (energy, current.clone());
            for _ in 0..budget.steps {
                let mut step: Option<(f64, usize, Vec<PauliString>)> = None;
                for (m, mv) in moves.iter().enumerate() {
                    let cand: Vec<PauliString> = images
                        .iter()
                        .map(|q| mv.conjugate_unchecked(q).expect("valid move"))
                        .collect();
                    let e = energy_of(&cand);
                    if e < step.as_ref().map_or(energy, |b| b.0) {
                        step = Some((e, m, cand));
                    }
                }
                for (m, mv) in moves.iter().enumerate() {
                    let cand: Vec<PauliString> = terms
                        .iter()
                        .map(|(p, _)| {
                            let inner = mv.conjugate_unchecked(p).expect("valid move");
                            current.conjugate_unchecked(&inner).expect("valid tableau")
                        })
                        .collect();
                    let e = energy_of(&cand);
                    if e < step.as_ref().map_or(energy, |b| b.0) {
                        step = Some((e, n_moves + m, cand));
                    }
                }
                match step {
                    Some((e, m, cand)) => {
                        current = apply(&current, m);
                        images = cand;
                        energy = e;
                    }
                    None => {
                        for _ in 0..KICK_MOVES {
                            current = apply(&current, rng.random_range(0..2 * n_moves));
                        }
                        images = images_of(&current);
                        energy = energy_of(&images);
                    }
                }
                if energy < best.0 {
                    best = (energy, current.clone());
                }
            }
            (best.0, r, best.1)
        })
        .collect();

    let (energy, _, tableau) = runs
        .into_iter()
        .reduce(|a, b| if b.0 < a.0 || (b.0 == a.0 && b.1 < a.1) { b } else { a })
        .expect("at least one restart");
    Ok(OrbitMinimum { energy, tableau })
}

pub fn clifford_ergotropy_heuristic<S: QuantumState + ?Sized>(
    state: &S,
    h: &PauliOperator,
    budget: HeuristicBudget,
    seed: u64,
) -> Result<CliffordErgotropyResult> {
    let initial_energy = h.energy(state)?;
    let min = clifford_min_energy_heuristic(state, h, budget, seed)?;
    Ok(CliffordErgotropyResult {
        initial_energy,
        orbit_min_energy: min.energy,
        clifford_ergotropy: initial_energy - min.energy,
        optimal_tableau: min.tableau,
        exact: false,
        gap: None,
    })
}

/// Exact Clifford ergotropy together with the gap to the full ergotropy.
pub fn clifford_ergotropy_with_gap<S: QuantumState + ?Sized>(
    state: &S,
    h: &PauliOperator,
    allow_three: bool,
) -> Result<CliffordErgotropyResult> {
    let mut res = clifford_ergotropy_exact(state, h, allow_three)?;
    res.gap = Some(ergotropy(state, h)? - res.clifford_ergotropy);
    Ok(res)
}

/// `Δℰ = ℰ − ℰ_Cl` with the exact orbit minimum.
pub fn ergotropy_gap<S: QuantumState + ?Sized>(state: &S, h: &PauliOperator) -> Result<f64> {
    Ok(clifford_ergotropy_with_gap(state, h, false)?.gap.expect("gap computed"))
}
