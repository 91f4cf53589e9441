//! Model Hamiltonians, closed-form Clifford ergotropies and product-state
//! gap bounds for Ising chains.

use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_4, PI, SQRT_2};

use num_complex::Complex64;

use crate::bounds::bloch_r1;
use crate::ergotropy::{ground_energy, DENSE_LIMIT};
use crate::error::{Error, Result};
use crate::operator::PauliOperator;
use crate::pauli::{check_same, Pauli, PauliString};
use crate::spectrum::pauli_spectrum;
use crate::state::{PureState, QuantumState};

/// Parameters of `H = −Z₁Z₂ + g(X₁+X₂) + h(Z₁+Z₂)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitParams {
    pub g: f64,
    pub h: f64,
}

impl TwoQubitParams {
    pub fn new(g: f64, h: f64) -> Self {
        Self { g, h }
    }

    pub fn s(&self) -> f64 {
        self.g.abs() + self.h.abs()
    }

    pub fn hamiltonian(&self) -> PauliOperator {
        hamiltonian_2q(self.g, self.h)
    }
}

fn word(s: &str) -> PauliString {
    s.parse().expect("static Pauli word")
}

pub fn hamiltonian_2q(g: f64, h: f64) -> PauliOperator {
    PauliOperator::from_terms(
        2,
        [
            (word("ZZ"), -1.0),
            (word("XI"), g),
            (word("IX"), g),
            (word("ZI"), h),
            (word("IZ"), h),
        ],
    )
    .expect("two-qubit terms")
}

/// `−min_C E(C|TT⟩)` for [`hamiltonian_2q`]: the two optimal branches meet
/// at `s = |g| + |h| = 1`.
pub fn orbit_branch_2q(g: f64, h: f64) -> f64 {
    let s = g.abs() + h.abs();
    if s <= 1.0 {
        FRAC_1_SQRT_2 + (FRAC_1_SQRT_2 + 0.5) * s
    } else {
        0.5 + SQRT_2 * s
    }
}

/// Clifford ergotropy of `|TT⟩` under [`hamiltonian_2q`].
pub fn clifford_ergotropy_2q_analytic(g: f64, h: f64) -> f64 {
    SQRT_2 * g + orbit_branch_2q(g, h)
}

/// Clifford ergotropy of a qubit with Bloch vector `bloch` under `H = h Z`.
pub fn clifford_ergotropy_1q(bloch: [f64; 3], field: f64) -> Result<f64> {
    Ok(field * (bloch[2] + bloch_r1(bloch)?))
}

fn check_chain(n: usize) -> Result<()> {
    if n < 2 || n > crate::pauli::MAX_QUBITS {
        return Err(Error::InvalidQubitCount(n));
    }
    Ok(())
}

fn bond(n: usize, j: usize) -> PauliString {
    let a = PauliString::single(n, j, Pauli::Z).expect("site in range");
    let b = PauliString::single(n, (j + 1) % n, Pauli::Z).expect("site in range");
    PauliString::new(n, 0, a.z_mask() ^ b.z_mask(), false).expect("valid masks")
}

/// Periodic chain `−Σ_j Z_j Z_{j+1} + onsite Σ_j P_j`. For `n = 2` both bonds
/// act on the same pair and add up to `−2 Z₁Z₂`.
fn chain(n: usize, onsite: Pauli, field: f64) -> Result<PauliOperator> {
    check_chain(n)?;
    let mut op = PauliOperator::new(n)?;
    for j in 0..n {
        op.add_term(bond(n, j), -1.0)?;
        op.add_term(PauliString::single(n, j, onsite)?, field)?;
    }
    Ok(op)
}

/// `−Σ_j Z_j Z_{j+1} + h Σ_j Z_j`, periodic.
pub fn hamiltonian_classical_ising(n: usize, h: f64) -> Result<PauliOperator> {
    chain(n, Pauli::Z, h)
}

/// `−Σ_j Z_j Z_{j+1} + g Σ_j X_j`, periodic. The spectrum depends on `|g|` only.
pub fn hamiltonian_tfim(n: usize, g: f64) -> Result<PauliOperator> {
    chain(n, Pauli::X, g)
}

/// Complete elliptic integral of the second kind with modulus `x`,
/// `∫₀^{π/2} √(1 − x² sin²k) dk`, from the arithmetic-geometric mean.
pub fn elliptic_e(x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(Error::InvalidArgument(format!("elliptic modulus {x} outside [0, 1]")));
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    let mut a = 1.0f64;
    let mut b = ((1.0 - x) * (1.0 + x)).sqrt();
    let mut c = x;
    let mut weight = 0.5;
    let mut sum = weight * c * c;
    for _ in 0..64 {
        if c.abs() <= f64::EPSILON * a {
            break;
        }
        let an = 0.5 * (a + b);
        c = 0.5 * (a - b);
        b = (a * b).sqrt();
        a = an;
        weight *= 2.0;
        sum += weight * c * c;
    }
    Ok(FRAC_PI_2 / a * (1.0 - sum))
}

/// Large-N ground energy per site of the transverse-field Ising chain.
pub fn tfim_ground_energy_asymptotic(g: f64) -> f64 {
    let g = g.abs();
    let x = 2.0 * g.sqrt() / (1.0 + g);
    -(1.0 + g) * (2.0 / PI) * elliptic_e(x.min(1.0)).expect("modulus in range")
}

/// Ground energy together with how it was obtained.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GroundEnergy {
    pub value: f64,
    /// True for the large-N elliptic formula, false for exact values.
    pub asymptotic: bool,
}

impl GroundEnergy {
    pub fn exact(value: f64) -> Self {
        Self {
            value,
            asymptotic: false,
        }
    }
}

/// Total TFIM ground energy: exact up to [`DENSE_LIMIT`] sites, the
/// asymptotic formula times `n` beyond.
pub fn tfim_ground_energy(n: usize, g: f64) -> Result<GroundEnergy> {
    check_chain(n)?;
    if n <= DENSE_LIMIT {
        Ok(GroundEnergy::exact(ground_energy(&hamiltonian_tfim(n, g)?)?))
    } else {
        Ok(GroundEnergy {
            value: n as f64 * tfim_ground_energy_asymptotic(g),
            asymptotic: true,
        })
    }
}

/// The ferromagnetic chain is ground when all spins follow the field.
pub fn classical_ising_ground_energy(n: usize, h: f64) -> Result<GroundEnergy> {
    check_chain(n)?;
    Ok(GroundEnergy::exact(-(n as f64) * (1.0 + h.abs())))
}

/// Positive `g` where the TFIM product-state gap bound changes sign, from
/// bisection on `[0.1, 1]` and `[1, 3]`.
pub fn tfim_bound_crossings() -> (f64, f64) {
    let f = |g: f64| -tfim_ground_energy_asymptotic(g) / (1.0 + g) - FRAC_1_SQRT_2;
    let bisect = |mut lo: f64, mut hi: f64| {
        let flo = f(lo);
        while hi - lo > 1e-12 {
            let mid = 0.5 * (lo + hi);
            if (f(mid) > 0.0) == (flo > 0.0) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    };
    (bisect(0.1, 1.0), bisect(1.0, 3.0))
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProductBoundReport {
    pub n_sites: usize,
    /// `max_j r_{j1}`, the global `r₁` of the product state.
    pub max_r1_site: f64,
    pub ground_energy: GroundEnergy,
    pub l1_norm: f64,
    /// `Σ_ℓ r_ℓ h_ℓ` with the global spectrum assembled from the sites.
    pub rh: f64,
    /// `−ε_G − r₁‖H‖₁`.
    pub gap_lower_bound: f64,
    /// `−ε_G − r·h`, never weaker than the Hölder form.
    pub gap_lower_bound_rh: f64,
}

/// Largest `k` products `Π_j c_j` over choices with at least one non-identity
/// site, where each site offers `1` (identity) or one of its coefficients.
pub fn product_top_k(site_spectra: &[Vec<f64>], k: usize) -> Vec<f64> {
    let keep = k + 1;
    let mut acc = vec![1.0f64];
    for site in site_spectra {
        let mut next: Vec<f64> = acc
            .iter()
            .flat_map(|a| std::iter::once(1.0).chain(site.iter().copied()).map(move |c| a * c))
            .collect();
        next.sort_by(|a, b| b.total_cmp(a));
        next.truncate(keep);
        acc = next;
    }
    // the all-identity product equals 1 and so always heads the list
    acc.remove(0);
    acc.truncate(k);
    acc
}

/// Per-site spectrum of a single-qubit pure state.
pub fn site_spectrum(site: &PureState) -> Result<Vec<f64>> {
    check_same(1, site.n_qubits())?;
    Ok(pauli_spectrum(site)?.r().to_vec())
}

/// Lower bounds on the ergotropy gap of a pure product state.
pub fn product_state_gap_bound(
    site_spectra: &[Vec<f64>],
    h: &PauliOperator,
    ground_energy: GroundEnergy,
) -> Result<ProductBoundReport> {
    let n = site_spectra.len();
    check_same(h.n_qubits(), n)?;
    for (j, s) in site_spectra.iter().enumerate() {
        let sorted = s.windows(2).all(|w| w[0] >= w[1]);
        if s.len() > 3 || !sorted || s.iter().any(|v| !(0.0..=1.0 + 1e-12).contains(v)) {
            return Err(Error::InvalidArgument(format!(
                "site {j} spectrum is not a nonincreasing list in [0,1]"
            )));
        }
    }
    let max_r1_site = site_spectra
        .iter()
        .map(|s| s.first().copied().unwrap_or(0.0))
        .fold(0.0, f64::max);
    let coeffs = h.sorted_abs_coefficients();
    let rh = crate::bounds::rearrangement_dot(&product_top_k(site_spectra, coeffs.len()), &coeffs);
    let l1 = h.l1_norm();
    Ok(ProductBoundReport {
        n_sites: n,
        max_r1_site,
        ground_energy,
        l1_norm: l1,
        rh,
        gap_lower_bound: -ground_energy.value - max_r1_site * l1,
        gap_lower_bound_rh: -ground_energy.value - rh,
    })
}

/// `|T⟩ = (|0⟩ + e^{iπ/4}|1⟩)/√2`.
pub fn t_state() -> PureState {
    let a = FRAC_1_SQRT_2;
    PureState::normalized(vec![Complex64::new(a, 0.0), Complex64::from_polar(a, FRAC_PI_4)]).expect("nonzero")
}

pub fn tt_state() -> PureState {
    t_state().tensor(&t_state())
}

/// `|T⟩^{⊗n}`.
pub fn t_product(n: usize) -> Result<PureState> {
    if n == 0 || n > 24 {
        return Err(Error::InvalidQubitCount(n));
    }
    Ok((1..n).fold(t_state(), |acc, _| acc.tensor(&t_state())))
}
