//! Upper bounds on Clifford ergotropy and the magic measures behind them.
//!
//! Relaxing the commutation-preserving permutation of Pauli coefficients to
//! an arbitrary one gives the rearrangement bound `E + r·h`. Hölder turns
//! that into `E + r₁‖H‖₁`, and for pure states `r₁ = e^{−M_∞/2}`.

use crate::error::{Error, Result};
use crate::operator::PauliOperator;
use crate::pauli::check_same;
use crate::spectrum::{pauli_spectrum, PauliSpectrum};
use crate::state::QuantumState;

const NORMALIZATION_TOL: f64 = 1e-9;

/// `Σ_ℓ r_ℓ h_ℓ` for two nonincreasing lists; the shorter is zero-padded.
pub fn rearrangement_dot(r: &[f64], h: &[f64]) -> f64 {
    r.iter().zip(h).map(|(a, b)| a * b).sum()
}

pub fn l1_norm(h: &PauliOperator) -> f64 {
    h.l1_norm()
}

/// `E(ρ) + r·h`.
pub fn rearrangement_bound<S: QuantumState + ?Sized>(state: &S, h: &PauliOperator) -> Result<f64> {
    check_same(state.n_qubits(), h.n_qubits())?;
    let spec = pauli_spectrum(state)?;
    Ok(h.energy(state)? + rearrangement_dot(spec.r(), &h.sorted_abs_coefficients()))
}

/// `E(ρ) + r₁‖H‖₁`.
pub fn holder_bound<S: QuantumState + ?Sized>(state: &S, h: &PauliOperator) -> Result<f64> {
    check_same(state.n_qubits(), h.n_qubits())?;
    let spec = pauli_spectrum(state)?;
    Ok(h.energy(state)? + spec.r1() * h.l1_norm())
}

fn pure_spectrum<S: QuantumState + ?Sized>(state: &S) -> Result<PauliSpectrum> {
    let purity = state.purity();
    if !state.is_pure() {
        return Err(Error::MixedState(purity));
    }
    let spec = pauli_spectrum(state)?;
    let d = state.dim() as f64;
    let norm = spec.sum_squares() / (d - 1.0);
    if (norm - 1.0).abs() > NORMALIZATION_TOL {
        return Err(Error::MixedState(purity));
    }
    Ok(spec)
}

fn sre_from_spectrum(spec: &PauliSpectrum, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0) || alpha == 1.0 || !alpha.is_finite() {
        return Err(Error::InvalidArgument(format!(
            "Renyi order must be positive, finite and != 1, got {alpha}"
        )));
    }
    let d = (1u64 << spec.n_qubits()) as f64;
    let sum: f64 = spec.r().iter().filter(|&&v| v > 0.0).map(|v| v.powf(2.0 * alpha)).sum();
    let m = (sum / (d - 1.0)).ln() / (1.0 - alpha);
    Ok(clamp_zero(m))
}

fn m_inf_from_r1(r1: f64) -> Result<f64> {
    if r1 <= 0.0 {
        return Err(Error::InvalidArgument("largest Pauli coefficient is zero".into()));
    }
    Ok(clamp_zero(-(r1 * r1).ln()))
}

/// Roundoff can push a zero entropy slightly negative.
fn clamp_zero(v: f64) -> f64 {
    if v < 0.0 && v > -1e-12 {
        0.0
    } else {
        v
    }
}

/// Filtered stabilizer Rényi entropy `M_α` of a pure state.
pub fn filtered_sre<S: QuantumState + ?Sized>(state: &S, alpha: f64) -> Result<f64> {
    sre_from_spectrum(&pure_spectrum(state)?, alpha)
}

/// `M_∞ = −ln r₁²`.
pub fn m_infinity<S: QuantumState + ?Sized>(state: &S) -> Result<f64> {
    m_inf_from_r1(pure_spectrum(state)?.r1())
}

/// `E(ρ) + e^{−M_∞/2}‖H‖₁`, pure states only.
pub fn sre_bound<S: QuantumState + ?Sized>(state: &S, h: &PauliOperator) -> Result<f64> {
    check_same(state.n_qubits(), h.n_qubits())?;
    let m = m_infinity(state)?;
    Ok(h.energy(state)? + (-m / 2.0).exp() * h.l1_norm())
}

/// Orders reported alongside every bound; `None` stands for `α = ∞`.
pub const SRE_ORDERS: [Option<f64>; 4] = [Some(0.5), Some(2.0), Some(3.0), None];

/// `(α, M_α)` over [`SRE_ORDERS`].
pub fn filtered_sre_grid<S: QuantumState + ?Sized>(state: &S) -> Result<Vec<(Option<f64>, f64)>> {
    let spec = pure_spectrum(state)?;
    SRE_ORDERS
        .iter()
        .map(|a| {
            Ok((
                *a,
                a.map_or_else(|| m_inf_from_r1(spec.r1()), |a| sre_from_spectrum(&spec, a))?,
            ))
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq)]
pub struct BoundReport {
    pub initial_energy: f64,
    pub bound_rearrangement: f64,
    pub bound_holder: f64,
    /// Pure states only.
    pub bound_sre: Option<f64>,
    pub l1_norm: f64,
    pub r1: f64,
    /// Pure states only.
    pub m_infinity: Option<f64>,
    /// `r·h`, which also gives the pure-state gap lower bound `−ε_G − r·h`.
    pub rh: f64,
    pub clifford_ergotropy: Option<f64>,
    pub clifford_exact: bool,
}

impl BoundReport {
    /// Attaches an exact or heuristic Clifford ergotropy for sandwiching.
    pub fn with_clifford(mut self, value: f64, exact: bool) -> Self {
        self.clifford_ergotropy = Some(value);
        self.clifford_exact = exact;
        self
    }
}

/// All bounds from a single spectrum computation.
pub fn bound_report<S: QuantumState + ?Sized>(state: &S, h: &PauliOperator) -> Result<BoundReport> {
    check_same(state.n_qubits(), h.n_qubits())?;
    let spec = pauli_spectrum(state)?;
    let e = h.energy(state)?;
    let l1 = h.l1_norm();
    let rh = rearrangement_dot(spec.r(), &h.sorted_abs_coefficients());
    let pure = state.is_pure();
    let m_infinity = if pure { Some(m_inf_from_r1(spec.r1())?) } else { None };
    Ok(BoundReport {
        initial_energy: e,
        bound_rearrangement: e + rh,
        bound_holder: e + spec.r1() * l1,
        bound_sre: m_infinity.map(|m| e + (-m / 2.0).exp() * l1),
        l1_norm: l1,
        r1: spec.r1(),
        m_infinity,
        rh,
        clifford_ergotropy: None,
        clifford_exact: false,
    })
}

fn bloch_len(bloch: [f64; 3]) -> Result<f64> {
    let len = bloch.iter().map(|v| v * v).sum::<f64>().sqrt();
    if !len.is_finite() || len > 1.0 + 1e-10 {
        return Err(Error::UnphysicalBloch(len));
    }
    Ok(len)
}

/// `max(|ρx|, |ρy|, |ρz|)`.
pub fn bloch_r1(bloch: [f64; 3]) -> Result<f64> {
    bloch_len(bloch)?;
    Ok(bloch.iter().fold(0.0f64, |m, v| m.max(v.abs())))
}

/// Single-qubit stabilizer fidelity `(1 + r₁)/2`.
pub fn stabilizer_fidelity_1q(bloch: [f64; 3]) -> Result<f64> {
    Ok((1.0 + bloch_r1(bloch)?) / 2.0)
}

/// Min-relative entropy of magic `−ln F_STAB`.
pub fn min_relative_entropy_1q(bloch: [f64; 3]) -> Result<f64> {
    Ok(-stabilizer_fidelity_1q(bloch)?.ln())
}

/// Ergotropy gap for `H = h Z` written through the stabilizer fidelity:
/// `h(1 + |ρ| − 2F_STAB)`, which is `2h(1 − F_STAB)` for pure states.
pub fn gap_from_fidelity_1q(bloch: [f64; 3], field: f64) -> Result<f64> {
    let len = bloch_len(bloch)?;
    Ok(field * (1.0 + len - 2.0 * stabilizer_fidelity_1q(bloch)?))
}
