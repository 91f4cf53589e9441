//! Pure states and density matrices.

use std::fmt::Write as _;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::{eigvalsh, CMatrix};
use crate::pauli::{check_same, PauliString, MAX_QUBITS};

const NORM_TOL: f64 = 1e-12;
const HERMITIAN_TOL: f64 = 1e-12;
const TRACE_TOL: f64 = 1e-12;
const POSITIVITY_TOL: f64 = 1e-10;
const PURITY_TOL: f64 = 1e-9;

/// Anything with a well-defined Pauli expansion.
pub trait QuantumState: Sync {
    fn n_qubits(&self) -> usize;

    fn dim(&self) -> usize {
        1 << self.n_qubits()
    }

    /// Fills `out[c] = ρ_{c, c ^ x}`. Every Pauli coefficient with X-part `x`
    /// is a signed sum over this vector.
    fn shifted_diagonal(&self, x: usize, out: &mut [Complex64]);

    fn purity(&self) -> f64;

    fn is_pure(&self) -> bool {
        (self.purity() - 1.0).abs() <= PURITY_TOL
    }

    fn density_matrix(&self) -> DensityMatrix;
}

#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    n: usize,
    amps: Vec<Complex64>,
}

impl PureState {
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = qubits_for_len(amplitudes.len())?;
        let norm2: f64 = amplitudes.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > NORM_TOL {
            return Err(Error::NotNormalized(norm2));
        }
        Ok(Self { n, amps: amplitudes })
    }

    /// Rescales to unit norm. Fails only on a zero vector or a bad length.
    pub fn normalized(mut amplitudes: Vec<Complex64>) -> Result<Self> {
        let n = qubits_for_len(amplitudes.len())?;
        let norm = amplitudes.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        if norm == 0.0 || !norm.is_finite() {
            return Err(Error::NotNormalized(norm * norm));
        }
        amplitudes.iter_mut().for_each(|a| *a /= norm);
        Ok(Self { n, amps: amplitudes })
    }

    pub fn basis(n_qubits: usize, index: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > 30 || index >= (1 << n_qubits) {
            return Err(Error::InvalidArgument(format!(
                "basis state {index} on {n_qubits} qubits"
            )));
        }
        let mut amps = vec![Complex64::new(0.0, 0.0); 1 << n_qubits];
        amps[index] = Complex64::new(1.0, 0.0);
        Ok(Self { n: n_qubits, amps })
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amps
    }

    pub fn tensor(&self, other: &PureState) -> PureState {
        let mut amps = Vec::with_capacity(self.amps.len() * other.amps.len());
        for a in &self.amps {
            for b in &other.amps {
                amps.push(a * b);
            }
        }
        PureState {
            n: self.n + other.n,
            amps,
        }
    }

    pub fn inner(&self, other: &PureState) -> Result<Complex64> {
        check_same(self.n, other.n)?;
        Ok(self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum())
    }

    /// `P|ψ⟩`.
    pub fn apply_pauli(&self, p: &PauliString) -> Result<PureState> {
        check_same(self.n, p.n_qubits())?;
        Ok(PureState {
            n: self.n,
            amps: p.apply_amplitudes(&self.amps),
        })
    }

    /// `U|ψ⟩` for a dense unitary.
    pub fn apply_unitary(&self, u: &CMatrix) -> Result<PureState> {
        check_same(self.dim(), u.dim())?;
        PureState::normalized(u.matvec(&self.amps))
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for a in &self.amps {
            let _ = writeln!(s, "{:.17e} {:.17e}", a.re, a.im);
        }
        s
    }

    /// Parses one `<re> <im>` pair per line, `2^N` lines in basis-index
    /// order. `#` starts a comment. Inputs within 1e-6 of unit norm are
    /// renormalized; anything further off is rejected.
    pub fn from_text(text: &str) -> Result<PureState> {
        let mut amps = Vec::new();
        let mut last_line = 0;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            last_line = i + 1;
            let mut parts = line.split_whitespace();
            let parse = |tok: Option<&str>, what: &str| -> Result<f64> {
                let tok = tok.ok_or_else(|| Error::Parse {
                    line: i + 1,
                    msg: format!("missing {what} part"),
                })?;
                tok.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| Error::Parse {
                        line: i + 1,
                        msg: format!("bad {what} part {tok:?}"),
                    })
            };
            let re = parse(parts.next(), "real")?;
            let im = parse(parts.next(), "imaginary")?;
            if parts.next().is_some() {
                return Err(Error::Parse {
                    line: i + 1,
                    msg: "expected exactly two numbers".into(),
                });
            }
            amps.push(Complex64::new(re, im));
        }
        if amps.is_empty() || !amps.len().is_power_of_two() || amps.len() < 2 {
            return Err(Error::Parse {
                line: last_line,
                msg: format!("amplitude count {} is not 2^N with N >= 1", amps.len()),
            });
        }
        let norm2: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > 1e-6 {
            return Err(Error::Parse {
                line: last_line,
                msg: format!("state norm^2 = {norm2}, expected 1"),
            });
        }
        PureState::normalized(amps)
    }
}

impl QuantumState for PureState {
    fn n_qubits(&self) -> usize {
        self.n
    }

    fn shifted_diagonal(&self, x: usize, out: &mut [Complex64]) {
        for (c, o) in out.iter_mut().enumerate() {
            *o = self.amps[c] * self.amps[c ^ x].conj();
        }
    }

    fn purity(&self) -> f64 {
        1.0
    }

    fn density_matrix(&self) -> DensityMatrix {
        DensityMatrix {
            n: self.n,
            matrix: CMatrix::outer(&self.amps),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix {
    n: usize,
    matrix: CMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: CMatrix) -> Result<Self> {
        let n = qubits_for_len(matrix.dim())?;
        let dev = matrix.hermitian_deviation();
        if dev > HERMITIAN_TOL {
            return Err(Error::NotHermitian(dev));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > TRACE_TOL || tr.im.abs() > TRACE_TOL {
            return Err(Error::BadTrace(tr.re));
        }
        let min_eig = eigvalsh(&matrix)?.first().copied().unwrap_or(0.0);
        if min_eig < -POSITIVITY_TOL {
            return Err(Error::NotPositive(min_eig));
        }
        Ok(Self { n, matrix })
    }

    pub fn maximally_mixed(n_qubits: usize) -> Result<Self> {
        qubits_for_len(1usize << n_qubits.min(30))?;
        let d = 1usize << n_qubits;
        Ok(Self {
            n: n_qubits,
            matrix: CMatrix::from_real_diagonal(&vec![1.0 / d as f64; d]),
        })
    }

    /// Single-qubit state `(I + r·σ)/2`.
    pub fn from_bloch(bloch: [f64; 3]) -> Result<Self> {
        let len = bloch.iter().map(|v| v * v).sum::<f64>().sqrt();
        if len > 1.0 + 1e-10 || !len.is_finite() {
            return Err(Error::UnphysicalBloch(len));
        }
        let [x, y, z] = bloch;
        let m = CMatrix::from_row_major(
            2,
            vec![
                Complex64::new((1.0 + z) / 2.0, 0.0),
                Complex64::new(x / 2.0, -y / 2.0),
                Complex64::new(x / 2.0, y / 2.0),
                Complex64::new((1.0 - z) / 2.0, 0.0),
            ],
        )?;
        Ok(Self { n: 1, matrix: m })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    /// Probabilities sorted in nonincreasing order.
    pub fn populations(&self) -> Result<Vec<f64>> {
        let mut p = eigvalsh(&self.matrix)?;
        p.reverse();
        Ok(p)
    }

    /// `U ρ U†`.
    pub fn conjugated(&self, u: &CMatrix) -> Result<Self> {
        check_same(self.matrix.dim(), u.dim())?;
        Ok(Self {
            n: self.n,
            matrix: self.matrix.conjugate_by(u),
        })
    }
}

impl QuantumState for DensityMatrix {
    fn n_qubits(&self) -> usize {
        self.n
    }

    fn shifted_diagonal(&self, x: usize, out: &mut [Complex64]) {
        for (c, o) in out.iter_mut().enumerate() {
            *o = self.matrix[(c, c ^ x)];
        }
    }

    fn purity(&self) -> f64 {
        self.matrix.trace_product(&self.matrix).re
    }

    fn density_matrix(&self) -> DensityMatrix {
        self.clone()
    }
}

impl From<&PureState> for DensityMatrix {
    fn from(s: &PureState) -> Self {
        s.density_matrix()
    }
}

fn qubits_for_len(len: usize) -> Result<usize> {
    if len < 2 || !len.is_power_of_two() {
        return Err(Error::InvalidArgument(format!(
            "dimension {len} is not 2^N with N >= 1"
        )));
    }
    let n = len.trailing_zeros() as usize;
    if n > MAX_QUBITS {
        return Err(Error::InvalidQubitCount(n));
    }
    Ok(n)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn pauli_action_on_basis_states() {
        let zero = PureState::basis(1, 0).unwrap();
        let one = PureState::basis(1, 1).unwrap();
        let x: PauliString = "X".parse().unwrap();
        let y: PauliString = "Y".parse().unwrap();
        let z: PauliString = "Z".parse().unwrap();
        assert_eq!(zero.apply_pauli(&x).unwrap(), one);
        assert_eq!(one.apply_pauli(&z).unwrap().amplitudes(), &[c(0.0, 0.0), c(-1.0, 0.0)]);
        assert_eq!(zero.apply_pauli(&y).unwrap().amplitudes(), &[c(0.0, 0.0), c(0.0, 1.0)]);
        assert!(zero.apply_pauli(&"XX".parse().unwrap()).is_err());
    }

    #[test]
    fn pauli_application_is_involutive() {
        let psi = PureState::normalized(vec![c(0.1, 0.2), c(-0.3, 0.4), c(0.5, 0.0), c(0.2, -0.7)]).unwrap();
        for p in crate::pauli::all_nonidentity(2) {
            let twice = psi.apply_pauli(&p).unwrap().apply_pauli(&p).unwrap();
            for (a, b) in twice.amplitudes().iter().zip(psi.amplitudes()) {
                assert!((a - b).norm() < 1e-15);
            }
        }
    }

    #[test]
    fn qubit_zero_is_most_significant() {
        // X on qubit 0 of |00⟩ gives |10⟩ = basis index 2
        let s = PureState::basis(2, 0).unwrap();
        let out = s.apply_pauli(&"XI".parse().unwrap()).unwrap();
        assert_eq!(out, PureState::basis(2, 2).unwrap());
    }

    #[test]
    fn validation() {
        assert!(matches!(
            PureState::new(vec![c(1.0, 0.0), c(1.0, 0.0)]),
            Err(Error::NotNormalized(_))
        ));
        assert!(PureState::new(vec![c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]).is_err());
        assert!(matches!(
            DensityMatrix::from_bloch([1.0, 1.0, 0.0]),
            Err(Error::UnphysicalBloch(_))
        ));
        let bad = CMatrix::from_real_diagonal(&[1.5, -0.5]);
        assert!(matches!(DensityMatrix::new(bad), Err(Error::NotPositive(_))));
        let bad_trace = CMatrix::from_real_diagonal(&[0.5, 0.4]);
        assert!(matches!(DensityMatrix::new(bad_trace), Err(Error::BadTrace(_))));
    }

    #[test]
    fn text_round_trip_and_errors() {
        let psi = PureState::normalized(vec![c(0.6, 0.0), c(0.0, 0.8)]).unwrap();
        let back = PureState::from_text(&psi.to_text()).unwrap();
        assert!((back.inner(&psi).unwrap().norm() - 1.0).abs() < 1e-15);

        let err = PureState::from_text("# header\n1 0\n0 x\n").unwrap_err();
        assert_eq!(
            err,
            Error::Parse {
                line: 3,
                msg: "bad imaginary part \"x\"".into()
            }
        );
        assert!(PureState::from_text("1 0\n0 0\n0 0\n").is_err());
        assert!(PureState::from_text("1 0\n1 0\n").is_err());
    }

    #[test]
    fn purity() {
        let mixed = DensityMatrix::maximally_mixed(2).unwrap();
        assert!((mixed.purity() - 0.25).abs() < 1e-15);
        assert!(!mixed.is_pure());
        let pure = PureState::basis(2, 3).unwrap().density_matrix();
        assert!(pure.is_pure());
    }
}
