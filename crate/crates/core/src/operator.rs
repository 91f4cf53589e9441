//! Sparse Hermitian observables `H = Σ_μ H_μ P_μ` with the identity removed.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use log::warn;
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;
use crate::pauli::{all_nonidentity, check_same, PauliString, MAX_QUBITS};
use crate::spectrum::pauli_expectation;
use crate::state::QuantumState;

const COEFF_CUTOFF: f64 = 1e-12;
const IDENTITY_WARN: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct PauliOperator {
    n: usize,
    terms: BTreeMap<PauliString, f64>,
}

impl PauliOperator {
    pub fn new(n_qubits: usize) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::InvalidQubitCount(n_qubits));
        }
        Ok(Self {
            n: n_qubits,
            terms: BTreeMap::new(),
        })
    }

    /// Builds from `(string, coefficient)` pairs. Signs on strings are folded
    /// into coefficients, repeated labels are summed, identity terms are
    /// dropped and zero coefficients are not stored.
    pub fn from_terms<I>(n_qubits: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (PauliString, f64)>,
    {
        let mut op = Self::new(n_qubits)?;
        for (p, c) in terms {
            op.add_term(p, c)?;
        }
        Ok(op)
    }

    pub fn add_term(&mut self, p: PauliString, coeff: f64) -> Result<()> {
        check_same(self.n, p.n_qubits())?;
        if !coeff.is_finite() {
            return Err(Error::InvalidArgument(format!("non-finite coefficient for {p}")));
        }
        if p.is_identity() {
            if coeff.abs() > IDENTITY_WARN {
                warn!("dropping identity term {coeff} (constants do not affect ergotropy)");
            }
            return Ok(());
        }
        let label = p.label();
        let entry = self.terms.entry(label).or_insert(0.0);
        *entry += p.sign() * coeff;
        if *entry == 0.0 {
            self.terms.remove(&label);
        }
        Ok(())
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    /// Number of nonzero coefficients `K`.
    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&PauliString, f64)> + '_ {
        self.terms.iter().map(|(p, c)| (p, *c))
    }

    pub fn coefficient(&self, p: &PauliString) -> f64 {
        self.terms.get(&p.label()).map_or(0.0, |c| p.sign() * c)
    }

    /// `‖H‖₁ = Σ |H_μ|`.
    pub fn l1_norm(&self) -> f64 {
        self.terms.values().map(|c| c.abs()).sum()
    }

    /// Absolute coefficients in nonincreasing order.
    pub fn sorted_abs_coefficients(&self) -> Vec<f64> {
        let mut h: Vec<f64> = self.terms.values().map(|c| c.abs()).collect();
        h.sort_by(|a, b| b.total_cmp(a));
        h
    }

    /// `-H`, for maximizing energy through the same minimization routines.
    pub fn negated(&self) -> Self {
        Self {
            n: self.n,
            terms: self.terms.iter().map(|(p, c)| (*p, -c)).collect(),
        }
    }

    /// Expands a dense Hermitian matrix: `H_μ = Tr[H P_μ] / d`.
    pub fn from_dense(h: &CMatrix) -> Result<Self> {
        let d = h.dim();
        if d < 2 || !d.is_power_of_two() {
            return Err(Error::InvalidArgument(format!("dimension {d} is not 2^N")));
        }
        let dev = h.hermitian_deviation();
        if dev > 1e-10 {
            return Err(Error::NotHermitian(dev));
        }
        let n = d.trailing_zeros() as usize;
        let tr = h.trace().re;
        if tr.abs() > IDENTITY_WARN {
            warn!("stripping identity component Tr[H]/d = {}", tr / d as f64);
        }
        let mut op = Self::new(n)?;
        for p in all_nonidentity(n) {
            let c = h.trace_product(&p.to_dense()).re / d as f64;
            if c.abs() > COEFF_CUTOFF {
                op.terms.insert(p, c);
            }
        }
        Ok(op)
    }

    pub fn to_dense(&self) -> CMatrix {
        let d = 1usize << self.n;
        let mut m = CMatrix::zeros(d);
        for (p, c) in &self.terms {
            let phase = p.matrix_phase() * *c;
            for b in 0..d {
                let parity = (b as u64 & p.z_mask()).count_ones() & 1;
                let v = if parity == 1 { -phase } else { phase };
                m[(b ^ p.x_mask() as usize, b)] += v;
            }
        }
        m
    }

    /// `H|ψ⟩` on raw amplitudes without forming the dense matrix.
    pub fn apply(&self, amps: &[Complex64]) -> Result<Vec<Complex64>> {
        check_same(1usize << self.n, amps.len())?;
        let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
        for (p, c) in &self.terms {
            let phase = p.matrix_phase() * *c;
            let (x, z) = (p.x_mask() as usize, p.z_mask() as usize);
            for (b, a) in amps.iter().enumerate() {
                let v = if (b & z).count_ones() & 1 == 1 { -phase } else { phase };
                out[b ^ x] += v * a;
            }
        }
        Ok(out)
    }

    /// `Tr[ρ H] = Σ_μ H_μ ρ_μ`.
    pub fn energy<S: QuantumState + ?Sized>(&self, state: &S) -> Result<f64> {
        check_same(self.n, state.n_qubits())?;
        self.terms
            .iter()
            .try_fold(0.0, |acc, (p, c)| Ok(acc + c * pauli_expectation(state, p)?))
    }

    /// One `<coefficient> <pauli-word>` per line; `#` comments.
    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for (p, c) in &self.terms {
            let _ = writeln!(s, "{c:.17e} {p}");
        }
        s
    }

    /// Parses the line format written by [`PauliOperator::to_text`]. The qubit
    /// count comes from the first word; an identity word is accepted and
    /// stripped.
    pub fn from_text(text: &str) -> Result<Self> {
        let mut op: Option<Self> = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let mut parts = line.split_whitespace();
            let (Some(coeff), Some(word), None) = (parts.next(), parts.next(), parts.next()) else {
                return Err(Error::Parse {
                    line: line_no,
                    msg: "expected `<coefficient> <pauli-word>`".into(),
                });
            };
            let coeff: f64 = coeff
                .parse()
                .ok()
                .filter(|c: &f64| c.is_finite())
                .ok_or_else(|| Error::Parse {
                    line: line_no,
                    msg: format!("bad coefficient {coeff:?}"),
                })?;
            let p: PauliString = word.parse().map_err(|_| Error::Parse {
                line: line_no,
                msg: format!("bad Pauli word {word:?}"),
            })?;
            let op = match &mut op {
                Some(op) => op,
                None => op.insert(Self::new(p.n_qubits())?),
            };
            op.add_term(p, coeff).map_err(|e| Error::Parse {
                line: line_no,
                msg: e.to_string(),
            })?;
        }
        op.ok_or(Error::Parse {
            line: 0,
            msg: "no terms found".into(),
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::PureState;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn dense_expansion_examples() {
        let z = CMatrix::from_real_diagonal(&[1.0, -1.0]);
        let op = PauliOperator::from_dense(&z).unwrap();
        assert_eq!(op.len(), 1);
        assert_eq!(op.coefficient(&p("Z")), 1.0);

        let zero = PauliOperator::from_dense(&CMatrix::zeros(4)).unwrap();
        assert!(zero.is_empty());

        let ising = PauliOperator::from_terms(2, [(p("ZZ"), -1.0), (p("XI"), 0.5), (p("IX"), 0.5)]).unwrap();
        let back = PauliOperator::from_dense(&ising.to_dense()).unwrap();
        assert_eq!(back.len(), 3);
        assert!((back.coefficient(&p("ZZ")) + 1.0).abs() < 1e-15);
        assert!((back.coefficient(&p("XI")) - 0.5).abs() < 1e-15);
        assert!((back.coefficient(&p("IX")) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn identity_and_non_hermitian() {
        let shifted = CMatrix::from_real_diagonal(&[3.0, 1.0]);
        let op = PauliOperator::from_dense(&shifted).unwrap();
        assert_eq!(op.len(), 1);
        assert!((op.coefficient(&p("Z")) - 1.0).abs() < 1e-15);

        let mut bad = CMatrix::zeros(2);
        bad[(0, 1)] = Complex64::new(1.0, 0.0);
        assert!(matches!(PauliOperator::from_dense(&bad), Err(Error::NotHermitian(_))));
    }

    #[test]
    fn terms_fold_signs_and_cancel() {
        let mut op =
            PauliOperator::from_terms(2, [(p("-XY"), 1.0), (p("XY"), 0.25), (p("ZZ"), 1.0), (p("ZZ"), -1.0)]).unwrap();
        assert_eq!(op.len(), 1);
        assert_eq!(op.coefficient(&p("XY")), -0.75);
        assert_eq!(op.coefficient(&p("-XY")), 0.75);
        assert!(op.add_term(p("X"), 1.0).is_err());
    }

    #[test]
    fn energies() {
        let zz = PureState::basis(2, 0).unwrap();
        let h = PauliOperator::from_terms(2, [(p("ZI"), 1.0), (p("IZ"), 1.0)]).unwrap();
        assert_eq!(h.energy(&zz).unwrap(), 2.0);
        assert!(h.energy(&PureState::basis(1, 0).unwrap()).is_err());
    }

    #[test]
    fn apply_matches_dense() {
        let h = PauliOperator::from_terms(2, [(p("XY"), 0.3), (p("ZI"), -1.0), (p("YY"), 0.7)]).unwrap();
        let v: Vec<Complex64> = (0..4).map(|k| Complex64::new(k as f64, 1.0 - k as f64)).collect();
        let dense = h.to_dense().matvec(&v);
        let fast = h.apply(&v).unwrap();
        assert!(dense.iter().zip(&fast).all(|(a, b)| (a - b).norm() < 1e-14));
        assert!(h.apply(&v[..2]).is_err());
    }

    #[test]
    fn text_format() {
        let text = "# two-qubit Ising\n-1.0 ZZ\n0.5 XI\n\n0.5 IX  # field\n2.0 II\n";
        let op = PauliOperator::from_text(text).unwrap();
        assert_eq!(op.len(), 3);
        assert_eq!(op.l1_norm(), 2.0);
        let again = PauliOperator::from_text(&op.to_text()).unwrap();
        assert_eq!(again, op);

        assert_eq!(
            PauliOperator::from_text("1.0 ZZ\n0.5 XQ\n").unwrap_err(),
            Error::Parse {
                line: 2,
                msg: "bad Pauli word \"XQ\"".into()
            }
        );
        assert!(matches!(
            PauliOperator::from_text("1.0 ZZ\n0.5 X\n"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            PauliOperator::from_text("abc ZZ\n"),
            Err(Error::Parse { line: 1, .. })
        ));
    }
}
