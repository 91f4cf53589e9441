//! Signed Pauli strings in binary symplectic form.
//!
//! Qubit 0 is the leftmost character of a Pauli word and the most significant
//! bit of a computational-basis index. The masks use the same layout as basis
//! indices, so qubit `j` of an `n`-qubit string lives in bit `n - 1 - j`. With
//! that layout `X^x` maps basis index `b` to `b ^ x` and `Z^z` contributes the
//! phase `(-1)^{popcount(b & z)}`.
//!
//! A string with both bits set on a qubit is the Hermitian `Y = iXZ`, so the
//! matrix of an unsigned string with masks `(x, z)` is `i^{|x & z|} X^x Z^z`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::CMatrix;

/// Largest qubit count representable by the 64-bit masks.
pub const MAX_QUBITS: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pauli {
    I,
    X,
    Y,
    Z,
}

impl Pauli {
    fn bits(self) -> (bool, bool) {
        match self {
            Pauli::I => (false, false),
            Pauli::X => (true, false),
            Pauli::Y => (true, true),
            Pauli::Z => (false, true),
        }
    }

    fn from_bits(x: bool, z: bool) -> Self {
        match (x, z) {
            (false, false) => Pauli::I,
            (true, false) => Pauli::X,
            (true, true) => Pauli::Y,
            (false, true) => Pauli::Z,
        }
    }

    fn digit(self) -> u64 {
        match self {
            Pauli::I => 0,
            Pauli::X => 1,
            Pauli::Y => 2,
            Pauli::Z => 3,
        }
    }

    fn as_char(self) -> char {
        match self {
            Pauli::I => 'I',
            Pauli::X => 'X',
            Pauli::Y => 'Y',
            Pauli::Z => 'Z',
        }
    }
}

#[inline]
pub(crate) fn mask_for(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

/// A Hermitian N-qubit Pauli string with a ±1 sign.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    x: u64,
    z: u64,
    negative: bool,
}

impl PauliString {
    pub fn new(n_qubits: usize, x_mask: u64, z_mask: u64, negative: bool) -> Result<Self> {
        if n_qubits == 0 || n_qubits > MAX_QUBITS {
            return Err(Error::InvalidQubitCount(n_qubits));
        }
        let m = mask_for(n_qubits);
        if x_mask & !m != 0 || z_mask & !m != 0 {
            return Err(Error::InvalidArgument(format!(
                "masks ({x_mask:#x}, {z_mask:#x}) exceed {n_qubits} qubits"
            )));
        }
        Ok(Self {
            n: n_qubits,
            x: x_mask,
            z: z_mask,
            negative,
        })
    }

    /// Internal constructor; masks must already fit.
    #[inline]
    pub(crate) fn from_masks(n: usize, x: u64, z: u64, negative: bool) -> Self {
        debug_assert!(x & !mask_for(n) == 0 && z & !mask_for(n) == 0);
        Self { n, x, z, negative }
    }

    pub fn identity(n_qubits: usize) -> Self {
        Self::from_masks(n_qubits, 0, 0, false)
    }

    /// Single-qubit operator `p` acting on `qubit`.
    pub fn single(n_qubits: usize, qubit: usize, p: Pauli) -> Result<Self> {
        if qubit >= n_qubits {
            return Err(Error::InvalidArgument(format!(
                "qubit {qubit} out of range for n = {n_qubits}"
            )));
        }
        let bit = 1u64 << (n_qubits - 1 - qubit);
        let (xb, zb) = p.bits();
        Self::new(n_qubits, if xb { bit } else { 0 }, if zb { bit } else { 0 }, false)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    pub fn z_mask(&self) -> u64 {
        self.z
    }

    pub fn is_negative(&self) -> bool {
        self.negative
    }

    pub fn sign(&self) -> f64 {
        if self.negative {
            -1.0
        } else {
            1.0
        }
    }

    /// The same string with sign +1.
    pub fn label(&self) -> Self {
        Self {
            negative: false,
            ..*self
        }
    }

    pub fn negated(&self) -> Self {
        Self {
            negative: !self.negative,
            ..*self
        }
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn pauli_at(&self, qubit: usize) -> Pauli {
        let bit = 1u64 << (self.n - 1 - qubit);
        Pauli::from_bits(self.x & bit != 0, self.z & bit != 0)
    }

    /// Index of the unsigned label in base 4 with `I, X, Y, Z = 0, 1, 2, 3`
    /// and qubit 0 as the most significant digit.
    pub fn label_index(&self) -> u64 {
        (0..self.n).fold(0u64, |acc, q| acc * 4 + self.pauli_at(q).digit())
    }

    /// Dense index used by coefficient tables: `(x << n) | z`.
    #[inline]
    pub(crate) fn table_index(&self) -> usize {
        ((self.x as usize) << self.n) | self.z as usize
    }

    pub fn commutes(&self, other: &PauliString) -> Result<bool> {
        check_same(self.n, other.n)?;
        Ok(symplectic_product(self.x, self.z, other.x, other.z) == 0)
    }

    /// `P|ψ⟩` on raw amplitudes in the basis-index layout.
    pub(crate) fn apply_amplitudes(&self, amps: &[Complex64]) -> Vec<Complex64> {
        let mut out = vec![Complex64::new(0.0, 0.0); amps.len()];
        let phase = self.matrix_phase();
        for (b, a) in amps.iter().enumerate() {
            let parity = (b as u64 & self.z).count_ones() & 1;
            let v = if parity == 1 { -*a } else { *a };
            out[b ^ self.x as usize] = v * phase;
        }
        out
    }

    /// Overall scalar in front of `X^x Z^z`: `sign * i^{|x & z|}`.
    pub(crate) fn matrix_phase(&self) -> Complex64 {
        let k = (self.x & self.z).count_ones() as u8 + if self.negative { 2 } else { 0 };
        phase_to_complex(k)
    }

    pub fn to_dense(&self) -> CMatrix {
        let d = 1usize << self.n;
        let mut m = CMatrix::zeros(d);
        let phase = self.matrix_phase();
        for b in 0..d {
            let parity = (b as u64 & self.z).count_ones() & 1;
            let s = if parity == 1 { -1.0 } else { 1.0 };
            m[(b ^ self.x as usize, b)] = phase * s;
        }
        m
    }

    pub(crate) fn to_phased(self) -> PhasedPauli {
        PhasedPauli {
            phase: ((self.x & self.z).count_ones() as u8 + if self.negative { 2 } else { 0 }) & 3,
            x: self.x,
            z: self.z,
        }
    }
}

impl PartialOrd for PauliString {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for PauliString {
    fn cmp(&self, other: &Self) -> Ordering {
        self.n
            .cmp(&other.n)
            .then_with(|| self.label_index().cmp(&other.label_index()))
            .then_with(|| self.negative.cmp(&other.negative))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.negative {
            write!(f, "-")?;
        }
        for q in 0..self.n {
            write!(f, "{}", self.pauli_at(q).as_char())?;
        }
        Ok(())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses words such as `XIZ`, `-YY` or `+ZZ`.
    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (negative, word) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let n = word.chars().count();
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::InvalidPauliWord(s.to_string()));
        }
        let mut x = 0u64;
        let mut z = 0u64;
        for (q, c) in word.chars().enumerate() {
            let p = match c.to_ascii_uppercase() {
                'I' => Pauli::I,
                'X' => Pauli::X,
                'Y' => Pauli::Y,
                'Z' => Pauli::Z,
                _ => return Err(Error::InvalidPauliWord(s.to_string())),
            };
            let (xb, zb) = p.bits();
            let bit = 1u64 << (n - 1 - q);
            if xb {
                x |= bit;
            }
            if zb {
                z |= bit;
            }
        }
        Ok(Self::from_masks(n, x, z, negative))
    }
}

#[inline]
pub(crate) fn symplectic_product(x1: u64, z1: u64, x2: u64, z2: u64) -> u32 {
    ((x1 & z2).count_ones() + (z1 & x2).count_ones()) & 1
}

pub(crate) fn check_same(expected: usize, found: usize) -> Result<()> {
    if expected != found {
        Err(Error::DimensionMismatch { expected, found })
    } else {
        Ok(())
    }
}

fn phase_to_complex(k: u8) -> Complex64 {
    match k & 3 {
        0 => Complex64::new(1.0, 0.0),
        1 => Complex64::new(0.0, 1.0),
        2 => Complex64::new(-1.0, 0.0),
        _ => Complex64::new(0.0, -1.0),
    }
}

/// `i^phase X^x Z^z`, closed under multiplication with exact phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct PhasedPauli {
    pub phase: u8,
    pub x: u64,
    pub z: u64,
}

impl PhasedPauli {
    #[inline]
    pub fn mul(self, rhs: PhasedPauli) -> PhasedPauli {
        // Z^{z1} X^{x2} = (-1)^{|z1 & x2|} X^{x2} Z^{z1}
        let swap = ((self.z & rhs.x).count_ones() & 1) as u8 * 2;
        PhasedPauli {
            phase: (self.phase + rhs.phase + swap) & 3,
            x: self.x ^ rhs.x,
            z: self.z ^ rhs.z,
        }
    }

    /// Converts back to a signed Hermitian string. Returns `None` when the
    /// product is anti-Hermitian (residual phase ±i).
    #[inline]
    pub fn to_hermitian(self, n: usize) -> Option<PauliString> {
        let residual = (self.phase + 4 - ((self.x & self.z).count_ones() & 3) as u8) & 3;
        match residual {
            0 => Some(PauliString::from_masks(n, self.x, self.z, false)),
            2 => Some(PauliString::from_masks(n, self.x, self.z, true)),
            _ => None,
        }
    }
}

/// Iterates over every unsigned non-identity string on `n` qubits in table order.
pub fn all_nonidentity(n: usize) -> impl Iterator<Item = PauliString> {
    let m = mask_for(n);
    (1..(1u128 << (2 * n))).map(move |v| {
        let v = v as u64;
        PauliString::from_masks(n, (v >> n) & m, v & m, false)
    })
}
