//! Clifford operations as generator-image tableaux.
//!
//! A tableau stores `C† X_j C` and `C† Z_j C` for every qubit `j`. Conjugating
//! an arbitrary string multiplies the images of its generators with exact
//! phase bookkeeping. Global phases of `C` are invisible here, so each
//! tableau is one element of the Clifford group modulo phases.
//!
//! # Enumeration order
//!
//! Generators are ordered `X_0, Z_0, X_1, Z_1, …`. The symplectic part is
//! chosen level by level: the image of `X_j` is any nonzero vector that
//! commutes with all earlier images, and the image of `Z_j` is any vector
//! that commutes with the earlier pairs and anticommutes with the new `X_j`
//! image. Candidates at each level are scanned in increasing
//! `(x << n) | z` order, and the level choices form a mixed-radix index with
//! `X_0` most significant. Sign bits follow in the same generator order, so
//! the full index is `symplectic_index * 4^n + sign_index`.

use rand::Rng;

use crate::error::{Error, Result};
use crate::pauli::{check_same, mask_for, symplectic_product, PauliString, PhasedPauli};

/// Largest n whose full Clifford group can be streamed.
pub const MAX_EXHAUSTIVE_QUBITS: usize = 3;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct CliffordTableau {
    n: usize,
    x_images: Vec<PauliString>,
    z_images: Vec<PauliString>,
}

impl CliffordTableau {
    pub fn identity(n: usize) -> Self {
        let bit = |j: usize| 1u64 << (n - 1 - j);
        Self {
            n,
            x_images: (0..n).map(|j| PauliString::from_masks(n, bit(j), 0, false)).collect(),
            z_images: (0..n).map(|j| PauliString::from_masks(n, 0, bit(j), false)).collect(),
        }
    }

    /// Builds a tableau from explicit images, rejecting anything that is not
    /// a valid Clifford action.
    pub fn from_images(x_images: Vec<PauliString>, z_images: Vec<PauliString>) -> Result<Self> {
        let n = x_images.len();
        if n == 0 || z_images.len() != n {
            return Err(Error::InvalidArgument("need one X and one Z image per qubit".into()));
        }
        for img in x_images.iter().chain(&z_images) {
            check_same(n, img.n_qubits())?;
        }
        let t = Self { n, x_images, z_images };
        if !t.symplectic_check() {
            return Err(Error::InvalidArgument(
                "images violate the Pauli commutation relations".into(),
            ));
        }
        Ok(t)
    }

    /// Builds from images without validation; used by tests that need an
    /// intentionally broken tableau.
    pub fn from_images_unchecked(x_images: Vec<PauliString>, z_images: Vec<PauliString>) -> Self {
        Self {
            n: x_images.len(),
            x_images,
            z_images,
        }
    }

    pub fn hadamard(n: usize, q: usize) -> Result<Self> {
        check_qubit(n, q)?;
        let mut t = Self::identity(n);
        std::mem::swap(&mut t.x_images[q], &mut t.z_images[q]);
        Ok(t)
    }

    /// Maps `X → Y`, `Z → Z` on qubit `q` (realized by `U = S†`).
    pub fn phase(n: usize, q: usize) -> Result<Self> {
        check_qubit(n, q)?;
        let mut t = Self::identity(n);
        let bit = 1u64 << (n - 1 - q);
        t.x_images[q] = PauliString::from_masks(n, bit, bit, false);
        Ok(t)
    }

    pub fn cnot(n: usize, control: usize, target: usize) -> Result<Self> {
        check_qubit(n, control)?;
        check_qubit(n, target)?;
        if control == target {
            return Err(Error::InvalidArgument("CNOT control equals target".into()));
        }
        let mut t = Self::identity(n);
        let c = 1u64 << (n - 1 - control);
        let tb = 1u64 << (n - 1 - target);
        t.x_images[control] = PauliString::from_masks(n, c | tb, 0, false);
        t.z_images[target] = PauliString::from_masks(n, 0, c | tb, false);
        Ok(t)
    }

    /// Places a single-qubit tableau on qubit `q` of an n-qubit register.
    pub fn embed_single(n: usize, q: usize, single: &CliffordTableau) -> Result<Self> {
        check_qubit(n, q)?;
        check_same(1, single.n)?;
        let bit = 1u64 << (n - 1 - q);
        let lift = |p: &PauliString| {
            PauliString::from_masks(
                n,
                if p.x_mask() != 0 { bit } else { 0 },
                if p.z_mask() != 0 { bit } else { 0 },
                p.is_negative(),
            )
        };
        let mut t = Self::identity(n);
        t.x_images[q] = lift(&single.x_images[0]);
        t.z_images[q] = lift(&single.z_images[0]);
        Ok(t)
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn x_image(&self, q: usize) -> &PauliString {
        &self.x_images[q]
    }

    pub fn z_image(&self, q: usize) -> &PauliString {
        &self.z_images[q]
    }

    /// `C† P C = η P'` with `η = ±1`.
    pub fn conjugate(&self, p: &PauliString) -> Result<PauliString> {
        check_same(self.n, p.n_qubits())?;
        self.conjugate_unchecked(p)
            .ok_or_else(|| Error::InvalidArgument("tableau is not a valid Clifford action".into()))
    }

    #[inline]
    pub(crate) fn conjugate_unchecked(&self, p: &PauliString) -> Option<PauliString> {
        let n = self.n;
        let start = p.to_phased();
        let mut acc = PhasedPauli {
            phase: start.phase,
            x: 0,
            z: 0,
        };
        let (x, z) = (p.x_mask(), p.z_mask());
        let mut support = x | z;
        while support != 0 {
            let bit = support.trailing_zeros() as usize;
            support &= support - 1;
            let j = n - 1 - bit;
            if x >> bit & 1 == 1 {
                acc = acc.mul(self.x_images[j].to_phased());
            }
            if z >> bit & 1 == 1 {
                acc = acc.mul(self.z_images[j].to_phased());
            }
        }
        acc.to_hermitian(n)
    }

    /// Conjugation by `self` after `inner`: the result maps `P` to
    /// `self(inner(P))`.
    pub fn compose(&self, inner: &CliffordTableau) -> Result<CliffordTableau> {
        check_same(self.n, inner.n)?;
        let map = |imgs: &[PauliString]| imgs.iter().map(|p| self.conjugate(p)).collect::<Result<Vec<_>>>();
        Ok(Self {
            n: self.n,
            x_images: map(&inner.x_images)?,
            z_images: map(&inner.z_images)?,
        })
    }

    /// True iff the images reproduce the canonical commutation pattern of the
    /// generators and every image is a non-identity string on n qubits.
    pub fn symplectic_check(&self) -> bool {
        let n = self.n;
        if self.x_images.len() != n || self.z_images.len() != n {
            return false;
        }
        let all = || self.x_images.iter().chain(&self.z_images);
        if all().any(|p| p.n_qubits() != n || p.is_identity()) {
            return false;
        }
        for j in 0..n {
            for k in 0..n {
                let (aj, bj) = (&self.x_images[j], &self.z_images[j]);
                let (ak, bk) = (&self.x_images[k], &self.z_images[k]);
                let xz = symplectic_product(aj.x_mask(), aj.z_mask(), bk.x_mask(), bk.z_mask());
                if xz != u32::from(j == k) {
                    return false;
                }
                if symplectic_product(aj.x_mask(), aj.z_mask(), ak.x_mask(), ak.z_mask()) != 0
                    || symplectic_product(bj.x_mask(), bj.z_mask(), bk.x_mask(), bk.z_mask()) != 0
                {
                    return false;
                }
            }
        }
        true
    }

    /// Flips the signs of the generator images selected by `sign_index`
    /// (bit `2n - 1 - g` belongs to generator `g`).
    pub fn with_signs(&self, sign_index: u64) -> Self {
        let n = self.n;
        let flip = |g: usize| sign_index >> (2 * n - 1 - g) & 1 == 1;
        let set = |p: &PauliString, f: bool| PauliString::from_masks(n, p.x_mask(), p.z_mask(), f);
        Self {
            n,
            x_images: (0..n).map(|j| set(&self.x_images[j], flip(2 * j))).collect(),
            z_images: (0..n).map(|j| set(&self.z_images[j], flip(2 * j + 1))).collect(),
        }
    }
}

fn check_qubit(n: usize, q: usize) -> Result<()> {
    if n == 0 || q >= n {
        Err(Error::InvalidArgument(format!("qubit {q} out of range for n = {n}")))
    } else {
        Ok(())
    }
}

#[inline]
fn split(v: u64, n: usize) -> (u64, u64) {
    (v >> n, v & mask_for(n))
}

#[inline]
fn sym(v: u64, w: u64, n: usize) -> u32 {
    let (vx, vz) = split(v, n);
    let (wx, wz) = split(w, n);
    symplectic_product(vx, vz, wx, wz)
}

/// Candidate count for each of the `2n` enumeration levels.
fn level_counts(n: usize) -> Vec<u64> {
    (0..2 * n)
        .map(|k| {
            let free = 2 * (n - k / 2) as u32;
            if k % 2 == 0 {
                (1u64 << free) - 1
            } else {
                1u64 << (free - 1)
            }
        })
        .collect()
}

/// Number of symplectic matrices over GF(2) of size 2n.
pub fn symplectic_count(n: usize) -> u64 {
    level_counts(n).iter().product()
}

/// Size of the Clifford group modulo phases: `|Sp(2n, 2)| · 4^n`.
pub fn clifford_count(n: usize) -> u64 {
    symplectic_count(n) << (2 * n)
}

/// Indexed access to the canonical enumeration of n-qubit Clifford actions.
#[derive(Debug, Clone)]
pub struct CliffordEnumeration {
    n: usize,
    counts: Vec<u64>,
}

impl CliffordEnumeration {
    /// `n = 3` requires `allow_three` since it streams ~9.3e7 tableaux.
    pub fn new(n: usize, allow_three: bool) -> Result<Self> {
        match n {
            1 | 2 => {}
            3 if allow_three => {}
            3 => {
                return Err(Error::InvalidArgument(
                    "n = 3 enumeration (92,897,280 tableaux) must be requested explicitly".into(),
                ))
            }
            _ => return Err(Error::ExhaustiveUnavailable(n)),
        }
        Ok(Self {
            n,
            counts: level_counts(n),
        })
    }

    pub fn n_qubits(&self) -> usize {
        self.n
    }

    pub fn symplectic_len(&self) -> u64 {
        self.counts.iter().product()
    }

    pub fn signs_len(&self) -> u64 {
        1u64 << (2 * self.n)
    }

    pub fn len(&self) -> u64 {
        self.symplectic_len() * self.signs_len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    /// Symplectic part number `index` with all image signs `+`.
    pub fn symplectic(&self, mut index: u64) -> CliffordTableau {
        assert!(index < self.symplectic_len(), "symplectic index out of range");
        let n = self.n;
        let mut digits = vec![0u64; 2 * n];
        for k in (0..2 * n).rev() {
            digits[k] = index % self.counts[k];
            index /= self.counts[k];
        }
        let mut chosen: Vec<u64> = Vec::with_capacity(2 * n);
        for (k, &digit) in digits.iter().enumerate() {
            let mut seen = 0u64;
            let v = (1..1u64 << (2 * n))
                .find(|&v| {
                    let ok = chosen.iter().enumerate().all(|(i, &w)| {
                        let want = u32::from(k % 2 == 1 && i == k - 1);
                        sym(v, w, n) == want
                    });
                    if ok {
                        seen += 1;
                    }
                    ok && seen == digit + 1
                })
                .expect("level candidate count is exact");
            chosen.push(v);
        }
        let img = |v: u64| {
            let (x, z) = split(v, n);
            PauliString::from_masks(n, x, z, false)
        };
        CliffordTableau {
            n,
            x_images: (0..n).map(|j| img(chosen[2 * j])).collect(),
            z_images: (0..n).map(|j| img(chosen[2 * j + 1])).collect(),
        }
    }

    pub fn get(&self, index: u64) -> CliffordTableau {
        let signs = self.signs_len();
        self.symplectic(index / signs).with_signs(index % signs)
    }

    /// Tableaux with indices in `range`, in canonical order.
    pub fn range(&self, range: std::ops::Range<u64>) -> impl Iterator<Item = CliffordTableau> + '_ {
        let signs = self.signs_len();
        let end = range.end.min(self.len());
        let start = range.start.min(end);
        let first_sym = start / signs;
        let last_sym = if end == 0 { 0 } else { (end - 1) / signs + 1 };
        (first_sym..last_sym).flat_map(move |s| {
            let base = self.symplectic(s);
            let lo = if s == first_sym { start % signs } else { 0 };
            let hi = if s + 1 == last_sym && end % signs != 0 {
                end % signs
            } else {
                signs
            };
            (lo..hi).map(move |k| base.with_signs(k))
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = CliffordTableau> + '_ {
        self.range(0..self.len())
    }
}

/// Streams every n-qubit Clifford action exactly once in canonical order.
pub fn enumerate_cliffords(n: usize) -> Result<impl Iterator<Item = CliffordTableau>> {
    let e = CliffordEnumeration::new(n, false)?;
    let len = e.len();
    Ok((0..len).map(move |i| e.get(i)))
}

/// Uniformly random Clifford action. Each generator image is drawn uniformly
/// from the vectors allowed by the earlier choices by projecting a uniform
/// vector onto the symplectic complement of the pairs fixed so far.
pub fn random_clifford<R: Rng + ?Sized>(n: usize, rng: &mut R) -> CliffordTableau {
    assert!(n >= 1 && n <= crate::pauli::MAX_QUBITS);
    let m = mask_for(n);
    let mut pairs: Vec<((u64, u64), (u64, u64))> = Vec::with_capacity(n);
    let project = |x: u64, z: u64, pairs: &[((u64, u64), (u64, u64))]| {
        let (mut px, mut pz) = (x, z);
        for &((ax, az), (bx, bz)) in pairs {
            if symplectic_product(x, z, bx, bz) == 1 {
                px ^= ax;
                pz ^= az;
            }
            if symplectic_product(x, z, ax, az) == 1 {
                px ^= bx;
                pz ^= bz;
            }
        }
        (px, pz)
    };
    for _ in 0..n {
        let a = loop {
            let v = project(rng.random::<u64>() & m, rng.random::<u64>() & m, &pairs);
            if v != (0, 0) {
                break v;
            }
        };
        let b = loop {
            let v = project(rng.random::<u64>() & m, rng.random::<u64>() & m, &pairs);
            if symplectic_product(a.0, a.1, v.0, v.1) == 1 {
                break v;
            }
        };
        pairs.push((a, b));
    }
    CliffordTableau {
        n,
        x_images: pairs
            .iter()
            .map(|&((x, z), _)| PauliString::from_masks(n, x, z, rng.random()))
            .collect(),
        z_images: pairs
            .iter()
            .map(|&(_, (x, z))| PauliString::from_masks(n, x, z, rng.random()))
            .collect(),
    }
}

/// The 24 single-qubit Clifford actions in canonical order.
pub fn single_qubit_cliffords() -> Vec<CliffordTableau> {
    CliffordEnumeration::new(1, false).expect("n = 1").iter().collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::collections::HashSet;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn gate_tableaux() {
        let h = CliffordTableau::hadamard(1, 0).unwrap();
        assert_eq!(h.conjugate(&p("X")).unwrap(), p("Z"));
        assert_eq!(h.conjugate(&p("Y")).unwrap(), p("-Y"));
        let s = CliffordTableau::phase(1, 0).unwrap();
        assert_eq!(s.conjugate(&p("X")).unwrap(), p("Y"));
        assert_eq!(s.conjugate(&p("Y")).unwrap(), p("-X"));
        let cx = CliffordTableau::cnot(2, 0, 1).unwrap();
        assert_eq!(cx.conjugate(&p("XI")).unwrap(), p("XX"));
        assert_eq!(cx.conjugate(&p("IZ")).unwrap(), p("ZZ"));
        assert_eq!(cx.conjugate(&p("IX")).unwrap(), p("IX"));
        assert!(cx.conjugate(&p("X")).is_err());
    }

    #[test]
    fn composition() {
        let h = CliffordTableau::hadamard(1, 0).unwrap();
        let s = CliffordTableau::phase(1, 0).unwrap();
        let id = CliffordTableau::identity(1);
        assert_eq!(h.compose(&id).unwrap(), h);
        assert_eq!(id.compose(&h).unwrap(), h);
        assert_eq!(h.compose(&h).unwrap(), id);
        let s2 = s.compose(&s).unwrap();
        assert_eq!(s2.conjugate(&p("X")).unwrap(), p("-X"));
        assert_eq!(s2.conjugate(&p("Z")).unwrap(), p("Z"));
    }

    #[test]
    fn symplectic_check_rejects_bad_images() {
        assert!(CliffordTableau::identity(3).symplectic_check());
        let bad = CliffordTableau::from_images_unchecked(vec![p("Z")], vec![p("Z")]);
        assert!(!bad.symplectic_check());
        assert!(CliffordTableau::from_images(vec![p("XI"), p("XI")], vec![p("ZI"), p("IZ")]).is_err());
    }

    #[test]
    fn counts() {
        assert_eq!(symplectic_count(1), 6);
        assert_eq!(symplectic_count(2), 720);
        assert_eq!(symplectic_count(3), 1_451_520);
        assert_eq!(clifford_count(3), 92_897_280);
        assert!(CliffordEnumeration::new(3, false).is_err());
        assert!(matches!(
            CliffordEnumeration::new(4, true),
            Err(Error::ExhaustiveUnavailable(4))
        ));
    }

    #[test]
    fn enumeration_is_complete_and_distinct() {
        for (n, expect) in [(1usize, 24usize), (2, 11520)] {
            let mut seen = HashSet::new();
            let strings: Vec<_> = crate::pauli::all_nonidentity(n).collect();
            for t in enumerate_cliffords(n).unwrap() {
                assert!(t.symplectic_check());
                let action: Vec<PauliString> = strings.iter().map(|s| t.conjugate(s).unwrap()).collect();
                assert!(seen.insert(action));
            }
            assert_eq!(seen.len(), expect);
        }
    }

    #[test]
    fn enumeration_range_matches_get() {
        let e = CliffordEnumeration::new(2, false).unwrap();
        let slice: Vec<_> = e.range(100..140).collect();
        assert_eq!(slice.len(), 40);
        for (k, t) in slice.iter().enumerate() {
            assert_eq!(*t, e.get(100 + k as u64));
        }
    }

    #[test]
    fn three_qubit_samples_are_valid() {
        let e = CliffordEnumeration::new(3, true).unwrap();
        for idx in [0u64, 1, 12345, 9_999_999, e.len() - 1] {
            assert!(e.get(idx).symplectic_check());
        }
    }

    #[test]
    fn random_cliffords_are_valid_and_deterministic() {
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for n in 1..=10 {
            let t = random_clifford(n, &mut rng);
            assert!(t.symplectic_check(), "n = {n}");
        }
        let a = random_clifford(5, &mut ChaCha8Rng::seed_from_u64(99));
        let b = random_clifford(5, &mut ChaCha8Rng::seed_from_u64(99));
        assert_eq!(a, b);
    }

    #[test]
    fn conjugation_preserves_commutation() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        let strings: Vec<_> = crate::pauli::all_nonidentity(3).collect();
        for _ in 0..20 {
            let t = random_clifford(3, &mut rng);
            for a in &strings {
                for b in strings.iter().step_by(7) {
                    let before = a.commutes(b).unwrap();
                    let after = t.conjugate(a).unwrap().commutes(&t.conjugate(b).unwrap()).unwrap();
                    assert_eq!(before, after);
                }
            }
        }
    }
}
