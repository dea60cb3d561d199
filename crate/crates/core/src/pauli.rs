// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

//! Multi-qubit Pauli operators in symplectic form.
//!
//! A [`PauliString`] on `n <= 64` qubits is `i^phase · X^x · Z^z` where `x`
//! and `z` are bit masks (bit `q` is qubit `q`) and the X part is written
//! first. The text form lists one of `IXYZ` per qubit, qubit 0 first, with an
//! optional sign prefix from `{"", "+i", "-", "-i"}`.
//!
//! ```
//! use accred::pauli::PauliString;
//! let x: PauliString = "X".parse().unwrap();
//! let z: PauliString = "Z".parse().unwrap();
//! assert_eq!(x.multiply(&z).unwrap().to_string(), "-iY");
//! ```

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::bits::MAX_QUBITS;
use crate::clifford::{Clifford, PauliTerm};
use crate::error::{Error, Result};

#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: usize,
    phase: u8,
    x: u64,
    z: u64,
}

fn width_mask(n: usize) -> u64 {
    if n >= 64 {
        u64::MAX
    } else {
        (1u64 << n) - 1
    }
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        Self { n, phase: 0, x: 0, z: 0 }
    }

    /// `i^phase · X^x · Z^z`, with masks truncated to `n` bits.
    pub fn from_parts(n: usize, phase: u8, x: u64, z: u64) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        let w = width_mask(n);
        Self { n, phase: phase & 3, x: x & w, z: z & w }
    }

    pub fn from_masks(n: usize, x: u64, z: u64) -> Self {
        Self::from_parts(n, 0, x, z)
    }

    /// `X^x Z^z` on qubit `q`, identity elsewhere.
    pub fn single(n: usize, q: usize, x: bool, z: bool) -> Self {
        assert!(q < n);
        Self::from_masks(n, u64::from(x) << q, u64::from(z) << q)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn phase(&self) -> u8 {
        self.phase
    }

    pub fn x_mask(&self) -> u64 {
        self.x
    }

    /// Qubits with a Z component. For a Pauli just before X-basis
    /// measurement these are exactly the flipped outcomes.
    pub fn z_mask(&self) -> u64 {
        self.z
    }

    /// Local `(x, z)` bits on qubit `q`.
    pub fn local(&self, q: usize) -> (bool, bool) {
        ((self.x >> q) & 1 == 1, (self.z >> q) & 1 == 1)
    }

    pub fn set_local(&mut self, q: usize, x: bool, z: bool) {
        let bit = 1u64 << q;
        self.x = (self.x & !bit) | if x { bit } else { 0 };
        self.z = (self.z & !bit) | if z { bit } else { 0 };
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    /// Identity up to phase.
    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    /// Same Pauli with phase dropped.
    pub fn unsigned(&self) -> Self {
        Self { phase: 0, ..*self }
    }

    /// Same Pauli as a plain tensor product of `I, X, Y, Z` (no prefix).
    pub fn hermitian(&self) -> Self {
        Self {
            phase: ((self.x & self.z).count_ones() & 3) as u8,
            ..*self
        }
    }

    /// Same Pauli with its X components removed.
    pub fn z_part(&self) -> Self {
        Self { phase: 0, x: 0, ..*self }
    }

    pub fn with_phase(&self, phase: u8) -> Self {
        Self { phase: phase & 3, ..*self }
    }

    fn check(&self, q: usize) -> Result<()> {
        if q >= self.n {
            return Err(Error::IndexOutOfRange { index: q, len: self.n });
        }
        Ok(())
    }

    fn check_pair(&self, i: usize, j: usize) -> Result<()> {
        self.check(i)?;
        self.check(j)?;
        if i == j {
            return Err(Error::Domain(format!("two-qubit gate on qubit {i} twice")));
        }
        Ok(())
    }

    /// Operator product `self · other`.
    pub fn multiply(&self, other: &PauliString) -> Result<PauliString> {
        if self.n != other.n {
            return Err(Error::SizeMismatch { expected: self.n, found: other.n });
        }
        let swap = 2 * (self.z & other.x).count_ones();
        Ok(PauliString {
            n: self.n,
            phase: ((u32::from(self.phase) + u32::from(other.phase) + swap) & 3) as u8,
            x: self.x ^ other.x,
            z: self.z ^ other.z,
        })
    }

    /// Conjugation through every cZ pair of a layer.
    pub fn conj_cz_layer(&self, pairs: &[(usize, usize)]) -> Result<PauliString> {
        pairs.iter().try_fold(*self, |p, &(i, j)| p.conj_cz(i, j))
    }

    pub fn commutes_with(&self, other: &PauliString) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()).is_multiple_of(2)
    }

    /// `g P g^dagger` for a single-qubit Clifford `g` on qubit `q`.
    pub fn conj_single(&self, q: usize, g: Clifford) -> Result<PauliString> {
        self.check(q)?;
        let (x, z) = self.local(q);
        let t = g.conjugate(PauliTerm::new(0, x, z));
        let mut out = *self;
        out.set_local(q, t.x, t.z);
        out.phase = (self.phase + t.phase) & 3;
        Ok(out)
    }

    /// `cZ P cZ` for a cZ between qubits `i` and `j`.
    pub fn conj_cz(&self, i: usize, j: usize) -> Result<PauliString> {
        self.check_pair(i, j)?;
        let (xi, _) = self.local(i);
        let (xj, _) = self.local(j);
        let mut out = *self;
        if xi {
            out.z ^= 1 << j;
        }
        if xj {
            out.z ^= 1 << i;
        }
        if xi && xj {
            out.phase = (out.phase + 2) & 3;
        }
        Ok(out)
    }

    /// `cX P cX` for control `c` and target `t`. No sign arises in this form.
    pub fn conj_cx(&self, c: usize, t: usize) -> Result<PauliString> {
        self.check_pair(c, t)?;
        let (xc, _) = self.local(c);
        let (_, zt) = self.local(t);
        let mut out = *self;
        if xc {
            out.x ^= 1 << t;
        }
        if zt {
            out.z ^= 1 << c;
        }
        Ok(out)
    }

    /// All `4^n` unsigned Paulis on `n` qubits, in mask order.
    pub fn all(n: usize) -> impl Iterator<Item = PauliString> {
        assert!(n <= 16, "enumerating 4^n Paulis needs n <= 16");
        let size = 1u64 << n;
        (0..size * size).map(move |k| PauliString::from_masks(n, k % size, k / size))
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let ys = (self.x & self.z).count_ones();
        let sign = (u32::from(self.phase) + 4 - ys % 4) % 4;
        f.write_str(["", "+i", "-", "-i"][sign as usize])?;
        for q in 0..self.n {
            let c = match self.local(q) {
                (false, false) => 'I',
                (true, false) => 'X',
                (true, true) => 'Y',
                (false, true) => 'Z',
            };
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

impl fmt::Debug for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "PauliString({self})")
    }
}

impl FromStr for PauliString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let (sign, body) = [("+i", 1u8), ("-i", 3), ("i", 1), ("+", 0), ("-", 2)]
            .iter()
            .find_map(|(p, v)| s.strip_prefix(p).map(|rest| (*v, rest)))
            .unwrap_or((0, s));
        if body.len() > MAX_QUBITS {
            return Err(Error::LimitExceeded {
                what: "Pauli string length",
                requested: body.len(),
                limit: MAX_QUBITS,
            });
        }
        let mut p = PauliString::identity(body.len());
        let mut ys = 0u8;
        for (q, c) in body.chars().enumerate() {
            match c {
                'I' => {}
                'X' => p.set_local(q, true, false),
                'Y' => {
                    p.set_local(q, true, true);
                    ys += 1;
                }
                'Z' => p.set_local(q, false, true),
                other => {
                    return Err(Error::Domain(format!(
                        "invalid Pauli character {other:?} in {s:?}"
                    )))
                }
            }
        }
        p.phase = (sign + ys) & 3;
        Ok(p)
    }
}

impl Serialize for PauliString {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for PauliString {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn text_round_trip() {
        for s in ["I", "X", "-iY", "+iZ", "-XYZ", "IIZ", "Y", "-Y"] {
            assert_eq!(p(s).to_string(), s);
        }
    }

    #[test]
    fn products() {
        assert_eq!(p("X").multiply(&p("Z")).unwrap().to_string(), "-iY");
        assert_eq!(p("Z").multiply(&p("X")).unwrap().to_string(), "+iY");
        assert_eq!(p("X").multiply(&p("Y")).unwrap().to_string(), "+iZ");
        assert_eq!(p("Y").multiply(&p("Y")).unwrap().to_string(), "I");
    }

    #[test]
    fn cz_conjugation() {
        assert_eq!(p("XI").conj_cz(0, 1).unwrap().to_string(), "XZ");
        assert_eq!(p("XX").conj_cz(0, 1).unwrap().to_string(), "YY");
        assert_eq!(p("ZI").conj_cz(0, 1).unwrap().to_string(), "ZI");
        assert_eq!(p("YI").conj_cz(0, 1).unwrap().to_string(), "YZ");
    }

    #[test]
    fn cx_conjugation() {
        assert_eq!(p("XI").conj_cx(0, 1).unwrap().to_string(), "XX");
        assert_eq!(p("IZ").conj_cx(0, 1).unwrap().to_string(), "ZZ");
        assert_eq!(p("ZI").conj_cx(0, 1).unwrap().to_string(), "ZI");
        assert_eq!(p("IX").conj_cx(0, 1).unwrap().to_string(), "IX");
    }

    #[test]
    fn single_conjugation() {
        assert_eq!(p("XI").conj_single(0, Clifford::H).unwrap().to_string(), "ZI");
        assert_eq!(p("IX").conj_single(1, Clifford::S).unwrap().to_string(), "IY");
        assert_eq!(p("Y").conj_single(0, Clifford::H).unwrap().to_string(), "-Y");
    }

    #[test]
    fn hermitian_form_has_no_prefix() {
        let y = PauliString::from_masks(2, 0b11, 0b01);
        assert_eq!(y.to_string(), "-iYX");
        assert_eq!(y.hermitian().to_string(), "YX");
    }

    #[test]
    fn bad_indices_are_errors() {
        assert!(p("XX").conj_cz(0, 2).is_err());
        assert!(p("XX").conj_cx(1, 1).is_err());
        assert!(p("X").conj_single(3, Clifford::H).is_err());
        assert!(p("X").multiply(&p("XX")).is_err());
    }
}
