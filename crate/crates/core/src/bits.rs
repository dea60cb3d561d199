// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

//! Fixed-width classical bit strings for measurement outcomes and pad keys.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Maximum register width supported by the bit-mask representations.
pub const MAX_QUBITS: usize = 64;

/// An `n`-bit string; bit `i` belongs to qubit `i`.
///
/// The text form lists qubit 0 first, so `"100"` has only qubit 0 set.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct BitString {
    len: usize,
    mask: u64,
}

fn width_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

impl BitString {
    pub fn zeros(len: usize) -> Self {
        assert!(len <= MAX_QUBITS, "bit strings hold at most {MAX_QUBITS} bits");
        Self { len, mask: 0 }
    }

    /// Builds a string from a mask; bits above `len` are dropped.
    pub fn from_mask(len: usize, mask: u64) -> Self {
        assert!(len <= MAX_QUBITS, "bit strings hold at most {MAX_QUBITS} bits");
        Self {
            len,
            mask: mask & width_mask(len),
        }
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        let mask = bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | (u64::from(b) << i));
        Self::from_mask(bits.len(), mask)
    }

    pub fn len(&self) -> usize {
        self.len
    }

    pub fn is_empty(&self) -> bool {
        self.len == 0
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn get(&self, i: usize) -> bool {
        i < self.len && (self.mask >> i) & 1 == 1
    }

    pub fn set(&mut self, i: usize, value: bool) {
        assert!(i < self.len);
        if value {
            self.mask |= 1 << i;
        } else {
            self.mask &= !(1 << i);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.mask == 0
    }

    pub fn count_ones(&self) -> u32 {
        self.mask.count_ones()
    }

    /// Bitwise XOR; both operands must have the same width.
    pub fn xor(&self, other: &BitString) -> Result<BitString> {
        if self.len != other.len {
            return Err(Error::SizeMismatch {
                expected: self.len,
                found: other.len,
            });
        }
        Ok(BitString {
            len: self.len,
            mask: self.mask ^ other.mask,
        })
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        (0..self.len).map(move |i| self.get(i))
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for b in self.iter() {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl fmt::Debug for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "BitString({self})")
    }
}

impl FromStr for BitString {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        if s.len() > MAX_QUBITS {
            return Err(Error::LimitExceeded {
                what: "bit string length",
                requested: s.len(),
                limit: MAX_QUBITS,
            });
        }
        let mut bits = Vec::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                other => {
                    return Err(Error::Parse {
                        path: format!("[{i}]"),
                        message: format!("expected '0' or '1', found {other:?}"),
                    })
                }
            }
        }
        Ok(BitString::from_bits(&bits))
    }
}

impl Serialize for BitString {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for BitString {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn text_form_lists_qubit_zero_first() {
        let b = BitString::from_mask(3, 0b001);
        assert_eq!(b.to_string(), "100");
        assert_eq!("100".parse::<BitString>().unwrap(), b);
    }

    #[test]
    fn xor_rejects_width_mismatch() {
        let a = BitString::zeros(2);
        let b = BitString::zeros(3);
        assert!(a.xor(&b).is_err());
    }

    #[test]
    fn from_mask_truncates() {
        assert_eq!(BitString::from_mask(2, 0b111).mask(), 0b11);
    }
}
