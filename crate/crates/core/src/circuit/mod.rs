// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

//! Band-structured circuits.
//!
//! A circuit acts on `n` qubits prepared in `|+>`. It is a list of `m` bands;
//! each band is one single-qubit gate per qubit followed by a layer of
//! disjoint cZ gates. The last band has no cZ layer and is followed by
//! Pauli-X measurements of every qubit.
//!
//! Bands are numbered from 1 in reports and noise locations; the `bands`
//! vector is indexed from 0.

pub mod families;
mod json;

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::bits::MAX_QUBITS;
use crate::clifford::Clifford;
use crate::error::{Error, Result};
use crate::linalg::{self, Mat2};

pub use json::{parse, serialize};

/// Elementwise tolerance on `U U^dagger = I` for generic gates.
pub const UNITARY_TOLERANCE: f64 = 1e-12;

/// A single-qubit gate: an exact Clifford element or an arbitrary unitary.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Gate {
    Clifford(Clifford),
    Unitary(Mat2),
}

impl Gate {
    pub const IDENTITY: Gate = Gate::Clifford(Clifford::I);

    /// A generic gate, rejected unless unitary within [`UNITARY_TOLERANCE`].
    pub fn unitary(m: Mat2) -> Result<Gate> {
        let deviation = linalg::unitarity_deviation(&m);
        if deviation > UNITARY_TOLERANCE {
            return Err(Error::NotUnitary { deviation });
        }
        Ok(Gate::Unitary(m))
    }

    pub fn matrix(&self) -> Mat2 {
        match self {
            Gate::Clifford(c) => c.matrix(),
            Gate::Unitary(m) => *m,
        }
    }

    pub fn as_clifford(&self) -> Option<Clifford> {
        match self {
            Gate::Clifford(c) => Some(*c),
            Gate::Unitary(_) => None,
        }
    }

    pub fn is_clifford(&self) -> bool {
        matches!(self, Gate::Clifford(_))
    }

    pub fn adjoint(&self) -> Gate {
        match self {
            Gate::Clifford(c) => Gate::Clifford(c.inverse()),
            Gate::Unitary(m) => Gate::Unitary(linalg::adjoint2(m)),
        }
    }
}

impl From<Clifford> for Gate {
    fn from(c: Clifford) -> Self {
        Gate::Clifford(c)
    }
}

/// The gate equal to applying `a` and then `b`.
///
/// Clifford operands stay symbolic; a generic operand makes the result
/// generic even when the product happens to be Clifford.
pub fn compose_singles(a: &Gate, b: &Gate) -> Gate {
    match (a, b) {
        (Gate::Clifford(x), Gate::Clifford(y)) => Gate::Clifford(x.then(*y)),
        _ => Gate::Unitary(linalg::mul2(&b.matrix(), &a.matrix())),
    }
}

/// One round of single-qubit gates followed by disjoint cZ gates.
#[derive(Clone, Debug, PartialEq)]
pub struct Band {
    pub singles: Vec<Gate>,
    /// Unordered pairs stored as `(lo, hi)`, sorted ascending.
    pub cz: Vec<(usize, usize)>,
}

impl Band {
    /// Builds a band, normalising each pair to `(lo, hi)` and sorting.
    pub fn new(singles: Vec<Gate>, cz: impl IntoIterator<Item = (usize, usize)>) -> Band {
        let mut cz: Vec<(usize, usize)> =
            cz.into_iter().map(|(a, b)| (a.min(b), a.max(b))).collect();
        cz.sort_unstable();
        Band { singles, cz }
    }

    /// Qubits not touched by any cZ in this band, ascending.
    pub fn unpaired(&self, n: usize) -> Vec<usize> {
        let mut used = vec![false; n];
        for &(a, b) in &self.cz {
            if a < n {
                used[a] = true;
            }
            if b < n {
                used[b] = true;
            }
        }
        (0..n).filter(|&q| !used[q]).collect()
    }
}

/// A structural problem found by [`validate`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Violation {
    NoQubits,
    TooManyQubits { n: usize },
    NoBands,
    WrongGateCount { band: usize, expected: usize, found: usize },
    PairOutOfRange { band: usize, qubit: usize },
    SelfPair { band: usize, qubit: usize },
    QubitInTwoPairs { band: usize, qubit: usize },
    FinalBandHasCz { band: usize },
    NotUnitary { band: usize, qubit: usize, deviation: f64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::NoQubits => write!(f, "circuit has no qubits"),
            Violation::TooManyQubits { n } => {
                write!(f, "{n} qubits exceeds the supported maximum of {MAX_QUBITS}")
            }
            Violation::NoBands => write!(f, "circuit has no bands"),
            Violation::WrongGateCount { band, expected, found } => write!(
                f,
                "band {band}: expected {expected} single-qubit gates, found {found}"
            ),
            Violation::PairOutOfRange { band, qubit } => {
                write!(f, "band {band}: cZ qubit {qubit} out of range")
            }
            Violation::SelfPair { band, qubit } => {
                write!(f, "band {band}: cZ pairs qubit {qubit} with itself")
            }
            Violation::QubitInTwoPairs { band, qubit } => {
                write!(f, "band {band}: qubit {qubit} in two pairs")
            }
            Violation::FinalBandHasCz { band } => {
                write!(f, "band {band}: final band must have no cZ")
            }
            Violation::NotUnitary { band, qubit, deviation } => write!(
                f,
                "band {band}, qubit {qubit}: gate is not unitary (deviation {deviation:e})"
            ),
        }
    }
}

/// Every invariant violation of a circuit description; empty means valid.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_ok(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_ok() {
            return f.write_str("ok");
        }
        let parts: Vec<String> = self.violations.iter().map(|v| v.to_string()).collect();
        f.write_str(&parts.join("; "))
    }
}

/// Checks a raw circuit description. Band numbers in the report start at 1.
pub fn validate(n: usize, bands: &[Band]) -> ValidationReport {
    let mut violations = Vec::new();
    if n == 0 {
        violations.push(Violation::NoQubits);
    }
    if n > MAX_QUBITS {
        violations.push(Violation::TooManyQubits { n });
    }
    if bands.is_empty() {
        violations.push(Violation::NoBands);
    }
    for (idx, band) in bands.iter().enumerate() {
        let number = idx + 1;
        if band.singles.len() != n {
            violations.push(Violation::WrongGateCount {
                band: number,
                expected: n,
                found: band.singles.len(),
            });
        }
        for (q, gate) in band.singles.iter().enumerate() {
            if let Gate::Unitary(m) = gate {
                let deviation = linalg::unitarity_deviation(m);
                if deviation > UNITARY_TOLERANCE {
                    violations.push(Violation::NotUnitary {
                        band: number,
                        qubit: q,
                        deviation,
                    });
                }
            }
        }
        let mut seen = vec![false; n];
        for &(a, b) in &band.cz {
            if a == b {
                violations.push(Violation::SelfPair { band: number, qubit: a });
                continue;
            }
            for q in [a, b] {
                if q >= n {
                    violations.push(Violation::PairOutOfRange { band: number, qubit: q });
                } else if seen[q] {
                    violations.push(Violation::QubitInTwoPairs { band: number, qubit: q });
                } else {
                    seen[q] = true;
                }
            }
        }
        if idx + 1 == bands.len() && !band.cz.is_empty() {
            violations.push(Violation::FinalBandHasCz { band: number });
        }
    }
    ValidationReport { violations }
}

/// A validated band-structured circuit. Immutable after construction.
#[derive(Clone, Debug, PartialEq)]
pub struct Circuit {
    n: usize,
    bands: Vec<Band>,
}

impl Circuit {
    /// Validates and builds a circuit; pairs are normalised as in [`Band::new`].
    pub fn new(n: usize, bands: Vec<Band>) -> Result<Circuit> {
        let bands: Vec<Band> = bands
            .into_iter()
            .map(|b| Band::new(b.singles, b.cz))
            .collect();
        let report = validate(n, &bands);
        if !report.is_ok() {
            return Err(Error::InvalidCircuit(report.to_string()));
        }
        Ok(Circuit { n, bands })
    }

    /// A circuit of identity gates sharing the cZ layers of `self`.
    pub fn topology(&self) -> Circuit {
        Circuit {
            n: self.n,
            bands: self
                .bands
                .iter()
                .map(|b| Band {
                    singles: vec![Gate::IDENTITY; self.n],
                    cz: b.cz.clone(),
                })
                .collect(),
        }
    }

    /// Same cZ layers with every single-qubit gate replaced.
    ///
    /// `gates[j][i]` is the gate for qubit `i` in band `j + 1`.
    pub fn with_singles(&self, gates: Vec<Vec<Gate>>) -> Result<Circuit> {
        if gates.len() != self.bands.len() {
            return Err(Error::SizeMismatch {
                expected: self.bands.len(),
                found: gates.len(),
            });
        }
        let bands = gates
            .into_iter()
            .zip(&self.bands)
            .map(|(singles, b)| Band {
                singles,
                cz: b.cz.clone(),
            })
            .collect();
        Circuit::new(self.n, bands)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.bands.len()
    }

    pub fn bands(&self) -> &[Band] {
        &self.bands
    }

    /// Band `j`, numbered from 1.
    pub fn band(&self, j: usize) -> &Band {
        &self.bands[j - 1]
    }

    pub fn validate(&self) -> ValidationReport {
        validate(self.n, &self.bands)
    }

    pub fn is_clifford(&self) -> bool {
        self.bands
            .iter()
            .all(|b| b.singles.iter().all(Gate::is_clifford))
    }

    /// First non-Clifford gate as an error, numbered from band 1.
    pub fn require_clifford(&self) -> Result<()> {
        for (j, band) in self.bands.iter().enumerate() {
            if let Some(q) = band.singles.iter().position(|g| !g.is_clifford()) {
                return Err(Error::NonClifford { band: j + 1, qubit: q });
            }
        }
        Ok(())
    }

    /// True when every band has the same cZ pairs as `other`'s.
    pub fn same_topology(&self, other: &Circuit) -> bool {
        self.n == other.n
            && self.bands.len() == other.bands.len()
            && self.bands.iter().zip(&other.bands).all(|(a, b)| a.cz == b.cz)
    }

    pub fn cz_count(&self) -> usize {
        self.bands.iter().map(|b| b.cz.len()).sum()
    }

    /// Connected components of the graph of all cZ pairs, as qubit masks
    /// in order of their lowest qubit.
    pub fn components(&self) -> Vec<u64> {
        let mut parent: Vec<usize> = (0..self.n).collect();
        fn root(parent: &mut [usize], mut q: usize) -> usize {
            while parent[q] != q {
                parent[q] = parent[parent[q]];
                q = parent[q];
            }
            q
        }
        for &(a, b) in self.bands.iter().flat_map(|band| &band.cz) {
            let (ra, rb) = (root(&mut parent, a), root(&mut parent, b));
            parent[ra.max(rb)] = ra.min(rb);
        }
        let mut masks: Vec<(usize, u64)> = Vec::new();
        for q in 0..self.n {
            let r = root(&mut parent, q);
            match masks.iter_mut().find(|(root, _)| *root == r) {
                Some(entry) => entry.1 |= 1 << q,
                None => masks.push((r, 1 << q)),
            }
        }
        masks.into_iter().map(|(_, mask)| mask).collect()
    }
}
