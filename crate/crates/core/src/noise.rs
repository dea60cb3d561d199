// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

//! Noise models.
//!
//! Pauli noise is described per protocol run as a [`PauliErrorCollection`]:
//! for every circuit `k` (numbered from 0) and every location `l` in
//! `0..=m`, one Pauli `P_l`. Location 0 follows state preparation, location
//! `j` follows the single-qubit round of band `j` (before its cZ layer), and
//! location `m` precedes measurement. X components at locations 0 and `m`
//! act trivially on `|+>` and on X-basis measurement, so collections only
//! hold Z-type Paulis there.
//!
//! Gate noise follows the bounded-deviation form: in band `j` of circuit `k`
//! the single-qubit round is followed by a deviation with probability
//! `r_j^(k)` and by nothing otherwise.
//!
//! ```
//! use accred::noise::{NoiseModel, PauliRates};
//! let model = NoiseModel::independent(PauliRates::depolarizing(0.01));
//! let c = model.sample_collection(3, 2, 4, &mut accred::rng::seeded(1))?;
//! assert_eq!(c.circuits(), 3);
//! # Ok::<(), accred::Error>(())
//! ```

use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::circuit::Circuit;
use crate::error::{Error, Result};
use crate::pauli::PauliString;

/// Tolerance on the total probability of an explicit distribution.
pub const PROBABILITY_TOLERANCE: f64 = 1e-12;

/// One Pauli per circuit and location for a whole protocol run.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(try_from = "RawCollection", into = "RawCollection")]
pub struct PauliErrorCollection {
    n: usize,
    m: usize,
    paulis: Vec<Vec<PauliString>>,
}

#[derive(Serialize, Deserialize)]
struct RawCollection {
    n: usize,
    m: usize,
    circuits: Vec<Vec<PauliString>>,
}

impl TryFrom<RawCollection> for PauliErrorCollection {
    type Error = Error;

    fn try_from(raw: RawCollection) -> Result<Self> {
        PauliErrorCollection::new(raw.n, raw.m, raw.circuits)
    }
}

impl From<PauliErrorCollection> for RawCollection {
    fn from(c: PauliErrorCollection) -> Self {
        RawCollection {
            n: c.n,
            m: c.m,
            circuits: c.paulis,
        }
    }
}

impl PauliErrorCollection {
    /// Checks shapes and the Z-only rule at locations 0 and `m`.
    pub fn new(n: usize, m: usize, paulis: Vec<Vec<PauliString>>) -> Result<Self> {
        if m == 0 {
            return Err(Error::Noise("a collection needs m >= 1".into()));
        }
        for (k, row) in paulis.iter().enumerate() {
            if row.len() != m + 1 {
                return Err(Error::Noise(format!(
                    "circuit {k}: expected {} locations, found {}",
                    m + 1,
                    row.len()
                )));
            }
            for (l, p) in row.iter().enumerate() {
                check_location(k, l, m, n, p)?;
            }
        }
        Ok(Self { n, m, paulis })
    }

    pub fn identity(circuits: usize, n: usize, m: usize) -> Self {
        Self {
            n,
            m,
            paulis: vec![vec![PauliString::identity(n); m + 1]; circuits],
        }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn circuits(&self) -> usize {
        self.paulis.len()
    }

    pub fn get(&self, k: usize, l: usize) -> &PauliString {
        &self.paulis[k][l]
    }

    /// Sets `P_l` of circuit `k`, enforcing the Z-only rule.
    pub fn set(&mut self, k: usize, l: usize, p: PauliString) -> Result<()> {
        if k >= self.paulis.len() || l > self.m {
            return Err(Error::Noise(format!("location ({k}, {l}) out of range")));
        }
        check_location(k, l, self.m, self.n, &p)?;
        self.paulis[k][l] = p;
        Ok(())
    }

    /// The `m + 1` Paulis acting on circuit `k`.
    pub fn for_circuit(&self, k: usize) -> &[PauliString] {
        &self.paulis[k]
    }

    pub fn is_identity(&self) -> bool {
        self.paulis.iter().flatten().all(PauliString::is_identity)
    }
}

fn check_location(k: usize, l: usize, m: usize, n: usize, p: &PauliString) -> Result<()> {
    if p.n() != n {
        return Err(Error::Noise(format!(
            "circuit {k}, location {l}: Pauli on {} qubits, expected {n}",
            p.n()
        )));
    }
    if (l == 0 || l == m) && p.x_mask() != 0 {
        return Err(Error::Noise(format!(
            "circuit {k}, location {l}: only Z-type errors are allowed here, got {p}"
        )));
    }
    Ok(())
}

/// Rates of X, Y and Z errors on one qubit at one location.
/// The collection that multiplies by `Z` on qubit set `s` at preparation
/// and measurement, and by `Z` on the qubits of `s` paired in band `j` at
/// location `j`.
///
/// When `s` is a union of cZ components this collection leaves the output
/// distribution of every circuit on `topology` unchanged: each component
/// evolves on its own, and conjugating its single-qubit gates by `Y` (which
/// is complex conjugation up to phase) preserves X-basis statistics while
/// moving the `Y` layers onto exactly these `Z` errors.
pub fn invisible_pattern(topology: &Circuit, s: u64) -> Vec<PauliString> {
    let (n, m) = (topology.n(), topology.m());
    (0..=m)
        .map(|l| {
            let z = if l == 0 || l == m {
                s
            } else {
                s & topology.band(l).cz.iter().fold(0, |acc, &(a, b)| acc | 1 << a | 1 << b)
            };
            PauliString::from_masks(n, 0, z)
        })
        .collect()
}

/// Whether `errors` is an [`invisible_pattern`] of a union of cZ components
/// of `topology`, so that no circuit on these cZ layers can tell it from no
/// error. The identity collection is invisible.
pub fn is_invisible(topology: &Circuit, errors: &[PauliString]) -> bool {
    if errors.len() != topology.m() + 1 || errors.iter().any(|p| p.x_mask() != 0) {
        return false;
    }
    let s = errors[0].z_mask();
    if topology.components().iter().any(|&c| s & c != 0 && s & c != c) {
        return false;
    }
    invisible_pattern(topology, s)
        .iter()
        .zip(errors)
        .all(|(a, b)| a.z_mask() == b.z_mask())
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct PauliRates {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl PauliRates {
    pub const ZERO: PauliRates = PauliRates { x: 0.0, y: 0.0, z: 0.0 };

    /// Equal X, Y and Z rates summing to `p`.
    pub fn depolarizing(p: f64) -> Self {
        Self { x: p / 3.0, y: p / 3.0, z: p / 3.0 }
    }

    pub fn dephasing(p: f64) -> Self {
        Self { x: 0.0, y: 0.0, z: p }
    }

    fn validate(&self) -> Result<()> {
        let ok = [self.x, self.y, self.z].iter().all(|r| (0.0..=1.0).contains(r))
            && self.x + self.y + self.z <= 1.0 + PROBABILITY_TOLERANCE;
        if ok {
            Ok(())
        } else {
            Err(Error::Noise(format!("invalid Pauli rates {self:?}")))
        }
    }

    /// Draws `(x, z)` bits for one qubit.
    fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> (bool, bool) {
        if self.x + self.y + self.z == 0.0 {
            return (false, false);
        }
        let u: f64 = rng.gen();
        if u < self.x {
            (true, false)
        } else if u < self.x + self.y {
            (true, true)
        } else if u < self.x + self.y + self.z {
            (false, true)
        } else {
            (false, false)
        }
    }
}

/// Overrides the default rates where all given coordinates match.
/// `None` matches anything. Later overrides win.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RateOverride {
    #[serde(default)]
    pub circuit: Option<usize>,
    #[serde(default)]
    pub location: Option<usize>,
    #[serde(default)]
    pub qubit: Option<usize>,
    pub rates: PauliRates,
}

/// Independent single-qubit Pauli channels at every location.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct IndependentChannels {
    pub default: PauliRates,
    #[serde(default)]
    pub overrides: Vec<RateOverride>,
}

impl IndependentChannels {
    fn rates(&self, k: usize, l: usize, q: usize) -> PauliRates {
        self.overrides
            .iter()
            .rev()
            .find(|o| {
                o.circuit.is_none_or(|c| c == k)
                    && o.location.is_none_or(|x| x == l)
                    && o.qubit.is_none_or(|x| x == q)
            })
            .map_or(self.default, |o| o.rates)
    }
}

/// An arbitrary, possibly correlated, distribution over collections.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ExplicitDistribution {
    pub entries: Vec<(PauliErrorCollection, f64)>,
}

/// How a deviation is chosen once the noisy branch is taken.
#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DeviationSampler {
    /// Uniform non-identity Pauli on a uniform qubit.
    #[default]
    RandomPauli,
    /// Always the same Pauli.
    Fixed { pauli: PauliString },
}

/// Rate override for band `band` (from 1) of circuit `circuit` (from 0).
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct GateRateOverride {
    #[serde(default)]
    pub circuit: Option<usize>,
    #[serde(default)]
    pub band: Option<usize>,
    pub rate: f64,
}

/// Bounded single-qubit gate noise: `(1 - r) I + r Q` after each round.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct BoundedGateNoise {
    pub default_rate: f64,
    #[serde(default)]
    pub overrides: Vec<GateRateOverride>,
    #[serde(default)]
    pub sampler: DeviationSampler,
}

impl BoundedGateNoise {
    /// The declared `r` for circuit `k`, band `j`.
    pub fn rate(&self, k: usize, j: usize) -> f64 {
        self.overrides
            .iter()
            .rev()
            .find(|o| o.circuit.is_none_or(|c| c == k) && o.band.is_none_or(|b| b == j))
            .map_or(self.default_rate, |o| o.rate)
    }

    fn validate(&self) -> Result<()> {
        let rates = std::iter::once(self.default_rate).chain(self.overrides.iter().map(|o| o.rate));
        for r in rates {
            if !(0.0..1.0).contains(&r) {
                return Err(Error::Noise(format!("gate noise rate {r} outside [0, 1)")));
            }
        }
        Ok(())
    }
}

/// A deviation injected after the single-qubit round of `band` in `circuit`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DeviationEvent {
    pub circuit: usize,
    pub band: usize,
    pub pauli: PauliString,
}

/// Pauli part of a model.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PauliNoise {
    Explicit(ExplicitDistribution),
    Independent(IndependentChannels),
}

/// A noise model, read from JSON with a `kind` tag.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum NoiseModel {
    Explicit(ExplicitDistribution),
    Independent(IndependentChannels),
    BoundedGate(BoundedGateNoise),
    Composite {
        pauli: PauliNoise,
        gate: BoundedGateNoise,
    },
}

impl NoiseModel {
    pub fn noiseless() -> Self {
        Self::independent(PauliRates::ZERO)
    }

    pub fn independent(rates: PauliRates) -> Self {
        NoiseModel::Independent(IndependentChannels {
            default: rates,
            overrides: Vec::new(),
        })
    }

    pub fn explicit(entries: Vec<(PauliErrorCollection, f64)>) -> Result<Self> {
        let model = NoiseModel::Explicit(ExplicitDistribution { entries });
        model.validate()?;
        Ok(model)
    }

    pub fn bounded_gate(rate: f64) -> Result<Self> {
        let model = NoiseModel::BoundedGate(BoundedGateNoise {
            default_rate: rate,
            overrides: Vec::new(),
            sampler: DeviationSampler::RandomPauli,
        });
        model.validate()?;
        Ok(model)
    }

    /// Parses and validates a JSON model.
    pub fn from_json(text: &str) -> Result<Self> {
        let model: NoiseModel = serde_json::from_str(text)?;
        model.validate()?;
        Ok(model)
    }

    pub fn validate(&self) -> Result<()> {
        if let Some(p) = self.pauli_part() {
            match p {
                PauliRef::Explicit(d) => {
                    if d.entries.is_empty() {
                        return Err(Error::Noise("explicit distribution is empty".into()));
                    }
                    if d.entries.iter().any(|(_, p)| !(*p >= 0.0)) {
                        return Err(Error::Noise("negative probability".into()));
                    }
                    let total: f64 = d.entries.iter().map(|(_, p)| p).sum();
                    if (total - 1.0).abs() > PROBABILITY_TOLERANCE {
                        return Err(Error::Noise(format!("probabilities sum to {total}, not 1")));
                    }
                }
                PauliRef::Independent(c) => {
                    c.default.validate()?;
                    for o in &c.overrides {
                        o.rates.validate()?;
                    }
                }
            }
        }
        if let Some(g) = self.gate_part() {
            g.validate()?;
        }
        Ok(())
    }

    fn pauli_part(&self) -> Option<PauliRef<'_>> {
        match self {
            NoiseModel::Explicit(d) | NoiseModel::Composite { pauli: PauliNoise::Explicit(d), .. } => {
                Some(PauliRef::Explicit(d))
            }
            NoiseModel::Independent(c)
            | NoiseModel::Composite { pauli: PauliNoise::Independent(c), .. } => {
                Some(PauliRef::Independent(c))
            }
            NoiseModel::BoundedGate(_) => None,
        }
    }

    pub fn has_pauli_part(&self) -> bool {
        self.pauli_part().is_some()
    }

    pub fn gate_part(&self) -> Option<&BoundedGateNoise> {
        match self {
            NoiseModel::BoundedGate(g) | NoiseModel::Composite { gate: g, .. } => Some(g),
            _ => None,
        }
    }

    /// Draws one collection for `circuits` circuits of width `n` and `m` bands.
    pub fn sample_collection<R: Rng + ?Sized>(
        &self,
        circuits: usize,
        n: usize,
        m: usize,
        rng: &mut R,
    ) -> Result<PauliErrorCollection> {
        match self.pauli_part() {
            None => Err(Error::Noise("model has no Pauli part".into())),
            Some(PauliRef::Explicit(d)) => {
                let u: f64 = rng.gen();
                let mut acc = 0.0;
                let mut chosen = &d.entries[d.entries.len() - 1].0;
                for (c, p) in &d.entries {
                    acc += p;
                    if u < acc {
                        chosen = c;
                        break;
                    }
                }
                if chosen.circuits() != circuits || chosen.n() != n || chosen.m() != m {
                    return Err(Error::Noise(format!(
                        "collection shape ({} circuits, n = {}, m = {}) does not match \
                         ({circuits}, {n}, {m})",
                        chosen.circuits(),
                        chosen.n(),
                        chosen.m()
                    )));
                }
                Ok(chosen.clone())
            }
            Some(PauliRef::Independent(ch)) => {
                let mut out = PauliErrorCollection::identity(circuits, n, m);
                for k in 0..circuits {
                    for l in 0..=m {
                        let mut p = PauliString::identity(n);
                        for q in 0..n {
                            let (x, z) = ch.rates(k, l, q).sample(rng);
                            p.set_local(q, x, z);
                        }
                        if l == 0 || l == m {
                            p = p.z_part();
                        }
                        out.paulis[k][l] = p.hermitian();
                    }
                }
                Ok(out)
            }
        }
    }

    /// Draws the deviation, if any, after band `j` of circuit `k`.
    pub fn sample_gate_deviation<R: Rng + ?Sized>(
        &self,
        n: usize,
        k: usize,
        j: usize,
        rng: &mut R,
    ) -> Result<Option<DeviationEvent>> {
        let g = self
            .gate_part()
            .ok_or_else(|| Error::Noise("model has no gate-noise part".into()))?;
        let r = g.rate(k, j);
        if r == 0.0 || rng.gen::<f64>() >= r {
            return Ok(None);
        }
        let pauli = match &g.sampler {
            DeviationSampler::RandomPauli => {
                let q = rng.gen_range(0..n);
                let which = rng.gen_range(1..4u8);
                PauliString::single(n, q, which & 1 == 1, which & 2 == 2).hermitian()
            }
            DeviationSampler::Fixed { pauli } => {
                if pauli.n() != n {
                    return Err(Error::Noise(format!(
                        "fixed deviation {pauli} does not act on {n} qubits"
                    )));
                }
                *pauli
            }
        };
        Ok(Some(DeviationEvent {
            circuit: k,
            band: j,
            pauli,
        }))
    }

    /// `g = prod_{k, j} (1 - r_j^(k))` over `circuits` circuits of `m` bands.
    /// Models without gate noise give 1.
    pub fn g_factor(&self, circuits: usize, m: usize) -> f64 {
        let Some(g) = self.gate_part() else {
            return 1.0;
        };
        (0..circuits)
            .flat_map(|k| (1..=m).map(move |j| (k, j)))
            .map(|(k, j)| 1.0 - g.rate(k, j))
            .product()
    }
}

enum PauliRef<'a> {
    Explicit(&'a ExplicitDistribution),
    Independent(&'a IndependentChannels),
}
