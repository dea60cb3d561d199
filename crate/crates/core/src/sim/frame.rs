// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

//! Pauli-frame propagation.
//!
//! Pauli errors on a Clifford circuit can be pushed to the end of the
//! circuit, where they become a single Pauli `Q`. Before X-basis
//! measurement only the Z part of `Q` matters: it flips exactly the outcomes
//! in `Q.z_mask()`.
//!
//! ```
//! use accred::{circuit, sim, pauli::PauliString};
//! let c = circuit::parse(r#"{"n":2,"m":2,"bands":[
//!     {"singles":[{"clifford":"I"},{"clifford":"I"}],"cz":[[0,1]]},
//!     {"singles":[{"clifford":"I"},{"clifford":"I"}],"cz":[]}]}"#)?;
//! let p = |s: &str| s.parse::<PauliString>().unwrap();
//! let q = sim::propagate_frame(&c, &[p("II"), p("XI"), p("II")])?;
//! assert_eq!(q.to_string(), "XZ");
//! # Ok::<(), accred::Error>(())
//! ```

use crate::bits::BitString;
use crate::circuit::Circuit;
use crate::clifford::Clifford;
use crate::error::{Error, Result};
use crate::pauli::PauliString;

fn clifford_rounds(circuit: &Circuit) -> Result<Vec<Vec<Clifford>>> {
    circuit.require_clifford()?;
    Ok(circuit
        .bands()
        .iter()
        .map(|b| b.singles.iter().map(|g| g.as_clifford().expect("checked")).collect())
        .collect())
}

fn check_errors(circuit: &Circuit, errors: &[PauliString]) -> Result<()> {
    if errors.len() != circuit.m() + 1 {
        return Err(Error::SizeMismatch {
            expected: circuit.m() + 1,
            found: errors.len(),
        });
    }
    if let Some(p) = errors.iter().find(|p| p.n() != circuit.n()) {
        return Err(Error::SizeMismatch {
            expected: circuit.n(),
            found: p.n(),
        });
    }
    Ok(())
}

/// The end-of-circuit Pauli equivalent to `errors` (one per location
/// `0..=m`).
pub fn propagate_frame(circuit: &Circuit, errors: &[PauliString]) -> Result<PauliString> {
    check_errors(circuit, errors)?;
    let rounds = clifford_rounds(circuit)?;
    let mut q = errors[0];
    for (idx, (band, round)) in circuit.bands().iter().zip(&rounds).enumerate() {
        for (qubit, g) in round.iter().enumerate() {
            q = q.conj_single(qubit, *g)?;
        }
        q = errors[idx + 1].multiply(&q)?;
        q = q.conj_cz_layer(&band.cz)?;
    }
    Ok(q)
}

/// Output flips caused by `errors`; for a trap this is the whole output.
pub fn trap_output(circuit: &Circuit, errors: &[PauliString]) -> Result<BitString> {
    let q = propagate_frame(circuit, errors)?;
    Ok(BitString::from_mask(circuit.n(), q.z_mask()))
}

/// Noiseless outcome of a Clifford circuit whose output is deterministic.
///
/// Propagates the stabilisers `X_q` of `|+>^n` with signs. The output is
/// deterministic exactly when every image is X-type; outcome bits are then
/// read from the signs of `X_q` in the final stabiliser group.
pub fn ideal_clifford_output(circuit: &Circuit) -> Result<BitString> {
    let n = circuit.n();
    let rounds = clifford_rounds(circuit)?;
    let mut gens: Vec<PauliString> = (0..n).map(|q| PauliString::single(n, q, true, false)).collect();
    for (band, round) in circuit.bands().iter().zip(&rounds) {
        for g in gens.iter_mut() {
            for (qubit, c) in round.iter().enumerate() {
                *g = g.conj_single(qubit, *c)?;
            }
            *g = g.conj_cz_layer(&band.cz)?;
        }
    }
    if gens.iter().any(|g| g.z_mask() != 0) {
        return Err(Error::Domain(
            "circuit output is not deterministic".into(),
        ));
    }
    // Gaussian elimination over GF(2) to reduce each generator to a single X_q.
    let mut rows: Vec<(u64, bool)> = gens.iter().map(|g| (g.x_mask(), g.phase() == 2)).collect();
    let mut out = BitString::zeros(n);
    for q in 0..n {
        let bit = 1u64 << q;
        let pivot = (q..n)
            .find(|&r| rows[r].0 & bit != 0)
            .expect("stabiliser generators are independent");
        rows.swap(q, pivot);
        let (pm, ps) = rows[q];
        for (r, row) in rows.iter_mut().enumerate() {
            if r != q && row.0 & bit != 0 {
                row.0 ^= pm;
                row.1 ^= ps;
            }
        }
    }
    for (q, (_, negative)) in rows.iter().enumerate() {
        out.set(q, *negative);
    }
    Ok(out)
}

/// Outcome of a deterministic Clifford circuit under Pauli errors.
pub fn clifford_output(circuit: &Circuit, errors: &[PauliString]) -> Result<BitString> {
    let ideal = ideal_clifford_output(circuit)?;
    ideal.xor(&trap_output(circuit, errors)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::{Band, Gate};

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    type Layer = (Vec<Clifford>, Vec<(usize, usize)>);

    fn circuit(n: usize, bands: Vec<Layer>) -> Circuit {
        Circuit::new(
            n,
            bands
                .into_iter()
                .map(|(g, cz)| Band::new(g.into_iter().map(Gate::from).collect(), cz))
                .collect(),
        )
        .unwrap()
    }

    #[test]
    fn identity_errors_give_identity() {
        let c = circuit(2, vec![(vec![Clifford::H, Clifford::S], vec![(0, 1)]), (vec![Clifford::S, Clifford::H], vec![])]);
        let q = propagate_frame(&c, &[p("II"); 3]).unwrap();
        assert!(q.is_identity());
    }

    #[test]
    fn last_location_passes_through() {
        let c = circuit(2, vec![(vec![Clifford::H, Clifford::S], vec![(0, 1)]), (vec![Clifford::S, Clifford::H], vec![])]);
        let q = propagate_frame(&c, &[p("II"), p("II"), p("ZI")]).unwrap();
        assert_eq!(q.unsigned(), p("ZI"));
        assert_eq!(trap_output(&c, &[p("II"), p("II"), p("ZI")]).unwrap().to_string(), "10");
    }

    #[test]
    fn non_clifford_is_rejected() {
        let g = Gate::unitary(crate::linalg::hadamard()).unwrap();
        let c = Circuit::new(1, vec![Band::new(vec![g], [])]).unwrap();
        assert!(matches!(
            propagate_frame(&c, &[p("I"), p("I")]),
            Err(Error::NonClifford { band: 1, qubit: 0 })
        ));
    }

    #[test]
    fn ideal_output_reads_signs() {
        // Z on |+> gives |->, outcome 1.
        let c = circuit(2, vec![(vec![Clifford::Z, Clifford::I], vec![])]);
        assert_eq!(ideal_clifford_output(&c).unwrap().to_string(), "10");
        let c = circuit(1, vec![(vec![Clifford::H], vec![])]);
        assert!(ideal_clifford_output(&c).is_err());
    }
}
