// Copyright 2026 The accred Authors
// SPDX-License-Identifier: Apache-2.0

//! Small dense helpers shared by the gate algebra and the simulators.

use num_complex::Complex64;

pub type C64 = Complex64;

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Row-major 2x2 complex matrix.
pub type Mat2 = [[C64; 2]; 2];

pub fn mat2(a: C64, b: C64, c: C64, d: C64) -> Mat2 {
    [[a, b], [c, d]]
}

pub fn identity2() -> Mat2 {
    mat2(ONE, ZERO, ZERO, ONE)
}

pub fn mul2(a: &Mat2, b: &Mat2) -> Mat2 {
    let mut out = [[ZERO; 2]; 2];
    for (r, row) in out.iter_mut().enumerate() {
        for (c, cell) in row.iter_mut().enumerate() {
            *cell = a[r][0] * b[0][c] + a[r][1] * b[1][c];
        }
    }
    out
}

pub fn adjoint2(a: &Mat2) -> Mat2 {
    mat2(a[0][0].conj(), a[1][0].conj(), a[0][1].conj(), a[1][1].conj())
}

/// Largest elementwise |U U^dagger - I|.
pub fn unitarity_deviation(u: &Mat2) -> f64 {
    let p = mul2(u, &adjoint2(u));
    let id = identity2();
    let mut worst = 0.0f64;
    for r in 0..2 {
        for c in 0..2 {
            worst = worst.max((p[r][c] - id[r][c]).norm());
        }
    }
    worst
}

/// Rescales `u` so its first non-negligible entry (row-major) is real and
/// positive. Two matrices equal up to global phase share a canonical form.
pub fn canonical_phase(u: &Mat2) -> Mat2 {
    let pivot = u
        .iter()
        .flatten()
        .copied()
        .find(|z| z.norm() > 1e-9)
        .unwrap_or(ONE);
    let phase = pivot.conj() / pivot.norm();
    let mut out = *u;
    for z in out.iter_mut().flatten() {
        *z *= phase;
    }
    out
}

pub fn max_abs_diff2(a: &Mat2, b: &Mat2) -> f64 {
    let mut worst = 0.0f64;
    for r in 0..2 {
        for c in 0..2 {
            worst = worst.max((a[r][c] - b[r][c]).norm());
        }
    }
    worst
}

/// Distance between `a` and `b` after quotienting global phase.
pub fn phase_distance2(a: &Mat2, b: &Mat2) -> f64 {
    max_abs_diff2(&canonical_phase(a), &canonical_phase(b))
}

pub fn pauli_x() -> Mat2 {
    mat2(ZERO, ONE, ONE, ZERO)
}

pub fn pauli_y() -> Mat2 {
    mat2(ZERO, -I, I, ZERO)
}

pub fn pauli_z() -> Mat2 {
    mat2(ONE, ZERO, ZERO, -ONE)
}

pub fn hadamard() -> Mat2 {
    let h = C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0);
    mat2(h, h, h, -h)
}

pub fn phase_s() -> Mat2 {
    mat2(ONE, ZERO, ZERO, I)
}

/// Total variation distance between two probability vectors.
pub fn total_variation(p: &[f64], q: &[f64]) -> f64 {
    assert_eq!(p.len(), q.len());
    0.5 * p.iter().zip(q).map(|(a, b)| (a - b).abs()).sum::<f64>()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_phase_removes_global_phase() {
        let h = hadamard();
        let mut shifted = h;
        let phase = C64::from_polar(1.0, 0.7);
        for z in shifted.iter_mut().flatten() {
            *z *= phase;
        }
        assert!(phase_distance2(&h, &shifted) < 1e-12);
        assert!(phase_distance2(&h, &phase_s()) > 0.1);
    }

    #[test]
    fn standard_gates_are_unitary() {
        for g in [pauli_x(), pauli_y(), pauli_z(), hadamard(), phase_s()] {
            assert!(unitarity_deviation(&g) < 1e-15);
        }
    }
}
