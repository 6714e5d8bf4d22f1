//! Minimal 2×2 complex matrix helpers shared by the pulse algebra, the
//! gate library and the simulators.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;

pub type C64 = Complex64;

/// Row-major 2×2 complex matrix.
pub type Mat2 = [[C64; 2]; 2];

pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const ONE: C64 = C64::new(1.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

pub const IDENTITY: Mat2 = [[ONE, ZERO], [ZERO, ONE]];
pub const PAULI_X: Mat2 = [[ZERO, ONE], [ONE, ZERO]];
pub const PAULI_Y: Mat2 = [[ZERO, C64::new(0.0, -1.0)], [I, ZERO]];
pub const PAULI_Z: Mat2 = [[ONE, ZERO], [ZERO, C64::new(-1.0, 0.0)]];

pub fn matmul(a: &Mat2, b: &Mat2) -> Mat2 {
    [
        [
            a[0][0] * b[0][0] + a[0][1] * b[1][0],
            a[0][0] * b[0][1] + a[0][1] * b[1][1],
        ],
        [
            a[1][0] * b[0][0] + a[1][1] * b[1][0],
            a[1][0] * b[0][1] + a[1][1] * b[1][1],
        ],
    ]
}

pub fn dagger(a: &Mat2) -> Mat2 {
    [
        [a[0][0].conj(), a[1][0].conj()],
        [a[0][1].conj(), a[1][1].conj()],
    ]
}

pub fn scale(a: &Mat2, s: C64) -> Mat2 {
    [[a[0][0] * s, a[0][1] * s], [a[1][0] * s, a[1][1] * s]]
}

pub fn is_diagonal(a: &Mat2) -> bool {
    a[0][1] == ZERO && a[1][0] == ZERO
}

/// Frobenius distance between two matrices.
pub fn distance(a: &Mat2, b: &Mat2) -> f64 {
    let mut s = 0.0;
    for r in 0..2 {
        for c in 0..2 {
            s += (a[r][c] - b[r][c]).norm_sqr();
        }
    }
    s.sqrt()
}

/// Distance after removing the best global phase, `min_φ ‖a − e^{iφ} b‖`.
pub fn phase_distance(a: &Mat2, b: &Mat2) -> f64 {
    // <b, a> = Tr(b† a) gives the optimal phase.
    let mut inner = ZERO;
    for r in 0..2 {
        for c in 0..2 {
            inner += b[r][c].conj() * a[r][c];
        }
    }
    let phase = if inner.norm() > 1e-300 { inner / inner.norm() } else { ONE };
    distance(a, &scale(b, phase))
}

pub fn is_unitary(a: &Mat2, tol: f64) -> bool {
    distance(&matmul(a, &dagger(a)), &IDENTITY) < tol
}

/// `(cos x, sin x)`, exact when `x` is an integer multiple of π/2.
///
/// Exactness matters: ideal π pulses must be exact signed Pauli matrices so
/// that noiseless DD insertion leaves output distributions bit-identical.
pub fn exact_cos_sin(x: f64) -> (f64, f64) {
    let k = (x / FRAC_PI_2).round();
    if (x - k * FRAC_PI_2).abs() <= 4.0 * f64::EPSILON * x.abs().max(1.0) {
        match (k as i64).rem_euclid(4) {
            0 => (1.0, 0.0),
            1 => (0.0, 1.0),
            2 => (-1.0, 0.0),
            _ => (0.0, -1.0),
        }
    } else {
        (x.cos(), x.sin())
    }
}

/// `exp(−i θ (n·σ)/2)` for a unit axis `n = (nx, ny, nz)`.
pub fn rotation(axis: [f64; 3], theta: f64) -> Mat2 {
    let (c, s) = exact_cos_sin(theta / 2.0);
    let [nx, ny, nz] = axis;
    [
        [C64::new(c, -s * nz), C64::new(-s * ny, -s * nx)],
        [C64::new(s * ny, -s * nx), C64::new(c, s * nz)],
    ]
}

pub fn rx(theta: f64) -> Mat2 {
    rotation([1.0, 0.0, 0.0], theta)
}

pub fn ry(theta: f64) -> Mat2 {
    rotation([0.0, 1.0, 0.0], theta)
}

pub fn rz(theta: f64) -> Mat2 {
    rotation([0.0, 0.0, 1.0], theta)
}

/// OpenQASM-style `U(θ, φ, λ) = Rz(φ) Ry(θ) Rz(λ)` up to global phase.
pub fn u3(theta: f64, phi: f64, lambda: f64) -> Mat2 {
    matmul(&rz(phi), &matmul(&ry(theta), &rz(lambda)))
}

/// Angles `(θ, φ, λ)` with `u3(θ, φ, λ)` equal to `u` up to global phase.
pub fn u3_angles(u: &Mat2) -> (f64, f64, f64) {
    let theta = 2.0 * u[1][0].norm().atan2(u[0][0].norm());
    let (c, s) = (u[0][0].norm(), u[1][0].norm());
    // u3 = [[e^{-i(φ+λ)/2} c, -e^{-i(φ-λ)/2} s], [e^{i(φ-λ)/2} s, e^{i(φ+λ)/2} c]]
    let sum = if c > 1e-12 { u[1][1].arg() - u[0][0].arg() } else { 0.0 };
    let diff = if s > 1e-12 { u[1][0].arg() - (-u[0][1]).arg() } else { 0.0 };
    (theta, (sum + diff) / 2.0, (sum - diff) / 2.0)
}

/// Decomposes a unitary as `e^{iα} exp(−i θ (n·σ)/2)` with `θ ∈ [0, π]`,
/// returning `(e^{iα}, n, θ)`. The axis is arbitrary when `θ = 0`.
pub fn axis_angle(u: &Mat2) -> (C64, [f64; 3], f64) {
    let det = u[0][0] * u[1][1] - u[0][1] * u[1][0];
    let phase = det.sqrt();
    let v = scale(u, phase.inv());
    // v = cos(θ/2) I − i sin(θ/2) n·σ
    let c = ((v[0][0] + v[1][1]) / 2.0).re;
    let sx = -((v[0][1] + v[1][0]) / 2.0).im;
    let sy = ((v[1][0] - v[0][1]) / 2.0).re;
    let sz = -((v[0][0] - v[1][1]) / 2.0).im;
    let s = (sx * sx + sy * sy + sz * sz).sqrt();
    let theta = 2.0 * s.atan2(c);
    let axis = if s > 1e-15 { [sx / s, sy / s, sz / s] } else { [0.0, 0.0, 1.0] };
    if theta > PI {
        // R(n, θ) = −R(−n, 2π − θ)
        return (-phase, [-axis[0], -axis[1], -axis[2]], 2.0 * PI - theta);
    }
    (phase, axis, theta)
}

/// Scales the rotation angle of `u` by `(π + error)/π`, modelling a
/// systematic flip-angle miscalibration of a physical single-qubit gate.
pub fn over_rotate(u: &Mat2, error: f64) -> Mat2 {
    if error == 0.0 {
        return *u;
    }
    let (phase, axis, theta) = axis_angle(u);
    if theta.abs() < 1e-15 {
        return *u;
    }
    scale(&rotation(axis, theta * (1.0 + error / PI)), phase)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rotation_by_pi_is_exact_pauli() {
        let x = rx(PI);
        assert_eq!(x, scale(&PAULI_X, C64::new(0.0, -1.0)));
        let y = ry(PI);
        assert_eq!(y, scale(&PAULI_Y, C64::new(0.0, -1.0)));
        let z = rz(PI);
        assert_eq!(z, scale(&PAULI_Z, C64::new(0.0, -1.0)));
    }

    #[test]
    fn u3_angles_round_trip() {
        for (t, p, l) in [(0.7, -1.3, 2.1), (0.0, 0.4, 0.3), (PI, 1.0, -0.5), (2.5, 3.0, 3.1)] {
            let u = u3(t, p, l);
            let (a, b, c) = u3_angles(&u);
            assert!(phase_distance(&u, &u3(a, b, c)) < 1e-12, "{t} {p} {l}");
        }
        let h = scale(&[[ONE, ONE], [ONE, -ONE]], C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        let (a, b, c) = u3_angles(&h);
        assert!(phase_distance(&h, &u3(a, b, c)) < 1e-12);
    }

    #[test]
    fn axis_angle_round_trip() {
        let u = u3(0.7, -1.3, 2.1);
        let (phase, axis, theta) = axis_angle(&u);
        let back = scale(&rotation(axis, theta), phase);
        assert!(distance(&u, &back) < 1e-12);
    }

    #[test]
    fn over_rotation_scales_angle() {
        let u = over_rotate(&rx(PI), 0.02);
        assert!(phase_distance(&u, &rx(PI + 0.02)) < 1e-12);
        let h = [[ONE, ONE], [ONE, -ONE]];
        let h = scale(&h, C64::new(std::f64::consts::FRAC_1_SQRT_2, 0.0));
        let (_, axis, theta) = axis_angle(&h);
        let expect = scale(&rotation(axis, theta + 0.1), axis_angle(&h).0);
        assert!(distance(&over_rotate(&h, 0.1), &expect) < 1e-12);
        let (_, _, theta) = axis_angle(&rx(1.9 * PI));
        assert!((theta - 0.1 * PI).abs() < 1e-12);
    }
}
