//! Global signs and scales fixed once against a single nonzero instance each.
//! Every other instance is then a test of uniformity.

use crate::scalar::{rat, Rational};

/// `s` in `[rho X, rho Y] - rho [X, Y] = s rho_{Omega^2}(ch_2(X, Y))`.
/// Calibration instance: `X = t1 t2 d1`, `Y = t1 t2 d2` on `b[1,-1]`.
pub const MSV_SIGN: i64 = -1;

/// `kappa` in `rho_{Omega^2}(omega) b^k_{-1} = kappa tau_{Omega^1}(iota_{d_k} omega)`.
/// Calibration instance: `dt1^dt2` on `b[1,-1]`, where the homotopy path gives `-c[2,-1]`.
pub const RHO_OMEGA2_DIRECT_SCALE: i64 = -1;

/// `s'` in `alpha(X) = s' c_1(X)` for the conformal anomaly. Calibration instance: `X = t^2 d_t`.
pub const C1_SIGN: i64 = 1;

/// `kappa` in `D_1 alpha~(X, Y) = kappa ch_2(X, Y)`. Calibration instance: `X = t1 t2 d1`, `Y = t1 t2 d2`.
pub const D1_CONSTANT: i64 = -2;

pub fn msv_sign() -> Rational {
    rat(MSV_SIGN)
}

pub fn rho_omega2_direct_scale() -> Rational {
    rat(RHO_OMEGA2_DIRECT_SCALE)
}

pub fn c1_sign() -> Rational {
    rat(C1_SIGN)
}

pub fn d1_constant() -> Rational {
    rat(D1_CONSTANT)
}

/// Composite measure constant of the two-vertex wheel in the `d²z = dx dy` convention: the
/// `(dz - dw) ∧ (dz̄ - dw̄)` factor and the dropped powers of 2 and π. The plain integral tends
/// to `(1/8π) ∫ F ∂G`, the stated limit is `1/(2(4π)²) ∫ F ∂G`, hence `1/(4π)`.
/// Calibration instance: the standard bump pair in the wheel tests.
pub const WHEEL2_SCALE: f64 = 1.0 / (4.0 * std::f64::consts::PI);

pub fn wheel2_scale() -> f64 {
    WHEEL2_SCALE
}
