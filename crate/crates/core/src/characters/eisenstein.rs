//! Eisenstein series `E_{2k}(τ) = Σ'_{λ ∈ ℤ + τℤ} λ^{-2k}`, exactly as normalized rational
//! q-series and numerically as lattice sums.

use std::f64::consts::PI;

use num_bigint::BigInt;
use num_complex::Complex64;
use num_traits::{One, Zero};

use super::{CharRing, QSeries};
use crate::error::{Error, Result};
use crate::scalar::{binomial, factorial, to_f64, Rational};

/// Bernoulli numbers with `B_1 = -1/2`.
pub fn bernoulli(m: u32) -> Rational {
    let mut b: Vec<Rational> = Vec::with_capacity(m as usize + 1);
    b.push(Rational::one());
    for j in 1..=m {
        let mut acc = Rational::zero();
        for (k, bk) in b.iter().enumerate() {
            acc += Rational::from_integer(binomial(j as i64 + 1, k as u32)) * bk;
        }
        b.push(-acc / Rational::from_integer(BigInt::from(j + 1)));
    }
    b.pop().expect("nonempty")
}

/// `σ_k(m) = Σ_{d | m} d^k`.
pub fn divisor_sigma(k: u32, m: u64) -> BigInt {
    (1..=m).filter(|d| m % d == 0).map(|d| BigInt::from(d).pow(k)).sum()
}

fn check_weight(weight: u32) -> Result<()> {
    if weight < 4 || weight % 2 == 1 {
        return Err(Error::InvalidArgument(format!(
            "Eisenstein weight must be even and at least 4, got {weight}"
        )));
    }
    Ok(())
}

pub(super) fn eisenstein_coeffs(weight: u32, q_order: u32) -> Vec<Rational> {
    let mut out = vec![-bernoulli(weight) / Rational::from_integer(BigInt::from(weight))];
    for m in 1..=q_order as u64 {
        out.push(Rational::from_integer(divisor_sigma(weight - 1, m) * 2));
    }
    out
}

/// `R_{2k}(q) = -B_{2k}/(2k) + 2 Σ_{m≥1} σ_{2k-1}(m) q^m = (2k-1)! (2πi)^{-2k} E_{2k}`.
pub fn eisenstein_q(weight: u32, q_order: u32) -> Result<QSeries> {
    check_weight(weight)?;
    Ok(QSeries::from_rationals(CharRing::new(0, 0), q_order, &eisenstein_coeffs(weight, q_order)))
}

/// The lattice `ℤ + τℤ` with a square summation cutoff `|m|, |n| ≤ R`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LatticeSpec {
    pub tau: Complex64,
    pub cutoff: u32,
}

impl LatticeSpec {
    pub fn new(tau: Complex64, cutoff: u32) -> Result<Self> {
        if !(tau.im > 0.0) {
            return Err(Error::InvalidArgument(format!("Im tau must be positive, got {}", tau.im)));
        }
        if cutoff == 0 {
            return Err(Error::InvalidArgument("cutoff must be at least 1".into()));
        }
        Ok(Self { tau, cutoff })
    }
}

/// `Σ' f(λ)` over the square shells `max(|m|, |n|) = r`, `r = R..1`, pairing `λ` with `-λ`.
/// `f` must be even; the shells are added from the outside in.
pub(crate) fn shell_sum(tau: Complex64, cutoff: u32, f: impl Fn(Complex64) -> Complex64) -> Complex64 {
    let mut total = Complex64::zero();
    for r in (1..=cutoff as i64).rev() {
        let mut shell = Complex64::zero();
        // half of the shell: n = r with m in -r..r, and m = r with n in -r+1..r-1 ... covered by
        // the points with (n > 0) or (n == 0 and m > 0).
        for m in -r..=r {
            shell += f(Complex64::new(m as f64, 0.0) + tau * r as f64);
        }
        for n in (-r + 1)..r {
            shell += f(Complex64::new(r as f64, 0.0) + tau * n as f64);
        }
        total += shell * 2.0;
    }
    total
}

/// Truncated lattice sum `Σ'_{|m|,|n| ≤ R} (m + nτ)^{-2k}`.
pub fn eisenstein_lattice(weight: u32, spec: &LatticeSpec) -> Result<Complex64> {
    check_weight(weight)?;
    Ok(shell_sum(spec.tau, spec.cutoff, |l| l.powi(-(weight as i32))))
}

/// The lattice sum with one Richardson step against the shell tail `~ R^{2 - 2k}`:
/// `(2^p S(R) - S(R/2)) / (2^p - 1)`, `p = 2k - 2`.
pub fn eisenstein_lattice_extrapolated(weight: u32, spec: &LatticeSpec) -> Result<Complex64> {
    let full = eisenstein_lattice(weight, spec)?;
    if spec.cutoff < 2 {
        return Ok(full);
    }
    let half = eisenstein_lattice(weight, &LatticeSpec { tau: spec.tau, cutoff: spec.cutoff / 2 })?;
    let p = 2f64.powi(weight as i32 - 2);
    Ok((full * p - half) / (p - 1.0))
}

/// `E_{2k}(τ) = (2πi)^{2k} / (2k-1)! · R_{2k}(e^{2πiτ})`, summed to `q^{q_order}`.
pub fn eisenstein_from_q(weight: u32, tau: Complex64, q_order: u32) -> Result<Complex64> {
    check_weight(weight)?;
    let q = (Complex64::i() * 2.0 * PI * tau).exp();
    let mut acc = Complex64::zero();
    let mut qm = Complex64::one();
    for c in eisenstein_coeffs(weight, q_order) {
        acc += qm * to_f64(&c);
        qm *= q;
    }
    let pre = (Complex64::i() * 2.0 * PI).powi(weight as i32) / to_f64(&Rational::from_integer(factorial(weight - 1)));
    Ok(acc * pre)
}
