//! Characteristic q-series in Chern roots: Todd and Â classes, the symmetric-power character of
//! `⊗_l Sym_{q^l}(Ω¹ ⊕ T)`, the Witten class, its formal logarithm, and Eisenstein series.
//!
//! A [`CharRing`] element is a polynomial in the roots `x_1..x_n`, truncated at total degree `D`
//! (a [`JetSeries`] printed with variable `x`). A [`QSeries`] has such coefficients up to `q^Q`;
//! rank-zero series are plain rational q-series.

pub(crate) mod eisenstein;

pub use eisenstein::{
    bernoulli, divisor_sigma, eisenstein_from_q, eisenstein_lattice, eisenstein_lattice_extrapolated, eisenstein_q,
    LatticeSpec,
};

use std::fmt;

use crate::error::{shape, Error, Result};
use crate::jet::{JetSeries, MultiIndex};
use crate::scalar::{factorial, fmt_rational, rat, Rational};
use num_traits::{One, Zero};

/// Symmetric polynomials in `rank` Chern roots, truncated at total degree `degree`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct CharRing {
    pub rank: usize,
    pub degree: u32,
}

impl CharRing {
    pub fn new(rank: usize, degree: u32) -> Self {
        Self { rank, degree }
    }

    pub fn zero(&self) -> JetSeries {
        JetSeries::zero(self.rank, self.degree)
    }

    pub fn one(&self) -> JetSeries {
        JetSeries::one(self.rank, self.degree)
    }

    pub fn root(&self, i: usize) -> JetSeries {
        JetSeries::var(self.rank, self.degree, i)
    }

    /// `prod_i f(x_i)` for a one-variable series `f = sum_m coeffs[m] x^m`.
    pub fn multiplicative(&self, coeffs: &[Rational]) -> JetSeries {
        let mut out = self.one();
        for i in 0..self.rank {
            out = &out * &self.univariate(i, coeffs);
        }
        out
    }

    /// `f(x_i)`.
    pub fn univariate(&self, i: usize, coeffs: &[Rational]) -> JetSeries {
        let mut f = self.zero();
        for (m, c) in coeffs.iter().enumerate().take(self.degree as usize + 1) {
            let mut e = vec![0; self.rank];
            e[i] = m as u32;
            f.add_term(MultiIndex::from_exponents(e), c.clone());
        }
        f
    }

    /// `e^{a x_i}`.
    pub fn exp_root(&self, i: usize, a: i64) -> JetSeries {
        let coeffs: Vec<_> = (0..=self.degree)
            .map(|m| {
                let mut p = Rational::one();
                for _ in 0..m {
                    p *= rat(a);
                }
                p / Rational::from_integer(factorial(m))
            })
            .collect();
        self.univariate(i, &coeffs)
    }

    /// `ch_k = sum_i x_i^k / k!`.
    pub fn ch(&self, k: u32) -> JetSeries {
        let mut out = self.zero();
        let c = Rational::one() / Rational::from_integer(factorial(k));
        for i in 0..self.rank {
            let mut e = vec![0; self.rank];
            e[i] = k;
            out.add_term(MultiIndex::from_exponents(e), c.clone());
        }
        out
    }

    /// `c_1 = sum_i x_i`.
    pub fn c1(&self) -> JetSeries {
        self.ch(1)
    }

    /// `exp(f)` for `f` without constant term.
    pub fn exp(&self, f: &JetSeries) -> Result<JetSeries> {
        if !f.constant_term().is_zero() {
            return Err(Error::InvalidArgument("exp needs a series without constant term".into()));
        }
        let mut out = self.one();
        let mut power = self.one();
        for j in 1..=self.degree {
            power = &power * f;
            out = &out + &power.scale(&(Rational::one() / Rational::from_integer(factorial(j))));
        }
        Ok(out)
    }

    /// Normal form modulo the ideal generated by `ch_2`, i.e. by `x_1^2 + ... + x_n^2`:
    /// every `x_1^2` is rewritten as `-(x_2^2 + ... + x_n^2)`.
    pub fn reduce_mod_ch2(&self, f: &JetSeries) -> JetSeries {
        let mut pending: Vec<(MultiIndex, Rational)> = f.terms().map(|(a, c)| (a.clone(), c.clone())).collect();
        let mut out = self.zero();
        while let Some((a, c)) = pending.pop() {
            if a.get(0) < 2 {
                out.add_term(a, c);
                continue;
            }
            let mut e = a.exponents().to_vec();
            e[0] -= 2;
            for i in 1..self.rank {
                let mut e2 = e.clone();
                e2[i] += 2;
                pending.push((MultiIndex::from_exponents(e2), -c.clone()));
            }
        }
        out
    }
}

/// One-variable Taylor coefficients of `x / (1 - e^{-x}) = sum_m (-1)^m B_m x^m / m!`.
fn todd_coeffs(degree: u32) -> Vec<Rational> {
    (0..=degree)
        .map(|m| {
            let s = if m % 2 == 1 { -Rational::one() } else { Rational::one() };
            s * bernoulli(m) / Rational::from_integer(factorial(m))
        })
        .collect()
}

/// One-variable Taylor coefficients of `(x/2) / sinh(x/2)`, by inverting `sinh(x/2)/(x/2)`.
fn a_hat_coeffs(degree: u32) -> Vec<Rational> {
    let mut s = JetSeries::zero(1, degree);
    for k in 0..=degree / 2 {
        let c = Rational::one() / (Rational::from_integer(factorial(2 * k + 1)) * rat(4i64.pow(k)));
        s.add_term(MultiIndex::from_exponents(vec![2 * k]), c);
    }
    let inv = s.inverse().expect("unit constant term");
    (0..=degree).map(|m| inv.coeff(&MultiIndex::from_exponents(vec![m]))).collect()
}

/// `prod_i x_i / (1 - e^{-x_i})`.
pub fn todd(n: usize, degree: u32) -> JetSeries {
    CharRing::new(n, degree).multiplicative(&todd_coeffs(degree))
}

/// `prod_i (x_i/2) / sinh(x_i/2)`.
pub fn a_hat(n: usize, degree: u32) -> JetSeries {
    CharRing::new(n, degree).multiplicative(&a_hat_coeffs(degree))
}

/// Power series in `q` with [`CharRing`] coefficients, truncated after `q^{q_order}`.
#[derive(Clone, PartialEq)]
pub struct QSeries {
    ring: CharRing,
    coeffs: Vec<JetSeries>,
}

impl QSeries {
    pub fn zero(ring: CharRing, q_order: u32) -> Self {
        Self { ring, coeffs: vec![ring.zero(); q_order as usize + 1] }
    }

    pub fn one(ring: CharRing, q_order: u32) -> Self {
        Self::constant(ring, q_order, ring.one())
    }

    pub fn constant(ring: CharRing, q_order: u32, c: JetSeries) -> Self {
        let mut s = Self::zero(ring, q_order);
        s.coeffs[0] = c;
        s
    }

    /// A q-series with rational coefficients, embedded as constants of `ring`.
    pub fn from_rationals(ring: CharRing, q_order: u32, coeffs: &[Rational]) -> Self {
        let mut s = Self::zero(ring, q_order);
        for (m, c) in coeffs.iter().enumerate().take(q_order as usize + 1) {
            s.coeffs[m] = JetSeries::constant(ring.rank, ring.degree, c.clone());
        }
        s
    }

    pub fn ring(&self) -> CharRing {
        self.ring
    }

    pub fn q_order(&self) -> u32 {
        self.coeffs.len() as u32 - 1
    }

    pub fn coeff(&self, m: u32) -> &JetSeries {
        &self.coeffs[m as usize]
    }

    pub fn coeffs(&self) -> &[JetSeries] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, m: u32, c: JetSeries) {
        if m <= self.q_order() {
            self.coeffs[m as usize] = c;
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(JetSeries::is_zero)
    }

    fn check(&self, other: &Self) -> Result<()> {
        if self.ring != other.ring || self.coeffs.len() != other.coeffs.len() {
            return Err(shape("q-series over different rings or q-orders"));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { ring: self.ring, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect() })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        Ok(Self { ring: self.ring, coeffs: self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect() })
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check(other)?;
        let q = self.coeffs.len();
        let mut out = Self::zero(self.ring, self.q_order());
        for i in 0..q {
            if self.coeffs[i].is_zero() {
                continue;
            }
            for j in 0..q - i {
                out.coeffs[i + j] = &out.coeffs[i + j] + &(&self.coeffs[i] * &other.coeffs[j]);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &JetSeries) -> Self {
        Self { ring: self.ring, coeffs: self.coeffs.iter().map(|a| a * c).collect() }
    }

    pub fn map(&self, f: impl Fn(&JetSeries) -> JetSeries) -> Self {
        Self { ring: self.ring, coeffs: self.coeffs.iter().map(f).collect() }
    }

    /// Multiplicative inverse; the `q^0` coefficient must be a unit.
    pub fn inverse(&self) -> Result<Self> {
        let inv0 = self.coeffs[0].inverse()?;
        let mut out = Self::zero(self.ring, self.q_order());
        out.coeffs[0] = inv0.clone();
        for m in 1..self.coeffs.len() {
            let mut acc = self.ring.zero();
            for i in 1..=m {
                acc = &acc + &(&self.coeffs[i] * &out.coeffs[m - i]);
            }
            out.coeffs[m] = -&(&acc * &inv0);
        }
        Ok(out)
    }

    /// `exp(f)` for `f` with vanishing constant coefficient (nilpotent in the joint truncation).
    pub fn exp(&self) -> Result<Self> {
        if !self.coeffs[0].constant_term().is_zero() {
            return Err(Error::InvalidArgument("exp needs a series without constant term".into()));
        }
        let mut out = Self::one(self.ring, self.q_order());
        let mut power = out.clone();
        for j in 1..=(self.ring.degree + self.q_order()) {
            power = power.try_mul(self)?;
            if power.is_zero() {
                break;
            }
            let c = Rational::one() / Rational::from_integer(factorial(j));
            out = out.try_add(&power.map(|a| a.scale(&c)))?;
        }
        Ok(out)
    }

    /// The `x -> 0` specialization: constant terms of every coefficient.
    pub fn at_zero_roots(&self) -> Vec<Rational> {
        self.coeffs.iter().map(JetSeries::constant_term).collect()
    }

    /// `(q-power, root exponents, coefficient)` for every nonzero entry, in canonical order.
    pub fn entries(&self) -> Vec<(u32, Vec<u32>, Rational)> {
        let mut out = Vec::new();
        for (m, c) in self.coeffs.iter().enumerate() {
            for (a, v) in c.terms() {
                out.push((m as u32, a.exponents().to_vec(), v.clone()));
            }
        }
        out
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (m, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                f.write_str(" + ")?;
            }
            first = false;
            let body = c.to_string_with("x");
            match (m, c.num_terms()) {
                (0, _) => f.write_str(&body)?,
                (_, 1) if c.constant_term() == Rational::one() => write!(f, "q^{m}")?,
                _ => write!(f, "({body})*q^{m}")?,
            }
        }
        if first {
            f.write_str("0")?;
        }
        Ok(())
    }
}

impl fmt::Debug for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "QSeries({self})")
    }
}

/// `prod_{k=1}^{Q} (1 - q^k)^e` with rational coefficients.
pub fn eta_power(ring: CharRing, q_order: u32, e: i64) -> QSeries {
    let mut base = QSeries::one(ring, q_order);
    for k in 1..=q_order {
        let mut f = QSeries::one(ring, q_order);
        f.set_coeff(k, JetSeries::constant(ring.rank, ring.degree, -Rational::one()));
        base = base.try_mul(&f).expect("same ring");
    }
    let base = if e < 0 { base.inverse().expect("unit constant") } else { base };
    let mut out = QSeries::one(ring, q_order);
    for _ in 0..e.unsigned_abs() {
        out = out.try_mul(&base).expect("same ring");
    }
    out
}

/// `prod_{l>=1} prod_i [(1 - q^l e^{x_i})(1 - q^l e^{-x_i})]^{-1}`, expanded geometrically.
pub fn ch_sym_product(n: usize, degree: u32, q_order: u32) -> QSeries {
    let ring = CharRing::new(n, degree);
    let mut out = QSeries::one(ring, q_order);
    for l in 1..=q_order {
        for i in 0..n {
            for sign in [1i64, -1] {
                let mut f = QSeries::zero(ring, q_order);
                for a in 0..=q_order / l {
                    f.set_coeff(a * l, ring.exp_root(i, sign * a as i64));
                }
                out = out.try_mul(&f).expect("same ring");
            }
        }
    }
    out
}

/// `Wit = Â · ch(⊗_l Sym_{q^l}(Ω¹ ⊕ T)) · prod_k (1 - q^k)^{2n}`.
pub fn witten_class(n: usize, degree: u32, q_order: u32) -> QSeries {
    let ring = CharRing::new(n, degree);
    ch_sym_product(n, degree, q_order)
        .try_mul(&eta_power(ring, q_order, 2 * n as i64))
        .expect("same ring")
        .scale(&a_hat(n, degree))
}

/// `Td · ch(⊗ Sym) - prod_k (1 - q^k)^{-2n} · e^{c_1/2} · Wit`; identically zero.
pub fn char_identity_check(n: usize, degree: u32, q_order: u32) -> QSeries {
    let ring = CharRing::new(n, degree);
    let lhs = ch_sym_product(n, degree, q_order).scale(&todd(n, degree));
    let half_c1 = ring.c1().scale(&crate::scalar::ratio(1, 2));
    let rhs = witten_class(n, degree, q_order)
        .try_mul(&eta_power(ring, q_order, -2 * n as i64))
        .expect("same ring")
        .scale(&ring.exp(&half_c1).expect("no constant term"));
    lhs.try_sub(&rhs).expect("same ring")
}

fn log_witten_from(n: usize, degree: u32, q_order: u32, first_k: u32) -> QSeries {
    let ring = CharRing::new(n, degree);
    let mut out = QSeries::zero(ring, q_order);
    for k in first_k..=degree / 2 {
        let r = eisenstein::eisenstein_coeffs(2 * k, q_order);
        let term = QSeries::from_rationals(ring, q_order, &r).scale(&ring.ch(2 * k));
        out = out.try_add(&term).expect("same ring");
    }
    out
}

/// `log Wit_n = sum_{k>=2} R_{2k}(q) ch_{2k}`.
pub fn log_witten(n: usize, degree: u32, q_order: u32) -> QSeries {
    log_witten_from(n, degree, q_order, 2)
}

/// Residuals of `exp(log Wit_n) - Wit`.
#[derive(Clone, Debug)]
pub struct WittenExpReport {
    /// Taken literally; carries the missing `R_2 ch_2` term.
    pub literal: QSeries,
    /// The literal residual reduced modulo `ch_2`.
    pub mod_ch2: QSeries,
    /// With the `k = 1` term `R_2(q) ch_2` included in the logarithm.
    pub with_k1: QSeries,
}

impl WittenExpReport {
    pub fn holds_mod_ch2(&self) -> bool {
        self.mod_ch2.is_zero()
    }
}

pub fn witten_exp_check(n: usize, degree: u32, q_order: u32) -> Result<WittenExpReport> {
    let ring = CharRing::new(n, degree);
    let wit = witten_class(n, degree, q_order);
    let literal = log_witten(n, degree, q_order).exp()?.try_sub(&wit)?;
    let mod_ch2 = literal.map(|c| ring.reduce_mod_ch2(c));
    let with_k1 = log_witten_from(n, degree, q_order, 1).exp()?.try_sub(&wit)?;
    Ok(WittenExpReport { literal, mod_ch2, with_k1 })
}

/// Number of partitions of `0..=max` by direct enumeration of non-increasing part sequences.
pub fn partition_counts(max: u32) -> Vec<u64> {
    fn count(rest: u32, largest: u32) -> u64 {
        if rest == 0 {
            return 1;
        }
        (1..=largest.min(rest)).map(|p| count(rest - p, p)).sum()
    }
    (0..=max).map(|m| count(m, m)).collect()
}

/// Partitions with `colors` colors: the `colors`-fold convolution of [`partition_counts`].
pub fn colored_partition_counts(colors: u32, max: u32) -> Vec<u64> {
    let p = partition_counts(max);
    let mut out = vec![0u64; max as usize + 1];
    out[0] = 1;
    for _ in 0..colors {
        let mut next = vec![0u64; max as usize + 1];
        for i in 0..=max as usize {
            for j in 0..=max as usize - i {
                next[i + j] += out[i] * p[j];
            }
        }
        out = next;
    }
    out
}

/// Graded dimensions of `CDO_n` over the c_0-polynomials: the `x -> 0` specialization of
/// [`ch_sym_product`], i.e. the coefficients of `prod_k (1 - q^k)^{-2n}`.
pub fn dimension_series(n: usize, q_order: u32) -> Vec<Rational> {
    ch_sym_product(n, 0, q_order).at_zero_roots()
}

/// Renders a rational q-series `c_0 + c_1 q + ...`.
pub fn fmt_rational_series(coeffs: &[Rational]) -> String {
    let mut parts = Vec::new();
    for (m, c) in coeffs.iter().enumerate() {
        if c.is_zero() {
            continue;
        }
        parts.push(match m {
            0 => fmt_rational(c),
            1 => format!("{}*q", fmt_rational(c)),
            _ => format!("{}*q^{m}", fmt_rational(c)),
        });
    }
    if parts.is_empty() {
        "0".into()
    } else {
        parts.join(" + ")
    }
}
