//! Rationals extended by two square-zero parameters `s`, `u`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::scalar::{Coeff, Rational};

/// `a + b s + c u + d su` with `s^2 = u^2 = 0`.
#[derive(Clone, PartialEq, Eq, Default)]
pub struct NilpotentParam {
    pub constant: Rational,
    pub s: Rational,
    pub u: Rational,
    pub su: Rational,
}

impl NilpotentParam {
    pub fn new(constant: Rational, s: Rational, u: Rational, su: Rational) -> Self {
        Self { constant, s, u, su }
    }

    pub fn param_s() -> Self {
        Self { s: Rational::one(), ..Self::zero() }
    }

    pub fn param_u() -> Self {
        Self { u: Rational::one(), ..Self::zero() }
    }
}

impl fmt::Debug for NilpotentParam {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} + {}s + {}u + {}su)", self.constant, self.s, self.u, self.su)
    }
}

impl Zero for NilpotentParam {
    fn zero() -> Self {
        Self {
            constant: Rational::zero(),
            s: Rational::zero(),
            u: Rational::zero(),
            su: Rational::zero(),
        }
    }

    fn is_zero(&self) -> bool {
        self.constant.is_zero() && self.s.is_zero() && self.u.is_zero() && self.su.is_zero()
    }
}

impl One for NilpotentParam {
    fn one() -> Self {
        Self { constant: Rational::one(), ..Self::zero() }
    }
}

impl Add for NilpotentParam {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self {
            constant: self.constant + o.constant,
            s: self.s + o.s,
            u: self.u + o.u,
            su: self.su + o.su,
        }
    }
}

impl Sub for NilpotentParam {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        self + (-o)
    }
}

impl Neg for NilpotentParam {
    type Output = Self;
    fn neg(self) -> Self {
        Self { constant: -self.constant, s: -self.s, u: -self.u, su: -self.su }
    }
}

impl Mul for NilpotentParam {
    type Output = Self;
    fn mul(self, o: Self) -> Self {
        Self {
            constant: &self.constant * &o.constant,
            s: &self.constant * &o.s + &self.s * &o.constant,
            u: &self.constant * &o.u + &self.u * &o.constant,
            su: &self.constant * &o.su
                + &self.s * &o.u
                + &self.u * &o.s
                + &self.su * &o.constant,
        }
    }
}

impl Coeff for NilpotentParam {
    fn from_rational(r: &Rational) -> Self {
        Self { constant: r.clone(), ..Self::zero() }
    }

    fn try_inverse(&self) -> Option<Self> {
        if self.constant.is_zero() {
            return None;
        }
        // (a + n)^{-1} = a^{-1} - a^{-2} n + a^{-3} n^2, and n^2 = 2 s u (s-part)(u-part).
        let a_inv = self.constant.recip();
        let a2 = &a_inv * &a_inv;
        let a3 = &a2 * &a_inv;
        Some(Self {
            constant: a_inv,
            s: -(&a2 * &self.s),
            u: -(&a2 * &self.u),
            su: -(&a2 * &self.su) + Rational::from_integer(2.into()) * a3 * &self.s * &self.u,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn parameters_square_to_zero() {
        let s = NilpotentParam::param_s();
        let u = NilpotentParam::param_u();
        assert!((s.clone() * s.clone()).is_zero());
        assert!((u.clone() * u.clone()).is_zero());
        assert_eq!((s * u).su, rat(1));
    }

    #[test]
    fn inverse_is_two_sided() {
        let x = NilpotentParam::new(rat(3), rat(2), rat(-5), rat(7));
        let y = x.try_inverse().unwrap();
        assert_eq!(x.clone() * y.clone(), NilpotentParam::one());
        assert_eq!(y * x, NilpotentParam::one());
        assert!(NilpotentParam::param_s().try_inverse().is_none());
    }
}
