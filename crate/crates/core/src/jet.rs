//! Truncated formal power series in `t_1..t_n`.
//!
//! A [`JetSeries`] of rank `n` and order `K` is an exact representative of a
//! class in `Q[[t]] / m^{K+1}`. Binary operations require matching `(n, K)`;
//! the operator impls panic on mismatch while the `try_*` methods report it.
//!
//! Differentiation loses the top degree: the partial derivative of an order-`K`
//! series is only determined through degree `K - 1`. Callers that need the
//! result to full order should build their inputs at order `K + 1`.

use std::cmp::Ordering;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{shape, Error, Result};
use crate::scalar::{fmt_rational, Coeff, Rational};

/// Exponent vector, ordered graded-lexicographically: lower total degree first,
/// then larger powers of earlier variables first (`t1^2 < t1 t2 < t2^2`).
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct MultiIndex(Vec<u32>);

impl MultiIndex {
    pub fn zero(n: usize) -> Self {
        MultiIndex(vec![0; n])
    }

    pub fn unit(n: usize, i: usize) -> Self {
        let mut v = vec![0; n];
        v[i] = 1;
        MultiIndex(v)
    }

    pub fn from_exponents(e: Vec<u32>) -> Self {
        MultiIndex(e)
    }

    pub fn exponents(&self) -> &[u32] {
        &self.0
    }

    pub fn rank(&self) -> usize {
        self.0.len()
    }

    pub fn degree(&self) -> u32 {
        self.0.iter().sum()
    }

    pub fn get(&self, i: usize) -> u32 {
        self.0[i]
    }

    pub fn plus(&self, other: &MultiIndex) -> MultiIndex {
        MultiIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Decrements exponent `i`, or `None` if it is already zero.
    pub fn lowered(&self, i: usize) -> Option<MultiIndex> {
        if self.0[i] == 0 {
            return None;
        }
        let mut e = self.0.clone();
        e[i] -= 1;
        Some(MultiIndex(e))
    }

    pub fn raised(&self, i: usize) -> MultiIndex {
        let mut e = self.0.clone();
        e[i] += 1;
        MultiIndex(e)
    }

    /// All exponent vectors of rank `n` with total degree at most `max_degree`,
    /// in canonical order.
    pub fn all_up_to(n: usize, max_degree: u32) -> Vec<MultiIndex> {
        let mut out = Vec::new();
        for d in 0..=max_degree {
            out.extend(Self::all_of_degree(n, d));
        }
        out
    }

    pub fn all_of_degree(n: usize, degree: u32) -> Vec<MultiIndex> {
        fn rec(n: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<MultiIndex>) {
            if cur.len() + 1 == n {
                cur.push(left);
                out.push(MultiIndex(cur.clone()));
                cur.pop();
                return;
            }
            for e in (0..=left).rev() {
                cur.push(e);
                rec(n, left - e, cur, out);
                cur.pop();
            }
        }
        let mut out = Vec::new();
        if n == 0 {
            if degree == 0 {
                out.push(MultiIndex(vec![]));
            }
            return out;
        }
        rec(n, degree, &mut Vec::with_capacity(n), &mut out);
        out
    }
}

impl Ord for MultiIndex {
    fn cmp(&self, other: &Self) -> Ordering {
        self.degree()
            .cmp(&other.degree())
            .then_with(|| other.0.cmp(&self.0))
    }
}

impl PartialOrd for MultiIndex {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Element of `R[[t_1..t_n]] / m^{K+1}` with sparse coefficients.
#[derive(Clone, PartialEq)]
pub struct JetSeries<R: Coeff = Rational> {
    rank: usize,
    order: u32,
    terms: BTreeMap<MultiIndex, R>,
}

impl<R: Coeff> JetSeries<R> {
    pub fn zero(rank: usize, order: u32) -> Self {
        Self { rank, order, terms: BTreeMap::new() }
    }

    pub fn constant(rank: usize, order: u32, c: R) -> Self {
        let mut s = Self::zero(rank, order);
        s.add_term(MultiIndex::zero(rank), c);
        s
    }

    pub fn one(rank: usize, order: u32) -> Self {
        Self::constant(rank, order, R::one())
    }

    /// The coordinate `t_{i+1}` (0-based `i`).
    pub fn var(rank: usize, order: u32, i: usize) -> Self {
        Self::monomial(rank, order, MultiIndex::unit(rank, i), R::one())
    }

    pub fn monomial(rank: usize, order: u32, alpha: MultiIndex, c: R) -> Self {
        assert_eq!(alpha.rank(), rank, "multi-index rank mismatch");
        let mut s = Self::zero(rank, order);
        s.add_term(alpha, c);
        s
    }

    pub fn from_terms(rank: usize, order: u32, terms: impl IntoIterator<Item = (MultiIndex, R)>) -> Self {
        let mut s = Self::zero(rank, order);
        for (a, c) in terms {
            assert_eq!(a.rank(), rank, "multi-index rank mismatch");
            s.add_term(a, c);
        }
        s
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn terms(&self) -> impl Iterator<Item = (&MultiIndex, &R)> {
        self.terms.iter()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, alpha: &MultiIndex) -> R {
        self.terms.get(alpha).cloned().unwrap_or_else(R::zero)
    }

    pub fn constant_term(&self) -> R {
        self.coeff(&MultiIndex::zero(self.rank))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Highest degree carrying a nonzero coefficient.
    pub fn max_degree(&self) -> Option<u32> {
        self.terms.keys().map(|a| a.degree()).max()
    }

    /// Lowest degree carrying a nonzero coefficient.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().next().map(|a| a.degree())
    }

    /// Adds `c t^alpha`, dropping it if `|alpha| > K`.
    pub fn add_term(&mut self, alpha: MultiIndex, c: R) {
        if alpha.degree() > self.order || c.is_zero() {
            return;
        }
        match self.terms.entry(alpha) {
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = e.get().clone() + c;
                if v.is_zero() {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank || self.order != other.order {
            return Err(shape(format!(
                "jet (n={}, K={}) vs (n={}, K={})",
                self.rank, self.order, other.rank, other.order
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (a, c) in &other.terms {
            out.add_term(a.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&-other)
    }

    pub fn try_mul(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = Self::zero(self.rank, self.order);
        for (a, x) in &self.terms {
            let da = a.degree();
            for (b, y) in &other.terms {
                if da + b.degree() > self.order {
                    // Terms are sorted by degree, so the rest are higher still.
                    break;
                }
                out.add_term(a.plus(b), x.clone() * y.clone());
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &R) -> Self {
        if c.is_zero() {
            return Self::zero(self.rank, self.order);
        }
        let mut out = Self::zero(self.rank, self.order);
        for (a, x) in &self.terms {
            out.add_term(a.clone(), x.clone() * c.clone());
        }
        out
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.scale(&R::from_rational(c))
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.rank, self.order);
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }

    /// Formal partial derivative along `t_{i+1}` (0-based `i`). The result keeps
    /// order `K`; its degree-`K` coefficient is not determined by the input.
    pub fn partial(&self, i: usize) -> Self {
        let mut out = Self::zero(self.rank, self.order);
        for (a, c) in &self.terms {
            if let Some(b) = a.lowered(i) {
                out.add_term(b, c.clone() * R::from_int(a.get(i) as i64));
            }
        }
        out
    }

    /// 1-based checked variant of [`JetSeries::partial`].
    pub fn try_partial(&self, i: usize) -> Result<Self> {
        if i == 0 || i > self.rank {
            return Err(Error::IndexOutOfRange { index: i, rank: self.rank });
        }
        Ok(self.partial(i - 1))
    }

    /// Multiplies by `t_{i+1}` (0-based `i`).
    pub fn times_var(&self, i: usize) -> Self {
        let mut out = Self::zero(self.rank, self.order);
        for (a, c) in &self.terms {
            out.add_term(a.raised(i), c.clone());
        }
        out
    }

    /// Re-reads the same representative at another order: coefficients above
    /// the new order are dropped, nothing is invented when the order grows.
    pub fn with_order(&self, order: u32) -> Self {
        let mut out = Self::zero(self.rank, order);
        for (a, c) in &self.terms {
            out.add_term(a.clone(), c.clone());
        }
        out
    }

    /// Keeps only the terms of degree at most `d`, without changing the order.
    pub fn truncated_to(&self, d: u32) -> Self {
        let mut out = Self::zero(self.rank, self.order);
        for (a, c) in &self.terms {
            if a.degree() <= d {
                out.add_term(a.clone(), c.clone());
            }
        }
        out
    }

    /// The homogeneous component of degree `d`.
    pub fn homogeneous_part(&self, d: u32) -> Self {
        let mut out = Self::zero(self.rank, self.order);
        for (a, c) in &self.terms {
            if a.degree() == d {
                out.add_term(a.clone(), c.clone());
            }
        }
        out
    }

    /// Substitutes `t_i -> subs[i]`. Every substitute must have zero constant
    /// term so that the result is exact at the truncation order.
    pub fn substitute(&self, subs: &[JetSeries<R>]) -> Result<Self> {
        if subs.len() != self.rank {
            return Err(shape(format!("substitution needs {} components, got {}", self.rank, subs.len())));
        }
        let rank = subs.first().map(|s| s.rank).unwrap_or(0);
        let order = subs.iter().map(|s| s.order).min().unwrap_or(self.order).min(self.order);
        for (i, s) in subs.iter().enumerate() {
            if s.rank != rank {
                return Err(shape("substitutes of different rank"));
            }
            if !s.constant_term().is_zero() {
                return Err(Error::NonZeroConstantTerm(i + 1));
            }
        }
        let subs: Vec<_> = subs.iter().map(|s| s.with_order(order)).collect();
        // powers[i][e] = subs[i]^e
        let max_deg = self.terms.keys().flat_map(|a| a.exponents().iter().copied()).max().unwrap_or(0);
        let max_deg = max_deg.min(order);
        let powers: Vec<Vec<JetSeries<R>>> = subs
            .iter()
            .map(|s| {
                let mut p = vec![JetSeries::one(rank, order)];
                for e in 1..=max_deg as usize {
                    let next = &p[e - 1] * s;
                    p.push(next);
                }
                p
            })
            .collect();
        let mut out = JetSeries::zero(rank, order);
        for (a, c) in &self.terms {
            if a.degree() > order {
                break;
            }
            let mut term = JetSeries::constant(rank, order, c.clone());
            for (i, &e) in a.exponents().iter().enumerate() {
                if e > 0 {
                    term = &term * &powers[i][e as usize];
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Multiplicative inverse, by Newton iteration on the constant term.
    pub fn inverse(&self) -> Result<Self> {
        let c0 = self
            .constant_term()
            .try_inverse()
            .ok_or_else(|| Error::NotInvertible("jet with non-invertible constant term".into()))?;
        let mut x = JetSeries::constant(self.rank, self.order, c0);
        let two = JetSeries::constant(self.rank, self.order, R::from_int(2));
        let mut precision = 1u32;
        while precision <= self.order {
            x = &x * &(&two - &(self * &x));
            precision *= 2;
        }
        Ok(x)
    }

    pub fn map_coeffs<S: Coeff>(&self, f: impl Fn(&R) -> S) -> JetSeries<S> {
        let mut out = JetSeries::zero(self.rank, self.order);
        for (a, c) in &self.terms {
            out.add_term(a.clone(), f(c));
        }
        out
    }
}

impl JetSeries<Rational> {
    /// Evaluates the underlying polynomial representative at a rational point.
    pub fn evaluate(&self, point: &[Rational]) -> Rational {
        let mut acc = Rational::zero();
        for (a, c) in &self.terms {
            let mut m = c.clone();
            for (i, &e) in a.exponents().iter().enumerate() {
                for _ in 0..e {
                    m *= &point[i];
                }
            }
            acc += m;
        }
        acc
    }

    /// Renders with variable prefix `t` in the shared expression grammar.
    pub fn to_expr_string(&self) -> String {
        self.to_string_with("t")
    }

    pub fn to_string_with(&self, var: &str) -> String {
        let mut out = String::new();
        for (idx, (a, c)) in self.terms.iter().enumerate() {
            let mono = monomial_string(a, var);
            let neg = c < &Rational::zero();
            let abs = if neg { -c.clone() } else { c.clone() };
            if idx == 0 {
                if neg {
                    out.push('-');
                }
            } else {
                out.push_str(if neg { " - " } else { " + " });
            }
            if mono.is_empty() {
                out.push_str(&fmt_rational(&abs));
            } else if abs.is_one() {
                out.push_str(&mono);
            } else {
                out.push_str(&fmt_rational(&abs));
                out.push('*');
                out.push_str(&mono);
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

pub(crate) fn monomial_string(a: &MultiIndex, var: &str) -> String {
    let mut parts = Vec::new();
    for (i, &e) in a.exponents().iter().enumerate() {
        match e {
            0 => {}
            1 => parts.push(format!("{var}{}", i + 1)),
            _ => parts.push(format!("{var}{}^{e}", i + 1)),
        }
    }
    parts.join("*")
}

impl fmt::Display for JetSeries<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string())
    }
}

impl<R: Coeff> fmt::Debug for JetSeries<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Jet(n={}, K={}; ", self.rank, self.order)?;
        f.debug_map().entries(self.terms.iter().map(|(a, c)| (a.exponents(), c))).finish()?;
        write!(f, ")")
    }
}

impl<'a, R: Coeff> Add for &'a JetSeries<R> {
    type Output = JetSeries<R>;
    fn add(self, o: Self) -> JetSeries<R> {
        self.try_add(o).expect("jet addition")
    }
}

impl<'a, R: Coeff> Sub for &'a JetSeries<R> {
    type Output = JetSeries<R>;
    fn sub(self, o: Self) -> JetSeries<R> {
        self.try_sub(o).expect("jet subtraction")
    }
}

impl<'a, R: Coeff> Mul for &'a JetSeries<R> {
    type Output = JetSeries<R>;
    fn mul(self, o: Self) -> JetSeries<R> {
        self.try_mul(o).expect("jet multiplication")
    }
}

impl<'a, R: Coeff> Neg for &'a JetSeries<R> {
    type Output = JetSeries<R>;
    fn neg(self) -> JetSeries<R> {
        self.scale(&-R::one())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    fn t(n: usize, k: u32, i: usize) -> JetSeries {
        JetSeries::var(n, k, i)
    }

    #[test]
    fn difference_of_squares() {
        let one = JetSeries::one(1, 2);
        let p = &(&one + &t(1, 2, 0)) * &(&one - &t(1, 2, 0));
        assert_eq!(p, &one - &t(1, 2, 0).pow(2));
    }

    #[test]
    fn truncation_kills_top_degree() {
        assert!((&t(1, 1, 0) * &t(1, 1, 0)).is_zero());
    }

    #[test]
    fn binomial_square() {
        let s = &t(2, 3, 0) + &t(2, 3, 1);
        let sq = &s * &s;
        assert_eq!(sq.to_string(), "t1^2 + 2*t1*t2 + t2^2");
    }

    #[test]
    fn partial_examples() {
        let f = &t(2, 3, 0).pow(2) * &t(2, 3, 1);
        assert_eq!(f.try_partial(1).unwrap(), (&t(2, 3, 0) * &t(2, 3, 1)).scale(&rat(2)));
        assert!(t(2, 3, 0).try_partial(2).unwrap().is_zero());
        assert_eq!(t(1, 3, 0).pow(3).partial(0), t(1, 3, 0).pow(2).scale(&rat(3)));
        assert_eq!(f.try_partial(3), Err(Error::IndexOutOfRange { index: 3, rank: 2 }));
        assert_eq!(f.try_partial(0), Err(Error::IndexOutOfRange { index: 0, rank: 2 }));
    }

    #[test]
    fn mismatched_shapes_are_rejected() {
        let a = t(2, 3, 0);
        assert!(matches!(a.try_mul(&t(2, 4, 0)), Err(Error::Shape(_))));
        assert!(matches!(a.try_add(&t(3, 3, 0)), Err(Error::Shape(_))));
    }

    #[test]
    fn graded_lex_order() {
        let all = MultiIndex::all_up_to(2, 2);
        let e: Vec<_> = all.iter().map(|a| a.exponents().to_vec()).collect();
        assert_eq!(e, vec![vec![0, 0], vec![1, 0], vec![0, 1], vec![2, 0], vec![1, 1], vec![0, 2]]);
        assert_eq!(MultiIndex::all_of_degree(3, 2).len(), 6);
    }

    #[test]
    fn inverse_of_unit() {
        let one = JetSeries::one(1, 5);
        let f = &one + &t(1, 5, 0);
        let g = f.inverse().unwrap();
        assert_eq!(&f * &g, one);
        assert_eq!(g.coeff(&MultiIndex::from_exponents(vec![3])), rat(-1));
        assert!(t(1, 5, 0).inverse().is_err());
    }

    #[test]
    fn substitution_is_exact() {
        // (t + t^2) o (t + t^2) = t + 2 t^2 + 2 t^3 at K = 3
        let x = t(1, 3, 0);
        let phi = &x + &x.pow(2);
        let c = phi.substitute(&[phi.clone()]).unwrap();
        assert_eq!(c.to_string(), "t1 + 2*t1^2 + 2*t1^3");
        assert!(matches!(
            phi.substitute(&[&phi + &JetSeries::one(1, 3)]),
            Err(Error::NonZeroConstantTerm(1))
        ));
    }

    #[test]
    fn evaluate_polynomial() {
        let f = &t(2, 4, 0).pow(2) + &t(2, 4, 1).scale(&ratio(1, 2));
        assert_eq!(f.evaluate(&[rat(3), rat(4)]), rat(11));
    }
}
