//! Formal vector fields `W_n`.

use std::fmt;

use num_traits::{One, Zero};

use crate::error::{shape, Result};
use crate::form::join_signed;
use crate::jet::{monomial_string, JetSeries, MultiIndex};
use crate::scalar::{fmt_rational, Coeff, Rational};

/// `sum_i X^i d_i` with components of uniform rank and order.
#[derive(Clone, PartialEq)]
pub struct FormalVectorField<R: Coeff = Rational> {
    components: Vec<JetSeries<R>>,
}

impl<R: Coeff> FormalVectorField<R> {
    pub fn new(components: Vec<JetSeries<R>>) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(shape("vector field needs at least one component"));
        }
        let order = components[0].order();
        if components.iter().any(|c| c.rank() != n || c.order() != order) {
            return Err(shape("vector field components must have rank n and a common order"));
        }
        Ok(Self { components })
    }

    pub fn zero(rank: usize, order: u32) -> Self {
        Self { components: vec![JetSeries::zero(rank, order); rank] }
    }

    /// `f d_{j+1}` (0-based `j`).
    pub fn along(f: JetSeries<R>, j: usize) -> Self {
        let mut out = Self::zero(f.rank(), f.order());
        out.components[j] = f;
        out
    }

    /// The monomial field `c t^alpha d_{j+1}`.
    pub fn monomial(rank: usize, order: u32, alpha: MultiIndex, j: usize, c: R) -> Self {
        Self::along(JetSeries::monomial(rank, order, alpha, c), j)
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn order(&self) -> u32 {
        self.components[0].order()
    }

    pub fn component(&self, i: usize) -> &JetSeries<R> {
        &self.components[i]
    }

    pub fn components(&self) -> &[JetSeries<R>] {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.iter().all(|c| c.is_zero())
    }

    /// Largest coefficient degree over all components.
    pub fn max_degree(&self) -> Option<u32> {
        self.components.iter().filter_map(|c| c.max_degree()).max()
    }

    pub fn vanishes_at_origin(&self) -> bool {
        self.components.iter().all(|c| c.constant_term().is_zero())
    }

    /// `X(f) = sum_j X^j d_j f`.
    pub fn apply(&self, f: &JetSeries<R>) -> JetSeries<R> {
        let mut out = JetSeries::zero(f.rank(), f.order());
        for (j, xj) in self.components.iter().enumerate() {
            if xj.is_zero() {
                continue;
            }
            out = &out + &(xj * &f.partial(j));
        }
        out
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.rank() != other.rank() || self.order() != other.order() {
            return Err(shape(format!(
                "vector fields (n={}, K={}) vs (n={}, K={})",
                self.rank(),
                self.order(),
                other.rank(),
                other.order()
            )));
        }
        Ok(())
    }

    pub fn try_bracket(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let components = (0..self.rank())
            .map(|i| &self.apply(&other.components[i]) - &other.apply(&self.components[i]))
            .collect();
        Ok(Self { components })
    }

    /// `[X, Y]^i = X(Y^i) - Y(X^i)`.
    pub fn bracket(&self, other: &Self) -> Self {
        self.try_bracket(other).expect("vector field bracket")
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        Ok(Self {
            components: self.components.iter().zip(&other.components).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn scale(&self, c: &R) -> Self {
        Self { components: self.components.iter().map(|a| a.scale(c)).collect() }
    }

    pub fn with_order(&self, order: u32) -> Self {
        Self { components: self.components.iter().map(|a| a.with_order(order)).collect() }
    }

    /// Splits into monomial fields `c t^alpha d_j`.
    pub fn monomial_terms(&self) -> Vec<(usize, MultiIndex, R)> {
        let mut out = Vec::new();
        for (j, c) in self.components.iter().enumerate() {
            for (a, x) in c.terms() {
                out.push((j, a.clone(), x.clone()));
            }
        }
        out
    }

    pub fn map_coeffs<S: Coeff>(&self, f: impl Fn(&R) -> S + Copy) -> FormalVectorField<S> {
        FormalVectorField { components: self.components.iter().map(|c| c.map_coeffs(f)).collect() }
    }

    /// Divergence `sum_i d_i X^i`.
    pub fn divergence(&self) -> JetSeries<R> {
        let mut out = JetSeries::zero(self.rank(), self.order());
        for (i, c) in self.components.iter().enumerate() {
            out = &out + &c.partial(i);
        }
        out
    }
}

impl FormalVectorField<Rational> {
    /// Renders in the shared grammar, e.g. `2/3*t1^2*t2 d1 + t2 d2`.
    pub fn to_expr_string(&self) -> String {
        let mut pieces = Vec::new();
        for (j, c) in self.components.iter().enumerate() {
            for (a, x) in c.terms() {
                let mono = monomial_string(a, "t");
                let neg = x < &Rational::zero();
                let abs = if neg { -x.clone() } else { x.clone() };
                let mut body = String::new();
                if !abs.is_one() {
                    body.push_str(&fmt_rational(&abs));
                }
                if !mono.is_empty() {
                    if !body.is_empty() {
                        body.push('*');
                    }
                    body.push_str(&mono);
                }
                if !body.is_empty() {
                    body.push(' ');
                }
                body.push_str(&format!("d{}", j + 1));
                pieces.push((neg, body));
            }
        }
        join_signed(pieces)
    }
}

impl fmt::Display for FormalVectorField<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string())
    }
}

impl<R: Coeff> fmt::Debug for FormalVectorField<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.components).finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::FormalForm;
    use crate::scalar::rat;

    fn t(n: usize, i: usize) -> JetSeries {
        JetSeries::var(n, 5, i)
    }

    #[test]
    fn bracket_examples() {
        let x = FormalVectorField::along(t(1, 0), 0);
        let y = FormalVectorField::along(t(1, 0).pow(2), 0);
        assert_eq!(x.bracket(&y), y);

        let d1 = FormalVectorField::along(JetSeries::<Rational>::one(2, 5), 0);
        let d2 = FormalVectorField::along(JetSeries::<Rational>::one(2, 5), 1);
        assert!(d1.bracket(&d2).is_zero());

        let a = FormalVectorField::along(t(2, 1), 0);
        let b = FormalVectorField::along(t(2, 0), 1);
        let expected = FormalVectorField::new(vec![-&t(2, 0), t(2, 1)]).unwrap();
        assert_eq!(a.bracket(&b), expected);
        assert_eq!(a.bracket(&b).to_string(), "-t1 d1 + t2 d2");
    }

    #[test]
    fn lie_derivative_examples() {
        let e = FormalVectorField::along(t(1, 0), 0);
        let dt = FormalForm::dt(1, 5, 0);
        assert_eq!(dt.lie_derivative(&e), dt);

        let d1 = FormalVectorField::along(JetSeries::<Rational>::one(2, 5), 0);
        let w = FormalForm::from_component(t(2, 0), &[1]);
        assert_eq!(w.lie_derivative(&d1), FormalForm::dt(2, 5, 1));

        let x = FormalVectorField::along(t(2, 0), 1);
        let area = FormalForm::dt(2, 5, 0).wedge(&FormalForm::dt(2, 5, 1));
        assert!(area.lie_derivative(&x).is_zero());
    }

    #[test]
    fn divergence_of_scaling() {
        let e = FormalVectorField::new(vec![t(2, 0), t(2, 1)]).unwrap();
        assert_eq!(e.divergence(), JetSeries::constant(2, 5, rat(2)));
    }

    #[test]
    fn rejects_ragged_components() {
        assert!(FormalVectorField::new(vec![t(2, 0), JetSeries::var(2, 4, 1)]).is_err());
        assert!(FormalVectorField::new(vec![t(2, 0)]).is_err());
        let a = FormalVectorField::along(t(2, 0), 0);
        let b = FormalVectorField::along(JetSeries::var(2, 4, 0), 0);
        assert!(a.try_bracket(&b).is_err());
    }
}
