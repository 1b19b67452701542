//! Jets of formal automorphisms `t -> phi(t)` fixing the origin.

use std::fmt;



use crate::error::{shape, Error, Result};
use crate::form::FormalForm;
use crate::jet::JetSeries;
use crate::matrix::JetMatrix;
use crate::scalar::{Coeff, Rational};
use crate::vector_field::FormalVectorField;

#[derive(Clone, PartialEq)]
pub struct JetAutomorphism<R: Coeff = Rational> {
    components: Vec<JetSeries<R>>,
}

impl<R: Coeff> JetAutomorphism<R> {
    /// Validates zero constant terms and an invertible linear part.
    pub fn new(components: Vec<JetSeries<R>>) -> Result<Self> {
        let n = components.len();
        if n == 0 {
            return Err(shape("automorphism needs at least one component"));
        }
        let order = components[0].order();
        if components.iter().any(|c| c.rank() != n || c.order() != order) {
            return Err(shape("automorphism components must have rank n and a common order"));
        }
        if order == 0 {
            return Err(Error::InvalidArgument("automorphism jets need order >= 1".into()));
        }
        for (i, c) in components.iter().enumerate() {
            if !c.constant_term().is_zero() {
                return Err(Error::NonZeroConstantTerm(i + 1));
            }
        }
        let a = Self { components };
        a.jacobian().constant_part().inverse().map_err(|_| {
            Error::NotInvertible("automorphism has a singular linear part".into())
        })?;
        Ok(a)
    }

    pub fn identity(n: usize, order: u32) -> Self {
        Self { components: (0..n).map(|i| JetSeries::var(n, order, i)).collect() }
    }

    /// `id + X` for a field vanishing at the origin.
    pub fn flow_step(x: &FormalVectorField<R>) -> Result<Self> {
        if !x.vanishes_at_origin() {
            return Err(Error::InvalidArgument("field must vanish at the origin".into()));
        }
        let n = x.rank();
        let components = (0..n).map(|i| &JetSeries::var(n, x.order(), i) + x.component(i)).collect();
        Self::new(components)
    }

    pub fn rank(&self) -> usize {
        self.components.len()
    }

    pub fn order(&self) -> u32 {
        self.components[0].order()
    }

    pub fn components(&self) -> &[JetSeries<R>] {
        &self.components
    }

    /// `outer o inner`: substitutes the components of `inner` into `outer`.
    /// The result has the smaller of the two orders.
    pub fn compose(outer: &Self, inner: &Self) -> Result<Self> {
        if outer.rank() != inner.rank() {
            return Err(shape("composition of automorphisms of different rank"));
        }
        let components = outer
            .components
            .iter()
            .map(|c| c.substitute(&inner.components))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { components })
    }

    /// `Jac(phi)_{ij} = d phi_i / d t_j`.
    pub fn jacobian(&self) -> JetMatrix<R> {
        let n = self.rank();
        let rows = (0..n)
            .map(|i| (0..n).map(|j| self.components[i].partial(j)).collect())
            .collect();
        JetMatrix::from_rows(rows).expect("square by construction")
    }

    /// Compositional inverse `psi` with `phi o psi = psi o phi = id` to order `K`.
    /// Solved order by order: `psi <- psi - A^{-1} (phi(psi) - t)`.
    pub fn invert(&self) -> Result<Self> {
        let n = self.rank();
        let order = self.order();
        let a_inv = self.jacobian().constant_part().inverse()?;
        let apply_linear = |v: &[JetSeries<R>]| -> Vec<JetSeries<R>> {
            (0..n)
                .map(|i| {
                    let mut acc = JetSeries::zero(n, order);
                    for (j, vj) in v.iter().enumerate() {
                        acc = &acc + &vj.scale(a_inv.get(i, j));
                    }
                    acc
                })
                .collect()
        };
        let ident: Vec<_> = (0..n).map(|i| JetSeries::var(n, order, i)).collect();
        let mut psi = apply_linear(&ident);
        for _ in 0..order {
            let residual: Vec<_> = self
                .components
                .iter()
                .zip(&ident)
                .map(|(c, t)| Ok(&c.substitute(&psi)? - t))
                .collect::<Result<Vec<_>>>()?;
            if residual.iter().all(|r| r.is_zero()) {
                break;
            }
            let correction = apply_linear(&residual);
            psi = psi.iter().zip(&correction).map(|(p, c)| p - c).collect();
        }
        Ok(Self { components: psi })
    }

    pub fn with_order(&self, order: u32) -> Self {
        Self { components: self.components.iter().map(|c| c.with_order(order)).collect() }
    }

    /// `phi^* f = f o phi`.
    pub fn pull_function(&self, f: &JetSeries<R>) -> Result<JetSeries<R>> {
        f.substitute(&self.components)
    }

    pub fn pull_form(&self, w: &FormalForm<R>) -> Result<FormalForm<R>> {
        w.pullback(&self.components)
    }

    pub fn map_coeffs<S: Coeff>(&self, f: impl Fn(&R) -> S + Copy) -> JetAutomorphism<S> {
        JetAutomorphism { components: self.components.iter().map(|c| c.map_coeffs(f)).collect() }
    }
}

impl JetAutomorphism<Rational> {
    /// Renders as `(c1, c2, ...)` in the shared grammar.
    pub fn to_expr_string(&self) -> String {
        let parts: Vec<_> = self.components.iter().map(|c| c.to_expr_string()).collect();
        format!("({})", parts.join(", "))
    }
}

impl fmt::Display for JetAutomorphism<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string())
    }
}

impl<R: Coeff> fmt::Debug for JetAutomorphism<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_list().entries(&self.components).finish()
    }
}
