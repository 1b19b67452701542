//! Differential forms on the formal disk with truncated coefficients.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};

use crate::error::{shape, Error, Result};
use crate::jet::{JetSeries, MultiIndex};
use crate::scalar::{fmt_rational, Coeff, Rational};
use crate::vector_field::FormalVectorField;

/// Strictly increasing 0-based index set naming `dt_I`.
pub type FormIndex = Vec<usize>;

/// Sign of sorting the concatenation of `a` and `b`, or `None` if they share an index.
fn merge_sign(a: &[usize], b: &[usize]) -> Option<(i64, FormIndex)> {
    let mut inversions = 0usize;
    for &x in a {
        for &y in b {
            if x == y {
                return None;
            }
            if x > y {
                inversions += 1;
            }
        }
    }
    let mut merged: FormIndex = a.iter().chain(b).copied().collect();
    merged.sort_unstable();
    Some((if inversions % 2 == 0 { 1 } else { -1 }, merged))
}

/// Sorts an index list, returning the permutation sign, or `None` on a repeat.
fn sort_with_sign(index: &[usize]) -> Option<(i64, FormIndex)> {
    let mut idx = index.to_vec();
    let mut sign = 1i64;
    for i in 0..idx.len() {
        for j in 0..idx.len().saturating_sub(1 + i) {
            if idx[j] > idx[j + 1] {
                idx.swap(j, j + 1);
                sign = -sign;
            }
        }
    }
    if idx.windows(2).any(|w| w[0] == w[1]) {
        return None;
    }
    Some((sign, idx))
}

/// A `k`-form `sum_I f_I dt_I` with only increasing `I` stored.
#[derive(Clone, PartialEq)]
pub struct FormalForm<R: Coeff = Rational> {
    rank: usize,
    order: u32,
    degree: usize,
    terms: BTreeMap<FormIndex, JetSeries<R>>,
}

impl<R: Coeff> FormalForm<R> {
    pub fn zero(rank: usize, order: u32, degree: usize) -> Self {
        Self { rank, order, degree, terms: BTreeMap::new() }
    }

    /// `f dt_I` for any index list; repeated indices give zero, and the list is
    /// sorted with the corresponding sign.
    pub fn from_component(f: JetSeries<R>, index: &[usize]) -> Self {
        let mut out = Self::zero(f.rank(), f.order(), index.len());
        out.add_component(index, f);
        out
    }

    pub fn function(f: JetSeries<R>) -> Self {
        Self::from_component(f, &[])
    }

    /// `dt_{i+1}` (0-based `i`).
    pub fn dt(rank: usize, order: u32, i: usize) -> Self {
        Self::from_component(JetSeries::one(rank, order), &[i])
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn degree(&self) -> usize {
        self.degree
    }

    pub fn components(&self) -> impl Iterator<Item = (&FormIndex, &JetSeries<R>)> {
        self.terms.iter()
    }

    pub fn component(&self, index: &[usize]) -> JetSeries<R> {
        self.terms
            .get(index)
            .cloned()
            .unwrap_or_else(|| JetSeries::zero(self.rank, self.order))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add_component(&mut self, index: &[usize], f: JetSeries<R>) {
        assert_eq!(index.len(), self.degree, "form degree mismatch");
        assert!(index.iter().all(|&i| i < self.rank), "dt index out of range");
        let Some((sign, sorted)) = sort_with_sign(index) else {
            return;
        };
        let f = if sign < 0 { -&f } else { f };
        let f = f.with_order(self.order);
        let entry = self
            .terms
            .remove(&sorted)
            .unwrap_or_else(|| JetSeries::zero(self.rank, self.order));
        let sum = &entry + &f;
        if !sum.is_zero() {
            self.terms.insert(sorted, sum);
        }
    }

    fn check_same(&self, other: &Self) -> Result<()> {
        if self.rank != other.rank || self.order != other.order || self.degree != other.degree {
            return Err(shape(format!(
                "form (n={}, K={}, deg={}) vs (n={}, K={}, deg={})",
                self.rank, self.order, self.degree, other.rank, other.order, other.degree
            )));
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_same(other)?;
        let mut out = self.clone();
        for (i, f) in &other.terms {
            out.add_component(i, f.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.try_add(&other.neg())
    }

    pub fn neg(&self) -> Self {
        self.scale(&-R::one())
    }

    pub fn scale(&self, c: &R) -> Self {
        let mut out = Self::zero(self.rank, self.order, self.degree);
        for (i, f) in &self.terms {
            out.add_component(i, f.scale(c));
        }
        out
    }

    pub fn scale_rational(&self, c: &Rational) -> Self {
        self.scale(&R::from_rational(c))
    }

    /// Multiplies every coefficient by the function `g`.
    pub fn mul_function(&self, g: &JetSeries<R>) -> Self {
        let mut out = Self::zero(self.rank, self.order, self.degree);
        for (i, f) in &self.terms {
            out.add_component(i, f * g);
        }
        out
    }

    /// Exterior product; zero when the degrees exceed the rank.
    pub fn wedge(&self, other: &Self) -> Self {
        self.try_wedge(other).expect("wedge")
    }

    pub fn try_wedge(&self, other: &Self) -> Result<Self> {
        if self.rank != other.rank || self.order != other.order {
            return Err(shape("wedge of forms with different (n, K)"));
        }
        let mut out = Self::zero(self.rank, self.order, self.degree + other.degree);
        if self.degree + other.degree > self.rank {
            return Ok(out);
        }
        for (i, f) in &self.terms {
            for (j, g) in &other.terms {
                if let Some((sign, idx)) = merge_sign(i, j) {
                    let p = f * g;
                    out.add_component(&idx, if sign < 0 { -&p } else { p });
                }
            }
        }
        Ok(out)
    }

    /// de Rham differential. Degree-`n` forms map to the zero form of degree `n`.
    pub fn d(&self) -> Self {
        if self.degree >= self.rank {
            return Self::zero(self.rank, self.order, self.degree);
        }
        let mut out = Self::zero(self.rank, self.order, self.degree + 1);
        for (idx, f) in &self.terms {
            for j in 0..self.rank {
                if idx.contains(&j) {
                    continue;
                }
                let df = f.partial(j);
                if df.is_zero() {
                    continue;
                }
                let mut full = vec![j];
                full.extend(idx);
                out.add_component(&full, df);
            }
        }
        out
    }

    pub fn is_closed(&self) -> bool {
        self.d().is_zero()
    }

    /// Contraction `iota_X`.
    pub fn interior(&self, x: &FormalVectorField<R>) -> Self {
        assert!(self.degree > 0, "interior product of a function");
        let mut out = Self::zero(self.rank, self.order, self.degree - 1);
        for (idx, f) in &self.terms {
            for (pos, &i) in idx.iter().enumerate() {
                let mut rest = idx.clone();
                rest.remove(pos);
                let c = f * x.component(i);
                out.add_component(&rest, if pos % 2 == 0 { c } else { -&c });
            }
        }
        out
    }

    /// Lie derivative `L_X`, computed slot by slot:
    /// `L_X(f dt_I) = X(f) dt_I + f sum_r dt_{i_1} .. d(X^{i_r}) .. dt_{i_k}`.
    pub fn lie_derivative(&self, x: &FormalVectorField<R>) -> Self {
        let mut out = Self::zero(self.rank, self.order, self.degree);
        for (idx, f) in &self.terms {
            out.add_component(idx, x.apply(f));
            for (pos, &i) in idx.iter().enumerate() {
                let xi = x.component(i);
                for j in 0..self.rank {
                    let dj = xi.partial(j);
                    if dj.is_zero() {
                        continue;
                    }
                    let mut new_idx = idx.clone();
                    new_idx[pos] = j;
                    out.add_component(&new_idx, f * &dj);
                }
            }
        }
        out
    }

    /// Radial homotopy `h` for the de Rham complex, contracting with the Euler
    /// field and integrating along rays: `h(t^a dt_I) = t^a iota_E dt_I / (|a| + k)`.
    ///
    /// The result is returned at order `K + 1` so that `d h(w) = w` holds through
    /// degree `K` for closed `w` of positive degree.
    pub fn radial_homotopy(&self) -> Self {
        assert!(self.degree > 0, "homotopy needs positive degree");
        let k = self.degree as i64;
        let order = self.order + 1;
        let mut out = Self::zero(self.rank, order, self.degree - 1);
        for (idx, f) in &self.terms {
            for (alpha, c) in f.terms() {
                let weight = alpha.degree() as i64 + k;
                let c = c.clone() * R::from_rational(&Rational::new(1.into(), weight.into()));
                for (pos, &i) in idx.iter().enumerate() {
                    let mut rest = idx.clone();
                    rest.remove(pos);
                    let coeff = if pos % 2 == 0 { c.clone() } else { -c.clone() };
                    out.add_component(&rest, JetSeries::monomial(self.rank, order, alpha.raised(i), coeff));
                }
            }
        }
        out
    }

    /// Checked homotopy: rejects forms that are not closed or of degree zero.
    pub fn poincare_homotopy(&self) -> Result<Self> {
        if self.degree == 0 {
            return Err(Error::InvalidArgument("homotopy needs a form of degree >= 1".into()));
        }
        if !self.is_closed() {
            return Err(Error::NotClosed);
        }
        Ok(self.radial_homotopy())
    }

    pub fn with_order(&self, order: u32) -> Self {
        let mut out = Self::zero(self.rank, order, self.degree);
        for (i, f) in &self.terms {
            out.add_component(i, f.with_order(order));
        }
        out
    }

    /// Keeps coefficient terms of degree at most `d`.
    pub fn truncated_to(&self, d: u32) -> Self {
        let mut out = Self::zero(self.rank, self.order, self.degree);
        for (i, f) in &self.terms {
            out.add_component(i, f.truncated_to(d));
        }
        out
    }

    /// Pullback along `t -> phi(t)`, where `phi` has zero constant terms.
    pub fn pullback(&self, phi: &[JetSeries<R>]) -> Result<Self> {
        if phi.len() != self.rank {
            return Err(shape("pullback map has wrong number of components"));
        }
        let order = phi.iter().map(|p| p.order()).min().unwrap_or(self.order).min(self.order);
        let dphi: Vec<FormalForm<R>> = phi
            .iter()
            .map(|p| FormalForm::function(p.with_order(order)).d())
            .collect();
        let mut out = Self::zero(self.rank, order, self.degree);
        for (idx, f) in &self.terms {
            let mut acc = FormalForm::function(f.substitute(phi)?.with_order(order));
            for &i in idx {
                acc = acc.wedge(&dphi[i]);
            }
            out = out.try_add(&acc)?;
        }
        Ok(out)
    }

    pub fn map_coeffs<S: Coeff>(&self, f: impl Fn(&R) -> S + Copy) -> FormalForm<S> {
        let mut out = FormalForm::zero(self.rank, self.order, self.degree);
        for (i, g) in &self.terms {
            out.add_component(i, g.map_coeffs(f));
        }
        out
    }
}

impl FormalForm<Rational> {
    /// Renders in the shared grammar, e.g. `t1 dt2 - dt1^dt2`.
    pub fn to_expr_string(&self) -> String {
        let mut pieces: Vec<(bool, String)> = Vec::new();
        for (idx, f) in &self.terms {
            let dts = idx.iter().map(|i| format!("dt{}", i + 1)).collect::<Vec<_>>().join("^");
            for (alpha, c) in f.terms() {
                let mono = crate::jet::monomial_string(alpha, "t");
                let neg = c < &Rational::zero();
                let abs = if neg { -c.clone() } else { c.clone() };
                let mut body = String::new();
                if !abs.is_one() || (mono.is_empty() && dts.is_empty()) {
                    body.push_str(&fmt_rational(&abs));
                }
                if !mono.is_empty() {
                    if !body.is_empty() {
                        body.push('*');
                    }
                    body.push_str(&mono);
                }
                if !dts.is_empty() {
                    if !body.is_empty() {
                        body.push(' ');
                    }
                    body.push_str(&dts);
                }
                pieces.push((neg, body));
            }
        }
        join_signed(pieces)
    }
}

pub(crate) fn join_signed(pieces: Vec<(bool, String)>) -> String {
    if pieces.is_empty() {
        return "0".into();
    }
    let mut out = String::new();
    for (i, (neg, body)) in pieces.into_iter().enumerate() {
        if i == 0 {
            if neg {
                out.push('-');
            }
        } else {
            out.push_str(if neg { " - " } else { " + " });
        }
        out.push_str(&body);
    }
    out
}

impl fmt::Display for FormalForm<Rational> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string())
    }
}

impl<R: Coeff> fmt::Debug for FormalForm<R> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Form(n={}, K={}, deg={}; ", self.rank, self.order, self.degree)?;
        f.debug_map().entries(self.terms.iter()).finish()?;
        write!(f, ")")
    }
}

/// `t^alpha` as a form coefficient helper.
pub fn mono<R: Coeff>(rank: usize, order: u32, exps: &[u32], c: R) -> JetSeries<R> {
    JetSeries::monomial(rank, order, MultiIndex::from_exponents(exps.to_vec()), c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    fn t(i: usize) -> JetSeries {
        JetSeries::var(2, 4, i)
    }

    fn dt(i: usize) -> FormalForm {
        FormalForm::dt(2, 4, i)
    }

    #[test]
    fn de_rham_examples() {
        let w = FormalForm::from_component(&t(0) * &t(1), &[0]);
        let expected = FormalForm::from_component(-&t(0), &[0, 1]);
        assert_eq!(w.d(), expected);
        assert_eq!(w.d().to_string(), "-t1 dt1^dt2");

        let f = FormalForm::function(t(0).pow(2));
        assert_eq!(f.d(), FormalForm::from_component(t(0).scale(&rat(2)), &[0]));
        assert!(dt(0).wedge(&dt(1)).d().is_zero());
    }

    #[test]
    fn wedge_examples() {
        assert!(dt(0).wedge(&dt(0)).is_zero());
        assert_eq!(dt(0).wedge(&dt(1)).to_string(), "dt1^dt2");
        let a = FormalForm::from_component(t(0), &[1]);
        let b = FormalForm::from_component(t(1), &[0]);
        assert_eq!(a.wedge(&b).to_string(), "-t1*t2 dt1^dt2");
        // degree overflow
        let three = FormalForm::<Rational>::zero(2, 4, 2);
        assert_eq!(three.wedge(&dt(0)).degree(), 3);
    }

    #[test]
    fn unsorted_components_pick_up_signs() {
        let f = FormalForm::from_component(JetSeries::one(2, 4), &[1, 0]);
        assert_eq!(f, dt(0).wedge(&dt(1)).neg());
        assert!(FormalForm::from_component(JetSeries::<Rational>::one(2, 4), &[1, 1]).is_zero());
    }

    #[test]
    fn homotopy_examples() {
        assert_eq!(dt(0).poincare_homotopy().unwrap(), FormalForm::function(JetSeries::var(2, 5, 0)));
        let area = dt(0).wedge(&dt(1));
        let h = area.poincare_homotopy().unwrap();
        let t5 = |i| JetSeries::var(2, 5, i);
        let mut expected = FormalForm::from_component(t5(0).scale(&ratio(1, 2)), &[1]);
        expected.add_component(&[0], t5(1).scale(&ratio(-1, 2)));
        assert_eq!(h, expected);
        assert_eq!(h.d(), area.with_order(5));
        let w = FormalForm::from_component(t(0).scale(&rat(2)), &[0]);
        assert_eq!(w.poincare_homotopy().unwrap(), FormalForm::function(JetSeries::var(2, 5, 0).pow(2)));
    }

    #[test]
    fn homotopy_rejects_bad_input() {
        let w = FormalForm::from_component(t(0), &[1]);
        assert_eq!(w.poincare_homotopy(), Err(Error::NotClosed));
        assert!(FormalForm::function(t(0)).poincare_homotopy().is_err());
    }

    #[test]
    fn interior_and_cartan() {
        use crate::vector_field::FormalVectorField;
        let x = FormalVectorField::new(vec![&t(0) * &t(1), t(0).pow(2)]).unwrap();
        let w = FormalForm::from_component(&t(1) * &t(1), &[0]);
        let cartan = w.d().interior(&x).try_add(&w.interior(&x).d()).unwrap();
        assert_eq!(w.lie_derivative(&x), cartan);
    }
}
