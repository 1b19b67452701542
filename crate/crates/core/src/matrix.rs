//! Matrices over coefficient rings, jets, and forms.



use crate::error::{shape, Error, Result};
use crate::form::FormalForm;
use crate::jet::JetSeries;
use crate::scalar::{Coeff, Rational};

/// Dense square matrix over a coefficient ring.
#[derive(Clone, PartialEq, Debug)]
pub struct ScalarMatrix<R: Coeff = Rational> {
    n: usize,
    entries: Vec<R>,
}

/// `GL_n` elements and Lie algebra elements over the rationals.
pub type RationalMatrix = ScalarMatrix<Rational>;

impl<R: Coeff> ScalarMatrix<R> {
    pub fn zero(n: usize) -> Self {
        Self { n, entries: vec![R::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zero(n);
        for i in 0..n {
            m.set(i, i, R::one());
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<R>>) -> Result<Self> {
        let n = rows.len();
        if rows.iter().any(|r| r.len() != n) {
            return Err(shape("matrix must be square"));
        }
        Ok(Self { n, entries: rows.into_iter().flatten().collect() })
    }

    pub fn diagonal(d: Vec<R>) -> Self {
        let mut m = Self::zero(d.len());
        for (i, x) in d.into_iter().enumerate() {
            m.set(i, i, x);
        }
        m
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &R {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: R) {
        self.entries[i * self.n + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        let mut m = Self::zero(self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = R::zero();
                for k in 0..self.n {
                    acc = acc + self.get(i, k).clone() * other.get(k, j).clone();
                }
                m.set(i, j, acc);
            }
        }
        m
    }

    pub fn add(&self, other: &Self) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a.clone() + b.clone()).collect(),
        }
    }

    pub fn scale(&self, c: &R) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(|a| a.clone() * c.clone()).collect() }
    }

    /// Gauss-Jordan inverse; pivots must be invertible in `R`.
    pub fn inverse(&self) -> Result<Self> {
        let n = self.n;
        let mut a = self.clone();
        let mut inv = Self::identity(n);
        for col in 0..n {
            let pivot_row = (col..n)
                .find(|&r| a.get(r, col).try_inverse().is_some())
                .ok_or_else(|| Error::NotInvertible("singular matrix".into()))?;
            if pivot_row != col {
                for j in 0..n {
                    let (x, y) = (a.get(col, j).clone(), a.get(pivot_row, j).clone());
                    a.set(col, j, y);
                    a.set(pivot_row, j, x);
                    let (x, y) = (inv.get(col, j).clone(), inv.get(pivot_row, j).clone());
                    inv.set(col, j, y);
                    inv.set(pivot_row, j, x);
                }
            }
            let p = a.get(col, col).try_inverse().expect("pivot checked");
            for j in 0..n {
                a.set(col, j, a.get(col, j).clone() * p.clone());
                inv.set(col, j, inv.get(col, j).clone() * p.clone());
            }
            for r in 0..n {
                if r == col {
                    continue;
                }
                let f = a.get(r, col).clone();
                if f.is_zero() {
                    continue;
                }
                for j in 0..n {
                    a.set(r, j, a.get(r, j).clone() - f.clone() * a.get(col, j).clone());
                    inv.set(r, j, inv.get(r, j).clone() - f.clone() * inv.get(col, j).clone());
                }
            }
        }
        Ok(inv)
    }
}

/// `n x n` matrix of jets with a common order.
#[derive(Clone, PartialEq, Debug)]
pub struct JetMatrix<R: Coeff = Rational> {
    n: usize,
    entries: Vec<JetSeries<R>>,
}

impl<R: Coeff> JetMatrix<R> {
    pub fn zero(n: usize, order: u32) -> Self {
        Self { n, entries: vec![JetSeries::zero(n, order); n * n] }
    }

    pub fn identity(n: usize, order: u32) -> Self {
        let mut m = Self::zero(n, order);
        for i in 0..n {
            m.set(i, i, JetSeries::one(n, order));
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<JetSeries<R>>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 || rows.iter().any(|r| r.len() != n) {
            return Err(shape("jet matrix must be square and nonempty"));
        }
        let order = rows[0][0].order();
        let entries: Vec<_> = rows.into_iter().flatten().collect();
        if entries.iter().any(|e| e.order() != order || e.rank() != n) {
            return Err(shape("jet matrix entries must share rank n and order"));
        }
        Ok(Self { n, entries })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn order(&self) -> u32 {
        self.entries[0].order()
    }

    pub fn get(&self, i: usize, j: usize) -> &JetSeries<R> {
        &self.entries[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: JetSeries<R>) {
        self.entries[i * self.n + j] = v;
    }

    pub fn transpose(&self) -> Self {
        let mut m = Self::zero(self.n, self.order());
        for i in 0..self.n {
            for j in 0..self.n {
                m.set(j, i, self.get(i, j).clone());
            }
        }
        m
    }

    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        let mut m = Self::zero(self.n, self.order());
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = JetSeries::zero(self.n, self.order());
                for k in 0..self.n {
                    acc = &acc + &(self.get(i, k) * other.get(k, j));
                }
                m.set(i, j, acc);
            }
        }
        m
    }

    pub fn sub(&self, other: &Self) -> Self {
        Self {
            n: self.n,
            entries: self.entries.iter().zip(&other.entries).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn constant_part(&self) -> ScalarMatrix<R> {
        ScalarMatrix { n: self.n, entries: self.entries.iter().map(|e| e.constant_term()).collect() }
    }

    pub fn from_scalar(m: &ScalarMatrix<R>, order: u32) -> Self {
        Self {
            n: m.n,
            entries: m.entries.iter().map(|c| JetSeries::constant(m.n, order, c.clone())).collect(),
        }
    }

    /// Two-sided inverse to order `K` by Newton iteration `X <- X (2 - A X)`
    /// seeded with the inverse of the constant part.
    pub fn inverse(&self) -> Result<Self> {
        let order = self.order();
        let seed = self.constant_part().inverse()?;
        let mut x = Self::from_scalar(&seed, order);
        let two = Self::from_scalar(&ScalarMatrix::identity(self.n).scale(&R::from_int(2)), order);
        let mut precision = 1u32;
        while precision <= order {
            x = x.mul(&two.sub(&self.mul(&x)));
            precision *= 2;
        }
        Ok(x)
    }

    pub fn trace(&self) -> JetSeries<R> {
        let mut acc = JetSeries::zero(self.n, self.order());
        for i in 0..self.n {
            acc = &acc + self.get(i, i);
        }
        acc
    }

    /// Entrywise substitution `t -> phi(t)`.
    pub fn pullback(&self, phi: &[JetSeries<R>]) -> Result<Self> {
        let entries = self.entries.iter().map(|e| e.substitute(phi)).collect::<Result<Vec<_>>>()?;
        Ok(Self { n: self.n, entries })
    }

    pub fn with_order(&self, order: u32) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(|e| e.with_order(order)).collect() }
    }

    /// Entrywise de Rham differential, a matrix of one-forms.
    pub fn d(&self) -> FormMatrix<R> {
        FormMatrix {
            n: self.n,
            entries: self.entries.iter().map(|e| FormalForm::function(e.clone()).d()).collect(),
        }
    }

    pub fn as_forms(&self) -> FormMatrix<R> {
        FormMatrix {
            n: self.n,
            entries: self.entries.iter().map(|e| FormalForm::function(e.clone())).collect(),
        }
    }
}

/// `n x n` matrix of forms of a common degree, multiplied with the wedge product.
#[derive(Clone, PartialEq, Debug)]
pub struct FormMatrix<R: Coeff = Rational> {
    n: usize,
    entries: Vec<FormalForm<R>>,
}

impl<R: Coeff> FormMatrix<R> {
    pub fn zero(n: usize, order: u32, degree: usize) -> Self {
        Self { n, entries: vec![FormalForm::zero(n, order, degree); n * n] }
    }

    pub fn from_entries(n: usize, entries: Vec<FormalForm<R>>) -> Result<Self> {
        if entries.len() != n * n {
            return Err(shape("form matrix needs n*n entries"));
        }
        Ok(Self { n, entries })
    }

    pub fn size(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &FormalForm<R> {
        &self.entries[i * self.n + j]
    }

    pub fn degree(&self) -> usize {
        self.entries[0].degree()
    }

    pub fn order(&self) -> u32 {
        self.entries[0].order()
    }

    /// `(A B)_{ij} = sum_k A_{ik} ^ B_{kj}`.
    pub fn mul(&self, other: &Self) -> Self {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        let deg = self.degree() + other.degree();
        let mut entries = Vec::with_capacity(self.n * self.n);
        for i in 0..self.n {
            for j in 0..self.n {
                let mut acc = FormalForm::zero(self.n, self.order(), deg);
                for k in 0..self.n {
                    acc = acc.try_add(&self.get(i, k).wedge(other.get(k, j))).expect("same shape");
                }
                entries.push(acc);
            }
        }
        Self { n: self.n, entries }
    }

    pub fn trace(&self) -> FormalForm<R> {
        let mut acc = FormalForm::zero(self.n, self.order(), self.degree());
        for i in 0..self.n {
            acc = acc.try_add(self.get(i, i)).expect("same shape");
        }
        acc
    }

    pub fn pullback(&self, phi: &[JetSeries<R>]) -> Result<Self> {
        let entries = self.entries.iter().map(|e| e.pullback(phi)).collect::<Result<Vec<_>>>()?;
        Ok(Self { n: self.n, entries })
    }

    pub fn with_order(&self, order: u32) -> Self {
        Self { n: self.n, entries: self.entries.iter().map(|e| e.with_order(order)).collect() }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::{rat, ratio};

    #[test]
    fn rational_inverse() {
        let m = RationalMatrix::from_rows(vec![vec![rat(2), rat(1)], vec![rat(1), rat(1)]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.mul(&inv), RationalMatrix::identity(2));
        assert!(RationalMatrix::from_rows(vec![vec![rat(1), rat(2)], vec![rat(2), rat(4)]])
            .unwrap()
            .inverse()
            .is_err());
        let p = RationalMatrix::from_rows(vec![vec![rat(0), rat(1)], vec![rat(1), rat(0)]]).unwrap();
        assert_eq!(p.inverse().unwrap(), p);
        assert_eq!(RationalMatrix::diagonal(vec![rat(2)]).inverse().unwrap().get(0, 0), &ratio(1, 2));
    }

    #[test]
    fn unipotent_jet_inverse() {
        let k = 4;
        let t2 = JetSeries::var(2, k, 1);
        let one = JetSeries::one(2, k);
        let zero = JetSeries::zero(2, k);
        let g = JetMatrix::from_rows(vec![vec![one.clone(), t2.scale(&rat(2))], vec![zero.clone(), one.clone()]])
            .unwrap();
        let expected =
            JetMatrix::from_rows(vec![vec![one.clone(), t2.scale(&rat(-2))], vec![zero, one]]).unwrap();
        assert_eq!(g.inverse().unwrap(), expected);
        assert_eq!(g.mul(&expected), JetMatrix::identity(2, k));
    }

    #[test]
    fn general_jet_inverse_is_two_sided() {
        let k = 5;
        let t = |i| JetSeries::var(2, k, i);
        let one = JetSeries::one(2, k);
        let g = JetMatrix::from_rows(vec![
            vec![&one.scale(&rat(2)) + &t(0), &t(0) * &t(1)],
            vec![t(1).pow(2), &one - &t(0).pow(3)],
        ])
        .unwrap();
        let inv = g.inverse().unwrap();
        assert_eq!(g.mul(&inv), JetMatrix::identity(2, k));
        assert_eq!(inv.mul(&g), JetMatrix::identity(2, k));
    }
}
