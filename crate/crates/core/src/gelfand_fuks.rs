//! Gelfand-Fuks cochains on `W_n` with values in formal forms: the Atiyah
//! representative, `ch_k`, `c_1`, the primitive `alpha`, and the Chevalley-Eilenberg differential.

use crate::error::{shape, Error, Result};
use crate::form::FormalForm;
use crate::matrix::FormMatrix;
use crate::scalar::{factorial, Rational};
use crate::vector_field::FormalVectorField;

/// `Omega^1 ⊗ End(T)`-valued: an `n x n` matrix of one-forms.
pub type EndValuedForm = FormMatrix;

/// `At(X)_{ij} = -d(d_j f^i)`, i.e. `-d(d_j f^i) dt^j ⊗ d_i`.
pub fn atiyah_rep(x: &FormalVectorField) -> EndValuedForm {
    let n = x.rank();
    let mut entries = Vec::with_capacity(n * n);
    for i in 0..n {
        for j in 0..n {
            entries.push(FormalForm::function(x.component(i).partial(j)).d().neg());
        }
    }
    FormMatrix::from_entries(n, entries).expect("square")
}

/// `ch_2(X, Y) = -sum_{i,j} d(d_j f^i) ∧ d(d_i g^j)`.
pub fn ch2_gf(x: &FormalVectorField, y: &FormalVectorField) -> Result<FormalForm> {
    check_pair(x, y)?;
    let n = x.rank();
    let mut out = FormalForm::zero(n, x.order(), 2);
    for i in 0..n {
        for j in 0..n {
            let a = FormalForm::function(x.component(i).partial(j)).d();
            let b = FormalForm::function(y.component(j).partial(i)).d();
            out = out.try_sub(&a.try_wedge(&b)?)?;
        }
    }
    Ok(out)
}

/// `c_1(X) = d(div X)`.
pub fn c1_gf(x: &FormalVectorField) -> FormalForm {
    FormalForm::function(x.divergence()).d()
}

/// `alpha(X, Y) = -sum_{i,j} d_j f^i d(d_i g^j)`; its de Rham differential is `ch_2(X, Y)`.
pub fn alpha_primitive(x: &FormalVectorField, y: &FormalVectorField) -> Result<FormalForm> {
    check_pair(x, y)?;
    let n = x.rank();
    let mut out = FormalForm::zero(n, x.order(), 1);
    for i in 0..n {
        for j in 0..n {
            let b = FormalForm::function(y.component(j).partial(i)).d();
            out = out.try_sub(&b.mul_function(&x.component(i).partial(j)))?;
        }
    }
    Ok(out)
}

fn check_pair(x: &FormalVectorField, y: &FormalVectorField) -> Result<()> {
    if x.rank() != y.rank() || x.order() != y.order() {
        return Err(shape("vector fields of different rank or order"));
    }
    Ok(())
}

/// The transcendental factor `1 / ((-2 pi i)^k k!)` attached to an exact form.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct ScaleTag {
    pub k: u32,
}

impl ScaleTag {
    /// The rational part `1 / ((-1)^k k!)`; what remains is `(2 pi i)^{-k}`.
    pub fn rational_factor(&self) -> Rational {
        let f = Rational::from_integer(factorial(self.k));
        if self.k % 2 == 0 {
            f.recip()
        } else {
            -f.recip()
        }
    }
}

impl std::fmt::Display for ScaleTag {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "1/((-2*pi*i)^{}*{}!)", self.k, self.k)
    }
}

/// A tagged exact form: the value is `form * tag`.
#[derive(Clone, Debug, PartialEq)]
pub struct TaggedForm {
    pub form: FormalForm,
    pub tag: ScaleTag,
}

impl TaggedForm {
    /// `form * (-1)^k / k!`: the value up to the factor `(2 pi i)^{-k}`.
    pub fn rational_part(&self) -> FormalForm {
        self.form.scale(&self.tag.rational_factor())
    }
}

fn permutations(k: usize) -> Vec<(Vec<usize>, bool)> {
    if k == 0 {
        return vec![(vec![], false)];
    }
    let mut out = Vec::new();
    for (p, odd) in permutations(k - 1) {
        for pos in 0..=p.len() {
            let mut q = p.clone();
            q.insert(pos, k - 1);
            // inserting at `pos` adds (len - pos) inversions
            out.push((q, odd ^ ((p.len() - pos) % 2 == 1)));
        }
    }
    out
}

/// `Tr(At^k)(X_1..X_k) = eps_k sum_sigma sgn(sigma) Tr(At(X_sigma1) ∧ ... ∧ At(X_sigmak))`, tagged with
/// `1/((-2 pi i)^k k!)`. `eps_k = (-1)^{k(k-1)/2}` is the Koszul sign of moving form degrees past
/// cochain arguments. Zero for `k > n`.
pub fn chk_gf(k: usize, xs: &[FormalVectorField]) -> Result<TaggedForm> {
    if xs.len() != k || k == 0 {
        return Err(Error::InvalidArgument(format!("chk_gf needs exactly k = {k} >= 1 fields, got {}", xs.len())));
    }
    let n = xs[0].rank();
    let order = xs[0].order();
    for x in xs {
        check_pair(&xs[0], x)?;
    }
    let tag = ScaleTag { k: k as u32 };
    if k > n {
        return Ok(TaggedForm { form: FormalForm::zero(n, order, k), tag });
    }
    let ats: Vec<_> = xs.iter().map(atiyah_rep).collect();
    let mut out = FormalForm::zero(n, order, k);
    for (p, odd) in permutations(k) {
        let mut prod = ats[p[0]].clone();
        for &i in &p[1..] {
            prod = prod.mul(&ats[i]);
        }
        let tr = prod.trace();
        out = if odd { out.try_sub(&tr)? } else { out.try_add(&tr)? };
    }
    if (k * (k - 1) / 2) % 2 == 1 {
        out = out.neg();
    }
    Ok(TaggedForm { form: out, tag })
}

/// A `W_n`-module in which cochains take values.
pub trait LieModule: Clone {
    fn act(&self, x: &FormalVectorField) -> Result<Self>;
    fn add(&self, other: &Self) -> Result<Self>;
    fn neg(&self) -> Self;
}

impl LieModule for FormalForm {
    fn act(&self, x: &FormalVectorField) -> Result<Self> {
        if x.rank() != self.rank() || x.order() != self.order() {
            return Err(shape("Lie derivative with mismatched field"));
        }
        Ok(self.lie_derivative(x))
    }

    fn add(&self, other: &Self) -> Result<Self> {
        self.try_add(other)
    }

    fn neg(&self) -> Self {
        FormalForm::neg(self)
    }
}

/// A continuous cochain, represented by its evaluation procedure.
pub trait LieCochain {
    type Value: LieModule;
    fn arity(&self) -> usize;
    fn eval(&self, args: &[FormalVectorField]) -> Result<Self::Value>;
}

/// A 0-cochain: a fixed module element.
pub struct ConstantCochain<V>(pub V);

impl<V: LieModule> LieCochain for ConstantCochain<V> {
    type Value = V;
    fn arity(&self) -> usize {
        0
    }
    fn eval(&self, _: &[FormalVectorField]) -> Result<V> {
        Ok(self.0.clone())
    }
}

pub struct Ch2Cochain;

impl LieCochain for Ch2Cochain {
    type Value = FormalForm;
    fn arity(&self) -> usize {
        2
    }
    fn eval(&self, args: &[FormalVectorField]) -> Result<FormalForm> {
        ch2_gf(&args[0], &args[1])
    }
}

pub struct C1Cochain;

impl LieCochain for C1Cochain {
    type Value = FormalForm;
    fn arity(&self) -> usize {
        1
    }
    fn eval(&self, args: &[FormalVectorField]) -> Result<FormalForm> {
        Ok(c1_gf(&args[0]))
    }
}

/// The primitive `alpha` as a 2-cochain (not alternating).
pub struct AlphaCochain;

impl LieCochain for AlphaCochain {
    type Value = FormalForm;
    fn arity(&self) -> usize {
        2
    }
    fn eval(&self, args: &[FormalVectorField]) -> Result<FormalForm> {
        alpha_primitive(&args[0], &args[1])
    }
}

/// `(d phi)(X_0..X_p) = sum_i (-1)^i X_i . phi(..^i..) + sum_{i<j} (-1)^{i+j} phi([X_i,X_j], ..^i..^j..)`.
pub fn ce_diff_eval<C: LieCochain>(phi: &C, args: &[FormalVectorField]) -> Result<C::Value> {
    let p = phi.arity();
    if args.len() != p + 1 {
        return Err(Error::InvalidArgument(format!("d of a {p}-cochain takes {} arguments, got {}", p + 1, args.len())));
    }
    let mut acc: Option<C::Value> = None;
    let mut push = |v: C::Value, negative: bool| -> Result<()> {
        let v = if negative { v.neg() } else { v };
        acc = Some(match acc.take() {
            None => v,
            Some(a) => a.add(&v)?,
        });
        Ok(())
    };
    for i in 0..=p {
        let rest: Vec<_> = args.iter().enumerate().filter(|(k, _)| *k != i).map(|(_, x)| x.clone()).collect();
        push(phi.eval(&rest)?.act(&args[i])?, i % 2 == 1)?;
    }
    for i in 0..=p {
        for j in i + 1..=p {
            let mut rest = vec![args[i].try_bracket(&args[j])?];
            rest.extend(args.iter().enumerate().filter(|(k, _)| *k != i && *k != j).map(|(_, x)| x.clone()));
            push(phi.eval(&rest)?, (i + j) % 2 == 1)?;
        }
    }
    Ok(acc.expect("at least one term"))
}

/// Tagged forms are equal when both the tag and the exact form agree.
pub fn tagged_equal(a: &TaggedForm, b: &TaggedForm) -> bool {
    a.tag == b.tag && a.form == b.form
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::form::mono;
    use crate::jet::JetSeries;
    use crate::scalar::rat;
    use proptest::prelude::*;

    const K: u32 = 12;

    fn field(n: usize, parts: &[(&[u32], usize, i64)]) -> FormalVectorField {
        let mut x = FormalVectorField::zero(n, K);
        for &(e, j, c) in parts {
            x = x.try_add(&FormalVectorField::along(mono(n, K, e, rat(c)), j)).unwrap();
        }
        x
    }

    fn dt(n: usize, i: usize) -> FormalForm {
        FormalForm::dt(n, K, i)
    }

    #[test]
    fn atiyah_examples() {
        assert!(atiyah_rep(&field(2, &[(&[0, 0], 0, 1)])).get(0, 0).is_zero());
        let at = atiyah_rep(&field(1, &[(&[2], 0, 1)]));
        assert_eq!(at.get(0, 0), &dt(1, 0).scale(&rat(-2)));
        let lin = atiyah_rep(&field(2, &[(&[1, 0], 0, 1)]));
        assert!((0..2).all(|i| (0..2).all(|j| lin.get(i, j).is_zero())));
    }

    #[test]
    fn ch2_examples() {
        let x = field(2, &[(&[1, 1], 0, 1)]);
        let y = field(2, &[(&[1, 1], 1, 1)]);
        assert_eq!(ch2_gf(&x, &y).unwrap(), dt(2, 0).wedge(&dt(2, 1)).neg());
        assert_eq!(ch2_gf(&x, &y).unwrap().to_string(), "-dt1^dt2");
        assert!(ch2_gf(&field(1, &[(&[3], 0, 1)]), &field(1, &[(&[2], 0, 1)])).unwrap().is_zero());
        let l1 = field(2, &[(&[1, 0], 1, 2), (&[0, 1], 0, 1)]);
        let l2 = field(2, &[(&[1, 0], 0, 3)]);
        assert!(ch2_gf(&l1, &l2).unwrap().is_zero());
    }

    #[test]
    fn c1_examples() {
        assert!(c1_gf(&field(1, &[(&[1], 0, 1)])).is_zero());
        assert_eq!(c1_gf(&field(1, &[(&[2], 0, 1)])), dt(1, 0).scale(&rat(2)));
        assert!(c1_gf(&field(2, &[(&[2, 0], 1, 1)])).is_zero());
    }

    #[test]
    fn chk_consistency() {
        let x = field(2, &[(&[1, 1], 0, 1)]);
        let y = field(2, &[(&[1, 1], 1, 1)]);
        let c1 = chk_gf(1, &[x.clone()]).unwrap();
        assert_eq!(c1.rational_part(), c1_gf(&x));
        let z = field(2, &[(&[2, 0], 0, 1), (&[0, 2], 1, -3)]);
        assert_eq!(chk_gf(1, &[z.clone()]).unwrap().rational_part(), c1_gf(&z));
        let c2 = chk_gf(2, &[x.clone(), y.clone()]).unwrap();
        assert_eq!(c2.rational_part(), ch2_gf(&x, &y).unwrap());
        assert_eq!(c2.tag.to_string(), "1/((-2*pi*i)^2*2!)");
        assert!(chk_gf(3, &[x.clone(), y.clone(), z]).unwrap().form.is_zero());
        assert!(chk_gf(2, &[x]).is_err());
    }

    #[test]
    fn alpha_examples() {
        let x = field(2, &[(&[1, 1], 0, 1)]);
        let y = field(2, &[(&[1, 1], 1, 1)]);
        let a = alpha_primitive(&x, &y).unwrap();
        assert_eq!(a.to_string(), "-t1 dt2");
        assert_eq!(a.d(), ch2_gf(&x, &y).unwrap());
        assert!(alpha_primitive(&field(2, &[(&[0, 0], 0, 5)]), &y).unwrap().is_zero());
        let a1 = alpha_primitive(&field(1, &[(&[2], 0, 1)]), &field(1, &[(&[3], 0, 1)])).unwrap();
        assert!(!a1.is_zero());
        assert!(a1.d().is_zero());
    }

    #[test]
    fn ce_examples() {
        let w = dt(2, 0).wedge(&dt(2, 1)).mul_function(&JetSeries::var(2, K, 0));
        let x = field(2, &[(&[1, 1], 1, 1)]);
        assert_eq!(ce_diff_eval(&ConstantCochain(w.clone()), &[x.clone()]).unwrap(), w.lie_derivative(&x));
        let fields = [field(2, &[(&[2, 1], 0, 1)]), x.clone(), field(2, &[(&[0, 3], 0, 1), (&[1, 0], 1, 2)])];
        assert!(ce_diff_eval(&Ch2Cochain, &fields).unwrap().is_zero());
        assert!(ce_diff_eval(&C1Cochain, &fields[..2]).unwrap().is_zero());
        assert!(ce_diff_eval(&C1Cochain, &fields).is_err());
    }

    #[test]
    fn permutation_signs() {
        let perms = permutations(3);
        assert_eq!(perms.len(), 6);
        assert_eq!(perms.iter().filter(|(_, odd)| *odd).count(), 3);
        for (p, odd) in perms {
            let inv = (0..3).flat_map(|i| (i + 1..3).map(move |j| (i, j))).filter(|&(i, j)| p[i] > p[j]).count();
            assert_eq!(inv % 2 == 1, odd);
        }
    }

    pub(crate) fn monomial_field(n: usize, max_deg: u32) -> impl Strategy<Value = FormalVectorField> {
        prop::collection::vec((prop::collection::vec(0u32..=max_deg, n), 0..n, -2i64..=2), 1..=2).prop_map(move |ts| {
            let mut x = FormalVectorField::zero(n, K);
            for (mut e, j, c) in ts {
                while e.iter().sum::<u32>() > max_deg {
                    let i = e.iter().position(|&v| v > 0).unwrap();
                    e[i] -= 1;
                }
                x = x.try_add(&FormalVectorField::along(mono(n, K, &e, rat(c)), j)).unwrap();
            }
            x
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]

        #[test]
        fn ch2_cocycle(x in monomial_field(2, 3), y in monomial_field(2, 3), z in monomial_field(2, 3)) {
            prop_assert!(ce_diff_eval(&Ch2Cochain, &[x, y, z]).unwrap().is_zero());
        }

        #[test]
        fn ch2_cocycle_rank3(x in monomial_field(3, 3), y in monomial_field(3, 3), z in monomial_field(3, 3)) {
            prop_assert!(ce_diff_eval(&Ch2Cochain, &[x, y, z]).unwrap().is_zero());
        }

        #[test]
        fn c1_cocycle(x in monomial_field(3, 3), y in monomial_field(3, 3)) {
            prop_assert!(ce_diff_eval(&C1Cochain, &[x, y]).unwrap().is_zero());
        }

        #[test]
        fn closed_and_transgressed(x in monomial_field(3, 3), y in monomial_field(3, 3)) {
            let c = ch2_gf(&x, &y).unwrap();
            prop_assert!(c.d().is_zero());
            prop_assert_eq!(alpha_primitive(&x, &y).unwrap().d(), c.clone());
            prop_assert_eq!(ch2_gf(&y, &x).unwrap(), c.neg());
        }

        #[test]
        fn chk_alternating(x in monomial_field(3, 3), y in monomial_field(3, 3), z in monomial_field(3, 3)) {
            let a = chk_gf(3, &[x.clone(), y.clone(), z.clone()]).unwrap().form;
            let b = chk_gf(3, &[y.clone(), x.clone(), z.clone()]).unwrap().form;
            prop_assert_eq!(a, b.neg());
            let a = chk_gf(2, &[x.clone(), y.clone()]).unwrap().form;
            prop_assert_eq!(a, chk_gf(2, &[y, x]).unwrap().form.neg());
        }

        #[test]
        fn vanishes_on_gl(a in prop::collection::vec(-3i64..=3, 9), b in prop::collection::vec(-3i64..=3, 9)) {
            let lin = |c: &[i64]| {
                let mut x = FormalVectorField::zero(3, K);
                for (idx, &v) in c.iter().enumerate() {
                    let mut e = vec![0u32; 3];
                    e[idx % 3] = 1;
                    x = x.try_add(&FormalVectorField::along(mono(3, K, &e, rat(v)), idx / 3)).unwrap();
                }
                x
            };
            let (x, y) = (lin(&a), lin(&b));
            prop_assert!(chk_gf(2, &[x.clone(), y.clone()]).unwrap().form.is_zero());
            prop_assert!(chk_gf(1, &[x]).unwrap().form.is_zero());
        }
    }
}
