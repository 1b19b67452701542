//! The group 2-cocycle on formal automorphisms: `alpha_2`, `alpha_3`, the primitive `mu`,
//! the lifted closed-form cocycle, and its derivative at the identity.
//!
//! Matrices are transposed Jacobians `h(f) = Jac(f)^T`, which satisfy
//! `h(f2 o f1) = h(f1) f1^* h(f2)`, so the left factor belongs to the automorphism applied first.
//!
//! Truncation: Jacobians of order-`K` jets are exact to order `K - 1`, one-forms built from
//! them to `K - 2`. Every value below is returned at the order through which it is exact.

use crate::automorphism::JetAutomorphism;
use crate::calibration;
use crate::error::{shape, Error, Result};
use crate::form::FormalForm;
use crate::gelfand_fuks::ch2_gf;
use crate::matrix::{FormMatrix, JetMatrix};
use crate::nilpotent::NilpotentParam;
use crate::scalar::{ratio, Coeff, Rational};
use crate::vector_field::FormalVectorField;

fn exact_order<R: Coeff>(f: &JetAutomorphism<R>) -> Result<u32> {
    if f.order() < 3 {
        return Err(Error::InvalidArgument("cocycle evaluation needs jet order >= 3".into()));
    }
    Ok(f.order() - 2)
}

fn h<R: Coeff>(f: &JetAutomorphism<R>) -> JetMatrix<R> {
    f.jacobian().transpose().with_order(f.order() - 1)
}

/// `g^{-1} dg` and `dg g^{-1}` at order `K - 2`.
fn maurer_cartan<R: Coeff>(g: &JetMatrix<R>, order: u32) -> Result<(FormMatrix<R>, FormMatrix<R>)> {
    let inv = g.inverse()?.with_order(order).as_forms();
    let dg = g.d().with_order(order);
    Ok((inv.mul(&dg), dg.mul(&inv)))
}

/// `alpha_2(f1, f2) = tr(g1^{-1} dg1 ∧ dg2 g2^{-1})` with `g1 = h(f1)`, `g2 = f1^* h(f2)`.
pub fn alpha2<R: Coeff>(f1: &JetAutomorphism<R>, f2: &JetAutomorphism<R>) -> Result<FormalForm<R>> {
    if f1.rank() != f2.rank() || f1.order() != f2.order() {
        return Err(shape("automorphisms of different rank or order"));
    }
    let order = exact_order(f1)?;
    let g1 = h(f1);
    let g2 = h(f2).pullback(f1.components())?;
    let (a, _) = maurer_cartan(&g1, order)?;
    let (_, b) = maurer_cartan(&g2, order)?;
    Ok(a.mul(&b).trace())
}

/// `alpha_3(f) = (1/3) tr((g^{-1} dg)^3)`, `g = h(f)`. Zero for `n < 3`.
pub fn alpha3<R: Coeff>(f: &JetAutomorphism<R>) -> Result<FormalForm<R>> {
    let order = exact_order(f)?;
    let n = f.rank();
    if n < 3 {
        return Ok(FormalForm::zero(n, order, 3));
    }
    let (a, _) = maurer_cartan(&h(f), order)?;
    Ok(a.mul(&a).mul(&a).trace().scale(&R::from_rational(&ratio(1, 3))))
}

/// `mu(f)` with `d mu(f) = alpha_3(f)`: the Poincaré homotopy of `alpha_3(f)`.
pub fn mu<R: Coeff>(f: &JetAutomorphism<R>) -> Result<FormalForm<R>> {
    let a3 = alpha3(f)?;
    if a3.is_zero() {
        return Ok(FormalForm::zero(f.rank(), a3.order(), 2));
    }
    Ok(a3.poincare_homotopy()?.with_order(a3.order()))
}

/// Both sides of `alpha_3(f2 o f1) = alpha_3(f1) + f1^* alpha_3(f2) - d alpha_2(f1, f2)`.
#[derive(Clone, Debug)]
pub struct PwReport {
    pub holds: bool,
    pub lhs: FormalForm,
    pub rhs: FormalForm,
    pub residual: FormalForm,
}

pub fn pw_check(f1: &JetAutomorphism, f2: &JetAutomorphism) -> Result<PwReport> {
    let order = exact_order(f1)? - 1;
    if f1.rank() != f2.rank() || f1.order() != f2.order() {
        return Err(shape("automorphisms of different rank or order"));
    }
    if f1.rank() < 3 {
        // every three-form vanishes
        let zero = FormalForm::zero(f1.rank(), order, 3);
        return Ok(PwReport { holds: true, lhs: zero.clone(), rhs: zero.clone(), residual: zero });
    }
    let comp = JetAutomorphism::compose(f2, f1)?;
    let lhs = alpha3(&comp)?.with_order(order);
    let rhs = alpha3(f1)?
        .try_add(&f1.pull_form(&alpha3(f2)?)?.with_order(alpha3(f1)?.order()))?
        .with_order(order)
        .try_sub(&alpha2(f1, f2)?.d().with_order(order))?;
    let residual = lhs.try_sub(&rhs)?;
    Ok(PwReport { holds: residual.is_zero(), lhs, rhs, residual })
}

/// `alpha~(f1, f2) = alpha_2(f1, f2) - mu(f1) - f1^* mu(f2) + mu(f2 o f1)`, a closed two-form.
pub fn alpha_tilde<R: Coeff>(f1: &JetAutomorphism<R>, f2: &JetAutomorphism<R>) -> Result<FormalForm<R>> {
    let a2 = alpha2(f1, f2)?;
    let order = a2.order();
    let comp = JetAutomorphism::compose(f2, f1)?;
    let pulled = f1.pull_form(&mu(f2)?)?.with_order(order);
    a2.try_sub(&mu(f1)?)?.try_sub(&pulled)?.try_add(&mu(&comp)?)
}

/// The literal sign pattern `alpha_2 + mu(f1) + f1^* mu(f2) - mu(f2 o f1)`. Its differential is
/// `2 d alpha_2`, so it is closed only when `d alpha_2` vanishes (always for `n <= 2`).
pub fn alpha_tilde_literal(f1: &JetAutomorphism, f2: &JetAutomorphism) -> Result<FormalForm> {
    let a2 = alpha2(f1, f2)?;
    let order = a2.order();
    let comp = JetAutomorphism::compose(f2, f1)?;
    let pulled = f1.pull_form(&mu(f2)?)?.with_order(order);
    a2.try_add(&mu(f1)?)?.try_add(&pulled)?.try_sub(&mu(&comp)?)
}

/// `(d alpha~)(f1, f2, f3) = f1^* alpha~(f2, f3) - alpha~(f2 o f1, f3) + alpha~(f1, f3 o f2) - alpha~(f1, f2)`,
/// the group differential for the left action `f . w = f^* w` with product `f1 . f2 = f2 o f1`.
pub fn group_coboundary(f1: &JetAutomorphism, f2: &JetAutomorphism, f3: &JetAutomorphism) -> Result<FormalForm> {
    let a = alpha_tilde(f2, f3)?;
    let order = a.order();
    let t1 = f1.pull_form(&a)?.with_order(order);
    let t2 = alpha_tilde(&JetAutomorphism::compose(f2, f1)?, f3)?;
    let t3 = alpha_tilde(f1, &JetAutomorphism::compose(f3, f2)?)?;
    let t4 = alpha_tilde(f1, f2)?;
    t1.try_sub(&t2)?.try_add(&t3)?.try_sub(&t4)
}

/// Result of comparing the derivative at the identity with `ch_2`.
#[derive(Clone, Debug)]
pub struct D1Report {
    /// `d/ds d/du [alpha~(id + sX, id + uY) - alpha~(id + uY, id + sX)]`.
    pub lie_value: FormalForm,
    pub ch2_value: FormalForm,
    pub constant: Rational,
    pub holds: bool,
}

fn lift(x: &FormalVectorField, p: NilpotentParam) -> Result<JetAutomorphism<NilpotentParam>> {
    let p = &p;
    let xp = x.map_coeffs(|c| NilpotentParam::from_rational(c) * p.clone());
    JetAutomorphism::flow_step(&xp)
}

fn su_part(w: &FormalForm<NilpotentParam>) -> FormalForm {
    w.map_coeffs(|c| c.su.clone())
}

/// Derivative of `alpha~` at the identity along two square-zero parameters, against `kappa ch_2(X, Y)`.
pub fn d1_compare(x: &FormalVectorField, y: &FormalVectorField) -> Result<D1Report> {
    if !x.vanishes_at_origin() || !y.vanishes_at_origin() {
        return Err(Error::InvalidArgument("fields must vanish at the origin".into()));
    }
    let fx = lift(x, NilpotentParam::param_s())?;
    let fy = lift(y, NilpotentParam::param_u())?;
    let lie_value = su_part(&alpha_tilde(&fx, &fy)?).try_sub(&su_part(&alpha_tilde(&fy, &fx)?))?;
    let constant = calibration::d1_constant();
    let ch2_value = ch2_gf(x, y)?.with_order(lie_value.order());
    let holds = lie_value == ch2_value.scale(&constant);
    Ok(D1Report { lie_value, ch2_value, constant, holds })
}
