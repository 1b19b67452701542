//! Harish-Chandra actions on `CDO_n`: vector fields, one- and closed two-forms, `GL_n`,
//! and the extension defect of the vector-field action.

use crate::calibration;
use crate::error::{shape, Error, Result};
use crate::form::FormalForm;
use crate::gelfand_fuks::ch2_gf;
use crate::matrix::RationalMatrix;
use crate::scalar::Rational;
use crate::vector_field::FormalVectorField;
use crate::vertex::{add_into, Cdo, Kind, ModeSymbol, Monomial, Terms, VAState};

fn check_rank(cdo: &Cdo, n: usize) -> Result<()> {
    if n != cdo.rank() {
        return Err(shape(format!("rank {n} object acting on CDO_{}", cdo.rank())));
    }
    Ok(())
}

/// `tau(f d_j) = f(c_0) b^j_{-1}`.
pub fn tau_w(cdo: &Cdo, x: &FormalVectorField) -> Result<VAState> {
    check_rank(cdo, x.rank())?;
    let mut out = VAState::zero(x.rank());
    for j in 0..x.rank() {
        let f = VAState::from_c0_polynomial(x.component(j));
        out = out.add(&f.product(&VAState::symbol(x.rank(), ModeSymbol::b(j, -1))));
    }
    cdo.enforce(out.raw_terms().clone())
}

/// `rho_W(X) = tau(X)_{(0)}`.
pub fn rho_w(cdo: &Cdo, x: &FormalVectorField, v: &VAState) -> Result<VAState> {
    cdo.mode_apply(&tau_w(cdo, x)?, 0, v)
}

/// `tau(f dt_j) = f(c_0) T c^j_0 = f(c_0) c^j_{-1}`.
pub fn tau_omega1(cdo: &Cdo, theta: &FormalForm) -> Result<VAState> {
    check_rank(cdo, theta.rank())?;
    if theta.degree() != 1 {
        return Err(Error::InvalidArgument(format!("expected a one-form, got degree {}", theta.degree())));
    }
    let n = theta.rank();
    let mut out = VAState::zero(n);
    for (idx, f) in theta.components() {
        let f = VAState::from_c0_polynomial(f);
        out = out.add(&f.product(&VAState::symbol(n, ModeSymbol::c(idx[0], -1))));
    }
    cdo.enforce(out.raw_terms().clone())
}

pub fn rho_omega1(cdo: &Cdo, theta: &FormalForm, v: &VAState) -> Result<VAState> {
    cdo.mode_apply(&tau_omega1(cdo, theta)?, 0, v)
}

/// `rho(omega) = rho_{Omega^1}(h omega)` for a closed two-form, `h` the Poincaré homotopy.
pub fn rho_omega2(cdo: &Cdo, omega: &FormalForm, v: &VAState) -> Result<VAState> {
    check_rank(cdo, omega.rank())?;
    if omega.degree() != 2 {
        return Err(Error::InvalidArgument(format!("expected a two-form, got degree {}", omega.degree())));
    }
    if !omega.is_closed() {
        return Err(Error::NotClosed);
    }
    if omega.is_zero() {
        return Ok(VAState::zero(cdo.rank()));
    }
    rho_omega1(cdo, &omega.poincare_homotopy()?, v)
}

/// Independent path: the vertex-algebra derivation determined by its generator values
/// `c^j_0 -> 0` and `b^k_{-1} -> kappa * tau(iota_{d_k} omega)`, `kappa` calibrated; extended with
/// `T`-equivariance and the Leibniz rule for `(-1)`-products. Uses no primitive of `omega`.
pub fn rho_omega2_direct(cdo: &Cdo, omega: &FormalForm, v: &VAState) -> Result<VAState> {
    check_rank(cdo, omega.rank())?;
    if omega.degree() != 2 {
        return Err(Error::InvalidArgument(format!("expected a two-form, got degree {}", omega.degree())));
    }
    if !omega.is_closed() {
        return Err(Error::NotClosed);
    }
    let n = omega.rank();
    let kappa = calibration::rho_omega2_direct_scale();
    let mut on_b = Vec::with_capacity(n);
    for k in 0..n {
        let field = FormalVectorField::along(crate::jet::JetSeries::one(n, omega.order()), k);
        on_b.push(tau_omega1(cdo, &omega.interior(&field))?.scale(&kappa));
    }
    let mut out = VAState::zero(n);
    for (m, c) in v.terms() {
        out = out.add(&derivation_on(cdo, &on_b, m)?.scale(c));
    }
    cdo.enforce(out.raw_terms().clone())
}

fn derivation_on(cdo: &Cdo, on_b: &[VAState], m: &Monomial) -> Result<VAState> {
    let n = cdo.rank();
    let Some((s, rest)) = m.split_leading() else {
        return Ok(VAState::zero(n));
    };
    let rest_state = VAState::monomial(n, rest.clone(), Rational::from_integer(1.into()));
    let s_state = VAState::symbol(n, s);
    let mut out = s_state.product(&derivation_on(cdo, on_b, &rest)?);
    if s.kind == Kind::B {
        // b^k_m = T^d b^k_{-1} / d!
        let d = s.derivative_order();
        let mut img = on_b[s.j].clone();
        for i in 1..=d {
            img = cdo.translate(&img)?.scale(&Rational::new(1.into(), (i as i64).into()));
        }
        out = out.add(&cdo.mode_apply(&img, -1, &rest_state)?);
    }
    Ok(out)
}

fn symbol_image(kind: Kind, j: usize, m: i64, mat: &RationalMatrix, n: usize) -> VAState {
    // e_j -> sum_l mat[l][j] e_l
    let mut terms = Terms::new();
    for l in 0..n {
        let c = mat.get(l, j).clone();
        add_into(&mut terms, Monomial::from_symbols([ModeSymbol { kind, j: l, m }]), c);
    }
    VAState::from_terms(n, terms)
}

/// `GL_n` acting by `c^j -> sum_l A_{lj} c^l` and `b^j -> sum_l B_{lj} b^l`, `B = (A^T)^{-1}`, on
/// every mode and multiplicatively. A homomorphism: `gl_act(A) gl_act(B) = gl_act(AB)`.
pub fn gl_act(cdo: &Cdo, a: &RationalMatrix, v: &VAState) -> Result<VAState> {
    let n = cdo.rank();
    if a.size() != n {
        return Err(shape(format!("{}x{} matrix acting on CDO_{n}", a.size(), a.size())));
    }
    let b = a.transpose().inverse()?;
    let mut out = VAState::zero(n);
    for (mono, c) in v.terms() {
        let mut img = VAState::vacuum(n).scale(c);
        for s in mono.symbols() {
            let mat = if s.kind == Kind::C { a } else { &b };
            img = img.product(&symbol_image(s.kind, s.j, s.m, mat, n));
        }
        out = out.add(&img);
    }
    cdo.enforce(out.raw_terms().clone())
}

/// The derivative of [`gl_act`] at the identity in direction `M`: the derivation with
/// `c^j -> sum_l M_{lj} c^l` and `b^j -> -sum_l M_{jl} b^l`.
pub fn gl_lie_act(cdo: &Cdo, m: &RationalMatrix, v: &VAState) -> Result<VAState> {
    let n = cdo.rank();
    if m.size() != n {
        return Err(shape(format!("{}x{} matrix acting on CDO_{n}", m.size(), m.size())));
    }
    let mut terms = Terms::new();
    for (mono, c) in v.terms() {
        for &(s, p) in mono.factors() {
            let (_, rest) = mono.without_one(&s).expect("present");
            for l in 0..n {
                let x = match s.kind {
                    Kind::C => m.get(l, s.j).clone(),
                    Kind::B => -m.get(s.j, l).clone(),
                };
                let coeff = x * c * Rational::from_integer(p.into());
                add_into(&mut terms, rest.times(ModeSymbol { kind: s.kind, j: l, m: s.m }, 1), coeff);
            }
        }
    }
    cdo.enforce(terms)
}

/// `D(X, Y) v = [rho X, rho Y] v - rho([X, Y]) v`.
pub fn msv_defect(cdo: &Cdo, x: &FormalVectorField, y: &FormalVectorField, v: &VAState) -> Result<VAState> {
    let xy = rho_w(cdo, x, &rho_w(cdo, y, v)?)?;
    let yx = rho_w(cdo, y, &rho_w(cdo, x, v)?)?;
    let br = rho_w(cdo, &x.try_bracket(y)?, v)?;
    Ok(xy.sub(&yx).sub(&br))
}

/// The predicted defect `s * rho_{Omega^2}(ch_2(X, Y)) v`.
pub fn msv_prediction(cdo: &Cdo, x: &FormalVectorField, y: &FormalVectorField, v: &VAState) -> Result<VAState> {
    let w = ch2_gf(x, y)?;
    Ok(rho_omega2(cdo, &w, v)?.scale(&calibration::msv_sign()))
}

/// An element `(X, omega)` of the extension of `W_n` by closed two-forms.
#[derive(Clone, Debug, PartialEq)]
pub struct ExtendedVectorField {
    pub x: FormalVectorField,
    pub omega: FormalForm,
}

impl ExtendedVectorField {
    pub fn new(x: FormalVectorField, omega: FormalForm) -> Result<Self> {
        if omega.degree() != 2 || omega.rank() != x.rank() {
            return Err(shape("extension component must be a two-form of matching rank"));
        }
        if !omega.is_closed() {
            return Err(Error::NotClosed);
        }
        Ok(Self { x, omega })
    }

    pub fn field(x: FormalVectorField) -> Self {
        let omega = FormalForm::zero(x.rank(), x.order(), 2);
        Self { x, omega }
    }

    pub fn form(omega: FormalForm) -> Result<Self> {
        Self::new(FormalVectorField::zero(omega.rank(), omega.order()), omega)
    }

    pub fn is_zero(&self) -> bool {
        self.x.is_zero() && self.omega.is_zero()
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        Ok(Self { x: self.x.try_add(&other.x)?, omega: self.omega.try_add(&other.omega)? })
    }

    /// `([X, Y], L_X eta - L_Y omega + ch_2(X, Y))`.
    pub fn tilde_bracket(&self, other: &Self) -> Result<Self> {
        let x = self.x.try_bracket(&other.x)?;
        let omega = other
            .omega
            .lie_derivative(&self.x)
            .try_sub(&self.omega.lie_derivative(&other.x))?
            .try_add(&ch2_gf(&self.x, &other.x)?)?;
        Ok(Self { x, omega })
    }
}
