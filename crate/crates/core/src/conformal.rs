//! The conformal vector `L = sum_i b^i_{-1} c^i_{-1}` of `CDO_n` (central charge `2n`) and the
//! first-Chern-class anomaly of the vector-field action on it.

use crate::calibration;
use crate::error::{shape, Result};
use crate::form::FormalForm;
use crate::gelfand_fuks::c1_gf;
use crate::hc_action::rho_w;
use crate::jet::{JetSeries, MultiIndex};
use crate::scalar::Rational;
use crate::vector_field::FormalVectorField;
use crate::vertex::{Cdo, Kind, ModeSymbol, VAState};

/// `L_{-2} = sum_i b^i_{-1} T c^i_0`.
pub fn virasoro_vector(n: usize) -> VAState {
    let mut l = VAState::zero(n);
    for i in 0..n {
        l = l.add(&VAState::symbol(n, ModeSymbol::b(i, -1)).product(&VAState::symbol(n, ModeSymbol::c(i, -1))));
    }
    l
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ConformalReport {
    /// `L_(0) v = T v`, per sample.
    pub translation: Vec<bool>,
    /// `L_(1) v = wt(v) v` on each homogeneous component, per sample.
    pub grading: Vec<bool>,
    /// `L_(3) L = n |0>`.
    pub central_charge: bool,
    /// `L_(2) L = 0`.
    pub quasi_primary: bool,
}

impl ConformalReport {
    pub fn holds(&self) -> bool {
        self.translation.iter().chain(&self.grading).all(|&b| b) && self.central_charge && self.quasi_primary
    }
}

pub fn conformal_axiom_check(cdo: &Cdo, samples: &[VAState]) -> Result<ConformalReport> {
    let n = cdo.rank();
    let l = virasoro_vector(n);
    let mut translation = Vec::with_capacity(samples.len());
    let mut grading = Vec::with_capacity(samples.len());
    for v in samples {
        if v.rank() != n {
            return Err(shape(format!("rank {} state in CDO_{n}", v.rank())));
        }
        translation.push(cdo.mode_apply(&l, 0, v)? == cdo.translate(v)?);
        let mut ok = true;
        for (w, part) in v.weight_of() {
            ok &= cdo.mode_apply(&l, 1, &part)? == part.scale(&Rational::from_integer(w.into()));
        }
        grading.push(ok);
    }
    let central_charge = cdo.mode_apply(&l, 3, &l)? == cdo.vacuum().scale(&Rational::from_integer((n as i64).into()));
    let quasi_primary = cdo.mode_apply(&l, 2, &l)?.is_zero();
    Ok(ConformalReport { translation, grading, central_charge, quasi_primary })
}

/// The anomaly `v -> (rho_W(X) L)_(2) v` read on weight-one generators.
#[derive(Clone, Debug)]
pub struct C1Report {
    /// `alpha(X) = sum_j f_j dt_j` with `(rho_W(X) L)_(2) b^j_{-1} = f_j(c_0)`.
    pub alpha: FormalForm,
    pub c1: FormalForm,
    pub sign: Rational,
    /// The map vanishes on every `c^j_{-1} = T c^j_0`.
    pub kills_tc0: bool,
    /// `alpha(X) = sign * c1(X)` on the nose.
    pub holds: bool,
}

fn c0_polynomial(v: &VAState, order: u32) -> Option<JetSeries> {
    let n = v.rank();
    let mut out = JetSeries::zero(n, order);
    for (m, c) in v.terms() {
        let mut e = vec![0u32; n];
        for &(s, p) in m.factors() {
            if s.kind != Kind::C || s.m != 0 {
                return None;
            }
            e[s.j] += p;
        }
        out.add_term(MultiIndex::from_exponents(e), c.clone());
    }
    Some(out)
}

pub fn c1_defect(cdo: &Cdo, x: &FormalVectorField) -> Result<C1Report> {
    let n = x.rank();
    let a = rho_w(cdo, x, &virasoro_vector(n))?;
    let mut kills_tc0 = true;
    let mut alpha = FormalForm::zero(n, x.order(), 1);
    for j in 0..n {
        kills_tc0 &= cdo.mode_apply(&a, 2, &VAState::symbol(n, ModeSymbol::c(j, -1)))?.is_zero();
        let v = cdo.mode_apply(&a, 2, &VAState::symbol(n, ModeSymbol::b(j, -1)))?;
        let f = c0_polynomial(&v, x.order()).expect("weight-zero states are c_0 polynomials");
        alpha = alpha.try_add(&FormalForm::function(f).wedge(&FormalForm::dt(n, x.order(), j)))?;
    }
    let c1 = c1_gf(x);
    let sign = calibration::c1_sign();
    let holds = alpha == c1.scale(&sign);
    Ok(C1Report { alpha, c1, sign, kills_tc0, holds })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hc_action::rho_omega2;
    use crate::parse::{parse_form, parse_vector_field};
    use crate::scalar::rat;
    use crate::vertex::TruncationPolicy;
    use proptest::prelude::*;

    const K: u32 = 8;

    fn cdo(n: usize) -> Cdo {
        Cdo::new(n, TruncationPolicy::strict(12, 10)).unwrap()
    }

    #[test]
    fn virasoro_examples() {
        let c = cdo(2);
        assert_eq!(virasoro_vector(1), cdo(1).state("b[1,-1]*c[1,-1]").unwrap());
        assert_eq!(virasoro_vector(2), c.state("b[1,-1]*c[1,-1] + b[2,-1]*c[2,-1]").unwrap());
        assert_eq!(virasoro_vector(3).homogeneous_weight(), Some(2));
    }

    #[test]
    fn conformal_examples() {
        let c = cdo(1);
        let l = virasoro_vector(1);
        assert_eq!(c.mode_apply(&l, 1, &c.state("c[1,-1]").unwrap()).unwrap(), c.state("c[1,-1]").unwrap());
        assert_eq!(c.mode_apply(&l, 3, &l).unwrap(), c.vacuum());
        assert_eq!(c.mode_apply(&l, 0, &c.state("c[1,0]").unwrap()).unwrap(), c.state("c[1,-1]").unwrap());
        for n in 1..=3 {
            let c = cdo(n);
            let samples = [c.vacuum(), virasoro_vector(n), c.state("c[1,0]^2*b[1,-2] + 3*c[1,-1]").unwrap()];
            assert!(conformal_axiom_check(&c, &samples).unwrap().holds());
        }
    }

    #[test]
    fn closed_two_forms_kill_l() {
        let c = cdo(2);
        for w in ["dt1^dt2", "t1*t2 dt1^dt2", "t1^2 dt1^dt2"] {
            let w = parse_form(w, 2, K).unwrap();
            assert!(rho_omega2(&c, &w, &virasoro_vector(2)).unwrap().is_zero());
        }
    }

    #[test]
    fn c1_examples() {
        let c = cdo(1);
        let r = c1_defect(&c, &parse_vector_field("t1^2 d1", 1, K).unwrap()).unwrap();
        assert!(r.kills_tc0);
        assert_eq!(r.c1, parse_form("2 dt1", 1, K).unwrap());
        assert!(r.holds, "alpha {} vs c1 {}", r.alpha, r.c1);
        let c = cdo(2);
        let r = c1_defect(&c, &parse_vector_field("t1 d2 - 3*t2 d2", 2, K).unwrap()).unwrap();
        assert!(r.alpha.is_zero() && r.holds);
    }

    fn field(n: usize) -> impl Strategy<Value = FormalVectorField> {
        prop::collection::vec((prop::collection::vec(0u32..=3, n), 0..n, -3i64..=3), 1..=3).prop_map(move |ts| {
            let mut x = FormalVectorField::zero(n, K);
            for (mut e, j, c) in ts {
                while e.iter().sum::<u32>() > 3 {
                    let i = e.iter().position(|&v| v > 0).unwrap();
                    e[i] -= 1;
                }
                let f = JetSeries::monomial(n, K, MultiIndex::from_exponents(e), rat(c));
                x = x.try_add(&FormalVectorField::along(f, j)).unwrap();
            }
            x
        })
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(24))]

        #[test]
        fn c1_uniform_sign(x in field(2)) {
            let r = c1_defect(&cdo(2), &x).unwrap();
            prop_assert!(r.kills_tc0);
            prop_assert!(r.holds, "alpha {} vs c1 {}", r.alpha, r.c1);
        }

        #[test]
        fn c1_uniform_sign_rank3(x in field(3)) {
            let r = c1_defect(&cdo(3), &x).unwrap();
            prop_assert!(r.kills_tc0);
            prop_assert!(r.holds, "alpha {} vs c1 {}", r.alpha, r.c1);
        }
    }
}
