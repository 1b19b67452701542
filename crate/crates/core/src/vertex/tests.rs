use super::*;
use proptest::prelude::*;

fn cdo(n: usize) -> Cdo {
    Cdo::new(n, TruncationPolicy::strict(12, 8)).unwrap()
}

fn st(c: &Cdo, s: &str) -> VAState {
    c.state(s).unwrap()
}

#[test]
fn vacuum_examples() {
    let c = cdo(1);
    let vac = c.vacuum();
    let c0 = st(&c, "c[1,0]");
    assert_eq!(c.mode_apply(&vac, -1, &c0).unwrap(), c0);
    for m in [0, 1, 2, -2] {
        assert!(c.mode_apply(&vac, m, &st(&c, "b[1,-1]*c[1,-1]")).unwrap().is_zero());
    }
    let b = st(&c, "b[1,-1]");
    assert_eq!(c.mode_apply(&b, -1, &vac).unwrap(), b);
}

#[test]
fn translation_examples() {
    let c = cdo(1);
    assert_eq!(c.translate(&st(&c, "c[1,0]")).unwrap(), st(&c, "c[1,-1]"));
    assert_eq!(c.translate(&st(&c, "b[1,-1]")).unwrap(), st(&c, "b[1,-2]"));
    assert!(c.translate(&c.vacuum()).unwrap().is_zero());
    // derivation: T(c0^2) = 2 c0 c_{-1}
    assert_eq!(c.translate(&st(&c, "c[1,0]^2")).unwrap(), st(&c, "2*c[1,0]*c[1,-1]"));
    assert_eq!(c.translate(&st(&c, "c[1,-1]")).unwrap(), st(&c, "2*c[1,-2]"));
}

#[test]
fn generator_mode_examples() {
    let c = cdo(1);
    assert_eq!(c.generator_mode(Kind::B, 0, 0, &st(&c, "c[1,0]")).unwrap(), c.vacuum());
    assert_eq!(c.generator_mode(Kind::C, 0, 0, &st(&c, "b[1,-1]")).unwrap(), st(&c, "-vac"));
    assert_eq!(c.generator_mode(Kind::B, 0, -2, &c.vacuum()).unwrap(), st(&c, "b[1,-2]"));
    assert!(c.generator_mode(Kind::B, 1, 0, &c.vacuum()).is_err());
}

#[test]
fn mode_apply_examples() {
    let c = cdo(1);
    let number = st(&c, "c[1,0]*b[1,-1]");
    assert_eq!(c.mode_apply(&number, 0, &st(&c, "c[1,0]")).unwrap(), st(&c, "c[1,0]"));
    for p in 1..=3u32 {
        let a = st(&c, &format!("c[1,0]^{p}*b[1,-1]"));
        for m in 0..=3i64 {
            // T^m c_0 = m! c_{-m}
            let mut arg = st(&c, "c[1,0]");
            let mut rhs = st(&c, &format!("c[1,0]^{p}"));
            for _ in 0..m {
                arg = c.translate(&arg).unwrap();
                rhs = c.translate(&rhs).unwrap();
            }
            let lhs = c.mode_apply(&a, 0, &arg).unwrap();
            assert_eq!(lhs, rhs, "p={p} m={m}");
        }
    }
    let l = st(&c, "b[1,-1]*c[1,-1]");
    assert_eq!(c.mode_apply(&l, 1, &st(&c, "c[1,-1]")).unwrap(), st(&c, "c[1,-1]"));
}

#[test]
fn borcherds_examples() {
    let c = cdo(1);
    let r = c.borcherds_check(&st(&c, "b[1,-1]"), &st(&c, "c[1,0]"), &c.vacuum(), 0, -1).unwrap();
    assert!(r.holds);
    let r = c.borcherds_check(&st(&c, "b[1,-1]"), &st(&c, "b[1,-1]"), &st(&c, "c[1,0]^2"), 0, 0).unwrap();
    assert!(r.holds);
    let r = c.borcherds_check(&st(&c, "c[1,0]"), &st(&c, "c[1,0]"), &st(&c, "b[1,-1]"), -1, 0).unwrap();
    assert!(r.holds);
    let tight = c.with_policy(TruncationPolicy::strict(3, 8));
    assert!(matches!(
        tight.borcherds_check(&st(&c, "b[1,-2]"), &st(&c, "b[1,-1]"), &c.vacuum(), -1, 0),
        Err(Error::Headroom(_))
    ));
}

#[test]
fn overflow_policy() {
    let strict = Cdo::new(1, TruncationPolicy::strict(1, 8)).unwrap();
    let b = strict.state("b[1,-1]").unwrap();
    assert!(matches!(strict.translate(&b), Err(Error::Overflow(_))));
    let lax = Cdo::new(1, TruncationPolicy::dropping(1, 8)).unwrap();
    assert!(lax.translate(&b).unwrap().is_zero());
    let k = Cdo::new(1, TruncationPolicy::strict(4, 1)).unwrap();
    assert!(matches!(k.state("c[1,0]^2"), Err(Error::Overflow(_))));
}

#[test]
fn virasoro_self_product() {
    for n in 1..=2 {
        let c = cdo(n);
        let mut l = VAState::zero(n);
        for i in 0..n {
            let s = format!("b[{0},-1]*c[{0},-1]", i + 1);
            l = l.add(&st(&c, &s));
        }
        assert_eq!(c.mode_apply(&l, 0, &l).unwrap(), c.translate(&l).unwrap());
        assert_eq!(c.mode_apply(&l, 1, &l).unwrap(), l.scale(&rat(2)));
        assert!(c.mode_apply(&l, 2, &l).unwrap().is_zero());
        assert_eq!(c.mode_apply(&l, 3, &l).unwrap(), c.vacuum().scale(&rat(n as i64)));
    }
}

#[test]
fn weight_space_counts() {
    // prod (1-q^k)^{-2}: 1, 2, 5, 10, 20 for n = 1 without c_0.
    let c = Cdo::new(1, TruncationPolicy::strict(10, 0)).unwrap();
    let counts: Vec<_> = (0..5).map(|w| c.weight_space_basis(w).len()).collect();
    assert_eq!(counts, vec![1, 2, 5, 10, 20]);
    let c = Cdo::new(2, TruncationPolicy::strict(10, 2)).unwrap();
    // prod (1-q^k)^{-4}: 1, 4, 14; c_0 monomials of degree <= 2 in 2 variables: 6.
    let counts: Vec<_> = (0..3).map(|w| c.weight_space_basis(w).len()).collect();
    assert_eq!(counts, vec![6, 24, 84]);
}

fn symbol_strategy(n: usize) -> impl Strategy<Value = ModeSymbol> {
    (any::<bool>(), 0..n, 0i64..3).prop_map(|(is_b, j, w)| {
        if is_b {
            ModeSymbol::b(j, -1 - w.min(1))
        } else {
            ModeSymbol::c(j, -w)
        }
    })
}

fn monomial_strategy(n: usize, max_len: usize) -> impl Strategy<Value = Monomial> {
    prop::collection::vec(symbol_strategy(n), 0..=max_len).prop_map(Monomial::from_symbols)
}

fn state_strategy(n: usize, max_weight: u32) -> impl Strategy<Value = VAState> {
    prop::collection::vec((monomial_strategy(n, 3), -3i64..=3), 1..=2).prop_map(move |ts| {
        let mut v = VAState::zero(n);
        for (m, c) in ts {
            if m.weight() <= max_weight {
                v = v.add(&VAState::monomial(n, m, rat(c)));
            }
        }
        v
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn vacuum_axioms(v in state_strategy(2, 4), m in 0i64..4) {
        let c = cdo(2);
        prop_assert_eq!(c.mode_apply(&v, -1, &c.vacuum()).unwrap(), v.clone());
        prop_assert!(c.mode_apply(&v, m, &c.vacuum()).unwrap().is_zero());
    }

    #[test]
    fn translation_axiom(a in state_strategy(2, 3), v in state_strategy(2, 3), m in -2i64..3) {
        let c = cdo(2);
        let lhs = c.translate(&c.mode_apply(&a, m, &v).unwrap()).unwrap()
            .sub(&c.mode_apply(&a, m, &c.translate(&v).unwrap()).unwrap());
        let rhs = c.mode_apply(&a, m - 1, &v).unwrap().scale(&rat(-m));
        prop_assert_eq!(lhs, rhs.clone());
        // (Ta)_{(m)} = -m a_{(m-1)}
        prop_assert_eq!(c.mode_apply(&c.translate(&a).unwrap(), m, &v).unwrap(), rhs);
    }

    #[test]
    fn weight_bookkeeping(a in monomial_strategy(2, 3), v in monomial_strategy(2, 3), m in -2i64..4) {
        let c = cdo(2);
        let a = VAState::monomial(2, a, rat(1));
        let v = VAState::monomial(2, v, rat(1));
        let r = c.mode_apply(&a, m, &v).unwrap();
        if !r.is_zero() {
            let w = a.max_weight() as i64 + v.max_weight() as i64 - m - 1;
            prop_assert_eq!(r.homogeneous_weight().map(|x| x as i64), Some(w));
        } else if m + 1 > (a.max_weight() + v.max_weight()) as i64 {
            prop_assert!(r.is_zero());
        }
    }

    #[test]
    fn filtration_compatibility(a in monomial_strategy(2, 3), v in monomial_strategy(2, 3), m in -2i64..4) {
        let c = cdo(2);
        let (p, q) = (a.b_count(), v.b_count());
        let r = c.mode_apply(&VAState::monomial(2, a, rat(1)), m, &VAState::monomial(2, v, rat(1))).unwrap();
        if !r.is_zero() {
            prop_assert!(r.filtration_degree() <= p + q);
            if m >= 0 {
                prop_assert!(r.filtration_degree() + 1 <= p + q);
            }
        }
    }

    #[test]
    fn borcherds_identity(
        a in monomial_strategy(2, 2),
        b in monomial_strategy(2, 2),
        v in monomial_strategy(2, 2),
        l in -3i64..=3,
        m in -3i64..=3,
    ) {
        prop_assume!(a.weight() + b.weight() + v.weight() <= 4);
        let c = Cdo::new(2, TruncationPolicy::strict(16, 8)).unwrap();
        let r = c.borcherds_check(
            &VAState::monomial(2, a, rat(1)),
            &VAState::monomial(2, b, rat(1)),
            &VAState::monomial(2, v, rat(1)),
            l,
            m,
        ).unwrap();
        prop_assert!(r.holds, "lhs {} rhs {}", r.lhs, r.rhs);
    }

    #[test]
    fn state_grammar_roundtrip(v in state_strategy(2, 6)) {
        prop_assert_eq!(VAState::parse(&v.to_string(), 2).unwrap(), v);
    }
}
