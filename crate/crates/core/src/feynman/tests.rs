use super::*;

fn c(x: f64, y: f64) -> Complex64 {
    Complex64::new(x, y)
}

fn close(a: f64, b: f64, tol: f64) -> bool {
    (a - b).abs() <= tol
}

#[test]
fn gauss_legendre_exactness() {
    for n in 1..=12 {
        let rule = GaussLegendre::new(n);
        for deg in 0..(2 * n) as i32 {
            let q: f64 = rule.on(0.0, 2.0).map(|(x, w)| w * x.powi(deg)).sum();
            let exact = 2f64.powi(deg + 1) / (deg + 1) as f64;
            assert!(close(q, exact, 1e-12 * exact.max(1.0)), "n={n} deg={deg}: {q} vs {exact}");
        }
    }
}

#[test]
fn heat_kernel_examples() {
    let z = c(0.3, -0.2);
    assert!(close(heat_kernel(0.5, z, z).unwrap(), 1.0 / (2.0 * PI), 1e-15));
    assert_eq!(heat_kernel(0.2, z, c(1.0, 1.0)).unwrap(), heat_kernel(0.2, c(1.0, 1.0), z).unwrap());
    assert!(heat_kernel(0.0, z, z).is_err());
    assert!(heat_kernel(-1.0, z, z).is_err());
    // total mass one, by polar quadrature
    for t in [0.01f64, 0.3, 2.0] {
        let rule = GaussLegendre::new(64);
        let cut = 12.0 * t.sqrt();
        let mass: f64 = rule.on(0.0, cut).map(|(r, w)| w * 2.0 * PI * r * heat_kernel(t, c(r, 0.0), c(0.0, 0.0)).unwrap()).sum();
        assert!(close(mass, 1.0, 1e-6), "t={t}: {mass}");
    }
}

#[test]
fn t_integral_examples() {
    let (a, _) = t_integral_limits(1e-7).unwrap();
    assert!(close(a, 0.5, 1e-6));
    let (_, b) = t_integral_limits(1e-3).unwrap();
    assert!(close(b, 1.25e-4, 1e-6));
    let (a, _) = t_integral_limits(1.0 - 1e-12).unwrap();
    assert!(close(a, 0.0, 1e-9));
    for e in [0.0, 1.0, -0.5, 2.0] {
        assert!(t_integral_limits(e).is_err());
    }
    for e in [0.5, 0.1, 1e-2, 1e-3, 1e-5] {
        let (a, b) = t_integral_limits(e).unwrap();
        let (qa, qb) = t_integral_quadrature(e, 200).unwrap();
        assert!(close(a, qa, 1e-12) && close(b, qb, 1e-12), "eps={e}: {a} {qa} {b} {qb}");
    }
}

#[test]
fn propagator_examples() {
    let z = c(0.1, 0.2);
    assert_eq!(propagator(0.01, 1.0, z, z).unwrap(), c(0.0, 0.0));
    let w = c(-0.3, 0.4);
    assert_eq!(propagator(0.01, 1.0, z, w).unwrap(), -propagator(0.01, 1.0, w, z).unwrap());
    assert!(propagator(0.01, 1e-3, c(0.0, 0.0), c(5.0, 0.0)).is_err());
    assert!(propagator(1e-4, 1e-3, c(0.0, 0.0), c(5.0, 0.0)).unwrap().norm() < 1e-12);
    for (e, l) in [(0.01, 1.0), (0.1, 0.5)] {
        let q = propagator(e, l, z, w).unwrap();
        let exact = propagator_closed_form(e, l, z, w);
        assert!((q - exact).norm() < 1e-10 * exact.norm(), "{q} vs {exact}");
    }
}

#[test]
fn bump_derivative() {
    let b = BumpField::new(c(0.2, -0.1), 0.7, vec![1.0, -0.5, 2.0]).unwrap();
    let z = c(0.4, 0.1);
    let h = 1e-6;
    let dx = (b.value(z + h) - b.value(z - h)) / (2.0 * h);
    let dy = (b.value(z + c(0.0, h)) - b.value(z - c(0.0, h))) / (2.0 * h);
    let fd = c(dx, -dy) / 2.0;
    assert!((b.d_z(z) - fd).norm() < 1e-8);
    assert_eq!(b.value(c(5.0, 0.0)), 0.0);
    assert!(BumpField::new(c(0.0, 0.0), 0.0, vec![1.0]).is_err());
    assert!(BumpField::new(c(0.0, 0.0), 1.0, vec![]).is_err());
}

fn config_a() -> (Vec<BumpField>, Vec<BumpField>) {
    (vec![BumpField::standard(c(0.0, 0.0), 1.0)], vec![BumpField::standard(c(0.5, 0.2), 1.0)])
}

#[test]
fn wheel2_rhs_examples() {
    let (f, g) = config_a();
    // G constant on the F support: G = 1 there up to the profile; use a huge flat bump
    let flat = vec![BumpField::new(c(0.0, 0.0), 1e6, vec![1.0]).unwrap()];
    assert!(wheel2_rhs(&f, &flat, 40).unwrap().norm() < 1e-12);
    // integration by parts: rhs(F, G) + rhs(G, F) = c ∫ ∂(FG) = 0
    let s = wheel2_rhs(&f, &g, 60).unwrap() + wheel2_rhs(&g, &f, 60).unwrap();
    assert!(s.norm() < 1e-4 * wheel2_rhs(&f, &g, 60).unwrap().norm(), "{s}");
    // golden value
    let r = wheel2_rhs(&f, &g, 80).unwrap();
    assert!((r - GOLDEN_RHS_A).norm() < 1e-9, "{r:e}");
}

const GOLDEN_RHS_A: Complex64 = Complex64::new(8.391852945272771e-4, -3.356741573914912e-4);

#[test]
fn wheel2_weight_examples() {
    let cfg = QuadConfig::new(16, 24, 16, 32, vec![0.05, 0.02]).unwrap();
    let f = vec![BumpField::standard(c(0.0, 0.0), 0.5)];
    let far = vec![BumpField::standard(c(5.0, 0.0), 0.5)];
    assert!(wheel2_weight(&f, &far, 0.02, &cfg).unwrap().norm() < 1e-12);
    let (f, g) = config_a();
    let base = wheel2_weight(&f, &g, 0.05, &cfg).unwrap();
    let scaled = wheel2_weight(&[f[0].scaled(2.0)], &[g[0].scaled(3.0)], 0.05, &cfg).unwrap();
    assert!((scaled - base * 6.0).norm() < 1e-10 * scaled.norm());
    assert!(wheel2_weight(&f, &g, 1.5, &cfg).is_err());
    assert!(QuadConfig::new(8, 8, 8, 8, vec![0.01, 0.05]).is_err());
    assert!(QuadConfig::new(0, 8, 8, 8, vec![0.05]).is_err());
}

#[test]
fn wheel2_converges() {
    let (f, g) = config_a();
    let r = wheel2_check(&f, &g, &QuadConfig::standard()).unwrap();
    assert!(r.monotone, "{r:?}");
    assert!(r.relative_error < 0.05, "{r:?}");
}

#[test]
fn profile_table() {
    let text = "# bumps\nF 0 0 1 1\nG 0.5 0.2 1 1 -0.5  # second\n\n";
    let (f, g) = parse_profiles(text).unwrap();
    assert_eq!(f, vec![BumpField::standard(c(0.0, 0.0), 1.0)]);
    assert_eq!(g[0].coeffs, vec![1.0, -0.5]);
    assert!(parse_profiles("F 0 0 1 1\n").is_err());
    assert!(parse_profiles("H 0 0 1 1\nG 0 0 1 1").is_err());
    assert!(parse_profiles("F 0 0 x 1\nG 0 0 1 1").is_err());
}

#[test]
fn spectral_examples() {
    for tau in [c(0.0, 1.0), c(0.0, 2.0), c(0.5, 1.0), c(-0.3, 0.7)] {
        for (m, n) in [(1, 0), (0, 1), (2, -3), (-1, 5)] {
            let l = c(m as f64, 0.0) + tau * n as f64;
            let e = spectral_eigenvalue(l, tau).unwrap();
            let expect = (l * 4.0 * PI * PI).inv();
            assert!((e - expect).norm() < 1e-12 * expect.norm());
            assert!((spectral_eigenvalue(-l, tau).unwrap() + e).norm() < 1e-15);
            // the mode is periodic: Re(k̄ w) ∈ 2πℤ for the generators
            let k = dual_wavevector(c(m as f64, 0.0) + tau * n as f64, tau);
            for w in [c(1.0, 0.0), tau] {
                let phase = (k.conj() * w).re / (2.0 * PI);
                assert!(close(phase, phase.round(), 1e-12));
            }
        }
    }
    assert!(spectral_eigenvalue(c(0.0, 0.0), c(0.0, 1.0)).is_err());
    let (t, e) = spectral_trace(6, &LatticeSpec::new(c(0.0, 1.0), 200).unwrap()).unwrap();
    assert!(t.norm() < 1e-6 && e.norm() < 1e-6);
    for w in [4, 6] {
        for tau in [c(0.0, 1.0), c(0.0, 2.0)] {
            let (t, e) = spectral_trace(w, &LatticeSpec::new(tau, 200).unwrap()).unwrap();
            let scale = (4.0 * PI * PI).powi(w as i32);
            assert!((t - e).norm() * scale <= 1e-6 * (e.norm() * scale).max(1.0), "{t} vs {e}");
        }
    }
}
