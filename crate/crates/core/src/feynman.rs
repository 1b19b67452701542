//! Numerics for the one-loop analytics: heat kernel, propagator, the `ε → 0` t-integrals, the
//! two-vertex wheel against its closed-form limit, and the spectral trace on a flat torus.
//!
//! Points of the plane are `Complex64`; the measure is `d²z = dx dy`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;

use crate::calibration;
use crate::characters::eisenstein_lattice;
use crate::characters::LatticeSpec;
use crate::error::{Error, Result};

fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}

/// `(4πt)^{-1} exp(-|z - w|² / 4t)`.
pub fn heat_kernel(t: f64, z: Complex64, w: Complex64) -> Result<f64> {
    if !(t > 0.0) {
        return Err(invalid(format!("heat kernel needs t > 0, got {t}")));
    }
    Ok((-(z - w).norm_sqr() / (4.0 * t)).exp() / (4.0 * PI * t))
}

/// Closed forms of `∫_ε^1 ε/(t+ε)² dt = 1/2 - ε/(1+ε)` and `∫_ε^1 ε³/(t+ε)³ dt = ε/8 - ε³/(2(1+ε)²)`.
pub fn t_integral_limits(eps: f64) -> Result<(f64, f64)> {
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    let first = 0.5 - eps / (1.0 + eps);
    let second = eps / 8.0 - eps.powi(3) / (2.0 * (1.0 + eps).powi(2));
    Ok((first, second))
}

/// The same two integrals by Gauss-Legendre quadrature in `log t`.
pub fn t_integral_quadrature(eps: f64, nodes: usize) -> Result<(f64, f64)> {
    t_integral_limits(eps)?;
    let rule = GaussLegendre::new(nodes);
    let (a, b) = (eps.ln(), 0.0);
    let mut first = 0.0;
    let mut second = 0.0;
    for (x, w) in rule.on(a, b) {
        let t = x.exp();
        first += w * t * eps / (t + eps).powi(2);
        second += w * t * eps.powi(3) / (t + eps).powi(3);
    }
    Ok((first, second))
}

/// `P_{ε<L}(z, w) = ∫_ε^L -(z̄ - w̄)/(4t) K_t(z, w) dt`, by quadrature in `log t`.
pub fn propagator(eps: f64, l: f64, z: Complex64, w: Complex64) -> Result<Complex64> {
    propagator_with(eps, l, z, w, &GaussLegendre::new(64))
}

fn propagator_with(eps: f64, l: f64, z: Complex64, w: Complex64, rule: &GaussLegendre) -> Result<Complex64> {
    if !(eps > 0.0 && eps < l) {
        return Err(invalid(format!("propagator needs 0 < eps < L, got eps = {eps}, L = {l}")));
    }
    let radial = propagator_radial(eps, l, (z - w).norm_sqr(), rule);
    Ok(-(z - w).conj() * radial)
}

/// `∫_ε^L (4t)^{-1} K_t dt` at squared distance `r2`.
fn propagator_radial(eps: f64, l: f64, r2: f64, rule: &GaussLegendre) -> f64 {
    rule.on(eps.ln(), l.ln())
        .map(|(x, w)| {
            let t = x.exp();
            w * t * (-r2 / (4.0 * t)).exp() / (16.0 * PI * t * t)
        })
        .sum()
}

/// The propagator's closed form `-(z̄ - w̄)(e^{-r²/4L} - e^{-r²/4ε}) / (4π r²)`, `r = |z - w|`.
pub fn propagator_closed_form(eps: f64, l: f64, z: Complex64, w: Complex64) -> Complex64 {
    let d = z - w;
    let r2 = d.norm_sqr();
    if r2 == 0.0 {
        return Complex64::new(0.0, 0.0);
    }
    -d.conj() * (((-r2 / (4.0 * l)).exp() - (-r2 / (4.0 * eps)).exp()) / (4.0 * PI * r2))
}

/// Gauss-Legendre rule on `[-1, 1]`.
#[derive(Clone, Debug)]
pub struct GaussLegendre {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl GaussLegendre {
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "need at least one node");
        let mut nodes = vec![0.0; n];
        let mut weights = vec![0.0; n];
        for i in 0..n.div_ceil(2) {
            let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
            let mut dp = 0.0;
            for _ in 0..100 {
                let (mut p0, mut p1) = (1.0, x);
                for k in 2..=n {
                    let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                    p0 = p1;
                    p1 = p2;
                }
                dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
                let dx = p1 / dp;
                x -= dx;
                if dx.abs() < 1e-15 {
                    break;
                }
            }
            let w = 2.0 / ((1.0 - x * x) * dp * dp);
            nodes[i] = -x;
            nodes[n - 1 - i] = x;
            weights[i] = w;
            weights[n - 1 - i] = w;
        }
        Self { nodes, weights }
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    /// Nodes and weights mapped to `[a, b]`.
    pub fn on(&self, a: f64, b: f64) -> impl Iterator<Item = (f64, f64)> + '_ {
        let (h, m) = ((b - a) / 2.0, (a + b) / 2.0);
        self.nodes.iter().zip(&self.weights).map(move |(&x, &w)| (m + h * x, h * w))
    }
}

/// Pairwise summation in a fixed order.
fn pairwise_sum(xs: &[Complex64]) -> Complex64 {
    match xs.len() {
        0 => Complex64::new(0.0, 0.0),
        1 => xs[0],
        n => pairwise_sum(&xs[..n / 2]) + pairwise_sum(&xs[n / 2..]),
    }
}

/// A radial bump `h(s) = (Σ_k a_k s^k)(1 - s)^3`, `s = |z - c|² / R²`, zero for `s ≥ 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct BumpField {
    pub center: Complex64,
    pub radius: f64,
    pub coeffs: Vec<f64>,
}

impl BumpField {
    pub fn new(center: Complex64, radius: f64, coeffs: Vec<f64>) -> Result<Self> {
        if !(radius > 0.0) {
            return Err(invalid(format!("bump radius must be positive, got {radius}")));
        }
        if coeffs.is_empty() {
            return Err(invalid("bump profile needs at least one coefficient"));
        }
        Ok(Self { center, radius, coeffs })
    }

    pub fn standard(center: Complex64, radius: f64) -> Self {
        Self { center, radius, coeffs: vec![1.0] }
    }

    fn s(&self, z: Complex64) -> f64 {
        (z - self.center).norm_sqr() / (self.radius * self.radius)
    }

    fn profile(&self, s: f64) -> (f64, f64) {
        // (h(s), h'(s))
        let mut p = 0.0;
        let mut dp = 0.0;
        for a in self.coeffs.iter().rev() {
            dp = dp * s + p;
            p = p * s + a;
        }
        let u = 1.0 - s;
        (p * u.powi(3), dp * u.powi(3) - 3.0 * p * u * u)
    }

    pub fn value(&self, z: Complex64) -> f64 {
        let s = self.s(z);
        if s >= 1.0 {
            return 0.0;
        }
        self.profile(s).0
    }

    /// `∂_z f = h'(s) (z̄ - c̄) / R²`.
    pub fn d_z(&self, z: Complex64) -> Complex64 {
        let s = self.s(z);
        if s >= 1.0 {
            return Complex64::new(0.0, 0.0);
        }
        (z - self.center).conj() * (self.profile(s).1 / (self.radius * self.radius))
    }

    pub fn scaled(&self, lambda: f64) -> Self {
        Self { coeffs: self.coeffs.iter().map(|a| a * lambda).collect(), ..self.clone() }
    }
}

fn product(fs: &[BumpField], z: Complex64) -> f64 {
    fs.iter().map(|f| f.value(z)).product()
}

/// `∂_z Π g_j` by the product rule.
fn d_product(gs: &[BumpField], z: Complex64) -> Complex64 {
    let mut total = Complex64::new(0.0, 0.0);
    for (j, g) in gs.iter().enumerate() {
        let rest: f64 = gs.iter().enumerate().filter(|&(i, _)| i != j).map(|(_, h)| h.value(z)).product();
        if rest != 0.0 {
            total += g.d_z(z) * rest;
        }
    }
    total
}

/// Quadrature resolutions and the `ε` schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct QuadConfig {
    /// Gauss nodes per axis (radial and angular) on the outer disk.
    pub grid: usize,
    /// Radial nodes for the relative coordinate `w = z₂ - z₁`, on `[0, w_cut √ε]`.
    pub radial: usize,
    /// Angular nodes for `w` (periodic trapezoid).
    pub angular: usize,
    /// Gauss nodes in `log t`.
    pub t_nodes: usize,
    pub eps_schedule: Vec<f64>,
}

impl QuadConfig {
    pub fn new(grid: usize, radial: usize, angular: usize, t_nodes: usize, eps_schedule: Vec<f64>) -> Result<Self> {
        if grid == 0 || radial == 0 || angular == 0 || t_nodes == 0 {
            return Err(invalid("quadrature resolutions must be positive"));
        }
        if eps_schedule.is_empty() {
            return Err(invalid("empty epsilon schedule"));
        }
        if eps_schedule.iter().any(|&e| !(e > 0.0 && e < 1.0)) || eps_schedule.windows(2).any(|w| w[1] >= w[0]) {
            return Err(invalid("epsilon schedule must decrease strictly inside (0, 1)"));
        }
        Ok(Self { grid, radial, angular, t_nodes, eps_schedule })
    }

    pub fn standard() -> Self {
        Self::new(40, 40, 32, 48, vec![0.1, 0.05, 0.02, 0.01]).expect("valid")
    }
}

/// Cut-off of the relative coordinate in units of `√ε`; `K_ε` has decayed by `e^{-36}` there.
const W_CUT: f64 = 12.0;

/// `∫_{C²} (Π f_i)(z₁)(Π g_j)(z₂) K_ε(z₁, z₂) P_{ε<1}(z₁, z₂) d²z₁ d²z₂`, scaled by the
/// calibrated measure constant. Integrated in `z₁` over the first `F`-support and in
/// `w = z₂ - z₁` in polar coordinates.
pub fn wheel2_weight(f: &[BumpField], g: &[BumpField], eps: f64, cfg: &QuadConfig) -> Result<Complex64> {
    if f.is_empty() || g.is_empty() {
        return Err(invalid("wheel weight needs at least one F and one G bump"));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(invalid(format!("epsilon must lie in (0, 1), got {eps}")));
    }
    let t_rule = GaussLegendre::new(cfg.t_nodes);
    let rho_rule = GaussLegendre::new(cfg.radial);
    let sq = eps.sqrt();
    // inner kernel: rho-weight * K_ε(rho) * radial propagator(rho) * rho (the Jacobian)
    let inner: Vec<(f64, f64)> = rho_rule
        .on(0.0, W_CUT * sq)
        .map(|(rho, w)| {
            let r2 = rho * rho;
            let k = (-r2 / (4.0 * eps)).exp() / (4.0 * PI * eps);
            (rho, w * rho * k * propagator_radial(eps, 1.0, r2, &t_rule))
        })
        .collect();
    let dirs: Vec<Complex64> = (0..cfg.angular)
        .map(|a| Complex64::from_polar(1.0, 2.0 * PI * a as f64 / cfg.angular as f64))
        .collect();
    let dtheta = 2.0 * PI / cfg.angular as f64;
    let outer = disk_nodes(&f[0], cfg.grid);
    let cells: Vec<Complex64> = outer
        .par_iter()
        .map(|&(z1, wz)| {
            let fz = product(f, z1);
            if fz == 0.0 {
                return Complex64::new(0.0, 0.0);
            }
            let mut acc = Vec::with_capacity(inner.len());
            for &(rho, wr) in &inner {
                let mut ring = Complex64::new(0.0, 0.0);
                for &d in &dirs {
                    let w = d * rho;
                    let gz = product(g, z1 + w);
                    if gz != 0.0 {
                        // -(z̄₁ - z̄₂) = w̄
                        ring += w.conj() * gz;
                    }
                }
                acc.push(ring * (wr * dtheta));
            }
            pairwise_sum(&acc) * (fz * wz)
        })
        .collect();
    Ok(pairwise_sum(&cells) * calibration::wheel2_scale())
}

/// Gauss nodes on the support disk of `f`: Gauss-Legendre in the radius, trapezoid in the angle.
fn disk_nodes(f: &BumpField, n: usize) -> Vec<(Complex64, f64)> {
    let rule = GaussLegendre::new(n);
    let angles = 2 * n;
    let dtheta = 2.0 * PI / angles as f64;
    let mut out = Vec::with_capacity(n * angles);
    for (r, wr) in rule.on(0.0, f.radius) {
        for a in 0..angles {
            let z = f.center + Complex64::from_polar(r, dtheta * a as f64);
            out.push((z, wr * r * dtheta));
        }
    }
    out
}

/// `1/(2(4π)²) ∫ (Π f_i) ∂_z (Π g_j) d²z`.
pub fn wheel2_rhs(f: &[BumpField], g: &[BumpField], grid: usize) -> Result<Complex64> {
    if f.is_empty() || g.is_empty() {
        return Err(invalid("wheel rhs needs at least one F and one G bump"));
    }
    let vals: Vec<Complex64> = disk_nodes(&f[0], grid)
        .into_iter()
        .map(|(z, w)| d_product(g, z) * (product(f, z) * w))
        .collect();
    Ok(pairwise_sum(&vals) / (2.0 * (4.0 * PI).powi(2)))
}

/// The weights along the `ε` schedule and their extrapolation to `ε = 0`.
#[derive(Clone, Debug)]
pub struct Wheel2Report {
    pub eps: Vec<f64>,
    pub weights: Vec<Complex64>,
    pub extrapolated: Complex64,
    pub rhs: Complex64,
    pub relative_error: f64,
    /// `|w(ε_{i+1}) - rhs|` decreases along the schedule.
    pub monotone: bool,
}

/// Evaluates the schedule and extrapolates with the Neville polynomial through the last
/// (up to three) points.
pub fn wheel2_check(f: &[BumpField], g: &[BumpField], cfg: &QuadConfig) -> Result<Wheel2Report> {
    let mut weights = Vec::with_capacity(cfg.eps_schedule.len());
    for &e in &cfg.eps_schedule {
        weights.push(wheel2_weight(f, g, e, cfg)?);
    }
    let k = weights.len().min(3);
    let xs = &cfg.eps_schedule[cfg.eps_schedule.len() - k..];
    let ys = &weights[weights.len() - k..];
    let extrapolated = neville_at_zero(xs, ys);
    let rhs = wheel2_rhs(f, g, 2 * cfg.grid)?;
    let relative_error = (extrapolated - rhs).norm() / rhs.norm();
    let monotone = weights.windows(2).all(|w| (w[1] - rhs).norm() <= (w[0] - rhs).norm());
    Ok(Wheel2Report { eps: cfg.eps_schedule.clone(), weights, extrapolated, rhs, relative_error, monotone })
}

/// Value at `0` of the interpolating polynomial through `(xs, ys)`.
pub fn neville_at_zero(xs: &[f64], ys: &[Complex64]) -> Complex64 {
    let mut p = ys.to_vec();
    let n = xs.len();
    for m in 1..n {
        for i in 0..n - m {
            p[i] = (p[i + 1] * xs[i] - p[i] * xs[i + m]) / (xs[i] - xs[i + m]);
        }
    }
    p[0]
}

/// Reads bumps from a plain-text table: one bump per line, `F|G cx cy radius a0 [a1 ...]`;
/// blank lines and `#` comments are skipped.
pub fn parse_profiles(text: &str) -> Result<(Vec<BumpField>, Vec<BumpField>)> {
    let mut f = Vec::new();
    let mut g = Vec::new();
    for (no, line) in text.lines().enumerate() {
        let line = line.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split_whitespace().collect();
        let bad = |msg: &str| invalid(format!("profile line {}: {msg}", no + 1));
        if fields.len() < 5 {
            return Err(bad("expected `F|G cx cy radius a0 [a1 ...]`"));
        }
        let nums: Vec<f64> = fields[1..]
            .iter()
            .map(|s| s.parse::<f64>().map_err(|_| bad(&format!("not a number: {s}"))))
            .collect::<Result<_>>()?;
        let bump = BumpField::new(Complex64::new(nums[0], nums[1]), nums[2], nums[3..].to_vec())
            .map_err(|e| bad(&e.to_string()))?;
        match fields[0] {
            "F" | "f" => f.push(bump),
            "G" | "g" => g.push(bump),
            other => return Err(bad(&format!("kind must be F or G, got {other}"))),
        }
    }
    if f.is_empty() || g.is_empty() {
        return Err(invalid("profiles need at least one F and one G bump"));
    }
    Ok((f, g))
}

/// Wave vector `k` of the Fourier mode `e^{i Re(k̄ z)}` on `ℂ/(ℤ + τℤ)` attached to the lattice
/// point `λ`: `k = 2πiλ / Im τ`, which pairs with every lattice vector into `2πℤ`.
pub fn dual_wavevector(lambda: Complex64, tau: Complex64) -> Complex64 {
    Complex64::i() * 2.0 * PI * lambda / tau.im
}

/// Eigenvalue of `μ^{-1} ∂_z (2 ∂̄ ∂̄*)^{-1}` on the mode of `λ`, with `μ = 2π · covolume`.
/// On `e^{i Re(k̄ z)}`: `∂_z = i k̄ / 2`, `∂̄ = i k / 2`, `∂̄* = -∂_z`, so `2∂̄∂̄* = |k|²/2`.
pub fn spectral_eigenvalue(lambda: Complex64, tau: Complex64) -> Result<Complex64> {
    if lambda.norm() == 0.0 {
        return Err(invalid("the zero mode is excluded"));
    }
    if !(tau.im > 0.0) {
        return Err(invalid("Im tau must be positive"));
    }
    let k = dual_wavevector(lambda, tau);
    let d_z = Complex64::i() * k.conj() / 2.0;
    let d_bar = Complex64::i() * k / 2.0;
    let d_bar_star = -d_z;
    let laplace = d_bar * d_bar_star * 2.0;
    let mu = 2.0 * PI * tau.im;
    Ok(d_z / laplace / mu)
}

/// `Σ'_λ spectral_eigenvalue(λ)^{2k}` and `(4π²)^{-2k} E_{2k}` over the same square shells.
pub fn spectral_trace(weight: u32, spec: &LatticeSpec) -> Result<(Complex64, Complex64)> {
    let e = eisenstein_lattice(weight, spec)?;
    let tau = spec.tau;
    let trace = crate::characters::eisenstein::shell_sum(tau, spec.cutoff, |l| {
        spectral_eigenvalue(l, tau).expect("nonzero lattice point").powi(weight as i32)
    });
    Ok((trace, e / (4.0 * PI * PI).powi(weight as i32)))
}

#[cfg(test)]
mod tests;
