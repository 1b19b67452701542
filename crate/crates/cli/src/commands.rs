use std::path::Path;

use cdo_core::characters::{self, fmt_rational_series, LatticeSpec, QSeries};
use cdo_core::feynman::{self, QuadConfig};
use cdo_core::parse::{parse_automorphism, parse_vector_field};
use cdo_core::scalar::fmt_rational;
use cdo_core::vertex::{Cdo, TruncationPolicy, VAState};
use cdo_core::{calibration, conformal, gelfand_fuks, gms, hc_action, FormalVectorField, Rational};
use num_complex::Complex64;
use serde_json::{json, Value};

use crate::doc::{with_input, CliError, Document};
use crate::VertexOpts;

type Out = Result<Document, CliError>;

fn vertex(opts: &VertexOpts) -> Result<Cdo, CliError> {
    Ok(Cdo::new(opts.rank, TruncationPolicy::strict(opts.max_weight, opts.c0_degree))?)
}

fn state(cdo: &Cdo, s: &str) -> Result<VAState, CliError> {
    with_input(s, cdo.state(s))
}

fn field(s: &str, n: usize, k: u32) -> Result<FormalVectorField, CliError> {
    with_input(s, parse_vector_field(s, n, k))
}

fn vertex_params(opts: &VertexOpts) -> Value {
    json!({"rank": opts.rank, "max-weight": opts.max_weight, "c0-degree": opts.c0_degree})
}

fn merge(mut base: Value, extra: Value) -> Value {
    if let (Value::Object(b), Value::Object(e)) = (&mut base, extra) {
        b.extend(e);
    }
    base
}

fn complex(z: Complex64) -> Value {
    json!({"re": z.re, "im": z.im})
}

fn r(x: &Rational) -> String {
    fmt_rational(x)
}

pub fn mode_apply(opts: &VertexOpts, a: &str, m: i64, v: &str) -> Out {
    let cdo = vertex(opts)?;
    let out = cdo.mode_apply(&state(&cdo, a)?, m, &state(&cdo, v)?)?;
    let params = merge(vertex_params(opts), json!({"state": a, "mode": m, "on": v}));
    Ok(Document::new("mode-apply", params, json!(out.to_string())))
}

pub fn borcherds(opts: &VertexOpts, a: &str, b: &str, c: &str, l: i64, m: i64) -> Out {
    let cdo = vertex(opts)?;
    let rep = cdo.borcherds_check(&state(&cdo, a)?, &state(&cdo, b)?, &state(&cdo, c)?, l, m)?;
    let params = merge(vertex_params(opts), json!({"a": a, "b": b, "c": c, "l": l, "m": m}));
    let payload = json!({"lhs": rep.lhs.to_string(), "rhs": rep.rhs.to_string()});
    let residual = rep.lhs.sub(&rep.rhs).to_string();
    Ok(Document::new("borcherds", params, payload).check("borcherds", rep.holds, json!(residual)))
}

pub fn rho_w(opts: &VertexOpts, x: &str, v: &str, k: u32) -> Out {
    let cdo = vertex(opts)?;
    let out = hc_action::rho_w(&cdo, &field(x, opts.rank, k)?, &state(&cdo, v)?)?;
    let params = merge(vertex_params(opts), json!({"x": x, "on": v, "jet-order": k}));
    Ok(Document::new("rho-w", params, json!(out.to_string())))
}

/// Monomial basis of all weight spaces up to `max_weight` with c_0-degree at most `c0_degree`.
fn basis(rank: usize, max_weight: u32, c0_degree: u32) -> Result<Vec<VAState>, CliError> {
    let b = Cdo::new(rank, TruncationPolicy::strict(max_weight, c0_degree))?;
    let one = Rational::from_integer(1.into());
    Ok((0..=max_weight)
        .flat_map(|w| b.weight_space_basis(w))
        .map(|m| VAState::monomial(rank, m, one.clone()))
        .collect())
}

pub fn msv_check(rank: usize, x: &str, y: &str, max_weight: u32, c0_degree: u32, k: u32) -> Out {
    let (fx, fy) = (field(x, rank, k)?, field(y, rank, k)?);
    let cdo = Cdo::new(rank, TruncationPolicy::strict(max_weight + 4, c0_degree + 2 * k))?;
    let states = basis(rank, max_weight, c0_degree)?;
    let mut failures = 0usize;
    let mut first = Value::Null;
    for v in &states {
        let defect = hc_action::msv_defect(&cdo, &fx, &fy, v)?;
        let predicted = hc_action::msv_prediction(&cdo, &fx, &fy, v)?;
        if defect != predicted {
            if failures == 0 {
                first = json!({"state": v.to_string(), "residual": defect.sub(&predicted).to_string()});
            }
            failures += 1;
        }
    }
    let params = json!({"rank": rank, "x": x, "y": y, "max-weight": max_weight, "c0-degree": c0_degree, "jet-order": k});
    let payload = json!({
        "cocycle": gelfand_fuks::ch2_gf(&fx, &fy)?.to_string(),
        "sign": r(&calibration::msv_sign()),
        "states": states.len(),
    });
    let residual = json!({"failures": failures, "first": first});
    Ok(Document::new("msv-check", params, payload).check("msv", failures == 0, residual))
}

pub fn ch2(rank: usize, x: &str, y: &str, k: u32) -> Out {
    let w = gelfand_fuks::ch2_gf(&field(x, rank, k)?, &field(y, rank, k)?)?;
    let params = json!({"rank": rank, "x": x, "y": y, "jet-order": k});
    Ok(Document::new("ch2", params, json!(w.to_string())))
}

pub fn c1(rank: usize, x: &str, k: u32) -> Out {
    let fx = field(x, rank, k)?;
    let cdo = Cdo::new(rank, TruncationPolicy::strict(4, k + 2))?;
    let rep = conformal::c1_defect(&cdo, &fx)?;
    let params = json!({"rank": rank, "x": x, "jet-order": k});
    let payload = json!({"c1": rep.c1.to_string(), "anomaly": rep.alpha.to_string(), "sign": r(&rep.sign)});
    let diff = rep.alpha.try_sub(&rep.c1.scale(&rep.sign))?.to_string();
    Ok(Document::new("c1", params, payload)
        .check("anomaly-equals-c1", rep.holds, json!(diff))
        .check("kills-tc0", rep.kills_tc0, Value::Null))
}

pub fn atiyah(rank: usize, x: &str, k: u32) -> Out {
    let m = gelfand_fuks::atiyah_rep(&field(x, rank, k)?);
    let rows: Vec<Vec<String>> =
        (0..m.size()).map(|i| (0..m.size()).map(|j| m.get(i, j).to_string()).collect()).collect();
    let params = json!({"rank": rank, "x": x, "jet-order": k});
    Ok(Document::new("atiyah", params, json!(rows)))
}

pub fn pw_check(f1: &str, f2: &str, k: u32) -> Out {
    let g1 = with_input(f1, parse_automorphism(f1, k))?;
    let g2 = with_input(f2, parse_automorphism(f2, k))?;
    let rep = gms::pw_check(&g1, &g2)?;
    let params = json!({"f1": f1, "f2": f2, "jet-order": k});
    let payload = json!({
        "alpha2": gms::alpha2(&g1, &g2)?.to_string(),
        "lhs": rep.lhs.to_string(),
        "rhs": rep.rhs.to_string(),
    });
    Ok(Document::new("pw-check", params, payload).check("polyakov-wiegmann", rep.holds, json!(rep.residual.to_string())))
}

pub fn gms_d1(rank: usize, x: &str, y: &str, k: u32) -> Out {
    let rep = gms::d1_compare(&field(x, rank, k)?, &field(y, rank, k)?)?;
    let params = json!({"rank": rank, "x": x, "y": y, "jet-order": k});
    let payload = json!({
        "lie-value": rep.lie_value.to_string(),
        "ch2": rep.ch2_value.to_string(),
        "constant": r(&rep.constant),
    });
    let residual = rep.lie_value.try_sub(&rep.ch2_value.scale(&rep.constant))?.to_string();
    Ok(Document::new("gms-d1", params, payload).check("d1-equals-constant-ch2", rep.holds, json!(residual)))
}

pub fn conformal_check(rank: usize, max_weight: u32, c0_degree: u32) -> Out {
    let cdo = Cdo::new(rank, TruncationPolicy::strict(max_weight + 2, c0_degree))?;
    let states = basis(rank, max_weight, c0_degree)?;
    let rep = conformal::conformal_axiom_check(&cdo, &states)?;
    let bad = |v: &[bool]| v.iter().filter(|&&b| !b).count();
    let params = json!({"rank": rank, "max-weight": max_weight, "c0-degree": c0_degree});
    let payload = json!({
        "virasoro": conformal::virasoro_vector(rank).to_string(),
        "central-charge": 2 * rank,
        "states": states.len(),
    });
    Ok(Document::new("conformal-check", params, payload)
        .check("L0-is-translation", bad(&rep.translation) == 0, json!({"failures": bad(&rep.translation)}))
        .check("L1-is-grading", bad(&rep.grading) == 0, json!({"failures": bad(&rep.grading)}))
        .check("L3L-is-n-vacuum", rep.central_charge, Value::Null)
        .check("L2L-vanishes", rep.quasi_primary, Value::Null))
}

fn table(s: &QSeries) -> Value {
    Value::Array(
        s.entries()
            .into_iter()
            .map(|(q, roots, c)| json!({"q": q, "roots": roots, "coeff": r(&c)}))
            .collect(),
    )
}

fn char_params(rank: usize, d: u32, q: u32) -> Value {
    json!({"rank": rank, "chern-degree": d, "q-order": q})
}

pub fn char_identity(rank: usize, d: u32, q: u32) -> Out {
    let res = characters::char_identity_check(rank, d, q);
    Ok(Document::new("char-identity", char_params(rank, d, q), json!({"residual": table(&res)}))
        .check("character-identity", res.is_zero(), json!(res.entries().len())))
}

pub fn witten_log(rank: usize, d: u32, q: u32) -> Out {
    let l = characters::log_witten(rank, d, q);
    let payload = json!({"series": l.to_string(), "terms": table(&l)});
    Ok(Document::new("witten-log", char_params(rank, d, q), payload))
}

pub fn witten_exp_check(rank: usize, d: u32, q: u32) -> Out {
    let rep = characters::witten_exp_check(rank, d, q)?;
    let payload = json!({
        "literal-residual": table(&rep.literal),
        "literal-residual-vanishes": rep.literal.is_zero(),
    });
    Ok(Document::new("witten-exp-check", char_params(rank, d, q), payload)
        .check("exp-log-equals-wit-mod-ch2", rep.holds_mod_ch2(), json!(rep.mod_ch2.entries().len()))
        .check("exp-log-with-k1-equals-wit", rep.with_k1.is_zero(), json!(rep.with_k1.entries().len())))
}

fn parse_tau(s: &str) -> Result<Complex64, CliError> {
    let bad = || CliError::Usage(format!("--tau expects `re,im`, got `{s}`"));
    let (a, b) = s.split_once(',').ok_or_else(bad)?;
    let a: f64 = a.trim().parse().map_err(|_| bad())?;
    let b: f64 = b.trim().parse().map_err(|_| bad())?;
    Ok(Complex64::new(a, b))
}

pub fn eisenstein(weight: u32, tau: &str, cutoff: u32, q: u32, tol: f64) -> Out {
    let t = parse_tau(tau)?;
    let spec = LatticeSpec::new(t, cutoff)?;
    let series = characters::eisenstein_q(weight, q)?;
    let plain = characters::eisenstein_lattice(weight, &spec)?;
    let extrapolated = characters::eisenstein_lattice_extrapolated(weight, &spec)?;
    let from_q = characters::eisenstein_from_q(weight, t, 24)?;
    let err = (extrapolated - from_q).norm();
    let params = json!({"weight": weight, "tau": tau, "cutoff": cutoff, "q-order": q, "tolerance": tol});
    let payload = json!({
        "normalized-q-series": fmt_rational_series(&series.at_zero_roots()),
        "lattice": complex(plain),
        "lattice-extrapolated": complex(extrapolated),
        "q-expansion": complex(from_q),
    });
    Ok(Document::new("eisenstein", params, payload).check(
        "lattice-matches-q-expansion",
        err <= tol * from_q.norm().max(1.0),
        json!(err),
    ))
}

pub fn wheel2(schedule: &str, grid: usize, profiles: &Path, tol: f64) -> Out {
    let eps: Vec<f64> = schedule
        .split(',')
        .map(|s| s.trim().parse::<f64>())
        .collect::<Result<_, _>>()
        .map_err(|_| CliError::Usage(format!("--eps-schedule expects comma-separated numbers, got `{schedule}`")))?;
    let text = std::fs::read_to_string(profiles)
        .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", profiles.display())))?;
    let (f, g) = feynman::parse_profiles(&text)?;
    let cfg = QuadConfig::new(grid, grid, 32, 48, eps)?;
    let rep = feynman::wheel2_check(&f, &g, &cfg)?;
    let weights: Vec<Value> = rep.eps.iter().zip(&rep.weights).map(|(e, w)| json!({"eps": e, "weight": complex(*w)})).collect();
    let params = json!({"eps-schedule": schedule, "grid": grid, "profiles": profiles.display().to_string(), "tolerance": tol});
    let payload = json!({
        "weights": weights,
        "extrapolated": complex(rep.extrapolated),
        "rhs": complex(rep.rhs),
        "relative-error": rep.relative_error,
    });
    Ok(Document::new("feynman wheel2", params, payload)
        .check("extrapolation-matches-rhs", rep.relative_error <= tol, json!(rep.relative_error))
        .check("monotone-approach", rep.monotone, Value::Null))
}

pub fn t_limits(eps: f64) -> Out {
    let (a, b) = feynman::t_integral_limits(eps)?;
    let (qa, qb) = feynman::t_integral_quadrature(eps, 200)?;
    let err = (a - qa).abs().max((b - qb).abs());
    let payload = json!({"first": a, "second": b, "quadrature-first": qa, "quadrature-second": qb});
    Ok(Document::new("feynman t-limits", json!({"eps": eps}), payload).check(
        "closed-form-matches-quadrature",
        err <= 1e-12,
        json!(err),
    ))
}
