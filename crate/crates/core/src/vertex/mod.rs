//! The βγ system `CDO_n`: translation, generator modes and the recursive n-th products.

mod state;

use std::collections::HashMap;
use std::sync::{Arc, Mutex};

use num_bigint::BigInt;
use num_traits::{One, Zero};

pub use state::{Kind, ModeSymbol, Monomial, VAState};
pub(crate) use state::{add_into, add_scaled, Terms};

use crate::error::{shape, Error, Result};
use crate::jet::MultiIndex;
use crate::scalar::{binomial, rat, Rational};

/// Bounds on conformal weight and `c_0`-degree, and what to do when a result exceeds them.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct TruncationPolicy {
    pub n_max: u32,
    pub k: u32,
    /// Error on overflow when set, otherwise silently drop the offending monomials.
    pub strict: bool,
}

impl TruncationPolicy {
    pub fn strict(n_max: u32, k: u32) -> Self {
        Self { n_max, k, strict: true }
    }

    pub fn dropping(n_max: u32, k: u32) -> Self {
        Self { n_max, k, strict: false }
    }
}

/// Result of evaluating both sides of the Borcherds identity.
#[derive(Clone, Debug)]
pub struct BorcherdsReport {
    pub holds: bool,
    pub lhs: VAState,
    pub rhs: VAState,
}

type CacheKey = (Monomial, i64, Monomial);

/// The vertex algebra `CDO_n` under a truncation policy. Mode products on monomials
/// are memoized behind a mutex, so a context can be shared across threads.
pub struct Cdo {
    rank: usize,
    policy: TruncationPolicy,
    cache: Mutex<HashMap<CacheKey, Arc<Terms>>>,
}

impl Clone for Cdo {
    fn clone(&self) -> Self {
        Self { rank: self.rank, policy: self.policy, cache: Mutex::new(HashMap::new()) }
    }
}

impl std::fmt::Debug for Cdo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Cdo").field("rank", &self.rank).field("policy", &self.policy).finish()
    }
}

fn sign(k: u32) -> i64 {
    if k % 2 == 0 {
        1
    } else {
        -1
    }
}

/// A generator mode `(b^j_{-1})_{(i)}` or `(c^j_0)_{(i)}` on a monomial.
fn generator_on(kind: Kind, j: usize, i: i64, v: &Monomial) -> Option<(Rational, Monomial)> {
    match kind {
        Kind::B if i < 0 => Some((Rational::one(), v.times(ModeSymbol::b(j, i), 1))),
        Kind::B => v.without_one(&ModeSymbol::c(j, -i)).map(|(p, rest)| (rat(p as i64), rest)),
        Kind::C if i <= -1 => Some((Rational::one(), v.times(ModeSymbol::c(j, i + 1), 1))),
        Kind::C => v.without_one(&ModeSymbol::b(j, -i - 1)).map(|(p, rest)| (rat(-(p as i64)), rest)),
    }
}

/// `s_{(i)} v` for a single symbol `s = T^k g / k!`: `(-1)^k C(i,k) g_{(i-k)}`.
fn symbol_on(s: &ModeSymbol, i: i64, v: &Monomial) -> Option<(Rational, Monomial)> {
    let k = s.derivative_order();
    let c = binomial(i, k) * BigInt::from(sign(k));
    if c.is_zero() {
        return None;
    }
    let (x, m) = generator_on(s.kind, s.j, i - k as i64, v)?;
    Some((x * Rational::from_integer(c), m))
}

fn translate_terms(v: &Terms) -> Terms {
    let mut out = Terms::new();
    for (mono, c) in v {
        for &(s, p) in mono.factors() {
            let (factor, next) = match s.kind {
                Kind::B => (-s.m, ModeSymbol::b(s.j, s.m - 1)),
                Kind::C => (-(s.m - 1), ModeSymbol::c(s.j, s.m - 1)),
            };
            let (_, rest) = mono.without_one(&s).expect("present");
            add_into(&mut out, rest.times(next, 1), c * rat(factor * p as i64));
        }
    }
    out
}

impl Cdo {
    pub fn new(rank: usize, policy: TruncationPolicy) -> Result<Self> {
        if rank == 0 {
            return Err(Error::InvalidArgument("rank must be at least 1".into()));
        }
        Ok(Self { rank, policy, cache: Mutex::new(HashMap::new()) })
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn policy(&self) -> TruncationPolicy {
        self.policy
    }

    pub fn with_policy(&self, policy: TruncationPolicy) -> Self {
        Self { rank: self.rank, policy, cache: Mutex::new(HashMap::new()) }
    }

    pub fn clear_cache(&self) {
        self.cache.lock().expect("cache lock").clear();
    }

    pub fn vacuum(&self) -> VAState {
        VAState::vacuum(self.rank)
    }

    /// Parses a state in the shared grammar, applying the policy.
    pub fn state(&self, input: &str) -> Result<VAState> {
        let v = VAState::parse(input, self.rank)?;
        self.enforce(v.raw_terms().clone())
    }

    fn check(&self, v: &VAState) -> Result<()> {
        if v.rank() != self.rank {
            return Err(shape(format!("state of rank {} in CDO_{}", v.rank(), self.rank)));
        }
        Ok(())
    }

    /// Applies the truncation policy to a raw result.
    pub(crate) fn enforce(&self, terms: Terms) -> Result<VAState> {
        let p = self.policy;
        let mut kept = Terms::new();
        for (m, c) in terms {
            if m.weight() > p.n_max || m.c0_degree() > p.k {
                if p.strict {
                    return Err(Error::Overflow(format!(
                        "monomial {m} has weight {} and c0-degree {} (bounds {} and {})",
                        m.weight(),
                        m.c0_degree(),
                        p.n_max,
                        p.k
                    )));
                }
                continue;
            }
            kept.insert(m, c);
        }
        Ok(VAState::from_terms(self.rank, kept))
    }

    pub fn translate(&self, v: &VAState) -> Result<VAState> {
        self.check(v)?;
        self.enforce(translate_terms(v.raw_terms()))
    }

    /// `(b^j_{-1})_{(i)} v` or `(c^j_0)_{(i)} v` with `j` 0-based.
    pub fn generator_mode(&self, kind: Kind, j: usize, i: i64, v: &VAState) -> Result<VAState> {
        self.check(v)?;
        if j >= self.rank {
            return Err(Error::IndexOutOfRange { index: j + 1, rank: self.rank });
        }
        let mut out = Terms::new();
        for (m, c) in v.terms() {
            if let Some((x, mm)) = generator_on(kind, j, i, m) {
                add_into(&mut out, mm, x * c);
            }
        }
        self.enforce(out)
    }

    /// `a_{(m)} v`.
    pub fn mode_apply(&self, a: &VAState, m: i64, v: &VAState) -> Result<VAState> {
        self.check(a)?;
        self.check(v)?;
        self.enforce(self.apply_raw(a.raw_terms(), m, v.raw_terms()))
    }

    pub(crate) fn apply_raw(&self, a: &Terms, m: i64, v: &Terms) -> Terms {
        let mut out = Terms::new();
        for (am, ac) in a {
            for (vm, vc) in v {
                let r = self.mono_mode(am, m, vm);
                add_scaled(&mut out, &r, &(ac * vc));
            }
        }
        out
    }

    fn mono_mode(&self, a: &Monomial, m: i64, v: &Monomial) -> Arc<Terms> {
        if a.is_vacuum() {
            let mut t = Terms::new();
            if m == -1 {
                t.insert(v.clone(), Rational::one());
            }
            return Arc::new(t);
        }
        if m + 1 > (a.weight() + v.weight()) as i64 {
            return Arc::new(Terms::new());
        }
        let key = (a.clone(), m, v.clone());
        if let Some(hit) = self.cache.lock().expect("cache lock").get(&key) {
            return hit.clone();
        }
        let (s, r) = a.split_leading().expect("non-vacuum");
        let mut out = Terms::new();
        if r.is_vacuum() {
            if let Some((x, mm)) = symbol_on(&s, m, v) {
                add_into(&mut out, mm, x);
            }
        } else {
            // a_{(m)} = sum_i S_{(-1-i)} R_{(m+i)} + R_{(m-1-i)} S_{(i)}
            let top = (r.weight() + v.weight()) as i64 - m - 1;
            for i in 0..=top.max(-1) {
                let inner = self.mono_mode(&r, m + i, v);
                for (w, c) in inner.iter() {
                    if let Some((x, mm)) = symbol_on(&s, -1 - i, w) {
                        add_into(&mut out, mm, x * c);
                    }
                }
            }
            let top = (s.weight() + v.weight()) as i64 - 1;
            for i in 0..=top.max(-1) {
                if let Some((x, w)) = symbol_on(&s, i, v) {
                    let outer = self.mono_mode(&r, m - 1 - i, &w);
                    add_scaled(&mut out, &outer, &x);
                }
            }
        }
        let out = Arc::new(out);
        self.cache.lock().expect("cache lock").insert(key, out.clone());
        out
    }

    /// Evaluates `(a_{(l)} b)_{(m)} c` against
    /// `sum_j (-1)^j C(l,j) [a_{(l-j)} b_{(m+j)} c - (-1)^l b_{(l+m-j)} a_{(j)} c]`.
    pub fn borcherds_check(&self, a: &VAState, b: &VAState, c: &VAState, l: i64, m: i64) -> Result<BorcherdsReport> {
        for v in [a, b, c] {
            self.check(v)?;
        }
        let (wa, wb, wc) = (a.max_weight(), b.max_weight(), c.max_weight());
        let need = (wa + wb + wc) as i64 + l.abs() + m.abs();
        if need > self.policy.n_max as i64 {
            return Err(Error::Headroom(format!(
                "weights {wa}+{wb}+{wc} with |l|+|m| = {} exceed N_max = {}",
                l.abs() + m.abs(),
                self.policy.n_max
            )));
        }
        let (a, b, c) = (a.raw_terms(), b.raw_terms(), c.raw_terms());
        let lhs = self.apply_raw(&self.apply_raw(a, l, b), m, c);
        // Terms vanish once b_{(m+j)} c and a_{(j)} c both vanish.
        let jmax = ((wb + wc) as i64 - m).max((wa + wc) as i64).max(0);
        let jmax = if l >= 0 { jmax.min(l) } else { jmax };
        let mut rhs = Terms::new();
        let sl = Rational::from_integer(BigInt::from(if l.rem_euclid(2) == 0 { 1 } else { -1 }));
        for j in 0..=jmax {
            let coeff = Rational::from_integer(binomial(l, j as u32) * BigInt::from(sign(j as u32)));
            if coeff.is_zero() {
                continue;
            }
            let t1 = self.apply_raw(a, l - j, &self.apply_raw(b, m + j, c));
            let t2 = self.apply_raw(b, l + m - j, &self.apply_raw(a, j, c));
            add_scaled(&mut rhs, &t1, &coeff);
            add_scaled(&mut rhs, &t2, &-(coeff * &sl));
        }
        let lhs = self.enforce(lhs)?;
        let rhs = self.enforce(rhs)?;
        Ok(BorcherdsReport { holds: lhs == rhs, lhs, rhs })
    }

    /// All monomials of weight `weight` with `c_0`-degree at most the policy's `k`.
    pub fn weight_space_basis(&self, weight: u32) -> Vec<Monomial> {
        let mut symbols = Vec::new();
        for w in 1..=weight as i64 {
            for j in 0..self.rank {
                symbols.push(ModeSymbol::b(j, -w));
                symbols.push(ModeSymbol::c(j, -w));
            }
        }
        let mut positive = Vec::new();
        fn rec(symbols: &[ModeSymbol], start: usize, left: u32, cur: Monomial, out: &mut Vec<Monomial>) {
            if left == 0 {
                out.push(cur);
                return;
            }
            for (idx, s) in symbols.iter().enumerate().skip(start) {
                if s.weight() <= left {
                    rec(symbols, idx, left - s.weight(), cur.times(*s, 1), out);
                }
            }
        }
        rec(&symbols, 0, weight, Monomial::vacuum(), &mut positive);
        let mut out = Vec::new();
        for a in MultiIndex::all_up_to(self.rank, self.policy.k) {
            let mut c0 = Monomial::vacuum();
            for i in 0..self.rank {
                if a.get(i) > 0 {
                    c0 = c0.times(ModeSymbol::c(i, 0), a.get(i));
                }
            }
            out.extend(positive.iter().map(|p| p.product(&c0)));
        }
        out.sort();
        out
    }
}

#[cfg(test)]
mod tests;
