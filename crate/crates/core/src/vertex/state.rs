//! Mode symbols, monomials and states of the βγ system.

use std::cmp::{Ordering, Reverse};
use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::form::join_signed;
use crate::jet::JetSeries;
use crate::parse::parse_terms;
use crate::scalar::{fmt_rational, Rational};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Kind {
    B,
    C,
}

/// `b^j_m` (`m <= -1`) or `c^j_m` (`m <= 0`); `j` is 0-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct ModeSymbol {
    pub kind: Kind,
    pub j: usize,
    pub m: i64,
}

impl ModeSymbol {
    pub fn new(kind: Kind, j: usize, m: i64) -> Result<Self> {
        let ok = match kind {
            Kind::B => m <= -1,
            Kind::C => m <= 0,
        };
        if !ok {
            return Err(Error::InvalidArgument(format!("mode index {m} out of range for {kind:?}")));
        }
        Ok(Self { kind, j, m })
    }

    pub fn b(j: usize, m: i64) -> Self {
        Self::new(Kind::B, j, m).expect("b mode")
    }

    pub fn c(j: usize, m: i64) -> Self {
        Self::new(Kind::C, j, m).expect("c mode")
    }

    /// Conformal weight `-m`.
    pub fn weight(&self) -> u32 {
        (-self.m) as u32
    }

    /// Power of `T` producing this symbol from its generator (`b_{-1}` or `c_0`).
    pub fn derivative_order(&self) -> u32 {
        match self.kind {
            Kind::B => (-self.m - 1) as u32,
            Kind::C => (-self.m) as u32,
        }
    }

    fn key(&self) -> (Kind, usize, Reverse<i64>) {
        (self.kind, self.j, Reverse(self.m))
    }
}

/// Canonical order: `b` before `c`, then `j` ascending, then `m` descending.
impl Ord for ModeSymbol {
    fn cmp(&self, other: &Self) -> Ordering {
        self.key().cmp(&other.key())
    }
}

impl PartialOrd for ModeSymbol {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ModeSymbol {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = if self.kind == Kind::B { 'b' } else { 'c' };
        write!(f, "{k}[{},{}]", self.j + 1, self.m)
    }
}

/// A commutative monomial in mode symbols, sorted canonically with positive powers.
#[derive(Clone, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Monomial(Vec<(ModeSymbol, u32)>);

impl Monomial {
    pub fn vacuum() -> Self {
        Self(Vec::new())
    }

    pub fn from_symbols(symbols: impl IntoIterator<Item = ModeSymbol>) -> Self {
        let mut out = Self::vacuum();
        for s in symbols {
            out = out.times(s, 1);
        }
        out
    }

    pub fn factors(&self) -> &[(ModeSymbol, u32)] {
        &self.0
    }

    pub fn is_vacuum(&self) -> bool {
        self.0.is_empty()
    }

    pub fn weight(&self) -> u32 {
        self.0.iter().map(|(s, p)| s.weight() * p).sum()
    }

    pub fn c0_degree(&self) -> u32 {
        self.0.iter().filter(|(s, _)| s.kind == Kind::C && s.m == 0).map(|(_, p)| p).sum()
    }

    pub fn b_count(&self) -> u32 {
        self.0.iter().filter(|(s, _)| s.kind == Kind::B).map(|(_, p)| p).sum()
    }

    pub fn power(&self, s: &ModeSymbol) -> u32 {
        self.0.binary_search_by(|(x, _)| x.cmp(s)).map(|i| self.0[i].1).unwrap_or(0)
    }

    pub fn times(&self, s: ModeSymbol, p: u32) -> Self {
        let mut v = self.0.clone();
        match v.binary_search_by(|(x, _)| x.cmp(&s)) {
            Ok(i) => v[i].1 += p,
            Err(i) => v.insert(i, (s, p)),
        }
        Self(v)
    }

    pub fn product(&self, other: &Self) -> Self {
        other.0.iter().fold(self.clone(), |acc, (s, p)| acc.times(*s, *p))
    }

    /// Removes one factor of `s`, returning its former power.
    pub fn without_one(&self, s: &ModeSymbol) -> Option<(u32, Self)> {
        let i = self.0.binary_search_by(|(x, _)| x.cmp(s)).ok()?;
        let mut v = self.0.clone();
        let p = v[i].1;
        if p == 1 {
            v.remove(i);
        } else {
            v[i].1 -= 1;
        }
        Some((p, Self(v)))
    }

    /// Leading symbol and the remaining monomial.
    pub fn split_leading(&self) -> Option<(ModeSymbol, Self)> {
        let s = self.0.first()?.0;
        let (_, rest) = self.without_one(&s)?;
        Some((s, rest))
    }

    pub fn symbols(&self) -> impl Iterator<Item = ModeSymbol> + '_ {
        self.0.iter().flat_map(|(s, p)| std::iter::repeat(*s).take(*p as usize))
    }
}

impl fmt::Display for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return f.write_str("vac");
        }
        let parts: Vec<String> = self
            .0
            .iter()
            .map(|(s, p)| if *p == 1 { s.to_string() } else { format!("{s}^{p}") })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

pub(crate) type Terms = BTreeMap<Monomial, Rational>;

pub(crate) fn add_into(acc: &mut Terms, m: Monomial, c: Rational) {
    if c.is_zero() {
        return;
    }
    match acc.entry(m) {
        std::collections::btree_map::Entry::Occupied(mut e) => {
            *e.get_mut() += c;
            if e.get().is_zero() {
                e.remove();
            }
        }
        std::collections::btree_map::Entry::Vacant(e) => {
            e.insert(c);
        }
    }
}

pub(crate) fn add_scaled(acc: &mut Terms, other: &Terms, c: &Rational) {
    if c.is_zero() {
        return;
    }
    for (m, x) in other {
        add_into(acc, m.clone(), x * c);
    }
}

/// A finite linear combination of monomials in `CDO_n`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct VAState {
    rank: usize,
    terms: Terms,
}

impl VAState {
    pub fn zero(rank: usize) -> Self {
        Self { rank, terms: Terms::new() }
    }

    pub fn vacuum(rank: usize) -> Self {
        Self::monomial(rank, Monomial::vacuum(), Rational::one())
    }

    pub fn monomial(rank: usize, m: Monomial, c: Rational) -> Self {
        let mut terms = Terms::new();
        add_into(&mut terms, m, c);
        Self { rank, terms }
    }

    pub fn symbol(rank: usize, s: ModeSymbol) -> Self {
        Self::monomial(rank, Monomial::from_symbols([s]), Rational::one())
    }

    pub(crate) fn from_terms(rank: usize, terms: Terms) -> Self {
        Self { rank, terms }
    }

    /// `f(c_0)`: substitutes `c^i_0` for `t_i`.
    pub fn from_c0_polynomial(f: &JetSeries) -> Self {
        let n = f.rank();
        let mut terms = Terms::new();
        for (a, x) in f.terms() {
            let mut m = Monomial::vacuum();
            for i in 0..n {
                if a.get(i) > 0 {
                    m = m.times(ModeSymbol::c(i, 0), a.get(i));
                }
            }
            add_into(&mut terms, m, x.clone());
        }
        Self { rank: n, terms }
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn terms(&self) -> impl Iterator<Item = (&Monomial, &Rational)> {
        self.terms.iter()
    }

    pub(crate) fn raw_terms(&self) -> &Terms {
        &self.terms
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, m: &Monomial) -> Rational {
        self.terms.get(m).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        add_scaled(&mut terms, &other.terms, &Rational::one());
        Self { rank: self.rank, terms }
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut terms = self.terms.clone();
        add_scaled(&mut terms, &other.terms, &-Rational::one());
        Self { rank: self.rank, terms }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        let mut terms = Terms::new();
        add_scaled(&mut terms, &self.terms, c);
        Self { rank: self.rank, terms }
    }

    /// Commutative product of creation monomials (the Fock-space polynomial product).
    pub fn product(&self, other: &Self) -> Self {
        let mut terms = Terms::new();
        for (a, x) in &self.terms {
            for (b, y) in &other.terms {
                add_into(&mut terms, a.product(b), x * y);
            }
        }
        Self { rank: self.rank, terms }
    }

    /// Homogeneous components by conformal weight.
    pub fn weight_of(&self) -> BTreeMap<u32, VAState> {
        let mut out: BTreeMap<u32, VAState> = BTreeMap::new();
        for (m, c) in &self.terms {
            let entry = out.entry(m.weight()).or_insert_with(|| VAState::zero(self.rank));
            add_into(&mut entry.terms, m.clone(), c.clone());
        }
        out
    }

    /// The weight if the state is homogeneous and nonzero.
    pub fn homogeneous_weight(&self) -> Option<u32> {
        let w = self.weight_of();
        if w.len() == 1 {
            w.keys().next().copied()
        } else {
            None
        }
    }

    pub fn max_weight(&self) -> u32 {
        self.terms.keys().map(Monomial::weight).max().unwrap_or(0)
    }

    pub fn max_c0_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::c0_degree).max().unwrap_or(0)
    }

    /// Number of b-symbols, maximised over monomials.
    pub fn filtration_degree(&self) -> u32 {
        self.terms.keys().map(Monomial::b_count).max().unwrap_or(0)
    }

    pub fn parse(input: &str, rank: usize) -> Result<Self> {
        let mut terms = Terms::new();
        for t in parse_terms(input)? {
            if let Some(&(_, _, pos)) = t.vars.first() {
                return Err(Error::Parse { pos, msg: "use c[j,0] instead of t-variables in a state".into() });
            }
            if let Some(&(_, pos)) = t.dirs.first().or(t.dts.first()) {
                return Err(Error::Parse { pos, msg: "unexpected geometric symbol in a state".into() });
            }
            let mut m = Monomial::vacuum();
            for &(is_b, j, mode, p, pos) in &t.modes {
                if j == 0 || j > rank {
                    return Err(Error::Parse { pos, msg: format!("target index {j} out of range 1..={rank}") });
                }
                let kind = if is_b { Kind::B } else { Kind::C };
                let s = ModeSymbol::new(kind, j - 1, mode).map_err(|e| Error::Parse { pos, msg: e.to_string() })?;
                m = m.times(s, p);
            }
            if m.factors().iter().any(|(_, p)| *p == 0) {
                m = Monomial(m.0.into_iter().filter(|(_, p)| *p > 0).collect());
            }
            add_into(&mut terms, m, t.coeff);
        }
        Ok(Self { rank, terms })
    }

    /// Renders in the shared state grammar, e.g. `2*b[1,-1]*c[1,0] - vac`.
    pub fn to_expr_string(&self) -> String {
        let pieces = self
            .terms
            .iter()
            .map(|(m, c)| {
                let neg = c.is_negative();
                let abs = c.abs();
                let body = match (abs.is_one(), m.is_vacuum()) {
                    (true, _) => m.to_string(),
                    (false, true) => fmt_rational(&abs),
                    (false, false) => format!("{}*{}", fmt_rational(&abs), m),
                };
                (neg, body)
            })
            .collect();
        join_signed(pieces)
    }
}

impl fmt::Display for VAState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_expr_string())
    }
}

impl fmt::Debug for VAState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "VAState(n={}, {})", self.rank, self.to_expr_string())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scalar::rat;

    #[test]
    fn canonical_order_and_display() {
        let v = VAState::parse("c[1,0]^2*b[1,-1] - 2*b[2,-2]*c[1,-1] + 3", 2).unwrap();
        assert_eq!(v.to_string(), "3 + b[1,-1]*c[1,0]^2 - 2*b[2,-2]*c[1,-1]");
        assert_eq!(VAState::parse(&v.to_string(), 2).unwrap(), v);
        assert_eq!(VAState::parse("vac", 1).unwrap(), VAState::vacuum(1));
        assert!(ModeSymbol::c(0, 0) > ModeSymbol::b(3, -5));
        assert!(ModeSymbol::b(0, -1) < ModeSymbol::b(0, -2));
    }

    #[test]
    fn weights_and_filtration() {
        let s = |t: &str| VAState::parse(t, 1).unwrap();
        assert_eq!(s("c[1,0]").homogeneous_weight(), Some(0));
        assert_eq!(s("b[1,-1]").homogeneous_weight(), Some(1));
        assert_eq!(s("b[1,-2]*c[1,-1]").homogeneous_weight(), Some(3));
        assert_eq!(s("c[1,0]^3").filtration_degree(), 0);
        assert_eq!(s("b[1,-1]*b[1,-2]*c[1,0]").filtration_degree(), 2);
        assert_eq!(s("vac").filtration_degree(), 0);
        assert_eq!(s("b[1,-1] + c[1,0]").weight_of().len(), 2);
    }

    #[test]
    fn rejects_bad_modes() {
        assert!(matches!(VAState::parse("b[1,0]", 1), Err(Error::Parse { pos: 0, .. })));
        assert!(matches!(VAState::parse("c[1,1]", 1), Err(Error::Parse { .. })));
        assert!(matches!(VAState::parse("vac + c[3,0]", 2), Err(Error::Parse { pos: 6, .. })));
        assert!(VAState::parse("t1", 1).is_err());
    }

    #[test]
    fn c0_polynomials() {
        let f = &JetSeries::var(2, 3, 0) * &JetSeries::var(2, 3, 1);
        let v = VAState::from_c0_polynomial(&f.scale(&rat(2)));
        assert_eq!(v.to_string(), "2*c[1,0]*c[2,0]");
    }
}
