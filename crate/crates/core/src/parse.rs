//! The shared textual grammar.
//!
//! ```text
//! sum     := ['-'] term (('+' | '-') term)*
//! term    := factor (['*'] factor)*
//! factor  := rational | 't'i ['^' k] | 'd'i | 'dt'i ('^' 'dt'j)*
//!          | 'b[' j ',' m ']' ['^' k] | 'c[' j ',' m ']' ['^' k] | 'vac'
//! ```
//!
//! Examples: `2/3*t1^2*t2 d1 + t2 d2`, `-dt1^dt2`, `c[1,0]*b[1,-1]`,
//! automorphisms `(t1+t2^2, t2)`.

use num_traits::{One, Zero};

use crate::automorphism::JetAutomorphism;
use crate::error::{Error, Result};
use crate::form::FormalForm;
use crate::jet::{JetSeries, MultiIndex};
use crate::scalar::{parse_rational, Rational};
use crate::vector_field::FormalVectorField;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(String),
    Var(usize),
    Dir(usize),
    Dt(usize),
    Mode { b: bool, j: usize, m: i64 },
    Vac,
    Plus,
    Minus,
    Star,
    Caret,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    pos: usize,
}

fn err(pos: usize, msg: impl Into<String>) -> Error {
    Error::Parse { pos, msg: msg.into() }
}

fn lex(input: &str) -> Result<Vec<Token>> {
    let bytes = input.as_bytes();
    let mut i = 0;
    let mut out = Vec::new();
    let read_uint = |i: &mut usize| -> Option<usize> {
        let start = *i;
        while *i < bytes.len() && bytes[*i].is_ascii_digit() {
            *i += 1;
        }
        if *i == start {
            None
        } else {
            input[start..*i].parse().ok()
        }
    };
    while i < bytes.len() {
        let c = bytes[i];
        let pos = i;
        match c {
            b' ' | b'\t' | b'\n' => {
                i += 1;
                continue;
            }
            b'+' => {
                out.push(Token { tok: Tok::Plus, pos });
                i += 1;
            }
            b'-' => {
                out.push(Token { tok: Tok::Minus, pos });
                i += 1;
            }
            b'*' => {
                out.push(Token { tok: Tok::Star, pos });
                i += 1;
            }
            b'^' => {
                out.push(Token { tok: Tok::Caret, pos });
                i += 1;
            }
            b'0'..=b'9' => {
                let start = i;
                while i < bytes.len() && bytes[i].is_ascii_digit() {
                    i += 1;
                }
                if i < bytes.len() && bytes[i] == b'/' {
                    i += 1;
                    let den_start = i;
                    while i < bytes.len() && bytes[i].is_ascii_digit() {
                        i += 1;
                    }
                    if i == den_start {
                        return Err(err(i, "expected denominator"));
                    }
                }
                out.push(Token { tok: Tok::Num(input[start..i].to_string()), pos });
            }
            b't' => {
                i += 1;
                let k = read_uint(&mut i).ok_or_else(|| err(i, "expected variable index after 't'"))?;
                out.push(Token { tok: Tok::Var(k), pos });
            }
            b'd' => {
                i += 1;
                if i < bytes.len() && bytes[i] == b't' {
                    i += 1;
                    let k = read_uint(&mut i).ok_or_else(|| err(i, "expected index after 'dt'"))?;
                    out.push(Token { tok: Tok::Dt(k), pos });
                } else {
                    let k = read_uint(&mut i).ok_or_else(|| err(i, "expected direction index after 'd'"))?;
                    out.push(Token { tok: Tok::Dir(k), pos });
                }
            }
            b'b' | b'c' => {
                i += 1;
                if i >= bytes.len() || bytes[i] != b'[' {
                    return Err(err(i, "expected '[' after mode kind"));
                }
                i += 1;
                let j = read_uint(&mut i).ok_or_else(|| err(i, "expected target index"))?;
                if i >= bytes.len() || bytes[i] != b',' {
                    return Err(err(i, "expected ','"));
                }
                i += 1;
                let neg = i < bytes.len() && bytes[i] == b'-';
                if neg {
                    i += 1;
                }
                let m = read_uint(&mut i).ok_or_else(|| err(i, "expected mode index"))? as i64;
                if i >= bytes.len() || bytes[i] != b']' {
                    return Err(err(i, "expected ']'"));
                }
                i += 1;
                out.push(Token { tok: Tok::Mode { b: c == b'b', j, m: if neg { -m } else { m } }, pos });
            }
            b'v' if input[i..].starts_with("vac") => {
                out.push(Token { tok: Tok::Vac, pos });
                i += 3;
            }
            _ => return Err(err(pos, format!("unexpected character '{}'", c as char))),
        }
    }
    Ok(out)
}

/// One parsed monomial term, before it is interpreted as a jet, field, form or state.
#[derive(Clone, Debug)]
pub struct RawTerm {
    pub pos: usize,
    pub coeff: Rational,
    /// `(variable index, power, position)`, 1-based indices.
    pub vars: Vec<(usize, u32, usize)>,
    pub dirs: Vec<(usize, usize)>,
    /// dt indices in written order (1-based).
    pub dts: Vec<(usize, usize)>,
    /// `(is_b, target, mode, power, position)`.
    pub modes: Vec<(bool, usize, i64, u32, usize)>,
}

fn parse_power(toks: &[Token], k: &mut usize) -> Result<u32> {
    if *k < toks.len() && toks[*k].tok == Tok::Caret {
        let pos = toks[*k].pos;
        *k += 1;
        match toks.get(*k) {
            Some(Token { tok: Tok::Num(s), pos }) => {
                *k += 1;
                s.parse::<u32>().map_err(|_| err(*pos, "exponent must be a non-negative integer"))
            }
            _ => Err(err(pos + 1, "expected integer exponent after '^'")),
        }
    } else {
        Ok(1)
    }
}

/// Parses a sum of terms; `end` marks the byte offset used for end-of-input errors.
pub fn parse_terms(input: &str) -> Result<Vec<RawTerm>> {
    let toks = lex(input)?;
    let end = input.len();
    let mut k = 0;
    let mut terms = Vec::new();
    if toks.is_empty() {
        return Err(err(0, "empty expression"));
    }
    loop {
        let mut sign = Rational::one();
        let start = toks.get(k).map(|t| t.pos).unwrap_or(end);
        match toks.get(k).map(|t| &t.tok) {
            Some(Tok::Plus) if !terms.is_empty() => k += 1,
            Some(Tok::Minus) => {
                sign = -sign;
                k += 1;
            }
            Some(_) if terms.is_empty() => {}
            Some(_) => return Err(err(start, "expected '+' or '-'")),
            None => break,
        }
        let mut term = RawTerm {
            pos: start,
            coeff: sign,
            vars: vec![],
            dirs: vec![],
            dts: vec![],
            modes: vec![],
        };
        let mut factors = 0;
        loop {
            let Some(t) = toks.get(k) else { break };
            match &t.tok {
                Tok::Plus | Tok::Minus => break,
                Tok::Star => {
                    if factors == 0 {
                        return Err(err(t.pos, "'*' needs a left factor"));
                    }
                    k += 1;
                    if !matches!(toks.get(k).map(|t| &t.tok), Some(Tok::Num(_) | Tok::Var(_) | Tok::Dir(_) | Tok::Dt(_) | Tok::Mode { .. } | Tok::Vac)) {
                        return Err(err(toks.get(k).map(|t| t.pos).unwrap_or(end), "expected factor after '*'"));
                    }
                    continue;
                }
                Tok::Caret => return Err(err(t.pos, "unexpected '^'")),
                Tok::Num(s) => {
                    let r = parse_rational(s).ok_or_else(|| err(t.pos, "invalid rational"))?;
                    term.coeff *= r;
                    k += 1;
                }
                Tok::Var(i) => {
                    let pos = t.pos;
                    let i = *i;
                    k += 1;
                    let p = parse_power(&toks, &mut k)?;
                    term.vars.push((i, p, pos));
                }
                Tok::Dir(i) => {
                    term.dirs.push((*i, t.pos));
                    k += 1;
                }
                Tok::Dt(i) => {
                    term.dts.push((*i, t.pos));
                    k += 1;
                    while k + 1 < toks.len() && toks[k].tok == Tok::Caret {
                        match toks[k + 1].tok {
                            Tok::Dt(j) => {
                                term.dts.push((j, toks[k + 1].pos));
                                k += 2;
                            }
                            _ => return Err(err(toks[k + 1].pos, "expected 'dt' after wedge '^'")),
                        }
                    }
                    if k < toks.len() && toks[k].tok == Tok::Caret {
                        return Err(err(toks[k].pos + 1, "expected 'dt' after wedge '^'"));
                    }
                }
                Tok::Mode { b, j, m } => {
                    let (b, j, m, pos) = (*b, *j, *m, t.pos);
                    k += 1;
                    let p = parse_power(&toks, &mut k)?;
                    term.modes.push((b, j, m, p, pos));
                }
                Tok::Vac => {
                    k += 1;
                }
            }
            factors += 1;
        }
        if factors == 0 {
            return Err(err(toks.get(k).map(|t| t.pos).unwrap_or(end), "expected a term"));
        }
        terms.push(term);
    }
    Ok(terms)
}

fn check_index(i: usize, n: usize, pos: usize, what: &str) -> Result<usize> {
    if i == 0 || i > n {
        return Err(err(pos, format!("{what} index {i} out of range 1..={n}")));
    }
    Ok(i - 1)
}

fn term_jet(t: &RawTerm, n: usize, order: u32) -> Result<JetSeries> {
    let mut e = vec![0u32; n];
    for &(i, p, pos) in &t.vars {
        e[check_index(i, n, pos, "variable")?] += p;
    }
    Ok(JetSeries::monomial(n, order, MultiIndex::from_exponents(e), t.coeff.clone()))
}

fn reject_modes(t: &RawTerm) -> Result<()> {
    if let Some(m) = t.modes.first() {
        return Err(err(m.4, "mode symbols are not allowed here"));
    }
    Ok(())
}

pub fn parse_jet(input: &str, n: usize, order: u32) -> Result<JetSeries> {
    let mut out = JetSeries::zero(n, order);
    for t in parse_terms(input)? {
        reject_modes(&t)?;
        if let Some(&(_, pos)) = t.dirs.first().or(t.dts.first()) {
            return Err(err(pos, "expected a function"));
        }
        out = &out + &term_jet(&t, n, order)?;
    }
    Ok(out)
}

pub fn parse_vector_field(input: &str, n: usize, order: u32) -> Result<FormalVectorField> {
    let mut out = FormalVectorField::zero(n, order);
    for t in parse_terms(input)? {
        reject_modes(&t)?;
        if let Some(&(_, pos)) = t.dts.first() {
            return Err(err(pos, "'dt' is not allowed in a vector field"));
        }
        if t.dirs.len() != 1 {
            return Err(err(t.pos, "each vector field term needs exactly one direction 'd<i>'"));
        }
        let (j, pos) = t.dirs[0];
        let j = check_index(j, n, pos, "direction")?;
        out = out.try_add(&FormalVectorField::along(term_jet(&t, n, order)?, j))?;
    }
    Ok(out)
}

pub fn parse_form(input: &str, n: usize, order: u32) -> Result<FormalForm> {
    let terms = parse_terms(input)?;
    let mut degree = None;
    let mut out: Option<FormalForm> = None;
    for t in terms {
        reject_modes(&t)?;
        if let Some(&(_, pos)) = t.dirs.first() {
            return Err(err(pos, "vector field direction is not allowed in a form"));
        }
        let is_zero_const = t.coeff.is_zero() && t.vars.is_empty() && t.dts.is_empty();
        if is_zero_const {
            continue;
        }
        let deg = t.dts.len();
        if *degree.get_or_insert(deg) != deg {
            return Err(err(t.pos, "all terms of a form must have the same degree"));
        }
        let mut idx = Vec::with_capacity(deg);
        for &(i, pos) in &t.dts {
            idx.push(check_index(i, n, pos, "dt")?);
        }
        let piece = FormalForm::from_component(term_jet(&t, n, order)?, &idx);
        out = Some(match out {
            None => piece,
            Some(acc) => acc.try_add(&piece)?,
        });
    }
    Ok(out.unwrap_or_else(|| FormalForm::zero(n, order, 0)))
}

/// Parses `(phi_1, ..., phi_n)`; the rank is the number of components.
pub fn parse_automorphism(input: &str, order: u32) -> Result<JetAutomorphism> {
    let trimmed = input.trim();
    let open = input.find('(').ok_or_else(|| err(0, "automorphism must be written as '(f1, ..., fn)'"))?;
    if !trimmed.ends_with(')') {
        return Err(err(input.len(), "expected ')'"));
    }
    let close = input.rfind(')').expect("checked");
    let body = &input[open + 1..close];
    let parts: Vec<&str> = body.split(',').collect();
    let n = parts.len();
    let mut comps = Vec::with_capacity(n);
    let mut offset = open + 1;
    for p in parts {
        let jet = parse_jet(p, n, order).map_err(|e| match e {
            Error::Parse { pos, msg } => Error::Parse { pos: pos + offset, msg },
            other => other,
        })?;
        comps.push(jet);
        offset += p.len() + 1;
    }
    JetAutomorphism::new(comps)
}

/// Renders an error with a caret under the offending byte.
pub fn render_diagnostic(input: &str, err: &Error) -> String {
    match err {
        Error::Parse { pos, msg } => {
            let caret = format!("{}^", " ".repeat((*pos).min(input.len())));
            format!("error: {msg}\n  {input}\n  {caret}")
        }
        other => format!("error: {other}"),
    }
}
