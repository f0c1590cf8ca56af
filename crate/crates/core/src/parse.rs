//! Text syntax for scalars, constant headers, groups, elements, set
//! providers, polynomials and depth-zero parameters, with formatters that
//! parse back to equal values.
//!
//! ```text
//! const sqrt2 = root(x^2 - 2, 1, 2)
//! 1/2 + 3*sqrt2
//! [1/2, sqrt2, 0]            [1/2 | +1 | 0]@S=1          [1, 1, ... ~1]
//! {(0,1): 1/2, tail (1,3) ~ 1, marker 2:cof1 = -1}
//! Q^2   Z^3   group n=2 gens=[(1, sqrt2), (0, 1) divisible]   hahn:FIN(2),OMEGA,OMEGA_OPP
//! ```

use std::collections::BTreeSet;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::complete::{Bound, CoordinateRay, CutProvider, FiniteSet, LowerCut, OppChain, PrefixChain, UpperCut};
use crate::error::{Error, Result};
use crate::ordgroup::GeneratedGroup;
use crate::scalars::{AlgebraicConstant, Constants, IntPoly, Rational, Scalar};
use crate::sme::{Block, Cut, Hull, InitialSegment, Position, SlotVector, Tail};
use crate::valuation::{Delta, LexCompositeQt, PAdicQ, Poly, RatFunc};

fn perr(msg: impl Into<String>) -> Error {
    Error::parse(msg)
}

/// Splits at top-level occurrences of `sep`, ignoring separators nested in brackets.
fn split_top(s: &str, sep: char) -> Vec<&str> {
    let mut out = Vec::new();
    let mut depth = 0i32;
    let mut start = 0;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => depth -= 1,
            c if c == sep && depth == 0 => {
                out.push(&s[start..i]);
                start = i + ch.len_utf8();
            }
            _ => {}
        }
    }
    out.push(&s[start..]);
    out
}

fn items(s: &str) -> Vec<&str> {
    if s.trim().is_empty() {
        return Vec::new();
    }
    split_top(s, ',').into_iter().map(str::trim).collect()
}

fn strip_wrapped<'a>(s: &'a str, open: char, close: char) -> Option<&'a str> {
    let s = s.trim();
    let inner = s.strip_prefix(open)?.strip_suffix(close)?;
    // the opening bracket must close at the very end
    let mut depth = 0i32;
    for (i, ch) in s.char_indices() {
        match ch {
            '(' | '[' | '{' => depth += 1,
            ')' | ']' | '}' => {
                depth -= 1;
                if depth == 0 && i + 1 < s.len() {
                    return None;
                }
            }
            _ => {}
        }
    }
    Some(inner)
}

pub fn parse_usize(s: &str) -> Result<usize> {
    s.trim().parse().map_err(|_| perr(format!("expected a nonnegative integer, got {s:?}")))
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let (n, d) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| perr(format!("bad rational {s:?}")))?;
    let d: BigInt = d.parse().map_err(|_| perr(format!("bad rational {s:?}")))?;
    if d.is_zero() {
        return Err(perr(format!("zero denominator in {s:?}")));
    }
    Ok(Rational::new(n, d))
}

fn is_label(s: &str) -> bool {
    s.chars().next().is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
        && s.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// `3/4`, `sqrt2`, `-1/2 + 3*sqrt2 - sqrt3`, `+1`.
pub fn parse_scalar(consts: &Constants, s: &str) -> Result<Scalar> {
    let src = s.trim();
    if src.is_empty() {
        return Err(perr("empty scalar"));
    }
    let mut terms: Vec<(bool, String)> = Vec::new();
    let mut cur = String::new();
    let mut neg = false;
    for ch in src.chars() {
        if (ch == '+' || ch == '-') && !cur.trim().is_empty() {
            terms.push((neg, std::mem::take(&mut cur)));
            neg = ch == '-';
        } else if ch == '+' || ch == '-' {
            if ch == '-' {
                neg = !neg;
            }
        } else {
            cur.push(ch);
        }
    }
    if cur.trim().is_empty() {
        return Err(perr(format!("dangling sign in scalar {src:?}")));
    }
    terms.push((neg, cur));
    let mut total = Scalar::zero();
    for (neg, t) in terms {
        let t = t.trim();
        let term = match t.split_once('*') {
            Some((c, label)) => {
                let label = label.trim();
                if !is_label(label) {
                    return Err(perr(format!("bad constant name {label:?} in {src:?}")));
                }
                consts.scalar(label)?.scale(&parse_rational(c)?)
            }
            None if is_label(t) => consts.scalar(t)?,
            None => Scalar::from_rational(parse_rational(t)?),
        };
        total = if neg { &total - &term } else { &total + &term };
    }
    Ok(total)
}

pub fn format_scalar(s: &Scalar) -> String {
    s.to_string()
}

/// Marker values are printed with an explicit sign.
fn format_signed(s: &Scalar) -> String {
    let t = s.to_string();
    if s.signum().ok() == Some(std::cmp::Ordering::Greater) {
        format!("+{t}")
    } else {
        t
    }
}

// ---------------------------------------------------------------------------
// polynomial expressions in x over Q(t)

struct Expr<'a> {
    s: &'a [u8],
    i: usize,
    allow_t: bool,
}

type QtPoly = Poly<RatFunc>;

impl Expr<'_> {
    fn ws(&mut self) {
        while self.i < self.s.len() && self.s[self.i].is_ascii_whitespace() {
            self.i += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.ws();
        self.s.get(self.i).copied()
    }

    fn err(&self, what: &str) -> Error {
        perr(format!("{what} at offset {} in {:?}", self.i, String::from_utf8_lossy(self.s)))
    }

    fn expr(&mut self) -> Result<QtPoly> {
        let mut acc = match self.peek() {
            Some(b'-') => {
                self.i += 1;
                -&self.term()?
            }
            Some(b'+') => {
                self.i += 1;
                self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.i += 1;
                    acc = &acc + &self.term()?;
                }
                Some(b'-') => {
                    self.i += 1;
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<QtPoly> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.i += 1;
                    acc = &acc * &self.factor()?;
                }
                Some(b'/') => {
                    self.i += 1;
                    let d = self.factor()?;
                    if d.degree() != Some(0) {
                        return Err(self.err("division by a nonconstant or zero polynomial"));
                    }
                    let inv = d.coeff(0).inv().ok_or_else(|| self.err("division by zero"))?;
                    acc = acc.scale(&inv);
                }
                Some(c) if c.is_ascii_alphanumeric() || c == b'(' => acc = &acc * &self.factor()?,
                _ => return Ok(acc),
            }
        }
    }

    fn factor(&mut self) -> Result<QtPoly> {
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.i += 1;
            self.ws();
            let start = self.i;
            while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                self.i += 1;
            }
            let n: u32 = std::str::from_utf8(&self.s[start..self.i])
                .ok()
                .and_then(|d| d.parse().ok())
                .ok_or_else(|| self.err("expected an exponent"))?;
            return Ok((0..n).fold(Poly::constant(RatFunc::one()), |acc, _| &acc * &base));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<QtPoly> {
        match self.peek() {
            Some(b'(') => {
                self.i += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected ')'"));
                }
                self.i += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.i;
                while self.i < self.s.len() && self.s[self.i].is_ascii_digit() {
                    self.i += 1;
                }
                let n: BigInt = std::str::from_utf8(&self.s[start..self.i]).unwrap().parse().unwrap();
                Ok(Poly::constant(RatFunc::rational(Rational::from_integer(n))))
            }
            Some(b'x') => {
                self.i += 1;
                Ok(Poly::monomial(RatFunc::one(), 1))
            }
            Some(b't') if self.allow_t => {
                self.i += 1;
                Ok(Poly::constant(RatFunc::t()))
            }
            _ => Err(self.err("expected a number, x, t or '('")),
        }
    }
}

fn parse_qt_expr(s: &str, allow_t: bool) -> Result<QtPoly> {
    let mut e = Expr { s: s.as_bytes(), i: 0, allow_t };
    let p = e.expr()?;
    if e.peek().is_some() {
        return Err(e.err("unexpected trailing input"));
    }
    Ok(p)
}

fn constant_coefficient(c: &RatFunc) -> Option<Rational> {
    (c.den().degree() == Some(0) && c.num().degree().unwrap_or(0) == 0).then(|| c.num().coeff(0))
}

/// Polynomial in x over Q(t): `x^2 + (t^2+1)/t*x - 3`.
pub fn parse_poly_qt(s: &str) -> Result<Poly<RatFunc>> {
    parse_qt_expr(s, true)
}

/// Polynomial in x over Q: `x^2 + 9`, `1/2*x - 3`.
pub fn parse_poly_q(s: &str) -> Result<Poly<Rational>> {
    let p = parse_qt_expr(s, false)?;
    let cs = p.coeffs().iter().map(|c| constant_coefficient(c).expect("no t in input")).collect();
    Ok(Poly::new(cs))
}

fn constant_in_x(p: QtPoly, s: &str) -> Result<RatFunc> {
    match p.degree() {
        None => Ok(RatFunc::zero()),
        Some(0) => Ok(p.coeff(0)),
        _ => Err(perr(format!("expected a field element, got a polynomial in x: {s:?}"))),
    }
}

pub fn parse_rational_expr(s: &str) -> Result<Rational> {
    let c = constant_in_x(parse_qt_expr(s, false)?, s)?;
    Ok(constant_coefficient(&c).expect("no t in input"))
}

pub fn parse_ratfunc(s: &str) -> Result<RatFunc> {
    constant_in_x(parse_qt_expr(s, true)?, s)
}

// ---------------------------------------------------------------------------
// constants header

/// `const NAME = root(POLY, LO, HI)`
pub fn parse_constant(line: &str) -> Result<AlgebraicConstant> {
    let rest = line.trim().strip_prefix("const").ok_or_else(|| perr("expected 'const'"))?;
    let (name, def) = rest.split_once('=').ok_or_else(|| perr(format!("expected '=' in {line:?}")))?;
    let name = name.trim();
    let args = def
        .trim()
        .strip_prefix("root")
        .and_then(|r| strip_wrapped(r, '(', ')'))
        .ok_or_else(|| perr(format!("expected root(poly, lo, hi) in {line:?}")))?;
    let parts = items(args);
    if parts.len() != 3 {
        return Err(perr(format!("root(...) takes a polynomial and two bounds in {line:?}")));
    }
    let p = parse_poly_q(parts[0])?;
    let mut coeffs = Vec::new();
    for c in p.coeffs() {
        if !c.is_integer() {
            return Err(perr(format!("defining polynomial must have integer coefficients in {line:?}")));
        }
        coeffs.push(c.to_integer());
    }
    AlgebraicConstant::new(name, IntPoly::new(coeffs), parse_rational(parts[1])?, parse_rational(parts[2])?)
}

/// Builtin constants plus the `const` lines of a header; other nonblank,
/// non-comment lines are returned unchanged.
pub fn parse_session(text: &str) -> Result<(Constants, Vec<String>)> {
    let mut consts = Constants::builtin();
    let mut seen = BTreeSet::new();
    let mut rest = Vec::new();
    for line in text.lines() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        if t.starts_with("const ") {
            let c = parse_constant(t)?;
            if !seen.insert(c.label().to_string()) {
                return Err(Error::config(format!("constant {} declared twice", c.label())));
            }
            consts.declare(c)?;
        } else {
            rest.push(t.to_string());
        }
    }
    Ok((consts, rest))
}

// ---------------------------------------------------------------------------
// groups

#[derive(Clone, Debug)]
pub enum GroupSpec {
    /// Q^n
    Divisible(usize),
    /// Z^n or an explicit presentation.
    Generated(GeneratedGroup),
    Hahn(Vec<Block>),
}

impl GroupSpec {
    /// The hull in which elements are read. Generated groups are read in
    /// normalized coordinates, so their hull is Q^rank.
    pub fn hull(&self) -> Result<Hull> {
        match self {
            GroupSpec::Divisible(n) => Hull::fin(*n),
            GroupSpec::Generated(g) => Hull::fin(crate::ordgroup::normalize(g)?.rank()),
            GroupSpec::Hahn(blocks) => Hull::hahn(blocks.clone()),
        }
    }
}

fn parse_block(s: &str) -> Result<Block> {
    let s = s.trim();
    match s {
        "OMEGA" => Ok(Block::Omega),
        "OMEGA_OPP" => Ok(Block::OmegaOpp),
        _ => {
            let n = s
                .strip_prefix("FIN")
                .and_then(|r| strip_wrapped(r, '(', ')'))
                .ok_or_else(|| perr(format!("unknown block {s:?}")))?;
            Ok(Block::Fin(parse_usize(n)?))
        }
    }
}

fn parse_power(s: &str, base: &str) -> Option<Result<usize>> {
    s.strip_prefix(base).map(|n| parse_usize(n.trim_start_matches('^')))
}

pub fn parse_group(consts: &Constants, s: &str) -> Result<GroupSpec> {
    let s = s.trim();
    if let Some(n) = parse_power(s, "Q^") {
        let n = n?;
        if n == 0 {
            return Err(Error::domain("Q^0 has no index set"));
        }
        return Ok(GroupSpec::Divisible(n));
    }
    if let Some(n) = parse_power(s, "Z^") {
        let n = n?;
        let gens: Vec<Vec<Rational>> =
            (0..n).map(|i| (0..n).map(|j| if i == j { Rational::one() } else { Rational::zero() }).collect()).collect();
        return Ok(GroupSpec::Generated(GeneratedGroup::from_rationals(n, &gens)?));
    }
    if let Some(rest) = s.strip_prefix("hahn:") {
        let blocks = split_top(rest, ',').into_iter().map(parse_block).collect::<Result<Vec<_>>>()?;
        return Ok(GroupSpec::Hahn(blocks));
    }
    if let Some(rest) = s.strip_prefix("group") {
        let mut n = None;
        let mut gens = None;
        for (k, v) in key_values(rest)? {
            match k.as_str() {
                "n" => n = Some(parse_usize(&v)?),
                "gens" => gens = Some(v),
                _ => return Err(perr(format!("unknown group field {k:?}"))),
            }
        }
        let n = n.ok_or_else(|| perr("group needs n=..."))?;
        let gens = gens.ok_or_else(|| perr("group needs gens=[...]"))?;
        let inner = strip_wrapped(&gens, '[', ']').ok_or_else(|| perr("gens must be a bracketed list"))?;
        let mut vecs = Vec::new();
        let mut div = Vec::new();
        for g in items(inner) {
            let (tuple, flag) = match g.strip_suffix("divisible") {
                Some(t) => (t.trim(), true),
                None => (g, false),
            };
            let coords = strip_wrapped(tuple, '(', ')').ok_or_else(|| perr(format!("bad generator {g:?}")))?;
            vecs.push(items(coords).into_iter().map(|c| parse_scalar(consts, c)).collect::<Result<Vec<_>>>()?);
            div.push(flag);
        }
        return Ok(GroupSpec::Generated(GeneratedGroup::new(n, vecs, div)?));
    }
    Err(perr(format!("unknown group {s:?}")))
}

/// `k1=v1 k2=v2 ...` where values may contain spaces but no top-level ` word=`.
fn key_values(s: &str) -> Result<Vec<(String, String)>> {
    let s = s.trim();
    let mut starts = Vec::new();
    let mut depth = 0i32;
    let b = s.as_bytes();
    for i in 0..b.len() {
        match b[i] {
            b'(' | b'[' | b'{' => depth += 1,
            b')' | b']' | b'}' => depth -= 1,
            _ => {}
        }
        let at_word = i == 0 || (b[i - 1].is_ascii_whitespace() && depth == 0);
        if at_word && b[i].is_ascii_alphabetic() {
            let mut j = i;
            while j < b.len() && (b[j].is_ascii_alphanumeric() || b[j] == b'_') {
                j += 1;
            }
            if j < b.len() && b[j] == b'=' {
                starts.push((i, j));
            }
        }
    }
    if s.is_empty() {
        return Ok(Vec::new());
    }
    if starts.first().map(|x| x.0) != Some(0) {
        return Err(perr(format!("expected key=value pairs, got {s:?}")));
    }
    let mut out = Vec::new();
    for (n, &(ks, ke)) in starts.iter().enumerate() {
        let end = starts.get(n + 1).map(|x| x.0).unwrap_or(s.len());
        out.push((s[ks..ke].to_string(), s[ke + 1..end].trim().to_string()));
    }
    Ok(out)
}

// ---------------------------------------------------------------------------
// segments and elements

pub fn parse_segment(hull: &Hull, s: &str) -> Result<InitialSegment> {
    let ix = hull.index();
    let s = s.trim();
    if s == "end" {
        return Ok(ix.whole());
    }
    let (b, cut) = match s.split_once(':') {
        None => (0, Cut::Count(parse_usize(s)?)),
        Some((b, c)) => {
            let b = parse_usize(b)?;
            let cut = if c == "empty" {
                Cut::Empty
            } else if let Some(k) = c.strip_prefix("cof") {
                Cut::Cofinite(parse_usize(k)?)
            } else {
                Cut::Count(parse_usize(c)?)
            };
            (b, cut)
        }
    };
    ix.segment(b, cut).map_err(|e| perr(format!("bad segment {s:?}: {e}")))
}

fn parse_position(s: &str) -> Result<Position> {
    let s = s.trim();
    match strip_wrapped(s, '(', ')') {
        Some(inner) => {
            let parts = items(inner);
            if parts.len() != 2 {
                return Err(perr(format!("position must be (block, offset), got {s:?}")));
            }
            Ok(Position::new(parse_usize(parts[0])?, parse_usize(parts[1])?))
        }
        None => Ok(Position::new(0, parse_usize(s)?)),
    }
}

fn dense_block_ok(hull: &Hull) -> bool {
    matches!(hull.index().blocks().first(), Some(Block::Fin(_) | Block::Omega))
}

/// Dense entries of block 0; the last may be a tail `... ~v`.
fn dense_entries(consts: &Constants, parts: &[&str]) -> Result<(Vec<Scalar>, Option<Scalar>)> {
    let mut vals = Vec::new();
    let mut tail = None;
    for (n, it) in parts.iter().enumerate() {
        let t = it.trim_start_matches("...").trim();
        if let Some(v) = t.strip_prefix('~') {
            if n + 1 != parts.len() {
                return Err(perr("a tail must be the last entry"));
            }
            tail = Some(parse_scalar(consts, v)?);
        } else if it.starts_with("...") {
            return Err(perr("'...' must be followed by '~value'"));
        } else {
            vals.push(parse_scalar(consts, it)?);
        }
    }
    Ok((vals, tail))
}

pub fn parse_element(hull: &Hull, consts: &Constants, s: &str) -> Result<SlotVector> {
    let s = s.trim();
    let u = if let Some(inner) = strip_wrapped(s, '{', '}') {
        parse_sparse(hull, consts, inner)?
    } else {
        parse_dense(hull, consts, s)?
    };
    hull.validate(&u)?;
    Ok(u)
}

fn parse_dense(hull: &Hull, consts: &Constants, s: &str) -> Result<SlotVector> {
    let (body, seg) = match s.rfind("]@S=") {
        Some(i) => (&s[..=i], Some(&s[i + 4..])),
        None => (s, None),
    };
    let inner = strip_wrapped(body, '[', ']').ok_or_else(|| perr(format!("expected [..] or {{..}}, got {s:?}")))?;
    if !dense_block_ok(hull) {
        return Err(perr("dense element syntax needs a FIN or OMEGA first block; use {..}"));
    }
    let parts = split_top(inner, '|');
    let (prefix, marker, suffix) = match parts.as_slice() {
        [all] => (items(all), None, Vec::new()),
        [p, m] => (items(p), Some(*m), Vec::new()),
        [p, m, r] => (items(p), Some(*m), items(r)),
        _ => return Err(perr(format!("too many '|' in {s:?}"))),
    };
    let k = prefix.len();
    let mut all = prefix;
    all.extend(suffix);
    let (vals, tail_value) = dense_entries(consts, &all)?;
    if marker.is_some() && tail_value.is_some() && vals.len() < k {
        return Err(perr("a tail cannot start inside the marker prefix"));
    }
    if let Some(Block::Fin(n)) = hull.index().blocks().first() {
        if vals.len() > *n {
            return Err(Error::domain(format!("{} coordinates given for FIN({n})", vals.len())));
        }
    }
    let coords = vals.iter().enumerate().map(|(i, v)| (Position::new(0, i), v.clone()));
    let tail = tail_value.map(|value| Tail { block: 0, start: vals.len(), value });
    let mut u = SlotVector::new(coords, tail, None);
    match (marker, seg) {
        (None, None) => {}
        (None, Some(_)) => return Err(perr("@S= needs a marker entry")),
        (Some(m), seg) => {
            let at = hull.index().segment(0, Cut::Count(k)).map_err(|e| perr(e.to_string()))?;
            if let Some(seg) = seg {
                if parse_segment(hull, seg)? != at {
                    return Err(perr(format!("@S={seg} does not match the {k} entries before the marker")));
                }
            }
            u = u.with_marker(at, parse_scalar(consts, m)?);
        }
    }
    Ok(u)
}

fn parse_sparse(hull: &Hull, consts: &Constants, inner: &str) -> Result<SlotVector> {
    let mut coords = Vec::new();
    let mut tail = None;
    let mut marker = None;
    for it in items(inner) {
        if let Some(rest) = it.strip_prefix("tail") {
            let (p, v) = rest.split_once('~').ok_or_else(|| perr(format!("expected 'tail (b,k) ~ v', got {it:?}")))?;
            let p = parse_position(p)?;
            tail = Some(Tail { block: p.block, start: p.offset, value: parse_scalar(consts, v)? });
        } else if let Some(rest) = it.strip_prefix("marker") {
            let (sg, v) = rest.split_once('=').ok_or_else(|| perr(format!("expected 'marker S = v', got {it:?}")))?;
            marker = Some((parse_segment(hull, sg)?, parse_scalar(consts, v)?));
        } else {
            let (p, v) = it.split_once("):").ok_or_else(|| perr(format!("expected '(b,k): v', got {it:?}")))?;
            let p = parse_position(&format!("{p})"))?;
            hull.index().check_position(p).map_err(|e| perr(e.to_string()))?;
            coords.push((p, parse_scalar(consts, v)?));
        }
    }
    let u = SlotVector::new(coords, tail, None);
    Ok(match marker {
        Some((s, v)) => u.with_marker(s, v),
        None => u,
    })
}

/// Whether `u` can be printed in the dense form.
fn dense_form(hull: &Hull, u: &SlotVector) -> Option<Option<usize>> {
    let ix = hull.index();
    if ix.blocks().len() != 1 || !dense_block_ok(hull) {
        return None;
    }
    match u.marker() {
        None => Some(None),
        Some(m) => match m.segment.cut() {
            Cut::Count(k) if m.segment.block() == 0 => Some(Some(k)),
            _ if ix.is_whole(&m.segment) => ix.single_fin().map(Some),
            _ => None,
        },
    }
}

pub fn format_element(hull: &Hull, u: &SlotVector) -> String {
    let Some(marker_cut) = dense_form(hull, u) else {
        return format_sparse(hull, u);
    };
    let tail_start = u.tail().map(|t| t.start);
    let coord_end = u.coords().keys().map(|p| p.offset + 1).max().unwrap_or(0);
    let end = match hull.index().single_fin() {
        Some(n) => n,
        None => tail_start.unwrap_or(coord_end).max(marker_cut.unwrap_or(0)),
    };
    let mut entries: Vec<String> = (0..end).map(|i| u.value_at(Position::new(0, i)).to_string()).collect();
    if let Some(t) = u.tail() {
        entries.push(format!("... ~{}", t.value));
    }
    match (marker_cut, u.marker()) {
        (Some(k), Some(m)) => {
            let (pre, post) = entries.split_at(k);
            let seg = hull.index().format_segment(&m.segment);
            let mid = format_signed(&m.value);
            if post.is_empty() {
                format!("[{} | {}]@S={}", pre.join(", "), mid, seg)
            } else {
                format!("[{} | {} | {}]@S={}", pre.join(", "), mid, post.join(", "), seg)
            }
        }
        _ => format!("[{}]", entries.join(", ")),
    }
}

fn format_sparse(hull: &Hull, u: &SlotVector) -> String {
    let mut parts: Vec<String> = u.coords().iter().map(|(p, v)| format!("({},{}): {}", p.block, p.offset, v)).collect();
    if let Some(t) = u.tail() {
        parts.push(format!("tail ({},{}) ~ {}", t.block, t.start, t.value));
    }
    if let Some(m) = u.marker() {
        parts.push(format!("marker {} = {}", hull.index().format_segment(&m.segment), format_signed(&m.value)));
    }
    format!("{{{}}}", parts.join(", "))
}

/// Number of dense entries in the first element of a provider or element
/// string, used to infer Q^n when no group is given.
pub fn dense_length(s: &str) -> Option<usize> {
    let start = s.find('[')?;
    let mut depth = 0;
    let mut end = None;
    for (i, ch) in s[start..].char_indices() {
        match ch {
            '[' => depth += 1,
            ']' => {
                depth -= 1;
                if depth == 0 {
                    end = Some(start + i);
                    break;
                }
            }
            _ => {}
        }
    }
    let inner = &s[start + 1..end?];
    if inner.trim_start().starts_with('[') {
        return dense_length(inner);
    }
    let n: usize = split_top(inner, '|').iter().enumerate().filter(|(i, _)| *i != 1).map(|(_, p)| items(p).len()).sum();
    Some(n)
}

// ---------------------------------------------------------------------------
// providers

pub fn parse_provider(hull: &Hull, consts: &Constants, s: &str) -> Result<Box<dyn CutProvider>> {
    let s = s.trim();
    let (kind, rest) = s.split_once(char::is_whitespace).unwrap_or((s, ""));
    let rest = rest.trim();
    match kind {
        "finite" => {
            let inner = strip_wrapped(rest, '[', ']').ok_or_else(|| perr("finite takes a bracketed list"))?;
            let elems = items(inner).into_iter().map(|e| parse_element(hull, consts, e)).collect::<Result<Vec<_>>>()?;
            Ok(Box::new(FiniteSet::new(hull, elems)?))
        }
        "lowercut" => Ok(Box::new(LowerCut::new(hull, &parse_element(hull, consts, rest)?)?)),
        "uppercut" => Ok(Box::new(UpperCut::new(hull, &parse_element(hull, consts, rest)?)?)),
        "ray" => {
            let mut prefix = SlotVector::zero();
            let mut pos = None;
            let mut sup = None;
            for (k, v) in key_values(rest)? {
                match k.as_str() {
                    "prefix" => prefix = parse_element(hull, consts, &v)?,
                    "pos" => pos = Some(parse_position(&v)?),
                    "sup" => sup = Some(v),
                    _ => return Err(perr(format!("unknown ray field {k:?}"))),
                }
            }
            let pos = pos.ok_or_else(|| perr("ray needs pos=..."))?;
            match sup.as_deref() {
                None | Some("unbounded") => Ok(Box::new(CoordinateRay::unbounded(hull, prefix, pos)?)),
                Some(a) => Ok(Box::new(CoordinateRay::below(hull, prefix, pos, parse_scalar(consts, a)?)?)),
            }
        }
        "segment" => {
            // {prefix + y e_pos : lo <= y <= hi} with rational ends
            let mut prefix = SlotVector::zero();
            let (mut pos, mut lo, mut hi) = (None, None, None);
            for (k, v) in key_values(rest)? {
                match k.as_str() {
                    "prefix" => prefix = parse_element(hull, consts, &v)?,
                    "pos" => pos = Some(parse_position(&v)?),
                    "min" => lo = Some(Bound { value: parse_scalar(consts, &v)?, closed: true }),
                    "max" => hi = Some(Bound { value: parse_scalar(consts, &v)?, closed: true }),
                    _ => return Err(perr(format!("unknown segment field {k:?}"))),
                }
            }
            let pos = pos.ok_or_else(|| perr("segment needs pos=..."))?;
            Ok(Box::new(CoordinateRay::new(hull, prefix, pos, lo, hi)?))
        }
        "prefixchain" => {
            let mut block = hull.index().blocks().iter().position(|b| *b == Block::Omega);
            let mut coeffs = Vec::new();
            let mut tail = Rational::one();
            for (k, v) in key_values(rest)? {
                match k.as_str() {
                    "block" => block = Some(parse_usize(&v)?),
                    "coeffs" => {
                        let inner = strip_wrapped(&v, '[', ']').ok_or_else(|| perr("coeffs must be a list"))?;
                        coeffs = items(inner).into_iter().map(parse_rational).collect::<Result<_>>()?;
                    }
                    "tail" => tail = parse_rational(&v)?,
                    _ => return Err(perr(format!("unknown prefixchain field {k:?}"))),
                }
            }
            let block = block.ok_or_else(|| Error::domain("prefixchain needs an OMEGA block"))?;
            Ok(Box::new(PrefixChain::new(hull, block, coeffs, tail)?))
        }
        "oppchain" => {
            let mut block = hull.index().blocks().iter().position(|b| *b == Block::OmegaOpp);
            let mut coeff = Rational::one();
            let mut start = 0;
            for (k, v) in key_values(rest)? {
                match k.as_str() {
                    "block" => block = Some(parse_usize(&v)?),
                    "coeff" => coeff = parse_rational(&v)?,
                    "start" => start = parse_usize(&v)?,
                    _ => return Err(perr(format!("unknown oppchain field {k:?}"))),
                }
            }
            let block = block.ok_or_else(|| Error::domain("oppchain needs an OMEGA_OPP block"))?;
            Ok(Box::new(OppChain::new(hull, block, coeff, start)?))
        }
        _ => Err(perr(format!("unknown provider {kind:?}"))),
    }
}

// ---------------------------------------------------------------------------
// valued fields and parameters

#[derive(Clone, Debug)]
pub enum FieldSpec {
    PAdic(PAdicQ),
    LexQt(LexCompositeQt),
}

pub fn parse_field(s: &str) -> Result<FieldSpec> {
    let s = s.trim();
    let prime = |p: &str| -> Result<u64> { p.trim().parse().map_err(|_| perr(format!("bad prime in {s:?}"))) };
    if let Some(p) = s.strip_prefix("padic:") {
        Ok(FieldSpec::PAdic(PAdicQ::new(prime(p)?)?))
    } else if let Some(p) = s.strip_prefix("lexqt:") {
        Ok(FieldSpec::LexQt(LexCompositeQt::new(prime(p)?)?))
    } else {
        Err(perr(format!("unknown field {s:?}; expected padic:P or lexqt:P")))
    }
}

/// `inf`, `-inf`, `inf-`, a scalar (first coordinate), or an element.
pub fn parse_delta(hull: &Hull, consts: &Constants, s: &str) -> Result<Delta> {
    match s.trim() {
        "inf" => Ok(Delta::Infinity),
        "-inf" => Ok(Delta::Finite(hull.minus_infinity())),
        "inf-" => Ok(Delta::Finite(hull.infinity_minus())),
        t if t.starts_with('[') || t.starts_with('{') => Ok(Delta::Finite(parse_element(hull, consts, t)?)),
        t => Ok(Delta::Finite(SlotVector::dense([parse_scalar(consts, t)?]))),
    }
}

pub fn format_delta(hull: &Hull, d: &Delta) -> String {
    match d {
        Delta::Infinity => "inf".into(),
        Delta::Finite(u) if *u == hull.minus_infinity() => "-inf".into(),
        Delta::Finite(u) if *u == hull.infinity_minus() => "inf-".into(),
        Delta::Finite(u) => format_element(hull, u),
    }
}

pub fn format_int_vector(g: &[BigInt]) -> String {
    let parts: Vec<String> = g.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}

pub fn format_rational_vector(g: &[Rational]) -> String {
    let parts: Vec<String> = g.iter().map(|x| x.to_string()).collect();
    format!("[{}]", parts.join(", "))
}
