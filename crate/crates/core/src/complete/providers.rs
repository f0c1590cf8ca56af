use std::cmp::Ordering;

use num_traits::{Signed, Zero};

use super::{CutProvider, Ray};
use crate::error::{Error, Result};
use crate::scalars::{int, Rational, Scalar};
use crate::sme::{Block, Cut, Hull, InitialSegment, Position, SlotVector};

/// Largest offset mentioned by `u` inside block `b` (coords, tail start, marker cut).
fn extent_in_block(u: &SlotVector, b: usize) -> usize {
    let mut m = 0;
    for p in u.coords().keys().filter(|p| p.block == b) {
        m = m.max(p.offset + 1);
    }
    if let Some(t) = u.tail().filter(|t| t.block == b) {
        m = m.max(t.start + 1);
    }
    if let Some(mk) = u.marker().filter(|mk| mk.segment.block() == b) {
        m = m.max(match mk.segment.cut() {
            Cut::Count(k) | Cut::Cofinite(k) => k,
            Cut::Empty => 0,
        });
    }
    m
}

fn is_infinite(hull: &Hull, b: usize) -> bool {
    !matches!(hull.index().blocks().get(b), Some(Block::Fin(_)) | None)
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct FiniteSet {
    elems: Vec<SlotVector>,
}

impl FiniteSet {
    pub fn new(hull: &Hull, elems: Vec<SlotVector>) -> Result<Self> {
        if elems.is_empty() {
            return Err(Error::domain("finite set must be nonempty"));
        }
        for e in &elems {
            hull.validate(e)?;
        }
        Ok(FiniteSet { elems })
    }

    pub fn elements(&self) -> &[SlotVector] {
        &self.elems
    }

    fn max_of(hull: &Hull, xs: impl IntoIterator<Item = SlotVector>) -> Result<Option<SlotVector>> {
        let mut best: Option<SlotVector> = None;
        for x in xs {
            best = match best {
                Some(b) if hull.compare(&b, &x)? != Ordering::Less => Some(b),
                _ => Some(x),
            };
        }
        Ok(best)
    }
}

impl CutProvider for FiniteSet {
    fn global_max(&self, hull: &Hull) -> Result<Option<SlotVector>> {
        Self::max_of(hull, self.elems.iter().cloned())
    }

    fn max_at(&self, hull: &Hull, s: &InitialSegment) -> Result<Option<SlotVector>> {
        Self::max_of(hull, self.elems.iter().map(|e| hull.restrict(e, s)))
    }

    fn stable_cut(&self, _hull: &Hull, block: usize) -> usize {
        self.elems.iter().map(|e| extent_in_block(e, block)).max().unwrap_or(0) + 1
    }

    fn ray_at(&self, hull: &Hull, i: Position, prefix: &SlotVector) -> Result<Ray> {
        let t = hull.index().segment_before(i);
        let ys: Vec<Scalar> = self
            .elems
            .iter()
            .filter(|e| hull.restrict(e, &t) == *prefix)
            .map(|e| e.value_at(i))
            .collect();
        let mut best: Option<Scalar> = None;
        for y in ys {
            best = match best {
                Some(b) if b.compare(&y)? != Ordering::Less => Some(b),
                _ => Some(y),
            };
        }
        best.map(|a| Ray::Sup { a, attained: true })
            .ok_or_else(|| Error::contract("no member extends the given prefix"))
    }

    fn negated(&self) -> Box<dyn CutProvider> {
        Box::new(FiniteSet { elems: self.elems.iter().map(|e| e.neg()).collect() })
    }

    fn sample(&self, _hull: &Hull, n: usize) -> Result<Vec<SlotVector>> {
        Ok(self.elems.iter().take(n).cloned().collect())
    }

    fn member_above(&self, hull: &Hull, bound: &SlotVector) -> Result<Option<SlotVector>> {
        for e in &self.elems {
            if hull.compare(e, bound)? == Ordering::Greater {
                return Ok(Some(e.clone()));
            }
        }
        Ok(None)
    }
}

// ---------------------------------------------------------------------------

/// {q ∈ Γ_Q : q < c} for the canonical representative c of a given element.
#[derive(Clone, Debug)]
pub struct LowerCut {
    c: SlotVector,
}

impl LowerCut {
    pub fn new(hull: &Hull, beta: &SlotVector) -> Result<Self> {
        let c = hull.classify(beta)?.rep;
        if c == hull.minus_infinity() {
            return Err(Error::domain("the lower cut of -inf is empty"));
        }
        Ok(LowerCut { c })
    }

    pub fn bound(&self) -> &SlotVector {
        &self.c
    }

    fn positive_marker_at(&self, s: &InitialSegment) -> bool {
        self.c.marker().is_some_and(|m| m.segment == *s && m.value.signum().ok() == Some(Ordering::Greater))
    }
}

impl CutProvider for LowerCut {
    fn global_max(&self, hull: &Hull) -> Result<Option<SlotVector>> {
        let whole = hull.index().whole();
        Ok(self.positive_marker_at(&whole).then(|| self.c.clone().without_marker()))
    }

    fn max_at(&self, hull: &Hull, s: &InitialSegment) -> Result<Option<SlotVector>> {
        let w = hull.restrict(&self.c, s);
        if hull.is_commensurable(&w) {
            return Ok((!hull.index().is_whole(s)).then_some(w));
        }
        Ok(self.positive_marker_at(s).then(|| w.without_marker()))
    }

    fn stable_cut(&self, _hull: &Hull, block: usize) -> usize {
        extent_in_block(&self.c, block) + 2
    }

    fn ray_at(&self, hull: &Hull, i: Position, prefix: &SlotVector) -> Result<Ray> {
        let t = hull.index().segment_before(i);
        if self.max_at(hull, &t)?.as_ref() != Some(prefix) {
            return Err(Error::contract("ray prefix is not the maximum below the position"));
        }
        if self.positive_marker_at(&t) {
            return Ok(Ray::Unbounded);
        }
        let attained = self.max_at(hull, &hull.index().segment_after(i))?.is_some();
        Ok(Ray::Sup { a: self.c.value_at(i), attained })
    }

    fn negated(&self) -> Box<dyn CutProvider> {
        Box::new(UpperCut { c: self.c.neg() })
    }

    fn sample(&self, hull: &Hull, n: usize) -> Result<Vec<SlotVector>> {
        let mut out = Vec::new();
        if let Some(m) = self.global_max(hull)? {
            out.push(m);
        }
        let mut q = hull.rational_between(&hull.minus_infinity(), &self.c)?;
        while let Some(x) = q {
            if out.len() >= n {
                break;
            }
            q = hull.rational_between(&x, &self.c)?;
            out.push(x);
        }
        Ok(out)
    }

    fn member_above(&self, hull: &Hull, bound: &SlotVector) -> Result<Option<SlotVector>> {
        if let Some(m) = self.global_max(hull)? {
            return Ok((hull.compare(&m, bound)? == Ordering::Greater).then_some(m));
        }
        if hull.compare(bound, &self.c)? != Ordering::Less {
            return Ok(None);
        }
        hull.rational_between(bound, &self.c)
    }
}

/// {q ∈ Γ_Q : q > c}
#[derive(Clone, Debug)]
pub struct UpperCut {
    c: SlotVector,
}

impl UpperCut {
    pub fn new(hull: &Hull, beta: &SlotVector) -> Result<Self> {
        let c = hull.classify(beta)?.rep;
        if c == hull.infinity_minus() {
            return Err(Error::domain("the upper cut of inf- is empty"));
        }
        Ok(UpperCut { c })
    }
}

impl CutProvider for UpperCut {
    fn global_max(&self, _hull: &Hull) -> Result<Option<SlotVector>> {
        Ok(None)
    }

    fn max_at(&self, hull: &Hull, s: &InitialSegment) -> Result<Option<SlotVector>> {
        Ok(hull.index().is_empty_segment(s).then(SlotVector::zero))
    }

    fn stable_cut(&self, _hull: &Hull, _block: usize) -> usize {
        1
    }

    fn ray_at(&self, _hull: &Hull, _i: Position, _prefix: &SlotVector) -> Result<Ray> {
        Ok(Ray::Unbounded)
    }

    fn negated(&self) -> Box<dyn CutProvider> {
        Box::new(LowerCut { c: self.c.neg() })
    }

    fn sample(&self, hull: &Hull, n: usize) -> Result<Vec<SlotVector>> {
        let top = hull.infinity_minus();
        let mut out = Vec::new();
        let mut q = hull.rational_between(&self.c, &top)?;
        while let Some(x) = q {
            if out.len() >= n {
                break;
            }
            q = hull.rational_between(&x, &top)?;
            out.push(x);
        }
        Ok(out)
    }

    fn member_above(&self, hull: &Hull, bound: &SlotVector) -> Result<Option<SlotVector>> {
        let lo = if hull.compare(bound, &self.c)? == Ordering::Greater { bound } else { &self.c };
        hull.rational_between(lo, &hull.infinity_minus())
    }
}

// ---------------------------------------------------------------------------

/// Partial sums x_n = a_0 e_0 + ... + a_{n-1} e_{n-1} (n >= 1) inside an
/// OMEGA block, with a_k = coeffs[k] and a constant value past the list.
#[derive(Clone, Debug)]
pub struct PrefixChain {
    block: usize,
    coeffs: Vec<Rational>,
    tail: Rational,
}

impl PrefixChain {
    pub fn new(hull: &Hull, block: usize, coeffs: Vec<Rational>, tail: Rational) -> Result<Self> {
        if hull.index().blocks().get(block) != Some(&Block::Omega) {
            return Err(Error::domain("prefix chains live in an OMEGA block"));
        }
        let sign = tail.signum();
        if tail.is_zero() || coeffs.iter().any(|c| c.signum() != sign) {
            return Err(Error::domain("prefix chain coefficients must be nonzero and share one sign"));
        }
        Ok(PrefixChain { block, coeffs, tail })
    }

    fn coeff(&self, k: usize) -> &Rational {
        self.coeffs.get(k).unwrap_or(&self.tail)
    }

    fn increasing(&self) -> bool {
        self.tail.is_positive()
    }

    pub fn element(&self, n: usize) -> SlotVector {
        SlotVector::from_coords(
            (0..n).map(|k| (Position::new(self.block, k), Scalar::from_rational(self.coeff(k).clone()))),
        )
    }
}

impl CutProvider for PrefixChain {
    fn global_max(&self, _hull: &Hull) -> Result<Option<SlotVector>> {
        Ok((!self.increasing()).then(|| self.element(1)))
    }

    fn max_at(&self, hull: &Hull, s: &InitialSegment) -> Result<Option<SlotVector>> {
        if !self.increasing() {
            return Ok(Some(hull.restrict(&self.element(1), s)));
        }
        if s.block() < self.block {
            return Ok(Some(SlotVector::zero()));
        }
        if s.block() > self.block {
            return Ok(None);
        }
        match s.cut() {
            Cut::Count(k) => Ok(Some(self.element(k))),
            _ => Err(Error::domain("segment cut does not fit an OMEGA block")),
        }
    }

    fn stable_cut(&self, _hull: &Hull, block: usize) -> usize {
        if block == self.block {
            self.coeffs.len() + 1
        } else {
            1
        }
    }

    fn ray_at(&self, hull: &Hull, i: Position, _prefix: &SlotVector) -> Result<Ray> {
        let a = if i.block == self.block { self.coeff(i.offset).clone() } else { Rational::zero() };
        let _ = hull;
        Ok(Ray::Sup { a: Scalar::from_rational(a), attained: true })
    }

    fn negated(&self) -> Box<dyn CutProvider> {
        Box::new(PrefixChain {
            block: self.block,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
            tail: -&self.tail,
        })
    }

    fn sample(&self, _hull: &Hull, n: usize) -> Result<Vec<SlotVector>> {
        Ok((1..=n).map(|k| self.element(k)).collect())
    }

    fn member_above(&self, hull: &Hull, bound: &SlotVector) -> Result<Option<SlotVector>> {
        let limit = self.coeffs.len() + extent_in_block(bound, self.block) + 3;
        for n in 1..=limit {
            let x = self.element(n);
            if hull.compare(&x, bound)? == Ordering::Greater {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }
}

/// {c e_k : k >= start} inside an OMEGA_OPP block.
#[derive(Clone, Debug)]
pub struct OppChain {
    block: usize,
    coeff: Rational,
    start: usize,
}

impl OppChain {
    pub fn new(hull: &Hull, block: usize, coeff: Rational, start: usize) -> Result<Self> {
        if hull.index().blocks().get(block) != Some(&Block::OmegaOpp) {
            return Err(Error::domain("opposite chains live in an OMEGA_OPP block"));
        }
        if coeff.is_zero() {
            return Err(Error::domain("opposite chain coefficient must be nonzero"));
        }
        Ok(OppChain { block, coeff, start })
    }

    fn element(&self, k: usize) -> SlotVector {
        SlotVector::unit(Position::new(self.block, k), Scalar::from_rational(self.coeff.clone()))
    }
}

impl CutProvider for OppChain {
    fn global_max(&self, _hull: &Hull) -> Result<Option<SlotVector>> {
        Ok(self.coeff.is_negative().then(|| self.element(self.start)))
    }

    fn max_at(&self, hull: &Hull, s: &InitialSegment) -> Result<Option<SlotVector>> {
        if self.coeff.is_negative() {
            return Ok(Some(hull.restrict(&self.element(self.start), s)));
        }
        let before = s.block() < self.block || (s.block() == self.block && s.cut() == Cut::Empty);
        Ok(before.then(SlotVector::zero))
    }

    fn stable_cut(&self, _hull: &Hull, _block: usize) -> usize {
        1
    }

    fn ray_at(&self, _hull: &Hull, _i: Position, _prefix: &SlotVector) -> Result<Ray> {
        Ok(Ray::Unbounded)
    }

    fn negated(&self) -> Box<dyn CutProvider> {
        Box::new(OppChain { block: self.block, coeff: -&self.coeff, start: self.start })
    }

    fn sample(&self, _hull: &Hull, n: usize) -> Result<Vec<SlotVector>> {
        Ok((self.start..self.start + n).map(|k| self.element(k)).collect())
    }

    fn member_above(&self, hull: &Hull, bound: &SlotVector) -> Result<Option<SlotVector>> {
        let limit = self.start + extent_in_block(bound, self.block) + 3;
        for k in self.start..=limit {
            let x = self.element(k);
            if hull.compare(&x, bound)? == Ordering::Greater {
                return Ok(Some(x));
            }
        }
        Ok(None)
    }
}

// ---------------------------------------------------------------------------

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Bound {
    pub value: Scalar,
    pub closed: bool,
}

/// {prefix + y e_i : y ∈ Y ∩ Q} for an interval Y.
#[derive(Clone, Debug)]
pub struct CoordinateRay {
    prefix: SlotVector,
    pos: Position,
    lower: Option<Bound>,
    upper: Option<Bound>,
}

impl CoordinateRay {
    pub fn new(
        hull: &Hull,
        prefix: SlotVector,
        pos: Position,
        lower: Option<Bound>,
        upper: Option<Bound>,
    ) -> Result<Self> {
        hull.index().check_position(pos)?;
        if !hull.is_commensurable(&prefix) {
            return Err(Error::domain("ray prefix must be commensurable"));
        }
        let below = hull.index().segment_before(pos);
        if hull.restrict(&prefix, &below) != prefix {
            return Err(Error::domain("ray prefix must be supported before the ray position"));
        }
        for b in lower.iter().chain(upper.iter()) {
            if b.closed && !b.value.is_rational() {
                return Err(Error::domain("closed ray endpoints must be rational"));
            }
        }
        if let (Some(l), Some(u)) = (&lower, &upper) {
            let ord = l.value.compare(&u.value)?;
            if ord == Ordering::Greater || (ord == Ordering::Equal && !(l.closed && u.closed)) {
                return Err(Error::domain("ray interval is empty"));
            }
        }
        Ok(CoordinateRay { prefix, pos, lower, upper })
    }

    /// Y = [0, inf)
    pub fn unbounded(hull: &Hull, prefix: SlotVector, pos: Position) -> Result<Self> {
        Self::new(hull, prefix, pos, Some(Bound { value: Scalar::zero(), closed: true }), None)
    }

    /// Y = (-inf, a)
    pub fn below(hull: &Hull, prefix: SlotVector, pos: Position, a: Scalar) -> Result<Self> {
        Self::new(hull, prefix, pos, None, Some(Bound { value: a, closed: false }))
    }

    fn point(&self, y: Rational) -> SlotVector {
        self.prefix.add(&SlotVector::unit(self.pos, Scalar::from_rational(y))).expect("finite vectors add")
    }

    fn top(&self) -> Option<SlotVector> {
        self.upper.as_ref().filter(|u| u.closed).map(|u| self.point(u.value.as_rational().expect("rational").clone()))
    }

    /// A rational in Y strictly above `floor` (or any point of Y when `floor` is None).
    fn point_above(&self, floor: Option<&Scalar>) -> Result<Option<Rational>> {
        let lo: Option<(Scalar, bool)> = match (floor, &self.lower) {
            (Some(f), Some(l)) => {
                if f.compare(&l.value)? == Ordering::Less {
                    Some((l.value.clone(), l.closed))
                } else {
                    Some((f.clone(), false))
                }
            }
            (Some(f), None) => Some((f.clone(), false)),
            (None, Some(l)) => Some((l.value.clone(), l.closed)),
            (None, None) => None,
        };
        match (&lo, &self.upper) {
            (Some((l, true)), _) => Ok(l.as_rational().cloned()),
            (Some((l, false)), None) => Ok(Some(l.integer_above()?)),
            (Some((l, false)), Some(u)) => match l.compare(&u.value)? {
                Ordering::Less => Ok(Some(l.rational_strictly_between(&u.value)?)),
                _ => Ok(None),
            },
            (None, None) => Ok(Some(Rational::zero())),
            (None, Some(u)) => {
                if u.closed {
                    Ok(u.value.as_rational().cloned())
                } else {
                    Ok(Some(u.value.integer_above()? - int(2)))
                }
            }
        }
    }
}

impl CutProvider for CoordinateRay {
    fn global_max(&self, _hull: &Hull) -> Result<Option<SlotVector>> {
        Ok(self.top())
    }

    fn max_at(&self, hull: &Hull, s: &InitialSegment) -> Result<Option<SlotVector>> {
        if !hull.index().contains(s, self.pos) {
            return Ok(Some(hull.restrict(&self.prefix, s)));
        }
        Ok(self.top().map(|t| hull.restrict(&t, s)))
    }

    fn stable_cut(&self, hull: &Hull, block: usize) -> usize {
        let own = if block == self.pos.block && is_infinite(hull, block) { self.pos.offset + 1 } else { 0 };
        own.max(extent_in_block(&self.prefix, block)) + 2
    }

    fn ray_at(&self, _hull: &Hull, i: Position, prefix: &SlotVector) -> Result<Ray> {
        if i != self.pos || *prefix != self.prefix {
            return Err(Error::contract("ray query does not match the provider's ray"));
        }
        Ok(match &self.upper {
            None => Ray::Unbounded,
            Some(u) => Ray::Sup { a: u.value.clone(), attained: u.closed },
        })
    }

    fn negated(&self) -> Box<dyn CutProvider> {
        let flip = |b: &Bound| Bound { value: -&b.value, closed: b.closed };
        Box::new(CoordinateRay {
            prefix: self.prefix.neg(),
            pos: self.pos,
            lower: self.upper.as_ref().map(flip),
            upper: self.lower.as_ref().map(flip),
        })
    }

    fn sample(&self, _hull: &Hull, n: usize) -> Result<Vec<SlotVector>> {
        let mut out = Vec::new();
        let mut y = self.point_above(None)?;
        while let Some(v) = y {
            if out.len() >= n {
                break;
            }
            out.push(self.point(v.clone()));
            y = self.point_above(Some(&Scalar::from_rational(v)))?;
        }
        Ok(out)
    }

    fn member_above(&self, hull: &Hull, bound: &SlotVector) -> Result<Option<SlotVector>> {
        let below = hull.index().segment_before(self.pos);
        let head = hull.restrict(bound, &below);
        match hull.compare(&head, &self.prefix)? {
            Ordering::Less => Ok(self.point_above(None)?.map(|y| self.point(y))),
            Ordering::Greater => Ok(None),
            Ordering::Equal => {
                let y = self.point_above(Some(&bound.value_at(self.pos)))?;
                let Some(y) = y else { return Ok(None) };
                let x = self.point(y);
                Ok((hull.compare(&x, bound)? == Ordering::Greater).then_some(x))
            }
        }
    }
}
