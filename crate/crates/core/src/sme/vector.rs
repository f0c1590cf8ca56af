use std::collections::BTreeMap;

use super::index::{InitialSegment, Position};
use crate::error::{Error, Result};
use crate::scalars::{Rational, Scalar};

/// Eventually constant tail: `value` at every offset `>= start` of an OMEGA block.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Tail {
    pub block: usize,
    pub start: usize,
    pub value: Scalar,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Marker {
    pub segment: InitialSegment,
    pub value: Scalar,
}

/// Finitely presented element of R^{I_S} with the lexicographic order.
///
/// Canonical storage: no zero coordinates, no explicit coordinate at or past
/// the tail start, tail start pulled back as far as the coordinates allow,
/// no zero tail and no zero marker. Structural equality is value equality.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct SlotVector {
    coords: BTreeMap<Position, Scalar>,
    tail: Option<Tail>,
    marker: Option<Marker>,
}

impl SlotVector {
    pub fn zero() -> Self {
        SlotVector::default()
    }

    pub fn new(
        coords: impl IntoIterator<Item = (Position, Scalar)>,
        tail: Option<Tail>,
        marker: Option<Marker>,
    ) -> Self {
        let mut map: BTreeMap<Position, Scalar> = BTreeMap::new();
        for (p, s) in coords {
            let e = map.entry(p).or_default();
            *e = &*e + &s;
        }
        let mut tail = tail.filter(|t| !t.value.is_zero());
        if let Some(t) = tail.as_mut() {
            // explicit overrides past the start push the start forward
            let last_override = map
                .keys()
                .filter(|p| p.block == t.block && p.offset >= t.start)
                .map(|p| p.offset)
                .max();
            if let Some(last) = last_override {
                for k in t.start..=last {
                    map.entry(Position::new(t.block, k)).or_insert_with(|| t.value.clone());
                }
                t.start = last + 1;
            }
            while t.start > 0 {
                let p = Position::new(t.block, t.start - 1);
                if map.get(&p) == Some(&t.value) {
                    map.remove(&p);
                    t.start -= 1;
                } else {
                    break;
                }
            }
        }
        map.retain(|_, s| !s.is_zero());
        let marker = marker.filter(|m| !m.value.is_zero());
        SlotVector { coords: map, tail, marker }
    }

    pub fn from_coords(coords: impl IntoIterator<Item = (Position, Scalar)>) -> Self {
        Self::new(coords, None, None)
    }

    /// Dense vector on the offsets of block 0.
    pub fn dense(values: impl IntoIterator<Item = Scalar>) -> Self {
        Self::from_coords(values.into_iter().enumerate().map(|(k, s)| (Position::new(0, k), s)))
    }

    pub fn dense_rational(values: &[Rational]) -> Self {
        Self::dense(values.iter().cloned().map(Scalar::from_rational))
    }

    pub fn unit(p: Position, value: Scalar) -> Self {
        Self::from_coords([(p, value)])
    }

    pub fn with_marker(mut self, segment: InitialSegment, value: Scalar) -> Self {
        self.marker = (!value.is_zero()).then_some(Marker { segment, value });
        self
    }

    pub fn without_marker(mut self) -> Self {
        self.marker = None;
        self
    }

    pub fn coords(&self) -> &BTreeMap<Position, Scalar> {
        &self.coords
    }

    pub fn tail(&self) -> Option<&Tail> {
        self.tail.as_ref()
    }

    pub fn marker(&self) -> Option<&Marker> {
        self.marker.as_ref()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.is_empty() && self.tail.is_none() && self.marker.is_none()
    }

    pub fn value_at(&self, p: Position) -> Scalar {
        if let Some(s) = self.coords.get(&p) {
            return s.clone();
        }
        match &self.tail {
            Some(t) if t.block == p.block && p.offset >= t.start => t.value.clone(),
            _ => Scalar::zero(),
        }
    }

    pub fn marker_value(&self, s: &InitialSegment) -> Scalar {
        match &self.marker {
            Some(m) if m.segment == *s => m.value.clone(),
            _ => Scalar::zero(),
        }
    }

    pub fn neg(&self) -> SlotVector {
        SlotVector {
            coords: self.coords.iter().map(|(p, s)| (*p, -s)).collect(),
            tail: self.tail.as_ref().map(|t| Tail { block: t.block, start: t.start, value: -&t.value }),
            marker: self.marker.as_ref().map(|m| Marker { segment: m.segment, value: -&m.value }),
        }
    }

    pub fn scale(&self, q: &Rational) -> SlotVector {
        Self::new(
            self.coords.iter().map(|(p, s)| (*p, s.scale(q))),
            self.tail.as_ref().map(|t| Tail { block: t.block, start: t.start, value: t.value.scale(q) }),
            self.marker.as_ref().map(|m| Marker { segment: m.segment, value: m.value.scale(q) }),
        )
    }

    /// Sum of two elements of the same R^{I_S}; tails must share a block.
    pub fn add(&self, other: &SlotVector) -> Result<SlotVector> {
        let marker = match (&self.marker, &other.marker) {
            (Some(a), Some(b)) if a.segment != b.segment => {
                return Err(Error::domain("cannot add elements with markers at different segments"))
            }
            (Some(a), Some(b)) => Some(Marker { segment: a.segment, value: &a.value + &b.value }),
            (a, b) => a.clone().or_else(|| b.clone()),
        };
        let mut coords: Vec<(Position, Scalar)> = Vec::new();
        let tail = match (&self.tail, &other.tail) {
            (Some(a), Some(b)) if a.block != b.block => {
                return Err(Error::domain("cannot add tails living in different blocks"))
            }
            (Some(a), Some(b)) => {
                let start = a.start.max(b.start);
                for k in a.start.min(b.start)..start {
                    let p = Position::new(a.block, k);
                    if k >= a.start {
                        coords.push((p, a.value.clone()));
                    }
                    if k >= b.start {
                        coords.push((p, b.value.clone()));
                    }
                }
                Some(Tail { block: a.block, start, value: &a.value + &b.value })
            }
            (a, b) => a.clone().or_else(|| b.clone()),
        };
        coords.extend(self.coords.iter().map(|(p, s)| (*p, s.clone())));
        coords.extend(other.coords.iter().map(|(p, s)| (*p, s.clone())));
        // explicit coordinates in the tail block past the tail start come from
        // the tail-less summand and must be added to the tail value
        if let Some(t) = &tail {
            for (p, s) in coords.iter_mut() {
                if p.block == t.block && p.offset >= t.start {
                    *s = &*s + &t.value;
                }
            }
        }
        Ok(Self::new(coords, tail, marker))
    }

    pub fn sub(&self, other: &SlotVector) -> Result<SlotVector> {
        self.add(&other.neg())
    }
}
