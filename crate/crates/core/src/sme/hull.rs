use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::index::{Block, IndexStructure, InitialSegment, Position, Slot};
use super::vector::{SlotVector, Tail};
use crate::error::{Error, Result};
use crate::scalars::{Rational, Scalar};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroupModel {
    /// Γ is a finitely generated group normalized into Q^r (single FIN block).
    FgNormalized,
    /// Γ = Γ_Q = Q^(I), the Hahn sum over any block structure.
    FullHahnSum,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Stratum {
    Commensurable,
    EqRkIrrat,
    EqRkRat,
    IncRk,
    MinusInfinity,
    InfinityMinus,
}

impl fmt::Display for Stratum {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Stratum::Commensurable => "Commensurable",
            Stratum::EqRkIrrat => "EqRkIrrat",
            Stratum::EqRkRat => "EqRkRat",
            Stratum::IncRk => "IncRk",
            Stratum::MinusInfinity => "MinusInfinity",
            Stratum::InfinityMinus => "InfinityMinus",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Classification {
    pub stratum: Stratum,
    /// Canonical representative of the equivalence class.
    pub rep: SlotVector,
    /// Minimal initial segment witnessing incommensurability (the marker's
    /// segment for rank-increasing elements); `None` when commensurable.
    pub segment: Option<InitialSegment>,
}

/// The one-added-element hull over an index structure, with its group model.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Hull {
    index: IndexStructure,
    model: GroupModel,
}

impl Hull {
    pub fn new(index: IndexStructure, model: GroupModel) -> Result<Self> {
        if model == GroupModel::FgNormalized && index.single_fin().is_none() {
            return Err(Error::domain("the normalized model needs a single FIN block"));
        }
        Ok(Hull { index, model })
    }

    /// Q^r with the lexicographic order.
    pub fn fin(r: usize) -> Result<Self> {
        Self::new(IndexStructure::fin(r)?, GroupModel::FgNormalized)
    }

    pub fn hahn(blocks: Vec<Block>) -> Result<Self> {
        Self::new(IndexStructure::new(blocks)?, GroupModel::FullHahnSum)
    }

    pub fn index(&self) -> &IndexStructure {
        &self.index
    }

    pub fn model(&self) -> GroupModel {
        self.model
    }

    pub fn validate(&self, u: &SlotVector) -> Result<()> {
        for p in u.coords().keys() {
            self.index.check_position(*p)?;
        }
        if let Some(t) = u.tail() {
            if self.index.blocks().get(t.block) != Some(&Block::Omega) {
                return Err(Error::domain("tails are only supported inside OMEGA blocks"));
            }
        }
        if let Some(m) = u.marker() {
            let s = m.segment;
            if self.index.segment(s.block(), s.cut()).ok() != Some(s) {
                return Err(Error::domain("marker segment does not belong to this index structure"));
            }
        }
        Ok(())
    }

    pub fn value(&self, u: &SlotVector, slot: &Slot) -> Scalar {
        match slot {
            Slot::Pos(p) => u.value_at(*p),
            Slot::Mark(s) => u.marker_value(s),
        }
    }

    /// Slots where the given vectors can first differ, in hull order.
    pub(crate) fn events(&self, vs: &[&SlotVector]) -> Vec<Slot> {
        // slot keys are injective, so the key map orders and dedups slots
        let mut set: BTreeMap<(usize, i64), Slot> = BTreeMap::new();
        let mut tail_blocks = BTreeSet::new();
        let add = |set: &mut BTreeMap<_, _>, slot: Slot| {
            set.insert(self.index.slot_key(&slot), slot);
        };
        for v in vs {
            for p in v.coords().keys() {
                add(&mut set, Slot::Pos(*p));
            }
            if let Some(t) = v.tail() {
                tail_blocks.insert(t.block);
                add(&mut set, Slot::Pos(Position::new(t.block, t.start)));
            }
            if let Some(m) = v.marker() {
                add(&mut set, Slot::Mark(m.segment));
            }
        }
        // inside tail regions the difference is constant between events,
        // so the successor of each event covers the gap after it
        let extra: Vec<Slot> = set
            .values()
            .filter_map(|s| match *s {
                Slot::Pos(p) if tail_blocks.contains(&p.block) => Some(Slot::Pos(Position::new(p.block, p.offset + 1))),
                Slot::Mark(m) if tail_blocks.contains(&m.block()) => match m.cut() {
                    super::index::Cut::Count(k) => Some(Slot::Pos(Position::new(m.block(), k))),
                    _ => None,
                },
                _ => None,
            })
            .collect();
        for s in extra {
            add(&mut set, s);
        }
        set.into_values().collect()
    }

    pub fn compare(&self, u: &SlotVector, v: &SlotVector) -> Result<Ordering> {
        self.validate(u)?;
        self.validate(v)?;
        if u == v {
            return Ok(Ordering::Equal);
        }
        for slot in self.events(&[u, v]) {
            let d = &self.value(u, &slot) - &self.value(v, &slot);
            if !d.is_zero() {
                return d.signum();
            }
        }
        Ok(Ordering::Equal)
    }

    /// First slot where `u` and `v` differ.
    pub(crate) fn first_difference(&self, u: &SlotVector, v: &SlotVector) -> Option<Slot> {
        self.events(&[u, v]).into_iter().find(|s| self.value(u, s) != self.value(v, s))
    }

    /// Parts of `u` strictly before and strictly after `slot` in hull order.
    pub fn split(&self, u: &SlotVector, slot: &Slot) -> (SlotVector, SlotVector) {
        let key = self.index.slot_key(slot);
        let mut before = Vec::new();
        let mut after = Vec::new();
        for (p, s) in u.coords() {
            let k = self.index.position_key(*p);
            if k < key {
                before.push((*p, s.clone()));
            } else if k > key {
                after.push((*p, s.clone()));
            }
        }
        let (mut tail_before, mut tail_after) = (None, None);
        if let Some(t) = u.tail() {
            if t.block < key.0 {
                tail_before = Some(t.clone());
            } else if t.block > key.0 {
                tail_after = Some(t.clone());
            } else {
                // keys 2j+1 inside an OMEGA block
                let x = key.1.max(0) as usize;
                let end_before = x / 2;
                let start_after = x.div_ceil(2);
                for j in t.start..end_before {
                    before.push((Position::new(t.block, j), t.value.clone()));
                }
                tail_after = Some(Tail { block: t.block, start: t.start.max(start_after), value: t.value.clone() });
            }
        }
        let (mut m_before, mut m_after) = (None, None);
        if let Some(m) = u.marker() {
            let k = self.index.segment_key(&m.segment);
            if k < key {
                m_before = Some(m.clone());
            } else if k > key {
                m_after = Some(m.clone());
            }
        }
        (SlotVector::new(before, tail_before, m_before), SlotVector::new(after, tail_after, m_after))
    }

    /// Projection of `u` onto the hull of S: positions in S and markers i_U with U ⊆ S.
    pub fn restrict(&self, u: &SlotVector, s: &InitialSegment) -> SlotVector {
        let slot = Slot::Mark(*s);
        let (before, _) = self.split(u, &slot);
        let m = u.marker().filter(|m| m.segment == *s).cloned();
        let mut out = before;
        if let Some(m) = m {
            out = out.with_marker(m.segment, m.value);
        }
        out
    }

    pub fn is_commensurable(&self, u: &SlotVector) -> bool {
        u.marker().is_none() && u.tail().is_none() && u.coords().values().all(|s| s.is_rational())
    }

    pub fn classify(&self, u: &SlotVector) -> Result<Classification> {
        self.validate(u)?;
        let tail = u.tail();
        for slot in self.events(&[u]) {
            match slot {
                Slot::Mark(s) => {
                    let sign = u.marker_value(&s).signum()?;
                    let unit = Scalar::from_int(if sign == Ordering::Greater { 1 } else { -1 });
                    if self.index.is_empty_segment(&s) {
                        let stratum =
                            if sign == Ordering::Greater { Stratum::InfinityMinus } else { Stratum::MinusInfinity };
                        return Ok(Classification {
                            stratum,
                            rep: SlotVector::zero().with_marker(s, unit),
                            segment: Some(s),
                        });
                    }
                    let (before, _) = self.split(u, &slot);
                    return Ok(Classification {
                        stratum: Stratum::IncRk,
                        rep: before.with_marker(s, unit),
                        segment: Some(s),
                    });
                }
                Slot::Pos(p) => {
                    let in_tail = tail.is_some_and(|t| t.block == p.block && p.offset >= t.start);
                    if !in_tail {
                        if let Some(x) = u.coords().get(&p) {
                            if !x.is_rational() {
                                return Ok(self.irrational_witness(u, p, x.clone()));
                            }
                        }
                        continue;
                    }
                    let t = tail.expect("in tail");
                    if p.offset > t.start {
                        continue;
                    }
                    if !t.value.is_rational() {
                        return Ok(self.irrational_witness(u, p, t.value.clone()));
                    }
                    let marker_later_in_block = u.marker().is_some_and(|m| {
                        m.segment.block() == t.block
                            && self.index.segment_key(&m.segment) > self.index.position_key(p)
                    });
                    if marker_later_in_block {
                        continue;
                    }
                    let end = self.index.block_start(t.block + 1);
                    let (before, _) = self.split(u, &Slot::Mark(end));
                    let rep = before.without_marker();
                    return Ok(Classification { stratum: Stratum::EqRkRat, rep, segment: Some(end) });
                }
            }
        }
        Ok(Classification { stratum: Stratum::Commensurable, rep: u.clone(), segment: None })
    }

    fn irrational_witness(&self, u: &SlotVector, p: Position, x: Scalar) -> Classification {
        let (before, _) = self.split(u, &Slot::Pos(p));
        let rep = SlotVector::new(
            before.coords().iter().map(|(q, s)| (*q, s.clone())).chain([(p, x)]),
            before.tail().cloned(),
            None,
        );
        Classification { stratum: Stratum::EqRkIrrat, rep, segment: Some(self.index.segment_after(p)) }
    }

    pub fn is_canonical(&self, u: &SlotVector) -> Result<bool> {
        Ok(self.classify(u)?.rep == *u)
    }

    pub fn sme_equivalent(&self, u: &SlotVector, v: &SlotVector) -> Result<bool> {
        Ok(self.classify(u)?.rep == self.classify(v)?.rep)
    }

    pub fn negate(&self, u: &SlotVector) -> SlotVector {
        u.neg()
    }

    pub fn predecessor_successor(&self, b: &SlotVector) -> Result<(SlotVector, SlotVector)> {
        self.validate(b)?;
        if !self.is_commensurable(b) {
            return Err(Error::domain("predecessor/successor needs a commensurable element"));
        }
        let end = self.index.whole();
        Ok((b.clone().with_marker(end, Scalar::from_int(-1)), b.clone().with_marker(end, Scalar::from_int(1))))
    }

    pub fn increases_rank(&self, u: &SlotVector) -> Result<bool> {
        Ok(matches!(
            self.classify(u)?.stratum,
            Stratum::IncRk | Stratum::MinusInfinity | Stratum::InfinityMinus
        ))
    }

    pub fn prefix_element(&self, p: Position, q: &Rational) -> Result<SlotVector> {
        self.index.check_position(p)?;
        if num_traits::Zero::is_zero(q) {
            return Err(Error::domain("prefix_element needs a nonzero value"));
        }
        Ok(SlotVector::unit(p, Scalar::from_rational(q.clone())))
    }

    pub fn minus_infinity(&self) -> SlotVector {
        SlotVector::zero().with_marker(self.index.empty(), Scalar::from_int(-1))
    }

    pub fn infinity_minus(&self) -> SlotVector {
        SlotVector::zero().with_marker(self.index.empty(), Scalar::from_int(1))
    }

    pub fn add(&self, u: &SlotVector, v: &SlotVector) -> Result<SlotVector> {
        let w = u.add(v)?;
        self.validate(&w)?;
        Ok(w)
    }
}
