//! Suprema and infima in Γ_sme, driven by the maxima of hull projections of a
//! set X and by one real ray, which is all the case analysis needs.
//!
//! With a single FIN block (normalized finite rank) the search always ends
//! with T ∈ 𝓛 and I \ T has a minimum, so only the global-max and Case 2b
//! branches can fire; OMEGA and OMEGA_OPP blocks exist to reach Cases 1 and 2a.

mod providers;

use std::fmt;

use crate::error::{Error, Result};
use crate::scalars::Scalar;
use crate::sme::{Block, Cut, Hull, InitialSegment, Position, SlotVector, Tail};

pub use providers::{Bound, CoordinateRay, FiniteSet, LowerCut, OppChain, PrefixChain, UpperCut};

/// Data of the set Y of i-th coordinates of members extending the maximal prefix.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Ray {
    Unbounded,
    Sup { a: Scalar, attained: bool },
}

/// Query interface for a nonempty X ⊂ Γ_sme.
pub trait CutProvider {
    fn global_max(&self, hull: &Hull) -> Result<Option<SlotVector>>;
    /// Maximum of the projection of X onto the hull of S, if it exists.
    fn max_at(&self, hull: &Hull, s: &InitialSegment) -> Result<Option<SlotVector>>;
    /// An offset K of an infinite block past which membership of the block's
    /// cuts in 𝓛 no longer changes and the maxima's coordinates are constant.
    fn stable_cut(&self, hull: &Hull, block: usize) -> usize;
    fn ray_at(&self, hull: &Hull, i: Position, prefix: &SlotVector) -> Result<Ray>;
    /// The provider of -X.
    fn negated(&self) -> Box<dyn CutProvider>;
    /// Some members of X, for soundness checks.
    fn sample(&self, hull: &Hull, n: usize) -> Result<Vec<SlotVector>>;
    /// A member of X strictly above `bound`, if any.
    fn member_above(&self, hull: &Hull, bound: &SlotVector) -> Result<Option<SlotVector>>;
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SupCase {
    Max,
    Case1,
    Case2a,
    Case2bUnbounded,
    Case2bIrrational,
    Case2bRational,
}

impl fmt::Display for SupCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            SupCase::Max => "max",
            SupCase::Case1 => "case1",
            SupCase::Case2a => "case2a",
            SupCase::Case2bUnbounded => "case2b-unbounded",
            SupCase::Case2bIrrational => "case2b-irrational",
            SupCase::Case2bRational => "case2b-rational",
        };
        f.write_str(s)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SupResult {
    pub value: SlotVector,
    pub case: SupCase,
}

struct Walk<'a> {
    hull: &'a Hull,
    p: &'a dyn CutProvider,
    seg: InitialSegment,
    max: SlotVector,
}

impl Walk<'_> {
    /// Queries max_at(s) and, when present, checks it restricts to the previous maximum.
    fn step(&mut self, s: InitialSegment) -> Result<bool> {
        match self.p.max_at(self.hull, &s)? {
            None => Ok(false),
            Some(m) => {
                if self.hull.restrict(&m, &self.seg) != self.max {
                    return Err(Error::contract("maxima of nested projections are not coherent"));
                }
                self.seg = s;
                self.max = m;
                Ok(true)
            }
        }
    }
}

pub fn supremum(hull: &Hull, p: &dyn CutProvider) -> Result<SupResult> {
    let result = dispatch(hull, p)?;
    log::debug!("supremum resolved by {}", result.case);
    Ok(result)
}

fn dispatch(hull: &Hull, p: &dyn CutProvider) -> Result<SupResult> {
    if let Some(m) = p.global_max(hull)? {
        return Ok(SupResult { value: m, case: SupCase::Max });
    }
    let ix = hull.index();
    let empty = ix.empty();
    let first = p
        .max_at(hull, &empty)?
        .ok_or_else(|| Error::contract("the projection onto the empty segment must have a maximum"))?;
    let mut w = Walk { hull, p, seg: empty, max: first };
    for (b, block) in ix.blocks().iter().enumerate() {
        match block {
            Block::Fin(n) => {
                for k in 1..=*n {
                    if !w.step(ix.segment(b, Cut::Count(k))?)? {
                        return case_two(hull, p, w.seg, w.max);
                    }
                }
            }
            Block::Omega => {
                let big = p.stable_cut(hull, b);
                for k in 1..=big + 1 {
                    if !w.step(ix.segment(b, Cut::Count(k))?)? {
                        return case_two(hull, p, w.seg, w.max);
                    }
                }
                let before_full = w.max.clone();
                if !w.step(ix.block_start(b + 1))? {
                    return case_one(hull, p, b, big, before_full);
                }
            }
            Block::OmegaOpp => {
                let big = p.stable_cut(hull, b).max(1);
                let start = w.seg;
                let start_max = w.max.clone();
                if p.max_at(hull, &ix.segment(b, Cut::Cofinite(big))?)?.is_none() {
                    return case_two(hull, p, start, start_max);
                }
                for k in (1..=big).rev() {
                    if !w.step(ix.segment(b, Cut::Cofinite(k))?)? {
                        return case_two(hull, p, w.seg, w.max);
                    }
                }
                if !w.step(ix.block_start(b + 1))? {
                    return case_two(hull, p, w.seg, w.max);
                }
            }
        }
    }
    Err(Error::contract("X has a maximum on the whole hull but no global maximum"))
}

/// T is a complete OMEGA block outside 𝓛: the supremum is assembled from the
/// coherent maxima, whose coordinates are constant from the stable cut on.
fn case_one(hull: &Hull, p: &dyn CutProvider, b: usize, big: usize, m: SlotVector) -> Result<SupResult> {
    let ix = hull.index();
    let next = p
        .max_at(hull, &ix.segment(b, Cut::Count(big + 2))?)?
        .ok_or_else(|| Error::contract("stable cut is not stable"))?;
    let last = Position::new(b, big);
    let tail_value = m.value_at(last);
    if next.value_at(Position::new(b, big + 1)) != tail_value {
        return Err(Error::contract("coordinates past the stable cut are not constant"));
    }
    if m.marker().is_some() {
        return Err(Error::contract("maxima inside an OMEGA block must carry no marker"));
    }
    let coords = m.coords().iter().filter(|(q, _)| **q != last).map(|(q, s)| (*q, s.clone()));
    let beta = SlotVector::new(coords, Some(Tail { block: b, start: big, value: tail_value }), None);
    let value = if hull.is_commensurable(&beta) {
        beta.with_marker(ix.block_start(b + 1), Scalar::from_int(-1))
    } else {
        let c = hull.classify(&beta)?;
        if c.rep != beta {
            return Err(Error::contract("assembled supremum is not a canonical element"));
        }
        beta
    };
    Ok(SupResult { value, case: SupCase::Case1 })
}

/// T ∈ 𝓛 with commensurable maximum x_T.
fn case_two(hull: &Hull, p: &dyn CutProvider, t: InitialSegment, x: SlotVector) -> Result<SupResult> {
    if !hull.is_commensurable(&x) {
        return Err(Error::contract("maximum of a projection without global maximum must be commensurable"));
    }
    let ix = hull.index();
    let Some(i) = ix.first_outside(&t) else {
        if ix.is_whole(&t) {
            return Err(Error::contract("X has a maximum on the whole hull but no global maximum"));
        }
        return Ok(SupResult { value: x.with_marker(t, Scalar::from_int(1)), case: SupCase::Case2a });
    };
    match p.ray_at(hull, i, &x)? {
        Ray::Unbounded => Ok(SupResult { value: x.with_marker(t, Scalar::from_int(1)), case: SupCase::Case2bUnbounded }),
        Ray::Sup { attained: true, .. } => {
            Err(Error::contract("an attained ray supremum means the next segment has a maximum"))
        }
        Ray::Sup { a, .. } => {
            let with_a = x.add(&SlotVector::unit(i, a.clone()))?;
            if a.is_rational() {
                Ok(SupResult {
                    value: with_a.with_marker(ix.segment_after(i), Scalar::from_int(-1)),
                    case: SupCase::Case2bRational,
                })
            } else {
                Ok(SupResult { value: with_a, case: SupCase::Case2bIrrational })
            }
        }
    }
}

/// inf X = -sup(-X)
pub fn infimum(hull: &Hull, p: &dyn CutProvider) -> Result<SupResult> {
    let neg = p.negated();
    let s = supremum(hull, neg.as_ref())?;
    Ok(SupResult { value: hull.negate(&s.value), case: s.case })
}
